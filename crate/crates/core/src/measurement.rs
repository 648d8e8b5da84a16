// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! Photon-number post-selection, Bell-basis decomposition of the exciton
//! state, and pulse-length design.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64 as C64;

use crate::dynamics::{psi_from_block, BlockAmplitudes, JointState};
use crate::error::{Error, Result};
use crate::model::{dressed_block, DressedBlock, ModelParams};

/// Below this P₋ the ratio P₊/P₋ is reported as +∞.
pub const RATIO_FLOOR: f64 = 1e-15;

/// Unnormalized exciton state left after detecting a photon number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PostSelected {
    /// Amplitude on exciton |0⟩ (|00⟩).
    pub phi0: C64,
    /// Amplitude on exciton |2⟩ (|11⟩).
    pub phi2: C64,
    /// Amplitude on the single exciton |1⟩.
    pub residual1: C64,
    /// Probability of the detected photon number.
    pub success_prob: f64,
}

impl PostSelected {
    fn new(phi0: C64, phi2: C64, residual1: C64) -> Self {
        let success_prob = phi0.norm_sqr() + phi2.norm_sqr() + residual1.norm_sqr();
        Self { phi0, phi2, residual1, success_prob }
    }

    /// |⟨B₋|φ⟩|² / ⟨φ|φ⟩ with |B₋⟩ = (|0⟩ − |2⟩)/√2.
    pub fn fidelity_minus(&self) -> f64 {
        if self.success_prob == 0.0 {
            return 0.0;
        }
        ((self.phi0 - self.phi2) * FRAC_1_SQRT_2).norm_sqr() / self.success_prob
    }
}

/// Condition a sector state on detecting `photons` photons.
///
/// For the usual outcome `photons = n + 1` this keeps `c0, c2` and drops the
/// |1,n⟩ branch.
pub fn post_select(state: &BlockAmplitudes, photons: usize) -> PostSelected {
    let z = C64::new(0.0, 0.0);
    if photons == state.n + 1 {
        PostSelected::new(state.c0, state.c2, z)
    } else if photons == state.n {
        PostSelected::new(z, z, state.c1)
    } else {
        PostSelected::new(z, z, z)
    }
}

/// Condition a multi-sector state on detecting `photons` photons.
pub fn post_select_joint(state: &JointState, photons: usize) -> PostSelected {
    let z = C64::new(0.0, 0.0);
    let (phi0, phi2) = match photons {
        0 => (state.vacuum, z),
        m => state.sectors.get(m - 1).map_or((z, z), |s| (s.c0, s.c2)),
    };
    let residual1 = state.sectors.get(photons).map_or(z, |s| s.c1);
    PostSelected::new(phi0, phi2, residual1)
}

/// Components along (|00⟩ ± |11⟩)/√2 and their joint probabilities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellDecomposition {
    pub amp_plus: C64,
    /// Real and nonnegative after phase fixing.
    pub amp_minus: C64,
    pub p_plus: f64,
    pub p_minus: f64,
    /// P₊/P₋, or +∞ when P₋ < [`RATIO_FLOOR`].
    pub ratio: f64,
}

/// Project a post-selected state onto the two Bell states.
///
/// The common phase is chosen so that `amp_minus` is real and nonnegative;
/// for the dark-state protocol this removes the e^{−iE_d t} factor.
pub fn bell_decompose(ps: &PostSelected) -> BellDecomposition {
    let mut amp_plus = (ps.phi0 + ps.phi2) * FRAC_1_SQRT_2;
    let mut amp_minus = (ps.phi0 - ps.phi2) * FRAC_1_SQRT_2;
    let m = amp_minus.norm();
    if m > 0.0 {
        let phase = amp_minus.conj() / m;
        amp_plus *= phase;
        amp_minus = C64::new(m, 0.0);
    }
    let p_plus = amp_plus.norm_sqr();
    let p_minus = amp_minus.norm_sqr();
    let ratio = if p_minus < RATIO_FLOOR { f64::INFINITY } else { p_plus / p_minus };
    BellDecomposition { amp_plus, amp_minus, p_plus, p_minus, ratio }
}

/// Outcome of the pulse-length search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSolution {
    /// Pulse length minimizing P₊.
    pub t: f64,
    pub residual_p_plus: f64,
    /// cos(E₊T)·sin²(θ/2) + cos(E₋T)·cos²(θ/2), energies measured from E_d.
    pub paper_condition_residual: f64,
    /// Fidelity of the normalized output to (|0⟩ − |2⟩)/√2.
    pub fidelity: f64,
}

/// Block with the dark energy shifted to zero. Observables are unchanged and
/// phases stay small for long pulses.
fn relative_block(p: &ModelParams, n: usize) -> Result<DressedBlock> {
    let mut b = dressed_block(p, n)?;
    b.e_plus -= b.e_d;
    b.e_minus -= b.e_d;
    b.e_d = 0.0;
    Ok(b)
}

fn p_plus_at(block: &DressedBlock, t: f64) -> f64 {
    bell_decompose(&post_select(&psi_from_block(block, t), block.n + 1)).p_plus
}

const GRID_PER_BEAT: f64 = 200.0;
const GOLDEN_REL_WIDTH: f64 = 1e-12;

/// Shortest pulse in `window` that minimizes P₊ for the initial ket
/// |0, n+1⟩.
///
/// Scans at (2π/Ω)/200, takes the earliest local minimum that attains the
/// scan's lowest value, and refines it by golden-section search.
pub fn solve_pulse_length(p: &ModelParams, n: usize, window: (f64, f64)) -> Result<PulseSolution> {
    p.validate()?;
    let block = relative_block(p, n)?;
    let (start, end) = window;
    if !(block.omega > 0.0) {
        return Err(Error::InvalidParameter { name: "a", reason: "Rabi splitting vanishes; no beat to time".into() });
    }
    let beat = TAU / block.omega;
    if !(start >= 0.0) || !(end > start) || end - start < 2.0 * beat {
        return Err(Error::WindowTooShort { start, end, required: 2.0 * beat });
    }

    let steps = ((end - start) / (beat / GRID_PER_BEAT)).ceil() as usize;
    let grid: Vec<f64> = (0..=steps).map(|k| start + (end - start) * k as f64 / steps as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| p_plus_at(&block, t)).collect();

    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    // A flat P₊ has no meaningful minimum.
    if hi - lo <= 1e-12 * hi.max(1e-300) {
        return Err(Error::DegenerateWindow { start, end });
    }
    let minima: Vec<usize> = (1..steps)
        .filter(|&k| vals[k] <= vals[k - 1] && vals[k] <= vals[k + 1] && vals[k] < vals[k - 1].max(vals[k + 1]))
        .collect();
    let lowest = minima.iter().map(|&k| vals[k]).fold(f64::INFINITY, f64::min);
    let Some(&k) = minima.iter().find(|&&k| vals[k] <= lowest + 1e-9 * hi) else {
        return Err(Error::DegenerateWindow { start, end });
    };

    let t = golden_section(|t| p_plus_at(&block, t), grid[k - 1], grid[k + 1]);
    let residual_p_plus = p_plus_at(&block, t);
    let (sh, ch) = (0.5 * block.theta).sin_cos();
    let paper_condition_residual = (block.e_plus * t).cos() * sh * sh + (block.e_minus * t).cos() * ch * ch;
    let fidelity = post_select(&psi_from_block(&block, t), n + 1).fidelity_minus();
    Ok(PulseSolution { t, residual_p_plus, paper_condition_residual, fidelity })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= GOLDEN_REL_WIDTH * (0.5 * (a + b)).abs().max(f64::MIN_POSITIVE) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        c
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::psi_components;
    use std::f64::consts::PI;

    fn resonant(a: f64) -> ModelParams {
        ModelParams { a, ..ModelParams::default() }.with_energies(0.6, 0.6, 0.6)
    }

    #[test]
    fn initial_state_selection() {
        let ps = post_select(&BlockAmplitudes::vacuum_excitons(4), 5);
        assert_eq!(ps.phi0, C64::new(1.0, 0.0));
        assert_eq!(ps.success_prob, 1.0);
        let b = bell_decompose(&ps);
        assert!((b.p_plus - 0.5).abs() < 1e-15);
        assert!((b.p_minus - 0.5).abs() < 1e-15);
        assert!((b.ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn half_success_at_half_rabi_period() {
        let p = resonant(0.04);
        let b = dressed_block(&p, 10).unwrap();
        let c = psi_components(&p, 10, PI / b.omega).unwrap();
        assert!((post_select(&c, 11).success_prob - 0.5).abs() < 1e-14);
    }

    #[test]
    fn norm_split() {
        let p = ModelParams { a: 0.1, ..ModelParams::default() }.with_energies(0.0, 0.37, 0.0);
        for t in [0.3, 4.0, 91.0] {
            let c = psi_components(&p, 3, t).unwrap();
            let ps = post_select(&c, 4);
            assert!((ps.success_prob + c.c1.norm_sqr() - 1.0).abs() < 1e-12);
            assert_eq!(ps.residual1, C64::new(0.0, 0.0));
            let bd = bell_decompose(&ps);
            assert!((bd.p_plus + bd.p_minus - ps.success_prob).abs() < 1e-12);
            assert!((bd.p_minus - 0.5).abs() < 1e-12);
            assert_eq!(bd.amp_minus.im, 0.0);
        }
    }

    #[test]
    fn other_outcomes() {
        let c = BlockAmplitudes::new(2, [C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0)]);
        let ps = post_select(&c, 2);
        assert_eq!(ps.residual1, C64::new(0.6, 0.0));
        assert!((ps.success_prob - 0.36).abs() < 1e-15);
        assert_eq!(post_select(&c, 7).success_prob, 0.0);
    }

    #[test]
    fn infinite_ratio_marker() {
        let ps = PostSelected::new(C64::new(0.5, 0.0), C64::new(0.5, 0.0), C64::new(0.0, 0.0));
        assert_eq!(bell_decompose(&ps).ratio, f64::INFINITY);
    }

    #[test]
    fn resonant_ratio_law() {
        let p = resonant(0.04);
        let b = dressed_block(&p, 10).unwrap();
        for k in 0..50 {
            let t = 3.7 * k as f64;
            let bd = bell_decompose(&post_select(&psi_components(&p, 10, t).unwrap(), 11));
            assert!((bd.ratio - (0.5 * b.omega * t).cos().powi(2)).abs() < 1e-10);
        }
    }

    #[test]
    fn resonant_pulse() {
        let p = resonant(0.04);
        let b = dressed_block(&p, 10).unwrap();
        let beat = TAU / b.omega;
        let s = solve_pulse_length(&p, 10, (0.0, 3.0 * beat)).unwrap();
        assert!((s.t - PI / b.omega).abs() < 1e-9 * s.t);
        assert!(s.residual_p_plus <= 1e-12);
        assert!((s.fidelity - 1.0).abs() < 1e-12);
        assert!(s.paper_condition_residual.abs() < 1e-9);
    }

    #[test]
    fn detuned_pulse_floor() {
        let p = ModelParams { a: 0.04, ..ModelParams::default() }.with_energies(0.6, 0.9, 0.6);
        let b = dressed_block(&p, 5).unwrap();
        let beat = TAU / b.omega;
        let s = solve_pulse_length(&p, 5, (0.0, 2.5 * beat)).unwrap();
        let (sh, ch) = (0.5 * b.theta).sin_cos();
        let want = 0.5 * (sh * sh - ch * ch).powi(2);
        assert!((s.residual_p_plus - want).abs() < 1e-12);
        assert!((s.t * b.omega - PI).abs() < 1e-6);
    }

    #[test]
    fn pulse_grows_as_photons_drop() {
        let p = resonant(0.04);
        let beat = |n| TAU / dressed_block(&p, n).unwrap().omega;
        let t10 = solve_pulse_length(&p, 10, (0.0, 3.0 * beat(10))).unwrap().t;
        let t5 = solve_pulse_length(&p, 5, (0.0, 3.0 * beat(5))).unwrap().t;
        assert!((t5 / t10 - (11.0f64 / 6.0).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn window_checks() {
        let p = resonant(0.04);
        let beat = TAU / dressed_block(&p, 3).unwrap().omega;
        assert!(matches!(solve_pulse_length(&p, 3, (0.0, beat)), Err(Error::WindowTooShort { .. })));
        assert!(matches!(solve_pulse_length(&p, 3, (-1.0, 3.0 * beat)), Err(Error::WindowTooShort { .. })));
    }

    #[test]
    fn decoupled_window_is_degenerate() {
        // A = 0 and E1 ≠ E0: Ω = |E1 − E0| but P₊ stays ½.
        let p = ModelParams { a: 0.0, ..ModelParams::default() }.with_energies(0.0, 1.0, 0.0);
        let beat = TAU;
        assert!(matches!(solve_pulse_length(&p, 3, (0.0, 3.0 * beat)), Err(Error::DegenerateWindow { .. })));
    }

    #[test]
    fn pulse_scale_invariance() {
        let p = ModelParams { a: 0.04, ..ModelParams::default() }.with_energies(0.6, 0.75, 0.6);
        let b = dressed_block(&p, 8).unwrap();
        let beat = TAU / b.omega;
        let s1 = solve_pulse_length(&p, 8, (0.0, 3.0 * beat)).unwrap();
        for k in [1e-3, 7.0, 1e15] {
            let q = p.rescaled(k);
            let s2 = solve_pulse_length(&q, 8, (0.0, 3.0 * beat / k)).unwrap();
            assert!((s2.t * b.omega * k - s1.t * b.omega).abs() < 1e-7, "{k}");
        }
    }
}
