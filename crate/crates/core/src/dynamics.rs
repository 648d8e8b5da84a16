// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-system evolution of the exciton–photon state and the
//! coherent-field averaged single-exciton population.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{dressed_block, Dressed, DressedBlock, ModelParams, Space};

/// Poisson tail mass above which the truncation is reported as too small.
pub const TAIL_WARNING: f64 = 1e-8;

/// Amplitudes of one photon sector: `c1` on |1,n⟩, `c0` on |0,n+1⟩,
/// `c2` on |2,n+1⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockAmplitudes {
    pub n: usize,
    pub c1: C64,
    pub c0: C64,
    pub c2: C64,
}

impl BlockAmplitudes {
    /// The ket |0, n+1⟩.
    pub fn vacuum_excitons(n: usize) -> Self {
        Self::new(n, [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
    }

    /// From a vector in sector order (|1,n⟩, |0,n+1⟩, |2,n+1⟩).
    pub fn new(n: usize, v: [C64; 3]) -> Self {
        Self { n, c1: v[0], c0: v[1], c2: v[2] }
    }

    /// Sector-order vector.
    pub fn to_array(&self) -> [C64; 3] {
        [self.c1, self.c0, self.c2]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c0.norm_sqr() + self.c2.norm_sqr()
    }

    /// ⟨E_a|c⟩ for a dressed state of this sector.
    pub fn dressed_overlap(&self, block: &DressedBlock, a: Dressed) -> C64 {
        let row = block.sector_row(a);
        self.to_array().iter().zip(row).map(|(c, b)| c * b).sum()
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self { n: self.n, c1: self.c1 * s, c0: self.c0 * s, c2: self.c2 * s }
    }
}

/// c(t) = Σ_a e^{−iE_a t} ⟨E_a|c⟩ |E_a⟩
pub fn evolve_block(block: &DressedBlock, init: &BlockAmplitudes, t: f64) -> BlockAmplitudes {
    let mut out = [C64::new(0.0, 0.0); 3];
    for a in Dressed::ALL {
        let w = init.dressed_overlap(block, a) * C64::from_polar(1.0, -block.energy(a) * t);
        for (o, b) in out.iter_mut().zip(block.sector_row(a)) {
            *o += w * b;
        }
    }
    BlockAmplitudes::new(init.n, out)
}

/// Closed-form sector amplitudes at time `t` for the initial ket |0, n+1⟩.
pub fn psi_components(p: &ModelParams, n: usize, t: f64) -> Result<BlockAmplitudes> {
    let block = dressed_block(p, n)?;
    Ok(psi_from_block(&block, t))
}

pub(crate) fn psi_from_block(block: &DressedBlock, t: f64) -> BlockAmplitudes {
    let (sh, ch) = (0.5 * block.theta).sin_cos();
    let ep = C64::from_polar(1.0, -block.e_plus * t);
    let em = C64::from_polar(1.0, -block.e_minus * t);
    let ed = C64::from_polar(1.0, -block.e_d * t);
    let bright = (ep * (sh * sh) + em * (ch * ch)) * 0.5;
    let dark = ed * 0.5;
    BlockAmplitudes { n: block.n, c1: (ep - em) * (FRAC_1_SQRT_2 * sh * ch), c0: bright + dark, c2: bright - dark }
}

/// Poisson probabilities P(m) = e^{−α²} α^{2m} / m! for m = 0 … m_max.
pub fn poisson_weights(alpha: f64, m_max: usize) -> Vec<f64> {
    let mean = alpha * alpha;
    if mean == 0.0 {
        let mut w = vec![0.0; m_max + 1];
        w[0] = 1.0;
        return w;
    }
    let ln_mean = mean.ln();
    let mut ln_p = -mean;
    let mut w = Vec::with_capacity(m_max + 1);
    w.push(ln_p.exp());
    for m in 1..=m_max {
        ln_p += ln_mean - (m as f64).ln();
        w.push(ln_p.exp());
    }
    w
}

/// Σ_{m > m_max} P(m).
pub fn poisson_tail(alpha: f64, m_max: usize) -> f64 {
    let mean = alpha * alpha;
    if mean == 0.0 {
        return 0.0;
    }
    let ln_mean = mean.ln();
    let mut ln_p = -mean;
    for m in 1..=m_max {
        ln_p += ln_mean - (m as f64).ln();
    }
    let mut tail = 0.0;
    let mut m = m_max + 1;
    loop {
        ln_p += ln_mean - (m as f64).ln();
        let term = ln_p.exp();
        tail += term;
        if (m as f64) > mean && term < 1e-18 * tail.max(f64::MIN_POSITIVE) {
            break;
        }
        if term == 0.0 && (m as f64) > mean {
            break;
        }
        m += 1;
    }
    tail
}

/// The exciton–photon state restricted to the truncated Fock space: one
/// amplitude block per sector `n < n_max` plus the uncoupled |0,0⟩.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    pub vacuum: C64,
    pub sectors: Vec<BlockAmplitudes>,
}

impl JointState {
    /// Excitons in |0⟩, field in the coherent state |α⟩ (real amplitude).
    pub fn coherent(alpha: f64, n_max: usize) -> Self {
        let w = poisson_weights(alpha, n_max);
        let vacuum = C64::new(w[0].sqrt(), 0.0);
        let sectors = (0..n_max).map(|n| BlockAmplitudes::vacuum_excitons(n).scaled(C64::new(w[n + 1].sqrt(), 0.0))).collect();
        Self { vacuum, sectors }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.vacuum.norm_sqr() + self.sectors.iter().map(BlockAmplitudes::norm_sqr).sum::<f64>()
    }

    /// Exact evolution; requires the E0 = E2 regime for every sector.
    pub fn evolve(&self, p: &ModelParams, t: f64) -> Result<Self> {
        let (e0, _, _) = crate::model::energies(p);
        let sectors = self.sectors.iter().map(|c| Ok(evolve_block(&dressed_block(p, c.n)?, c, t))).collect::<Result<Vec<_>>>()?;
        Ok(Self { vacuum: self.vacuum * C64::from_polar(1.0, -e0 * t), sectors })
    }

    /// Σ_n |c1^{(n)}|²
    pub fn exciton_population(&self) -> f64 {
        self.sectors.iter().map(|c| c.c1.norm_sqr()).sum()
    }

    /// Amplitude vector on `Space::Full { n_max }` where `n_max` equals
    /// the number of sectors.
    pub fn to_full_vector(&self) -> Vec<C64> {
        let n_max = self.sectors.len();
        let sp = Space::Full { n_max };
        let mut v = vec![C64::new(0.0, 0.0); sp.dim()];
        v[sp.index(0, 0).expect("vacuum")] = self.vacuum;
        for c in &self.sectors {
            v[sp.index(1, c.n).expect("in range")] = c.c1;
            v[sp.index(0, c.n + 1).expect("in range")] = c.c0;
            v[sp.index(2, c.n + 1).expect("in range")] = c.c2;
        }
        v
    }
}

/// Single-exciton population of a coherent-field average, sampled on a
/// time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationSeries {
    pub times: Vec<f64>,
    pub p1: Vec<f64>,
    /// Poisson mass beyond the truncation.
    pub tail_mass: f64,
}

impl PopulationSeries {
    pub fn tail_warning(&self) -> bool {
        self.tail_mass > TAIL_WARNING
    }
}

/// P1(t) = Σ_n P(n+1)·|c1^{(n)}(t)|² for excitons starting in |0⟩ and a
/// coherent field of amplitude `p.alpha`, truncated at `p.n_max`.
pub fn exciton_population(p: &ModelParams, times: &[f64]) -> Result<PopulationSeries> {
    p.validate()?;
    let weights = poisson_weights(p.alpha, p.n_max);
    let blocks = (0..p.n_max)
        .filter(|&n| weights[n + 1] > 0.0)
        .map(|n| Ok((weights[n + 1], dressed_block(p, n)?)))
        .collect::<Result<Vec<_>>>()?;
    let p1 = times
        .iter()
        .map(|&t| {
            let s: f64 = blocks.iter().map(|(w, b)| w * psi_from_block(b, t).c1.norm_sqr()).sum();
            s.clamp(0.0, 1.0)
        })
        .collect();
    Ok(PopulationSeries { times: times.to_vec(), p1, tail_mass: poisson_tail(p.alpha, p.n_max) })
}

/// Sector whose photon number n+1 is closest to the mean α².
pub fn mean_sector(alpha: f64) -> usize {
    ((alpha * alpha).round() as usize).max(1) - 1
}

/// 2π/Ω of the sector at the mean photon number.
pub fn mean_rabi_period(p: &ModelParams) -> Result<f64> {
    rabi_period(p, mean_sector(p.alpha))
}

pub fn rabi_period(p: &ModelParams, n: usize) -> Result<f64> {
    let b = dressed_block(p, n)?;
    if b.omega <= 0.0 {
        return Err(Error::InvalidParameter { name: "a", reason: "Rabi splitting vanishes".into() });
    }
    Ok(TAU / b.omega)
}

/// Largest uniform step resolving the fastest Rabi oscillation in the
/// truncated space with 40 samples per period.
pub fn max_sampling_step(p: &ModelParams) -> Result<f64> {
    Ok(rabi_period(p, p.n_max.max(1) - 1)? / 40.0)
}

/// Uniform grid 0, Δ, …, t_max with `steps` intervals.
pub fn uniform_grid(t_max: f64, steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps).map(|k| t_max * k as f64 / steps as f64).collect()
}

/// Collapse and revival times of an oscillating population.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollapseMetrics {
    /// Envelope of the first window.
    pub initial_peak: f64,
    pub t_collapse: Option<f64>,
    pub t_revival: Option<f64>,
    pub revival_peak: Option<f64>,
}

/// Envelope-based collapse/revival detection.
///
/// The envelope at sample `i` is the peak-to-peak spread of `values` over
/// the window of length `window` starting there, stamped at the window
/// centre. Collapse is the first stamp where the envelope falls below 20%
/// of the initial envelope and stays below for three further windows.
/// Revival is the first subsequent envelope maximum above 50% of the
/// initial envelope. `times` must be uniformly spaced.
pub fn collapse_metrics(times: &[f64], values: &[f64], window: f64) -> CollapseMetrics {
    let none = CollapseMetrics { initial_peak: 0.0, t_collapse: None, t_revival: None, revival_peak: None };
    let len = times.len().min(values.len());
    if len < 2 || !(window > 0.0) {
        return none;
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) {
        return none;
    }
    let k = ((window / dt).round() as usize).max(1);
    if len <= k {
        return none;
    }
    let env: Vec<f64> = (0..len - k)
        .map(|i| {
            let w = &values[i..=i + k];
            let hi = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = w.iter().cloned().fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .collect();
    let stamp = |i: usize| times[i] + 0.5 * window;
    let peak = env[0];
    let mut out = CollapseMetrics { initial_peak: peak, ..none };
    if !(peak > 0.0) {
        return out;
    }
    let hold = 3 * k;
    let low = 0.2 * peak;
    let Some(ic) = (0..env.len().saturating_sub(hold)).find(|&i| env[i..=i + hold].iter().all(|&e| e < low)) else {
        return out;
    };
    out.t_collapse = Some(stamp(ic));
    let high = 0.5 * peak;
    if let Some(mut j) = (ic..env.len()).find(|&j| env[j] >= high) {
        while j + 1 < env.len() && env[j + 1] >= env[j] {
            j += 1;
        }
        out.t_revival = Some(stamp(j));
        out.revival_peak = Some(env[j]);
    }
    out
}
