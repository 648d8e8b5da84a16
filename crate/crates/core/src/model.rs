// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! Physical parameters, exciton–photon Hamiltonians and the dressed
//! eigensystem of a single photon sector.
//!
//! Exciton states are the J = 1 triplet, indexed by `i = M + 1`:
//! `0` is the exciton vacuum, `1` the symmetric single exciton and `2` the
//! biexciton. Composite states |i, n⟩ are ordered exciton-slow, photon-fast.
//!
//! A photon sector `n` is the three-dimensional invariant subspace
//! {|1,n⟩, |0,n+1⟩, |2,n+1⟩}; vectors and matrices on a sector always use
//! that order.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{tensor_product, ComplexMatrix};
use crate::operators::{angular_momentum_ops, fock_ops};

/// Tolerance on |E0 − E2| (relative to the block's energy scale) for the
/// dark-state closed forms.
pub const RESONANCE_TOL: f64 = 1e-9;

/// Model parameters with ħ = 1. All energies and rates share one unit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Quantum-dot band gap.
    pub e: f64,
    /// Interdot interaction.
    pub w: f64,
    /// Laser frequency.
    pub omega: f64,
    /// Real drive amplitude (coupling × field strength).
    pub a: f64,
    /// Pure-dephasing rate.
    pub gamma: f64,
    /// Coherent-state amplitude.
    pub alpha: f64,
    /// Fock-space truncation.
    pub n_max: usize,
    /// Explicit (E0, E1, E2), bypassing the band-gap formulas.
    pub energy_override: Option<[f64; 3]>,
}

impl Default for ModelParams {
    /// α = 5, W = 0.1ω, A = 0.4W in units of ω, with e = 0 so that E0 = E2.
    fn default() -> Self {
        let alpha = 5.0;
        Self { e: 0.0, w: 0.1, omega: 1.0, a: 0.04, gamma: 0.0, alpha, n_max: coherent_truncation(alpha), energy_override: None }
    }
}

impl ModelParams {
    pub fn with_energies(mut self, e0: f64, e1: f64, e2: f64) -> Self {
        self.energy_override = Some([e0, e1, e2]);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite =
            [("e", self.e), ("w", self.w), ("omega", self.omega), ("a", self.a), ("gamma", self.gamma), ("alpha", self.alpha)];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidParameter { name, reason: format!("must be finite, got {v}") });
            }
        }
        if let Some(o) = self.energy_override {
            if o.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter { name: "energy_override", reason: "must be finite".into() });
            }
        }
        if self.a < 0.0 {
            return Err(Error::InvalidParameter { name: "a", reason: format!("drive amplitude must be >= 0, got {}", self.a) });
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidParameter { name: "gamma", reason: format!("must be >= 0, got {}", self.gamma) });
        }
        if self.alpha < 0.0 {
            return Err(Error::InvalidParameter { name: "alpha", reason: format!("must be >= 0, got {}", self.alpha) });
        }
        Ok(())
    }

    /// Same physics with every energy and rate multiplied by `s`.
    pub fn rescaled(&self, s: f64) -> Self {
        Self {
            e: self.e * s,
            w: self.w * s,
            omega: self.omega * s,
            a: self.a * s,
            gamma: self.gamma * s,
            energy_override: self.energy_override.map(|o| o.map(|v| v * s)),
            ..*self
        }
    }
}

/// Fock truncation for a coherent field of amplitude `alpha`:
/// ceil(α² + 8α + 10).
pub fn coherent_truncation(alpha: f64) -> usize {
    (alpha * alpha + 8.0 * alpha + 10.0).ceil() as usize
}

/// Bare energies (E0, E1, E2).
pub fn energies(p: &ModelParams) -> (f64, f64, f64) {
    match p.energy_override {
        Some([e0, e1, e2]) => (e0, e1, e2),
        None => (p.w - p.e + 0.5 * p.omega, 2.0 * p.w - 0.5 * p.omega, p.w + p.e + 0.5 * p.omega),
    }
}

/// Coupling √(2(n+1))·A between |1,n⟩ and |0,n+1⟩ (and |2,n+1⟩).
pub fn sector_coupling(p: &ModelParams, n: usize) -> f64 {
    (2.0 * (n as f64 + 1.0)).sqrt() * p.a
}

/// Hamiltonian restricted to sector `n`.
pub fn block_hamiltonian(p: &ModelParams, n: usize) -> ComplexMatrix {
    let (e0, e1, e2) = energies(p);
    let g = C64::new(sector_coupling(p, n), 0.0);
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    ComplexMatrix::from_rows(&[vec![r(e1), g, g], vec![g, r(e0), z], vec![g, z, r(e2)]]).expect("3x3 literal")
}

/// Hamiltonian on the full truncated space, dimension 3(n_max+1).
pub fn full_hamiltonian(p: &ModelParams, n_max: usize) -> Result<ComplexMatrix> {
    if n_max < 1 {
        return Err(Error::InvalidParameter { name: "n_max", reason: "full Hamiltonian needs n_max >= 1".into() });
    }
    let (e0, e1, e2) = energies(p);
    let fock = fock_ops(n_max);
    let id_f = ComplexMatrix::identity(n_max + 1);
    let bare = tensor_product(&ComplexMatrix::from_real_diagonal(&[e0, e1, e2]), &id_f);

    // |1⟩⟨0| + |1⟩⟨2|
    let mut lower = ComplexMatrix::zeros(3);
    lower[(1, 0)] = C64::new(1.0, 0.0);
    lower[(1, 2)] = C64::new(1.0, 0.0);
    let drive = tensor_product(&lower, &fock.a).scale_real(SQRT_2 * p.a);
    let mut h = &bare + &drive;
    h += &drive.adjoint();
    Ok(h)
}

/// J_z ⊗ I on the full truncated space.
pub fn full_jz(n_max: usize) -> ComplexMatrix {
    let ops = angular_momentum_ops(1.0).expect("spin 1");
    tensor_product(&ops.jz, &ComplexMatrix::identity(n_max + 1))
}

/// A Hilbert space the dynamics can live on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    /// The invariant sector {|1,n⟩, |0,n+1⟩, |2,n+1⟩}.
    Sector(usize),
    /// All |i, m⟩ with m ≤ n_max.
    Full { n_max: usize },
}

impl Space {
    pub fn dim(&self) -> usize {
        match *self {
            Space::Sector(_) => 3,
            Space::Full { n_max } => 3 * (n_max + 1),
        }
    }

    /// Position of |exciton, photons⟩, or `None` if outside this space.
    pub fn index(&self, exciton: usize, photons: usize) -> Option<usize> {
        if exciton > 2 {
            return None;
        }
        match *self {
            Space::Sector(n) => match (exciton, photons) {
                (1, m) if m == n => Some(0),
                (0, m) if m == n + 1 => Some(1),
                (2, m) if m == n + 1 => Some(2),
                _ => None,
            },
            Space::Full { n_max } => (photons <= n_max).then_some(exciton * (n_max + 1) + photons),
        }
    }

    pub fn hamiltonian(&self, p: &ModelParams) -> Result<ComplexMatrix> {
        match *self {
            Space::Sector(n) => Ok(block_hamiltonian(p, n)),
            Space::Full { n_max } => full_hamiltonian(p, n_max),
        }
    }

    /// J_z acting on the exciton factor.
    pub fn jz(&self) -> ComplexMatrix {
        match *self {
            Space::Sector(_) => ComplexMatrix::from_real_diagonal(&[0.0, -1.0, 1.0]),
            Space::Full { n_max } => full_jz(n_max),
        }
    }

    /// Unit vector on |exciton, photons⟩.
    pub fn basis_vector(&self, exciton: usize, photons: usize) -> Option<Vec<C64>> {
        let k = self.index(exciton, photons)?;
        let mut v = vec![C64::new(0.0, 0.0); self.dim()];
        v[k] = C64::new(1.0, 0.0);
        Some(v)
    }
}

/// Dressed-state labels of one sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dressed {
    Dark,
    Plus,
    Minus,
}

impl Dressed {
    pub const ALL: [Dressed; 3] = [Dressed::Dark, Dressed::Plus, Dressed::Minus];

    pub fn index(self) -> usize {
        match self {
            Dressed::Dark => 0,
            Dressed::Plus => 1,
            Dressed::Minus => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Dressed::Dark => "d",
            Dressed::Plus => "+",
            Dressed::Minus => "-",
        }
    }
}

/// Closed-form eigensystem of one photon sector in the E0 = E2 regime.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedBlock {
    pub n: usize,
    /// √(2(n+1))·A
    pub omega1: f64,
    /// √(8Ω₁² + (E1 − E0)²), the splitting E₊ − E₋.
    pub omega: f64,
    /// Mixing angle in [0, π].
    pub theta: f64,
    pub e_d: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    /// `b[a][i]`: amplitude of exciton state `i` in dressed state `a`
    /// (rows ordered d, +, −).
    pub b: [[f64; 3]; 3],
}

impl DressedBlock {
    pub fn energy(&self, a: Dressed) -> f64 {
        match a {
            Dressed::Dark => self.e_d,
            Dressed::Plus => self.e_plus,
            Dressed::Minus => self.e_minus,
        }
    }

    /// Coefficient B_{a,i}.
    pub fn coeff(&self, a: Dressed, exciton: usize) -> f64 {
        self.b[a.index()][exciton]
    }

    /// Dressed state `a` in sector order (|1,n⟩, |0,n+1⟩, |2,n+1⟩).
    pub fn sector_row(&self, a: Dressed) -> [f64; 3] {
        let r = self.b[a.index()];
        [r[1], r[0], r[2]]
    }

    /// 3×3 real matrix whose rows are the dressed states in sector order.
    pub fn sector_rows(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(3, |a, k| C64::new(self.sector_row(Dressed::ALL[a])[k], 0.0))
    }
}

/// Dressed eigensystem of sector `n`. Requires E0 = E2.
pub fn dressed_block(p: &ModelParams, n: usize) -> Result<DressedBlock> {
    let (e0, e1, e2) = energies(p);
    let omega1 = sector_coupling(p, n);
    let detuning = e1 - e0;
    let omega = (8.0 * omega1 * omega1 + detuning * detuning).sqrt();
    let scale = e0.abs().max(e2.abs()).max(omega);
    if (e0 - e2).abs() > RESONANCE_TOL * scale {
        return Err(Error::OffResonance { e0, e2 });
    }
    let theta = (2.0 * SQRT_2 * omega1).atan2(detuning);
    let (sh, ch) = (0.5 * theta).sin_cos();
    let h = FRAC_1_SQRT_2;
    let b = [[h, 0.0, -h], [h * sh, ch, h * sh], [-h * ch, sh, -h * ch]];
    let cos_t = theta.cos();
    Ok(DressedBlock {
        n,
        omega1,
        omega,
        theta,
        e_d: e0,
        e_plus: e0 + 0.5 * omega * (cos_t + 1.0),
        e_minus: e0 + 0.5 * omega * (cos_t - 1.0),
        b,
    })
}
