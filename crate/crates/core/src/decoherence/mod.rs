// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! Pure J_z dephasing.
//!
//! The reduced exciton–photon density matrix obeys
//!
//! ```text
//! dρ/dt = −i[H, ρ] − Γ [J_z, [J_z, ρ]]
//! ```
//!
//! which is solved directly ([`integrate_master`]) and as a power series in
//! Γ ([`perturbative_hierarchy`]). [`rho1_dressed_elements`] evaluates the
//! first-order correction in the dressed basis of one sector and
//! [`post_selected_output`] conditions a density matrix on a photon count.

mod dressed;
mod hierarchy;
pub mod ode;
pub mod quadrature;

pub use dressed::{rho1_dressed_elements, DressedRho1};
pub use hierarchy::{expectation_expanded, perturbative_hierarchy, PerturbationSeries};

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Deref;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::model::{ModelParams, Space};
use ode::Tolerances;

/// Eigenvalues below this are reported as a positivity violation.
pub const POSITIVITY_TOL: f64 = -1e-8;

/// A density operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Self {
        Self(m)
    }

    /// |ψ⟩⟨ψ|
    pub fn pure(psi: &[C64]) -> Self {
        Self(ComplexMatrix::outer(psi, psi).expect("same vector"))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn diagnose(&self) -> Result<Physicality> {
        let m = &self.0;
        let hermiticity = m.hermiticity_residual();
        let trace_error = (m.trace() - C64::new(1.0, 0.0)).norm();
        let sym = (&m.adjoint() + m).scale_real(0.5);
        let min_eigenvalue = hermitian_eig(&sym)?.values.first().copied().unwrap_or(0.0);
        Ok(Physicality { hermiticity, trace_error, min_eigenvalue })
    }
}

impl Deref for DensityMatrix {
    type Target = ComplexMatrix;
    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// How far a matrix is from being a physical state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Physicality {
    pub hermiticity: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl Physicality {
    pub fn positivity_violated(&self) -> bool {
        self.min_eigenvalue < POSITIVITY_TOL
    }
}

/// [J_z, [J_z, ρ]]
pub fn dephasing_term(rho: &ComplexMatrix, jz: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != jz.dim() {
        return Err(Error::DimensionMismatch { expected: jz.dim(), found: rho.dim() });
    }
    Ok(Dephaser::new(jz).apply(rho))
}

/// [J_z, [J_z, ·]] with a fast path for diagonal J_z, where element (i, j)
/// is multiplied by (m_i − m_j)².
#[derive(Clone, Debug)]
pub(crate) enum Dephaser {
    Diagonal(ComplexMatrix),
    General(ComplexMatrix),
}

impl Dephaser {
    pub(crate) fn new(jz: &ComplexMatrix) -> Self {
        if jz.is_diagonal() {
            let m = jz.diagonal();
            Dephaser::Diagonal(ComplexMatrix::from_fn(jz.dim(), |i, j| {
                let d = m[i] - m[j];
                d * d
            }))
        } else {
            Dephaser::General(jz.clone())
        }
    }

    pub(crate) fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Dephaser::Diagonal(w) => w.hadamard(rho),
            Dephaser::General(jz) => jz.commutator(&jz.commutator(rho)),
        }
    }
}

/// dρ/dt = −i[H, ρ] − Γ[J_z, [J_z, ρ]]
#[derive(Clone, Debug)]
pub struct MasterEquation {
    pub hamiltonian: ComplexMatrix,
    pub jz: ComplexMatrix,
    pub gamma: f64,
}

impl MasterEquation {
    pub fn new(hamiltonian: ComplexMatrix, jz: ComplexMatrix, gamma: f64) -> Result<Self> {
        if hamiltonian.dim() != jz.dim() {
            return Err(Error::DimensionMismatch { expected: hamiltonian.dim(), found: jz.dim() });
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter { name: "gamma", reason: format!("must be finite and >= 0, got {gamma}") });
        }
        let res = hamiltonian.hermiticity_residual();
        if res > 1e-12 * hamiltonian.max_abs() {
            return Err(Error::NotHermitian { residual: res });
        }
        Ok(Self { hamiltonian, jz, gamma })
    }

    /// Master equation for `params` on the given space.
    pub fn for_space(params: &ModelParams, space: Space) -> Result<Self> {
        params.validate()?;
        Self::new(space.hamiltonian(params)?, space.jz(), params.gamma)
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.hamiltonian.clone(), self.jz.clone(), gamma)
    }
}

/// Density-matrix trajectory on a time grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ComplexMatrix>,
}

impl Trajectory {
    /// max |tr ρ(t) − 1| over the grid.
    pub fn max_trace_error(&self) -> f64 {
        self.states.iter().map(|r| (r.trace() - C64::new(1.0, 0.0)).norm()).fold(0.0, f64::max)
    }
}

/// Solve the master equation with the adaptive Dormand–Prince pair
/// (rtol 1e-10, atol 1e-12 by default).
pub fn integrate_master(eq: &MasterEquation, rho0: &DensityMatrix, t_grid: &[f64]) -> Result<Trajectory> {
    integrate_master_with(eq, rho0, t_grid, Tolerances::default())
}

pub fn integrate_master_with(eq: &MasterEquation, rho0: &DensityMatrix, t_grid: &[f64], tol: Tolerances) -> Result<Trajectory> {
    if rho0.dim() != eq.dim() {
        return Err(Error::DimensionMismatch { expected: eq.dim(), found: rho0.dim() });
    }
    check_grid(t_grid)?;
    let deph = Dephaser::new(&eq.jz);
    let minus_i = C64::new(0.0, -1.0);
    let g = eq.gamma;
    let rhs = |rho: &ComplexMatrix| {
        let mut d = eq.hamiltonian.commutator(rho).scale(minus_i);
        if g != 0.0 {
            d.axpy(C64::new(-g, 0.0), &deph.apply(rho));
        }
        d
    };
    let states = ode::integrate(rhs, rho0.matrix(), t_grid, tol)?;
    Ok(Trajectory { times: t_grid.to_vec(), states })
}

pub(crate) fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter { name: "t_grid", reason: "times must be finite and nondecreasing".into() });
    }
    Ok(())
}

/// Exciton state left after detecting `photons` photons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PostSelectedOutput {
    /// ⟨i, m|ρ|j, m⟩ for i, j ∈ {0, 2}: `[[ρ00, ρ02], [ρ20, ρ22]]`.
    pub rho_e: [[C64; 2]; 2],
    /// ⟨B₊|ρ_e|B₊⟩, unnormalized.
    pub p_plus: f64,
    /// ⟨B₋|ρ_e|B₋⟩, unnormalized.
    pub p_minus: f64,
    /// Largest |⟨1, m|ρ|·, m⟩| left in the projected block.
    pub residual_one: f64,
}

/// Tr_field(|m⟩⟨m| ρ) restricted to {|0⟩, |2⟩}, and its Bell populations.
pub fn post_selected_output(rho: &ComplexMatrix, space: Space, photons: usize) -> Result<PostSelectedOutput> {
    if rho.dim() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: rho.dim() });
    }
    let z = C64::new(0.0, 0.0);
    let idx = [space.index(0, photons), space.index(1, photons), space.index(2, photons)];
    let el = |i: Option<usize>, j: Option<usize>| match (i, j) {
        (Some(i), Some(j)) => rho[(i, j)],
        _ => z,
    };
    let rho_e = [[el(idx[0], idx[0]), el(idx[0], idx[2])], [el(idx[2], idx[0]), el(idx[2], idx[2])]];
    let residual_one = [idx[0], idx[1], idx[2]].iter().map(|&j| el(idx[1], j).norm()).fold(0.0, f64::max);
    let bell = |sign: f64| {
        let v = [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(sign * FRAC_1_SQRT_2, 0.0)];
        let mut acc = z;
        for i in 0..2 {
            for j in 0..2 {
                acc += v[i].conj() * rho_e[i][j] * v[j];
            }
        }
        acc.re
    };
    Ok(PostSelectedOutput { rho_e, p_plus: bell(1.0), p_minus: bell(-1.0), residual_one })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dressed_block, Space};

    fn ket(dim: usize, k: usize) -> Vec<C64> {
        (0..dim).map(|i| C64::new(if i == k { 1.0 } else { 0.0 }, 0.0)).collect()
    }

    #[test]
    fn diagonal_state_is_not_dephased() {
        let jz = Space::Full { n_max: 2 }.jz();
        let rho = ComplexMatrix::from_real_diagonal(&[0.1, 0.2, 0.0, 0.3, 0.1, 0.05, 0.1, 0.1, 0.05]);
        assert_eq!(dephasing_term(&rho, &jz).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn vacuum_biexciton_coherence_weight() {
        // exciton-only J_z, ρ = |0⟩⟨2|
        let jz = ComplexMatrix::from_real_diagonal(&[-1.0, 0.0, 1.0]);
        let mut rho = ComplexMatrix::zeros(3);
        rho[(0, 2)] = C64::new(1.0, 0.0);
        let d = dephasing_term(&rho, &jz).unwrap();
        let mut want = ComplexMatrix::zeros(3);
        want[(0, 2)] = C64::new(4.0, 0.0);
        assert!(d.max_abs_diff(&want) < 1e-15);
        // The general commutator path agrees with the diagonal fast path.
        let general = jz.commutator(&jz.commutator(&rho));
        assert!(general.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn dephasing_is_traceless() {
        let jz = Space::Full { n_max: 1 }.jz();
        let rho = ComplexMatrix::from_fn(6, |i, j| C64::new((i + 2 * j) as f64 * 0.1, (i as f64 - j as f64) * 0.07));
        let herm = (&rho + &rho.adjoint()).scale_real(0.5);
        assert!(dephasing_term(&herm, &jz).unwrap().trace().norm() < 1e-13);
    }

    #[test]
    fn dimension_mismatch() {
        let r = dephasing_term(&ComplexMatrix::zeros(2), &ComplexMatrix::zeros(3));
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn undriven_dephasing_matches_closed_form() {
        let p = ModelParams { a: 0.0, gamma: 0.3, ..ModelParams::default() }.with_energies(0.2, -0.4, 0.9);
        let sp = Space::Sector(2);
        let eq = MasterEquation::for_space(&p, sp).unwrap();
        let psi: Vec<C64> = [0.5, 0.6, 0.0].iter().zip([0.1, -0.3, 0.53]).map(|(&r, i)| C64::new(r, i)).collect();
        let nrm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi: Vec<C64> = psi.iter().map(|z| z / nrm).collect();
        let rho0 = DensityMatrix::pure(&psi);
        let times: Vec<f64> = (0..=20).map(|k| k as f64 * 0.5).collect();
        let tr = integrate_master(&eq, &rho0, &times).unwrap();
        let e = [-0.4, 0.2, 0.9];
        let m: [f64; 3] = [0.0, -1.0, 1.0];
        for (t, r) in times.iter().zip(&tr.states) {
            for i in 0..3 {
                for j in 0..3 {
                    let want = rho0[(i, j)] * C64::from_polar((-0.3 * (m[i] - m[j]).powi(2) * t).exp(), -(e[i] - e[j]) * t);
                    assert!((r[(i, j)] - want).norm() < 1e-8);
                }
            }
        }
        assert!(tr.max_trace_error() < 1e-9);
    }

    #[test]
    fn post_selection_of_initial_ket() {
        let sp = Space::Sector(4);
        let rho = DensityMatrix::pure(&sp.basis_vector(0, 5).unwrap());
        let out = post_selected_output(&rho, sp, 5).unwrap();
        assert!((out.p_plus - 0.5).abs() < 1e-15);
        assert!((out.p_minus - 0.5).abs() < 1e-15);
        assert_eq!(out.residual_one, 0.0);
    }

    #[test]
    fn post_selection_on_full_space() {
        let sp = Space::Full { n_max: 3 };
        let mut psi = vec![C64::new(0.0, 0.0); sp.dim()];
        psi[sp.index(0, 2).unwrap()] = C64::new(0.6, 0.0);
        psi[sp.index(2, 2).unwrap()] = C64::new(-0.6, 0.0);
        psi[sp.index(1, 1).unwrap()] = C64::new(0.0, 0.28f64.sqrt());
        let out = post_selected_output(&DensityMatrix::pure(&psi), sp, 2).unwrap();
        assert!((out.p_minus - 0.72).abs() < 1e-14);
        assert!(out.p_plus.abs() < 1e-15);
        assert_eq!(out.residual_one, 0.0);
    }

    #[test]
    fn positivity_diagnostic() {
        let ok = DensityMatrix::pure(&ket(3, 1)).diagnose().unwrap();
        assert!(!ok.positivity_violated());
        assert!(ok.trace_error < 1e-15);
        let bad = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.1, -0.1])).diagnose().unwrap();
        assert!(bad.positivity_violated());
    }

    #[test]
    fn closed_system_limit() {
        let p = ModelParams { a: 0.3, gamma: 0.0, ..ModelParams::default() }.with_energies(0.1, 0.4, 0.1);
        let n = 3;
        let eq = MasterEquation::for_space(&p, Space::Sector(n)).unwrap();
        let sp = Space::Sector(n);
        let rho0 = DensityMatrix::pure(&sp.basis_vector(0, n + 1).unwrap());
        let times: Vec<f64> = (0..=10).map(|k| k as f64 * 3.0).collect();
        let tr = integrate_master(&eq, &rho0, &times).unwrap();
        let b = dressed_block(&p, n).unwrap();
        for (t, r) in times.iter().zip(&tr.states) {
            let c = crate::dynamics::psi_from_block(&b, *t).to_array();
            let want = ComplexMatrix::outer(&c, &c).unwrap();
            assert!(r.max_abs_diff(&want) < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_equation() {
        let h = ComplexMatrix::identity(3);
        assert!(MasterEquation::new(h.clone(), ComplexMatrix::zeros(2), 0.1).is_err());
        assert!(MasterEquation::new(h.clone(), ComplexMatrix::zeros(3), -0.1).is_err());
        let mut nh = h.clone();
        nh[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(MasterEquation::new(nh, ComplexMatrix::zeros(3), 0.1), Err(Error::NotHermitian { .. })));
    }
}
