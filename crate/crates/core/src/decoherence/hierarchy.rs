// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! Expansion of the dephased density matrix in powers of Γ:
//! ρ(t, Γ) = ρ(t, 0) + Γρ₁(t) + ½Γ²ρ₂(t) + …
//!
//! With 𝒟 = [J_z, [J_z, ·]] and U(s) = e^{−iHs}, the orders satisfy
//!
//! ```text
//! ρ(t, 0) = U(t) ρ(0) U†(t)
//! ρ₁(t)   = −∫₀ᵗ U(t−τ) 𝒟[ρ(τ, 0)] U†(t−τ) dτ
//! ρ₂(t)   = −2∫₀ᵗ U(t−τ) 𝒟[ρ₁(τ)] U†(t−τ) dτ
//! ```
//!
//! Everything is evaluated in the eigenbasis of H, where conjugation by
//! U(s) is an entry-wise phase. Integrals are accumulated interval by
//! interval along the output grid.

use num_complex::Complex64 as C64;

use super::quadrature::{self, QuadratureOptions};
use super::{check_grid, DensityMatrix, Dephaser, MasterEquation};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, HermitianEigen};

/// Density-matrix expansion coefficients sampled on a time grid.
#[derive(Clone, Debug)]
pub struct PerturbationSeries {
    /// Highest order computed (0, 1 or 2).
    pub order: usize,
    pub times: Vec<f64>,
    /// ρ(t, 0)
    pub rho0: Vec<ComplexMatrix>,
    /// ρ₁(t) = ∂ρ/∂Γ at Γ = 0; empty below order 1.
    pub rho1: Vec<ComplexMatrix>,
    /// ρ₂(t) = ∂²ρ/∂Γ² at Γ = 0; empty below order 2.
    pub rho2: Vec<ComplexMatrix>,
}

impl PerturbationSeries {
    /// Truncated series ρ(t,0) + Γρ₁ + ½Γ²ρ₂ at grid index `k`, using the
    /// orders available (capped at `max_order`).
    pub fn state(&self, k: usize, gamma: f64, max_order: usize) -> ComplexMatrix {
        let mut r = self.rho0[k].clone();
        if max_order >= 1 && self.order >= 1 {
            r.axpy(C64::new(gamma, 0.0), &self.rho1[k]);
        }
        if max_order >= 2 && self.order >= 2 {
            r.axpy(C64::new(0.5 * gamma * gamma, 0.0), &self.rho2[k]);
        }
        r
    }
}

struct EigenFrame {
    eig: HermitianEigen,
    dephaser: Dephaser,
}

impl EigenFrame {
    /// X ↦ U(s) X U†(s) in the eigenbasis.
    fn evolve(&self, x: &ComplexMatrix, s: f64) -> ComplexMatrix {
        let l = &self.eig.values;
        ComplexMatrix::from_fn(x.dim(), |a, b| x[(a, b)] * C64::from_polar(1.0, -(l[a] - l[b]) * s))
    }
}

/// Expansion coefficients up to `order` for the closed dynamics of `eq`
/// (its Γ is ignored). `rho0` is the state at t = 0; grid times must be
/// nonnegative and nondecreasing.
pub fn perturbative_hierarchy(
    eq: &MasterEquation,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    order: usize,
) -> Result<PerturbationSeries> {
    perturbative_hierarchy_with(eq, rho0, t_grid, order, QuadratureOptions::default())
}

pub fn perturbative_hierarchy_with(
    eq: &MasterEquation,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    order: usize,
    opts: QuadratureOptions,
) -> Result<PerturbationSeries> {
    if order > 2 {
        return Err(Error::InvalidOrder(order));
    }
    if rho0.dim() != eq.dim() {
        return Err(Error::DimensionMismatch { expected: eq.dim(), found: rho0.dim() });
    }
    check_grid(t_grid)?;
    if t_grid.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::InvalidParameter { name: "t_grid", reason: "times must be >= 0".into() });
    }

    let eig = hermitian_eig(&eq.hamiltonian)?;
    let jz_eig = eig.to_eigenbasis(&eq.jz);
    let frame = EigenFrame { dephaser: Dephaser::new(&jz_eig), eig };
    let r0 = frame.eig.to_eigenbasis(rho0.matrix());
    let dim = r0.dim();

    let zeroth = |tau: f64| frame.evolve(&r0, tau);
    // −U(t_end−τ) 𝒟[ρ(τ,0)] U†(t_end−τ)
    let source0 = |tau: f64, t_end: f64| frame.evolve(&frame.dephaser.apply(&zeroth(tau)), t_end - tau).scale_real(-1.0);
    // Inner quadrature gets a tighter target so the outer integrand is smooth.
    let inner = QuadratureOptions { rel_tol: opts.rel_tol * 1e-2, ..opts };

    let mut series = PerturbationSeries {
        order,
        times: t_grid.to_vec(),
        rho0: Vec::with_capacity(t_grid.len()),
        rho1: Vec::new(),
        rho2: Vec::new(),
    };

    let mut prev_t = 0.0;
    let mut r1 = ComplexMatrix::zeros(dim);
    let mut r2 = ComplexMatrix::zeros(dim);
    for &t in t_grid {
        series.rho0.push(frame.eig.from_eigenbasis(&zeroth(t)));
        if order == 0 {
            continue;
        }
        let h = t - prev_t;
        let r1_prev = r1.clone();
        let t0 = prev_t;
        if h > 0.0 {
            let inc = quadrature::integrate(|tau| source0(tau, t), t0, t, opts)?;
            r1 = frame.evolve(&r1_prev, h);
            r1 += &inc;
        }
        series.rho1.push(frame.eig.from_eigenbasis(&r1));

        if order == 2 {
            if h > 0.0 {
                let r1_at = |tau: f64| -> Result<ComplexMatrix> {
                    let mut x = frame.evolve(&r1_prev, tau - t0);
                    x += &quadrature::integrate(|s| source0(s, tau), t0, tau, inner)?;
                    Ok(x)
                };
                let failure = std::cell::RefCell::new(None);
                let inc = quadrature::integrate(
                    |tau| match r1_at(tau) {
                        Ok(x) => frame.evolve(&frame.dephaser.apply(&x), t - tau).scale_real(-2.0),
                        Err(e) => {
                            failure.borrow_mut().get_or_insert(e);
                            ComplexMatrix::zeros(dim)
                        }
                    },
                    t0,
                    t,
                    opts,
                )?;
                if let Some(e) = failure.into_inner() {
                    return Err(e);
                }
                r2 = frame.evolve(&r2, h);
                r2 += &inc;
            }
            series.rho2.push(frame.eig.from_eigenbasis(&r2));
        }
        prev_t = t;
    }
    Ok(series)
}

/// ⟨B⟩ = Tr(ρ(t,0)B) + ΓTr(ρ₁B) + ½Γ²Tr(ρ₂B) at grid index `k`, using
/// every order present in `series`.
pub fn expectation_expanded(series: &PerturbationSeries, k: usize, gamma: f64, observable: &ComplexMatrix) -> Result<f64> {
    let dim = series.rho0.first().map_or(0, ComplexMatrix::dim);
    if observable.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: observable.dim() });
    }
    let res = observable.hermiticity_residual();
    if res > 1e-10 * observable.max_abs() {
        return Err(Error::NotHermitian { residual: res });
    }
    let rho = series.state(k, gamma, 2);
    Ok((&rho * observable).trace().re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoherence::integrate_master;
    use crate::model::{ModelParams, Space};

    fn sector_setup(gamma: f64) -> (MasterEquation, DensityMatrix) {
        let p = ModelParams { a: 1.0, gamma, ..ModelParams::default() }.with_energies(0.3, 0.3, 0.3);
        let sp = Space::Sector(4);
        let eq = MasterEquation::for_space(&p, sp).unwrap();
        (eq, DensityMatrix::pure(&sp.basis_vector(0, 5).unwrap()))
    }

    #[test]
    fn order_checked() {
        let (eq, r) = sector_setup(0.0);
        assert!(matches!(perturbative_hierarchy(&eq, &r, &[0.0, 1.0], 3), Err(Error::InvalidOrder(3))));
    }

    #[test]
    fn corrections_are_traceless_and_hermitian() {
        let (eq, r) = sector_setup(0.0);
        let times: Vec<f64> = (0..=8).map(|k| k as f64 * 0.4).collect();
        let s = perturbative_hierarchy(&eq, &r, &times, 2).unwrap();
        assert_eq!(s.rho1.len(), times.len());
        assert_eq!(s.rho2.len(), times.len());
        for k in 0..times.len() {
            assert!((s.rho0[k].trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
            assert!(s.rho1[k].trace().norm() < 1e-9);
            assert!(s.rho2[k].trace().norm() < 1e-9);
            assert!(s.rho1[k].hermiticity_residual() < 1e-9);
            assert!(s.rho2[k].hermiticity_residual() < 1e-9);
        }
        assert_eq!(s.rho1[0].max_abs(), 0.0);
    }

    #[test]
    fn undriven_diagonal_state_has_no_correction() {
        let p = ModelParams { a: 0.0, ..ModelParams::default() }.with_energies(0.1, 0.7, 0.3);
        let sp = Space::Sector(1);
        let eq = MasterEquation::for_space(&p, sp).unwrap();
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.2, 0.5, 0.3]));
        let s = perturbative_hierarchy(&eq, &rho, &[0.0, 1.0, 5.0], 2).unwrap();
        for k in 0..3 {
            assert!(s.rho1[k].max_abs() < 1e-15);
            assert!(s.rho2[k].max_abs() < 1e-15);
        }
    }

    #[test]
    fn first_order_matches_finite_difference() {
        let (eq, r) = sector_setup(0.0);
        let times = [0.0, 0.7, 1.9];
        let s = perturbative_hierarchy(&eq, &r, &times, 1).unwrap();
        let g = 1e-4;
        let plus = integrate_master(&eq.with_gamma(g).unwrap(), &r, &times).unwrap();
        for k in 0..times.len() {
            let fd = (&plus.states[k] - &s.rho0[k]).scale_real(1.0 / g);
            assert!(fd.max_abs_diff(&s.rho1[k]) < 1e-3, "{k}");
        }
    }

    #[test]
    fn identity_expectation() {
        let (eq, r) = sector_setup(0.0);
        let s = perturbative_hierarchy(&eq, &r, &[0.0, 2.5], 2).unwrap();
        let id = ComplexMatrix::identity(3);
        for g in [0.0, 0.01, 0.3] {
            assert!((expectation_expanded(&s, 1, g, &id).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn non_hermitian_observable_rejected() {
        let (eq, r) = sector_setup(0.0);
        let s = perturbative_hierarchy(&eq, &r, &[0.0, 1.0], 0).unwrap();
        let mut b = ComplexMatrix::zeros(3);
        b[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(expectation_expanded(&s, 1, 0.1, &b), Err(Error::NotHermitian { .. })));
    }
}
