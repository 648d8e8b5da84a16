// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! First-order dephasing correction of one sector in the dressed basis.
//!
//! For the initial ket |0, n+1⟩ the closed-system coherence
//! ρ⁰²(τ) = ⟨0,n+1|ρ(τ,0)|2,n+1⟩ feeds the source
//!
//! ```text
//! f_ab(τ) = 4 B_{a,0} B_{b,2} ρ⁰²(τ) + 4 B_{a,2} B_{b,0} ρ²⁰(τ)
//! ρ₁^{ab}(t) = −∫₀ᵗ f_ab(τ) e^{−i(E_a−E_b)(t−τ)} dτ
//! ```
//!
//! This keeps only the |0⟩↔|2⟩ coherence channel of the dephasing
//! superoperator, which is exact for the dark-state diagonal element.
//! The `literal` table uses the alternative index placement
//! B_{a,0}B_{b,0}, B_{a,2}B_{b,2}, which is not Hermitian in (a, b) and is
//! kept for comparison only. `numerical` projects the full ρ₁ from
//! [`perturbative_hierarchy`](super::perturbative_hierarchy).

use num_complex::Complex64 as C64;

use super::quadrature::{self, QuadratureOptions};
use super::{perturbative_hierarchy, DensityMatrix, MasterEquation};
use crate::dynamics::psi_from_block;
use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::model::{dressed_block, Dressed, DressedBlock, ModelParams, Space};

/// 3×3 table indexed by dressed labels in the order (d, +, −).
pub type DressedTable = [[C64; 3]; 3];

#[derive(Clone, Debug)]
pub struct DressedRho1 {
    pub t: f64,
    pub block: DressedBlock,
    /// Source f_ab evaluated along the trajectory, integrated by quadrature.
    pub quadrature: DressedTable,
    /// Same integral with the alternative (non-Hermitian) index placement.
    pub literal: DressedTable,
    /// Source frozen at its long-time average.
    pub f_frozen: DressedTable,
    /// Closed forms with the frozen source: −f t on the diagonal,
    /// (i f/ΔE)(1 − e^{−iΔE t}) off it.
    pub frozen: DressedTable,
    /// ⟨E_a|ρ₁(t)|E_b⟩ from the operator hierarchy.
    pub numerical: DressedTable,
}

impl DressedRho1 {
    pub fn get(table: &DressedTable, a: Dressed, b: Dressed) -> C64 {
        table[a.index()][b.index()]
    }

    /// |quadrature − numerical| on the dark diagonal.
    pub fn dark_residual(&self) -> f64 {
        (Self::get(&self.quadrature, Dressed::Dark, Dressed::Dark) - Self::get(&self.numerical, Dressed::Dark, Dressed::Dark))
            .norm()
    }

    /// max over (a, b) of |quadrature − numerical|.
    pub fn quadrature_residual(&self) -> f64 {
        max_diff(&self.quadrature, &self.numerical)
    }

    /// max over (a, b) of |literal − numerical|.
    pub fn literal_residual(&self) -> f64 {
        max_diff(&self.literal, &self.numerical)
    }

    /// Frozen f_dd, the initial decay rate of P₋ in units of Γ.
    pub fn f_dd(&self) -> f64 {
        Self::get(&self.f_frozen, Dressed::Dark, Dressed::Dark).re
    }
}

fn max_diff(x: &DressedTable, y: &DressedTable) -> f64 {
    let mut m = 0.0_f64;
    for a in 0..3 {
        for b in 0..3 {
            m = m.max((x[a][b] - y[a][b]).norm());
        }
    }
    m
}

fn to_table(m: &ComplexMatrix) -> DressedTable {
    std::array::from_fn(|a| std::array::from_fn(|b| m[(a, b)]))
}

fn source(block: &DressedBlock, rho02: C64, literal: bool) -> DressedTable {
    let rho20 = rho02.conj();
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let (ra, rb) = (block.b[a], block.b[b]);
            if literal {
                4.0 * ra[0] * rb[0] * rho02 + 4.0 * ra[2] * rb[2] * rho20
            } else {
                4.0 * ra[0] * rb[2] * rho02 + 4.0 * ra[2] * rb[0] * rho20
            }
        })
    })
}

fn integrate_source(block: &DressedBlock, t: f64, literal: bool, opts: QuadratureOptions) -> Result<DressedTable> {
    let e: [f64; 3] = Dressed::ALL.map(|a| block.energy(a));
    let m = quadrature::integrate(
        |tau| {
            let c = psi_from_block(block, tau);
            let f = source(block, c.c0 * c.c2.conj(), literal);
            ComplexMatrix::from_fn(3, |a, b| -f[a][b] * C64::from_polar(1.0, -(e[a] - e[b]) * (t - tau)))
        },
        0.0,
        t,
        opts,
    )?;
    Ok(to_table(&m))
}

/// Long-time average of ⟨0,n+1|ρ(τ,0)|2,n+1⟩: Σ_c B_{c,0}² · B_{c,0} B_{c,2}.
fn secular_rho02(block: &DressedBlock) -> f64 {
    block.b.iter().map(|r| r[0] * r[0] * r[0] * r[2]).sum()
}

/// Dressed-basis elements of ρ₁(t) for the initial ket |0, n+1⟩.
pub fn rho1_dressed_elements(p: &ModelParams, n: usize, t: f64) -> Result<DressedRho1> {
    p.validate()?;
    let block = dressed_block(p, n)?;
    let opts = QuadratureOptions::default();
    let quadrature = integrate_source(&block, t, false, opts)?;
    let literal = integrate_source(&block, t, true, opts)?;

    let f_frozen = source(&block, C64::new(secular_rho02(&block), 0.0), false);
    let frozen = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let f = f_frozen[a][b];
            let w = block.energy(Dressed::ALL[a]) - block.energy(Dressed::ALL[b]);
            if w.abs() * t.max(1.0) < 1e-12 {
                -f * t
            } else {
                C64::new(0.0, 1.0) * f / w * (C64::new(1.0, 0.0) - C64::from_polar(1.0, -w * t))
            }
        })
    });

    let space = Space::Sector(n);
    let eq = MasterEquation::for_space(&ModelParams { gamma: 0.0, ..*p }, space)?;
    let rho0 = DensityMatrix::pure(&space.basis_vector(0, n + 1).expect("sector ket"));
    let series = perturbative_hierarchy(&eq, &rho0, &[0.0, t], 1)?;
    let rows = block.sector_rows();
    let numerical = to_table(&series.rho1[1].conjugate_by(&rows));

    Ok(DressedRho1 { t, block, quadrature, literal, f_frozen, frozen, numerical })
}
