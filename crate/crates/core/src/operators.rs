// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! Angular-momentum and photon ladder operators.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// J₊, J₋ and J_z for a single spin `j`.
#[derive(Clone, Debug)]
pub struct AngularMomentumOps {
    pub jp: ComplexMatrix,
    pub jm: ComplexMatrix,
    pub jz: ComplexMatrix,
}

/// Spin-`j` operators in the basis M = −j, …, +j (ascending).
///
/// ⟨M+1|J₊|M⟩ = √(j(j+1) − M(M+1)).
pub fn angular_momentum_ops(j: f64) -> Result<AngularMomentumOps> {
    let twice = 2.0 * j;
    if !j.is_finite() || j < 0.0 || (twice - twice.round()).abs() > 1e-12 {
        return Err(Error::InvalidSpin(j));
    }
    let dim = twice.round() as usize + 1;
    let m_of = |k: usize| k as f64 - j;
    let jp = ComplexMatrix::from_fn(dim, |r, c| {
        if r == c + 1 {
            let m = m_of(c);
            C64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let jm = jp.adjoint();
    let jz = ComplexMatrix::from_real_diagonal(&(0..dim).map(m_of).collect::<Vec<_>>());
    Ok(AngularMomentumOps { jp, jm, jz })
}

/// Truncated photon ladder operators on |0⟩ … |n_max⟩.
#[derive(Clone, Debug)]
pub struct FockOps {
    pub a: ComplexMatrix,
    pub a_dag: ComplexMatrix,
}

/// a|n⟩ = √n |n−1⟩ on the truncated Fock space.
pub fn fock_ops(n_max: usize) -> FockOps {
    let a =
        ComplexMatrix::from_fn(n_max + 1, |r, c| if c == r + 1 { C64::new((c as f64).sqrt(), 0.0) } else { C64::new(0.0, 0.0) });
    let a_dag = a.adjoint();
    FockOps { a, a_dag }
}
