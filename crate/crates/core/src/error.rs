// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("spin quantum number must be a nonnegative multiple of 1/2, got {0}")]
    InvalidSpin(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dark-state structure requires E0 = E2, got E0 = {e0}, E2 = {e2}")]
    OffResonance { e0: f64, e2: f64 },

    #[error("pulse window [{start}, {end}] must span at least two beat periods ({required})")]
    WindowTooShort { start: f64, end: f64, required: f64 },

    #[error("pulse window [{start}, {end}] contains no local minimum of P+")]
    DegenerateWindow { start: f64, end: f64 },

    #[error("integration failed: step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:e})")]
    QuadratureNonConvergence { a: f64, b: f64, estimate: f64 },

    #[error("expansion order must be 0, 1 or 2, got {0}")]
    InvalidOrder(usize),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::StepUnderflow { .. } | Error::QuadratureNonConvergence { .. })
    }
}
