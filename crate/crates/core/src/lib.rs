// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! Bell-state preparation in two coupled quantum dots driven by a quantized
//! laser mode.
//!
//! The two dots form a J = 1 exciton triplet (vacuum, single exciton,
//! biexciton) coupled to a single photon mode. Each photon sector carries a
//! dark dressed state, which makes photon-number post-selection produce
//! Bell superpositions of |00⟩ and |11⟩. The crate covers:
//!
//! - [`linalg`], [`operators`]: dense complex matrices, spin-1 and ladder
//!   operators;
//! - [`model`]: parameters, sector and full Hamiltonians, dressed states;
//! - [`dynamics`]: exact evolution and the coherent-field population;
//! - [`measurement`]: post-selection, Bell decomposition, pulse design;
//! - [`decoherence`]: pure-dephasing master equation and its expansion in
//!   the dephasing rate.
//!
//! Units: ħ = 1 and every energy or rate shares a single unit (the CLI uses
//! the laser frequency).

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decoherence;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod model;
pub mod operators;

pub use error::{Error, Result};
pub use linalg::{hermitian_eig, tensor_product, ComplexMatrix, HermitianEigen};
pub use model::{DressedBlock, ModelParams, Space};

pub use num_complex::Complex64 as C64;
