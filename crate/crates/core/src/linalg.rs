// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrices.
//!
//! Every operator in the crate (angular-momentum and ladder operators,
//! Hamiltonians, propagators, density matrices) is a small dense square
//! matrix. `ComplexMatrix` wraps a `nalgebra` matrix and exposes only the
//! handful of operations the physics needs, indexed as `m[(row, col)]`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Relative tolerance used by [`hermitian_eig`] to accept its input.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;

/// Dense square matrix of complex scalars.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { data: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { data: DMatrix::identity(dim, dim) }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self { data: DMatrix::from_fn(dim, dim, f) }
    }

    /// Build from a real diagonal.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// Build from rows of equal length. Fails unless the input is square.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(n),
            });
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
        }
        Ok(Self::from_fn(u.len(), |i, j| u[i] * v[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self { data: self.data.adjoint() }
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { data: &self.data * s }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: C64, other: &Self) {
        self.data.zip_apply(&other.data, |a, b| *a += s * b);
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// max |self - other| over all entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff: dimension mismatch");
        self.data.iter().zip(other.data.iter()).fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()))
    }

    /// [self, other] = self·other − other·self
    pub fn commutator(&self, other: &Self) -> Self {
        Self { data: &self.data * &other.data - &other.data * &self.data }
    }

    /// Kronecker product; the index of `self` varies slowest.
    pub fn kron(&self, other: &Self) -> Self {
        Self { data: self.data.kronecker(&other.data) }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim(), "apply: vector length mismatch");
        let x = DVector::from_column_slice(v);
        (&self.data * x).iter().copied().collect()
    }

    /// ⟨u|self|v⟩
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let av = self.apply(v);
        u.iter().zip(av.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Similarity transform `u · self · u†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        Self { data: &u.data * &self.data * u.data.adjoint() }
    }

    /// Entry-wise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        Self { data: self.data.component_mul(&other.data) }
    }

    /// Hermiticity residual max|M[i][j] − conj(M[j][i])|.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut r = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                r = r.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        r
    }

    /// Hermitian within `rel_tol · max|M|`.
    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermiticity_residual() <= rel_tol * self.max_abs()
    }

    /// max|U†U − I| ≤ tol.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = Self { data: self.data.adjoint() * &self.data };
        prod.max_abs_diff(&Self::identity(self.dim())) <= tol
    }

    /// Entries of column `j`.
    pub fn column(&self, j: usize) -> Vec<C64> {
        self.data.column(j).iter().copied().collect()
    }

    /// Copy out the square sub-block with the given row/column indices.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self.data[(idx[i], idx[j])])
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.data[(i, j)] == C64::new(0.0, 0.0)))
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.data.diagonal().iter().copied().collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.data[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.data[idx]
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { data: &self.data + &rhs.data }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { data: &self.data - &rhs.data }
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { data: &self.data * &rhs.data }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix { data: -&self.data }
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.data += &rhs.data;
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            write!(f, "  ")?;
            for j in 0..self.dim() {
                let z = self.data[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`:
/// `(a⊗b)[(i·dim(b)+k, j·dim(b)+l)] = a[i][j]·b[k][l]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Time-evolution operator exp(−iMt) assembled from the eigensystem.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        let v = &self.vectors.data;
        let mut scaled = v.clone();
        for (j, &l) in self.values.iter().enumerate() {
            let p = C64::from_polar(1.0, -l * t);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= p);
        }
        ComplexMatrix { data: scaled * v.adjoint() }
    }

    /// Rotate an operator into the eigenbasis: V† X V.
    pub fn to_eigenbasis(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.vectors.data;
        ComplexMatrix { data: v.adjoint() * &x.data * v }
    }

    /// Rotate back out of the eigenbasis: V X V†.
    pub fn from_eigenbasis(&self, x: &ComplexMatrix) -> ComplexMatrix {
        x.conjugate_by(&self.vectors)
    }
}

/// Diagonalize a Hermitian matrix.
///
/// Eigenvalues come back ascending. Each eigenvector is phase-fixed so that
/// its first component with modulus above 1e-12 is real and positive; within
/// an exactly degenerate group the vectors are ordered by the index of that
/// component, then by its magnitude (descending).
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let scale = m.max_abs();
    let resid = m.hermiticity_residual();
    if resid > HERMITIAN_INPUT_TOL * scale {
        return Err(Error::NotHermitian { residual: resid });
    }
    let n = m.dim();
    if n == 0 {
        return Ok(HermitianEigen { values: vec![], vectors: ComplexMatrix::zeros(0) });
    }
    // Symmetrize so the solver sees an exactly Hermitian input.
    let sym = (&m.data + m.data.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);

    let mut cols: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let mut v: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
            normalize_phase(&mut v);
            (eig.eigenvalues[k], v)
        })
        .collect();

    cols.sort_by(|(la, va), (lb, vb)| {
        la.partial_cmp(lb).unwrap_or(std::cmp::Ordering::Equal).then_with(|| {
            let (ia, ma) = leading_component(va);
            let (ib, mb) = leading_component(vb);
            ia.cmp(&ib).then(mb.partial_cmp(&ma).unwrap_or(std::cmp::Ordering::Equal))
        })
    });

    let values = cols.iter().map(|(l, _)| *l).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| cols[j].1[i]);
    Ok(HermitianEigen { values, vectors })
}

const LEADING_EPS: f64 = 1e-12;

fn leading_component(v: &[C64]) -> (usize, f64) {
    v.iter().enumerate().find(|(_, z)| z.norm() > LEADING_EPS).map(|(i, z)| (i, z.norm())).unwrap_or((v.len(), 0.0))
}

fn normalize_phase(v: &mut [C64]) {
    if let Some(z) = v.iter().find(|z| z.norm() > LEADING_EPS).copied() {
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
}
