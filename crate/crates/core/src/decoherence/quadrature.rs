// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! Globally adaptive Gauss–Kronrod (7/15) quadrature of matrix-valued
//! integrands.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use num_complex::Complex64 as C64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the even-indexed Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-9, abs_tol: 1e-14, max_intervals: 4000 }
    }
}

struct Piece {
    a: f64,
    b: f64,
    value: ComplexMatrix,
    error: f64,
}

fn gk15<F>(f: &F, a: f64, b: f64) -> Piece
where
    F: Fn(f64) -> ComplexMatrix,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc.scale_real(WGK[7]);
    let mut gauss = fc.scale_real(WG[3]);
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let mut sum = f1;
        sum += &f2;
        kron.axpy(C64::new(WGK[j], 0.0), &sum);
        if j % 2 == 1 {
            gauss.axpy(C64::new(WG[j / 2], 0.0), &sum);
        }
    }
    let value = kron.scale_real(half);
    let error = (&kron - &gauss).max_abs() * half.abs();
    Piece { a, b, value, error }
}

/// ∫_a^b f(x) dx, refined until the summed error estimate is below
/// max(abs_tol, rel_tol·max|I|).
pub fn integrate<F>(f: F, a: f64, b: f64, opts: QuadratureOptions) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> ComplexMatrix,
{
    if a == b {
        return Ok(f(a).scale_real(0.0));
    }
    let mut pieces = vec![gk15(&f, a, b)];
    loop {
        let mut total = pieces[0].value.clone();
        for p in &pieces[1..] {
            total += &p.value;
        }
        let err: f64 = pieces.iter().map(|p| p.error).sum();
        if err <= opts.abs_tol.max(opts.rel_tol * total.max_abs()) {
            return Ok(total);
        }
        if pieces.len() >= opts.max_intervals {
            return Err(Error::QuadratureNonConvergence { a, b, estimate: err });
        }
        let worst = pieces.iter().enumerate().max_by(|x, y| x.1.error.total_cmp(&y.1.error)).map(|(i, _)| i).expect("nonempty");
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::QuadratureNonConvergence { a, b, estimate: err });
        }
        pieces.push(gk15(&f, p.a, mid));
        pieces.push(gk15(&f, mid, p.b));
    }
}
