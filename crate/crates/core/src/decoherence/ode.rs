// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! Adaptive Dormand–Prince 5(4) integrator for autonomous matrix ODEs
//! dX/dt = f(X).

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use num_complex::Complex64 as C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// 5th-order weights minus embedded 4th-order weights.
const E: [f64; 7] = [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Integrate from `y0` at `times[0]` and return the state at every entry
/// of `times` (which must be nondecreasing).
pub fn integrate<F>(f: F, y0: &ComplexMatrix, times: &[f64], tol: Tolerances) -> Result<Vec<ComplexMatrix>>
where
    F: Fn(&ComplexMatrix) -> ComplexMatrix,
{
    let mut out = Vec::with_capacity(times.len());
    let Some(&t0) = times.first() else {
        return Ok(out);
    };
    let mut y = y0.clone();
    let mut t = t0;
    let mut k1 = f(&y);
    let mut h = initial_step(&y, &k1, tol);
    out.push(y.clone());

    for &target in &times[1..] {
        while t < target {
            let remaining = target - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            if step <= 1e-14 * t.abs().max(1.0) && !last {
                return Err(Error::StepUnderflow { t });
            }

            let (y_new, k7, err) = dp_step(&f, &y, &k1, step, tol);
            let err = if err.is_nan() { f64::INFINITY } else { err };
            if err <= 1.0 {
                t = if last { target } else { t + step };
                y = y_new;
                k1 = k7;
                let grow = if err == 0.0 { MAX_FACTOR } else { (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR) };
                // A step clipped to hit the grid says nothing about the natural step size.
                if !last || step >= h {
                    h = step * grow;
                }
            } else {
                h = step * (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
                if h <= 1e-14 * t.abs().max(1.0) {
                    return Err(Error::StepUnderflow { t });
                }
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

fn initial_step(y: &ComplexMatrix, dy: &ComplexMatrix, tol: Tolerances) -> f64 {
    let scale = tol.atol + tol.rtol * y.max_abs();
    let d0 = y.max_abs() / scale;
    let d1 = dy.max_abs() / scale;
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    }
}

fn dp_step<F>(f: &F, y: &ComplexMatrix, k1: &ComplexMatrix, h: f64, tol: Tolerances) -> (ComplexMatrix, ComplexMatrix, f64)
where
    F: Fn(&ComplexMatrix) -> ComplexMatrix,
{
    let mut ks: Vec<ComplexMatrix> = Vec::with_capacity(7);
    ks.push(k1.clone());
    for s in 1..7 {
        let mut ys = y.clone();
        for (j, kj) in ks.iter().enumerate() {
            let a = A[s][j];
            if a != 0.0 {
                ys.axpy(C64::new(h * a, 0.0), kj);
            }
        }
        debug_assert!(C[s] > 0.0);
        ks.push(f(&ys));
        if s == 6 {
            // Stage 7 is evaluated at the 5th-order solution (FSAL).
            let mut err = ComplexMatrix::zeros(y.dim());
            for (j, kj) in ks.iter().enumerate() {
                if E[j] != 0.0 {
                    err.axpy(C64::new(h * E[j], 0.0), kj);
                }
            }
            let norm = error_norm(y, &ys, &err, tol);
            let k7 = ks.pop().expect("seven stages");
            return (ys, k7, norm);
        }
    }
    unreachable!("loop returns at the final stage")
}

/// RMS of err / (atol + rtol·max(|y|, |y_new|)) over all entries.
fn error_norm(y: &ComplexMatrix, y_new: &ComplexMatrix, err: &ComplexMatrix, tol: Tolerances) -> f64 {
    let n = y.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let sc = tol.atol + tol.rtol * y[(i, j)].norm().max(y_new[(i, j)].norm());
            let e = err[(i, j)].norm() / sc;
            acc += e * e;
        }
    }
    (acc / (n * n).max(1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let y0 = ComplexMatrix::identity(1);
        let times = [0.0, 0.5, 1.0, 3.0];
        let ys = integrate(|y| y.scale_real(-1.0), &y0, &times, Tolerances::default()).unwrap();
        for (t, y) in times.iter().zip(&ys) {
            assert!((y[(0, 0)].re - (-t).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn rotation_over_many_periods() {
        let y0 = ComplexMatrix::identity(1);
        let t_end = 200.0;
        let ys = integrate(|y| y.scale(C64::new(0.0, -1.0)), &y0, &[0.0, t_end], Tolerances::default()).unwrap();
        let want = C64::from_polar(1.0, -t_end);
        assert!((ys[1][(0, 0)] - want).norm() < 1e-8);
    }

    #[test]
    fn dense_grid_hits_every_time() {
        let y0 = ComplexMatrix::identity(1);
        let times: Vec<f64> = (0..=1000).map(|k| k as f64 * 1e-3).collect();
        let ys = integrate(|y| y.scale_real(2.0), &y0, &times, Tolerances::default()).unwrap();
        assert_eq!(ys.len(), times.len());
        assert!((ys[1000][(0, 0)].re - 2f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn repeated_times_are_allowed() {
        let y0 = ComplexMatrix::identity(2);
        let ys = integrate(|y| y.scale_real(-0.5), &y0, &[0.0, 0.0, 1.0, 1.0], Tolerances::default()).unwrap();
        assert_eq!(ys.len(), 4);
        assert_eq!(ys[0], ys[1]);
        assert_eq!(ys[2], ys[3]);
    }

    #[test]
    fn blow_up_underflows() {
        // y' = y² reaches infinity at t = 1.
        let y0 = ComplexMatrix::identity(1);
        let r = integrate(|y| y * y, &y0, &[0.0, 2.0], Tolerances::default());
        assert!(matches!(r, Err(Error::StepUnderflow { t }) if t < 1.0 && t > 0.99));
    }
}
