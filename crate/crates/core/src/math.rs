//! Scalar helpers shared by the closed forms, the Fourier kernel and the oracle.

use alloc::vec::Vec;

pub use libm::{cos, cosh, exp, fabs, sin, sinh, sqrt};

/// `sin(t)/t` with the removable singularity at 0 filled in.
pub fn sinc(t: f64) -> f64 {
    if fabs(t) < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 6.0 * (1.0 - t2 / 20.0)
    } else {
        sin(t) / t
    }
}

/// `1 - sqrt(1 - a)` without cancellation for small `a`.
pub fn one_minus_sqrt_one_minus(a: f64) -> f64 {
    a / (1.0 + sqrt(1.0 - a))
}

/// Rows `0..=n_max` of Pascal's triangle in floating point.
///
/// Entries are exact while they stay below 2^53 (through row 56).
pub fn binomial_table(n_max: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut row = alloc::vec![1.0; n + 1];
        for k in 1..n {
            row[k] = rows[n - 1][k - 1] + rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// `base^k` by repeated squaring; exact for powers of two of either sign.
pub fn powi(base: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    let mut b = base;
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    acc
}

/// Relative closeness with a floor on the scale so that values near zero are
/// compared absolutely against `scale_floor`.
pub fn rel_close(a: f64, b: f64, tol: f64, scale_floor: f64) -> bool {
    let scale = fabs(a).max(fabs(b)).max(scale_floor);
    fabs(a - b) <= tol * scale
}
