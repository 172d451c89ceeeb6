//! Cosine transform of `V` through the kernel
//! `C(φ, ω) = Σ_n λ^n sinc(ω/2^n) Π_{j=1}^{n} cos(φ + ω/2^j)`,
//! with `∫ V(x) cos(ωx) dx = (1/π) ∫_{-π}^{π} C(φ, ω) dφ`.

use alloc::vec::Vec;

use crate::digits::Params;
use crate::error::{Error, Result};
use crate::math::{cos, sinc};
use crate::sum::CompensatedSum;

/// Hard cap on series terms; reached only for `|λ|` extremely close to one.
const MAX_SERIES_TERMS: usize = 1 << 20;
const FIRST_NODES: usize = 64;
const MAX_NODES: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierKernelEval {
    pub phi: f64,
    pub omega: f64,
    pub value: f64,
    pub terms_used: usize,
}

/// Series form of `C(φ, ω)`, summed until the remaining tail
/// `|λ|^{n+1}/(1-|λ|)` drops below `tol`.
pub fn kernel_series(phi: f64, omega: f64, p: Params, tol: f64) -> FourierKernelEval {
    let lambda = p.lambda();
    let a = p.abs_lambda();
    let mut sum = CompensatedSum::new();
    let mut weight = 1.0; // λ^n Π cos(φ + ω/2^j)
    let mut bound = 1.0; // |λ|^n
    let mut scale = 1.0; // 2^{-n}
    let mut n = 0;
    loop {
        sum.add(weight * sinc(omega * scale));
        n += 1;
        bound *= a;
        if bound / (1.0 - a) < tol || bound == 0.0 || n >= MAX_SERIES_TERMS {
            break;
        }
        scale *= 0.5;
        weight *= lambda * cos(phi + omega * scale);
    }
    FourierKernelEval {
        phi,
        omega,
        value: sum.value(),
        terms_used: n,
    }
}

/// Continued-fraction form of `C(φ, ω)` truncated after `depth` levels:
///
/// `sinc(ω) / (1 - a_1/(b_1 - a_2/(b_2 - …)))` with `a_1 = λ cos(φ + ω/2)`,
/// `a_k = λ cos(ω/2^{k-1}) cos(φ + ω/2^k)`, `b_k = cos(ω/2^k) + λ cos(φ + ω/2^k)`.
///
/// Nonzero multiples of `π`, and any `|cos(ω/2^k)| < 1e-8` along the way, are
/// poles of the construction and rejected.
pub fn kernel_cf(phi: f64, omega: f64, p: Params, depth: usize) -> Result<f64> {
    if depth == 0 {
        return Err(Error::InvalidArgument("continued fraction depth must be at least 1"));
    }
    let turns = omega / core::f64::consts::PI;
    if omega != 0.0 && libm::fabs(turns - libm::round(turns)) < 1e-8 {
        return Err(Error::ContinuedFractionPole(omega));
    }
    let lambda = p.lambda();
    let half = |k: usize| cos(libm::ldexp(omega, -(k as i32)));
    let tilt = |k: usize| cos(phi + libm::ldexp(omega, -(k as i32)));
    for k in 1..=depth {
        if libm::fabs(half(k)) < 1e-8 {
            return Err(Error::ContinuedFractionPole(omega));
        }
    }
    let mut f = half(depth) + lambda * tilt(depth);
    for k in (1..depth).rev() {
        let a_next = lambda * half(k) * tilt(k + 1);
        f = half(k) + lambda * tilt(k) - a_next / f;
    }
    let value = sinc(omega) / (1.0 - lambda * tilt(1) / f);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::ContinuedFractionPole(omega))
    }
}

fn node_sum(omega: f64, p: Params, kernel_tol: f64, nodes: usize, stride: usize, start: usize) -> f64 {
    let step = 2.0 * core::f64::consts::PI / nodes as f64;
    (start..nodes)
        .step_by(stride)
        .map(|k| kernel_series(-core::f64::consts::PI + k as f64 * step, omega, p, kernel_tol).value)
        .collect::<CompensatedSum>()
        .value()
}

/// `∫_{-1}^{1} V(x) cos(ωx) dx` by the periodic trapezoid in `φ`, doubling the
/// node count from 64 until two successive estimates differ by less than `tol`.
pub fn cosine_transform(omega: f64, p: Params, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    let kernel_tol = tol / 100.0;
    let mut nodes = FIRST_NODES;
    let mut sum = node_sum(omega, p, kernel_tol, nodes, 1, 0);
    let mut estimate = 2.0 * sum / nodes as f64;
    while nodes < MAX_NODES {
        // Doubling keeps every existing node; only the odd new ones are evaluated.
        nodes *= 2;
        sum += node_sum(omega, p, kernel_tol, nodes, 2, 1);
        let next = 2.0 * sum / nodes as f64;
        let change = libm::fabs(next - estimate);
        estimate = next;
        if change < tol {
            return Ok(estimate);
        }
    }
    Err(Error::QuadratureNotConverged(nodes))
}

/// Cosine coefficients `c_n = ∫ V(x) cos(nπx) dx` for `n = 0..=harmonics`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosineSeries {
    pub lambda: f64,
    pub coeffs: Vec<f64>,
}

impl CosineSeries {
    pub fn compute(p: Params, harmonics: usize, tol: f64) -> Result<Self> {
        let coeffs = (0..=harmonics)
            .map(|n| cosine_transform(n as f64 * core::f64::consts::PI, p, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(p.lambda(), coeffs))
    }

    pub fn from_coeffs(lambda: f64, coeffs: Vec<f64>) -> Self {
        Self { lambda, coeffs }
    }

    pub fn harmonics(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Keeps `c_0 … c_k`.
    pub fn truncated(&self, k: usize) -> Self {
        Self {
            lambda: self.lambda,
            coeffs: self.coeffs[..(k + 1).min(self.coeffs.len())].to_vec(),
        }
    }

    /// `c_0/2 + Σ_{n≥1} c_n cos(nπx)`.
    pub fn reconstruct(&self, x: f64) -> f64 {
        let mut it = self.coeffs.iter();
        let mut sum = CompensatedSum::new();
        if let Some(c0) = it.next() {
            sum.add(c0 / 2.0);
        }
        for (n, c) in it.enumerate() {
            sum.add(c * cos((n + 1) as f64 * core::f64::consts::PI * x));
        }
        sum.value()
    }

    /// `c_0²/2 + Σ_{n≥1} c_n²`, the `L²` norm of the reconstruction, which
    /// never exceeds `∫ V²`.
    pub fn energy(&self) -> f64 {
        let mut it = self.coeffs.iter();
        let mut sum = CompensatedSum::new();
        if let Some(c0) = it.next() {
            sum.add(c0 * c0 / 2.0);
        }
        for c in it {
            sum.add(c * c);
        }
        sum.value()
    }
}

/// Free-function form of [`CosineSeries::reconstruct`].
pub fn reconstruct(x: f64, cs: &CosineSeries) -> f64 {
    cs.reconstruct(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(l: f64) -> Params {
        Params::new(l).unwrap()
    }

    #[test]
    fn zero_frequency_is_geometric() {
        for &phi in &[0.0, 0.4, 2.0, -3.0] {
            let got = kernel_series(phi, 0.0, p(0.5), 1e-16).value;
            assert!((got - 1.0 / (1.0 - 0.5 * phi.cos())).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_weight_is_sinc() {
        let e = kernel_series(0.3, 2.0, p(0.0), 1e-12);
        assert_eq!(e.terms_used, 1);
        assert!((e.value - 2.0f64.sin() / 2.0).abs() < 1e-15);
        let cf = kernel_cf(0.3, 2.0, p(0.0), 5).unwrap();
        assert!((cf - 2.0f64.sin() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn fraction_matches_series() {
        let s = kernel_series(0.7, 2.0, p(0.5), 1e-16).value;
        let c = kernel_cf(0.7, 2.0, p(0.5), 60).unwrap();
        assert!((s - c).abs() < 1e-8);
        let s0 = kernel_series(1.1, 0.0, p(-0.6), 1e-16).value;
        let c0 = kernel_cf(1.1, 0.0, p(-0.6), 80).unwrap();
        assert!((s0 - c0).abs() < 1e-12);
    }

    #[test]
    fn fraction_rejects_multiples_of_pi() {
        let pi = core::f64::consts::PI;
        assert_eq!(
            kernel_cf(0.0, pi, p(0.5), 60),
            Err(Error::ContinuedFractionPole(pi))
        );
        assert!(kernel_cf(0.0, -3.0 * pi, p(0.5), 60).is_err());
    }

    #[test]
    fn transform_at_zero_frequency() {
        let got = cosine_transform(0.0, p(0.5), 1e-12).unwrap();
        assert!((got - 4.0 / 3f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn transform_of_constant() {
        let got = cosine_transform(3.0, p(0.0), 1e-12).unwrap();
        assert!((got - 2.0 * 3f64.sin() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn transform_is_even() {
        let a = cosine_transform(2.5, p(0.4), 1e-12).unwrap();
        let b = cosine_transform(-2.5, p(0.4), 1e-12).unwrap();
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn constant_reconstruction() {
        let cs = CosineSeries::compute(p(0.0), 20, 1e-12).unwrap();
        assert!((cs.coeffs[0] - 2.0).abs() < 1e-12);
        for c in &cs.coeffs[1..] {
            assert!(c.abs() < 1e-12);
        }
        assert!((cs.reconstruct(0.37) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn energy_grows_with_harmonics() {
        let cs = CosineSeries::compute(p(0.5), 40, 1e-12).unwrap();
        let mut last = 0.0;
        for k in 0..=40 {
            let e = cs.truncated(k).energy();
            assert!(e >= last);
            last = e;
        }
    }
}
