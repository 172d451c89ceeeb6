//! Dense complex polynomials in the monomial basis on `[-1, 1]`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::math::binomial_table;

/// `Σ c_n x^n` with trailing zero coefficients trimmed; the zero polynomial
/// has no coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        Self { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `x^n`, zero past the degree.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `x ↦ P(a x + b)`.
    pub fn compose_affine(&self, a: f64, b: f64) -> Self {
        let n = match self.degree() {
            Some(n) => n,
            None => return Self::zero(),
        };
        let binom = binomial_table(n);
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            // (a x + b)^k = Σ_j C(k, j) a^j b^{k-j} x^j
            let mut apow = 1.0;
            for j in 0..=k {
                let w = binom[k][j] * apow * crate::math::powi(b, (k - j) as u32);
                out[j] += c * w;
                apow *= a;
            }
        }
        Self::new(out)
    }

    /// `R₊ P (x) = P((x + 1)/2)`.
    pub fn half_shift_plus(&self) -> Self {
        self.compose_affine(0.5, 0.5)
    }

    /// `R₋ P (x) = P((x - 1)/2)`.
    pub fn half_shift_minus(&self) -> Self {
        self.compose_affine(0.5, -0.5)
    }

    /// `∫_{-1}^{1} P(x) dx`.
    pub fn integrate_unit(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 2 == 0)
            .map(|(k, c)| c * (2.0 / (k as f64 + 1.0)))
            .sum()
    }

    /// `∫_{-1}^{1} |P(x)|² dx`, exactly from the coefficients.
    pub fn l2_norm_sq(&self) -> f64 {
        let mut total = 0.0;
        for (j, a) in self.coeffs.iter().enumerate() {
            for (k, b) in self.coeffs.iter().enumerate() {
                if (j + k) % 2 == 0 {
                    total += (a * b.conj()).re * 2.0 / (j + k + 1) as f64;
                }
            }
        }
        total
    }

    /// Largest coefficientwise distance to `other`.
    pub fn max_coeff_distance(&self, other: &Poly) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul<Complex64> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: Complex64) -> Poly {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = Poly::from_real(&[1.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(0));
        assert!(Poly::from_real(&[0.0, 0.0]).is_zero());
        assert_eq!(Poly::zero().degree(), None);
    }

    #[test]
    fn compose_matches_pointwise() {
        let p = Poly::from_real(&[0.3, -1.0, 2.0, 0.5]);
        let q = p.half_shift_minus();
        for &x in &[-1.0, -0.2, 0.0, 0.7, 1.0] {
            let lhs = q.eval(c(x));
            let rhs = p.eval(c((x - 1.0) / 2.0));
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }

    #[test]
    fn integrals_of_monomials() {
        assert_eq!(Poly::monomial(2).integrate_unit(), c(2.0 / 3.0));
        assert_eq!(Poly::monomial(3).integrate_unit(), c(0.0));
        assert!((Poly::monomial(1).l2_norm_sq() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn l2_norm_of_complex_polynomial() {
        // |i + x|² = 1 + x²  →  2 + 2/3
        let p = Poly::new(vec![Complex64::new(0.0, 1.0), c(1.0)]);
        assert!((p.l2_norm_sq() - 8.0 / 3.0).abs() < 1e-15);
    }
}
