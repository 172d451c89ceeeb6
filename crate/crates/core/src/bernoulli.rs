//! Modified Bernoulli polynomials `P_n(x) = 2^n B_n((x+1)/2)` in exact
//! rational arithmetic, and the `U`-moment formula they diagonalise.
//!
//! `P_n = Σ_j C(n,j) c_j x^{n-j}` where `c_j` vanish for odd `j` and the even
//! ones follow `c_{2n} = -Σ_{j<n} C(2n,2j) c_{2j} / (2n-2j+1)`. The family is
//! Appell (`P_n' = n P_{n-1}`) and each `P_n` is an eigenfunction of
//! `R₋ + R₊` with eigenvalue `2^{1-n}`, which turns the `U` pairing into a
//! scalar factor `1/(1 - 2^{-n}λ)`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::closedform::v_moment;
use crate::digits::Params;
use crate::error::{Error, Result};
use crate::poly::Poly;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Exact binomial coefficients `C(n, k)` for `n ≤ n_max`.
fn binomials(n_max: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut row = vec![BigInt::one(); n + 1];
        for k in 1..n {
            row[k] = &rows[n - 1][k - 1] + &rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// `c_0 … c_{n_max}` as exact rationals.
pub fn c_coeffs(n_max: usize) -> Vec<BigRational> {
    let binom = binomials(n_max);
    let mut c = vec![BigRational::zero(); n_max + 1];
    c[0] = BigRational::one();
    for n in 1..=n_max / 2 {
        let mut acc = BigRational::zero();
        for j in 0..n {
            let w = int(binom[2 * n][2 * j].clone()) / int(2 * (n - j) as i64 + 1);
            acc += w * &c[2 * j];
        }
        c[2 * n] = -acc;
    }
    c
}

/// Polynomial with exact rational coefficients, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(n: usize) -> Self {
        let mut c = vec![BigRational::zero(); n + 1];
        c[n] = BigRational::one();
        Self { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    /// `x ↦ P(a x + b)`.
    pub fn compose_affine(&self, a: &BigRational, b: &BigRational) -> Self {
        let n = match self.degree() {
            Some(n) => n,
            None => return Self::zero(),
        };
        let binom = binomials(n);
        let mut out = vec![BigRational::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut apow = BigRational::one();
            for j in 0..=k {
                let bpow = num_traits::pow(b.clone(), k - j);
                out[j] += c * int(binom[k][j].clone()) * &apow * bpow;
                apow *= a;
            }
        }
        Self::new(out)
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Self {
        let mut out = vec![BigRational::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k + 1] = c / int(k as i64 + 1);
        }
        Self::new(out)
    }

    /// `∫_{x-1}^{x+1} P(t) dt` as a polynomial in `x`. For `P_n` this is `2x^n`.
    pub fn window_integral(&self) -> Self {
        let a = self.antiderivative();
        let one = BigRational::one();
        a.compose_affine(&one, &one)
            .add(&a.compose_affine(&one, &-one.clone()).scale(&-one.clone()))
    }

    /// `(R₋ + R₊) P`, i.e. `P((x-1)/2) + P((x+1)/2)`.
    pub fn averaging_sum(&self) -> Self {
        let half = rat(1, 2);
        self.compose_affine(&half, &-half.clone())
            .add(&self.compose_affine(&half, &half))
    }

    /// Nearest-float coefficients.
    pub fn to_poly(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .map(|c| Complex64::new(to_f64(c), 0.0))
                .collect(),
        )
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(if r.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// `P_n(x) = Σ_j C(n,j) c_j x^{n-j}`.
pub fn p_poly(n: usize) -> RationalPoly {
    p_poly_with(n, &c_coeffs(n), &binomials(n))
}

fn p_poly_with(n: usize, c: &[BigRational], binom: &[Vec<BigInt>]) -> RationalPoly {
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for j in (0..=n).step_by(2) {
        coeffs[n - j] = int(binom[n][j].clone()) * &c[j];
    }
    RationalPoly::new(coeffs)
}

/// `P_0 … P_{n_max}` sharing one coefficient table.
pub fn p_poly_table(n_max: usize) -> Vec<RationalPoly> {
    let c = c_coeffs(n_max);
    let binom = binomials(n_max);
    (0..=n_max).map(|n| p_poly_with(n, &c, &binom)).collect()
}

/// Weights `w_j = C(n,2j)/(2j+1)` with `x^n = Σ_j w_j P_{n-2j}`, returned as
/// `(n - 2j, w_j)` pairs for even `n`.
pub fn monomial_in_p(n: usize) -> Result<Vec<(usize, BigRational)>> {
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    let binom = binomials(n);
    Ok((0..=n / 2)
        .map(|j| {
            let w = int(binom[n][2 * j].clone()) / int(2 * j as i64 + 1);
            (n - 2 * j, w)
        })
        .collect())
}

/// `1 / (1 - 2^{-n} λ)`, the factor relating `∫ U P_n` to `∫ V P_n`.
pub fn transfer_factor(n: usize, p: Params) -> f64 {
    1.0 / (1.0 - libm::ldexp(p.lambda(), -(n as i32)))
}

/// `Q_N = Σ_j C(N,2j) / ((1 - 2^{2j-N}λ)(2j+1)) · P_{N-2j}` in the monomial basis.
///
/// The Bernoulli side stays exact; `λ` enters only in the final float weights.
pub fn q_poly(n: usize, p: Params) -> Result<Poly> {
    let weights = monomial_in_p(n)?;
    let table = p_poly_table(n);
    let mut out = Poly::zero();
    for (k, w) in weights {
        let scale = to_f64(&w) * transfer_factor(k, p);
        out = &out + &table[k].to_poly().scale(Complex64::new(scale, 0.0));
    }
    Ok(out)
}

/// `∫ U x^N = ∫ V Q_N - 2/((1-λ)(N+1))`, with `∫ V Q_N` assembled from the
/// closed-form even moments.
pub fn u_moment_bernoulli(n: usize, p: Params) -> Result<f64> {
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    if p.is_trivial() {
        return Ok(0.0);
    }
    let q = q_poly(n, p)?;
    let mut acc = 0.0;
    for (k, c) in q.coeffs().iter().enumerate() {
        if k % 2 == 0 {
            acc += c.re * v_moment(k, p)?;
        }
    }
    Ok(acc - 2.0 / ((1.0 - p.lambda()) * (n as f64 + 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_coefficients() {
        let c = c_coeffs(9);
        assert_eq!(c[0], rat(1, 1));
        assert_eq!(c[2], rat(-1, 3));
        assert_eq!(c[4], rat(7, 15));
        assert_eq!(c[6], rat(-31, 21));
        assert_eq!(c[8], rat(127, 15));
        for k in (1..=9).step_by(2) {
            assert!(c[k].is_zero());
        }
    }

    #[test]
    fn large_orders_stay_exact() {
        let c = c_coeffs(60);
        assert!(c[60].is_positive());
        assert!(c[58].is_negative());
    }

    #[test]
    fn low_polynomials() {
        assert_eq!(p_poly(0), RationalPoly::monomial(0));
        assert_eq!(p_poly(1), RationalPoly::monomial(1));
        assert_eq!(p_poly(2), RationalPoly::new(vec![rat(-1, 3), rat(0, 1), rat(1, 1)]));
    }

    #[test]
    fn derivative_lowers_index() {
        assert_eq!(p_poly(3).derivative(), p_poly(2).scale(&rat(3, 1)));
    }

    #[test]
    fn window_integral_recovers_monomial() {
        for n in 0..=10 {
            assert_eq!(p_poly(n).window_integral(), RationalPoly::monomial(n).scale(&rat(2, 1)));
        }
    }

    #[test]
    fn averaging_eigenvalue() {
        for n in 0..=8 {
            let pn = p_poly(n);
            assert_eq!(pn.averaging_sum(), pn.scale(&rat(2, 1 << n)));
        }
    }

    #[test]
    fn monomial_weights() {
        assert_eq!(monomial_in_p(0).unwrap(), vec![(0, rat(1, 1))]);
        assert_eq!(monomial_in_p(2).unwrap(), vec![(2, rat(1, 1)), (0, rat(1, 3))]);
        assert_eq!(monomial_in_p(3), Err(Error::OddOrder(3)));
    }

    #[test]
    fn monomial_round_trip() {
        let table = p_poly_table(12);
        for n in (0..=12).step_by(2) {
            let mut sum = RationalPoly::zero();
            for (k, w) in monomial_in_p(n).unwrap() {
                sum = sum.add(&table[k].scale(&w));
            }
            assert_eq!(sum, RationalPoly::monomial(n));
        }
    }

    #[test]
    fn q_examples() {
        let p = Params::new(0.5).unwrap();
        let q0 = q_poly(0, p).unwrap();
        assert_eq!(q0, Poly::from_real(&[2.0]));
        let q = q_poly(4, Params::new(0.0).unwrap()).unwrap();
        assert!(q.max_coeff_distance(&Poly::monomial(4)) < 1e-15);
    }

    #[test]
    fn u_moments_agree_with_transfer_system() {
        for &l in &[0.3, 0.5, 0.7] {
            let p = Params::new(l).unwrap();
            for n in (0..=10).step_by(2) {
                let a = u_moment_bernoulli(n, p).unwrap();
                let b = crate::closedform::u_moment(n, p).unwrap();
                assert!((a - b).abs() <= 1e-9 * b.abs(), "l={l} n={n}: {a} vs {b}");
            }
        }
        assert_eq!(u_moment_bernoulli(4, Params::new(0.0).unwrap()).unwrap(), 0.0);
    }
}
