//! Closed-form integrals of `V` and `U`.
//!
//! Three families are covered:
//!
//! * `∫ V^N` and more generally `∫ P(V)` for a polynomial `P`, through a
//!   lower-Hessenberg determinant or the equivalent recurrence;
//! * `∫ V x^N`, through a sum of residues that leaves one small determinant per
//!   pole, or through the resolvent `(1 - λ(z⁻¹R₋ + zR₊)/2)⁻¹` averaged over
//!   the unit circle;
//! * `∫ U x^N`, by transferring the even `V` moments through the triangular
//!   system of `1 - λ(R₊ + R₋)/2` on even monomials.
//!
//! Every quantity has at least two independent routes; the public entry points
//! that claim an identity compute both and refuse to answer when they disagree.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::digits::Params;
use crate::error::{Error, Result};
use crate::linalg::{back_substitute, forward_substitute, hessenberg_det, lu_det};
use crate::math::{self, binomial_table, one_minus_sqrt_one_minus, powi, sqrt};
use crate::poly::Poly;

/// Largest `N` for the `∫ V^N` determinant; binomials leave the exact
/// floating-point integers beyond this.
pub const MAX_POWER_ORDER: usize = 64;

/// Largest `N` for the residue-sum moment formula.
///
/// Cancellation in the residue sum loses about 1.5 decimal digits per step of
/// 2 in `N`: roughly 1e-10 relative at `N = 8`, 5e-7 at 12, nothing left by 18.
/// [`v_moment_contour`] stays at rounding level throughout this range.
pub const MAX_MOMENT_ORDER: usize = 40;

/// Relative tolerance for the in-function agreement checks between two routes.
pub const ROUTE_TOL: f64 = 1e-10;

/// `√(1 - λ^{2n})`.
fn root_gap(lambda: f64, n: usize) -> f64 {
    sqrt(1.0 - powi(lambda, 2 * n as u32))
}

/// `λ^{2n} / (1 + √(1 - λ^{2n}))`, i.e. `1 - √(1 - λ^{2n})` without cancellation.
fn root_defect(lambda: f64, n: usize) -> f64 {
    one_minus_sqrt_one_minus(powi(lambda, 2 * n as u32))
}

/// `∫_{-1}^{1} V^N dx` by the bottom-up recurrence
/// `I_N = (2 + Σ_{n=1}^{N-1} C(N,n)(1 - √(1-λ^{2n})) I_n) / √(1-λ^{2N})`, `I_0 = 2`.
pub fn v_power_rec(n: usize, p: Params) -> f64 {
    v_power_rec_table(n, p)[n]
}

/// `I_0 … I_{n_max}` from the recurrence.
pub fn v_power_rec_table(n_max: usize, p: Params) -> Vec<f64> {
    let lambda = p.lambda();
    let binom = binomial_table(n_max);
    let defects: Vec<f64> = (0..=n_max).map(|n| root_defect(lambda, n)).collect();
    let mut table = Vec::with_capacity(n_max + 1);
    table.push(2.0);
    for (big_n, row) in binom.iter().enumerate().skip(1) {
        let mut acc = 2.0;
        for (n, &t) in table.iter().enumerate().skip(1) {
            acc += row[n] * defects[n] * t;
        }
        table.push(acc / root_gap(lambda, big_n));
    }
    table
}

/// Entry `(row, col)` of the lower-Hessenberg matrix behind `∫V^N`. Row `i`
/// corresponds to the `(i+1)`-st equation: a leading `1`, then
/// `C(i+1, k) λ^{2k}/(1 + √(1-λ^{2k}))`, then `-√(1-λ^{2(i+1)})` on the
/// superdiagonal.
fn power_matrix_entry(binom: &[Vec<f64>], lambda: f64, row: usize, col: usize) -> f64 {
    if col == 0 {
        1.0
    } else if col <= row {
        binom[row + 1][col] * root_defect(lambda, col)
    } else if col == row + 1 {
        -root_gap(lambda, row + 1)
    } else {
        0.0
    }
}

/// `2 / Π_{n=1}^{N} √(1 - λ^{2n})`.
fn power_prefactor(lambda: f64, n: usize) -> f64 {
    2.0 / (1..=n).map(|k| root_gap(lambda, k)).product::<f64>()
}

fn check_power_order(n: usize) -> Result<()> {
    if n > MAX_POWER_ORDER {
        Err(Error::OrderTooLarge {
            order: n,
            max: MAX_POWER_ORDER,
        })
    } else {
        Ok(())
    }
}

/// `∫_{-1}^{1} V^N dx` as `2/Π√(1-λ^{2n})` times an `N × N` lower-Hessenberg
/// determinant, evaluated with the leading-minor recurrence.
pub fn v_power_det(n: usize, p: Params) -> Result<f64> {
    check_power_order(n)?;
    let lambda = p.lambda();
    let binom = binomial_table(n + 1);
    let det = hessenberg_det(n, |i, j| power_matrix_entry(&binom, lambda, i, j));
    Ok(power_prefactor(lambda, n) * det)
}

/// `∫ P(V) dx` from the `(N+1) × (N+1)` bordered determinant whose last row
/// holds the coefficients of `P`.
pub fn v_poly_integral_bordered(poly: &Poly, p: Params) -> Result<Complex64> {
    let n = match poly.degree() {
        Some(n) => n,
        None => return Ok(Complex64::new(0.0, 0.0)),
    };
    check_power_order(n)?;
    let lambda = p.lambda();
    let binom = binomial_table(n + 1);
    let det = hessenberg_det(n + 1, |i, j| {
        if i == n {
            poly.coeff(j)
        } else {
            Complex64::new(power_matrix_entry(&binom, lambda, i, j), 0.0)
        }
    });
    Ok(det * power_prefactor(lambda, n))
}

/// `Σ p_n ∫V^n`, the last-row cofactor expansion of the bordered determinant.
pub fn v_poly_integral_cofactor(poly: &Poly, p: Params) -> Result<Complex64> {
    let n = match poly.degree() {
        Some(n) => n,
        None => return Ok(Complex64::new(0.0, 0.0)),
    };
    check_power_order(n)?;
    let powers = v_power_rec_table(n, p);
    Ok(poly
        .coeffs()
        .iter()
        .zip(&powers)
        .map(|(c, i)| c * *i)
        .sum())
}

/// `∫_{-1}^{1} P(V(x)) dx`.
///
/// Both the bordered determinant and the cofactor sum are evaluated; a
/// relative disagreement above [`ROUTE_TOL`] is reported as an error.
pub fn v_poly_integral(poly: &Poly, p: Params) -> Result<Complex64> {
    let bordered = v_poly_integral_bordered(poly, p)?;
    let cofactor = v_poly_integral_cofactor(poly, p)?;
    let powers = v_power_rec_table(poly.degree().unwrap_or(0), p);
    let scale: f64 = poly
        .coeffs()
        .iter()
        .zip(&powers)
        .map(|(c, i)| c.norm() * i)
        .sum();
    if (bordered - cofactor).norm() > ROUTE_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::RouteDisagreement {
            what: "polynomial of V: bordered determinant vs cofactor sum",
            lhs: bordered.norm(),
            rhs: cofactor.norm(),
        });
    }
    Ok(cofactor)
}

fn check_unit_circle(z: Complex64) -> Result<()> {
    if (z.norm() - 1.0).abs() > 1e-12 || !z.re.is_finite() || !z.im.is_finite() {
        Err(Error::NotOnUnitCircle { re: z.re, im: z.im })
    } else {
        Ok(())
    }
}

/// `(1 - λ(z⁻¹R₋ + zR₊)/2) P`, applied through polynomial composition.
pub fn forward_operator(poly: &Poly, z: Complex64, p: Params) -> Poly {
    let half_lambda = Complex64::new(p.lambda() / 2.0, 0.0);
    let plus = poly.half_shift_plus().scale(half_lambda * z);
    let minus = poly.half_shift_minus().scale(half_lambda / z);
    &(poly - &plus) - &minus
}

/// Image of `x^n` under the forward operator has coefficient
/// `a(n, j)` at `x^j`: `1 - λ(z + z⁻¹)/2^{n+1}` on the diagonal and
/// `-λ C(n,j) ((-1)^{n-j} z⁻¹ + z) / 2^{n+1}` below it.
fn operator_coefficient(
    binom: &[Vec<f64>],
    lambda: f64,
    z: Complex64,
    zinv: Complex64,
    n: usize,
    j: usize,
) -> Complex64 {
    let scale = lambda / powi(2.0, n as u32 + 1);
    if j == n {
        Complex64::new(1.0, 0.0) - (z + zinv) * scale
    } else if j < n {
        let alt = if (n - j) % 2 == 0 { zinv } else { -zinv };
        -(alt + z) * (scale * binom[n][j])
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// `(1 - λ(z⁻¹R₋ + zR₊)/2)⁻¹ P` for `|z| = 1`.
///
/// On monomials the operator is triangular with diagonal
/// `1 - λ(z+z⁻¹)/2^{n+1}`, which stays at least `1 - |λ|` away from zero, so a
/// single triangular solve inverts it.
pub fn resolvent_poly(poly: &Poly, z: Complex64, p: Params) -> Result<Poly> {
    check_unit_circle(z)?;
    let n = match poly.degree() {
        Some(n) => n,
        None => return Ok(Poly::zero()),
    };
    let binom = binomial_table(n);
    let zinv = z.inv();
    let lambda = p.lambda();
    // Coefficient of x^j in the image of Σ q_m x^m is Σ_{m≥j} q_m a(m, j).
    let q = back_substitute(
        n + 1,
        |j, m| operator_coefficient(&binom, lambda, z, zinv, m, j),
        poly.coeffs(),
    );
    Ok(Poly::new(q))
}

/// Number of circle nodes that make the periodic trapezoid exact to double
/// precision for the resolvent integrand at this `λ`.
///
/// The integrand is analytic in `|z| > ρ` with `ρ = |λ|/(1 + √(1-λ²))`, so the
/// trapezoid error decays like `ρ^K`.
pub fn contour_nodes(p: Params) -> usize {
    let a = p.abs_lambda();
    if a == 0.0 {
        return 8;
    }
    let rho = a / (1.0 + sqrt(1.0 - a * a));
    let k = libm::ceil(40.0 / -libm::log(rho)) as usize;
    k.clamp(8, 4096) + 8
}

/// `∫_{-1}^{1} V(x) P(x) dx` as the circle average of `∫ (resolvent P)`,
/// discretised by the periodic trapezoid on `nodes` points.
pub fn v_integral_contour(poly: &Poly, p: Params, nodes: usize) -> Result<Complex64> {
    if nodes == 0 {
        return Err(Error::InvalidArgument("contour needs at least one node"));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let theta = 2.0 * core::f64::consts::PI * (k as f64 + 0.5) / nodes as f64;
        let z = Complex64::new(math::cos(theta), math::sin(theta));
        total += resolvent_poly(poly, z, p)?.integrate_unit();
    }
    Ok(total / nodes as f64)
}

/// `∫_{-1}^{1} V(x) x^N dx` via [`v_integral_contour`] with
/// [`contour_nodes`] points. Any `N` is accepted; odd orders come out as
/// rounding noise around zero.
pub fn v_moment_contour(n: usize, p: Params) -> Result<f64> {
    Ok(v_integral_contour(&Poly::monomial(n), p, contour_nodes(p))?.re)
}

/// `∫_{-1}^{1} V(x) x^N dx` for even `N` from the residue sum
///
/// `Σ_{j=0}^{N} 2 / (2^j σ_j Π_{n≠j}(1 - 2^{n-j})) · det A_j`,
/// `σ_j = √(1 - λ²/4^j)`,
///
/// where `A_j` is `(N+1) × (N+1)`: its first `N` columns are the lower
/// triangle `C(i,k)` (times `-σ_j` when `i-k` is odd) with diagonal
/// `1 - 2^{i-j}`, and its last column is `2^i/(i+1)` on even rows, zero on odd.
pub fn v_moment(n: usize, p: Params) -> Result<f64> {
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    if n > MAX_MOMENT_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: MAX_MOMENT_ORDER,
        });
    }
    if p.is_trivial() {
        return Ok(2.0 / (n as f64 + 1.0));
    }
    let lambda = p.lambda();
    let binom = binomial_table(n);
    let size = n + 1;
    let mut total = 0.0;
    for j in 0..=n {
        let sigma = sqrt(1.0 - lambda * lambda / powi(4.0, j as u32));
        let ratio = |m: usize| libm::ldexp(1.0, m as i32 - j as i32);
        let denom: f64 = (0..=n).filter(|&m| m != j).map(|m| 1.0 - ratio(m)).product();
        let prefactor = 2.0 / (ratio(0).recip() * sigma * denom);
        let mut a = vec![0.0; size * size];
        for i in 0..size {
            for k in 0..n {
                a[i * size + k] = if k < i {
                    let b = binom[i][k];
                    if (i - k) % 2 == 1 {
                        -b * sigma
                    } else {
                        b
                    }
                } else if k == i {
                    1.0 - ratio(i)
                } else {
                    0.0
                };
            }
            a[i * size + n] = if i % 2 == 0 {
                powi(2.0, i as u32) / (i as f64 + 1.0)
            } else {
                0.0
            };
        }
        total += prefactor * lu_det(a, size);
    }
    Ok(total)
}

/// Entry `(k, j)` of the lower-triangular matrix of `1 - λ(R₊ + R₋)/2` on
/// `1, x², x⁴, …`: diagonal `1 - λ/4^k`, below it `-λ C(2k, 2j)/4^k`.
fn even_transfer_entry(binom: &[Vec<f64>], lambda: f64, k: usize, j: usize) -> f64 {
    let scale = lambda / powi(4.0, k as u32);
    if j == k {
        1.0 - scale
    } else if j < k {
        -scale * binom[2 * k][2 * j]
    } else {
        0.0
    }
}

fn u_correction(n: usize, lambda: f64) -> f64 {
    2.0 / ((1.0 - lambda) * (n as f64 + 1.0))
}

/// `∫ U x^N` by forward substitution of the even transfer system against the
/// supplied `∫ V x^{2k}`, `k = 0..=N/2`.
pub fn u_moment_solve(n: usize, p: Params, even_v_moments: &[f64]) -> Result<f64> {
    let size = check_u_inputs(n, even_v_moments)?;
    let lambda = p.lambda();
    let binom = binomial_table(n);
    let y = forward_substitute(
        size,
        |k, j| even_transfer_entry(&binom, lambda, k, j),
        &even_v_moments[..size],
    );
    Ok(y[size - 1] - u_correction(n, lambda))
}

/// `∫ U x^N` as the determinant of the even transfer matrix with its last
/// column replaced by the `V` moments, over the product of its diagonal.
pub fn u_moment_det(n: usize, p: Params, even_v_moments: &[f64]) -> Result<f64> {
    let size = check_u_inputs(n, even_v_moments)?;
    let lambda = p.lambda();
    let binom = binomial_table(n);
    let mut a = vec![0.0; size * size];
    for k in 0..size {
        for j in 0..size - 1 {
            a[k * size + j] = even_transfer_entry(&binom, lambda, k, j);
        }
        a[k * size + size - 1] = even_v_moments[k];
    }
    let diag: f64 = (0..size).map(|k| 1.0 - lambda / powi(4.0, k as u32)).product();
    Ok(lu_det(a, size) / diag - u_correction(n, lambda))
}

fn check_u_inputs(n: usize, even_v_moments: &[f64]) -> Result<usize> {
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    let size = n / 2 + 1;
    if even_v_moments.len() < size {
        return Err(Error::InvalidArgument("not enough even V moments"));
    }
    Ok(size)
}

/// `∫ V x^{2k}` for `k = 0..=n/2` from [`v_moment`].
pub fn even_v_moments(n: usize, p: Params) -> Result<Vec<f64>> {
    (0..=n / 2).map(|k| v_moment(2 * k, p)).collect()
}

/// `∫_{-1}^{1} U(x) x^N dx` for even `N`.
///
/// The solve form and the determinant form are both evaluated; relative
/// disagreement above [`ROUTE_TOL`] is an error.
pub fn u_moment(n: usize, p: Params) -> Result<f64> {
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    if p.is_trivial() {
        return Ok(0.0);
    }
    let moments = even_v_moments(n, p)?;
    let solved = u_moment_solve(n, p, &moments)?;
    let det = u_moment_det(n, p, &moments)?;
    if !math::rel_close(solved, det, ROUTE_TOL, f64::MIN_POSITIVE) {
        return Err(Error::RouteDisagreement {
            what: "U moment: solve vs determinant",
            lhs: solved,
            rhs: det,
        });
    }
    Ok(solved)
}

/// `∫ V x^n` for any `n ≤` [`MAX_MOMENT_ORDER`]: zero for odd `n`.
fn v_moment_any(n: usize, p: Params) -> Result<f64> {
    if n % 2 == 1 {
        Ok(0.0)
    } else {
        v_moment(n, p)
    }
}

/// `∫_{-1}^{1} U(x) f(x) dx` for a polynomial `f`, as
/// `∫ V g - (1/(1-λ)) ∫ f` with `g = (1 - λ(R₊ + R₋)/2)⁻¹ f`.
///
/// `g` is the circle resolvent at `z = 1`.
pub fn u_poly_integral(f: &Poly, p: Params) -> Result<Complex64> {
    if p.is_trivial() || f.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let g = resolvent_poly(f, Complex64::new(1.0, 0.0), p)?;
    let mut paired = Complex64::new(0.0, 0.0);
    for (k, c) in g.coeffs().iter().enumerate() {
        paired += c * v_moment_any(k, p)?;
    }
    Ok(paired - f.integrate_unit() / (1.0 - p.lambda()))
}

/// `∫ U P` for the even polynomial `P = Σ_k q_k x^{2k}` through the bordered
/// determinant: the even transfer matrix, the `V` moments as last column, and
/// `q` as last row, divided by minus the diagonal product.
pub fn u_even_poly_integral(even_coeffs: &[f64], p: Params) -> Result<f64> {
    if even_coeffs.is_empty() {
        return Ok(0.0);
    }
    let half = even_coeffs.len() - 1;
    let n = 2 * half;
    let lambda = p.lambda();
    let moments = even_v_moments(n, p)?;
    let binom = binomial_table(n);
    let size = half + 2;
    let mut a = vec![0.0; size * size];
    for k in 0..=half {
        for j in 0..=half {
            a[k * size + j] = even_transfer_entry(&binom, lambda, k, j);
        }
        a[k * size + size - 1] = moments[k];
        a[(size - 1) * size + k] = even_coeffs[k];
    }
    let diag: f64 = (0..=half).map(|k| 1.0 - lambda / powi(4.0, k as u32)).product();
    let correction: f64 = even_coeffs
        .iter()
        .enumerate()
        .map(|(k, q)| 2.0 * q / ((1.0 - lambda) * (2 * k + 1) as f64))
        .sum();
    Ok(lu_det(a, size) / -diag - correction)
}

/// Closed-form moments for one `λ`, orders `0..=n_max`. Odd moments are
/// stored as exact zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub lambda: f64,
    /// `∫ V^n`.
    pub v_powers: Vec<f64>,
    /// `∫ V x^n`.
    pub v_moments: Vec<f64>,
    /// `∫ U x^n`.
    pub u_moments: Vec<f64>,
}

impl MomentTable {
    pub fn compute(p: Params, n_max: usize) -> Result<Self> {
        check_power_order(n_max)?;
        let v_powers = v_power_rec_table(n_max, p);
        let even = even_v_moments(n_max, p)?;
        let mut v_moments = vec![0.0; n_max + 1];
        let mut u_moments = vec![0.0; n_max + 1];
        for n in (0..=n_max).step_by(2) {
            v_moments[n] = even[n / 2];
            u_moments[n] = if p.is_trivial() {
                0.0
            } else {
                u_moment_solve(n, p, &even)?
            };
        }
        Ok(Self {
            lambda: p.lambda(),
            v_powers,
            v_moments,
            u_moments,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(l: f64) -> Params {
        Params::new(l).unwrap()
    }

    fn golden_v1(l: f64) -> f64 {
        2.0 / (1.0 - l * l).sqrt()
    }

    fn golden_v2(l: f64) -> f64 {
        let s2 = (1.0 - l.powi(2)).sqrt();
        let s4 = (1.0 - l.powi(4)).sqrt();
        4.0 / (s4 * s2) - 2.0 / s4
    }

    fn golden_vx2(l: f64) -> f64 {
        let s = (1.0 - l * l).sqrt();
        4.0 * s / 3.0 + 2.0 / (3.0 * s) - 4.0 * (1.0 - l * l / 4.0).sqrt()
            + 8.0 * (1.0 - l * l / 16.0).sqrt() / 3.0
    }

    #[test]
    fn recurrence_first_orders() {
        for &l in &[0.3, 0.5, -0.7] {
            assert!((v_power_rec(1, p(l)) - golden_v1(l)).abs() < 1e-14);
            assert!((v_power_rec(2, p(l)) - golden_v2(l)).abs() < 1e-14);
        }
        for n in 0..8 {
            assert_eq!(v_power_rec(n, p(0.0)), 2.0);
        }
    }

    #[test]
    fn determinant_first_orders() {
        assert!((v_power_det(1, p(0.5)).unwrap() - golden_v1(0.5)).abs() < 1e-14);
        assert!((v_power_det(2, p(0.5)).unwrap() - golden_v2(0.5)).abs() < 1e-14);
        assert_eq!(v_power_det(0, p(0.5)).unwrap(), 2.0);
        assert_eq!(v_power_det(5, p(0.0)).unwrap(), 2.0);
    }

    #[test]
    fn determinant_agrees_with_recurrence() {
        for n in 1..=12 {
            let a = v_power_det(n, p(0.7)).unwrap();
            let b = v_power_rec(n, p(0.7));
            assert!((a - b).abs() <= 1e-10 * b, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn power_order_guard() {
        assert!(matches!(
            v_power_det(65, p(0.5)),
            Err(Error::OrderTooLarge { order: 65, .. })
        ));
    }

    #[test]
    fn polynomial_of_v_examples() {
        let one = v_poly_integral(&Poly::from_real(&[1.0]), p(0.5)).unwrap();
        assert!((one.re - 2.0).abs() < 1e-15);
        let x = v_poly_integral(&Poly::from_real(&[0.0, 1.0]), p(0.5)).unwrap();
        assert!((x.re - golden_v1(0.5)).abs() < 1e-14);
        let q = v_poly_integral(&Poly::from_real(&[0.0, -1.0, 1.0]), p(0.5)).unwrap();
        assert!((q.re - (golden_v2(0.5) - golden_v1(0.5))).abs() < 1e-14);
        assert_eq!(
            v_poly_integral(&Poly::zero(), p(0.5)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn complex_coefficients_pass_through() {
        let poly = Poly::new(vec![Complex64::new(0.0, 1.0), Complex64::new(2.0, -1.0)]);
        let got = v_poly_integral(&poly, p(0.4)).unwrap();
        let i1 = golden_v1(0.4);
        assert!((got - Complex64::new(2.0 * i1, 2.0 - i1)).norm() < 1e-13);
    }

    #[test]
    fn resolvent_of_zero_weight_is_identity() {
        let poly = Poly::from_real(&[0.2, -1.0, 0.0, 3.0]);
        let z = Complex64::new(0.6, 0.8);
        let r = resolvent_poly(&poly, z, p(0.0)).unwrap();
        assert!(r.max_coeff_distance(&poly) < 1e-15);
    }

    #[test]
    fn resolvent_of_constant_at_one() {
        let r = resolvent_poly(&Poly::from_real(&[1.0]), Complex64::new(1.0, 0.0), p(0.5)).unwrap();
        assert!(r.max_coeff_distance(&Poly::from_real(&[2.0])) < 1e-15);
    }

    #[test]
    fn resolvent_round_trip() {
        let poly = Poly::new(
            (0..9)
                .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos()))
                .collect(),
        );
        let z = Complex64::new((2.1f64).cos(), (2.1f64).sin());
        let r = resolvent_poly(&poly, z, p(-0.8)).unwrap();
        let back = forward_operator(&r, z, p(-0.8));
        assert!(back.max_coeff_distance(&poly) < 1e-12);
    }

    #[test]
    fn resolvent_rejects_off_circle() {
        assert!(matches!(
            resolvent_poly(&Poly::monomial(1), Complex64::new(0.5, 0.0), p(0.5)),
            Err(Error::NotOnUnitCircle { .. })
        ));
    }

    #[test]
    fn moment_zero_and_two() {
        for &l in &[0.3, 0.5, 0.7] {
            assert!((v_moment(0, p(l)).unwrap() - golden_v1(l)).abs() < 1e-13);
            let m2 = v_moment(2, p(l)).unwrap();
            assert!((m2 - golden_vx2(l)).abs() < 1e-13 * golden_vx2(l), "l={l}");
        }
        assert_eq!(v_moment(4, p(0.0)).unwrap(), 0.4);
        assert_eq!(v_moment(3, p(0.5)), Err(Error::OddOrder(3)));
        assert!(v_moment(42, p(0.5)).is_err());
    }

    #[test]
    fn contour_route_matches_residue_sum() {
        for &l in &[0.3, 0.5, 0.9, -0.6] {
            for n in (0..=6).step_by(2) {
                let a = v_moment(n, p(l)).unwrap();
                let b = v_moment_contour(n, p(l)).unwrap();
                assert!((a - b).abs() < 1e-10 * b, "l={l} n={n}: {a} vs {b}");
            }
            assert!(v_moment_contour(3, p(l)).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn contour_route_at_high_order() {
        // 50-digit evaluations of the residue sum.
        let cases = [
            (0.3, 16, 0.117_648_416_641_851_38),
            (0.5, 20, 0.095_255_667_392_566_86),
            (0.9, 30, 0.071_149_299_857_015_88),
        ];
        for (l, n, want) in cases {
            let got = v_moment_contour(n, p(l)).unwrap();
            assert!((got - want).abs() < 1e-14 * want, "l={l} n={n}: {got}");
        }
    }

    #[test]
    fn u_moment_low_orders() {
        for &l in &[0.3, 0.5, 0.7] {
            let s = (1.0f64 - l * l).sqrt();
            let want0 = 2.0 / ((1.0 - l) * s) - 2.0 / (1.0 - l);
            assert!((u_moment(0, p(l)).unwrap() - want0).abs() < 1e-13);
            let inner = 4.0 * s / 3.0 - 4.0 * (1.0 - l * l / 4.0).sqrt()
                + 8.0 * (1.0 - l * l / 16.0).sqrt() / 3.0;
            let want2 = inner / (1.0 - l / 4.0) + 2.0 / (3.0 * (1.0 - l) * s)
                - 2.0 / (3.0 * (1.0 - l));
            assert!((u_moment(2, p(l)).unwrap() - want2).abs() < 1e-13);
        }
        for n in (0..10).step_by(2) {
            assert_eq!(u_moment(n, p(0.0)).unwrap(), 0.0);
        }
    }

    #[test]
    fn u_moment_forms_agree() {
        for &l in &[0.3, 0.5, 0.7, -0.5] {
            let m = even_v_moments(10, p(l)).unwrap();
            for n in (0..=10).step_by(2) {
                let a = u_moment_solve(n, p(l), &m).unwrap();
                let b = u_moment_det(n, p(l), &m).unwrap();
                assert!((a - b).abs() <= 1e-10 * a.abs(), "l={l} n={n}");
            }
        }
    }

    #[test]
    fn polynomial_pairings_reduce_to_moments() {
        for &l in &[0.3, 0.5, -0.7] {
            for n in (0..=8).step_by(2) {
                let want = u_moment(n, p(l)).unwrap();
                let general = u_poly_integral(&Poly::monomial(n), p(l)).unwrap();
                assert!((general.re - want).abs() < 1e-11 * want.abs(), "l={l} n={n}");
                assert!(general.im.abs() < 1e-15);
                let mut even = vec![0.0; n / 2 + 1];
                even[n / 2] = 1.0;
                let bordered = u_even_poly_integral(&even, p(l)).unwrap();
                assert!((bordered - want).abs() < 1e-11 * want.abs(), "l={l} n={n}");
            }
            assert!(u_poly_integral(&Poly::monomial(3), p(l)).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn table_has_exact_odd_zeros() {
        let t = MomentTable::compute(p(0.5), 7).unwrap();
        assert_eq!(t.v_powers[0], 2.0);
        for n in (1..=7).step_by(2) {
            assert_eq!(t.v_moments[n], 0.0);
            assert_eq!(t.u_moments[n], 0.0);
        }
    }
}
