use foothills_core::bernoulli::{monomial_in_p, p_poly, p_poly_table, u_moment_bernoulli, RationalPoly};
use foothills_core::closedform::{
    forward_operator, resolvent_poly, u_moment, v_moment, v_moment_contour, v_poly_integral_bordered,
    v_poly_integral_cofactor, v_power_det, v_power_rec,
};
use foothills_core::fourier::{cosine_transform, kernel_cf, kernel_series, CosineSeries};
use foothills_core::{BigRational, Complex64, Params, Poly};
use proptest::prelude::*;

const LAMBDAS: [f64; 4] = [0.3, 0.5, 0.7, -0.5];

fn complex_poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_degree + 1)
        .prop_map(|c| Poly::new(c.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()))
}

fn unit_circle() -> impl Strategy<Value = Complex64> {
    (0.0f64..std::f64::consts::TAU).prop_map(|t| Complex64::new(t.cos(), t.sin()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn resolvent_round_trip(poly in complex_poly(10), z in unit_circle(), l in -0.95f64..0.95) {
        let p = Params::new(l).unwrap();
        let r = resolvent_poly(&poly, z, p).unwrap();
        let back = forward_operator(&r, z, p);
        prop_assert!(back.max_coeff_distance(&poly) < 1e-12);
    }

    #[test]
    fn shifted_pair_norm_bound(f in complex_poly(8), z in unit_circle()) {
        let g = &f.half_shift_plus().scale(z) + &f.half_shift_minus().scale(z.inv());
        prop_assert!(g.l2_norm_sq() <= 4.0 * f.l2_norm_sq() + 1e-10);
    }

    #[test]
    fn bordered_determinant_is_cofactor_sum(poly in complex_poly(10), l in -0.9f64..0.9) {
        let p = Params::new(l).unwrap();
        let a = v_poly_integral_bordered(&poly, p).unwrap();
        let b = v_poly_integral_cofactor(&poly, p).unwrap();
        let scale: f64 = poly.coeffs().iter().enumerate()
            .map(|(n, c)| c.norm() * v_power_rec(n, p)).sum();
        prop_assert!((a - b).norm() <= 1e-10 * scale);
    }

    #[test]
    fn kernel_routes_agree(phi in -3.2f64..3.2, omega in -20.0f64..20.0, l in -0.8f64..0.8) {
        let p = Params::new(l).unwrap();
        prop_assume!(kernel_cf(phi, omega, p, 80).is_ok());
        let s = kernel_series(phi, omega, p, 1e-15).value;
        let c = kernel_cf(phi, omega, p, 80).unwrap();
        prop_assert!((s - c).abs() < 1e-8, "series {} fraction {}", s, c);
    }
}

#[test]
fn determinant_and_recurrence_agree() {
    for &l in &LAMBDAS {
        let p = Params::new(l).unwrap();
        for n in 1..=12 {
            let a = v_power_det(n, p).unwrap();
            let b = v_power_rec(n, p);
            assert!((a - b).abs() <= 1e-10 * b, "l={l} n={n}");
        }
    }
}

#[test]
fn u_moment_routes_agree() {
    for &l in &LAMBDAS {
        let p = Params::new(l).unwrap();
        for n in (0..=10).step_by(2) {
            let a = u_moment(n, p).unwrap();
            let b = u_moment_bernoulli(n, p).unwrap();
            assert!((a - b).abs() <= 1e-9 * a.abs(), "l={l} n={n}");
        }
    }
}

#[test]
fn moment_routes_agree() {
    for &l in &LAMBDAS {
        let p = Params::new(l).unwrap();
        for n in (0..=6).step_by(2) {
            let a = v_moment(n, p).unwrap();
            let b = v_moment_contour(n, p).unwrap();
            assert!((a - b).abs() <= 1e-10 * a, "l={l} n={n}");
        }
    }
}

#[test]
fn appell_derivative() {
    let table = p_poly_table(20);
    for n in 1..=20 {
        let k = BigRational::from_integer(n.into());
        assert_eq!(table[n].derivative(), table[n - 1].scale(&k), "n={n}");
    }
}

#[test]
fn averaging_eigenrelation() {
    for n in 0..=16u32 {
        let pn = p_poly(n as usize);
        let eig = BigRational::new(2.into(), (1u64 << n).into());
        assert_eq!(pn.averaging_sum(), pn.scale(&eig), "n={n}");
    }
}

#[test]
fn monomials_round_trip_through_p() {
    let table = p_poly_table(16);
    for n in (0..=16).step_by(2) {
        let mut sum = RationalPoly::zero();
        for (k, w) in monomial_in_p(n).unwrap() {
            sum = sum.add(&table[k].scale(&w));
        }
        assert_eq!(sum, RationalPoly::monomial(n));
    }
}

#[test]
fn transform_is_even_in_frequency() {
    let p = Params::new(0.5).unwrap();
    for &w in &[0.5, 1.0, 7.3, 40.0] {
        let a = cosine_transform(w, p, 1e-12).unwrap();
        let b = cosine_transform(-w, p, 1e-12).unwrap();
        assert!((a - b).abs() < 1e-13, "w={w}");
    }
}

#[test]
fn fourier_energy_bounded_by_square_integral() {
    let p = Params::new(0.5).unwrap();
    let cs = CosineSeries::compute(p, 120, 1e-12).unwrap();
    let total = v_power_rec(2, p);
    let mut last = 0.0;
    for k in 0..=120 {
        let e = cs.truncated(k).energy();
        assert!(e >= last);
        assert!(e <= total + 1e-6, "k={k}: {e} > {total}");
        last = e;
    }
}
