//! Closed forms against the cell oracle at a moderate depth.

use foothills_core::bernoulli::{p_poly, transfer_factor};
use foothills_core::closedform::{u_moment, v_moment, v_power_det};
use foothills_core::fourier::cosine_transform;
use foothills_core::oracle::{integrate_weighted_many, oracle_moments, Kernel, Which};
use foothills_core::Params;

const DEPTH: usize = 16;

#[test]
fn moments_within_oracle_bounds() {
    for &l in &[0.3, 0.5, -0.6] {
        let p = Params::new(l).unwrap();
        let o = oracle_moments(p, DEPTH, 6).unwrap();
        for n in 0..=6 {
            let vp = v_power_det(n, p).unwrap();
            assert!(o.v_powers[n].agrees_with(vp, 1e-8), "power l={l} n={n}");
            let (vm, um) = if n % 2 == 0 {
                (v_moment(n, p).unwrap(), u_moment(n, p).unwrap())
            } else {
                (0.0, 0.0)
            };
            assert!(o.v_moments[n].agrees_with(vm, 1e-8), "V moment l={l} n={n}");
            assert!(o.u_moments[n].agrees_with(um, 1e-8), "U moment l={l} n={n}");
        }
    }
}

#[test]
fn bernoulli_pairing_within_oracle_bounds() {
    let p = Params::new(0.5).unwrap();
    let kernels: Vec<Kernel> = (0..=6)
        .map(|n| Kernel::polynomial(&p_poly(n).to_poly().coeffs().iter().map(|c| c.re).collect::<Vec<_>>()))
        .collect();
    let v = integrate_weighted_many(&kernels, Which::V, p, DEPTH).unwrap();
    let u = integrate_weighted_many(&kernels, Which::U, p, DEPTH).unwrap();
    for n in 0..=6 {
        let delta = if n == 0 { 2.0 / (1.0 - p.lambda()) } else { 0.0 };
        let rhs = transfer_factor(n, p) * v[n].value - delta;
        let bound = u[n].truncation_bound + transfer_factor(n, p) * v[n].truncation_bound + 1e-10;
        assert!((u[n].value - rhs).abs() <= bound, "n={n}");
    }
}

#[test]
fn cosine_transform_within_oracle_bound() {
    let p = Params::new(0.5).unwrap();
    let w = std::f64::consts::PI;
    let o = integrate_weighted_many(&[Kernel::cos(1.0, w)], Which::V, p, DEPTH).unwrap();
    let c = cosine_transform(w, p, 1e-12).unwrap();
    assert!(o[0].agrees_with(c, 1e-10));
}
