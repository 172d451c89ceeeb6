//! Every identity checked in one run, as a flat pass/fail report.
//!
//! Entries comparing a closed form with the cell oracle allow the oracle's
//! truncation bound plus [`ORACLE_SLACK`]; route comparisons and exact
//! algebraic checks use fixed tolerances.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use foothills_core::bernoulli::{
    c_coeffs, p_poly, p_poly_table, transfer_factor, u_moment_bernoulli, RationalPoly,
};
use foothills_core::closedform::{
    forward_operator, resolvent_poly, u_even_poly_integral, u_moment, u_poly_integral,
    v_integral_contour, v_moment, v_moment_contour, v_poly_integral_bordered,
    v_poly_integral_cofactor, v_power_det, v_power_rec, contour_nodes,
};
use foothills_core::fourier::{cosine_transform, kernel_cf, kernel_series, CosineSeries};
use foothills_core::oracle::{
    u_at, u_tail_bound, u_trunc, v_at, v_tail_bound, v_trunc, return_steps, Kernel, OracleResult,
    Which,
};
use foothills_core::{BigRational, Complex64, DigitExpansion, Params, Poly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{num, CsvRow};
use crate::parallel;

/// Rounding allowance on top of the oracle's truncation bound.
pub const ORACLE_SLACK: f64 = 1e-8;
/// Size added to the left-hand side of a perturbed identity.
pub const PERTURBATION: f64 = 1e-3;
const RANDOM_CASES: usize = 100;

/// Identity ids the report always contains.
pub const IDENTITY_IDS: &[&str] = &[
    "digit-expansion",
    "v-pointwise-alternating",
    "odd-step-returns",
    "parity",
    "pair-swap",
    "v-power-bordered",
    "v-power-hessenberg",
    "v-power-recurrence",
    "v-power-routes",
    "resolvent-contour",
    "resolvent-round-trip",
    "resolvent-norm-bound",
    "v-moment-odd",
    "v-moment-residue",
    "v-moment-residue-vs-contour",
    "cosine-transform",
    "kernel-series-vs-fraction",
    "fourier-energy-bound",
    "u-pointwise-alternating",
    "u-shift-decomposition",
    "shift-operator",
    "u-polynomial-pairing",
    "u-even-polynomial-determinant",
    "u-moment-transfer",
    "u-moment-odd",
    "u-bernoulli-pairing",
    "u-moment-bernoulli",
    "bernoulli-appell",
    "bernoulli-window-average",
    "bernoulli-averaging-eigen",
    "bernoulli-coefficients",
    "bernoulli-exponential",
    "closing-integrals",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub identity_id: String,
    pub lhs_value: f64,
    pub rhs_value: f64,
    pub abs_error: f64,
    pub allowed_bound: f64,
    pub pass: bool,
}

impl CsvRow for ReportEntry {
    const HEADER: &'static str = "identity_id,lhs_value,rhs_value,abs_error,allowed_bound,pass";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.identity_id,
            num(self.lhs_value),
            num(self.rhs_value),
            num(self.abs_error),
            num(self.allowed_bound),
            self.pass
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub entries: Vec<ReportEntry>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(|e| e.pass)
    }

    /// Distinct ids with any `[case]` suffix removed.
    pub fn identity_ids(&self) -> BTreeSet<&str> {
        self.entries
            .iter()
            .map(|e| e.identity_id.split('[').next().unwrap_or(""))
            .collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidateOptions {
    /// Shift the left-hand side of this identity by [`PERTURBATION`].
    pub perturb: Option<String>,
}

struct Report {
    entries: Vec<ReportEntry>,
    perturb: Option<String>,
}

impl Report {
    fn check(&mut self, id: &str, case: Option<String>, lhs: f64, rhs: f64, bound: f64) {
        let lhs = if self.perturb.as_deref() == Some(id) {
            lhs + PERTURBATION
        } else {
            lhs
        };
        let abs_error = (lhs - rhs).abs();
        self.entries.push(ReportEntry {
            identity_id: match case {
                Some(c) => format!("{id}[{c}]"),
                None => id.to_string(),
            },
            lhs_value: lhs,
            rhs_value: rhs,
            abs_error,
            allowed_bound: bound,
            pass: abs_error <= bound,
        });
    }

    fn against_oracle(&mut self, id: &str, case: Option<String>, closed: f64, o: &OracleResult) {
        self.check(id, case, closed, o.value, o.truncation_bound + ORACLE_SLACK);
    }

    /// Relative comparison: the bound scales with the larger magnitude.
    fn relative(&mut self, id: &str, case: Option<String>, lhs: f64, rhs: f64, rel: f64) {
        let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        self.check(id, case, lhs, rhs, rel * scale);
    }

    /// A count of violations that must be zero.
    fn exact(&mut self, id: &str, case: Option<String>, violations: usize) {
        self.check(id, case, violations as f64, 0.0, 0.0);
    }
}

fn n_case(n: usize) -> Option<String> {
    Some(format!("N={n}"))
}

fn random_signs(rng: &mut ChaCha8Rng, len: usize) -> Vec<i8> {
    (0..len).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect()
}

fn real_coeffs(p: &RationalPoly) -> Vec<f64> {
    p.to_poly().coeffs().iter().map(|c| c.re).collect()
}

fn random_complex_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> Poly {
    let d = rng.random_range(0..=max_degree);
    Poly::new(
        (0..=d)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

fn random_unit(rng: &mut ChaCha8Rng) -> Complex64 {
    let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::new(t.cos(), t.sin())
}

const EXP_RATES: [f64; 3] = [0.5, 1.0, 2.0];
const COS_FREQS: [f64; 4] = [0.0, PI, 2.0 * PI, 2.5];

/// Runs every identity at `cfg`'s `λ`, depth and order.
pub fn run(cfg: &RunConfig, opts: &ValidateOptions) -> CliResult<ValidationReport> {
    cfg.validate()?;
    let p = cfg.params()?;
    let lambda = p.lambda();
    let depth = cfg.depth;
    let n_max = cfg.n_max;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut r = Report {
        entries: Vec::new(),
        perturb: opts.perturb.clone(),
    };

    pointwise(&mut r, &mut rng, p, depth)?;

    let moments = parallel::oracle_moments(p, depth, n_max)?;
    let p_table = p_poly_table(n_max);
    let p_kernels: Vec<Kernel> = p_table.iter().map(|q| Kernel::polynomial(&real_coeffs(q))).collect();

    // Shared V walk: Bernoulli pairings, exponentials, cosines.
    let mut v_kernels = p_kernels.clone();
    v_kernels.extend(EXP_RATES.iter().map(|&w| Kernel::exp(1.0, w)));
    v_kernels.extend(COS_FREQS.iter().map(|&w| Kernel::cos(1.0, w)));
    let v_oracle = parallel::integrate_weighted_many(&v_kernels, Which::V, p, depth)?;
    let (v_pairs, rest) = v_oracle.split_at(n_max + 1);
    let (v_exps, v_coss) = rest.split_at(EXP_RATES.len());

    // Shared U walk: Bernoulli pairings, exponential identity, two polynomials.
    let general = [1.0, 1.0, -3.0, 0.0, 0.5, -1.0];
    let even = [1.0, -2.0, 0.5, 0.25];
    let even_used = &even[..(n_max / 2 + 1).min(even.len())];
    let even_monomial: Vec<f64> = even_used
        .iter()
        .enumerate()
        .flat_map(|(k, &q)| if k == 0 { vec![q] } else { vec![0.0, q] })
        .collect();
    let mut u_kernels = p_kernels;
    u_kernels.extend(EXP_RATES.iter().map(|&w| {
        Kernel::exp(1.0, w).plus(Kernel::exp(-lambda * (w / 2.0).cosh(), w / 2.0))
    }));
    u_kernels.push(Kernel::polynomial(&general));
    u_kernels.push(Kernel::polynomial(&even_monomial));
    let u_oracle = parallel::integrate_weighted_many(&u_kernels, Which::U, p, depth)?;
    let (u_pairs, rest) = u_oracle.split_at(n_max + 1);
    let (u_exps, rest) = rest.split_at(EXP_RATES.len());
    let (u_general, u_even) = (&rest[0], &rest[1]);

    // ∫P(V)
    let weights: Vec<f64> = (0..=n_max).map(|n| if n % 2 == 0 { 1.0 } else { -0.5 } / (n + 1) as f64).collect();
    let pv = Poly::from_real(&weights);
    let bordered = v_poly_integral_bordered(&pv, p)?.re;
    let oracle_pv: f64 = weights.iter().zip(&moments.v_powers).map(|(w, o)| w * o.value).sum();
    let bound_pv: f64 = weights.iter().zip(&moments.v_powers).map(|(w, o)| w.abs() * o.truncation_bound).sum();
    r.check("v-power-bordered", Some("oracle".into()), bordered, oracle_pv, bound_pv + ORACLE_SLACK);
    r.relative(
        "v-power-bordered",
        Some("cofactor".into()),
        bordered,
        v_poly_integral_cofactor(&pv, p)?.re,
        1e-10,
    );
    for n in 0..=n_max {
        r.against_oracle("v-power-hessenberg", n_case(n), v_power_det(n, p)?, &moments.v_powers[n]);
        r.against_oracle("v-power-recurrence", n_case(n), v_power_rec(n, p), &moments.v_powers[n]);
    }
    for n in 1..=12 {
        r.relative("v-power-routes", n_case(n), v_power_det(n, p)?, v_power_rec(n, p), 1e-10);
    }

    // ∫V x^N
    let nodes = contour_nodes(p);
    for n in 0..=n_max {
        let contour = v_integral_contour(&Poly::monomial(n), p, nodes)?.re;
        r.against_oracle("resolvent-contour", n_case(n), contour, &moments.v_moments[n]);
        if n % 2 == 1 {
            r.against_oracle("v-moment-odd", n_case(n), 0.0, &moments.v_moments[n]);
            r.against_oracle("u-moment-odd", n_case(n), 0.0, &moments.u_moments[n]);
        } else {
            let vm = v_moment(n, p)?;
            r.against_oracle("v-moment-residue", n_case(n), vm, &moments.v_moments[n]);
            r.relative("v-moment-residue-vs-contour", n_case(n), vm, v_moment_contour(n, p)?, 1e-10);
            r.against_oracle("u-moment-transfer", n_case(n), u_moment(n, p)?, &moments.u_moments[n]);
            r.relative("u-moment-bernoulli", n_case(n), u_moment_bernoulli(n, p)?, u_moment(n, p)?, 1e-9);
        }
    }
    let mixed = Poly::from_real(&general);
    let mixed_oracle: f64 = general.iter().zip(&moments.v_moments).map(|(c, o)| c * o.value).sum();
    let mixed_bound: f64 = general
        .iter()
        .zip(&moments.v_moments)
        .map(|(c, o)| c.abs() * o.truncation_bound)
        .sum();
    if general.len() <= n_max + 1 {
        r.check(
            "resolvent-contour",
            Some("mixed".into()),
            v_integral_contour(&mixed, p, nodes)?.re,
            mixed_oracle,
            mixed_bound + ORACLE_SLACK,
        );
    }

    let mut worst_round_trip: f64 = 0.0;
    let mut worst_excess: f64 = 0.0;
    for _ in 0..RANDOM_CASES {
        let f = random_complex_poly(&mut rng, 10);
        let z = random_unit(&mut rng);
        let back = forward_operator(&resolvent_poly(&f, z, p)?, z, p);
        worst_round_trip = worst_round_trip.max(back.max_coeff_distance(&f));
        let g = &f.half_shift_plus().scale(z) + &f.half_shift_minus().scale(z.inv());
        worst_excess = worst_excess.max(g.l2_norm_sq() - 4.0 * f.l2_norm_sq());
    }
    r.check("resolvent-round-trip", None, worst_round_trip, 0.0, 1e-12);
    r.check("resolvent-norm-bound", None, worst_excess.max(0.0), 0.0, 1e-10);

    // Fourier
    for (w, o) in COS_FREQS.iter().zip(v_coss) {
        r.against_oracle("cosine-transform", Some(format!("omega={w:.6}")), cosine_transform(*w, p, cfg.tol)?, o);
    }
    let c0 = cosine_transform(0.0, p, cfg.tol)?;
    r.check("cosine-transform", Some("omega=0,closed".into()), c0, 2.0 / (1.0 - lambda * lambda).sqrt(), 1e-8);
    let cf_depth = cf_depth(p);
    let mut worst_kernel: f64 = 0.0;
    let mut tried = 0;
    while tried < RANDOM_CASES {
        let phi = rng.random_range(-PI..PI);
        let w = rng.random_range(-20.0..20.0);
        let turns: f64 = w / PI;
        if (turns - turns.round()).abs() < 1e-3 {
            continue;
        }
        tried += 1;
        let s = kernel_series(phi, w, p, 1e-15).value;
        let c = kernel_cf(phi, w, p, cf_depth)?;
        worst_kernel = worst_kernel.max((s - c).abs());
    }
    r.check("kernel-series-vs-fraction", None, worst_kernel, 0.0, 1e-8);
    let series = CosineSeries::compute(p, cfg.harmonics, cfg.tol)?;
    let square = v_power_rec(2, p);
    let excess = (0..=cfg.harmonics)
        .map(|k| series.truncated(k).energy() - square)
        .fold(f64::NEG_INFINITY, f64::max);
    r.check("fourier-energy-bound", Some(format!("K={}", cfg.harmonics)), excess.max(0.0), 0.0, 1e-6);

    // U pairings
    r.against_oracle("u-polynomial-pairing", None, u_poly_integral(&mixed, p)?.re, u_general);
    r.against_oracle(
        "u-even-polynomial-determinant",
        Some(format!("terms={}", even_used.len())),
        u_even_poly_integral(even_used, p)?,
        u_even,
    );
    for n in 0..=n_max {
        let delta = if n == 0 { 2.0 / (1.0 - lambda) } else { 0.0 };
        let f = transfer_factor(n, p);
        let rhs = f * v_pairs[n].value - delta;
        let bound = u_pairs[n].truncation_bound + f.abs() * v_pairs[n].truncation_bound + ORACLE_SLACK;
        r.check("u-bernoulli-pairing", Some(format!("n={n}")), u_pairs[n].value, rhs, bound);
    }
    for ((w, u), v) in EXP_RATES.iter().zip(u_exps).zip(v_exps) {
        let rhs = v.value - 2.0 * w.sinh() / w;
        let bound = u.truncation_bound + v.truncation_bound + ORACLE_SLACK;
        r.check("bernoulli-exponential", Some(format!("omega={w}")), u.value, rhs, bound);
    }

    bernoulli_exact(&mut r);
    closing(&mut r, p)?;

    Ok(ValidationReport { entries: r.entries })
}

/// Continued-fraction depth whose truncation is below double precision.
fn cf_depth(p: Params) -> usize {
    let a = p.abs_lambda();
    if a == 0.0 {
        return 1;
    }
    ((-40.0 / a.ln()).ceil() as usize).clamp(1, 100_000) + 8
}

fn pointwise(r: &mut Report, rng: &mut ChaCha8Rng, p: Params, depth: usize) -> CliResult<()> {
    let lambda = p.lambda();
    let mut excess: f64 = 0.0;
    for _ in 0..RANDOM_CASES {
        let x = rng.random_range(-1.0..=1.0);
        let m = rng.random_range(0..=51);
        let e = DigitExpansion::expand(x, m)?;
        excess = excess.max((e.midpoint() - x).abs() - e.half_width());
    }
    r.check("digit-expansion", None, excess.max(0.0), 0.0, 0.0);

    r.check(
        "v-pointwise-alternating",
        None,
        v_at(1.0 / 3.0, p, depth)?,
        1.0 / (1.0 - lambda * lambda),
        v_tail_bound(p, depth) + 1e-15,
    );
    r.check(
        "u-pointwise-alternating",
        None,
        u_at(1.0 / 3.0, p, depth)?,
        lambda * lambda / ((1.0 - lambda) * (1.0 - lambda * lambda)),
        u_tail_bound(p, depth) + 1e-15,
    );

    let (mut even_returns, mut parity, mut swap, mut shift_gap, mut decomp): (usize, f64, f64, f64, f64) =
        (0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..RANDOM_CASES {
        let len = 2 * rng.random_range(1..=depth.div_ceil(2) + 1);
        let e = DigitExpansion::from_signs(&random_signs(rng, len))?;
        even_returns += return_steps(&e).iter().filter(|n| *n % 2 == 0).count();
        let neg = e.negate();
        parity = parity
            .max((v_trunc(&e, p) - v_trunc(&neg, p)).abs())
            .max((u_trunc(&e, p) - u_trunc(&neg, p)).abs());
        swap = swap.max((v_trunc(&e, p) - v_trunc(&e.swap_pairs(), p)).abs());

        let mut acc = 0.0;
        let mut w = 1.0;
        let mut cur = e.clone();
        for k in 0..=e.depth() {
            acc += w * (v_trunc(&cur, p) - 1.0);
            w *= lambda;
            if k < e.depth() {
                cur = cur.shift()?;
            }
        }
        decomp = decomp.max((u_trunc(&e, p) - acc).abs());

        let mut x: f64 = rng.random_range(-1.0..1.0);
        if x == 0.0 {
            x = 0.5;
        }
        let ex = DigitExpansion::expand(x, depth.max(1))?;
        let image = if x > 0.0 { 2.0 * x - 1.0 } else { 2.0 * x + 1.0 };
        shift_gap = shift_gap.max((v_trunc(&ex.shift()?, p) - v_at(image, p, depth.max(1) - 1)?).abs());
    }
    r.exact("odd-step-returns", None, even_returns);
    r.check("parity", None, parity, 0.0, 0.0);
    r.check("pair-swap", None, swap, 0.0, 0.0);
    let scale = 1.0 / ((1.0 - p.abs_lambda()) * (1.0 - p.abs_lambda()));
    r.check("u-shift-decomposition", None, decomp, 0.0, 1e-12 * scale);
    r.check("shift-operator", None, shift_gap, 0.0, 0.0);
    Ok(())
}

fn bernoulli_exact(r: &mut Report) {
    let table = p_poly_table(20);
    let appell = (1..=20)
        .filter(|&n| table[n].derivative() != table[n - 1].scale(&BigRational::from_integer((n as i64).into())))
        .count();
    r.exact("bernoulli-appell", Some("n<=20".into()), appell);

    let two = BigRational::from_integer(2.into());
    let window = (0..=20)
        .filter(|&n| table[n].window_integral() != RationalPoly::monomial(n).scale(&two))
        .count();
    r.exact("bernoulli-window-average", Some("n<=20".into()), window);

    let eigen = (0..=16u32)
        .filter(|&n| {
            let pn = p_poly(n as usize);
            let ev = BigRational::new(2.into(), (1u64 << n).into());
            pn.averaging_sum() != pn.scale(&ev)
        })
        .count();
    r.exact("bernoulli-averaging-eigen", Some("n<=16".into()), eigen);

    let c = c_coeffs(8);
    let listed: [(usize, i64, i64); 9] = [
        (0, 1, 1),
        (1, 0, 1),
        (2, -1, 3),
        (3, 0, 1),
        (4, 7, 15),
        (5, 0, 1),
        (6, -31, 21),
        (7, 0, 1),
        (8, 127, 15),
    ];
    let wrong = listed
        .iter()
        .filter(|(k, n, d)| c[*k] != BigRational::new((*n).into(), (*d).into()))
        .count();
    r.exact("bernoulli-coefficients", Some("n<=8".into()), wrong);
}

fn closing(r: &mut Report, p: Params) -> CliResult<()> {
    let l = p.lambda();
    let s2 = (1.0 - l * l).sqrt();
    let s4 = (1.0 - l.powi(4)).sqrt();
    let inner = 4.0 * s2 / 3.0 - 4.0 * (1.0 - l * l / 4.0).sqrt() + 8.0 * (1.0 - l * l / 16.0).sqrt() / 3.0;
    let cases = [
        ("int V", v_power_det(1, p)?, 2.0 / s2),
        ("int V^2", v_power_det(2, p)?, 4.0 / (s4 * s2) - 2.0 / s4),
        ("int V x^2", v_moment(2, p)?, inner + 2.0 / (3.0 * s2)),
        ("int U", u_moment(0, p)?, 2.0 / ((1.0 - l) * s2) - 2.0 / (1.0 - l)),
        (
            "int U x^2",
            u_moment(2, p)?,
            inner / (1.0 - l / 4.0) + 2.0 / (3.0 * (1.0 - l) * s2) - 2.0 / (3.0 * (1.0 - l)),
        ),
    ];
    for (name, closed, golden) in cases {
        // Absolute below unit size: at tiny λ the U integrals cancel to zero.
        let bound = 1e-12 * golden.abs().max(1.0);
        r.check("closing-integrals", Some(name.into()), closed, golden, bound);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RunConfig {
        RunConfig {
            depth: 12,
            harmonics: 20,
            ..RunConfig::default()
        }
    }

    #[test]
    fn small_run_passes_and_covers_every_id() {
        let report = run(&small(), &ValidateOptions::default()).unwrap();
        let failed: Vec<_> = report.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
        let ids = report.identity_ids();
        for id in IDENTITY_IDS {
            assert!(ids.contains(id), "missing {id}");
        }
        assert_eq!(ids.len(), IDENTITY_IDS.len());
    }

    #[test]
    fn perturbation_fails_exactly_that_identity() {
        let opts = ValidateOptions {
            perturb: Some("v-power-hessenberg".into()),
        };
        let report = run(&small(), &opts).unwrap();
        assert!(!report.all_pass());
        assert!(report.failures().all(|e| e.identity_id.starts_with("v-power-hessenberg[")));
    }

    #[test]
    fn zero_weight_passes() {
        let cfg = RunConfig {
            lambda: 0.0,
            ..small()
        };
        let report = run(&cfg, &ValidateOptions::default()).unwrap();
        let failed: Vec<_> = report.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }
}
