use foothills_core::closedform::{u_moment, v_moment, v_moment_contour, v_power_det, v_power_rec};
use foothills_core::bernoulli::u_moment_bernoulli;
use foothills_core::fourier::CosineSeries;
use foothills_core::oracle::{u_trunc, v_at, v_trunc};
use foothills_core::{DigitExpansion, Params};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{num, CsvRow};
use crate::parallel;

/// Deepest zoom (in halvings of `[-1, 1]`) the curve command accepts; past
/// this the window edges no longer resolve in double precision.
pub const MAX_ZOOM_BITS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Curve {
    V,
    U,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub x: f64,
    pub value: f64,
}

impl CsvRow for CurveRow {
    const HEADER: &'static str = "x,value";
    fn csv(&self) -> String {
        format!("{},{}", num(self.x), num(self.value))
    }
}

/// Number of extra digits needed so a window of width `b - a` is resolved as
/// finely as the full interval at the base depth.
pub fn zoom_bits(a: f64, b: f64) -> CliResult<usize> {
    let bits = (2.0 / (b - a)).log2().ceil().max(0.0);
    if bits.is_nan() || bits > MAX_ZOOM_BITS as f64 {
        return Err(CliError::Resource(format!(
            "window of width {:e} needs {bits} zoom digits, cap is {MAX_ZOOM_BITS}",
            b - a
        )));
    }
    Ok(bits as usize)
}

/// `samples` evenly spaced cells across the window, reported at their midpoints.
pub fn curve(cfg: &RunConfig, which: Curve, samples: usize) -> CliResult<Vec<CurveRow>> {
    cfg.validate()?;
    if samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let p = cfg.params()?;
    let (a, b) = cfg.window_or_full();
    let depth = cfg.depth + zoom_bits(a, b)?;
    let step = (b - a) / samples as f64;
    (0..samples)
        .map(|i| {
            let e = DigitExpansion::expand(a + (i as f64 + 0.5) * step, depth)?;
            let value = match which {
                Curve::V => v_trunc(&e, p),
                Curve::U => u_trunc(&e, p),
            };
            Ok(CurveRow {
                x: e.midpoint(),
                value,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRow {
    pub kind: &'static str,
    #[serde(rename = "N")]
    pub n: usize,
    pub closed_form: f64,
    pub alt_route: f64,
    pub oracle: f64,
    pub oracle_bound: f64,
    pub abs_err: f64,
}

impl CsvRow for MomentRow {
    const HEADER: &'static str = "kind,N,closed_form,alt_route,oracle,oracle_bound,abs_err";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.kind,
            self.n,
            num(self.closed_form),
            num(self.alt_route),
            num(self.oracle),
            num(self.oracle_bound),
            num(self.abs_err)
        )
    }
}

fn even_or_zero(n: usize, f: impl FnOnce() -> foothills_core::Result<f64>) -> CliResult<f64> {
    if n % 2 == 1 {
        Ok(0.0)
    } else {
        Ok(f()?)
    }
}

/// `∫V^N`, `∫V x^N` and `∫U x^N` for `N ≤ nmax`, two closed routes each,
/// beside the cell oracle.
pub fn moments(cfg: &RunConfig) -> CliResult<Vec<MomentRow>> {
    cfg.validate()?;
    let p = cfg.params()?;
    let oracle = parallel::oracle_moments(p, cfg.depth, cfg.n_max)?;
    let mut rows = Vec::with_capacity(3 * (cfg.n_max + 1));
    let mut push = |kind, n, closed_form: f64, alt_route, o: &foothills_core::oracle::OracleResult| {
        rows.push(MomentRow {
            kind,
            n,
            closed_form,
            alt_route,
            oracle: o.value,
            oracle_bound: o.truncation_bound,
            abs_err: (closed_form - o.value).abs(),
        })
    };
    for n in 0..=cfg.n_max {
        push("v_power", n, v_power_det(n, p)?, v_power_rec(n, p), &oracle.v_powers[n]);
    }
    for n in 0..=cfg.n_max {
        let closed = even_or_zero(n, || v_moment(n, p))?;
        let alt = even_or_zero(n, || v_moment_contour(n, p))?;
        push("v_moment", n, closed, alt, &oracle.v_moments[n]);
    }
    for n in 0..=cfg.n_max {
        let closed = even_or_zero(n, || u_moment(n, p))?;
        let alt = even_or_zero(n, || u_moment_bernoulli(n, p))?;
        push("u_moment", n, closed, alt, &oracle.u_moments[n]);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffRow {
    pub n: usize,
    pub coeff: f64,
}

impl CsvRow for CoeffRow {
    const HEADER: &'static str = "n,coeff";
    fn csv(&self) -> String {
        format!("{},{}", self.n, num(self.coeff))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionRow {
    pub x: f64,
    pub reconstruction: f64,
    pub oracle: f64,
}

impl CsvRow for ReconstructionRow {
    const HEADER: &'static str = "x,reconstruction,oracle";
    fn csv(&self) -> String {
        format!("{},{},{}", num(self.x), num(self.reconstruction), num(self.oracle))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierOutput {
    pub coeffs: Vec<CoeffRow>,
    pub samples: Vec<ReconstructionRow>,
}

/// Cosine coefficients `c_0 … c_K` and the truncated series on a uniform
/// grid of `grid` points, next to the pointwise oracle.
pub fn fourier(cfg: &RunConfig, grid: usize) -> CliResult<FourierOutput> {
    cfg.validate()?;
    if grid < 2 {
        return Err(CliError::Usage("--grid must be at least 2".into()));
    }
    let p = cfg.params()?;
    let series = CosineSeries::compute(p, cfg.harmonics, cfg.tol)?;
    let (a, b) = cfg.window_or_full();
    let step = (b - a) / (grid - 1) as f64;
    let samples = (0..grid)
        .map(|i| {
            let x = if i + 1 == grid { b } else { a + i as f64 * step };
            Ok(ReconstructionRow {
                x,
                reconstruction: series.reconstruct(x),
                oracle: v_at(x, p, cfg.depth)?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let coeffs = series
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, &coeff)| CoeffRow { n, coeff })
        .collect();
    Ok(FourierOutput { coeffs, samples })
}

/// Root-mean-square distance between the truncated cosine series and the
/// oracle `V`, over `samples` cell midpoints of `[-1, 1]`, scaled to an `L²`
/// norm on the interval.
pub fn l2_error_sampled(series: &CosineSeries, p: Params, depth: usize, samples: usize) -> CliResult<f64> {
    let step = 2.0 / samples as f64;
    let mut acc = foothills_core::sum::CompensatedSum::new();
    for i in 0..samples {
        let x = -1.0 + (i as f64 + 0.5) * step;
        let d = series.reconstruct(x) - v_at(x, p, depth)?;
        acc.add(d * d);
    }
    Ok((acc.value() * step).sqrt())
}
