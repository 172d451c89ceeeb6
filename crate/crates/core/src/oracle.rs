//! Brute-force ground truth for every integral identity in the crate.
//!
//! Truncating the walk after `M + 1` digits makes `V` and `U` piecewise
//! constant on the `2^{M+1}` dyadic cells of width `2^{-M}`. Integrating the
//! truncated functions is then an exact finite sum, and the geometric tails
//! `|λ|^{M+2}/(1-|λ|)` (for `V`) and `(M+3)|λ|^{M+2}/(1-|λ|)^2` (for `U`) bound
//! the distance to the untruncated integral.
//!
//! Cells are visited depth-first so the partial sums, the `V` value and the
//! loop counts for `U` are all updated incrementally: the work per cell is
//! amortised O(1) on top of whatever the accumulator does.

use alloc::vec;
use alloc::vec::Vec;

use crate::digits::{DigitExpansion, Params};
use crate::error::{Error, Result};
use crate::math::{self, binomial_table};
use crate::sum::CompensatedSum;

/// Depth used when nothing else is requested: 2^23 cells.
pub const DEFAULT_DEPTH: usize = 22;

/// Largest cell count (as a power of two) the integrators accept by default.
pub const DEFAULT_CELL_BUDGET_LOG2: u32 = 28;

/// Which counting function to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Which {
    /// Returns to the origin.
    V,
    /// All closed segments.
    U,
}

/// Truncated `V(x) = 1 + Σ_{n≤M} λ^{n+1} [x_0 + … + x_n = 0]`.
pub fn v_trunc(e: &DigitExpansion, p: Params) -> f64 {
    let lambda = p.lambda();
    let mut s: i64 = 0;
    let mut w = 1.0;
    let mut v = 1.0;
    for (n, d) in e.iter().enumerate() {
        s += i64::from(d);
        w *= lambda;
        if s == 0 {
            debug_assert!(n % 2 == 1, "walk returned to the origin at even step {n}");
            v += w;
        }
    }
    v
}

/// Truncated `U(x) = Σ_{0≤m≤n≤M} λ^{n+1} [x_m + … + x_n = 0]`.
///
/// Segment `m..=n` closes iff the prefix sums `S_{m-1}` and `S_n` agree, so a
/// running histogram of prefix sums gives each step's loop count in O(1).
pub fn u_trunc(e: &DigitExpansion, p: Params) -> f64 {
    let lambda = p.lambda();
    let offset = e.len() as i64;
    let mut seen = vec![0u32; 2 * e.len() + 1];
    seen[offset as usize] = 1;
    let mut s: i64 = 0;
    let mut w = 1.0;
    let mut u = 0.0;
    for d in e.iter() {
        s += i64::from(d);
        w *= lambda;
        let slot = (s + offset) as usize;
        u += w * f64::from(seen[slot]);
        seen[slot] += 1;
    }
    u
}

/// Steps `n` at which the walk sits at the origin (`L_n = 1`).
pub fn return_steps(e: &DigitExpansion) -> Vec<usize> {
    let mut s: i64 = 0;
    e.iter()
        .enumerate()
        .filter_map(|(n, d)| {
            s += i64::from(d);
            (s == 0).then_some(n)
        })
        .collect()
}

/// `V` at the point `x`, truncated after `depth + 1` digits.
pub fn v_at(x: f64, p: Params, depth: usize) -> Result<f64> {
    Ok(v_trunc(&DigitExpansion::expand(x, depth)?, p))
}

/// `U` at the point `x`, truncated after `depth + 1` digits.
pub fn u_at(x: f64, p: Params, depth: usize) -> Result<f64> {
    Ok(u_trunc(&DigitExpansion::expand(x, depth)?, p))
}

/// Pointwise bound on `|V - V_M|`.
pub fn v_tail_bound(p: Params, depth: usize) -> f64 {
    let a = p.abs_lambda();
    math::powi(a, depth as u32 + 2) / (1.0 - a)
}

/// Pointwise bound on `|U - U_M|`.
pub fn u_tail_bound(p: Params, depth: usize) -> f64 {
    let a = p.abs_lambda();
    (depth as f64 + 3.0) * math::powi(a, depth as u32 + 2) / ((1.0 - a) * (1.0 - a))
}

/// A depth-`M` cell on which the truncated functions are constant.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicCell {
    pub prefix: DigitExpansion,
    pub lo: f64,
    pub hi: f64,
}

/// All `2^{M+1}` cells at depth `M`, left to right.
pub fn cells(depth: usize) -> Result<impl Iterator<Item = DyadicCell>> {
    check_budget(depth, DEFAULT_CELL_BUDGET_LOG2)?;
    let len = depth + 1;
    Ok((0u64..1u64 << len).map(move |index| {
        let signs: Vec<i8> = (0..len)
            .map(|n| if index >> (len - 1 - n) & 1 == 1 { 1 } else { -1 })
            .collect();
        let prefix = DigitExpansion::from_signs(&signs).expect("signs are ±1");
        let (lo, hi) = prefix.interval();
        DyadicCell { prefix, lo, hi }
    }))
}

fn check_budget(depth: usize, budget_log2: u32) -> Result<()> {
    if depth + 1 > budget_log2 as usize {
        Err(Error::CellBudgetExceeded { depth, budget_log2 })
    } else {
        Ok(())
    }
}

/// Value of an integral of a truncated function plus a guaranteed bound on the
/// distance to the untruncated one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub truncation_bound: f64,
    pub depth: usize,
}

impl OracleResult {
    /// Whether `other` lies within the truncation bound plus `slack`.
    pub fn agrees_with(&self, other: f64, slack: f64) -> bool {
        libm::fabs(self.value - other) <= self.truncation_bound + slack
    }
}

/// One leaf of the cell walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSample {
    pub center: f64,
    pub half_width: f64,
    pub v: f64,
    /// Zero unless the walker tracks loops.
    pub u: f64,
}

/// Depth-first enumerator of all dyadic cells at a fixed depth.
#[derive(Debug, Clone)]
pub struct CellWalker {
    depth: usize,
    track_loops: bool,
    /// `λ^{n+1}` for `n = 0..=M`.
    weights: Vec<f64>,
    /// `2^{-(n+1)}` for `n = 0..=M`.
    halves: Vec<f64>,
}

impl CellWalker {
    pub fn new(p: Params, depth: usize, track_loops: bool) -> Result<Self> {
        Self::with_budget(p, depth, track_loops, DEFAULT_CELL_BUDGET_LOG2)
    }

    pub fn with_budget(
        p: Params,
        depth: usize,
        track_loops: bool,
        budget_log2: u32,
    ) -> Result<Self> {
        check_budget(depth, budget_log2)?;
        let mut weights = Vec::with_capacity(depth + 1);
        let mut halves = Vec::with_capacity(depth + 1);
        let mut w = 1.0;
        let mut h = 1.0;
        for _ in 0..=depth {
            w *= p.lambda();
            h *= 0.5;
            weights.push(w);
            halves.push(h);
        }
        Ok(Self {
            depth,
            track_loops,
            weights,
            halves,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn cell_count(&self) -> u64 {
        1u64 << (self.depth + 1)
    }

    /// Visits every cell in left-to-right order.
    pub fn walk<F: FnMut(&CellSample)>(&self, mut f: F) {
        self.walk_subtree(&[], &mut f)
            .expect("empty prefix is always valid");
    }

    /// Visits the cells whose leading digits equal `prefix`, left to right.
    ///
    /// Splitting the walk over all prefixes of one length and visiting them in
    /// order reproduces [`CellWalker::walk`] exactly.
    pub fn walk_subtree<F: FnMut(&CellSample)>(&self, prefix: &[i8], f: &mut F) -> Result<()> {
        if prefix.len() > self.depth + 1 {
            return Err(Error::InvalidArgument("prefix longer than the walk"));
        }
        let mut state = WalkState {
            s: 0,
            center: 0.0,
            v: 1.0,
            u: 0.0,
            seen: vec![0u32; 2 * self.depth + 5],
        };
        let offset = self.depth as i64 + 2;
        state.seen[offset as usize] = 1;
        for (n, &d) in prefix.iter().enumerate() {
            if d != 1 && d != -1 {
                return Err(Error::InvalidDigit(d as i64));
            }
            self.step(n, d, &mut state, offset);
            if n == self.depth {
                f(&state.sample(self.halves[self.depth]));
                return Ok(());
            }
            if self.track_loops {
                state.seen[(state.s + offset) as usize] += 1;
            }
        }
        if self.track_loops {
            self.descend::<true, F>(prefix.len(), &mut state, offset, f);
        } else {
            self.descend::<false, F>(prefix.len(), &mut state, offset, f);
        }
        Ok(())
    }

    #[inline(always)]
    fn step(&self, n: usize, d: i8, st: &mut WalkState, offset: i64) {
        st.s += i64::from(d);
        st.center += f64::from(d) * self.halves[n];
        let w = self.weights[n];
        if st.s == 0 {
            debug_assert!(n % 2 == 1, "walk returned to the origin at even step {n}");
            st.v += w;
        }
        if self.track_loops {
            st.u += w * f64::from(st.seen[(st.s + offset) as usize]);
        }
    }

    fn descend<const LOOPS: bool, F: FnMut(&CellSample)>(
        &self,
        n: usize,
        st: &mut WalkState,
        offset: i64,
        f: &mut F,
    ) {
        let saved = (st.s, st.center, st.v, st.u);
        for d in [-1i8, 1] {
            let s = saved.0 + i64::from(d);
            let w = self.weights[n];
            st.s = s;
            st.center = saved.1 + f64::from(d) * self.halves[n];
            st.v = if s == 0 { saved.2 + w } else { saved.2 };
            let slot = (s + offset) as usize;
            if LOOPS {
                st.u = saved.3 + w * f64::from(st.seen[slot]);
            }
            if n == self.depth {
                f(&st.sample(self.halves[n]));
            } else {
                if LOOPS {
                    st.seen[slot] += 1;
                }
                self.descend::<LOOPS, F>(n + 1, st, offset, f);
                if LOOPS {
                    st.seen[slot] -= 1;
                }
            }
        }
        (st.s, st.center, st.v, st.u) = saved;
    }
}

struct WalkState {
    s: i64,
    center: f64,
    v: f64,
    u: f64,
    seen: Vec<u32>,
}

impl WalkState {
    #[inline(always)]
    fn sample(&self, half_width: f64) -> CellSample {
        CellSample {
            center: self.center,
            half_width,
            v: self.v,
            u: self.u,
        }
    }
}

/// `∫_{c-h}^{c+h} x^k dx` for `k = 0..=k_max`, expanded about the centre so the
/// tiny cell width does not cancel catastrophically.
#[derive(Debug, Clone)]
struct CellMonomials {
    binom: Vec<Vec<f64>>,
    /// `2 h^{i+1} / (i+1)`, zero for odd `i`.
    widths: Vec<f64>,
    center_pows: Vec<f64>,
    out: Vec<f64>,
}

impl CellMonomials {
    fn new(k_max: usize, half_width: f64) -> Self {
        let mut widths = vec![0.0; k_max + 1];
        let mut hp = half_width;
        for (i, w) in widths.iter_mut().enumerate() {
            if i % 2 == 0 {
                *w = 2.0 * hp / (i as f64 + 1.0);
            }
            hp *= half_width;
        }
        Self {
            binom: binomial_table(k_max),
            widths,
            center_pows: vec![1.0; k_max + 1],
            out: vec![0.0; k_max + 1],
        }
    }

    #[inline]
    fn eval(&mut self, center: f64) -> &[f64] {
        let k_max = self.out.len() - 1;
        for k in 1..=k_max {
            self.center_pows[k] = self.center_pows[k - 1] * center;
        }
        for k in 0..=k_max {
            let row = &self.binom[k];
            let mut acc = 0.0;
            let mut i = 0;
            while i <= k {
                acc += row[i] * self.center_pows[k - i] * self.widths[i];
                i += 2;
            }
            self.out[k] = acc;
        }
        &self.out
    }
}

/// Running sums for `∫V^k`, `∫V x^k` and `∫U x^k`, `k = 0..=n_max`, fed one
/// cell at a time.
#[derive(Debug, Clone)]
pub struct MomentAccumulator {
    monomials: CellMonomials,
    cell_width: f64,
    v_powers: Vec<CompensatedSum>,
    v_moments: Vec<CompensatedSum>,
    u_moments: Vec<CompensatedSum>,
}

impl MomentAccumulator {
    pub fn new(n_max: usize, depth: usize) -> Self {
        let half = libm::ldexp(1.0, -(depth as i32 + 1));
        Self {
            monomials: CellMonomials::new(n_max, half),
            cell_width: 2.0 * half,
            v_powers: vec![CompensatedSum::new(); n_max + 1],
            v_moments: vec![CompensatedSum::new(); n_max + 1],
            u_moments: vec![CompensatedSum::new(); n_max + 1],
        }
    }

    #[inline]
    pub fn add_cell(&mut self, cell: &CellSample) {
        let mut vk = self.cell_width;
        for acc in self.v_powers.iter_mut() {
            acc.add(vk);
            vk *= cell.v;
        }
        let ints = self.monomials.eval(cell.center);
        for ((vm, um), &m) in self.v_moments.iter_mut().zip(self.u_moments.iter_mut()).zip(ints.iter()) {
            vm.add(cell.v * m);
            um.add(cell.u * m);
        }
    }

    pub fn merge(&mut self, other: &MomentAccumulator) {
        for (a, b) in self.v_powers.iter_mut().zip(&other.v_powers) {
            a.merge(b);
        }
        for (a, b) in self.v_moments.iter_mut().zip(&other.v_moments) {
            a.merge(b);
        }
        for (a, b) in self.u_moments.iter_mut().zip(&other.u_moments) {
            a.merge(b);
        }
    }

    pub fn finish(&self, p: Params, depth: usize) -> OracleMoments {
        let tv = v_tail_bound(p, depth);
        let tu = u_tail_bound(p, depth);
        let vmax = 1.0 / (1.0 - p.abs_lambda());
        let wrap = |value: f64, truncation_bound: f64| OracleResult {
            value,
            truncation_bound,
            depth,
        };
        OracleMoments {
            v_powers: self
                .v_powers
                .iter()
                .enumerate()
                .map(|(n, s)| wrap(s.value(), v_power_bound(n, vmax, tv)))
                .collect(),
            v_moments: self
                .v_moments
                .iter()
                .map(|s| wrap(s.value(), 2.0 * tv))
                .collect(),
            u_moments: self
                .u_moments
                .iter()
                .map(|s| wrap(s.value(), 2.0 * tu))
                .collect(),
        }
    }
}

fn v_power_bound(n: usize, vmax: f64, tail: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        2.0 * n as f64 * math::powi(vmax, n as u32 - 1) * tail
    }
}

/// Oracle values for `∫V^n`, `∫V x^n` and `∫U x^n`, `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMoments {
    pub v_powers: Vec<OracleResult>,
    pub v_moments: Vec<OracleResult>,
    pub u_moments: Vec<OracleResult>,
}

/// All three moment families in a single walk.
pub fn oracle_moments(p: Params, depth: usize, n_max: usize) -> Result<OracleMoments> {
    let walker = CellWalker::new(p, depth, true)?;
    let mut acc = MomentAccumulator::new(n_max, depth);
    walker.walk(|c| acc.add_cell(c));
    Ok(acc.finish(p, depth))
}

/// `∫_{-1}^{1} V(x)^n dx` at depth `M`.
pub fn integrate_v_power(n: usize, p: Params, depth: usize) -> Result<OracleResult> {
    let walker = CellWalker::new(p, depth, false)?;
    let width = 2.0 * walker.halves[depth];
    let mut acc = CompensatedSum::new();
    walker.walk(|c| acc.add(width * powu(c.v, n)));
    let vmax = 1.0 / (1.0 - p.abs_lambda());
    Ok(OracleResult {
        value: acc.value(),
        truncation_bound: v_power_bound(n, vmax, v_tail_bound(p, depth)),
        depth,
    })
}

/// `∫_{-1}^{1} V(x) x^n dx` at depth `M`.
pub fn integrate_v_monomial(n: usize, p: Params, depth: usize) -> Result<OracleResult> {
    monomial(n, p, depth, Which::V)
}

/// `∫_{-1}^{1} U(x) x^n dx` at depth `M`.
pub fn integrate_u_monomial(n: usize, p: Params, depth: usize) -> Result<OracleResult> {
    monomial(n, p, depth, Which::U)
}

fn monomial(n: usize, p: Params, depth: usize, which: Which) -> Result<OracleResult> {
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let kernel = Kernel::polynomial(&coeffs);
    integrate_weighted(&kernel, which, p, depth)
}

fn powu(x: f64, n: usize) -> f64 {
    math::powi(x, n as u32)
}

/// One exactly integrable piece of a kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelTerm {
    /// `Σ a_k x^k`.
    Polynomial(Vec<f64>),
    /// `coeff · e^{rate x}`.
    Exp { coeff: f64, rate: f64 },
    /// `coeff · cos(freq x)`.
    Cos { coeff: f64, freq: f64 },
}

impl KernelTerm {
    fn is_finite(&self) -> bool {
        match self {
            KernelTerm::Polynomial(a) => a.iter().all(|c| c.is_finite()),
            KernelTerm::Exp { coeff, rate } => coeff.is_finite() && rate.is_finite(),
            KernelTerm::Cos { coeff, freq } => coeff.is_finite() && freq.is_finite(),
        }
    }

    fn sup_bound(&self) -> f64 {
        match self {
            KernelTerm::Polynomial(a) => a.iter().map(|c| libm::fabs(*c)).sum(),
            KernelTerm::Exp { coeff, rate } => libm::fabs(*coeff) * libm::exp(libm::fabs(*rate)),
            KernelTerm::Cos { coeff, .. } => libm::fabs(*coeff),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        match self {
            KernelTerm::Polynomial(a) => a.iter().rev().fold(0.0, |acc, c| acc * x + c),
            KernelTerm::Exp { coeff, rate } => coeff * libm::exp(rate * x),
            KernelTerm::Cos { coeff, freq } => coeff * libm::cos(freq * x),
        }
    }
}

/// A weight function `k(x)` whose integral over any interval is available in
/// closed form: a sum of polynomial, exponential and cosine terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Kernel {
    terms: Vec<KernelTerm>,
}

impl Kernel {
    pub fn polynomial(coeffs: &[f64]) -> Self {
        Self {
            terms: vec![KernelTerm::Polynomial(coeffs.to_vec())],
        }
    }

    pub fn exp(coeff: f64, rate: f64) -> Self {
        Self {
            terms: vec![KernelTerm::Exp { coeff, rate }],
        }
    }

    pub fn cos(coeff: f64, freq: f64) -> Self {
        Self {
            terms: vec![KernelTerm::Cos { coeff, freq }],
        }
    }

    /// Sum of two kernels.
    pub fn plus(mut self, other: Kernel) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn terms(&self) -> &[KernelTerm] {
        &self.terms
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    /// Upper bound on `max_{[-1,1]} |k|` (triangle inequality over terms).
    pub fn sup_bound(&self) -> f64 {
        self.terms.iter().map(KernelTerm::sup_bound).sum()
    }

    fn max_degree(&self) -> usize {
        self.terms
            .iter()
            .map(|t| match t {
                KernelTerm::Polynomial(a) => a.len().saturating_sub(1),
                _ => 0,
            })
            .max()
            .unwrap_or(0)
    }

    fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::UnsupportedKernel("empty kernel"));
        }
        if !self.terms.iter().all(KernelTerm::is_finite) {
            return Err(Error::UnsupportedKernel("non-finite kernel parameter"));
        }
        Ok(())
    }
}

/// `∫_{c-h}^{c+h} k(x) dx` for a fixed cell width.
#[derive(Debug, Clone)]
struct CellKernel {
    kernel: Kernel,
    half_width: f64,
    monomials: CellMonomials,
}

impl CellKernel {
    fn new(kernel: Kernel, half_width: f64) -> Self {
        let k_max = kernel.max_degree();
        Self {
            kernel,
            half_width,
            monomials: CellMonomials::new(k_max, half_width),
        }
    }

    #[inline]
    fn integrate(&mut self, center: f64) -> f64 {
        let h = self.half_width;
        let mut total = 0.0;
        let mut ints: Option<&[f64]> = None;
        for term in &self.kernel.terms {
            total += match term {
                KernelTerm::Polynomial(a) => {
                    let ints = match ints {
                        Some(i) => i,
                        None => {
                            let i = self.monomials.eval(center);
                            ints = Some(i);
                            i
                        }
                    };
                    a.iter().zip(ints).map(|(c, i)| c * i).sum::<f64>()
                }
                KernelTerm::Exp { coeff, rate } => {
                    let t = rate * h;
                    let shc = if libm::fabs(t) < 1e-4 {
                        1.0 + t * t / 6.0
                    } else {
                        libm::sinh(t) / t
                    };
                    coeff * libm::exp(rate * center) * 2.0 * h * shc
                }
                KernelTerm::Cos { coeff, freq } => {
                    coeff * libm::cos(freq * center) * 2.0 * h * math::sinc(freq * h)
                }
            };
        }
        total
    }
}

/// Running sums of `∫ f(x) k_i(x) dx` for several kernels, `f` being `V` or
/// `U`, fed one cell at a time.
#[derive(Debug, Clone)]
pub struct WeightedAccumulator {
    which: Which,
    kernels: Vec<CellKernel>,
    sums: Vec<CompensatedSum>,
}

impl WeightedAccumulator {
    pub fn new(kernels: &[Kernel], which: Which, depth: usize) -> Result<Self> {
        for k in kernels {
            k.validate()?;
        }
        let half = libm::ldexp(1.0, -(depth as i32 + 1));
        Ok(Self {
            which,
            kernels: kernels
                .iter()
                .map(|k| CellKernel::new(k.clone(), half))
                .collect(),
            sums: vec![CompensatedSum::new(); kernels.len()],
        })
    }

    #[inline]
    pub fn add_cell(&mut self, cell: &CellSample) {
        let f = match self.which {
            Which::V => cell.v,
            Which::U => cell.u,
        };
        for (k, s) in self.kernels.iter_mut().zip(self.sums.iter_mut()) {
            s.add(f * k.integrate(cell.center));
        }
    }

    pub fn merge(&mut self, other: &WeightedAccumulator) {
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            a.merge(b);
        }
    }

    pub fn finish(&self, p: Params, depth: usize) -> Vec<OracleResult> {
        let tail = match self.which {
            Which::V => v_tail_bound(p, depth),
            Which::U => u_tail_bound(p, depth),
        };
        self.kernels
            .iter()
            .zip(&self.sums)
            .map(|(k, s)| OracleResult {
                value: s.value(),
                truncation_bound: 2.0 * tail * k.kernel.sup_bound(),
                depth,
            })
            .collect()
    }
}

/// `∫_{-1}^{1} f(x) k(x) dx` for `f ∈ {V, U}` at depth `M`.
pub fn integrate_weighted(
    kernel: &Kernel,
    which: Which,
    p: Params,
    depth: usize,
) -> Result<OracleResult> {
    let mut out = integrate_weighted_many(core::slice::from_ref(kernel), which, p, depth)?;
    Ok(out.remove(0))
}

/// Several kernels against the same function in a single walk.
pub fn integrate_weighted_many(
    kernels: &[Kernel],
    which: Which,
    p: Params,
    depth: usize,
) -> Result<Vec<OracleResult>> {
    let mut acc = WeightedAccumulator::new(kernels, which, depth)?;
    let walker = CellWalker::new(p, depth, which == Which::U)?;
    walker.walk(|c| acc.add_cell(c));
    Ok(acc.finish(p, depth))
}
