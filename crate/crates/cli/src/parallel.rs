//! Cell-oracle integrals split over independent subtrees.
//!
//! The cells under each of the `2^k` leading-digit prefixes are walked on the
//! rayon pool and the per-subtree compensated sums are merged in prefix order,
//! so the result does not depend on scheduling.

use foothills_core::oracle::{
    CellWalker, Kernel, MomentAccumulator, OracleMoments, OracleResult, WeightedAccumulator, Which,
};
use foothills_core::{Params, Result};
use rayon::prelude::*;

const SPLIT_DIGITS: usize = 6;

/// All sign prefixes of length `len`, in the walker's left-to-right order.
fn prefixes(len: usize) -> Vec<Vec<i8>> {
    (0..1usize << len)
        .map(|i| {
            (0..len)
                .map(|j| if i >> (len - 1 - j) & 1 == 1 { 1 } else { -1 })
                .collect()
        })
        .collect()
}

fn split_len(depth: usize) -> usize {
    SPLIT_DIGITS.min(depth + 1)
}

/// Parallel counterpart of `foothills_core::oracle::oracle_moments`.
pub fn oracle_moments(p: Params, depth: usize, n_max: usize) -> Result<OracleMoments> {
    let walker = CellWalker::new(p, depth, true)?;
    let parts = prefixes(split_len(depth))
        .par_iter()
        .map(|prefix| {
            let mut acc = MomentAccumulator::new(n_max, depth);
            walker.walk_subtree(prefix, &mut |c| acc.add_cell(c))?;
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = MomentAccumulator::new(n_max, depth);
    for part in &parts {
        total.merge(part);
    }
    Ok(total.finish(p, depth))
}

/// Parallel counterpart of `foothills_core::oracle::integrate_weighted_many`.
pub fn integrate_weighted_many(
    kernels: &[Kernel],
    which: Which,
    p: Params,
    depth: usize,
) -> Result<Vec<OracleResult>> {
    let walker = CellWalker::new(p, depth, which == Which::U)?;
    let parts = prefixes(split_len(depth))
        .par_iter()
        .map(|prefix| {
            let mut acc = WeightedAccumulator::new(kernels, which, depth)?;
            walker.walk_subtree(prefix, &mut |c| acc.add_cell(c))?;
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = WeightedAccumulator::new(kernels, which, depth)?;
    for part in &parts {
        total.merge(part);
    }
    Ok(total.finish(p, depth))
}
