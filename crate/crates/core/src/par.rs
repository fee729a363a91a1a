//! Execution strategy and cost budget shared by the counting kernels.
//!
//! Work is split into contiguous index ranges, each range is folded
//! independently, and the partial results are returned in range order. Every
//! kernel merges those partials with commutative integer addition or set
//! union, so sequential and parallel runs produce identical results.

use std::ops::Range;

use crate::error::{Error, Result};

/// Default pair-evaluation budget.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise falls
    /// back to sequential evaluation.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Per-run knobs for the guarded kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ctx {
    pub budget: u64,
    pub exec: Exec,
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx { budget: DEFAULT_BUDGET, exec: Exec::default() }
    }
}

impl Ctx {
    pub fn sequential() -> Self {
        Ctx { exec: Exec::Sequential, ..Ctx::default() }
    }

    pub fn unlimited() -> Self {
        Ctx { budget: u64::MAX, ..Ctx::default() }
    }

    pub fn with_exec(self, exec: Exec) -> Self {
        Ctx { exec, ..self }
    }

    pub fn with_budget(self, budget: u64) -> Self {
        Ctx { budget, ..self }
    }

    /// Declares the cost of an operation before it runs.
    pub fn guard(&self, op: &'static str, cost: u128) -> Result<()> {
        if cost > self.budget as u128 {
            Err(Error::CostExceeded { op, cost, budget: self.budget })
        } else {
            Ok(())
        }
    }
}

#[cfg_attr(not(feature = "parallel"), allow(dead_code))]
fn split(n: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.clamp(1, n.max(1));
    let base = n / parts;
    let extra = n % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for i in 0..parts {
        let len = base + usize::from(i < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}

/// Folds `0..n` in contiguous ranges. With `Exec::Parallel` the ranges run on
/// the rayon pool; partials always come back in range order.
pub fn map_ranges<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel if n > 1 => {
            use rayon::prelude::*;
            let parts = rayon::current_num_threads() * 4;
            split(n, parts).into_par_iter().map(f).collect()
        }
        _ => vec![f(0..n)],
    }
}

/// Like [`map_ranges`] but with at most one range per worker thread, for
/// kernels whose partial state is large (bitmaps).
pub fn map_ranges_coarse<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel if n > 1 => {
            use rayon::prelude::*;
            split(n, rayon::current_num_threads()).into_par_iter().map(f).collect()
        }
        _ => vec![f(0..n)],
    }
}

/// Sum of a per-index `u128` count.
pub fn sum_u128<F>(exec: Exec, n: usize, f: F) -> u128
where
    F: Fn(usize) -> u128 + Sync + Send,
{
    map_ranges(exec, n, |r| r.map(&f).sum::<u128>()).into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_covers_range() {
        for n in [0, 1, 7, 100] {
            for parts in [1, 3, 8, 200] {
                let rs = split(n, parts);
                let total: usize = rs.iter().map(|r| r.len()).sum();
                assert_eq!(total, n);
                assert!(rs.windows(2).all(|w| w[0].end == w[1].start));
            }
        }
    }

    #[test]
    fn exec_paths_agree() {
        let f = |i: usize| (i as u128 * 7919) % 101;
        assert_eq!(sum_u128(Exec::Sequential, 10_000, f), sum_u128(Exec::Parallel, 10_000, f));
    }

    #[test]
    fn guard_rejects_over_budget() {
        let ctx = Ctx::default().with_budget(10);
        assert!(ctx.guard("x", 10).is_ok());
        assert!(ctx.guard("x", 11).unwrap_err().is_cost());
    }
}
