//! Sum, difference, product and ratio sets, their representation tables,
//! additive energy, and the weak Erdős–Szemerédi report.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{map_ranges, map_ranges_coarse, Ctx};
use crate::scalar::Scalar;
use crate::sets::{CountTable, FxSet, ScalarSet};
use crate::Count;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SetOp {
    Sum,
    Difference,
    Product,
    Ratio,
}

impl SetOp {
    pub fn apply(self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            SetOp::Sum => a + b,
            SetOp::Difference => a - b,
            SetOp::Product => a * b,
            SetOp::Ratio => a / b,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SetOp::Sum => "sum",
            SetOp::Difference => "diff",
            SetOp::Product => "prod",
            SetOp::Ratio => "ratio",
        }
    }
}

impl fmt::Display for SetOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SetOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sum" => SetOp::Sum,
            "diff" | "difference" => SetOp::Difference,
            "prod" | "product" => SetOp::Product,
            "ratio" => SetOp::Ratio,
            _ => return Err(Error::precondition(format!("unknown set operation {s:?}"))),
        })
    }
}

fn check(a: &ScalarSet, b: &ScalarSet, op: SetOp, ctx: &Ctx, what: &'static str) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::precondition("set operations need nonempty operands"));
    }
    if op == SetOp::Ratio && b.contains(&Scalar::zero()) {
        return Err(Error::ZeroDivisor("0".into()));
    }
    ctx.guard(what, a.len() as u128 * b.len() as u128)
}

/// Largest result range handled with a dense bitmap.
const BITMAP_SPAN: i128 = 1 << 28;
/// Largest result range handled with a dense counter array.
const COUNTER_SPAN: i128 = 1 << 24;

/// Result range `[lo, hi]` when both operands are small integers and the
/// operation stays integral.
fn int_range(a: &[i64], b: &[i64], op: SetOp) -> Option<(i128, i128)> {
    let (a0, a1) = (*a.first()? as i128, *a.last()? as i128);
    let (b0, b1) = (*b.first()? as i128, *b.last()? as i128);
    let (lo, hi) = match op {
        SetOp::Sum => (a0 + b0, a1 + b1),
        SetOp::Difference => (a0 - b1, a1 - b0),
        SetOp::Product => {
            let c = [a0 * b0, a0 * b1, a1 * b0, a1 * b1];
            (*c.iter().min()?, *c.iter().max()?)
        }
        SetOp::Ratio => return None,
    };
    (lo > i64::MIN as i128 && hi <= i64::MAX as i128).then_some((lo, hi))
}

#[inline]
fn int_apply(op: SetOp, x: i64, y: i64) -> i128 {
    match op {
        SetOp::Sum => x as i128 + y as i128,
        SetOp::Difference => x as i128 - y as i128,
        _ => x as i128 * y as i128,
    }
}

/// `{a op b : a in A, b in B}`.
pub fn combine(a: &ScalarSet, b: &ScalarSet, op: SetOp, ctx: &Ctx) -> Result<ScalarSet> {
    check(a, b, op, ctx, "combine")?;
    if let (Some(ai), Some(bi)) = (a.as_small_ints(), b.as_small_ints()) {
        if let Some((lo, hi)) = int_range(&ai, &bi, op) {
            if hi - lo < BITMAP_SPAN {
                return Ok(combine_bitmap(&ai, &bi, op, lo, (hi - lo + 1) as usize, ctx));
            }
        }
    }
    let (av, bv) = (a.as_slice(), b.as_slice());
    let parts = map_ranges(ctx.exec, av.len(), |r| {
        let mut s = FxSet::default();
        for x in &av[r] {
            for y in bv {
                s.insert(op.apply(x, y));
            }
        }
        s
    });
    let mut all: FxSet<Scalar> = FxSet::default();
    for p in parts {
        all.extend(p);
    }
    Ok(ScalarSet::from_vec(all.into_iter().collect()))
}

fn combine_bitmap(a: &[i64], b: &[i64], op: SetOp, lo: i128, span: usize, ctx: &Ctx) -> ScalarSet {
    let words = span.div_ceil(64);
    let parts = map_ranges_coarse(ctx.exec, a.len(), |r| {
        let mut bits = vec![0u64; words];
        for &x in &a[r] {
            for &y in b {
                let i = (int_apply(op, x, y) - lo) as usize;
                bits[i >> 6] |= 1 << (i & 63);
            }
        }
        bits
    });
    let mut iter = parts.into_iter();
    let mut bits = iter.next().unwrap_or_else(|| vec![0; words]);
    for p in iter {
        for (w, v) in bits.iter_mut().zip(p) {
            *w |= v;
        }
    }
    let mut out = Vec::new();
    for (wi, &w) in bits.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let t = w.trailing_zeros() as usize;
            out.push(Scalar::from_int((lo + (wi * 64 + t) as i128) as i64));
            w &= w - 1;
        }
    }
    // Already ascending.
    ScalarSet::from_vec(out)
}

/// `s -> #{(a, b) : a op b = s}`; total mass `|A||B|`.
pub fn representation_table(a: &ScalarSet, b: &ScalarSet, op: SetOp, ctx: &Ctx) -> Result<CountTable> {
    check(a, b, op, ctx, "representation_table")?;
    let (av, bv) = (a.as_slice(), b.as_slice());
    let parts = map_ranges(ctx.exec, av.len(), |r| {
        let mut t = CountTable::new();
        for x in &av[r] {
            for y in bv {
                t.add(op.apply(x, y), 1);
            }
        }
        t
    });
    let mut out = CountTable::new();
    for p in parts {
        out.merge(p);
    }
    Ok(out)
}

/// Ordered quadruples with `a1 + b1 = a2 + b2`.
pub fn additive_energy(a: &ScalarSet, b: &ScalarSet, ctx: &Ctx) -> Result<Count> {
    check(a, b, SetOp::Sum, ctx, "additive_energy")?;
    if let (Some(ai), Some(bi)) = (a.as_small_ints(), b.as_small_ints()) {
        if let Some((lo, hi)) = int_range(&ai, &bi, SetOp::Sum) {
            if hi - lo < COUNTER_SPAN {
                let mut counts = vec![0u64; (hi - lo + 1) as usize];
                for &x in &ai {
                    for &y in &bi {
                        counts[(x as i128 + y as i128 - lo) as usize] += 1;
                    }
                }
                return Ok(counts.iter().map(|&c| c as u128 * c as u128).sum());
            }
        }
    }
    Ok(representation_table(a, b, SetOp::Sum, ctx)?.second_moment())
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakEsReport {
    pub size: usize,
    pub energy: Count,
    pub product_set: usize,
    pub sum_set: usize,
    pub difference_set: usize,
    /// `E(A) |A| / |AA|^3`.
    pub energy_ratio: f64,
    /// `|A+A| E(A) >= |A|^4`, checked exactly.
    pub cauchy_schwarz_sum: bool,
    /// `|A-A| E(A) >= |A|^4`, checked exactly.
    pub cauchy_schwarz_difference: bool,
}

pub fn weak_es_report(a: &ScalarSet, ctx: &Ctx) -> Result<WeakEsReport> {
    if a.len() < 2 {
        return Err(Error::precondition("weak Erdős–Szemerédi report needs |A| >= 2"));
    }
    if a.contains(&Scalar::zero()) {
        return Err(Error::precondition("weak Erdős–Szemerédi report assumes 0 is not in A"));
    }
    let energy = additive_energy(a, a, ctx)?;
    let product_set = combine(a, a, SetOp::Product, ctx)?.len();
    let sum_set = combine(a, a, SetOp::Sum, ctx)?.len();
    let difference_set = combine(a, a, SetOp::Difference, ctx)?.len();
    let n4 = (a.len() as u128).pow(4);
    Ok(WeakEsReport {
        size: a.len(),
        energy,
        product_set,
        sum_set,
        difference_set,
        energy_ratio: energy as f64 * a.len() as f64 / (product_set as f64).powi(3),
        cauchy_schwarz_sum: sum_set as u128 * energy >= n4,
        cauchy_schwarz_difference: difference_set as u128 * energy >= n4,
    })
}
