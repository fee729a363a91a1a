//! Statistics of a bilinear form over a punctured planar point set.
//!
//! All counts are over ordered pairs, triples and quadruples. The pinned
//! count includes the diagonal `q' = r'`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{area, direction_of, BilinearForm, Direction, Point};
use crate::par::{map_ranges, sum_u128, Ctx};
use crate::sets::{CountTable, FxMap, PointSet, ScalarSet};
use crate::Count;

fn punctured(p: &PointSet) -> Result<()> {
    if p.contains(&Point::new(0, 0)) {
        Err(Error::precondition("point set must not contain the origin"))
    } else {
        Ok(())
    }
}

fn pair_cost(n: usize, m: usize) -> u128 {
    n as u128 * m as u128
}

/// `m(t) = #{(q, q') in P x P : form(q, q') = t}` for `t != 0`.
pub fn value_table(p: &PointSet, form: &BilinearForm, ctx: &Ctx) -> Result<CountTable> {
    punctured(p)?;
    ctx.guard("value_table", pair_cost(p.len(), p.len()))?;
    let pts = p.as_slice();
    let parts = map_ranges(ctx.exec, pts.len(), |r| {
        let mut t = CountTable::new();
        for q in &pts[r] {
            for q2 in pts {
                let v = form.eval(q, q2);
                if !v.is_zero() {
                    t.add(v, 1);
                }
            }
        }
        t
    });
    let mut out = CountTable::new();
    for t in parts {
        out.merge(t);
    }
    Ok(out)
}

/// Nonzero values of the form over ordered pairs of `P`.
pub fn value_set(p: &PointSet, form: &BilinearForm, ctx: &Ctx) -> Result<ScalarSet> {
    Ok(value_table(p, form, ctx)?.key_set())
}

/// Ordered quadruples with `form(q, q') = form(r, r') != 0`.
pub fn form_energy(p: &PointSet, form: &BilinearForm, ctx: &Ctx) -> Result<Count> {
    Ok(value_table(p, form, ctx)?.second_moment())
}

/// Ordered triples `(q, q', r')` with `form(q, q') = form(q, r') != 0`.
pub fn pinned_form_energy(p: &PointSet, form: &BilinearForm, ctx: &Ctx) -> Result<Count> {
    pinned_form_energy_between(p, p, form, ctx)
}

/// Pinned count with the pin `q` drawn from `pins` and `q', r'` from `p`.
pub fn pinned_form_energy_between(
    pins: &PointSet,
    p: &PointSet,
    form: &BilinearForm,
    ctx: &Ctx,
) -> Result<Count> {
    punctured(pins)?;
    punctured(p)?;
    ctx.guard("pinned_form_energy", pair_cost(pins.len(), p.len()))?;
    let (qs, pts) = (pins.as_slice(), p.as_slice());
    Ok(sum_u128(ctx.exec, qs.len(), |i| {
        let mut t = CountTable::new();
        for q2 in pts {
            let v = form.eval(&qs[i], q2);
            if !v.is_zero() {
                t.add(v, 1);
            }
        }
        t.second_moment()
    }))
}

/// Ordered quadruples with `|q - q'|^2 = |r - r'|^2 != 0`. The origin is
/// allowed here.
pub fn distance_energy(p: &PointSet, ctx: &Ctx) -> Result<Count> {
    ctx.guard("distance_energy", pair_cost(p.len(), p.len()))?;
    let pts = p.as_slice();
    let parts = map_ranges(ctx.exec, pts.len(), |r| {
        let mut t = CountTable::new();
        for q in &pts[r] {
            for q2 in pts {
                if q != q2 {
                    t.add(q.sub(q2).norm_sq(), 1);
                }
            }
        }
        t
    });
    let mut out = CountTable::new();
    for t in parts {
        out.merge(t);
    }
    Ok(out.second_moment())
}

#[derive(Clone, Debug, Serialize)]
pub struct ValueStats {
    pub points: usize,
    pub nonzero_pairs: u64,
    pub distinct_values: usize,
    pub energy: Count,
    pub max_multiplicity: u64,
    /// `4 (N^{4/3} + N)`, the incidence bound on a single value's
    /// multiplicity with constant 4.
    pub single_value_bound: f64,
}

pub fn value_stats(p: &PointSet, form: &BilinearForm, ctx: &Ctx) -> Result<ValueStats> {
    let t = value_table(p, form, ctx)?;
    let n = p.len() as f64;
    Ok(ValueStats {
        points: p.len(),
        nonzero_pairs: t.mass(),
        distinct_values: t.len(),
        energy: t.second_moment(),
        max_multiplicity: t.max_multiplicity(),
        single_value_bound: 4.0 * (n.powf(4.0 / 3.0) + n),
    })
}

/// Partition of a point set by the population of its origin lines.
#[derive(Clone, Debug, Serialize)]
pub struct RichPoorSplit {
    /// Points on lines with at most `threshold` points of `P`.
    pub poor: PointSet,
    /// Points on lines with more than `threshold` points.
    pub rich: PointSet,
    pub threshold: u64,
    /// Fiber size per direction, in direction order.
    pub fibers: Vec<(Direction, usize)>,
}

impl RichPoorSplit {
    pub fn poor_directions(&self) -> usize {
        self.fibers.iter().filter(|f| f.1 as u64 <= self.threshold).count()
    }

    pub fn rich_directions(&self) -> usize {
        self.fibers.len() - self.poor_directions()
    }
}

/// Groups points by origin line.
pub fn fibers(p: &PointSet) -> Result<FxMap<Direction, Vec<Point>>> {
    let mut out: FxMap<Direction, Vec<Point>> = FxMap::default();
    for q in p {
        out.entry(direction_of(q)?).or_default().push(q.clone());
    }
    Ok(out)
}

pub fn split_by_line_richness(p: &PointSet, w0: u64) -> Result<RichPoorSplit> {
    if w0 == 0 {
        return Err(Error::precondition("richness threshold must be positive"));
    }
    punctured(p)?;
    let mut by_dir: Vec<(Direction, Vec<Point>)> = fibers(p)?.into_iter().collect();
    by_dir.sort_by(|a, b| a.0.cmp(&b.0));
    let (mut poor, mut rich) = (Vec::new(), Vec::new());
    let mut sizes = Vec::with_capacity(by_dir.len());
    for (d, pts) in by_dir {
        sizes.push((d, pts.len()));
        if pts.len() as u64 <= w0 {
            poor.extend(pts);
        } else {
            rich.extend(pts);
        }
    }
    Ok(RichPoorSplit {
        poor: PointSet::from_vec(poor),
        rich: PointSet::from_vec(rich),
        threshold: w0,
        fibers: sizes,
    })
}

/// Both sides of `t_ad t_cb = t_ab t_cd - t_ac t_bd`.
pub fn area_identity_sides(
    a: &Point,
    b: &Point,
    c: &Point,
    d: &Point,
) -> (crate::Scalar, crate::Scalar) {
    let lhs = area(a, d) * area(c, b);
    let rhs = area(a, b) * area(c, d) - area(a, c) * area(b, d);
    (lhs, rhs)
}

pub fn area_identity_holds(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let (l, r) = area_identity_sides(a, b, c, d);
    l == r
}
