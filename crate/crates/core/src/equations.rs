//! Exact solution counters for the product/difference equations and for
//! weighted point-line incidences.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{BilinearForm, Point};
use crate::par::{map_ranges, sum_u128, Ctx};
use crate::scalar::Scalar;
use crate::setops::{representation_table, SetOp};
use crate::sets::{CountTable, FxMap, FxSet, PointSet, ScalarSet};
use crate::Count;

/// The line `a x + b y = c` with a positive weight, stored as its primitive
/// integer representative whose first nonzero normal component is positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightedLine {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub weight: u64,
}

impl WeightedLine {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, weight: u64) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::precondition("line needs a nonzero normal (a, b)"));
        }
        if weight == 0 {
            return Err(Error::precondition("line weight must be positive"));
        }
        let lcm = [&a, &b, &c].iter().fold(BigInt::one(), |l, s| l.lcm(&s.denom()));
        let ints: Vec<BigInt> = [&a, &b, &c]
            .iter()
            .map(|s| s.numer() * (&lcm / s.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        let lead_negative = if ints[0].is_zero() { ints[1].is_negative() } else { ints[0].is_negative() };
        let sign = if lead_negative { -BigInt::one() } else { BigInt::one() };
        let mut it = ints.into_iter().map(|v| Scalar::from_bigint(v / &g * &sign));
        Ok(WeightedLine { a: it.next().unwrap(), b: it.next().unwrap(), c: it.next().unwrap(), weight })
    }

    pub fn unit(a: impl Into<Scalar>, b: impl Into<Scalar>, c: impl Into<Scalar>) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), 1)
    }

    pub fn contains(&self, p: &Point) -> bool {
        &self.a * &p.x + &self.b * &p.y == self.c
    }

    fn key(&self) -> (Scalar, Scalar, Scalar) {
        (self.a.clone(), self.b.clone(), self.c.clone())
    }
}

impl fmt::Debug for WeightedLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}x + {}y = {} (w={})]", self.a, self.b, self.c, self.weight)
    }
}

/// `#{(a, b, c, d) in A x B x C x D : a - b = c d}`.
pub fn count_affine_product(
    a: &ScalarSet,
    b: &ScalarSet,
    c: &ScalarSet,
    d: &ScalarSet,
    ctx: &Ctx,
) -> Result<Count> {
    ctx.guard(
        "count_affine_product",
        a.len() as u128 * b.len() as u128 + c.len() as u128 * d.len() as u128,
    )?;
    let diffs = representation_table(a, b, SetOp::Difference, ctx)?;
    let prods = representation_table(c, d, SetOp::Product, ctx)?;
    Ok(table_dot(&diffs, &prods))
}

fn table_dot(x: &CountTable, y: &CountTable) -> u128 {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    small.iter().map(|(k, m)| m as u128 * large.get(k) as u128).sum()
}

/// `#{(t1, .., t6) in T^6 : t1 t2 = t3 t4 - t5 t6}`, as
/// `sum_{u, v} r(u) r(v) r(u - v)` over the product table `r` of `T x T`.
pub fn count_teq(t: &ScalarSet, ctx: &Ctx) -> Result<Count> {
    if t.is_empty() {
        return Ok(0);
    }
    let r = representation_table(t, t, SetOp::Product, ctx)?;
    let k = r.len() as u128;
    ctx.guard("count_teq", k * k)?;
    let entries: Vec<(Scalar, u64)> = r.sorted();
    Ok(sum_u128(ctx.exec, entries.len(), |i| {
        let (u, ru) = &entries[i];
        let inner: u128 = entries
            .iter()
            .map(|(v, rv)| {
                let x = r.get(&(u - v));
                *rv as u128 * x as u128
            })
            .sum();
        *ru as u128 * inner
    }))
}

/// `#{(a1, a2, a3) in A^3 : c1 a1 + c2 a2 + c3 a3 = 0}` for nonzero
/// coefficients.
pub fn count_ternary_linear(a: &ScalarSet, c1: &Scalar, c2: &Scalar, c3: &Scalar, ctx: &Ctx) -> Result<Count> {
    if c1.is_zero() || c2.is_zero() || c3.is_zero() {
        return Err(Error::precondition("ternary equation coefficients must be nonzero"));
    }
    ctx.guard("count_ternary_linear", a.len() as u128 * a.len() as u128)?;
    let v = a.as_slice();
    let members: FxSet<&Scalar> = v.iter().collect();
    let neg_inv = -(c3.recip().expect("nonzero"));
    Ok(sum_u128(ctx.exec, v.len(), |i| {
        let left = c1 * &v[i];
        v.iter()
            .filter(|y| members.contains(&((&left + c2 * *y) * &neg_inv)))
            .count() as u128
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct IncidenceReport {
    pub points: usize,
    pub lines: usize,
    /// `sum w(p) w(l) [p on l]`.
    pub incidences: Count,
    pub max_point_weight: u64,
    pub max_line_weight: u64,
    pub total_point_weight: u128,
    pub total_line_weight: u128,
    /// `(w_P w_L)^{1/3} (W_P W_L)^{2/3} + w_P W_L + w_L W_P`.
    pub weighted_bound: f64,
}

impl IncidenceReport {
    /// `constant (|P|^{2/3} |L|^{2/3} + |P| + |L|)`.
    pub fn unweighted_bound(&self, constant: f64) -> f64 {
        let (p, l) = (self.points as f64, self.lines as f64);
        constant * ((p * l).powf(2.0 / 3.0) + p + l)
    }
}

/// Weighted incidences between `points` (optionally weighted, aligned with
/// the set's order) and canonical, pairwise distinct `lines`.
pub fn count_incidences(
    points: &PointSet,
    lines: &[WeightedLine],
    point_weights: Option<&[u64]>,
    ctx: &Ctx,
) -> Result<IncidenceReport> {
    if let Some(w) = point_weights {
        if w.len() != points.len() {
            return Err(Error::precondition("point weights must align with the point set"));
        }
        if w.contains(&0) {
            return Err(Error::precondition("point weights must be positive"));
        }
    }
    let mut seen = FxSet::default();
    let mut groups: FxMap<(Scalar, Scalar), FxMap<Scalar, u64>> = FxMap::default();
    for l in lines {
        if !seen.insert(l.key()) {
            return Err(Error::DuplicateLine(format!("{l:?}")));
        }
        groups.entry((l.a.clone(), l.b.clone())).or_default().insert(l.c.clone(), l.weight);
    }
    let mut groups: Vec<_> = groups.into_iter().collect();
    groups.sort_by(|x, y| x.0.cmp(&y.0));
    ctx.guard("count_incidences", points.len() as u128 * groups.len() as u128)?;
    let pts = points.as_slice();
    let incidences = sum_u128(ctx.exec, pts.len(), |i| {
        let p = &pts[i];
        let wp = point_weights.map_or(1, |w| w[i]) as u128;
        groups
            .iter()
            .map(|((a, b), offsets)| {
                offsets.get(&(a * &p.x + b * &p.y)).map_or(0, |&wl| wl as u128)
            })
            .sum::<u128>()
            * wp
    });
    let max_point_weight = point_weights.map_or(u64::from(!pts.is_empty()), |w| w.iter().copied().max().unwrap_or(0));
    let total_point_weight = point_weights.map_or(pts.len() as u128, |w| w.iter().map(|&x| x as u128).sum());
    let max_line_weight = lines.iter().map(|l| l.weight).max().unwrap_or(0);
    let total_line_weight: u128 = lines.iter().map(|l| l.weight as u128).sum();
    let (wp, wl) = (max_point_weight as f64, max_line_weight as f64);
    let (tp, tl) = (total_point_weight as f64, total_line_weight as f64);
    Ok(IncidenceReport {
        points: pts.len(),
        lines: lines.len(),
        incidences,
        max_point_weight,
        max_line_weight,
        total_point_weight,
        total_line_weight,
        weighted_bound: (wp * wl).cbrt() * (tp * tl).powf(2.0 / 3.0) + wp * tl + wl * tp,
    })
}

/// `#{(q, q') in P x Q : form(q, q') = c}` for `c != 0`.
pub fn count_form_value(p: &PointSet, q: &PointSet, form: &BilinearForm, c: &Scalar, ctx: &Ctx) -> Result<Count> {
    if c.is_zero() {
        return Err(Error::precondition("form value must be nonzero"));
    }
    ctx.guard("count_form_value", p.len() as u128 * q.len() as u128)?;
    let (ps, qs) = (p.as_slice(), q.as_slice());
    let parts = map_ranges(ctx.exec, ps.len(), |r| {
        let mut n = 0u128;
        for x in &ps[r] {
            for y in qs {
                if &form.eval(x, y) == c {
                    n += 1;
                }
            }
        }
        n
    });
    Ok(parts.into_iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> ScalarSet {
        ScalarSet::from_ints(v.iter().copied())
    }

    fn ctx() -> Ctx {
        Ctx::default()
    }

    #[test]
    fn affine_product_examples() {
        let x = s(&[1, 2]);
        assert_eq!(count_affine_product(&x, &x, &x, &x, &ctx()).unwrap(), 1);
        let (a, b, d) = (s(&[1, 2, 5]), s(&[2, 5, 7, 9]), s(&[3, 4, 8]));
        let n = count_affine_product(&a, &b, &s(&[0]), &d, &ctx()).unwrap();
        assert_eq!(n, 2 * 3);
    }

    #[test]
    fn teq_examples() {
        assert_eq!(count_teq(&s(&[1]), &ctx()).unwrap(), 0);
        assert_eq!(count_teq(&s(&[1, 2]), &ctx()).unwrap(), 6);
    }

    #[test]
    fn ternary_examples() {
        let one = Scalar::one();
        let n = count_ternary_linear(&s(&[1, 2, 3]), &one, &one, &(-&one), &ctx()).unwrap();
        assert_eq!(n, 3);
        let sym = s(&[-4, -2, -1, 1, 2, 4]);
        let n = count_ternary_linear(&sym, &one, &one, &one, &ctx()).unwrap();
        let diagonal = sym.iter().filter(|a| sym.contains(&(Scalar::from(-2) * *a))).count();
        assert!(n as usize >= diagonal);
        assert!(count_ternary_linear(&sym, &one, &Scalar::zero(), &one, &ctx()).is_err());
    }

    #[test]
    fn line_canonicalization() {
        let l1 = WeightedLine::unit(Scalar::new(-1, 2).unwrap(), Scalar::new(1, 2).unwrap(), 0).unwrap();
        let l2 = WeightedLine::unit(2, -2, 0).unwrap();
        assert_eq!(l1, l2);
        assert_eq!((l2.a.clone(), l2.b.clone()), (Scalar::one(), Scalar::from(-1)));
        let v = WeightedLine::unit(0, -3, 6).unwrap();
        assert_eq!((v.b.clone(), v.c.clone()), (Scalar::one(), Scalar::from(-2)));
        assert!(WeightedLine::unit(0, 0, 1).is_err());
    }

    #[test]
    fn incidence_examples() {
        let grid = PointSet::from_int_pairs((0..3).flat_map(|x| (0..3).map(move |y| (x, y))));
        // y = x, y = x + 1, y = 0
        let lines = vec![
            WeightedLine::unit(1, -1, 0).unwrap(),
            WeightedLine::unit(1, -1, -1).unwrap(),
            WeightedLine::unit(0, 1, 0).unwrap(),
        ];
        let r = count_incidences(&grid, &lines, None, &ctx()).unwrap();
        assert_eq!(r.incidences, 8);
        let ones = vec![1u64; grid.len()];
        assert_eq!(count_incidences(&grid, &lines, Some(&ones), &ctx()).unwrap().incidences, 8);
        assert_eq!(count_incidences(&grid, &[], None, &ctx()).unwrap().incidences, 0);
        let dup = vec![lines[0].clone(), WeightedLine::unit(-2, 2, 0).unwrap()];
        assert!(matches!(count_incidences(&grid, &dup, None, &ctx()), Err(Error::DuplicateLine(_))));
    }

    #[test]
    fn weighted_incidences() {
        let pts = PointSet::from_int_pairs([(0, 0), (1, 1)]);
        let lines = vec![WeightedLine::new(1.into(), (-1).into(), 0.into(), 3).unwrap()];
        let r = count_incidences(&pts, &lines, Some(&[2, 5]), &ctx()).unwrap();
        assert_eq!(r.incidences, 3 * 2 + 3 * 5);
        assert_eq!((r.max_point_weight, r.total_point_weight, r.max_line_weight), (5, 7, 3));
    }

    #[test]
    fn form_value_examples() {
        let p = PointSet::from_int_pairs([(1, 0), (0, 1)]);
        let q = PointSet::from_int_pairs([(1, 1)]);
        let dot = BilinearForm::dot();
        assert_eq!(count_form_value(&p, &q, &dot, &Scalar::one(), &ctx()).unwrap(), 2);
        assert_eq!(count_form_value(&p, &q, &dot, &Scalar::from(7), &ctx()).unwrap(), 0);
        assert!(count_form_value(&p, &q, &dot, &Scalar::zero(), &ctx()).is_err());
    }
}
