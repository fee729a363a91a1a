//! Cross-ratios of scalars and of origin lines, and the area-ratio form of
//! the same invariant.

use crate::error::{Error, Result};
use crate::geom::{area, Direction, Point};
use crate::par::{map_ranges, Ctx};
use crate::scalar::Scalar;
use crate::sets::{FxSet, ScalarSet};

/// `(a - b)(c - d) / ((a - c)(b - d))` for pairwise distinct inputs.
pub fn cross_ratio(a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar) -> Result<Scalar> {
    if a == b || a == c || a == d || b == c || b == d || c == d {
        return Err(Error::DegenerateQuadruple(format!("repeated value in ({a}, {b}, {c}, {d})")));
    }
    Ok(((a - b) * (c - d)) / ((a - c) * (b - d)))
}

/// All cross-ratios of ordered quadruples of pairwise distinct elements.
pub fn cross_ratio_set(a: &ScalarSet, ctx: &Ctx) -> Result<ScalarSet> {
    let n = a.len();
    if n < 4 {
        return Err(Error::precondition("cross-ratio set needs at least 4 elements"));
    }
    ctx.guard("cross_ratio_set", (n as u128).pow(4))?;
    let v = a.as_slice();
    // Differences are shared across the inner loops.
    let diff: Vec<Vec<Scalar>> = v.iter().map(|x| v.iter().map(|y| x - y).collect()).collect();
    let parts = map_ranges(ctx.exec, n, |r| {
        let mut out = FxSet::default();
        for i in r {
            for j in 0..n {
                if j == i {
                    continue;
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let den_left = &diff[i][k];
                    let num_left = &diff[i][j];
                    for (l, (kl, jl)) in diff[k].iter().zip(&diff[j]).enumerate() {
                        if l == i || l == j || l == k {
                            continue;
                        }
                        out.insert((num_left * kl) / (den_left * jl));
                    }
                }
            }
        }
        out
    });
    let mut all: FxSet<Scalar> = FxSet::default();
    for p in parts {
        all.extend(p);
    }
    Ok(ScalarSet::from_vec(all.into_iter().collect()))
}

/// A line `u x + v y = w` with `w != 0` (so it misses the origin).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    u: Scalar,
    v: Scalar,
    w: Scalar,
}

impl Transversal {
    pub fn new(u: Scalar, v: Scalar, w: Scalar) -> Result<Self> {
        if w.is_zero() {
            return Err(Error::precondition("transversal must not pass through the origin"));
        }
        if u.is_zero() && v.is_zero() {
            return Err(Error::precondition("transversal needs a nonzero normal"));
        }
        Ok(Transversal { u, v, w })
    }

    /// The vertical line `x = c`.
    pub fn vertical(c: Scalar) -> Result<Self> {
        Self::new(Scalar::one(), Scalar::zero(), c)
    }

    /// Affine coordinate of the intersection with the line spanned by `d`,
    /// or `None` when the two are parallel.
    fn coordinate(&self, d: &Direction) -> Option<Scalar> {
        let k = &self.u * d.a() + &self.v * d.b();
        if k.is_zero() {
            return None;
        }
        // point = (w / k) (a, b); coordinate along (-v, u)
        let along = &self.u * d.b() - &self.v * d.a();
        Some(&self.w * &along / &k)
    }
}

impl Default for Transversal {
    fn default() -> Self {
        Transversal::vertical(Scalar::one()).expect("x = 1 misses the origin")
    }
}

/// Cross-ratio of four distinct origin lines, read on the line `x = 1`.
pub fn cross_ratio_of_directions(
    da: &Direction,
    db: &Direction,
    dc: &Direction,
    dd: &Direction,
) -> Result<Scalar> {
    cross_ratio_of_directions_on(da, db, dc, dd, &Transversal::default())
}

/// Cross-ratio of four distinct origin lines, read on `t`. A line parallel
/// to `t` meets it at infinity; the two factors containing that point are
/// dropped, their ratio being `+1` or `-1` in the limit.
pub fn cross_ratio_of_directions_on(
    da: &Direction,
    db: &Direction,
    dc: &Direction,
    dd: &Direction,
    t: &Transversal,
) -> Result<Scalar> {
    let ds = [da, db, dc, dd];
    for i in 0..4 {
        for j in i + 1..4 {
            if ds[i] == ds[j] {
                return Err(Error::DegenerateQuadruple(format!("repeated direction {:?}", ds[i])));
            }
        }
    }
    let [a, b, c, d] = ds.map(|x| t.coordinate(x));
    Ok(match (a, b, c, d) {
        (Some(a), Some(b), Some(c), Some(d)) => cross_ratio(&a, &b, &c, &d)?,
        (None, Some(b), Some(c), Some(d)) => (c - &d) / (b - &d),
        (Some(a), None, Some(c), Some(d)) => -((&c - d) / (a - c)),
        (Some(a), Some(b), None, Some(d)) => -((&a - &b) / (b - d)),
        (Some(a), Some(b), Some(c), None) => (&a - b) / (a - c),
        // Distinct lines have distinct slopes, so at most one is parallel.
        _ => unreachable!("two distinct origin lines parallel to one transversal"),
    })
}

/// `t_ab t_cd / (t_ac t_bd)` with `t_xy` the signed area of `O x y`.
pub fn area_cross_ratio(a: &Point, b: &Point, c: &Point, d: &Point) -> Result<Scalar> {
    let (ab, cd, ac, bd) = (area(a, b), area(c, d), area(a, c), area(b, d));
    if ab.is_zero() || cd.is_zero() || ac.is_zero() || bd.is_zero() {
        return Err(Error::DegenerateQuadruple("collinear-with-origin pair".into()));
    }
    Ok((ab * cd) / (ac * bd))
}
