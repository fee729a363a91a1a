//! Deterministic scalar and point families, incidence configurations, and
//! the grid-plus-pencil construction with exact lattice counting.
//!
//! Random families use `ChaCha8Rng::seed_from_u64(seed)`; the same seed
//! always yields the same set.

use std::path::Path;

use num_integer::Integer;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::equations::WeightedLine;
use crate::error::{Error, Result};
use crate::geom::{direction_of, Direction, Point};
use crate::io;
use crate::scalar::Scalar;
use crate::sets::{FxSet, PointSet, ScalarSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProgressionKind {
    Arithmetic,
    Geometric,
}

pub fn make_progression(kind: ProgressionKind, start: &Scalar, step: &Scalar, n: usize) -> Result<ScalarSet> {
    if n < 2 {
        return Err(Error::precondition("a progression needs at least 2 terms"));
    }
    match kind {
        ProgressionKind::Arithmetic if step.is_zero() => {
            return Err(Error::precondition("arithmetic step must be nonzero"))
        }
        ProgressionKind::Geometric
            if step.is_zero() || step.abs() == Scalar::one() || start.is_zero() =>
        {
            return Err(Error::precondition("geometric ratio must avoid 0 and ±1, start must be nonzero"))
        }
        _ => {}
    }
    let mut terms = Vec::with_capacity(n);
    let mut t = start.clone();
    for _ in 0..n {
        let next = match kind {
            ProgressionKind::Arithmetic => &t + step,
            ProgressionKind::Geometric => &t * step,
        };
        terms.push(std::mem::replace(&mut t, next));
    }
    Ok(ScalarSet::from_vec(terms))
}

/// `A x B`, without the origin when `puncture` is set.
pub fn make_grid(a: &ScalarSet, b: &ScalarSet, puncture: bool) -> PointSet {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let p = Point { x: x.clone(), y: y.clone() };
            if !(puncture && p.is_origin()) {
                out.push(p);
            }
        }
    }
    PointSet::from_vec(out)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` distinct nonzero integers in `[-bound, bound]`.
pub fn random_set(seed: u64, n: usize, bound: u64) -> Result<ScalarSet> {
    let slots = bound
        .checked_mul(2)
        .filter(|&s| s <= i64::MAX as u64)
        .ok_or_else(|| Error::precondition("bound too large"))? as usize;
    if n > slots {
        return Err(Error::precondition(format!(
            "cannot draw {n} distinct nonzero integers from [-{bound}, {bound}]"
        )));
    }
    let b = bound as i64;
    let picks = sample(&mut rng(seed), slots, n);
    Ok(picks
        .into_iter()
        .map(|i| {
            let i = i as i64;
            Scalar::from_int(if i < b { i - b } else { i - b + 1 })
        })
        .collect())
}

/// `n` distinct points of `[-bound, bound]^2` other than the origin.
pub fn random_points(seed: u64, n: usize, bound: u64) -> Result<PointSet> {
    let side = 2 * bound as u128 + 1;
    if n as u128 > side * side - 1 {
        return Err(Error::precondition(format!("cannot draw {n} distinct points from the box")));
    }
    let b = bound as i64;
    let mut r = rng(seed);
    let mut seen = FxSet::default();
    while seen.len() < n {
        let p = (r.gen_range(-b..=b), r.gen_range(-b..=b));
        if p != (0, 0) {
            seen.insert(p);
        }
    }
    let mut v: Vec<(i64, i64)> = seen.into_iter().collect();
    v.sort_unstable();
    Ok(PointSet::from_int_pairs(v))
}

/// A point set with both populated and sparse origin lines: `rich_lines`
/// random primitive directions (components in `[-dir_bound, dir_bound]`)
/// each carrying `per_line` distinct points `±2^e d` with exponents below
/// `ceil(per_line / 2)`, plus `sparse` uniform points of `[-bound, bound]^2`.
pub fn random_pencil_points(
    seed: u64,
    rich_lines: usize,
    per_line: usize,
    dir_bound: i64,
    sparse: usize,
    bound: u64,
) -> Result<PointSet> {
    let mut r = rng(seed);
    let mut dirs: Vec<Direction> = Vec::new();
    let mut guard = 0;
    while dirs.len() < rich_lines {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::precondition("not enough primitive directions in the box"));
        }
        let (a, b) = (r.gen_range(-dir_bound..=dir_bound), r.gen_range(-dir_bound..=dir_bound));
        if (a, b) == (0, 0) || a.gcd(&b) != 1 {
            continue;
        }
        let d = Direction::from_ints(a, b)?;
        if !dirs.contains(&d) {
            dirs.push(d);
        }
    }
    let mut out = Vec::new();
    for d in &dirs {
        let picks = sample(&mut r, 2 * per_line.div_ceil(2), per_line);
        for slot in picks {
            let k = Scalar::from(2).pow((slot / 2) as u32);
            let k = if slot % 2 == 1 { -k } else { k };
            out.push(d.to_point().scale(&k));
        }
    }
    out.extend(random_points(r.gen(), sparse, bound)?.into_vec());
    Ok(PointSet::from_vec(out))
}

/// Points `[1, k] x [1, 2k^2]` and lines `y = m x + c`, `m in [1, k]`,
/// `c in [1, k^2]`: every line meets the grid in exactly `k` points.
pub fn elekes_configuration(k: i64) -> Result<(PointSet, Vec<WeightedLine>)> {
    if k < 1 {
        return Err(Error::precondition("configuration size must be positive"));
    }
    let pts = PointSet::from_int_pairs((1..=k).flat_map(|x| (1..=2 * k * k).map(move |y| (x, y))));
    let mut lines = Vec::with_capacity((k * k * k) as usize);
    for m in 1..=k {
        for c in 1..=k * k {
            lines.push(WeightedLine::new(Scalar::from(m), Scalar::from(-1), Scalar::from(-c), 1)?);
        }
    }
    Ok((pts, lines))
}

/// The grid `[1, n]^2` and, for each primitive direction `(a, b)`, every
/// line `b x - a y = c` meeting the grid.
pub fn grid_pencil_configuration(n: i64, directions: &[(i64, i64)]) -> Result<(PointSet, Vec<WeightedLine>)> {
    if n < 1 {
        return Err(Error::precondition("grid side must be positive"));
    }
    let pts = PointSet::from_int_pairs((1..=n).flat_map(|x| (1..=n).map(move |y| (x, y))));
    let mut lines = Vec::new();
    let mut seen = FxSet::default();
    for &(a, b) in directions {
        let d = Direction::from_ints(a, b)?;
        if !seen.insert(d.clone()) {
            continue;
        }
        let (a, b) = d.as_small().expect("small direction");
        let mut offsets: Vec<i64> =
            (1..=n).flat_map(|x| (1..=n).map(move |y| b * x - a * y)).collect();
        offsets.sort_unstable();
        offsets.dedup();
        for c in offsets {
            lines.push(WeightedLine::new(Scalar::from(b), Scalar::from(-a), Scalar::from(c), 1)?);
        }
    }
    Ok((pts, lines))
}

/// `#{(x, y) in [-half, half]^2 \ {0} : p x + q y = m}`, exactly.
pub fn grid_line_count(p: i64, q: i64, m: i64, half: i64) -> u64 {
    let (p, q, m, h) = (p as i128, q as i128, m as i128, half as i128);
    let box_size = (2 * h + 1) as u64;
    if p == 0 && q == 0 {
        return if m == 0 { box_size * box_size - 1 } else { 0 };
    }
    let g = p.gcd(&q);
    if m % g != 0 {
        return 0;
    }
    let (p, q, m) = (p / g, q / g, m / g);
    let through_origin = u64::from(m == 0);
    if q == 0 {
        let x = m / p;
        return if m % p == 0 && x.abs() <= h { box_size - through_origin } else { 0 };
    }
    if p == 0 {
        let y = m / q;
        return if m % q == 0 && y.abs() <= h { box_size - through_origin } else { 0 };
    }
    // p x0 + q y0 = 1; solutions (x0 m + q t, y0 m - p t).
    let e = p.extended_gcd(&q);
    let (x0, y0) = if e.gcd == 1 { (e.x, e.y) } else { (-e.x, -e.y) };
    let (xm, ym) = (x0 * m, y0 * m);
    let (lo1, hi1) = t_range(xm, q, h);
    let (lo2, hi2) = t_range(ym, -p, h);
    let (lo, hi) = (lo1.max(lo2), hi1.min(hi2));
    if hi < lo {
        0
    } else {
        (hi - lo + 1) as u64 - through_origin
    }
}

/// Integer `t` with `-h <= base + step t <= h`, `step != 0`.
fn t_range(base: i128, step: i128, h: i128) -> (i128, i128) {
    let (a, b) = ((-h - base), (h - base));
    if step > 0 {
        (Integer::div_ceil(&a, &step), Integer::div_floor(&b, &step))
    } else {
        (Integer::div_ceil(&b, &step), Integer::div_floor(&a, &step))
    }
}

/// `#{p in P : b p.x - a p.y = offset}` for the direction `(a, b)`, by
/// enumeration.
pub fn line_support_count(d: &Direction, offset: &Scalar, p: &PointSet) -> u64 {
    p.iter().filter(|q| &(d.b() * &q.x - d.a() * &q.y) == offset).count() as u64
}

/// The grid `P1`, the coprime pencil `L`, its translates through the
/// half-size grid, and the rational family `P2` dual to those translates.
#[derive(Clone, Debug)]
pub struct ConstructionBundle {
    pub n: u64,
    /// `sqrt(N)`: `P1` is `[-half, half]^2` without the origin.
    pub half: i64,
    /// `N^{1/6}`: pencil directions have components in `[-root, root]`.
    pub root: i64,
    pub p1: PointSet,
    pub lines: Vec<Direction>,
    pub p2: PointSet,
    /// Distinct nonzero offsets `m = b i - a j` per pencil direction.
    pub translates: Vec<(Direction, Vec<i64>)>,
}

impl ConstructionBundle {
    /// Each `P2` point `(b/m, a/m)` together with its direction `(a, b)`
    /// and offset `m`: the point's dot-product-one line is `b x + a y = m`.
    pub fn p2_generators(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        self.translates.iter().flat_map(|(d, ms)| {
            let (a, b) = d.as_small().expect("pencil directions are small");
            ms.iter().map(move |&m| (a, b, m))
        })
    }

    /// Points of `P1` on each pencil line, in pencil order.
    pub fn pencil_support(&self) -> Vec<u64> {
        self.lines
            .iter()
            .map(|d| {
                let (a, b) = d.as_small().expect("small");
                grid_line_count(b, -a, 0, self.half)
            })
            .collect()
    }

    /// `#{(q, q') in P1 x P2 : q . q' = 1}` by lattice counting.
    pub fn dot_one_count(&self) -> u128 {
        self.p2_generators().map(|(a, b, m)| grid_line_count(b, a, m, self.half) as u128).sum()
    }

    /// `#{(q, q', r') in P2 x P1 x P1 : q . q' = q . r' != 0}` by lattice
    /// counting. For `q = (b, a) / m` the value `q . q'` is `(b x + a y) / m`,
    /// so the per-pin count depends only on `(a, b)`.
    pub fn pinned_count(&self) -> u128 {
        let mut total = 0u128;
        for (d, ms) in &self.translates {
            let (a, b) = d.as_small().expect("small");
            let reach = (a.abs() + b.abs()) * self.half;
            let per_pin: u128 = (-reach..=reach)
                .filter(|&k| k != 0)
                .map(|k| {
                    let c = grid_line_count(b, a, k, self.half) as u128;
                    c * c
                })
                .sum();
            total += per_pin * ms.len() as u128;
        }
        total
    }

    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_owned(), source })?;
        io::write_text(&dir.join("p1.pts"), &io::format_points(&self.p1))?;
        io::write_text(&dir.join("p2.pts"), &io::format_points(&self.p2))?;
        let lines: String = self.lines.iter().map(|d| format!("{d}\n")).collect();
        io::write_text(&dir.join("lines.txt"), &lines)?;
        let meta = serde_json::json!({
            "N": self.n,
            "sizes": {
                "p1": self.p1.len(),
                "p2": self.p2.len(),
                "lines": self.lines.len(),
                "translates": self.translates.iter().map(|t| t.1.len()).sum::<usize>(),
            },
        });
        let text = serde_json::to_string_pretty(&meta).expect("json") + "\n";
        io::write_text(&dir.join("meta.json"), &text)
    }
}

/// `Some(k)` when `n = (2k)^6`.
fn even_sixth_root(n: u64) -> Option<i64> {
    let r = (n as f64).powf(1.0 / 6.0).round() as u64;
    (r.saturating_sub(1)..=r + 1)
        .find(|&c| c >= 2 && c % 2 == 0 && c.checked_pow(6) == Some(n))
        .map(|c| c as i64)
}

pub fn erdos_construction(n: u64) -> Result<ConstructionBundle> {
    let root = even_sixth_root(n).ok_or(Error::InvalidConstructionSize(n))?;
    let half = root * root * root;
    let h2 = half / 2;
    let p1 = PointSet::from_int_pairs(
        (-half..=half).flat_map(|x| (-half..=half).map(move |y| (x, y))).filter(|&p| p != (0, 0)),
    );
    let mut lines: Vec<Direction> = Vec::new();
    for a in -root..=root {
        for b in -root..=root {
            if (a, b) != (0, 0) && a.gcd(&b) == 1 {
                lines.push(direction_of(&Point::new(a, b))?);
            }
        }
    }
    lines.sort();
    lines.dedup();
    let mut translates = Vec::with_capacity(lines.len());
    let mut p2 = Vec::new();
    for d in &lines {
        let (a, b) = d.as_small().expect("small");
        let mut ms: Vec<i64> = (-h2..=h2)
            .flat_map(|i| (-h2..=h2).map(move |j| b * i - a * j))
            .filter(|&m| m != 0)
            .collect();
        ms.sort_unstable();
        ms.dedup();
        for &m in &ms {
            let m = Scalar::from(m);
            p2.push(Point { x: Scalar::from(b) / &m, y: Scalar::from(a) / &m });
        }
        translates.push((d.clone(), ms));
    }
    Ok(ConstructionBundle { n, half, root, p1, lines, p2: PointSet::from_vec(p2), translates })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_line(p: i64, q: i64, m: i64, h: i64) -> u64 {
        let mut c = 0;
        for x in -h..=h {
            for y in -h..=h {
                if (x, y) != (0, 0) && p * x + q * y == m {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn lattice_count_matches_enumeration() {
        for (p, q) in [(1, 0), (0, 1), (1, 1), (2, -1), (3, 2), (-4, 6), (0, 3), (5, 0), (0, 0)] {
            for m in -13..=13 {
                assert_eq!(grid_line_count(p, q, m, 5), brute_line(p, q, m, 5), "{p}x+{q}y={m}");
            }
        }
    }

    #[test]
    fn progressions() {
        let g = make_progression(ProgressionKind::Geometric, &Scalar::one(), &Scalar::from(2), 4).unwrap();
        assert_eq!(g, ScalarSet::from_ints([1, 2, 4, 8]));
        let a = make_progression(ProgressionKind::Arithmetic, &Scalar::zero(), &Scalar::one(), 4).unwrap();
        assert_eq!(a, ScalarSet::from_ints(0..4));
        for bad in [0, 1, -1] {
            let r = make_progression(ProgressionKind::Geometric, &Scalar::one(), &Scalar::from(bad), 4);
            assert!(r.is_err());
        }
    }

    #[test]
    fn grids() {
        let z = ScalarSet::from_ints([0, 1]);
        assert_eq!(make_grid(&z, &z, true).len(), 3);
        let o = ScalarSet::from_ints([1, 2]);
        assert_eq!(make_grid(&o, &o, false).len(), 4);
        let a = ScalarSet::from_ints([-1, 0, 3]);
        assert_eq!(make_grid(&a, &a, false).len(), 9);
    }

    #[test]
    fn random_set_contract() {
        assert_eq!(random_set(9, 20, 50).unwrap(), random_set(9, 20, 50).unwrap());
        assert_ne!(random_set(9, 20, 50).unwrap(), random_set(10, 20, 50).unwrap());
        let full = random_set(3, 10, 5).unwrap();
        assert_eq!(full, ScalarSet::from_ints([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5]));
        assert!(random_set(3, 11, 5).is_err());
        let s = random_set(1, 30, 1000).unwrap();
        assert_eq!(s.len(), 30);
        assert!(!s.contains(&Scalar::zero()));
    }

    #[test]
    fn construction_n64() {
        let b = erdos_construction(64).unwrap();
        assert_eq!(b.p1.len(), 17 * 17 - 1);
        assert_eq!(b.lines.len(), 8);
        assert!(b.pencil_support().iter().all(|&s| s >= 2 * 4));
        assert!(matches!(erdos_construction(100), Err(Error::InvalidConstructionSize(100))));
        assert!(erdos_construction(729).is_err());
        assert!(erdos_construction(1).is_err());
    }

    #[test]
    fn line_support_examples() {
        let g = PointSet::from_int_pairs(
            (-8..=8).flat_map(|x| (-8..=8).map(move |y| (x, y))).filter(|&p| p != (0, 0)),
        );
        let d11 = Direction::from_ints(1, 1).unwrap();
        let d10 = Direction::from_ints(1, 0).unwrap();
        assert_eq!(line_support_count(&d11, &Scalar::zero(), &g), 16);
        assert_eq!(line_support_count(&d10, &Scalar::zero(), &g), 16);
        assert_eq!(line_support_count(&d10, &Scalar::zero(), &PointSet::new()), 0);
        assert_eq!(grid_line_count(1, -1, 0, 8), 16);
    }

    #[test]
    fn elekes_lines_are_full() {
        let (p, l) = elekes_configuration(3).unwrap();
        assert_eq!((p.len(), l.len()), (54, 27));
    }
}
