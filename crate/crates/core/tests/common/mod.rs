//! Exhaustive reference counters. Each one enumerates the full tuple space
//! directly, with no tables or shortcuts.

#![allow(dead_code)]

use bflab_core::crossratio::cross_ratio;
use bflab_core::equations::WeightedLine;
use bflab_core::{BilinearForm, Point, PointSet, Scalar, ScalarSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `p^T M q` straight from the matrix entries.
pub fn eval(f: &BilinearForm, p: &Point, q: &Point) -> Scalar {
    let [m11, m12, m21, m22] = f.matrix();
    &p.x * m11 * &q.x + &p.x * m12 * &q.y + &p.y * m21 * &q.x + &p.y * m22 * &q.y
}

pub fn additive_energy(a: &ScalarSet, b: &ScalarSet) -> u128 {
    let mut n = 0;
    for a1 in a {
        for b1 in b {
            for a2 in a {
                for b2 in b {
                    if a1 + b1 == a2 + b2 {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

pub fn form_energy(p: &PointSet, f: &BilinearForm) -> u128 {
    let mut n = 0;
    for q in p {
        for q2 in p {
            let v = eval(f, q, q2);
            if v.is_zero() {
                continue;
            }
            for r in p {
                for r2 in p {
                    if eval(f, r, r2) == v {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

pub fn pinned_form_energy(pins: &PointSet, p: &PointSet, f: &BilinearForm) -> u128 {
    let mut n = 0;
    for q in pins {
        for q2 in p {
            let v = eval(f, q, q2);
            if v.is_zero() {
                continue;
            }
            for r2 in p {
                if eval(f, q, r2) == v {
                    n += 1;
                }
            }
        }
    }
    n
}

pub fn teq(t: &ScalarSet) -> u128 {
    let v = t.as_slice();
    let mut n = 0;
    for t1 in v {
        for t2 in v {
            let lhs = t1 * t2;
            for t3 in v {
                for t4 in v {
                    let p = t3 * t4;
                    for t5 in v {
                        for t6 in v {
                            if lhs == &p - &(t5 * t6) {
                                n += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    n
}

pub fn affine_product(a: &ScalarSet, b: &ScalarSet, c: &ScalarSet, d: &ScalarSet) -> u128 {
    let mut n = 0;
    for x in a {
        for y in b {
            for z in c {
                for w in d {
                    if x - y == z * w {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

pub fn ternary(a: &ScalarSet, c: [&Scalar; 3]) -> u128 {
    let mut n = 0;
    for x in a {
        for y in a {
            for z in a {
                if (c[0] * x + c[1] * y + c[2] * z).is_zero() {
                    n += 1;
                }
            }
        }
    }
    n
}

pub fn cross_ratio_set(a: &ScalarSet) -> ScalarSet {
    let mut out = Vec::new();
    for x in a {
        for y in a {
            for z in a {
                for w in a {
                    if let Ok(r) = cross_ratio(x, y, z, w) {
                        out.push(r);
                    }
                }
            }
        }
    }
    ScalarSet::from_vec(out)
}

pub fn incidences(p: &PointSet, lines: &[WeightedLine]) -> u128 {
    let mut n = 0;
    for q in p {
        for l in lines {
            if &l.a * &q.x + &l.b * &q.y == l.c {
                n += l.weight as u128;
            }
        }
    }
    n
}

pub fn form_value(p: &PointSet, q: &PointSet, f: &BilinearForm, c: &Scalar) -> u128 {
    let mut n = 0;
    for x in p {
        for y in q {
            if &eval(f, x, y) == c {
                n += 1;
            }
        }
    }
    n
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` distinct integers from `[-bound, bound]`, zero allowed.
pub fn small_set(r: &mut ChaCha8Rng, n: usize, bound: i64) -> ScalarSet {
    let mut v = Vec::new();
    while v.len() < n {
        let x = r.gen_range(-bound..=bound);
        if !v.contains(&x) {
            v.push(x);
        }
    }
    ScalarSet::from_ints(v)
}

/// `num / den` with `|num| <= bound`, `1 <= den <= dmax`.
pub fn rational(r: &mut ChaCha8Rng, bound: i64, dmax: i64) -> Scalar {
    Scalar::new(r.gen_range(-bound..=bound), r.gen_range(1..=dmax)).unwrap()
}

pub fn rational_point(r: &mut ChaCha8Rng, bound: i64, dmax: i64) -> Point {
    Point { x: rational(r, bound, dmax), y: rational(r, bound, dmax) }
}

/// Up to `n` distinct nonzero integer points of `[-bound, bound]^2`.
pub fn small_points(r: &mut ChaCha8Rng, n: usize, bound: i64) -> PointSet {
    let mut v = Vec::new();
    while v.len() < n {
        let p = (r.gen_range(-bound..=bound), r.gen_range(-bound..=bound));
        if p != (0, 0) && !v.contains(&p) {
            v.push(p);
        }
    }
    PointSet::from_int_pairs(v)
}

pub fn random_form(r: &mut ChaCha8Rng) -> BilinearForm {
    use bflab_core::FormKind;
    if r.gen_bool(0.5) {
        let (a, b, d) = (r.gen_range(-3..=3i64), r.gen_range(-3..=3i64), r.gen_range(-3..=3i64));
        let m = [Scalar::from(a), Scalar::from(b), Scalar::from(b), Scalar::from(d)];
        BilinearForm::new(m, FormKind::Symmetric).unwrap_or_else(|_| BilinearForm::dot())
    } else {
        let b = r.gen_range(1..=3i64);
        let m = [Scalar::zero(), Scalar::from(b), Scalar::from(-b), Scalar::zero()];
        BilinearForm::new(m, FormKind::SkewSymmetric).unwrap()
    }
}
