//! Points, origin-line directions and bilinear forms on the rational plane.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: impl Into<Scalar>, y: impl Into<Scalar>) -> Self {
        Point { x: x.into(), y: y.into() }
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, k: &Scalar) -> Point {
        Point { x: &self.x * k, y: &self.y * k }
    }

    pub fn translate(&self, dx: &Scalar, dy: &Scalar) -> Point {
        Point { x: &self.x + dx, y: &self.y + dy }
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point { x: &self.x - &other.x, y: &self.y - &other.y }
    }

    pub fn dot(&self, other: &Point) -> Scalar {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn norm_sq(&self) -> Scalar {
        self.dot(self)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

/// Signed area `a.x * b.y - a.y * b.x` of the triangle `O a b` (doubled).
pub fn area(a: &Point, b: &Point) -> Scalar {
    &a.x * &b.y - &a.y * &b.x
}

/// A line through the origin, as a primitive integer vector `(a, b)` with
/// `a > 0`, or `(0, 1)` for the vertical line. Antipodal rays coincide.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction {
    a: Scalar,
    b: Scalar,
}

impl Direction {
    /// Normalizes an integer vector.
    pub fn from_ints(a: impl Into<Scalar>, b: impl Into<Scalar>) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        if !a.is_integer() || !b.is_integer() {
            return Err(Error::precondition("direction components must be integers"));
        }
        direction_of(&Point { x: a, y: b })
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    /// `(a, b)` as machine integers, when they fit.
    pub fn as_small(&self) -> Option<(i64, i64)> {
        Some((self.a.as_small_int()?, self.b.as_small_int()?))
    }

    /// The representative point `(a, b)`.
    pub fn to_point(&self) -> Point {
        Point { x: self.a.clone(), y: self.b.clone() }
    }

    /// `b / a`, or `None` for the vertical direction.
    pub fn slope(&self) -> Option<Scalar> {
        self.b.checked_div(&self.a)
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.a, self.b)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.a, self.b)
    }
}

/// Canonical direction of the line through the origin and `p`.
pub fn direction_of(p: &Point) -> Result<Direction> {
    if p.x.is_zero() {
        if p.y.is_zero() {
            return Err(Error::DegenerateDirection);
        }
        return Ok(Direction { a: Scalar::zero(), b: Scalar::one() });
    }
    // (x, y) ~ (1, y/x) = (den, num) of the reduced slope; den > 0 and the
    // pair is coprime by construction.
    let slope = &p.y / &p.x;
    Ok(Direction { a: Scalar::from_bigint(slope.denom()), b: Scalar::from_bigint(slope.numer()) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    Symmetric,
    SkewSymmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kernel {
    Dot,
    Cross,
    General,
}

/// A nondegenerate symmetric or skew-symmetric form `(p, q) -> p^T M q`.
#[derive(Clone, PartialEq, Eq)]
pub struct BilinearForm {
    m: [Scalar; 4],
    kind: FormKind,
    kernel: Kernel,
}

impl BilinearForm {
    /// Validates the matrix (row-major) against `kind`.
    pub fn new(m: [Scalar; 4], kind: FormKind) -> Result<Self> {
        let [m11, m12, m21, m22] = &m;
        let det = m11 * m22 - m12 * m21;
        if det.is_zero() {
            return Err(Error::DegenerateForm);
        }
        match kind {
            FormKind::Symmetric if m12 != m21 => {
                return Err(Error::InvalidForm("symmetric form needs m12 = m21".into()))
            }
            FormKind::SkewSymmetric if *m12 != -m21 || !m11.is_zero() || !m22.is_zero() => {
                return Err(Error::InvalidForm(
                    "skew-symmetric form needs m12 = -m21 and a zero diagonal".into(),
                ))
            }
            _ => {}
        }
        let one = Scalar::one();
        let kernel = if kind == FormKind::Symmetric
            && *m11 == one
            && *m22 == one
            && m12.is_zero()
        {
            Kernel::Dot
        } else if kind == FormKind::SkewSymmetric && *m12 == one {
            Kernel::Cross
        } else {
            Kernel::General
        };
        Ok(BilinearForm { m, kind, kernel })
    }

    /// The standard dot product.
    pub fn dot() -> Self {
        Self::new([Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::one()], FormKind::Symmetric)
            .expect("identity is nondegenerate")
    }

    /// Matrix `((0, 1), (-1, 0))`: the signed area.
    pub fn cross() -> Self {
        Self::new(
            [Scalar::zero(), Scalar::one(), -Scalar::one(), Scalar::zero()],
            FormKind::SkewSymmetric,
        )
        .expect("canonical skew form is nondegenerate")
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn matrix(&self) -> &[Scalar; 4] {
        &self.m
    }

    pub fn eval(&self, p: &Point, q: &Point) -> Scalar {
        match self.kernel {
            Kernel::Dot => p.dot(q),
            Kernel::Cross => area(p, q),
            Kernel::General => {
                let [m11, m12, m21, m22] = &self.m;
                let row1 = m11 * &q.x + m12 * &q.y;
                let row2 = m21 * &q.x + m22 * &q.y;
                &p.x * &row1 + &p.y * &row2
            }
        }
    }
}

impl fmt::Debug for BilinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.m;
        write!(f, "BilinearForm(({a}, {b}), ({c}, {d}), {:?})", self.kind)
    }
}

/// `p^T M q` for a validated form.
pub fn eval_form(form: &BilinearForm, p: &Point, q: &Point) -> Scalar {
    form.eval(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_form(&BilinearForm::dot(), &pt(1, 2), &pt(3, 4)), Scalar::from(11));
        assert_eq!(eval_form(&BilinearForm::cross(), &pt(1, 0), &pt(0, 1)), Scalar::one());
        let q = Point::new(Scalar::new(3, 7).unwrap(), -5);
        assert!(eval_form(&BilinearForm::cross(), &q, &q).is_zero());
    }

    #[test]
    fn general_kernel_matches_specialized() {
        let s = |n| Scalar::from(n);
        let dot_like = BilinearForm::new([s(2), s(0), s(0), s(2)], FormKind::Symmetric).unwrap();
        let skew = BilinearForm::new([s(0), s(3), s(-3), s(0)], FormKind::SkewSymmetric).unwrap();
        let (p, q) = (pt(2, -5), pt(7, 3));
        assert_eq!(dot_like.eval(&p, &q), s(2) * BilinearForm::dot().eval(&p, &q));
        assert_eq!(skew.eval(&p, &q), s(3) * BilinearForm::cross().eval(&p, &q));
    }

    #[test]
    fn form_validation() {
        let s = |n| Scalar::from(n);
        assert!(matches!(
            BilinearForm::new([s(1), s(2), s(2), s(4)], FormKind::Symmetric),
            Err(Error::DegenerateForm)
        ));
        assert!(BilinearForm::new([s(1), s(2), s(3), s(4)], FormKind::Symmetric).is_err());
        assert!(BilinearForm::new([s(1), s(2), s(-2), s(0)], FormKind::SkewSymmetric).is_err());
        assert!(BilinearForm::new([s(0), s(2), s(-2), s(0)], FormKind::SkewSymmetric).is_ok());
    }

    #[test]
    fn direction_examples() {
        let d = |x, y| direction_of(&pt(x, y)).unwrap();
        assert_eq!(d(2, 4).as_small(), Some((1, 2)));
        assert_eq!(d(-1, -2).as_small(), Some((1, 2)));
        assert_eq!(d(0, 5).as_small(), Some((0, 1)));
        assert_eq!(d(0, -5).as_small(), Some((0, 1)));
        assert_eq!(d(-3, 6).as_small(), Some((1, -2)));
        assert!(matches!(direction_of(&pt(0, 0)), Err(Error::DegenerateDirection)));
        let r = Point::new(Scalar::new(2, 3).unwrap(), Scalar::new(-5, 7).unwrap());
        assert_eq!(direction_of(&r).unwrap().as_small(), Some((14, -15)));
    }
}
