use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::{Field, Prime, Rational, Scalar};

/// A 2x2 matrix over a field of scalars, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2<T = Rational> {
    rows: [[T; 2]; 2],
}

impl<T: Field> Mat2<T> {
    pub fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Mat2 {
            rows: [[a11, a12], [a21, a22]],
        }
    }

    pub fn from_rows(rows: [[T; 2]; 2]) -> Self {
        Mat2 { rows }
    }

    pub fn rows(&self) -> &[[T; 2]; 2] {
        &self.rows
    }

    /// Entry at zero-based row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn a11(&self) -> &T {
        &self.rows[0][0]
    }

    pub fn a12(&self) -> &T {
        &self.rows[0][1]
    }

    pub fn a21(&self) -> &T {
        &self.rows[1][0]
    }

    pub fn a22(&self) -> &T {
        &self.rows[1][1]
    }

    pub fn identity() -> Self {
        Self::scalar(T::one())
    }

    pub fn scalar(c: T) -> Self {
        Mat2::new(c.clone(), T::zero(), T::zero(), c)
    }

    pub fn diag(a: T, d: T) -> Self {
        Mat2::new(a, T::zero(), T::zero(), d)
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Mat2<U> {
        let [[a, b], [c, d]] = &self.rows;
        Mat2::new(f(a), f(b), f(c), f(d))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let [[a, b], [c, d]] = &self.rows;
        let [[e, f], [g, h]] = &rhs.rows;
        Mat2::new(
            a.times(e).plus(&b.times(g)),
            a.times(f).plus(&b.times(h)),
            c.times(e).plus(&d.times(g)),
            c.times(f).plus(&d.times(h)),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let [[a, b], [c, d]] = &self.rows;
        let [[e, f], [g, h]] = &rhs.rows;
        Mat2::new(a.plus(e), b.plus(f), c.plus(g), d.plus(h))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.negate())
    }

    pub fn negate(&self) -> Self {
        self.map(T::negate)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.times(c))
    }

    pub fn det(&self) -> T {
        let [[a, b], [c, d]] = &self.rows;
        a.times(d).minus(&b.times(c))
    }

    pub fn trace(&self) -> T {
        self.a11().plus(self.a22())
    }

    /// `[[d, -b], [-c, a]]`; the inverse when the determinant is 1.
    pub fn adjugate(&self) -> Self {
        let [[a, b], [c, d]] = &self.rows;
        Mat2::new(d.clone(), b.negate(), c.negate(), a.clone())
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.vanishes() {
            return Err(Error::NotInvertible);
        }
        Ok(self.adjugate().scale(&det.try_inv()?))
    }

    pub fn is_diagonal(&self) -> bool {
        self.a12().vanishes() && self.a21().vanishes()
    }

    pub fn is_antidiagonal(&self) -> bool {
        self.a11().vanishes() && self.a22().vanishes()
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.a21().vanishes()
    }

    /// The single prime shared by all approximate entries, if any.
    pub fn context(&self) -> Result<Option<Prime>> {
        let mut found: Option<&Prime> = None;
        for x in self.rows.iter().flatten() {
            if let Some(p) = x.prime() {
                match found {
                    Some(q) if q != p => return Err(Error::ContextMismatch),
                    _ => found = Some(p),
                }
            }
        }
        Ok(found.cloned())
    }

    /// `g^{-1} A g`, the right-action convention `A^g`.
    pub fn conjugate_by(&self, g: &Self) -> Result<Self> {
        check_compatible(self, g)?;
        Ok(g.inverse()?.mul(self).mul(g))
    }
}

pub(crate) fn check_compatible<T: Field>(a: &Mat2<T>, b: &Mat2<T>) -> Result<()> {
    match (a.context()?, b.context()?) {
        (Some(p), Some(q)) if p != q => Err(Error::ContextMismatch),
        _ => Ok(()),
    }
}

impl Mat2<Rational> {
    pub fn to_scalar(&self) -> Mat2<Scalar> {
        self.map(|x| Scalar::Exact(x.clone()))
    }

    /// Builds a rational matrix from small integers, for tests and examples.
    pub fn from_ints(a11: i64, a12: i64, a21: i64, a22: i64) -> Self {
        let q = |n: i64| Rational::from_integer(n.into());
        Mat2::new(q(a11), q(a12), q(a21), q(a22))
    }
}

impl Mat2<Scalar> {
    /// The exact matrix, when every entry is exact.
    pub fn as_exact(&self) -> Option<Mat2<Rational>> {
        let [[a, b], [c, d]] = &self.rows;
        Some(Mat2::new(
            a.as_rational()?.clone(),
            b.as_rational()?.clone(),
            c.as_rational()?.clone(),
            d.as_rational()?.clone(),
        ))
    }

    pub fn is_exact(&self) -> bool {
        self.rows.iter().flatten().all(Scalar::is_exact)
    }

    /// Entrywise agreement with `m` at every known digit.
    pub fn agrees_with(&self, m: &Mat2<Rational>) -> bool {
        self.rows
            .iter()
            .flatten()
            .zip(m.rows.iter().flatten())
            .all(|(x, y)| x.agrees_with(y))
    }

    /// Smallest absolute precision among approximate entries; `None` if exact.
    pub fn window(&self) -> Option<i64> {
        self.rows
            .iter()
            .flatten()
            .filter_map(Scalar::absolute_precision)
            .min()
    }
}

impl<T: Field + fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.rows;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

struct RationalText<'a>(&'a Rational);

impl Serialize for RationalText<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl Serialize for Mat2<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        for row in &self.rows {
            seq.serialize_element(&[RationalText(&row[0]), RationalText(&row[1])])?;
        }
        seq.end()
    }
}

impl Serialize for Mat2<Scalar> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

/// An element of SL2: a matrix whose determinant is exactly 1 (rational
/// entries) or agrees with 1 at every known digit (approximate entries).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SL2Mat<T = Rational> {
    m: Mat2<T>,
}

impl<T: Field> SL2Mat<T> {
    pub fn new(m: Mat2<T>) -> Result<Self>
    where
        T: fmt::Display,
    {
        m.context()?;
        let det = m.det();
        if !det.minus(&T::one()).vanishes() {
            return Err(Error::Determinant(det.to_string()));
        }
        Ok(SL2Mat { m })
    }

    pub fn matrix(&self) -> &Mat2<T> {
        &self.m
    }

    pub fn into_matrix(self) -> Mat2<T> {
        self.m
    }

    pub fn identity() -> Self {
        SL2Mat {
            m: Mat2::identity(),
        }
    }

    pub fn minus_identity() -> Self {
        SL2Mat {
            m: Mat2::scalar(T::one().negate()),
        }
    }

    /// `diag(a, a^{-1})`.
    pub fn torus(a: T) -> Result<Self> {
        let inv = a.try_inv()?;
        Ok(SL2Mat {
            m: Mat2::diag(a, inv),
        })
    }

    /// `[[s, u], [0, s]]` with `s = ±1`.
    pub fn unipotent(negative: bool, u: T) -> Self {
        let s = if negative {
            T::one().negate()
        } else {
            T::one()
        };
        SL2Mat {
            m: Mat2::new(s.clone(), u, T::zero(), s),
        }
    }

    /// `omega = [[0, 1], [-1, 0]]`, which inverts the diagonal torus.
    pub fn omega() -> Self {
        SL2Mat {
            m: Mat2::new(T::zero(), T::one(), T::one().negate(), T::zero()),
        }
    }

    pub fn group_op(&self, rhs: &Self) -> Result<Self> {
        check_compatible(&self.m, &rhs.m)?;
        Ok(SL2Mat {
            m: self.m.mul(&rhs.m),
        })
    }

    pub fn inverse(&self) -> Self {
        SL2Mat {
            m: self.m.adjugate(),
        }
    }

    pub fn trace(&self) -> T {
        self.m.trace()
    }

    pub fn negate(&self) -> Self {
        SL2Mat { m: self.m.negate() }
    }

    /// `g^{-1} A g` for any invertible `g`.
    pub fn conjugate(&self, g: &Mat2<T>) -> Result<Self> {
        Ok(SL2Mat {
            m: self.m.conjugate_by(g)?,
        })
    }

    /// `[g, h] = g^{-1} h^{-1} g h`.
    pub fn commutator(&self, h: &Self) -> Result<Self> {
        check_compatible(&self.m, &h.m)?;
        Ok(SL2Mat {
            m: self.inverse().m.mul(&h.inverse().m).mul(&self.m).mul(&h.m),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.m
            .sub(&Mat2::identity())
            .rows
            .iter()
            .flatten()
            .all(T::vanishes)
    }

    pub fn is_minus_identity(&self) -> bool {
        self.m
            .add(&Mat2::identity())
            .rows
            .iter()
            .flatten()
            .all(T::vanishes)
    }

    pub fn is_central(&self) -> bool {
        self.is_identity() || self.is_minus_identity()
    }
}

impl SL2Mat<Rational> {
    pub fn from_ints(a11: i64, a12: i64, a21: i64, a22: i64) -> Result<Self> {
        SL2Mat::new(Mat2::from_ints(a11, a12, a21, a22))
    }

    pub fn to_scalar(&self) -> SL2Mat<Scalar> {
        SL2Mat {
            m: self.m.to_scalar(),
        }
    }
}

impl<T: Field + fmt::Display> fmt::Display for SL2Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.m.fmt(f)
    }
}

impl<T: Field> Serialize for SL2Mat<T>
where
    Mat2<T>: Serialize,
{
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.m.serialize(s)
    }
}
