use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::approx::PadicApprox;
use super::rational::{format_rational, vp, Rational};
use super::square::{is_square, square_class, SquareClass};
use super::{Prime, Valuation};
use crate::error::{Error, Result};

/// The field operations matrices need. Implemented for exact rationals and
/// for [`Scalar`], which may carry p-adic approximations.
pub trait Field: Clone + fmt::Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(x: &Rational) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn try_inv(&self) -> Result<Self>;
    /// Exactly zero, or indistinguishable from zero at the known precision.
    fn vanishes(&self) -> bool;

    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negate())
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.times(&rhs.try_inv()?))
    }

    /// The prime of an approximate value; `None` for exact values.
    fn prime(&self) -> Option<&Prime> {
        None
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_rational(x: &Rational) -> Self {
        x.clone()
    }

    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn negate(&self) -> Self {
        -self
    }

    fn try_inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::NotInvertible)
        } else {
            Ok(self.recip())
        }
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// An element of Q_p: an exact rational, or a truncated p-adic approximation
/// when an irrational square root is involved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Exact(Rational),
    Approx(PadicApprox),
}

impl Scalar {
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// `None` for exact values.
    pub fn absolute_precision(&self) -> Option<i64> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Approx(a) => Some(a.absolute_precision()),
        }
    }

    pub fn valuation(&self, p: &Prime) -> Valuation {
        match self {
            Scalar::Exact(r) => vp(r, p),
            Scalar::Approx(a) => a.valuation(),
        }
    }

    /// Equal to `x` (exact case) or consistent with it at every known digit.
    pub fn agrees_with(&self, x: &Rational) -> bool {
        match self {
            Scalar::Exact(r) => r == x,
            Scalar::Approx(a) => a.agrees_with(x),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(x: Rational) -> Self {
        Scalar::Exact(x)
    }
}

impl From<PadicApprox> for Scalar {
    fn from(x: PadicApprox) -> Self {
        Scalar::Approx(x)
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::Exact(Zero::zero())
    }

    fn one() -> Self {
        Scalar::Exact(One::one())
    }

    fn from_rational(x: &Rational) -> Self {
        Scalar::Exact(x.clone())
    }

    fn plus(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            (Scalar::Exact(r), Scalar::Approx(a)) | (Scalar::Approx(a), Scalar::Exact(r)) => {
                let r = PadicApprox::from_rational_abs(r, a.prime(), a.absolute_precision());
                Scalar::Approx(a.add(&r))
            }
            (Scalar::Approx(a), Scalar::Approx(b)) => Scalar::Approx(a.add(b)),
        }
    }

    fn times(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            (Scalar::Exact(r), Scalar::Approx(a)) | (Scalar::Approx(a), Scalar::Exact(r)) => {
                if Zero::is_zero(r) {
                    return Scalar::Exact(Zero::zero());
                }
                let r = PadicApprox::from_rational_rel(r, a.prime(), a.precision().max(1));
                Scalar::Approx(a.mul(&r))
            }
            (Scalar::Approx(a), Scalar::Approx(b)) => Scalar::Approx(a.mul(b)),
        }
    }

    fn negate(&self) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Approx(a) => Scalar::Approx(a.neg()),
        }
    }

    fn try_inv(&self) -> Result<Self> {
        match self {
            Scalar::Exact(r) => r.try_inv().map(Scalar::Exact),
            Scalar::Approx(a) => a.inv().map(Scalar::Approx),
        }
    }

    fn vanishes(&self) -> bool {
        match self {
            Scalar::Exact(r) => Zero::is_zero(r),
            Scalar::Approx(a) => a.is_indistinguishable_from_zero(),
        }
    }

    fn prime(&self) -> Option<&Prime> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Approx(a) => Some(a.prime()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => f.write_str(&format_rational(r)),
            Scalar::Approx(a) => a.fmt(f),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => serializer.serialize_str(&format_rational(r)),
            Scalar::Approx(a) => a.serialize(serializer),
        }
    }
}

/// Square test for exact or approximate scalars.
pub fn is_square_scalar(x: &Scalar, p: &Prime) -> Result<bool> {
    match x {
        Scalar::Exact(r) => is_square(r, p),
        Scalar::Approx(a) => a.is_square(),
    }
}

/// Square class of an exact or approximate nonzero scalar.
pub fn square_class_scalar(x: &Scalar, p: &Prime) -> Result<SquareClass> {
    match x {
        Scalar::Exact(r) => square_class(r, p),
        Scalar::Approx(a) => a.square_class(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{hensel_sqrt, parse_rational, PadicCtx};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn exact_times_zero_stays_exact() {
        let ctx = PadicCtx::new(Prime::new(5).unwrap(), 8).unwrap();
        let root = Scalar::Approx(hensel_sqrt(&q("-1"), &ctx).unwrap());
        assert_eq!(root.times(&Scalar::zero()), Scalar::zero());
        let sq = root.times(&root);
        assert!(sq.agrees_with(&q("-1")));
        assert!(!sq.is_exact());
    }

    #[test]
    fn mixed_arithmetic_keeps_precision() {
        let ctx = PadicCtx::new(Prime::new(7).unwrap(), 10).unwrap();
        let s = Scalar::Approx(hensel_sqrt(&q("2"), &ctx).unwrap());
        let shifted = s.plus(&Scalar::Exact(q("1/7")));
        assert_eq!(shifted.valuation(ctx.prime()), Valuation::Finite(-1));
        let back = shifted.minus(&Scalar::Exact(q("1/7")));
        assert_eq!(back.absolute_precision(), Some(10));
        let scaled = s.times(&Scalar::Exact(q("49")));
        assert_eq!(scaled.absolute_precision(), Some(12));
        assert!(scaled.times(&scaled).agrees_with(&q("4802")));
    }

    #[test]
    fn exact_inverse_of_zero_fails() {
        assert_eq!(Scalar::zero().try_inv(), Err(Error::NotInvertible));
    }
}
