use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use super::rational::{angular_component, format_rational, unit_part, Rational};
use super::{pow_mod_u64, FpElem, Prime};
use crate::error::{Error, Result};

/// Euler's criterion in F_p. Every nonzero element of F_2 is a square.
pub fn is_fp_square(c: FpElem, p: &Prime) -> Result<bool> {
    let c = c.0 % p.value();
    if c == 0 {
        return Err(Error::ZeroInput);
    }
    if p.is_two() {
        return Ok(true);
    }
    Ok(pow_mod_u64(c, (p.value() - 1) / 2, p.value()) == 1)
}

/// Residue of an odd p-adic unit modulo 8 (p = 2 only).
pub(crate) fn unit_mod_8(u: &Rational) -> u64 {
    // odd d satisfies d^2 = 1 mod 8, so n/d = n*d mod 8
    let eight = BigInt::from(8);
    (u.numer() * u.denom())
        .mod_floor(&eight)
        .to_u64()
        .expect("residue mod 8")
}

/// Whether a nonzero rational is a square in Q_p.
///
/// Odd p: even valuation and square angular component. p = 2: even valuation
/// and unit part congruent to 1 mod 8.
pub fn is_square(x: &Rational, p: &Prime) -> Result<bool> {
    let (v, u) = unit_part(x, p)?;
    if v % 2 != 0 {
        return Ok(false);
    }
    if p.is_two() {
        Ok(unit_mod_8(&u) == 1)
    } else {
        is_fp_square(angular_component(x, p)?, p)
    }
}

/// Smallest positive integer that is a quadratic nonresidue mod an odd `p`.
pub fn find_nonresidue(p: &Prime) -> Result<Rational> {
    if p.is_two() {
        return Err(Error::UnsupportedPrime);
    }
    let u = (2..p.value())
        .find(|&u| !is_fp_square(FpElem(u), p).expect("u is nonzero mod p"))
        .expect("an odd prime has a nonresidue");
    Ok(Rational::from_integer(u.into()))
}

/// Label of a coset of (Q_p^x)^2 in Q_p^x.
///
/// Odd primes use `{One, U, P, UP}` for the representatives `{1, u, p, up}`
/// with `u` the least positive nonresidue. p = 2 uses the eight signed
/// representatives `{±1, ±2, ±5, ±10}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareClassTag {
    One,
    U,
    P,
    UP,
    Plus1,
    Minus1,
    Plus2,
    Minus2,
    Plus5,
    Minus5,
    Plus10,
    Minus10,
}

impl SquareClassTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SquareClassTag::One => "One",
            SquareClassTag::U => "U",
            SquareClassTag::P => "P",
            SquareClassTag::UP => "UP",
            SquareClassTag::Plus1 => "+1",
            SquareClassTag::Minus1 => "-1",
            SquareClassTag::Plus2 => "+2",
            SquareClassTag::Minus2 => "-2",
            SquareClassTag::Plus5 => "+5",
            SquareClassTag::Minus5 => "-5",
            SquareClassTag::Plus10 => "+10",
            SquareClassTag::Minus10 => "-10",
        }
    }

    pub fn is_identity(self) -> bool {
        matches!(self, SquareClassTag::One | SquareClassTag::Plus1)
    }

    fn dyadic_rep(self) -> i64 {
        match self {
            SquareClassTag::Plus1 => 1,
            SquareClassTag::Minus1 => -1,
            SquareClassTag::Plus2 => 2,
            SquareClassTag::Minus2 => -2,
            SquareClassTag::Plus5 => 5,
            SquareClassTag::Minus5 => -5,
            SquareClassTag::Plus10 => 10,
            SquareClassTag::Minus10 => -10,
            _ => unreachable!("odd-prime tag has no dyadic representative"),
        }
    }
}

impl fmt::Display for SquareClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for SquareClassTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// A square class together with its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareClass {
    tag: SquareClassTag,
    rep: Rational,
}

impl SquareClass {
    /// Builds the class with the given tag at `p`; errors if the tag belongs
    /// to the other parity of prime.
    pub fn from_tag(tag: SquareClassTag, p: &Prime) -> Result<Self> {
        let odd_tag = matches!(
            tag,
            SquareClassTag::One | SquareClassTag::U | SquareClassTag::P | SquareClassTag::UP
        );
        if odd_tag == p.is_two() {
            return Err(Error::UnsupportedPrime);
        }
        let pr = Rational::from_integer(p.as_bigint().clone());
        let rep = match tag {
            SquareClassTag::One => Rational::from_integer(1.into()),
            SquareClassTag::U => find_nonresidue(p)?,
            SquareClassTag::P => pr,
            SquareClassTag::UP => find_nonresidue(p)? * pr,
            other => Rational::from_integer(other.dyadic_rep().into()),
        };
        Ok(SquareClass { tag, rep })
    }

    /// All classes of Q_p^x / (Q_p^x)^2: four for odd p, eight for p = 2.
    pub fn all(p: &Prime) -> Vec<SquareClass> {
        use SquareClassTag::*;
        let tags: &[SquareClassTag] = if p.is_two() {
            &[Plus1, Minus1, Plus2, Minus2, Plus5, Minus5, Plus10, Minus10]
        } else {
            &[One, U, P, UP]
        };
        tags.iter()
            .map(|&t| SquareClass::from_tag(t, p).expect("tag matches prime"))
            .collect()
    }

    pub fn tag(&self) -> SquareClassTag {
        self.tag
    }

    pub fn representative(&self) -> &Rational {
        &self.rep
    }

    pub fn is_identity(&self) -> bool {
        self.tag.is_identity()
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (rep {})", self.tag, self.rep)
    }
}

impl Serialize for SquareClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("SquareClass", 2)?;
        st.serialize_field("tag", self.tag.as_str())?;
        st.serialize_field("witnessRep", &format_rational(&self.rep))?;
        st.end()
    }
}

/// Tag of the class with valuation parity `odd_valuation` and unit data.
///
/// For odd p `unit_is_square` decides; for p = 2 `unit_mod_8` (odd) decides.
pub(crate) fn classify_unit(
    odd_valuation: bool,
    unit_is_square: bool,
    unit_mod_8: u64,
    p: &Prime,
) -> SquareClassTag {
    use SquareClassTag::*;
    if p.is_two() {
        match (odd_valuation, unit_mod_8 % 8) {
            (false, 1) => Plus1,
            (false, 7) => Minus1,
            (false, 5) => Plus5,
            (false, 3) => Minus5,
            (true, 1) => Plus2,
            (true, 7) => Minus2,
            (true, 5) => Plus10,
            (true, 3) => Minus10,
            _ => unreachable!("unit part at p = 2 is odd"),
        }
    } else {
        match (odd_valuation, unit_is_square) {
            (false, true) => One,
            (false, false) => U,
            (true, true) => P,
            (true, false) => UP,
        }
    }
}

/// The square class of a nonzero rational.
pub fn square_class(x: &Rational, p: &Prime) -> Result<SquareClass> {
    let (v, u) = unit_part(x, p)?;
    let odd = v % 2 != 0;
    let tag = if p.is_two() {
        classify_unit(odd, false, unit_mod_8(&u), p)
    } else {
        classify_unit(odd, is_fp_square(angular_component(x, p)?, p)?, 0, p)
    };
    SquareClass::from_tag(tag, p)
}
