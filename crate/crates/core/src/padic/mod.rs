//! Exact p-adic arithmetic on rationals, truncated p-adic approximations,
//! square tests and square classes of Q_p^x.

mod approx;
mod rational;
mod scalar;
mod square;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

pub(crate) use approx::rational_sqrt;
pub use approx::{hensel_sqrt, is_pow2k_power, PadicApprox};
pub use rational::{
    angular_component, format_rational, parse_rational, residue, unit_part, vp, vp_int, Rational,
};
pub use scalar::{is_square_scalar, square_class_scalar, Field, Scalar};
pub use square::{
    find_nonresidue, is_fp_square, is_square, square_class, SquareClass, SquareClassTag,
};

use crate::error::{Error, Result};

/// Default number of significant p-adic digits carried by approximations.
pub const DEFAULT_PRECISION: u32 = 64;

/// A prime number below 2^64, checked at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime {
    value: u64,
    big: BigInt,
}

impl Prime {
    pub fn new(value: u64) -> Result<Self> {
        if !is_prime_u64(value) {
            return Err(Error::NotPrime(value.to_string()));
        }
        Ok(Prime {
            value,
            big: BigInt::from(value),
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn as_bigint(&self) -> &BigInt {
        &self.big
    }

    pub fn is_two(&self) -> bool {
        self.value == 2
    }

    /// `p^k` as a big integer.
    pub fn pow(&self, k: u32) -> BigInt {
        self.big.pow(k)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FromStr for Prime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value: u64 = s
            .trim()
            .parse()
            .map_err(|_| Error::NotPrime(s.trim().to_string()))?;
        Prime::new(value)
    }
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.value)
    }
}

/// Deterministic Miller-Rabin; the base set is exact for all 64-bit inputs.
fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// The precision model: a prime plus the number `N` of significant digits
/// that approximations are computed to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicCtx {
    prime: Prime,
    precision: u32,
}

impl PadicCtx {
    /// `precision` must be at least 4 so the mod-8 unit test at p = 2 stays decidable.
    pub fn new(prime: Prime, precision: u32) -> Result<Self> {
        if precision < 4 {
            return Err(Error::InvalidPrecision(precision));
        }
        Ok(PadicCtx { prime, precision })
    }

    pub fn with_default_precision(prime: Prime) -> Self {
        PadicCtx {
            prime,
            precision: DEFAULT_PRECISION,
        }
    }

    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }
}

/// A p-adic valuation, with `Infinite` for zero. `Finite` sorts below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Valuation::Finite(v) if v < 0)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("+inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_i64(*v),
            Valuation::Infinite => serializer.serialize_str("+inf"),
        }
    }
}

/// An element of the residue field F_p, stored reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpElem(pub u64);

impl FpElem {
    pub fn new(value: u64, p: &Prime) -> Self {
        FpElem(value % p.value())
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| {
            n >= 2
                && (2..n)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), trial(n), "n = {n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn rejects_composites_and_small_precision() {
        assert!(matches!(Prime::new(15), Err(Error::NotPrime(_))));
        assert!(matches!(Prime::new(1), Err(Error::NotPrime(_))));
        let p = Prime::new(5).unwrap();
        assert_eq!(PadicCtx::new(p.clone(), 3), Err(Error::InvalidPrecision(3)));
        assert_eq!(PadicCtx::new(p, 4).unwrap().precision(), 4);
    }

    #[test]
    fn infinite_valuation_dominates() {
        assert!(Valuation::Infinite > Valuation::Finite(i64::MAX));
        assert!(Valuation::Finite(-3) < Valuation::Finite(2));
        assert_eq!(Valuation::Infinite.to_string(), "+inf");
    }
}
