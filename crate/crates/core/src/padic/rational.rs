use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{FpElem, Prime, Valuation};
use crate::error::{Error, Result};

/// Exact rational scalar. The rationals are dense in Q_p and every test the
/// classifier needs is decidable on them.
pub type Rational = BigRational;

/// Parses `"a"` or `"a/b"` with an optional leading minus and `b > 0`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("malformed rational `{text}`"));
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let unsigned = num.strip_prefix('-').unwrap_or(num);
    if !digits(unsigned) {
        return Err(bad());
    }
    let numer: BigInt = num.parse().map_err(|_| bad())?;
    let denom: BigInt = match den {
        Some(d) if digits(d) => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(Rational::new(numer, denom))
}

/// Renders `a` or `a/b` in lowest terms.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Exponent of `p` in a nonzero integer.
pub fn vp_int(n: &BigInt, p: &Prime) -> u64 {
    debug_assert!(!n.is_zero());
    let p = p.as_bigint();
    let mut count = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return count;
        }
        n = q;
        count += 1;
    }
}

/// p-adic valuation of a rational; `Infinite` exactly for zero.
pub fn vp(x: &Rational, p: &Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(vp_int(x.numer(), p) as i64 - vp_int(x.denom(), p) as i64)
}

/// Splits a nonzero rational as `p^v * u` with `u` a p-adic unit.
pub fn unit_part(x: &Rational, p: &Prime) -> Result<(i64, Rational)> {
    let v = vp(x, p).finite().ok_or(Error::ZeroInput)?;
    Ok((v, x / pow_rational(p, v)))
}

/// `p^k` as a rational, for any sign of `k`.
pub(crate) fn pow_rational(p: &Prime, k: i64) -> Rational {
    let magnitude = p.pow(k.unsigned_abs() as u32);
    if k >= 0 {
        Rational::from_integer(magnitude)
    } else {
        Rational::new(BigInt::one(), magnitude)
    }
}

/// Inverse of `a` modulo `m`, when it exists.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Reduces a rational with p-integral denominator modulo `m = p^k`.
pub(crate) fn reduce_mod(x: &Rational, m: &BigInt) -> BigInt {
    let inv = mod_inverse(x.denom(), m).expect("denominator must be a unit modulo p^k");
    (x.numer() * inv).mod_floor(m)
}

/// The residue map Z_p -> F_p.
pub fn residue(x: &Rational, p: &Prime) -> Result<FpElem> {
    if vp(x, p).is_negative() {
        return Err(Error::NegativeValuation);
    }
    let r = reduce_mod(x, p.as_bigint());
    Ok(FpElem(u64::try_from(&r).expect("residue fits in u64")))
}

/// `ac(x) = res(p^{-v_p(x)} x)`; never zero.
pub fn angular_component(x: &Rational, p: &Prime) -> Result<FpElem> {
    let (_, u) = unit_part(x, p)?;
    residue(&u, p)
}
