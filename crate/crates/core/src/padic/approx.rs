use std::cmp::min;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::rational::{mod_inverse, reduce_mod, unit_part, vp, Rational};
use super::scalar::{is_square_scalar, Field, Scalar};
use super::square::{classify_unit, find_nonresidue, is_square, SquareClass};
use super::{mul_mod_u64, pow_mod_u64, PadicCtx, Prime, Valuation};
use crate::error::{Error, Result};

/// A truncated p-adic number `unit * p^valuation + O(p^(valuation + precision))`.
///
/// Precision is tracked per value: sums and products only keep the digits
/// that both operands determine. A value whose significant digits have all
/// cancelled is `O(p^k)`, indistinguishable from zero at absolute precision k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicApprox {
    prime: Prime,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Zero {
        abs: i64,
    },
    Unit {
        valuation: i64,
        unit: BigInt,
        precision: u32,
    },
}

impl PadicApprox {
    /// `x + O(p^abs)`.
    pub fn from_rational_abs(x: &Rational, prime: &Prime, abs: i64) -> Self {
        let repr = match vp(x, prime) {
            Valuation::Finite(v) if v < abs => {
                let precision = (abs - v) as u32;
                let (_, u) = unit_part(x, prime).expect("x is nonzero");
                Repr::Unit {
                    valuation: v,
                    unit: reduce_mod(&u, &prime.pow(precision)),
                    precision,
                }
            }
            _ => Repr::Zero { abs },
        };
        PadicApprox {
            prime: prime.clone(),
            repr,
        }
    }

    /// `x` with `precision` significant digits; zero becomes `O(p^precision)`.
    pub fn from_rational_rel(x: &Rational, prime: &Prime, precision: u32) -> Self {
        let abs = match vp(x, prime) {
            Valuation::Finite(v) => v + precision as i64,
            Valuation::Infinite => precision as i64,
        };
        Self::from_rational_abs(x, prime, abs)
    }

    /// `x` carried to the context precision.
    pub fn from_rational(x: &Rational, ctx: &PadicCtx) -> Self {
        Self::from_rational_rel(x, ctx.prime(), ctx.precision())
    }

    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    /// The valuation; `Infinite` when no significant digit survives.
    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero { .. } => Valuation::Infinite,
            Repr::Unit { valuation, .. } => Valuation::Finite(*valuation),
        }
    }

    /// Unit digits as an integer in `[0, p^precision)`.
    pub fn unit(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { unit, .. } => Some(unit),
        }
    }

    /// Number of significant digits.
    pub fn precision(&self) -> u32 {
        match &self.repr {
            Repr::Zero { .. } => 0,
            Repr::Unit { precision, .. } => *precision,
        }
    }

    /// The value is known modulo `p^absolute_precision`.
    pub fn absolute_precision(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Unit {
                valuation,
                precision,
                ..
            } => valuation + *precision as i64,
        }
    }

    pub fn is_indistinguishable_from_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// Base-p digits of the unit, least significant first.
    pub fn unit_digits(&self) -> Vec<BigInt> {
        let Some(unit) = self.unit() else {
            return Vec::new();
        };
        let p = self.prime.as_bigint();
        let mut rest = unit.clone();
        (0..self.precision())
            .map(|_| {
                let (q, r) = rest.div_rem(p);
                rest = q;
                r
            })
            .collect()
    }

    fn zero(prime: &Prime, abs: i64) -> Self {
        PadicApprox {
            prime: prime.clone(),
            repr: Repr::Zero { abs },
        }
    }

    /// `s * p^e + O(p^abs)` for an integer `0 <= s < p^(abs - e)`.
    fn normalize(prime: &Prime, e: i64, s: BigInt, abs: i64) -> Self {
        if s.is_zero() || e >= abs {
            return Self::zero(prime, abs);
        }
        let k = super::vp_int(&s, prime) as i64;
        let valuation = e + k;
        if valuation >= abs {
            return Self::zero(prime, abs);
        }
        PadicApprox {
            prime: prime.clone(),
            repr: Repr::Unit {
                valuation,
                unit: s / prime.pow(k as u32),
                precision: (abs - valuation) as u32,
            },
        }
    }

    fn check_prime(&self, rhs: &Self) {
        assert_eq!(
            self.prime, rhs.prime,
            "p-adic approximations over different primes"
        );
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_prime(rhs);
        let abs = min(self.absolute_precision(), rhs.absolute_precision());
        match (&self.repr, &rhs.repr) {
            (Repr::Zero { .. }, _) => rhs.truncate(abs),
            (_, Repr::Zero { .. }) => self.truncate(abs),
            (
                Repr::Unit {
                    valuation: v1,
                    unit: u1,
                    ..
                },
                Repr::Unit {
                    valuation: v2,
                    unit: u2,
                    ..
                },
            ) => {
                let e = min(*v1, *v2);
                if e >= abs {
                    return Self::zero(&self.prime, abs);
                }
                let p = &self.prime;
                let modulus = p.pow((abs - e) as u32);
                let s =
                    (u1 * p.pow((v1 - e) as u32) + u2 * p.pow((v2 - e) as u32)).mod_floor(&modulus);
                Self::normalize(p, e, s, abs)
            }
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => PadicApprox {
                prime: self.prime.clone(),
                repr: Repr::Unit {
                    valuation: *valuation,
                    unit: self.prime.pow(*precision) - unit,
                    precision: *precision,
                },
            },
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_prime(rhs);
        match (&self.repr, &rhs.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => Self::zero(&self.prime, a + b),
            (Repr::Zero { abs }, Repr::Unit { valuation, .. })
            | (Repr::Unit { valuation, .. }, Repr::Zero { abs }) => {
                Self::zero(&self.prime, abs + valuation)
            }
            (
                Repr::Unit {
                    valuation: v1,
                    unit: u1,
                    precision: r1,
                },
                Repr::Unit {
                    valuation: v2,
                    unit: u2,
                    precision: r2,
                },
            ) => {
                let precision = min(*r1, *r2);
                PadicApprox {
                    prime: self.prime.clone(),
                    repr: Repr::Unit {
                        valuation: v1 + v2,
                        unit: (u1 * u2).mod_floor(&self.prime.pow(precision)),
                        precision,
                    },
                }
            }
        }
    }

    /// Multiplicative inverse; fails when no significant digit is known.
    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::PrecisionExhausted),
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => Ok(PadicApprox {
                prime: self.prime.clone(),
                repr: Repr::Unit {
                    valuation: -valuation,
                    unit: mod_inverse(unit, &self.prime.pow(*precision))
                        .expect("p-adic units are invertible"),
                    precision: *precision,
                },
            }),
        }
    }

    fn truncate(&self, abs: i64) -> Self {
        if self.absolute_precision() <= abs {
            return self.clone();
        }
        match &self.repr {
            Repr::Zero { .. } => Self::zero(&self.prime, abs),
            Repr::Unit {
                valuation, unit, ..
            } => {
                if *valuation >= abs {
                    return Self::zero(&self.prime, abs);
                }
                let precision = (abs - valuation) as u32;
                PadicApprox {
                    prime: self.prime.clone(),
                    repr: Repr::Unit {
                        valuation: *valuation,
                        unit: unit.mod_floor(&self.prime.pow(precision)),
                        precision,
                    },
                }
            }
        }
    }

    /// True when `x` is consistent with this approximation at every known digit.
    pub fn agrees_with(&self, x: &Rational) -> bool {
        let other = Self::from_rational_abs(x, &self.prime, self.absolute_precision());
        self.sub(&other).is_indistinguishable_from_zero()
    }

    /// Square test on the known digits.
    pub fn is_square(&self) -> Result<bool> {
        let (v, unit, precision) = self.unit_data()?;
        if v % 2 != 0 {
            return Ok(false);
        }
        if self.prime.is_two() {
            if precision < 3 {
                return Err(Error::PrecisionExhausted);
            }
            Ok(low_u64(unit, 8) == 1)
        } else {
            let p = self.prime.value();
            Ok(pow_mod_u64(low_u64(unit, p), (p - 1) / 2, p) == 1)
        }
    }

    /// Square class, when enough unit digits are known to decide it.
    pub fn square_class(&self) -> Result<SquareClass> {
        let (v, unit, precision) = self.unit_data()?;
        let odd = v % 2 != 0;
        let tag = if self.prime.is_two() {
            if precision < 3 {
                return Err(Error::PrecisionExhausted);
            }
            classify_unit(odd, false, low_u64(unit, 8), &self.prime)
        } else {
            let p = self.prime.value();
            let sq = pow_mod_u64(low_u64(unit, p), (p - 1) / 2, p) == 1;
            classify_unit(odd, sq, 0, &self.prime)
        };
        SquareClass::from_tag(tag, &self.prime)
    }

    fn unit_data(&self) -> Result<(i64, &BigInt, u32)> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::PrecisionExhausted),
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => Ok((*valuation, unit, *precision)),
        }
    }

    /// A square root, using the canonical sign: for odd p the root whose
    /// first unit digit is smaller, for p = 2 the root that is 1 mod 4.
    ///
    /// Odd p keeps every digit; p = 2 loses one, since `w` and `w + 2^(r-1)`
    /// have the same square modulo `2^r`.
    pub fn sqrt(&self) -> Result<Self> {
        let (v, unit, precision) = self.unit_data()?;
        if v % 2 != 0 || !self.is_square()? {
            return Err(Error::NotASquare);
        }
        let p = &self.prime;
        let (root, root_precision) = if p.is_two() {
            (sqrt_unit_two(unit, precision), precision - 1)
        } else {
            (sqrt_unit_odd(unit, p, precision), precision)
        };
        Ok(PadicApprox {
            prime: p.clone(),
            repr: Repr::Unit {
                valuation: v / 2,
                unit: root,
                precision: root_precision,
            },
        })
    }

    /// `p^N` with `N` the number of significant digits, used in rendering.
    fn modulus_text(&self) -> String {
        format!("{}^{}", self.prime, self.precision())
    }

    fn unit_text(&self) -> Option<String> {
        self.unit()?;
        let p = self.prime.to_string();
        let terms: Vec<String> = self
            .unit_digits()
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| match i {
                0 => d.to_string(),
                1 => format!("{d}*{p}"),
                _ => format!("{d}*{p}^{i}"),
            })
            .collect();
        Some(format!(
            "{} (mod {})",
            terms.join(" + "),
            self.modulus_text()
        ))
    }
}

fn low_u64(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("reduced residue")
}

/// Square root of an odd-p unit modulo `p^precision` by Newton iteration
/// from a Tonelli-Shanks root mod p.
fn sqrt_unit_odd(u: &BigInt, p: &Prime, precision: u32) -> BigInt {
    let pv = p.value();
    let mut w = BigInt::from(tonelli_shanks(low_u64(u, pv), p));
    let mut k = 1;
    while k < precision {
        k = min(2 * k, precision);
        let m = p.pow(k);
        let two_w_inv = mod_inverse(&(&w * 2), &m).expect("2w is a unit");
        w = (&w - (&w * &w - u) * two_w_inv).mod_floor(&m);
    }
    let full = p.pow(precision);
    w = w.mod_floor(&full);
    let d0 = low_u64(&w, pv);
    if d0 > pv - d0 {
        w = full - w;
    }
    w
}

/// Square root modulo `2^(precision - 1)` of a unit that is 1 mod 8.
fn sqrt_unit_two(u: &BigInt, precision: u32) -> BigInt {
    let mut w = BigInt::one();
    for k in 3..precision {
        // w^2 = u mod 2^k; one of w, w + 2^(k-1) works mod 2^(k+1)
        let m = BigInt::one() << (k + 1);
        if !(&w * &w - u).mod_floor(&m).is_zero() {
            w += BigInt::one() << (k - 1);
        }
    }
    let half = BigInt::one() << (precision - 1);
    w = w.mod_floor(&half);
    if low_u64(&w, 4) == 3 {
        w = (half - w).mod_floor(&(BigInt::one() << (precision - 1)));
    }
    w
}

/// A square root of the quadratic residue `a` modulo the odd prime `p`.
fn tonelli_shanks(a: u64, p: &Prime) -> u64 {
    let pv = p.value();
    let a = a % pv;
    if pv % 4 == 3 {
        return pow_mod_u64(a, (pv + 1) / 4, pv);
    }
    let mut q = pv - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = find_nonresidue(p)
        .expect("odd prime")
        .to_integer()
        .to_u64()
        .expect("nonresidue below p");
    let mut m = s;
    let mut c = pow_mod_u64(z, q, pv);
    let mut t = pow_mod_u64(a, q, pv);
    let mut r = pow_mod_u64(a, q.div_ceil(2), pv);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod_u64(t2, t2, pv);
            i += 1;
        }
        let b = pow_mod_u64(c, 1u64 << (m - i - 1), pv);
        m = i;
        c = mul_mod_u64(b, b, pv);
        t = mul_mod_u64(t, c, pv);
        r = mul_mod_u64(r, b, pv);
    }
    r
}

impl fmt::Display for PadicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.unit_text() {
            None => write!(f, "O({}^{})", self.prime, self.absolute_precision()),
            Some(unit) => write!(f, "{}^{} * ({unit})", self.prime, self.valuation()),
        }
    }
}

impl Serialize for PadicApprox {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("PadicApprox", 5)?;
        st.serialize_field("valuation", &self.valuation())?;
        st.serialize_field("unit", &self.unit_text())?;
        st.serialize_field("p", &self.prime)?;
        st.serialize_field("N", &self.precision())?;
        st.serialize_field("absPrecision", &self.absolute_precision())?;
        st.end()
    }
}

/// A square root of `x` in Q_p to the context precision.
///
/// The result `y` satisfies `y^2 = x mod p^(v_p(x) + N)`; at p = 2 one
/// extra digit of `x` is consumed so that `y` still has N digits.
pub fn hensel_sqrt(x: &Rational, ctx: &PadicCtx) -> Result<PadicApprox> {
    let p = ctx.prime();
    if !is_square(x, p)? {
        return Err(Error::NotASquare);
    }
    let digits = ctx.precision() + u32::from(p.is_two());
    PadicApprox::from_rational_rel(x, p, digits).sqrt()
}

/// Exact square root of a rational that is the square of a rational.
pub(crate) fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

/// Whether `x` lies in `(Q_p^x)^(2^k)`.
///
/// Takes k successive square roots, trying both signs at each level. Roots
/// stay exact while they are rational; otherwise they are Hensel
/// approximations at the context precision, and running out of digits
/// yields `PrecisionExhausted`.
pub fn is_pow2k_power(x: &Rational, k: u32, ctx: &PadicCtx) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    pow2k(&Scalar::Exact(x.clone()), ctx.prime(), k, ctx)
}

fn pow2k(x: &Scalar, p: &Prime, k: u32, ctx: &PadicCtx) -> Result<bool> {
    if k == 0 {
        return Ok(true);
    }
    if !is_square_scalar(x, p)? {
        return Ok(false);
    }
    let root = match x {
        Scalar::Exact(r) => match rational_sqrt(r) {
            Some(y) => Scalar::Exact(y),
            None => Scalar::Approx(hensel_sqrt(r, ctx)?),
        },
        Scalar::Approx(a) => Scalar::Approx(a.sqrt()?),
    };
    let mut failure = None;
    for candidate in [root.negate(), root] {
        match pow2k(&candidate, p, k - 1, ctx) {
            Ok(true) => return Ok(true),
            Ok(false) => {}
            Err(e) => failure = Some(e),
        }
    }
    failure.map_or(Ok(false), Err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn ctx(p: u64, n: u32) -> PadicCtx {
        PadicCtx::new(Prime::new(p).unwrap(), n).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn sqrt_of_minus_one_mod_25() {
        // 7^2 = 49 = -1 mod 25; the other root 18 has the larger first digit
        let brute: Vec<i64> = (0..25).filter(|y| (y * y + 1) % 25 == 0).collect();
        assert_eq!(brute, vec![7, 18]);
        // contexts require N >= 4; two digits are taken directly
        let p5 = Prime::new(5).unwrap();
        let y = PadicApprox::from_rational_rel(&q("-1"), &p5, 2)
            .sqrt()
            .unwrap();
        assert_eq!(y.valuation(), Valuation::Finite(0));
        assert_eq!(y.unit(), Some(&big(7)));
        assert_eq!(y.precision(), 2);
        let y = hensel_sqrt(&q("-1"), &ctx(5, 4)).unwrap();
        assert_eq!(y.unit().unwrap() % 25, big(7));
    }

    #[test]
    fn rational_root_is_recovered() {
        let y = hensel_sqrt(&q("9"), &ctx(7, 4)).unwrap();
        assert!(y.agrees_with(&q("3")));
        let y = hensel_sqrt(&q("49/4"), &ctx(7, 6)).unwrap();
        assert_eq!(y.valuation(), Valuation::Finite(1));
        assert!(y.agrees_with(&q("7/2")) || y.agrees_with(&q("-7/2")));
    }

    #[test]
    fn dyadic_root_of_17() {
        let y = hensel_sqrt(&q("17"), &ctx(2, 6)).unwrap();
        let u = y.unit().unwrap().to_i64().unwrap();
        let odd_roots: Vec<i64> = (1..64)
            .step_by(2)
            .filter(|w| (w * w - 17) % 64 == 0)
            .collect();
        assert!(odd_roots.contains(&u), "{u} not in {odd_roots:?}");
        assert_eq!(u % 4, 1);
        assert_eq!(y.precision(), 6);
    }

    #[test]
    fn sqrt_errors() {
        assert_eq!(hensel_sqrt(&q("2"), &ctx(5, 8)), Err(Error::NotASquare));
        assert_eq!(hensel_sqrt(&q("5"), &ctx(2, 8)), Err(Error::NotASquare));
        assert_eq!(hensel_sqrt(&q("0"), &ctx(5, 8)), Err(Error::ZeroInput));
    }

    #[test]
    fn tonelli_matches_exhaustion() {
        for pr in [3u64, 5, 13, 17, 41, 97, 257] {
            let p = Prime::new(pr).unwrap();
            for a in 1..pr {
                let has_root = (1..pr).any(|y| y * y % pr == a);
                if has_root {
                    let r = tonelli_shanks(a, &p);
                    assert_eq!(r * r % pr, a, "p = {pr}, a = {a}");
                }
            }
        }
    }

    #[test]
    fn precision_tracks_cancellation() {
        let p = Prime::new(5).unwrap();
        let a = PadicApprox::from_rational_rel(&q("1"), &p, 6);
        let b = PadicApprox::from_rational_rel(&q("26"), &p, 6);
        let d = b.sub(&a);
        assert_eq!(d.valuation(), Valuation::Finite(2));
        assert_eq!(d.precision(), 4);
        assert!(d.agrees_with(&q("25")));
        let z = a.sub(&a);
        assert!(z.is_indistinguishable_from_zero());
        assert_eq!(z.absolute_precision(), 6);
        assert_eq!(z.inv(), Err(Error::PrecisionExhausted));
    }

    #[test]
    fn products_and_inverses() {
        let p = Prime::new(7).unwrap();
        let a = PadicApprox::from_rational_rel(&q("3/49"), &p, 10);
        let b = PadicApprox::from_rational_rel(&q("14/5"), &p, 8);
        let ab = a.mul(&b);
        assert_eq!(ab.precision(), 8);
        assert!(ab.agrees_with(&(q("3/49") * q("14/5"))));
        assert!(a.inv().unwrap().agrees_with(&q("49/3")));
    }

    #[test]
    fn powers_of_two_exponent() {
        let c5 = ctx(5, 64);
        assert!(is_pow2k_power(&q("16"), 2, &c5).unwrap());
        assert!(!is_pow2k_power(&q("5"), 1, &c5).unwrap());
        assert!(is_pow2k_power(&q("-1"), 1, &c5).unwrap());
        assert!(!is_pow2k_power(&q("-1"), 2, &c5).unwrap());
        assert!(is_pow2k_power(&q("7"), 0, &c5).unwrap());
        assert_eq!(is_pow2k_power(&q("0"), 1, &c5), Err(Error::ZeroInput));
    }

    #[test]
    fn fourth_powers_mod_25_oracle() {
        // -1 is a fourth power in Q_5 iff y^4 = -1 has a solution mod 25
        let fourth: Vec<i64> = (1i64..25)
            .filter(|y| y % 5 != 0)
            .map(|y| y.pow(4) % 25)
            .collect();
        assert!(!fourth.contains(&24));
        // 16 = 2^4 is
        assert!(fourth.contains(&16));
    }

    #[test]
    fn renders_digits() {
        let p5 = Prime::new(5).unwrap();
        let y = PadicApprox::from_rational_rel(&q("-1"), &p5, 2)
            .sqrt()
            .unwrap();
        assert_eq!(y.to_string(), "5^0 * (2 + 1*5 (mod 5^2))");
        let json = serde_json::to_value(&y).unwrap();
        assert_eq!(json["unit"], "2 + 1*5 (mod 5^2)");
        assert_eq!(json["N"], 2);
        assert_eq!(json["p"], 5);
    }
}
