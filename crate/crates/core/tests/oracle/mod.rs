//! Independent reference computations for the integration tests. Nothing
//! here calls into the library's p-adic code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// v_p by repeated division; `None` for zero.
pub fn val(x: &Q, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut k = 0i64;
        while (&n % &pb).is_zero() {
            n /= &pb;
            k += 1;
        }
        k
    };
    Some(count(x.numer()) - count(x.denom()))
}

/// `x = p^v u` with `u` a p-adic unit.
pub fn split(x: &Q, p: u64) -> (i64, Q) {
    let v = val(x, p).expect("nonzero");
    let pq = Q::from_integer(BigInt::from(p));
    let u = if v >= 0 {
        x / pq.pow(v as i32)
    } else {
        x * pq.pow((-v) as i32)
    };
    (v, u)
}

/// A unit rational reduced into `[0, m)`.
pub fn residue(u: &Q, m: &BigInt) -> BigInt {
    let d_inv = u.denom().extended_gcd(m).x;
    (u.numer() * d_inv).mod_floor(m)
}

/// All `y mod p^k` with `y^2 = u mod p^k`, built one digit at a time by
/// exhaustive search over the next digit.
pub fn unit_roots(u: &BigInt, p: u64, k: u32) -> Vec<BigInt> {
    let pb = BigInt::from(p);
    let mut roots = vec![BigInt::zero()];
    let mut modulus = BigInt::one();
    for _ in 0..k {
        let next = &modulus * &pb;
        let target = u.mod_floor(&next);
        let mut grown = Vec::new();
        for r in &roots {
            for digit in 0..p {
                let y = r + &modulus * BigInt::from(digit);
                if (&y * &y).mod_floor(&next) == target {
                    grown.push(y);
                }
            }
        }
        roots = grown;
        modulus = next;
        if roots.is_empty() {
            break;
        }
    }
    roots
}

/// Square test in Q_p: even valuation and a unit part with a square root mod
/// p^8 (mod 2^10 for p = 2), found by brute force.
pub fn is_square(x: &Q, p: u64) -> bool {
    let (v, u) = split(x, p);
    if v % 2 != 0 {
        return false;
    }
    let k = if p == 2 { 10 } else { 8 };
    let m = BigInt::from(p).pow(k);
    !unit_roots(&residue(&u, &m), p, k).is_empty()
}

/// Hilbert symbol (a, b)_p for nonzero rationals, from the standard formulas
/// in terms of Legendre symbols and residues mod 8.
pub fn hilbert(a: &Q, b: &Q, p: u64) -> i32 {
    let (va, ua) = split(a, p);
    let (vb, ub) = split(b, p);
    if p == 2 {
        let m = BigInt::from(8);
        let r = |u: &Q| residue(u, &m).try_into().unwrap_or(0u64);
        let (u, w) = (r(&ua), r(&ub));
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let e = eps(u) * eps(w)
            + (va.rem_euclid(2) as u64) * omega(w)
            + (vb.rem_euclid(2) as u64) * omega(u);
        if e.is_multiple_of(2) {
            1
        } else {
            -1
        }
    } else {
        let pm = BigInt::from(p);
        let legendre = |u: &Q| {
            let r = residue(u, &pm);
            let e = r.modpow(&BigInt::from((p - 1) / 2), &pm);
            if e.is_one() {
                1
            } else {
                -1
            }
        };
        let sign = if (va * vb).rem_euclid(2) == 1 && p % 4 == 3 {
            -1
        } else {
            1
        };
        let la = if vb.rem_euclid(2) == 1 {
            legendre(&ua)
        } else {
            1
        };
        let lb = if va.rem_euclid(2) == 1 {
            legendre(&ub)
        } else {
            1
        };
        sign * la * lb
    }
}

pub type M2 = [[Q; 2]; 2];

pub fn m2(a: Q, b: Q, c: Q, d: Q) -> M2 {
    [[a, b], [c, d]]
}

pub fn mul(x: &M2, y: &M2) -> M2 {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn det(x: &M2) -> Q {
    &x[0][0] * &x[1][1] - &x[0][1] * &x[1][0]
}

pub fn trace(x: &M2) -> Q {
    &x[0][0] + &x[1][1]
}

/// `tr(A^{-1} M)` for `A` of determinant 1, expanded by hand.
pub fn trace_inv_times(a: &M2, m: &M2) -> Q {
    &a[1][1] * &m[0][0] - &a[0][1] * &m[1][0] - &a[1][0] * &m[0][1] + &a[0][0] * &m[1][1]
}

pub fn is_negative_val(x: &Q, p: u64) -> bool {
    val(x, p).is_some_and(|v| v < 0)
}

pub fn is_sign_negative(x: &Q) -> bool {
    x.is_negative()
}
