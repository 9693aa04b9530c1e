//! Arithmetic in Q_p(sqrt(delta)) for a nonsquare delta, and the norm group
//! of that extension.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{
    format_rational, is_square, square_class, Field, PadicCtx, Prime, Rational, Scalar, SquareClass,
};

/// A quadratic extension context. `delta` is always the canonical
/// representative of its square class, so two contexts built from deltas in
/// the same class compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadCtx {
    class: SquareClass,
    ctx: PadicCtx,
}

impl QuadCtx {
    pub fn new(delta: &Rational, ctx: &PadicCtx) -> Result<Self> {
        if delta.is_zero() {
            return Err(Error::ZeroInput);
        }
        let class = square_class(delta, ctx.prime())?;
        if class.is_identity() {
            return Err(Error::SquareDelta);
        }
        Ok(QuadCtx {
            class,
            ctx: ctx.clone(),
        })
    }

    pub fn delta(&self) -> &Rational {
        self.class.representative()
    }

    pub fn class(&self) -> &SquareClass {
        &self.class
    }

    pub fn prime(&self) -> &Prime {
        self.ctx.prime()
    }

    pub fn padic(&self) -> &PadicCtx {
        &self.ctx
    }
}

/// `alpha + beta * sqrt(delta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadElem {
    alpha: Scalar,
    beta: Scalar,
    qctx: QuadCtx,
}

impl QuadElem {
    pub fn new(alpha: impl Into<Scalar>, beta: impl Into<Scalar>, qctx: &QuadCtx) -> Self {
        QuadElem {
            alpha: alpha.into(),
            beta: beta.into(),
            qctx: qctx.clone(),
        }
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn beta(&self) -> &Scalar {
        &self.beta
    }

    pub fn context(&self) -> &QuadCtx {
        &self.qctx
    }

    fn delta(&self) -> Scalar {
        Scalar::Exact(self.qctx.delta().clone())
    }
}

#[derive(Serialize)]
struct QuadElemJson<'a> {
    alpha: &'a Scalar,
    beta: &'a Scalar,
    delta: String,
    p: &'a Prime,
}

impl Serialize for QuadElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadElemJson {
            alpha: &self.alpha,
            beta: &self.beta,
            delta: format_rational(self.qctx.delta()),
            p: self.qctx.prime(),
        }
        .serialize(s)
    }
}

pub fn quad_mul(u: &QuadElem, v: &QuadElem) -> Result<QuadElem> {
    if u.qctx != v.qctx {
        return Err(Error::ContextMismatch);
    }
    let delta = u.delta();
    let alpha = u
        .alpha
        .times(&v.alpha)
        .plus(&delta.times(&u.beta).times(&v.beta));
    let beta = u.alpha.times(&v.beta).plus(&v.alpha.times(&u.beta));
    Ok(QuadElem {
        alpha,
        beta,
        qctx: u.qctx.clone(),
    })
}

pub fn quad_conj(u: &QuadElem) -> QuadElem {
    QuadElem {
        alpha: u.alpha.clone(),
        beta: u.beta.negate(),
        qctx: u.qctx.clone(),
    }
}

/// `alpha^2 - delta * beta^2`.
pub fn quad_norm(u: &QuadElem) -> Scalar {
    u.alpha
        .times(&u.alpha)
        .minus(&u.delta().times(&u.beta).times(&u.beta))
}

pub fn quad_inv(u: &QuadElem) -> Result<QuadElem> {
    let n = quad_norm(u);
    if n.vanishes() {
        return Err(Error::NotInvertible);
    }
    let n_inv = n.try_inv()?;
    let c = quad_conj(u);
    Ok(QuadElem {
        alpha: c.alpha.times(&n_inv),
        beta: c.beta.times(&n_inv),
        qctx: u.qctx.clone(),
    })
}

/// Integers searched on each side of `a^2 - delta b^2 = t`.
fn norm_candidates(p: &Prime) -> Vec<Rational> {
    let to_q = |n: u64| Rational::from_integer(BigInt::from(n));
    if p.is_two() {
        (0..64).map(to_q).collect()
    } else {
        let pv = p.value();
        (0..pv).chain((1..pv).map(|k| k * pv)).map(to_q).collect()
    }
}

fn is_square_or_zero(w: &Rational, p: &Prime) -> bool {
    w.is_zero() || is_square(w, p).expect("nonzero")
}

/// Whether `c` is a norm from Q_p(sqrt(delta)), i.e. `c = a^2 - delta b^2`
/// for some `a, b` in Q_p.
///
/// `c` is first replaced by its square-class representative (norms form a
/// subgroup containing the squares). A hit is an exact certificate: for an
/// integer `b` with `c + delta b^2` a square in Q_p, a matching `a` exists.
/// The search runs over `b` (and symmetrically over `a`) in
/// `{0..p-1} ∪ p·{1..p-1}` for odd p and `{0..63}` for p = 2, applied to both
/// `c` and `p^2 c`; every solution has a representative there after scaling
/// by `p`, because with `c` and `delta` of valuation 0 or 1 the leading terms
/// of `a^2` and `delta b^2` cancel by at most two digits.
pub fn is_norm(c: &Rational, qctx: &QuadCtx) -> Result<bool> {
    let p = qctx.prime();
    if c.is_zero() {
        return Err(Error::ZeroInput);
    }
    let rep = square_class(c, p)?.representative().clone();
    let delta = qctx.delta();
    let p2 = Rational::from_integer(p.as_bigint() * p.as_bigint());
    let candidates = norm_candidates(p);
    for target in [rep.clone(), rep * p2] {
        for k in &candidates {
            // b = k: a^2 = target + delta k^2
            if is_square_or_zero(&(&target + delta * k * k), p) {
                return Ok(true);
            }
            // a = k: b^2 = (k^2 - target) / delta
            if is_square_or_zero(&((k * k - &target) / delta), p) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
