use num_traits::Zero;
use serde::Serialize;

use crate::cartan::discriminant;
use crate::error::{Error, Result};
use crate::padic::{format_rational, is_square, vp, Prime, Rational, Valuation};
use crate::sl2core::{Mat2, SL2Mat};

/// `v_p(tr A) < 0`. The complement, including trace 0, is W'.
pub fn in_w(a: &SL2Mat, p: &Prime) -> bool {
    vp(&a.trace(), p).is_negative()
}

fn pow_p(p: &Prime, k: i64) -> Rational {
    let base = Rational::from_integer(p.as_bigint().clone());
    if k >= 0 {
        base.pow(k as i32)
    } else {
        base.recip().pow((-k) as i32)
    }
}

/// `A1 = I`, `A2 = omega`, `A3 = diag(1/a, a)`, `A4 = [[0, -1/b], [b, 0]]`
/// with `a = b = p`.
pub fn covering_family(p: &Prime) -> Vec<SL2Mat> {
    let pr = pow_p(p, 1);
    let zero = <Rational as Zero>::zero();
    let a3 = Mat2::diag(pr.recip(), pr.clone());
    let a4 = Mat2::new(zero.clone(), -pr.recip(), pr, zero);
    vec![
        SL2Mat::identity(),
        SL2Mat::omega(),
        SL2Mat::new(a3).expect("det 1"),
        SL2Mat::new(a4).expect("det 1"),
    ]
}

/// `M` lies in `A_index W`, certified by `tr(A_index^{-1} M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverWitness {
    pub index: usize,
    pub translate: SL2Mat,
    #[serde(rename = "checkedTrace", serialize_with = "ser_rational")]
    pub checked_trace: Rational,
    pub valuation: Valuation,
}

fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

fn ser_rationals<S: serde::Serializer>(
    xs: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(format_rational))
}

/// Smallest (one-based) index `i` with `A_i^{-1} M` in W. Never fails when
/// the four translates cover SL2(Q_p); a [`Error::CoverageViolation`] would
/// falsify that.
pub fn cover_witness(m: &SL2Mat, p: &Prime) -> Result<CoverWitness> {
    for (i, a) in covering_family(p).into_iter().enumerate() {
        let t = a.inverse().group_op(m)?.trace();
        let v = vp(&t, p);
        if v.is_negative() {
            return Ok(CoverWitness {
                index: i + 1,
                translate: a,
                checked_trace: t,
                valuation: v,
            });
        }
    }
    Err(Error::CoverageViolation {
        matrix: m.to_string(),
    })
}

/// `M = [[x, y], [0, 1/x]]` outside every `A_j W'` of a family, with the
/// traces `tr(A_j^{-1} M)` that certify it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EscapeWitness {
    #[serde(serialize_with = "ser_rational")]
    pub x: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub y: Rational,
    #[serde(rename = "witnessMatrix")]
    pub witness_matrix: SL2Mat,
    #[serde(rename = "perTranslateTraces", serialize_with = "ser_rationals")]
    pub per_translate_traces: Vec<Rational>,
}

impl EscapeWitness {
    fn build(x: Rational, y: Rational, family: &[SL2Mat]) -> Result<Self> {
        let m = Mat2::new(x.clone(), y.clone(), <Rational as Zero>::zero(), x.recip());
        let witness_matrix = SL2Mat::new(m)?;
        let per_translate_traces = family
            .iter()
            .map(|a| Ok(a.inverse().group_op(&witness_matrix)?.trace()))
            .collect::<Result<Vec<_>>>()?;
        Ok(EscapeWitness {
            x,
            y,
            witness_matrix,
            per_translate_traces,
        })
    }

    /// Every trace has negative valuation.
    pub fn escapes(&self, p: &Prime) -> bool {
        self.per_translate_traces
            .iter()
            .all(|t| vp(t, p).is_negative())
    }
}

fn abs_val(x: &Rational, p: &Prime) -> Option<i64> {
    vp(x, p).finite().map(i64::abs)
}

/// `1 + max |v_p(a_j)|, |v_p(d_j)|` over the finite values.
fn diagonal_exponent<'a>(family: impl Iterator<Item = &'a SL2Mat>, p: &Prime) -> i64 {
    1 + family
        .flat_map(|a| {
            let m = a.matrix();
            [abs_val(m.a11(), p), abs_val(m.a22(), p)]
        })
        .flatten()
        .max()
        .unwrap_or(0)
}

/// The diagonal witness `M_x = diag(x, 1/x)`, `x = p^m`, for which
/// `tr(A^{-1} M_x) = d x + a / x`.
///
/// A translate with `a = d = 0` has trace 0 against every `M_x`, so no
/// diagonal witness exists. One with `a = 0 != d` has trace `d x` of
/// positive valuation for this choice of `x`.
pub fn escape_witness_paper(family: &[SL2Mat], p: &Prime) -> Result<EscapeWitness> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if let Some(index) = family.iter().position(|a| a.matrix().is_antidiagonal()) {
        return Err(Error::AntidiagonalTranslate { index });
    }
    if let Some(index) = family.iter().position(|a| a.matrix().a11().is_zero()) {
        return Err(Error::ZeroTopLeftTranslate { index });
    }
    let x = pow_p(p, diagonal_exponent(family.iter(), p));
    let w = EscapeWitness::build(x, <Rational as Zero>::zero(), family)?;
    debug_assert!(w.escapes(p));
    Ok(w)
}

/// An upper triangular witness escaping any finite family of translates.
///
/// With `A_j = [[a, b], [c, d]]`, `tr(A_j^{-1} M) = d x - c y + a / x`. The
/// exponent of `x = p^m` is chosen as for the diagonal witness over the
/// translates with `c = 0` (there `a d = 1`, so `a / x` dominates). Then
/// `y = p^t` is chosen so that `c y` strictly dominates the other two terms
/// and 0 in valuation for every translate with `c != 0`.
pub fn escape_witness_general(family: &[SL2Mat], p: &Prime) -> Result<EscapeWitness> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let m = diagonal_exponent(family.iter().filter(|a| a.matrix().a21().is_zero()), p);
    let x = pow_p(p, m);
    let t = family
        .iter()
        .filter(|a| !a.matrix().a21().is_zero())
        .map(|a| {
            let e = a.matrix();
            let bound = [vp(&(e.a22() * &x), p), vp(&(e.a11() / &x), p)]
                .into_iter()
                .filter_map(Valuation::finite)
                .fold(0, i64::min);
            let vc = vp(e.a21(), p).finite().expect("c is nonzero");
            bound - vc
        })
        .min();
    let y = match t {
        Some(t) => pow_p(p, t - 1),
        None => <Rational as Zero>::zero(),
    };
    let w = EscapeWitness::build(x, y, family)?;
    debug_assert!(w.escapes(p));
    Ok(w)
}

/// Whether an element of W has square discriminant, i.e. is conjugate into
/// Q1. Every element of W should; a `false` is a falsification event.
pub fn w_orbit_check(a: &SL2Mat, p: &Prime) -> Result<bool> {
    if !in_w(a, p) {
        return Err(Error::NotInW);
    }
    // v(tr) < 0 forces tr^2 - 4 != 0
    is_square(&discriminant(a), p)
}
