//! Conjugacy classes of SL2(Q_p) by the trace discriminant, with explicit
//! conjugators into the standard copies Q1, Qdelta and U.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{
    hensel_sqrt, is_square, rational_sqrt, square_class, square_class_scalar, Field, PadicCtx,
    Prime, Rational, Scalar, SquareClass,
};
use crate::quadext::{is_norm, QuadCtx};
use crate::sl2core::{subgroup_membership, Mat2, SL2Mat, SubgroupTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClassKind {
    CentralPlus,
    CentralMinus,
    UnipotentPlus,
    UnipotentMinus,
    Split,
    Nonsplit,
}

impl ClassKind {
    pub const ALL: [ClassKind; 6] = [
        ClassKind::CentralPlus,
        ClassKind::CentralMinus,
        ClassKind::UnipotentPlus,
        ClassKind::UnipotentMinus,
        ClassKind::Split,
        ClassKind::Nonsplit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassKind::CentralPlus => "CentralPlus",
            ClassKind::CentralMinus => "CentralMinus",
            ClassKind::UnipotentPlus => "UnipotentPlus",
            ClassKind::UnipotentMinus => "UnipotentMinus",
            ClassKind::Split => "Split",
            ClassKind::Nonsplit => "Nonsplit",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    pub kind: ClassKind,
    #[serde(
        rename = "deltaClass",
        skip_serializing_if = "Option::is_none",
        serialize_with = "tag_only"
    )]
    pub delta_class: Option<SquareClass>,
    /// For nonsplit elements, whether they are SL2-conjugate into the standard
    /// Qdelta. Only filled in by [`classify_refined`].
    #[serde(rename = "standardCopy", skip_serializing_if = "Option::is_none")]
    pub standard_copy: Option<bool>,
}

fn tag_only<S: serde::Serializer>(
    c: &Option<SquareClass>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match c {
        Some(c) => s.serialize_str(c.tag().as_str()),
        None => s.serialize_none(),
    }
}

/// `tr(A)^2 - 4`.
pub fn discriminant(a: &SL2Mat) -> Rational {
    let t = a.trace();
    &t * &t - Rational::from_integer(4.into())
}

pub fn classify(a: &SL2Mat, p: &Prime) -> Result<ConjugacyClass> {
    let kind_only = |kind| ConjugacyClass {
        kind,
        delta_class: None,
        standard_copy: None,
    };
    if a.is_identity() {
        return Ok(kind_only(ClassKind::CentralPlus));
    }
    if a.is_minus_identity() {
        return Ok(kind_only(ClassKind::CentralMinus));
    }
    let disc = discriminant(a);
    if disc.is_zero() {
        let kind = if a.trace().is_positive() {
            ClassKind::UnipotentPlus
        } else {
            ClassKind::UnipotentMinus
        };
        return Ok(kind_only(kind));
    }
    let class = square_class(&disc, p)?;
    if class.is_identity() {
        Ok(kind_only(ClassKind::Split))
    } else {
        Ok(ConjugacyClass {
            kind: ClassKind::Nonsplit,
            delta_class: Some(class),
            standard_copy: None,
        })
    }
}

/// [`classify`] plus the orbit refinement for nonsplit elements.
pub fn classify_refined(a: &SL2Mat, ctx: &PadicCtx) -> Result<ConjugacyClass> {
    let mut c = classify(a, ctx.prime())?;
    if c.kind == ClassKind::Nonsplit {
        c.standard_copy = Some(orbit_refinement(a, ctx)?);
    }
    Ok(c)
}

/// `P` with `P^{-1} A P = target`, the target lying in `subgroup`.
#[derive(Clone, Debug, Serialize)]
pub struct Conjugator {
    #[serde(rename = "P")]
    pub matrix: Mat2<Scalar>,
    pub target: Mat2<Scalar>,
    #[serde(rename = "detClass")]
    pub det_class: SquareClass,
    pub subgroup: SubgroupTag,
}

impl Conjugator {
    /// `P target P^{-1}` agrees with `a` at every certified digit.
    pub fn roundtrip(&self, a: &SL2Mat) -> Result<bool> {
        let back = self.matrix.mul(&self.target).mul(&self.matrix.inverse()?);
        Ok(back.agrees_with(a.matrix()))
    }

    /// Fewest certified p-adic digits among the entries of `P` and the
    /// target; `None` on the exact path.
    pub fn window(&self) -> Option<i64> {
        match (self.matrix.window(), self.target.window()) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.matrix.is_exact() && self.target.is_exact()
    }
}

fn exact(x: Rational) -> Scalar {
    Scalar::Exact(x)
}

/// Exact root when `x` is a rational square, else the canonical Hensel root.
fn sqrt_scalar(x: &Rational, ctx: &PadicCtx) -> Result<Scalar> {
    match rational_sqrt(x) {
        Some(r) => Ok(exact(r)),
        None => Ok(Scalar::Approx(hensel_sqrt(x, ctx)?)),
    }
}

fn identity_conjugator(a: &SL2Mat, p: &Prime, subgroup: SubgroupTag) -> Result<Conjugator> {
    Ok(Conjugator {
        matrix: Mat2::identity(),
        target: a.matrix().to_scalar(),
        det_class: square_class(&Rational::one(), p)?,
        subgroup,
    })
}

/// Diagonalizes a split element: `A = P D P^{-1}` with `det P = 1` and
/// `D = diag(l1, l2)`, `l1,2 = (tr ± sqrt(disc)) / 2`.
pub fn diagonalize(a: &SL2Mat, ctx: &PadicCtx) -> Result<Conjugator> {
    let p = ctx.prime();
    if classify(a, p)?.kind != ClassKind::Split {
        return Err(Error::NotSplit);
    }
    let m = a.matrix();
    if m.is_diagonal() {
        return identity_conjugator(a, p, SubgroupTag::Q1);
    }
    let half = exact(Rational::new(1.into(), 2.into()));
    let t = exact(a.trace());
    let s = sqrt_scalar(&discriminant(a), ctx)?;
    let l1 = t.plus(&s).times(&half);
    let l2 = t.minus(&s).times(&half);
    let ms = m.to_scalar();
    let eigvec = |l: &Scalar| -> (Scalar, Scalar) {
        if !m.a12().is_zero() {
            (ms.a12().clone(), l.minus(ms.a11()))
        } else {
            (l.minus(ms.a22()), ms.a21().clone())
        }
    };
    let (x1, y1) = eigvec(&l1);
    let (x2, y2) = eigvec(&l2);
    let det = Mat2::new(x1.clone(), x2.clone(), y1.clone(), y2.clone()).det();
    let det_inv = det.try_inv()?;
    let matrix = Mat2::new(x1.times(&det_inv), x2, y1.times(&det_inv), y2);
    Ok(Conjugator {
        matrix,
        target: Mat2::diag(l1, l2),
        det_class: square_class(&Rational::one(), p)?,
        subgroup: SubgroupTag::Q1,
    })
}

/// Moves a nonsplit element into the standard Qdelta, delta the canonical
/// representative of the class of the discriminant. Returns `P` in GL2 with
/// `A = P B P^{-1}`, `B = [[alpha, beta], [beta delta, alpha]]`, `alpha = tr/2`
/// and `beta = sqrt(disc / delta) / 2`.
pub fn qdelta_form(a: &SL2Mat, ctx: &PadicCtx) -> Result<Conjugator> {
    let p = ctx.prime();
    let class = classify(a, p)?;
    if class.kind != ClassKind::Nonsplit {
        return Err(Error::NotNonsplit);
    }
    let delta_class = class.delta_class.expect("nonsplit carries its class");
    let tag = SubgroupTag::Qdelta(delta_class.clone());
    if subgroup_membership(a, &tag) {
        return identity_conjugator(a, p, tag);
    }
    let delta = delta_class.representative();
    let half = Rational::new(1.into(), 2.into());
    let alpha = exact(a.trace() * &half);
    let beta = sqrt_scalar(&(discriminant(a) / delta), ctx)?.times(&exact(half));
    let m = a.matrix().to_scalar();
    // eigenvector for alpha + beta sqrt(delta), split into rational and
    // sqrt(delta) parts. A lower triangular element has rational eigenvalues,
    // so the second branch never fires for a nonsplit input.
    let matrix = if !m.a12().vanishes() {
        Mat2::new(
            m.a12().clone(),
            Scalar::zero(),
            alpha.minus(m.a11()),
            beta.clone(),
        )
    } else {
        Mat2::new(
            alpha.minus(m.a22()),
            beta.clone(),
            m.a21().clone(),
            Scalar::zero(),
        )
    };
    let det_class = square_class_scalar(&matrix.det(), p)?;
    let target = Mat2::new(
        alpha.clone(),
        beta.clone(),
        beta.times(&exact(delta.clone())),
        alpha,
    );
    Ok(Conjugator {
        matrix,
        target,
        det_class,
        subgroup: tag,
    })
}

/// Conjugates a unipotent element into U with an exact `P` of determinant 1.
pub fn unipotent_form(a: &SL2Mat, p: &Prime) -> Result<Conjugator> {
    if a.is_central() || !discriminant(a).is_zero() {
        return Err(Error::NotUnipotent);
    }
    let negative = a.trace().is_negative();
    let plus = if negative { a.negate() } else { a.clone() };
    let one_class = square_class(&Rational::one(), p)?;
    if subgroup_membership(&plus, &SubgroupTag::Uplus) {
        return Ok(Conjugator {
            matrix: Mat2::identity(),
            target: a.matrix().to_scalar(),
            det_class: one_class,
            subgroup: SubgroupTag::U,
        });
    }
    let n = plus.matrix().sub(&Mat2::identity());
    // v = e1 unless (A - I) e1 = 0
    let (v, w) = if !n.a11().is_zero() || !n.a21().is_zero() {
        (
            (Rational::one(), <Rational as Zero>::zero()),
            (n.a11().clone(), n.a21().clone()),
        )
    } else {
        (
            (<Rational as Zero>::zero(), Rational::one()),
            (n.a12().clone(), n.a22().clone()),
        )
    };
    let d = &w.0 * &v.1 - &v.0 * &w.1;
    let matrix = Mat2::new(w.0, &v.0 / &d, w.1, &v.1 / &d);
    let u = if negative { -d.recip() } else { d.recip() };
    let target = SL2Mat::unipotent(negative, u);
    Ok(Conjugator {
        matrix: matrix.to_scalar(),
        target: target.matrix().to_scalar(),
        det_class: one_class,
        subgroup: SubgroupTag::U,
    })
}

/// Whether a nonsplit `A` is SL2-conjugate into the standard Qdelta, decided
/// by whether `det P` is a norm from Q_p(sqrt(delta)). Changing `P` by an
/// element of the centralizer multiplies `det P` by a norm, so this does not
/// depend on the conjugator chosen.
pub fn orbit_refinement(a: &SL2Mat, ctx: &PadicCtx) -> Result<bool> {
    let conj = qdelta_form(a, ctx)?;
    let SubgroupTag::Qdelta(delta_class) = &conj.subgroup else {
        unreachable!("qdelta_form targets Qdelta");
    };
    let qctx = QuadCtx::new(delta_class.representative(), ctx)?;
    is_norm(conj.det_class.representative(), &qctx)
}

/// Counts from classifying a sample, with any breach of the partition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub total: usize,
    pub counts: BTreeMap<ClassKind, usize>,
    #[serde(rename = "deltaCounts")]
    pub delta_counts: BTreeMap<String, usize>,
    pub violations: Vec<String>,
}

impl PartitionReport {
    pub fn merge(&mut self, other: PartitionReport) {
        self.total += other.total;
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        for (k, v) in other.delta_counts {
            *self.delta_counts.entry(k).or_default() += v;
        }
        self.violations.extend(other.violations);
    }
}

/// Classifies every element and checks, through independent predicates, that
/// each lands in exactly one class.
pub fn verify_partition(sample: &[SL2Mat], p: &Prime) -> Result<PartitionReport> {
    let mut report = PartitionReport::default();
    let max_delta_classes = if p.is_two() { 7 } else { 3 };
    for a in sample {
        let c = classify(a, p)?;
        report.total += 1;
        *report.counts.entry(c.kind).or_default() += 1;
        let disc = discriminant(a);
        let central = a.is_central();
        let predicates = [
            central,
            !central && disc.is_zero(),
            !disc.is_zero() && is_square(&disc, p)?,
            !disc.is_zero() && !is_square(&disc, p)?,
        ];
        if predicates.iter().filter(|&&b| b).count() != 1 {
            report
                .violations
                .push(format!("not exactly one class: {a}"));
        }
        if let Some(dc) = &c.delta_class {
            if dc.is_identity() {
                report.violations.push(format!("identity delta class: {a}"));
            }
            *report
                .delta_counts
                .entry(dc.tag().as_str().to_string())
                .or_default() += 1;
        }
    }
    if report.delta_counts.len() > max_delta_classes {
        report.violations.push(format!(
            "{} distinct delta classes",
            report.delta_counts.len()
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{parse_rational, SquareClassTag};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn ctx(n: u64, prec: u32) -> PadicCtx {
        PadicCtx::new(p(n), prec).unwrap()
    }

    fn sl(a: i64, b: i64, c: i64, d: i64) -> SL2Mat {
        SL2Mat::from_ints(a, b, c, d).unwrap()
    }

    fn slq(a: &str, b: &str, c: &str, d: &str) -> SL2Mat {
        SL2Mat::new(Mat2::new(q(a), q(b), q(c), q(d))).unwrap()
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&SL2Mat::omega()), q("-4"));
        let a = q("7/3");
        let t = SL2Mat::torus(a.clone()).unwrap();
        let diff = &a - a.recip();
        assert_eq!(discriminant(&t), &diff * &diff);
        assert_eq!(discriminant(&sl(1, 1, 0, 1)), q("0"));
    }

    #[test]
    fn classify_examples() {
        let w = SL2Mat::omega();
        assert_eq!(classify(&w, &p(5)).unwrap().kind, ClassKind::Split);
        let c = classify(&w, &p(7)).unwrap();
        assert_eq!(c.kind, ClassKind::Nonsplit);
        assert_eq!(c.delta_class.unwrap().tag(), SquareClassTag::U);
        assert_eq!(
            classify(&sl(-1, 3, 0, -1), &p(5)).unwrap().kind,
            ClassKind::UnipotentMinus
        );
        assert_eq!(
            classify(&SL2Mat::identity(), &p(5)).unwrap().kind,
            ClassKind::CentralPlus
        );
    }

    #[test]
    fn diagonal_input_needs_no_conjugator() {
        let a = SL2Mat::torus(q("3")).unwrap();
        let c = diagonalize(&a, &ctx(5, 16)).unwrap();
        assert_eq!(c.matrix, Mat2::identity());
        assert_eq!(c.target, a.matrix().to_scalar());
    }

    #[test]
    fn diagonalize_omega_mod_25() {
        let a = SL2Mat::omega();
        let c = diagonalize(&a, &ctx(5, 4)).unwrap();
        assert!(!c.is_exact());
        assert!(c.roundtrip(&a).unwrap());
        let l1 = c.target.a11();
        let seven_mod_25 = [q("7"), q("-7")];
        assert!(seven_mod_25.iter().any(|r| {
            l1.minus(&Scalar::Exact(r.clone()))
                .valuation(&p(5))
                .finite()
                .is_none_or(|v| v >= 2)
        }));
        assert!(c.matrix.det().minus(&Scalar::one()).vanishes());
    }

    #[test]
    fn diagonalize_rational_path() {
        let a = slq("0", "-1", "1", "5/2");
        let c = diagonalize(&a, &ctx(5, 16)).unwrap();
        assert!(c.is_exact());
        assert_eq!(c.target, Mat2::diag(q("2"), q("1/2")).to_scalar());
        assert_eq!(c.matrix.det(), Scalar::one());
        assert!(c.roundtrip(&a).unwrap());
    }

    #[test]
    fn diagonalize_rejects_other_classes() {
        assert_eq!(
            diagonalize(&SL2Mat::omega(), &ctx(7, 16)).err(),
            Some(Error::NotSplit)
        );
        assert_eq!(
            diagonalize(&SL2Mat::identity(), &ctx(7, 16)).err(),
            Some(Error::NotSplit)
        );
    }

    #[test]
    fn qdelta_standard_input() {
        let a = sl(3, 2, 4, 3);
        let c = qdelta_form(&a, &ctx(5, 16)).unwrap();
        assert_eq!(c.matrix, Mat2::identity());
        assert!(c.det_class.is_identity());
    }

    #[test]
    fn qdelta_omega_at_7() {
        let a = SL2Mat::omega();
        let c = qdelta_form(&a, &ctx(7, 32)).unwrap();
        assert!(c.roundtrip(&a).unwrap());
        let t = &c.target;
        assert!(t.a11().vanishes());
        // (2 beta)^2 delta = -4
        let two_beta = t.a12().times(&Scalar::Exact(q("2")));
        assert!(two_beta
            .times(&two_beta)
            .times(&Scalar::Exact(q("3")))
            .agrees_with(&q("-4")));
        assert!(t.det().agrees_with(&q("1")));
    }

    #[test]
    fn qdelta_trace_one_at_5() {
        let a = sl(0, -1, 1, 1);
        assert_eq!(
            square_class(&q("-3"), &p(5)).unwrap().tag(),
            SquareClassTag::U
        );
        let c = qdelta_form(&a, &ctx(5, 32)).unwrap();
        assert!(c.roundtrip(&a).unwrap());
        assert_eq!(c.subgroup.to_string(), "Qdelta(2)");
        assert!(c.target.trace().agrees_with(&q("1")));
    }

    #[test]
    fn unipotent_examples() {
        let a = sl(1, 1, 0, 1);
        let c = unipotent_form(&a, &p(5)).unwrap();
        assert_eq!(c.matrix, Mat2::identity());

        let a = sl(2, -1, 1, 0);
        let c = unipotent_form(&a, &p(5)).unwrap();
        assert!(c.is_exact());
        assert_eq!(c.matrix.det(), Scalar::one());
        let t = c.target.as_exact().unwrap();
        assert!(subgroup_membership(
            &SL2Mat::new(t.clone()).unwrap(),
            &SubgroupTag::Uplus
        ));
        assert!(!t.a12().is_zero());
        assert!(c.roundtrip(&a).unwrap());

        let a = sl(-1, 0, 3, -1);
        let c = unipotent_form(&a, &p(5)).unwrap();
        let t = c.target.as_exact().unwrap();
        assert_eq!(t.a11(), &q("-1"));
        assert_eq!(t.a21(), &q("0"));
        assert!(c.roundtrip(&a).unwrap());
        assert_eq!(
            unipotent_form(&SL2Mat::omega(), &p(5)).err(),
            Some(Error::NotUnipotent)
        );
    }

    #[test]
    fn refinement_examples() {
        let c5 = ctx(5, 32);
        let a = sl(3, 2, 4, 3);
        assert!(orbit_refinement(&a, &c5).unwrap());
        // a GL2 conjugate by det 1/2; -1 = 1 - 2 is a norm, so this reduces to
        // whether 2 is a norm from the unramified Q_5(sqrt 2), which it is
        let g = Mat2::diag(q("1"), q("1/2"));
        let b = SL2Mat::new(a.matrix().conjugate_by(&g).unwrap()).unwrap();
        let conj = qdelta_form(&b, &c5).unwrap();
        let qctx = QuadCtx::new(&q("2"), &c5).unwrap();
        assert_eq!(
            orbit_refinement(&b, &c5).unwrap(),
            is_norm(conj.det_class.representative(), &qctx).unwrap()
        );
        assert!(is_norm(&q("2"), &qctx).unwrap());
        assert!(orbit_refinement(&b, &c5).unwrap());

        // the ramified Q_5(sqrt 5): 9^2 - 5 * 4^2 = 1, and the same conjugation
        // produces det P = 8, not a norm
        let a = sl(9, 4, 20, 9);
        assert!(orbit_refinement(&a, &c5).unwrap());
        let b = SL2Mat::new(a.matrix().conjugate_by(&g).unwrap()).unwrap();
        assert_eq!(b, sl(9, 2, 40, 9));
        assert!(!orbit_refinement(&b, &c5).unwrap());
        let r = classify_refined(&b, &c5).unwrap();
        assert_eq!(r.standard_copy, Some(false));
    }

    #[test]
    fn partition_examples() {
        let r = verify_partition(&[SL2Mat::identity(), SL2Mat::minus_identity()], &p(5)).unwrap();
        assert_eq!(r.counts[&ClassKind::CentralPlus], 1);
        assert_eq!(r.counts[&ClassKind::CentralMinus], 1);
        let sample = [
            SL2Mat::omega(),
            sl(1, 1, 0, 1),
            SL2Mat::torus(q("3")).unwrap(),
        ];
        let r = verify_partition(&sample, &p(5)).unwrap();
        assert_eq!(r.counts[&ClassKind::Split], 2);
        assert_eq!(r.counts[&ClassKind::UnipotentPlus], 1);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn json_shape() {
        let c = classify(&SL2Mat::omega(), &p(5)).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"kind":"Split"}"#);
        let c = classify(&SL2Mat::omega(), &p(7)).unwrap();
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"kind":"Nonsplit","deltaClass":"U"}"#
        );
    }
}
