use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::matrix::{Mat2, SL2Mat};
use crate::cartan::{self, ClassKind, Conjugator};
use crate::error::{Error, Result};
use crate::padic::{format_rational, square_class, Field, PadicCtx, Prime, Rational, SquareClass};

/// The standard copies of the subgroups the classification is built on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupTag {
    /// The diagonal torus.
    Q1,
    /// `{[[a, b], [b delta, a]] : a^2 - delta b^2 = 1}`, delta the canonical
    /// representative of a nonidentity square class.
    Qdelta(SquareClass),
    /// `±` upper unitriangular matrices.
    U,
    /// Upper unitriangular matrices.
    Uplus,
    /// Upper triangular matrices.
    B,
}

impl SubgroupTag {
    pub fn qdelta(class: SquareClass) -> Result<Self> {
        if class.is_identity() {
            return Err(Error::SquareDelta);
        }
        Ok(SubgroupTag::Qdelta(class))
    }

    pub fn name(&self) -> &'static str {
        match self {
            SubgroupTag::Q1 => "Q1",
            SubgroupTag::Qdelta(_) => "Qdelta",
            SubgroupTag::U => "U",
            SubgroupTag::Uplus => "Uplus",
            SubgroupTag::B => "B",
        }
    }
}

impl fmt::Display for SubgroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupTag::Qdelta(c) => write!(f, "Qdelta({})", format_rational(c.representative())),
            other => f.write_str(other.name()),
        }
    }
}

impl Serialize for SubgroupTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn is_zero(x: &Rational) -> bool {
    x.is_zero()
}

fn is_one(x: &Rational) -> bool {
    *x == Rational::one()
}

fn is_minus_one(x: &Rational) -> bool {
    *x == -Rational::one()
}

/// Structural membership in the standard copy named by `tag`.
pub fn subgroup_membership(a: &SL2Mat, tag: &SubgroupTag) -> bool {
    let m = a.matrix();
    match tag {
        SubgroupTag::Q1 => m.is_diagonal(),
        SubgroupTag::Qdelta(class) => {
            let delta = class.representative();
            m.a11() == m.a22()
                && *m.a21() == m.a12() * delta
                && is_one(&(m.a11() * m.a11() - delta * m.a12() * m.a12()))
        }
        SubgroupTag::Uplus => is_zero(m.a21()) && is_one(m.a11()) && is_one(m.a22()),
        SubgroupTag::U => {
            is_zero(m.a21())
                && ((is_one(m.a11()) && is_one(m.a22()))
                    || (is_minus_one(m.a11()) && is_minus_one(m.a22())))
        }
        SubgroupTag::B => m.is_upper_triangular(),
    }
}

/// Writes an upper triangular `g` as `t u` with `t` diagonal and `u` upper
/// unitriangular.
pub fn borel_factor(g: &SL2Mat) -> Result<(SL2Mat, SL2Mat)> {
    let m = g.matrix();
    if !m.is_upper_triangular() {
        return Err(Error::UnsupportedTag);
    }
    let t = SL2Mat::torus(m.a11().clone())?;
    let u = SL2Mat::unipotent(false, m.a12() / m.a11());
    Ok((t, u))
}

/// A basis of the matrices commuting with a given one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutantBasis {
    pub dim: usize,
    #[serde(rename = "basisElems")]
    pub basis: Vec<Mat2>,
}

/// Nullspace of a 4x4 rational system by reduced row echelon form.
fn nullspace(mut rows: Vec<[Rational; 4]>) -> Vec<[Rational; 4]> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..4 {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, k);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let f = rows[k][c].clone();
                for j in 0..4 {
                    let d = &f * &rows[r][j];
                    rows[k][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..4)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v: [Rational; 4] = Default::default();
            v[free] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][free].clone();
            }
            v
        })
        .collect()
}

fn unit_matrix(k: usize) -> Mat2 {
    let mut e: [Rational; 4] = Default::default();
    e[k] = Rational::one();
    let [a, b, c, d] = e;
    Mat2::new(a, b, c, d)
}

/// Solves `gA = Ag` for `g` in M_2 exactly. The space has dimension 4 for
/// `±I` and 2 otherwise, in which case it is spanned by `I` and `A`.
pub fn commutant_basis(a: &SL2Mat) -> CommutantBasis {
    let m = a.matrix();
    // column k holds the coordinates of E_k A - A E_k
    let cols: Vec<Mat2> = (0..4)
        .map(|k| {
            let e = unit_matrix(k);
            e.mul(m).sub(&m.mul(&e))
        })
        .collect();
    let rows = (0..4)
        .map(|i| {
            let mut row: [Rational; 4] = Default::default();
            for (k, col) in cols.iter().enumerate() {
                row[k] = col.get(i / 2, i % 2).clone();
            }
            row
        })
        .collect();
    let null = nullspace(rows);
    if null.len() == 4 {
        return CommutantBasis {
            dim: 4,
            basis: (0..4).map(unit_matrix).collect(),
        };
    }
    debug_assert_eq!(null.len(), 2);
    CommutantBasis {
        dim: null.len(),
        basis: vec![Mat2::identity(), m.clone()],
    }
}

/// The SL2-centralizer of an element, named by the standard copy it is
/// conjugate to.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "centralizer")]
pub enum Centralizer {
    Central,
    Standard {
        tag: SubgroupTag,
    },
    /// `P^{-1} A P` lies in the standard copy.
    Conjugate {
        tag: SubgroupTag,
        conjugator: Box<Conjugator>,
    },
}

impl Centralizer {
    pub fn tag(&self) -> Option<&SubgroupTag> {
        match self {
            Centralizer::Central => None,
            Centralizer::Standard { tag } | Centralizer::Conjugate { tag, .. } => Some(tag),
        }
    }
}

/// Identifies the centralizer of `a` from the binary form `det(xI + yA)`,
/// whose discriminant is `tr(A)^2 - 4`: zero gives U, a square gives Q1 and
/// a nonsquare in the class of delta gives Qdelta.
pub fn centralizer_tag(a: &SL2Mat, p: &Prime) -> Result<Centralizer> {
    let basis = commutant_basis(a);
    if basis.dim == 4 {
        return Ok(Centralizer::Central);
    }
    let disc = cartan::discriminant(a);
    let ctx = PadicCtx::with_default_precision(p.clone());
    let (tag, in_standard) = if disc.is_zero() {
        (SubgroupTag::U, subgroup_membership(a, &SubgroupTag::U))
    } else {
        let class = square_class(&disc, p)?;
        let tag = if class.is_identity() {
            SubgroupTag::Q1
        } else {
            SubgroupTag::Qdelta(class)
        };
        let inside = subgroup_membership(a, &tag);
        (tag, inside)
    };
    if in_standard {
        return Ok(Centralizer::Standard { tag });
    }
    let conjugator = match cartan::classify(a, p)?.kind {
        ClassKind::Split => cartan::diagonalize(a, &ctx)?,
        ClassKind::Nonsplit => cartan::qdelta_form(a, &ctx)?,
        _ => cartan::unipotent_form(a, p)?,
    };
    Ok(Centralizer::Conjugate {
        tag,
        conjugator: Box::new(conjugator),
    })
}

/// Whether `g` normalizes the standard copy named by `tag`.
///
/// Q1: `g` diagonal or antidiagonal. U, Uplus: `g` upper triangular. Qdelta:
/// `g^{-1} J g = ±J` for `J = [[0, 1], [delta, 0]]`, which is the condition
/// for `g` to normalize the algebra `Q_p[J]` and hence its norm-one group.
pub fn normalizer_checks(g: &SL2Mat, tag: &SubgroupTag) -> Result<bool> {
    let m = g.matrix();
    match tag {
        SubgroupTag::Q1 => Ok(m.is_diagonal() || m.is_antidiagonal()),
        SubgroupTag::U | SubgroupTag::Uplus => Ok(m.is_upper_triangular()),
        SubgroupTag::Qdelta(class) => {
            let j = Mat2::new(
                <Rational as Zero>::zero(),
                Rational::one(),
                class.representative().clone(),
                <Rational as Zero>::zero(),
            );
            let jg = j.conjugate_by(m)?;
            Ok(jg == j || jg == j.negate())
        }
        SubgroupTag::B => Err(Error::UnsupportedTag),
    }
}
