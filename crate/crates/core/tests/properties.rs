use num_bigint::BigInt;
use proptest::prelude::*;
use sl2qp::cartan::{classify, orbit_refinement};
use sl2qp::generosity::{cover_witness, escape_witness_general};
use sl2qp::padic::{is_square, square_class, vp, PadicCtx, Prime, Rational};
use sl2qp::quadext::{quad_mul, quad_norm, QuadCtx, QuadElem};
use sl2qp::sl2core::{Mat2, SL2Mat};

const PRIMES: [u64; 5] = [2, 3, 5, 7, 13];

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|p| Prime::new(p).unwrap())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=40).prop_map(|(a, b)| Rational::new(BigInt::from(a), BigInt::from(b)))
}

fn nonzero() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |x| *x != Rational::from_integer(0.into()))
}

/// Products of upper and lower elementary matrices.
fn sl2() -> impl Strategy<Value = SL2Mat> {
    prop::collection::vec((any::<bool>(), rational()), 1..6).prop_map(|factors| {
        factors
            .into_iter()
            .fold(SL2Mat::identity(), |acc, (upper, r)| {
                let one = Rational::from_integer(1.into());
                let zero = Rational::from_integer(0.into());
                let e = if upper {
                    Mat2::new(one.clone(), r, zero, one)
                } else {
                    Mat2::new(one.clone(), zero, r, one)
                };
                acc.group_op(&SL2Mat::new(e).unwrap()).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn products_and_inverses_stay_in_sl2(a in sl2(), b in sl2()) {
        let ab = a.group_op(&b).unwrap();
        prop_assert_eq!(ab.matrix().det(), Rational::from_integer(1.into()));
        prop_assert!(a.group_op(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn conjugation_composes(a in sl2(), g in sl2(), h in sl2()) {
        let gh = g.group_op(&h).unwrap();
        let twice = a.conjugate(g.matrix()).unwrap().conjugate(h.matrix()).unwrap();
        prop_assert_eq!(twice, a.conjugate(gh.matrix()).unwrap());
    }

    #[test]
    fn class_is_conjugation_invariant(a in sl2(), g in sl2(), p in prime()) {
        let b = a.conjugate(g.matrix()).unwrap();
        prop_assert_eq!(classify(&a, &p).unwrap(), classify(&b, &p).unwrap());
    }

    #[test]
    fn nonsplit_refinement_is_sl2_invariant(a in sl2(), g in sl2(), p in prime()) {
        let ctx = PadicCtx::with_default_precision(p.clone());
        if classify(&a, &p).unwrap().delta_class.is_some() {
            let b = a.conjugate(g.matrix()).unwrap();
            prop_assert_eq!(orbit_refinement(&a, &ctx).unwrap(), orbit_refinement(&b, &ctx).unwrap());
        }
    }

    #[test]
    fn square_classes_ignore_squares(x in nonzero(), y in nonzero(), p in prime()) {
        let xy2 = &x * &y * &y;
        prop_assert_eq!(square_class(&x, &p).unwrap(), square_class(&xy2, &p).unwrap());
        prop_assert!(is_square(&(&y * &y), &p).unwrap());
    }

    #[test]
    fn quadratic_norm_is_multiplicative(
        u in (rational(), rational()), w in (rational(), rational()), p in prime(),
    ) {
        let ctx = PadicCtx::with_default_precision(p.clone());
        let delta = Rational::from_integer(p.as_bigint().clone());
        let q = QuadCtx::new(&delta, &ctx).unwrap();
        let u = QuadElem::new(u.0, u.1, &q);
        let w = QuadElem::new(w.0, w.1, &q);
        let lhs = quad_norm(&quad_mul(&u, &w).unwrap());
        let rhs = sl2qp::padic::Field::times(&quad_norm(&u), &quad_norm(&w));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn every_matrix_is_covered(m in sl2(), p in prime()) {
        let w = cover_witness(&m, &p).unwrap();
        prop_assert!(vp(&w.checked_trace, &p).is_negative());
    }

    #[test]
    fn general_witness_escapes(family in prop::collection::vec(sl2(), 1..6), p in prime()) {
        let w = escape_witness_general(&family, &p).unwrap();
        prop_assert!(w.escapes(&p));
        prop_assert_eq!(w.per_translate_traces.len(), family.len());
    }
}
