//! Property-based invariants over randomly generated elements and parameters.

use proptest::prelude::*;

use iwahori::affine_weyl::{bruhat_leq, simple_reflections, ExtendedAffineElement};
use iwahori::loop_group::{su3_unipotent, ExtKind, LaurentPoly, SeriesCtx};
use iwahori::root_system::RationalVector;
use iwahori::standard_datum;

fn gl3_element() -> impl Strategy<Value = ExtendedAffineElement> {
    (prop::collection::vec(-2i64..=2, 3), prop::collection::vec(0usize..3, 0..4)).prop_map(
        |(lambda, word)| {
            let d = standard_datum("gl3").unwrap();
            let gens = simple_reflections(&d).unwrap();
            let mut w = ExtendedAffineElement::translation_element(d, &lambda);
            for i in word {
                w = &w * &gens[i];
            }
            w
        },
    )
}

proptest! {
    /// Group axioms: associativity, inverses, and ℓ(w) = ℓ(w⁻¹).
    #[test]
    fn group_axioms(a in gl3_element(), b in gl3_element(), c in gl3_element()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        let id = ExtendedAffineElement::identity(a.datum().clone());
        prop_assert_eq!(&a * &a.inverse(), id.clone());
        prop_assert_eq!((&a * &b).inverse(), &b.inverse() * &a.inverse());
        prop_assert_eq!(a.length(), a.inverse().length());
    }

    /// The translation-length formula holds beyond the acceptance box.
    #[test]
    fn translation_length_formula(lambda in prop::collection::vec(-5i64..=5, 3)) {
        let d = standard_datum("gl3").unwrap();
        let t = ExtendedAffineElement::translation_element(d.clone(), &lambda);
        prop_assert_eq!(t.length(), d.length_translation(&lambda));
    }

    /// Bruhat order is antisymmetric and respects length.
    #[test]
    fn bruhat_antisymmetry(a in gl3_element(), b in gl3_element()) {
        if bruhat_leq(&a, &b) {
            prop_assert!(a.length() <= b.length());
            if bruhat_leq(&b, &a) {
                prop_assert_eq!(a, b);
            }
        }
    }

    /// Dominant representatives are orbit constants and the integral
    /// dominance order refines the rational one.
    #[test]
    fn dominance_refinement(a in prop::collection::vec(-3i64..=3, 3), b in prop::collection::vec(-3i64..=3, 3)) {
        let d = standard_datum("gl3").unwrap();
        let (da, _) = d.dominant_rep(&a);
        let (db, _) = d.dominant_rep(&b);
        if d.integral_dominance_leq(&da, &db).unwrap() {
            prop_assert!(d
                .dominance_leq(&RationalVector::from_ints(&da), &RationalVector::from_ints(&db))
                .unwrap());
        }
    }

    /// Valid SU₃ unipotents preserve the hermitian form and have det 1; the
    /// parameters are generated directly on the constraint surface.
    #[test]
    fn su3_unipotents_in_group(
        coeffs in prop::collection::vec(0i64..5, 5),
        zs in prop::collection::vec(0i64..5, 2),
        sign in prop::bool::ANY,
    ) {
        let ctx = SeriesCtx::new(5, ExtKind::Ramified).unwrap();
        let f = ctx.field();
        let mut c = LaurentPoly::zero();
        for (k, &a) in coeffs.iter().enumerate() {
            c = c.add(&LaurentPoly::monomial(f.from_int(a), k as i64 - 2));
        }
        let half = f.from_int(2).inverse().unwrap();
        let mut d = ctx.conj(&c).mul(&c).scale(half).neg();
        for (k, &z) in zs.iter().enumerate() {
            // Odd exponents are trace-zero in the ramified model.
            d = d.add(&LaurentPoly::monomial(f.from_int(z), 2 * k as i64 - 1));
        }
        let i = if sign { 1 } else { -1 };
        let m = su3_unipotent(&ctx, i, &c, &d).unwrap();
        prop_assert!(m.preserves_hermitian_form(&ctx));
        prop_assert!(m.det_is_one(f));
    }

    /// Laurent arithmetic: distributivity and valuation additivity (the
    /// coefficient ring is a field, so there are no zero divisors).
    #[test]
    fn laurent_ring_axioms(
        xs in prop::collection::vec((-4i64..=4, 0i64..5), 1..4),
        ys in prop::collection::vec((-4i64..=4, 0i64..5), 1..4),
        zs in prop::collection::vec((-4i64..=4, 0i64..5), 1..4),
    ) {
        let f = iwahori::loop_group::QuadField::new(5).unwrap();
        let build = |ts: &[(i64, i64)]| {
            ts.iter().fold(LaurentPoly::zero(), |acc, &(e, c)| {
                acc.add(&LaurentPoly::monomial(f.from_int(c), e))
            })
        };
        let (a, b, c) = (build(&xs), build(&ys), build(&zs));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        if let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) {
            prop_assert_eq!(a.mul(&b).valuation(), Some(va + vb));
        }
    }
}
