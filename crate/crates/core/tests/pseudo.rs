use mubforge::ff::{make_field, FieldElem};
use mubforge::semifield::*;
use proptest::prelude::*;

/// Up to three monomials `c·x^(2^i + 2^j)` with `i < j` over `GF(2^r)`.
fn monomials() -> impl Strategy<Value = (usize, Vec<(u32, u32, u32)>)> {
    (2usize..=4).prop_flat_map(|r| {
        let q = 1u32 << r;
        let term = (0..q, 0..r as u32, 0..r as u32).prop_filter("i < j", |(_, i, j)| i < j);
        (Just(r), prop::collection::vec(term, 0..=3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `f ↦ ∗ ↦ (⋆, f)` returns `∗` as `⋆` and the same function values.
    #[test]
    fn round_trip_through_the_commutative_product((r, terms) in monomials()) {
        let field = make_field(2, r, None).unwrap();
        let ms: Vec<Monomial> = terms.iter().map(|&(c, i, j)| Monomial { coeff: FieldElem::from_index(c), i, j }).collect();
        let f = PlanarFn::from_monomials(&field, ms, PlanarKind::PseudoPlanar, "f");
        prop_assume!(pseudo_planar_test(&f).passed);
        let comm = comm_from_pseudoplanar(&f).unwrap();
        prop_assert!(comm.axioms.passed && comm.verdicts_agree());
        let back = pseudoplanar_from_presemifield(&comm.product).unwrap();
        prop_assert!(back.pseudo_planar.passed);
        for x in field.elements() {
            prop_assert_eq!(back.f.eval(x), f.eval(x));
            for y in field.elements() {
                prop_assert_eq!(back.star.mul_elem(x, y), comm.product.mul_elem(x, y));
            }
        }
    }
}

#[test]
fn every_gf16_multiple_of_x5_round_trips() {
    let field = make_field(2, 4, None).unwrap();
    let mut hits = 0;
    for c in field.nonzero() {
        let f = PlanarFn::from_monomials(&field, vec![Monomial { coeff: c, i: 0, j: 2 }], PlanarKind::PseudoPlanar, "c x^5");
        if !pseudo_planar_test(&f).passed {
            continue;
        }
        hits += 1;
        let back = pseudoplanar_from_presemifield(&comm_from_pseudoplanar(&f).unwrap().product).unwrap();
        assert!(field.elements().all(|x| back.f.eval(x) == f.eval(x)));
    }
    assert_eq!(hits, 5);
}
