use mubforge::ff::{make_field, Field, FieldElem};
use mubforge::gr4::{make_ring, Ring, RingElem};
use mubforge::semifield::*;

fn rings() -> Vec<(Field, Ring)> {
    (1..=4)
        .map(|r| {
            let f = make_field(2, r, None).unwrap();
            let ring = make_ring(&f).unwrap();
            (f, ring)
        })
        .collect()
}

#[test]
fn teichmuller_sum_law() {
    for (f, ring) in rings() {
        for u in f.elements() {
            for v in f.elements() {
                let (uh, vh) = (ring.teichmuller_lift(u), ring.teichmuller_lift(v));
                let root = ring.teich_sqrt(ring.mul(uh, vh)).unwrap();
                let rhs = ring.add(ring.add(uh, vh), ring.double(root));
                assert_eq!(ring.teichmuller_lift(f.add(u, v)), rhs, "r = {} u = {} v = {}", f.r(), u.index(), v.index());
            }
        }
    }
}

#[test]
fn lifts_are_multiplicative_and_square_roots_square() {
    for (f, ring) in rings() {
        for u in f.elements() {
            let uh = ring.teichmuller_lift(u);
            let root = ring.teich_sqrt(uh).unwrap();
            assert_eq!(ring.mul(root, root), uh);
            for v in f.elements() {
                assert_eq!(ring.teichmuller_lift(f.mul(u, v)), ring.mul(uh, ring.teichmuller_lift(v)));
            }
        }
    }
}

#[test]
fn trace_formula_matches_frobenius_sum_on_every_element() {
    for (f, ring) in rings() {
        for x in ring.elements() {
            // Σ φ^i(x), with φ the generalised Frobenius.
            let mut acc = RingElem::ZERO;
            let mut y = x;
            for _ in 0..f.r() {
                acc = ring.add(acc, y);
                y = ring.frobenius(y);
            }
            assert_eq!(y, x, "φ^r is the identity");
            let t = ring.trace(x);
            assert_eq!(acc, ring.from_int(i64::from(t)));
            assert_eq!(t, ring.trace_by_formula(x));
        }
        for u in f.elements() {
            let uh = ring.teichmuller_lift(u);
            assert_eq!(ring.trace(ring.double(uh)), 2 * f.trace(u) % 4);
            assert_eq!(ring.lift_trace(u), ring.trace(uh));
        }
    }
}

fn even_products() -> Vec<Presemifield> {
    let mut out = Vec::new();
    for r in 1..=4 {
        out.push(catalog(&make_field(2, r, None).unwrap(), Family::Field, &Params::default()).unwrap());
    }
    let f8 = make_field(2, 3, None).unwrap();
    let one = f8.one();
    let pf8 = PlanarFn::from_monomials(&f8, vec![Monomial { coeff: one, i: 0, j: 1 }, Monomial { coeff: one, i: 1, j: 2 }], PlanarKind::PseudoPlanar, "f");
    out.push(comm_from_pseudoplanar(&pf8).unwrap().product);
    let f16 = make_field(2, 4, None).unwrap();
    let pf16 = PlanarFn::from_monomials(&f16, vec![Monomial { coeff: f16.gen(), i: 0, j: 2 }], PlanarKind::PseudoPlanar, "g");
    if pseudo_planar_test(&pf16).passed {
        out.push(comm_from_pseudoplanar(&pf16).unwrap().product);
    }
    out
}

#[test]
fn lifted_product_reduces_to_the_product() {
    for s in even_products() {
        let f = s.field().clone();
        let ring = make_ring(&f).unwrap();
        for x in f.elements() {
            for y in f.elements() {
                assert_eq!(ring.reduce(ring.lifted_product(x, y, &s).unwrap()), s.mul_elem(x, y));
            }
        }
    }
}

#[test]
fn symplectic_duals_satisfy_the_trace_symmetry_and_coefficient_identity() {
    for c in even_products() {
        let s = knuth_dual_even(&c).unwrap();
        let f = s.field().clone();
        let r = f.r() as u32;
        let ring = make_ring(&f).unwrap();
        let coeff = |i: u32, j: u32| s.terms().unwrap().iter().find(|t| t.i == i % r && t.j == j % r).map_or(FieldElem::ZERO, |t| t.coeff);
        for i in 0..r {
            for j in 0..r {
                assert_eq!(coeff(i, j), f.frobenius_pow(coeff(r - i, j + r - i), i64::from(i)), "{} a_{i}{j}", s.label());
            }
        }
        for x in f.elements() {
            for y in f.elements() {
                for z in f.elements() {
                    let lhs = ring.mul(ring.teichmuller_lift(x), ring.lifted_product(z, y, &s).unwrap());
                    let rhs = ring.mul(ring.teichmuller_lift(z), ring.lifted_product(x, y, &s).unwrap());
                    assert_eq!(ring.trace(lhs), ring.trace(rhs));
                }
            }
        }
    }
}
