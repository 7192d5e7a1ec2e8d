use mubforge::ff::{make_field, VecSpace};
use mubforge::pauli::*;
use mubforge::semifield::{catalog, Family, Params};
use mubforge::spread::{bblp_spread, spread_from_presemifield, suzuki_spread};
use mubforge::Error;

fn ctx(p: u32, r: usize) -> PauliContext {
    PauliContext::new(VecSpace::new(make_field(p, r, None).unwrap(), 1).unwrap())
}

#[test]
fn dense_oracles_up_to_nine() {
    for (p, r) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
        let c = ctx(p, r);
        for rep in [cross_validate(&c).unwrap(), check_commutators(&c), check_basis(&c).unwrap(), check_t_action(&c).unwrap()] {
            assert!(rep.passed, "q = {}: {rep:?}", c.n());
            assert_eq!(rep.failures, 0);
        }
        if p != 2 {
            let k = check_k_conjugation(&c).unwrap();
            assert!(k.passed && k.cases == u64::from(c.n()).pow(4), "{k:?}");
        }
    }
}

#[test]
fn dense_oracle_refuses_large_n() {
    assert!(matches!(cross_validate(&ctx(2, 4)), Err(Error::Parameter(_))));
    assert!(matches!(check_k_conjugation(&ctx(2, 2)), Err(Error::OddCharacteristicRequired)));
}

#[test]
fn symbolic_commutators_beyond_the_dense_range() {
    let c = PauliContext::new(VecSpace::new(make_field(2, 3, None).unwrap(), 2).unwrap());
    let rep = check_commutators(&c);
    assert!(rep.passed);
    assert_eq!(rep.cases, 4096 * 4096);
}

#[test]
fn desarguesian_decompositions() {
    for (p, r, blocks) in [(2, 1, 3), (3, 1, 4), (2, 2, 5), (5, 1, 6), (3, 2, 10)] {
        let f = make_field(p, r, None).unwrap();
        let sp = spread_from_presemifield(&catalog(&f, Family::Field, &Params::default()).unwrap());
        let rep = verify_decomposition(&sp);
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.blocks, blocks);
        assert_eq!(rep.dimension_sum, u64::from(rep.n).pow(2) - 1);
        if rep.n <= 9 {
            assert_eq!(rep.killing_dense, Some(true));
        }
    }
}

#[test]
fn suzuki_and_bblp_decompositions() {
    let sz = verify_decomposition(&suzuki_spread(&make_field(2, 3, None).unwrap()).unwrap());
    assert!(sz.passed && sz.blocks == 65 && sz.dimension_sum == 64 * 64 - 1, "{sz:?}");
    assert!(sz.partition && sz.abelian && sz.killing_symbolic);
    let bb = verify_decomposition(&bblp_spread(&make_field(3, 3, None).unwrap(), 1).unwrap());
    assert!(bb.passed && bb.blocks == 28);
}

#[test]
fn commutative_spread_has_non_abelian_blocks() {
    let f = make_field(3, 3, None).unwrap();
    let sp = spread_from_presemifield(&catalog(&f, Family::Albert, &Params::default()).unwrap());
    let rep = verify_decomposition(&sp);
    assert!(!rep.passed && !rep.abelian);
    assert!(rep.witness.is_some());
}
