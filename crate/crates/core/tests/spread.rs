use std::collections::{BTreeSet, HashSet};

use mubforge::ff::{make_field, Field};
use mubforge::mub::{build_odd_symplectic, symplectic_failure};
use mubforge::semifield::*;
use mubforge::spread::*;
use mubforge::Error;

fn field(p: u32, r: usize) -> Field {
    make_field(p, r, None).unwrap()
}

fn cat(f: &Field, fam: Family) -> Presemifield {
    catalog(f, fam, &Params::default()).unwrap()
}

/// Counts matrices acting on the points of `W` that scale the form by ±1 and
/// map the point set of every member onto the point set of a member.
fn stabilizer_by_point_sets(sp: &Spread) -> u64 {
    let space = sp.space();
    let p = space.p();
    let d = space.dim();
    let point_sets: HashSet<BTreeSet<u64>> = sp
        .members()
        .iter()
        .map(|m| {
            let mut pts = BTreeSet::new();
            m.for_each_nonzero(space, |z| {
                pts.insert(z);
            });
            pts
        })
        .collect();
    let apply = |mat: &[u32], z: u64| -> u64 {
        let x = space.digits(z);
        let y: Vec<u8> = (0..d).map(|i| ((0..d).map(|j| mat[i * d + j] * u32::from(x[j])).sum::<u32>() % p) as u8).collect();
        space.from_digits(&y)
    };
    let total = u64::from(p).pow((d * d) as u32);
    let mut count = 0;
    for code in 0..total {
        let mat: Vec<u32> = (0..d * d).map(|k| (code / u64::from(p).pow(k as u32) % u64::from(p)) as u32).collect();
        let images: Vec<u64> = (0..space.size()).map(|z| apply(&mat, z)).collect();
        if images.iter().collect::<HashSet<_>>().len() as u64 != space.size() {
            continue;
        }
        let scales = [1, p - 1].iter().any(|&eps| {
            (0..space.size()).all(|a| (0..space.size()).all(|b| space.form(images[a as usize], images[b as usize]) == eps * space.form(a, b) % p))
        });
        if scales && point_sets.iter().all(|s| point_sets.contains(&s.iter().map(|&z| images[z as usize]).collect::<BTreeSet<_>>())) {
            count += 1;
        }
    }
    count
}

#[test]
fn desarguesian_automorphism_orders() {
    for (p, expected) in [(3, 48), (5, 240)] {
        let sp = spread_from_presemifield(&cat(&field(p, 1), Family::Field));
        let a = automorphism_order_matrices(&sp, 1 << 20);
        let b = automorphism_order_backtrack(&sp, 1 << 20);
        assert!(a.complete && b.complete);
        assert_eq!(a.order, b.order);
        assert_eq!(stabilizer_by_point_sets(&sp), a.order);
        assert_eq!(a.order, expected);
    }
}

#[test]
fn symplectic_partners_pass_and_commutative_partners_do_not() {
    let cases = [
        (field(3, 3), Family::AlbertSymplectic, Family::Albert),
        (field(3, 2), Family::Knuth, Family::Dickson),
        (field(3, 2), Family::ThasPayne, Family::CohenGanley),
        (field(5, 2), Family::Knuth, Family::Dickson),
    ];
    for (f, symp, comm) in cases {
        let s = cat(&f, symp);
        assert!(verify_presemifield(&s, CheckMode::Exhaustive).passed);
        let rep = is_symplectic(&spread_from_presemifield(&s));
        assert!(rep.passed, "{symp} q = {}: {rep:?}", f.q());
        assert!(symplectic_failure(&s).is_none());

        let c = cat(&f, comm);
        let ax = verify_presemifield(&c, CheckMode::Exhaustive);
        assert!(ax.passed && ax.noncommuting_pair.is_none());
        let rep = is_symplectic(&spread_from_presemifield(&c));
        assert!(rep.overlap.is_none() && rep.isotropy_failure.is_some(), "{comm} should not be isotropic");
        assert!(symplectic_failure(&c).is_some());
    }
}

#[test]
fn penttila_williams_readings() {
    let f = field(3, 5);
    let read = |fam: Family, reading: PwReading| catalog(&f, fam, &Params { reading: Some(reading), ..Params::default() }).unwrap();
    let mode = CheckMode::Sampled { samples: 20_000, seed: 0 };

    let verbatim = read(Family::PenttilaWilliams, PwReading::verbatim(Family::PenttilaWilliams));
    assert!(verify_presemifield(&verbatim, mode).passed);
    assert!(symplectic_failure(&verbatim).is_none());

    let grouped = read(Family::PenttilaWilliams, PwReading { grouped_ninth: true, grouped_cube: true });
    assert!(verify_presemifield(&grouped, mode).passed);
    assert!(matches!(build_odd_symplectic(&grouped), Err(Error::NotSymplectic(_))));

    for mixed in [PwReading { grouped_ninth: true, grouped_cube: false }, PwReading { grouped_ninth: false, grouped_cube: true }] {
        assert!(!verify_presemifield(&read(Family::PenttilaWilliams, mixed), mode).passed);
    }

    let comm = read(Family::PenttilaWilliamsCommutative, PwReading::verbatim(Family::PenttilaWilliamsCommutative));
    let ax = verify_presemifield(&comm, mode);
    assert!(ax.passed && ax.noncommuting_pair.is_none());
    let ungrouped = read(Family::PenttilaWilliamsCommutative, PwReading::default());
    let ax = verify_presemifield(&ungrouped, mode);
    assert!(ax.passed && ax.noncommuting_pair.is_some());
}

#[test]
fn suzuki_spread_covers_w() {
    let sp = suzuki_spread(&field(2, 3)).unwrap();
    let rep = is_symplectic(&sp);
    assert!(rep.passed);
    assert_eq!(rep.coverage, CoverageMode::Bitset);
    assert_eq!(rep.covered_points, Some(4095));
    assert_eq!(rep.members, 65);
}

#[test]
fn bblp_against_semifield_spreads() {
    let f = field(3, 3);
    let sp = bblp_spread(&f, 1).unwrap();
    assert!(is_symplectic(&sp).passed);
    assert!(!slope_closure_test(&sp).closed);
    assert!(slope_closure_test(&spread_from_presemifield(&cat(&f, Family::Albert))).closed);
    assert!(slope_closure_test(&spread_from_presemifield(&cat(&f, Family::AlbertSymplectic))).closed);
    assert_eq!(bkla_orbits(&spread_from_presemifield(&cat(&f, Family::Bkla))), vec![1, 1, 13, 13]);
}

#[test]
fn beta_inverts_the_twisted_sum() {
    for (p, r, k) in [(3, 3, 1), (3, 3, 2), (5, 3, 1), (3, 5, 1)] {
        let f = field(p, r);
        let beta = bblp_beta(&f, k).unwrap();
        let ki = i64::from(k);
        for u in f.elements() {
            let alpha = f.add(f.frobenius_pow(u, -ki), f.frobenius_pow(u, ki));
            assert_eq!(beta.eval(alpha), u);
        }
    }
}

#[test]
fn spread_json_round_trip_is_external() {
    let sp = suzuki_spread(&field(2, 3)).unwrap();
    let text = serde_json::to_string(&sp.to_json()).unwrap();
    let back = Spread::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert!(back.same_members(&sp));
    assert_eq!(*back.provenance(), Provenance::External);
    assert!(is_symplectic(&back).passed);
}
