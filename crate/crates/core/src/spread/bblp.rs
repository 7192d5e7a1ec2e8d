//! Net replacement on the BKLA spread of `W = F ⊕ F`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElem, VecSpace};
use crate::semifield::{catalog, gcd, Family, Params};

use super::{spread_from_presemifield, Provenance, Spread, Subspace, SymplecticSpace};

/// `σ_s(v, w) = (s·v, s⁻¹·w)` for `s ≠ 0`.
pub fn sigma(space: &SymplecticSpace, s: FieldElem, z: u64) -> u64 {
    let f = space.field();
    let inv = f.inv(s).expect("σ_s needs s ≠ 0");
    let (v, w) = space.split(z);
    space.point(space.v().scale_field(s, v), space.v().scale_field(inv, w))
}

/// `τ(v, w) = (w, v)`.
pub fn tau(space: &SymplecticSpace, z: u64) -> u64 {
    let (v, w) = space.split(z);
    space.point(w, v)
}

/// The inverse of `u ↦ u^(ρ⁻¹) + u^ρ`, `ρ = x^(p^k)`, as
/// `½ Σ a_i v^(ρ^i)` over `i < t`, `t` the order of `ρ`.
#[derive(Clone, Debug)]
pub struct Beta {
    field: Field,
    k: u32,
    coeffs: Vec<i64>,
}

impl Beta {
    /// `a_0 .. a_(t-1)`, each ±1.
    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn eval(&self, v: FieldElem) -> FieldElem {
        let f = &self.field;
        let sum = self.coeffs.iter().enumerate().fold(FieldElem::ZERO, |acc, (i, &a)| {
            let term = f.frobenius_pow(v, i64::from(self.k) * i as i64);
            f.add(acc, f.mul(f.from_prime(a), term))
        });
        f.mul(f.half().expect("odd characteristic"), sum)
    }
}

fn rho_order(field: &Field, k: u32) -> Result<u32> {
    let r = field.r() as u32;
    if field.p() == 2 {
        return Err(Error::OddCharacteristicRequired);
    }
    if k.is_multiple_of(r) {
        return Err(Error::Parameter(format!("ρ = x^({}^{k}) is trivial on GF({})", field.p(), field.q())));
    }
    let t = r / gcd(k % r, r);
    if t.is_multiple_of(2) {
        return Err(Error::Parameter(format!("ρ has even order {t}")));
    }
    Ok(t)
}

pub fn bblp_beta(field: &Field, k: u32) -> Result<Beta> {
    let t = rho_order(field, k)?;
    let pattern: [i64; 4] = if t % 4 == 1 { [1, 1, -1, -1] } else { [-1, 1, 1, -1] };
    let coeffs = (0..t as usize).map(|i| pattern[i % 4]).collect();
    Ok(Beta { field: field.clone(), k, coeffs })
}

fn bkla(field: &Field, k: u32) -> Result<Spread> {
    rho_order(field, k)?;
    let s = catalog(field, Family::Bkla, &Params { k: Some(k), ..Params::default() })?;
    Ok(spread_from_presemifield(&s))
}

fn f_space(field: &Field) -> Result<SymplecticSpace> {
    Ok(SymplecticSpace::new(VecSpace::new(field.clone(), 1)?))
}

/// Orbit sizes of `G = {σ_s}` on the members of a spread of `F ⊕ F`,
/// sorted ascending.
pub fn bkla_orbits(sp: &Spread) -> Vec<usize> {
    let space = sp.space();
    let index = sp.member_index();
    let mut seen = vec![false; sp.members().len()];
    let mut sizes = Vec::new();
    for start in 0..seen.len() {
        if seen[start] {
            continue;
        }
        let mut size = 0;
        for s in space.field().nonzero() {
            let image = sp.members()[start].map(space, |z| sigma(space, s, z));
            if let Some(&i) = index.get(&image) {
                if !seen[i] {
                    seen[i] = true;
                    size += 1;
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable();
    sizes
}

/// Replaces the `G`-orbit `N` of `W_1 = {(x, x^ρ + x^(ρ⁻¹))}` in the BKLA
/// spread by `τ(N)`.
pub fn bblp_by_surgery(field: &Field, k: u32) -> Result<Spread> {
    let base = bkla(field, k)?;
    let space = base.space().clone();
    let w1 = base.members()[field.one().index() as usize].clone();
    let mut orbit: Vec<Subspace> = field.nonzero().map(|s| w1.map(&space, |z| sigma(&space, s, z))).collect();
    orbit.sort();
    orbit.dedup();
    let mut members: Vec<Subspace> = base.members().iter().filter(|m| orbit.binary_search(m).is_err()).cloned().collect();
    members.extend(orbit.iter().map(|m| m.map(&space, |z| tau(&space, z))));
    Ok(Spread::new(space, members, Provenance::Bblp))
}

/// `(x, 0)`, `(0, y)`, the BKLA members with nonsquare `m`, and
/// `{(x, s·β(x·s))}` for one `s` from each pair `{s, −s}`.
pub fn bblp_by_list(field: &Field, k: u32) -> Result<Spread> {
    let beta = bblp_beta(field, k)?;
    let space = f_space(field)?;
    let f = field;
    let basis: Vec<FieldElem> = (0..f.r()).map(|t| FieldElem::from_index(space.v().unit(t))).collect();
    let graph = |slope: &dyn Fn(FieldElem) -> FieldElem| {
        Subspace::from_points(&space, basis.iter().map(|&e| space.point(e.index(), slope(e).index())))
    };
    let mut members = vec![graph(&|_| FieldElem::ZERO)];
    members.push(Subspace::from_points(&space, basis.iter().map(|&e| space.point(0, e.index()))));
    let k = i64::from(k);
    for m in f.nonzero() {
        if !f.is_square(m)? {
            let m_rho = f.frobenius_pow(m, k);
            members.push(graph(&|x| f.add(f.mul(m, f.frobenius_pow(x, -k)), f.mul(m_rho, f.frobenius_pow(x, k)))));
        }
    }
    for s in f.nonzero() {
        if s.index() < f.neg(s).index() {
            members.push(graph(&|x| f.mul(s, beta.eval(f.mul(x, s)))));
        }
    }
    Ok(Spread::new(space, members, Provenance::Bblp))
}

/// The BBLP spread for `ρ = x^(p^k)`, built by surgery and by the explicit
/// list. The two must agree as member sets.
pub fn bblp_spread(field: &Field, k: u32) -> Result<Spread> {
    let by_surgery = bblp_by_surgery(field, k)?;
    let by_list = bblp_by_list(field, k)?;
    if !by_surgery.same_members(&by_list) {
        let a: HashMap<_, _> = by_surgery.member_index();
        let missing = by_list.members().iter().filter(|m| !a.contains_key(m)).count();
        return Err(Error::ConstructionMismatch(format!(
            "surgery gives {} members, the list {}; {missing} listed members are missing from the surgery",
            by_surgery.members().len(),
            by_list.members().len()
        )));
    }
    Ok(by_list)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use crate::spread::is_symplectic;

    #[test]
    fn beta_inverts_alpha_over_gf27() {
        let f = make_field(3, 3, None).unwrap();
        let beta = bblp_beta(&f, 1).unwrap();
        assert_eq!(beta.coefficients(), &[-1, 1, 1]);
        for v in f.elements() {
            let u = beta.eval(v);
            assert_eq!(f.add(f.frobenius_pow(u, -1), f.frobenius_pow(u, 1)), v);
        }
    }

    #[test]
    fn beta_pattern_for_t_equal_5() {
        let f = make_field(3, 5, None).unwrap();
        let beta = bblp_beta(&f, 1).unwrap();
        assert_eq!(beta.coefficients(), &[1, 1, -1, -1, 1]);
        for v in f.elements().step_by(37) {
            let u = beta.eval(v);
            assert_eq!(f.add(f.frobenius_pow(u, -1), f.frobenius_pow(u, 1)), v);
        }
    }

    #[test]
    fn sigma_is_an_isometry_and_tau_negates() {
        let f = make_field(3, 3, None).unwrap();
        let w = f_space(&f).unwrap();
        let mut z = 1u64;
        for step in 0..400u64 {
            // A cheap deterministic walk over pairs of points.
            z = (z * 7 + 11 + step) % w.size();
            let z2 = (z * 13 + 5) % w.size();
            let s = FieldElem::from_index(1 + (step % 26) as u32);
            assert_eq!(w.form(sigma(&w, s, z), sigma(&w, s, z2)), w.form(z, z2));
            assert_eq!(w.form(tau(&w, z), tau(&w, z2)), (3 - w.form(z, z2)) % 3);
        }
    }

    #[test]
    fn rho_plus_one_powers_are_the_squares() {
        let f = make_field(3, 3, None).unwrap();
        let mut powers: Vec<u32> = f.nonzero().map(|s| f.pow(s, 3 + 1).index()).collect();
        powers.sort_unstable();
        powers.dedup();
        let mut squares: Vec<u32> = f.nonzero().map(|s| f.mul(s, s).index()).collect();
        squares.sort_unstable();
        squares.dedup();
        assert_eq!(powers, squares);
    }

    #[test]
    fn gf27_orbits_and_both_routes() {
        let f = make_field(3, 3, None).unwrap();
        assert_eq!(bkla_orbits(&bkla(&f, 1).unwrap()), vec![1, 1, 13, 13]);
        let sp = bblp_spread(&f, 1).unwrap();
        assert_eq!(sp.members().len(), 28);
        assert!(is_symplectic(&sp).passed);
    }

    #[test]
    fn even_order_rho_rejected() {
        let f = make_field(3, 2, None).unwrap();
        assert!(bblp_beta(&f, 1).is_err());
    }
}
