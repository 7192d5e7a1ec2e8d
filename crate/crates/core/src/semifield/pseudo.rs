//! Commutative presemifields of characteristic 2 versus pseudo-planar
//! functions.
//!
//! A commutative `x∗y = Σ a_i x^(2^i) y^(2^i) + Σ_{i<j} a_ij (x^(2^i) y^(2^j) + x^(2^j) y^(2^i))`
//! has diagonal part `g(xy)` with `g(x) = Σ a_i x^(2^i)`. Composing with
//! `g⁻¹` gives the isotopic `x⋆y = xy + f(x+y) + f(x) + f(y)`, and `f`
//! is read off the off-diagonal coefficients.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElem, VecSpace};

use super::{
    canonical_terms, pseudo_planar_test, verify_presemifield, AxiomReport, CheckMode, Monomial, PlanarDesc,
    PlanarFn, PlanarKind, PlanarReport, Presemifield, Term,
};

/// Whether the linearized polynomial `Σ g_k x^(p^k)` is bijective, decided
/// from its GF(p)-matrix.
fn is_invertible(field: &Field, g: &[FieldElem]) -> bool {
    let r = field.r();
    let p = field.p();
    let eval = |x: FieldElem| {
        g.iter().enumerate().fold(FieldElem::ZERO, |acc, (k, &c)| field.add(acc, field.mul(c, field.frobenius_pow(x, k as i64))))
    };
    let mut rows: Vec<Vec<u32>> = (0..r).map(|t| field.coeffs(eval(FieldElem::from_index(p.pow(t as u32))))).collect();
    let mut rank = 0;
    for col in 0..r {
        let Some(pr) = (rank..r).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(rank, pr);
        let inv = crate::ff::inv_mod_prime(rows[rank][col], p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let c = row[col] * inv % p;
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a = (*a + p * p - c * b) % p;
                }
            }
        }
        rank += 1;
    }
    rank == r
}

/// Coefficients `l_k` of the compositional inverse `Σ l_k x^(p^k)` of the
/// linearized polynomial `Σ g_k x^(p^k)`.
///
/// Solves `Σ_k l_k·g(e_t)^(p^k) = e_t` over `F` for a GF(p)-basis `e_t`;
/// the Moore matrix of the `g(e_t)` is invertible exactly when `g` is.
pub fn linearized_inverse(field: &Field, g: &[FieldElem]) -> Result<Vec<FieldElem>> {
    let r = field.r();
    if g.len() > r {
        return Err(Error::ShapeMismatch(g.len(), r));
    }
    if !is_invertible(field, g) {
        return Err(Error::SingularLinearMap(format!("{:?}", g.iter().map(|c| field.coeffs(*c)).collect::<Vec<_>>())));
    }
    let eval = |x: FieldElem| {
        g.iter().enumerate().fold(FieldElem::ZERO, |acc, (k, &c)| field.add(acc, field.mul(c, field.frobenius_pow(x, k as i64))))
    };
    let p = field.p();
    // Row t: [g(e_t)^(p^0), …, g(e_t)^(p^(r-1)) | e_t]
    let mut m: Vec<Vec<FieldElem>> = (0..r)
        .map(|t| {
            let e = FieldElem::from_index(p.pow(t as u32));
            let ge = eval(e);
            let mut row: Vec<FieldElem> = (0..r).map(|k| field.frobenius_pow(ge, k as i64)).collect();
            row.push(e);
            row
        })
        .collect();
    for col in 0..r {
        let pr = (col..r).find(|&i| !m[i][col].is_zero()).ok_or_else(|| {
            Error::SingularLinearMap("Moore matrix is singular".into())
        })?;
        m.swap(col, pr);
        let inv = field.inv(m[col][col]).expect("pivot is nonzero");
        for v in m[col].iter_mut() {
            *v = field.mul(*v, inv);
        }
        let pivot = m[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let c = row[col];
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a = field.sub(*a, field.mul(c, *b));
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[r]).collect())
}

/// Outcome of the conversion `∗ ↦ (⋆, f)`.
#[derive(Clone, Debug)]
pub struct StarDecomposition {
    /// `g(x) = Σ a_i x^(2^i)`.
    pub g: Vec<FieldElem>,
    pub g_inv: Vec<FieldElem>,
    /// `x⋆y = g⁻¹(x∗y)`.
    pub star: Presemifield,
    /// `f = Σ_{i<j} b_ij x^(2^i + 2^j)`.
    pub f: PlanarFn,
    /// `f` as a pseudo-planar function.
    pub pseudo_planar: PlanarReport,
}

pub fn pseudoplanar_from_presemifield(c: &Presemifield) -> Result<StarDecomposition> {
    let field = c.field();
    if field.p() != 2 {
        return Err(Error::EvenCharacteristicRequired(field.p()));
    }
    if c.space().dim() != 1 {
        return Err(Error::NoCoefficientForm);
    }
    let terms = c.require_terms()?;
    let r = field.r();
    let coeff = |i: u32, j: u32| terms.iter().find(|t| t.i == i && t.j == j).map_or(FieldElem::ZERO, |t| t.coeff);
    if let Some(t) = terms.iter().find(|t| coeff(t.j, t.i) != t.coeff) {
        return Err(Error::Parameter(format!("{} is not commutative: ({}, {}) term has no mirror", c.label(), t.i, t.j)));
    }
    let g: Vec<FieldElem> = (0..r as u32).map(|i| coeff(i, i)).collect();
    let g_inv = linearized_inverse(field, &g)
        .map_err(|e| Error::SingularLinearMap(format!("diagonal part of {} is not invertible ({e})", c.label())))?;

    // g⁻¹(Σ c x^(2^i) y^(2^j)) = Σ_k Σ l_k c^(2^k) x^(2^(i+k)) y^(2^(j+k))
    let mut star_terms = Vec::new();
    for (k, &l) in g_inv.iter().enumerate() {
        if l.is_zero() {
            continue;
        }
        for t in terms {
            let ck = field.frobenius_pow(t.coeff, k as i64);
            star_terms.push(Term::new(field.mul(l, ck), t.i + k as u32, t.j + k as u32));
        }
    }
    let star_terms = canonical_terms(field, &star_terms);
    let diagonal: Vec<_> = star_terms.iter().filter(|t| t.i == t.j).collect();
    if diagonal.len() != 1 || diagonal[0].i != 0 || diagonal[0].coeff != field.one() {
        return Err(Error::ConstructionMismatch(format!("diagonal of g⁻¹∘∗ is not xy: {diagonal:?}")));
    }
    let monomials: Vec<Monomial> =
        star_terms.iter().filter(|t| t.i < t.j).map(|t| Monomial { coeff: t.coeff, i: t.i, j: t.j }).collect();
    let f = PlanarFn::from_monomials(field, monomials, PlanarKind::PseudoPlanar, format!("f from {}", c.label()));
    let star = Presemifield::from_terms(field, &star_terms, format!("star of {}", c.label()))?.with_flags(true, false);

    let mismatch = field.elements().collect::<Vec<_>>().into_par_iter().find_map_first(|x| {
        field.elements().find(|&y| star.mul_elem(x, y) != star_from_f(field, &f, x, y)).map(|y| (x, y))
    });
    if let Some((x, y)) = mismatch {
        return Err(Error::ConstructionMismatch(format!(
            "x⋆y != xy + f(x+y) + f(x) + f(y) at x = {}, y = {}",
            x.index(),
            y.index()
        )));
    }
    let pseudo_planar = pseudo_planar_test(&f);
    Ok(StarDecomposition { g, g_inv, star, f, pseudo_planar })
}

fn star_from_f(field: &Field, f: &PlanarFn, x: FieldElem, y: FieldElem) -> FieldElem {
    let s = field.add(f.eval(field.add(x, y)), field.add(f.eval(x), f.eval(y)));
    field.add(field.mul(x, y), s)
}

/// A triple violating `f(x+y+z) + f(x+y) + f(x+z) + f(y+z) + f(x) + f(y) + f(z) = 0`.
pub fn quadratic_condition(f: &PlanarFn) -> Option<[u32; 3]> {
    let field = f.field();
    let q = field.q();
    (0..q).into_par_iter().find_map_first(|x| {
        let x = FieldElem::from_index(x);
        for y in field.elements() {
            for z in field.elements() {
                let s = [
                    field.add(field.add(x, y), z),
                    field.add(x, y),
                    field.add(x, z),
                    field.add(y, z),
                    x,
                    y,
                    z,
                ]
                .into_iter()
                .fold(FieldElem::ZERO, |acc, t| field.add(acc, f.eval(t)));
                if !s.is_zero() {
                    return Some([x.index(), y.index(), z.index()]);
                }
            }
        }
        None
    })
}

#[derive(Clone, Debug)]
pub struct CommFromPseudo {
    pub product: Presemifield,
    pub axioms: AxiomReport,
    /// `None` when the quadratic condition holds, else a violating triple.
    pub quadratic_witness: Option<[u32; 3]>,
}

impl CommFromPseudo {
    /// The two verdicts must coincide.
    pub fn verdicts_agree(&self) -> bool {
        self.axioms.passed == self.quadratic_witness.is_none()
    }
}

/// `x∗y = xy + f(x+y) + f(x) + f(y)`, with both the presemifield axioms and
/// the quadratic condition evaluated.
pub fn comm_from_pseudoplanar(f: &PlanarFn) -> Result<CommFromPseudo> {
    let field = f.field();
    if field.p() != 2 {
        return Err(Error::EvenCharacteristicRequired(field.p()));
    }
    let rep = pseudo_planar_test(f);
    if !rep.passed {
        return Err(Error::NotPseudoPlanar(format!("{} (witness {:?})", f.label(), rep.witness)));
    }
    let label = format!("product from {}", f.label());
    let product = match f.desc() {
        PlanarDesc::Monomials(ms) => {
            let mut terms = vec![Term::new(field.one(), 0, 0)];
            for m in ms.iter().filter(|m| m.i % field.r() as u32 != m.j % field.r() as u32) {
                terms.push(Term::new(m.coeff, m.i, m.j));
                terms.push(Term::new(m.coeff, m.j, m.i));
            }
            Presemifield::from_terms(field, &terms, label)?
        }
        _ => {
            let q = field.q();
            let table = (0..q * q)
                .map(|k| star_from_f(field, f, FieldElem::from_index(k / q), FieldElem::from_index(k % q)).index())
                .collect();
            Presemifield::from_table(VecSpace::new(field.clone(), 1)?, table, label)?
        }
    }
    .with_flags(true, false);
    let axioms = verify_presemifield(&product, CheckMode::Exhaustive);
    Ok(CommFromPseudo { product, axioms, quadratic_witness: quadratic_condition(f) })
}

/// Pseudo-planar functions on `GF(2^r)` normalised modulo affine maps.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PseudoPlanarSearch {
    pub q: u32,
    pub candidates: u64,
    /// Value tables (field element indices) of the quadratic hits.
    pub quadratic: Vec<Vec<u32>>,
    pub non_quadratic: Vec<Vec<u32>>,
}

/// Exhausts every `f` with `f(0) = 0` and `f` vanishing on the basis
/// `1, x, …, x^(r-1)`. Adding an affine map preserves pseudo-planarity and
/// quadraticity, so each class is visited exactly once.
pub fn search_pseudo_planar(field: &Field) -> Result<PseudoPlanarSearch> {
    if field.p() != 2 {
        return Err(Error::EvenCharacteristicRequired(field.p()));
    }
    let q = field.q();
    let r = field.r();
    let free: Vec<u32> = (1..q).filter(|x| !x.is_power_of_two()).collect();
    let exponent = free.len() as u32;
    let candidates = u64::from(q).checked_pow(exponent).filter(|&c| c <= 1 << 24).ok_or_else(|| {
        Error::Parameter(format!("search space q^{exponent} is too large for q = {q}"))
    })?;
    debug_assert_eq!(free.len(), q as usize - 1 - r);
    let hits: Vec<(Vec<u32>, bool)> = (0..candidates)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut values = vec![FieldElem::ZERO; q as usize];
            for &x in &free {
                values[x as usize] = FieldElem::from_index((code % u64::from(q)) as u32);
                code /= u64::from(q);
            }
            let f = PlanarFn::from_table(field, values, PlanarKind::PseudoPlanar, "candidate").ok()?;
            pseudo_planar_test(&f).passed.then(|| {
                let quadratic = quadratic_condition(&f).is_none();
                (f.values().map(FieldElem::index).collect(), quadratic)
            })
        })
        .collect();
    let (quadratic, non_quadratic): (Vec<_>, Vec<_>) = hits.into_iter().partition(|(_, quad)| *quad);
    Ok(PseudoPlanarSearch {
        q,
        candidates,
        quadratic: quadratic.into_iter().map(|(v, _)| v).collect(),
        non_quadratic: non_quadratic.into_iter().map(|(v, _)| v).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use crate::semifield::{catalog, Family, Params};

    #[test]
    fn field_gives_identity_and_zero() {
        let f = make_field(2, 3, None).unwrap();
        let s = catalog(&f, Family::Field, &Params::default()).unwrap();
        let d = pseudoplanar_from_presemifield(&s).unwrap();
        assert_eq!(d.g_inv[0], f.one());
        assert!(d.f.values().all(|v| v.is_zero()));
        assert!(d.pseudo_planar.passed);
    }

    #[test]
    fn linearized_inverse_inverts() {
        let f = make_field(2, 4, None).unwrap();
        let g = vec![f.gen(), f.one(), FieldElem::ZERO, f.from_prime(1)];
        let eval = |c: &[FieldElem], x: FieldElem| {
            c.iter().enumerate().fold(FieldElem::ZERO, |acc, (k, &a)| f.add(acc, f.mul(a, f.frobenius_pow(x, k as i64))))
        };
        match linearized_inverse(&f, &g) {
            Ok(l) => assert!(f.elements().all(|x| eval(&l, eval(&g, x)) == x)),
            Err(Error::SingularLinearMap(_)) => {
                let images: std::collections::BTreeSet<_> = f.elements().map(|x| eval(&g, x)).collect();
                assert!(images.len() < f.q() as usize);
            }
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn planted_singular_diagonal() {
        // x∗y = x²y² + xy: g(x) = x + x², which kills 0 and 1.
        let f = make_field(2, 3, None).unwrap();
        let one = f.one();
        let s = Presemifield::from_terms(&f, &[Term::new(one, 0, 0), Term::new(one, 1, 1)], "planted").unwrap();
        assert!(matches!(pseudoplanar_from_presemifield(&s), Err(Error::SingularLinearMap(_))));
    }
}
