use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElem};

use super::{Presemifield, TermJson};

/// `coeff · x^(p^i + p^j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: FieldElem,
    pub i: u32,
    pub j: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanarDesc {
    /// `Σ coeff·x^(p^i + p^j)`, a Dembowski-Ostrom polynomial.
    Monomials(Vec<Monomial>),
    /// `x^e`.
    Power(u64),
    /// Values listed in field enumeration order.
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanarKind {
    Planar,
    PseudoPlanar,
}

/// A function `F → F`, tabulated on construction.
#[derive(Clone)]
pub struct PlanarFn {
    field: Field,
    desc: PlanarDesc,
    kind: PlanarKind,
    label: String,
    values: Arc<Vec<u32>>,
}

impl std::fmt::Debug for PlanarFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PlanarFn").field("label", &self.label).field("desc", &self.desc).finish()
    }
}

impl PlanarFn {
    pub fn from_monomials(field: &Field, monomials: Vec<Monomial>, kind: PlanarKind, label: impl Into<String>) -> Self {
        let values = field
            .elements()
            .map(|x| {
                monomials
                    .iter()
                    .fold(FieldElem::ZERO, |acc, m| {
                        let t = field.mul(field.frobenius_pow(x, i64::from(m.i)), field.frobenius_pow(x, i64::from(m.j)));
                        field.add(acc, field.mul(m.coeff, t))
                    })
                    .index()
            })
            .collect();
        PlanarFn { field: field.clone(), desc: PlanarDesc::Monomials(monomials), kind, label: label.into(), values: Arc::new(values) }
    }

    pub fn power(field: &Field, e: u64, kind: PlanarKind, label: impl Into<String>) -> Self {
        let values = field.elements().map(|x| field.pow(x, e).index()).collect();
        PlanarFn { field: field.clone(), desc: PlanarDesc::Power(e), kind, label: label.into(), values: Arc::new(values) }
    }

    pub fn from_table(field: &Field, values: Vec<FieldElem>, kind: PlanarKind, label: impl Into<String>) -> Result<Self> {
        if values.len() != field.q() as usize {
            return Err(Error::ShapeMismatch(values.len(), field.q() as usize));
        }
        let values = values.into_iter().map(FieldElem::index).collect();
        Ok(PlanarFn { field: field.clone(), desc: PlanarDesc::Table, kind, label: label.into(), values: Arc::new(values) })
    }

    /// `f(x) = x²`.
    pub fn square(field: &Field) -> Self {
        Self::from_monomials(field, vec![Monomial { coeff: field.one(), i: 0, j: 0 }], PlanarKind::Planar, "x^2")
    }

    /// `f(x) = x^((3^k + 1)/2)` over `GF(3^r)`, with `gcd(k, 2r) = 1` and
    /// `k ≢ ±1 (mod 2r)`.
    pub fn coulter_matthews(field: &Field, k: u32) -> Result<Self> {
        let r = field.r() as u32;
        if field.p() != 3 {
            return Err(Error::Parameter(format!("Coulter-Matthews needs characteristic 3, got {}", field.p())));
        }
        if super::gcd(k, 2 * r) != 1 {
            return Err(Error::Parameter(format!("gcd(k, 2r) = gcd({k}, {}) must be 1", 2 * r)));
        }
        if k % (2 * r) == 1 || k % (2 * r) == 2 * r - 1 {
            return Err(Error::Parameter(format!("k = {k} must not be ±1 mod {}", 2 * r)));
        }
        let e = 3u64.pow(k).div_ceil(2);
        Ok(Self::power(field, e, PlanarKind::Planar, format!("coulter-matthews q={} k={k}", field.q())))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn desc(&self) -> &PlanarDesc {
        &self.desc
    }

    pub fn kind(&self) -> PlanarKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn eval(&self, x: FieldElem) -> FieldElem {
        FieldElem::from_index(self.values[x.index() as usize])
    }

    pub fn values(&self) -> impl Iterator<Item = FieldElem> + '_ {
        self.values.iter().map(|&v| FieldElem::from_index(v))
    }

    /// Monomials as JSON terms `{coeff, i, j}`, if the function has them.
    pub fn monomials_json(&self) -> Option<Vec<TermJson>> {
        match &self.desc {
            PlanarDesc::Monomials(ms) => {
                Some(ms.iter().map(|m| TermJson { coeff: self.field.coeffs(m.coeff), i: m.i, j: m.j }).collect())
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarReport {
    pub label: String,
    pub kind: PlanarKind,
    pub q: u32,
    /// Number of shifts `a` examined.
    pub checked: u64,
    /// A shift whose difference map is not a permutation, with two
    /// colliding arguments.
    pub witness: Option<[u32; 3]>,
    pub passed: bool,
}

fn permutation_test(field: &Field, label: &str, kind: PlanarKind, map: impl Fn(FieldElem, FieldElem) -> FieldElem + Sync) -> PlanarReport {
    let q = field.q();
    let witness = (1..q).into_par_iter().find_map_first(|a| {
        let a = FieldElem::from_index(a);
        let mut seen = vec![u32::MAX; q as usize];
        for x in field.elements() {
            let y = map(a, x).index() as usize;
            if seen[y] != u32::MAX {
                return Some([a.index(), seen[y], x.index()]);
            }
            seen[y] = x.index();
        }
        None
    });
    PlanarReport { label: label.into(), kind, q, checked: u64::from(q - 1), passed: witness.is_none(), witness }
}

/// `x ↦ f(x+a) - f(x)` is a permutation for every `a ≠ 0`. Odd `q` only.
pub fn planar_test(f: &PlanarFn) -> Result<PlanarReport> {
    let field = f.field();
    if field.p() == 2 {
        return Err(Error::OddCharacteristicRequired);
    }
    Ok(permutation_test(field, f.label(), PlanarKind::Planar, |a, x| field.sub(f.eval(field.add(x, a)), f.eval(x))))
}

/// `x ↦ f(x+a) + f(x) + ax` (even `q`) or `x ↦ f(x+a) - f(x) + ax` (odd
/// `q`) is a permutation for every `a ≠ 0`.
pub fn pseudo_planar_test(f: &PlanarFn) -> PlanarReport {
    let field = f.field();
    permutation_test(field, f.label(), PlanarKind::PseudoPlanar, |a, x| {
        field.add(field.sub(f.eval(field.add(x, a)), f.eval(x)), field.mul(a, x))
    })
}

/// `f(x) = x∗x` for a commutative presemifield on `F`, odd `q`.
pub fn planar_from_presemifield(c: &Presemifield) -> Result<PlanarFn> {
    let field = c.field();
    if field.p() == 2 {
        return Err(Error::OddCharacteristicRequired);
    }
    if c.space().dim() != 1 {
        return Err(Error::Parameter("planar functions live on V = F".into()));
    }
    let label = format!("{} squared", c.label());
    match c.terms() {
        Some(terms) => {
            // x^(p^i)·x^(p^j) only depends on the unordered pair.
            let mut ms: Vec<Monomial> = Vec::new();
            for t in terms {
                let (i, j) = (t.i.min(t.j), t.i.max(t.j));
                match ms.iter_mut().find(|m| m.i == i && m.j == j) {
                    Some(m) => m.coeff = field.add(m.coeff, t.coeff),
                    None => ms.push(Monomial { coeff: t.coeff, i, j }),
                }
            }
            ms.retain(|m| !m.coeff.is_zero());
            Ok(PlanarFn::from_monomials(field, ms, PlanarKind::Planar, label))
        }
        None => {
            let values = field.elements().map(|x| c.mul_elem(x, x)).collect();
            PlanarFn::from_table(field, values, PlanarKind::Planar, label)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    #[test]
    fn square_is_planar() {
        for (p, r) in [(3, 1), (5, 1), (7, 1), (3, 2), (3, 3)] {
            let f = make_field(p, r, None).unwrap();
            assert!(planar_test(&PlanarFn::square(&f)).unwrap().passed);
        }
    }

    #[test]
    fn cube_is_not_planar_over_gf9() {
        let f = make_field(3, 2, None).unwrap();
        let cube = PlanarFn::power(&f, 3, PlanarKind::Planar, "x^3");
        let rep = planar_test(&cube).unwrap();
        assert!(!rep.passed);
        let [a, x, y] = rep.witness.unwrap();
        let (a, x, y) = (FieldElem::from_index(a), FieldElem::from_index(x), FieldElem::from_index(y));
        let d = |t| f.sub(cube.eval(f.add(t, a)), cube.eval(t));
        assert_ne!(x, y);
        assert_eq!(d(x), d(y));
    }

    #[test]
    fn coulter_matthews_constraints() {
        let f = make_field(3, 5, None).unwrap();
        assert!(PlanarFn::coulter_matthews(&f, 3).is_ok());
        assert!(PlanarFn::coulter_matthews(&f, 1).is_err());
        assert!(PlanarFn::coulter_matthews(&f, 5).is_err());
    }

    #[test]
    fn zero_is_pseudo_planar_in_even_characteristic() {
        for r in 1..=4 {
            let f = make_field(2, r, None).unwrap();
            let zero = PlanarFn::from_monomials(&f, vec![], PlanarKind::PseudoPlanar, "0");
            assert!(pseudo_planar_test(&zero).passed);
        }
    }

    #[test]
    fn linear_function_over_gf4_is_pseudo_planar() {
        let f = make_field(2, 2, None).unwrap();
        let id = PlanarFn::from_table(&f, f.elements().collect(), PlanarKind::PseudoPlanar, "x").unwrap();
        // f(x+a) + f(x) + ax = a + ax, a permutation for every a ≠ 0.
        assert!(pseudo_planar_test(&id).passed);
    }
}
