//! Presemifields, planar and pseudo-planar functions.
//!
//! A [`Presemifield`] is a product on the point set of `V = F` or
//! `V = F ⊕ F` (points are [`VecSpace`] indices). It is given either in
//! coefficient form `Σ c·x^(p^i)·y^(p^j)` (only for `V = F`), as one of
//! the two-coordinate families, or as an explicit table. Coefficient form
//! is what the Knuth duals, the Galois-ring lift and the pseudo-planar
//! conversion need; the other two only support evaluation.
//!
//! Families carry a declared `commutative`/`symplectic` flag. Nothing
//! downstream trusts it without running [`verify_presemifield`] and, for
//! symplecticity, the spread checks.

mod dual;
mod planar;
mod pseudo;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{Field, FieldDescriptor, FieldElem, VecSpace};

pub use dual::{knuth_dual_even, knuth_dual_odd};
pub use planar::{
    planar_from_presemifield, planar_test, pseudo_planar_test, Monomial, PlanarDesc, PlanarFn, PlanarKind,
    PlanarReport,
};
pub use pseudo::{
    comm_from_pseudoplanar, linearized_inverse, pseudoplanar_from_presemifield, quadratic_condition,
    search_pseudo_planar, CommFromPseudo, PseudoPlanarSearch, StarDecomposition,
};
pub use verify::{verify_presemifield, AxiomReport, CheckMode};

/// Products up to this many points are materialised as a table.
pub const TABLE_LIMIT: u32 = 729;

/// One term `coeff · x^(p^i) · y^(p^j)` of a bilinear form on `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub coeff: FieldElem,
    pub i: u32,
    pub j: u32,
}

impl Term {
    pub fn new(coeff: FieldElem, i: u32, j: u32) -> Self {
        Term { coeff, i, j }
    }
}

/// Merges repeated `(i, j)` pairs, reduces indices mod `r` and drops zero
/// coefficients. The result is the unique reduced representation of the
/// bilinear map, sorted by `(i, j)`.
pub fn canonical_terms(field: &Field, terms: &[Term]) -> Vec<Term> {
    let r = field.r() as u32;
    let mut acc: BTreeMap<(u32, u32), FieldElem> = BTreeMap::new();
    for t in terms {
        let slot = acc.entry((t.i % r, t.j % r)).or_insert(FieldElem::ZERO);
        *slot = field.add(*slot, t.coeff);
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((i, j), coeff)| Term { coeff, i, j })
        .collect()
}

pub fn eval_terms(field: &Field, terms: &[Term], x: FieldElem, y: FieldElem) -> FieldElem {
    terms.iter().fold(FieldElem::ZERO, |acc, t| {
        let xi = field.frobenius_pow(x, i64::from(t.i));
        let yj = field.frobenius_pow(y, i64::from(t.j));
        field.add(acc, field.mul(t.coeff, field.mul(xi, yj)))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Field,
    Albert,
    AlbertSymplectic,
    Bkla,
    Dickson,
    Knuth,
    CohenGanley,
    ThasPayne,
    Ganley,
    GanleySymplectic,
    PenttilaWilliams,
    PenttilaWilliamsCommutative,
    /// Derived objects: Knuth duals, products from pseudo-planar functions, imported tables.
    Derived,
}

impl Family {
    pub const CATALOG: [Family; 12] = [
        Family::Field,
        Family::Albert,
        Family::AlbertSymplectic,
        Family::Bkla,
        Family::Dickson,
        Family::Knuth,
        Family::CohenGanley,
        Family::ThasPayne,
        Family::Ganley,
        Family::GanleySymplectic,
        Family::PenttilaWilliams,
        Family::PenttilaWilliamsCommutative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Field => "field",
            Family::Albert => "albert",
            Family::AlbertSymplectic => "albert-symplectic",
            Family::Bkla => "bkla",
            Family::Dickson => "dickson",
            Family::Knuth => "knuth",
            Family::CohenGanley => "cohen-ganley",
            Family::ThasPayne => "thas-payne",
            Family::Ganley => "ganley",
            Family::GanleySymplectic => "ganley-symplectic",
            Family::PenttilaWilliams => "penttila-williams",
            Family::PenttilaWilliamsCommutative => "penttila-williams-commutative",
            Family::Derived => "derived",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::CATALOG.into_iter().chain([Family::Derived]).find(|f| f.name() == name)
    }

    /// `(commutative, symplectic)` as claimed for the family.
    pub fn declared(self) -> (bool, bool) {
        match self {
            Family::Field => (true, true),
            Family::Albert | Family::Dickson | Family::CohenGanley | Family::Ganley => (true, false),
            Family::PenttilaWilliamsCommutative => (true, false),
            Family::AlbertSymplectic
            | Family::Bkla
            | Family::Knuth
            | Family::ThasPayne
            | Family::GanleySymplectic
            | Family::PenttilaWilliams => (false, true),
            Family::Derived => (false, false),
        }
    }

    /// Whether the family lives on `F ⊕ F`.
    pub fn is_pair(self) -> bool {
        matches!(
            self,
            Family::Dickson
                | Family::Knuth
                | Family::CohenGanley
                | Family::ThasPayne
                | Family::Ganley
                | Family::GanleySymplectic
                | Family::PenttilaWilliams
                | Family::PenttilaWilliamsCommutative
        )
    }

    /// Partner under the commutative/symplectic pairing of the catalog.
    pub fn partner(self) -> Option<Family> {
        Some(match self {
            Family::Field => Family::Field,
            Family::Albert => Family::AlbertSymplectic,
            Family::AlbertSymplectic => Family::Albert,
            Family::Dickson => Family::Knuth,
            Family::Knuth => Family::Dickson,
            Family::CohenGanley => Family::ThasPayne,
            Family::ThasPayne => Family::CohenGanley,
            Family::Ganley => Family::GanleySymplectic,
            Family::GanleySymplectic => Family::Ganley,
            Family::PenttilaWilliams => Family::PenttilaWilliamsCommutative,
            Family::PenttilaWilliamsCommutative => Family::PenttilaWilliams,
            Family::Bkla | Family::Derived => return None,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How to parse the Penttila-Williams exponents: whether `bd^9` means
/// `b·d^9` or `(bd)^9`, and likewise for the cube-power term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PwReading {
    /// Ninth-power term is `(bd)^9` rather than `b·d^9`.
    pub grouped_ninth: bool,
    /// 27th-power term is `(b·x)^27` rather than `b·x^27`.
    pub grouped_cube: bool,
}

impl PwReading {
    pub const ALL: [PwReading; 4] = [
        PwReading { grouped_ninth: false, grouped_cube: false },
        PwReading { grouped_ninth: false, grouped_cube: true },
        PwReading { grouped_ninth: true, grouped_cube: false },
        PwReading { grouped_ninth: true, grouped_cube: true },
    ];

    /// The reading as printed for the given member of the pair.
    pub fn verbatim(family: Family) -> PwReading {
        match family {
            Family::PenttilaWilliamsCommutative => PwReading { grouped_ninth: true, grouped_cube: true },
            _ => PwReading::default(),
        }
    }

    pub fn label(self, family: Family) -> String {
        let (lhs, rhs) = if family == Family::PenttilaWilliamsCommutative { ("bd", "bd") } else { ("bd", "bc") };
        let n = if self.grouped_ninth { format!("({lhs})^9") } else { format!("{}{}^9", &lhs[..1], &lhs[1..]) };
        let c = if self.grouped_cube { format!("({rhs})^27") } else { format!("{}{}^27", &rhs[..1], &rhs[1..]) };
        format!("{n}, {c}")
    }
}

/// Family parameters. Missing values take the documented defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    /// `ρ = σ = x ↦ x^(p^k)`; default `k = 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    /// Nonsquare `j` as a coefficient array; default is the first
    /// nonsquare in enumeration order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reading: Option<PwReading>,
}

/// A product rule on `F ⊕ F`, with its field constants precomputed.
#[derive(Clone, Debug)]
struct PairRule {
    family: Family,
    /// Frobenius exponent (`σ = p^k`).
    k: i64,
    j: FieldElem,
    /// Derived constants: `j^σ⁻¹`, `j^3`, `j^(1/3)`.
    j_aux: FieldElem,
    reading: PwReading,
}

impl PairRule {
    fn eval(&self, f: &Field, (a, b): (FieldElem, FieldElem), (c, d): (FieldElem, FieldElem)) -> (FieldElem, FieldElem) {
        let fr = |x: FieldElem, i: i64| f.frobenius_pow(x, i);
        let add = |x, y| f.add(x, y);
        let sub = |x, y| f.sub(x, y);
        let mul = |x, y| f.mul(x, y);
        match self.family {
            Family::Dickson => {
                let bs = fr(b, self.k);
                let ds = fr(d, self.k);
                (add(mul(a, c), mul(self.j, mul(bs, ds))), add(mul(a, d), mul(b, c)))
            }
            Family::Knuth => {
                let cs = fr(c, -self.k);
                (add(mul(a, c), mul(b, d)), add(mul(a, d), mul(self.j_aux, mul(b, cs))))
            }
            Family::CohenGanley => {
                let bd = mul(b, d);
                let first = add(add(mul(a, c), mul(self.j, bd)), mul(self.j_aux, fr(bd, 2)));
                let second = add(add(mul(a, d), mul(b, c)), mul(self.j, fr(bd, 1)));
                (first, second)
            }
            Family::ThasPayne => {
                let second = add(
                    add(mul(a, d), mul(self.j, mul(b, c))),
                    mul(self.j_aux, add(mul(b, fr(c, -2)), mul(b, fr(d, -1)))),
                );
                (add(mul(a, c), mul(b, d)), second)
            }
            Family::Ganley => {
                let first = sub(sub(mul(a, c), mul(fr(b, 2), d)), mul(b, fr(d, 2)));
                let second = add(add(mul(a, d), mul(b, c)), mul(fr(b, 1), fr(d, 1)));
                (first, second)
            }
            Family::GanleySymplectic => {
                let second = sub(
                    sub(add(mul(a, d), mul(b, fr(d, -1))), mul(fr(b, -2), fr(c, -2))),
                    mul(fr(b, 2), c),
                );
                (add(mul(a, c), mul(b, d)), second)
            }
            Family::PenttilaWilliams => {
                let ninth = if self.reading.grouped_ninth { fr(mul(b, d), 2) } else { mul(b, fr(d, 2)) };
                let cube = if self.reading.grouped_cube { fr(mul(b, c), 3) } else { mul(b, fr(c, 3)) };
                (add(mul(a, c), mul(b, d)), add(add(mul(a, d), ninth), cube))
            }
            Family::PenttilaWilliamsCommutative => {
                let ninth = if self.reading.grouped_ninth { fr(mul(b, d), 2) } else { mul(b, fr(d, 2)) };
                let cube = if self.reading.grouped_cube { fr(mul(b, d), 3) } else { mul(b, fr(d, 3)) };
                (add(mul(a, c), ninth), add(add(mul(a, d), mul(b, c)), cube))
            }
            _ => unreachable!("not a pair family"),
        }
    }
}

#[derive(Clone, Debug)]
enum Rule {
    Terms(Vec<Term>),
    Pair(PairRule),
    Table(Arc<Vec<u32>>),
}

/// A product `x∘y` on the points of `V`.
#[derive(Clone)]
pub struct Presemifield {
    space: VecSpace,
    family: Family,
    params: Params,
    label: String,
    rule: Rule,
    table: Option<Arc<Vec<u32>>>,
    commutative: bool,
    symplectic: bool,
}

impl fmt::Debug for Presemifield {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presemifield")
            .field("label", &self.label)
            .field("q", &self.field().q())
            .field("dim", &self.space.dim())
            .finish()
    }
}

impl Presemifield {
    fn build(space: VecSpace, family: Family, params: Params, label: String, rule: Rule) -> Self {
        let (commutative, symplectic) = family.declared();
        let mut s = Presemifield { space, family, params, label, rule, table: None, commutative, symplectic };
        let n = s.space.n();
        if let Rule::Table(t) = &s.rule {
            s.table = Some(t.clone());
        } else if n <= TABLE_LIMIT {
            let t: Vec<u32> = (0..n * n).map(|k| s.mul_by_rule(k / n, k % n)).collect();
            s.table = Some(Arc::new(t));
        }
        s
    }

    /// A product on `V = F` given in coefficient form.
    pub fn from_terms(field: &Field, terms: &[Term], label: impl Into<String>) -> Result<Self> {
        let terms = canonical_terms(field, terms);
        Ok(Self::build(VecSpace::new(field.clone(), 1)?, Family::Derived, Params::default(), label.into(), Rule::Terms(terms)))
    }

    /// A product given by its full table, `table[x·n + y] = x∘y` on point
    /// indices.
    pub fn from_table(space: VecSpace, table: Vec<u32>, label: impl Into<String>) -> Result<Self> {
        let n = space.n() as usize;
        if table.len() != n * n {
            return Err(Error::ShapeMismatch(table.len(), n * n));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= space.n()) {
            return Err(Error::Parameter(format!("table entry {bad} is not a point of V")));
        }
        Ok(Self::build(space, Family::Derived, Params::default(), label.into(), Rule::Table(Arc::new(table))))
    }

    /// Marks a derived product with the properties it is meant to have.
    pub fn with_flags(mut self, commutative: bool, symplectic: bool) -> Self {
        self.commutative = commutative;
        self.symplectic = symplectic;
        self
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn space(&self) -> &VecSpace {
        &self.space
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Declared, not verified.
    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    /// Declared, not verified.
    pub fn is_symplectic(&self) -> bool {
        self.symplectic
    }

    /// Coefficient form, when the product has one.
    pub fn terms(&self) -> Option<&[Term]> {
        match &self.rule {
            Rule::Terms(t) => Some(t),
            _ => None,
        }
    }

    pub fn require_terms(&self) -> Result<&[Term]> {
        self.terms().ok_or(Error::NoCoefficientForm)
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    fn mul_by_rule(&self, x: u32, y: u32) -> u32 {
        let f = self.field();
        match &self.rule {
            Rule::Terms(terms) => eval_terms(f, terms, FieldElem::from_index(x), FieldElem::from_index(y)).index(),
            Rule::Pair(rule) => {
                let (e, g) = rule.eval(f, self.space.split(x), self.space.split(y));
                self.space.join(e, g)
            }
            Rule::Table(t) => t[(x * self.space.n() + y) as usize],
        }
    }

    /// `x∘y` on point indices.
    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        match &self.table {
            Some(t) => t[(x as usize) * self.space.n() as usize + y as usize],
            None => self.mul_by_rule(x, y),
        }
    }

    /// Field-level product for `V = F`.
    pub fn mul_elem(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        FieldElem::from_index(self.mul(x.index(), y.index()))
    }

    pub fn descriptor(&self) -> PresemifieldDescriptor {
        let field = self.field().descriptor();
        let q = self.field().q();
        match (&self.rule, self.family) {
            (Rule::Terms(terms), Family::Derived) => PresemifieldDescriptor {
                field,
                q,
                dim: self.space.dim(),
                family: None,
                params: None,
                terms: Some(terms.iter().map(|t| TermJson::from_term(self.field(), t)).collect()),
                table: None,
            },
            (_, Family::Derived) => {
                let n = self.space.n();
                let table = (0..n).map(|x| (0..n).map(|y| self.mul(x, y)).collect()).collect();
                PresemifieldDescriptor {
                    field,
                    q,
                    dim: self.space.dim(),
                    family: None,
                    params: None,
                    terms: None,
                    table: Some(table),
                }
            }
            (_, family) => PresemifieldDescriptor {
                field,
                q,
                dim: self.space.dim(),
                family: Some(family),
                params: Some(self.params.clone()),
                terms: None,
                table: None,
            },
        }
    }
}

/// JSON coefficient term; `coeff` is a coefficient array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: Vec<u32>,
    pub i: u32,
    pub j: u32,
}

impl TermJson {
    pub fn from_term(field: &Field, t: &Term) -> Self {
        TermJson { coeff: field.coeffs(t.coeff), i: t.i, j: t.j }
    }

    pub fn to_term(&self, field: &Field) -> Result<Term> {
        Ok(Term { coeff: field.elem(&self.coeff)?, i: self.i, j: self.j })
    }
}

/// JSON form: either `{family, q, params}`, `{terms}` or `{table}`, always
/// with the field it lives over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresemifieldDescriptor {
    pub field: FieldDescriptor,
    pub q: u32,
    /// 1 for `V = F`, 2 for `V = F ⊕ F`.
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<u32>>>,
}

impl PresemifieldDescriptor {
    pub fn build(&self) -> Result<Presemifield> {
        let fd = &self.field;
        let field = crate::ff::make_field(fd.p, fd.r, Some(&fd.modulus))?;
        if field.q() != self.q {
            return Err(Error::Schema(format!("q = {} does not match the field order {}", self.q, field.q())));
        }
        match (&self.family, &self.terms, &self.table) {
            (Some(family), None, None) => catalog(&field, *family, self.params.as_ref().unwrap_or(&Params::default())),
            (None, Some(terms), None) => {
                let terms = terms.iter().map(|t| t.to_term(&field)).collect::<Result<Vec<_>>>()?;
                Presemifield::from_terms(&field, &terms, "imported")
            }
            (None, None, Some(rows)) => {
                let space = VecSpace::new(field, self.dim)?;
                let n = space.n() as usize;
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Schema(format!("table must be {n}×{n}")));
                }
                Presemifield::from_table(space, rows.concat(), "imported")
            }
            _ => Err(Error::Schema("exactly one of family, terms or table is required".into())),
        }
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Parameter(msg()))
    }
}

/// `k` for `ρ = x^(p^k)`: nontrivial, and `F` of odd degree over the fixed
/// field of `ρ`.
fn twist_exponent(field: &Field, params: &Params) -> Result<u32> {
    let r = field.r() as u32;
    let k = params.k.unwrap_or(1);
    check(!k.is_multiple_of(r), || format!("ρ = x^({}^{k}) is the identity on GF({})", field.p(), field.q()))?;
    let g = gcd(k % r, r);
    check((r / g) % 2 == 1, || {
        format!("GF({}) has even degree {} over the fixed field of ρ = x^({}^{k})", field.q(), r / g, field.p())
    })?;
    Ok(k % r)
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn nonsquare(field: &Field, params: &Params) -> Result<FieldElem> {
    match &params.j {
        None => field.first_nonsquare(),
        Some(c) => {
            let j = field.elem(c)?;
            check(!j.is_zero() && !field.is_square(j)?, || format!("j = {c:?} is not a nonsquare"))?;
            Ok(j)
        }
    }
}

/// The cataloged product of the given family over `field`.
pub fn catalog(field: &Field, family: Family, params: &Params) -> Result<Presemifield> {
    let p = field.p();
    let r = field.r() as u32;
    let q = field.q();
    let one = field.one();
    let odd = || check(p != 2, || format!("{family} needs odd q, got q = {q}"));
    let mut used = Params::default();
    let (rule, label) = match family {
        Family::Field => (Rule::Terms(vec![Term::new(one, 0, 0)]), format!("field q={q}")),
        Family::Albert | Family::AlbertSymplectic | Family::Bkla => {
            odd()?;
            let k = twist_exponent(field, params)?;
            used.k = Some(k);
            let half = field.half()?;
            let terms = match family {
                Family::Albert => vec![Term::new(half, k, 0), Term::new(half, 0, k)],
                Family::AlbertSymplectic => vec![Term::new(half, k, 0), Term::new(half, r - k, r - k)],
                _ => vec![Term::new(one, r - k, 0), Term::new(one, k, k)],
            };
            (Rule::Terms(canonical_terms(field, &terms)), format!("{family} q={q} rho=p^{k}"))
        }
        Family::Dickson | Family::Knuth => {
            odd()?;
            let k = params.k.unwrap_or(1);
            check(!k.is_multiple_of(r), || format!("σ = x^({p}^{k}) must be nontrivial on GF({q})"))?;
            let j = nonsquare(field, params)?;
            used.k = Some(k % r);
            used.j = Some(field.coeffs(j));
            let j_aux = field.frobenius_pow(j, -i64::from(k));
            let rule = PairRule { family, k: i64::from(k % r), j, j_aux, reading: PwReading::default() };
            (Rule::Pair(rule), format!("{family} q={q} sigma=p^{}", k % r))
        }
        Family::CohenGanley | Family::ThasPayne => {
            check(p == 3 && r >= 2, || format!("{family} needs q = 3^r >= 9, got q = {q}"))?;
            let j = nonsquare(field, params)?;
            used.j = Some(field.coeffs(j));
            let j_aux = if family == Family::CohenGanley { field.pow(j, 3) } else { field.frobenius_pow(j, -1) };
            let rule = PairRule { family, k: 0, j, j_aux, reading: PwReading::default() };
            (Rule::Pair(rule), format!("{family} q={q}"))
        }
        Family::Ganley | Family::GanleySymplectic => {
            check(p == 3 && r >= 3 && r % 2 == 1, || format!("{family} needs q = 3^t with t >= 3 odd, got q = {q}"))?;
            let rule = PairRule { family, k: 0, j: one, j_aux: one, reading: PwReading::default() };
            (Rule::Pair(rule), format!("{family} q={q}"))
        }
        Family::PenttilaWilliams | Family::PenttilaWilliamsCommutative => {
            check(p == 3 && r == 5, || format!("{family} is only defined for q = 3^5, got q = {q}"))?;
            let reading = params.reading.unwrap_or_else(|| PwReading::verbatim(family));
            used.reading = Some(reading);
            let rule = PairRule { family, k: 0, j: one, j_aux: one, reading };
            (Rule::Pair(rule), format!("{family} q={q} reading={}", reading.label(family)))
        }
        Family::Derived => return Err(Error::Parameter("derived products are not in the catalog".into())),
    };
    let dim = if family.is_pair() { 2 } else { 1 };
    Ok(Presemifield::build(VecSpace::new(field.clone(), dim)?, family, used, label, rule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    #[test]
    fn canonical_terms_merge_and_reduce() {
        let f = make_field(3, 2, None).unwrap();
        let one = f.one();
        // (2, 0) and (0, 2) both reduce to (0, 0) when r = 2; 1 + 1 + 1 = 0.
        let t = canonical_terms(&f, &[Term::new(one, 2, 0), Term::new(one, 0, 0), Term::new(one, 0, 2)]);
        assert!(t.is_empty());
        let t = canonical_terms(&f, &[Term::new(one, 1, 0), Term::new(one, 3, 2)]);
        assert_eq!(t, vec![Term::new(f.from_prime(2), 1, 0)]);
    }

    #[test]
    fn parameter_constraints() {
        let f9 = make_field(3, 2, None).unwrap();
        // ρ = x^3 on GF(9) fixes GF(3) and GF(9) has even degree 2 over it.
        let err = catalog(&f9, Family::Albert, &Params::default()).unwrap_err();
        assert!(err.to_string().contains("even degree"), "{err}");
        let f27 = make_field(3, 3, None).unwrap();
        assert!(catalog(&f27, Family::Albert, &Params { k: Some(3), ..Params::default() }).is_err());
        assert!(catalog(&f9, Family::Ganley, &Params::default()).is_err());
        assert!(catalog(&f27, Family::PenttilaWilliams, &Params::default()).is_err());
        let f3 = make_field(3, 1, None).unwrap();
        assert!(catalog(&f3, Family::Dickson, &Params::default()).is_err());
        let f4 = make_field(2, 2, None).unwrap();
        assert!(catalog(&f4, Family::Knuth, &Params::default()).is_err());
        let square = Params { j: Some(vec![1]), ..Params::default() };
        assert!(catalog(&f9, Family::Dickson, &square).is_err());
    }

    #[test]
    fn field_product_is_multiplication() {
        let f = make_field(3, 2, None).unwrap();
        let s = catalog(&f, Family::Field, &Params::default()).unwrap();
        for x in f.elements() {
            for y in f.elements() {
                assert_eq!(s.mul_elem(x, y), f.mul(x, y));
            }
        }
        assert!(s.is_commutative() && s.is_symplectic());
    }

    #[test]
    fn albert_symplectic_formula() {
        let f = make_field(3, 3, None).unwrap();
        let s = catalog(&f, Family::AlbertSymplectic, &Params::default()).unwrap();
        let half = f.half().unwrap();
        for x in f.elements() {
            for y in f.elements() {
                let want = f.mul(
                    half,
                    f.add(
                        f.mul(f.pow(x, 3), y),
                        f.mul(f.frobenius_pow(x, -1), f.frobenius_pow(y, -1)),
                    ),
                );
                assert_eq!(s.mul_elem(x, y), want);
            }
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let f = make_field(3, 2, None).unwrap();
        for family in [Family::Dickson, Family::Knuth, Family::Field] {
            let s = catalog(&f, family, &Params::default()).unwrap();
            let json = serde_json::to_string(&s.descriptor()).unwrap();
            let back: PresemifieldDescriptor = serde_json::from_str(&json).unwrap();
            let t = back.build().unwrap();
            let n = s.space().n();
            assert!((0..n).all(|x| (0..n).all(|y| s.mul(x, y) == t.mul(x, y))));
        }
    }
}
