//! Symplectic spreads of `W = V ⊕ V` over the prime field.
//!
//! A point of `W` is the pair `(u, v)` of [`VecSpace`] indices, packed as
//! `u + n·v` with `n = |V|`. Read in base `p`, the packed index is the
//! coordinate vector: the `r'` digits of `u` followed by those of `v`.
//! Subspaces are stored by their reduced row-echelon basis, so two spreads
//! are equal exactly when their sorted member lists are.

mod autom;
mod bblp;
mod slope;
mod suzuki;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{gfp, make_field, Field, FieldDescriptor, VecSpace};
use crate::semifield::Presemifield;

pub use autom::{automorphism_order, automorphism_order_backtrack, automorphism_order_matrices, AutomorphismCount};
pub use bblp::{bblp_beta, bblp_by_list, bblp_by_surgery, bblp_spread, bkla_orbits, sigma, tau, Beta};
pub use slope::{slope_closure_test, SlopeReport};
pub use suzuki::{suzuki_matrix, suzuki_spread};

/// Coverage is checked point by point up to this many points of `W`.
pub const BITSET_LIMIT: u64 = 1 << 24;
/// Beyond the bitset limit, all member pairs are intersected up to this many
/// pairs; more than that and a seeded sample is used.
pub const PAIRWISE_LIMIT: u64 = 2_000_000;
pub const DEFAULT_PAIR_SAMPLES: u64 = 100_000;

/// `W = V ⊕ V` with the form `⟨(u,v),(u',v')⟩ = tr(u·v' − v·u')`.
#[derive(Clone, Debug)]
pub struct SymplecticSpace {
    v: VecSpace,
}

impl SymplecticSpace {
    pub fn new(v: VecSpace) -> Self {
        SymplecticSpace { v }
    }

    pub fn field(&self) -> &Field {
        self.v.field()
    }

    pub fn p(&self) -> u32 {
        self.v.field().p()
    }

    pub fn v(&self) -> &VecSpace {
        &self.v
    }

    /// `|V|`.
    pub fn n(&self) -> u64 {
        u64::from(self.v.n())
    }

    /// `r'`, the dimension of `V` over GF(p).
    pub fn half_dim(&self) -> usize {
        self.v.prime_dim()
    }

    /// `2r'`.
    pub fn dim(&self) -> usize {
        2 * self.v.prime_dim()
    }

    /// `|W|`.
    pub fn size(&self) -> u64 {
        self.n() * self.n()
    }

    #[inline]
    pub fn point(&self, u: u32, v: u32) -> u64 {
        u64::from(u) + self.n() * u64::from(v)
    }

    #[inline]
    pub fn split(&self, z: u64) -> (u32, u32) {
        ((z % self.n()) as u32, (z / self.n()) as u32)
    }

    pub fn digits(&self, z: u64) -> Vec<u8> {
        let (u, v) = self.split(z);
        let mut d = self.v.digits(u);
        d.extend(self.v.digits(v));
        d
    }

    pub fn from_digits(&self, d: &[u8]) -> u64 {
        let p = u64::from(self.p());
        d.iter().rev().fold(0u64, |acc, &x| acc * p + u64::from(x))
    }

    pub fn add(&self, z1: u64, z2: u64) -> u64 {
        let (u1, v1) = self.split(z1);
        let (u2, v2) = self.split(z2);
        self.point(self.v.add(u1, u2), self.v.add(v1, v2))
    }

    /// The form as a residue mod `p`.
    #[inline]
    pub fn form(&self, z1: u64, z2: u64) -> u32 {
        let p = self.p();
        let (u1, v1) = self.split(z1);
        let (u2, v2) = self.split(z2);
        (self.v.trace_dot(u1, v2) + p - self.v.trace_dot(v1, u2)) % p
    }

    pub fn form_rows(&self, a: &[u8], b: &[u8]) -> u32 {
        self.form(self.from_digits(a), self.from_digits(b))
    }
}

/// A subspace of `W` in reduced row-echelon form over GF(p).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subspace {
    rows: Vec<Vec<u8>>,
}

impl Subspace {
    /// Spans the given rows; dependent rows are dropped.
    pub fn span(mut rows: Vec<Vec<u8>>, p: u32) -> Self {
        gfp::rref(&mut rows, p);
        Subspace { rows }
    }

    pub fn from_points(space: &SymplecticSpace, points: impl IntoIterator<Item = u64>) -> Self {
        Self::span(points.into_iter().map(|z| space.digits(z)).collect(), space.p())
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis_points(&self, space: &SymplecticSpace) -> Vec<u64> {
        self.rows.iter().map(|r| space.from_digits(r)).collect()
    }

    /// Image under a linear map given on points.
    pub fn map(&self, space: &SymplecticSpace, f: impl Fn(u64) -> u64) -> Self {
        Self::from_points(space, self.basis_points(space).into_iter().map(f))
    }

    /// Calls `visit` on every nonzero point of the subspace.
    pub fn for_each_nonzero(&self, space: &SymplecticSpace, mut visit: impl FnMut(u64)) {
        let p = space.p() as u8;
        let d = self.rows.len();
        let width = space.dim();
        let mut coeff = vec![0u8; d];
        let mut acc = vec![0u8; width];
        loop {
            // Odometer step: bumping coefficient k adds row k once more, and
            // a wrap from p-1 to 0 is also one more copy of row k.
            let mut k = 0;
            loop {
                if k == d {
                    return;
                }
                for (a, &b) in acc.iter_mut().zip(&self.rows[k]) {
                    *a = (*a + b) % p;
                }
                coeff[k] += 1;
                if coeff[k] < p {
                    break;
                }
                coeff[k] = 0;
                k += 1;
            }
            visit(space.from_digits(&acc));
        }
    }

    pub fn contains(&self, space: &SymplecticSpace, z: u64) -> bool {
        let mut rows = self.rows.clone();
        rows.push(space.digits(z));
        gfp::rref(&mut rows, space.p()) == self.rows.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "label", rename_all = "kebab-case")]
pub enum Provenance {
    Presemifield(String),
    Bblp,
    Suzuki,
    External,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Presemifield(l) => write!(f, "presemifield {l}"),
            Provenance::Bblp => f.write_str("bblp"),
            Provenance::Suzuki => f.write_str("suzuki"),
            Provenance::External => f.write_str("external"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Spread {
    space: SymplecticSpace,
    members: Vec<Subspace>,
    provenance: Provenance,
}

impl Spread {
    pub fn new(space: SymplecticSpace, members: Vec<Subspace>, provenance: Provenance) -> Self {
        Spread { space, members, provenance }
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Members sorted by their echelon bases.
    pub fn canonical_members(&self) -> Vec<Subspace> {
        let mut m = self.members.clone();
        m.sort();
        m
    }

    pub fn same_members(&self, other: &Spread) -> bool {
        self.canonical_members() == other.canonical_members()
    }

    /// Index of each member by its echelon basis.
    pub fn member_index(&self) -> HashMap<Subspace, usize> {
        self.members.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
    }

    pub fn to_json(&self) -> SpreadJson {
        SpreadJson {
            p: self.space.p(),
            r_prime: self.space.half_dim(),
            form: "eq1".into(),
            field: self.space.field().descriptor(),
            v_dim: self.space.v().dim(),
            provenance: Some(self.provenance.clone()),
            members: self.members.iter().map(|m| m.rows.clone()).collect(),
        }
    }

    /// Imports a spread. Rows are re-reduced and the result is tagged
    /// external whatever the file claims.
    pub fn from_json(j: &SpreadJson) -> Result<Self> {
        let f = &j.field;
        if j.form != "eq1" {
            return Err(Error::Schema(format!("unknown form {:?}", j.form)));
        }
        if f.p != j.p {
            return Err(Error::Schema(format!("p = {} does not match the field characteristic {}", j.p, f.p)));
        }
        let field = make_field(f.p, f.r, Some(&f.modulus))?;
        let space = SymplecticSpace::new(VecSpace::new(field, j.v_dim)?);
        if space.half_dim() != j.r_prime {
            return Err(Error::Schema(format!("r' = {} but V has dimension {} over GF(p)", j.r_prime, space.half_dim())));
        }
        let width = space.dim();
        let mut members = Vec::with_capacity(j.members.len());
        for rows in &j.members {
            if let Some(bad) = rows.iter().find(|r| r.len() != width || r.iter().any(|&d| u32::from(d) >= j.p)) {
                return Err(Error::Schema(format!("row {bad:?} is not a vector of GF({})^{width}", j.p)));
            }
            members.push(Subspace::span(rows.clone(), j.p));
        }
        Ok(Spread::new(space, members, Provenance::External))
    }
}

/// JSON spread: `{p, r_prime, form: "eq1", field, v_dim, members}`, each
/// member a list of row vectors over GF(p) of length `2r'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadJson {
    pub p: u32,
    pub r_prime: usize,
    pub form: String,
    /// The trace in the form depends on the field, so it travels along.
    pub field: FieldDescriptor,
    pub v_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    pub members: Vec<Vec<Vec<u8>>>,
}

/// Members `{(x, x∘y)}` for every `y ∈ V`, then `(0, V)`.
pub fn spread_from_presemifield(s: &Presemifield) -> Spread {
    let space = SymplecticSpace::new(s.space().clone());
    let v = s.space();
    let d = v.prime_dim();
    let basis: Vec<u32> = (0..d).map(|t| v.unit(t)).collect();
    let mut members: Vec<Subspace> = (0..v.n())
        .into_par_iter()
        .map(|y| Subspace::from_points(&space, basis.iter().map(|&e| space.point(e, s.mul(e, y)))))
        .collect();
    members.push(Subspace::from_points(&space, basis.iter().map(|&e| space.point(0, e))));
    Spread::new(space, members, Provenance::Presemifield(s.label().to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum CoverageMode {
    /// Every nonzero point of `W` marked in a bitset.
    Bitset,
    /// Every pair of members intersected by rank.
    Pairwise,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropyWitness {
    pub member: usize,
    pub a: Vec<u8>,
    pub b: Vec<u8>,
    pub value: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadReport {
    pub provenance: String,
    pub members: usize,
    pub expected_members: u64,
    /// First member whose dimension is not `r'`.
    pub dimension_failure: Option<usize>,
    pub coverage: CoverageMode,
    /// Two members sharing a nonzero point.
    pub overlap: Option<(usize, usize)>,
    /// Distinct nonzero points found (bitset mode only).
    pub covered_points: Option<u64>,
    pub symplectic_checked: bool,
    pub isotropy_failure: Option<IsotropyWitness>,
    pub passed: bool,
}

fn find_overlap_pair(sp: &Spread, z: u64) -> (usize, usize) {
    let hits: Vec<usize> = (0..sp.members.len()).filter(|&i| sp.members[i].contains(&sp.space, z)).take(2).collect();
    (hits[0], hits.get(1).copied().unwrap_or(hits[0]))
}

fn pair_meets(sp: &Spread, i: usize, j: usize) -> bool {
    let mut rows = sp.members[i].rows.clone();
    rows.extend(sp.members[j].rows.iter().cloned());
    gfp::rref(&mut rows, sp.space.p()) < sp.members[i].dim() + sp.members[j].dim()
}

/// Dimension, member count and trivial pairwise intersection.
pub fn is_spread(sp: &Spread) -> SpreadReport {
    is_spread_with(sp, DEFAULT_PAIR_SAMPLES, 0)
}

pub fn is_spread_with(sp: &Spread, samples: u64, seed: u64) -> SpreadReport {
    let space = &sp.space;
    let m = sp.members.len();
    let expected = space.n() + 1;
    let dimension_failure = sp.members.iter().position(|s| s.dim() != space.half_dim());
    let mut report = SpreadReport {
        provenance: sp.provenance.to_string(),
        members: m,
        expected_members: expected,
        dimension_failure,
        coverage: CoverageMode::Bitset,
        overlap: None,
        covered_points: None,
        symplectic_checked: false,
        isotropy_failure: None,
        passed: false,
    };
    let size = space.size();
    if size <= BITSET_LIMIT {
        let bits: Vec<AtomicU64> = (0..size.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
        let repeated = sp.members.par_iter().find_map_any(|s| {
            let mut hit = None;
            s.for_each_nonzero(space, |z| {
                let mask = 1u64 << (z % 64);
                if hit.is_none() && bits[(z / 64) as usize].fetch_or(mask, Ordering::Relaxed) & mask != 0 {
                    hit = Some(z);
                }
            });
            hit
        });
        report.overlap = repeated.map(|z| find_overlap_pair(sp, z));
        let covered: u64 = bits.iter().map(|b| u64::from(b.load(Ordering::Relaxed).count_ones())).sum();
        report.covered_points = Some(covered);
        report.passed = dimension_failure.is_none() && report.overlap.is_none() && covered == size - 1;
    } else {
        let pairs = (m as u64) * (m as u64).saturating_sub(1) / 2;
        report.overlap = if pairs <= PAIRWISE_LIMIT {
            report.coverage = CoverageMode::Pairwise;
            (0..m).into_par_iter().find_map_first(|i| ((i + 1)..m).find(|&j| pair_meets(sp, i, j)).map(|j| (i, j)))
        } else {
            report.coverage = CoverageMode::Sampled { samples, seed };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let picks: Vec<(usize, usize)> = (0..samples)
                .map(|_| {
                    let i = rng.gen_range(0..m);
                    let j = (i + rng.gen_range(1..m)) % m;
                    (i.min(j), i.max(j))
                })
                .collect();
            picks.into_par_iter().find_first(|&(i, j)| pair_meets(sp, i, j))
        };
        // With the right count and dimensions, trivial intersections force
        // (n+1)(n-1) = n²-1 distinct nonzero points.
        report.passed = dimension_failure.is_none() && report.overlap.is_none() && m as u64 == expected;
    }
    report
}

/// [`is_spread`] plus total isotropy of every member, checked on basis pairs.
pub fn is_symplectic(sp: &Spread) -> SpreadReport {
    is_symplectic_with(sp, DEFAULT_PAIR_SAMPLES, 0)
}

pub fn is_symplectic_with(sp: &Spread, samples: u64, seed: u64) -> SpreadReport {
    let mut report = is_spread_with(sp, samples, seed);
    report.symplectic_checked = true;
    report.isotropy_failure = isotropy_failure(sp);
    report.passed &= report.isotropy_failure.is_none();
    report
}

pub fn isotropy_failure(sp: &Spread) -> Option<IsotropyWitness> {
    let space = &sp.space;
    sp.members.par_iter().enumerate().find_map_first(|(k, s)| {
        let rows = s.rows();
        for a in 0..rows.len() {
            for b in (a + 1)..rows.len() {
                let value = space.form_rows(&rows[a], &rows[b]);
                if value != 0 {
                    return Some(IsotropyWitness { member: k, a: rows[a].clone(), b: rows[b].clone(), value });
                }
            }
        }
        None
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semifield::{catalog, Family, Params};

    fn field_spread(p: u32, r: usize) -> Spread {
        let f = make_field(p, r, None).unwrap();
        spread_from_presemifield(&catalog(&f, Family::Field, &Params::default()).unwrap())
    }

    #[test]
    fn form_is_alternating_and_nondegenerate() {
        for (p, r) in [(2, 2), (3, 1), (3, 2), (5, 1)] {
            let f = make_field(p, r, None).unwrap();
            let w = SymplecticSpace::new(VecSpace::new(f, 1).unwrap());
            for z in 0..w.size() {
                assert_eq!(w.form(z, z), 0);
                if z != 0 {
                    assert!((0..w.size()).any(|z2| w.form(z, z2) != 0));
                }
            }
        }
    }

    #[test]
    fn desarguesian_gf3() {
        let sp = field_spread(3, 1);
        assert_eq!(sp.members().len(), 4);
        let rep = is_symplectic(&sp);
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.covered_points, Some(8));
    }

    #[test]
    fn odometer_visits_every_nonzero_point_once() {
        let sp = field_spread(3, 2);
        let mut seen = Vec::new();
        sp.members()[5].for_each_nonzero(sp.space(), |z| seen.push(z));
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn planted_non_isotropic_member() {
        let mut sp = field_spread(3, 2);
        // Contains (1, 0) and (0, 1), whose form value is tr(1) = 2.
        let bad = Subspace::span(vec![vec![1, 0, 0, 0], vec![0, 0, 1, 0]], 3);
        sp.members[1] = bad;
        let rep = is_symplectic(&sp);
        assert!(!rep.passed);
        let w = rep.isotropy_failure.expect("witness");
        assert_eq!(w.member, 1);
        assert_ne!(sp.space().form_rows(&w.a, &w.b), 0);
    }

    #[test]
    fn duplicate_member_reports_overlap() {
        let mut sp = field_spread(3, 1);
        sp.members[2] = sp.members[1].clone();
        let rep = is_spread(&sp);
        assert!(!rep.passed);
        assert_eq!(rep.overlap, Some((1, 2)));
    }

    #[test]
    fn json_round_trip() {
        let sp = field_spread(2, 3);
        let j = serde_json::to_string(&sp.to_json()).unwrap();
        let back = Spread::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert!(back.same_members(&sp));
        assert_eq!(back.provenance(), &Provenance::External);
    }
}
