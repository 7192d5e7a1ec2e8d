//! Complete sets of mutually unbiased bases as exponent tables.
//!
//! A vector of an exponent basis is `Σ_w ζ^(e[w]) e_w`, unnormalized, with
//! `ζ` of order `m` (`m = p` for odd `p`, `m = 4` for `p = 2`). Every
//! construction here has exponents of the form `Q[w] + c·tr(v·w)` for the
//! vector indexed by `v ∈ V`, with `c = 1` for odd `p` and `c = 2` for
//! `p = 2`. A basis is therefore stored by its row `Q` alone, computed
//! eagerly or, for very large `n`, on demand.
//!
//! Verification is exact: inner products are exponent histograms, i.e.
//! elements of `Z[ζ_m]`, and every verdict is an integer comparison.

mod build;
mod eigen;

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::{counts_abs_squared_is, counts_vanish, CycloInt};
use crate::error::{Error, Result};
use crate::ff::VecSpace;

pub use build::{
    build_bblp, build_even_commutative, build_even_symplectic, build_odd_planar, build_odd_symplectic,
    build_pseudoplanar, build_suzuki, symplectic_failure, MATERIALIZE_LIMIT,
};
pub use eigen::{check_mub_eigenvectors, EigenRule, EIGEN_DEFAULT_SAMPLES, EIGEN_FULL_LIMIT};

/// Full verification up to this `n`; sampled beyond.
pub const FULL_LIMIT: u32 = 100;
pub const DEFAULT_SAMPLES: u64 = 100_000;

type RowFn = dyn Fn() -> Vec<u32> + Send + Sync;

#[derive(Clone)]
pub enum BasisData {
    /// `{e_w}`.
    Standard,
    /// The row `Q`; vector `v` is `Q[w] + c·tr(v·w)`.
    Quadratic(Arc<Vec<u32>>),
    /// Explicit `n×n` exponents, row `v`, column `w`.
    Table(Arc<Vec<u32>>),
    /// `Q` computed on every access.
    Lazy(Arc<RowFn>),
}

impl fmt::Debug for BasisData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisData::Standard => "Standard",
            BasisData::Quadratic(_) => "Quadratic",
            BasisData::Table(_) => "Table",
            BasisData::Lazy(_) => "Lazy",
        })
    }
}

#[derive(Clone, Debug)]
pub struct MubBasis {
    pub label: String,
    pub data: BasisData,
    /// Parameter of the basis within its construction (`m`, `c`, `s`).
    pub param: Option<u32>,
    /// `h(u)` for the spread member `{(u, h(u))}` this basis diagonalizes.
    pub slope: Option<Arc<Vec<u32>>>,
}

impl MubBasis {
    pub fn standard() -> Self {
        MubBasis { label: "inf".into(), data: BasisData::Standard, param: None, slope: None }
    }

    pub fn is_standard(&self) -> bool {
        matches!(self.data, BasisData::Standard)
    }
}

#[derive(Clone, Debug)]
pub struct MubSet {
    n: u32,
    m: u32,
    /// Needed for `Quadratic` and `Lazy` bases.
    space: Option<VecSpace>,
    bases: Vec<MubBasis>,
    provenance: String,
    eigen: Option<EigenRule>,
}

impl MubSet {
    pub fn new(n: u32, m: u32, space: Option<VecSpace>, bases: Vec<MubBasis>, provenance: impl Into<String>) -> Self {
        MubSet { n, m, space, bases, provenance: provenance.into(), eigen: None }
    }

    pub(crate) fn with_eigen(mut self, rule: EigenRule) -> Self {
        self.eigen = Some(rule);
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Order of the root of unity.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn space(&self) -> Option<&VecSpace> {
        self.space.as_ref()
    }

    pub fn bases(&self) -> &[MubBasis] {
        &self.bases
    }

    pub fn bases_mut(&mut self) -> &mut [MubBasis] {
        &mut self.bases
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn eigen_rule(&self) -> Option<&EigenRule> {
        self.eigen.as_ref()
    }

    /// `c` in `Q[w] + c·tr(v·w)`.
    fn linear_scale(&self) -> u32 {
        if self.m == 4 {
            2
        } else {
            1
        }
    }

    /// The row `Q` of a quadratic or lazy basis.
    pub fn quadratic_row(&self, b: usize) -> Option<Arc<Vec<u32>>> {
        match &self.bases[b].data {
            BasisData::Quadratic(q) => Some(q.clone()),
            BasisData::Lazy(f) => Some(Arc::new(f())),
            _ => None,
        }
    }

    fn row_from_q(&self, q: &[u32], v: u32) -> Vec<u32> {
        let s = self.space.as_ref().expect("quadratic bases need V");
        let c = self.linear_scale();
        (0..self.n).map(|w| (q[w as usize] + c * s.trace_dot(v, w)) % self.m).collect()
    }

    /// Exponents of vector `v` of basis `b`, `None` for the standard basis.
    pub fn row(&self, b: usize, v: u32) -> Option<Vec<u32>> {
        let n = self.n as usize;
        match &self.bases[b].data {
            BasisData::Standard => None,
            BasisData::Table(t) => Some(t[v as usize * n..(v as usize + 1) * n].to_vec()),
            _ => Some(self.row_from_q(&self.quadratic_row(b).expect("quadratic"), v)),
        }
    }

    /// All rows of basis `b`, `None` for the standard basis.
    pub fn table(&self, b: usize) -> Option<Vec<Vec<u32>>> {
        match &self.bases[b].data {
            BasisData::Standard => None,
            BasisData::Table(t) => Some(t.chunks(self.n as usize).map(<[u32]>::to_vec).collect()),
            _ => {
                let q = self.quadratic_row(b).expect("quadratic");
                Some((0..self.n).into_par_iter().map(|v| self.row_from_q(&q, v)).collect())
            }
        }
    }

    pub fn to_json(&self) -> MubSetJson {
        MubSetJson {
            n: self.n,
            m: self.m,
            provenance: Some(self.provenance.clone()),
            bases: (0..self.bases.len())
                .map(|b| BasisJson {
                    label: self.bases[b].label.clone(),
                    kind: if self.bases[b].is_standard() { BasisKind::Standard } else { BasisKind::Exponent },
                    table: self.table(b),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &MubSetJson) -> Result<Self> {
        if j.m != 4 && CycloInt::zero(j.m).is_err() {
            return Err(Error::Schema(format!("unsupported root order m = {}", j.m)));
        }
        let n = j.n as usize;
        let mut bases = Vec::with_capacity(j.bases.len());
        for b in &j.bases {
            let data = match (b.kind, &b.table) {
                (BasisKind::Standard, None) => BasisData::Standard,
                (BasisKind::Exponent, Some(rows)) => {
                    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                        return Err(Error::Schema(format!("basis {:?}: table must be {n}×{n}", b.label)));
                    }
                    if rows.iter().flatten().any(|&e| e >= j.m) {
                        return Err(Error::Schema(format!("basis {:?}: exponent out of range for m = {}", b.label, j.m)));
                    }
                    BasisData::Table(Arc::new(rows.concat()))
                }
                _ => return Err(Error::Schema(format!("basis {:?}: exponent bases need a table, standard ones none", b.label))),
            };
            bases.push(MubBasis { label: b.label.clone(), data, param: None, slope: None });
        }
        Ok(MubSet::new(j.n, j.m, None, bases, j.provenance.clone().unwrap_or_else(|| "imported".into())))
    }

    /// Dense complex entries, one line per coordinate. Floating point, for
    /// interoperability only.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "# floating-point values are not authoritative; the exponent JSON is")?;
        writeln!(out, "basis,vector,coordinate,re,im")?;
        let norm = 1.0 / f64::from(self.n).sqrt();
        let m = f64::from(self.m);
        for b in 0..self.bases.len() {
            let label = &self.bases[b].label;
            for v in 0..self.n {
                match self.row(b, v) {
                    None => {
                        for w in 0..self.n {
                            writeln!(out, "{label},{v},{w},{},0", if w == v { 1.0 } else { 0.0 })?;
                        }
                    }
                    Some(row) => {
                        for (w, &e) in row.iter().enumerate() {
                            let t = std::f64::consts::TAU * f64::from(e) / m;
                            writeln!(out, "{label},{v},{w},{:.17e},{:.17e}", norm * t.cos(), norm * t.sin())?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    Standard,
    Exponent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisJson {
    pub label: String,
    pub kind: BasisKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<u32>>>,
}

/// `{n, m, bases: [{label, kind, table}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MubSetJson {
    pub n: u32,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub bases: Vec<BasisJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum VerifyMode {
    Full,
    Sampled { samples: u64, seed: u64 },
}

impl VerifyMode {
    /// Full for `n ≤ 100`, otherwise `10^5` pairs with seed 0.
    pub fn auto(n: u32) -> Self {
        if n <= FULL_LIMIT {
            VerifyMode::Full
        } else {
            VerifyMode::Sampled { samples: DEFAULT_SAMPLES, seed: 0 }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MubWitness {
    pub basis_a: usize,
    pub vector_a: u32,
    pub basis_b: usize,
    pub vector_b: u32,
    /// What was computed: the inner product for same-basis pairs, its
    /// squared modulus otherwise.
    pub value: String,
    pub expected: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub provenance: String,
    pub n: u32,
    pub m: u32,
    pub bases: usize,
    /// `n + 1` bases.
    pub complete: bool,
    pub mode: VerifyMode,
    pub orthogonality_checks: u64,
    pub unbiasedness_checks: u64,
    pub failures: u64,
    /// The first few failures in a deterministic order.
    pub witnesses: Vec<MubWitness>,
    /// Distinct integer values certified: `0` for orthogonal pairs, `n` for
    /// norms and for `n·|⟨x, y⟩|²` across bases (normalized so that
    /// standard vectors count like exponent vectors).
    pub certificates: Vec<i64>,
    pub passed: bool,
}

const MAX_WITNESSES: usize = 8;

#[derive(Default)]
struct Tally {
    orth: u64,
    unb: u64,
    failures: u64,
    witnesses: Vec<MubWitness>,
    certs: BTreeSet<i64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.orth += other.orth;
        self.unb += other.unb;
        self.failures += other.failures;
        self.witnesses.extend(other.witnesses);
        self.witnesses.truncate(MAX_WITNESSES);
        self.certs.extend(other.certs);
        self
    }

    fn fail(&mut self, w: MubWitness) {
        self.failures += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }
}

enum Vector<'a> {
    Unit(u32),
    Exp(&'a [u32]),
}

/// Checks one pair of vectors. Same basis: orthogonality (or norm `n` when
/// it is the same vector). Different bases: `n·|⟨x,y⟩|²` scaled to `n`.
fn check_pair(n: u32, m: u32, a: (usize, u32, Vector), b: (usize, u32, Vector), counts: &mut [u64], t: &mut Tally) {
    let same_basis = a.0 == b.0;
    let witness = |value: String, expected: i64| MubWitness {
        basis_a: a.0,
        vector_a: a.1,
        basis_b: b.0,
        vector_b: b.1,
        value,
        expected,
    };
    let n64 = i64::from(n);
    match (&a.2, &b.2) {
        (Vector::Unit(x), Vector::Unit(y)) => {
            if same_basis {
                t.orth += 1;
                let value = i64::from(x == y);
                if value != i64::from(a.1 == b.1) {
                    t.fail(witness(value.to_string(), i64::from(a.1 == b.1)));
                }
            } else {
                // Two standard bases: |⟨e_x, e_y⟩|² is 0 or 1, never 1/n.
                t.unb += 1;
                t.fail(witness(format!("{}", i64::from(x == y)), n64));
            }
        }
        (Vector::Unit(w), Vector::Exp(row)) | (Vector::Exp(row), Vector::Unit(w)) => {
            t.unb += 1;
            let e = row[*w as usize];
            // |ζ^e|² = 1 for every valid residue e.
            if e < m {
                t.certs.insert(n64);
            } else {
                t.fail(witness(format!("exponent {e} out of range"), n64));
            }
        }
        (Vector::Exp(x), Vector::Exp(y)) => {
            counts.iter_mut().for_each(|c| *c = 0);
            // Entries are residues mod m, so one conditional subtraction reduces.
            for (&ex, &ey) in x.iter().zip(y.iter()) {
                let d = ey + m - ex;
                counts[(if d >= m { d - m } else { d }) as usize] += 1;
            }
            if same_basis {
                t.orth += 1;
                if a.1 == b.1 {
                    // ⟨x, x⟩ = n: the only exponent difference is 0.
                    if counts[0] == u64::from(n) {
                        t.certs.insert(n64);
                    } else {
                        t.fail(witness(CycloInt::from_counts(m, counts).unwrap().to_string(), n64));
                    }
                } else if counts_vanish(m, counts) {
                    t.certs.insert(0);
                } else {
                    t.fail(witness(CycloInt::from_counts(m, counts).unwrap().to_string(), 0));
                }
            } else {
                t.unb += 1;
                if counts_abs_squared_is(m, counts, n64) {
                    t.certs.insert(n64);
                } else {
                    let s = CycloInt::from_counts(m, counts).unwrap().abs_squared();
                    t.fail(witness(s.to_string(), n64));
                }
            }
        }
    }
}

/// Exact verification: orthonormality within each basis and unbiasedness
/// across bases.
pub fn verify_mub(ms: &MubSet, mode: VerifyMode) -> VerificationReport {
    let tally = match mode {
        VerifyMode::Full => verify_full(ms),
        VerifyMode::Sampled { samples, seed } => verify_sampled(ms, samples, seed),
    };
    let bases = ms.bases.len();
    VerificationReport {
        provenance: ms.provenance.clone(),
        n: ms.n,
        m: ms.m,
        bases,
        complete: bases as u64 == u64::from(ms.n) + 1,
        mode,
        orthogonality_checks: tally.orth,
        unbiasedness_checks: tally.unb,
        failures: tally.failures,
        witnesses: tally.witnesses,
        certificates: tally.certs.into_iter().collect(),
        passed: tally.failures == 0 && bases as u64 == u64::from(ms.n) + 1,
    }
}

fn vector<'a>(tables: &'a [Option<Vec<Vec<u32>>>], b: usize, v: u32) -> Vector<'a> {
    match &tables[b] {
        None => Vector::Unit(v),
        Some(t) => Vector::Exp(&t[v as usize]),
    }
}

fn verify_full(ms: &MubSet) -> Tally {
    let (n, m) = (ms.n, ms.m);
    let nb = ms.bases.len();
    let tables: Vec<Option<Vec<Vec<u32>>>> = (0..nb).map(|b| ms.table(b)).collect();
    let pairs: Vec<(usize, usize)> = (0..nb).flat_map(|a| (a..nb).map(move |b| (a, b))).collect();
    pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut t = Tally::default();
            let mut counts = vec![0u64; m as usize];
            for x in 0..n {
                let start = if a == b { x } else { 0 };
                for y in start..n {
                    check_pair(n, m, (a, x, vector(&tables, a, x)), (b, y, vector(&tables, b, y)), &mut counts, &mut t);
                }
            }
            t
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge)
}

fn verify_sampled(ms: &MubSet, samples: u64, seed: u64) -> Tally {
    let (n, m) = (ms.n, ms.m);
    let nb = ms.bases.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<(usize, u32, usize, u32)> = (0..samples)
        .map(|_| {
            let (a, b) = (rng.gen_range(0..nb), rng.gen_range(0..nb));
            let x = rng.gen_range(0..n);
            let mut y = rng.gen_range(0..n);
            while a == b && x == y && n > 1 {
                y = rng.gen_range(0..n);
            }
            (a, x, b, y)
        })
        .collect();
    picks
        .par_iter()
        .map(|&(a, x, b, y)| {
            let mut t = Tally::default();
            let mut counts = vec![0u64; m as usize];
            let (ra, rb) = (ms.row(a, x), ms.row(b, y));
            let va = ra.as_deref().map_or(Vector::Unit(x), Vector::Exp);
            let vb = rb.as_deref().map_or(Vector::Unit(y), Vector::Exp);
            check_pair(n, m, (a, x, va), (b, y, vb), &mut counts, &mut t);
            t
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge)
}

/// Canonical form for [`compare_mub_sets`]: the standard basis first, each
/// exponent row shifted so its first entry is 0, rows sorted, then bases
/// sorted.
pub fn canonical_tables(ms: &MubSet) -> (usize, Vec<Vec<Vec<u32>>>) {
    let m = ms.m;
    let mut standard = 0;
    let mut tables: Vec<Vec<Vec<u32>>> = (0..ms.bases.len())
        .into_par_iter()
        .filter_map(|b| {
            let mut rows = ms.table(b)?;
            for row in &mut rows {
                let shift = row[0];
                row.iter_mut().for_each(|e| *e = (*e + m - shift) % m);
            }
            rows.sort_unstable();
            Some(rows)
        })
        .collect();
    standard += ms.bases.iter().filter(|b| b.is_standard()).count();
    tables.sort_unstable();
    (standard, tables)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub identical: bool,
    pub reason: Option<String>,
}

/// Equality up to global phases of vectors and the order of vectors and
/// bases. Not a test of unitary equivalence.
pub fn compare_mub_sets(a: &MubSet, b: &MubSet) -> CompareReport {
    let differ = |reason: String| CompareReport { identical: false, reason: Some(reason) };
    if a.n != b.n || a.m != b.m {
        return differ(format!("shapes differ: n = {}, m = {} vs n = {}, m = {}", a.n, a.m, b.n, b.m));
    }
    if a.bases.len() != b.bases.len() {
        return differ(format!("{} bases vs {}", a.bases.len(), b.bases.len()));
    }
    let (sa, ta) = canonical_tables(a);
    let (sb, tb) = canonical_tables(b);
    if sa != sb {
        return differ(format!("{sa} standard bases vs {sb}"));
    }
    match ta.iter().zip(&tb).position(|(x, y)| x != y) {
        None => CompareReport { identical: true, reason: None },
        Some(i) => differ(format!("canonical exponent basis {i} differs")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The qubit triple: `{e_0, e_1}`, `(1, ±1)`, `(1, ±i)`.
    pub(crate) fn qubit() -> MubSet {
        let table = |rows: &[[u32; 2]]| BasisData::Table(Arc::new(rows.concat()));
        let b = |label: &str, data| MubBasis { label: label.into(), data, param: None, slope: None };
        MubSet::new(
            2,
            4,
            None,
            vec![MubBasis::standard(), b("x", table(&[[0, 0], [0, 2]])), b("y", table(&[[0, 1], [0, 3]]))],
            "qubit",
        )
    }

    #[test]
    fn qubit_triple_verifies_with_certificates_0_and_2() {
        let rep = verify_mub(&qubit(), VerifyMode::Full);
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.certificates, vec![0, 2]);
    }

    #[test]
    fn planted_defect_is_caught() {
        let mut ms = qubit();
        ms.bases[2].data = BasisData::Table(Arc::new(vec![0, 1, 0, 2]));
        let rep = verify_mub(&ms, VerifyMode::Full);
        assert!(!rep.passed);
        assert!(!rep.witnesses.is_empty());
    }

    #[test]
    fn json_round_trip_and_compare() {
        let ms = qubit();
        let j = serde_json::to_string(&ms.to_json()).unwrap();
        let back = MubSet::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert!(compare_mub_sets(&ms, &back).identical);
        let mut swapped = back.clone();
        swapped.bases.swap(1, 2);
        assert!(compare_mub_sets(&ms, &swapped).identical);
    }

    #[test]
    fn sampled_mode_is_deterministic() {
        let ms = qubit();
        let a = verify_mub(&ms, VerifyMode::Sampled { samples: 50, seed: 7 });
        let b = verify_mub(&ms, VerifyMode::Sampled { samples: 50, seed: 7 });
        assert_eq!(a, b);
        assert!(a.passed);
    }
}
