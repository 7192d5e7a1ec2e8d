//! Eigenvector checks: each exponent basis must diagonalize the Pauli
//! operators of its spread member, with the eigenvalue given in closed form.
//! The expected eigenvalue is computed from that closed form (in `F` for odd
//! `p`, in `GR(4^r)` for `p = 2`), independently of the stored rows.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::{FieldElem, VecSpace};
use crate::gr4::{make_ring, RingCtx, RingElem};
use crate::pauli::{check_eigenvectors, EigenCase, EigenReport, PauliContext, PauliOp};
use crate::semifield::Presemifield;
use crate::spread::suzuki_matrix;

use super::{MubSet, VerifyMode};

/// Exhaustive up to this `n`.
pub const EIGEN_FULL_LIMIT: u32 = 81;
pub const EIGEN_DEFAULT_SAMPLES: u64 = 10_000;

/// Which operators a basis diagonalizes and with what eigenvalue.
#[derive(Clone, Debug)]
pub enum EigenRule {
    /// Odd `p`, member `{(u, u∘m)}`: `D_{u,u∘m} b_{m,v} = ω^(−tr(½u·(u∘m) + v·u)) b_{m,v}`.
    OddSymplectic(Box<Presemifield>),
    /// Odd `p`, member `{(u, h(u))}` with `h` stored as the basis slope; same
    /// eigenvalue with `h` in place of `u∘m`.
    Graph,
    /// `p = 2`: `D_{u,u∘m} d_{m,v} = ω^(Tr(2ûv̂ − û(û∘m̂))) d_{m,v}`.
    EvenSymplectic(Box<Presemifield>),
    /// Suzuki: `D_{u,uM_c} b_{c,v} = ω^(Tr(2v̂·û − û·ûM̂_c)) b_{c,v}`.
    Suzuki,
}

impl VerifyMode {
    /// Exhaustive for `n ≤ 81`, otherwise `10^4` triples with seed 0.
    pub fn eigen_auto(n: u32) -> Self {
        if n <= EIGEN_FULL_LIMIT {
            VerifyMode::Full
        } else {
            VerifyMode::Sampled { samples: EIGEN_DEFAULT_SAMPLES, seed: 0 }
        }
    }
}

/// The operator and the expected eigenvalue exponent for `(basis, v, u)`.
struct Oracle<'a> {
    ms: &'a MubSet,
    space: &'a VecSpace,
    ring: Option<std::sync::Arc<RingCtx>>,
}

impl Oracle<'_> {
    fn lift(&self, x: FieldElem) -> RingElem {
        self.ring.as_ref().expect("ring").teichmuller_lift(x)
    }

    fn case(&self, b: usize, v: u32, u: u32) -> Result<(PauliOp, u32)> {
        let s = self.space;
        let f = s.field();
        let basis = &self.ms.bases()[b];
        let param = basis.param.ok_or_else(|| Error::Parameter(format!("basis {} has no parameter", basis.label)))?;
        let odd = |h: u32| {
            let half = f.half().expect("odd characteristic");
            let t = f.trace(f.add(f.mul(half, s.dot(u, h)), s.dot(v, u)));
            let p = f.p();
            (PauliOp { u, v: h, k: 0 }, (p - t) % p)
        };
        match self.ms.eigen_rule().expect("rule") {
            EigenRule::OddSymplectic(sf) => Ok(odd(sf.mul(u, param))),
            EigenRule::Graph => {
                let slope = basis.slope.as_ref().ok_or_else(|| Error::Parameter(format!("basis {} has no slope", basis.label)))?;
                Ok(odd(slope[u as usize]))
            }
            EigenRule::EvenSymplectic(sf) => {
                let ring = self.ring.as_ref().expect("ring");
                let (ue, ve, me) = (FieldElem::from_index(u), FieldElem::from_index(v), FieldElem::from_index(param));
                let (uh, vh) = (self.lift(ue), self.lift(ve));
                let prod = ring.lifted_product(ue, me, sf)?;
                let x = ring.sub(ring.double(ring.mul(uh, vh)), ring.mul(uh, prod));
                Ok((PauliOp { u, v: sf.mul(u, param), k: 0 }, ring.trace(x)))
            }
            EigenRule::Suzuki => {
                let ring = self.ring.as_ref().expect("ring");
                let (alpha, beta) = s.split(param);
                let mc = suzuki_matrix(f, alpha, beta)?;
                let (u1, u2) = s.split(u);
                let (v1, v2) = s.split(v);
                let h = s.join(
                    f.add(f.mul(u1, mc[0][0]), f.mul(u2, mc[1][0])),
                    f.add(f.mul(u1, mc[0][1]), f.mul(u2, mc[1][1])),
                );
                let (u1h, u2h, v1h, v2h) = (self.lift(u1), self.lift(u2), self.lift(v1), self.lift(v2));
                let mh: Vec<RingElem> = [mc[0][0], mc[0][1], mc[1][0], mc[1][1]].iter().map(|&x| self.lift(x)).collect();
                let (add, mul) = (|a, b| ring.add(a, b), |a, b| ring.mul(a, b));
                // û·M̂_c as a row vector, then its dot product with û.
                let um1 = add(mul(u1h, mh[0]), mul(u2h, mh[2]));
                let um2 = add(mul(u1h, mh[1]), mul(u2h, mh[3]));
                let quad = add(mul(u1h, um1), mul(u2h, um2));
                let lin = ring.double(add(mul(v1h, u1h), mul(v2h, u2h)));
                Ok((PauliOp { u, v: h, k: 0 }, ring.trace(ring.sub(lin, quad))))
            }
        }
    }
}

/// Applies `D` to every claimed eigenvector (or to a seeded sample of
/// `(basis, v, u)` triples) and compares the eigenvalue with the closed form.
pub fn check_mub_eigenvectors(ms: &MubSet, mode: VerifyMode) -> Result<EigenReport> {
    let rule = ms.eigen_rule().ok_or_else(|| Error::Parameter(format!("{}: no eigenvalue formula applies", ms.provenance())))?;
    let space = ms.space().ok_or_else(|| Error::Parameter("eigenvector checks need V".into()))?;
    let ring = match rule {
        EigenRule::EvenSymplectic(_) | EigenRule::Suzuki => Some(make_ring(space.field())?),
        _ => None,
    };
    let oracle = Oracle { ms, space, ring };
    let ctx = PauliContext::new(space.clone());
    let n = ms.n();
    let label = format!("eigenvectors of {}", ms.provenance());
    let exponent_bases: Vec<usize> = (0..ms.bases().len()).filter(|&b| !ms.bases()[b].is_standard()).collect();
    let triples: Vec<(usize, u32, u32)> = match mode {
        VerifyMode::Full => exponent_bases
            .iter()
            .flat_map(|&b| (0..n).flat_map(move |v| (0..n).map(move |u| (b, v, u))))
            .collect(),
        VerifyMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut t: Vec<(usize, u32, u32)> = (0..samples)
                .map(|_| (exponent_bases[rng.gen_range(0..exponent_bases.len())], rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect();
            t.sort_unstable();
            t
        }
    };
    // Rows are shared by consecutive triples with the same (basis, v).
    let mut reports = Vec::new();
    let mut start = 0;
    while start < triples.len() {
        let (b, v, _) = triples[start];
        let end = start + triples[start..].iter().take_while(|t| (t.0, t.1) == (b, v)).count();
        let row = ms.row(b, v).expect("exponent basis");
        let cases: Vec<(PauliOp, u32)> = triples[start..end].iter().map(|&(b, v, u)| oracle.case(b, v, u)).collect::<Result<_>>()?;
        let cases: Vec<EigenCase> = cases.into_iter().map(|(op, expected)| EigenCase { op, vector: &row, expected }).collect();
        reports.push(check_eigenvectors(&ctx, &label, cases));
        start = end;
    }
    Ok(reports.into_iter().fold(
        EigenReport { label: label.clone(), cases: 0, not_eigen: 0, wrong_value: 0, first_failure: None, passed: true },
        |acc, r| EigenReport {
            label: acc.label,
            cases: acc.cases + r.cases,
            not_eigen: acc.not_eigen + r.not_eigen,
            wrong_value: acc.wrong_value + r.wrong_value,
            first_failure: acc.first_failure.or(r.first_failure),
            passed: acc.passed && r.passed,
        },
    ))
}
