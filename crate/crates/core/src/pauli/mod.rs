//! Generalized Pauli operators `ζ^k D_(u,v)`, `D_(u,v) = X(u) Z(v)`, kept
//! symbolic as `(u, v, k)`.
//!
//! Phases live in `Z_m` with `m = p` for odd `p`, where `ε = ζ_p`, and
//! `m = 4` for `p = 2`, where `ε = ζ_4² = −1`. The extra room in `Z_4` is
//! what the even-characteristic eigenvalues need. Every identity here is
//! cross-checked against [`dense::Dense`] matrices for `n ≤ 9`.

pub mod dense;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloInt;
use crate::error::{Error, Result};
use crate::ff::VecSpace;
use crate::spread::{Spread, Subspace, SymplecticSpace};

use dense::Dense;

/// Largest `n` for which dense matrices are formed.
pub const DENSE_LIMIT: u32 = 9;

/// `ζ_m^k D_(u,v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliOp {
    pub u: u32,
    pub v: u32,
    pub k: u32,
}

#[derive(Clone, Debug)]
pub struct PauliContext {
    space: VecSpace,
    m: u32,
    eps_exp: u32,
}

impl PauliContext {
    pub fn new(space: VecSpace) -> Self {
        let p = space.field().p();
        let (m, eps_exp) = if p == 2 { (4, 2) } else { (p, 1) };
        PauliContext { space, m, eps_exp }
    }

    pub fn space(&self) -> &VecSpace {
        &self.space
    }

    pub fn n(&self) -> u32 {
        self.space.n()
    }

    /// Order of the phase root `ζ`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// `ε^e` as a power of `ζ`.
    #[inline]
    pub fn eps(&self, e: u32) -> u32 {
        e * self.eps_exp % self.m
    }

    pub fn op(&self, u: u32, v: u32) -> Result<PauliOp> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::Parameter(format!("({u}, {v}) is not a point of V ⊕ V with |V| = {n}")));
        }
        Ok(PauliOp { u, v, k: 0 })
    }

    pub fn identity(&self) -> PauliOp {
        PauliOp { u: 0, v: 0, k: 0 }
    }

    /// `D_(u,v) D_(u',v') = ε^(tr(v·u')) D_(u+u', v+v')`.
    #[inline]
    pub fn compose(&self, a: &PauliOp, b: &PauliOp) -> PauliOp {
        let s = &self.space;
        PauliOp { u: s.add(a.u, b.u), v: s.add(a.v, b.v), k: (a.k + b.k + self.eps(s.trace_dot(a.v, b.u))) % self.m }
    }

    /// `D_(u,v)⁻¹ = ε^(tr(v·u)) D_(−u,−v)`, with the phase inverted.
    pub fn inverse(&self, a: &PauliOp) -> PauliOp {
        let s = &self.space;
        PauliOp { u: s.neg(a.u), v: s.neg(a.v), k: (self.m - a.k + self.eps(s.trace_dot(a.v, a.u))) % self.m }
    }

    /// `[A, B] = c·D` for the returned `(c, D)`, `D` carrying phase 0.
    pub fn commutator(&self, a: &PauliOp, b: &PauliOp) -> (CycloInt, PauliOp) {
        let ab = self.compose(a, b);
        let ba = self.compose(b, a);
        let c = &CycloInt::root(self.m, i64::from(ab.k)).unwrap() - &CycloInt::root(self.m, i64::from(ba.k)).unwrap();
        (c, PauliOp { k: 0, ..ab })
    }

    pub fn commutes(&self, a: &PauliOp, b: &PauliOp) -> bool {
        self.compose(a, b).k == self.compose(b, a).k
    }

    /// `Tr(ζ^k D_(u,v))`: `n ζ^k` at `(0, 0)`, otherwise `0`, since `Z(v)`
    /// sums a nontrivial character for `v ≠ 0`.
    pub fn trace(&self, a: &PauliOp) -> CycloInt {
        if a.u == 0 && a.v == 0 {
            &CycloInt::root(self.m, i64::from(a.k)).unwrap() * &CycloInt::integer(self.m, i64::from(self.n())).unwrap()
        } else {
            CycloInt::zero(self.m).unwrap()
        }
    }

    fn symplectic(&self) -> SymplecticSpace {
        SymplecticSpace::new(self.space.clone())
    }

    /// Exponent `λ` with `A b = ζ^λ b`, where `b = Σ ζ^(e[w]) e_w`, if `b`
    /// is an eigenvector.
    pub fn eigen_exponent(&self, a: &PauliOp, e: &[u32]) -> Option<u32> {
        let s = &self.space;
        let m = self.m;
        // (A b)[u + w] = ζ^(k + e[w] + ε-exp·tr(v·w)).
        let at = |w: u32| (a.k + e[w as usize] + self.eps(s.trace_dot(a.v, w)) + 2 * m - e[s.add(a.u, w) as usize]) % m;
        let lambda = at(0);
        (1..self.n()).all(|w| at(w) == lambda).then_some(lambda)
    }
}

fn all_ops(ctx: &PauliContext) -> impl Iterator<Item = PauliOp> + '_ {
    let n = ctx.n();
    (0..n * n).map(move |i| PauliOp { u: i % n, v: i / n, k: 0 })
}

/// Outcome of an exhaustive identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub q: u32,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
    pub passed: bool,
}

impl CheckReport {
    fn from_results(check: &str, q: u32, results: Vec<Option<String>>) -> Self {
        let failures = results.iter().filter(|r| r.is_some()).count() as u64;
        let first_failure = results.iter().flatten().next().cloned();
        CheckReport { check: check.into(), q, cases: results.len() as u64, failures, first_failure, passed: failures == 0 }
    }
}

fn require_dense(ctx: &PauliContext) -> Result<()> {
    if ctx.n() > DENSE_LIMIT {
        return Err(Error::Parameter(format!("dense oracle limited to n ≤ {DENSE_LIMIT}, got n = {}", ctx.n())));
    }
    Ok(())
}

/// Symbolic composition and trace against dense products, all pairs.
pub fn cross_validate(ctx: &PauliContext) -> Result<CheckReport> {
    require_dense(ctx)?;
    let ops: Vec<PauliOp> = all_ops(ctx).collect();
    let dense: Vec<Dense> = ops.iter().map(|a| Dense::of(ctx, a)).collect();
    let n = ops.len();
    let results = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let sym = ctx.compose(&ops[i], &ops[j]);
            let prod = dense[i].mul(&dense[j]);
            if Dense::of(ctx, &sym) != prod {
                return Some(format!("{:?}·{:?}", ops[i], ops[j]));
            }
            (i == 0 && dense[j].trace() != ctx.trace(&ops[j])).then(|| format!("trace of {:?}", ops[j]))
        })
        .collect();
    Ok(CheckReport::from_results("composition", ctx.space.field().q(), results))
}

/// `[D_(u,v), D_(u',v')] = ε^(tr(v·u')) (1 − ε^(⟨(u,v),(u',v')⟩)) D_(u+u',v+v')`,
/// which vanishes exactly when the form does. Checked symbolically on all
/// pairs, and densely when `n ≤ 9`.
pub fn check_commutators(ctx: &PauliContext) -> CheckReport {
    let w = ctx.symplectic();
    let m = ctx.m;
    let ops: Vec<PauliOp> = all_ops(ctx).collect();
    let n = ops.len();
    let dense = (ctx.n() <= DENSE_LIMIT).then(|| ops.iter().map(|a| Dense::of(ctx, a)).collect::<Vec<_>>());
    let results = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (a, b) = (&ops[idx / n], &ops[idx % n]);
            let (c, d) = ctx.commutator(a, b);
            let form = w.form(w.point(a.u, a.v), w.point(b.u, b.v));
            let lead = CycloInt::root(m, i64::from(ctx.eps(ctx.space.trace_dot(a.v, b.u)))).unwrap();
            let one = CycloInt::integer(m, 1).unwrap();
            let expected = &lead * &(&one - &CycloInt::root(m, i64::from(ctx.eps(form))).unwrap());
            if c != expected || c.is_zero() != (form == 0) {
                return Some(format!("{a:?}, {b:?}: coefficient {c}, form {form}"));
            }
            if let Some(dense) = &dense {
                let (x, y) = (&dense[idx / n], &dense[idx % n]);
                let lhs = x.mul(y);
                let rhs = y.mul(x);
                let diff = Dense::of(ctx, &d).scale(&c);
                let got = lhs.sub(&rhs);
                if got != diff {
                    return Some(format!("{a:?}, {b:?}: dense commutator differs"));
                }
            }
            None
        })
        .collect();
    CheckReport::from_results("commutators", ctx.space.field().q(), results)
}

/// `T(D_(a,b)) = −(D_(a,b))ᵗ = −ε^(−tr(a·b)) D_(−a,b)`, densely for every
/// `(a, b)`.
pub fn check_t_action(ctx: &PauliContext) -> Result<CheckReport> {
    require_dense(ctx)?;
    let s = &ctx.space;
    let results = all_ops(ctx)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|a| {
            let lhs = Dense::of(ctx, &a).transpose().neg();
            let phase = (ctx.m - ctx.eps(s.trace_dot(a.u, a.v))) % ctx.m;
            let rhs = Dense::of(ctx, &PauliOp { u: s.neg(a.u), v: a.v, k: phase }).neg();
            (lhs != rhs).then(|| format!("{a:?}"))
        })
        .collect();
    Ok(CheckReport::from_results("T action", s.field().q(), results))
}

/// `D_(u,v) D_(a,b) D_(u,v)⁻¹ = ε^(−⟨(u,v),(a,b)⟩) D_(a,b)`, symbolically
/// and densely (with `D⁻¹ = D*`), for all pairs. Odd `p` only.
pub fn check_k_conjugation(ctx: &PauliContext) -> Result<CheckReport> {
    if ctx.space.field().p() == 2 {
        return Err(Error::OddCharacteristicRequired);
    }
    require_dense(ctx)?;
    let w = ctx.symplectic();
    let ops: Vec<PauliOp> = all_ops(ctx).collect();
    let dense: Vec<Dense> = ops.iter().map(|a| Dense::of(ctx, a)).collect();
    let n = ops.len();
    let ident = Dense::identity(ctx.n() as usize, ctx.m);
    let results = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let (x, a) = (&ops[i], &ops[j]);
            let form = w.form(w.point(x.u, x.v), w.point(a.u, a.v));
            let expected = PauliOp { k: (ctx.m - ctx.eps(form)) % ctx.m, ..*a };
            let sym = ctx.compose(&ctx.compose(x, a), &ctx.inverse(x));
            if sym != expected {
                return Some(format!("symbolic {x:?} on {a:?}"));
            }
            let inv = dense[i].adjoint();
            if dense[i].mul(&inv) != ident || dense[i].mul(&dense[j]).mul(&inv) != Dense::of(ctx, &expected) {
                return Some(format!("dense {x:?} on {a:?}"));
            }
            None
        })
        .collect();
    Ok(CheckReport::from_results("K conjugation", ctx.space.field().q(), results))
}

/// `Tr(D_a* D_b) = n·δ_(a,b)` over all pairs. An orthogonal family of `n²`
/// nonzero matrices is a basis of all `n×n` matrices.
pub fn check_basis(ctx: &PauliContext) -> Result<CheckReport> {
    require_dense(ctx)?;
    let ops: Vec<PauliOp> = all_ops(ctx).collect();
    let dense: Vec<Dense> = ops.iter().map(|a| Dense::of(ctx, a)).collect();
    let adj: Vec<Dense> = dense.iter().map(Dense::adjoint).collect();
    let n = ops.len();
    let results = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let g = adj[i].trace_of_product(&dense[j]);
            let want = if i == j { i64::from(ctx.n()) } else { 0 };
            (g.as_integer() != Some(want)).then(|| format!("Tr({:?}* {:?}) = {g}", ops[i], ops[j]))
        })
        .collect();
    Ok(CheckReport::from_results("Pauli basis", ctx.space.field().q(), results))
}

/// The operators `D_(u,v)` for the nonzero points of a spread member.
#[derive(Clone, Debug)]
pub struct CartanBlock {
    pub member: Subspace,
    pub generators: Vec<PauliOp>,
}

pub fn cartan_from_member(ctx: &PauliContext, member: &Subspace) -> Result<CartanBlock> {
    let w = ctx.symplectic();
    let mut generators = Vec::with_capacity(ctx.n() as usize - 1);
    member.for_each_nonzero(&w, |z| {
        let (u, v) = w.split(z);
        generators.push(PauliOp { u, v, k: 0 });
    });
    let bad = generators.par_iter().enumerate().find_map_any(|(i, a)| {
        generators[i + 1..].iter().find(|b| !ctx.commutes(a, b)).map(|b| (*a, *b))
    });
    if let Some((a, b)) = bad {
        return Err(Error::NotIsotropic(format!("{a:?} and {b:?} do not commute")));
    }
    Ok(CartanBlock { member: member.clone(), generators })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub q: u32,
    pub n: u32,
    pub blocks: usize,
    /// Sum of block dimensions, to be compared with `n² − 1`.
    pub dimension_sum: u64,
    /// Generator indices `(u, v)` across blocks cover `W ∖ {0}` once each.
    pub partition: bool,
    /// Every generator pair across distinct blocks has `Tr(AB) = 0`,
    /// symbolically on all pairs when `n ≤ 81` and otherwise through the
    /// only way it can fail, `−(u,v)` lying in another block.
    pub killing_symbolic: bool,
    pub killing_pairs_exhaustive: bool,
    /// Same, with dense matrices, for `n ≤ 9`.
    pub killing_dense: Option<bool>,
    pub abelian: bool,
    pub witness: Option<String>,
    pub passed: bool,
}

/// The decomposition `sl_n = H_0 ⊕ … ⊕ H_n` attached to a spread.
pub fn verify_decomposition(sp: &Spread) -> DecompositionReport {
    let space = sp.space();
    let ctx = PauliContext::new(space.v().clone());
    let n = ctx.n();
    let size = space.size() as usize;
    let mut witness = None;

    let mut blocks = Vec::with_capacity(sp.members().len());
    let mut abelian = true;
    for m in sp.members() {
        match cartan_from_member(&ctx, m) {
            Ok(b) => blocks.push(b),
            Err(e) => {
                abelian = false;
                witness.get_or_insert(e.to_string());
                let w = SymplecticSpace::new(space.v().clone());
                let mut generators = Vec::new();
                m.for_each_nonzero(&w, |z| {
                    let (u, v) = w.split(z);
                    generators.push(PauliOp { u, v, k: 0 });
                });
                blocks.push(CartanBlock { member: m.clone(), generators });
            }
        }
    }
    let dimension_sum: u64 = blocks.iter().map(|b| b.generators.len() as u64).sum();

    let none = u32::MAX;
    let mut block_of = vec![none; size];
    let mut partition = true;
    for (i, b) in blocks.iter().enumerate() {
        for g in &b.generators {
            let z = space.point(g.u, g.v) as usize;
            if block_of[z] != none {
                partition = false;
                witness.get_or_insert(format!("({}, {}) lies in blocks {} and {i}", g.u, g.v, block_of[z]));
            }
            block_of[z] = i as u32;
        }
    }
    partition &= block_of[1..].iter().all(|&b| b != none);

    let v = space.v();
    let neg_inside = blocks.iter().enumerate().all(|(i, b)| {
        b.generators.iter().all(|g| block_of[space.point(v.neg(g.u), v.neg(g.v)) as usize] == i as u32)
    });
    let killing_pairs_exhaustive = n <= 81;
    let mut killing_symbolic = neg_inside;
    if killing_pairs_exhaustive {
        let gens: Vec<(usize, PauliOp)> =
            blocks.iter().enumerate().flat_map(|(i, b)| b.generators.iter().map(move |g| (i, *g))).collect();
        let bad = gens.par_iter().find_map_any(|(i, a)| {
            gens.iter().find(|(j, b)| i != j && !ctx.trace(&ctx.compose(a, b)).is_zero()).map(|(_, b)| (*a, *b))
        });
        if let Some((a, b)) = bad {
            killing_symbolic = false;
            witness.get_or_insert(format!("Tr({a:?}·{b:?}) ≠ 0"));
        }
    }
    let killing_dense = (n <= DENSE_LIMIT).then(|| {
        let dense: Vec<Vec<Dense>> =
            blocks.iter().map(|b| b.generators.iter().map(|g| Dense::of(&ctx, g)).collect()).collect();
        dense.iter().enumerate().all(|(i, bi)| {
            dense.iter().enumerate().filter(|(j, _)| *j != i).all(|(_, bj)| {
                bi.iter().all(|a| bj.iter().all(|b| a.trace_of_product(b).is_zero()))
            })
        })
    });

    let expected_sum = u64::from(n) * u64::from(n) - 1;
    let passed = dimension_sum == expected_sum
        && blocks.len() as u64 == u64::from(n) + 1
        && partition
        && killing_symbolic
        && killing_dense != Some(false)
        && abelian;
    DecompositionReport {
        q: ctx.space.field().q(),
        n,
        blocks: blocks.len(),
        dimension_sum,
        partition,
        killing_symbolic,
        killing_pairs_exhaustive,
        killing_dense,
        abelian,
        witness,
        passed,
    }
}

/// One claimed eigenpair: `op · b = ζ^expected · b` for the vector with
/// exponents `vector`.
#[derive(Clone, Copy, Debug)]
pub struct EigenCase<'a> {
    pub op: PauliOp,
    pub vector: &'a [u32],
    pub expected: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenReport {
    pub label: String,
    pub cases: u64,
    /// Cases where the vector is not an eigenvector at all.
    pub not_eigen: u64,
    /// Cases where it is, but with a different eigenvalue.
    pub wrong_value: u64,
    pub first_failure: Option<String>,
    pub passed: bool,
}

pub fn check_eigenvectors<'a>(
    ctx: &PauliContext,
    label: &str,
    cases: impl IntoParallelIterator<Item = EigenCase<'a>>,
) -> EigenReport {
    let outcomes: Vec<(u8, Option<String>)> = cases
        .into_par_iter()
        .map(|c| match ctx.eigen_exponent(&c.op, c.vector) {
            None => (1, Some(format!("{:?}: not an eigenvector", c.op))),
            Some(l) if l != c.expected % ctx.m => (2, Some(format!("{:?}: ζ^{l}, expected ζ^{}", c.op, c.expected))),
            Some(_) => (0, None),
        })
        .collect();
    let not_eigen = outcomes.iter().filter(|o| o.0 == 1).count() as u64;
    let wrong_value = outcomes.iter().filter(|o| o.0 == 2).count() as u64;
    EigenReport {
        label: label.into(),
        cases: outcomes.len() as u64,
        not_eigen,
        wrong_value,
        first_failure: outcomes.into_iter().find_map(|o| o.1),
        passed: not_eigen == 0 && wrong_value == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn ctx(p: u32, r: usize) -> PauliContext {
        PauliContext::new(VecSpace::new(make_field(p, r, None).unwrap(), 1).unwrap())
    }

    #[test]
    fn identity_composes_trivially() {
        let c = ctx(5, 1);
        let a = PauliOp { u: 2, v: 3, k: 1 };
        assert_eq!(c.compose(&c.identity(), &a), a);
        assert_eq!(c.compose(&a, &c.inverse(&a)), c.identity());
    }

    #[test]
    fn xz_squared_over_gf2() {
        let c = ctx(2, 1);
        let xz = c.op(1, 1).unwrap();
        let sq = c.compose(&xz, &xz);
        // XZXZ = −I.
        assert_eq!(sq, PauliOp { u: 0, v: 0, k: 2 });
        assert_eq!(Dense::of(&c, &xz).mul(&Dense::of(&c, &xz)), Dense::of(&c, &sq));
    }

    #[test]
    fn trace_vanishes_off_identity() {
        let c = ctx(3, 1);
        for a in all_ops(&c) {
            assert_eq!(Dense::of(&c, &a).trace(), c.trace(&a));
        }
    }

    #[test]
    fn cross_validation_small() {
        for (p, r) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let rep = cross_validate(&ctx(p, r)).unwrap();
            assert!(rep.passed, "{rep:?}");
        }
    }

    #[test]
    fn diagonal_member_is_diagonal() {
        let c = ctx(3, 2);
        let w = SymplecticSpace::new(c.space().clone());
        let member = Subspace::from_points(&w, [w.point(0, 1), w.point(0, 3)]);
        let block = cartan_from_member(&c, &member).unwrap();
        assert_eq!(block.generators.len(), 8);
        assert!(block.generators.iter().all(|g| g.u == 0));
    }

    #[test]
    fn non_isotropic_member_rejected() {
        let c = ctx(3, 1);
        let w = SymplecticSpace::new(c.space().clone());
        let plane = Subspace::from_points(&w, [w.point(1, 0), w.point(0, 1)]);
        assert!(matches!(cartan_from_member(&c, &plane), Err(Error::NotIsotropic(_))));
    }

    #[test]
    fn k_conjugation_needs_odd_p() {
        assert!(check_k_conjugation(&ctx(2, 2)).is_err());
    }
}
