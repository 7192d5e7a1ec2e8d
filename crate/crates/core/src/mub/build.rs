//! One builder per construction. Each computes the row `Q` of every
//! exponent basis; the linear part `c·tr(v·w)` is added by [`MubSet`].

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElem, VecSpace};
use crate::gr4::{make_ring, Ring};
use crate::semifield::{pseudo_planar_test, PlanarFn, Presemifield, Term};
use crate::spread::{bblp_beta, suzuki_matrix};

use super::eigen::EigenRule;
use super::{BasisData, MubBasis, MubSet};

/// Bases are materialized when `(n + 1)·n` stays below this; beyond it each
/// row is recomputed on access.
pub const MATERIALIZE_LIMIT: u64 = 50_000_000;

fn materialize(n: u32) -> bool {
    (u64::from(n) + 1) * u64::from(n) <= MATERIALIZE_LIMIT
}

/// Wraps a row rule as a quadratic or lazy basis.
fn basis<F>(n: u32, label: String, param: u32, slope: Option<Arc<Vec<u32>>>, rule: F) -> MubBasis
where
    F: Fn(u32) -> u32 + Send + Sync + 'static,
{
    let data = if materialize(n) {
        BasisData::Quadratic(Arc::new((0..n).into_par_iter().map(&rule).collect()))
    } else {
        BasisData::Lazy(Arc::new(move || (0..n).into_par_iter().map(&rule).collect()))
    };
    MubBasis { label, data, param: Some(param), slope }
}

fn with_standard(bases: impl IntoIterator<Item = MubBasis>) -> Vec<MubBasis> {
    std::iter::once(MubBasis::standard()).chain(bases).collect()
}

fn require_odd(field: &Field) -> Result<()> {
    if field.p() == 2 {
        return Err(Error::OddCharacteristicRequired);
    }
    Ok(())
}

fn require_even(field: &Field) -> Result<()> {
    if field.p() != 2 {
        return Err(Error::EvenCharacteristicRequired(field.p()));
    }
    Ok(())
}

/// A pair `(x, y, m)` with `tr(x·(y∘m)) ≠ tr((x∘m)·y)`, i.e. a spread member
/// `{(x, x∘m)}` that is not totally isotropic. The product is trilinear over
/// GF(p), so GF(p)-basis vectors suffice.
pub fn symplectic_failure(s: &Presemifield) -> Option<(u32, u32, u32)> {
    let v = s.space();
    let basis: Vec<u32> = (0..v.prime_dim()).map(|t| v.unit(t)).collect();
    for &m in &basis {
        for &x in &basis {
            for &y in &basis {
                if v.trace_dot(x, s.mul(y, m)) != v.trace_dot(s.mul(x, m), y) {
                    return Some((x, y, m));
                }
            }
        }
    }
    None
}

/// `B_m[v][w] = tr(½ w·(w∘m) + v·w)` for a symplectic presemifield of odd
/// order; the standard basis is `B_∞`.
pub fn build_odd_symplectic(s: &Presemifield) -> Result<MubSet> {
    let v = s.space().clone();
    require_odd(v.field())?;
    if let Some((x, y, m)) = symplectic_failure(s) {
        return Err(Error::NotSymplectic(format!(
            "{}: member m = {m} is not isotropic (x = {x}, y = {y})",
            s.label()
        )));
    }
    let n = v.n();
    let p = v.field().p();
    let half = p.div_ceil(2);
    let bases = (0..n).map(|m| {
        let (s, v2) = (s.clone(), v.clone());
        basis(n, format!("m={m}"), m, None, move |w| half * v2.trace_dot(w, s.mul(w, m)) % p)
    });
    let ms = MubSet::new(n, p, Some(v.clone()), with_standard(bases.collect::<Vec<_>>()), s.label());
    Ok(ms.with_eigen(EigenRule::OddSymplectic(Box::new(s.clone()))))
}

/// `B_m[v][w] = tr(½ m f(w) + v w)` for a planar `f`.
pub fn build_odd_planar(f: &PlanarFn) -> Result<MubSet> {
    let field = f.field().clone();
    require_odd(&field)?;
    let v = VecSpace::new(field.clone(), 1)?;
    let n = v.n();
    let half = field.half()?;
    let values: Arc<Vec<FieldElem>> = Arc::new(f.values().collect());
    let bases = (0..n).map(|m| {
        let (field, values) = (field.clone(), values.clone());
        let hm = field.mul(half, FieldElem::from_index(m));
        basis(n, format!("m={m}"), m, None, move |w| field.trace(field.mul(hm, values[w as usize])))
    });
    Ok(MubSet::new(n, field.p(), Some(v), with_standard(bases.collect::<Vec<_>>()), f.label()))
}

fn ring_for(field: &Field) -> Result<Ring> {
    require_even(field)?;
    make_ring(field)
}

fn one_dim(s: &Presemifield) -> Result<&[Term]> {
    if s.space().dim() != 1 {
        return Err(Error::Parameter(format!("{}: needs V = F", s.label())));
    }
    s.require_terms()
}

/// `B_m[v][w] = Tr(ŵ·(ŵ∘m̂) + 2ŵv̂)` in `Z_4`. With `x∘y = Σ a_ij x^(2^i) y^(2^j)`
/// every term of `ŵ·(ŵ∘m̂)` is a product of Teichmüller elements, hence the
/// lift of `a w^(1+2^i) m^(2^j)`.
pub fn build_even_symplectic(s: &Presemifield) -> Result<MubSet> {
    let field = s.field().clone();
    let ring = ring_for(&field)?;
    let terms: Arc<Vec<Term>> = Arc::new(one_dim(s)?.to_vec());
    let n = field.q();
    let bases = (0..n).map(|m| {
        let (field, ring, terms) = (field.clone(), ring.clone(), terms.clone());
        let me = FieldElem::from_index(m);
        let mpow: Vec<FieldElem> = terms.iter().map(|t| field.frobenius_pow(me, i64::from(t.j))).collect();
        basis(n, format!("m={m}"), m, None, move |w| {
            let we = FieldElem::from_index(w);
            terms.iter().zip(&mpow).map(|(t, &mj)| {
                let x = field.mul(t.coeff, field.mul(field.mul(we, field.frobenius_pow(we, i64::from(t.i))), mj));
                ring.lift_trace(x)
            })
            .sum::<u32>()
                % 4
        })
    });
    let ms = MubSet::new(n, 4, Some(VecSpace::new(field.clone(), 1)?), with_standard(bases.collect::<Vec<_>>()), s.label());
    Ok(ms.with_eigen(EigenRule::EvenSymplectic(Box::new(s.clone()))))
}

/// `B_m[v][w] = Tr(m̂(ŵ∗ŵ) + 2ŵv̂)` for a commutative `x∗y = Σ a_ij x^(2^i) y^(2^j)`.
pub fn build_even_commutative(c: &Presemifield) -> Result<MubSet> {
    let field = c.field().clone();
    let ring = ring_for(&field)?;
    let terms: Arc<Vec<Term>> = Arc::new(one_dim(c)?.to_vec());
    let n = field.q();
    let bases = (0..n).map(|m| {
        let (field, ring, terms) = (field.clone(), ring.clone(), terms.clone());
        let me = FieldElem::from_index(m);
        basis(n, format!("m={m}"), m, None, move |w| {
            let we = FieldElem::from_index(w);
            terms.iter().map(|t| {
                let wij = field.mul(field.frobenius_pow(we, i64::from(t.i)), field.frobenius_pow(we, i64::from(t.j)));
                ring.lift_trace(field.mul(me, field.mul(t.coeff, wij)))
            })
            .sum::<u32>()
                % 4
        })
    });
    Ok(MubSet::new(n, 4, Some(VecSpace::new(field.clone(), 1)?), with_standard(bases.collect::<Vec<_>>()), c.label()))
}

/// `B_m[v][w] = Tr(m̂(ŵ² + 2f(ŵ)) + 2v̂ŵ)`. Only `f` mod 2 enters through
/// `2f(ŵ)`, so `Tr(2m̂f(ŵ)) = 2tr(m f(w))`.
pub fn build_pseudoplanar(f: &PlanarFn) -> Result<MubSet> {
    let field = f.field().clone();
    let ring = ring_for(&field)?;
    let rep = pseudo_planar_test(f);
    if !rep.passed {
        return Err(Error::NotPseudoPlanar(format!("{} (witness {:?})", f.label(), rep.witness)));
    }
    let n = field.q();
    let values: Arc<Vec<FieldElem>> = Arc::new(f.values().collect());
    let bases = (0..n).map(|m| {
        let (field, ring, values) = (field.clone(), ring.clone(), values.clone());
        let me = FieldElem::from_index(m);
        basis(n, format!("m={m}"), m, None, move |w| {
            let we = FieldElem::from_index(w);
            (ring.lift_trace(field.mul(me, field.mul(we, we))) + 2 * field.trace(field.mul(me, values[w as usize]))) % 4
        })
    });
    Ok(MubSet::new(n, 4, Some(VecSpace::new(field.clone(), 1)?), with_standard(bases.collect::<Vec<_>>()), f.label()))
}

/// The BBLP set for `ρ = x^(p^k)`: `B_∞`, `B_0`, `tr(m^ρ w^(ρ+1))` for
/// nonsquare `m`, and `tr(½ w s β(ws))` for one `s` of each pair `{s, −s}`.
pub fn build_bblp(field: &Field, k: u32) -> Result<MubSet> {
    require_odd(field)?;
    let beta = Arc::new(bblp_beta(field, k)?);
    let v = VecSpace::new(field.clone(), 1)?;
    let n = field.q();
    let f = field;
    let ki = i64::from(k);
    let slope = |h: &dyn Fn(FieldElem) -> FieldElem| Some(Arc::new((0..n).map(|x| h(FieldElem::from_index(x)).index()).collect()));
    let mut bases = vec![basis(n, "0".into(), 0, slope(&|_| FieldElem::ZERO), |_| 0)];
    for m in f.nonzero() {
        if f.is_square(m)? {
            continue;
        }
        let m_rho = f.frobenius_pow(m, ki);
        let h = slope(&|x| f.add(f.mul(m, f.frobenius_pow(x, -ki)), f.mul(m_rho, f.frobenius_pow(x, ki))));
        let fc = f.clone();
        bases.push(basis(n, format!("nonsquare m={}", m.index()), m.index(), h, move |w| {
            let we = FieldElem::from_index(w);
            fc.trace(fc.mul(m_rho, fc.mul(fc.frobenius_pow(we, ki), we)))
        }));
    }
    let half = f.half()?;
    for s in f.nonzero() {
        if s.index() > f.neg(s).index() {
            continue;
        }
        let h = slope(&|x| f.mul(s, beta.eval(f.mul(x, s))));
        let (fc, beta) = (f.clone(), beta.clone());
        bases.push(basis(n, format!("s={}", s.index()), s.index(), h, move |w| {
            let ws = fc.mul(FieldElem::from_index(w), s);
            fc.trace(fc.mul(half, fc.mul(ws, beta.eval(ws))))
        }));
    }
    let ms = MubSet::new(n, f.p(), Some(v), with_standard(bases), format!("bblp k={k}"));
    Ok(ms.with_eigen(EigenRule::Graph))
}

/// `B_c[v][w] = Tr(ŵ·ŵM̂_c + 2v̂·ŵ)` on `V = F ⊕ F`. Expanding the quadratic
/// form, `Tr(α̂ŵ₁² + 2γ̂ŵ₁ŵ₂ + β̂ŵ₂²) = T(αw₁²) + 2tr(γw₁w₂) + T(βw₂²)`.
pub fn build_suzuki(field: &Field) -> Result<MubSet> {
    let ring = ring_for(field)?;
    let v = VecSpace::new(field.clone(), 2)?;
    let n = v.n();
    let mut bases = Vec::with_capacity(n as usize);
    for c in 0..n {
        let (alpha, beta) = v.split(c);
        let mc = suzuki_matrix(field, alpha, beta)?;
        let (f, ring, v2) = (field.clone(), ring.clone(), v.clone());
        bases.push(basis(n, format!("c={c}"), c, None, move |w| {
            let (w1, w2) = v2.split(w);
            let a = ring.lift_trace(f.mul(mc[0][0], f.mul(w1, w1)));
            let g = f.trace(f.mul(mc[0][1], f.mul(w1, w2)));
            let b = ring.lift_trace(f.mul(mc[1][1], f.mul(w2, w2)));
            (a + 2 * g + b) % 4
        }));
    }
    let ms = MubSet::new(n, 4, Some(v), with_standard(bases), "suzuki");
    Ok(ms.with_eigen(EigenRule::Suzuki))
}
