//! The Galois ring `GR(4^r) = Z_4[x]/(h)`, where `h` is the Hensel lift of
//! the modulus of GF(2^r).
//!
//! Elements are packed two bits per coefficient (`c_k` in bits `2k, 2k+1`),
//! which keeps addition branch-free. The context caches the Teichmüller
//! lift of every field element and `Tr(û)` for every `u`, since every
//! even-characteristic MUB entry reduces to sums of those.
//!
//! ```
//! use mubforge::{ff::make_field, gr4::make_ring};
//!
//! let ring = make_ring(&make_field(2, 2, None).unwrap()).unwrap();
//! let g = ring.field().gen();
//! let lg = ring.teichmuller_lift(g);
//! assert_eq!(ring.pow(lg, 4), lg);
//! assert_eq!(ring.reduce(lg), g);
//! ```

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElem};
use crate::semifield::Presemifield;

/// Masks of the high bit of each 2-bit lane.
const HIGH: u32 = 0xAAAA_AAAA;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem(u32);

impl RingElem {
    pub const ZERO: RingElem = RingElem(0);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub r: usize,
    pub basic_modulus: Vec<u32>,
}

pub type Ring = Arc<RingCtx>;

pub struct RingCtx {
    field: Field,
    r: usize,
    modulus: Vec<u8>,
    lift: Vec<RingElem>,
    /// `Tr(ξ^k)` for the basis `1, ξ, …, ξ^(r-1)`.
    basis_trace: Vec<u8>,
    lift_trace: Vec<u8>,
}

impl std::fmt::Debug for RingCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RingCtx").field("r", &self.r).field("basic_modulus", &self.modulus).finish()
    }
}

/// One Graeffe step over `Z_4`: writes `f(x) = E(x²) + x·O(x²)` and returns
/// `(-1)^r (E(y)² - y·O(y)²)`, whose roots are the squares of the roots of
/// `f`.
fn graeffe(f: &[u8]) -> Vec<u8> {
    let r = f.len() - 1;
    let even: Vec<u8> = f.iter().step_by(2).copied().collect();
    let odd: Vec<u8> = f.iter().skip(1).step_by(2).copied().collect();
    let sq = |a: &[u8]| {
        let mut out = vec![0u8; (2 * a.len()).max(1)];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in a.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % 4;
            }
        }
        out
    };
    let e2 = sq(&even);
    let o2 = sq(&odd);
    let sign = if r.is_multiple_of(2) { 1 } else { 3 };
    (0..=r)
        .map(|k| {
            let e = e2.get(k).copied().unwrap_or(0);
            let o = if k > 0 { o2.get(k - 1).copied().unwrap_or(0) } else { 0 };
            ((e + 4 - o) % 4) * sign % 4
        })
        .collect()
}

pub fn make_ring(field: &Field) -> Result<Ring> {
    if field.p() != 2 {
        return Err(Error::EvenCharacteristicRequired(field.p()));
    }
    let r = field.r();
    let mut h: Vec<u8> = field.modulus().iter().map(|&c| c as u8).collect();
    loop {
        let next = graeffe(&h);
        if next == h {
            break;
        }
        h = next;
    }
    debug_assert!(h.iter().zip(field.modulus()).all(|(&a, &b)| u32::from(a % 2) == b));
    let mut ctx = RingCtx {
        field: field.clone(),
        r,
        modulus: h,
        lift: Vec::new(),
        basis_trace: Vec::new(),
        lift_trace: Vec::new(),
    };
    ctx.lift = field.elements().map(|u| ctx.lift_by_iteration(u)).collect();
    ctx.basis_trace = (0..r).map(|k| ctx.trace_by_formula(ctx.xi_pow(k)) as u8).collect();
    ctx.lift_trace = ctx.lift.iter().map(|&x| ctx.trace(x) as u8).collect();
    Ok(Arc::new(ctx))
}

impl RingCtx {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn basic_modulus(&self) -> Vec<u32> {
        self.modulus.iter().map(|&c| u32::from(c)).collect()
    }

    pub fn descriptor(&self) -> RingDescriptor {
        RingDescriptor { r: self.r, basic_modulus: self.basic_modulus() }
    }

    /// Number of elements, `4^r`.
    pub fn order(&self) -> u64 {
        1u64 << (2 * self.r)
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        (0..self.order() as u32).map(RingElem)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<RingElem> {
        if coeffs.len() > self.r {
            return Err(Error::ShapeMismatch(coeffs.len(), self.r));
        }
        let mut x = 0;
        for (k, &c) in coeffs.iter().enumerate() {
            if c >= 4 {
                return Err(Error::Parameter(format!("coefficient {c} not reduced mod 4")));
            }
            x |= c << (2 * k);
        }
        Ok(RingElem(x))
    }

    pub fn coeffs(&self, x: RingElem) -> Vec<u32> {
        (0..self.r).map(|k| (x.0 >> (2 * k)) & 3).collect()
    }

    /// Embeds an integer residue.
    pub fn from_int(&self, c: i64) -> RingElem {
        if self.r == 0 {
            return RingElem(0);
        }
        RingElem(c.rem_euclid(4) as u32)
    }

    pub fn one(&self) -> RingElem {
        RingElem(1)
    }

    fn xi_pow(&self, k: usize) -> RingElem {
        // ξ = class of x; for r = 1 the modulus is x and ξ = 0.
        let xi = if self.r == 1 { RingElem(0) } else { RingElem(1 << 2) };
        self.pow(xi, k as u64)
    }

    #[inline]
    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        RingElem(((a.0 & !HIGH) + (b.0 & !HIGH)) ^ ((a.0 ^ b.0) & HIGH))
    }

    pub fn neg(&self, a: RingElem) -> RingElem {
        // -c = 3c mod 4 lanewise
        self.add(self.add(a, a), a)
    }

    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        self.add(a, self.neg(b))
    }

    pub fn double(&self, a: RingElem) -> RingElem {
        // 2c mod 4: the low bit moves up, the high bit drops out.
        RingElem((a.0 & !HIGH) << 1)
    }

    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        let r = self.r;
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut t = vec![0u32; 2 * r];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                t[i + j] = (t[i + j] + x * y) % 4;
            }
        }
        for k in (r..2 * r).rev() {
            let c = t[k];
            if c == 0 {
                continue;
            }
            for (i, &h) in self.modulus.iter().enumerate() {
                let slot = &mut t[k - r + i];
                *slot = (*slot + 4 * 4 - c * u32::from(h)) % 4;
            }
        }
        RingElem(t[..r].iter().enumerate().fold(0, |acc, (k, &c)| acc | (c << (2 * k))))
    }

    pub fn pow(&self, a: RingElem, mut e: u64) -> RingElem {
        let mut acc = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// The image in `R/2R = GF(2^r)`.
    pub fn reduce(&self, x: RingElem) -> FieldElem {
        let idx = (0..self.r).fold(0u32, |acc, k| acc | (((x.0 >> (2 * k)) & 1) << k));
        FieldElem::from_index(idx)
    }

    /// The preimage with coefficients in `{0, 1}`.
    pub fn naive_preimage(&self, u: FieldElem) -> RingElem {
        let i = u.index();
        RingElem((0..self.r).fold(0u32, |acc, k| acc | (((i >> k) & 1) << (2 * k))))
    }

    fn lift_by_iteration(&self, u: FieldElem) -> RingElem {
        let e = 1u64 << self.r;
        let mut y = self.naive_preimage(u);
        loop {
            let next = self.pow(y, e);
            if next == y {
                return y;
            }
            y = next;
        }
    }

    /// The unique `x ≡ u (mod 2)` with `x^(2^r) = x`.
    #[inline]
    pub fn teichmuller_lift(&self, u: FieldElem) -> RingElem {
        self.lift[u.index() as usize]
    }

    pub fn is_teichmuller(&self, x: RingElem) -> bool {
        self.teichmuller_lift(self.reduce(x)) == x
    }

    /// `x = a + 2b` with `a, b` Teichmüller.
    pub fn decompose(&self, x: RingElem) -> (RingElem, RingElem) {
        let a = self.teichmuller_lift(self.reduce(x));
        let d = self.sub(x, a);
        debug_assert_eq!(d.0 & !HIGH, 0);
        let half = FieldElem::from_index((0..self.r).fold(0u32, |acc, k| acc | (((d.0 >> (2 * k + 1)) & 1) << k)));
        (a, self.teichmuller_lift(half))
    }

    /// `φ(a + 2b) = a² + 2b²`, the generalised Frobenius.
    pub fn frobenius(&self, x: RingElem) -> RingElem {
        let (a, b) = self.decompose(x);
        self.add(self.mul(a, a), self.double(self.mul(b, b)))
    }

    /// `Tr(a + 2b) = Σ a^(2^i) + 2 Σ b^(2^i)`, evaluated in `R`.
    pub fn trace_by_formula(&self, x: RingElem) -> u32 {
        let (a, b) = self.decompose(x);
        let mut acc = RingElem::ZERO;
        let (mut ai, mut bi) = (a, b);
        for _ in 0..self.r {
            acc = self.add(acc, self.add(ai, self.double(bi)));
            ai = self.mul(ai, ai);
            bi = self.mul(bi, bi);
        }
        debug_assert!(acc.0 < 4, "the trace lands in Z_4");
        acc.0
    }

    /// Ring trace via `Z_4`-linearity on the power basis.
    pub fn trace(&self, x: RingElem) -> u32 {
        (0..self.r).map(|k| ((x.0 >> (2 * k)) & 3) * u32::from(self.basis_trace[k])).sum::<u32>() % 4
    }

    /// `Tr(û)`.
    #[inline]
    pub fn lift_trace(&self, u: FieldElem) -> u32 {
        u32::from(self.lift_trace[u.index() as usize])
    }

    /// The Teichmüller square root `x^(2^(r-1))`.
    pub fn teich_sqrt(&self, x: RingElem) -> Result<RingElem> {
        if !self.is_teichmuller(x) {
            return Err(Error::NotTeichmuller);
        }
        Ok(self.pow(x, 1u64 << (self.r - 1)))
    }

    /// `x̂∘ŷ = Σ â_ij x̂^(2^i) ŷ^(2^j)`, evaluated in `R` from the
    /// coefficient form of `s`.
    pub fn lifted_product(&self, x: FieldElem, y: FieldElem, s: &Presemifield) -> Result<RingElem> {
        if s.field().modulus() != self.field.modulus() || s.space().dim() != 1 {
            return Err(Error::Parameter("product does not live on this ring's field".into()));
        }
        let (xh, yh) = (self.teichmuller_lift(x), self.teichmuller_lift(y));
        Ok(s.require_terms()?.iter().fold(RingElem::ZERO, |acc, t| {
            let a = self.teichmuller_lift(t.coeff);
            let xi = self.pow(xh, 1 << t.i);
            let yj = self.pow(yh, 1 << t.j);
            self.add(acc, self.mul(a, self.mul(xi, yj)))
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn ring(r: usize) -> Ring {
        make_ring(&make_field(2, r, None).unwrap()).unwrap()
    }

    #[test]
    fn z4_is_the_degree_one_case() {
        let z4 = ring(1);
        assert_eq!(z4.basic_modulus(), vec![0, 1]);
        let t: Vec<_> = z4.elements().filter(|&x| z4.is_teichmuller(x)).collect();
        assert_eq!(t, vec![RingElem(0), RingElem(1)]);
        assert_eq!(z4.trace(RingElem(3)), 3);
        assert_eq!(z4.decompose(RingElem(3)), (RingElem(1), RingElem(1)));
    }

    #[test]
    fn hensel_lift_reduces_to_field_modulus() {
        for r in 1..=5 {
            let ring = ring(r);
            let h = ring.basic_modulus();
            let f = ring.field().modulus();
            assert!(h.iter().zip(f).all(|(a, b)| a % 2 == *b), "r = {r}");
            let xi = ring.xi_pow(1);
            assert_eq!(ring.pow(xi, 1 << r), xi, "root of h is Teichmüller, r = {r}");
        }
    }

    #[test]
    fn gf4_lift() {
        let ring = ring(2);
        assert_eq!(ring.basic_modulus(), vec![1, 1, 1]);
        let g = ring.teichmuller_lift(ring.field().gen());
        assert_eq!(ring.pow(g, 4), g);
    }

    #[test]
    fn ring_ops_match_integers_on_z4() {
        let z4 = ring(1);
        for a in 0..4u32 {
            for b in 0..4u32 {
                assert_eq!(z4.add(RingElem(a), RingElem(b)).0, (a + b) % 4);
                assert_eq!(z4.mul(RingElem(a), RingElem(b)).0, (a * b) % 4);
            }
            assert_eq!(z4.neg(RingElem(a)).0, (4 - a) % 4);
            assert_eq!(z4.double(RingElem(a)).0, (2 * a) % 4);
        }
    }

    #[test]
    fn reduction_is_a_ring_morphism() {
        for r in 1..=3 {
            let ring = ring(r);
            let f = ring.field();
            for a in ring.elements() {
                for b in ring.elements() {
                    assert_eq!(ring.reduce(ring.add(a, b)), f.add(ring.reduce(a), ring.reduce(b)));
                    assert_eq!(ring.reduce(ring.mul(a, b)), f.mul(ring.reduce(a), ring.reduce(b)));
                }
            }
        }
    }

    #[test]
    fn teichmuller_units_are_cyclic() {
        for r in 1..=4 {
            let ring = ring(r);
            let f = ring.field();
            let g = ring.teichmuller_lift(f.primitive());
            let order = (1u64 << r) - 1;
            let powers: std::collections::BTreeSet<_> = (0..order).map(|k| ring.pow(g, k)).collect();
            let units: std::collections::BTreeSet<_> = f.nonzero().map(|u| ring.teichmuller_lift(u)).collect();
            assert_eq!(powers, units);
        }
    }

    #[test]
    fn frobenius_fixes_the_trace() {
        for r in 1..=3 {
            let ring = ring(r);
            for x in ring.elements() {
                assert_eq!(ring.trace(ring.frobenius(x)), ring.trace(x));
                assert_eq!(ring.trace_by_formula(x), ring.trace(x));
            }
        }
    }

    #[test]
    fn teich_sqrt_rejects_non_teichmuller() {
        let ring = ring(2);
        assert!(matches!(ring.teich_sqrt(RingElem(2)), Err(Error::NotTeichmuller)));
        assert_eq!(ring.teich_sqrt(ring.one()).unwrap(), ring.one());
    }

    #[test]
    fn odd_field_is_rejected() {
        let f = make_field(3, 2, None).unwrap();
        assert!(matches!(make_ring(&f), Err(Error::EvenCharacteristicRequired(3))));
    }
}
