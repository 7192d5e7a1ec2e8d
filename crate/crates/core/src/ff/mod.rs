//! Exact arithmetic in GF(p^r).
//!
//! A [`FieldCtx`] is built once from `(p, r)` and an optional modulus and is
//! shared behind an [`Arc`] by everything downstream. Elements are
//! [`FieldElem`] handles: the coefficient vector over the modulus packed in
//! base `p` (constant term is the least significant digit), so
//! `FieldElem::from_index(i)` enumerates the field in a fixed order.
//!
//! Multiplication goes through exp/log tables built from the polynomial
//! product; [`FieldCtx::mul_by_polynomial`] keeps the table-free route
//! available as a cross-check.
//!
//! ```
//! use mubforge::ff::make_field;
//!
//! let gf4 = make_field(2, 2, None).unwrap();
//! assert_eq!(gf4.modulus(), &[1, 1, 1]); // x^2 + x + 1
//! let g = gf4.gen();
//! assert_eq!(gf4.trace(g), 1);
//! ```

pub mod gfp;
mod poly;
mod space;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use space::{PointVec, VecSpace};

/// `a^(-1) mod p` for a prime `p` and `a` not divisible by it.
pub fn inv_mod_prime(a: u32, p: u32) -> u32 {
    poly::inv_mod(a % p, p)
}

/// Largest supported field order, 3^10.
pub const MAX_ORDER: u64 = 59_049;

/// Fields with at most this many elements get a full addition table.
const ADD_TABLE_LIMIT: u32 = 729;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    /// Handle from its packed base-`p` coefficient index.
    pub const fn from_index(index: u32) -> Self {
        FieldElem(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// JSON form of a field: `{p, r, modulus: [c0..cr]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub r: usize,
    pub modulus: Vec<u32>,
}

pub type Field = Arc<FieldCtx>;

pub struct FieldCtx {
    p: u32,
    r: usize,
    q: u32,
    modulus: Vec<u32>,
    /// `p^k` for `k in 0..=r`.
    pow_p: Vec<u32>,
    primitive: FieldElem,
    /// `exp[k] = g^k`, doubled so that log sums need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
    frob: Vec<Vec<u32>>,
    trace: Vec<u32>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Builds GF(p^r). Without an explicit modulus the lexicographically
/// smallest monic irreducible of degree `r` is used, comparing coefficient
/// lists constant term first.
pub fn make_field(p: u32, r: usize, modulus: Option<&[u32]>) -> Result<Field> {
    if !poly::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Err(Error::InvalidModulus("degree must be at least 1".into()));
    }
    let q = (p as u64).checked_pow(r as u32).unwrap_or(u64::MAX);
    if q > MAX_ORDER {
        return Err(Error::FieldTooLarge(q));
    }
    let modulus = match modulus {
        Some(m) => {
            if m.len() != r + 1 || m[r] != 1 {
                return Err(Error::InvalidModulus(format!(
                    "{m:?} is not monic of degree {r}"
                )));
            }
            if let Some(c) = m.iter().find(|&&c| c >= p) {
                return Err(Error::InvalidModulus(format!("coefficient {c} not reduced mod {p}")));
            }
            if !poly::is_irreducible(m, p) {
                return Err(Error::Reducible { p, modulus: m.to_vec() });
            }
            m.to_vec()
        }
        None => default_modulus(p, r),
    };
    Ok(Arc::new(FieldCtx::build(p, r, q as u32, modulus)))
}

/// Lexicographically smallest monic irreducible polynomial of degree `r`.
pub fn default_modulus(p: u32, r: usize) -> Vec<u32> {
    let count = (p as u64).pow(r as u32);
    for idx in 0..count {
        // c0 is the most significant position of the enumeration.
        let mut m = vec![0u32; r + 1];
        let mut t = idx;
        for k in (0..r).rev() {
            m[k] = (t % p as u64) as u32;
            t /= p as u64;
        }
        m[r] = 1;
        if poly::is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldCtx {
    fn build(p: u32, r: usize, q: u32, modulus: Vec<u32>) -> Self {
        let pow_p: Vec<u32> = (0..=r).map(|k| p.pow(k as u32)).collect();
        let mut ctx = FieldCtx {
            p,
            r,
            q,
            modulus,
            pow_p,
            primitive: FieldElem(0),
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add_table: None,
            frob: Vec::new(),
            trace: Vec::new(),
        };
        ctx.neg = (0..q).map(|x| ctx.neg_digits(x)).collect();
        if p != 2 && q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = ctx.add_digits(a, b);
                }
            }
            ctx.add_table = Some(t);
        }
        let g = ctx.find_primitive();
        ctx.primitive = g;
        let order = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * order.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut cur = ctx.one();
        for k in 0..order {
            exp[k] = cur.0;
            log[cur.0 as usize] = k as u32;
            cur = ctx.mul_by_polynomial(cur, g);
        }
        for k in order..2 * order {
            exp[k] = exp[k - order];
        }
        ctx.exp = exp;
        ctx.log = log;
        ctx.frob = (0..r)
            .map(|i| {
                let e = (p as u64).pow(i as u32);
                (0..q).map(|x| ctx.pow(FieldElem(x), e).0).collect()
            })
            .collect();
        ctx.trace = (0..q)
            .map(|x| {
                let t = (0..r).fold(FieldElem(0), |acc, i| ctx.add(acc, FieldElem(ctx.frob[i][x as usize])));
                debug_assert!(t.0 < p, "trace must land in the prime field");
                t.0
            })
            .collect();
        ctx
    }

    fn find_primitive(&self) -> FieldElem {
        if self.q == 2 {
            return self.one();
        }
        let order = u64::from(self.q - 1);
        let factors = poly::prime_factors(order);
        (1..self.q)
            .map(FieldElem)
            .find(|&g| factors.iter().all(|&l| self.pow_by_polynomial(g, order / l) != self.one()))
            .expect("the multiplicative group is cyclic")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p, r: self.r, modulus: self.modulus.clone() }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// Class of `x` modulo the field modulus. For `r = 1` the modulus is `x`
    /// itself and this is zero.
    pub fn gen(&self) -> FieldElem {
        if self.r == 1 {
            FieldElem(0)
        } else {
            FieldElem(self.p)
        }
    }

    /// A generator of the multiplicative group (the first in enumeration
    /// order).
    pub fn primitive(&self) -> FieldElem {
        self.primitive
    }

    /// Embeds a residue of the prime field.
    pub fn from_prime(&self, c: i64) -> FieldElem {
        FieldElem(c.rem_euclid(i64::from(self.p)) as u32)
    }

    pub fn elem(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() > self.r {
            return Err(Error::ShapeMismatch(coeffs.len(), self.r));
        }
        let mut idx = 0u32;
        for (k, &c) in coeffs.iter().enumerate() {
            if c >= self.p {
                return Err(Error::Parameter(format!("coefficient {c} not reduced mod {}", self.p)));
            }
            idx += c * self.pow_p[k];
        }
        Ok(FieldElem(idx))
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        let mut t = x.0;
        (0..self.r)
            .map(|_| {
                let c = t % self.p;
                t /= self.p;
                c
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(FieldElem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (1..self.q).map(FieldElem)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for k in 0..self.r {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * self.pow_p[k];
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_digits(&self, a: u32) -> u32 {
        let mut a = a;
        let mut out = 0;
        for k in 0..self.r {
            let d = a % self.p;
            out += ((self.p - d) % self.p) * self.pow_p[k];
            a /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        match &self.add_table {
            Some(t) => FieldElem(t[(a.0 * self.q + b.0) as usize]),
            None => FieldElem(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem(0);
        }
        let k = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElem(self.exp[k as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        let order = self.q - 1;
        let k = (order - self.log[a.0 as usize]) % order;
        Some(FieldElem(self.exp[k as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return FieldElem(0);
        }
        let order = u64::from(self.q - 1);
        let k = (u64::from(self.log[a.0 as usize]) * (e % order)) % order;
        FieldElem(self.exp[k as usize])
    }

    /// Multiplication by a prime-field scalar.
    pub fn scale(&self, c: u32, a: FieldElem) -> FieldElem {
        self.mul(self.from_prime(i64::from(c)), a)
    }

    /// The inverse of 2; only exists in odd characteristic.
    pub fn half(&self) -> Result<FieldElem> {
        if self.p == 2 {
            return Err(Error::OddCharacteristicRequired);
        }
        Ok(self.from_prime(i64::from(self.p.div_ceil(2))))
    }

    /// Reference product: polynomial multiplication reduced by the modulus.
    /// Independent of the exp/log tables.
    pub fn mul_by_polynomial(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let pa = self.coeffs(a);
        let pb = self.coeffs(b);
        let prod = poly::rem(&poly::mul(&pa, &pb, self.p), &self.modulus, self.p);
        let mut idx = 0;
        for (k, &c) in prod.iter().enumerate() {
            idx += c * self.pow_p[k];
        }
        FieldElem(idx)
    }

    pub fn pow_by_polynomial(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut acc = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_by_polynomial(acc, b);
            }
            b = self.mul_by_polynomial(b, b);
            e >>= 1;
        }
        acc
    }

    /// `x^(p^i)`, with `i` taken modulo `r`.
    #[inline]
    pub fn frobenius_pow(&self, x: FieldElem, i: i64) -> FieldElem {
        let i = i.rem_euclid(self.r as i64) as usize;
        FieldElem(self.frob[i][x.0 as usize])
    }

    /// Absolute trace to GF(p), returned as a residue.
    #[inline]
    pub fn trace(&self, x: FieldElem) -> u32 {
        self.trace[x.0 as usize]
    }

    /// Whether `x` is a square (zero counts). Odd characteristic only: in
    /// characteristic 2 every element is a square and asking is a misuse.
    pub fn is_square(&self, x: FieldElem) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::OddCharacteristicRequired);
        }
        Ok(x.0 == 0 || self.log[x.0 as usize].is_multiple_of(2))
    }

    /// First nonsquare in enumeration order.
    pub fn first_nonsquare(&self) -> Result<FieldElem> {
        for x in self.nonzero() {
            if !self.is_square(x)? {
                return Ok(x);
            }
        }
        unreachable!("odd-order fields have nonsquares")
    }

    pub fn dot(&self, u: &PointVec, v: &PointVec) -> Result<FieldElem> {
        if u.len() != v.len() {
            return Err(Error::ShapeMismatch(u.len(), v.len()));
        }
        Ok(u.iter().zip(v.iter()).fold(self.zero(), |acc, (a, b)| self.add(acc, self.mul(a, b))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(make_field(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(make_field(3, 1, None).unwrap().modulus(), &[0, 1]);
        assert_eq!(make_field(2, 3, None).unwrap().modulus(), &[1, 0, 1, 1]);
        assert_eq!(make_field(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(make_field(4, 1, None), Err(Error::NotPrime(4))));
        assert!(matches!(make_field(2, 2, Some(&[1, 0, 1])), Err(Error::Reducible { .. })));
        assert!(matches!(make_field(2, 2, Some(&[1, 1])), Err(Error::InvalidModulus(_))));
        assert!(matches!(make_field(3, 11, None), Err(Error::FieldTooLarge(_))));
    }

    #[test]
    fn prime_field_is_plain_modular_arithmetic() {
        let f = make_field(7, 1, None).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                let (x, y) = (FieldElem(a), FieldElem(b));
                assert_eq!(f.add(x, y).index(), (a + b) % 7);
                assert_eq!(f.mul(x, y).index(), (a * b) % 7);
            }
            assert_eq!(f.trace(FieldElem(a)), a);
        }
    }

    #[test]
    fn trace_of_gf4_generator() {
        let f = make_field(2, 2, None).unwrap();
        assert_eq!(f.trace(f.zero()), 0);
        let g = f.gen();
        assert_eq!(f.add(g, f.mul(g, g)), f.one());
        assert_eq!(f.trace(g), 1);
    }

    #[test]
    fn frobenius_edges() {
        let f = make_field(3, 2, None).unwrap();
        let g = f.gen();
        assert_eq!(f.frobenius_pow(g, 0), g);
        assert_eq!(f.frobenius_pow(g, 2), g);
        assert_eq!(f.frobenius_pow(g, 1), f.pow_by_polynomial(g, 3));
        assert_eq!(f.frobenius_pow(g, -1), f.frobenius_pow(g, 1));
    }

    #[test]
    fn squares_in_small_fields() {
        let f3 = make_field(3, 1, None).unwrap();
        assert!(f3.is_square(f3.from_prime(1)).unwrap());
        assert!(!f3.is_square(f3.from_prime(2)).unwrap());
        let f9 = make_field(3, 2, None).unwrap();
        let squares = f9.nonzero().filter(|&x| f9.is_square(x).unwrap()).count();
        assert_eq!(squares, 4);
        let f4 = make_field(2, 2, None).unwrap();
        assert!(f4.is_square(f4.one()).is_err());
    }

    #[test]
    fn dot_products() {
        let f = make_field(5, 1, None).unwrap();
        let (a, b, c, d) = (f.from_prime(2), f.from_prime(3), f.from_prime(4), f.from_prime(1));
        assert_eq!(f.dot(&PointVec::single(a), &PointVec::single(b)).unwrap(), f.mul(a, b));
        assert_eq!(
            f.dot(&PointVec::pair(a, b), &PointVec::pair(c, d)).unwrap(),
            f.add(f.mul(a, c), f.mul(b, d))
        );
        assert!(f.dot(&PointVec::single(a), &PointVec::pair(c, d)).is_err());
    }
}
