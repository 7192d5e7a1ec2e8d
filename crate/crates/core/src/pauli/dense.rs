//! Dense `n×n` matrices over `Z[ζ_m]`, built straight from the definitions
//! of `X(u)` and `Z(v)`. Only used to cross-check the symbolic algebra for
//! `n ≤ 9`.

use crate::cyclo::CycloInt;

use super::{PauliContext, PauliOp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dense {
    n: usize,
    m: u32,
    /// Row-major; column `w` is the image of `e_w`.
    entries: Vec<CycloInt>,
}

impl Dense {
    pub fn zero(n: usize, m: u32) -> Self {
        let z = CycloInt::zero(m).expect("supported order");
        Dense { n, m, entries: vec![z; n * n] }
    }

    pub fn identity(n: usize, m: u32) -> Self {
        let mut d = Self::zero(n, m);
        for i in 0..n {
            d.entries[i * n + i] = CycloInt::integer(m, 1).expect("supported order");
        }
        d
    }

    pub fn get(&self, row: usize, col: usize) -> &CycloInt {
        &self.entries[row * self.n + col]
    }

    fn set(&mut self, row: usize, col: usize, x: CycloInt) {
        self.entries[row * self.n + col] = x;
    }

    /// `X(u): e_w ↦ e_(u+w)`.
    pub fn shift(ctx: &PauliContext, u: u32) -> Self {
        let n = ctx.n() as usize;
        let mut d = Self::zero(n, ctx.m());
        for w in 0..ctx.n() {
            d.set(ctx.space().add(u, w) as usize, w as usize, CycloInt::integer(ctx.m(), 1).unwrap());
        }
        d
    }

    /// `Z(v): e_w ↦ ε^(tr(v·w)) e_w`.
    pub fn clock(ctx: &PauliContext, v: u32) -> Self {
        let n = ctx.n() as usize;
        let mut d = Self::zero(n, ctx.m());
        for w in 0..ctx.n() {
            let k = ctx.eps(ctx.space().trace_dot(v, w));
            d.set(w as usize, w as usize, CycloInt::root(ctx.m(), i64::from(k)).unwrap());
        }
        d
    }

    /// `ζ^k X(u) Z(v)`, multiplied out densely.
    pub fn of(ctx: &PauliContext, op: &PauliOp) -> Self {
        Self::shift(ctx, op.u).mul(&Self::clock(ctx, op.v)).scale(&CycloInt::root(ctx.m(), i64::from(op.k)).unwrap())
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        let n = self.n;
        let mut out = Self::zero(n, self.m);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let t = out.get(i, j) + &(a * b);
                        out.set(i, j, t);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &CycloInt) -> Dense {
        Dense { n: self.n, m: self.m, entries: self.entries.iter().map(|x| x * c).collect() }
    }

    pub fn sub(&self, other: &Dense) -> Dense {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Dense { n: self.n, m: self.m, entries }
    }

    pub fn neg(&self) -> Dense {
        Dense { n: self.n, m: self.m, entries: self.entries.iter().map(|x| -x).collect() }
    }

    pub fn transpose(&self) -> Dense {
        let mut out = Self::zero(self.n, self.m);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn adjoint(&self) -> Dense {
        let t = self.transpose();
        Dense { n: t.n, m: t.m, entries: t.entries.iter().map(CycloInt::conj).collect() }
    }

    pub fn trace(&self) -> CycloInt {
        (0..self.n).fold(CycloInt::zero(self.m).unwrap(), |acc, i| &acc + self.get(i, i))
    }

    /// `Tr(AB)` without forming the product.
    pub fn trace_of_product(&self, other: &Dense) -> CycloInt {
        let n = self.n;
        let mut acc = CycloInt::zero(self.m).unwrap();
        for i in 0..n {
            for k in 0..n {
                let (a, b) = (self.get(i, k), other.get(k, i));
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
        }
        acc
    }
}
