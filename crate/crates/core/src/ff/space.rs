use crate::error::{Error, Result};

use super::{Field, FieldElem};

/// A point of `V = F` or `V = F ⊕ F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PointVec {
    coords: [FieldElem; 2],
    len: u8,
}

impl PointVec {
    pub fn single(a: FieldElem) -> Self {
        PointVec { coords: [a, FieldElem::ZERO], len: 1 }
    }

    pub fn pair(a: FieldElem, b: FieldElem) -> Self {
        PointVec { coords: [a, b], len: 2 }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, k: usize) -> FieldElem {
        assert!(k < self.len(), "coordinate {k} out of range");
        self.coords[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = FieldElem> + '_ {
        self.coords[..self.len()].iter().copied()
    }
}

/// The coordinate space `V` (one or two copies of the field), with points
/// addressed by a dense index `a + q·b`. Read in base `p`, the index is the
/// GF(p)-coordinate vector of the point.
#[derive(Clone, Debug)]
pub struct VecSpace {
    field: Field,
    dim: usize,
    n: u32,
}

impl VecSpace {
    pub fn new(field: Field, dim: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Parameter(format!("V must be F or F⊕F, got dimension {dim}")));
        }
        let n = field.q().checked_pow(dim as u32).ok_or(Error::FieldTooLarge(u64::MAX))?;
        Ok(VecSpace { field, dim, n })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of copies of `F`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `|V|`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Dimension of `V` over the prime field.
    pub fn prime_dim(&self) -> usize {
        self.dim * self.field.r()
    }

    pub fn point(&self, idx: u32) -> PointVec {
        let q = self.field.q();
        match self.dim {
            1 => PointVec::single(FieldElem::from_index(idx)),
            _ => PointVec::pair(FieldElem::from_index(idx % q), FieldElem::from_index(idx / q)),
        }
    }

    pub fn index(&self, x: &PointVec) -> u32 {
        match x.len() {
            1 => x.get(0).index(),
            _ => x.get(0).index() + self.field.q() * x.get(1).index(),
        }
    }

    #[inline]
    pub fn split(&self, idx: u32) -> (FieldElem, FieldElem) {
        let q = self.field.q();
        if self.dim == 1 {
            (FieldElem::from_index(idx), FieldElem::ZERO)
        } else {
            (FieldElem::from_index(idx % q), FieldElem::from_index(idx / q))
        }
    }

    #[inline]
    pub fn join(&self, a: FieldElem, b: FieldElem) -> u32 {
        if self.dim == 1 {
            a.index()
        } else {
            a.index() + self.field.q() * b.index()
        }
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        let f = &self.field;
        if self.dim == 1 {
            return f.add(FieldElem::from_index(x), FieldElem::from_index(y)).index();
        }
        let (a, b) = self.split(x);
        let (c, d) = self.split(y);
        self.join(f.add(a, c), f.add(b, d))
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        let (a, b) = self.split(x);
        self.join(self.field.neg(a), self.field.neg(b))
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    /// Multiplication by a scalar of the prime field.
    pub fn scale(&self, c: u32, x: u32) -> u32 {
        let (a, b) = self.split(x);
        self.join(self.field.scale(c, a), self.field.scale(c, b))
    }

    /// Componentwise product by a field scalar.
    pub fn scale_field(&self, s: FieldElem, x: u32) -> u32 {
        let (a, b) = self.split(x);
        self.join(self.field.mul(s, a), self.field.mul(s, b))
    }

    #[inline]
    pub fn dot(&self, x: u32, y: u32) -> FieldElem {
        let f = &self.field;
        let (a, b) = self.split(x);
        let (c, d) = self.split(y);
        if self.dim == 1 {
            f.mul(a, c)
        } else {
            f.add(f.mul(a, c), f.mul(b, d))
        }
    }

    /// `tr(x·y)`.
    #[inline]
    pub fn trace_dot(&self, x: u32, y: u32) -> u32 {
        self.field.trace(self.dot(x, y))
    }

    /// GF(p)-coordinates of a point, least significant first.
    pub fn digits(&self, idx: u32) -> Vec<u8> {
        let p = self.field.p();
        let mut t = idx;
        (0..self.prime_dim())
            .map(|_| {
                let d = (t % p) as u8;
                t /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u8]) -> u32 {
        let p = self.field.p();
        digits.iter().rev().fold(0u32, |acc, &d| acc * p + u32::from(d))
    }

    /// The point with a single unit GF(p)-coordinate at position `k`.
    pub fn unit(&self, k: usize) -> u32 {
        self.field.p().pow(k as u32)
    }
}
