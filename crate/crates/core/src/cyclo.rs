//! Exact arithmetic in `Z[ζ_m]` for `m` an odd prime or `m = 4`.
//!
//! This is what lets unbiasedness be checked without floating point: an
//! inner product of two exponent vectors is a sum of roots of unity, i.e. a
//! histogram of exponents, and its squared modulus is again an element of
//! `Z[ζ_m]` that must collapse to the rational integer `n`.
//!
//! Canonical forms: for prime `m` the coefficient of `ζ^(m-1)` is eliminated
//! using `1 + ζ + … + ζ^(m-1) = 0`; for `m = 4` everything reduces to
//! `a + bζ` via `ζ² = -1`. Two equal algebraic numbers therefore always
//! have identical coefficient vectors.
//!
//! ```
//! use mubforge::cyclo::CycloInt;
//!
//! // |1 - ζ_3|² = 3
//! let x = CycloInt::from_coeffs(3, &[1, -1, 0]).unwrap();
//! assert_eq!(x.abs_squared().as_integer(), Some(3));
//! ```

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloInt {
    m: u32,
    coeffs: Vec<i64>,
}

fn check_order(m: u32) -> Result<()> {
    if m == 4 || (m > 2 && m % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))) {
        Ok(())
    } else {
        Err(Error::UnsupportedRootOrder(m))
    }
}

impl CycloInt {
    pub fn zero(m: u32) -> Result<Self> {
        check_order(m)?;
        Ok(CycloInt { m, coeffs: vec![0; m as usize] })
    }

    pub fn integer(m: u32, value: i64) -> Result<Self> {
        let mut z = Self::zero(m)?;
        z.coeffs[0] = value;
        Ok(z)
    }

    /// `ζ^k`.
    pub fn root(m: u32, k: i64) -> Result<Self> {
        let mut z = Self::zero(m)?;
        z.coeffs[k.rem_euclid(i64::from(m)) as usize] = 1;
        z.reduce();
        Ok(z)
    }

    /// `Σ c_k ζ^k`; at most `m` coefficients.
    pub fn from_coeffs(m: u32, coeffs: &[i64]) -> Result<Self> {
        let mut z = Self::zero(m)?;
        if coeffs.len() > m as usize {
            return Err(Error::ShapeMismatch(coeffs.len(), m as usize));
        }
        z.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        z.reduce();
        Ok(z)
    }

    /// `Σ_k counts[k] ζ^k` from an exponent histogram.
    pub fn from_counts(m: u32, counts: &[u64]) -> Result<Self> {
        let coeffs: Vec<i64> = counts
            .iter()
            .map(|&c| i64::try_from(c).map_err(|_| Error::Overflow))
            .collect::<Result<_>>()?;
        Self::from_coeffs(m, &coeffs)
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    /// Canonical coefficient vector (length `m`).
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn reduce(&mut self) {
        let m = self.m as usize;
        if m == 4 {
            let (a, b) = (self.coeffs[0] - self.coeffs[2], self.coeffs[1] - self.coeffs[3]);
            self.coeffs.copy_from_slice(&[a, b, 0, 0]);
        } else {
            let last = self.coeffs[m - 1];
            if last != 0 {
                for c in &mut self.coeffs {
                    *c -= last;
                }
            }
        }
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(Error::MixedRootOrder(self.m, other.m))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        let mut z = CycloInt { m: self.m, coeffs };
        z.reduce();
        Ok(z)
    }

    pub fn try_neg(&self) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| a.checked_neg().ok_or(Error::Overflow)).collect::<Result<_>>()?;
        Ok(CycloInt { m: self.m, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.try_neg()?)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let m = self.m as usize;
        let mut acc = vec![0i64; m];
        for (j, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (k, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let t = a.checked_mul(b).ok_or(Error::Overflow)?;
                let slot = &mut acc[(j + k) % m];
                *slot = slot.checked_add(t).ok_or(Error::Overflow)?;
            }
        }
        let mut z = CycloInt { m: self.m, coeffs: acc };
        z.reduce();
        Ok(z)
    }

    /// Complex conjugation `ζ ↦ ζ^(-1)`.
    pub fn conj(&self) -> Self {
        let m = self.m as usize;
        let mut coeffs = vec![0i64; m];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[(m - k) % m] += c;
        }
        let mut z = CycloInt { m: self.m, coeffs };
        z.reduce();
        z
    }

    /// `x · conj(x)`; panics only on i64 overflow.
    pub fn abs_squared(&self) -> Self {
        self.try_abs_squared().expect("overflow in abs_squared")
    }

    pub fn try_abs_squared(&self) -> Result<Self> {
        self.try_mul(&self.conj())
    }

    /// The rational integer this represents, if any.
    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    pub fn is_integer(&self) -> Option<i64> {
        self.as_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Applies the Galois automorphism `ζ ↦ ζ^a`, `gcd(a, m) = 1`.
    pub fn galois(&self, a: u32) -> Self {
        let m = self.m as usize;
        let mut coeffs = vec![0i64; m];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[(k * a as usize) % m] += c;
        }
        let mut z = CycloInt { m: self.m, coeffs };
        z.reduce();
        z
    }

    /// Floating-point value with `ζ = exp(2πi/m)`. Not used for verdicts.
    pub fn to_complex(&self) -> Complex64 {
        let m = f64::from(self.m);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| Complex64::from_polar(c as f64, std::f64::consts::TAU * k as f64 / m))
            .sum()
    }
}

/// Approximate `|Σ counts[k] ζ^k|² ≈ target` in complex doubles, tolerance
/// `1e-9` relative to `target`. A sampling fast path only; the exact
/// [`CycloInt::abs_squared`] is the arbiter.
pub fn approx_abs_squared_matches(m: u32, counts: &[u64], target: f64) -> bool {
    let z: Complex64 = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| Complex64::from_polar(c as f64, std::f64::consts::TAU * k as f64 / f64::from(m)))
        .sum();
    (z.norm_sqr() - target).abs() <= 1e-9 * target.max(1.0)
}

/// Whether `Σ counts[k] ζ^k = 0`, exactly. For prime `m` that means all
/// counts are equal; for `m = 4`, `c0 = c2` and `c1 = c3`.
pub fn counts_vanish(m: u32, counts: &[u64]) -> bool {
    if m == 4 {
        counts[0] == counts[2] && counts[1] == counts[3]
    } else {
        counts.iter().all(|&c| c == counts[0])
    }
}

/// Whether `|Σ counts[k] ζ^k|² = target`, exactly, without allocating a
/// [`CycloInt`]. The squared modulus has coefficients given by the cyclic
/// autocorrelation `A_d = Σ_k c_k c_(k+d)`, which is then compared in
/// canonical form.
pub fn counts_abs_squared_is(m: u32, counts: &[u64], target: i64) -> bool {
    let mu = m as usize;
    let nz: Vec<(usize, i128)> = counts.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, i128::from(c))).collect();
    let mut a = vec![0i128; mu];
    for &(j, cj) in &nz {
        for &(k, ck) in &nz {
            a[(j + mu - k) % mu] += cj * ck;
        }
    }
    a[0] -= i128::from(target);
    if m == 4 {
        a[0] == a[2] && a[1] == a[3]
    } else {
        a.iter().all(|&x| x == a[0])
    }
}

/// Operator forms panic on mixed orders or overflow; use the `try_` methods
/// where either is possible.
impl std::ops::Add for &CycloInt {
    type Output = CycloInt;
    fn add(self, rhs: &CycloInt) -> CycloInt {
        self.try_add(rhs).expect("cyclotomic add")
    }
}

impl std::ops::Sub for &CycloInt {
    type Output = CycloInt;
    fn sub(self, rhs: &CycloInt) -> CycloInt {
        self.try_sub(rhs).expect("cyclotomic sub")
    }
}

impl std::ops::Mul for &CycloInt {
    type Output = CycloInt;
    fn mul(self, rhs: &CycloInt) -> CycloInt {
        self.try_mul(rhs).expect("cyclotomic mul")
    }
}

impl std::ops::Neg for &CycloInt {
    type Output = CycloInt;
    fn neg(self) -> CycloInt {
        self.try_neg().expect("cyclotomic neg")
    }
}

impl fmt::Debug for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}ζ")?,
                _ => write!(f, "{c}ζ^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " (m={})", self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(m: u32, v: &[i64]) -> CycloInt {
        CycloInt::from_coeffs(m, v).unwrap()
    }

    #[test]
    fn root_products() {
        let z = CycloInt::root(5, 1).unwrap();
        let w = CycloInt::root(5, 4).unwrap();
        assert_eq!((&z * &w).as_integer(), Some(1));
        // (1 + ζ)(1 + ζ²) = 1 over Z[ζ_3]
        assert_eq!((&c(3, &[1, 1]) * &c(3, &[1, 0, 1])).as_integer(), Some(1));
        // (1 + i)² = 2i
        assert_eq!(&c(4, &[1, 1]) * &c(4, &[1, 1]), c(4, &[0, 2]));
    }

    #[test]
    fn conjugation() {
        assert_eq!(CycloInt::integer(7, 1).unwrap().conj().as_integer(), Some(1));
        assert_eq!(CycloInt::root(7, 1).unwrap().conj(), CycloInt::root(7, 6).unwrap());
        assert_eq!(CycloInt::root(4, 1).unwrap().conj(), CycloInt::root(4, 3).unwrap());
    }

    #[test]
    fn abs_squared_values() {
        assert!(c(5, &[1, 1, 1, 1, 1]).abs_squared().is_zero());
        assert_eq!(CycloInt::root(7, 3).unwrap().abs_squared().as_integer(), Some(1));
        assert_eq!(c(3, &[1, -1]).abs_squared().as_integer(), Some(3));
        assert_eq!(c(4, &[1, 1]).abs_squared().as_integer(), Some(2));
    }

    #[test]
    fn integer_detection() {
        assert_eq!(CycloInt::zero(3).unwrap().is_integer(), Some(0));
        assert_eq!(c(3, &[1, 1, 1]).is_integer(), Some(0));
        assert_eq!(CycloInt::root(5, 1).unwrap().is_integer(), None);
    }

    #[test]
    fn errors() {
        assert!(matches!(CycloInt::zero(6), Err(Error::UnsupportedRootOrder(6))));
        assert!(matches!(CycloInt::zero(9), Err(Error::UnsupportedRootOrder(9))));
        let a = CycloInt::root(3, 1).unwrap();
        let b = CycloInt::root(5, 1).unwrap();
        assert!(matches!(a.try_mul(&b), Err(Error::MixedRootOrder(3, 5))));
        let big = CycloInt::integer(3, i64::MAX).unwrap();
        assert!(matches!(big.try_mul(&big), Err(Error::Overflow)));
    }

    #[test]
    fn complex_fast_path() {
        let x = c(3, &[1, -1]);
        assert!((x.to_complex().norm_sqr() - 3.0).abs() < 1e-12);
        assert!(approx_abs_squared_matches(3, &[2, 1, 0], 3.0));
        assert!(!approx_abs_squared_matches(3, &[2, 0, 0], 3.0));
    }

    fn order() -> impl Strategy<Value = u32> {
        prop_oneof![Just(3u32), Just(4), Just(5), Just(7)]
    }

    fn element(m: u32) -> impl Strategy<Value = CycloInt> {
        proptest::collection::vec(-50i64..50, m as usize).prop_map(move |v| c(m, &v))
    }

    proptest! {
        #[test]
        fn conj_is_involution(x in order().prop_flat_map(element)) {
            prop_assert_eq!(x.conj().conj(), x);
        }

        #[test]
        fn ring_identities_agree_on_canonical_forms(
            (x, y, z) in order().prop_flat_map(|m| (element(m), element(m), element(m)))
        ) {
            // Distributivity and commutativity only hold coefficientwise if
            // the canonical form is unique.
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x - &y) + &y, x.clone());
        }

        #[test]
        fn abs_squared_is_conjugation_invariant(x in order().prop_flat_map(element)) {
            let s = x.abs_squared();
            prop_assert_eq!(s.conj(), s);
        }

        #[test]
        fn galois_action_preserves_integrality(
            (x, a) in order().prop_flat_map(|m| (element(m), (1..m).prop_filter("unit", move |a| m != 4 || a % 2 == 1)))
        ) {
            let s = x.abs_squared().as_integer();
            let t = x.galois(a).abs_squared().as_integer();
            prop_assert_eq!(s, t);
        }

        #[test]
        fn histogram_fast_paths_match_cyclo_int(
            (m, counts) in order().prop_flat_map(|m| (Just(m), proptest::collection::vec(0u64..20, m as usize)))
        ) {
            let z = CycloInt::from_counts(m, &counts).unwrap();
            prop_assert_eq!(counts_vanish(m, &counts), z.is_zero());
            let s = z.abs_squared();
            prop_assert!(counts_abs_squared_is(m, &counts, s.coeffs()[0]) == s.as_integer().is_some());
            if let Some(v) = s.as_integer() {
                prop_assert!(!counts_abs_squared_is(m, &counts, v + 1));
            }
        }
    }
}
