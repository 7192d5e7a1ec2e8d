//! Knuth duals: the symplectic partner of a commutative presemifield in
//! coefficient form, obtained by dualising its spread with respect to the
//! trace form and swapping the arguments.

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElem};

use super::{canonical_terms, Presemifield, Term};

/// Upper-triangular coefficients `a_ij` (`i <= j`) of a commutative product
/// `Σ_{i<=j} a_ij·(x^(p^i) y^(p^j) + x^(p^j) y^(p^i)) / d_ij`, where the
/// divisor `d_ij` is 2 off the diagonal in odd characteristic (the
/// `½(f(x+y) - f(x) - f(y))` normalisation) and 1 otherwise.
fn upper_coefficients(field: &Field, s: &Presemifield) -> Result<Vec<(u32, u32, FieldElem)>> {
    let terms = s.require_terms()?;
    let coeff = |i: u32, j: u32| {
        terms.iter().find(|t| t.i == i && t.j == j).map_or(FieldElem::ZERO, |t| t.coeff)
    };
    let mut out = Vec::new();
    for t in terms {
        if coeff(t.j, t.i) != t.coeff {
            return Err(Error::Parameter(format!(
                "{} is not commutative in coefficient form: terms ({}, {}) and ({}, {}) differ",
                s.label(),
                t.i,
                t.j,
                t.j,
                t.i
            )));
        }
        if t.i < t.j {
            let a = if field.p() == 2 { t.coeff } else { field.add(t.coeff, t.coeff) };
            out.push((t.i, t.j, a));
        } else if t.i == t.j {
            out.push((t.i, t.j, t.coeff));
        }
    }
    Ok(out)
}

/// `x∘y = ½ Σ a_ij^(p^(r-i)) x^(p^(j-i)) y^(p^(r-i)) + ½ Σ a_ij^(p^(r-j)) x^(p^(r+i-j)) y^(p^(r-j))`.
pub fn knuth_dual_odd(c: &Presemifield) -> Result<Presemifield> {
    let field = c.field();
    if field.p() == 2 {
        return Err(Error::OddCharacteristicRequired);
    }
    if c.space().dim() != 1 {
        return Err(Error::NoCoefficientForm);
    }
    let r = field.r() as u32;
    let half = field.half()?;
    let mut terms = Vec::new();
    for (i, j, a) in upper_coefficients(field, c)? {
        let ai = field.frobenius_pow(a, i64::from(r - i));
        let aj = field.frobenius_pow(a, i64::from(r - j));
        terms.push(Term::new(field.mul(half, ai), j - i, r - i));
        terms.push(Term::new(field.mul(half, aj), r + i - j, r - j));
    }
    let terms = canonical_terms(field, &terms);
    Ok(Presemifield::from_terms(field, &terms, format!("knuth dual of {}", c.label()))?.with_flags(false, true))
}

/// `x∘y = Σ a_ii^(2^(r-i)) x y^(2^(r-i)) + Σ_{i<j} a_ij^(2^(r-i)) x^(2^(j-i)) y^(2^(r-i))
///      + Σ_{i<j} a_ij^(2^(r-j)) x^(2^(r+i-j)) y^(2^(r-j))`.
pub fn knuth_dual_even(c: &Presemifield) -> Result<Presemifield> {
    let field = c.field();
    if field.p() != 2 {
        return Err(Error::EvenCharacteristicRequired(field.p()));
    }
    if c.space().dim() != 1 {
        return Err(Error::NoCoefficientForm);
    }
    let r = field.r() as u32;
    let mut terms = Vec::new();
    for (i, j, a) in upper_coefficients(field, c)? {
        let ai = field.frobenius_pow(a, i64::from(r - i));
        if i == j {
            terms.push(Term::new(ai, 0, r - i));
        } else {
            let aj = field.frobenius_pow(a, i64::from(r - j));
            terms.push(Term::new(ai, j - i, r - i));
            terms.push(Term::new(aj, r + i - j, r - j));
        }
    }
    let terms = canonical_terms(field, &terms);
    let label = format!("knuth dual of {}", c.label());
    Ok(Presemifield::from_terms(field, &terms, label)?.with_flags(false, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use crate::semifield::{catalog, Family, Params};

    #[test]
    fn field_is_self_dual() {
        for (p, r) in [(3, 1), (3, 2), (5, 1), (2, 2), (2, 3)] {
            let f = make_field(p, r, None).unwrap();
            let s = catalog(&f, Family::Field, &Params::default()).unwrap();
            let d = if p == 2 { knuth_dual_even(&s) } else { knuth_dual_odd(&s) }.unwrap();
            assert_eq!(d.terms(), s.terms());
        }
    }

    #[test]
    fn albert_dual_is_albert_symplectic() {
        let f = make_field(3, 3, None).unwrap();
        let c = catalog(&f, Family::Albert, &Params::default()).unwrap();
        let s = catalog(&f, Family::AlbertSymplectic, &Params::default()).unwrap();
        let d = knuth_dual_odd(&c).unwrap();
        for x in f.elements() {
            for y in f.elements() {
                assert_eq!(d.mul_elem(x, y), s.mul_elem(x, y));
            }
        }
    }

    #[test]
    fn rejects_wrong_inputs() {
        let f = make_field(3, 3, None).unwrap();
        let s = catalog(&f, Family::AlbertSymplectic, &Params::default()).unwrap();
        assert!(knuth_dual_odd(&s).is_err());
        assert!(knuth_dual_even(&s).is_err());
        let f9 = make_field(3, 2, None).unwrap();
        let pair = catalog(&f9, Family::Dickson, &Params::default()).unwrap();
        assert!(matches!(knuth_dual_odd(&pair), Err(Error::NoCoefficientForm)));
    }
}
