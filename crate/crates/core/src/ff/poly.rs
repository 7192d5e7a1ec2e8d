//! Dense polynomials over the prime field GF(p), constant term first.
//!
//! Only what field construction needs: multiplication, remainder, gcd and
//! modular powering. Everything is kept trimmed (no trailing zeros).

pub(crate) type Poly = Vec<u32>;

pub(crate) fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(base: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = u64::from(base % p);
    let m = u64::from(p);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u32
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + u64::from(x) * u64::from(y)) % u64::from(p);
        }
    }
    let mut out: Poly = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let mut m = m.to_vec();
    trim(&mut m);
    assert!(!m.is_empty(), "division by the zero polynomial");
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        if c != 0 {
            let shift = top - dm;
            for (k, &mk) in m.iter().enumerate() {
                let sub = c * mk % p;
                r[shift + k] = (r[shift + k] + p - sub) % p;
            }
        }
        trim(&mut r);
    }
    r
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let len = a.len().max(b.len());
    let mut out: Poly = (0..len)
        .map(|k| {
            let x = a.get(k).copied().unwrap_or(0);
            let y = b.get(k).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

/// Monic gcd.
pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let inv = inv_mod(lead, p);
        for c in &mut x {
            *c = *c * inv % p;
        }
    }
    x
}

pub(crate) fn pow_mod_poly(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Irreducibility of a monic `f` of degree `r >= 1`: no factor of degree
/// `<= r/2`, i.e. `gcd(f, x^(p^i) - x) = 1` for `1 <= i <= r/2`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let r = f.len() - 1;
    if r == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=r / 2 {
        xp = pow_mod_poly(&xp, u64::from(p), f, p);
        let g = gcd(f, &sub(&xp, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_finds_common_factor() {
        // (x+1)(x+2) and (x+1)x over GF(3)
        let a = mul(&[1, 1], &[2, 1], 3);
        let b = mul(&[1, 1], &[0, 1], 3);
        assert_eq!(gcd(&a, &b, 3), vec![1, 1]);
    }

    #[test]
    fn small_irreducibles() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1, 1], 3)); // x = 1 is a root
    }
}
