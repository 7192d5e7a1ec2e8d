//! Orders of spread stabilizers in `Sp±(W)`, the linear maps that multiply
//! the form by `1` or `−1`. Only feasible for very small `W`.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::ff::gfp;

use super::{Spread, Subspace, SymplecticSpace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismCount {
    pub method: String,
    /// Stabilizer elements found. A lower bound when `complete` is false.
    pub order: u64,
    /// Matrices examined or search nodes visited.
    pub work: u64,
    pub complete: bool,
}

/// Exhaustive enumeration when all `p^((2r')²)` matrices fit in the budget,
/// backtracking over basis images otherwise.
pub fn automorphism_order(sp: &Spread, budget: u64) -> AutomorphismCount {
    let n = sp.space().dim() as u32;
    match u64::from(sp.space().p()).checked_pow(n * n) {
        Some(total) if total <= budget => automorphism_order_matrices(sp, budget),
        _ => automorphism_order_backtrack(sp, budget),
    }
}

fn gram(space: &SymplecticSpace) -> Vec<Vec<u32>> {
    let n = space.dim();
    let e: Vec<u64> = (0..n).map(|i| u64::from(space.p()).pow(i as u32)).collect();
    (0..n).map(|i| (0..n).map(|j| space.form(e[i], e[j])).collect()).collect()
}

fn signs(p: u32) -> Vec<u32> {
    if p == 2 {
        vec![1]
    } else {
        vec![1, p - 1]
    }
}

/// Runs over every matrix of `GL(2r', p)`, keeps those scaling the form by
/// ±1, and tests whether each member's image is a member.
pub fn automorphism_order_matrices(sp: &Spread, budget: u64) -> AutomorphismCount {
    let space = sp.space();
    let p = space.p();
    let n = space.dim();
    let g = gram(space);
    let members: HashSet<&Subspace> = sp.members().iter().collect();
    let total = u64::from(p).checked_pow((n * n) as u32).unwrap_or(u64::MAX);
    let mut entries = vec![0u8; n * n];
    let mut order = 0;
    let mut work = 0;
    while work < total && work < budget {
        work += 1;
        let rows: Vec<Vec<u8>> = entries.chunks(n).map(<[u8]>::to_vec).collect();
        if gfp::rank(&rows, p) == n {
            let f: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| space.form_rows(&rows[i], &rows[j])).collect()).collect();
            let scales = signs(p).into_iter().any(|eps| (0..n).all(|i| (0..n).all(|j| f[i][j] == eps * g[i][j] % p)));
            if scales && sp.members().iter().all(|m| members.contains(&apply(m, &rows, p))) {
                order += 1;
            }
        }
        for e in entries.iter_mut() {
            *e += 1;
            if u32::from(*e) < p {
                break;
            }
            *e = 0;
        }
    }
    AutomorphismCount { method: "matrix enumeration".into(), order, work, complete: work == total }
}

fn apply(m: &Subspace, rows: &[Vec<u8>], p: u32) -> Subspace {
    let images = m
        .rows()
        .iter()
        .map(|b| {
            let mut out = vec![0u32; rows.len()];
            for (&c, row) in b.iter().zip(rows) {
                for (o, &x) in out.iter_mut().zip(row) {
                    *o += u32::from(c) * u32::from(x);
                }
            }
            out.into_iter().map(|v| (v % p) as u8).collect()
        })
        .collect();
    Subspace::span(images, p)
}

struct Search<'a> {
    space: &'a SymplecticSpace,
    p: u32,
    n: usize,
    gram: Vec<Vec<u32>>,
    member_of: Vec<u32>,
    budget: u64,
    nodes: u64,
    found: u64,
}

#[derive(Clone)]
struct Partial {
    images: Vec<u64>,
    /// `(z, φ(z))` for every `z` in the span of the basis vectors mapped so far.
    span: Vec<(u64, u64)>,
    image_set: HashSet<u64>,
    forward: HashMap<u32, u32>,
    backward: HashMap<u32, u32>,
}

impl Search<'_> {
    fn scaled(&self, z: u64, c: u32) -> u64 {
        let d = self.space.digits(z);
        let d: Vec<u8> = d.iter().map(|&x| (u32::from(x) * c % self.p) as u8).collect();
        self.space.from_digits(&d)
    }

    fn extend(&self, part: &Partial, eps: u32, y: u64) -> Option<Partial> {
        let i = part.images.len();
        if part.image_set.contains(&y) {
            return None;
        }
        for (j, &img) in part.images.iter().enumerate() {
            if self.space.form(img, y) != eps * self.gram[j][i] % self.p {
                return None;
            }
        }
        let e = u64::from(self.p).pow(i as u32);
        let mut next = part.clone();
        next.images.push(y);
        for c in 1..self.p {
            let (ce, cy) = (self.scaled(e, c), self.scaled(y, c));
            for &(z, w) in &part.span {
                let (z2, w2) = (self.space.add(z, ce), self.space.add(w, cy));
                let (a, b) = (self.member_of[z2 as usize], self.member_of[w2 as usize]);
                if *next.forward.entry(a).or_insert(b) != b || *next.backward.entry(b).or_insert(a) != a {
                    return None;
                }
                next.span.push((z2, w2));
                next.image_set.insert(w2);
            }
        }
        Some(next)
    }

    fn run(&mut self, part: &Partial, eps: u32) -> bool {
        if part.images.len() == self.n {
            self.found += 1;
            return true;
        }
        for y in 1..self.space.size() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            if let Some(next) = self.extend(part, eps, y) {
                if !self.run(&next, eps) {
                    return false;
                }
            }
        }
        true
    }
}

/// Chooses images of the standard basis one vector at a time, pruning on
/// the form values and on the induced partial permutation of members.
pub fn automorphism_order_backtrack(sp: &Spread, budget: u64) -> AutomorphismCount {
    let space = sp.space();
    let size = space.size();
    let none = u32::MAX;
    let mut member_of = vec![none; size as usize];
    for (k, m) in sp.members().iter().enumerate() {
        m.for_each_nonzero(space, |z| member_of[z as usize] = k as u32);
    }
    let mut search = Search {
        space,
        p: space.p(),
        n: space.dim(),
        gram: gram(space),
        member_of,
        budget,
        nodes: 0,
        found: 0,
    };
    let root = Partial {
        images: Vec::new(),
        span: vec![(0, 0)],
        image_set: HashSet::from([0]),
        forward: HashMap::new(),
        backward: HashMap::new(),
    };
    let mut complete = true;
    for eps in signs(space.p()) {
        if !search.run(&root, eps) {
            complete = false;
            break;
        }
    }
    AutomorphismCount { method: "basis backtracking".into(), order: search.found, work: search.nodes, complete }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use crate::semifield::{catalog, Family, Params};
    use crate::spread::spread_from_presemifield;

    fn desarguesian(p: u32) -> Spread {
        let f = make_field(p, 1, None).unwrap();
        spread_from_presemifield(&catalog(&f, Family::Field, &Params::default()).unwrap())
    }

    #[test]
    fn gf3_both_routes() {
        let sp = desarguesian(3);
        let a = automorphism_order_matrices(&sp, 1 << 20);
        let b = automorphism_order_backtrack(&sp, 1 << 20);
        assert!(a.complete && b.complete);
        assert_eq!((a.order, b.order), (48, 48));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let sp = desarguesian(5);
        let a = automorphism_order_matrices(&sp, 100);
        assert!(!a.complete);
        assert_eq!(a.work, 100);
        let b = automorphism_order_backtrack(&sp, 10);
        assert!(!b.complete);
    }
}
