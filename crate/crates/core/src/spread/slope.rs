use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Spread;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub slopes: usize,
    /// Members that are not graphs `{(x, L·x)}`.
    pub skipped: Vec<usize>,
    /// Two members whose slope sum is not a slope.
    pub witness: Option<(usize, usize)>,
    pub closed: bool,
}

/// Whether the slope maps `L_i` of the graph members, together with `0`,
/// are closed under addition.
pub fn slope_closure_test(sp: &Spread) -> SlopeReport {
    let p = sp.space().p() as u8;
    let d = sp.space().half_dim();
    let mut skipped = Vec::new();
    let mut slopes: Vec<(usize, Vec<u8>)> = Vec::new();
    for (i, m) in sp.members().iter().enumerate() {
        // In echelon form a graph over the first coordinate has exactly the
        // identity in its left block, and the right block is L.
        let graph = m.dim() == d && m.rows().iter().enumerate().all(|(t, row)| (0..d).all(|c| row[c] == u8::from(c == t)));
        if graph {
            slopes.push((i, m.rows().iter().flat_map(|row| row[d..].iter().copied()).collect()));
        } else {
            skipped.push(i);
        }
    }
    let set: HashSet<&[u8]> = slopes.iter().map(|(_, l)| l.as_slice()).collect();
    let zero = vec![0u8; d * d];
    let witness = (0..slopes.len()).into_par_iter().find_map_first(|a| {
        let mut sum = vec![0u8; d * d];
        (a..slopes.len()).find_map(|b| {
            for ((s, x), y) in sum.iter_mut().zip(&slopes[a].1).zip(&slopes[b].1) {
                *s = (x + y) % p;
            }
            (sum != zero && !set.contains(sum.as_slice())).then_some((slopes[a].0, slopes[b].0))
        })
    });
    SlopeReport { slopes: slopes.len(), skipped, closed: witness.is_none(), witness }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use crate::semifield::{catalog, Family, Params};
    use crate::spread::{bblp_spread, spread_from_presemifield};

    #[test]
    fn desarguesian_is_closed() {
        let f = make_field(3, 2, None).unwrap();
        let sp = spread_from_presemifield(&catalog(&f, Family::Field, &Params::default()).unwrap());
        let rep = slope_closure_test(&sp);
        assert!(rep.closed);
        assert_eq!(rep.slopes, 9);
        assert_eq!(rep.skipped, vec![9]);
    }

    #[test]
    fn bblp_gf27_is_not_a_semifield_spread() {
        let f = make_field(3, 3, None).unwrap();
        let rep = slope_closure_test(&bblp_spread(&f, 1).unwrap());
        assert!(!rep.closed);
        assert!(rep.witness.is_some());
    }
}
