use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Presemifield;

/// Point counts up to which distributivity is checked on all triples.
const EXHAUSTIVE_DISTRIBUTIVE: u32 = 81;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Exhaustive distributivity for `|V| <= 81`, sampled beyond with
    /// `10^5` triples and seed 0.
    Auto,
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub label: String,
    pub n: u32,
    /// `exhaustive` or `sampled`.
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub distributivity_checks: u64,
    pub zero_divisor_checks: u64,
    /// `[x, y, z]` with `x∘(y+z) != x∘y + x∘z`.
    pub left_distributive_failure: Option<[u32; 3]>,
    /// `[x, y, z]` with `(x+y)∘z != x∘z + y∘z`.
    pub right_distributive_failure: Option<[u32; 3]>,
    /// `[x, y]`, both nonzero, with `x∘y = 0`.
    pub zero_divisor: Option<[u32; 2]>,
    /// `[x, y]` with `x∘y != y∘x`, if one was seen.
    pub noncommuting_pair: Option<[u32; 2]>,
    pub passed: bool,
}

/// Checks both distributive laws and the absence of zero divisors.
///
/// Zero divisors are ruled out on the full table when `|V| <= 729`.
/// Beyond that, for each chosen `x` the map `y ↦ x∘y` is shown injective
/// by computing its rank over GF(p) on a basis; this leans on the
/// additivity established by the distributivity checks.
pub fn verify_presemifield(s: &Presemifield, mode: CheckMode) -> AxiomReport {
    let space = s.space();
    let n = space.n();
    let (exhaustive, samples, seed) = match mode {
        CheckMode::Exhaustive => (true, 0, None),
        CheckMode::Auto if n <= EXHAUSTIVE_DISTRIBUTIVE => (true, 0, None),
        CheckMode::Auto => (false, 100_000, Some(0)),
        CheckMode::Sampled { samples, seed } => (false, samples, Some(seed)),
    };

    let left = |x: u32, y: u32, z: u32| s.mul(x, space.add(y, z)) == space.add(s.mul(x, y), s.mul(x, z));
    let right = |x: u32, y: u32, z: u32| s.mul(space.add(x, y), z) == space.add(s.mul(x, z), s.mul(y, z));

    let (left_fail, right_fail, distributivity_checks) = if exhaustive {
        let find = |law: &(dyn Fn(u32, u32, u32) -> bool + Sync)| {
            (0..n).into_par_iter().find_map_first(|x| {
                (0..n).find_map(|y| (0..n).find(|&z| !law(x, y, z)).map(|z| [x, y, z]))
            })
        };
        (find(&left), find(&right), u64::from(n).pow(3))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
        let triples: Vec<[u32; 3]> =
            (0..samples).map(|_| [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)]).collect();
        let l = triples.par_iter().find_first(|t| !left(t[0], t[1], t[2])).copied();
        let r = triples.par_iter().find_first(|t| !right(t[0], t[1], t[2])).copied();
        (l, r, samples)
    };

    let (zero_divisor, zero_divisor_checks) = if s.has_table() {
        let zd = (1..n).into_par_iter().find_map_first(|x| (1..n).find(|&y| s.mul(x, y) == 0).map(|y| [x, y]));
        (zd, u64::from(n - 1).pow(2))
    } else {
        // Left multiplications by every x when the budget allows, else by a
        // seeded sample.
        let xs: Vec<u32> = if exhaustive || samples >= u64::from(n - 1) {
            (1..n).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0) ^ 0x5a5a);
            (0..samples).map(|_| rng.gen_range(1..n)).collect()
        };
        let zd = xs.par_iter().find_map_first(|&x| kernel_witness(s, x).map(|y| [x, y]));
        (zd, xs.len() as u64)
    };

    let noncommuting_pair = if s.has_table() || exhaustive {
        (0..n).into_par_iter().find_map_first(|x| (0..x).find(|&y| s.mul(x, y) != s.mul(y, x)).map(|y| [x, y]))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0) ^ 0xc0c0);
        (0..samples.min(100_000))
            .map(|_| [rng.gen_range(0..n), rng.gen_range(0..n)])
            .find(|&[x, y]| s.mul(x, y) != s.mul(y, x))
    };

    let passed = left_fail.is_none() && right_fail.is_none() && zero_divisor.is_none();
    AxiomReport {
        label: s.label().to_string(),
        n,
        mode: if exhaustive { "exhaustive" } else { "sampled" }.into(),
        seed,
        distributivity_checks,
        zero_divisor_checks,
        left_distributive_failure: left_fail,
        right_distributive_failure: right_fail,
        zero_divisor,
        noncommuting_pair,
        passed,
    }
}

/// A nonzero `y` with `x∘y = 0`, found from the GF(p)-matrix of
/// `y ↦ x∘y`.
fn kernel_witness(s: &Presemifield, x: u32) -> Option<u32> {
    let space = s.space();
    let p = space.field().p();
    let d = space.prime_dim();
    // Columns are images of unit vectors; eliminate on the transpose so
    // that the recorded combinations give a kernel vector directly.
    let mut rows: Vec<(Vec<u8>, Vec<u8>)> = (0..d)
        .map(|k| {
            let mut tag = vec![0u8; d];
            tag[k] = 1;
            (space.digits(s.mul(x, space.unit(k))), tag)
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..d {
        let Some(pr) = (pivot_row..d).find(|&i| rows[i].0[col] != 0) else { continue };
        rows.swap(pivot_row, pr);
        let inv = crate::ff::inv_mod_prime(u32::from(rows[pivot_row].0[col]), p);
        let (pv, pt) = rows[pivot_row].clone();
        for i in 0..d {
            if i == pivot_row || rows[i].0[col] == 0 {
                continue;
            }
            let c = u32::from(rows[i].0[col]) * inv % p;
            for (a, b) in rows[i].0.iter_mut().zip(&pv) {
                *a = ((u32::from(*a) + p * p - c * u32::from(*b)) % p) as u8;
            }
            for (a, b) in rows[i].1.iter_mut().zip(&pt) {
                *a = ((u32::from(*a) + p * p - c * u32::from(*b)) % p) as u8;
            }
        }
        pivot_row += 1;
    }
    rows.iter().find(|(v, _)| v.iter().all(|&c| c == 0)).map(|(_, tag)| space.from_digits(tag))
}
