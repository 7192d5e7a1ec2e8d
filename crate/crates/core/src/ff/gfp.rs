//! Row reduction over the prime field, on rows of residues stored as `u8`.

use super::inv_mod_prime;

/// Brings `rows` to reduced row-echelon form in place, drops zero rows and
/// returns the rank.
pub fn rref(rows: &mut Vec<Vec<u8>>, p: u32) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(rank, pr);
        let inv = inv_mod_prime(u32::from(rows[rank][col]), p);
        if inv != 1 {
            for v in rows[rank].iter_mut() {
                *v = (u32::from(*v) * inv % p) as u8;
            }
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col] == 0 {
                continue;
            }
            let c = u32::from(row[col]);
            for (a, &b) in row.iter_mut().zip(&pivot) {
                *a = ((u32::from(*a) + p * p - c * u32::from(b)) % p) as u8;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rank
}

pub fn rank(rows: &[Vec<u8>], p: u32) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_gf3() {
        let mut m = vec![vec![2, 1, 0], vec![1, 2, 0], vec![0, 0, 2]];
        assert_eq!(rref(&mut m, 3), 2);
        assert_eq!(m, vec![vec![1, 2, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = vec![vec![1, 0, 1, 1], vec![0, 1, 1, 0], vec![1, 1, 0, 1]];
        assert_eq!(rank(&m, 2), 2);
        assert_eq!(rank(&m, 3), 3);
    }
}
