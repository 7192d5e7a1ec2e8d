//! The Suzuki-Lüneburg spread of `W = V ⊕ V`, `V = F ⊕ F`, `q = 2^(2k+1)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElem, VecSpace};

use super::{Provenance, Spread, Subspace, SymplecticSpace};

fn half_degree(field: &Field) -> Result<u32> {
    if field.p() != 2 {
        return Err(Error::EvenCharacteristicRequired(field.p()));
    }
    let r = field.r() as u32;
    if r.is_multiple_of(2) || r < 3 {
        return Err(Error::Parameter(format!("q = 2^{r} is not of the form 2^(2k+1) with k ≥ 1")));
    }
    Ok((r - 1) / 2)
}

/// `M_c` for `c = (α, β)`, with `σ(α) = α^(2^(k+1))`:
/// `[[α, γ], [γ, β]]`, `γ = α^(σ⁻¹) + β^(1+σ⁻¹)`, where `σ⁻¹ = x^(2^k)`.
pub fn suzuki_matrix(field: &Field, alpha: FieldElem, beta: FieldElem) -> Result<[[FieldElem; 2]; 2]> {
    let k = i64::from(half_degree(field)?);
    let f = field;
    let gamma = f.add(f.frobenius_pow(alpha, k), f.mul(beta, f.frobenius_pow(beta, k)));
    Ok([[alpha, gamma], [gamma, beta]])
}

/// `{(0, y)}` and `{(x, x·M_c)}` for every `c ∈ V`, `x` a row vector.
pub fn suzuki_spread(field: &Field) -> Result<Spread> {
    half_degree(field)?;
    let v = VecSpace::new(field.clone(), 2)?;
    let space = SymplecticSpace::new(v.clone());
    let f = field;
    let basis: Vec<u32> = (0..v.prime_dim()).map(|t| v.unit(t)).collect();
    let mut members: Vec<Subspace> = (0..v.n())
        .into_par_iter()
        .map(|c| {
            let (alpha, beta) = v.split(c);
            let m = suzuki_matrix(f, alpha, beta).expect("field checked above");
            Subspace::from_points(
                &space,
                basis.iter().map(|&e| {
                    let (x1, x2) = v.split(e);
                    let y1 = f.add(f.mul(x1, m[0][0]), f.mul(x2, m[1][0]));
                    let y2 = f.add(f.mul(x1, m[0][1]), f.mul(x2, m[1][1]));
                    space.point(e, v.join(y1, y2))
                }),
            )
        })
        .collect();
    members.push(Subspace::from_points(&space, basis.iter().map(|&e| space.point(0, e))));
    Ok(Spread::new(space, members, Provenance::Suzuki))
}
