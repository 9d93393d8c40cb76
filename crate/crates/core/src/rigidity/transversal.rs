use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::RigidityError;
use crate::linalg::{self, Matrix};
use crate::polyring::GaussRational;
use crate::segre::{sample_on_segre_variety, SegreFamily};

fn xi_gradient(
    fam: &SegreFamily,
    z: &[GaussRational],
    xi: &[GaussRational],
) -> Result<Vec<GaussRational>, RigidityError> {
    if !fam.rho_exact(z, xi).is_zero() {
        return Err(RigidityError::NotOnFamily);
    }
    let n = fam.n();
    let vals: Vec<GaussRational> = z.iter().chain(xi).cloned().collect();
    Ok((n..2 * n).map(|k| fam.rho.derive_index(k).eval_slice(&vals)).collect())
}

/// Exact rank of [∇_ξ ρ(z⁰,·); ∇_ξ ρ(z¹,·)] at ξ⁰.
pub fn transversality_rank(
    fam: &SegreFamily,
    xi0: &[GaussRational],
    z0: &[GaussRational],
    z1: &[GaussRational],
) -> Result<usize, RigidityError> {
    let m = vec![xi_gradient(fam, z0, xi0)?, xi_gradient(fam, z1, xi0)?];
    Ok(linalg::rank(&m))
}

/// Data (ξ⁰ = e₁, z⁰, z¹ ∈ Q_{ξ⁰}) for the transversality check.
pub fn transversality_recipe(
    fam: &SegreFamily,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<GaussRational>, Vec<GaussRational>, Vec<GaussRational>), RigidityError> {
    let n = fam.n();
    let mut xi = vec![GaussRational::zero(); n];
    xi[0] = GaussRational::one();
    let z0 = sample_on_segre_variety(fam, &xi, rng)?;
    let z1 = sample_on_segre_variety(fam, &xi, rng)?;
    Ok((xi, z0, z1))
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatteningSeed {
    /// ξ-slots solved for by the two family equations.
    pub slots: (usize, usize),
    pub jacobian: String,
    pub nonzero: bool,
}

/// Jacobian of {ρ(s·z⁰,ξ), ρ(t·z¹,ξ), ξ̃_k − ξ_k (k outside the slot pair)} in ξ at
/// (s,t) = (1,1), ξ = ξ⁰, for the first slot pair with a nonzero 2×2 minor.
pub fn flattening_jacobian(
    fam: &SegreFamily,
    xi0: &[GaussRational],
    z0: &[GaussRational],
    z1: &[GaussRational],
) -> Result<FlatteningSeed, RigidityError> {
    let g0 = xi_gradient(fam, z0, xi0)?;
    let g1 = xi_gradient(fam, z1, xi0)?;
    let n = g0.len();
    for i in 0..n {
        for j in i + 1..n {
            if (&g0[i] * &g1[j] - &g0[j] * &g1[i]).is_zero() {
                continue;
            }
            let mut m: Matrix = vec![g0.clone(), g1.clone()];
            for k in (0..n).filter(|&k| k != i && k != j) {
                let mut row = vec![GaussRational::zero(); n];
                row[k] = -GaussRational::one();
                m.push(row);
            }
            let d = linalg::det(&m);
            return Ok(FlatteningSeed { slots: (i, j), nonzero: !d.is_zero(), jacobian: d.to_string() });
        }
    }
    Err(RigidityError::FlatteningSeedFailed)
}
