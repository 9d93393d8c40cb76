use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use super::{random_sample_point, FloatMap, RationalMap, RigidityError};
use crate::segre::{kahler_metric, SegreFamily};

const RETRIES: usize = 20;

fn jacobian_matrix(jac: &[Vec<Complex64>]) -> DMatrix<Complex64> {
    DMatrix::from_fn(jac.len(), jac.len(), |a, i| jac[a][i])
}

/// Samples where every map is regular, with F_j(z) returned alongside.
fn regular_samples(
    fam: &SegreFamily,
    maps: &[FloatMap],
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(Vec<Complex64>, Vec<(Vec<Complex64>, Vec<Vec<Complex64>>)>)>, RigidityError> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut found = None;
        for _ in 0..RETRIES {
            let z = random_sample_point(rng, fam.n());
            if let Some(evals) = maps.iter().map(|m| m.eval(&z)).collect::<Option<Vec<_>>>() {
                found = Some((z, evals));
                break;
            }
        }
        out.push(found.ok_or(RigidityError::SamplingFailed)?);
    }
    Ok(out)
}

/// max |Σ λ_j |J_{F_j}|² ρ(F_j,F̄_j)^{−λ} / ρ(z,z̄)^{−λ} − 1| over samples.
pub fn volume_equation_check(
    fam: &SegreFamily,
    maps: &[RationalMap],
    lambdas: &[f64],
    sample_count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64, RigidityError> {
    let lambda = fam.space.einstein_lambda.ok_or(RigidityError::UnknownLambda)? as i32;
    if maps.len() != lambdas.len() || maps.is_empty() {
        return Err(RigidityError::BadMap("one weight per map required".into()));
    }
    if lambdas.iter().any(|&l| !(l > 0.0)) {
        return Err(RigidityError::BadMap("weights must be positive".into()));
    }
    let fm: Vec<FloatMap> = maps.iter().map(FloatMap::new).collect();
    let mut worst: f64 = 0.0;
    for (z, evals) in regular_samples(fam, &fm, sample_count, rng)? {
        let rhs = fam.rho_zzbar(&z).powi(-lambda);
        let lhs: f64 = evals
            .iter()
            .zip(lambdas)
            .map(|((fz, jac), l)| l * jacobian_matrix(jac).determinant().norm_sqr() * fam.rho_zzbar(fz).powi(-lambda))
            .sum();
        worst = worst.max((lhs / rhs - 1.0).abs());
    }
    Ok(worst)
}

/// max entrywise |Jᵀ g(F) J̄ − g| at the given points.
pub fn isometry_pullback_at(
    fam: &SegreFamily,
    f: &RationalMap,
    points: &[Vec<Complex64>],
) -> Result<f64, RigidityError> {
    let fm = FloatMap::new(f);
    let mut worst: f64 = 0.0;
    for z in points {
        let (fz, jac) = fm.eval(z).ok_or(RigidityError::DenominatorVanishes)?;
        let j = jacobian_matrix(&jac);
        let pulled = j.transpose() * kahler_metric(fam, &fz)?.g * j.map(|x| x.conj());
        let g = kahler_metric(fam, z)?.g;
        worst = worst.max((pulled - g).iter().map(|x| x.norm()).fold(0.0, f64::max));
    }
    Ok(worst)
}

pub fn isometry_pullback_check(
    fam: &SegreFamily,
    f: &RationalMap,
    sample_count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64, RigidityError> {
    let fm = [FloatMap::new(f)];
    let points: Vec<Vec<Complex64>> =
        regular_samples(fam, &fm, sample_count, rng)?.into_iter().map(|(z, _)| z).collect();
    isometry_pullback_at(fam, f, &points)
}
