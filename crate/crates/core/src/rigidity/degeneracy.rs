use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{random_sample_point, small_point, RigidityError};
use crate::linalg::EchelonBasis;
use crate::polyring::{FloatPoly, GaussRational, Polynomial};

/// Relation Σ g_i ψ_i ≡ 0 recovered on one slice z_m = value.
#[derive(Clone, Debug, Serialize)]
pub struct SliceRelation {
    pub value: f64,
    pub g: Vec<[f64; 2]>,
    pub null_dim: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegeneracyReport {
    pub pivot: usize,
    pub jet_rank: usize,
    pub slices: Vec<SliceRelation>,
    pub max_residual: f64,
    /// max |g_i| (i < m) at slice 0 relative to max |g|, when ψ_j = z_j (j ≤ m) and ψ_j = O(|z|²) beyond.
    pub leading_vanishing: Option<f64>,
}

const SLICE_STEP: f64 = 0.1;
const NULL_TOL: f64 = 1e-9;

/// z̃-rank of order k (derivatives in all but the last variable) at a rational point.
fn psi_jet_rank(psi: &[Polynomial], k: u32, rng: &mut ChaCha8Rng) -> usize {
    let m = psi[0].ring().len();
    let z = small_point(m, rng);
    let mut basis = EchelonBasis::new();
    let mut orders = vec![vec![0u32; m]];
    let mut frontier = orders.clone();
    for _ in 0..k {
        let mut next = Vec::new();
        for o in &frontier {
            let start = o.iter().rposition(|&e| e > 0).unwrap_or(0);
            for i in start..m - 1 {
                let mut o2 = o.clone();
                o2[i] += 1;
                next.push(o2);
            }
        }
        orders.extend(next.iter().cloned());
        frontier = next;
    }
    for o in &orders {
        let row: Vec<GaussRational> = psi.iter().map(|p| p.derive_multi(o).eval_slice(&z)).collect();
        basis.try_add(&row);
        if basis.rank() == psi.len() {
            break;
        }
    }
    basis.rank()
}

fn leading_structure(psi: &[Polynomial]) -> bool {
    let m = psi[0].ring().len();
    psi.len() > m
        && (0..m).all(|i| psi[i] == Polynomial::var_index(psi[i].ring(), i))
        && psi[m..].iter().all(|p| p.terms().keys().all(|mono| mono.degree() >= 2))
}

/// Recovers holomorphic coefficients g(z_m) with Σ g_i(z_m) ψ_i ≡ 0 on slices of the
/// last variable, by null vectors of sample matrices over a grid in the other variables.
pub fn degeneracy_relation(
    psi: &[Polynomial],
    slice_count: usize,
    pivot: Option<usize>,
    rng: &mut ChaCha8Rng,
) -> Result<DegeneracyReport, RigidityError> {
    let Some(first) = psi.first() else {
        return Err(RigidityError::NotDegenerate);
    };
    let m = first.ring().len();
    let big_n = psi.len();
    if m < 2 || psi.iter().any(|p| p.ring().names() != first.ring().names()) {
        return Err(RigidityError::BadMap("ψ must share one ring of at least two variables".into()));
    }
    let order = (big_n + 1).saturating_sub(m) as u32;
    let jet_rank = psi_jet_rank(psi, order, rng);
    if jet_rank == big_n {
        return Err(RigidityError::NotDegenerate);
    }
    let fp: Vec<FloatPoly> = psi.iter().map(FloatPoly::from_poly).collect();
    let grid: Vec<Vec<Complex64>> = (0..4 * big_n).map(|_| random_sample_point(rng, m - 1)).collect();
    let mut raw = Vec::new();
    for k in 0..slice_count.max(1) {
        let s = Complex64::new(SLICE_STEP * k as f64, 0.0);
        let a = DMatrix::from_fn(grid.len(), big_n, |r, c| {
            let mut pt = grid[r].clone();
            pt.push(s);
            fp[c].eval(&pt)
        });
        let scale = a.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
        let live: Vec<usize> = (0..big_n).filter(|&c| a.column(c).iter().any(|x| x.norm() > 1e-14 * scale)).collect();
        let sub = DMatrix::from_fn(grid.len(), live.len(), |r, c| a[(r, live[c])]);
        let svd = sub.svd(false, true);
        let sv = &svd.singular_values;
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let null_dim = live.len() - sv.iter().filter(|&&x| x > NULL_TOL * smax).count();
        if null_dim == 0 {
            return Err(RigidityError::NotDegenerate);
        }
        let v_t = svd.v_t.expect("requested V");
        let kmin = (0..sv.len()).min_by(|&x, &y| sv[x].total_cmp(&sv[y])).unwrap();
        let v: Vec<Complex64> = v_t.row(kmin).iter().map(|x| x.conj()).collect();
        let mut g = vec![Complex64::zero(); big_n];
        for (c, &col) in live.iter().enumerate() {
            g[col] = v[c];
        }
        raw.push((s.re, g, null_dim, a));
    }
    let pivot = pivot.unwrap_or_else(|| {
        let g0 = &raw[0].1;
        (0..big_n).max_by(|&x, &y| g0[x].norm().total_cmp(&g0[y].norm())).unwrap()
    });
    if pivot >= big_n {
        return Err(RigidityError::BadMap(format!("pivot {pivot} out of range")));
    }
    let mut slices = Vec::new();
    let mut leading = None;
    for (k, (value, g, null_dim, a)) in raw.into_iter().enumerate() {
        let gmax = g.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let unit: DVector<Complex64> = DVector::from_iterator(big_n, g.iter().map(|x| x / gmax));
        let residual = (&a * &unit).iter().map(|x| x.norm()).fold(0.0, f64::max);
        if k == 0 && leading_structure(psi) {
            leading = Some((0..m).map(|i| unit[i].norm()).fold(0.0, f64::max));
        }
        let p = if g[pivot].norm() > 1e-8 * gmax {
            pivot
        } else {
            (0..big_n).max_by(|&x, &y| g[x].norm().total_cmp(&g[y].norm())).unwrap()
        };
        let gp = g[p];
        slices.push(SliceRelation {
            value,
            g: g.iter().map(|x| x / gp).map(|x| [x.re, x.im]).collect(),
            null_dim,
            residual,
        });
    }
    let max_residual = slices.iter().map(|s| s.residual).fold(0.0, f64::max);
    Ok(DegeneracyReport { pivot, jet_rank, slices, max_residual, leading_vanishing: leading })
}
