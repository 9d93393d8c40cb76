//! Segre families ρ(z,ξ), Kähler metric, Einstein fit and projective maps.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::polyring::{FloatPoly, GaussRational, Monomial, Polynomial, Ring, RingRef};
use crate::spaces::{self, Space, SpaceDescriptor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SegreError {
    #[error("metric not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("Einstein structure violated (exponent estimate {0})")]
    EinsteinViolated(f64),
    #[error("point maps into hyperplane at infinity")]
    PointAtInfinity,
    #[error("matrix does not preserve the space (residual {0:e})")]
    NotPreserving(f64),
    #[error("matrix has wrong size {0}, expected {1}")]
    BadMatrix(usize, usize),
    #[error("could not sample a point on the Segre family")]
    SamplingFailed,
}

/// Sample ball radius (max-norm) for floating point work.
pub const SAMPLE_RADIUS: f64 = 0.3;

struct MetricData {
    a: Vec<FloatPoly>,
    da: Vec<Vec<FloatPoly>>,
    w: Vec<f64>,
}

/// ρ(z,ξ) = 1 + Σ w_j a_j(z) a_j(ξ) over the ring (z_1..z_n, ξ_1..ξ_n).
pub struct SegreFamily {
    pub space: Space,
    pub ring: RingRef,
    pub rho: Polynomial,
    metric: OnceLock<MetricData>,
}

impl std::fmt::Debug for SegreFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SegreFamily").field("space", &self.space.desc).finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub struct MetricSample {
    pub point: Vec<Complex64>,
    pub g: DMatrix<Complex64>,
    pub volume_density: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EinsteinFit {
    pub lambda: u32,
    pub c: f64,
    pub max_residual: f64,
}

pub fn build_rho(space: &Space) -> SegreFamily {
    let n = space.n;
    let names: Vec<String> = space.ring.names().iter().chain(space.xi_names.iter()).cloned().collect();
    let ring = Ring::new(&names);
    let zmap: Vec<usize> = (0..n).collect();
    let xmap: Vec<usize> = (n..2 * n).collect();
    let mut rho = Polynomial::one(&ring);
    for (a, w) in space.pairing.iter().zip(&space.weights) {
        let az = a.embed_with(&ring, &zmap).unwrap();
        let ax = a.embed_with(&ring, &xmap).unwrap();
        rho = &rho + &(&az * &ax).scale(w);
    }
    SegreFamily { space: space.clone(), ring, rho, metric: OnceLock::new() }
}

impl SegreFamily {
    pub fn n(&self) -> usize {
        self.space.n
    }

    fn metric_data(&self) -> &MetricData {
        self.metric.get_or_init(|| MetricData {
            a: self.space.pairing.iter().map(FloatPoly::from_poly).collect(),
            da: self
                .space
                .pairing
                .iter()
                .map(|p| (0..self.n()).map(|i| FloatPoly::from_poly(&p.derive_index(i))).collect())
                .collect(),
            w: self.space.weights.iter().map(|w| w.to_complex64().re).collect(),
        })
    }

    /// ρ(z,ξ) in floating point via the pairing.
    pub fn rho_f64(&self, z: &[Complex64], xi: &[Complex64]) -> Complex64 {
        let md = self.metric_data();
        let mut s = Complex64::one();
        for (a, w) in md.a.iter().zip(&md.w) {
            s += a.eval(z) * a.eval(xi) * w;
        }
        s
    }

    /// ρ(z,z̄) = 1 + Σ w_j |a_j(z)|².
    pub fn rho_zzbar(&self, z: &[Complex64]) -> f64 {
        let md = self.metric_data();
        1.0 + md.a.iter().zip(&md.w).map(|(a, w)| w * a.eval(z).norm_sqr()).sum::<f64>()
    }

    /// Exact value of ρ at (z, ξ).
    pub fn rho_exact(&self, z: &[GaussRational], xi: &[GaussRational]) -> GaussRational {
        let vals: Vec<GaussRational> = z.iter().chain(xi).cloned().collect();
        self.rho.eval_slice(&vals)
    }

    /// ρ(z,·) as a polynomial in the ξ-slots of the family ring.
    pub fn rho_at_z(&self, z: &[GaussRational]) -> Polynomial {
        let assign: Vec<(usize, GaussRational)> = z.iter().cloned().enumerate().collect();
        self.rho.specialize(&assign)
    }

    /// ρ(·,ξ) as a polynomial in the z-slots of the family ring.
    pub fn rho_at_xi(&self, xi: &[GaussRational]) -> Polynomial {
        let n = self.n();
        let assign: Vec<(usize, GaussRational)> = xi.iter().cloned().enumerate().map(|(i, v)| (n + i, v)).collect();
        self.rho.specialize(&assign)
    }

    /// Swaps the z and ξ blocks of a family-ring polynomial.
    pub fn swap_blocks(&self, p: &Polynomial) -> Polynomial {
        let n = self.n();
        let map: Vec<usize> = (0..2 * n).map(|i| if i < n { i + n } else { i - n }).collect();
        p.embed_with(&self.ring, &map).unwrap()
    }

    /// Restricts a family-ring polynomial in the z-slots only to the space ring.
    pub fn to_space_ring(&self, p: &Polynomial) -> Polynomial {
        let n = self.n();
        let map: Vec<usize> = (0..2 * n).map(|i| if i < n { i } else { 0 }).collect();
        assert!(p.used_vars().iter().all(|&i| i < n), "polynomial depends on ξ");
        p.embed_with(&self.space.ring, &map).unwrap()
    }
}

pub fn segre_membership(fam: &SegreFamily, z: &[GaussRational], xi: &[GaussRational]) -> bool {
    fam.rho_exact(z, xi).is_zero()
}

pub fn segre_residual(fam: &SegreFamily, z: &[Complex64], xi: &[Complex64]) -> f64 {
    fam.rho_f64(z, xi).norm()
}

/// g_{ij̄} = ∂²log ρ/∂z_i∂ξ_j at ξ = z̄.
pub fn kahler_metric(fam: &SegreFamily, point: &[Complex64]) -> Result<MetricSample, SegreError> {
    let md = fam.metric_data();
    let n = fam.n();
    let vals: Vec<Complex64> = md.a.iter().map(|a| a.eval(point)).collect();
    let jac: Vec<Vec<Complex64>> = md.da.iter().map(|row| row.iter().map(|d| d.eval(point)).collect()).collect();
    let rho = fam.rho_zzbar(point);
    let mut g = DMatrix::<Complex64>::zeros(n, n);
    let mut grad = vec![Complex64::zero(); n];
    for (j, w) in md.w.iter().enumerate() {
        for i in 0..n {
            grad[i] += jac[j][i] * vals[j].conj() * w;
        }
        for i in 0..n {
            if jac[j][i].is_zero() {
                continue;
            }
            for k in 0..n {
                g[(i, k)] += jac[j][i] * jac[j][k].conj() * w;
            }
        }
    }
    for i in 0..n {
        for k in 0..n {
            g[(i, k)] = (g[(i, k)] * rho - grad[i] * grad[k].conj()) / (rho * rho);
        }
    }
    let scale = g.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1.0);
    let dev = (0..n)
        .flat_map(|i| (0..n).map(move |k| (i, k)))
        .map(|(i, k)| (g[(i, k)] - g[(k, i)].conj()).norm())
        .fold(0.0, f64::max);
    if dev > 1e-10 * scale {
        return Err(SegreError::NotHermitian(dev));
    }
    let volume_density = g.clone().determinant().re;
    Ok(MetricSample { point: point.to_vec(), g, volume_density })
}

/// Uniform sample in the polydisc of the given radius.
pub fn random_point(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            let t = rng.gen::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(r, t)
        })
        .collect()
}

/// Random rational with numerator and denominator bounded by `bound`.
pub fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> GaussRational {
    GaussRational::from_ratio(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

pub fn random_gauss(rng: &mut ChaCha8Rng, bound: i64) -> GaussRational {
    GaussRational::from_parts(
        rng.gen_range(-bound..=bound),
        rng.gen_range(1..=bound),
        rng.gen_range(-bound..=bound),
        rng.gen_range(1..=bound),
    )
}

/// Random rational of modulus below one: numerator in [−9,9], denominator in [10,97].
pub fn random_small_rational(rng: &mut ChaCha8Rng) -> GaussRational {
    GaussRational::from_ratio(rng.gen_range(-9..=9), rng.gen_range(10..=97))
}

pub fn einstein_fit(fam: &SegreFamily, sample_count: usize, rng: &mut ChaCha8Rng) -> Result<EinsteinFit, SegreError> {
    let n = fam.n();
    let mut samples = Vec::with_capacity(sample_count);
    for _ in 0..sample_count.max(2) {
        let z = random_point(rng, n, SAMPLE_RADIUS);
        let m = kahler_metric(fam, &z)?;
        samples.push((m.volume_density, fam.rho_zzbar(&z)));
    }
    let (lo, hi) = samples.iter().fold((samples[0], samples[0]), |(lo, hi), s| {
        (if s.1 < lo.1 { *s } else { lo }, if s.1 > hi.1 { *s } else { hi })
    });
    let est = -(lo.0 / hi.0).ln() / (lo.1 / hi.1).ln();
    let lambda = est.round();
    if !est.is_finite() || (est - lambda).abs() > 0.01 || lambda < 1.0 {
        return Err(SegreError::EinsteinViolated(est));
    }
    let cs: Vec<f64> = samples.iter().map(|(v, r)| v * r.powf(lambda)).collect();
    let c = cs.iter().sum::<f64>() / cs.len() as f64;
    let max_residual = cs.iter().map(|x| (x / c - 1.0).abs()).fold(0.0, f64::max);
    Ok(EinsteinFit { lambda: lambda as u32, c, max_residual })
}

/// Max relative deviation of −∂∂̄ log V from λ·g, with ∂∂̄ log V by central differences.
pub fn ricci_residual(fam: &SegreFamily, lambda: f64, points: &[Vec<Complex64>], h: f64) -> Result<f64, SegreError> {
    let n = fam.n();
    let logv = |z: &[Complex64]| -> Result<f64, SegreError> { Ok(kahler_metric(fam, z)?.volume_density.ln()) };
    let mut worst: f64 = 0.0;
    for p in points {
        let g = kahler_metric(fam, p)?.g;
        let shifted = |dirs: &[(usize, bool, f64)]| -> Vec<Complex64> {
            let mut q = p.clone();
            for &(i, imag, s) in dirs {
                q[i] += if imag { Complex64::new(0.0, s) } else { Complex64::new(s, 0.0) };
            }
            q
        };
        // d2(a, b) ≈ ∂²f/∂a∂b for real directions a, b
        let d2 = |a: (usize, bool), b: (usize, bool)| -> Result<f64, SegreError> {
            let f = |sa: f64, sb: f64| logv(&shifted(&[(a.0, a.1, sa), (b.0, b.1, sb)]));
            Ok((f(h, h)? - f(h, -h)? - f(-h, h)? + f(-h, -h)?) / (4.0 * h * h))
        };
        let mut scale: f64 = 0.0;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let re = d2((i, false), (j, false))? + d2((i, true), (j, true))?;
                let im = d2((i, false), (j, true))? - d2((i, true), (j, false))?;
                let ddbar = Complex64::new(re, im) / 4.0;
                let target = g[(i, j)] * lambda;
                scale = scale.max(target.norm());
                dev = dev.max((-ddbar - target).norm());
            }
        }
        worst = worst.max(dev / scale);
    }
    Ok(worst)
}

/// Homogeneous image [1, ψ(z)]·M rescaled to first coordinate 1, returning the cell point.
pub fn apply_projective_map(
    space: &Space,
    m: &DMatrix<Complex64>,
    z: &[Complex64],
) -> Result<Vec<Complex64>, SegreError> {
    let big = space.big_n + 1;
    if m.nrows() != big || m.ncols() != big {
        return Err(SegreError::BadMatrix(m.nrows(), big));
    }
    let psi: Vec<FloatPoly> = space.psi.iter().map(FloatPoly::from_poly).collect();
    let h: Vec<Complex64> = std::iter::once(Complex64::one()).chain(psi.iter().map(|p| p.eval(z))).collect();
    let w: Vec<Complex64> = (0..big).map(|c| (0..big).map(|r| h[r] * m[(r, c)]).sum()).collect();
    let scale = w.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if w[0].norm() <= 1e-12 * scale {
        return Err(SegreError::PointAtInfinity);
    }
    let img: Vec<Complex64> = w.iter().map(|x| x / w[0]).collect();
    let out = img[1..=space.n].to_vec();
    let res = psi.iter().enumerate().map(|(j, p)| (p.eval(&out) - img[j + 1]).norm()).fold(0.0, f64::max);
    let mag = img.iter().map(|x| x.norm()).fold(1.0, f64::max);
    if res > 1e-9 * mag {
        return Err(SegreError::NotPreserving(res));
    }
    Ok(out)
}

/// Exact counterpart of [`apply_projective_map`]; `None` if ψ̃₀ = 0 or the image leaves the space.
pub fn apply_projective_map_exact(space: &Space, m: &Matrix, z: &[GaussRational]) -> Option<Vec<GaussRational>> {
    let h: Vec<GaussRational> =
        std::iter::once(GaussRational::one()).chain(space.psi.iter().map(|p| p.eval_slice(z))).collect();
    let w: Vec<GaussRational> = (0..h.len())
        .map(|c| h.iter().enumerate().fold(GaussRational::zero(), |acc, (r, x)| acc + x * &m[r][c]))
        .collect();
    let inv = w[0].inv()?;
    let img: Vec<GaussRational> = w.iter().map(|x| x * &inv).collect();
    let out = img[1..=space.n].to_vec();
    space.psi.iter().enumerate().all(|(j, p)| p.eval_slice(&out) == img[j + 1]).then_some(out)
}

fn conj_matrix(m: &Matrix) -> Matrix {
    m.iter().map(|r| r.iter().map(|x| x.conj()).collect()).collect()
}

pub fn to_complex_matrix(m: &Matrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.len(), m.len(), |i, j| m[i][j].to_complex64())
}

/// Residual of ρ(σz, σ̄ξ) over `samples` exact pairs on the family (float evaluation).
pub fn segre_invariance_check(
    fam: &SegreFamily,
    m: &DMatrix<Complex64>,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64, SegreError> {
    let mbar = m.map(|x| x.conj());
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (z, xi) = sample_family_pair(fam, rng)?;
        let zf: Vec<Complex64> = z.iter().map(|x| x.to_complex64()).collect();
        let xf: Vec<Complex64> = xi.iter().map(|x| x.to_complex64()).collect();
        let sz = apply_projective_map(&fam.space, m, &zf)?;
        let sx = apply_projective_map(&fam.space, &mbar, &xf)?;
        worst = worst.max(fam.rho_f64(&sz, &sx).norm());
    }
    Ok(worst)
}

/// Exact variant: returns the number of sampled pairs whose image leaves the family.
pub fn segre_invariance_check_exact(
    fam: &SegreFamily,
    m: &Matrix,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<usize, SegreError> {
    let mbar = conj_matrix(m);
    let mut bad = 0;
    for _ in 0..samples {
        let (z, xi) = sample_family_pair(fam, rng)?;
        let sz = apply_projective_map_exact(&fam.space, m, &z).ok_or(SegreError::PointAtInfinity)?;
        let sx = apply_projective_map_exact(&fam.space, &mbar, &xi).ok_or(SegreError::PointAtInfinity)?;
        if !fam.rho_exact(&sz, &sx).is_zero() {
            bad += 1;
        }
    }
    Ok(bad)
}

/// Solves f = 0 for the listed variables of f's ring: all but one (or two) get
/// random rational values, the rest is solved exactly, either linearly or via
/// u² + v² = r ⇔ (u+iv)(u−iv) = r.
pub fn solve_on_hypersurface(
    f: &Polynomial,
    vars: &[usize],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<(usize, GaussRational)>> {
    for _attempt in 0..20 {
        for (pos, &k) in vars.iter().enumerate().rev() {
            let assign: Vec<(usize, GaussRational)> = vars
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &v)| (v, random_small_rational(rng)))
                .collect();
            let g = f.specialize(&assign);
            let mut mask = vec![false; g.ring().len()];
            mask[k] = true;
            if g.degree_in(&mask) != Some(1) {
                continue;
            }
            let lin = g.derive_index(k);
            if !lin.is_constant() {
                continue;
            }
            let c1 = lin.constant_term();
            let c0 = g.specialize(&[(k, GaussRational::zero())]);
            if !c0.is_constant() {
                continue;
            }
            let val = -(c0.constant_term() * c1.inv()?);
            let mut sol = assign;
            sol.push((k, val));
            sol.sort_by_key(|x| x.0);
            return Some(sol);
        }
        if vars.len() >= 2 {
            if let Some(sol) = solve_two_squares(f, vars, rng) {
                return Some(sol);
            }
        }
    }
    None
}

fn solve_two_squares(f: &Polynomial, vars: &[usize], rng: &mut ChaCha8Rng) -> Option<Vec<(usize, GaussRational)>> {
    let (ku, kv) = (vars[0], vars[1]);
    let assign: Vec<(usize, GaussRational)> = vars[2..].iter().map(|&v| (v, random_small_rational(rng))).collect();
    let g = f.specialize(&assign);
    let nv = g.ring().len();
    let mono = |eu: u32, ev: u32| {
        let mut e = vec![0u32; nv];
        e[ku] = eu;
        e[kv] = ev;
        Monomial(e)
    };
    let allowed = [mono(2, 0), mono(0, 2), mono(1, 0), mono(0, 1), mono(0, 0)];
    if g.terms().keys().any(|m| !allowed.contains(m)) {
        return None;
    }
    let a = g.coeff(&allowed[0]);
    if a.is_zero() || g.coeff(&allowed[1]) != a {
        return None;
    }
    let ainv = a.inv()?;
    let two = GaussRational::from_int(2);
    let bu = g.coeff(&allowed[2]) * &ainv * two.inv()?;
    let bv = g.coeff(&allowed[3]) * &ainv * two.inv()?;
    let d = g.coeff(&allowed[4]) * &ainv;
    // (u+bu)² + (v+bv)² = bu² + bv² − d
    let r = &bu * &bu + &bv * &bv - d;
    let s = loop {
        let s = random_gauss(rng, 9);
        if !s.is_zero() {
            break s;
        }
    };
    let rs = r * s.inv()?;
    let u = (&s + &rs) * two.inv()?;
    let v = (&s - &rs) * (two * GaussRational::i()).inv()?;
    let mut sol = assign;
    sol.push((ku, u - bu));
    sol.push((kv, v - bv));
    sol.sort_by_key(|x| x.0);
    Some(sol)
}

/// Exact pair (z, ξ) with ρ(z,ξ) = 0 and z random.
pub fn sample_family_pair(
    fam: &SegreFamily,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<GaussRational>, Vec<GaussRational>), SegreError> {
    let n = fam.n();
    for _ in 0..20 {
        let z: Vec<GaussRational> = (0..n).map(|_| random_small_rational(rng)).collect();
        let f = fam.rho_at_z(&z);
        let vars: Vec<usize> = (n..2 * n).collect();
        if let Some(sol) = solve_on_hypersurface(&f, &vars, rng) {
            let xi: Vec<GaussRational> = sol.into_iter().map(|(_, v)| v).collect();
            debug_assert!(fam.rho_exact(&z, &xi).is_zero());
            return Ok((z, xi));
        }
    }
    Err(SegreError::SamplingFailed)
}

/// Exact point z on the Segre variety Q_ξ.
pub fn sample_on_segre_variety(
    fam: &SegreFamily,
    xi: &[GaussRational],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<GaussRational>, SegreError> {
    let f = fam.rho_at_xi(xi);
    let vars: Vec<usize> = (0..fam.n()).collect();
    let sol = solve_on_hypersurface(&f, &vars, rng).ok_or(SegreError::SamplingFailed)?;
    Ok(sol.into_iter().map(|(_, v)| v).collect())
}

/// p×p minors of a p×(p+q) matrix, over column subsets in lexicographic order.
fn compound(g: &Matrix, p: usize) -> Matrix {
    let m = g.len();
    let subs = spaces::subsets(m, p);
    subs.iter()
        .map(|r| {
            subs.iter()
                .map(|c| {
                    let sub: Matrix = r.iter().map(|&i| c.iter().map(|&j| g[i][j].clone()).collect()).collect();
                    linalg::det(&sub)
                })
                .collect()
        })
        .collect()
}

/// Signed correspondence between Plücker coordinates of (I | Z) and [1, ψ]:
/// entry k is (index into [1, ψ], sign) for the k-th column subset.
fn type1_plucker_map(space: &Space, p: usize, q: usize) -> Vec<(usize, bool)> {
    let ring = &space.ring;
    let z = spaces::type1_matrix(ring, p, q);
    let one = Polynomial::one(ring);
    let zero = Polynomial::zero(ring);
    let full: Vec<Vec<Polynomial>> = (0..p)
        .map(|i| (0..p).map(|j| if i == j { one.clone() } else { zero.clone() }).chain(z[i].iter().cloned()).collect())
        .collect();
    let homog: Vec<Polynomial> = std::iter::once(one.clone()).chain(space.psi.iter().cloned()).collect();
    spaces::subsets(p + q, p)
        .iter()
        .map(|cols| {
            let sub: Vec<Vec<Polynomial>> = full.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
            let d = linalg::poly_det(&sub, ring);
            homog
                .iter()
                .enumerate()
                .find_map(|(k, h)| {
                    if *h == d {
                        Some((k, true))
                    } else if *h == -&d {
                        Some((k, false))
                    } else {
                        None
                    }
                })
                .expect("Plücker coordinate is not a signed embedding coordinate")
        })
        .collect()
}

/// Projective matrix on [1, ψ] induced by g ∈ GL(p+q) acting on the row space of (I | Z).
pub fn type1_induced_matrix(space: &Space, g: &Matrix) -> Matrix {
    let SpaceDescriptor::TypeI(p, q) = space.desc else {
        panic!("type I space expected");
    };
    let c = compound(g, p);
    let map = type1_plucker_map(space, p, q);
    let dim = map.len();
    // P = h·Π with Π[k(S), S] = sign(S); M = Π C Π⁻¹
    let mut pi = vec![vec![GaussRational::zero(); dim]; dim];
    for (s, &(k, pos)) in map.iter().enumerate() {
        pi[k][s] = if pos { GaussRational::one() } else { -GaussRational::one() };
    }
    let pinv = linalg::transpose(&pi);
    linalg::mat_mul(&linalg::mat_mul(&pi, &c), &pinv)
}

/// Exact unitary matrix (I − K)(I + K)⁻¹ with K skew-Hermitian with random entries.
pub fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut k = vec![vec![GaussRational::zero(); dim]; dim];
    for i in 0..dim {
        k[i][i] = GaussRational::i() * random_rational(rng, 9);
        for j in i + 1..dim {
            k[i][j] = random_gauss(rng, 9);
            k[j][i] = -k[i][j].conj();
        }
    }
    let id = linalg::identity(dim);
    let minus: Matrix = (0..dim).map(|i| (0..dim).map(|j| &id[i][j] - &k[i][j]).collect()).collect();
    let plus: Matrix = (0..dim).map(|i| (0..dim).map(|j| &id[i][j] + &k[i][j]).collect()).collect();
    linalg::mat_mul(&minus, &linalg::inverse(&plus).expect("I + K is invertible for skew-Hermitian K"))
}

/// Permutation of the cell coordinates of a type IV space acting on [1, z, ½Σz²].
pub fn type4_permutation_matrix(n: usize, perm: &[usize]) -> Matrix {
    let mut m = vec![vec![GaussRational::zero(); n + 2]; n + 2];
    m[0][0] = GaussRational::one();
    m[n + 1][n + 1] = GaussRational::one();
    for (i, &j) in perm.iter().enumerate() {
        m[i + 1][j + 1] = GaussRational::one();
    }
    m
}

/// Exact check results feeding the segre report.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityChecks {
    pub rho_origin_is_one: bool,
    pub swap_symmetric: bool,
    pub rho_zzbar_at_least_one: bool,
    /// Determinant (I, III) or squared-Pfaffian (II) identity; `None` when not applicable.
    pub determinant_identity: Option<bool>,
}

pub fn identity_checks(fam: &SegreFamily, trials: usize, rng: &mut ChaCha8Rng) -> IdentityChecks {
    let n = fam.n();
    let zero_z: Vec<(usize, GaussRational)> = (0..n).map(|i| (i, GaussRational::zero())).collect();
    let rho_origin_is_one = fam.rho.specialize(&zero_z) == Polynomial::one(&fam.ring);
    let swap_symmetric = fam.swap_blocks(&fam.rho) == fam.rho;
    let rho_zzbar_at_least_one = (0..trials).all(|_| {
        let z = random_point(rng, n, 1.0);
        fam.rho_zzbar(&z) >= 1.0 - 1e-12
    });
    let determinant_identity = match fam.space.desc {
        SpaceDescriptor::TypeI(..) | SpaceDescriptor::TypeIII(_) => Some(det_identity(fam, trials, rng)),
        SpaceDescriptor::TypeII(_) => Some(pfaffian_identity(fam, trials, rng)),
        _ => None,
    };
    IdentityChecks { rho_origin_is_one, swap_symmetric, rho_zzbar_at_least_one, determinant_identity }
}

fn cell_matrix(desc: SpaceDescriptor, vals: &[GaussRational]) -> Matrix {
    match desc {
        SpaceDescriptor::TypeI(p, q) => (0..p).map(|i| vals[i * q..(i + 1) * q].to_vec()).collect(),
        SpaceDescriptor::TypeII(n) => {
            let mut m = vec![vec![GaussRational::zero(); n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    m[i][j] = vals[k].clone();
                    m[j][i] = -vals[k].clone();
                    k += 1;
                }
            }
            m
        }
        SpaceDescriptor::TypeIII(n) => {
            let mut m = vec![vec![GaussRational::zero(); n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    m[i][j] = vals[k].clone();
                    m[j][i] = vals[k].clone();
                    k += 1;
                }
            }
            m
        }
        _ => panic!("no matrix model for {desc}"),
    }
}

/// det(I + Z Ξᵗ) for cell points z, ξ.
pub fn det_i_plus(desc: SpaceDescriptor, z: &[GaussRational], xi: &[GaussRational]) -> GaussRational {
    let zm = cell_matrix(desc, z);
    let xm = cell_matrix(desc, xi);
    let mut prod = linalg::mat_mul(&zm, &linalg::transpose(&xm));
    for (i, row) in prod.iter_mut().enumerate() {
        row[i] = &row[i] + &GaussRational::one();
    }
    linalg::det(&prod)
}

/// ρ(z,z̄) = det(I + Z Z̄ᵗ) at random Gaussian-rational points.
fn det_identity(fam: &SegreFamily, trials: usize, rng: &mut ChaCha8Rng) -> bool {
    (0..trials).all(|_| {
        let z: Vec<GaussRational> = (0..fam.n()).map(|_| random_gauss(rng, 97)).collect();
        let zb: Vec<GaussRational> = z.iter().map(|x| x.conj()).collect();
        fam.rho_exact(&z, &zb) == det_i_plus(fam.space.desc, &z, &zb)
    })
}

/// ρ(z,ξ)² = det(I + Z Ξᵗ) at random rational antisymmetric Z, Ξ.
fn pfaffian_identity(fam: &SegreFamily, trials: usize, rng: &mut ChaCha8Rng) -> bool {
    (0..trials).all(|_| {
        let z: Vec<GaussRational> = (0..fam.n()).map(|_| random_gauss(rng, 97)).collect();
        let xi: Vec<GaussRational> = (0..fam.n()).map(|_| random_gauss(rng, 97)).collect();
        let r = fam.rho_exact(&z, &xi);
        &r * &r == det_i_plus(fam.space.desc, &z, &xi)
    })
}
