//! Rigidity hypotheses: jet ranks and Λ witnesses, transversal flattening,
//! support facts and irreducibility, degeneracy relations and map checks.

mod bordered;
mod degeneracy;
mod irreducible;
mod transversal;
mod volume;

pub use bordered::{bordered_identity_check, bordered_vanish_probe};
pub use degeneracy::{degeneracy_relation, DegeneracyReport, SliceRelation};
pub use irreducible::{irreducibility_oracle, support_claims, ClaimCheck, OracleOutcome, SupportReport};
pub use transversal::{flattening_jacobian, transversality_rank, transversality_recipe, FlatteningSeed};
pub use volume::{isometry_pullback_at, isometry_pullback_check, volume_equation_check};

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, modular::Fq2, modular::ModEchelon, EchelonBasis, Matrix};
use crate::polyring::{FloatPoly, GaussRational, Monomial, PolyError, PolyFraction, Polynomial, Ring, RingRef};
use crate::segre::{random_gauss, random_small_rational, SegreError, SegreFamily};
use crate::spaces::{Space, SpaceDescriptor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RigidityError {
    #[error("point is not on the Segre family")]
    NotOnFamily,
    #[error("Λ undefined at point")]
    LambdaUndefined,
    #[error("distinguished derivative vanishes identically")]
    ZeroDistinguishedDerivative,
    #[error("invalid multi-indices: {0}")]
    BadBetas(String),
    #[error("invalid map: {0}")]
    BadMap(String),
    #[error("map denominator vanishes at the base point")]
    DenominatorVanishes,
    #[error("input not degenerate")]
    NotDegenerate,
    #[error("flattening seed failed")]
    FlatteningSeedFailed,
    #[error("null direction: {0}")]
    NullDirection(String),
    #[error("jet ranks decreased: {0:?}")]
    MonotonicityViolated(Vec<usize>),
    #[error("Einstein exponent unknown for this space")]
    UnknownLambda,
    #[error("sampling failed after retries")]
    SamplingFailed,
    #[error(transparent)]
    Segre(#[from] SegreError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Holomorphic map F = (F₁..F_n), each component a quotient of polynomials in z.
#[derive(Clone, Debug)]
pub struct RationalMap {
    pub ring: RingRef,
    pub components: Vec<(Polynomial, Polynomial)>,
}

impl RationalMap {
    pub fn new(ring: &RingRef, components: Vec<(Polynomial, Polynomial)>) -> Result<Self, RigidityError> {
        if components.len() != ring.len() {
            return Err(RigidityError::BadMap(format!("{} components for {} variables", components.len(), ring.len())));
        }
        for (num, den) in &components {
            if num.ring().names() != ring.names() || den.ring().names() != ring.names() {
                return Err(RigidityError::BadMap("component in a different ring".into()));
            }
            if den.constant_term().is_zero() {
                return Err(RigidityError::BadMap("denominator vanishes at 0".into()));
            }
        }
        Ok(RationalMap { ring: ring.clone(), components })
    }

    pub fn identity(space: &Space) -> Self {
        Self::polynomial(space, Polynomial::vars(&space.ring))
    }

    pub fn polynomial(space: &Space, comps: Vec<Polynomial>) -> Self {
        let one = Polynomial::one(&space.ring);
        RationalMap { ring: space.ring.clone(), components: comps.into_iter().map(|p| (p, one.clone())).collect() }
    }

    pub fn scaling(space: &Space, c: &GaussRational) -> Self {
        Self::polynomial(space, Polynomial::vars(&space.ring).iter().map(|v| v.scale(c)).collect())
    }

    /// Cell restriction of the projective map [1, ψ] ↦ [1, ψ]·M.
    pub fn from_projective(space: &Space, m: &Matrix) -> Result<Self, RigidityError> {
        let dim = space.big_n + 1;
        if m.len() != dim || m.iter().any(|r| r.len() != dim) {
            return Err(RigidityError::BadMap(format!("matrix must be {dim}×{dim}")));
        }
        let h: Vec<Polynomial> =
            std::iter::once(Polynomial::one(&space.ring)).chain(space.psi.iter().cloned()).collect();
        let col = |c: usize| {
            h.iter().enumerate().fold(Polynomial::zero(&space.ring), |acc, (r, p)| &acc + &p.scale(&m[r][c]))
        };
        let den = col(0);
        let comps = (1..=space.n).map(|c| (col(c), den.clone())).collect();
        Self::new(&space.ring, comps)
    }

    pub fn is_polynomial(&self) -> bool {
        self.components.iter().all(|(_, d)| d.is_constant())
    }

    pub fn eval_exact(&self, z: &[GaussRational]) -> Option<Vec<GaussRational>> {
        self.components.iter().map(|(n, d)| d.eval_slice(z).inv().map(|i| n.eval_slice(z) * i)).collect()
    }

    /// Taylor expansion of F(base + Σ h_i dirs_i) to the given order, in `hring`.
    fn series(
        &self,
        base: &[GaussRational],
        dirs: &[Vec<GaussRational>],
        hring: &RingRef,
        order: u32,
    ) -> Result<Vec<Polynomial>, RigidityError> {
        let hv = Polynomial::vars(hring);
        let args: Vec<Polynomial> = (0..base.len())
            .map(|k| {
                dirs.iter()
                    .zip(&hv)
                    .fold(Polynomial::constant(hring, base[k].clone()), |acc, (d, h)| &acc + &h.scale(&d[k]))
            })
            .collect();
        self.components
            .iter()
            .map(|(num, den)| {
                let ns = num.compose(&args).truncate(order);
                if den.is_constant() {
                    let inv = den.constant_term().inv().ok_or(RigidityError::DenominatorVanishes)?;
                    return Ok(ns.scale(&inv));
                }
                let ds = den.compose(&args).truncate(order);
                let d0 = ds.constant_term();
                let d0inv = d0.inv().ok_or(RigidityError::DenominatorVanishes)?;
                // 1/(d₀(1+t)) = d₀⁻¹ Σ (−t)^k
                let t = (&ds - &Polynomial::constant(hring, d0)).scale(&-d0inv.clone());
                let mut inv = Polynomial::one(hring);
                let mut pw = Polynomial::one(hring);
                for _ in 0..order {
                    pw = pw.mul_truncated(&t, order);
                    if pw.is_zero() {
                        break;
                    }
                    inv = &inv + &pw;
                }
                Ok(ns.mul_truncated(&inv, order).scale(&d0inv))
            })
            .collect()
    }
}

/// Jet data of ψ∘F at a point along constant directions: (β, row) in graded order.
fn jet_rows(
    space: &Space,
    f: &RationalMap,
    base: &[GaussRational],
    dirs: &[Vec<GaussRational>],
    order: u32,
) -> Result<Vec<(Vec<u32>, Vec<GaussRational>)>, RigidityError> {
    let names: Vec<String> = (1..=dirs.len()).map(|i| format!("h{i}")).collect();
    let hring = Ring::new(&names);
    let series = f.series(base, dirs, &hring, order)?;
    let comps: Vec<Polynomial> = space.psi.iter().map(|p| p.compose(&series).truncate(order)).collect();
    let mut rows: BTreeMap<(u32, Reverse<Vec<u32>>), Vec<GaussRational>> = BTreeMap::new();
    let big_n = comps.len();
    for (j, c) in comps.iter().enumerate() {
        for (m, coef) in c.terms() {
            let key = (m.degree(), Reverse(m.0.clone()));
            let fact = m.0.iter().fold(GaussRational::one(), |acc, &e| acc * factorial(e));
            rows.entry(key).or_insert_with(|| vec![GaussRational::zero(); big_n])[j] = coef * &fact;
        }
    }
    let zero_key = (0, Reverse(vec![0; dirs.len()]));
    rows.entry(zero_key).or_insert_with(|| vec![GaussRational::zero(); big_n]);
    Ok(rows.into_iter().map(|((_, Reverse(b)), r)| (b, r)).collect())
}

fn factorial(e: u32) -> GaussRational {
    (1..=e as i64).fold(GaussRational::one(), |acc, k| acc * GaussRational::from_int(k))
}

fn unit_dirs(n: usize, dropped: usize) -> Vec<Vec<GaussRational>> {
    (0..n)
        .filter(|&i| i != dropped)
        .map(|i| (0..n).map(|k| if k == i { GaussRational::one() } else { GaussRational::zero() }).collect())
        .collect()
}

/// Generic point near 0: every coordinate a nonzero rational of modulus below one.
fn small_point(n: usize, rng: &mut ChaCha8Rng) -> Vec<GaussRational> {
    (0..n)
        .map(|_| loop {
            let x = random_small_rational(rng);
            if !x.is_zero() {
                break x;
            }
        })
        .collect()
}

/// Highest order any jet row can carry; past it all rows vanish.
fn order_cap(space: &Space, f: &RationalMap, max_order: u32) -> u32 {
    if !f.is_polynomial() {
        return max_order;
    }
    let dpsi = space.psi.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    let df = f.components.iter().filter_map(|(n, _)| n.degree()).max().unwrap_or(0);
    max_order.min(dpsi * df)
}

/// Ranks of the jets of ψ∘F in z̃ at one point, for orders 0..=kmax.
fn ranks_at(space: &Space, f: &RationalMap, z: &[GaussRational], kmax: u32) -> Result<Vec<usize>, RigidityError> {
    let dirs = unit_dirs(space.n, space.dropped);
    let rows = jet_rows(space, f, z, &dirs, order_cap(space, f, kmax))?;
    let mut basis = EchelonBasis::new();
    let mut out = vec![0; kmax as usize + 1];
    let mut it = rows.iter().peekable();
    for (k, slot) in out.iter_mut().enumerate() {
        while let Some((b, r)) = it.peek() {
            if b.iter().sum::<u32>() as usize > k {
                break;
            }
            if basis.rank() < space.big_n {
                basis.try_add(r);
            }
            it.next();
        }
        *slot = basis.rank();
    }
    Ok(out)
}

fn sample_regular_point(f: &RationalMap, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<GaussRational>, RigidityError> {
    for _ in 0..50 {
        let z = small_point(n, rng);
        if f.components.iter().all(|(_, d)| !d.eval_slice(&z).is_zero()) {
            return Ok(z);
        }
    }
    Err(RigidityError::SamplingFailed)
}

/// Maximal z̃-rank of order k over random rational points near 0.
pub fn jet_rank(
    space: &Space,
    f: &RationalMap,
    k: u32,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<usize, RigidityError> {
    let mut best = 0;
    for _ in 0..trials.max(1) {
        let z = sample_regular_point(f, space.n, rng)?;
        best = best.max(ranks_at(space, f, &z, k)?[k as usize]);
    }
    Ok(best)
}

/// (rank₀..rank_kmax), each maximised over the trial points.
pub fn rank_monotonicity_probe(
    space: &Space,
    f: &RationalMap,
    kmax: u32,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<usize>, RigidityError> {
    let mut best = vec![0; kmax as usize + 1];
    for _ in 0..trials.max(1) {
        let z = sample_regular_point(f, space.n, rng)?;
        for (b, r) in best.iter_mut().zip(ranks_at(space, f, &z, kmax)?) {
            *b = (*b).max(r);
        }
    }
    if best.windows(2).any(|w| w[1] < w[0]) {
        return Err(RigidityError::MonotonicityViolated(best));
    }
    Ok(best)
}

/// Tangent fields of Q_ξ used to differentiate along the Segre variety.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TangentFrame {
    /// L_i = ∂_i − (ρ_i/ρ_d)∂_d with d the distinguished variable.
    SegreL { dropped: usize },
    /// L_i = ∂_i − µ_i ∂_d with constant µ (entry d unused).
    HyperplaneL {
        dropped: usize,
        #[serde(serialize_with = "ser_gauss_vec")]
        mu: Vec<GaussRational>,
    },
}

fn ser_gauss_vec<S: serde::Serializer>(v: &[GaussRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl TangentFrame {
    pub fn dropped(&self) -> usize {
        match self {
            TangentFrame::SegreL { dropped } | TangentFrame::HyperplaneL { dropped, .. } => *dropped,
        }
    }
}

/// L^β expr, with β indexed by the non-distinguished z-variables; L_{n−1} acts first.
pub fn tangent_apply(
    frame: &TangentFrame,
    fam: &SegreFamily,
    expr: &PolyFraction,
    beta: &[u32],
) -> Result<PolyFraction, RigidityError> {
    let n = fam.n();
    let d = frame.dropped();
    if beta.len() + 1 != n || d >= n {
        return Err(RigidityError::BadBetas(format!("expected {} orders", n - 1)));
    }
    if expr.ring().names() != fam.ring.names() {
        return Err(PolyError::RingMismatch.into());
    }
    let others: Vec<usize> = (0..n).filter(|&i| i != d).collect();
    let rho_d = fam.rho.derive_index(d);
    if let TangentFrame::SegreL { .. } = frame {
        if rho_d.is_zero() {
            return Err(RigidityError::ZeroDistinguishedDerivative);
        }
    }
    let mut cur = expr.clone();
    for (slot, &k) in beta.iter().enumerate().rev() {
        let i = others[slot];
        for _ in 0..k {
            let di = cur.derive_index(i);
            let dd = cur.derive_index(d);
            cur = match frame {
                TangentFrame::SegreL { .. } => {
                    let ratio = PolyFraction::new(fam.rho.derive_index(i), rho_d.clone())?;
                    di.sub(&dd.mul(&ratio))
                }
                TangentFrame::HyperplaneL { mu, .. } => {
                    let c = Polynomial::constant(&fam.ring, mu[i].clone());
                    di.sub(&dd.mul_poly(&c))
                }
            }
            .normalize();
        }
    }
    Ok(cur)
}

/// Base point (z⁰, ξ⁰) on the family at which the tangent fields are constant.
#[derive(Clone, Debug)]
pub struct SpecialPoint {
    pub z: Vec<GaussRational>,
    pub xi: Vec<GaussRational>,
    pub frame: TangentFrame,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NullKind {
    TypeIV(usize),
    E16,
}

/// ξ with ξ_j = µ_j ξ_last, Σξ² = 0 and 1 + ⟨base, ξ⟩ = 0.
pub fn solve_null_direction(
    kind: NullKind,
    mu: &[GaussRational],
    base: &[GaussRational],
) -> Result<Vec<GaussRational>, RigidityError> {
    let len = match kind {
        NullKind::TypeIV(n) => n,
        NullKind::E16 => 8,
    };
    if mu.len() + 1 != len || base.len() != len {
        return Err(RigidityError::NullDirection(format!("need {} µ entries and {} base entries", len - 1, len)));
    }
    let quad = mu.iter().fold(GaussRational::one(), |acc, m| acc + m * m);
    if !quad.is_zero() {
        return Err(RigidityError::NullDirection("Σµ² + 1 ≠ 0".into()));
    }
    let den = mu.iter().zip(base).fold(base[len - 1].clone(), |acc, (m, b)| acc + m * b);
    let inv = den.inv().ok_or_else(|| RigidityError::NullDirection("zero denominator".into()))?;
    let last = -inv;
    let mut xi: Vec<GaussRational> = mu.iter().map(|m| m * &last).collect();
    xi.push(last);
    let pairing = xi.iter().zip(base).fold(GaussRational::one(), |acc, (x, b)| acc + x * b);
    let sq = xi.iter().fold(GaussRational::zero(), |acc, x| acc + x * x);
    debug_assert!(pairing.is_zero() && sq.is_zero());
    if !pairing.is_zero() || !sq.is_zero() {
        return Err(RigidityError::NullDirection("identities fail".into()));
    }
    Ok(xi)
}

/// Random µ ∈ Q(i)^k with Σµ² = −1: two entries from (µ₁+iµ₂)(µ₁−iµ₂) = −1 − Σrest².
pub fn random_null_mu(k: usize, rng: &mut ChaCha8Rng) -> Vec<GaussRational> {
    assert!(k >= 2);
    let rest: Vec<GaussRational> = (2..k).map(|_| random_small_rational(rng)).collect();
    let r = rest.iter().fold(GaussRational::zero(), |acc, x| acc + x * x);
    let s = loop {
        let s = random_gauss(rng, 9);
        if !s.is_zero() {
            break s;
        }
    };
    let t = (-GaussRational::one() - r) * s.inv().unwrap();
    let two = GaussRational::from_int(2);
    let m1 = (&s + &t) * two.inv().unwrap();
    let m2 = (&s - &t) * (two * GaussRational::i()).inv().unwrap();
    let mut mu = vec![m1, m2];
    mu.extend(rest);
    mu
}

/// Special point per type: ξ⁰ supported on the distinguished slot, or the null-direction construction.
pub fn special_point(fam: &SegreFamily, rng: &mut ChaCha8Rng) -> Result<SpecialPoint, RigidityError> {
    let n = fam.n();
    let d = fam.space.dropped;
    for _ in 0..50 {
        let z = small_point(n, rng);
        let built = match fam.space.desc {
            SpaceDescriptor::TypeIV(m) => {
                let mu = random_null_mu(m - 1, rng);
                solve_null_direction(NullKind::TypeIV(m), &mu, &z).ok().map(|xi| {
                    let mut full = mu.clone();
                    full.push(GaussRational::zero());
                    (xi, TangentFrame::HyperplaneL { dropped: d, mu: full })
                })
            }
            SpaceDescriptor::E16 => {
                let mu = random_null_mu(7, rng);
                solve_null_direction(NullKind::E16, &mu, &z[8..16]).ok().map(|eta| {
                    let mut xi = vec![GaussRational::zero(); 8];
                    xi.extend(eta);
                    let mut full = vec![GaussRational::zero(); 8];
                    full.extend(mu.iter().cloned());
                    full.push(GaussRational::zero());
                    (xi, TangentFrame::HyperplaneL { dropped: d, mu: full })
                })
            }
            _ => z[d].inv().map(|inv| {
                let mut xi = vec![GaussRational::zero(); n];
                xi[d] = -inv;
                (xi, TangentFrame::SegreL { dropped: d })
            }),
        };
        if let Some((xi, frame)) = built {
            if fam.rho_exact(&z, &xi).is_zero() {
                return Ok(SpecialPoint { z, xi, frame });
            }
        }
    }
    Err(RigidityError::SamplingFailed)
}

/// Constant directions v_i = e_i − (c_i/c_d) e_d when ρ(·,ξ⁰) is affine in z.
fn affine_dirs(
    fam: &SegreFamily,
    xi: &[GaussRational],
    d: usize,
) -> Result<Option<Vec<Vec<GaussRational>>>, RigidityError> {
    let r = fam.rho_at_xi(xi);
    if r.degree().unwrap_or(0) > 1 {
        return Ok(None);
    }
    let n = fam.n();
    let zero = vec![0u32; 2 * n];
    let c: Vec<GaussRational> = (0..n)
        .map(|i| {
            let mut e = zero.clone();
            e[i] = 1;
            r.coeff(&Monomial(e))
        })
        .collect();
    let cd_inv = c[d].inv().ok_or(RigidityError::LambdaUndefined)?;
    Ok(Some(
        (0..n)
            .filter(|&i| i != d)
            .map(|i| {
                let mut v = vec![GaussRational::zero(); n];
                v[i] = GaussRational::one();
                v[d] = -(&c[i] * &cd_inv);
                v
            })
            .collect(),
    ))
}

fn check_betas(betas: &[Vec<u32>], n: usize, big_n: usize) -> Result<(), RigidityError> {
    if betas.len() != big_n {
        return Err(RigidityError::BadBetas(format!("need {big_n} multi-indices")));
    }
    if betas.iter().any(|b| b.len() + 1 != n) {
        return Err(RigidityError::BadBetas(format!("each multi-index needs {} entries", n - 1)));
    }
    if betas[0].iter().any(|&k| k != 0) {
        return Err(RigidityError::BadBetas("first multi-index must be zero".into()));
    }
    Ok(())
}

/// Λ(β¹..β^N)(z⁰,ξ⁰) = det[L^{β^l}(ψ_j∘F)] at a point of the family.
pub fn lambda_determinant(
    fam: &SegreFamily,
    f: &RationalMap,
    betas: &[Vec<u32>],
    z: &[GaussRational],
    xi: &[GaussRational],
) -> Result<GaussRational, RigidityError> {
    let space = &fam.space;
    check_betas(betas, space.n, space.big_n)?;
    if !fam.rho_exact(z, xi).is_zero() {
        return Err(RigidityError::NotOnFamily);
    }
    let d = space.dropped;
    if let Some(dirs) = affine_dirs(fam, xi, d)? {
        let order = betas.iter().map(|b| b.iter().sum::<u32>()).max().unwrap_or(0);
        let rows = jet_rows(space, f, z, &dirs, order)?;
        let lookup: BTreeMap<&Vec<u32>, &Vec<GaussRational>> = rows.iter().map(|(b, r)| (b, r)).collect();
        let zero = vec![GaussRational::zero(); space.big_n];
        let m: Matrix =
            betas.iter().map(|b| lookup.get(b).map(|r| (*r).clone()).unwrap_or_else(|| zero.clone())).collect();
        return Ok(linalg::det(&m));
    }
    lambda_symbolic(fam, f, betas, z, xi)
}

/// Λ via iterated symbolic L application; used off the affine locus and as an oracle.
pub fn lambda_symbolic(
    fam: &SegreFamily,
    f: &RationalMap,
    betas: &[Vec<u32>],
    z: &[GaussRational],
    xi: &[GaussRational],
) -> Result<GaussRational, RigidityError> {
    let space = &fam.space;
    check_betas(betas, space.n, space.big_n)?;
    if !f.is_polynomial() {
        return Err(RigidityError::BadMap("symbolic Λ needs a polynomial map".into()));
    }
    let n = space.n;
    let map: Vec<usize> = (0..n).collect();
    let comps: Vec<Polynomial> = f
        .components
        .iter()
        .map(|(num, den)| num.scale(&den.constant_term().inv().unwrap()).embed_with(&fam.ring, &map))
        .collect::<Result<_, _>>()?;
    let frame = TangentFrame::SegreL { dropped: space.dropped };
    let vals: Vec<GaussRational> = z.iter().chain(xi).cloned().collect();
    let exprs: Vec<PolyFraction> = space.psi.iter().map(|p| PolyFraction::from_poly(p.compose(&comps))).collect();
    let mut m = Matrix::new();
    for b in betas {
        let row = exprs
            .iter()
            .map(|e| {
                let out = tangent_apply(&frame, fam, e, b)?;
                out.eval_slice(&vals).map_err(|_| RigidityError::LambdaUndefined)
            })
            .collect::<Result<Vec<_>, _>>()?;
        m.push(row);
    }
    Ok(linalg::det(&m))
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Found {
        #[serde(serialize_with = "ser_gauss_vec")]
        z: Vec<GaussRational>,
        #[serde(serialize_with = "ser_gauss_vec")]
        xi: Vec<GaussRational>,
        frame: TangentFrame,
        betas: Vec<Vec<u32>>,
        lambda: String,
        max_beta_order: u32,
    },
    NotFoundWithinBudget {
        max_order: u32,
        best_rank: usize,
        rows_examined: usize,
        reason: String,
    },
}

impl WitnessOutcome {
    pub fn found(&self) -> bool {
        matches!(self, WitnessOutcome::Found { .. })
    }
}

/// Default order bound 1 + N − n.
pub fn default_max_order(space: &Space) -> u32 {
    (1 + space.big_n - space.n) as u32
}

fn to_mod(row: &[GaussRational]) -> Option<Vec<Fq2>> {
    row.iter().map(Fq2::from_gauss).collect()
}

/// Randomised search for (z⁰, ξ⁰, β¹..β^N) with Λ ≠ 0: rows are visited by |β|,
/// then lexicographically, and kept when they raise the rank.
pub fn find_nondegeneracy_witness(
    fam: &SegreFamily,
    f: &RationalMap,
    max_order: u32,
    trials: usize,
    row_budget: usize,
    rng: &mut ChaCha8Rng,
) -> Result<WitnessOutcome, RigidityError> {
    let space = &fam.space;
    let big_n = space.big_n;
    let cap = order_cap(space, f, max_order);
    let mut best_rank = 0;
    let mut examined = 0;
    for _ in 0..trials.max(1) {
        let sp = special_point(fam, rng)?;
        let Some(dirs) = affine_dirs(fam, &sp.xi, space.dropped)? else {
            return Err(RigidityError::LambdaUndefined);
        };
        let mut modular = ModEchelon::new();
        let mut exact = EchelonBasis::new();
        let mut chosen: Vec<(Vec<u32>, Vec<GaussRational>)> = Vec::new();
        for k in 0..=cap {
            let rows = match jet_rows(space, f, &sp.z, &dirs, k) {
                Ok(r) => r,
                Err(RigidityError::DenominatorVanishes) => break,
                Err(e) => return Err(e),
            };
            for (b, r) in rows.into_iter().filter(|(b, _)| b.iter().sum::<u32>() == k) {
                examined += 1;
                if examined > row_budget {
                    return Ok(WitnessOutcome::NotFoundWithinBudget {
                        max_order,
                        best_rank: best_rank.max(chosen.len()),
                        rows_examined: examined - 1,
                        reason: "row budget exhausted".into(),
                    });
                }
                let added = match to_mod(&r) {
                    Some(m) if modular.rank() == exact.rank() => {
                        let ok = modular.try_add(&m);
                        if ok {
                            exact.try_add(&r);
                        }
                        ok
                    }
                    _ => exact.try_add(&r),
                };
                if added {
                    chosen.push((b, r));
                }
                if chosen.len() == big_n {
                    break;
                }
            }
            if chosen.len() == big_n {
                break;
            }
        }
        best_rank = best_rank.max(chosen.len());
        if chosen.len() == big_n {
            let m: Matrix = chosen.iter().map(|(_, r)| r.clone()).collect();
            let lambda = linalg::det(&m);
            debug_assert!(!lambda.is_zero());
            let max_beta_order = chosen.iter().map(|(b, _)| b.iter().sum::<u32>()).max().unwrap_or(0);
            return Ok(WitnessOutcome::Found {
                z: sp.z,
                xi: sp.xi,
                frame: sp.frame,
                betas: chosen.into_iter().map(|(b, _)| b).collect(),
                lambda: lambda.to_string(),
                max_beta_order,
            });
        }
    }
    Ok(WitnessOutcome::NotFoundWithinBudget {
        max_order,
        best_rank,
        rows_examined: examined,
        reason: "rank stayed below N".into(),
    })
}

/// Float Jacobian ∂F_a/∂z_i of a rational map.
pub(crate) struct FloatMap {
    nums: Vec<FloatPoly>,
    dens: Vec<FloatPoly>,
    dnums: Vec<Vec<FloatPoly>>,
    ddens: Vec<Vec<FloatPoly>>,
}

impl FloatMap {
    pub(crate) fn new(f: &RationalMap) -> Self {
        let n = f.ring.len();
        FloatMap {
            nums: f.components.iter().map(|(p, _)| FloatPoly::from_poly(p)).collect(),
            dens: f.components.iter().map(|(_, q)| FloatPoly::from_poly(q)).collect(),
            dnums: f
                .components
                .iter()
                .map(|(p, _)| (0..n).map(|i| FloatPoly::from_poly(&p.derive_index(i))).collect())
                .collect(),
            ddens: f
                .components
                .iter()
                .map(|(_, q)| (0..n).map(|i| FloatPoly::from_poly(&q.derive_index(i))).collect())
                .collect(),
        }
    }

    /// (F(z), J_F(z)); `None` near a pole.
    pub(crate) fn eval(&self, z: &[Complex64]) -> Option<(Vec<Complex64>, Vec<Vec<Complex64>>)> {
        let mut vals = Vec::with_capacity(self.nums.len());
        let mut jac = Vec::with_capacity(self.nums.len());
        for a in 0..self.nums.len() {
            let p = self.nums[a].eval(z);
            let q = self.dens[a].eval(z);
            if q.norm() < 1e-12 {
                return None;
            }
            vals.push(p / q);
            jac.push(
                (0..z.len()).map(|i| (self.dnums[a][i].eval(z) * q - p * self.ddens[a][i].eval(z)) / (q * q)).collect(),
            );
        }
        Some((vals, jac))
    }
}

pub(crate) fn random_sample_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let r = crate::segre::SAMPLE_RADIUS * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU)
        })
        .collect()
}

#[cfg(test)]
mod tests;
