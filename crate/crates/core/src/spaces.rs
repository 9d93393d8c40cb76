//! Canonical embeddings ψ of the six families in cell coordinates.

use std::fmt;

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, EchelonBasis};
use crate::octonion::{cell_forms, CellKind};
use crate::polyring::{GaussRational, Monomial, Polynomial, Ring, RingRef};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("A_k A_k^t not positive definite (eigenvalue {0:e})")]
    NotPositiveDefinite(f64),
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("cannot parse space spec {0:?}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "params")]
pub enum SpaceDescriptor {
    TypeI(usize, usize),
    TypeII(usize),
    TypeIII(usize),
    TypeIV(usize),
    E16,
    E27,
}

impl SpaceDescriptor {
    pub fn validate(&self) -> Result<(), SpaceError> {
        let bad = |s: &str| Err(SpaceError::InvalidParams(s.to_string()));
        match *self {
            SpaceDescriptor::TypeI(p, q) if p < 1 || p > q => bad("type I needs 1 <= p <= q"),
            SpaceDescriptor::TypeII(n) if n < 2 => bad("type II needs n >= 2"),
            SpaceDescriptor::TypeIII(n) if n < 2 => bad("type III needs n >= 2"),
            SpaceDescriptor::TypeIV(n) if n < 3 => bad("type IV needs n >= 3"),
            _ => Ok(()),
        }
    }

    /// Parses `typeI:p,q | typeII:n | typeIII:n | typeIV:n | e16 | e27`.
    pub fn parse(s: &str) -> Result<Self, SpaceError> {
        let err = || SpaceError::Parse(s.to_string());
        let s = s.trim();
        let (head, tail) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<usize> = if tail.is_empty() {
            Vec::new()
        } else {
            tail.split(',').map(|t| t.trim().parse().map_err(|_| err())).collect::<Result<_, _>>()?
        };
        let d = match (head.to_ascii_lowercase().as_str(), nums.as_slice()) {
            ("typei", [p, q]) => SpaceDescriptor::TypeI(*p, *q),
            ("typeii", [n]) => SpaceDescriptor::TypeII(*n),
            ("typeiii", [n]) => SpaceDescriptor::TypeIII(*n),
            ("typeiv", [n]) => SpaceDescriptor::TypeIV(*n),
            ("e16", []) => SpaceDescriptor::E16,
            ("e27", []) => SpaceDescriptor::E27,
            _ => return Err(err()),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SpaceDescriptor::TypeI(..) => "typeI",
            SpaceDescriptor::TypeII(_) => "typeII",
            SpaceDescriptor::TypeIII(_) => "typeIII",
            SpaceDescriptor::TypeIV(_) => "typeIV",
            SpaceDescriptor::E16 => "e16",
            SpaceDescriptor::E27 => "e27",
        }
    }

    pub fn params(&self) -> Vec<usize> {
        match *self {
            SpaceDescriptor::TypeI(p, q) => vec![p, q],
            SpaceDescriptor::TypeII(n) | SpaceDescriptor::TypeIII(n) | SpaceDescriptor::TypeIV(n) => vec![n],
            _ => vec![],
        }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.params();
        if p.is_empty() {
            write!(f, "{}", self.kind_name())
        } else {
            let p: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            write!(f, "{}:{}", self.kind_name(), p.join(","))
        }
    }
}

/// Float recombination of an exact basis: `psi_float = coeffs · psi`.
#[derive(Clone, Debug)]
pub struct NumericTail {
    /// N×N real matrix, row j gives ψ_float_j in terms of the exact ψ.
    pub coeffs: DMatrix<f64>,
}

/// One built space: cell ring, embedding and the data the Segre family needs.
#[derive(Clone, Debug)]
pub struct Space {
    pub desc: SpaceDescriptor,
    pub n: usize,
    pub big_n: usize,
    pub ring: RingRef,
    /// Names used for the conjugate (ξ) copy of the cell variables.
    pub xi_names: Vec<String>,
    /// ψ_1..ψ_N with ψ_j = z_j for j ≤ n; linearly independent.
    pub psi: Vec<Polynomial>,
    /// Components paired in ρ = 1 + Σ w_j a_j(z) a_j(ξ).
    pub pairing: Vec<Polynomial>,
    pub weights: Vec<GaussRational>,
    pub einstein_lambda: Option<u32>,
    pub psi_numeric_tail: Option<NumericTail>,
    /// Index of the distinguished variable of the tangent frames.
    pub dropped: usize,
}

impl Space {
    pub fn build(desc: SpaceDescriptor) -> Result<Space, SpaceError> {
        desc.validate()?;
        Ok(match desc {
            SpaceDescriptor::TypeI(p, q) => build_type1(p, q),
            SpaceDescriptor::TypeII(n) => build_type2(n),
            SpaceDescriptor::TypeIII(n) => build_type3(n)?,
            SpaceDescriptor::TypeIV(n) => build_type4(n),
            SpaceDescriptor::E16 => build_e16(),
            SpaceDescriptor::E27 => build_e27(),
        })
    }

    pub fn var_names(&self) -> &[String] {
        self.ring.names()
    }
}

fn idx_name(prefix: &str, i: usize, j: usize) -> String {
    if i >= 10 || j >= 10 {
        format!("{prefix}{i}_{j}")
    } else {
        format!("{prefix}{i}{j}")
    }
}

/// All k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

pub fn type1_n(p: usize, q: usize) -> usize {
    (1..=p).map(|k| binom(p, k) * binom(q, k)).sum()
}

fn weights_one(n: usize) -> Vec<GaussRational> {
    vec![GaussRational::one(); n]
}

/// Variable matrix of type I: z_ij, row-major.
pub fn type1_matrix(ring: &RingRef, p: usize, q: usize) -> Vec<Vec<Polynomial>> {
    (0..p).map(|i| (0..q).map(|j| Polynomial::var_index(ring, i * q + j)).collect()).collect()
}

fn submatrix(m: &[Vec<Polynomial>], rows: &[usize], cols: &[usize]) -> Vec<Vec<Polynomial>> {
    rows.iter().map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect()).collect()
}

pub fn type1_names(p: usize, q: usize, prefix: &str) -> Vec<String> {
    let mut v = Vec::new();
    for i in 1..=p {
        for j in 1..=q {
            v.push(idx_name(prefix, i, j));
        }
    }
    v
}

pub fn build_type1(p: usize, q: usize) -> Space {
    let ring = Ring::new(&type1_names(p, q, "z"));
    let z = type1_matrix(&ring, p, q);
    let mut psi = Vec::new();
    for k in 1..=p {
        for rows in subsets(p, k) {
            for cols in subsets(q, k) {
                psi.push(linalg::poly_det(&submatrix(&z, &rows, &cols), &ring));
            }
        }
    }
    let big_n = psi.len();
    Space {
        desc: SpaceDescriptor::TypeI(p, q),
        n: p * q,
        big_n,
        xi_names: type1_names(p, q, "xi"),
        pairing: psi.clone(),
        psi,
        weights: weights_one(big_n),
        einstein_lambda: Some((p + q) as u32),
        psi_numeric_tail: None,
        dropped: p * q - 1,
        ring,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PfaffianAlgo {
    Partition,
    Recursive,
}

fn check_antisymmetric(a: &[Vec<Polynomial>]) -> Result<(), SpaceError> {
    let n = a.len();
    for i in 0..n {
        if a[i].len() != n {
            return Err(SpaceError::NotAntisymmetric);
        }
        for j in 0..n {
            if a[i][j] != -&a[j][i] {
                return Err(SpaceError::NotAntisymmetric);
            }
        }
    }
    Ok(())
}

/// Pfaffian of an antisymmetric polynomial matrix; zero for odd order.
pub fn pfaffian(a: &[Vec<Polynomial>], ring: &RingRef, algo: PfaffianAlgo) -> Result<Polynomial, SpaceError> {
    check_antisymmetric(a)?;
    let n = a.len();
    if n % 2 == 1 {
        return Ok(Polynomial::zero(ring));
    }
    Ok(match algo {
        PfaffianAlgo::Partition => pf_partition(a, ring),
        PfaffianAlgo::Recursive => pf_recursive(a, &(0..n).collect::<Vec<_>>(), ring),
    })
}

/// Sum over perfect matchings {(i1,j1),...} with i_k < j_k, each weighted by
/// the sign of the permutation (i1 j1 i2 j2 ...).
fn pf_partition(a: &[Vec<Polynomial>], ring: &RingRef) -> Polynomial {
    fn matchings(rest: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if rest.is_empty() {
            return vec![vec![]];
        }
        let first = rest[0];
        let mut out = Vec::new();
        for k in 1..rest.len() {
            let mut others: Vec<usize> = rest[1..].to_vec();
            let partner = others.remove(k - 1);
            for mut m in matchings(&others) {
                m.insert(0, (first, partner));
                out.push(m);
            }
        }
        out
    }
    fn perm_sign(p: &[usize]) -> bool {
        let mut inv = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        inv % 2 == 0
    }
    let n = a.len();
    let mut acc = Polynomial::zero(ring);
    for m in matchings(&(0..n).collect::<Vec<_>>()) {
        let perm: Vec<usize> = m.iter().flat_map(|&(i, j)| [i, j]).collect();
        let mut t = Polynomial::one(ring);
        for &(i, j) in &m {
            t = &t * &a[i][j];
        }
        acc = if perm_sign(&perm) { &acc + &t } else { &acc - &t };
    }
    acc
}

/// Expansion along the first row: pf(A) = Σ_j (−1)^{j+1} a_{1j} pf(A_{1̂ĵ}).
fn pf_recursive(a: &[Vec<Polynomial>], idx: &[usize], ring: &RingRef) -> Polynomial {
    if idx.is_empty() {
        return Polynomial::one(ring);
    }
    let first = idx[0];
    let mut acc = Polynomial::zero(ring);
    for (k, &j) in idx.iter().enumerate().skip(1) {
        if a[first][j].is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != first && x != j).collect();
        let t = &a[first][j] * &pf_recursive(a, &rest, ring);
        acc = if k % 2 == 1 { &acc + &t } else { &acc - &t };
    }
    acc
}

pub fn type2_names(n: usize, prefix: &str) -> Vec<String> {
    let mut v = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            v.push(idx_name(prefix, i, j));
        }
    }
    v
}

/// Antisymmetric matrix with upper entries the ring variables in order.
pub fn type2_matrix(ring: &RingRef, n: usize) -> Vec<Vec<Polynomial>> {
    let mut m = vec![vec![Polynomial::zero(ring); n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            m[i][j] = Polynomial::var_index(ring, k);
            m[j][i] = -&m[i][j];
            k += 1;
        }
    }
    m
}

pub fn build_type2(n: usize) -> Space {
    let ring = Ring::new(&type2_names(n, "z"));
    let z = type2_matrix(&ring, n);
    let mut psi = Vec::new();
    for k in (2..=n).step_by(2) {
        for s in subsets(n, k) {
            let sub = submatrix(&z, &s, &s);
            psi.push(pfaffian(&sub, &ring, PfaffianAlgo::Recursive).unwrap());
        }
    }
    let big_n = psi.len();
    let dim = n * (n - 1) / 2;
    Space {
        desc: SpaceDescriptor::TypeII(n),
        n: dim,
        big_n,
        xi_names: type2_names(n, "xi"),
        pairing: psi.clone(),
        psi,
        weights: weights_one(big_n),
        einstein_lambda: Some((2 * n - 2) as u32),
        psi_numeric_tail: None,
        dropped: dim - 1,
        ring,
    }
}

pub fn type3_names(n: usize, prefix: &str) -> Vec<String> {
    let mut v = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            v.push(idx_name(prefix, i, j));
        }
    }
    v
}

/// Symmetric matrix with upper entries (i ≤ j) the ring variables in order.
pub fn type3_matrix(ring: &RingRef, n: usize) -> Vec<Vec<Polynomial>> {
    let mut m = vec![vec![Polynomial::zero(ring); n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[i][j] = Polynomial::var_index(ring, k);
            m[j][i] = m[i][j].clone();
            k += 1;
        }
    }
    m
}

/// Result of the per-degree orthogonalization of the raw symmetric minors.
#[derive(Clone, Debug)]
pub struct Type3Layers {
    /// All k×k minors (k=1..n, lexicographic), redundant.
    pub raw: Vec<Polynomial>,
    /// Selected independent subset, degree by degree.
    pub basis: Vec<Polynomial>,
    /// Per degree: (offset into basis, A_k with raw = A_k · basis).
    pub blocks: Vec<(usize, Vec<Vec<GaussRational>>)>,
}

fn coeff_rows(polys: &[Polynomial]) -> (Vec<Monomial>, Vec<Vec<GaussRational>>) {
    let mut monos: Vec<Monomial> = polys.iter().flat_map(|p| p.terms().keys().cloned()).collect();
    monos.sort();
    monos.dedup();
    let rows = polys.iter().map(|p| monos.iter().map(|m| p.coeff(m)).collect()).collect();
    (monos, rows)
}

pub fn type3_layers(n: usize, ring: &RingRef) -> Type3Layers {
    let z = type3_matrix(ring, n);
    let mut raw = Vec::new();
    let mut basis = Vec::new();
    let mut blocks = Vec::new();
    for k in 1..=n {
        let minors: Vec<Polynomial> = subsets(n, k)
            .iter()
            .flat_map(|r| subsets(n, k).into_iter().map(move |c| (r.clone(), c)))
            .map(|(r, c)| linalg::poly_det(&submatrix(&z, &r, &c), ring))
            .collect();
        let (_, rows) = coeff_rows(&minors);
        let mut ech = EchelonBasis::new();
        let mut chosen = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            if ech.try_add(r) {
                chosen.push(i);
            }
        }
        // Express every raw minor in the chosen basis: solve Bᵀ a = m.
        let b_rows: Vec<Vec<GaussRational>> = chosen.iter().map(|&i| rows[i].clone()).collect();
        let bt = linalg::transpose(&b_rows);
        let nb = chosen.len();
        let mut a_k = Vec::new();
        for r in &rows {
            let mut aug: Vec<Vec<GaussRational>> =
                bt.iter().zip(r).map(|(row, x)| row.iter().cloned().chain([x.clone()]).collect()).collect();
            let piv = linalg::rref(&mut aug);
            assert!(piv.iter().all(|&p| p < nb), "raw minor outside the span of the basis");
            let mut a = vec![GaussRational::zero(); nb];
            for (ri, &p) in piv.iter().enumerate() {
                a[p] = aug[ri][nb].clone();
            }
            a_k.push(a);
        }
        blocks.push((basis.len(), a_k));
        basis.extend(chosen.iter().map(|&i| minors[i].clone()));
        raw.extend(minors);
    }
    Type3Layers { raw, basis, blocks }
}

/// Float tail coefficients: per degree, Gram = A_kᵗA_k = U diag(µ) Uᵗ and the
/// orthonormalized system is diag(√µ)·Uᵗ·ψ*.
pub fn type3_numeric_tail(layers: &Type3Layers) -> Result<NumericTail, SpaceError> {
    let big_n = layers.basis.len();
    let mut coeffs = DMatrix::<f64>::zeros(big_n, big_n);
    for (off, a_k) in &layers.blocks {
        let nb = a_k[0].len();
        let a = DMatrix::from_fn(a_k.len(), nb, |i, j| a_k[i][j].to_complex64().re);
        let gram = a.transpose() * &a;
        let is_diag = (0..nb).all(|i| (0..nb).all(|j| i == j || gram[(i, j)].abs() < 1e-14));
        if is_diag {
            for i in 0..nb {
                let mu = gram[(i, i)];
                if mu <= 1e-9 {
                    return Err(SpaceError::NotPositiveDefinite(mu));
                }
                coeffs[(off + i, off + i)] = mu.sqrt();
            }
            continue;
        }
        let eig = nalgebra::SymmetricEigen::new(gram);
        for (r, &mu) in eig.eigenvalues.iter().enumerate() {
            if mu <= 1e-9 {
                return Err(SpaceError::NotPositiveDefinite(mu));
            }
            for c in 0..nb {
                coeffs[(off + r, off + c)] = mu.sqrt() * eig.eigenvectors[(c, r)];
            }
        }
    }
    Ok(NumericTail { coeffs })
}

pub fn build_type3(n: usize) -> Result<Space, SpaceError> {
    let ring = Ring::new(&type3_names(n, "z"));
    let layers = type3_layers(n, &ring);
    let tail = type3_numeric_tail(&layers)?;
    let big_n = layers.basis.len();
    let dim = n * (n + 1) / 2;
    let raw_len = layers.raw.len();
    Ok(Space {
        desc: SpaceDescriptor::TypeIII(n),
        n: dim,
        big_n,
        xi_names: type3_names(n, "xi"),
        psi: layers.basis,
        pairing: layers.raw,
        weights: weights_one(raw_len),
        einstein_lambda: Some((n + 1) as u32),
        psi_numeric_tail: Some(tail),
        dropped: dim - 1,
        ring,
    })
}

pub fn build_type4(n: usize) -> Space {
    let names: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
    let xi: Vec<String> = (1..=n).map(|i| format!("xi{i}")).collect();
    let ring = Ring::new(&names);
    let mut psi = Polynomial::vars(&ring);
    let sq = psi.iter().fold(Polynomial::zero(&ring), |acc, z| &acc + &(z * z));
    psi.push(sq.scale(&GaussRational::from_ratio(1, 2)));
    Space {
        desc: SpaceDescriptor::TypeIV(n),
        n,
        big_n: n + 1,
        xi_names: xi,
        pairing: psi.clone(),
        psi,
        weights: weights_one(n + 1),
        einstein_lambda: Some(n as u32),
        psi_numeric_tail: None,
        dropped: n - 1,
        ring,
    }
}

pub fn e16_ring() -> RingRef {
    let names: Vec<String> = (0..8).map(|i| format!("x{i}")).chain((0..8).map(|i| format!("y{i}"))).collect();
    Ring::new(&names)
}

pub fn e16_xi_names() -> Vec<String> {
    (0..8).map(|i| format!("kappa{i}")).chain((0..8).map(|i| format!("eta{i}"))).collect()
}

/// Pairing weights under which the 16-dimensional Segre function is
/// Kähler–Einstein: 1 on x, y; ½ on A; ¼ on B.
pub fn e16_weights() -> Vec<GaussRational> {
    let mut w = vec![GaussRational::one(); 16];
    w.extend(std::iter::repeat_n(GaussRational::from_ratio(1, 2), 8));
    w.extend(std::iter::repeat_n(GaussRational::from_ratio(1, 4), 2));
    w
}

pub fn build_e16() -> Space {
    let ring = e16_ring();
    let mut psi = Polynomial::vars(&ring);
    psi.extend(cell_forms(CellKind::M16, &ring));
    Space {
        desc: SpaceDescriptor::E16,
        n: 16,
        big_n: 26,
        xi_names: e16_xi_names(),
        pairing: psi.clone(),
        psi,
        weights: e16_weights(),
        einstein_lambda: Some(12),
        psi_numeric_tail: None,
        dropped: 15,
        ring,
    }
}

pub fn e27_ring() -> RingRef {
    let mut names: Vec<String> = (1..=3).map(|i| format!("x{i}")).collect();
    for p in ["y", "t", "w"] {
        names.extend((0..8).map(|i| format!("{p}{i}")));
    }
    Ring::new(&names)
}

pub fn e27_xi_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=3).map(|i| format!("xi{i}")).collect();
    for p in ["eta", "kappa", "tau"] {
        names.extend((0..8).map(|i| format!("{p}{i}")));
    }
    names
}

pub fn build_e27() -> Space {
    let ring = e27_ring();
    let mut psi = Polynomial::vars(&ring);
    psi.extend(cell_forms(CellKind::M27, &ring));
    Space {
        desc: SpaceDescriptor::E27,
        n: 27,
        big_n: 55,
        xi_names: e27_xi_names(),
        pairing: psi.clone(),
        psi,
        weights: weights_one(55),
        einstein_lambda: None,
        psi_numeric_tail: None,
        dropped: 2,
        ring,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type1_counts() {
        let s = build_type1(1, 1);
        assert_eq!((s.n, s.big_n), (1, 1));
        let s = build_type1(2, 2);
        assert_eq!(s.big_n, 5);
        let v = Polynomial::vars(&s.ring);
        assert_eq!(s.psi[4], &(&v[0] * &v[3]) - &(&v[1] * &v[2]));
        assert_eq!(build_type1(2, 3).big_n, 9);
        assert_eq!(type1_n(3, 4), build_type1(3, 4).big_n);
    }

    #[test]
    fn pfaffian_small() {
        let r = Ring::new(&["a"]);
        let a = Polynomial::var(&r, "a").unwrap();
        let z = Polynomial::zero(&r);
        let m = vec![vec![z.clone(), a.clone()], vec![-&a, z.clone()]];
        for algo in [PfaffianAlgo::Partition, PfaffianAlgo::Recursive] {
            assert_eq!(pfaffian(&m, &r, algo).unwrap(), a);
        }
        let r4 = Ring::new(&type2_names(4, "z"));
        let m4 = type2_matrix(&r4, 4);
        let v = Polynomial::vars(&r4);
        // z12 z34 − z13 z24 + z14 z23
        let expected = &(&(&v[0] * &v[5]) - &(&v[1] * &v[4])) + &(&v[2] * &v[3]);
        assert_eq!(pfaffian(&m4, &r4, PfaffianAlgo::Partition).unwrap(), expected);
        let r3 = Ring::new(&type2_names(3, "z"));
        assert!(pfaffian(&type2_matrix(&r3, 3), &r3, PfaffianAlgo::Recursive).unwrap().is_zero());
        let bad = vec![vec![z.clone(), a.clone()], vec![a.clone(), z]];
        assert_eq!(pfaffian(&bad, &r, PfaffianAlgo::Recursive), Err(SpaceError::NotAntisymmetric));
    }

    #[test]
    fn type2_counts() {
        let s = build_type2(4);
        assert_eq!((s.n, s.big_n), (6, 7));
        assert_eq!(build_type2(5).big_n, 15);
        let r4 = &s.ring;
        assert_eq!(s.psi[6], pfaffian(&type2_matrix(r4, 4), r4, PfaffianAlgo::Partition).unwrap());
    }

    #[test]
    fn type3_layers_n2() {
        let s = build_type3(2).unwrap();
        assert_eq!((s.n, s.big_n), (3, 4));
        assert_eq!(s.pairing.len(), 5);
        let t = s.psi_numeric_tail.as_ref().unwrap();
        assert!((t.coeffs[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((t.coeffs[(1, 1)] - 2f64.sqrt()).abs() < 1e-15);
        assert!((t.coeffs[(2, 2)] - 1.0).abs() < 1e-15);
        assert_eq!(build_type3(3).unwrap().big_n, 13);
    }

    #[test]
    fn type4_and_exceptional() {
        let s = build_type4(3);
        assert_eq!(s.big_n, 4);
        let e16 = build_e16();
        assert_eq!(e16.psi.len(), 26);
        let v = Polynomial::vars(&e16.ring);
        let a0 = (0..8).fold(Polynomial::zero(&e16.ring), |acc, i| &acc + &(&v[8 + i] * &v[i]));
        assert_eq!(e16.psi[16], a0);
        assert_eq!(build_e27().psi.len(), 55);
    }

    #[test]
    fn parse_specs() {
        assert_eq!(SpaceDescriptor::parse("typeI:2,3").unwrap(), SpaceDescriptor::TypeI(2, 3));
        assert_eq!(SpaceDescriptor::parse("e27").unwrap(), SpaceDescriptor::E27);
        assert!(SpaceDescriptor::parse("typeI:3,2").is_err());
        assert!(SpaceDescriptor::parse("typeV:3").is_err());
        assert!(SpaceDescriptor::parse("typeIV:2").is_err());
        assert_eq!(SpaceDescriptor::TypeI(2, 2).to_string(), "typeI:2,2");
    }
}
