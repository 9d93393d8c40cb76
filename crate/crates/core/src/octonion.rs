//! Complexified octonions, the exceptional Jordan algebra, and the cell
//! coordinate functions of the two exceptional spaces.

use std::fmt;

use num_traits::{One, Zero};

use crate::polyring::{GaussRational, Polynomial, RingRef};

/// Coefficient ring for octonions: Gaussian rationals or polynomials.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale_q(&self, q: &GaussRational) -> Self;
    fn is_zero_s(&self) -> bool;
}

impl Scalar for GaussRational {
    fn zero_like(&self) -> Self {
        GaussRational::zero()
    }
    fn one_like(&self) -> Self {
        GaussRational::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale_q(&self, q: &GaussRational) -> Self {
        self * q
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for Polynomial {
    fn zero_like(&self) -> Self {
        Polynomial::zero(self.ring())
    }
    fn one_like(&self) -> Self {
        Polynomial::one(self.ring())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale_q(&self, q: &GaussRational) -> Self {
        self.scale(q)
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
}

/// Products of imaginary units: `TABLE[i][j] = (sign, k)` with e_i e_j = sign e_k,
/// for 1 ≤ i,j ≤ 7 (index 0 unused). Diagonal entries mean e_i² = -1.
pub type MulTable = [[(i8, u8); 8]; 8];

/// Rows and columns of the published table are in the order e1 e2 e4 e7 e3 e6 e5;
/// entry (row a, column b) is a·b.
const TABLE_ORDER: [usize; 7] = [1, 2, 4, 7, 3, 6, 5];
const TABLE_ROWS: [[i8; 7]; 7] = [
    [0, 4, -2, -3, 7, -5, 6],
    [-4, 0, 1, -6, 5, 7, -3],
    [2, -1, 0, -5, -6, 3, 7],
    [3, 6, 5, 0, -1, -2, -4],
    [-7, -5, 6, 1, 0, -4, 2],
    [5, -7, -3, 2, 4, 0, -1],
    [-6, 3, -7, 4, -2, 1, 0],
];

pub fn standard_table() -> MulTable {
    let mut t = [[(0i8, 0u8); 8]; 8];
    for (ri, &a) in TABLE_ORDER.iter().enumerate() {
        for (ci, &b) in TABLE_ORDER.iter().enumerate() {
            let v = TABLE_ROWS[ri][ci];
            t[a][b] = if a == b { (-1, 0) } else { (v.signum(), v.unsigned_abs()) };
        }
    }
    t
}

/// `x = Σ coeffs[i] e_i`.
#[derive(Clone, PartialEq, Debug)]
pub struct Octonion<T: Scalar> {
    pub coeffs: [T; 8],
}

impl<T: Scalar> Octonion<T> {
    pub fn new(coeffs: [T; 8]) -> Self {
        Octonion { coeffs }
    }

    pub fn from_vec(v: Vec<T>) -> Self {
        Octonion { coeffs: v.try_into().expect("octonion needs 8 coefficients") }
    }

    pub fn zero_like(&self) -> Self {
        let z = self.coeffs[0].zero_like();
        Octonion { coeffs: std::array::from_fn(|_| z.clone()) }
    }

    pub fn scalar(c: T) -> Self {
        let z = c.zero_like();
        let mut coeffs: [T; 8] = std::array::from_fn(|_| z.clone());
        coeffs[0] = c;
        Octonion { coeffs }
    }

    pub fn basis(i: usize, like: &T) -> Self {
        let z = like.zero_like();
        let mut coeffs: [T; 8] = std::array::from_fn(|_| z.clone());
        coeffs[i] = like.one_like();
        Octonion { coeffs }
    }

    pub fn add(&self, o: &Self) -> Self {
        Octonion { coeffs: std::array::from_fn(|i| self.coeffs[i].add(&o.coeffs[i])) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Octonion { coeffs: std::array::from_fn(|i| self.coeffs[i].sub(&o.coeffs[i])) }
    }

    pub fn scale(&self, c: &T) -> Self {
        Octonion { coeffs: std::array::from_fn(|i| self.coeffs[i].mul(c)) }
    }

    pub fn scale_q(&self, q: &GaussRational) -> Self {
        Octonion { coeffs: std::array::from_fn(|i| self.coeffs[i].scale_q(q)) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_with(o, &standard_table())
    }

    /// Product under an arbitrary table (used to probe corrupted tables).
    pub fn mul_with(&self, o: &Self, table: &MulTable) -> Self {
        let mut out = self.zero_like();
        for i in 0..8 {
            if self.coeffs[i].is_zero_s() {
                continue;
            }
            for j in 0..8 {
                if o.coeffs[j].is_zero_s() {
                    continue;
                }
                let p = self.coeffs[i].mul(&o.coeffs[j]);
                let (sign, k) = match (i, j) {
                    (0, _) => (1, j),
                    (_, 0) => (1, i),
                    _ => (table[i][j].0, table[i][j].1 as usize),
                };
                out.coeffs[k] = if sign > 0 { out.coeffs[k].add(&p) } else { out.coeffs[k].sub(&p) };
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Octonion { coeffs: std::array::from_fn(|i| if i == 0 { self.coeffs[0].clone() } else { self.coeffs[i].neg() }) }
    }

    /// Σ a_i², the e0 component of a·ā.
    pub fn norm(&self) -> T {
        self.coeffs.iter().fold(self.coeffs[0].zero_like(), |acc, c| acc.add(&c.mul(c)))
    }

    pub fn re(&self) -> T {
        self.coeffs[0].clone()
    }
}

/// Octonion with polynomial coefficients given by consecutive ring variables.
pub fn oct_vars(ring: &RingRef, start: usize) -> Octonion<Polynomial> {
    Octonion { coeffs: std::array::from_fn(|i| Polynomial::var_index(ring, start + i)) }
}

/// Element of J₃(𝕆): [[c1, x3, x̄2], [x̄3, c2, x1], [x2, x̄1, c3]].
#[derive(Clone, PartialEq, Debug)]
pub struct JordanMatrix<T: Scalar> {
    pub diag: [T; 3],
    pub off: [Octonion<T>; 3],
}

/// General 3×3 matrix with octonion entries.
pub type OctMatrix<T> = [[Octonion<T>; 3]; 3];

impl<T: Scalar> JordanMatrix<T> {
    pub fn to_matrix(&self) -> OctMatrix<T> {
        let [c1, c2, c3] = &self.diag;
        let [x1, x2, x3] = &self.off;
        [
            [Octonion::scalar(c1.clone()), x3.clone(), x2.conj()],
            [x3.conj(), Octonion::scalar(c2.clone()), x1.clone()],
            [x2.clone(), x1.conj(), Octonion::scalar(c3.clone())],
        ]
    }

    pub fn trace(&self) -> T {
        self.diag[0].add(&self.diag[1]).add(&self.diag[2])
    }

    /// Cubic norm c1c2c3 − Σ c_i n(x_i) + 2 Re(x1 x2 x3).
    pub fn det(&self) -> T {
        let [c1, c2, c3] = &self.diag;
        let [x1, x2, x3] = &self.off;
        let mut d = c1.mul(c2).mul(c3);
        d = d.sub(&c1.mul(&x1.norm()));
        d = d.sub(&c2.mul(&x2.norm()));
        d = d.sub(&c3.mul(&x3.norm()));
        let tri = x1.mul(x2).mul(x3).re();
        d.add(&tri.add(&tri))
    }
}

pub fn oct_matrix_mul<T: Scalar>(a: &OctMatrix<T>, b: &OctMatrix<T>) -> OctMatrix<T> {
    oct_matrix_mul_with(a, b, &standard_table())
}

pub fn oct_matrix_mul_with<T: Scalar>(a: &OctMatrix<T>, b: &OctMatrix<T>, table: &MulTable) -> OctMatrix<T> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut s = a[i][0].mul_with(&b[0][j], table);
            for k in 1..3 {
                s = s.add(&a[i][k].mul_with(&b[k][j], table));
            }
            s
        })
    })
}

/// A∘B = ½(AB + BA).
pub fn jordan_product<T: Scalar>(a: &OctMatrix<T>, b: &OctMatrix<T>) -> OctMatrix<T> {
    let ab = oct_matrix_mul(a, b);
    let ba = oct_matrix_mul(b, a);
    let half = GaussRational::from_ratio(1, 2);
    std::array::from_fn(|i| std::array::from_fn(|j| ab[i][j].add(&ba[i][j]).scale_q(&half)))
}

pub fn oct_matrix_scale<T: Scalar>(a: &OctMatrix<T>, c: &T) -> OctMatrix<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].scale(c)))
}

/// Rank-one cell matrix [[1, x, y], [x̄, x̄x, x̄y], [ȳ, ȳx, ȳy]].
pub fn cayley_matrix<T: Scalar>(x: &Octonion<T>, y: &Octonion<T>) -> OctMatrix<T> {
    cayley_matrix_with(x, y, &standard_table())
}

pub fn cayley_matrix_with<T: Scalar>(x: &Octonion<T>, y: &Octonion<T>, table: &MulTable) -> OctMatrix<T> {
    let one = Octonion::scalar(x.coeffs[0].one_like());
    let xb = x.conj();
    let yb = y.conj();
    [
        [one, x.clone(), y.clone()],
        [xb.clone(), xb.mul_with(x, table), xb.mul_with(y, table)],
        [yb.clone(), yb.mul_with(x, table), yb.mul_with(y, table)],
    ]
}

pub fn oct_matrix_trace<T: Scalar>(a: &OctMatrix<T>) -> T {
    a[0][0].re().add(&a[1][1].re()).add(&a[2][2].re())
}

/// Jordan matrix of the 27-dimensional cell with diagonal (x1,x2,x3):
/// [[x1, y, t], [ȳ, x2, w], [t̄, w̄, x3]].
pub fn m27_matrix(ring: &RingRef) -> JordanMatrix<Polynomial> {
    let x = |i| Polynomial::var_index(ring, i);
    let y = oct_vars(ring, 3);
    let t = oct_vars(ring, 11);
    let w = oct_vars(ring, 19);
    JordanMatrix { diag: [x(0), x(1), x(2)], off: [w, t.conj(), y] }
}

pub enum CellKind {
    M16,
    M27,
}

fn sumsq(v: &[Polynomial]) -> Polynomial {
    v.iter().fold(Polynomial::zero(v[0].ring()), |acc, p| &acc + &(p * p))
}

/// The "y x̄"-type bilinear forms A_0..A_7 of the 16-dimensional cell.
fn a_forms(x: &[Polynomial], y: &[Polynomial]) -> Vec<Polynomial> {
    // (sign, yi, xj) terms of A_1..A_7
    const T: [[(i8, usize, usize); 8]; 7] = [
        [(-1, 0, 1), (1, 1, 0), (-1, 2, 4), (1, 4, 2), (-1, 3, 7), (1, 7, 3), (-1, 5, 6), (1, 6, 5)],
        [(-1, 0, 2), (1, 2, 0), (-1, 4, 1), (1, 1, 4), (-1, 3, 5), (1, 5, 3), (-1, 6, 7), (1, 7, 6)],
        [(-1, 0, 3), (1, 3, 0), (1, 1, 7), (-1, 7, 1), (1, 2, 5), (-1, 5, 2), (-1, 4, 6), (1, 6, 4)],
        [(-1, 0, 4), (1, 4, 0), (-1, 1, 2), (1, 2, 1), (1, 3, 6), (-1, 6, 3), (-1, 5, 7), (1, 7, 5)],
        [(-1, 0, 5), (1, 5, 0), (1, 1, 6), (-1, 6, 1), (-1, 2, 3), (1, 3, 2), (1, 4, 7), (-1, 7, 4)],
        [(-1, 0, 6), (1, 6, 0), (-1, 1, 5), (1, 5, 1), (1, 2, 7), (-1, 7, 2), (-1, 3, 4), (1, 4, 3)],
        [(-1, 0, 7), (1, 7, 0), (-1, 1, 3), (1, 3, 1), (-1, 2, 6), (1, 6, 2), (-1, 4, 5), (1, 5, 4)],
    ];
    let ring = x[0].ring();
    let mut out = vec![(0..8).fold(Polynomial::zero(ring), |acc, i| &acc + &(&y[i] * &x[i]))];
    for row in T.iter() {
        out.push(signed_sum(row, y, x));
    }
    out
}

fn signed_sum(row: &[(i8, usize, usize)], a: &[Polynomial], b: &[Polynomial]) -> Polynomial {
    let mut p = Polynomial::zero(a[0].ring());
    for &(s, i, j) in row {
        let t = &a[i] * &b[j];
        p = if s > 0 { &p + &t } else { &p - &t };
    }
    p
}

/// The E-type forms (the y,ω products inside E_0..E_7 without the x₂t part).
fn e_core(y: &[Polynomial], w: &[Polynomial]) -> Vec<Polynomial> {
    const T: [[(i8, usize, usize); 8]; 8] = [
        [(1, 0, 0), (-1, 1, 1), (-1, 2, 2), (-1, 3, 3), (-1, 4, 4), (-1, 5, 5), (-1, 6, 6), (-1, 7, 7)],
        [(1, 0, 1), (1, 1, 0), (1, 2, 4), (-1, 4, 2), (1, 3, 7), (-1, 7, 3), (1, 5, 6), (-1, 6, 5)],
        [(1, 0, 2), (1, 2, 0), (1, 4, 1), (-1, 1, 4), (1, 3, 5), (-1, 5, 3), (1, 6, 7), (-1, 7, 6)],
        [(1, 0, 3), (1, 3, 0), (-1, 1, 7), (1, 7, 1), (-1, 2, 5), (1, 5, 2), (1, 4, 6), (-1, 6, 4)],
        [(1, 0, 4), (1, 4, 0), (1, 1, 2), (-1, 2, 1), (-1, 3, 6), (1, 6, 3), (1, 5, 7), (-1, 7, 5)],
        [(1, 0, 5), (1, 5, 0), (-1, 1, 6), (1, 6, 1), (1, 2, 3), (-1, 3, 2), (-1, 4, 7), (1, 7, 4)],
        [(1, 0, 6), (1, 6, 0), (1, 1, 5), (-1, 5, 1), (-1, 2, 7), (1, 7, 2), (1, 3, 4), (-1, 4, 3)],
        [(1, 0, 7), (1, 7, 0), (1, 1, 3), (-1, 3, 1), (1, 2, 6), (-1, 6, 2), (1, 4, 5), (-1, 5, 4)],
    ];
    T.iter().map(|row| signed_sum(row, y, w)).collect()
}

/// The F-type forms (y,t products inside F_0..F_7 without the x₁ω part).
fn f_core(y: &[Polynomial], t: &[Polynomial]) -> Vec<Polynomial> {
    const T: [[(i8, usize, usize); 8]; 8] = [
        [(1, 0, 0), (1, 1, 1), (1, 2, 2), (1, 3, 3), (1, 4, 4), (1, 5, 5), (1, 6, 6), (1, 7, 7)],
        [(1, 0, 1), (-1, 1, 0), (-1, 2, 4), (1, 4, 2), (-1, 3, 7), (1, 7, 3), (-1, 5, 6), (1, 6, 5)],
        [(1, 0, 2), (-1, 2, 0), (-1, 4, 1), (1, 1, 4), (-1, 3, 5), (1, 5, 3), (-1, 6, 7), (1, 7, 6)],
        [(1, 0, 3), (-1, 3, 0), (1, 1, 7), (-1, 7, 1), (1, 2, 5), (-1, 5, 2), (-1, 4, 6), (1, 6, 4)],
        [(1, 0, 4), (-1, 4, 0), (-1, 1, 2), (1, 2, 1), (1, 3, 6), (-1, 6, 3), (-1, 5, 7), (1, 7, 5)],
        [(1, 0, 5), (-1, 5, 0), (1, 1, 6), (-1, 6, 1), (-1, 2, 3), (1, 3, 2), (1, 4, 7), (-1, 7, 4)],
        [(1, 0, 6), (-1, 6, 0), (-1, 1, 5), (1, 5, 1), (1, 2, 7), (-1, 7, 2), (-1, 3, 4), (1, 4, 3)],
        [(1, 0, 7), (-1, 7, 0), (-1, 1, 3), (1, 3, 1), (-1, 2, 6), (1, 6, 2), (-1, 4, 5), (1, 5, 4)],
    ];
    T.iter().map(|row| signed_sum(row, y, t)).collect()
}

/// Hard-coded cell coordinate functions beyond the linear block.
///
/// M16 ring variables: x0..x7, y0..y7; result A_0..A_7, B_0, B_1.
/// M27 ring variables: x1,x2,x3, y0..y7, t0..t7, w0..w7; result
/// A, B, C, D_0..D_7, E_0..E_7, F_0..F_7, G.
pub fn cell_forms(which: CellKind, ring: &RingRef) -> Vec<Polynomial> {
    let v = Polynomial::vars(ring);
    match which {
        CellKind::M16 => {
            assert_eq!(ring.len(), 16);
            let (x, y) = (&v[0..8], &v[8..16]);
            let mut out = a_forms(x, y);
            out.push(sumsq(x));
            out.push(sumsq(y));
            out
        }
        CellKind::M27 => {
            assert_eq!(ring.len(), 27);
            let (x1, x2, x3) = (&v[0], &v[1], &v[2]);
            let (y, t, w) = (&v[3..11], &v[11..19], &v[19..27]);
            let a = &(x2 * x3) - &sumsq(w);
            let b = &(x1 * x3) - &sumsq(t);
            let c = &(x1 * x2) - &sumsq(y);
            // D_i uses the same bilinear pattern as A_i with (x,y) -> (ω,t).
            let d: Vec<Polynomial> = a_forms(w, t).iter().zip(y).map(|(p, yi)| p - &(x3 * yi)).collect();
            let ec = e_core(y, w);
            let e: Vec<Polynomial> = ec.iter().zip(t).map(|(p, ti)| p - &(x2 * ti)).collect();
            let f: Vec<Polynomial> = f_core(y, t).iter().zip(w).map(|(p, wi)| p - &(x1 * wi)).collect();
            let mut g = &(&(&(x1 * x2) * x3) - &(x1 * &sumsq(w))) - &(x2 * &sumsq(t));
            g = &g - &(x3 * &sumsq(y));
            let tri = ec.iter().zip(t).fold(Polynomial::zero(ring), |acc, (p, ti)| &acc + &(p * ti));
            g = &g + &tri.scale(&GaussRational::from_int(2));
            let mut out = vec![a, b, c];
            out.extend(d);
            out.extend(e);
            out.extend(f);
            out.push(g);
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Ring;

    fn q(n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    fn e(i: usize) -> Octonion<GaussRational> {
        Octonion::basis(i, &q(0))
    }

    #[test]
    fn table_entries() {
        assert_eq!(e(1).mul(&e(2)), e(4));
        assert_eq!(e(1).mul(&e(1)), Octonion::scalar(q(-1)));
        assert_eq!(e(7).mul(&e(5)), e(4).scale(&q(-1)));
        let x = Octonion::from_vec((1..=8).map(q).collect());
        assert_eq!(e(0).mul(&x), x);
    }

    #[test]
    fn conj_and_norm() {
        assert_eq!(e(3).conj(), e(3).scale(&q(-1)));
        assert_eq!(e(0).add(&e(1)).norm(), q(2));
        let x = Octonion::from_vec((1..=8).map(q).collect());
        assert_eq!(x.conj().conj(), x);
        let xx = x.mul(&x.conj());
        assert_eq!(xx, Octonion::scalar(x.norm()));
    }

    #[test]
    fn jordan_basics() {
        let z = q(0);
        let zo = Octonion::scalar(z.clone());
        let d = JordanMatrix { diag: [q(2), q(3), q(5)], off: [zo.clone(), zo.clone(), zo.clone()] };
        assert_eq!(d.det(), q(30));
        assert_eq!(d.trace(), q(10));
        let a = JordanMatrix { diag: [q(1), q(-2), q(4)], off: [e(1).add(&e(3)), e(2), e(0).add(&e(6))] }.to_matrix();
        let id = JordanMatrix { diag: [q(1), q(1), q(1)], off: [zo.clone(), zo.clone(), zo.clone()] }.to_matrix();
        assert_eq!(jordan_product(&a, &id), a);
        let p = JordanMatrix { diag: [q(1), q(0), q(0)], off: [zo.clone(), zo.clone(), zo] }.to_matrix();
        assert_eq!(jordan_product(&p, &p), p);
    }

    #[test]
    fn cayley_cell_small_cases() {
        let zero = Octonion::scalar(q(0));
        let x = cayley_matrix(&zero, &zero);
        assert_eq!(x[0][0], Octonion::scalar(q(1)));
        assert_eq!(x[1][1], zero);
        let x = cayley_matrix(&e(0), &zero);
        assert_eq!(x[1][1], Octonion::scalar(q(1)));
    }

    #[test]
    fn m16_forms() {
        let names: Vec<String> = (0..8).map(|i| format!("x{i}")).chain((0..8).map(|i| format!("y{i}"))).collect();
        let r = Ring::new(&names);
        let f = cell_forms(CellKind::M16, &r);
        assert_eq!(f.len(), 10);
        let v = Polynomial::vars(&r);
        let a0 = (0..8).fold(Polynomial::zero(&r), |acc, i| &acc + &(&v[8 + i] * &v[i]));
        assert_eq!(f[0], a0);
        // A = y x̄ componentwise
        let y = oct_vars(&r, 8);
        let x = oct_vars(&r, 0);
        let yx = y.mul(&x.conj());
        for i in 0..8 {
            assert_eq!(f[i], yx.coeffs[i]);
        }
    }

    #[test]
    fn m27_forms() {
        let r = crate::spaces::e27_ring();
        let f = cell_forms(CellKind::M27, &r);
        assert_eq!(f.len(), 28);
        let v = Polynomial::vars(&r);
        // A = x2 x3 − Σω²
        let w2 = (19..27).fold(Polynomial::zero(&r), |acc, i| &acc + &(&v[i] * &v[i]));
        assert_eq!(f[0], &(&v[1] * &v[2]) - &w2);
        // D0 at t = ω = 0 is −x3 y0
        let assign: Vec<(usize, GaussRational)> = (11..27).map(|i| (i, q(0))).collect();
        assert_eq!(f[3].specialize(&assign), -&(&v[2] * &v[3]));
    }

    #[test]
    fn m27_determinant_matches_g() {
        let r = crate::spaces::e27_ring();
        let g = cell_forms(CellKind::M27, &r).pop().unwrap();
        assert_eq!(m27_matrix(&r).det(), g);
    }

    #[test]
    fn cayley_identity_symbolic() {
        let names: Vec<String> = (0..8).map(|i| format!("x{i}")).chain((0..8).map(|i| format!("y{i}"))).collect();
        let r = Ring::new(&names);
        let (x, y) = (oct_vars(&r, 0), oct_vars(&r, 8));
        let m = cayley_matrix(&x, &y);
        let tr = oct_matrix_trace(&m);
        assert_eq!(oct_matrix_mul(&m, &m), oct_matrix_scale(&m, &tr));
    }

    #[test]
    fn swapped_cell_breaks_identity() {
        let (x, y) = (e(1).add(&e(2)), e(4).add(&e(3)));
        let one = Octonion::scalar(q(1));
        let m: OctMatrix<GaussRational> = [
            [one, x.clone(), y.clone()],
            [x.conj(), x.conj().mul(&x), y.mul(&x.conj())],
            [y.conj(), x.mul(&y.conj()), y.conj().mul(&y)],
        ];
        let tr = oct_matrix_trace(&m);
        assert_ne!(oct_matrix_mul(&m, &m), oct_matrix_scale(&m, &tr));
    }

    #[test]
    fn composition_and_alternativity() {
        let a = e(1).add(&e(2).scale_q(&q(3))).add(&Octonion::scalar(q(2)));
        let b = e(4).sub(&e(7)).add(&e(5).scale_q(&q(-2)));
        let c = e(6).add(&e(3));
        assert_eq!(a.mul(&b).norm(), a.norm().mul(&b.norm()));
        assert_eq!(a.mul(&a).mul(&b), a.mul(&a.mul(&b)));
        assert_eq!(b.mul(&a).mul(&a), b.mul(&a.mul(&a)));
        assert_eq!(e(1).mul(&e(2)), e(2).mul(&e(1)).scale_q(&q(-1)));
        let triples = [(e(1), e(2), e(4)), (a.clone(), b.clone(), c.clone())];
        assert!(triples.iter().any(|(u, v, w)| u.mul(v).mul(w) != u.mul(&v.mul(w))));
        assert_eq!(a.mul(&b).conj(), b.conj().mul(&a.conj()));
    }
}
