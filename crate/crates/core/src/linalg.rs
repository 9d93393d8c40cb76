//! Exact dense linear algebra over the Gaussian rationals, plus a fast
//! modular shadow used to screen candidates before exact confirmation.

use num_traits::{One, Zero};

use crate::polyring::{GaussRational, Polynomial, RingRef};

pub type Matrix = Vec<Vec<GaussRational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { GaussRational::one() } else { GaussRational::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    let mut s = GaussRational::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            s += &(x * &b[k][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let m = a.first().map(|r| r.len()).unwrap_or(0);
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Determinant by Gaussian elimination.
pub fn det(a: &Matrix) -> GaussRational {
    let n = a.len();
    let mut m = a.clone();
    let mut d = GaussRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return GaussRational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d = &d * &m[c][c];
        let inv = m[c][c].inv().unwrap();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= &t;
            }
        }
    }
    d
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].inv().unwrap();
        for k in c..cols {
            m[r][k] = &m[r][k] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &Matrix) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

/// Basis of the right null space {x : A x = 0}.
pub fn null_space(a: &Matrix) -> Vec<Vec<GaussRational>> {
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![GaussRational::zero(); cols];
            v[f] = GaussRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[r][f];
            }
            v
        })
        .collect()
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut aug: Matrix = a.iter().zip(identity(n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Incremental row echelon basis: adding a row reports whether rank grew.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, Vec<GaussRational>)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[GaussRational]) -> Vec<GaussRational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (k, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    let t = &f * x;
                    v[k] -= &t;
                }
            }
        }
        v
    }

    pub fn would_increase(&self, v: &[GaussRational]) -> bool {
        self.reduce(v).iter().any(|x| !x.is_zero())
    }

    pub fn try_add(&mut self, v: &[GaussRational]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().unwrap();
        let r: Vec<GaussRational> = r.iter().map(|x| x * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (k, x) in r.iter().enumerate() {
                    if !x.is_zero() {
                        let t = &f * x;
                        row[k] -= &t;
                    }
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

/// Determinant of a small polynomial matrix by cofactor expansion.
pub fn poly_det(m: &[Vec<Polynomial>], ring: &RingRef) -> Polynomial {
    let n = m.len();
    match n {
        0 => Polynomial::one(ring),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = Polynomial::zero(ring);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let t = &m[0][j] * &poly_det(&minor, ring);
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

/// Arithmetic in F_p[i] with p = 2^61 - 1 (p ≡ 3 mod 4, so this is a field).
pub mod modular {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::ToPrimitive;

    use crate::polyring::GaussRational;

    pub const P: u64 = (1u64 << 61) - 1;

    #[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
    pub struct Fq2 {
        pub re: u64,
        pub im: u64,
    }

    fn mulm(a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % P as u128) as u64
    }

    fn addm(a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= P {
            s - P
        } else {
            s
        }
    }

    fn subm(a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + P - b
        }
    }

    fn powm(mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, a);
            }
            a = mulm(a, a);
            e >>= 1;
        }
        r
    }

    fn red(n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(P)).to_u64().unwrap()
    }

    impl Fq2 {
        pub const ZERO: Fq2 = Fq2 { re: 0, im: 0 };
        pub const ONE: Fq2 = Fq2 { re: 1, im: 0 };

        /// `None` when a denominator is divisible by `P`.
        pub fn from_gauss(g: &GaussRational) -> Option<Fq2> {
            let conv = |r: &num_rational::BigRational| -> Option<u64> {
                let d = red(r.denom());
                if d == 0 {
                    return None;
                }
                Some(mulm(red(r.numer()), powm(d, P - 2)))
            };
            Some(Fq2 { re: conv(&g.re)?, im: conv(&g.im)? })
        }

        pub fn is_zero(&self) -> bool {
            self.re == 0 && self.im == 0
        }

        pub fn add(self, o: Fq2) -> Fq2 {
            Fq2 { re: addm(self.re, o.re), im: addm(self.im, o.im) }
        }

        pub fn sub(self, o: Fq2) -> Fq2 {
            Fq2 { re: subm(self.re, o.re), im: subm(self.im, o.im) }
        }

        pub fn mul(self, o: Fq2) -> Fq2 {
            Fq2 {
                re: subm(mulm(self.re, o.re), mulm(self.im, o.im)),
                im: addm(mulm(self.re, o.im), mulm(self.im, o.re)),
            }
        }

        pub fn inv(self) -> Fq2 {
            let n = addm(mulm(self.re, self.re), mulm(self.im, self.im));
            let ni = powm(n, P - 2);
            Fq2 { re: mulm(self.re, ni), im: mulm(subm(0, self.im), ni) }
        }
    }

    /// Incremental echelon basis over F_p[i].
    #[derive(Clone, Debug, Default)]
    pub struct ModEchelon {
        rows: Vec<(usize, Vec<Fq2>)>,
    }

    impl ModEchelon {
        pub fn new() -> Self {
            Self::default()
        }

        pub fn rank(&self) -> usize {
            self.rows.len()
        }

        pub fn try_add(&mut self, v: &[Fq2]) -> bool {
            let mut v = v.to_vec();
            for (p, row) in &self.rows {
                if v[*p].is_zero() {
                    continue;
                }
                let f = v[*p];
                for (k, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        v[k] = v[k].sub(f.mul(*x));
                    }
                }
            }
            let Some(p) = v.iter().position(|x| !x.is_zero()) else {
                return false;
            };
            let inv = v[p].inv();
            let v: Vec<Fq2> = v.iter().map(|x| x.mul(inv)).collect();
            self.rows.push((p, v));
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    /// Leibniz expansion as an independent oracle.
    fn det_leibniz(a: &Matrix) -> GaussRational {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..n {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = a.len();
        let mut s = GaussRational::zero();
        for p in perms(n) {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if p[i] > p[j] {
                        inv += 1;
                    }
                }
            }
            let mut t = GaussRational::one();
            for i in 0..n {
                t = &t * &a[i][p[i]];
            }
            s = if inv % 2 == 0 { &s + &t } else { &s - &t };
        }
        s
    }

    #[test]
    fn det_agrees_with_leibniz() {
        let a = m(&[&[2, -1, 3, 0], &[1, 4, 0, -2], &[0, 5, -3, 1], &[7, 0, 2, 2]]);
        assert_eq!(det(&a), det_leibniz(&a));
        let s = m(&[&[1, 2], &[2, 4]]);
        assert!(det(&s).is_zero());
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 1, -1], &[2, 2, -2]]);
        assert_eq!(rank(&a), 1);
        let ns = null_space(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let prod = mat_mul(&a, &v.iter().map(|x| vec![x.clone()]).collect());
            assert!(prod.iter().all(|r| r[0].is_zero()));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let ai = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &ai), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn echelon_increments() {
        let mut e = EchelonBasis::new();
        assert!(e.try_add(&[q(1), q(2), q(3)]));
        assert!(!e.try_add(&[q(2), q(4), q(6)]));
        assert!(e.try_add(&[q(0), q(1), q(0)]));
        assert!(!e.would_increase(&[q(1), q(5), q(3)]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn modular_shadow_matches_exact_rank() {
        use modular::{Fq2, ModEchelon};
        let rows = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let mut me = ModEchelon::new();
        for r in &rows {
            me.try_add(&r.iter().map(|x| Fq2::from_gauss(x).unwrap()).collect::<Vec<_>>());
        }
        assert_eq!(me.rank(), rank(&rows));
        let i = Fq2::from_gauss(&GaussRational::i()).unwrap();
        assert_eq!(i.mul(i), Fq2::from_gauss(&q(-1)).unwrap());
        let h = Fq2::from_gauss(&GaussRational::from_parts(1, 3, 2, 7)).unwrap();
        assert_eq!(h.mul(h.inv()), Fq2::ONE);
    }
}
