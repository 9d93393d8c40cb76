use num_traits::Zero;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, Matrix};
use crate::polyring::GaussRational;
use crate::segre::random_rational;
use crate::spaces::subsets;

fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    (0..rows).map(|_| (0..cols).map(|_| random_rational(rng, 97)).collect()).collect()
}

fn minor(b: &Matrix, rows: &[usize], cols: &[usize]) -> GaussRational {
    let sub: Matrix = rows.iter().map(|&r| cols.iter().map(|&c| b[r][c].clone()).collect()).collect();
    linalg::det(&sub)
}

fn identity_holds(b: &Matrix) -> bool {
    let n = b.len();
    let det_b = linalg::det(b);
    let head: Vec<usize> = (0..n - 1).collect();
    let subs = subsets(n - 1, n - 2);
    let with_last = |s: &Vec<usize>| -> Vec<usize> { s.iter().copied().chain(std::iter::once(n - 1)).collect() };
    let top_left = minor(b, &head, &head);
    for i in &subs {
        let ri = with_last(i);
        let bottom_left = minor(b, &ri, &head);
        for j in &subs {
            let cj = with_last(j);
            let lhs = &top_left * &minor(b, &ri, &cj) - minor(b, &head, &cj) * &bottom_left;
            if lhs != minor(b, i, j) * &det_b {
                return false;
            }
        }
    }
    true
}

/// Exact check of the bordered-minor identity
/// det[[B(1..n−1|1..n−1), B(1..n−1|J,n)], [B(I,n|1..n−1), B(I,n|J,n)]] = B(I|J)·|B|
/// on random matrices and on one matrix of rank n − 1.
pub fn bordered_identity_check(n: usize, trials: usize, rng: &mut ChaCha8Rng) -> bool {
    assert!(n >= 3, "order must be at least 3");
    for _ in 0..trials {
        if !identity_holds(&random_matrix(n, n, rng)) {
            return false;
        }
    }
    let singular = linalg::mat_mul(&random_matrix(n, n - 1, rng), &random_matrix(n - 1, n, rng));
    linalg::det(&singular).is_zero() && identity_holds(&singular)
}

/// The n determinants det(b_{i₁}..b_{i_{n−1}}, a) over (n−1)-subsets of the columns of B.
pub fn bordered_dets(b: &Matrix, a: &[GaussRational]) -> Vec<GaussRational> {
    let n = b.len();
    subsets(n, n - 1)
        .iter()
        .map(|cols| {
            let m: Matrix = (0..n)
                .map(|r| cols.iter().map(|&c| b[r][c].clone()).chain(std::iter::once(a[r].clone())).collect())
                .collect();
            linalg::det(&m)
        })
        .collect()
}

/// For invertible B: all bordered determinants vanish exactly when a = 0.
pub fn bordered_vanish_probe(n: usize, trials: usize, rng: &mut ChaCha8Rng) -> bool {
    let consistent = |b: &Matrix, a: &[GaussRational]| {
        let all_zero = bordered_dets(b, a).iter().all(|d| d.is_zero());
        all_zero == a.iter().all(|x| x.is_zero())
    };
    let id = linalg::identity(n);
    let mut e1 = vec![GaussRational::zero(); n];
    e1[0] = GaussRational::from_int(1);
    if !consistent(&id, &e1) || !consistent(&id, &vec![GaussRational::zero(); n]) {
        return false;
    }
    for _ in 0..trials {
        let b = loop {
            let b = random_matrix(n, n, rng);
            if !linalg::det(&b).is_zero() {
                break b;
            }
        };
        let a: Vec<GaussRational> = (0..n).map(|_| random_rational(rng, 97)).collect();
        if !consistent(&b, &a) || !consistent(&b, &vec![GaussRational::zero(); n]) {
            return false;
        }
    }
    true
}
