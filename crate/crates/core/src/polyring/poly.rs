use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{GaussRational, PolyError};

/// An ordered list of variable names. Polynomials only combine when their
/// rings carry identical name lists.
#[derive(Debug)]
pub struct Ring {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new<S: AsRef<str>>(names: &[S]) -> RingRef {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect::<HashMap<_, _>>();
        assert_eq!(index.len(), names.len(), "duplicate variable names");
        Arc::new(Ring { names, index })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Ring over `a`'s names followed by `b`'s names not already present.
    pub fn union(a: &Ring, b: &Ring) -> RingRef {
        let mut names = a.names.clone();
        for n in &b.names {
            if a.index_of(n).is_none() {
                names.push(n.clone());
            }
        }
        Ring::new(&names)
    }
}

impl Eq for Ring {}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

pub fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}

/// Exponent vector, one slot per ring variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

/// Sparse polynomial with Gaussian-rational coefficients.
#[derive(Clone)]
pub struct Polynomial {
    ring: RingRef,
    terms: BTreeMap<Monomial, GaussRational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &RingRef, c: GaussRational) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.len()), c);
        }
        p
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, GaussRational::one())
    }

    pub fn var_index(ring: &RingRef, i: usize) -> Self {
        let mut p = Self::zero(ring);
        p.terms.insert(Monomial::var(ring.len(), i), GaussRational::one());
        p
    }

    pub fn var(ring: &RingRef, name: &str) -> Result<Self, PolyError> {
        let i = ring.index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::var_index(ring, i))
    }

    /// All ring variables as degree-one polynomials, in ring order.
    pub fn vars(ring: &RingRef) -> Vec<Self> {
        (0..ring.len()).map(|i| Self::var_index(ring, i)).collect()
    }

    pub fn from_terms<I>(ring: &RingRef, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, GaussRational)>,
    {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            assert_eq!(m.0.len(), ring.len(), "monomial length mismatch");
            p.add_term(m, &c);
        }
        p
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, GaussRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn coeff(&self, m: &Monomial) -> GaussRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> GaussRational {
        self.coeff(&Monomial::one(self.ring.len()))
    }

    /// Adds `c * m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn conj_coeffs(&self) -> Polynomial {
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect() }
    }

    pub fn derive(&self, var: &str) -> Result<Polynomial, PolyError> {
        let i = self.ring.index_of(var).ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        Ok(self.derive_index(i))
    }

    pub fn derive_index(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, &c.scale_int(e as i64));
        }
        out
    }

    /// Mixed partial derivative with multiplicities `orders[i]` in variable i.
    pub fn derive_multi(&self, orders: &[u32]) -> Polynomial {
        let mut p = self.clone();
        for (i, &k) in orders.iter().enumerate() {
            for _ in 0..k {
                p = p.derive_index(i);
            }
        }
        p
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Total degree in the variables selected by `mask`.
    pub fn degree_in(&self, mask: &[bool]) -> Option<u32> {
        self.terms.keys().map(|m| m.0.iter().zip(mask).filter(|(_, &s)| s).map(|(e, _)| *e).sum()).max()
    }

    pub fn support(&self) -> BTreeSet<Monomial> {
        self.terms.keys().cloned().collect()
    }

    /// Indices of variables that occur with positive exponent.
    pub fn used_vars(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    s.insert(i);
                }
            }
        }
        s
    }

    pub fn evaluate(&self, point: &HashMap<String, GaussRational>) -> Result<GaussRational, PolyError> {
        let vals = self
            .ring
            .names()
            .iter()
            .map(|n| point.get(n).cloned().ok_or_else(|| PolyError::MissingAssignment(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.eval_slice(&vals))
    }

    /// Exact evaluation with values given in ring order.
    pub fn eval_slice(&self, vals: &[GaussRational]) -> GaussRational {
        assert_eq!(vals.len(), self.ring.len());
        let mut powers: Vec<Vec<GaussRational>> = vec![vec![GaussRational::one()]; vals.len()];
        let mut acc = GaussRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &vals[i];
                    pw.push(next);
                }
                t = &t * &pw[e as usize];
            }
            acc += &t;
        }
        acc
    }

    pub fn evaluate_float(&self, point: &HashMap<String, Complex64>) -> Result<Complex64, PolyError> {
        let vals = self
            .ring
            .names()
            .iter()
            .map(|n| point.get(n).copied().ok_or_else(|| PolyError::MissingAssignment(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.eval_f64(&vals))
    }

    /// Floating point evaluation; not authoritative, used for metrics only.
    pub fn eval_f64(&self, vals: &[Complex64]) -> Complex64 {
        FloatPoly::from_poly(self).eval(vals)
    }

    /// Sets the listed variables to constants; the ring is unchanged.
    pub fn specialize(&self, assign: &[(usize, GaussRational)]) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut t = c.clone();
            for (i, v) in assign {
                let e = m2.0[*i];
                if e > 0 {
                    t = &t * &v.pow(e);
                    m2.0[*i] = 0;
                }
            }
            out.add_term(m2, &t);
        }
        out
    }

    /// Substitutes polynomials (all in one target ring) for every variable.
    pub fn compose(&self, args: &[Polynomial]) -> Polynomial {
        assert_eq!(args.len(), self.ring.len());
        let target = args.first().map(|a| a.ring.clone()).unwrap_or_else(|| self.ring.clone());
        let mut cache: Vec<Vec<Polynomial>> = args.iter().map(|a| vec![Polynomial::one(&a.ring)]).collect();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut cache[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &args[i];
                    pw.push(next);
                }
                t = &t * &pw[e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Rewrites the polynomial into `target`, mapping variables by name.
    pub fn embed(&self, target: &RingRef) -> Result<Polynomial, PolyError> {
        let map = self
            .ring
            .names()
            .iter()
            .map(|n| target.index_of(n).ok_or_else(|| PolyError::UnknownVariable(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.embed_with(target, &map)
    }

    /// Rewrites into `target`, variable i going to slot `map[i]`.
    pub fn embed_with(&self, target: &RingRef, map: &[usize]) -> Result<Polynomial, PolyError> {
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    e[map[i]] += k;
                }
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }

    /// Keeps only terms of total degree at most `d`.
    pub fn truncate(&self, d: u32) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Product with all terms of degree above `d` discarded.
    pub fn mul_truncated(&self, other: &Polynomial, d: u32) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > d {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() <= d {
                    out.add_term(ma.mul(mb), &(ca * cb));
                }
            }
        }
        out
    }

    /// Homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Leading term under the lexicographic order on exponent vectors.
    pub fn leading(&self) -> Option<(&Monomial, &GaussRational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient if `d` divides `self`, else `None`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() || !same_ring(&self.ring, &d.ring) {
            return None;
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut q = Polynomial::zero(&self.ring);
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&rm) {
                return None;
            }
            let tm = rm.div(&dm);
            let tc = &rc * &dc_inv;
            let mut t = Polynomial::zero(&self.ring);
            t.add_term(tm, &tc);
            rem = &rem - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.terms.values().all(GaussRational::is_real)
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<'a> $tr<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            /// Panics when the rings differ; use the `try_` form to get an error.
            fn $m(self, rhs: &'a Polynomial) -> Polynomial {
                self.$f(rhs).expect("variable sets differ")
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&GaussRational::from_int(-1))
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.names[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.names[i], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", c, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Float copy of a polynomial for repeated numerical evaluation.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    nvars: usize,
    terms: Vec<(Vec<(usize, u32)>, Complex64)>,
    max_exp: Vec<u32>,
}

impl FloatPoly {
    pub fn from_poly(p: &Polynomial) -> Self {
        let nvars = p.ring().len();
        let mut max_exp = vec![0u32; nvars];
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| {
                let sparse: Vec<(usize, u32)> =
                    m.0.iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| {
                            max_exp[i] = max_exp[i].max(e);
                            (i, e)
                        })
                        .collect();
                (sparse, c.to_complex64())
            })
            .collect();
        FloatPoly { nvars, terms, max_exp }
    }

    pub fn eval(&self, vals: &[Complex64]) -> Complex64 {
        assert_eq!(vals.len(), self.nvars);
        let powers: Vec<Vec<Complex64>> = vals
            .iter()
            .zip(&self.max_exp)
            .map(|(v, &k)| {
                let mut pw = Vec::with_capacity(k as usize + 1);
                pw.push(Complex64::new(1.0, 0.0));
                for j in 0..k as usize {
                    pw.push(pw[j] * v);
                }
                pw
            })
            .collect();
        self.terms.iter().map(|(m, c)| m.iter().fold(*c, |acc, &(i, e)| acc * powers[i][e as usize])).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring2() -> RingRef {
        Ring::new(&["z", "xi"])
    }

    fn q(n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    #[test]
    fn difference_of_squares() {
        let r = Ring::new(&["z"]);
        let z = Polynomial::var(&r, "z").unwrap();
        let one = Polynomial::one(&r);
        let p = &(&one + &z) * &(&one - &z);
        assert_eq!(p, &one - &z.pow(2));
        assert_eq!(&p + &Polynomial::zero(&r), p);
    }

    #[test]
    fn product_of_segre_factors() {
        let r = Ring::new(&["z1", "z2", "xi1", "xi2"]);
        let v = Polynomial::vars(&r);
        let one = Polynomial::one(&r);
        let lhs = &(&one + &(&v[0] * &v[2])) * &(&one + &(&v[1] * &v[3]));
        let expected = &(&(&one + &(&v[0] * &v[2])) + &(&v[1] * &v[3])) + &(&(&v[0] * &v[1]) * &(&v[2] * &v[3]));
        assert_eq!(lhs, expected);
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = Polynomial::one(&Ring::new(&["z"]));
        let b = Polynomial::one(&Ring::new(&["w"]));
        assert!(matches!(a.try_add(&b), Err(PolyError::RingMismatch)));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn derivatives() {
        let r = ring2();
        let z = Polynomial::var(&r, "z").unwrap();
        let xi = Polynomial::var(&r, "xi").unwrap();
        let p = &z.pow(2) * &xi;
        assert_eq!(p.derive("z").unwrap(), (&z * &xi).scale(&q(2)));
        assert!(Polynomial::constant(&r, q(5)).derive("xi").unwrap().is_zero());
        assert!(matches!(p.derive("w"), Err(PolyError::UnknownVariable(_))));
    }

    #[test]
    fn evaluation() {
        let r = ring2();
        let p = &Polynomial::one(&r) + &(&Polynomial::var(&r, "z").unwrap() * &Polynomial::var(&r, "xi").unwrap());
        let mut pt = HashMap::new();
        pt.insert("z".to_string(), q(2));
        assert!(matches!(p.evaluate(&pt), Err(PolyError::MissingAssignment(_))));
        pt.insert("xi".to_string(), q(3));
        assert_eq!(p.evaluate(&pt).unwrap(), q(7));
        let mut fp = HashMap::new();
        fp.insert("z".to_string(), Complex64::new(2.0, 0.0));
        fp.insert("xi".to_string(), Complex64::new(3.0, 0.0));
        assert!((p.evaluate_float(&fp).unwrap() - Complex64::new(7.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn support_and_degree() {
        let r = Ring::new(&["z"]);
        let z = Polynomial::var(&r, "z").unwrap();
        let p = &Polynomial::one(&r) + &z.pow(2);
        let s = p.support();
        assert_eq!(s.len(), 2);
        assert!(s.contains(&Monomial(vec![0])) && s.contains(&Monomial(vec![2])));
        assert_eq!(p.degree(), Some(2));
        assert_eq!(Polynomial::zero(&r).degree(), None);
    }

    #[test]
    fn exact_division() {
        let r = Ring::new(&["a", "b"]);
        let v = Polynomial::vars(&r);
        let one = Polynomial::one(&r);
        let f = &one + &v[0];
        let g = &(&one + &v[1]) - &(&v[0] * &v[1]);
        let prod = &f * &g;
        assert_eq!(prod.div_exact(&f).unwrap(), g);
        assert!(g.div_exact(&f).is_none());
    }

    #[test]
    fn compose_and_embed() {
        let r = Ring::new(&["z"]);
        let s = Ring::new(&["a", "b"]);
        let z = Polynomial::var(&r, "z").unwrap();
        let p = &z.pow(2) + &z;
        let v = Polynomial::vars(&s);
        let arg = &v[0] + &v[1];
        let c = p.compose(std::slice::from_ref(&arg));
        assert_eq!(c, &arg.pow(2) + &arg);
        let big = Ring::new(&["y", "z"]);
        let e = p.embed(&big).unwrap();
        assert_eq!(e.degree(), Some(2));
        assert!(e.used_vars().contains(&1));
    }
}
