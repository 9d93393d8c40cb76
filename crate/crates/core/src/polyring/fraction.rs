use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{GaussRational, PolyError, Polynomial, RingRef};

/// Quotient `num / Π den_i^{e_i}`. The denominator is kept as a list of
/// factors; nothing is cancelled unless [`PolyFraction::normalize`] is called.
#[derive(Clone, Debug)]
pub struct PolyFraction {
    pub num: Polynomial,
    pub den: Vec<(Polynomial, u32)>,
}

impl PolyFraction {
    pub fn from_poly(p: Polynomial) -> Self {
        PolyFraction { num: p, den: Vec::new() }
    }

    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        if num.ring().names() != den.ring().names() {
            return Err(PolyError::RingMismatch);
        }
        Ok(PolyFraction { num, den: vec![(den, 1)] }.absorb_constants())
    }

    pub fn ring(&self) -> &RingRef {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Expanded denominator.
    pub fn denominator(&self) -> Polynomial {
        let mut d = Polynomial::one(self.ring());
        for (f, e) in &self.den {
            d = &d * &f.pow(*e);
        }
        d
    }

    fn absorb_constants(mut self) -> Self {
        let mut c = GaussRational::one();
        self.den.retain(|(f, e)| {
            if f.is_constant() {
                c = &c * &f.constant_term().pow(*e);
                false
            } else {
                true
            }
        });
        if !c.is_one() {
            self.num = self.num.scale(&c.inv().expect("zero denominator factor"));
        }
        self
    }

    fn push_factor(den: &mut Vec<(Polynomial, u32)>, f: &Polynomial, e: u32) {
        if let Some(slot) = den.iter_mut().find(|(g, _)| g == f) {
            slot.1 += e;
        } else {
            den.push((f.clone(), e));
        }
    }

    pub fn mul(&self, other: &PolyFraction) -> PolyFraction {
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            Self::push_factor(&mut den, f, *e);
        }
        PolyFraction { num: &self.num * &other.num, den }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> PolyFraction {
        PolyFraction { num: &self.num * p, den: self.den.clone() }
    }

    pub fn neg(&self) -> PolyFraction {
        PolyFraction { num: -&self.num, den: self.den.clone() }
    }

    /// Sum over the least common factored denominator.
    pub fn add(&self, other: &PolyFraction) -> PolyFraction {
        let mut den: Vec<(Polynomial, u32)> = self.den.clone();
        for (f, e) in &other.den {
            if let Some(slot) = den.iter_mut().find(|(g, _)| g == f) {
                slot.1 = slot.1.max(*e);
            } else {
                den.push((f.clone(), *e));
            }
        }
        let lift = |fr: &PolyFraction| -> Polynomial {
            let mut n = fr.num.clone();
            for (f, e) in &den {
                let have = fr.den.iter().find(|(g, _)| g == f).map(|x| x.1).unwrap_or(0);
                if *e > have {
                    n = &n * &f.pow(e - have);
                }
            }
            n
        };
        PolyFraction { num: &lift(self) + &lift(other), den }
    }

    pub fn sub(&self, other: &PolyFraction) -> PolyFraction {
        self.add(&other.neg())
    }

    pub fn inv(&self) -> Result<PolyFraction, PolyError> {
        if self.num.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(PolyFraction { num: self.denominator(), den: vec![(self.num.clone(), 1)] }.absorb_constants())
    }

    pub fn div(&self, other: &PolyFraction) -> Result<PolyFraction, PolyError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> PolyFraction {
        PolyFraction { num: self.num.pow(e), den: self.den.iter().map(|(f, k)| (f.clone(), k * e)).collect() }
    }

    pub fn derive_index(&self, i: usize) -> PolyFraction {
        // (N/ΠF^e)' = N'/ΠF^e - Σ e N F'/(F ΠF^e)
        let mut out = PolyFraction { num: self.num.derive_index(i), den: self.den.clone() };
        for (f, e) in &self.den {
            let df = f.derive_index(i);
            if df.is_zero() {
                continue;
            }
            let mut den = self.den.clone();
            Self::push_factor(&mut den, f, 1);
            let term = PolyFraction { num: (&self.num * &df).scale(&GaussRational::from_int(-(*e as i64))), den };
            out = out.add(&term);
        }
        out
    }

    pub fn derive(&self, var: &str) -> Result<PolyFraction, PolyError> {
        let i = self.ring().index_of(var).ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        Ok(self.derive_index(i))
    }

    pub fn eval_slice(&self, vals: &[GaussRational]) -> Result<GaussRational, PolyError> {
        let mut d = GaussRational::one();
        for (f, e) in &self.den {
            d = &d * &f.eval_slice(vals).pow(*e);
        }
        if d.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(&self.num.eval_slice(vals) / &d)
    }

    pub fn evaluate(&self, point: &HashMap<String, GaussRational>) -> Result<GaussRational, PolyError> {
        let vals = self
            .ring()
            .names()
            .iter()
            .map(|n| point.get(n).cloned().ok_or_else(|| PolyError::MissingAssignment(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.eval_slice(&vals)
    }

    pub fn eval_f64(&self, vals: &[Complex64]) -> Complex64 {
        let mut d = Complex64::new(1.0, 0.0);
        for (f, e) in &self.den {
            d *= f.eval_f64(vals).powu(*e);
        }
        self.num.eval_f64(vals) / d
    }

    pub fn specialize(&self, assign: &[(usize, GaussRational)]) -> Result<PolyFraction, PolyError> {
        let den: Vec<(Polynomial, u32)> = self.den.iter().map(|(f, e)| (f.specialize(assign), *e)).collect();
        if den.iter().any(|(f, _)| f.is_zero()) {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(PolyFraction { num: self.num.specialize(assign), den }.absorb_constants())
    }

    /// Merges repeated factors, folds constants into the numerator and cancels
    /// factors that divide the numerator exactly.
    pub fn normalize(&self) -> PolyFraction {
        let mut den: Vec<(Polynomial, u32)> = Vec::new();
        for (f, e) in &self.den {
            Self::push_factor(&mut den, f, *e);
        }
        let mut num = self.num.clone();
        if num.is_zero() {
            return PolyFraction { num, den: Vec::new() };
        }
        for slot in den.iter_mut() {
            while slot.1 > 0 {
                match num.div_exact(&slot.0) {
                    Some(q) => {
                        num = q;
                        slot.1 -= 1;
                    }
                    None => break,
                }
            }
        }
        den.retain(|(_, e)| *e > 0);
        PolyFraction { num, den }.absorb_constants()
    }

    /// Exact equality as rational functions (cross multiplication).
    pub fn equals(&self, other: &PolyFraction) -> bool {
        &self.num * &other.denominator() == &other.num * &self.denominator()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }
}

impl Polynomial {
    /// Replaces `var` by the fraction `expr`; the result has denominator
    /// `den(expr)^deg_var(self)`.
    pub fn substitute(&self, var: &str, expr: &PolyFraction) -> Result<PolyFraction, PolyError> {
        let i = self.ring().index_of(var).ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        if expr.num.ring().names() != self.ring().names() {
            return Err(PolyError::RingMismatch);
        }
        let dmax = self.terms().keys().map(|m| m.0[i]).max().unwrap_or(0);
        let den = expr.denominator();
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        let mut num_pows = vec![Polynomial::one(self.ring())];
        let mut den_pows = vec![Polynomial::one(self.ring())];
        for k in 0..dmax as usize {
            num_pows.push(&num_pows[k] * &expr.num);
            den_pows.push(&den_pows[k] * &den);
        }
        let mut out = Polynomial::zero(self.ring());
        for (m, c) in self.terms() {
            let e = m.0[i] as usize;
            let mut m2 = m.clone();
            m2.0[i] = 0;
            let mut base = Polynomial::zero(self.ring());
            base.add_term(m2, c);
            let t = &(&base * &num_pows[e]) * &den_pows[dmax as usize - e];
            out = &out + &t;
        }
        Ok(PolyFraction { num: out, den: vec![(den, dmax)] }.absorb_constants_pub())
    }
}

impl PolyFraction {
    pub(crate) fn absorb_constants_pub(self) -> Self {
        let mut s = self;
        s.den.retain(|(_, e)| *e > 0);
        s.absorb_constants()
    }

    pub fn zero(ring: &RingRef) -> Self {
        Self::from_poly(Polynomial::zero(ring))
    }

    pub fn constant_value(&self) -> Option<GaussRational> {
        if self.num.is_zero() {
            return Some(GaussRational::zero());
        }
        if self.num.is_constant() && self.den.is_empty() {
            return Some(self.num.constant_term());
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Ring;

    #[test]
    fn substitute_rational_expression() {
        let r = Ring::new(&["z", "t"]);
        let z = Polynomial::var(&r, "z").unwrap();
        let t = Polynomial::var(&r, "t").unwrap();
        let one = Polynomial::one(&r);
        let expr = PolyFraction::new(&one + &t, t.clone()).unwrap();
        let out = z.pow(2).substitute("z", &expr).unwrap();
        let expected = PolyFraction::new((&one + &t).pow(2), t.pow(2)).unwrap();
        assert!(out.equals(&expected));
        assert_eq!(out.denominator(), t.pow(2));
    }

    #[test]
    fn quotient_rule() {
        let r = Ring::new(&["z"]);
        let z = Polynomial::var(&r, "z").unwrap();
        let one = Polynomial::one(&r);
        // d/dz 1/(1+z) = -1/(1+z)^2
        let f = PolyFraction::new(one.clone(), &one + &z).unwrap();
        let d = f.derive("z").unwrap().normalize();
        let expected = PolyFraction::new(-&one, (&one + &z).pow(2)).unwrap();
        assert!(d.equals(&expected));
    }

    #[test]
    fn normalize_cancels() {
        let r = Ring::new(&["a", "b"]);
        let v = Polynomial::vars(&r);
        let one = Polynomial::one(&r);
        let f = &one + &v[0];
        let frac = PolyFraction { num: &f * &v[1], den: vec![(f.clone(), 1), (f.clone(), 1)] };
        let n = frac.normalize();
        assert_eq!(n.num, v[1]);
        assert_eq!(n.den, vec![(f, 1)]);
    }

    #[test]
    fn zero_denominator_rejected() {
        let r = Ring::new(&["z"]);
        assert!(PolyFraction::new(Polynomial::one(&r), Polynomial::zero(&r)).is_err());
    }
}
