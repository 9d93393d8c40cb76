use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{Monomial, PolyError, Polynomial, RingRef};

/// Polynomial over the prime field F_p, same exponent layout as [`Polynomial`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    pub ring: RingRef,
    pub p: u64,
    pub terms: BTreeMap<Monomial, u64>,
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (p as i128, a as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    Some(t.rem_euclid(p as i128) as u64)
}

fn reduce_int(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

impl Polynomial {
    /// Coefficientwise reduction modulo `prime`. Coefficients must be real
    /// with denominators prime to `prime`.
    pub fn reduce_mod_p(&self, prime: u64) -> Result<ModPoly, PolyError> {
        let mut terms = BTreeMap::new();
        for (m, c) in self.terms() {
            if !c.is_real() {
                return Err(PolyError::NonReal(c.to_string()));
            }
            let d = reduce_int(c.re.denom(), prime);
            let dinv = inv_mod(d, prime).ok_or_else(|| PolyError::BadPrime { prime, coeff: c.to_string() })?;
            let v = (reduce_int(c.re.numer(), prime) as u128 * dinv as u128 % prime as u128) as u64;
            if v != 0 {
                terms.insert(m.clone(), v);
            }
        }
        Ok(ModPoly { ring: self.ring().clone(), p: prime, terms })
    }
}

impl ModPoly {
    pub fn zero(ring: &RingRef, p: u64) -> Self {
        ModPoly { ring: ring.clone(), p, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert(0);
        *e = (*e + c) % self.p;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        let mut out = ModPoly::zero(&self.ring, self.p);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), (*ca as u128 * *cb as u128 % self.p as u128) as u64);
            }
        }
        out
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), self.p - c);
        }
        out
    }

    /// Exact quotient when `d` divides `self`.
    pub fn div_exact(&self, d: &ModPoly) -> Option<ModPoly> {
        let (dm, dc) = d.terms.iter().next_back().map(|(m, c)| (m.clone(), *c))?;
        let dinv = inv_mod(dc, self.p)?;
        let mut rem = self.clone();
        let mut q = ModPoly::zero(&self.ring, self.p);
        while let Some((rm, rc)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), *c)) {
            if !dm.divides(&rm) {
                return None;
            }
            let mut t = ModPoly::zero(&self.ring, self.p);
            t.add_term(rm.div(&dm), (rc as u128 * dinv as u128 % self.p as u128) as u64);
            rem = rem.sub(&t.mul(d));
            for (m, c) in t.terms {
                q.add_term(m, c);
            }
        }
        Some(q)
    }
}

impl std::fmt::Display for ModPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> =
                    m.0.iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| {
                            let n = &self.ring.names()[i];
                            if e == 1 {
                                n.clone()
                            } else {
                                format!("{n}^{e}")
                            }
                        })
                        .collect();
                if vars.is_empty() {
                    c.to_string()
                } else if *c == 1 {
                    vars.join("*")
                } else {
                    format!("{}*{}", c, vars.join("*"))
                }
            })
            .collect();
        write!(f, "{} (mod {})", parts.join(" + "), self.p)
    }
}

impl ModPoly {
    pub fn is_constant_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().map(|(m, c)| m.is_one() && *c == 1).unwrap_or(false)
    }

    pub fn constant_term(&self) -> u64 {
        self.terms.iter().find(|(m, _)| m.is_one()).map(|(_, c)| *c).unwrap_or(0)
    }

    pub fn nonzero(&self) -> bool {
        !self.terms.values().all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{GaussRational, Ring};

    #[test]
    fn reduction() {
        let r = Ring::new(&["z"]);
        let z = Polynomial::var(&r, "z").unwrap();
        let p = &z.scale(&GaussRational::from_int(3)) + &Polynomial::one(&r);
        let m = p.reduce_mod_p(5).unwrap();
        assert_eq!(m.terms.get(&Monomial(vec![1])), Some(&3));
        assert_eq!(m.constant_term(), 1);
        let half = z.scale(&GaussRational::from_ratio(1, 2));
        assert!(matches!(half.reduce_mod_p(2), Err(PolyError::BadPrime { .. })));
        let iz = z.scale(&GaussRational::i());
        assert!(matches!(iz.reduce_mod_p(5), Err(PolyError::NonReal(_))));
        assert_eq!(inv_mod(2, 5), Some(3));
    }

    #[test]
    fn division_mod_p() {
        let r = Ring::new(&["a", "b"]);
        let v = Polynomial::vars(&r);
        let one = Polynomial::one(&r);
        let f = (&one + &v[0]).reduce_mod_p(5).unwrap();
        let g = (&one + &v[1]).reduce_mod_p(5).unwrap();
        let prod = f.mul(&g);
        assert_eq!(prod.div_exact(&f).unwrap(), g);
        let h = (&one + &(&v[0] * &v[1])).reduce_mod_p(5).unwrap();
        assert!(h.div_exact(&f).is_none());
    }
}
