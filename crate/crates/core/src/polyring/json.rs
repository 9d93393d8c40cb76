use serde::{Deserialize, Serialize};

use super::{parse_rational, rational_to_string, GaussRational, Monomial, PolyError, Polynomial, Ring, RingRef};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub re: String,
    pub im: String,
}

/// Wire form `{"vars": [...], "terms": [{"exp": [...], "re": "a/b", "im": "c/d"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl Polynomial {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.ring().names().to_vec(),
            terms: self
                .terms()
                .iter()
                .map(|(m, c)| TermJson {
                    exp: m.0.clone(),
                    re: rational_to_string(&c.re),
                    im: rational_to_string(&c.im),
                })
                .collect(),
        }
    }

    /// Decodes into a fresh ring built from the `vars` list.
    pub fn from_json(j: &PolyJson) -> Result<Polynomial, PolyError> {
        let ring = Ring::new(&j.vars);
        Self::from_json_in(j, &ring)
    }

    /// Decodes into `ring`; `vars` must name ring variables.
    pub fn from_json_in(j: &PolyJson, ring: &RingRef) -> Result<Polynomial, PolyError> {
        let map = j
            .vars
            .iter()
            .map(|n| ring.index_of(n).ok_or_else(|| PolyError::UnknownVariable(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut p = Polynomial::zero(ring);
        for t in &j.terms {
            if t.exp.len() != j.vars.len() {
                return Err(PolyError::Parse(format!(
                    "exponent vector of length {} for {} variables",
                    t.exp.len(),
                    j.vars.len()
                )));
            }
            let mut e = vec![0u32; ring.len()];
            for (i, &k) in t.exp.iter().enumerate() {
                e[map[i]] += k;
            }
            let c = GaussRational::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
            p.add_term(Monomial(e), &c);
        }
        Ok(p)
    }
}
