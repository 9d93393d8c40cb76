use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::RigidityError;
use crate::polyring::{GaussRational, ModPoly, Monomial, Polynomial};
use crate::segre::{random_rational, sample_family_pair, SegreFamily};
use crate::spaces::SpaceDescriptor;

#[derive(Clone, Debug, Serialize)]
pub struct ClaimCheck {
    pub name: String,
    pub holds: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportReport {
    pub space: String,
    pub checks: Vec<ClaimCheck>,
    /// Nonsingular sample of the family: some ∂ρ/∂z and some ∂ρ/∂ξ nonzero at a point with ρ = 0.
    pub regular_sample: bool,
    pub all_pass: bool,
}

struct Checker<'a> {
    names: &'a [String],
    checks: Vec<ClaimCheck>,
}

impl Checker<'_> {
    fn mono_name(&self, m: &Monomial) -> String {
        let parts: Vec<String> =
            m.0.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.names[i].clone() } else { format!("{}^{e}", self.names[i]) })
                .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Monomials of f must avoid `bad`.
    fn absent(&mut self, name: &str, f: &Polynomial, bad: impl Fn(&Monomial) -> bool) {
        let hit = f.terms().keys().find(|m| bad(m)).map(|m| self.mono_name(m));
        self.checks.push(ClaimCheck {
            name: name.into(),
            holds: hit.is_none(),
            detail: hit.map(|m| format!("monomial {m}")),
        });
    }

    fn record(&mut self, name: &str, violation: Option<String>) {
        self.checks.push(ClaimCheck { name: name.into(), holds: violation.is_none(), detail: violation });
    }
}

fn mono(nv: usize, vars: &[usize]) -> Monomial {
    let mut e = vec![0u32; nv];
    for &v in vars {
        e[v] += 1;
    }
    Monomial(e)
}

fn div_by(m: &Monomial, v: usize) -> bool {
    m.0[v] > 0
}

/// Quotients Q for which some monomial of f equals Q·factor.
fn quotients(f: &Polynomial, factor: &Monomial, out: &mut BTreeSet<Monomial>) {
    for m in f.terms().keys() {
        if factor.divides(m) {
            out.insert(m.div(factor));
        }
    }
}

/// coef(Q·t) = ratio(Q)·Σ_k coef(Q·p_k) for all Q.
fn paired(
    f: &Polynomial,
    ps: &[Monomial],
    t: &Monomial,
    ratio: impl Fn(&Monomial) -> GaussRational,
) -> Option<(Monomial, GaussRational, GaussRational)> {
    let mut qs = BTreeSet::new();
    for p in ps {
        quotients(f, p, &mut qs);
    }
    quotients(f, t, &mut qs);
    for q in qs {
        let cp = ps.iter().fold(GaussRational::zero(), |acc, p| acc + f.coeff(&q.mul(p)));
        let ct = f.coeff(&q.mul(t));
        if ct != ratio(&q) * &cp {
            return Some((q, cp, ct));
        }
    }
    None
}

fn type3_support_facts(ck: &mut Checker, f: &Polynomial, n: usize, label: &str) {
    let nv = f.ring().len();
    let var = |i: usize, j: usize| -> usize {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        a * n - a * (a + 1) / 2 + b
    };
    let m = |vs: &[usize]| mono(nv, vs);
    let half = GaussRational::from_ratio(1, 2);
    let neg = |x: GaussRational| -x;
    let describe = |ck: &Checker, q: Monomial, cp: GaussRational, ct: GaussRational| {
        format!("Q = {}: coefficients {cp} and {ct}", ck.mono_name(&q))
    };
    let (last, prev) = (n - 1, n.wrapping_sub(2));
    let mut bad = None;
    for i in 0..last {
        for j in i..last {
            let zij = var(i, j);
            let r = paired(f, &[m(&[var(i, last), var(last, j)])], &m(&[zij, var(last, last)]), |q| {
                if div_by(q, zij) {
                    neg(half.clone())
                } else {
                    -GaussRational::one()
                }
            });
            if let Some((q, cp, ct)) = r {
                bad.get_or_insert_with(|| describe(ck, q, cp, ct));
            }
        }
    }
    ck.record(&format!("{label}: z_in z_nj Q paired with z_ij z_nn Q"), bad);
    if n < 3 {
        return;
    }
    let mut bad = None;
    for j in 0..prev {
        let zjn = var(j, last);
        let r = paired(f, &[m(&[zjn, var(prev, prev)])], &m(&[var(j, prev), var(prev, last)]), |q| {
            GaussRational::from_int(if div_by(q, zjn) { -2 } else { -1 })
        });
        if let Some((q, cp, ct)) = r {
            bad.get_or_insert_with(|| describe(ck, q, cp, ct));
        }
    }
    ck.record(&format!("{label}: z_jn z_(n-1)(n-1) Q paired with z_j(n-1) z_(n-1)n Q"), bad);
    let mut bad = None;
    let zpl = var(prev, last);
    for i in 0..prev {
        let r = paired(f, &[m(&[var(i, prev), var(last, i)])], &m(&[var(i, i), zpl]), |q| {
            if div_by(q, zpl) {
                neg(half.clone())
            } else {
                -GaussRational::one()
            }
        });
        if let Some((q, cp, ct)) = r {
            bad.get_or_insert_with(|| describe(ck, q, cp, ct));
        }
    }
    ck.record(&format!("{label}: z_i(n-1) z_ni Q paired with z_ii z_(n-1)n Q"), bad);
    let mut bad = None;
    for i in 0..prev {
        for j in i + 1..prev {
            let zij = var(i, j);
            let p1 = m(&[var(i, prev), var(last, j)]);
            let p2 = m(&[var(i, last), var(j, prev)]);
            let r = paired(f, &[p1, p2], &m(&[zij, zpl]), |q| {
                let k = (if div_by(q, zij) { 2 } else { 1 }) * (if div_by(q, zpl) { 2 } else { 1 });
                GaussRational::from_ratio(-1, k)
            });
            if let Some((q, cp, ct)) = r {
                bad.get_or_insert_with(|| describe(ck, q, cp, ct));
            }
        }
    }
    ck.record(&format!("{label}: z_i(n-1) z_nj Q + z_in z_j(n-1) Q paired with z_ij z_(n-1)n Q"), bad);
}

fn random_xi(fam: &SegreFamily, rng: &mut ChaCha8Rng) -> Vec<GaussRational> {
    (0..fam.n()).map(|_| random_rational(rng, 97)).collect()
}

/// Monomial-support facts behind the irreducibility argument, checked on ρ(·,ξ) at random ξ.
pub fn support_claims(fam: &SegreFamily, rng: &mut ChaCha8Rng) -> Result<SupportReport, RigidityError> {
    let space = &fam.space;
    let n = space.n;
    let xi = random_xi(fam, rng);
    let f = fam.rho_at_xi(&xi);
    let names = space.var_names();
    let mut ck = Checker { names, checks: Vec::new() };
    let nz = |m: &Monomial| -> Vec<usize> { (0..n).flat_map(|i| std::iter::repeat_n(i, m.0[i] as usize)).collect() };
    match space.desc {
        SpaceDescriptor::TypeI(_, q) => {
            let rc = |v: usize| (v / q, v % q);
            ck.absent("no z_ij^2", &f, |m| m.0[..n].iter().any(|&e| e >= 2));
            ck.absent("no z_ik z_il (shared row)", &f, |m| {
                let vs = nz(m);
                vs.iter().enumerate().any(|(a, &u)| vs[a + 1..].iter().any(|&w| rc(u).0 == rc(w).0))
            });
            ck.absent("no z_ik z_sk (shared column)", &f, |m| {
                let vs = nz(m);
                vs.iter().enumerate().any(|(a, &u)| vs[a + 1..].iter().any(|&w| rc(u).1 == rc(w).1))
            });
        }
        SpaceDescriptor::TypeII(k) => {
            let mut pairs = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    pairs.push([i, j]);
                }
            }
            ck.absent("no z_ij z_kl with overlapping index pairs", &f, |m| {
                let vs = nz(m);
                vs.iter()
                    .enumerate()
                    .any(|(a, &u)| vs[a + 1..].iter().any(|&w| pairs[u].iter().any(|x| pairs[w].contains(x))))
            });
        }
        SpaceDescriptor::TypeIII(k) => {
            let var = |i: usize, j: usize| i * k - i * (i + 1) / 2 + j;
            ck.absent("no z_ii^2", &f, |m| (0..k).any(|i| m.0[var(i, i)] >= 2));
            ck.absent("no z_ii z_ij", &f, |m| {
                (0..k)
                    .any(|i| m.0[var(i, i)] > 0 && (0..k).filter(|&j| j != i).any(|j| m.0[var(i.min(j), i.max(j))] > 0))
            });
            type3_support_facts(&mut ck, &f, k, "rho");
            let map: Vec<usize> = (0..n).collect();
            for (idx, minor) in space.pairing.iter().enumerate() {
                let g = minor.embed_with(&fam.ring, &map)?;
                let before = ck.checks.len();
                type3_support_facts(&mut ck, &g, k, &format!("minor {idx}"));
                // keep only failing per-minor entries to bound report size
                let tail: Vec<ClaimCheck> = ck.checks.drain(before..).filter(|c| !c.holds).collect();
                ck.checks.extend(tail);
            }
        }
        SpaceDescriptor::TypeIV(_) => {
            ck.absent("no z_i z_j (i != j)", &f, |m| m.0[..n].iter().filter(|&&e| e > 0).count() >= 2);
            let quarter_sq =
                xi.iter().fold(GaussRational::zero(), |acc, x| acc + x * x) * GaussRational::from_ratio(1, 4);
            let bad = (0..n)
                .find(|&i| f.coeff(&mono(2 * n, &[i, i])) != quarter_sq)
                .map(|i| format!("coefficient of {}^2", names[i]));
            ck.record("z_i^2 coefficients all equal (sum xi^2)/4", bad);
        }
        SpaceDescriptor::E16 => {
            let (xs, ys) = (0..8, 8..16);
            ck.absent("no x_i x_j (i != j)", &f, |m| xs.clone().filter(|&i| m.0[i] > 0).count() >= 2);
            ck.absent("no y_i y_j (i != j)", &f, |m| ys.clone().filter(|&i| m.0[i] > 0).count() >= 2);
            let sq = |i: usize| f.coeff(&mono(2 * n, &[i, i]));
            let bad = (1..8).find(|&i| sq(i) != sq(0)).map(|i| format!("x{i}^2"));
            ck.record("x_i^2 coefficients all equal", bad);
            let bad = (9..16).find(|&i| sq(i) != sq(8)).map(|i| format!("y{}^2", i - 8));
            ck.record("y_i^2 coefficients all equal", bad);
            let mut bad = None;
            for i in 0..8 {
                for j in i + 1..8 {
                    let a = f.coeff(&mono(2 * n, &[i, 8 + j]));
                    let b = f.coeff(&mono(2 * n, &[j, 8 + i]));
                    if a != -b {
                        bad.get_or_insert(format!("x{i} y{j} vs x{j} y{i}"));
                    }
                }
            }
            ck.record("coef(x_i y_j) = -coef(x_j y_i)", bad);
        }
        SpaceDescriptor::E27 => {
            let (x1, x2, x3) = (0, 1, 2);
            let ys = 3..11;
            let ts = 11..19;
            let ws = 19..27;
            let (y0, t0, w0) = (3, 11, 19);
            ck.absent("no x_i^2", &f, |m| (0..3).any(|i| m.0[i] >= 2));
            let allowed = [mono(2 * n, &[x1, x2]), mono(2 * n, &[x1, x2, x3])];
            ck.absent("x1 x2 only in x1 x2 and x1 x2 x3", &f, |m| m.0[x1] > 0 && m.0[x2] > 0 && !allowed.contains(m));
            ck.absent("no x1 y_i or x2 y_i", &f, |m| (m.0[x1] > 0 || m.0[x2] > 0) && ys.clone().any(|i| m.0[i] > 0));
            ck.absent("no x3 t_i or x3 w_i", &f, |m| m.0[x3] > 0 && ts.clone().chain(ws.clone()).any(|i| m.0[i] > 0));
            let allowed = [mono(2 * n, &[x3, y0]), mono(2 * n, &[x3, y0, y0])];
            ck.absent("x3 y0 only in x3 y0 and x3 y0^2", &f, |m| m.0[x3] > 0 && m.0[y0] > 0 && !allowed.contains(m));
            let allowed = [mono(2 * n, &[t0, w0]), mono(2 * n, &[t0, w0, y0])];
            ck.absent("t0 w0 only in t0 w0 and t0 w0 y0", &f, |m| m.0[t0] > 0 && m.0[w0] > 0 && !allowed.contains(m));
        }
    }
    let (zs, xs) = sample_family_pair(fam, rng)?;
    let vals: Vec<GaussRational> = zs.iter().chain(&xs).cloned().collect();
    let grad_nonzero =
        |range: std::ops::Range<usize>| range.into_iter().any(|k| !fam.rho.derive_index(k).eval_slice(&vals).is_zero());
    let regular_sample = grad_nonzero(0..n) && grad_nonzero(n..2 * n);
    let all_pass = ck.checks.iter().all(|c| c.holds) && regular_sample;
    Ok(SupportReport { space: space.desc.to_string(), checks: ck.checks, regular_sample, all_pass })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum OracleOutcome {
    IrreducibleCertified,
    FactorFound { factor: String },
    Inconclusive { reason: String, required: Option<f64> },
}

fn mod_poly_string(p: &ModPoly) -> String {
    let names = p.ring.names();
    let mut parts = Vec::new();
    for (m, c) in &p.terms {
        let vars: Vec<String> =
            m.0.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{e}", names[i]) })
                .collect();
        parts.push(if vars.is_empty() { c.to_string() } else { format!("{c}*{}", vars.join("*")) });
    }
    parts.join(" + ")
}

/// Exhaustive factor search for f over F_p among polynomials with constant term 1.
/// A nonzero constant term makes that normalization complete; with deg(f mod p) = deg f,
/// a factorization over Q descends to one over F_p, so no factor certifies irreducibility.
pub fn irreducibility_oracle(
    f: &Polynomial,
    prime: u64,
    max_factor_degree: u32,
    budget: f64,
) -> Result<OracleOutcome, RigidityError> {
    let deg = f.degree().unwrap_or(0);
    let c0 = f.constant_term();
    let Some(c0inv) = c0.inv() else {
        return Ok(OracleOutcome::Inconclusive { reason: "constant term vanishes".into(), required: None });
    };
    let f = f.scale(&c0inv);
    if deg <= 1 {
        return Ok(OracleOutcome::IrreducibleCertified);
    }
    let fp = f.reduce_mod_p(prime)?;
    if fp.degree() != Some(deg) {
        return Ok(OracleOutcome::Inconclusive { reason: "degree drops modulo the prime".into(), required: None });
    }
    let used: Vec<usize> = f.used_vars().into_iter().collect();
    let d = max_factor_degree.min(deg / 2);
    let nv = f.ring().len();
    let mut monos: Vec<Monomial> = vec![Monomial::one(nv)];
    let mut all = Vec::new();
    for _ in 0..d {
        let mut next = BTreeSet::new();
        for m in &monos {
            for &v in &used {
                let mut e = m.0.clone();
                e[v] += 1;
                next.insert(Monomial(e));
            }
        }
        monos = next.into_iter().collect();
        all.extend(monos.iter().cloned());
    }
    let required = (prime as f64).powi(all.len() as i32) - 1.0;
    if required > budget {
        return Ok(OracleOutcome::Inconclusive {
            reason: "search space exceeds budget".into(),
            required: Some(required),
        });
    }
    let mut digits = vec![0u64; all.len()];
    loop {
        let Some(pos) = digits.iter().position(|&x| x + 1 < prime) else {
            break;
        };
        for x in digits.iter_mut().take(pos) {
            *x = 0;
        }
        digits[pos] += 1;
        let mut cand = ModPoly::zero(f.ring(), prime);
        cand.add_term(Monomial::one(nv), 1);
        for (m, &c) in all.iter().zip(&digits) {
            if c != 0 {
                cand.add_term(m.clone(), c);
            }
        }
        if let Some(q) = fp.div_exact(&cand) {
            if q.degree().unwrap_or(0) > 0 {
                return Ok(OracleOutcome::FactorFound { factor: mod_poly_string(&cand) });
            }
        }
    }
    Ok(OracleOutcome::IrreducibleCertified)
}
