use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::linalg;
use crate::polyring::{GaussRational, PolyFraction, Polynomial, Ring};
use crate::segre::{build_rho, random_unitary, type1_induced_matrix, SegreFamily};
use crate::spaces::{Space, SpaceDescriptor};

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(11)
}

fn fam(d: SpaceDescriptor) -> SegreFamily {
    build_rho(&Space::build(d).unwrap())
}

fn g(a: i64, b: i64) -> GaussRational {
    GaussRational::from_ratio(a, b)
}

/// Jet rank by direct symbolic differentiation of ψ∘F, independent of the series code.
fn brute_rank(space: &Space, comps: &[Polynomial], z: &[GaussRational], k: u32) -> usize {
    let composed: Vec<Polynomial> = space.psi.iter().map(|p| p.compose(comps)).collect();
    let others: Vec<usize> = (0..space.n).filter(|&i| i != space.dropped).collect();
    let mut orders = vec![vec![0u32; space.n]];
    let mut frontier = orders.clone();
    for _ in 0..k {
        let mut next = Vec::new();
        for o in &frontier {
            let last = others.iter().rposition(|&i| o[i] > 0).unwrap_or(0);
            for &i in &others[last..] {
                let mut o2 = o.clone();
                o2[i] += 1;
                next.push(o2);
            }
        }
        orders.extend(next.iter().cloned());
        frontier = next;
    }
    let m: linalg::Matrix =
        orders.iter().map(|o| composed.iter().map(|p| p.derive_multi(o).eval_slice(z)).collect()).collect();
    linalg::rank(&m)
}

#[test]
fn rank_profiles() {
    let mut r = rng();
    let q3 = Space::build(SpaceDescriptor::TypeIV(3)).unwrap();
    let id = RationalMap::identity(&q3);
    assert_eq!(rank_monotonicity_probe(&q3, &id, 2, 2, &mut r).unwrap(), vec![1, 3, 4]);
    let g12 = Space::build(SpaceDescriptor::TypeI(1, 2)).unwrap();
    assert_eq!(rank_monotonicity_probe(&g12, &RationalMap::identity(&g12), 2, 2, &mut r).unwrap(), vec![1, 2, 2]);
    let g22 = Space::build(SpaceDescriptor::TypeI(2, 2)).unwrap();
    assert_eq!(jet_rank(&g22, &RationalMap::identity(&g22), 2, 2, &mut r).unwrap(), 5);
}

#[test]
fn low_order_ranks_all_types() {
    let mut r = rng();
    for d in [
        SpaceDescriptor::TypeI(2, 2),
        SpaceDescriptor::TypeII(4),
        SpaceDescriptor::TypeIII(2),
        SpaceDescriptor::TypeIV(3),
        SpaceDescriptor::E16,
        SpaceDescriptor::E27,
    ] {
        let s = Space::build(d).unwrap();
        let id = RationalMap::identity(&s);
        assert_eq!(jet_rank(&s, &id, 0, 1, &mut r).unwrap(), 1, "{d}");
        assert_eq!(jet_rank(&s, &id, 1, 1, &mut r).unwrap(), s.n, "{d}");
    }
}

#[test]
fn series_rank_matches_symbolic() {
    let mut r = rng();
    for d in [SpaceDescriptor::TypeI(2, 2), SpaceDescriptor::TypeIV(3), SpaceDescriptor::TypeIII(2)] {
        let s = Space::build(d).unwrap();
        let v = Polynomial::vars(&s.ring);
        // polynomial map with a nonlinear perturbation
        let comps: Vec<Polynomial> = v.iter().enumerate().map(|(i, x)| x + &(&v[(i + 1) % v.len()] * &v[0])).collect();
        let f = RationalMap::polynomial(&s, comps.clone());
        let z = small_point(s.n, &mut r);
        let series = ranks_at(&s, &f, &z, 3).unwrap();
        for k in 0..=3 {
            assert_eq!(series[k as usize], brute_rank(&s, &comps, &z, k), "{d} order {k}");
        }
    }
}

#[test]
fn rational_series_matches_symbolic() {
    let mut r = rng();
    let s = Space::build(SpaceDescriptor::TypeI(2, 2)).unwrap();
    let m = type1_induced_matrix(&s, &random_unitary(4, &mut r));
    let f = RationalMap::from_projective(&s, &m).unwrap();
    let z = small_point(s.n, &mut r);
    let dirs = unit_dirs(s.n, s.dropped);
    let rows = jet_rows(&s, &f, &z, &dirs, 2).unwrap();
    let vals: Vec<GaussRational> = z.clone();
    for (beta, row) in rows.iter().take(8) {
        let mut orders = vec![0u32; s.n];
        for (slot, &k) in beta.iter().enumerate() {
            orders[if slot >= s.dropped { slot + 1 } else { slot }] = k;
        }
        for (j, p) in s.psi.iter().enumerate() {
            let comps: Vec<PolyFraction> =
                f.components.iter().map(|(a, b)| PolyFraction::new(a.clone(), b.clone()).unwrap()).collect();
            let mut e = PolyFraction::from_poly(Polynomial::zero(&s.ring));
            for (mono, c) in p.terms() {
                let mut t = PolyFraction::from_poly(Polynomial::constant(&s.ring, c.clone()));
                for (i, &ex) in mono.0.iter().enumerate() {
                    t = t.mul(&comps[i].pow(ex));
                }
                e = e.add(&t);
            }
            for (i, &k) in orders.iter().enumerate() {
                for _ in 0..k {
                    e = e.derive_index(i);
                }
            }
            assert_eq!(e.eval_slice(&vals).unwrap(), row[j]);
        }
    }
}

#[test]
fn tangency_of_segre_fields() {
    for d in [
        SpaceDescriptor::TypeI(2, 2),
        SpaceDescriptor::TypeII(4),
        SpaceDescriptor::TypeIII(2),
        SpaceDescriptor::TypeIV(3),
    ] {
        let f = fam(d);
        let frame = TangentFrame::SegreL { dropped: f.space.dropped };
        let rho = PolyFraction::from_poly(f.rho.clone());
        for i in 0..f.n() - 1 {
            let mut beta = vec![0; f.n() - 1];
            beta[i] = 1;
            assert!(tangent_apply(&frame, &f, &rho, &beta).unwrap().is_zero(), "{d} L_{i}");
        }
    }
}

#[test]
fn hyperplane_field_formula() {
    let f = fam(SpaceDescriptor::TypeIV(3));
    let mu = vec![GaussRational::i(), GaussRational::zero(), GaussRational::zero()];
    let frame = TangentFrame::HyperplaneL { dropped: 2, mu };
    let z3 = PolyFraction::from_poly(Polynomial::var_index(&f.ring, 2));
    let out = tangent_apply(&frame, &f, &z3, &[1, 0]).unwrap();
    assert_eq!(out.constant_value(), Some(-GaussRational::i()));
}

#[test]
fn special_point_fields_are_plain_derivatives() {
    let mut r = rng();
    let f = fam(SpaceDescriptor::TypeI(2, 2));
    let sp = special_point(&f, &mut r).unwrap();
    let vals: Vec<GaussRational> = sp.z.iter().chain(&sp.xi).cloned().collect();
    let frame = TangentFrame::SegreL { dropped: f.space.dropped };
    let psi_last = PolyFraction::from_poly(f.space.psi[4].embed_with(&f.ring, &[0, 1, 2, 3]).unwrap());
    for i in 0..3 {
        let mut beta = vec![0; 3];
        beta[i] = 1;
        let l = tangent_apply(&frame, &f, &psi_last, &beta).unwrap().eval_slice(&vals).unwrap();
        let plain = psi_last.derive_index(i).eval_slice(&vals).unwrap();
        assert_eq!(l, plain);
    }
}

#[test]
fn lambda_paths_agree() {
    let mut r = rng();
    for d in [SpaceDescriptor::TypeI(2, 2), SpaceDescriptor::TypeIII(2)] {
        let f = fam(d);
        let id = RationalMap::identity(&f.space);
        let w = find_nondegeneracy_witness(&f, &id, default_max_order(&f.space), 3, 100_000, &mut r).unwrap();
        let WitnessOutcome::Found { z, xi, betas, lambda, .. } = w else {
            panic!("no witness for {d}");
        };
        let taylor = lambda_determinant(&f, &id, &betas, &z, &xi).unwrap();
        let symbolic = lambda_symbolic(&f, &id, &betas, &z, &xi).unwrap();
        assert_eq!(taylor, symbolic);
        assert_eq!(taylor.to_string(), lambda);
        assert!(!taylor.is_zero());
        let mut dup = betas.clone();
        dup[2] = dup[1].clone();
        assert!(lambda_determinant(&f, &id, &dup, &z, &xi).unwrap().is_zero());
    }
}

#[test]
fn lambda_errors() {
    let mut r = rng();
    let f = fam(SpaceDescriptor::TypeI(2, 2));
    let id = RationalMap::identity(&f.space);
    let z = small_point(4, &mut r);
    let xi = vec![GaussRational::zero(); 4];
    let betas = vec![vec![0, 0, 0]; 5];
    assert_eq!(lambda_determinant(&f, &id, &betas, &z, &xi), Err(RigidityError::NotOnFamily));
    let mut bad = betas.clone();
    bad[0] = vec![1, 0, 0];
    assert!(matches!(lambda_determinant(&f, &id, &bad, &z, &xi), Err(RigidityError::BadBetas(_))));
}

#[test]
fn witnesses_for_identity() {
    let mut r = rng();
    for (d, bound) in [
        (SpaceDescriptor::TypeI(2, 2), 2),
        (SpaceDescriptor::TypeII(4), 2),
        (SpaceDescriptor::TypeIII(2), 2),
        (SpaceDescriptor::TypeIV(3), 2),
    ] {
        let f = fam(d);
        let w = find_nondegeneracy_witness(&f, &RationalMap::identity(&f.space), bound, 3, 100_000, &mut r).unwrap();
        match w {
            WitnessOutcome::Found { betas, max_beta_order, .. } => {
                assert_eq!(betas.len(), f.space.big_n);
                assert!(max_beta_order <= bound);
            }
            other => panic!("{d}: {other:?}"),
        }
    }
}

#[test]
fn degenerate_map_has_no_witness() {
    let mut r = rng();
    let f = fam(SpaceDescriptor::TypeI(2, 2));
    let v = Polynomial::vars(&f.space.ring);
    // F₂ depends on F₁: image lies in a hypersurface
    let comps = vec![v[0].clone(), v[0].clone(), v[2].clone(), v[3].clone()];
    let map = RationalMap::polynomial(&f.space, comps);
    let w = find_nondegeneracy_witness(&f, &map, 2, 2, 100_000, &mut r).unwrap();
    assert!(!w.found());
    let ranks = rank_monotonicity_probe(&f.space, &map, 3, 2, &mut r).unwrap();
    assert!(*ranks.last().unwrap() < 5);
}

#[test]
fn null_directions() {
    let mu = vec![GaussRational::i(), GaussRational::zero()];
    let base = vec![GaussRational::zero(), GaussRational::zero(), GaussRational::one()];
    let xi = solve_null_direction(NullKind::TypeIV(3), &mu, &base).unwrap();
    assert_eq!(xi, vec![-GaussRational::i(), GaussRational::zero(), -GaussRational::one()]);
    let bad_base = vec![GaussRational::i(), GaussRational::zero(), GaussRational::one()];
    assert!(solve_null_direction(NullKind::TypeIV(3), &mu, &bad_base).is_err());
    assert!(solve_null_direction(NullKind::TypeIV(3), &[GaussRational::one(), GaussRational::zero()], &base).is_err());
    let mut mu7 = vec![GaussRational::zero(); 7];
    mu7[0] = GaussRational::i();
    let mut base8 = vec![g(1, 3); 8];
    base8[7] = g(1, 2);
    let eta = solve_null_direction(NullKind::E16, &mu7, &base8).unwrap();
    let sq = eta.iter().fold(GaussRational::zero(), |a, x| a + x * x);
    assert!(sq.is_zero());
    let mut r = rng();
    for k in [2, 3, 7] {
        let mu = random_null_mu(k, &mut r);
        assert!(mu.iter().fold(GaussRational::one(), |a, x| a + x * x).is_zero());
    }
}

fn ring_vars(names: &[&str]) -> Vec<Polynomial> {
    Polynomial::vars(&Ring::new(names))
}

#[test]
fn degeneracy_relations() {
    let mut r = rng();
    let v = ring_vars(&["z1", "z2"]);
    let lin = vec![v[0].clone(), v[1].clone(), &v[0] + &v[1]];
    let rep = degeneracy_relation(&lin, 3, Some(0), &mut r).unwrap();
    // at slice 0 the ψ₂ column vanishes and g₂ is reported as 0
    assert!(rep.slices[0].g[1][0].abs() < 1e-12);
    for s in &rep.slices[1..] {
        assert!((s.g[0][0] - 1.0).abs() < 1e-9 && (s.g[1][0] - 1.0).abs() < 1e-9 && (s.g[2][0] + 1.0).abs() < 1e-9);
    }
    let sq = &v[0] * &v[0];
    let one = Polynomial::one(v[0].ring());
    let inputs = vec![
        vec![v[0].clone(), v[1].clone(), sq.clone(), &sq * &(&one + &v[1])],
        vec![v[0].clone(), v[1].clone(), sq.clone(), &v[0] * &v[1], &sq + &(&v[0] * &(&v[1] * &v[1]))],
    ];
    for psi in &inputs {
        let rep = degeneracy_relation(psi, 4, None, &mut r).unwrap();
        assert!(rep.max_residual < 1e-10, "{}", rep.max_residual);
        assert!(rep.leading_vanishing.unwrap() < 1e-8);
    }
    // slice-dependent coefficient: (1+s)ψ₃ − ψ₄ = 0
    let rep = degeneracy_relation(&inputs[0], 4, Some(3), &mut r).unwrap();
    for s in &rep.slices {
        assert!((s.g[2][0] + 1.0 + s.value).abs() < 1e-8);
    }
    let w = ring_vars(&["z1", "z2", "z3"]);
    let (a, b) = (&w[0] * &w[0], &w[1] * &w[1]);
    let one = Polynomial::one(w[0].ring());
    let t = &one + &w[2];
    let psi3 = vec![w[0].clone(), w[1].clone(), w[2].clone(), a.clone(), b.clone(), &(&a * &(&t * &t)) - &(&b * &w[2])];
    let rep = degeneracy_relation(&psi3, 3, None, &mut r).unwrap();
    assert!(rep.max_residual < 1e-10 && rep.leading_vanishing.unwrap() < 1e-8);
    let full = vec![v[0].clone(), v[1].clone(), sq];
    assert_eq!(degeneracy_relation(&full, 2, None, &mut r).unwrap_err(), RigidityError::NotDegenerate);
}

#[test]
fn bordered_identities() {
    let mut r = rng();
    for n in [3, 4, 5] {
        assert!(bordered_identity_check(n, 3, &mut r), "order {n}");
    }
    for n in [2, 3, 4] {
        assert!(bordered_vanish_probe(n, 5, &mut r));
    }
    // a singular B violates the converse: a in the column span of n−1 columns
    let b = vec![vec![g(1, 1), g(2, 1)], vec![g(2, 1), g(4, 1)]];
    let dets = bordered::bordered_dets(&b, &[g(1, 1), g(2, 1)]);
    assert!(dets.iter().all(|d| d.is_zero()));
}

#[test]
fn transversality_and_flattening() {
    let mut r = rng();
    for d in [SpaceDescriptor::TypeIV(3), SpaceDescriptor::TypeI(2, 2)] {
        let f = fam(d);
        let (xi, z0, z1) = transversality_recipe(&f, &mut r).unwrap();
        assert_eq!(transversality_rank(&f, &xi, &z0, &z1).unwrap(), 2, "{d}");
        assert_eq!(transversality_rank(&f, &xi, &z0, &z0).unwrap(), 1);
        let seed = flattening_jacobian(&f, &xi, &z0, &z1).unwrap();
        assert!(seed.nonzero);
        assert_eq!(flattening_jacobian(&f, &xi, &z0, &z0).unwrap_err(), RigidityError::FlatteningSeedFailed);
        let off = vec![GaussRational::zero(); f.n()];
        assert_eq!(transversality_rank(&f, &xi, &off, &z1), Err(RigidityError::NotOnFamily));
    }
}

#[test]
fn support_facts_hold() {
    let mut r = rng();
    for d in [
        SpaceDescriptor::TypeI(2, 2),
        SpaceDescriptor::TypeI(2, 3),
        SpaceDescriptor::TypeII(4),
        SpaceDescriptor::TypeIII(2),
        SpaceDescriptor::TypeIII(3),
        SpaceDescriptor::TypeIV(3),
        SpaceDescriptor::E16,
        SpaceDescriptor::E27,
    ] {
        let rep = support_claims(&fam(d), &mut r).unwrap();
        let failed: Vec<_> = rep.checks.iter().filter(|c| !c.holds).collect();
        assert!(rep.all_pass, "{d}: {failed:?}");
    }
}

#[test]
fn type3_pairing_example() {
    // P = z13 z32, P̃ = z12 z33 with Q = 1 appear in ρ(·,ξ) as (c, −c)
    let mut r = rng();
    let f = fam(SpaceDescriptor::TypeIII(3));
    let xi: Vec<GaussRational> = (0..6).map(|_| crate::segre::random_rational(&mut r, 97)).collect();
    let rho = f.rho_at_xi(&xi);
    let names = f.space.var_names();
    let idx = |s: &str| names.iter().position(|n| n == s).unwrap();
    let mono = |a: &str, b: &str| {
        let mut e = vec![0u32; 12];
        e[idx(a)] += 1;
        e[idx(b)] += 1;
        crate::polyring::Monomial(e)
    };
    let p = rho.coeff(&mono("z13", "z23"));
    let pt = rho.coeff(&mono("z12", "z33"));
    assert!(!p.is_zero());
    assert_eq!(pt, -p);
}

#[test]
fn oracle_outcomes() {
    let mut r = rng();
    for d in [SpaceDescriptor::TypeIV(3), SpaceDescriptor::TypeI(2, 2)] {
        let f = fam(d);
        let xi: Vec<GaussRational> = (0..f.n()).map(|_| crate::segre::random_rational(&mut r, 97)).collect();
        let rho = f.to_space_ring(&f.rho_at_xi(&xi));
        let out = irreducibility_oracle(&rho, 5, 1, 1e7).unwrap();
        assert!(
            matches!(out, OracleOutcome::IrreducibleCertified | OracleOutcome::Inconclusive { .. }),
            "{d}: {out:?}"
        );
    }
    let v = ring_vars(&["z1", "z2"]);
    let one = Polynomial::one(v[0].ring());
    let prod = &(&one + &v[0]) * &(&one + &v[1]);
    assert!(matches!(irreducibility_oracle(&prod, 5, 1, 1e7).unwrap(), OracleOutcome::FactorFound { .. }));
    let big = ring_vars(&["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k"]);
    let q = big.iter().fold(Polynomial::one(big[0].ring()), |acc, x| &acc + &(x * x));
    assert!(matches!(
        irreducibility_oracle(&q, 5, 1, 1e7).unwrap(),
        OracleOutcome::Inconclusive { required: Some(_), .. }
    ));
}

#[test]
fn volume_and_isometry() {
    let mut r = rng();
    let f = fam(SpaceDescriptor::TypeI(2, 2));
    let id = RationalMap::identity(&f.space);
    assert!(volume_equation_check(&f, std::slice::from_ref(&id), &[1.0], 10, &mut r).unwrap() < 1e-12);
    assert!(volume_equation_check(&f, &[id.clone(), id.clone()], &[0.5, 0.5], 10, &mut r).unwrap() < 1e-12);
    let m = type1_induced_matrix(&f.space, &random_unitary(4, &mut r));
    let u = RationalMap::from_projective(&f.space, &m).unwrap();
    assert!(volume_equation_check(&f, std::slice::from_ref(&u), &[1.0], 10, &mut r).unwrap() < 1e-9);
    assert!(isometry_pullback_check(&f, &u, 10, &mut r).unwrap() < 1e-9);
    assert!(isometry_pullback_check(&f, &id, 5, &mut r).unwrap() < 1e-15);
    let g11 = fam(SpaceDescriptor::TypeI(1, 1));
    let two = RationalMap::scaling(&g11.space, &GaussRational::from_int(2));
    let res = isometry_pullback_at(&g11, &two, &[vec![Complex64::new(0.2, 0.0)]]).unwrap();
    // 4/(1+4|z|²)² − 1/(1+|z|²)² at |z| = 0.2
    let expect = 4.0 / (1.0f64 + 0.16).powi(2) - 1.0 / (1.0f64 + 0.04).powi(2);
    assert!((res - expect).abs() < 1e-12 && res > 0.1);
    assert_eq!(
        volume_equation_check(
            &fam(SpaceDescriptor::E27),
            &[RationalMap::identity(&fam(SpaceDescriptor::E27).space)],
            &[1.0],
            1,
            &mut r
        ),
        Err(RigidityError::UnknownLambda)
    );
}
