use hss_core::polyring::{GaussRational, Monomial, PolyJson, Polynomial, Ring, RingRef};
use num_complex::Complex64;
use proptest::prelude::*;

const NVARS: usize = 3;

fn ring() -> RingRef {
    Ring::new(&["x", "y", "z"])
}

fn gauss() -> impl Strategy<Value = GaussRational> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| GaussRational::from_parts(a, b, c, d))
}

fn poly() -> impl Strategy<Value = Vec<(Vec<u32>, GaussRational)>> {
    prop::collection::vec((prop::collection::vec(0u32..3, NVARS), gauss()), 0..6)
}

fn build(terms: &[(Vec<u32>, GaussRational)]) -> Polynomial {
    Polynomial::from_terms(&ring(), terms.iter().map(|(e, c)| (Monomial(e.clone()), c.clone())))
}

fn point() -> impl Strategy<Value = Vec<GaussRational>> {
    prop::collection::vec(gauss(), NVARS)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        let (a, b, c) = (build(&a), build(&b), build(&c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(&ring()), a.clone());
    }

    #[test]
    fn partials_commute(a in poly(), i in 0..NVARS, j in 0..NVARS) {
        let a = build(&a);
        prop_assert_eq!(a.derive_index(i).derive_index(j), a.derive_index(j).derive_index(i));
    }

    #[test]
    fn leibniz_rule(a in poly(), b in poly(), i in 0..NVARS) {
        let (a, b) = (build(&a), build(&b));
        let lhs = (&a * &b).derive_index(i);
        let rhs = &(&a.derive_index(i) * &b) + &(&a * &b.derive_index(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), p in point()) {
        let (a, b) = (build(&a), build(&b));
        let (va, vb) = (a.eval_slice(&p), b.eval_slice(&p));
        prop_assert_eq!((&a + &b).eval_slice(&p), &va + &vb);
        prop_assert_eq!((&a * &b).eval_slice(&p), &va * &vb);
    }

    #[test]
    fn float_matches_exact(a in poly(), p in point()) {
        let a = build(&a);
        let exact = a.eval_slice(&p).to_complex64();
        let fp: Vec<Complex64> = p.iter().map(GaussRational::to_complex64).collect();
        let float = a.eval_f64(&fp);
        prop_assert!((exact - float).norm() <= 1e-9 * (1.0 + exact.norm()));
    }

    #[test]
    fn json_roundtrip(a in poly()) {
        let a = build(&a);
        let text = serde_json::to_string(&a.to_json()).unwrap();
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(Polynomial::from_json_in(&back, &ring()).unwrap(), a);
    }

    #[test]
    fn exact_division_inverts_product(a in poly(), b in poly()) {
        let (a, b) = (build(&a), build(&b));
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }
}

mod geometry {
    use super::gauss;
    use hss_core::octonion::{standard_table, Octonion};
    use hss_core::polyring::GaussRational;
    use hss_core::segre::{build_rho, SegreFamily};
    use hss_core::spaces::{Space, SpaceDescriptor};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn families() -> &'static Vec<SegreFamily> {
        static F: OnceLock<Vec<SegreFamily>> = OnceLock::new();
        F.get_or_init(|| {
            [
                SpaceDescriptor::TypeI(2, 2),
                SpaceDescriptor::TypeII(4),
                SpaceDescriptor::TypeIII(2),
                SpaceDescriptor::TypeIV(4),
                SpaceDescriptor::E16,
            ]
            .into_iter()
            .map(|d| build_rho(&Space::build(d).unwrap()))
            .collect()
        })
    }

    fn oct() -> impl Strategy<Value = Octonion<GaussRational>> {
        prop::collection::vec(gauss(), 8).prop_map(Octonion::from_vec)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn octonion_norm_is_multiplicative(a in oct(), b in oct()) {
            let t = standard_table();
            prop_assert_eq!(a.mul_with(&b, &t).norm(), &a.norm() * &b.norm());
        }

        #[test]
        fn octonion_conjugation_reverses_products(a in oct(), b in oct()) {
            let t = standard_table();
            prop_assert_eq!(a.mul_with(&b, &t).conj(), b.conj().mul_with(&a.conj(), &t));
        }

        #[test]
        fn rho_is_symmetric(k in 0usize..5, seed in prop::collection::vec(gauss(), 32)) {
            let fam = &families()[k];
            let n = fam.n();
            let (z, xi) = (&seed[..n], &seed[n..2 * n]);
            prop_assert_eq!(fam.rho_exact(z, xi), fam.rho_exact(xi, z));
        }
    }
}
