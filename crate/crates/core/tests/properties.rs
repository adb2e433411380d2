mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use prepol_core::{membership, qbinom, qint, CaseId, Engine, LaurentQ, Peel, Region, VectorExpr};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn laurent() -> impl Strategy<Value = LaurentQ> {
    prop::collection::vec((-6i64..=6, -5i64..=5, 1i64..=3), 0..6).prop_map(|terms| {
        LaurentQ::from_terms(
            terms
                .into_iter()
                .map(|(e, n, d)| (e, BigRational::new(BigInt::from(n), BigInt::from(d)))),
        )
    })
}

fn binomial(m: i64, k: i64) -> BigRational {
    let v = (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(m - j) / BigInt::from(j + 1));
    BigRational::from_integer(v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pascal_identity(m in 1i64..=30, k in 1u32..=30) {
        prop_assume!(k as i64 <= m);
        let lhs = qbinom(m, k, 1).unwrap();
        let rhs = &qbinom(m - 1, k, 1).unwrap().shift(k as i64)
            + &qbinom(m - 1, k - 1, 1).unwrap().shift(k as i64 - m);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn qbinom_symmetry_bar_and_specialization(m in 0i64..=30, k in 0u32..=30, d in 1i64..=3) {
        prop_assume!(k as i64 <= m);
        let b = qbinom(m, k, d).unwrap();
        prop_assert_eq!(&b, &qbinom(m, (m - k as i64) as u32, d).unwrap());
        prop_assert_eq!(&b.bar(), &b);
        prop_assert_eq!(b.eval_at_one(), binomial(m, k as i64));
        prop_assert!(membership(&b, Region::InQPowNA(-(k as i64) * (m - k as i64) * d)));
        prop_assert!(membership(&b, Region::InKZ));
    }

    #[test]
    fn qint_facts(m in -30i64..=30, d in 1i64..=3) {
        let x = qint(m, d).unwrap();
        prop_assert_eq!(&x.bar(), &x);
        prop_assert_eq!(&qint(-m, d).unwrap(), &-&x);
        if m >= 1 {
            prop_assert!(membership(&x, Region::InQPowNA(d * (1 - m))));
        }
    }

    #[test]
    fn total_order_is_strict_and_total(f in laurent(), g in laurent()) {
        let diff = &f - &g;
        let gt = diff.is_positive();
        let lt = (-&diff).is_positive();
        let eq = f == g;
        prop_assert_eq!(u8::from(gt) + u8::from(lt) + u8::from(eq), 1);
    }

    #[test]
    fn ring_laws(f in laurent(), g in laurent(), h in laurent()) {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f - &f, LaurentQ::zero());
        if !g.is_zero() {
            prop_assert_eq!((&f * &g).div_exact(&g), Some(f.clone()));
        }
    }

    #[test]
    fn text_round_trip(f in laurent()) {
        prop_assert_eq!(f.to_string().parse::<LaurentQ>().unwrap(), f);
    }

    #[test]
    fn normalize_is_idempotent_linear_and_weight_preserving(seed in 0u64..10_000, c in 1i64..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (id, s) = common::FAMILY_CASES[(seed % 5) as usize];
        let e = Engine::for_case(id, s).unwrap();
        let nodes = id.family().node_count();
        let w = common::random_word(&mut rng, nodes, 5);
        let v = VectorExpr::from_word(w.clone());
        let (n1, _) = e.normalize(&v).unwrap();
        let (n2, _) = e.normalize(&n1).unwrap();
        prop_assert_eq!(&n1, &n2);
        let (scaled, _) = e.normalize(&v.scale(&LaurentQ::constant(c))).unwrap();
        prop_assert_eq!(scaled, n1.scale(&LaurentQ::constant(c)));
        let lam = e.lambda_of(&w);
        for (x, _) in n1.terms() {
            prop_assert_eq!(&e.lambda_of(x), &lam);
        }
    }

    #[test]
    fn pairing_is_symmetric_and_peel_independent(seed in 0u64..10_000) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (id, s) = common::FAMILY_CASES[(seed % 5) as usize];
        let nodes = id.family().node_count();
        let probe = Engine::for_case(id, s).unwrap();
        let w = common::live_word(&probe, &mut rng, nodes, 4);
        let w2 = common::shuffled(&mut rng, &w);
        let a = Engine::for_case(id, s).unwrap().pair_with(&w, &w2, Peel::Left).unwrap();
        let b = Engine::for_case(id, s).unwrap().pair_with(&w2, &w, Peel::Left).unwrap();
        let c = Engine::for_case(id, s).unwrap().pair_with(&w, &w2, Peel::Longer).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a, &c);
        prop_assert!(a.has_integer_coefficients());
    }

    #[test]
    fn norms_are_positive_or_zero(seed in 0u64..10_000) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (id, s) = common::FAMILY_CASES[(seed % 5) as usize];
        let e = Engine::for_case(id, s).unwrap();
        let w = common::live_word(&e, &mut rng, id.family().node_count(), 4);
        let n = e.word_norm(&w).unwrap();
        prop_assert!(n.is_zero() || n.is_positive(), "{} has norm {}", w, n);
    }
}

#[test]
fn e_case_norms_are_integral_and_positive() {
    for id in CaseId::ALL {
        let e = Engine::for_case(id, 2).unwrap();
        for k in 0..=id.k_max(2) as u32 {
            let n = e.word_norm(&id.template(k, k)).unwrap();
            assert!(n.is_positive() && n.has_integer_coefficients(), "{id} k={k}: {n}");
        }
    }
}
