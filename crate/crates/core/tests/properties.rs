mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ramify::chartheory::representation::Representation;
use ramify::group::input::GroupSpec;
use ramify::group::DEFAULT_BUDGET;
use ramify::invariants::{FieldMode, VerifyOptions};
use ramify::{catalog, Cyclotomic, FiniteGroup, Rational};

use common::*;

fn cyclotomic(m: u32) -> impl Strategy<Value = Cyclotomic> {
    prop::collection::vec((0..m as i64, -6i64..=6, 1i64..=3), 0..4).prop_map(move |terms| {
        let terms: Vec<(i64, Rational)> = terms.into_iter().map(|(e, p, q)| (e, Rational::new(p, q))).collect();
        Cyclotomic::from_exponents(m, &terms)
    })
}

fn triple() -> impl Strategy<Value = (u32, Cyclotomic, Cyclotomic, Cyclotomic)> {
    (1u32..=24).prop_flat_map(|m| (Just(m), cyclotomic(m), cyclotomic(m), cyclotomic(m)))
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((0..n as u32).collect::<Vec<u32>>()).prop_shuffle()
}

/// Subgroups of `S_n` (n <= 5) generated by one or two random permutations.
fn permutation_group() -> impl Strategy<Value = Arc<FiniteGroup>> {
    (2usize..=5).prop_flat_map(|n| prop::collection::vec(permutation(n), 1..=2)).prop_map(|generators| {
        let degree = generators[0].len();
        let spec = GroupSpec::Permutation { degree, generators, name: None, generator_names: None };
        Arc::new(spec.build(DEFAULT_BUDGET).unwrap())
    })
}

fn small_fixture() -> impl Strategy<Value = Arc<FiniteGroup>> {
    prop::sample::select(vec!["S3", "V4", "Q8", "D8", "D10", "S4", "SL2F3", "Heis3", "D12"]).prop_map(group)
}

fn cyclic_group() -> impl Strategy<Value = Arc<FiniteGroup>> {
    (1usize..=4).prop_map(|n| Arc::new(catalog::cyclic(n).build(DEFAULT_BUDGET).unwrap()))
}

proptest! {
    #[test]
    fn field_axioms((_m, a, b, c) in triple()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn lifting_round_trip((m, a, b, _c) in triple(), k in 1u32..=4) {
        let big = k * m;
        prop_assert_eq!(a.lift(big).restrict_modulus(m), Some(a.clone()));
        let prod = &a.lift(big) * &b.lift(big);
        prop_assert_eq!(prod.restrict_modulus(m), Some(&a * &b));
    }

    #[test]
    fn conjugation_is_a_multiplicative_involution((_m, a, b, _c) in triple()) {
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
    }

    #[test]
    fn schreier_generators_present_the_kernel(seed in any::<u64>()) {
        let phi = random_abelian_map(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(schreier_laws(&phi), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_permutation_groups(g in permutation_group()) {
        prop_assert_eq!(group_axioms(&g, 7), Ok(()));
        prop_assert_eq!(character_laws(&g), Ok(()));
        prop_assert_eq!(local_laws(&g), Ok(()));
        prop_assert_eq!(tower_laws(&g), Ok(()));
    }

    #[test]
    fn direct_products(a in small_fixture(), b in prop_oneof![small_fixture(), cyclic_group()]) {
        prop_assume!(a.order() * b.order() <= 200);
        prop_assert_eq!(product_law(&a, &b), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn invariants_of_random_actions(
        g in permutation_group(),
        standard in any::<bool>(),
        real in any::<bool>(),
        seed in any::<u64>(),
    ) {
        prop_assume!(g.order() <= 12);
        let rep = if standard { Representation::standard(&g) } else { Representation::permutation(&g) }.unwrap();
        let field = if real { FieldMode::Real } else { FieldMode::Complex };
        let verify = VerifyOptions { trials: 1, dim: 2, seed };
        match invariant_laws(&g, &rep, field, &verify) {
            Ok(()) => {}
            // Actions that are neither complete nor abelian are refused, as
            // are real-coefficient requests without a conjugation-stable
            // transversal.
            Err(e) if e.starts_with("unsupported:") => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}
