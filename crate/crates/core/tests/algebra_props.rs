use bernstein_core::field::{Field, Rational};
use bernstein_core::identity::{check_identity, evaluate_witness, random_identity_probe, IdentityId, IdentityOutcome};
use bernstein_core::sample::{random_element, random_subspace};
use bernstein_core::{CommAlgebra, Element, PowerKind, Subspace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

/// Random commutative algebra. With `nil`, products of `b_i, b_j` only use
/// basis vectors of larger index, so the algebra is nilpotent.
fn algebra(nil: bool) -> impl Strategy<Value = CommAlgebra<Rational>> {
    (2usize..=4).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => -2i64..=2], n), n * (n + 1) / 2)
            .prop_map(move |entries| {
                let names: Vec<String> = (1..=n).map(|i| format!("b{i}")).collect();
                let mut a = CommAlgebra::new(names);
                let mut it = entries.into_iter();
                for j in 0..n {
                    for i in 0..=j {
                        let v: Vec<Rational> = it
                            .next()
                            .unwrap()
                            .into_iter()
                            .enumerate()
                            .map(|(k, c)| if nil && k <= j { q(0) } else { q(c) })
                            .collect();
                        a.set_product(i, j, &v).unwrap();
                    }
                }
                a
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_commutative(a in algebra(false), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Element<Rational> = random_element(a.dim(), &mut rng);
        let y = random_element(a.dim(), &mut rng);
        prop_assert_eq!(a.multiply(&x, &y).unwrap(), a.multiply(&y, &x).unwrap());
    }

    #[test]
    fn subspace_product_is_monotone(a in algebra(false), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = Subspace::full(a.dim());
        let s = random_subspace(&full, &mut rng);
        let t = random_subspace(&full, &mut rng);
        let bigger = s.sum(&random_subspace(&full, &mut rng)).unwrap();
        prop_assert!(a.subspace_product(&s, &t).unwrap().leq(&a.subspace_product(&bigger, &t).unwrap()).unwrap());
        prop_assert!(a.subspace_product(&t, &s).unwrap().leq(&a.subspace_product(&t, &bigger).unwrap()).unwrap());
        prop_assert!(a.subspace_product(&s, &Subspace::zero(a.dim())).unwrap().is_zero());
        prop_assert_eq!(a.subspace_product(&s, &t).unwrap(), a.subspace_product(&t, &s).unwrap());
    }

    #[test]
    fn closures_are_nested(a in algebra(false), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Element<Rational>> = (0..2).map(|_| random_element(a.dim(), &mut rng)).collect();
        let vs: Vec<Vec<Rational>> = gens.iter().map(|g| g.coords().to_vec()).collect();
        let span = Subspace::from_vectors(&vs, a.dim()).unwrap();
        let sub = a.generated_subalgebra(&gens).unwrap();
        let ideal = a.generated_ideal(&gens).unwrap();
        prop_assert!(span.leq(&sub).unwrap());
        prop_assert!(sub.leq(&ideal).unwrap());
        prop_assert!(a.is_subalgebra(&sub).unwrap());
        prop_assert!(a.is_ideal(&ideal).unwrap());
    }

    #[test]
    fn chains_decrease_and_nilpotency_agrees(a in algebra(false), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = [random_element(a.dim(), &mut rng)];
        let s = a.generated_subalgebra(&gens).unwrap();
        for target in [Subspace::full(a.dim()), s] {
            let full = a.power_chain(&target, PowerKind::Full, None).unwrap();
            let principal = a.power_chain(&target, PowerKind::Principal, None).unwrap();
            prop_assert!(full.stabilized && principal.stabilized);
            for w in full.terms.windows(2) {
                prop_assert!(w[1].leq(&w[0]).unwrap());
            }
            prop_assert_eq!(full.is_nilpotent(), principal.is_nilpotent());
        }
    }

    #[test]
    fn triangular_algebras_are_nilpotent(a in algebra(true)) {
        let report = a.nilpotency_report(&Subspace::full(a.dim())).unwrap();
        prop_assert!(report.nil_index_full.is_some());
        prop_assert!(report.nil_index_principal.is_some());
        prop_assert!(report.nil_index_principal <= report.nil_index_full);
        prop_assert!(report.solv_index.is_some());
    }

    #[test]
    fn exact_check_agrees_with_sampling(a in algebra(false), nil in algebra(true), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for alg in [&a, &nil] {
            for id in [IdentityId::Jordan, IdentityId::Jacobi, IdentityId::CubeZero, IdentityId::SquareSquareZero] {
                match check_identity(alg, id, None).unwrap() {
                    IdentityOutcome::Holds => {
                        prop_assert!(random_identity_probe(alg, id, None, 20, &mut rng).unwrap().holds());
                    }
                    IdentityOutcome::Fails(w) => {
                        let r = evaluate_witness(alg, None, &w).unwrap();
                        prop_assert!(!r.is_zero());
                        prop_assert_eq!(r, w.residual);
                    }
                }
            }
        }
    }
}

#[test]
fn weighted_identities_on_random_weights() {
    let mut a = CommAlgebra::<Rational>::with_names(&["e", "x"]);
    a.set_product(0, 0, &[q(1), q(0)]).unwrap();
    a.set_product(0, 1, &[q(0), Rational::from_ratio(1, 2).unwrap()]).unwrap();
    let w = [q(1), q(0)];
    assert!(check_identity(&a, IdentityId::Bernstein, Some(&w)).unwrap().holds());
    assert!(check_identity(&a, IdentityId::CubeWeight, Some(&w)).unwrap().holds());
    let bad = [q(1), q(1)];
    let out = check_identity(&a, IdentityId::Bernstein, Some(&bad)).unwrap();
    let wit = out.witness().unwrap();
    assert_eq!(evaluate_witness(&a, Some(&bad), wit).unwrap(), wit.residual);
    assert!(!Field::is_zero(&wit.residual.coords()[0]) || !Field::is_zero(&wit.residual.coords()[1]));
}
