use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use selfdual_core::code::random_self_dual;
use selfdual_core::decomposition::{assemble_c76, lift_e, SigmaLayout};
use selfdual_core::distance::{full_weight_distribution, DistancePlan};
use selfdual_core::equivalence::{are_equivalent, EquivalenceVerdict, DEFAULT_BUDGET};
use selfdual_core::fixed_part::{f_candidate, mu_space};
use selfdual_core::hermitian::{apply_monomial, e8_code, generate_m2_random, transversal_t, MonomialTransform};
use selfdual_core::shadow::shadow_cosets;

#[test]
fn assembled_codes_are_self_dual_and_sigma_invariant() {
    let m2 = &generate_m2_random(5, 1, 16)[0];
    let e8 = e8_code();
    let t = transversal_t();
    let sym = SigmaLayout::symmetry(76);
    for (i, tau) in t.iter().enumerate().step_by(7) {
        let m1 = apply_monomial(&e8, &MonomialTransform::new(tau.clone(), MonomialTransform::diag_from_index(i * 97)).unwrap()).unwrap();
        let e = lift_e(&m1, m2).unwrap();
        for mu in mu_space().iter().step_by(60) {
            let c = assemble_c76(&e, &f_candidate(mu).unwrap()).unwrap();
            assert_eq!((c.n(), c.k()), (76, 38));
            assert!(c.is_self_dual());
            assert!(c.is_invariant_under(sym.perm()));
            // plain and orbit-based enumeration agree on the verdict at 14
            let plain = DistancePlan::new(&c).unwrap().min_distance(Some(14)).at_least(14);
            let orbit = DistancePlan::with_symmetry(&c, &sym).unwrap().min_distance(Some(14)).at_least(14);
            assert_eq!(plain, orbit);
        }
    }
}

#[test]
fn symmetric_and_plain_capped_counts_agree_on_a_lift() {
    let m2 = &generate_m2_random(6, 1, 16)[0];
    let e = lift_e(&e8_code(), m2).unwrap();
    let sym = SigmaLayout::symmetry(72);
    let a = DistancePlan::new(&e.code).unwrap().capped_distribution(16);
    let b = DistancePlan::with_symmetry(&e.code, &sym).unwrap().capped_distribution(16);
    assert_eq!(a.counts, b.counts);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shadow_weights_follow_the_code(seed in 0u64..10_000, half in 4usize..10) {
        let n = 2 * half;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_self_dual(n, &mut rng);
        prop_assert!(c.is_self_dual());
        let singly_even = c.raw_rows().iter().any(|r| r.count_ones() % 4 == 2);
        match shadow_cosets(&c) {
            Ok(s) => {
                prop_assert!(singly_even);
                let counts = s.weight_counts(n).unwrap();
                prop_assert_eq!(counts.iter().sum::<u64>(), 1u64 << (n / 2));
                for (w, &k) in counts.iter().enumerate() {
                    prop_assert!(k == 0 || w % 4 == (n / 2) % 4);
                }
            }
            Err(_) => prop_assert!(!singly_even),
        }
    }

    #[test]
    fn permuted_self_dual_codes_are_equivalent(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_self_dual(16, &mut rng);
        let mut perm: Vec<usize> = (0..16).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let d = c.permuted(&perm);
        prop_assert_eq!(full_weight_distribution(&c, 1).unwrap(), full_weight_distribution(&d, 1).unwrap());
        match are_equivalent(&c, &d, DEFAULT_BUDGET).unwrap() {
            EquivalenceVerdict::Equivalent(cert) => prop_assert!(cert.verify(&c, &d)),
            other => prop_assert!(false, "{other:?}"),
        }
    }
}
