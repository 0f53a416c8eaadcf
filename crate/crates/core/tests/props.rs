//! Randomised invariants over constructed groups and factored arithmetic.

use proptest::prelude::*;
use rho_lab_core::lemmas::{run_all, GroupInvariants};
use rho_lab_core::rho::{closed_form, rho_of_group};
use rho_lab_core::{nt, BranchStatus, Builder, ExpSet, FactoredInt, GroupSpec, RecognizeOptions, Recognizer};

/// `(n, m, k)` with `k^m = 1 mod n`, so `C_n : C_m @ k` exists.
fn semidirect_spec(max_n: u64, max_m: u64) -> impl Strategy<Value = GroupSpec> {
    (1..=max_n, 1..=max_m)
        .prop_flat_map(|(n, m)| {
            let ks: Vec<u64> = if n == 1 {
                vec![0]
            } else {
                (1..n).filter(|&k| nt::gcd(k, n) == 1 && nt::pow_mod(k, m, n) == 1).collect()
            };
            (Just(n), Just(m), proptest::sample::select(ks))
        })
        .prop_map(|(n, m, k)| GroupSpec::SemidirectCyclic { n, m, k })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_is_consistent(spec in semidirect_spec(40, 12)) {
        let g = Builder::default().build(&spec).unwrap();
        let n = g.order();
        prop_assert_eq!(Some(n), spec.predicted_order());
        let spectrum = g.order_spectrum();
        prop_assert_eq!(spectrum.group_order(), n);
        prop_assert_eq!(spectrum.s(1), 1);
        for (t, s) in spectrum.iter() {
            prop_assert_eq!(n % t, 0);
            prop_assert_eq!(s % nt::euler_phi(t).unwrap(), 0);
        }
        for k in 1..=n {
            prop_assert_eq!(g.count_kth_roots(k) % nt::gcd(k, n), 0);
        }
    }

    #[test]
    fn constraints_hold(spec in semidirect_spec(60, 12)) {
        let g = Builder::default().build(&spec).unwrap();
        let inv = GroupInvariants::of_group(&g).unwrap();
        for outcome in run_all(&inv) {
            prop_assert!(outcome.passed(), "{}: {:?}", spec, outcome);
        }
        if g.order() > 1 {
            prop_assert_eq!(inv.rho.primes(), nt::factorize(g.order()).unwrap().into_iter().map(|(p, _)| p).collect());
        }
    }

    #[test]
    fn closed_form_matches_enumeration(spec in semidirect_spec(64, 16)) {
        if let Some(value) = closed_form(&spec) {
            let g = Builder::default().build(&spec).unwrap();
            prop_assert_eq!(value.unwrap().0, rho_of_group(&g).unwrap());
        }
    }

    #[test]
    fn direct_product_is_product_of_spectra(a in semidirect_spec(12, 6), b in semidirect_spec(12, 6)) {
        let builder = Builder::default();
        let (ga, gb) = (builder.build(&a).unwrap(), builder.build(&b).unwrap());
        let product = builder.direct_product(&ga, &gb).unwrap();
        let combined = rho_lab_core::rho::product_spectrum(&ga.order_spectrum(), &gb.order_spectrum()).unwrap();
        prop_assert_eq!(product.order_spectrum(), combined);
    }

    #[test]
    fn recognition_never_eliminates_the_source(spec in semidirect_spec(30, 8)) {
        let g = Builder::default().build(&spec).unwrap();
        let rho = rho_of_group(&g).unwrap();
        prop_assume!(!rho.is_one());
        let n = g.order();
        let mut recognizer = Recognizer::new(Builder::default());
        let target = ExpSet::new(rho.exp_set()).unwrap();
        let report = recognizer.recognize(&target, &RecognizeOptions { known_order: None, max_order: n }).unwrap();
        let branch = report.branches.iter().find(|b| b.order == Some(n));
        prop_assert!(branch.is_some(), "{}", report.render_trace());
        match &branch.unwrap().status {
            BranchStatus::Matched { groups, .. } => {
                let fp = g.fingerprint();
                prop_assert!(groups.iter().any(|m| m.fingerprint == fp));
            }
            BranchStatus::Unresolved { .. } => {}
            BranchStatus::Eliminated { lemma_id, .. } => prop_assert!(false, "{} eliminated by {:?}", spec, lemma_id),
        }
    }

    #[test]
    fn factored_int_agrees_with_machine_arithmetic(a in 1u64..1_000_000, b in 1u64..1_000_000) {
        let (fa, fb) = (FactoredInt::factor(a).unwrap(), FactoredInt::factor(b).unwrap());
        let product = fa.checked_mul(&fb).unwrap();
        prop_assert_eq!(product.to_u64(), Some(a * b));
        prop_assert_eq!(&product, &fb.checked_mul(&fa).unwrap());
        let text = product.to_string();
        prop_assert_eq!(text.parse::<FactoredInt>().unwrap(), product);
    }

    #[test]
    fn rho_of_cyclic_is_multiplicative(a in 1u64..200, b in 1u64..200) {
        prop_assume!(nt::gcd(a, b) == 1);
        let split = rho_lab_core::rho::rho_direct_product(&[
            (rho_lab_core::rho::rho_cyclic(a).unwrap(), a),
            (rho_lab_core::rho::rho_cyclic(b).unwrap(), b),
        ]).unwrap();
        prop_assert_eq!(split, rho_lab_core::rho::rho_cyclic(a * b).unwrap());
    }
}
