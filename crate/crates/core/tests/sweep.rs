//! Whole-catalog sweep up to order 2000: every constraint holds on every
//! group, and recognition never eliminates a group from its own exponent set.

use rho_lab_core::catalog::{is_curated, CatalogEntry};
use rho_lab_core::lemmas::{check_order_bound, check_prime_support, prime_support_of_expset, run_all, GroupInvariants};
use rho_lab_core::{nt, BranchStatus, Builder, ExpSet, RecognizeOptions, Recognizer, Verdict};

const SWEEP_LIMIT: u64 = 2000;

fn check_constraints(entry: &CatalogEntry) {
    let inv = GroupInvariants::from_spectrum(entry.spectrum.clone()).unwrap();
    for outcome in run_all(&inv) {
        assert!(outcome.passed(), "{} (order {}): {outcome:?}", entry.label, inv.order);
    }
    let equality = check_order_bound(&inv).verdict == Verdict::HoldsWithEquality;
    assert_eq!(equality, entry.spectrum.only_prime_orders(), "{}", entry.label);
    if inv.primes().len() >= 2 {
        assert_eq!(check_prime_support(&inv).verdict, Verdict::Holds);
        let support = prime_support_of_expset(&ExpSet::new(inv.rho.exp_set()).unwrap());
        assert!(inv.primes().iter().all(|p| support.contains(p)), "{}", entry.label);
    }
}

fn check_recognized(recognizer: &mut Recognizer, entry: &CatalogEntry, n: u64) {
    let target = ExpSet::new(entry.rho.exp_set()).unwrap();
    // larger orders do not bear on this group
    let opts = RecognizeOptions { known_order: None, max_order: n };
    let report = recognizer.recognize(&target, &opts).unwrap();
    let branch = report
        .branches
        .iter()
        .find(|b| b.order == Some(n))
        .unwrap_or_else(|| panic!("{} (order {n}) lost: {}", entry.label, report.render_trace()));
    match &branch.status {
        BranchStatus::Matched { groups, .. } => {
            assert!(groups.iter().any(|g| g.fingerprint == entry.fingerprint), "{}", entry.label)
        }
        BranchStatus::Unresolved { .. } => {}
        BranchStatus::Eliminated { .. } => panic!("{} eliminated: {}", entry.label, report.render_trace()),
    }
}

#[test]
fn catalog_sweep() {
    let mut recognizer = Recognizer::new(Builder::default());
    let mut groups = 0;
    for n in (1..=SWEEP_LIMIT).filter(|&n| nt::is_squarefree(n) || is_curated(n)) {
        // keep memory flat: catalogs are rebuilt on demand
        recognizer.store().clear();
        let catalog = recognizer.store().catalog(n).unwrap();
        for entry in &catalog.entries {
            check_constraints(entry);
            if !entry.rho.is_one() {
                check_recognized(&mut recognizer, entry, n);
            }
            groups += 1;
        }
    }
    assert!(groups > 5000, "swept {groups} groups");
}
