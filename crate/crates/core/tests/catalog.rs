//! Catalog contents against brute-force enumeration and published counts.

use std::collections::HashMap;

use rho_lab_core::catalog::{holder_parameters, known_group_count};
use rho_lab_core::iso::are_isomorphic;
use rho_lab_core::{nt, Builder, CatalogStore, Completeness, FiniteGroup};

/// Isomorphism classes among every `C_b : C_a @ k` with `b * a = n`.
fn brute_force_classes(b: &Builder, n: u64) -> usize {
    let mut classes: HashMap<_, Vec<FiniteGroup>> = HashMap::new();
    for kernel in nt::divisors(n).unwrap() {
        let complement = n / kernel;
        let actions: Vec<u64> = if kernel == 1 {
            vec![0]
        } else {
            (1..kernel).filter(|&k| nt::gcd(k, kernel) == 1 && nt::pow_mod(k, complement, kernel) == 1).collect()
        };
        for k in actions {
            let g = b.semidirect_cyclic(kernel, complement, k).unwrap();
            let bucket = classes.entry(g.fingerprint()).or_default();
            if !bucket.iter().any(|h| are_isomorphic(h, &g).unwrap()) {
                bucket.push(g);
            }
        }
    }
    classes.values().map(Vec::len).sum()
}

#[test]
fn holder_count_matches_brute_force_below_200() {
    let b = Builder::default();
    for n in (1..200).filter(|&n| nt::is_squarefree(n)) {
        assert_eq!(holder_parameters(n).unwrap().len(), brute_force_classes(&b, n), "n = {n}");
    }
}

#[test]
fn published_squarefree_counts() {
    let counts = [(6, 2), (30, 4), (42, 6), (66, 4), (78, 6), (105, 2), (110, 6), (182, 4)];
    for (n, count) in counts {
        assert_eq!(holder_parameters(n).unwrap().len(), count, "n = {n}");
    }
}

fn assert_pairwise_distinct(groups: &[&FiniteGroup]) {
    for (i, x) in groups.iter().enumerate() {
        for y in &groups[i + 1..] {
            assert_eq!(are_isomorphic(x, y), Some(false), "{} ~ {}", x.label(), y.label());
        }
    }
}

#[test]
fn curated_orders_are_complete_and_distinct() {
    let mut store = CatalogStore::new(Builder::default());
    for n in [4, 8, 9, 12, 20, 24, 25, 28, 44, 49, 52, 60, 84] {
        let catalog = store.catalog(n).unwrap();
        assert_eq!(catalog.completeness, Completeness::Complete, "n = {n}");
        assert_eq!(Some(catalog.entries.len() as u64), known_group_count(n), "n = {n}");
        assert!(catalog.entries.iter().all(|e| e.group.order() == n));
        assert_pairwise_distinct(&catalog.entries.iter().map(|e| &e.group).collect::<Vec<_>>());
    }
}

#[test]
fn order_60_contains_psl2_5_and_c30_x_c2() {
    let mut store = CatalogStore::new(Builder::default());
    let catalog = store.catalog(60).unwrap();
    assert_eq!(catalog.entries.len(), 13);
    let b = Builder::default();
    for spec in ["PSL(2,5)", "C60", "C30 x C2", "D60"] {
        let g = b.build(&spec.parse().unwrap()).unwrap();
        let hits = catalog.entries.iter().filter(|e| are_isomorphic(&e.group, &g) == Some(true)).count();
        assert_eq!(hits, 1, "{spec}");
    }
}

#[test]
fn order_1092_is_partial_and_contains_psl2_13() {
    let mut store = CatalogStore::new(Builder::default());
    let catalog = store.catalog(1092).unwrap();
    assert_eq!(catalog.completeness, Completeness::PartialDocumented);
    let psl = Builder::default().psl2(13).unwrap().fingerprint();
    assert!(catalog.entries.iter().any(|e| e.fingerprint == psl));
}
