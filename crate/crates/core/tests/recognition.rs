use rho_lab_core::recognize::Outcome;
use rho_lab_core::{BranchStatus, Builder, Completeness, ExpSet, Family, LemmaId, RecognizeOptions, Recognizer};

fn set(s: &str) -> ExpSet {
    s.parse().unwrap()
}

fn recognize(target: &str) -> (Recognizer, rho_lab_core::RecognitionReport) {
    let mut r = Recognizer::new(Builder::default());
    let report = r.recognize(&set(target), &RecognizeOptions::default()).unwrap();
    (r, report)
}

fn assert_witnesses(r: &mut Recognizer, report: &rho_lab_core::RecognitionReport) {
    for b in &report.branches {
        assert!(r.recheck(&report.target, b).unwrap(), "witness does not recheck: {b:?}");
    }
}

fn assert_sound(report: &rho_lab_core::RecognitionReport) {
    let b = Builder::default();
    for g in report.matched() {
        let rebuilt = b.build(&g.spec).unwrap();
        let rho = rho_lab_core::rho::rho_of_group(&rebuilt).unwrap();
        assert_eq!(rho.exp_set(), *report.target.values(), "{}", g.label);
    }
}

#[test]
fn psl2_5_or_z30() {
    let (mut r, report) = recognize("{15,20,24}");
    assert_eq!(report.matched_labels(), ["C30", "PSL(2,5)"]);
    assert_eq!(report.candidate_orders(), [30, 60]);
    assert_eq!(report.catalog_completeness.get(&30), Some(&Completeness::Complete));
    assert_eq!(report.catalog_completeness.get(&60), Some(&Completeness::Complete));
    assert!(report.branches.iter().all(|b| !b.rests_on_citation()));
    assert_witnesses(&mut r, &report);
    assert_sound(&report);
}

#[test]
fn psl2_7() {
    let (mut r, report) = recognize("{48,56,105}");
    assert_eq!(report.matched_labels(), ["PSL(2,7)"]);
    assert_eq!(report.support, [2, 3, 5, 7]);
    let eliminated = |pi: &[u64]| report.branch(pi, None).and_then(|b| b.eliminated_by());
    assert_eq!(eliminated(&[2, 3, 5]), Some(LemmaId::CoprimePartDivides));
    assert_eq!(eliminated(&[2, 5, 7]), Some(LemmaId::CoprimePartDivides));
    assert_eq!(eliminated(&[2, 3, 5, 7]), Some(LemmaId::CoprimePartDivides));
    assert_witnesses(&mut r, &report);
    assert_sound(&report);
}

#[test]
fn psl2_11() {
    let (mut r, report) = recognize("{120,165,220,264}");
    assert_eq!(report.matched_labels(), ["PSL(2,11)"]);
    assert_eq!(report.candidate_orders(), [330, 660]);
    let b660 = report.branch(&[2, 3, 5, 11], Some(660)).unwrap();
    assert_eq!(b660.catalog_completeness, Some(Completeness::PartialDocumented));
    assert!(b660.rests_on_citation());
    assert_eq!(report.branch(&[2, 3, 5, 11], Some(330)).unwrap().eliminated_by(), Some(LemmaId::Catalog));
    assert_witnesses(&mut r, &report);
    assert_sound(&report);
}

#[test]
fn psl2_13() {
    let (mut r, report) = recognize("{168,273,364,468}");
    assert_eq!(report.candidate_orders(), [546, 1092]);
    let b546 = report.branch(&[2, 3, 7, 13], Some(546)).unwrap();
    assert!(b546.is_matched());
    assert_eq!(b546.assignments.len(), 1);
    let a = &b546.assignments[0];
    assert_eq!((a[&2], a[&3], a[&7], a[&13]), (273, 364, 468, 168));
    let b1092 = report.branch(&[2, 3, 7, 13], Some(1092)).unwrap();
    assert_eq!(b1092.catalog_completeness, Some(Completeness::PartialDocumented));
    assert_eq!(b1092.simple_primes, [3, 7, 13]);
    let BranchStatus::Matched { groups, citation } = &b1092.status else { panic!("{b1092:?}") };
    assert!(groups.iter().any(|g| g.label == "PSL(2,13)"));
    assert!(citation.is_some());
    // SmallGroup(546,13) = C14 x (C13 : C3) appears at order 546
    let b = Builder::default();
    let fp = b.build(&"C14 x (C13 : C3 @ 3)".parse().unwrap()).unwrap().fingerprint();
    let BranchStatus::Matched { groups, .. } = &b546.status else { unreachable!() };
    assert!(groups.iter().any(|g| g.fingerprint == fp));
    assert_witnesses(&mut r, &report);
    assert_sound(&report);
}

#[test]
fn exit_contract() {
    let (_, report) = recognize("{15,20,24}");
    assert_eq!(report.outcome().exit_code(), 0);
    // rho(C7) = 7^6
    let (_, report) = recognize("{6}");
    assert_eq!(report.matched_labels(), ["C7"]);
    // rho(C3 x C3) = 3^8
    let (_, report) = recognize("{8}");
    assert_eq!(report.matched_labels(), ["C3 x C3"]);
    // nothing realizes {20}
    let (mut r, report) = recognize("{20}");
    assert_eq!(report.outcome(), Outcome::AllEliminated);
    assert_witnesses(&mut r, &report);
    assert_eq!(report.outcome().exit_code(), 3);
}

#[test]
fn determinism() {
    let (_, a) = recognize("{48,56,105}");
    let (_, b) = recognize("{48,56,105}");
    assert_eq!(a, b);
    assert_eq!(a.render_trace(), b.render_trace());
}

fn fingerprints_of(family: &Family) -> Vec<rho_lab_core::Fingerprint> {
    let b = Builder::default();
    family.expected().iter().map(|s| b.build(s).unwrap().fingerprint()).collect()
}

#[test]
fn family_psl25_x_zp() {
    let mut r = Recognizer::new(Builder::default());
    for p in [7, 11, 13] {
        let family = Family::Psl25xZp { p };
        let report = r.recognize_family(&family, &RecognizeOptions::default()).unwrap();
        let matched: Vec<_> = report.matched().map(|g| g.fingerprint.clone()).collect();
        assert_eq!(matched, fingerprints_of(&family), "p = {p}: {}", report.render_trace());
        for order in report.candidate_orders() {
            assert_eq!(order % (15 * p), 0);
        }
        assert_witnesses(&mut r, &report);
        assert_sound(&report);
    }
}

#[test]
fn family_z2qr() {
    let mut r = Recognizer::new(Builder::default());
    let primes = rho_lab_core::nt::primes_up_to(250);
    let mut cases = 0;
    for (i, &q) in primes.iter().enumerate().skip(1) {
        for &r_ in &primes[i + 1..] {
            if 2 * q * r_ > 500 {
                continue;
            }
            let family = Family::Z2qr { q, r: r_ };
            let report = r.recognize_family(&family, &RecognizeOptions::default()).unwrap();
            let mut matched: Vec<_> = report.matched().map(|g| g.fingerprint.clone()).collect();
            let mut expected = fingerprints_of(&family);
            matched.sort();
            expected.sort();
            assert_eq!(matched, expected, "{family}: {}", report.render_trace());
            assert_sound(&report);
            cases += 1;
        }
    }
    assert!(cases >= 40);
}
