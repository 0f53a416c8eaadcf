//! Verification suites, one per acceptance criterion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use anyhow::{anyhow, ensure, Result};
use rayon::prelude::*;
use rho_lab_core::catalog::{holder_parameters, is_curated};
use rho_lab_core::iso::are_isomorphic;
use rho_lab_core::lemmas::{check_order_bound, check_prime_support, run_all, GroupInvariants};
use rho_lab_core::rho::{
    cyclic_spectrum, exp_rho, prime_order_spectrum, product_spectrum, rho_cyclic, rho_direct_product, rho_enumerative,
    rho_of_group, rho_psl2, rho_semidirect,
};
use rho_lab_core::{
    nt, Builder, CatalogStore, Completeness, ExpSet, FactoredInt, Family, FiniteGroup, GroupSpec, LemmaId,
    RecognitionReport, RecognizeOptions, Recognizer, Verdict,
};
use serde::Serialize;

/// Orders swept by the constraint suite.
pub const SWEEP_LIMIT: u64 = 2000;
/// Orders below which the Hölder count is checked against brute force.
pub const HOLDER_ORACLE_LIMIT: u64 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Exact,
    ClosedForm,
    Lemmas,
    Recognition,
    NonCharacterizable,
    Catalog,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Exact, Suite::ClosedForm, Suite::Lemmas, Suite::Recognition, Suite::NonCharacterizable, Suite::Catalog];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Exact => "exact",
            Suite::ClosedForm => "closed-form",
            Suite::Lemmas => "lemmas",
            Suite::Recognition => "recognition",
            Suite::NonCharacterizable => "non-characterizable",
            Suite::Catalog => "catalog",
        }
    }

    /// Acceptance criterion number.
    pub fn criterion(self) -> usize {
        Suite::ALL.iter().position(|&s| s == self).unwrap() + 1
    }

    pub fn run(self, opts: &VerifyOptions) -> SuiteReport {
        let start = Instant::now();
        let mut checks = Checks::default();
        let result = match self {
            Suite::Exact => exact(&mut checks, opts),
            Suite::ClosedForm => closed_forms(&mut checks, opts),
            Suite::Lemmas => lemmas(&mut checks, opts),
            Suite::Recognition => recognition(&mut checks, opts),
            Suite::NonCharacterizable => non_characterizable(&mut checks, opts),
            Suite::Catalog => catalog(&mut checks, opts),
        };
        if let Err(e) = result {
            checks.fail("error", format!("{e:#}"));
        }
        SuiteReport { suite: self, checks: checks.0, elapsed_ms: start.elapsed().as_millis() as u64 }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
            anyhow!("unknown suite '{s}' (expected one of {}, all)", names.join(", "))
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub builder: Builder,
    pub sweep_limit: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { builder: Builder::default(), sweep_limit: SWEEP_LIMIT }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckLine>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("[{}] {}: {}\n", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail));
        }
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        out.push_str(&format!(
            "suite {} (criterion {}): {verdict}, {} checks, {} ms\n",
            self.suite,
            self.suite.criterion(),
            self.checks.len(),
            self.elapsed_ms
        ));
        out
    }
}

#[derive(Default)]
struct Checks(Vec<CheckLine>);

impl Checks {
    fn record(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(CheckLine { name: name.into(), passed, detail: detail.into() });
    }

    fn pass(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.record(name, true, detail);
    }

    fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.record(name, false, detail);
    }

    /// Records `first_failure` if any, else `ok`.
    fn outcome(&mut self, name: impl Into<String>, first_failure: Option<String>, ok: impl Into<String>) {
        match first_failure {
            Some(f) => self.fail(name, f),
            None => self.pass(name, ok),
        }
    }
}

fn rho_of(b: &Builder, spec: &str) -> Result<FactoredInt> {
    Ok(rho_of_group(&b.build(&spec.parse()?)?)?)
}

pub const PUBLISHED_VALUES: [(&str, &str); 6] = [
    ("PSL(2,5)", "2^15*3^20*5^24"),
    ("PSL(2,7)", "2^105*3^56*7^48"),
    ("PSL(2,11)", "2^165*3^220*5^264*11^120"),
    ("PSL(2,13)", "2^273*3^364*7^468*13^168"),
    ("C30", "2^15*3^20*5^24"),
    ("C14 x (C13 : C3 @ 3)", "2^273*3^364*7^468*13^168"),
];

const EXACT_TIME_BUDGET: Duration = Duration::from_secs(5);

fn exact(checks: &mut Checks, opts: &VerifyOptions) -> Result<()> {
    let start = Instant::now();
    for (spec, expected) in PUBLISHED_VALUES {
        let got = rho_of(&opts.builder, spec)?;
        checks.record(format!("rho({spec})"), got.to_string() == expected, format!("{got} (expected {expected})"));
    }
    let elapsed = start.elapsed();
    checks.record("runtime", elapsed < EXACT_TIME_BUDGET, format!("{} ms", elapsed.as_millis()));
    Ok(())
}

/// `C_{p^e} : C_m` for every admissible action.
pub fn semidirect_instances() -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for pe in [3u64, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27] {
        let p = nt::factorize(pe).expect("small")[0].0;
        for m in (2..=12u64).filter(|m| m % p != 0) {
            for k in (1..pe).filter(|&k| nt::gcd(k, pe) == 1 && nt::pow_mod(k, m, pe) == 1) {
                out.push((pe, m, k));
            }
        }
    }
    out
}

const DIRECT_PARTS: [&str; 8] = ["C4", "C9", "D10", "C7 : C3 @ 2", "C5", "PSL(2,5)", "C11", "C13 : C4 @ 5"];

fn closed_forms(checks: &mut Checks, opts: &VerifyOptions) -> Result<()> {
    let b = &opts.builder;
    for q in [5, 7, 11, 13] {
        let (formula, enumerated) = (rho_psl2(q)?, rho_of_group(&b.psl2(q)?)?);
        checks.record(format!("rho_psl2({q})"), formula == enumerated, format!("{formula}"));
    }

    let bad = (1..=500u64)
        .into_par_iter()
        .map(|n| Ok((n, rho_cyclic(n)? == rho_of_group(&b.cyclic(n)?)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .find(|&(_, ok)| !ok);
    checks.outcome("rho_cyclic(n), n <= 500", bad.map(|(n, _)| format!("differs at n = {n}")), "500 values agree");

    let mut instances = 0;
    let mut failure = None;
    for (n, m, k) in semidirect_instances() {
        let g = b.semidirect_cyclic(n, m, k)?;
        let centralizer = g.centralizer_order(&g.generators()[..1])? / n;
        let formula = rho_semidirect(&rho_cyclic(n)?, n, &rho_cyclic(m)?, centralizer)?;
        if formula != rho_of_group(&g)? {
            failure.get_or_insert(format!("C{n} : C{m} @ {k}"));
        }
        instances += 1;
    }
    for (i, x) in DIRECT_PARTS.iter().enumerate() {
        for y in &DIRECT_PARTS[i + 1..] {
            let (gx, gy) = (b.build(&x.parse()?)?, b.build(&y.parse()?)?);
            let (ox, oy) = (gx.order(), gy.order());
            if nt::gcd(ox, oy) != 1 || ox * oy > 5000 {
                continue;
            }
            let formula = rho_direct_product(&[(rho_of_group(&gx)?, ox), (rho_of_group(&gy)?, oy)])?;
            if formula != rho_of_group(&b.direct_product(&gx, &gy)?)? {
                failure.get_or_insert(format!("{x} x {y}"));
            }
            instances += 1;
        }
    }
    if instances < 50 {
        failure.get_or_insert(format!("only {instances} instances"));
    }
    checks.outcome(
        "rho_semidirect and rho_direct_product",
        failure.map(|f| format!("differs on {f}")),
        format!("{instances} instances agree"),
    );
    Ok(())
}

/// Orders covered by the constraint sweep.
pub fn sweep_orders(limit: u64) -> Vec<u64> {
    (1..=limit).filter(|&n| nt::is_squarefree(n) || is_curated(n)).collect()
}

#[derive(Default)]
struct SweepTally {
    groups: u64,
    /// Per lemma: groups where it applied, and the first violation.
    lemmas: BTreeMap<LemmaId, (u64, Option<String>)>,
    equality_case: Option<String>,
    containment: Option<String>,
}

impl SweepTally {
    fn merge(mut self, other: SweepTally) -> SweepTally {
        self.groups += other.groups;
        for (id, (n, f)) in other.lemmas {
            let e = self.lemmas.entry(id).or_default();
            e.0 += n;
            if e.1.is_none() {
                e.1 = f;
            }
        }
        self.equality_case = self.equality_case.or(other.equality_case);
        self.containment = self.containment.or(other.containment);
        self
    }
}

fn sweep_order(builder: Builder, n: u64) -> Result<SweepTally> {
    let mut store = CatalogStore::new(builder);
    let catalog = store.catalog(n)?;
    let mut tally = SweepTally::default();
    for entry in &catalog.entries {
        let inv = GroupInvariants::from_spectrum(entry.spectrum.clone())?;
        tally.groups += 1;
        for outcome in run_all(&inv) {
            let e = tally.lemmas.entry(outcome.lemma_id).or_default();
            if outcome.verdict != Verdict::NotApplicable {
                e.0 += 1;
            }
            if !outcome.passed() && e.1.is_none() {
                let witness = outcome.witness.map(|w| w.to_string()).unwrap_or_default();
                e.1 = Some(format!("{} (order {n}): {witness}", entry.label));
            }
        }
        let equality = check_order_bound(&inv).verdict == Verdict::HoldsWithEquality;
        if equality != entry.spectrum.only_prime_orders() && tally.equality_case.is_none() {
            tally.equality_case = Some(format!("{} (order {n})", entry.label));
        }
        if inv.primes().len() >= 2 && !check_prime_support(&inv).passed() && tally.containment.is_none() {
            tally.containment = Some(format!("{} (order {n})", entry.label));
        }
    }
    Ok(tally)
}

fn lemmas(checks: &mut Checks, opts: &VerifyOptions) -> Result<()> {
    let orders = sweep_orders(opts.sweep_limit);
    let builder = opts.builder;
    let tally =
        orders.par_iter().map(|&n| sweep_order(builder, n)).try_reduce(SweepTally::default, |a, b| Ok(a.merge(b)))?;
    let scope = format!("{} groups over {} orders <= {}", tally.groups, orders.len(), opts.sweep_limit);
    checks.record("catalog sweep", tally.groups > 0, scope.clone());
    for (id, (applied, failure)) in tally.lemmas {
        checks.outcome(id.as_str(), failure, format!("holds on all {applied} applicable groups"));
    }
    checks.outcome("order-bound equality iff all element orders prime", tally.equality_case, "holds");
    checks.outcome("primes of |G| divide some exponent", tally.containment, "holds");
    Ok(())
}

fn recognize(r: &mut Recognizer, target: &str) -> Result<RecognitionReport> {
    Ok(r.recognize(&target.parse::<ExpSet>()?, &RecognizeOptions::default())?)
}

/// Every witness rechecks, and every matched group rebuilds to the target.
fn audit(r: &mut Recognizer, report: &RecognitionReport) -> Result<()> {
    for b in &report.branches {
        ensure!(r.recheck(&report.target, b)?, "witness does not recheck on pi = {:?}, order {:?}", b.primes, b.order);
    }
    let builder = *r.store().builder();
    for g in report.matched() {
        let rho = rho_of_group(&builder.build(&g.spec)?)?;
        ensure!(rho.exp_set() == *report.target.values(), "{} does not realize the target", g.label);
    }
    Ok(())
}

fn labels(report: &RecognitionReport) -> String {
    report.matched_labels().join(", ")
}

fn recognition(checks: &mut Checks, opts: &VerifyOptions) -> Result<()> {
    let mut r = Recognizer::new(opts.builder);

    let report = recognize(&mut r, "{15,20,24}")?;
    audit(&mut r, &report)?;
    let complete = [30, 60].iter().all(|n| report.catalog_completeness.get(n) == Some(&Completeness::Complete));
    checks.record(
        "{15,20,24}",
        report.matched_labels() == ["C30", "PSL(2,5)"] && complete && report.candidate_orders() == [30, 60],
        format!("matched {} over complete catalogs of orders 30, 60", labels(&report)),
    );

    let report = recognize(&mut r, "{48,56,105}")?;
    audit(&mut r, &report)?;
    let branches = [[2, 3, 5].as_slice(), &[2, 5, 7], &[2, 3, 5, 7]];
    let eliminated: Vec<_> = branches
        .iter()
        .map(|pi| report.branch(pi, None).and_then(|b| b.eliminated_by()) == Some(LemmaId::CoprimePartDivides))
        .collect();
    checks.record(
        "{48,56,105}",
        report.matched_labels() == ["PSL(2,7)"] && eliminated.iter().all(|&e| e),
        format!("matched {}; pi = {{2,3,5}}, {{2,5,7}}, {{2,3,5,7}} eliminated: {eliminated:?}", labels(&report)),
    );

    for (target, named, order) in [("{120,165,220,264}", "PSL(2,11)", 660), ("{168,273,364,468}", "PSL(2,13)", 1092)] {
        let report = recognize(&mut r, target)?;
        audit(&mut r, &report)?;
        let big = report.branches.iter().find(|b| b.order == Some(order));
        let cited = big
            .is_some_and(|b| b.rests_on_citation() && b.catalog_completeness == Some(Completeness::PartialDocumented));
        checks.record(
            target,
            report.matched_labels().contains(&named) && cited,
            format!("matched {}; order {order} rests on citation: {cited}", labels(&report)),
        );
    }
    let report = recognize(&mut r, "{168,273,364,468}")?;
    let small = opts.builder.build(&"C14 x (C13 : C3 @ 3)".parse()?)?.fingerprint();
    checks.record(
        "{168,273,364,468} at order 546",
        report.matched().any(|g| g.order == 546 && g.fingerprint == small),
        "C14 x (C13 : C3 @ 3) realizes the set",
    );

    for p in [7, 11, 13] {
        family(checks, &mut r, Family::Psl25xZp { p })?;
    }
    let primes = nt::primes_up_to(250);
    let mut pairs = 0;
    for (i, &q) in primes.iter().enumerate().skip(1) {
        for &s in primes[i + 1..].iter().filter(|&&s| 2 * q * s <= 500) {
            family(checks, &mut r, Family::Z2qr { q, r: s })?;
            pairs += 1;
        }
    }
    let report = r.recognize_family(&Family::Z2qr { q: 3, r: 5 }, &RecognizeOptions::default())?;
    checks.record(
        "Z2qr(3,5) coincidence",
        report.matched_labels().contains(&"PSL(2,5)"),
        format!("{pairs} pairs checked; Z_30 shares its set with {}", labels(&report)),
    );
    Ok(())
}

fn family(checks: &mut Checks, r: &mut Recognizer, family: Family) -> Result<()> {
    let report = r.recognize_family(&family, &RecognizeOptions::default())?;
    audit(r, &report)?;
    let builder = *r.store().builder();
    let mut expected: Vec<_> =
        family.expected().iter().map(|s| Ok(builder.build(s)?.fingerprint())).collect::<Result<_>>()?;
    let mut matched: Vec<_> = report.matched().map(|g| g.fingerprint.clone()).collect();
    expected.sort();
    matched.sort();
    checks.record(family.to_string(), matched == expected, format!("matched {}", labels(&report)));
    Ok(())
}

fn non_characterizable(checks: &mut Checks, opts: &VerifyOptions) -> Result<()> {
    let b = &opts.builder;
    let a5 = prime_order_spectrum(&rho_psl2(5)?, 60).ok_or_else(|| anyhow!("PSL(2,5) spectrum"))?;
    for (n, p) in [(60u64, 2u64), (90, 3), (150, 5)] {
        let product = GroupSpec::Direct(vec![GroupSpec::Psl2(5), GroupSpec::Cyclic(p)]);
        let enumerated_cyclic = exp_rho(&rho_of_group(&b.cyclic(n)?)?);
        let enumerated_product = exp_rho(&rho_of_group(&b.build(&product)?)?);
        let closed_cyclic = exp_rho(&rho_cyclic(n)?);
        let closed_product = exp_rho(&rho_enumerative(&product_spectrum(&a5, &cyclic_spectrum(p)?)?)?);
        let all_equal = enumerated_cyclic == enumerated_product
            && closed_cyclic == closed_product
            && closed_cyclic == enumerated_cyclic;
        let set = ExpSet::new(closed_cyclic)?;
        checks.record(
            format!("Exp(Z{n}) = Exp(PSL(2,5) x Z{p})"),
            all_equal,
            format!("{set} by closed form and by enumeration"),
        );
    }
    Ok(())
}

/// Isomorphism classes among every `C_b : C_a @ k` with `b * a = n`.
pub fn brute_force_class_count(b: &Builder, n: u64) -> Result<usize> {
    let mut classes: HashMap<_, Vec<FiniteGroup>> = HashMap::new();
    for kernel in nt::divisors(n)? {
        let complement = n / kernel;
        let actions: Vec<u64> = if kernel == 1 {
            vec![0]
        } else {
            (1..kernel).filter(|&k| nt::gcd(k, kernel) == 1 && nt::pow_mod(k, complement, kernel) == 1).collect()
        };
        for k in actions {
            let g = b.semidirect_cyclic(kernel, complement, k)?;
            let bucket = classes.entry(g.fingerprint()).or_default();
            if !bucket.iter().any(|h| are_isomorphic(h, &g) == Some(true)) {
                bucket.push(g);
            }
        }
    }
    Ok(classes.values().map(Vec::len).sum())
}

fn catalog(checks: &mut Checks, opts: &VerifyOptions) -> Result<()> {
    let orders: Vec<u64> = (1..HOLDER_ORACLE_LIMIT).filter(|&n| nt::is_squarefree(n)).collect();
    let builder = opts.builder;
    let mismatches = orders
        .par_iter()
        .map(|&n| Ok((n, holder_parameters(n)?.len(), brute_force_class_count(&builder, n)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .find(|(_, h, bf)| h != bf);
    checks.outcome(
        format!("Hölder count vs brute force, squarefree n < {HOLDER_ORACLE_LIMIT}"),
        mismatches.map(|(n, h, bf)| format!("n = {n}: {h} parameters, {bf} classes")),
        format!("{} orders agree", orders.len()),
    );

    let mut store = CatalogStore::new(builder);
    let c60 = store.catalog(60)?;
    let groups: Vec<&FiniteGroup> = c60.entries.iter().map(|e| &e.group).collect();
    let mut clash = None;
    for (i, x) in groups.iter().enumerate() {
        for y in &groups[i + 1..] {
            if are_isomorphic(x, y) != Some(false) {
                clash.get_or_insert(format!("{} ~ {}", x.label(), y.label()));
            }
        }
    }
    if groups.len() != 13 {
        clash.get_or_insert(format!("{} groups", groups.len()));
    }
    checks.outcome(
        "order 60",
        clash,
        format!("13 pairwise non-isomorphic groups, catalog {}", c60.completeness.as_str()),
    );
    Ok(())
}
