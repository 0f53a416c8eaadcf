//! Recognition from the exponent set of `rho(G)`.
//!
//! A target set `{a_1, ..., a_k}` is turned into candidate prime sets `pi`
//! (subsets of the primes dividing some `a_i`, of size at least `k`, plus
//! single primes when `k = 1`), candidate orders with prime set `pi` below
//! the additive bound, per-prime exponent assignments surviving the
//! divisibility and parity filters, and finally a comparison against the
//! catalog for each surviving order. Every pruning step records the
//! constraint and the data that triggered it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write as _};
use core::str::FromStr;

use crate::catalog::{CatalogStore, Completeness};
use crate::construct::{Builder, GroupSpec};
use crate::error::{Error, Result};
use crate::exp_set::ExpSet;
use crate::factored::{render_exponents, FactoredInt};
use crate::group::Fingerprint;
use crate::lemmas::{
    coprime_part_admits, exponent_filter_admits, phi_divides_admits, prime_support_of_expset, LemmaId, Witness,
};
use crate::nt;

pub const DEFAULT_MAX_ORDER: u64 = 5000;

/// Orders per prime set beyond which the search gives up on that set.
const ORDER_ENUMERATION_LIMIT: usize = 10_000;

const PARTIAL_CATALOG_NOTE: &str = "the catalog for this order is partial; uniqueness at this order rests on the \
     published recognition of these groups by the product of element orders";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecognizeOptions {
    pub known_order: Option<u64>,
    pub max_order: u64,
}

impl Default for RecognizeOptions {
    fn default() -> Self {
        Self { known_order: None, max_order: DEFAULT_MAX_ORDER }
    }
}

/// A catalog group whose exponent set equals the target.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MatchedGroup {
    pub label: String,
    pub spec: GroupSpec,
    pub order: u64,
    pub rho: FactoredInt,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub fingerprint: Fingerprint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "status", rename_all = "kebab-case"))]
pub enum BranchStatus {
    Eliminated {
        lemma_id: LemmaId,
        witness: Witness,
    },
    /// `citation` is set when the catalog is partial.
    Matched {
        groups: Vec<MatchedGroup>,
        citation: Option<String>,
    },
    Unresolved {
        citation: String,
    },
}

/// One prime set, and (unless eliminated at the prime-set level) one order.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Branch {
    pub primes: Vec<u64>,
    /// Orders with prime set `primes` under the additive bound.
    pub candidate_orders: Vec<u64>,
    /// `None` for a branch eliminated before any order was fixed.
    pub order: Option<u64>,
    /// Primes occurring to the first power in `order`.
    pub simple_primes: Vec<u64>,
    pub assignments: Vec<BTreeMap<u64, u64>>,
    pub catalog_completeness: Option<Completeness>,
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub status: BranchStatus,
}

impl Branch {
    pub fn is_matched(&self) -> bool {
        matches!(self.status, BranchStatus::Matched { .. })
    }

    pub fn is_eliminated(&self) -> bool {
        matches!(self.status, BranchStatus::Eliminated { .. })
    }

    pub fn is_unresolved(&self) -> bool {
        matches!(self.status, BranchStatus::Unresolved { .. })
    }

    /// Matched over a partial catalog, or unresolved: the conclusion at
    /// this order leans on the literature.
    pub fn rests_on_citation(&self) -> bool {
        matches!(self.status, BranchStatus::Matched { citation: Some(_), .. } | BranchStatus::Unresolved { .. })
    }

    pub fn eliminated_by(&self) -> Option<LemmaId> {
        match self.status {
            BranchStatus::Eliminated { lemma_id, .. } => Some(lemma_id),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Matched,
    OnlyUnresolved,
    AllEliminated,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Matched => 0,
            Outcome::OnlyUnresolved => 2,
            Outcome::AllEliminated => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RecognitionReport {
    pub target: ExpSet,
    pub family: Option<String>,
    pub known_order: Option<u64>,
    pub max_order: u64,
    pub support: Vec<u64>,
    pub branches: Vec<Branch>,
    pub catalog_completeness: BTreeMap<u64, Completeness>,
}

impl RecognitionReport {
    pub fn outcome(&self) -> Outcome {
        if self.branches.iter().any(Branch::is_matched) {
            Outcome::Matched
        } else if self.branches.iter().any(Branch::is_unresolved) {
            Outcome::OnlyUnresolved
        } else {
            Outcome::AllEliminated
        }
    }

    pub fn matched(&self) -> impl Iterator<Item = &MatchedGroup> {
        self.branches.iter().flat_map(|b| match &b.status {
            BranchStatus::Matched { groups, .. } => groups.as_slice(),
            _ => &[],
        })
    }

    pub fn matched_labels(&self) -> Vec<&str> {
        self.matched().map(|g| g.label.as_str()).collect()
    }

    /// Orders that survived to an order-level branch.
    pub fn candidate_orders(&self) -> Vec<u64> {
        let set: BTreeSet<u64> = self.branches.iter().filter_map(|b| b.order).collect();
        set.into_iter().collect()
    }

    pub fn branch(&self, primes: &[u64], order: Option<u64>) -> Option<&Branch> {
        self.branches.iter().find(|b| b.primes == primes && b.order == order)
    }

    /// Plain-text trace, one line per branch.
    pub fn render_trace(&self) -> String {
        let mut out = String::new();
        if let Some(f) = &self.family {
            let _ = writeln!(out, "family {f}");
        }
        let _ = writeln!(out, "target {}", self.target);
        let _ = writeln!(out, "support E = {}", render_exponents(&self.support));
        if let Some(n) = self.known_order {
            let _ = writeln!(out, "known order {n}");
        }
        if self.branches.is_empty() {
            let _ = writeln!(out, "no candidate prime set");
        }
        for b in &self.branches {
            let _ = write!(out, "pi = {}", render_exponents(&b.primes));
            match b.order {
                Some(n) => {
                    let _ = write!(out, ", |G| = {n}");
                }
                None if !b.candidate_orders.is_empty() => {
                    let _ = write!(out, ", orders {}", render_exponents(&b.candidate_orders));
                }
                None => {}
            }
            match &b.status {
                BranchStatus::Eliminated { lemma_id, witness } => {
                    let _ = writeln!(out, ": eliminated by {lemma_id} ({witness})");
                }
                BranchStatus::Matched { groups, citation } => {
                    let labels: Vec<&str> = groups.iter().map(|g| g.label.as_str()).collect();
                    let _ = write!(out, ": matched {}", labels.join(", "));
                    if let Some(a) = b.assignments.first() {
                        let _ = write!(out, " with {}", render_assignment(a));
                    }
                    if let Some(c) = citation {
                        let _ = write!(out, " [{c}]");
                    }
                    let _ = writeln!(out);
                }
                BranchStatus::Unresolved { citation } => {
                    let _ = writeln!(out, ": unresolved ({citation})");
                }
            }
        }
        let verdict = match self.outcome() {
            Outcome::Matched => "matched",
            Outcome::OnlyUnresolved => "unresolved",
            Outcome::AllEliminated => "all branches eliminated",
        };
        let _ = writeln!(out, "outcome: {verdict}");
        out
    }
}

fn render_assignment(a: &BTreeMap<u64, u64>) -> String {
    a.iter().map(|(p, v)| format!("[rho]_{p}={v}")).collect::<Vec<_>>().join(" ")
}

/// The two parametrized families with a recognition statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `PSL(2,5) x Z_p`, `p > 5` prime.
    Psl25xZp { p: u64 },
    /// `Z_{2qr}`, `q != r` odd primes.
    Z2qr { q: u64, r: u64 },
}

impl Family {
    pub const MAX_P: u64 = 31;
    pub const MAX_QR: u64 = 500;

    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Psl25xZp { p } => {
                if p <= 5 || !nt::is_prime(p) || p > Self::MAX_P {
                    return Err(Error::InvalidFamily(format!("p = {p} must be a prime with 5 < p <= {}", Self::MAX_P)));
                }
            }
            Family::Z2qr { q, r } => {
                let odd_prime = |x: u64| x > 2 && nt::is_prime(x);
                if !odd_prime(q) || !odd_prime(r) || q == r {
                    return Err(Error::InvalidFamily(format!("q = {q}, r = {r} must be distinct odd primes")));
                }
                if q.saturating_mul(r) > Self::MAX_QR {
                    return Err(Error::InvalidFamily(format!("qr = {} exceeds {}", q * r, Self::MAX_QR)));
                }
            }
        }
        Ok(())
    }

    /// `{15p, 20p, 24p, 60(p-1)}` or `{qr, 2r(q-1), 2q(r-1)}`.
    pub fn target(&self) -> Result<ExpSet> {
        self.validate()?;
        match *self {
            Family::Psl25xZp { p } => ExpSet::new([15 * p, 20 * p, 24 * p, 60 * (p - 1)]),
            Family::Z2qr { q, r } => ExpSet::new([q * r, 2 * r * (q - 1), 2 * q * (r - 1)]),
        }
    }

    /// The groups the recognition statement concludes with.
    pub fn expected(&self) -> Vec<GroupSpec> {
        match *self {
            Family::Psl25xZp { p } => {
                alloc::vec![GroupSpec::Direct(alloc::vec![GroupSpec::Psl2(5), GroupSpec::Cyclic(p)])]
            }
            Family::Z2qr { q, r } => {
                let mut out = alloc::vec![GroupSpec::Cyclic(2 * q * r)];
                if q.min(r) == 3 && q.max(r) == 5 {
                    out.insert(0, GroupSpec::Psl2(5));
                }
                out
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Psl25xZp { p } => write!(f, "PSL25xZp({p})"),
            Family::Z2qr { q, r } => write!(f, "Z2qr({q},{r})"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidFamily(format!("expected PSL25xZp(<p>) or Z2qr(<q>,<r>), found {s:?}"));
        let s = s.trim();
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let nums = args.split(',').map(|a| a.trim().parse::<u64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        let family = match (name.trim(), nums.as_slice()) {
            ("PSL25xZp", &[p]) => Family::Psl25xZp { p },
            ("Z2qr", &[q, r]) => Family::Z2qr { q, r },
            _ => return Err(bad()),
        };
        family.validate()?;
        Ok(family)
    }
}

type Admissible = BTreeMap<u64, Vec<u64>>;

/// Exponent filters applied per order, in order.
const ORDER_FILTERS: [LemmaId; 4] =
    [LemmaId::Parity, LemmaId::PNotDivides, LemmaId::PhiDivides, LemmaId::CoprimePartDivides];

fn filter_parameter(lemma: LemmaId, p: u64, order: u64) -> Option<u64> {
    let a = nt::valuation(order, p);
    match lemma {
        LemmaId::Parity => Some(p),
        LemmaId::PNotDivides => (a == 1).then_some(p),
        LemmaId::PhiDivides => Some(p - 1),
        LemmaId::CoprimePartDivides => Some(order / p.pow(a as u32)),
        _ => None,
    }
}

/// Candidate values for each `[rho]_p`, or the first filter that empties one.
fn admissible_exponents(target: &ExpSet, order: u64) -> core::result::Result<Admissible, (LemmaId, Witness)> {
    let primes: Vec<u64> = nt::factorize(order).unwrap_or_default().into_iter().map(|(p, _)| p).collect();
    let mut adm: Admissible = primes.iter().map(|&p| (p, target.iter().collect())).collect();
    for lemma in ORDER_FILTERS {
        for &p in &primes {
            let Some(parameter) = filter_parameter(lemma, p, order) else { continue };
            let values = adm.get_mut(&p).expect("prime of order");
            let before = values.clone();
            values.retain(|&v| exponent_filter_admits(lemma, p, parameter, v) == Some(true));
            if values.is_empty() {
                let witness =
                    Witness::NoAdmissibleExponent { prime: p, order: Some(order), parameter, candidates: before };
                return Err((lemma, witness));
            }
        }
    }
    Ok(adm)
}

/// Assignments drawing each `[rho]_p` from `adm[p]` that use every target value.
fn covering_assignments(target: &ExpSet, adm: &Admissible) -> Vec<BTreeMap<u64, u64>> {
    let primes: Vec<u64> = adm.keys().copied().collect();
    let mut out = Vec::new();
    let mut chosen: Vec<u64> = Vec::with_capacity(primes.len());
    fn walk(
        target: &ExpSet,
        adm: &Admissible,
        primes: &[u64],
        chosen: &mut Vec<u64>,
        out: &mut Vec<BTreeMap<u64, u64>>,
    ) {
        let depth = chosen.len();
        if depth == primes.len() {
            if target.iter().all(|v| chosen.contains(&v)) {
                out.push(primes.iter().copied().zip(chosen.iter().copied()).collect());
            }
            return;
        }
        // prune when the remaining primes cannot cover what is still missing
        let missing = target.iter().filter(|v| !chosen.contains(v)).count();
        if missing > primes.len() - depth {
            return;
        }
        for &v in &adm[&primes[depth]] {
            chosen.push(v);
            walk(target, adm, primes, chosen, out);
            chosen.pop();
        }
    }
    walk(target, adm, &primes, &mut chosen, &mut out);
    out
}

/// Exponent assignments `p -> [rho]_p` for an order of the given shape
/// (`p -> multiplicity in |G|`) consistent with the parity and divisibility
/// filters and covering the target. Values may repeat across primes.
pub fn assign_exponents(target: &ExpSet, order_shape: &BTreeMap<u64, u64>) -> Vec<BTreeMap<u64, u64>> {
    let Some(order) = order_shape.iter().try_fold(1u64, |acc, (&p, &a)| acc.checked_mul(p.checked_pow(a as u32)?))
    else {
        return Vec::new();
    };
    match admissible_exponents(target, order) {
        Ok(adm) => covering_assignments(target, &adm),
        Err(_) => Vec::new(),
    }
}

fn product(primes: &[u64]) -> Option<u64> {
    primes.iter().try_fold(1u64, |a, &p| a.checked_mul(p))
}

/// `1 + sum of the largest possible [rho]_p over |pi| primes`.
fn additive_bound(target: &ExpSet, pi_len: usize) -> Option<u64> {
    let extra = (pi_len.saturating_sub(target.len()) as u64).checked_mul(target.max())?;
    target.sum().ok()?.checked_add(extra)?.checked_add(1)
}

/// Orders with prime set exactly `primes` and at most `bound`.
fn orders_with_primes(primes: &[u64], bound: u64) -> Option<Vec<u64>> {
    let mut out = Vec::new();
    fn walk(primes: &[u64], acc: u64, bound: u64, out: &mut Vec<u64>) -> bool {
        let Some((&p, rest)) = primes.split_first() else {
            out.push(acc);
            return out.len() <= ORDER_ENUMERATION_LIMIT;
        };
        let mut x = match acc.checked_mul(p) {
            Some(x) if x <= bound => x,
            _ => return true,
        };
        loop {
            if !walk(rest, x, bound, out) {
                return false;
            }
            x = match x.checked_mul(p) {
                Some(y) if y <= bound => y,
                _ => return true,
            };
        }
    }
    // a prime set whose product already exceeds the bound yields no orders
    walk(primes, 1, bound, &mut out).then(|| {
        out.sort_unstable();
        out
    })
}

/// Prime-set level constraints, in order.
fn check_prime_set(target: &ExpSet, pi: &[u64]) -> core::result::Result<(), (LemmaId, Witness)> {
    for &p in pi.iter().rev() {
        let m = pi.iter().filter(|&&q| q != p).product::<u64>();
        if !target.iter().any(|v| coprime_part_admits(m, v)) {
            let candidates = target.iter().collect();
            return Err((
                LemmaId::CoprimePartDivides,
                Witness::NoAdmissibleExponent { prime: p, order: None, parameter: m, candidates },
            ));
        }
    }
    let odd_values: Vec<u64> = target.iter().filter(|v| v % 2 == 1).collect();
    let contains_two = pi.contains(&2);
    if odd_values.len() != usize::from(contains_two) {
        return Err((LemmaId::Parity, Witness::OddCount { odd_values, contains_two }));
    }
    for &p in pi {
        if !target.iter().any(|v| phi_divides_admits(p, v)) {
            let candidates = target.iter().collect();
            return Err((
                LemmaId::PhiDivides,
                Witness::NoAdmissibleExponent { prime: p, order: None, parameter: p - 1, candidates },
            ));
        }
    }
    let lhs = product(pi).unwrap_or(u64::MAX);
    let rhs = additive_bound(target, pi.len()).unwrap_or(u64::MAX);
    if lhs > rhs {
        return Err((LemmaId::OrderBound, Witness::Bound { lhs, rhs }));
    }
    Ok(())
}

/// Subsets of `support` of size at least `min_len` whose product is at most `bound`.
fn prime_sets(support: &[u64], min_len: usize, bound: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn walk(
        support: &[u64],
        start: usize,
        acc: u64,
        min_len: usize,
        bound: u64,
        current: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if current.len() >= min_len {
            out.push(current.clone());
        }
        for i in start..support.len() {
            // keep sets that are too large too, so the bound shows up as an elimination
            let next = acc.saturating_mul(support[i]);
            if next > bound && current.len() + 1 > min_len {
                continue;
            }
            current.push(support[i]);
            walk(support, i + 1, next, min_len, bound, current, out);
            current.pop();
        }
    }
    walk(support, 0, 1, min_len, bound, &mut current, &mut out);
    out
}

pub struct Recognizer {
    store: CatalogStore,
}

impl Recognizer {
    pub fn new(builder: Builder) -> Self {
        Self { store: CatalogStore::new(builder) }
    }

    pub fn with_store(store: CatalogStore) -> Self {
        Self { store }
    }

    pub fn store(&mut self) -> &mut CatalogStore {
        &mut self.store
    }

    pub fn recognize(&mut self, target: &ExpSet, opts: &RecognizeOptions) -> Result<RecognitionReport> {
        let support: Vec<u64> = prime_support_of_expset(target).into_iter().collect();
        let k = target.len();
        let mut report = RecognitionReport {
            target: target.clone(),
            family: None,
            known_order: opts.known_order,
            max_order: opts.max_order,
            support: support.clone(),
            branches: Vec::new(),
            catalog_completeness: BTreeMap::new(),
        };

        let prime_sets: Vec<Vec<u64>> = match opts.known_order {
            Some(n) => {
                let pi: Vec<u64> = nt::factorize(n)?.into_iter().map(|(p, _)| p).collect();
                if let Some(status) = known_order_gate(target, &support, &pi) {
                    report.branches.push(pi_branch(pi, Vec::new(), status));
                    return Ok(report);
                }
                alloc::vec![pi]
            }
            None => {
                let bound = additive_bound(target, support.len()).unwrap_or(u64::MAX);
                let mut sets = prime_sets(&support, k.max(2), bound);
                if k == 1 {
                    let alpha = target.max();
                    let p_groups = nt::divisors(alpha)?.into_iter().map(|d| d + 1).filter(|&p| nt::is_prime(p));
                    sets.extend(p_groups.map(|p| alloc::vec![p]));
                }
                sets
            }
        };

        for pi in prime_sets {
            if let Err((lemma_id, witness)) = check_prime_set(target, &pi) {
                report.branches.push(pi_branch(pi, Vec::new(), BranchStatus::Eliminated { lemma_id, witness }));
                continue;
            }
            let bound = additive_bound(target, pi.len()).unwrap_or(u64::MAX);
            let Some(mut orders) = orders_with_primes(&pi, bound) else {
                let citation = format!("more than {ORDER_ENUMERATION_LIMIT} candidate orders; search abandoned");
                report.branches.push(pi_branch(pi, Vec::new(), BranchStatus::Unresolved { citation }));
                continue;
            };
            if let Some(n) = opts.known_order {
                if !orders.contains(&n) {
                    let witness = Witness::Bound { lhs: n, rhs: bound };
                    report.branches.push(pi_branch(
                        pi,
                        orders,
                        BranchStatus::Eliminated { lemma_id: LemmaId::OrderBound, witness },
                    ));
                    continue;
                }
                orders = alloc::vec![n];
            }
            for &n in &orders {
                let branch = self.order_branch(target, &pi, &orders, n, opts, &mut report.catalog_completeness);
                report.branches.push(branch);
            }
        }
        report.branches.sort_by(|a, b| (a.primes.len(), &a.primes, a.order).cmp(&(b.primes.len(), &b.primes, b.order)));
        Ok(report)
    }

    pub fn recognize_family(&mut self, family: &Family, opts: &RecognizeOptions) -> Result<RecognitionReport> {
        let target = family.target()?;
        let mut report = self.recognize(&target, opts)?;
        report.family = Some(family.to_string());
        Ok(report)
    }

    fn order_branch(
        &mut self,
        target: &ExpSet,
        pi: &[u64],
        orders: &[u64],
        n: u64,
        opts: &RecognizeOptions,
        completeness: &mut BTreeMap<u64, Completeness>,
    ) -> Branch {
        let simple_primes =
            nt::factorize(n).unwrap_or_default().into_iter().filter(|&(_, e)| e == 1).map(|(p, _)| p).collect();
        let mut branch = Branch {
            primes: pi.to_vec(),
            candidate_orders: orders.to_vec(),
            order: Some(n),
            simple_primes,
            assignments: Vec::new(),
            catalog_completeness: None,
            status: BranchStatus::Unresolved { citation: String::new() },
        };
        let adm = match admissible_exponents(target, n) {
            Ok(adm) => adm,
            Err((lemma_id, witness)) => {
                branch.status = BranchStatus::Eliminated { lemma_id, witness };
                return branch;
            }
        };
        let covering = covering_assignments(target, &adm);
        if covering.is_empty() {
            let witness = Witness::Uncovered { order: n, admissible: adm.into_iter().collect() };
            branch.status = BranchStatus::Eliminated { lemma_id: LemmaId::ExpCover, witness };
            return branch;
        }
        let best = covering.iter().map(|a| a.values().sum::<u64>()).max().unwrap_or(0).saturating_add(1);
        branch.assignments = covering.into_iter().filter(|a| a.values().sum::<u64>().saturating_add(1) >= n).collect();
        if branch.assignments.is_empty() {
            branch.status = BranchStatus::Eliminated {
                lemma_id: LemmaId::OrderBound,
                witness: Witness::Bound { lhs: n, rhs: best },
            };
            return branch;
        }
        if n > opts.max_order {
            branch.status =
                BranchStatus::Unresolved { citation: format!("order {n} exceeds the search limit {}", opts.max_order) };
            return branch;
        }
        if !CatalogStore::covers(n) {
            branch.status = BranchStatus::Unresolved { citation: format!("no catalog covers order {n}") };
            return branch;
        }
        let catalog = match self.store.catalog(n) {
            Ok(c) => c,
            Err(e) => {
                branch.status =
                    BranchStatus::Unresolved { citation: format!("catalog for order {n} unavailable: {e}") };
                return branch;
            }
        };
        completeness.insert(n, catalog.completeness);
        branch.catalog_completeness = Some(catalog.completeness);
        let groups: Vec<MatchedGroup> = catalog
            .entries
            .iter()
            .filter(|e| {
                e.rho.exp_set() == *target.values()
                    && branch.assignments.iter().any(|a| a.iter().all(|(&p, &v)| e.rho.exp_of(p) == Ok(v)))
            })
            .map(|e| MatchedGroup {
                label: e.label.clone(),
                spec: e.spec.clone(),
                order: n,
                rho: e.rho.clone(),
                fingerprint: e.fingerprint.clone(),
            })
            .collect();
        let partial = catalog.completeness == Completeness::PartialDocumented;
        branch.status = match (groups.is_empty(), partial) {
            (false, _) => BranchStatus::Matched { groups, citation: partial.then(|| PARTIAL_CATALOG_NOTE.to_string()) },
            (true, false) => BranchStatus::Eliminated {
                lemma_id: LemmaId::Catalog,
                witness: Witness::Catalog { order: n, checked: catalog.entries.len() as u64 },
            },
            (true, true) => BranchStatus::Unresolved { citation: PARTIAL_CATALOG_NOTE.to_string() },
        };
        branch
    }

    /// Re-evaluates the constraint named by an eliminated branch on its
    /// witness. `Ok(false)` means the witness does not reproduce the
    /// contradiction; non-eliminated branches yield `Ok(true)`.
    pub fn recheck(&mut self, target: &ExpSet, branch: &Branch) -> Result<bool> {
        let BranchStatus::Eliminated { lemma_id, witness } = &branch.status else {
            return Ok(true);
        };
        let pi = &branch.primes;
        let ok = match (lemma_id, witness) {
            (
                LemmaId::Parity | LemmaId::PNotDivides | LemmaId::PhiDivides | LemmaId::CoprimePartDivides,
                Witness::NoAdmissibleExponent { prime, order, parameter, candidates },
            ) => {
                let p = *prime;
                let all_rejected = !candidates.is_empty()
                    && candidates.iter().all(|&v| exponent_filter_admits(*lemma_id, p, *parameter, v) == Some(false));
                let consistent = match order {
                    None => {
                        let expected = match lemma_id {
                            LemmaId::CoprimePartDivides => pi.iter().filter(|&&q| q != p).product::<u64>(),
                            _ => p - 1,
                        };
                        *parameter == expected && candidates.iter().copied().eq(target.iter())
                    }
                    Some(n) => {
                        filter_parameter(*lemma_id, p, *n) == Some(*parameter)
                            && candidates.iter().all(|&v| target.contains(v))
                            && target
                                .iter()
                                .filter(|v| !candidates.contains(v))
                                .all(|v| rejected_earlier(*lemma_id, p, *n, v))
                    }
                };
                pi.contains(&p) && all_rejected && consistent
            }
            (LemmaId::Parity, Witness::OddCount { odd_values, contains_two }) => {
                let odd: Vec<u64> = target.iter().filter(|v| v % 2 == 1).collect();
                odd == *odd_values && *contains_two == pi.contains(&2) && odd.len() != usize::from(*contains_two)
            }
            (LemmaId::OrderBound, Witness::Bound { lhs, rhs }) => {
                let expected = match branch.order {
                    None if branch.candidate_orders.is_empty() => {
                        Some((product(pi).unwrap_or(u64::MAX), additive_bound(target, pi.len()).unwrap_or(u64::MAX)))
                    }
                    None => None,
                    Some(n) => admissible_exponents(target, n).ok().map(|adm| {
                        let best = covering_assignments(target, &adm).iter().map(|a| a.values().sum::<u64>()).max();
                        (n, best.unwrap_or(0).saturating_add(1))
                    }),
                };
                lhs > rhs && expected.is_none_or(|e| e == (*lhs, *rhs))
            }
            (LemmaId::ExpCover, Witness::Uncovered { order, admissible }) => {
                let adm: Admissible = admissible.iter().cloned().collect();
                admissible_exponents(target, *order).ok() == Some(adm.clone())
                    && covering_assignments(target, &adm).is_empty()
            }
            (LemmaId::Catalog, Witness::Catalog { order, checked }) => {
                let catalog = self.store.catalog(*order)?;
                catalog.completeness == Completeness::Complete
                    && catalog.entries.len() as u64 == *checked
                    && catalog.entries.iter().all(|e| e.rho.exp_set() != *target.values())
            }
            (LemmaId::PrimeSupport, Witness::Unsupported { prime }) => {
                !prime_support_of_expset(target).contains(prime) && pi.contains(prime)
            }
            (LemmaId::PiLowerBound, Witness::Bound { lhs, rhs }) => {
                *lhs == target.len() as u64 && *rhs == pi.len() as u64 && lhs > rhs
            }
            (LemmaId::KnownOrder, Witness::OrderMismatch { order }) => {
                nt::factorize(*order)?.into_iter().map(|(p, _)| p).collect::<Vec<_>>() != *pi
            }
            _ => false,
        };
        Ok(ok)
    }
}

/// Whether `value` is dropped for prime `p` by a filter that runs before `lemma`.
fn rejected_earlier(lemma: LemmaId, p: u64, order: u64, value: u64) -> bool {
    ORDER_FILTERS.iter().take_while(|&&l| l != lemma).any(|&l| {
        filter_parameter(l, p, order).is_some_and(|param| exponent_filter_admits(l, p, param, value) == Some(false))
    })
}

/// Structural checks on a user-supplied order before any search.
fn known_order_gate(target: &ExpSet, support: &[u64], pi: &[u64]) -> Option<BranchStatus> {
    if pi.len() < target.len() {
        let witness = Witness::Bound { lhs: target.len() as u64, rhs: pi.len() as u64 };
        return Some(BranchStatus::Eliminated { lemma_id: LemmaId::PiLowerBound, witness });
    }
    if pi.len() >= 2 {
        if let Some(&prime) = pi.iter().find(|p| !support.contains(p)) {
            return Some(BranchStatus::Eliminated {
                lemma_id: LemmaId::PrimeSupport,
                witness: Witness::Unsupported { prime },
            });
        }
    }
    None
}

fn pi_branch(primes: Vec<u64>, candidate_orders: Vec<u64>, status: BranchStatus) -> Branch {
    Branch {
        primes,
        candidate_orders,
        order: None,
        simple_primes: Vec::new(),
        assignments: Vec::new(),
        catalog_completeness: None,
        status,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> ExpSet {
        s.parse().unwrap()
    }

    fn shape(pairs: &[(u64, u64)]) -> BTreeMap<u64, u64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn assignments_match_known_cases() {
        let a = assign_exponents(&set("{15,20,24}"), &shape(&[(2, 1), (3, 1), (5, 1)]));
        assert_eq!(a, [shape(&[(2, 15), (3, 20), (5, 24)])]);
        let a = assign_exponents(&set("{168,273,364,468}"), &shape(&[(2, 2), (3, 1), (7, 1), (13, 1)]));
        assert_eq!(a, [shape(&[(2, 273), (3, 364), (7, 468), (13, 168)])]);
        let a = assign_exponents(&set("{21,28,36}"), &shape(&[(2, 1), (3, 1), (7, 1)]));
        assert_eq!(a, [shape(&[(2, 21), (3, 28), (7, 36)])]);
    }

    #[test]
    fn orders_under_bound() {
        assert_eq!(orders_with_primes(&[2, 3, 5], 60).unwrap(), [30, 60]);
        assert_eq!(orders_with_primes(&[2, 3, 7], 210).unwrap(), [42, 84, 126, 168]);
        assert!(orders_with_primes(&[2, 3, 5, 7], 100).unwrap().is_empty());
    }

    #[test]
    fn psl25_and_z30() {
        let mut r = Recognizer::new(Builder::default());
        let report = r.recognize(&set("{15,20,24}"), &RecognizeOptions::default()).unwrap();
        assert_eq!(report.matched_labels(), ["C30", "PSL(2,5)"]);
        assert_eq!(report.candidate_orders(), [30, 60]);
        assert_eq!(report.outcome(), Outcome::Matched);
        for b in &report.branches {
            assert!(r.recheck(&report.target, b).unwrap(), "{b:?}");
        }
    }

    #[test]
    fn psl27_branches() {
        let mut r = Recognizer::new(Builder::default());
        let target = set("{48,56,105}");
        let report = r.recognize(&target, &RecognizeOptions::default()).unwrap();
        assert_eq!(report.matched_labels(), ["PSL(2,7)"]);
        for (pi, divisor) in [(&[2, 3, 5][..], 10), (&[2, 5, 7][..], 10), (&[2, 3, 5, 7][..], 30)] {
            let b = report.branch(pi, None).unwrap();
            assert_eq!(b.eliminated_by(), Some(LemmaId::CoprimePartDivides));
            let BranchStatus::Eliminated { witness: Witness::NoAdmissibleExponent { parameter, .. }, .. } = &b.status
            else {
                panic!("{b:?}")
            };
            assert_eq!(*parameter, divisor);
            assert!(r.recheck(&target, b).unwrap());
        }
        assert_eq!(report.branch(&[3, 5, 7], None).unwrap().eliminated_by(), Some(LemmaId::Parity));
    }

    #[test]
    fn trivial_exponent_set() {
        let mut r = Recognizer::new(Builder::default());
        let report = r.recognize(&set("{1}"), &RecognizeOptions::default()).unwrap();
        assert_eq!(report.matched_labels(), ["C2"]);
    }

    #[test]
    fn known_order_restricts() {
        let mut r = Recognizer::new(Builder::default());
        let opts = RecognizeOptions { known_order: Some(60), ..Default::default() };
        let report = r.recognize(&set("{15,20,24}"), &opts).unwrap();
        assert_eq!(report.matched_labels(), ["PSL(2,5)"]);
        let opts = RecognizeOptions { known_order: Some(14), ..Default::default() };
        let report = r.recognize(&set("{15,20,24}"), &opts).unwrap();
        assert_eq!(report.outcome(), Outcome::AllEliminated);
    }

    #[test]
    fn tampered_witness_fails_recheck() {
        let mut r = Recognizer::new(Builder::default());
        let target = set("{48,56,105}");
        let report = r.recognize(&target, &RecognizeOptions::default()).unwrap();
        let mut b = report.branch(&[2, 3, 5], None).unwrap().clone();
        b.status = BranchStatus::Eliminated {
            lemma_id: LemmaId::CoprimePartDivides,
            witness: Witness::NoAdmissibleExponent {
                prime: 3,
                order: None,
                parameter: 8,
                candidates: target.iter().collect(),
            },
        };
        assert!(!r.recheck(&target, &b).unwrap());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("PSL25xZp(7)".parse::<Family>().unwrap(), Family::Psl25xZp { p: 7 });
        assert_eq!("Z2qr(3, 5)".parse::<Family>().unwrap(), Family::Z2qr { q: 3, r: 5 });
        assert!("PSL25xZp(5)".parse::<Family>().is_err());
        assert!("Z2qr(3,3)".parse::<Family>().is_err());
        assert_eq!(Family::Z2qr { q: 3, r: 5 }.target().unwrap(), set("{15,20,24}"));
    }
}
