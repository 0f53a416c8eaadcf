//! Divisibility, parity and bound constraints on the exponents of `rho(G)`.
//!
//! Each `check_*` evaluates one constraint on a concrete group and returns a
//! [`CheckOutcome`]; the `*_admits` predicates are the same constraints in
//! the form the recognizer uses to filter candidate exponents.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Result;
use crate::exp_set::ExpSet;
use crate::factored::{render_exponents, FactoredInt};
use crate::group::{FiniteGroup, OrderSpectrum};
use crate::nt;
use crate::rho::rho_enumerative;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaId {
    /// `m | |L_m(G)|` for `m | |G|`.
    Frobenius,
    /// `phi(m) | s_m` and `m | sum_{d|m} s_d`.
    RootCountDivisibility,
    /// `|G| <= 1 + sum of exponents`, equality iff all elements have prime order.
    OrderBound,
    /// `|pi(G)| >= |Exp_rho(G)|`.
    PiLowerBound,
    /// The `p'`-part of `|G|` divides `[rho(G)]_p`.
    CoprimePartDivides,
    /// `pi(G)` lies inside the primes dividing the exponents.
    PrimeSupport,
    /// `p - 1 | [rho(G)]_p`.
    PhiDivides,
    /// `p` does not divide `[rho(G)]_p` when `p || |G|`.
    PNotDivides,
    /// `[rho(G)]_2` odd, `[rho(G)]_p` even for odd `p`.
    Parity,
    /// Prime-power components congruent to 1; not used by the recognizer.
    Hall,
    /// Every target exponent must be realized by some prime.
    ExpCover,
    /// The supplied group order.
    KnownOrder,
    /// No group in a complete catalog has the target exponents.
    Catalog,
}

impl LemmaId {
    pub const ALL: [LemmaId; 13] = [
        LemmaId::Frobenius,
        LemmaId::RootCountDivisibility,
        LemmaId::OrderBound,
        LemmaId::PiLowerBound,
        LemmaId::CoprimePartDivides,
        LemmaId::PrimeSupport,
        LemmaId::PhiDivides,
        LemmaId::PNotDivides,
        LemmaId::Parity,
        LemmaId::Hall,
        LemmaId::ExpCover,
        LemmaId::KnownOrder,
        LemmaId::Catalog,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::Frobenius => "frobenius",
            LemmaId::RootCountDivisibility => "root-count-divisibility",
            LemmaId::OrderBound => "order-bound",
            LemmaId::PiLowerBound => "pi-lower-bound",
            LemmaId::CoprimePartDivides => "coprime-part-divides",
            LemmaId::PrimeSupport => "prime-support",
            LemmaId::PhiDivides => "phi-divides",
            LemmaId::PNotDivides => "p-not-divides",
            LemmaId::Parity => "parity",
            LemmaId::Hall => "hall",
            LemmaId::ExpCover => "exp-cover",
            LemmaId::KnownOrder => "known-order",
            LemmaId::Catalog => "catalog",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for LemmaId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Verdict {
    Holds,
    HoldsWithEquality,
    NotApplicable,
    Violated,
}

/// The data a failed check or an eliminated branch points at.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum Witness {
    /// `divisor` should divide `value` (or, for `p-not-divides`, should not).
    Divisibility {
        prime: Option<u64>,
        divisor: u64,
        value: u64,
    },
    /// `lhs <= rhs` fails.
    Bound {
        lhs: u64,
        rhs: u64,
    },
    /// Every candidate exponent for `prime` is rejected by the constraint
    /// with the given `parameter` (the divisor, or the prime itself).
    NoAdmissibleExponent {
        prime: u64,
        order: Option<u64>,
        parameter: u64,
        candidates: Vec<u64>,
    },
    /// Wrong number of odd exponents for whether 2 is among the primes.
    OddCount {
        odd_values: Vec<u64>,
        contains_two: bool,
    },
    /// No assignment of admissible exponents covers all target values.
    Uncovered {
        order: u64,
        admissible: Vec<(u64, Vec<u64>)>,
    },
    /// A prime of the group does not divide any exponent.
    Unsupported {
        prime: u64,
    },
    /// Catalog of `order` holds `checked` groups, none with a matching value.
    Catalog {
        order: u64,
        checked: u64,
    },
    /// The known order does not have this prime set.
    OrderMismatch {
        order: u64,
    },
    Note {
        text: String,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Divisibility { prime: Some(p), divisor, value } => {
                write!(f, "p={p}: divisor {divisor}, value {value}")
            }
            Witness::Divisibility { prime: None, divisor, value } => write!(f, "divisor {divisor}, value {value}"),
            Witness::Bound { lhs, rhs } => write!(f, "{lhs} > {rhs}"),
            Witness::NoAdmissibleExponent { prime, order, parameter, candidates } => {
                write!(f, "p={prime}")?;
                if let Some(n) = order {
                    write!(f, ", |G|={n}")?;
                }
                write!(f, ": parameter {parameter} rejects every value of {}", render_exponents(candidates))
            }
            Witness::OddCount { odd_values, contains_two } => write!(
                f,
                "odd values {} but 2 {} the prime set",
                render_exponents(odd_values),
                if *contains_two { "is in" } else { "is not in" }
            ),
            Witness::Uncovered { order, admissible } => {
                write!(f, "|G|={order}: no assignment covers the target from")?;
                for (p, vs) in admissible {
                    write!(f, " {p}:{}", render_exponents(vs))?;
                }
                Ok(())
            }
            Witness::Unsupported { prime } => write!(f, "{prime} divides no exponent"),
            Witness::Catalog { order, checked } => write!(f, "none of the {checked} groups of order {order} match"),
            Witness::OrderMismatch { order } => write!(f, "known order {order} has a different prime set"),
            Witness::Note { text } => f.write_str(text),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CheckOutcome {
    pub lemma_id: LemmaId,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl CheckOutcome {
    fn holds(lemma_id: LemmaId) -> Self {
        Self { lemma_id, verdict: Verdict::Holds, witness: None }
    }

    fn not_applicable(lemma_id: LemmaId) -> Self {
        Self { lemma_id, verdict: Verdict::NotApplicable, witness: None }
    }

    fn violated(lemma_id: LemmaId, witness: Witness) -> Self {
        Self { lemma_id, verdict: Verdict::Violated, witness: Some(witness) }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Violated
    }
}

/// Everything the checks read: order, spectrum and `rho`.
#[derive(Clone, Debug)]
pub struct GroupInvariants {
    pub order: u64,
    pub spectrum: OrderSpectrum,
    pub rho: FactoredInt,
}

impl GroupInvariants {
    pub fn from_spectrum(spectrum: OrderSpectrum) -> Result<Self> {
        let rho = rho_enumerative(&spectrum)?;
        Ok(Self { order: spectrum.group_order(), spectrum, rho })
    }

    pub fn of_group(g: &FiniteGroup) -> Result<Self> {
        Self::from_spectrum(g.order_spectrum())
    }

    /// `pi(G)`.
    pub fn primes(&self) -> Vec<u64> {
        nt::factorize(self.order).map(|f| f.into_iter().map(|(p, _)| p).collect()).unwrap_or_default()
    }

    fn order_factors(&self) -> Vec<(u64, u64)> {
        nt::factorize(self.order).unwrap_or_default()
    }

    fn exp(&self, p: u64) -> u64 {
        self.rho.exp_of(p).unwrap_or(0)
    }
}

fn first_violation<I, F>(lemma: LemmaId, items: I, mut bad: F) -> CheckOutcome
where
    I: IntoIterator<Item = u64>,
    F: FnMut(u64) -> Option<Witness>,
{
    items
        .into_iter()
        .find_map(&mut bad)
        .map_or_else(|| CheckOutcome::holds(lemma), |w| CheckOutcome::violated(lemma, w))
}

pub fn check_frobenius(inv: &GroupInvariants) -> CheckOutcome {
    let divisors = nt::divisors(inv.order).unwrap_or_default();
    first_violation(LemmaId::Frobenius, divisors, |m| {
        let roots = inv.spectrum.kth_roots(m);
        (roots % m != 0).then_some(Witness::Divisibility { prime: None, divisor: m, value: roots })
    })
}

pub fn check_root_count_divisibility(inv: &GroupInvariants) -> CheckOutcome {
    let divisors = nt::divisors(inv.order).unwrap_or_default();
    first_violation(LemmaId::RootCountDivisibility, divisors, |m| {
        let phi = nt::euler_phi(m).unwrap_or(1);
        let s = inv.spectrum.s(m);
        if s % phi != 0 {
            return Some(Witness::Divisibility { prime: None, divisor: phi, value: s });
        }
        let roots = inv.spectrum.kth_roots(m);
        (roots % m != 0).then_some(Witness::Divisibility { prime: None, divisor: m, value: roots })
    })
}

pub fn check_order_bound(inv: &GroupInvariants) -> CheckOutcome {
    let Ok(sum) = inv.rho.exponent_sum() else {
        return CheckOutcome::violated(LemmaId::OrderBound, Witness::Note { text: "exponent sum overflows".into() });
    };
    let bound = sum.saturating_add(1);
    if inv.order > bound {
        return CheckOutcome::violated(LemmaId::OrderBound, Witness::Bound { lhs: inv.order, rhs: bound });
    }
    let equality = inv.order == bound;
    if equality != inv.spectrum.only_prime_orders() {
        let note = if equality {
            "bound is attained but some element has composite order"
        } else {
            "all elements have prime order but the bound is strict"
        };
        return CheckOutcome::violated(LemmaId::OrderBound, Witness::Note { text: note.into() });
    }
    let verdict = if equality { Verdict::HoldsWithEquality } else { Verdict::Holds };
    CheckOutcome { lemma_id: LemmaId::OrderBound, verdict, witness: None }
}

pub fn check_pi_lower_bound(inv: &GroupInvariants) -> CheckOutcome {
    let primes = inv.primes().len() as u64;
    let exps = inv.rho.exp_set().len() as u64;
    if primes < exps {
        return CheckOutcome::violated(LemmaId::PiLowerBound, Witness::Bound { lhs: exps, rhs: primes });
    }
    let verdict = if primes == exps { Verdict::HoldsWithEquality } else { Verdict::Holds };
    CheckOutcome { lemma_id: LemmaId::PiLowerBound, verdict, witness: None }
}

pub fn check_coprime_part_divides(inv: &GroupInvariants) -> CheckOutcome {
    let factors = inv.order_factors();
    first_violation(LemmaId::CoprimePartDivides, factors.iter().map(|&(p, _)| p), |p| {
        let m = inv.order / p.pow(nt::valuation(inv.order, p) as u32);
        let value = inv.exp(p);
        (value % m != 0).then_some(Witness::Divisibility { prime: Some(p), divisor: m, value })
    })
}

pub fn check_phi_divides(inv: &GroupInvariants) -> CheckOutcome {
    first_violation(LemmaId::PhiDivides, inv.primes(), |p| {
        let value = inv.exp(p);
        (value % (p - 1) != 0).then_some(Witness::Divisibility { prime: Some(p), divisor: p - 1, value })
    })
}

pub fn check_p_not_divides(inv: &GroupInvariants) -> CheckOutcome {
    let simple: Vec<u64> = inv.order_factors().into_iter().filter(|&(_, e)| e == 1).map(|(p, _)| p).collect();
    if simple.is_empty() {
        return CheckOutcome::not_applicable(LemmaId::PNotDivides);
    }
    first_violation(LemmaId::PNotDivides, simple, |p| {
        let value = inv.exp(p);
        (value % p == 0).then_some(Witness::Divisibility { prime: Some(p), divisor: p, value })
    })
}

pub fn check_parity(inv: &GroupInvariants) -> CheckOutcome {
    first_violation(LemmaId::Parity, inv.primes(), |p| {
        let value = inv.exp(p);
        (!parity_admits(p, value)).then_some(Witness::Divisibility { prime: Some(p), divisor: 2, value })
    })
}

/// `pi(G)` inside the primes dividing `Exp_rho(G)`; only for non-p-groups.
pub fn check_prime_support(inv: &GroupInvariants) -> CheckOutcome {
    let primes = inv.primes();
    if primes.len() < 2 {
        return CheckOutcome::not_applicable(LemmaId::PrimeSupport);
    }
    let support = prime_support(inv.rho.exp_set().iter().copied());
    first_violation(LemmaId::PrimeSupport, primes, |p| {
        (!support.contains(&p)).then_some(Witness::Unsupported { prime: p })
    })
}

/// Every check that applies to a single group, in a fixed order.
pub fn run_all(inv: &GroupInvariants) -> Vec<CheckOutcome> {
    alloc::vec![
        check_frobenius(inv),
        check_root_count_divisibility(inv),
        check_order_bound(inv),
        check_pi_lower_bound(inv),
        check_coprime_part_divides(inv),
        check_prime_support(inv),
        check_phi_divides(inv),
        check_p_not_divides(inv),
        check_parity(inv),
    ]
}

/// Primes dividing at least one exponent.
pub fn prime_support_of_expset(set: &ExpSet) -> BTreeSet<u64> {
    prime_support(set.iter())
}

fn prime_support<I: IntoIterator<Item = u64>>(values: I) -> BTreeSet<u64> {
    values.into_iter().flat_map(|v| nt::factorize(v).unwrap_or_default().into_iter().map(|(p, _)| p)).collect()
}

/// Every prime-power component `q^a || n` satisfies `q^a = 1 (mod p)`.
pub fn check_hall_condition(n: u64, p: u64) -> bool {
    nt::prime_power_parts(n).map(|parts| parts.iter().all(|&q| q % p == 1 % p)).unwrap_or(false)
}

pub fn parity_admits(p: u64, value: u64) -> bool {
    (value % 2 == 1) == (p == 2)
}

pub fn phi_divides_admits(p: u64, value: u64) -> bool {
    value % (p - 1) == 0
}

pub fn p_not_divides_admits(p: u64, value: u64) -> bool {
    value % p != 0
}

pub fn coprime_part_admits(m: u64, value: u64) -> bool {
    value % m == 0
}

/// Whether `lemma`, with its `parameter`, accepts `value` as `[rho]_p`.
/// Only the exponent filters have this shape.
pub fn exponent_filter_admits(lemma: LemmaId, prime: u64, parameter: u64, value: u64) -> Option<bool> {
    match lemma {
        LemmaId::Parity => Some(parity_admits(prime, value)),
        LemmaId::PhiDivides => Some(value % parameter == 0),
        LemmaId::PNotDivides => Some(p_not_divides_admits(parameter, value)),
        LemmaId::CoprimePartDivides => Some(coprime_part_admits(parameter, value)),
        _ => None,
    }
}

/// Human-readable label for the admissibility constraint with its parameter.
pub fn describe_filter(lemma: LemmaId, prime: u64, parameter: u64) -> String {
    match lemma {
        LemmaId::Parity if prime == 2 => String::from("[rho]_2 must be odd"),
        LemmaId::Parity => format!("[rho]_{prime} must be even"),
        LemmaId::PhiDivides | LemmaId::CoprimePartDivides => format!("{parameter} must divide [rho]_{prime}"),
        LemmaId::PNotDivides => format!("{parameter} must not divide [rho]_{prime}"),
        other => format!("{other}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::Builder;

    fn inv(spec: &str) -> GroupInvariants {
        GroupInvariants::of_group(&Builder::default().build(&spec.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn order_bound_cases() {
        assert_eq!(check_order_bound(&inv("PSL(2,5)")).verdict, Verdict::HoldsWithEquality);
        assert_eq!(check_order_bound(&inv("C6")).verdict, Verdict::Holds);
        assert_eq!(check_order_bound(&inv("C1")).verdict, Verdict::HoldsWithEquality);
    }

    #[test]
    fn pi_lower_bound_cases() {
        assert_eq!(check_pi_lower_bound(&inv("PSL(2,7)")).verdict, Verdict::HoldsWithEquality);
        assert!(check_pi_lower_bound(&inv("PSL(2,11)")).passed());
        let z4 = inv("C4");
        assert_eq!(alloc::string::ToString::to_string(&z4.rho), "2^5");
        assert_eq!(check_pi_lower_bound(&z4).verdict, Verdict::HoldsWithEquality);
    }

    #[test]
    fn exponent_constraints_on_psl() {
        for spec in ["PSL(2,5)", "PSL(2,7)", "PSL(2,11)", "PSL(2,13)"] {
            let g = inv(spec);
            for outcome in run_all(&g) {
                assert!(outcome.passed(), "{spec}: {outcome:?}");
            }
        }
        let psl13 = inv("PSL(2,13)");
        assert_eq!(psl13.rho.exp_of(2).unwrap(), 273);
        assert_eq!(check_p_not_divides(&inv("C4")).verdict, Verdict::NotApplicable);
        assert_eq!(check_prime_support(&inv("C8")).verdict, Verdict::NotApplicable);
    }

    #[test]
    fn parity_on_small_groups() {
        assert!(check_parity(&inv("C2")).passed());
        let z15 = inv("C15");
        assert_eq!(z15.rho.exp_of(3).unwrap(), 10);
        assert_eq!(z15.rho.exp_of(5).unwrap(), 12);
        assert!(check_parity(&z15).passed());
    }

    #[test]
    fn violations_carry_witnesses() {
        let mut fake = inv("C6");
        fake.rho = "2^2*3^4".parse().unwrap();
        let outcome = check_parity(&fake);
        assert_eq!(outcome.verdict, Verdict::Violated);
        assert_eq!(outcome.witness, Some(Witness::Divisibility { prime: Some(2), divisor: 2, value: 2 }));
        let outcome = check_coprime_part_divides(&fake);
        assert_eq!(outcome.witness, Some(Witness::Divisibility { prime: Some(2), divisor: 3, value: 2 }));
    }

    #[test]
    fn expset_support() {
        let support = |s: &str| prime_support_of_expset(&s.parse().unwrap()).into_iter().collect::<Vec<_>>();
        assert_eq!(support("{15,20,24}"), [2, 3, 5]);
        assert_eq!(support("{48,56,105}"), [2, 3, 5, 7]);
        assert!(support("{1}").is_empty());
    }

    #[test]
    fn hall_condition() {
        assert!(check_hall_condition(1, 7));
        assert!(!check_hall_condition(6, 5));
        assert!(check_hall_condition(4, 3));
    }
}
