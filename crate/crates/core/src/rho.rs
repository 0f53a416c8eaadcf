//! `rho(G)` by enumeration and by closed forms.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::construct::GroupSpec;
use crate::error::{Error, Result};
use crate::factored::FactoredInt;
use crate::group::{FiniteGroup, OrderSpectrum};
use crate::nt;

/// `prod_t t^{s_t}` over the spectrum.
pub fn rho_enumerative(spectrum: &OrderSpectrum) -> Result<FactoredInt> {
    spectrum
        .iter()
        .try_fold(FactoredInt::one(), |acc, (t, s)| acc.checked_mul(&FactoredInt::factor(t)?.checked_pow(s)?))
}

pub fn rho_of_group(g: &FiniteGroup) -> Result<FactoredInt> {
    rho_enumerative(&g.order_spectrum())
}

/// `prod_{d | n} d^{phi(d)}`.
pub fn rho_cyclic(n: u64) -> Result<FactoredInt> {
    nt::divisors(n)?.into_iter().try_fold(FactoredInt::one(), |acc, d| {
        acc.checked_mul(&FactoredInt::factor(d)?.checked_pow(nt::euler_phi(d)?)?)
    })
}

/// `prod_i rho_i^{n_i}` with `n_i` the product of the other orders.
/// Orders must be pairwise coprime.
pub fn rho_direct_product(parts: &[(FactoredInt, u64)]) -> Result<FactoredInt> {
    for (i, (_, a)) in parts.iter().enumerate() {
        if *a == 0 {
            return Err(Error::Zero);
        }
        for (_, b) in &parts[i + 1..] {
            if nt::gcd(*a, *b) != 1 {
                return Err(Error::NotCoprime(*a, *b));
            }
        }
    }
    let mut acc = FactoredInt::one();
    for (i, (rho, _)) in parts.iter().enumerate() {
        let others = parts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .try_fold(1u64, |m, (_, (_, o))| m.checked_mul(*o))
            .ok_or(Error::ExponentOverflow)?;
        acc = acc.checked_mul(&rho.checked_pow(others)?)?;
    }
    Ok(acc)
}

/// `rho(P)^{|C_F(P)|} * rho(F)^{|P|}` for `G = P : F`, `P` a cyclic
/// `p`-group and `p` coprime to `|F|`.
pub fn rho_semidirect(rho_p: &FactoredInt, order_p: u64, rho_f: &FactoredInt, centralizer: u64) -> Result<FactoredInt> {
    rho_p.checked_pow(centralizer)?.checked_mul(&rho_f.checked_pow(order_p)?)
}

/// Closed form for PSL(2,q), q an odd prime at least 5.
pub fn rho_psl2(q: u64) -> Result<FactoredInt> {
    if q < 5 || !nt::is_prime(q) {
        return Err(Error::InvalidSpec(alloc::format!("PSL(2,{q}) closed form needs an odd prime q >= 5")));
    }
    let split = rho_cyclic((q - 1) / 2)?.checked_pow(q * (q + 1) / 2)?;
    let nonsplit = rho_cyclic((q + 1) / 2)?.checked_pow(q * (q - 1) / 2)?;
    let unipotent = FactoredInt::prime_power(q, (q + 1) * (q - 1))?;
    split.checked_mul(&nonsplit)?.checked_mul(&unipotent)
}

/// Spectrum of `Z_n`: `s_d = phi(d)` for `d | n`.
pub fn cyclic_spectrum(n: u64) -> Result<OrderSpectrum> {
    let counts = nt::divisors(n)?.into_iter().map(|d| Ok((d, nt::euler_phi(d)?))).collect::<Result<_>>()?;
    OrderSpectrum::new(counts)
}

/// Spectrum of `A x B`: `(a, b)` has order `lcm(o(a), o(b))`.
pub fn product_spectrum(a: &OrderSpectrum, b: &OrderSpectrum) -> Result<OrderSpectrum> {
    let mut counts = BTreeMap::new();
    for (s, x) in a.iter() {
        for (t, y) in b.iter() {
            let c = x.checked_mul(y).ok_or(Error::ValueOverflow)?;
            *counts.entry(nt::lcm(s, t)).or_insert(0u64) += c;
        }
    }
    OrderSpectrum::new(counts)
}

/// Recovers the spectrum of a group of the given order from `rho` when the
/// order bound is attained, i.e. when every nonidentity element has prime
/// order and `s_p = [rho]_p`.
pub fn prime_order_spectrum(rho: &FactoredInt, order: u64) -> Option<OrderSpectrum> {
    if rho.exponent_sum().ok()?.checked_add(1)? != order {
        return None;
    }
    let counts = core::iter::once((1, 1)).chain(rho.iter()).collect();
    OrderSpectrum::new(counts).ok()
}

/// `Exp(rho)`; empty when `rho = 1`.
pub fn exp_rho(rho: &FactoredInt) -> BTreeSet<u64> {
    rho.exp_set()
}

/// Which closed form produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    Cyclic,
    Psl2,
    DirectProduct,
    Semidirect,
}

impl ClosedForm {
    pub fn as_str(self) -> &'static str {
        match self {
            ClosedForm::Cyclic => "cyclic",
            ClosedForm::Psl2 => "psl2",
            ClosedForm::DirectProduct => "coprime-direct-product",
            ClosedForm::Semidirect => "cyclic-p-group-semidirect",
        }
    }
}

/// Evaluates `rho` for a spec without enumerating it, when some closed
/// form applies. `None` means no formula covers the spec.
pub fn closed_form(spec: &GroupSpec) -> Option<Result<(FactoredInt, ClosedForm)>> {
    match *spec {
        GroupSpec::Cyclic(n) if n >= 1 => Some(rho_cyclic(n).map(|r| (r, ClosedForm::Cyclic))),
        GroupSpec::Psl2(q) if q >= 5 && nt::is_prime(q) => Some(rho_psl2(q).map(|r| (r, ClosedForm::Psl2))),
        GroupSpec::Dihedral(o) if o >= 2 && o % 2 == 0 => {
            let n = o / 2;
            closed_form(&GroupSpec::SemidirectCyclic { n, m: 2, k: if n == 1 { 0 } else { n - 1 } })
        }
        GroupSpec::SemidirectCyclic { n, m, k } => semidirect_closed_form(n, m, k),
        GroupSpec::Direct(ref parts) => {
            let mut evaluated = Vec::with_capacity(parts.len());
            for part in parts {
                let rho = match closed_form(part)? {
                    Ok((rho, _)) => rho,
                    Err(e) => return Some(Err(e)),
                };
                evaluated.push((rho, part.predicted_order()?));
            }
            if evaluated.len() == 1 {
                return Some(Ok((evaluated.pop()?.0, ClosedForm::DirectProduct)));
            }
            let coprime = evaluated
                .iter()
                .enumerate()
                .all(|(i, (_, a))| evaluated[i + 1..].iter().all(|(_, b)| nt::gcd(*a, *b) == 1));
            coprime.then(|| rho_direct_product(&evaluated).map(|r| (r, ClosedForm::DirectProduct)))
        }
        _ => None,
    }
}

fn semidirect_closed_form(n: u64, m: u64, k: u64) -> Option<Result<(FactoredInt, ClosedForm)>> {
    if spec_invalid(n, m, k) {
        return None;
    }
    if m == 1 {
        return Some(rho_cyclic(n).map(|r| (r, ClosedForm::Cyclic)));
    }
    if n == 1 {
        return Some(rho_cyclic(m).map(|r| (r, ClosedForm::Cyclic)));
    }
    let parts = nt::factorize(n).ok()?;
    let [(p, _)] = parts[..] else { return None };
    if m % p == 0 {
        return None;
    }
    // the complement element y centralizes the kernel iff k^y = 1 mod n
    let centralizer = m / nt::multiplicative_order(k % n, n)?;
    let value = (|| rho_semidirect(&rho_cyclic(n)?, n, &rho_cyclic(m)?, centralizer))();
    Some(value.map(|r| (r, ClosedForm::Semidirect)))
}

fn spec_invalid(n: u64, m: u64, k: u64) -> bool {
    GroupSpec::SemidirectCyclic { n, m, k }.validate().is_err()
}
