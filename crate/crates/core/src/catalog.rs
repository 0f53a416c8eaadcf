//! Catalogs of groups of a fixed order.
//!
//! Squarefree orders are covered completely by the metacyclic groups
//! `C_b : C_a`. Other orders come from a curated table: small bases (orders
//! 4, 8 and `p^2`), extensions `C_p : H` of the groups `H` of order `N / p`
//! by the largest prime `p || N`, and a few special groups (A4, S4, SL(2,3),
//! `C2 x A4`, PSL(2,q)). A curated catalog is flagged complete only when its
//! size matches the known number of isomorphism classes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::construct::{paren, Builder, GroupSpec};
use crate::error::{Error, Result};
use crate::factored::FactoredInt;
use crate::group::{Fingerprint, FiniteGroup, OrderSpectrum};
use crate::iso::{tables_isomorphic, Table, EXACT_ISO_LIMIT};
use crate::nt;
use crate::rho::rho_enumerative;

/// Largest squarefree order the metacyclic enumeration accepts.
pub const HOLDER_LIMIT: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Completeness {
    Complete,
    PartialDocumented,
}

impl Completeness {
    pub fn as_str(self) -> &'static str {
        match self {
            Completeness::Complete => "complete",
            Completeness::PartialDocumented => "partial-documented",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogSource {
    Squarefree,
    Curated,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub label: String,
    /// Rebuildable spec: the metacyclic spec for squarefree orders, a
    /// catalog reference otherwise.
    pub spec: GroupSpec,
    pub group: FiniteGroup,
    pub spectrum: OrderSpectrum,
    pub rho: FactoredInt,
    pub fingerprint: Fingerprint,
}

impl CatalogEntry {
    fn new(label: String, spec: GroupSpec, group: FiniteGroup) -> Result<Self> {
        let spectrum = group.order_spectrum();
        let rho = rho_enumerative(&spectrum)?;
        let fingerprint = group.fingerprint();
        Ok(Self { group: group.with_label(label.clone()), label, spec, spectrum, rho, fingerprint })
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub order: u64,
    pub entries: Vec<CatalogEntry>,
    pub completeness: Completeness,
    pub source: CatalogSource,
    /// Number of isomorphism classes, when the table knows it.
    pub known_count: Option<u64>,
}

/// `(b, a, k)` with `b * a = n` describing `C_b : C_a @ k`, one per
/// isomorphism class of groups of squarefree order `n`.
pub fn holder_parameters(n: u64) -> Result<Vec<(u64, u64, u64)>> {
    if n == 0 {
        return Err(Error::Zero);
    }
    if !nt::is_squarefree(n) {
        return Err(Error::NotSquarefree(n));
    }
    if n > HOLDER_LIMIT {
        return Err(Error::OrderTooLarge(n));
    }
    let mut out = Vec::new();
    for b in nt::divisors(n)? {
        let a = n / b;
        if b == 1 {
            out.push((1, n, 1));
            continue;
        }
        let coprime_exponents: Vec<u64> = (1..=a).filter(|&i| nt::gcd(i, a) == 1).collect();
        for k in 2..b {
            if nt::gcd(k, b) != 1 || nt::gcd(k - 1, b) != 1 || nt::pow_mod(k, a, b) != 1 {
                continue;
            }
            // k and k^i generate the same cyclic subgroup of units
            if coprime_exponents.iter().all(|&i| nt::pow_mod(k, i, b) >= k) {
                out.push((b, a, k));
            }
        }
    }
    Ok(out)
}

/// All groups of squarefree order `n`, one per isomorphism class.
pub fn holder_squarefree(builder: &Builder, n: u64) -> Result<Catalog> {
    let mut entries = Vec::new();
    for (b, a, k) in holder_parameters(n)? {
        let spec = if b == 1 { GroupSpec::Cyclic(n) } else { GroupSpec::SemidirectCyclic { n: b, m: a, k } };
        let group = builder.build(&spec)?;
        entries.push(CatalogEntry::new(format!("{spec}"), spec, group)?);
    }
    let count = entries.len() as u64;
    Ok(Catalog {
        order: n,
        entries,
        completeness: Completeness::Complete,
        source: CatalogSource::Squarefree,
        known_count: Some(count),
    })
}

/// Known isomorphism-class counts for the curated orders that can be
/// certified.
pub fn known_group_count(n: u64) -> Option<u64> {
    match n {
        4 => return Some(2),
        8 => return Some(5),
        12 => return Some(5),
        24 => return Some(15),
        60 => return Some(13),
        84 => return Some(15),
        _ => {}
    }
    let factors = nt::factorize(n).ok()?;
    match factors[..] {
        [(p, 2)] if p > 2 => Some(2),
        [(2, 2), (p, 1)] if p >= 5 => Some(if p % 4 == 1 { 5 } else { 4 }),
        _ => None,
    }
}

enum Recipe {
    Base,
    Extension { p: u64, h: u64 },
}

fn recipe(n: u64) -> Option<Recipe> {
    if n < 4 || nt::is_squarefree(n) {
        return None;
    }
    let factors = nt::factorize(n).ok()?;
    match factors[..] {
        [(2, 2)] | [(2, 3)] => return Some(Recipe::Base),
        [(p, 2)] if p > 2 => return Some(Recipe::Base),
        _ => {}
    }
    let &(p, e) = factors.last()?;
    if e != 1 {
        return None;
    }
    let h = n / p;
    recipe(h).map(|_| Recipe::Extension { p, h })
}

/// Whether [`curated_catalog`] covers order `n`.
pub fn is_curated(n: u64) -> bool {
    recipe(n).is_some()
}

/// Caches catalogs by order.
#[derive(Clone, Debug)]
pub struct CatalogStore {
    builder: Builder,
    cache: BTreeMap<u64, Arc<Catalog>>,
}

impl CatalogStore {
    pub fn new(builder: Builder) -> Self {
        Self { builder, cache: BTreeMap::new() }
    }

    /// Drops every cached catalog.
    pub fn clear(&mut self) {
        self.cache.clear();
    }

    pub fn builder(&self) -> &Builder {
        &self.builder
    }

    /// Whether some catalog exists for order `n`.
    pub fn covers(n: u64) -> bool {
        n >= 1 && ((nt::is_squarefree(n) && n <= HOLDER_LIMIT) || is_curated(n))
    }

    /// Squarefree or curated catalog, whichever applies.
    pub fn catalog(&mut self, n: u64) -> Result<Arc<Catalog>> {
        if let Some(c) = self.cache.get(&n) {
            return Ok(c.clone());
        }
        let catalog =
            if n >= 1 && nt::is_squarefree(n) { holder_squarefree(&self.builder, n)? } else { self.build_curated(n)? };
        let catalog = Arc::new(catalog);
        self.cache.insert(n, catalog.clone());
        Ok(catalog)
    }

    /// Curated catalog only; squarefree orders are an error.
    pub fn curated_catalog(&mut self, n: u64) -> Result<Arc<Catalog>> {
        if !is_curated(n) {
            return Err(Error::NotInCatalog(n));
        }
        self.catalog(n)
    }

    fn build_curated(&mut self, n: u64) -> Result<Catalog> {
        let recipe = recipe(n).ok_or(Error::NotInCatalog(n))?;
        let b = self.builder;
        let mut groups: Vec<FiniteGroup> = match recipe {
            Recipe::Base => base_groups(&b, n)?,
            Recipe::Extension { p, h } => {
                let inner = self.catalog(h)?;
                let mut out = Vec::new();
                for entry in &inner.entries {
                    out.extend(extensions(&b, p, &entry.group)?);
                }
                out
            }
        };
        groups.extend(special_groups(&b, n)?);

        // above the exact limit, equal fingerprints are merged unverified
        let mut kept: Vec<(FiniteGroup, Fingerprint, Option<Table>)> = Vec::new();
        for g in groups {
            let fp = g.fingerprint();
            let mut table = None;
            let mut duplicate = false;
            for (k, _, ktable) in kept.iter_mut().filter(|(_, kfp, _)| *kfp == fp) {
                if n > EXACT_ISO_LIMIT {
                    duplicate = true;
                    break;
                }
                let ta = ktable.get_or_insert_with(|| Table::new(k));
                let tb = table.get_or_insert_with(|| Table::new(&g));
                if tables_isomorphic(ta, tb) {
                    duplicate = true;
                    break;
                }
            }
            if !duplicate {
                kept.push((g, fp, table));
            }
        }

        let mut label_uses: BTreeMap<String, usize> = BTreeMap::new();
        let mut entries = Vec::with_capacity(kept.len());
        for (index, (g, _, _)) in kept.into_iter().enumerate() {
            let uses = label_uses.entry(String::from(g.label())).or_insert(0);
            *uses += 1;
            let label = if *uses == 1 { String::from(g.label()) } else { format!("{} #{}", g.label(), uses) };
            let spec = GroupSpec::CatalogRef { order: n, index: index as u64 };
            entries.push(CatalogEntry::new(label, spec, g)?);
        }
        let known_count = known_group_count(n);
        let completeness = if known_count == Some(entries.len() as u64) {
            Completeness::Complete
        } else {
            Completeness::PartialDocumented
        };
        Ok(Catalog { order: n, entries, completeness, source: CatalogSource::Curated, known_count })
    }
}

fn base_groups(b: &Builder, n: u64) -> Result<Vec<FiniteGroup>> {
    if n == 4 || n == 8 {
        let mut out = vec![b.cyclic(n)?];
        let c2 = b.cyclic(2)?;
        if n == 4 {
            out.push(b.direct_product(&c2, &c2)?);
        } else {
            out.push(b.direct_product(&b.cyclic(4)?, &c2)?);
            out.push(b.direct_product_all(&[c2.clone(), c2.clone(), c2])?);
            out.push(b.dihedral(8)?);
            out.push(b.quaternion8()?);
        }
        return Ok(out);
    }
    let p = nt::factorize(n)?[0].0;
    let cp = b.cyclic(p)?;
    Ok(vec![b.cyclic(n)?, b.direct_product(&cp, &cp)?])
}

fn special_groups(b: &Builder, n: u64) -> Result<Vec<FiniteGroup>> {
    let mut out = Vec::new();
    match n {
        12 => out.push(b.alternating4()?),
        24 => {
            out.push(b.symmetric4()?);
            out.push(b.sl2_3()?);
            out.push(b.direct_product(&b.cyclic(2)?, &b.alternating4()?)?);
        }
        _ => {}
    }
    for q in nt::primes_up_to(2000).into_iter().filter(|&q| q >= 5) {
        if q * (q * q - 1) / 2 == n {
            out.push(b.psl2(q)?);
        }
    }
    Ok(out)
}

/// `C_p : H` for every homomorphism `H -> Aut(C_p)`, up to the obvious
/// redundancy of the deduplication pass that follows.
fn extensions(b: &Builder, p: u64, h: &FiniteGroup) -> Result<Vec<FiniteGroup>> {
    let h = h.with_small_generators();
    let d = p - 1;
    let mut out = Vec::new();
    for exps in homomorphisms_to_cyclic(&h, d) {
        let g = b.extension_by_prime(p, &h, &exps)?;
        let image = exps.iter().map(|&e| d / nt::gcd(e, d)).fold(1, nt::lcm);
        let label = if image == 1 {
            format!("C{p} x {}", paren(h.label()))
        } else {
            format!("C{p} :{image} {}", paren(h.label()))
        };
        out.push(g.with_label(label));
    }
    Ok(out)
}

/// Generator images `e_i` in `Z_d` that extend to a homomorphism from `h`.
fn homomorphisms_to_cyclic(h: &FiniteGroup, d: u64) -> Vec<Vec<u64>> {
    let gens = h.generators();
    let allowed: Vec<Vec<u64>> = gens.iter().map(|g| (0..d).filter(|&e| (g.order() * e) % d == 0).collect()).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(gens.len());
    fn walk(h: &FiniteGroup, d: u64, allowed: &[Vec<u64>], current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if current.len() == allowed.len() {
            if extends(h, d, current) {
                out.push(current.clone());
            }
            return;
        }
        for &e in &allowed[current.len()] {
            current.push(e);
            walk(h, d, allowed, current, out);
            current.pop();
        }
    }
    walk(h, d, &allowed, &mut current, &mut out);
    out
}

fn extends(h: &FiniteGroup, d: u64, exps: &[u64]) -> bool {
    const UNSET: u64 = u64::MAX;
    let n = h.elements().len();
    let mut value = vec![UNSET; n];
    value[0] = 0;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (g, &e) in h.generators().iter().zip(exps) {
            let y = h.index_of(&h.elements()[x].compose(g)).expect("closed");
            let v = (value[x] + e) % d;
            if value[y] == UNSET {
                value[y] = v;
                queue.push(y);
            } else if value[y] != v {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holder_counts() {
        let b = Builder::default();
        assert_eq!(holder_squarefree(&b, 1).unwrap().entries.len(), 1);
        assert_eq!(holder_squarefree(&b, 30).unwrap().entries.len(), 4);
        assert_eq!(holder_squarefree(&b, 6).unwrap().entries.len(), 2);
        assert_eq!(holder_squarefree(&b, 42).unwrap().entries.len(), 6);
        assert_eq!(holder_parameters(60).unwrap_err(), Error::NotSquarefree(60));
    }

    #[test]
    fn holder_546_contains_smallgroup_13() {
        let b = Builder::default();
        let target = b.build(&"C14 x (C13 : C3 @ 3)".parse().unwrap()).unwrap().fingerprint();
        let cat = holder_squarefree(&b, 546).unwrap();
        assert!(cat.entries.iter().any(|e| e.fingerprint == target));
    }

    #[test]
    fn curated_small_orders() {
        let mut store = CatalogStore::new(Builder::default());
        for (n, count) in [(4, 2), (8, 5), (9, 2), (12, 5), (20, 5), (24, 15), (28, 4), (60, 13), (84, 15)] {
            let cat = store.catalog(n).unwrap();
            assert_eq!(cat.entries.len() as u64, count, "order {n}");
            assert_eq!(cat.completeness, Completeness::Complete, "order {n}");
        }
    }

    #[test]
    fn curated_partial_orders() {
        let mut store = CatalogStore::new(Builder::default());
        let cat = store.catalog(168).unwrap();
        assert_eq!(cat.completeness, Completeness::PartialDocumented);
        assert!(cat.entries.iter().any(|e| e.label == "PSL(2,7)"));
        assert_eq!(store.curated_catalog(59).unwrap_err(), Error::NotInCatalog(59));
        assert_eq!(store.catalog(36).unwrap_err(), Error::NotInCatalog(36));
    }

    #[test]
    fn homomorphism_enumeration() {
        let b = Builder::default();
        let v4 = b.direct_product(&b.cyclic(2).unwrap(), &b.cyclic(2).unwrap()).unwrap();
        assert_eq!(homomorphisms_to_cyclic(&v4.with_small_generators(), 4).len(), 4);
        let a4 = b.alternating4().unwrap().with_small_generators();
        assert_eq!(homomorphisms_to_cyclic(&a4, 6).len(), 3);
    }
}
