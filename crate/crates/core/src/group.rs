//! Permutation groups with a fully enumerated element list.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use core::hash::BuildHasher;

use hashbrown::{DefaultHashBuilder, HashTable};

use crate::error::{Error, Result};
use crate::nt;
use crate::perm::Permutation;

/// Default bound on the number of elements [`FiniteGroup::enumerate`] will produce.
pub const DEFAULT_ENUMERATION_CAP: usize = 2_000_000;

#[derive(Clone)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Permutation>,
    // BFS order: identity first, then right multiplication by generators in index order
    elements: Vec<Permutation>,
    // positions into `elements`, hashed by the element they point at
    index: HashTable<u32>,
    hasher: DefaultHashBuilder,
    label: String,
}

impl FiniteGroup {
    /// Closes `generators` under composition. Degree must be at least 1; an
    /// empty generator list gives the trivial group.
    pub fn enumerate(degree: usize, generators: Vec<Permutation>, cap: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let identity = Permutation::identity(degree);
        let mut elements = vec![identity.clone()];
        let hasher = DefaultHashBuilder::default();
        let mut index = HashTable::new();
        index.insert_unique(hasher.hash_one(&identity), 0u32, |&i| hasher.hash_one(&elements[i as usize]));
        let mut head = 0;
        while head < elements.len() {
            for g in &generators {
                let next = elements[head].compose(g);
                let hash = hasher.hash_one(&next);
                if index.find(hash, |&i| elements[i as usize] == next).is_none() {
                    if elements.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    let position = elements.len() as u32;
                    index.insert_unique(hash, position, |&i| hasher.hash_one(&elements[i as usize]));
                    elements.push(next);
                }
            }
            head += 1;
        }
        Ok(Self { degree, generators, elements, index, hasher, label: String::new() })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.index_of(g).is_some()
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        let elements = &self.elements;
        self.index.find(self.hasher.hash_one(g), |&i| elements[i as usize] == *g).map(|&i| i as usize)
    }

    pub fn order_spectrum(&self) -> OrderSpectrum {
        let mut counts = BTreeMap::new();
        for g in &self.elements {
            *counts.entry(g.order()).or_insert(0u64) += 1;
        }
        OrderSpectrum { counts, group_order: self.order() }
    }

    /// `|L_k(G)|`, read off the spectrum.
    pub fn count_kth_roots(&self, k: u64) -> u64 {
        self.order_spectrum().kth_roots(k)
    }

    /// Number of elements commuting with every member of `set`.
    pub fn centralizer_order(&self, set: &[Permutation]) -> Result<u64> {
        if set.iter().any(|s| !self.contains(s)) {
            return Err(Error::NotMember);
        }
        Ok(self.elements.iter().filter(|g| set.iter().all(|s| g.commutes_with(s))).count() as u64)
    }

    pub fn center_order(&self) -> u64 {
        self.centralizer_order(&self.generators).expect("generators are members")
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Indices of the subgroup generated by `gens` (which must be members).
    pub fn subgroup_closure(&self, gens: &[Permutation]) -> Vec<usize> {
        let mut seen = vec![false; self.elements.len()];
        let mut out = vec![0usize];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let j = self.index_of(&self.elements[i].compose(g)).expect("closed");
                if !seen[j] {
                    seen[j] = true;
                    out.push(j);
                    queue.push_back(j);
                }
            }
        }
        out
    }

    /// Generators of the derived subgroup, as the normal closure of the
    /// generator commutators.
    fn derived_generators(&self) -> Vec<Permutation> {
        let mut gens: Vec<Permutation> = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let c = a.inverse().compose(&b.inverse()).compose(a).compose(b);
                if !c.is_identity() {
                    gens.push(c);
                }
            }
        }
        loop {
            let members: hashbrown::HashSet<usize> = self.subgroup_closure(&gens).into_iter().collect();
            let mut added = None;
            'search: for x in &gens {
                for g in &self.generators {
                    let y = g.inverse().compose(x).compose(g);
                    if !members.contains(&self.index_of(&y).expect("closed")) {
                        added = Some(y);
                        break 'search;
                    }
                }
            }
            match added {
                Some(y) => gens.push(y),
                None => return gens,
            }
        }
    }

    pub fn derived_subgroup_order(&self) -> u64 {
        self.subgroup_closure(&self.derived_generators()).len() as u64
    }

    /// A short generating set, chosen greedily by element order.
    pub fn small_generating_set(&self) -> Vec<Permutation> {
        let n = self.elements.len();
        let mut by_order: Vec<(u64, usize)> = self.elements.iter().enumerate().map(|(i, g)| (g.order(), i)).collect();
        by_order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut gens = Vec::new();
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut size = 1;
        for &(_, i) in &by_order {
            if size == n {
                break;
            }
            if inside[i] {
                continue;
            }
            gens.push(self.elements[i].clone());
            inside.iter_mut().for_each(|b| *b = false);
            let closure = self.subgroup_closure(&gens);
            size = closure.len();
            for j in closure {
                inside[j] = true;
            }
        }
        gens
    }

    /// Same group, re-generated by [`Self::small_generating_set`].
    pub fn with_small_generators(&self) -> Self {
        let mut out = self.clone();
        out.generators = self.small_generating_set();
        out
    }

    /// Isomorphism invariants; unequal fingerprints prove non-isomorphism.
    pub fn fingerprint(&self) -> Fingerprint {
        let derived = self.subgroup_closure(&self.derived_generators());
        let mut derived_spectrum = BTreeMap::new();
        for &i in &derived {
            *derived_spectrum.entry(self.elements[i].order()).or_insert(0u64) += 1;
        }
        Fingerprint {
            order: self.order(),
            spectrum: self.order_spectrum().counts.into_iter().collect(),
            center_order: self.center_order(),
            derived_spectrum: derived_spectrum.into_iter().collect(),
        }
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order())
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub order: u64,
    pub spectrum: Vec<(u64, u64)>,
    pub center_order: u64,
    pub derived_spectrum: Vec<(u64, u64)>,
}

/// `t -> s_t`: how many elements have each order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderSpectrum {
    counts: BTreeMap<u64, u64>,
    group_order: u64,
}

impl OrderSpectrum {
    /// Validates: counts sum to the group order, exactly one element of
    /// order 1, every order divides the group order, no zero counts.
    pub fn new(counts: BTreeMap<u64, u64>) -> Result<Self> {
        let group_order = counts
            .values()
            .try_fold(0u64, |a, &s| a.checked_add(s))
            .ok_or_else(|| Error::InvalidSpectrum("count overflow".into()))?;
        if counts.get(&1) != Some(&1) {
            return Err(Error::InvalidSpectrum("exactly one element of order 1 required".into()));
        }
        for (&t, &s) in &counts {
            if s == 0 {
                return Err(Error::InvalidSpectrum(alloc::format!("zero count stored for order {t}")));
            }
            if t == 0 || group_order % t != 0 {
                return Err(Error::InvalidSpectrum(alloc::format!("order {t} does not divide {group_order}")));
            }
        }
        Ok(Self { counts, group_order })
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// `s_t`, zero when no element has order `t`.
    pub fn s(&self, t: u64) -> u64 {
        self.counts.get(&t).copied().unwrap_or(0)
    }

    /// `|{g : g^k = 1}| = sum over t | k of s_t`.
    pub fn kth_roots(&self, k: u64) -> u64 {
        if k == 0 {
            return self.group_order;
        }
        self.counts.iter().filter(|(&t, _)| k % t == 0).map(|(_, &s)| s).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&t, &s)| (t, s))
    }

    /// True when every nonidentity element has prime order.
    pub fn only_prime_orders(&self) -> bool {
        self.counts.keys().all(|&t| t == 1 || nt::is_prime(t))
    }
}

impl fmt::Display for OrderSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (t, s)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}:{s}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for OrderSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for OrderSpectrum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_map(self.counts.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    fn cycle(n: u32) -> Permutation {
        Permutation::from_images((0..n).map(|i| (i + 1) % n).collect()).unwrap()
    }

    #[test]
    fn cyclic_thirty() {
        let g = FiniteGroup::enumerate(30, vec![cycle(30)], DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(g.order(), 30);
        assert!(g.is_abelian());
        let spec = g.order_spectrum();
        for d in nt::divisors(30).unwrap() {
            assert_eq!(spec.s(d), nt::euler_phi(d).unwrap());
        }
    }

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::enumerate(1, vec![], DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.count_kth_roots(1), 1);
        assert_eq!(format!("{}", g.order_spectrum()), "{1:1}");
        assert_eq!(FiniteGroup::enumerate(0, vec![], 10).unwrap_err(), Error::ZeroDegree);
    }

    #[test]
    fn cap_is_enforced() {
        let err = FiniteGroup::enumerate(30, vec![cycle(30)], 29).unwrap_err();
        assert_eq!(err, Error::GroupTooLarge { cap: 29 });
        assert_eq!(format!("{err}"), "group too large: enumeration exceeded the cap of 29 elements");
    }

    #[test]
    fn degree_mismatch() {
        let err = FiniteGroup::enumerate(4, vec![cycle(3)], 100).unwrap_err();
        assert_eq!(err, Error::DegreeMismatch { expected: 4, found: 3 });
    }

    #[test]
    fn z6_and_klein() {
        let z6 = FiniteGroup::enumerate(6, vec![cycle(6)], 100).unwrap();
        assert_eq!(format!("{}", z6.order_spectrum()), "{1:1,2:1,3:2,6:2}");
        assert_eq!(z6.count_kth_roots(2), 2);
        assert_eq!(z6.count_kth_roots(1), 1);
        let a = Permutation::from_cycles(4, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(4, &[&[2, 3]]).unwrap();
        let v4 = FiniteGroup::enumerate(4, vec![a, b], 100).unwrap();
        assert_eq!(format!("{}", v4.order_spectrum()), "{1:1,2:3}");
    }

    #[test]
    fn centralizers() {
        let s3 =
            FiniteGroup::enumerate(3, vec![cycle(3), Permutation::from_cycles(3, &[&[0, 1]]).unwrap()], 100).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.centralizer_order(&[Permutation::identity(3)]).unwrap(), 6);
        assert_eq!(s3.centralizer_order(&[cycle(3)]).unwrap(), 3);
        assert_eq!(s3.center_order(), 1);
        assert_eq!(s3.derived_subgroup_order(), 3);
        assert!(!s3.is_abelian());
        assert_eq!(s3.centralizer_order(&[cycle(4)]), Err(Error::NotMember));
        assert_eq!(s3.small_generating_set().len(), 2);
    }

    #[test]
    fn spectrum_validation() {
        assert!(OrderSpectrum::new(BTreeMap::from([(1, 1), (2, 1)])).is_ok());
        assert!(OrderSpectrum::new(BTreeMap::from([(1, 2)])).is_err());
        assert!(OrderSpectrum::new(BTreeMap::from([(1, 1), (3, 1)])).is_err());
        assert!(OrderSpectrum::new(BTreeMap::from([(1, 1), (2, 1), (4, 0)])).is_err());
    }
}
