//! Concrete permutation realizations of the named groups.
//!
//! Cyclic and metacyclic groups `C_n : C_m` are placed on one block of
//! `q` points per prime power `q || n` (the kernel translates, the complement
//! multiplies by `k`) plus one block per prime power of `m` (the complement
//! cycles). The degree is the sum of prime powers of `n` and `m` rather than
//! `n + m`, and the action is always faithful.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::catalog::CatalogStore;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, DEFAULT_ENUMERATION_CAP};
use crate::nt;
use crate::parse::{parse_group_spec, ParseDiagnostic};
use crate::perm::Permutation;

/// Abstract syntax of the group-spec language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupSpec {
    Cyclic(u64),
    /// Dihedral group of the given order `2n`.
    Dihedral(u64),
    Psl2(u64),
    Direct(Vec<GroupSpec>),
    /// `C_n : C_m` with the generator of `C_m` acting as `x -> x^k`.
    SemidirectCyclic {
        n: u64,
        m: u64,
        k: u64,
    },
    /// Entry `index` of the catalog for `order`.
    CatalogRef {
        order: u64,
        index: u64,
    },
}

impl GroupSpec {
    /// Checks the constructor invariants without building anything.
    pub fn validate(&self) -> Result<()> {
        match *self {
            GroupSpec::Cyclic(0) => Err(Error::InvalidSpec("C0: order must be at least 1".into())),
            GroupSpec::Dihedral(o) if o == 0 || o % 2 == 1 => {
                Err(Error::InvalidSpec(format!("D{o}: dihedral order must be even and positive")))
            }
            GroupSpec::Psl2(q) if q < 3 || !nt::is_prime(q) => {
                Err(Error::InvalidSpec(format!("PSL(2,{q}): q must be an odd prime")))
            }
            GroupSpec::SemidirectCyclic { n, m, k } => {
                if n == 0 || m == 0 {
                    return Err(Error::InvalidSpec("semidirect factors must have order at least 1".into()));
                }
                if nt::gcd(k % n, n) != 1 {
                    return Err(Error::InvalidSpec(format!("gcd({k}, {n}) != 1")));
                }
                if nt::pow_mod(k, m, n) != 1 % n {
                    return Err(Error::InvalidSpec(format!("{k}^{m} is not 1 mod {n}")));
                }
                Ok(())
            }
            GroupSpec::Direct(ref parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidSpec("empty direct product".into()));
                }
                parts.iter().try_for_each(GroupSpec::validate)
            }
            GroupSpec::CatalogRef { order: 0, .. } => {
                Err(Error::InvalidSpec("catalog order must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Order implied by the spec; `None` for catalog references or overflow.
    pub fn predicted_order(&self) -> Option<u64> {
        match *self {
            GroupSpec::Cyclic(n) => Some(n),
            GroupSpec::Dihedral(o) => Some(o),
            GroupSpec::Psl2(q) => q.checked_mul(q.checked_mul(q)? - 1).map(|x| x / 2),
            GroupSpec::Direct(ref parts) => parts.iter().try_fold(1u64, |a, p| a.checked_mul(p.predicted_order()?)),
            GroupSpec::SemidirectCyclic { n, m, .. } => n.checked_mul(m),
            GroupSpec::CatalogRef { order, .. } => Some(order),
        }
    }

    fn needs_parens_in_product(&self) -> bool {
        matches!(self, GroupSpec::Direct(_) | GroupSpec::SemidirectCyclic { .. })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Dihedral(o) => write!(f, "D{o}"),
            GroupSpec::Psl2(q) => write!(f, "PSL(2,{q})"),
            GroupSpec::SemidirectCyclic { n, m, k } => write!(f, "C{n} : C{m} @ {k}"),
            GroupSpec::CatalogRef { order, index } => write!(f, "Cat({order},{index})"),
            GroupSpec::Direct(parts) => {
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    if part.needs_parens_in_product() {
                        write!(f, "({part})")?;
                    } else {
                        write!(f, "{part}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GroupSpec {
    type Err = ParseDiagnostic;

    fn from_str(s: &str) -> core::result::Result<Self, ParseDiagnostic> {
        parse_group_spec(s)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Wraps a label in parentheses when it contains a binary operator.
pub(crate) fn paren(label: &str) -> String {
    if label.contains(' ') {
        format!("({label})")
    } else {
        label.to_string()
    }
}

/// Builds permutation groups under an enumeration cap.
#[derive(Clone, Copy, Debug)]
pub struct Builder {
    pub cap: usize,
}

impl Default for Builder {
    fn default() -> Self {
        Self { cap: DEFAULT_ENUMERATION_CAP }
    }
}

impl Builder {
    pub fn with_cap(cap: usize) -> Self {
        Self { cap }
    }

    pub fn build(&self, spec: &GroupSpec) -> Result<FiniteGroup> {
        spec.validate()?;
        let group = match *spec {
            GroupSpec::Cyclic(n) => self.cyclic(n)?,
            GroupSpec::Dihedral(o) => self.dihedral(o)?,
            GroupSpec::Psl2(q) => self.psl2(q)?,
            GroupSpec::SemidirectCyclic { n, m, k } => self.semidirect_cyclic(n, m, k)?,
            GroupSpec::Direct(ref parts) => {
                let built = parts.iter().map(|p| self.build(p)).collect::<Result<Vec<_>>>()?;
                self.direct_product_all(&built)?
            }
            GroupSpec::CatalogRef { order, index } => {
                let catalog = CatalogStore::new(*self).catalog(order)?;
                let entry = usize::try_from(index)
                    .ok()
                    .and_then(|i| catalog.entries.get(i))
                    .ok_or(Error::NoSuchCatalogEntry { order, index: index as usize })?;
                return Ok(entry.group.clone());
            }
        };
        Ok(group.with_label(spec.to_string()))
    }

    fn enumerate(&self, degree: usize, gens: Vec<Permutation>) -> Result<FiniteGroup> {
        FiniteGroup::enumerate(degree.max(1), gens, self.cap)
    }

    pub fn cyclic(&self, n: u64) -> Result<FiniteGroup> {
        Ok(self.semidirect_cyclic(n, 1, 1)?.with_label(format!("C{n}")))
    }

    /// Dihedral group of order `order = 2n`, as `C_n : C_2` with inversion.
    pub fn dihedral(&self, order: u64) -> Result<FiniteGroup> {
        GroupSpec::Dihedral(order).validate()?;
        let n = order / 2;
        let k = if n == 1 { 0 } else { n - 1 };
        Ok(self.semidirect_cyclic(n, 2, k)?.with_label(format!("D{order}")))
    }

    pub fn semidirect_cyclic(&self, n: u64, m: u64, k: u64) -> Result<FiniteGroup> {
        GroupSpec::SemidirectCyclic { n, m, k }.validate()?;
        let kernel_blocks = nt::prime_power_parts(n)?;
        let complement_blocks = nt::prime_power_parts(m)?;
        let degree: u64 = kernel_blocks.iter().chain(&complement_blocks).sum();
        let degree = usize::try_from(degree).map_err(|_| Error::GroupTooLarge { cap: self.cap })?;
        let mut gens = Vec::new();
        if n > 1 {
            let mut images = Vec::with_capacity(degree);
            let mut base = 0u32;
            for &q in &kernel_blocks {
                images.extend((0..q as u32).map(|z| base + (z + 1) % q as u32));
                base += q as u32;
            }
            images.extend(base..degree as u32);
            gens.push(Permutation::from_images(images)?);
        }
        if m > 1 {
            let mut images = Vec::with_capacity(degree);
            let mut base = 0u32;
            for &q in &kernel_blocks {
                let kq = k % q;
                images.extend((0..q).map(|z| base + ((z * kq) % q) as u32));
                base += q as u32;
            }
            for &r in &complement_blocks {
                images.extend((0..r as u32).map(|z| base + (z + 1) % r as u32));
                base += r as u32;
            }
            gens.push(Permutation::from_images(images)?);
        }
        let group = self.enumerate(degree, gens)?;
        if group.order() != n * m {
            return Err(Error::InvalidSpec(format!("C{n} : C{m} @ {k} realized with order {}", group.order())));
        }
        let label = if m == 1 { format!("C{n}") } else { format!("C{n} : C{m} @ {k}") };
        Ok(group.with_label(label))
    }

    /// PSL(2,q), q an odd prime, acting on the projective line
    /// `{0, ..., q-1, inf}` via `z -> z + 1` and `z -> -1/z`.
    pub fn psl2(&self, q: u64) -> Result<FiniteGroup> {
        GroupSpec::Psl2(q).validate()?;
        let inf = q as u32;
        let translate: Vec<u32> = (0..q as u32).map(|z| (z + 1) % q as u32).chain([inf]).collect();
        let invert: Vec<u32> =
            (0..q).map(|z| if z == 0 { inf } else { ((q - nt::pow_mod(z, q - 2, q)) % q) as u32 }).chain([0]).collect();
        let gens = vec![Permutation::from_images(translate)?, Permutation::from_images(invert)?];
        Ok(self.enumerate(q as usize + 1, gens)?.with_label(format!("PSL(2,{q})")))
    }

    pub fn direct_product(&self, a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
        let degree = a.degree() + b.degree();
        let gens = a
            .generators()
            .iter()
            .map(|g| g.embed(0, degree))
            .chain(b.generators().iter().map(|g| g.embed(a.degree(), degree)))
            .collect();
        let label = format!("{} x {}", paren(a.label()), paren(b.label()));
        Ok(self.enumerate(degree, gens)?.with_label(label))
    }

    pub fn direct_product_all(&self, parts: &[FiniteGroup]) -> Result<FiniteGroup> {
        let (first, rest) = parts.split_first().ok_or_else(|| Error::InvalidSpec("empty direct product".into()))?;
        if rest.is_empty() {
            return Ok(first.clone());
        }
        let degree: usize = parts.iter().map(FiniteGroup::degree).sum();
        let mut gens = Vec::new();
        let mut offset = 0;
        for part in parts {
            gens.extend(part.generators().iter().map(|g| g.embed(offset, degree)));
            offset += part.degree();
        }
        let label = parts.iter().map(|p| paren(p.label())).collect::<Vec<_>>().join(" x ");
        Ok(self.enumerate(degree, gens)?.with_label(label))
    }

    /// Quaternion group of order 8 in its right regular representation.
    pub fn quaternion8(&self) -> Result<FiniteGroup> {
        // elements: 0..4 = 1, i, j, k; 4..8 = their negatives
        const UNIT: [[(u32, u32); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let mul = |x: u32, y: u32| {
            let (sign, unit) = UNIT[(x % 4) as usize][(y % 4) as usize];
            ((x / 4 + y / 4 + sign) % 2) * 4 + unit
        };
        let right = |g: u32| Permutation::from_images((0..8).map(|x| mul(x, g)).collect());
        Ok(self.enumerate(8, vec![right(1)?, right(2)?])?.with_label("Q8"))
    }

    pub fn alternating4(&self) -> Result<FiniteGroup> {
        let gens = vec![Permutation::from_cycles(4, &[&[0, 1, 2]])?, Permutation::from_cycles(4, &[&[0, 1], &[2, 3]])?];
        Ok(self.enumerate(4, gens)?.with_label("A4"))
    }

    pub fn symmetric4(&self) -> Result<FiniteGroup> {
        let gens = vec![Permutation::from_cycles(4, &[&[0, 1, 2, 3]])?, Permutation::from_cycles(4, &[&[0, 1]])?];
        Ok(self.enumerate(4, gens)?.with_label("S4"))
    }

    /// SL(2,3) acting on the eight nonzero vectors of F_3^2.
    pub fn sl2_3(&self) -> Result<FiniteGroup> {
        let index = |x: u64, y: u64| (3 * x + y - 1) as u32;
        let act = |m: [[u64; 2]; 2]| {
            let mut images = vec![0u32; 8];
            for x in 0..3 {
                for y in 0..3 {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    let (u, v) = ((m[0][0] * x + m[0][1] * y) % 3, (m[1][0] * x + m[1][1] * y) % 3);
                    images[index(x, y) as usize] = index(u, v);
                }
            }
            Permutation::from_images(images)
        };
        let gens = vec![act([[1, 1], [0, 1]])?, act([[0, 2], [1, 0]])?];
        Ok(self.enumerate(8, gens)?.with_label("SL(2,3)"))
    }

    /// `C_p : H`, where the `i`-th generator of `h` multiplies `C_p` by
    /// `g^exponents[i]` for the smallest primitive root `g` mod `p`. The
    /// exponents must define a homomorphism `H -> Z_{p-1}`.
    pub fn extension_by_prime(&self, p: u64, h: &FiniteGroup, exponents: &[u64]) -> Result<FiniteGroup> {
        if !nt::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if exponents.len() != h.generators().len() {
            return Err(Error::InvalidSpec("one action exponent per generator required".into()));
        }
        let root = nt::primitive_root(p)?;
        let pd = p as usize;
        let degree = pd + h.degree();
        let translate: Vec<u32> = (0..pd as u32).map(|z| (z + 1) % p as u32).chain(pd as u32..degree as u32).collect();
        let mut gens = vec![Permutation::from_images(translate)?];
        for (g, &e) in h.generators().iter().zip(exponents) {
            let mult = nt::pow_mod(root, e, p);
            let mut images: Vec<u32> = (0..p).map(|z| ((z * mult) % p) as u32).collect();
            images.extend(g.images().iter().map(|&j| j + pd as u32));
            gens.push(Permutation::from_images(images)?);
        }
        let group = self.enumerate(degree, gens)?;
        if group.order() != p * h.order() {
            return Err(Error::InvalidSpec(format!("action exponents {exponents:?} do not define a homomorphism")));
        }
        Ok(group)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nt::euler_phi;

    #[test]
    fn cyclic_and_trivial() {
        let b = Builder::default();
        let c30 = b.cyclic(30).unwrap();
        assert_eq!(c30.order(), 30);
        assert_eq!(c30.degree(), 10);
        let spec = c30.order_spectrum();
        for d in nt::divisors(30).unwrap() {
            assert_eq!(spec.s(d), euler_phi(d).unwrap());
        }
        let c1 = b.cyclic(1).unwrap();
        assert_eq!(c1.order(), 1);
        assert_eq!(c1.degree(), 1);
    }

    #[test]
    fn psl2_orders() {
        let b = Builder::default();
        for (q, order) in [(3, 12), (5, 60), (7, 168), (11, 660), (13, 1092)] {
            let g = b.psl2(q).unwrap();
            assert_eq!(g.order(), order, "q = {q}");
            assert_eq!(g.order(), q * (q * q - 1) / 2);
            assert_eq!(g.degree() as u64, q + 1);
        }
        assert!(b.psl2(9).is_err());
        assert!(b.psl2(2).is_err());
    }

    #[test]
    fn psl2_is_transitive() {
        let g = Builder::default().psl2(7).unwrap();
        let orbit: alloc::collections::BTreeSet<usize> = g.elements().iter().map(|x| x.image(0)).collect();
        assert_eq!(orbit.len(), 8);
    }

    #[test]
    fn semidirect_39() {
        let b = Builder::default();
        let g = b.semidirect_cyclic(13, 3, 3).unwrap();
        assert_eq!(g.order(), 39);
        assert!(!g.is_abelian());
        assert!(b.semidirect_cyclic(13, 3, 2).is_err());
        assert!(b.semidirect_cyclic(12, 2, 2).is_err());
        // kernel C13 is self-centralizing
        let kernel = g.generators()[0].clone();
        assert_eq!(g.centralizer_order(&[kernel]).unwrap(), 13);
    }

    #[test]
    fn dihedral_small_cases() {
        let b = Builder::default();
        assert_eq!(b.dihedral(2).unwrap().order(), 2);
        let d4 = b.dihedral(4).unwrap();
        assert_eq!(d4.order(), 4);
        assert_eq!(alloc::format!("{}", d4.order_spectrum()), "{1:1,2:3}");
        let d8 = b.dihedral(8).unwrap();
        assert_eq!(alloc::format!("{}", d8.order_spectrum()), "{1:1,2:5,4:2}");
        assert!(b.dihedral(7).is_err());
    }

    #[test]
    fn direct_products() {
        let b = Builder::default();
        let c2 = b.cyclic(2).unwrap();
        let c3 = b.cyclic(3).unwrap();
        let z6 = b.direct_product(&c2, &c3).unwrap();
        assert_eq!(z6.order_spectrum(), b.cyclic(6).unwrap().order_spectrum());
        assert_eq!(z6.degree(), c2.degree() + c3.degree());
        let v4 = b.direct_product(&c2, &c2).unwrap();
        assert_eq!(alloc::format!("{}", v4.order_spectrum()), "{1:1,2:3}");
        let g = b.direct_product(&b.psl2(5).unwrap(), &b.cyclic(7).unwrap()).unwrap();
        assert_eq!(g.order(), 420);
        assert_eq!(g.label(), "PSL(2,5) x C7");
    }

    #[test]
    fn small_special_groups() {
        let b = Builder::default();
        let q8 = b.quaternion8().unwrap();
        assert_eq!(alloc::format!("{}", q8.order_spectrum()), "{1:1,2:1,4:6}");
        assert_eq!(b.alternating4().unwrap().order(), 12);
        assert_eq!(b.symmetric4().unwrap().order(), 24);
        let sl = b.sl2_3().unwrap();
        assert_eq!(sl.order(), 24);
        assert_eq!(alloc::format!("{}", sl.order_spectrum()), "{1:1,2:1,3:8,4:6,6:8}");
    }

    #[test]
    fn build_from_spec() {
        let b = Builder::default();
        let spec: GroupSpec = "C14 x (C13 : C3 @ 3)".parse().unwrap();
        let g = b.build(&spec).unwrap();
        assert_eq!(g.order(), 546);
        assert_eq!(g.label(), "C14 x (C13 : C3 @ 3)");
        assert_eq!(b.build(&GroupSpec::Psl2(5)).unwrap().order(), 60);
        assert!(matches!(b.build(&GroupSpec::Psl2(4)), Err(Error::InvalidSpec(_))));
        assert!(matches!(b.build(&GroupSpec::Cyclic(0)), Err(Error::InvalidSpec(_))));
        let small = Builder::with_cap(100);
        assert_eq!(small.build(&GroupSpec::Psl2(7)).unwrap_err(), Error::GroupTooLarge { cap: 100 });
    }

    #[test]
    fn extension_requires_homomorphism() {
        let b = Builder::default();
        let c4 = b.cyclic(4).unwrap();
        // C4 -> Z_4 (units mod 5), generator to 1: faithful action, F20
        let f20 = b.extension_by_prime(5, &c4, &[1]).unwrap();
        assert_eq!(f20.order(), 20);
        assert_eq!(f20.center_order(), 1);
        let c3 = b.cyclic(3).unwrap();
        // 3 does not divide 4, so sending the generator of C3 to 1 mod 4 is not a homomorphism
        assert!(b.extension_by_prime(5, &c3, &[1]).is_err());
    }
}
