use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::nt;

/// A permutation of `0..degree`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Box<[u32]>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &i in &images {
            let i = i as usize;
            if i >= degree || seen[i] {
                return Err(Error::NotAPermutation { degree });
            }
            seen[i] = true;
        }
        Ok(Permutation(images.into_boxed_slice()))
    }

    /// Builds from disjoint cycles; points not mentioned are fixed.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a as usize >= degree || b as usize >= degree || touched[a as usize] {
                    return Err(Error::NotAPermutation { degree });
                }
                touched[a as usize] = true;
                images[a as usize] = b;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self` followed by `other`: point `i` goes to `other(self(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation(inv.into_boxed_slice())
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| other.0[j as usize] == self.0[other.0[i] as usize])
    }

    /// Cycle lengths, fixed points included.
    pub fn cycle_lengths(&self) -> Vec<u64> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    /// Element order: lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_lengths().into_iter().fold(1, nt::lcm)
    }

    /// Places `self` on points `0..d` and `other` on `d..d+e`.
    pub fn disjoint_union(&self, other: &Permutation) -> Permutation {
        let shift = self.degree() as u32;
        Permutation(self.0.iter().copied().chain(other.0.iter().map(|&j| j + shift)).collect())
    }

    /// Extends with fixed points up to `degree`, then shifts everything by `offset`.
    pub(crate) fn embed(&self, offset: usize, degree: usize) -> Permutation {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (i, &j) in self.0.iter().enumerate() {
            images[offset + i] = offset as u32 + j;
        }
        Permutation(images.into_boxed_slice())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        let mut seen = vec![false; self.degree()];
        for start in 0..self.degree() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.0[i] as usize;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    #[test]
    fn element_orders() {
        assert_eq!(Permutation::identity(4).order(), 1);
        let five = Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(five.order(), 5);
        let six = Permutation::from_cycles(5, &[&[0, 1], &[2, 3, 4]]).unwrap();
        assert_eq!(six.order(), 6);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(alloc::vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(alloc::vec![0, 3]).is_err());
        assert!(Permutation::from_cycles(3, &[&[0, 1], &[1, 2]]).is_err());
    }

    #[test]
    fn algebra() {
        let a = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        let b = Permutation::from_cycles(4, &[&[0, 2]]).unwrap();
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(a.pow(4), Permutation::identity(4));
        assert_eq!(a.pow(2), a.compose(&a));
        assert!(a.commutes_with(&a.pow(3)));
        assert!(!a.commutes_with(&b));
        // (0 1 2 3) then (0 2): 0->1, 1->2->0
        assert_eq!(a.compose(&b).image(1), 0);
        assert_eq!(format!("{:?}", a), "(0 1 2 3)");
        assert_eq!(a.disjoint_union(&b).degree(), 8);
        assert_eq!(a.disjoint_union(&b).order(), 4);
    }
}
