use alloc::collections::BTreeSet;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::factored::render_exponents;
use crate::parse::{parse_exp_set, ParseDiagnostic};

/// A nonempty set of positive exponents: the recognition input.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpSet(BTreeSet<u64>);

impl ExpSet {
    pub fn new<I: IntoIterator<Item = u64>>(values: I) -> Result<Self> {
        let set: BTreeSet<u64> = values.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyExpSet);
        }
        if set.contains(&0) {
            return Err(Error::ZeroExponent);
        }
        Ok(ExpSet(set))
    }

    pub fn values(&self) -> &BTreeSet<u64> {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: u64) -> bool {
        self.0.contains(&v)
    }

    pub fn max(&self) -> u64 {
        *self.0.last().expect("nonempty")
    }

    pub fn sum(&self) -> Result<u64> {
        self.0.iter().try_fold(0u64, |a, &v| a.checked_add(v)).ok_or(Error::ExponentOverflow)
    }
}

impl fmt::Display for ExpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_exponents(&self.0))
    }
}

impl fmt::Debug for ExpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Strict parse; duplicate warnings are discarded.
impl FromStr for ExpSet {
    type Err = ParseDiagnostic;

    fn from_str(s: &str) -> core::result::Result<Self, ParseDiagnostic> {
        parse_exp_set(s).map(|parsed| parsed.set)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for ExpSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}
