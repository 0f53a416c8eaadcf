//! Integers kept permanently in prime-factorized form.
//!
//! Values of `rho(G)` are astronomically large (`2^273 * 3^364 * ...`), but
//! only their exponents are ever inspected, so the representation is a sorted
//! map from prime to exponent. Exponent arithmetic is checked; overflow is an
//! error, never a wraparound.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::nt;
use crate::parse::ParseDiagnostic;

/// Largest input accepted by [`FactoredInt::factor`].
pub const FACTOR_LIMIT: u64 = (1 << 63) - 1;

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactoredInt {
    // invariant: every key prime, every value >= 1
    factors: BTreeMap<u64, u64>,
}

impl FactoredInt {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn factor(n: u64) -> Result<Self> {
        if n > FACTOR_LIMIT {
            return Err(Error::TooLargeToFactor(n));
        }
        Ok(Self { factors: nt::factorize(n)?.into_iter().collect() })
    }

    pub fn prime_power(p: u64, e: u64) -> Result<Self> {
        if !nt::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut factors = BTreeMap::new();
        if e > 0 {
            factors.insert(p, e);
        }
        Ok(Self { factors })
    }

    /// Builds from `(prime, exponent)` pairs; zero exponents are dropped and
    /// repeated primes accumulate.
    pub fn from_pairs<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut out = Self::one();
        for (p, e) in pairs {
            out = out.checked_mul(&Self::prime_power(p, e)?)?;
        }
        Ok(out)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let mut factors = self.factors.clone();
        for (&p, &e) in &other.factors {
            let slot = factors.entry(p).or_insert(0);
            *slot = slot.checked_add(e).ok_or(Error::ExponentOverflow)?;
        }
        Ok(Self { factors })
    }

    pub fn checked_pow(&self, e: u64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one());
        }
        let factors = self
            .factors
            .iter()
            .map(|(&p, &a)| a.checked_mul(e).map(|x| (p, x)).ok_or(Error::ExponentOverflow))
            .collect::<Result<_>>()?;
        Ok(Self { factors })
    }

    /// `[n]_p`: the exponent of the prime `p`, zero when absent.
    pub fn exp_of(&self, p: u64) -> Result<u64> {
        if !nt::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(self.factors.get(&p).copied().unwrap_or(0))
    }

    /// `Exp(n)`: the set of exponents.
    pub fn exp_set(&self) -> BTreeSet<u64> {
        self.factors.values().copied().collect()
    }

    /// `pi(n)`: the set of prime divisors.
    pub fn primes(&self) -> BTreeSet<u64> {
        self.factors.keys().copied().collect()
    }

    /// Ascending `(prime, exponent)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.factors.iter().map(|(&p, &e)| (p, e))
    }

    /// Sum of all exponents (`Omega(n)`).
    pub fn exponent_sum(&self) -> Result<u64> {
        self.factors.values().try_fold(0u64, |acc, &e| acc.checked_add(e)).ok_or(Error::ExponentOverflow)
    }

    /// The plain value, when it fits in a `u64`.
    pub fn to_u64(&self) -> Option<u64> {
        let mut acc = 1u64;
        for (&p, &e) in &self.factors {
            let e = u32::try_from(e).ok()?;
            acc = acc.checked_mul(p.checked_pow(e)?)?;
        }
        Some(acc)
    }
}

impl fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{p}^{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn read_uint(text: &str, pos: &mut usize, what: &str) -> core::result::Result<u64, ParseDiagnostic> {
    let bytes = text.as_bytes();
    let start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return Err(ParseDiagnostic::at(text, start, what));
    }
    text[start..*pos].parse::<u64>().map_err(|_| ParseDiagnostic::new(start, "integer below 2^64", &text[start..*pos]))
}

/// Parses the canonical rendering `p1^e1*p2^e2*...` (or `1`). Primes must be
/// strictly ascending and every exponent explicit and positive.
impl FromStr for FactoredInt {
    type Err = ParseDiagnostic;

    fn from_str(text: &str) -> core::result::Result<Self, ParseDiagnostic> {
        if text == "1" {
            return Ok(Self::one());
        }
        let mut factors = BTreeMap::new();
        let mut pos = 0usize;
        let mut last = 0u64;
        loop {
            let start = pos;
            let p = read_uint(text, &mut pos, "prime")?;
            if !nt::is_prime(p) {
                return Err(ParseDiagnostic::new(start, "prime", &p.to_string()));
            }
            if p <= last {
                return Err(ParseDiagnostic::new(start, "prime larger than the previous one", &p.to_string()));
            }
            if text.as_bytes().get(pos) != Some(&b'^') {
                return Err(ParseDiagnostic::at(text, pos, "'^'"));
            }
            pos += 1;
            let estart = pos;
            let e = read_uint(text, &mut pos, "exponent")?;
            if e == 0 {
                return Err(ParseDiagnostic::new(estart, "positive exponent", "0"));
            }
            factors.insert(p, e);
            last = p;
            match text.as_bytes().get(pos) {
                None => break,
                Some(b'*') => pos += 1,
                Some(_) => return Err(ParseDiagnostic::at(text, pos, "'*' or end of input")),
            }
        }
        Ok(Self { factors })
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for FactoredInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Renders an exponent set as `{a,b,c}` in ascending order.
pub fn render_exponents<'a, I: IntoIterator<Item = &'a u64>>(values: I) -> alloc::string::String {
    let parts: Vec<alloc::string::String> = values.into_iter().map(|v| v.to_string()).collect();
    alloc::format!("{{{}}}", parts.join(","))
}
