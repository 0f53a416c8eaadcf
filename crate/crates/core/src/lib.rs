//! Exact products of element orders of finite groups.
//!
//! For a finite group `G`, `rho(G)` is the product of the orders of all its
//! elements. The value is never expanded: it lives as a [`FactoredInt`], a
//! prime-to-exponent map. The crate enumerates permutation groups, computes
//! their order spectra, evaluates `rho` both by enumeration and by closed
//! forms, checks the divisibility and parity constraints the exponents obey,
//! and runs a recognition pipeline that starts from the *set* of exponents of
//! `rho(G)` and narrows down which groups could have produced it.
//!
//! The crate is `no_std` with `alloc`; IO, caching and the command line live in
//! the `rho-lab` companion crate.

#![no_std]

extern crate alloc;

#[cfg(any(feature = "std", test))]
extern crate std;

mod error;

/// Bumped whenever a change could alter computed values; keys the result cache.
pub const KERNEL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod catalog;
pub mod construct;
pub mod exp_set;
pub mod factored;
pub mod group;
pub mod iso;
pub mod lemmas;
pub mod nt;
pub mod parse;
pub mod perm;
pub mod recognize;
pub mod rho;

pub use catalog::{Catalog, CatalogEntry, CatalogStore, Completeness};
pub use construct::{Builder, GroupSpec};
pub use error::{Error, Result};
pub use exp_set::ExpSet;
pub use factored::FactoredInt;
pub use group::{Fingerprint, FiniteGroup, OrderSpectrum, DEFAULT_ENUMERATION_CAP};
pub use lemmas::{CheckOutcome, GroupInvariants, LemmaId, Verdict, Witness};
pub use parse::ParseDiagnostic;
pub use perm::Permutation;
pub use recognize::{Branch, BranchStatus, Family, MatchedGroup, RecognitionReport, RecognizeOptions, Recognizer};
