//! Command-line front end for `rho-lab-core`: the result cache, the
//! verification suites and the command implementations behind the binary.

pub mod cache;
pub mod commands;
pub mod verify;
