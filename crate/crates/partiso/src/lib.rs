//! JSON formats, certificate verification, randomized suites and the
//! command-line front end for `partiso-core`.

pub mod cli;
pub mod format;
pub mod suite;
pub mod verify;
