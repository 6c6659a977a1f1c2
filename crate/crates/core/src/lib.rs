//! Decide whether a complex square matrix is similar to a partial isometry
//! (or to a product of two orthogonal projections), build an explicit
//! witness when it is, and check every certificate numerically.
//!
//! The crate is `no_std` and only needs `alloc`. JSON formats and the
//! command-line front end live in the `partiso` crate.
//!
//! ```
//! use partiso_core::{c64, CMat, Tolerances};
//! use partiso_core::construct::construct_similar_partial_isometry;
//!
//! let a = CMat::from_real(2, 2, &[0.0, 0.0, 0.0, 0.5]);
//! let cert = construct_similar_partial_isometry(&a, &Tolerances::default()).unwrap();
//! assert!(cert.residual_variety <= 1e-8);
//! assert!((cert.target[(1, 1)] - c64(0.5, 0.0)).norm() < 1e-12);
//! ```

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod construct;
pub mod decide;
mod error;
pub mod jordan;
pub mod linalg;
pub mod projections;
#[cfg(feature = "rand")]
pub mod sample;

pub use error::{Error, Result};
pub use linalg::{c64, CMat, Tolerances, C64};
