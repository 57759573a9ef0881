//! Exact and numerical computations around the derivative of the Ceresa
//! normal function in genus 3: the graded complexes attached to
//! V = Lambda^3 H / theta H with their cohomology, the quartic-indexed
//! bilinear forms Q_C, R_C, D_C, the 168-element matrix group of the Klein
//! quartic over Q(zeta_7), and genus-3 theta constants with the weight-18
//! form chi18.
//!
//! The exact layers (`exactnum`, `multilinear`, `ggcomplex`, `quartic`,
//! `autgroup`) never touch floating point; the `theta` layer works in
//! certified double precision with double-double exponent accumulation.
//! `verify` bundles the end-to-end check suites used by the CLI.

// index-style loops match the matrix arithmetic throughout
#![allow(clippy::needless_range_loop)]

pub mod autgroup;
pub mod error;
pub mod exactnum;
pub mod forms;
pub mod ggcomplex;
pub mod multilinear;
pub mod quartic;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};

/// Crate version, echoed in every JSON report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
