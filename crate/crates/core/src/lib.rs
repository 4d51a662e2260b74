//! R(p,q)-deformed quantum algebra toolkit.
//!
//! Deformed numbers and factorials, oscillator structure functions,
//! deformed calculus on truncated power series, special functions, Fock
//! realizations, coherent-state statistics, Rogers-Szegő polynomials and
//! numeric Hopf-axiom checks. Every identity is exposed as a residual
//! report so it can be gated on a tolerance.

pub mod calculus;
pub mod cli;
pub mod coherent;
pub mod error;
pub mod fock;
pub mod hopf;
pub mod numbers;
pub mod parallel;
pub mod polynomials;
pub mod report;
pub mod special;
pub mod spec;
pub mod structure;

pub use error::{Result, RpqError};
pub use report::{Check, Report};
pub use spec::{DeformationSpec, Kind, PrecisionPolicy};
