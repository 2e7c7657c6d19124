//! Commuting 3×3 matrix differential operators on the A₂ root system.
//!
//! The crate builds the operators symbolically over an exact differential
//! ring, composes and commutes them, and checks the identities they satisfy
//! (commutativity, the functional equation for the potential, gauge
//! equivalence, S₃ equivariance and the group-case radial-part formulas).
//!
//! Module map:
//! - [`diffring`]: exact differential polynomials in β, β′, coth per root pair
//! - [`elliptic`]: Jacobi sn/cn/dn and the numeric potential backends
//! - [`opalgebra`]: 3×3 matrix differential operators on ℝ³
//! - [`catalog`]: constructors for every named operator
//! - [`verify`]: check suites and structured reports
//! - [`cli`]: the `a2ops` command-line front end

pub mod catalog;
pub mod cli;
pub mod diffring;
pub mod elliptic;
mod error;
pub mod opalgebra;
pub mod verify;

pub use error::{Error, Result};
