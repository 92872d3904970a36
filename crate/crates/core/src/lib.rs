//! Spectral analysis of the 2+1 fermionic trimer with zero-range interaction.
//!
//! Two identical fermions of unit mass interact with a third particle of mass
//! `m` through a contact interaction of strength `alpha`. Everything here is
//! organized around the radial reductions of the charge operator `T_lambda`
//! in each angular sector `ell`:
//!
//! - [`mass`]: mass parameters, the Efimov function and the thresholds `m*`, `m**`.
//! - [`special`]: Legendre polynomials, `phi_ell`, the constants `C_ell`, `theta`.
//! - [`quadrature`]: adaptive and Gauss rules on finite and half-infinite intervals.
//! - [`charge`]: sector quadratic forms, kernels, Mellin symbols, the W form.
//! - [`schur`]: Schur-test certificates for the absence of bound states.
//! - [`spectral`]: the Nystrom eigenproblem, existence threshold, witnesses.
//! - [`report`] and [`cli`]: configuration, CSV/JSON reports, command line.

// Parity tests read better as `% 2`, and `!(x > 0.0)` is how NaN gets rejected.
#![allow(clippy::manual_is_multiple_of, clippy::neg_cmp_op_on_partial_ord)]

pub mod charge;
pub mod cli;
pub mod error;
pub mod mass;
pub mod quadrature;
pub mod report;
pub mod roots;
pub mod schur;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use mass::MassParams;
pub use quadrature::{GridMap, QuadResult, RadialGrid};

/// 2 pi^2, the bottom of the essential spectrum of `T_1`.
pub const TWO_PI_SQ: f64 = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
