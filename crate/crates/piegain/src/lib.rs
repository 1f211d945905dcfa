//! Certified L2-gain bounds and passivity tests for linear ODE systems
//! coupled to 1-D PDEs through boundary conditions.
//!
//! The pipeline is: model the coupled system ([`system_model`]), rewrite its
//! dynamics over the boundary-condition-free fundamental state as a family of
//! polynomial-kernel integral operators ([`pqrs`]), parameterize positive
//! operators by positive semidefinite matrices ([`positivity`]), assemble the
//! storage-function inequalities as a semidefinite program ([`analysis`],
//! [`sdp`]), and cross-check every certified bound with independent numerical
//! estimators ([`oracle`]).
//!
//! System definitions are read from TOML documents ([`document`]); the
//! `piegain` binary exposes the validate / gain / passivity / verify / oracle
//! commands on top of this crate.

pub mod positivity;
pub mod pqrs;
pub mod quad;
pub mod symbolic;

// Force the system BLAS link that clarabel's PSD cone support requires.
use openblas_src as _;
