//! Count statistics of exchangeable, correlated binary events.
//!
//! `N` events whose joint law is invariant under permutations are described
//! by probability tables `P_k`, their correlation (Ursell) tables `G_k`, and
//! the scaled coefficients `C_k = N^k G_k(1, ..., 1)`. From a model truncated
//! at order `l_max` this crate computes
//!
//! * the exact count pmf at finite `N` ([`finite::finite_count_pmf`]),
//! * the `N -> ∞` limit through its characteristic function
//!   `exp(sum_l C_l (e^{iu} - 1)^l / l!)` ([`limit`]),
//! * brute-force oracles from full joints ([`ursell`], [`finite::count_pmf_from_joint`]),
//! * samplers and factorial-cumulant estimators ([`montecarlo`]).
//!
//! Numeric code is generic over [`Field`] (table and series arithmetic) or
//! [`Real`] (anything transcendental). The aliases below fix the scalar to
//! `f64`; [`DoubleDouble`] and [`Exact`] are available where more precision
//! is wanted.

pub mod combinatorics;
pub mod error;
pub mod finite;
pub mod limit;
pub mod model;
pub mod montecarlo;
pub mod pmf;
pub mod scalar;
pub mod table;
pub mod ursell;

pub use error::{Error, Result};
pub use model::{validate_model, ModelRecord, ModelWarning};
pub use montecarlo::EstimateReport;
pub use scalar::{Field, Real};
pub use table::TableKind;
pub use ursell::SetPartition;

/// Double-double scalar (about 32 significant digits).
pub type DoubleDouble = twofloat::TwoFloat;
/// Exact rational scalar.
pub type Exact = num_rational::BigRational;

pub type CorrelationModel = model::CorrelationModel<f64>;
pub type SymmetricTable = table::SymmetricTable<f64>;
pub type ExchangeableJoint = table::ExchangeableJoint<f64>;
pub type Pmf = pmf::Pmf<f64>;
pub type CfGrid = pmf::CfGrid<f64>;
pub type BivariatePolynomial = finite::BivariatePolynomial<f64>;
pub type ExponentPolynomial = limit::ExponentPolynomial<f64>;
pub type MixtureSpec = montecarlo::MixtureSpec<f64>;
