//! # hoi-core
//!
//! Gaussian higher-order information measures for real symmetric covariance
//! matrices and complex Hermitian cross-spectral matrices.
//!
//! Every measure is a function of a positive definite matrix `S` and its
//! inverse, evaluated through standardized log-determinants:
//!
//! | Measure | Closed form (complex case) |
//! |---------|----------------------------|
//! | total correlation / coherence (TC) | `-ln det std(S)` |
//! | dual total correlation (DTC) | `-ln det std(S^-1)` |
//! | O-information | `TC - DTC` (positive: redundancy dominated) |
//! | TSE complexity | `TC + DTC` |
//! | redundancy-synergy index | `TC(X) - TC(X | y)` |
//!
//! Real-valued data carries a factor ½ on all of the above ([`FieldKind`]).
//!
//! On top of the whole-system measures the crate provides between-group
//! ("structured") variants over a [`Partition`], node and group connection
//! contributions, and a small spectral pipeline (AR simulation, Hann
//! periodogram, parametric AR spectra) that turns multichannel time series
//! into per-frequency measure tables.
//!
//! All quantities are in nats.

pub mod contributions;
pub mod error;
pub mod formats;
mod gaussian;
pub mod linalg;
pub mod measures;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod partition;
pub mod plot;
pub mod spectral;
pub mod structured;

pub use contributions::{
    kappa_dtc, kappa_oinfo, kappa_tc, kappa_tse, pi_dtc, pi_oinfo, pi_tc, pi_tse, ConnectionReport, ConnectionTarget,
};
pub use error::{Error, Result};
pub use linalg::{CholeskyFactor, FieldKind, HermitianMatrix, C64};
pub use measures::{
    dtc_trace_approx, dual_total_correlation, gaussian_entropy, lambda_rsi, o_information, oinfo_gradient, rsi,
    tc_trace_approx, total_correlation, tse_complexity, EntropyValue, MeasureReport,
};
pub use partition::Partition;
pub use structured::{sigma_dtc, sigma_oinfo, sigma_rsi, sigma_tc, sigma_tse, StructuredReport};
