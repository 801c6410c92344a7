//! Mann-Whitney U-statistics for short-range dependent time series.
//!
//! The classical Mann-Whitney normal approximation assumes iid samples. When
//! either sample is serially dependent the variance of `sqrt(n) (U_n - 1/2)`
//! picks up the long-run covariances of the projected sequences `H_Y(X_i)` and
//! `G_X(Y_j)`. This crate estimates that long-run variance with a truncated lag
//! window and standardizes the statistic with it.
//!
//! Layout:
//!
//! * [`ustat`]: U-statistic, strict empirical survival / CDF functions and the
//!   Hoeffding decomposition.
//! * [`varest`]: lag-window autocovariances, variance estimators and a
//!   bandwidth advisor.
//! * [`testing`]: two-sample, one-sample and adjacent-sample tests.
//! * [`processes`]: reproducible generators (AR(1) chains, LSV intermittent
//!   maps, iid draws, a binary linear process).
//! * [`montecarlo`]: seeded, thread-count independent level/power studies.
//! * [`io`]: column files, covariance CSV and JSON report documents.
//!
//! The statistical core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the common `f64` instantiations.

pub mod error;
pub mod io;
pub mod montecarlo;
pub mod processes;
pub mod scalar;
pub mod series;
pub mod testing;
pub mod ustat;
pub mod varest;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use series::TimeSeries;
pub use testing::{Alternative, KnownDistribution, TestReport};
pub use ustat::{HoeffdingParts, TiePolicy};
pub use varest::{AutocovarianceProfile, BandwidthConfig};

/// Double precision series, the default for all generators and the CLI.
pub type Series = TimeSeries<f64>;
/// Single precision series.
pub type SeriesF32 = TimeSeries<f32>;
pub type Report = TestReport<f64>;
pub type ReportF32 = TestReport<f32>;
pub type Profile = AutocovarianceProfile<f64>;
pub type ProfileF32 = AutocovarianceProfile<f32>;
pub type Parts = HoeffdingParts<f64>;
