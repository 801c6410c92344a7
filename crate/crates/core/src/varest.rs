//! Lag-window estimation of the long-run variance of `sqrt(n) (U_n - pi)`.
//!
//! Autocovariances are normalized by the full sample length `n` at every lag
//! (not `n - k`), and centered at the full-sample mean.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::testing::Alternative;
use crate::ustat::TiePolicy;

/// Lag truncation for the two samples plus the test options that travel with
/// it.
///
/// `a_lag` must stay below the X sample length and `b_lag` below the Y
/// sample length. Consistency needs `a_lag = o(sqrt(n))` (and
/// `o(sqrt(n)/log n)` for adjacent blocks); at a fixed sample size these are
/// just constants chosen by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BandwidthConfig {
    pub a_lag: usize,
    pub b_lag: usize,
    #[serde(default)]
    pub ties: TiePolicy,
    #[serde(default)]
    pub alternative: Alternative,
}

impl BandwidthConfig {
    pub fn new(a_lag: usize, b_lag: usize) -> Self {
        Self {
            a_lag,
            b_lag,
            ..Self::default()
        }
    }

    pub fn with_alternative(mut self, alternative: Alternative) -> Self {
        self.alternative = alternative;
        self
    }

    pub fn with_ties(mut self, ties: TiePolicy) -> Self {
        self.ties = ties;
        self
    }
}

/// Empirical autocovariances `gamma[0..=L]` of one series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutocovarianceProfile<T> {
    gamma: Vec<T>,
    series_length: usize,
    band: T,
}

impl<T: Scalar> AutocovarianceProfile<T> {
    /// Wraps precomputed autocovariances. The band is `2/sqrt(series_length)`.
    pub fn from_parts(gamma: Vec<T>, series_length: usize) -> Result<Self> {
        if gamma.is_empty() || series_length == 0 {
            return Err(Error::EmptySample);
        }
        if gamma.len() > series_length {
            return Err(Error::LagExceedsSample {
                lag: gamma.len() - 1,
                len: series_length,
            });
        }
        if gamma[0] < T::zero() {
            return Err(Error::InvalidParameter(
                "lag-0 autocovariance must be nonnegative".into(),
            ));
        }
        let band = T::from_f64_lossy(2.0) / T::from_usize_lossy(series_length).sqrt();
        Ok(Self {
            gamma,
            series_length,
            band,
        })
    }

    pub fn gamma(&self) -> &[T] {
        &self.gamma
    }

    pub fn max_lag(&self) -> usize {
        self.gamma.len() - 1
    }

    pub fn series_length(&self) -> usize {
        self.series_length
    }

    pub fn band(&self) -> T {
        self.band
    }

    /// `gamma[0] + 2 * sum_{k=1..=lag} gamma[k]`.
    pub fn long_run_sum(&self, lag: usize) -> Result<T> {
        if lag > self.max_lag() {
            return Err(Error::ProfileTooShort {
                lag,
                max_lag: self.max_lag(),
            });
        }
        let two = T::from_f64_lossy(2.0);
        let tail = self.gamma[1..=lag]
            .iter()
            .fold(T::zero(), |acc, &g| acc + g);
        Ok(self.gamma[0] + two * tail)
    }
}

fn mean<T: Scalar>(z: &[T]) -> T {
    z.iter().fold(T::zero(), |acc, &v| acc + v) / T::from_usize_lossy(z.len())
}

fn autocov_centered<T: Scalar>(z: &[T], mean: T, k: usize) -> T {
    let n = z.len();
    let sum = z[..n - k]
        .iter()
        .zip(&z[k..])
        .fold(T::zero(), |acc, (&a, &b)| acc + (a - mean) * (b - mean));
    sum / T::from_usize_lossy(n)
}

/// `(1/n) sum_{i=1}^{n-k} (z_i - zbar)(z_{i+k} - zbar)`.
pub fn autocov_hat<T: Scalar>(z: &[T], k: usize) -> Result<T> {
    if z.is_empty() {
        return Err(Error::EmptySample);
    }
    if k >= z.len() {
        return Err(Error::LagExceedsSample { lag: k, len: z.len() });
    }
    Ok(autocov_centered(z, mean(z), k))
}

/// Autocovariances at lags `0..=max_lag`.
pub fn covariance_profile<T: Scalar>(z: &[T], max_lag: usize) -> Result<AutocovarianceProfile<T>> {
    if z.is_empty() {
        return Err(Error::EmptySample);
    }
    if max_lag >= z.len() {
        return Err(Error::LagExceedsSample {
            lag: max_lag,
            len: z.len(),
        });
    }
    let zbar = mean(z);
    let gamma = (0..=max_lag).map(|k| autocov_centered(z, zbar, k)).collect();
    AutocovarianceProfile::from_parts(gamma, z.len())
}

/// Two-sample long-run variance estimate
/// `gx(0) + 2 sum_{k<=a} gx(k) + (n/m) (gy(0) + 2 sum_{l<=b} gy(l))`.
///
/// May be negative; callers clamp.
pub fn variance_estimator<T: Scalar>(
    gx: &AutocovarianceProfile<T>,
    gy: &AutocovarianceProfile<T>,
    ratio_n_over_m: T,
    bw: &BandwidthConfig,
) -> Result<T> {
    if ratio_n_over_m <= T::zero() || !ratio_n_over_m.is_finite() {
        return Err(Error::InvalidParameter(
            "sample size ratio must be positive".into(),
        ));
    }
    Ok(gx.long_run_sum(bw.a_lag)? + ratio_n_over_m * gy.long_run_sum(bw.b_lag)?)
}

/// One-sample long-run variance estimate `g(0) + 2 sum_{k<=a} g(k)`.
pub fn one_sample_variance<T: Scalar>(gh: &AutocovarianceProfile<T>, a_lag: usize) -> Result<T> {
    gh.long_run_sum(a_lag)
}

/// Suggests a truncation lag from a covariance profile.
///
/// Returns the smallest `k` such that every `|gamma[j]|` with
/// `k < j <= min(k + window, L)` lies inside the `2/sqrt(n)` band. Falls back
/// to `L`. Advisory only.
pub fn bandwidth_advisor<T: Scalar>(profile: &AutocovarianceProfile<T>, window: usize) -> usize {
    let window = window.max(1);
    let max_lag = profile.max_lag();
    let inside: Vec<bool> = profile
        .gamma
        .iter()
        .map(|g| g.abs() < profile.band)
        .collect();
    (0..=max_lag)
        .find(|&k| {
            let hi = (k + window).min(max_lag);
            inside[k + 1..=hi.max(k)].iter().all(|&ok| ok)
        })
        .unwrap_or(max_lag)
}
