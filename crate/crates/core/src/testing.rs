//! Dependence-corrected rank tests.
//!
//! All three designs standardize a centered statistic by the square root of a
//! lag-window long-run variance estimate:
//!
//! ```text
//! T = sqrt(n) (U - 1/2) / sqrt(max(V_n, 0))
//! ```
//!
//! When `V_n <= 0` the statistic is reported as undefined rather than
//! infinite.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::erf::{erfc, erfc_inv};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TimeSeries;
use crate::ustat::{count_pairs_sorted, TiePolicy};
use crate::varest::{covariance_profile, one_sample_variance, variance_estimator, BandwidthConfig};

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal quantile, defined on the open interval `(0, 1)`.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "normal quantile needs p in (0, 1), got {p}"
        )));
    }
    Ok(-std::f64::consts::SQRT_2 * erfc_inv(2.0 * p))
}

/// Direction of the alternative hypothesis for `pi = P(X < Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    /// `pi > 1/2`: Y weakly dominates X.
    Greater,
    /// `pi < 1/2`
    Less,
    /// `pi != 1/2`. The one-sided p-value is then reported in the `greater`
    /// direction.
    #[default]
    TwoSided,
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alternative::Greater => "greater",
            Alternative::Less => "less",
            Alternative::TwoSided => "two-sided",
        })
    }
}

impl FromStr for Alternative {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greater" => Ok(Alternative::Greater),
            "less" => Ok(Alternative::Less),
            "two-sided" | "two_sided" => Ok(Alternative::TwoSided),
            other => Err(Error::InvalidParameter(format!("unknown alternative '{other}'"))),
        }
    }
}

/// `(p_one_sided, p_two_sided)` for a finite statistic under the N(0,1) limit.
pub fn p_values<T: Scalar>(t: T, alternative: Alternative) -> (T, T) {
    let z = t.to_f64_lossy();
    let one = match alternative {
        Alternative::Less => normal_cdf(z),
        Alternative::Greater | Alternative::TwoSided => normal_cdf(-z),
    };
    let two = (2.0 * normal_cdf(-z.abs())).min(1.0);
    (T::from_f64_lossy(one), T::from_f64_lossy(two))
}

/// Known reference law for the one-sample test. `survival(t) = mu((t, inf))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KnownDistribution {
    Normal { mu: f64, sigma: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl KnownDistribution {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite() && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "normal({mu}, {sigma}) needs finite mu and sigma > 0"
            )));
        }
        Ok(Self::Normal { mu, sigma })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "uniform({lo}, {hi}) needs finite lo < hi"
            )));
        }
        Ok(Self::Uniform { lo, hi })
    }

    pub fn survival(&self, t: f64) -> f64 {
        match *self {
            Self::Normal { mu, sigma } => normal_cdf((mu - t) / sigma),
            Self::Uniform { lo, hi } => {
                if t < lo {
                    1.0
                } else if t >= hi {
                    0.0
                } else {
                    (hi - t) / (hi - lo)
                }
            }
        }
    }
}

impl FromStr for KnownDistribution {
    type Err = Error;

    /// `normal:MU,SIGMA` or `uniform:LO,HI`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad distribution '{s}'"));
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<f64> = args
            .split(',')
            .map(|a| a.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        if nums.len() != 2 {
            return Err(bad());
        }
        match kind.trim() {
            "normal" => Self::normal(nums[0], nums[1]),
            "uniform" => Self::uniform(nums[0], nums[1]),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for KnownDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Normal { mu, sigma } => write!(f, "normal:{mu},{sigma}"),
            Self::Uniform { lo, hi } => write!(f, "uniform:{lo},{hi}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestDesign {
    TwoSample,
    OneSample,
    Adjacent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Warning {
    NonpositiveVariance,
    TiesUnderStrict,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Warning::NonpositiveVariance => "nonpositive-variance",
            Warning::TiesUnderStrict => "ties-under-strict",
        })
    }
}

/// Outcome of one corrected test.
///
/// `u_stat` is the U-statistic, or the mean of `H(X_i)` for the one-sample
/// design (where `m` is 0 and `b_lag` is 0). `t_stat` and the p-values are
/// `None` exactly when `v_n <= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport<T> {
    pub design: TestDesign,
    pub u_stat: T,
    pub center: T,
    pub v_n: T,
    pub t_stat: Option<T>,
    pub p_one_sided: Option<T>,
    pub p_two_sided: Option<T>,
    pub alternative: Alternative,
    pub ties: TiePolicy,
    pub n: usize,
    pub m: usize,
    pub a_lag: usize,
    pub b_lag: usize,
    pub warnings: Vec<Warning>,
}

impl<T: Scalar> TestReport<T> {
    pub fn is_defined(&self) -> bool {
        self.t_stat.is_some()
    }

    pub fn has_warning(&self, w: Warning) -> bool {
        self.warnings.contains(&w)
    }

    /// One-sided rejection at `level`; `None` when the statistic is undefined.
    pub fn reject_one_sided(&self, level: f64) -> Option<bool> {
        self.p_one_sided.map(|p| p.to_f64_lossy() < level)
    }

    pub fn reject_two_sided(&self, level: f64) -> Option<bool> {
        self.p_two_sided.map(|p| p.to_f64_lossy() < level)
    }
}

#[allow(clippy::too_many_arguments)]
fn finalize<T: Scalar>(
    design: TestDesign,
    u_stat: T,
    center: T,
    v_n: T,
    bw: &BandwidthConfig,
    n: usize,
    m: usize,
    mut warnings: Vec<Warning>,
) -> TestReport<T> {
    let (t_stat, p_one_sided, p_two_sided) = if v_n > T::zero() {
        let t = T::from_usize_lossy(n).sqrt() * (u_stat - center) / v_n.sqrt();
        let (p1, p2) = p_values(t, bw.alternative);
        (Some(t), Some(p1), Some(p2))
    } else {
        warnings.push(Warning::NonpositiveVariance);
        (None, None, None)
    };
    TestReport {
        design,
        u_stat,
        center,
        v_n,
        t_stat,
        p_one_sided,
        p_two_sided,
        alternative: bw.alternative,
        ties: bw.ties,
        n,
        m,
        a_lag: bw.a_lag,
        b_lag: bw.b_lag,
        warnings,
    }
}

fn check_lag(lag: usize, len: usize) -> Result<()> {
    if lag >= len {
        Err(Error::LagExceedsSample { lag, len })
    } else {
        Ok(())
    }
}

fn check_center<T: Scalar>(center: T) -> Result<()> {
    if center > T::zero() && center < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "center must lie in (0, 1), got {center}"
        )))
    }
}

fn has_duplicates<T: Scalar>(sorted: &[T]) -> bool {
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Scores of each observation against the other sample's sorted values.
///
/// `above` counts strictly greater (resp. `below` strictly smaller) values;
/// under half-weight ties an equal value adds 1/2, so the mean of the X
/// scores equals `U` under either policy.
fn projected_scores<T: Scalar>(
    values: &[T],
    other_sorted: &[T],
    ties: TiePolicy,
    above: bool,
) -> Vec<T> {
    let len = T::from_usize_lossy(other_sorted.len());
    let half = T::from_f64_lossy(0.5);
    values
        .iter()
        .map(|&t| {
            let lt = other_sorted.partition_point(|&v| v < t);
            let le = other_sorted.partition_point(|&v| v <= t);
            let strict = if above { other_sorted.len() - le } else { lt };
            let score = T::from_usize_lossy(strict);
            match ties {
                TiePolicy::Strict => score / len,
                TiePolicy::HalfWeight => (score + half * T::from_usize_lossy(le - lt)) / len,
            }
        })
        .collect()
}

/// The sequences `H_m(X_i)` and `G_n(Y_j)` whose autocovariances enter `V_n`.
pub fn projected_sequences<T: Scalar>(
    x: &TimeSeries<T>,
    y: &TimeSeries<T>,
    ties: TiePolicy,
) -> (Vec<T>, Vec<T>) {
    let (sx, sy) = (x.sorted(), y.sorted());
    (
        projected_scores(x, &sy, ties, true),
        projected_scores(y, &sx, ties, false),
    )
}

fn two_block_test<T: Scalar>(
    design: TestDesign,
    x: &TimeSeries<T>,
    y: &TimeSeries<T>,
    bw: &BandwidthConfig,
    center: T,
) -> Result<TestReport<T>> {
    let (n, m) = (x.len(), y.len());
    check_lag(bw.a_lag, n)?;
    check_lag(bw.b_lag, m)?;
    check_center(center)?;

    let sx = x.sorted();
    let sy = y.sorted();
    let counts = count_pairs_sorted(&sx, &sy);
    let u_stat = counts.u_statistic(bw.ties);

    let mut warnings = Vec::new();
    if bw.ties == TiePolicy::Strict && (counts.tied > 0 || has_duplicates(&sx) || has_duplicates(&sy)) {
        log::warn!("ties present in the data while scoring pairs strictly");
        warnings.push(Warning::TiesUnderStrict);
    }

    // H_m(X_i) against Y, G_n(Y_j) against X
    let h_x = projected_scores(x, &sy, bw.ties, true);
    let g_y = projected_scores(y, &sx, bw.ties, false);
    let gx = covariance_profile(&h_x, bw.a_lag)?;
    let gy = covariance_profile(&g_y, bw.b_lag)?;
    let ratio = T::from_usize_lossy(n) / T::from_usize_lossy(m);
    let v_n = variance_estimator(&gx, &gy, ratio, bw)?;

    Ok(finalize(design, u_stat, center, v_n, bw, n, m, warnings))
}

/// Corrected two-sample test of `pi = 1/2` for independent samples.
pub fn two_sample_test<T: Scalar>(
    x: &TimeSeries<T>,
    y: &TimeSeries<T>,
    bw: &BandwidthConfig,
) -> Result<TestReport<T>> {
    two_block_test(TestDesign::TwoSample, x, y, bw, T::from_f64_lossy(0.5))
}

/// As [`two_sample_test`] with `center` in place of 1/2 in the numerator.
pub fn two_sample_test_centered<T: Scalar>(
    x: &TimeSeries<T>,
    y: &TimeSeries<T>,
    bw: &BandwidthConfig,
    center: T,
) -> Result<TestReport<T>> {
    two_block_test(TestDesign::TwoSample, x, y, bw, center)
}

/// Test of weak domination between the law of `x` and a known distribution,
/// based on the mean of `H(X_i)`.
pub fn one_sample_test<T: Scalar>(
    x: &TimeSeries<T>,
    dist: &KnownDistribution,
    a_lag: usize,
    alternative: Alternative,
) -> Result<TestReport<T>> {
    one_sample_test_centered(x, dist, a_lag, alternative, T::from_f64_lossy(0.5))
}

pub fn one_sample_test_centered<T: Scalar>(
    x: &TimeSeries<T>,
    dist: &KnownDistribution,
    a_lag: usize,
    alternative: Alternative,
    center: T,
) -> Result<TestReport<T>> {
    let n = x.len();
    check_lag(a_lag, n)?;
    check_center(center)?;
    let h: Vec<T> = x
        .iter()
        .map(|&v| T::from_f64_lossy(dist.survival(v.to_f64_lossy())))
        .collect();
    let h_bar = h.iter().fold(T::zero(), |acc, &v| acc + v) / T::from_usize_lossy(n);
    let profile = covariance_profile(&h, a_lag)?;
    let v_n = one_sample_variance(&profile, a_lag)?;
    let bw = BandwidthConfig {
        a_lag,
        b_lag: 0,
        ties: TiePolicy::Strict,
        alternative,
    };
    Ok(finalize(TestDesign::OneSample, h_bar, center, v_n, &bw, n, 0, Vec::new()))
}

/// Two adjacent blocks of one series: `x = series[..split]`,
/// `y = series[split..]`.
///
/// Same pipeline as [`two_sample_test`]. The limit theory for this design
/// needs the stronger growth rule `a_lag = o(sqrt(n)/log n)` and a monotone
/// map between the blocks' underlying process; neither is checked.
pub fn adjacent_test<T: Scalar>(
    series: &TimeSeries<T>,
    split: usize,
    bw: &BandwidthConfig,
) -> Result<TestReport<T>> {
    adjacent_test_centered(series, split, bw, T::from_f64_lossy(0.5))
}

pub fn adjacent_test_centered<T: Scalar>(
    series: &TimeSeries<T>,
    split: usize,
    bw: &BandwidthConfig,
    center: T,
) -> Result<TestReport<T>> {
    let len = series.len();
    if split == 0 || split >= len {
        return Err(Error::InvalidSplit { split, len });
    }
    let x = series.slice(0..split)?;
    let y = series.slice(split..len)?;
    two_block_test(TestDesign::Adjacent, &x, &y, bw, center)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ts(v: &[f64]) -> TimeSeries<f64> {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    // Composite Simpson integration of the standard normal density from 0.
    fn cdf_by_quadrature(z: f64) -> f64 {
        let steps = 20_000;
        let h = z / steps as f64;
        let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut acc = phi(0.0) + phi(z);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * phi(i as f64 * h);
        }
        0.5 + acc * h / 3.0
    }

    fn quantile_by_bisection(p: f64) -> f64 {
        let (mut lo, mut hi) = (-10.0, 10.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if cdf_by_quadrature(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn normal_cdf_against_quadrature() {
        assert_eq!(normal_cdf(0.0), 0.5);
        let oracle = cdf_by_quadrature(1.96);
        assert!((oracle - 0.9750021).abs() < 1e-7);
        assert!((normal_cdf(1.96) - oracle).abs() < 1e-7);
        for z in [-4.0, -2.5, -1.0, -0.3, 0.7, 1.645, 3.2] {
            assert!((normal_cdf(z) - cdf_by_quadrature(z)).abs() < 1e-7, "z = {z}");
        }
    }

    #[test]
    fn normal_quantile_against_bisection() {
        let oracle = quantile_by_bisection(0.975);
        assert!((oracle - 1.959964).abs() < 1e-6);
        assert!((normal_quantile(0.975).unwrap() - oracle).abs() < 1e-6);
        for p in [0.001, 0.05, 0.3, 0.5, 0.8, 0.999] {
            let q = normal_quantile(p).unwrap();
            assert!((q - quantile_by_bisection(p)).abs() < 1e-6, "p = {p}");
            assert!((normal_cdf(q) - p).abs() < 1e-9);
        }
        assert!(normal_quantile(0.0).is_err());
        assert!(normal_quantile(1.0).is_err());
        assert!(normal_quantile(f64::NAN).is_err());
    }

    #[test]
    fn p_value_examples() {
        let (_, two) = p_values(1.96f64, Alternative::TwoSided);
        assert!((two - 0.05).abs() < 1e-4);
        let (one, two) = p_values(0.0f64, Alternative::Greater);
        assert_eq!((one, two), (0.5, 1.0));
        let (one, _) = p_values(1.645f64, Alternative::Greater);
        assert!((one - 0.05).abs() < 2e-4);
        let (less, _) = p_values(1.645f64, Alternative::Less);
        assert!((less - 0.95).abs() < 2e-4);
    }

    #[test]
    fn two_sample_hand_example() {
        let r = two_sample_test(&ts(&[1., 2.]), &ts(&[3., 4.]), &BandwidthConfig::new(0, 0)).unwrap();
        assert_eq!(r.u_stat, 1.0);
        assert_eq!(r.v_n, 0.0);
        assert_eq!(r.t_stat, None);
        assert_eq!(r.p_two_sided, None);
        assert!(r.has_warning(Warning::NonpositiveVariance));
        assert!(!r.has_warning(Warning::TiesUnderStrict));
    }

    #[test]
    fn identical_constants_warn_ties() {
        let r = two_sample_test(&ts(&[2.0; 5]), &ts(&[2.0; 5]), &BandwidthConfig::new(0, 0)).unwrap();
        assert_eq!(r.u_stat, 0.0);
        assert!(r.has_warning(Warning::TiesUnderStrict));
        assert!(r.has_warning(Warning::NonpositiveVariance));
    }

    #[test]
    fn lag_preconditions() {
        let x = ts(&[1., 2., 3.]);
        let y = ts(&[0.5, 2.5]);
        assert!(matches!(
            two_sample_test(&x, &y, &BandwidthConfig::new(3, 0)),
            Err(Error::LagExceedsSample { lag: 3, len: 3 })
        ));
        assert!(two_sample_test(&x, &y, &BandwidthConfig::new(0, 2)).is_err());
        assert!(two_sample_test(&x, &y, &BandwidthConfig::new(2, 1)).is_ok());
    }

    #[test]
    fn one_sample_examples() {
        let dist = KnownDistribution::normal(0.3, 1.0).unwrap();
        let r = one_sample_test(&ts(&[0.3]), &dist, 0, Alternative::Greater).unwrap();
        assert_eq!(r.u_stat, 0.5);
        assert_eq!(r.t_stat, None);
        assert!(r.has_warning(Warning::NonpositiveVariance));

        let shifted: Vec<f64> = (0..200).map(|i| 50.0 + (i as f64 * 0.37).sin()).collect();
        let r = one_sample_test(&ts(&shifted), &dist, 2, Alternative::Greater).unwrap();
        assert!(r.u_stat < 1e-12);
        // every H(X_i) underflows to 0 here, so v_n is 0 as well
        assert!(r.t_stat.is_none());

        let mild: Vec<f64> = (0..400).map(|i| 3.0 + (i as f64 * 0.37).sin()).collect();
        let r = one_sample_test(&ts(&mild), &dist, 2, Alternative::Greater).unwrap();
        assert!(r.t_stat.unwrap() < -10.0);
        assert!(r.p_one_sided.unwrap() > 0.999);
    }

    #[test]
    fn known_distribution_parsing_and_limits() {
        let n: KnownDistribution = "normal:0,1".parse().unwrap();
        assert_eq!(n, KnownDistribution::Normal { mu: 0.0, sigma: 1.0 });
        let u: KnownDistribution = "uniform:0,1".parse().unwrap();
        assert_eq!(u.survival(0.25), 0.75);
        assert_eq!(u.survival(-1.0), 1.0);
        assert_eq!(u.survival(1.0), 0.0);
        assert!(n.survival(-40.0) > 1.0 - 1e-7);
        assert!(n.survival(40.0) < 1e-7);
        for bad in ["normal:0", "normal:0,-1", "cauchy:0,1", "uniform:1,0", "normal0,1"] {
            assert!(bad.parse::<KnownDistribution>().is_err(), "{bad}");
        }
    }

    #[test]
    fn adjacent_examples() {
        let s = ts(&[1., 2., 3., 4.]);
        let r = adjacent_test(&s, 2, &BandwidthConfig::new(0, 0)).unwrap();
        assert_eq!(r.u_stat, 1.0);
        assert_eq!(r.design, TestDesign::Adjacent);
        assert!(matches!(
            adjacent_test(&s, 0, &BandwidthConfig::new(0, 0)),
            Err(Error::InvalidSplit { split: 0, len: 4 })
        ));
        assert!(adjacent_test(&s, 4, &BandwidthConfig::new(0, 0)).is_err());
    }

    fn distinct_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (4usize..40).prop_flat_map(|n| {
            prop::collection::hash_set(-10_000i32..10_000, 2 * n).prop_map(move |set| {
                let v: Vec<f64> = set.into_iter().map(|k| k as f64 / 100.0).collect();
                (v[..n].to_vec(), v[n..].to_vec())
            })
        })
    }

    fn check_consistency(r: &TestReport<f64>) -> std::result::Result<(), TestCaseError> {
        if r.v_n > 0.0 {
            let t = r.t_stat.unwrap();
            let expect = (r.n as f64).sqrt() * (r.u_stat - r.center) / r.v_n.sqrt();
            prop_assert!((t - expect).abs() <= 1e-12 * expect.abs().max(1.0));
            let p2 = r.p_two_sided.unwrap();
            prop_assert!((p2 - 2.0 * (1.0 - normal_cdf(t.abs()))).abs() < 1e-12);
            if r.alternative == Alternative::Greater && t >= 0.0 {
                prop_assert!(p2 >= r.p_one_sided.unwrap());
            }
        } else {
            prop_assert!(r.t_stat.is_none() && r.p_one_sided.is_none() && r.p_two_sided.is_none());
            prop_assert!(r.has_warning(Warning::NonpositiveVariance));
        }
        Ok(())
    }

    proptest! {
        #[test]
        fn swap_antisymmetry((x, y) in distinct_pair(), a in 0usize..3, b in 0usize..3) {
            let (x, y) = (ts(&x), ts(&y));
            let fwd = two_sample_test(&x, &y, &BandwidthConfig::new(a, b)).unwrap();
            let rev = two_sample_test(&y, &x, &BandwidthConfig::new(b, a)).unwrap();
            prop_assert!((fwd.u_stat - (1.0 - rev.u_stat)).abs() < 1e-12);
            prop_assert!((fwd.v_n - rev.v_n).abs() < 1e-10);
            if let (Some(t1), Some(t2)) = (fwd.t_stat, rev.t_stat) {
                prop_assert!((t1 + t2).abs() < 1e-10 * t1.abs().max(1.0));
            }
        }

        #[test]
        fn monotone_invariance(
            x in prop::collection::vec(-3.0f64..3.0, 3..40),
            y in prop::collection::vec(-3.0f64..3.0, 3..40),
            a in 0usize..3, b in 0usize..3,
            half in proptest::bool::ANY,
        ) {
            let ties = if half { TiePolicy::HalfWeight } else { TiePolicy::Strict };
            let bw = BandwidthConfig::new(a, b).with_ties(ties);
            let f = |t: f64| t.powi(3) + 2.0 * t;
            let base = two_sample_test(&ts(&x), &ts(&y), &bw).unwrap();
            let tr = two_sample_test(&ts(&x).map(f).unwrap(), &ts(&y).map(f).unwrap(), &bw).unwrap();
            prop_assert_eq!(base.u_stat, tr.u_stat);
            prop_assert_eq!(base.v_n, tr.v_n);
            prop_assert_eq!(base.t_stat, tr.t_stat);
        }

        #[test]
        fn report_consistency(
            x in prop::collection::vec(-3.0f64..3.0, 1..40),
            y in prop::collection::vec(-3.0f64..3.0, 1..40),
            alt in prop::sample::select(vec![Alternative::Greater, Alternative::Less, Alternative::TwoSided]),
        ) {
            let bw = BandwidthConfig::new(0, 0).with_alternative(alt);
            check_consistency(&two_sample_test(&ts(&x), &ts(&y), &bw).unwrap())?;
            let mut joined = x.clone();
            joined.extend_from_slice(&y);
            check_consistency(&adjacent_test(&ts(&joined), x.len(), &bw).unwrap())?;
            let dist = KnownDistribution::normal(0.0, 1.0).unwrap();
            check_consistency(&one_sample_test(&ts(&x), &dist, 0, alt).unwrap())?;
        }

        #[test]
        fn adjacent_matches_two_sample(
            x in prop::collection::vec(-3.0f64..3.0, 2..40),
            y in prop::collection::vec(-3.0f64..3.0, 2..40),
        ) {
            let bw = BandwidthConfig::new(1, 1);
            let mut joined = x.clone();
            joined.extend_from_slice(&y);
            let adj = adjacent_test(&ts(&joined), x.len(), &bw).unwrap();
            let two = two_sample_test(&ts(&x), &ts(&y), &bw).unwrap();
            prop_assert_eq!(adj.u_stat, two.u_stat);
            prop_assert_eq!(adj.v_n, two.v_n);
            prop_assert_eq!(adj.t_stat, two.t_stat);
        }
    }
}
