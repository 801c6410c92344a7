//! The two-sample U-statistic and the empirical functions it is built from.
//!
//! `U_n = (1/nm) #{(i, j) : X_i < Y_j}`. Counting is done on sorted copies
//! with a two-pointer sweep, so the cost is dominated by the two sorts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{sort_finite, TimeSeries};

/// How a pair with `X_i == Y_j` is scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiePolicy {
    /// `1{X_i < Y_j}`: an equal pair scores 0.
    #[default]
    Strict,
    /// An equal pair scores 1/2.
    HalfWeight,
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TiePolicy::Strict => "strict",
            TiePolicy::HalfWeight => "half-weight",
        })
    }
}

impl FromStr for TiePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(TiePolicy::Strict),
            "half-weight" | "half" => Ok(TiePolicy::HalfWeight),
            other => Err(Error::InvalidParameter(format!("unknown tie policy '{other}'"))),
        }
    }
}

/// Exact pair counts behind a U-statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    /// pairs with `x < y`
    pub below: u64,
    /// pairs with `x == y`
    pub tied: u64,
    pub n: usize,
    pub m: usize,
}

impl PairCounts {
    pub fn u_statistic<T: Scalar>(&self, ties: TiePolicy) -> T {
        let pairs = self.n as f64 * self.m as f64;
        let u = match ties {
            TiePolicy::Strict => self.below as f64 / pairs,
            // 2*below + tied is an exact integer; one division at the end
            TiePolicy::HalfWeight => (2 * self.below + self.tied) as f64 / (2.0 * pairs),
        };
        T::from_f64_lossy(u)
    }
}

/// Counts `x < y` and `x == y` pairs from two ascending slices.
pub fn count_pairs_sorted<T: Scalar>(xs: &[T], ys: &[T]) -> PairCounts {
    let m = ys.len();
    let mut lt = 0usize; // #{y < x}
    let mut le = 0usize; // #{y <= x}
    let mut below = 0u64;
    let mut tied = 0u64;
    for &x in xs {
        while lt < m && ys[lt] < x {
            lt += 1;
        }
        if le < lt {
            le = lt;
        }
        while le < m && ys[le] <= x {
            le += 1;
        }
        below += (m - le) as u64;
        tied += (le - lt) as u64;
    }
    PairCounts {
        below,
        tied,
        n: xs.len(),
        m,
    }
}

pub fn count_pairs<T: Scalar>(x: &TimeSeries<T>, y: &TimeSeries<T>) -> PairCounts {
    count_pairs_sorted(&x.sorted(), &y.sorted())
}

/// Mann-Whitney U-statistic, the fraction of cross pairs with `X_i < Y_j`.
pub fn compute_u<T: Scalar>(x: &TimeSeries<T>, y: &TimeSeries<T>, ties: TiePolicy) -> T {
    count_pairs(x, y).u_statistic(ties)
}

/// `t -> (1/m) #{j : Y_j > t}`, backed by one sorted copy of the sample.
#[derive(Debug, Clone)]
pub struct EmpiricalSurvival<T> {
    sorted: Vec<T>,
}

impl<T: Scalar> EmpiricalSurvival<T> {
    pub fn new(sample: &TimeSeries<T>) -> Self {
        Self {
            sorted: sample.sorted(),
        }
    }

    pub fn from_sorted(sorted: Vec<T>) -> Self {
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        Self { sorted }
    }

    pub fn count_above(&self, t: T) -> usize {
        self.sorted.len() - self.sorted.partition_point(|&v| v <= t)
    }

    /// Number of sample values equal to `t`.
    pub fn count_equal(&self, t: T) -> usize {
        self.sorted.partition_point(|&v| v <= t) - self.sorted.partition_point(|&v| v < t)
    }

    pub fn eval(&self, t: T) -> T {
        T::from_usize_lossy(self.count_above(t)) / T::from_usize_lossy(self.sorted.len())
    }

    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }
}

/// `t -> (1/n) #{i : X_i < t}`. Strict inequality, unlike the usual CDF.
#[derive(Debug, Clone)]
pub struct EmpiricalCdfStrict<T> {
    sorted: Vec<T>,
}

impl<T: Scalar> EmpiricalCdfStrict<T> {
    pub fn new(sample: &TimeSeries<T>) -> Self {
        Self {
            sorted: sample.sorted(),
        }
    }

    pub fn from_sorted(sorted: Vec<T>) -> Self {
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        Self { sorted }
    }

    pub fn count_below(&self, t: T) -> usize {
        self.sorted.partition_point(|&v| v < t)
    }

    pub fn count_equal(&self, t: T) -> usize {
        self.sorted.partition_point(|&v| v <= t) - self.count_below(t)
    }

    pub fn eval(&self, t: T) -> T {
        T::from_usize_lossy(self.count_below(t)) / T::from_usize_lossy(self.sorted.len())
    }

    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }
}

/// Fraction of `y` strictly above `t`. Build an [`EmpiricalSurvival`] when
/// evaluating at many points.
pub fn empirical_survival<T: Scalar>(t: T, y: &TimeSeries<T>) -> T {
    EmpiricalSurvival::new(y).eval(t)
}

/// Fraction of `x` strictly below `t`.
pub fn empirical_cdf_strict<T: Scalar>(t: T, x: &TimeSeries<T>) -> T {
    EmpiricalCdfStrict::new(x).eval(t)
}

/// Elementwise image of `x` under `g`; fails if `g` produces a non-finite value.
pub fn transform_series<T: Scalar>(x: &TimeSeries<T>, g: impl Fn(T) -> T) -> Result<TimeSeries<T>> {
    x.map(g)
}

/// The three summands of the Hoeffding decomposition of `sqrt(n) (U_n - pi)`.
///
/// With `f(x, y) = 1{x < y} - h(x) - g(y) + pi`:
///
/// ```text
/// degenerate = sqrt(n)/(nm) * sum_i sum_j f(X_i, Y_j)
/// x_term     = 1/sqrt(n)    * sum_i (h(X_i) - pi)
/// y_term     = sqrt(n)/m    * sum_j (g(Y_j) - pi)
/// ```
///
/// The three sum to `sqrt(n) (U_n - pi)` for any `h`, `g`, `pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingParts<T> {
    pub degenerate_term: T,
    pub x_term: T,
    pub y_term: T,
    pub pi_used: T,
}

impl<T: Scalar> HoeffdingParts<T> {
    pub fn total(&self) -> T {
        self.degenerate_term + self.x_term + self.y_term
    }
}

/// Splits `sqrt(n) (U_n - pi)` using the surrogate projections `h_y` (survival
/// of Y) and `g_x` (strict CDF of X). Uses the strict tie policy.
pub fn hoeffding_decompose<T: Scalar>(
    x: &TimeSeries<T>,
    y: &TimeSeries<T>,
    h_y: impl Fn(T) -> T,
    g_x: impl Fn(T) -> T,
    pi: T,
) -> HoeffdingParts<T> {
    let n = T::from_usize_lossy(x.len());
    let m = T::from_usize_lossy(y.len());
    let sqrt_n = n.sqrt();

    let sum_h: T = x.iter().fold(T::zero(), |acc, &v| acc + h_y(v));
    let sum_g: T = y.iter().fold(T::zero(), |acc, &v| acc + g_x(v));
    let below = T::from_f64_lossy(count_pairs(x, y).below as f64);

    // sum_ij f = #below - m*sum_h - n*sum_g + nm*pi
    let f_sum = below - m * sum_h - n * sum_g + n * m * pi;
    HoeffdingParts {
        degenerate_term: sqrt_n / (n * m) * f_sum,
        x_term: (sum_h - n * pi) / sqrt_n,
        y_term: sqrt_n / m * (sum_g - m * pi),
        pi_used: pi,
    }
}

/// Sort helper for callers holding raw slices.
pub fn sorted_copy<T: Scalar>(v: &[T]) -> Vec<T> {
    let mut out = v.to_vec();
    sort_finite(&mut out);
    out
}
