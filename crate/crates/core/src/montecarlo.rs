//! Seeded Monte-Carlo studies of the corrected tests.
//!
//! Trial `t` of every size row draws its X sample from stream `2t` and its Y
//! sample from stream `2t + 1` of the master seed (adjacent designs use
//! stream `2t` only). Rows therefore share random numbers across sample
//! sizes. Per-trial statistics are collected in trial order and reduced
//! sequentially, so a report depends only on the scenario and the seed, never
//! on the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::processes::{ProcessKind, RngContract, RNG_ALGORITHM};
use crate::series::TimeSeries;
use crate::testing::{
    adjacent_test_centered, one_sample_test_centered, two_sample_test_centered, KnownDistribution,
};
use crate::ustat::{compute_u, TiePolicy};
use crate::varest::BandwidthConfig;

pub const ONE_SIDED_THRESHOLD: f64 = 1.645;
pub const TWO_SIDED_THRESHOLD: f64 = 1.96;

/// The `(n, m)` ladder used throughout the reference studies.
pub const SIZE_LADDER: [(usize, usize); 5] = [(150, 100), (300, 200), (450, 300), (600, 400), (750, 500)];

pub const DEFAULT_TRIALS: usize = 2000;

/// Map applied to the second block of an adjacent design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PostTransform {
    Identity,
    /// `x -> x^p`, for nonnegative series
    Power { p: f64 },
}

impl PostTransform {
    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            PostTransform::Identity => x,
            PostTransform::Power { p } => x.powf(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Design {
    TwoSample {
        x: ProcessKind,
        y: ProcessKind,
    },
    OneSample {
        x: ProcessKind,
        dist: KnownDistribution,
    },
    /// One path of length `n + m`; the last `m` values go through `transform`.
    Adjacent {
        x: ProcessKind,
        transform: PostTransform,
    },
}

fn default_center() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub design: Design,
    pub sizes: Vec<(usize, usize)>,
    pub bw: BandwidthConfig,
    pub trials: usize,
    /// Replaces 1/2 in the numerator of the statistic.
    #[serde(default = "default_center")]
    pub center: f64,
}

impl Scenario {
    pub fn new(design: Design, sizes: Vec<(usize, usize)>, bw: BandwidthConfig, trials: usize) -> Self {
        Self {
            name: None,
            design,
            sizes,
            bw,
            trials,
            center: 0.5,
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn with_center(mut self, center: f64) -> Self {
        self.center = center;
        self
    }

    pub fn with_sizes(mut self, sizes: Vec<(usize, usize)>) -> Self {
        self.sizes = sizes;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidParameter(msg));
        if self.trials == 0 {
            return invalid("trials must be at least 1".into());
        }
        if self.sizes.is_empty() {
            return invalid("scenario needs at least one (n, m) size".into());
        }
        if !(self.center > 0.0 && self.center < 1.0) {
            return invalid(format!("center must lie in (0, 1), got {}", self.center));
        }
        let one_sample = matches!(self.design, Design::OneSample { .. });
        for &(n, m) in &self.sizes {
            if n == 0 || (m == 0 && !one_sample) {
                return invalid(format!("sample sizes must be positive, got ({n}, {m})"));
            }
            if self.bw.a_lag >= n || (!one_sample && self.bw.b_lag >= m) {
                return invalid(format!(
                    "lags ({}, {}) too large for sizes ({n}, {m})",
                    self.bw.a_lag, self.bw.b_lag
                ));
            }
        }
        match &self.design {
            Design::TwoSample { x, y } => {
                x.validate()?;
                y.validate()
            }
            Design::OneSample { x, .. } => x.validate(),
            Design::Adjacent { x, transform } => {
                if let PostTransform::Power { p } = transform {
                    if !(p.is_finite() && *p > 0.0) {
                        return invalid(format!("power transform needs p > 0, got {p}"));
                    }
                }
                x.validate()
            }
        }
    }

    /// Standardized statistic of one trial, `None` when `V_n <= 0`.
    pub fn run_trial(&self, n: usize, m: usize, master_seed: u64, trial: u64) -> Result<Option<f64>> {
        let stream = |id: u64| RngContract::new(master_seed, id).stream();
        let report = match &self.design {
            Design::TwoSample { x, y } => {
                let xs = x.generate(n, &mut stream(2 * trial))?;
                let ys = y.generate(m, &mut stream(2 * trial + 1))?;
                two_sample_test_centered(&xs, &ys, &self.bw, self.center)?
            }
            Design::OneSample { x, dist } => {
                let xs = x.generate(n, &mut stream(2 * trial))?;
                one_sample_test_centered(&xs, dist, self.bw.a_lag, self.bw.alternative, self.center)?
            }
            Design::Adjacent { x, transform } => {
                let path = x.generate(n + m, &mut stream(2 * trial))?;
                let mut values = path.into_values();
                for v in &mut values[n..] {
                    *v = transform.apply(*v);
                }
                adjacent_test_centered(&TimeSeries::new(values)?, n, &self.bw, self.center)?
            }
        };
        Ok(report.t_stat)
    }
}

/// Built-in scenarios reproducing the reference parameter sets, each on the
/// full size ladder with 2000 trials.
pub fn builtin_scenario(name: &str) -> Option<Scenario> {
    let ar1 = ProcessKind::Ar1Gauss { mu: 0.0, sigma: 2.0 };
    let iid = |mu: f64| ProcessKind::IidNormal { mu, sigma: 1.0 };
    let lsv = ProcessKind::lsv;
    let two = |x, y| Design::TwoSample { x, y };
    let adjacent = |transform| Design::Adjacent {
        x: lsv(0.25),
        transform,
    };
    let ladder = SIZE_LADDER.to_vec();
    let mk = |design, a, b| Scenario::new(design, ladder.clone(), BandwidthConfig::new(a, b), DEFAULT_TRIALS);

    let scenario = match name {
        "example1" => mk(two(ar1, iid(0.0)), 4, 0),
        "example1-uncorrected" => mk(two(ar1, iid(0.0)), 0, 0),
        "example1-a3" => mk(two(ar1, iid(0.0)), 3, 0),
        "example1-power" => mk(two(ar1, iid(0.2)), 4, 0),
        "example2" => mk(two(lsv(0.25), lsv(0.25)), 5, 5),
        "example2-uncorrected" => mk(two(lsv(0.25), lsv(0.25)), 0, 0),
        "example2-a4" => mk(two(lsv(0.25), lsv(0.25)), 4, 4),
        "example2-power" => mk(two(lsv(0.25), lsv(0.1)), 5, 4),
        "example2-power-centered" => mk(two(lsv(0.25), lsv(0.1)), 5, 4).with_center(0.529),
        "adjacent-uncorrected" => mk(adjacent(PostTransform::Identity), 0, 0),
        "adjacent-null" => mk(adjacent(PostTransform::Identity), 5, 5),
        "adjacent-power" => mk(adjacent(PostTransform::Power { p: 0.8 }), 5, 5),
        "iid-null" => Scenario::new(two(iid(0.0), iid(0.0)), vec![(500, 500)], BandwidthConfig::new(0, 0), 1000),
        _ => return None,
    };
    Some(scenario.named(name))
}

pub const BUILTIN_SCENARIOS: [&str; 13] = [
    "example1",
    "example1-uncorrected",
    "example1-a3",
    "example1-power",
    "example2",
    "example2-uncorrected",
    "example2-a4",
    "example2-power",
    "example2-power-centered",
    "adjacent-uncorrected",
    "adjacent-null",
    "adjacent-power",
    "iid-null",
];

/// Summary for one `(n, m)` size.
///
/// Rates and the variance are computed over defined trials only;
/// `est_variance` needs at least two of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McRow {
    pub n: usize,
    pub m: usize,
    pub est_variance: Option<f64>,
    pub mean_t: Option<f64>,
    pub rate_1645: Option<f64>,
    pub rate_196: Option<f64>,
    pub defined_count: usize,
    pub undefined_count: usize,
    pub trials: usize,
}

impl McRow {
    fn from_stats(n: usize, m: usize, stats: &[Option<f64>]) -> Self {
        let defined: Vec<f64> = stats.iter().flatten().copied().collect();
        let k = defined.len();
        let (mean_t, est_variance, rate_1645, rate_196) = if k == 0 {
            (None, None, None, None)
        } else {
            let kf = k as f64;
            let mean = defined.iter().sum::<f64>() / kf;
            let var = (k >= 2).then(|| defined.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (kf - 1.0));
            let r1 = defined.iter().filter(|&&t| t > ONE_SIDED_THRESHOLD).count() as f64 / kf;
            let r2 = defined.iter().filter(|&&t| t.abs() > TWO_SIDED_THRESHOLD).count() as f64 / kf;
            (Some(mean), var, Some(r1), Some(r2))
        };
        McRow {
            n,
            m,
            est_variance,
            mean_t,
            rate_1645,
            rate_196,
            defined_count: k,
            undefined_count: stats.len() - k,
            trials: stats.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub scenario: Scenario,
    pub rows: Vec<McRow>,
    pub master_seed: u64,
    pub rng_algorithm: String,
}

impl MonteCarloReport {
    pub fn row(&self, n: usize, m: usize) -> Option<&McRow> {
        self.rows.iter().find(|r| r.n == n && r.m == m)
    }
}

fn with_pool<R: Send>(threads: Option<usize>, job: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(job()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Runs every size row of `scenario`. `threads = None` uses rayon's global
/// pool.
pub fn run_scenario(scenario: &Scenario, master_seed: u64, threads: Option<usize>) -> Result<MonteCarloReport> {
    scenario.validate()?;
    let rows = with_pool(threads, || {
        scenario
            .sizes
            .iter()
            .map(|&(n, m)| {
                let stats = (0..scenario.trials as u64)
                    .into_par_iter()
                    .map(|t| scenario.run_trial(n, m, master_seed, t))
                    .collect::<Result<Vec<_>>>()?;
                Ok(McRow::from_stats(n, m, &stats))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(MonteCarloReport {
        scenario: scenario.clone(),
        rows,
        master_seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
    })
}

/// One large-sample realization of `U_n`, an estimate of `P(X < Y)`.
/// X uses stream 0 and Y stream 1 of `seed`.
pub fn estimate_pi(x: &ProcessKind, y: &ProcessKind, n: usize, m: usize, seed: u64) -> Result<f64> {
    let xs = x.generate(n, &mut RngContract::new(seed, 0).stream())?;
    let ys = y.generate(m, &mut RngContract::new(seed, 1).stream())?;
    Ok(compute_u(&xs, &ys, TiePolicy::Strict))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `sqrt(n) (U_n - pi)`
    SqrtN,
    /// `sqrt(n / log n) (U_n - pi)`, the boundary-case scaling
    SqrtNOverLogN,
}

impl Normalization {
    pub fn factor(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            Normalization::SqrtN => nf.sqrt(),
            Normalization::SqrtNOverLogN => (nf / nf.ln()).sqrt(),
        }
    }
}

/// Exploratory study of the tail of the normalized U-statistic under
/// slowly mixing inputs. Emits frequencies only; there is no pass/fail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailConfig {
    pub x: ProcessKind,
    pub y: ProcessKind,
    /// sample sizes; both samples have length `n`
    pub n_grid: Vec<usize>,
    pub thresholds: Vec<f64>,
    pub trials: usize,
    pub normalization: Normalization,
    /// centering value, typically from [`estimate_pi`]
    pub pi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub n: usize,
    /// `exceedance[k]` is the frequency of `normalized > thresholds[k]`
    pub exceedance: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailTable {
    pub config: TailConfig,
    pub rows: Vec<TailRow>,
    pub master_seed: u64,
    pub rng_algorithm: String,
}

/// Thresholds are sorted ascending, so each row is nonincreasing.
pub fn tail_diagnostic(config: &TailConfig, master_seed: u64, threads: Option<usize>) -> Result<TailTable> {
    if config.trials == 0 || config.n_grid.is_empty() || config.n_grid.iter().any(|&n| n < 2) {
        return Err(Error::InvalidParameter(
            "tail diagnostic needs trials >= 1 and sizes >= 2".into(),
        ));
    }
    if config.thresholds.iter().any(|t| !t.is_finite()) || !config.pi.is_finite() {
        return Err(Error::InvalidParameter("thresholds and pi must be finite".into()));
    }
    config.x.validate()?;
    config.y.validate()?;
    let mut config = config.clone();
    config.thresholds.sort_by(f64::total_cmp);

    let rows = with_pool(threads, || {
        config
            .n_grid
            .iter()
            .map(|&n| {
                let scale = config.normalization.factor(n);
                let values = (0..config.trials as u64)
                    .into_par_iter()
                    .map(|t| {
                        let xs = config.x.generate(n, &mut RngContract::new(master_seed, 2 * t).stream())?;
                        let ys = config.y.generate(n, &mut RngContract::new(master_seed, 2 * t + 1).stream())?;
                        Ok(scale * (compute_u(&xs, &ys, TiePolicy::Strict) - config.pi))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                let total = values.len() as f64;
                let exceedance = config
                    .thresholds
                    .iter()
                    .map(|&x| values.iter().filter(|&&v| v > x).count() as f64 / total)
                    .collect();
                Ok(TailRow { n, exceedance })
            })
            .collect::<Result<Vec<_>>>()
    })??;

    Ok(TailTable {
        config,
        rows,
        master_seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
    })
}
