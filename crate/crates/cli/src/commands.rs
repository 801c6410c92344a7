use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mwdep::io::{format_column, read_column, CovTable, Payload, ReportDocument};
use mwdep::montecarlo::{
    builtin_scenario, estimate_pi, run_scenario, tail_diagnostic, Normalization, Scenario, TailConfig,
    BUILTIN_SCENARIOS,
};
use mwdep::processes::{ProcessKind, ProcessSpec, RNG_ALGORITHM};
use mwdep::testing::{adjacent_test, one_sample_test, projected_sequences, two_sample_test};
use mwdep::varest::{bandwidth_advisor, covariance_profile};
use mwdep::{Alternative, BandwidthConfig, Error, KnownDistribution, Report, Result, TiePolicy};

#[derive(Debug, Parser)]
#[command(name = "mwdep", version, about = "Mann-Whitney tests corrected for serial dependence")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Two independent samples
    TestTwoSample(TwoSampleArgs),
    /// One sample against a known distribution
    TestOneSample(OneSampleArgs),
    /// Two adjacent blocks of one series
    TestAdjacent(AdjacentArgs),
    /// Autocovariance profile as CSV, for choosing the lags
    Covplot(CovplotArgs),
    /// Draw one path from a process
    Simulate(SimulateArgs),
    /// Monte-Carlo level/power study
    Mc(McArgs),
    /// Large-sample estimate of P(X < Y) between two processes
    Pi(PiArgs),
    /// Exploratory exceedance frequencies of the normalized U-statistic
    Tail(TailArgs),
    /// List the built-in scenarios
    Scenarios,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AltArg {
    Greater,
    Less,
    TwoSided,
}

impl From<AltArg> for Alternative {
    fn from(a: AltArg) -> Self {
        match a {
            AltArg::Greater => Alternative::Greater,
            AltArg::Less => Alternative::Less,
            AltArg::TwoSided => Alternative::TwoSided,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TiesArg {
    Strict,
    HalfWeight,
}

impl From<TiesArg> for TiePolicy {
    fn from(t: TiesArg) -> Self {
        match t {
            TiesArg::Strict => TiePolicy::Strict,
            TiesArg::HalfWeight => TiePolicy::HalfWeight,
        }
    }
}

#[derive(Debug, Args)]
struct TestOpts {
    #[arg(long, default_value_t = 0)]
    a_lag: usize,
    #[arg(long, default_value_t = 0)]
    b_lag: usize,
    #[arg(long, value_enum, default_value = "two-sided")]
    alternative: AltArg,
    #[arg(long, value_enum, default_value = "strict")]
    ties: TiesArg,
    /// Output path, `-` for stdout
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

impl TestOpts {
    fn bandwidth(&self) -> BandwidthConfig {
        BandwidthConfig::new(self.a_lag, self.b_lag)
            .with_alternative(self.alternative.into())
            .with_ties(self.ties.into())
    }
}

#[derive(Debug, Args)]
struct TwoSampleArgs {
    #[arg(long)]
    x: PathBuf,
    #[arg(long)]
    y: PathBuf,
    #[command(flatten)]
    opts: TestOpts,
}

#[derive(Debug, Args)]
struct OneSampleArgs {
    #[arg(long)]
    x: PathBuf,
    /// `normal:MU,SIGMA` or `uniform:LO,HI`
    #[arg(long)]
    dist: String,
    #[arg(long, default_value_t = 0)]
    a_lag: usize,
    #[arg(long, value_enum, default_value = "two-sided")]
    alternative: AltArg,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct AdjacentArgs {
    #[arg(long)]
    series: PathBuf,
    /// Length of the first block
    #[arg(long)]
    split: usize,
    #[command(flatten)]
    opts: TestOpts,
}

#[derive(Debug, Args)]
struct CovplotArgs {
    #[arg(long)]
    x: PathBuf,
    /// With a second sample, profiles are of H_m(X_i) and G_n(Y_j)
    #[arg(long)]
    y: Option<PathBuf>,
    #[arg(long)]
    max_lag: usize,
    #[arg(long, value_enum, default_value = "strict")]
    ties: TiesArg,
    /// Print a suggested lag per profile to stderr, using this window
    #[arg(long)]
    advise: Option<usize>,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// e.g. `ar1-gauss:mu=0,sigma=2` or `lsv:gamma=0.25`
    #[arg(long)]
    process: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct McArgs {
    /// Built-in name (see `mwdep scenarios`) or a JSON scenario file
    #[arg(long)]
    scenario: String,
    /// Overrides the scenario's trial count
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads; results do not depend on it
    #[arg(long, env = "MWDEP_THREADS")]
    threads: Option<usize>,
    /// Restrict to these sizes, e.g. `750x500,300x200`
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PiArgs {
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long, default_value_t = 30_000)]
    n: usize,
    #[arg(long, default_value_t = 30_000)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormArg {
    SqrtN,
    SqrtNOverLogN,
}

#[derive(Debug, Args)]
struct TailArgs {
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    /// Comma-separated sample sizes
    #[arg(long, value_delimiter = ',', required = true)]
    n_grid: Vec<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    thresholds: Vec<f64>,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, value_enum, default_value = "sqrt-n")]
    normalization: NormArg,
    /// Centering value; estimated from one 30000-point run when omitted
    #[arg(long)]
    pi: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, env = "MWDEP_THREADS")]
    threads: Option<usize>,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

/// How a successful command ended.
pub enum Outcome {
    Done,
    Undefined,
}

impl Outcome {
    pub fn code(&self) -> u8 {
        match self {
            Outcome::Done => 0,
            Outcome::Undefined => 2,
        }
    }
}

fn emit(out: &Path, text: &str) -> Result<()> {
    if out.as_os_str() == "-" {
        std::io::stdout().write_all(text.as_bytes())?;
    } else {
        fs::write(out, text)?;
    }
    Ok(())
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    Ok(fs::read(path)?)
}

fn emit_test(report: Report, argv: Vec<String>, inputs: &[&[u8]], out: &Path) -> Result<Outcome> {
    for w in &report.warnings {
        log::warn!("{w}");
    }
    let outcome = if report.is_defined() {
        Outcome::Done
    } else {
        Outcome::Undefined
    };
    let doc = ReportDocument::new(argv, Payload::Test(report)).with_inputs(inputs);
    emit(out, &doc.to_json()?)?;
    Ok(outcome)
}

fn parse_sizes(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .map(|pair| {
            let (n, m) = pair
                .trim()
                .split_once(['x', ':', ';'])
                .ok_or_else(|| Error::InvalidParameter(format!("bad size '{pair}', expected NxM")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("bad size '{pair}'")))
            };
            Ok((parse(n)?, parse(m)?))
        })
        .collect()
}

fn load_scenario(name: &str) -> Result<Scenario> {
    if let Some(s) = builtin_scenario(name) {
        return Ok(s);
    }
    let path = Path::new(name);
    if path.exists() {
        return Ok(serde_json::from_str(&fs::read_to_string(path)?)?);
    }
    Err(Error::InvalidParameter(format!(
        "unknown scenario '{name}' (built-ins: {})",
        BUILTIN_SCENARIOS.join(", ")
    )))
}

pub fn run(cli: Cli, argv: Vec<String>) -> Result<Outcome> {
    match cli.command {
        Command::TestTwoSample(a) => {
            let (bx, by) = (read_bytes(&a.x)?, read_bytes(&a.y)?);
            let x = read_column(&a.x)?;
            let y = read_column(&a.y)?;
            let report = two_sample_test(&x, &y, &a.opts.bandwidth())?;
            emit_test(report, argv, &[&bx, &by], &a.opts.out)
        }
        Command::TestOneSample(a) => {
            let dist: KnownDistribution = a.dist.parse()?;
            let bx = read_bytes(&a.x)?;
            let x = read_column(&a.x)?;
            let report = one_sample_test(&x, &dist, a.a_lag, a.alternative.into())?;
            emit_test(report, argv, &[&bx], &a.out)
        }
        Command::TestAdjacent(a) => {
            let bytes = read_bytes(&a.series)?;
            let series = read_column(&a.series)?;
            let report = adjacent_test(&series, a.split, &a.opts.bandwidth())?;
            emit_test(report, argv, &[&bytes], &a.opts.out)
        }
        Command::Covplot(a) => {
            let x = read_column(&a.x)?;
            let (px, py) = match &a.y {
                Some(path) => {
                    let y = read_column(path)?;
                    let (hx, gy) = projected_sequences(&x, &y, a.ties.into());
                    (
                        covariance_profile(&hx, a.max_lag)?,
                        Some(covariance_profile(&gy, a.max_lag)?),
                    )
                }
                None => (covariance_profile(x.values(), a.max_lag)?, None),
            };
            if let Some(window) = a.advise {
                eprintln!("suggested a_lag: {}", bandwidth_advisor(&px, window));
                if let Some(py) = &py {
                    eprintln!("suggested b_lag: {}", bandwidth_advisor(py, window));
                }
            }
            emit(&a.out, &CovTable::from_profiles(&px, py.as_ref())?.to_csv())?;
            Ok(Outcome::Done)
        }
        Command::Simulate(a) => {
            let kind: ProcessKind = a.process.parse()?;
            let series = ProcessSpec::new(kind, a.seed)?.generate(a.n)?;
            emit(&a.out, &format_column(series.values()))?;
            Ok(Outcome::Done)
        }
        Command::Mc(a) => {
            let mut scenario = load_scenario(&a.scenario)?;
            if let Some(t) = a.trials {
                scenario.trials = t;
            }
            if let Some(sizes) = &a.sizes {
                scenario.sizes = parse_sizes(sizes)?;
            }
            let report = run_scenario(&scenario, a.seed, a.threads)?;
            let doc = ReportDocument::new(argv_without_threads(argv), Payload::MonteCarlo(report))
                .with_rng(RNG_ALGORITHM, a.seed);
            emit(&a.out, &doc.to_json()?)?;
            Ok(Outcome::Done)
        }
        Command::Pi(a) => {
            let x: ProcessKind = a.x.parse()?;
            let y: ProcessKind = a.y.parse()?;
            println!("{}", estimate_pi(&x, &y, a.n, a.m, a.seed)?);
            Ok(Outcome::Done)
        }
        Command::Tail(a) => {
            let x: ProcessKind = a.x.parse()?;
            let y: ProcessKind = a.y.parse()?;
            let pi = match a.pi {
                Some(p) => p,
                None => estimate_pi(&x, &y, 30_000, 30_000, a.seed)?,
            };
            let config = TailConfig {
                x,
                y,
                n_grid: a.n_grid,
                thresholds: a.thresholds,
                trials: a.trials,
                normalization: match a.normalization {
                    NormArg::SqrtN => Normalization::SqrtN,
                    NormArg::SqrtNOverLogN => Normalization::SqrtNOverLogN,
                },
                pi,
            };
            let table = tail_diagnostic(&config, a.seed, a.threads)?;
            let doc = ReportDocument::new(argv_without_threads(argv), Payload::Tail(table))
                .with_rng(RNG_ALGORITHM, a.seed);
            emit(&a.out, &doc.to_json()?)?;
            Ok(Outcome::Done)
        }
        Command::Scenarios => {
            for name in BUILTIN_SCENARIOS {
                println!("{name}");
            }
            Ok(Outcome::Done)
        }
    }
}

/// The thread count never changes results, so it is left out of the echo to
/// keep reports byte-identical across `--threads` values.
fn argv_without_threads(argv: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(argv.len());
    let mut skip_next = false;
    for arg in argv {
        if skip_next {
            skip_next = false;
            continue;
        }
        if arg == "--threads" {
            skip_next = true;
        } else if !arg.starts_with("--threads=") {
            out.push(arg);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_lists() {
        assert_eq!(parse_sizes("750x500, 300:200").unwrap(), vec![(750, 500), (300, 200)]);
        assert!(parse_sizes("750").is_err());
        assert!(parse_sizes("ax3").is_err());
    }

    #[test]
    fn thread_flag_dropped_from_echo() {
        let argv = ["mwdep", "mc", "--threads", "8", "--seed", "3", "--threads=2"]
            .map(String::from)
            .to_vec();
        assert_eq!(argv_without_threads(argv), vec!["mwdep", "mc", "--seed", "3"]);
    }
}
