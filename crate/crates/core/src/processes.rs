//! Reproducible generators for the dependent processes used in level and
//! power studies.
//!
//! Every generator draws from an [`RngStream`], a ChaCha8 stream keyed by a
//! `(seed, stream_id)` pair. ChaCha output is defined bit-for-bit, and all
//! floating point draws are built from raw 64-bit words, so a given pair
//! yields the same series on every platform. Normal draws use the quantile
//! transform of a uniform rather than a rejection sampler for the same reason.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::testing::normal_quantile;

/// Name recorded in reports next to the seed.
pub const RNG_ALGORITHM: &str = "chacha8-stream/rand_chacha-0.9/seed_from_u64";

/// Default LSV initial interval `[0, 0.05]`, close to the neutral fixed point.
pub const LSV_DEFAULT_INIT_HI: f64 = 0.05;
/// Default truncation of the binary linear process.
pub const LINEAR_DEFAULT_K: usize = 40;

const Z_GUARD: f64 = 1e-15;
const TWO_POW_M53: f64 = 1.0 / 9_007_199_254_740_992.0;

/// Identifies one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngContract {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngContract {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn stream(&self) -> RngStream {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        RngStream { rng }
    }
}

#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * TWO_POW_M53
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * TWO_POW_M53
    }

    pub fn fair_bit(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}

/// One step of `Z' = (Z + eps) / 2` with `eps` in {0, 1}.
pub fn ar1_step(z: f64, eps: bool) -> f64 {
    0.5 * (z + if eps { 1.0 } else { 0.0 })
}

/// Uniform-marginal AR(1) chain `Z_{k+1} = (Z_k + eps_{k+1})/2`,
/// `Z_1 ~ U[0,1]`, `eps ~ Bernoulli(1/2)`. Stationary with uniform marginal,
/// but not strongly mixing.
pub fn gen_ar1_uniform(n: usize, rng: &mut RngStream) -> Result<TimeSeries<f64>> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut out = Vec::with_capacity(n);
    let mut z = rng.uniform_open();
    out.push(z);
    for _ in 1..n {
        z = ar1_step(z, rng.fair_bit());
        out.push(z);
    }
    TimeSeries::new(out)
}

/// `mu + sigma * Phi^{-1}(Z_i)` over the uniform AR(1) chain: N(mu, sigma^2)
/// marginals, non-Gaussian dependence.
pub fn gen_ar1_gauss(n: usize, mu: f64, sigma: f64, rng: &mut RngStream) -> Result<TimeSeries<f64>> {
    check_normal(mu, sigma)?;
    let z = gen_ar1_uniform(n, rng)?;
    let mut clamped = 0usize;
    let values = z
        .iter()
        .map(|&u| {
            // 53 consecutive unit innovations round the chain onto 1.0
            let u = if !(Z_GUARD..=1.0 - Z_GUARD).contains(&u) {
                clamped += 1;
                u.clamp(Z_GUARD, 1.0 - Z_GUARD)
            } else {
                u
            };
            normal_quantile(u).map(|q| mu + sigma * q)
        })
        .collect::<Result<Vec<_>>>()?;
    if clamped > 0 {
        log::warn!("ar1-gauss: clamped {clamped} chain values away from 0/1");
    }
    TimeSeries::new(values)
}

/// Liverani-Saussol-Vaienti map: `x (1 + (2x)^gamma)` on `[0, 1/2)`,
/// `2x - 1` on `[1/2, 1]`.
pub fn lsv_step(x: f64, gamma: f64) -> f64 {
    if x < 0.5 {
        (x * (1.0 + (2.0 * x).powf(gamma))).min(1.0)
    } else {
        2.0 * x - 1.0
    }
}

/// Forward LSV orbit from `X_1 ~ U[0, init_hi]`. The first `burn_in`
/// iterates are discarded.
pub fn gen_lsv(
    n: usize,
    gamma: f64,
    init_hi: f64,
    burn_in: usize,
    rng: &mut RngStream,
) -> Result<TimeSeries<f64>> {
    check_lsv(gamma, init_hi)?;
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let x0 = init_hi * rng.uniform();
    Ok(lsv_orbit(x0, gamma, n, burn_in))
}

/// Deterministic LSV orbit of length `n` started at `x0` after `burn_in`
/// discarded steps.
pub fn lsv_orbit(x0: f64, gamma: f64, n: usize, burn_in: usize) -> TimeSeries<f64> {
    let mut x = x0;
    for _ in 0..burn_in {
        x = lsv_step(x, gamma);
    }
    let mut out = Vec::with_capacity(n);
    out.push(x);
    for _ in 1..n {
        x = lsv_step(x, gamma);
        out.push(x);
    }
    TimeSeries::new(out).expect("lsv orbit stays in [0, 1]")
}

/// `X_i = sum_{k<K} eps_{i-k} / 2^{k+1}` with `eps = +-1/2` equally likely.
/// Truncation error is at most `2^{-K-1}`.
pub fn gen_linear_binary(n: usize, k: usize, rng: &mut RngStream) -> Result<TimeSeries<f64>> {
    if k == 0 {
        return Err(Error::InvalidParameter("linear-binary needs k >= 1".into()));
    }
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let eps: Vec<f64> = (0..n + k - 1)
        .map(|_| if rng.fair_bit() { 0.5 } else { -0.5 })
        .collect();
    Ok(TimeSeries::new(linear_binary_from_innovations(&eps, k)).expect("finite"))
}

/// Applies the truncated filter to a fixed innovation path of length
/// `n + k - 1`; `X_i` uses `eps[i + k - 1]` as its newest innovation.
pub fn linear_binary_from_innovations(eps: &[f64], k: usize) -> Vec<f64> {
    let n = eps.len() + 1 - k;
    (0..n)
        .map(|i| {
            let newest = i + k - 1;
            (0..k)
                .map(|lag| eps[newest - lag] / 2f64.powi(lag as i32 + 1))
                .sum()
        })
        .collect()
}

pub fn gen_iid_normal(n: usize, mu: f64, sigma: f64, rng: &mut RngStream) -> Result<TimeSeries<f64>> {
    check_normal(mu, sigma)?;
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let values = (0..n)
        .map(|_| normal_quantile(rng.uniform_open()).map(|q| mu + sigma * q))
        .collect::<Result<Vec<_>>>()?;
    TimeSeries::new(values)
}

pub fn gen_iid_uniform(n: usize, lo: f64, hi: f64, rng: &mut RngStream) -> Result<TimeSeries<f64>> {
    check_uniform(lo, hi)?;
    if n == 0 {
        return Err(Error::EmptySample);
    }
    TimeSeries::new((0..n).map(|_| lo + (hi - lo) * rng.uniform()).collect())
}

fn check_normal(mu: f64, sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "normal parameters need finite mu and sigma > 0 (mu={mu}, sigma={sigma})"
        )))
    }
}

fn check_uniform(lo: f64, hi: f64) -> Result<()> {
    if lo < hi && lo.is_finite() && hi.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("uniform needs lo < hi (lo={lo}, hi={hi})")))
    }
}

fn check_lsv(gamma: f64, init_hi: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!("lsv gamma must lie in (0, 1), got {gamma}")));
    }
    if !(init_hi > 0.0 && init_hi <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "lsv init_hi must lie in (0, 1], got {init_hi}"
        )));
    }
    Ok(())
}

/// Data-generating process, without its seed.
///
/// Text form: `kind:key=value,key=value`, e.g. `ar1-gauss:mu=0,sigma=2`,
/// `lsv:gamma=0.25`, `iid-normal:mu=0.2,sigma=1`, `iid-uniform:lo=0,hi=1`,
/// `linear-binary:k=40`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProcessKind {
    Ar1Gauss {
        mu: f64,
        sigma: f64,
    },
    Lsv {
        gamma: f64,
        #[serde(default = "default_init_hi")]
        init_hi: f64,
        #[serde(default)]
        burn_in: usize,
    },
    IidNormal {
        mu: f64,
        sigma: f64,
    },
    IidUniform {
        lo: f64,
        hi: f64,
    },
    LinearBinary {
        #[serde(default = "default_k")]
        k: usize,
    },
}

fn default_init_hi() -> f64 {
    LSV_DEFAULT_INIT_HI
}

fn default_k() -> usize {
    LINEAR_DEFAULT_K
}

impl ProcessKind {
    pub fn lsv(gamma: f64) -> Self {
        ProcessKind::Lsv {
            gamma,
            init_hi: LSV_DEFAULT_INIT_HI,
            burn_in: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ProcessKind::Ar1Gauss { mu, sigma } | ProcessKind::IidNormal { mu, sigma } => {
                check_normal(mu, sigma)
            }
            ProcessKind::Lsv { gamma, init_hi, .. } => check_lsv(gamma, init_hi),
            ProcessKind::IidUniform { lo, hi } => check_uniform(lo, hi),
            ProcessKind::LinearBinary { k: 0 } => {
                Err(Error::InvalidParameter("linear-binary needs k >= 1".into()))
            }
            ProcessKind::LinearBinary { .. } => Ok(()),
        }
    }

    pub fn generate(&self, n: usize, rng: &mut RngStream) -> Result<TimeSeries<f64>> {
        match *self {
            ProcessKind::Ar1Gauss { mu, sigma } => gen_ar1_gauss(n, mu, sigma, rng),
            ProcessKind::Lsv {
                gamma,
                init_hi,
                burn_in,
            } => gen_lsv(n, gamma, init_hi, burn_in, rng),
            ProcessKind::IidNormal { mu, sigma } => gen_iid_normal(n, mu, sigma, rng),
            ProcessKind::IidUniform { lo, hi } => gen_iid_uniform(n, lo, hi, rng),
            ProcessKind::LinearBinary { k } => gen_linear_binary(n, k, rng),
        }
    }
}

impl fmt::Display for ProcessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcessKind::Ar1Gauss { mu, sigma } => write!(f, "ar1-gauss:mu={mu},sigma={sigma}"),
            ProcessKind::Lsv {
                gamma,
                init_hi,
                burn_in,
            } => write!(f, "lsv:gamma={gamma},init_hi={init_hi},burn_in={burn_in}"),
            ProcessKind::IidNormal { mu, sigma } => write!(f, "iid-normal:mu={mu},sigma={sigma}"),
            ProcessKind::IidUniform { lo, hi } => write!(f, "iid-uniform:lo={lo},hi={hi}"),
            ProcessKind::LinearBinary { k } => write!(f, "linear-binary:k={k}"),
        }
    }
}

struct Params<'a> {
    spec: &'a str,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn parse(spec: &'a str, body: Option<&'a str>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for pair in body.into_iter().flat_map(|b| b.split(',')) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("'{pair}' is not key=value in '{spec}'")))?;
            if map.insert(k.trim(), v.trim()).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate key '{k}' in '{spec}'")));
            }
        }
        Ok(Self { spec, map })
    }

    fn take<V: FromStr>(&mut self, key: &str) -> Result<Option<V>> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| {
                Error::InvalidParameter(format!("bad value '{raw}' for '{key}' in '{}'", self.spec))
            }),
        }
    }

    fn require<V: FromStr>(&mut self, key: &str) -> Result<V> {
        self.take(key)?
            .ok_or_else(|| Error::InvalidParameter(format!("missing '{key}' in '{}'", self.spec)))
    }

    fn finish(self) -> Result<()> {
        match self.map.keys().next() {
            None => Ok(()),
            Some(k) => Err(Error::InvalidParameter(format!("unknown key '{k}' in '{}'", self.spec))),
        }
    }
}

impl FromStr for ProcessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = match s.split_once(':') {
            Some((k, b)) => (k.trim(), Some(b)),
            None => (s, None),
        };
        let mut p = Params::parse(s, body)?;
        let parsed = match kind {
            "ar1-gauss" => ProcessKind::Ar1Gauss {
                mu: p.require("mu")?,
                sigma: p.require("sigma")?,
            },
            "lsv" => ProcessKind::Lsv {
                gamma: p.require("gamma")?,
                init_hi: p.take("init_hi")?.unwrap_or(LSV_DEFAULT_INIT_HI),
                burn_in: p.take("burn_in")?.unwrap_or(0),
            },
            "iid-normal" => ProcessKind::IidNormal {
                mu: p.require("mu")?,
                sigma: p.require("sigma")?,
            },
            "iid-uniform" => ProcessKind::IidUniform {
                lo: p.require("lo")?,
                hi: p.require("hi")?,
            },
            "linear-binary" => ProcessKind::LinearBinary {
                k: p.take("k")?.unwrap_or(LINEAR_DEFAULT_K),
            },
            other => return Err(Error::InvalidParameter(format!("unknown process '{other}'"))),
        };
        p.finish()?;
        parsed.validate()?;
        Ok(parsed)
    }
}

/// A process together with its seed. Pure function of `(spec, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessSpec {
    pub kind: ProcessKind,
    pub seed: u64,
}

impl ProcessSpec {
    pub fn new(kind: ProcessKind, seed: u64) -> Result<Self> {
        kind.validate()?;
        Ok(Self { kind, seed })
    }

    /// Draws `n` observations from stream 0 of the seed.
    pub fn generate(&self, n: usize) -> Result<TimeSeries<f64>> {
        self.generate_stream(n, 0)
    }

    pub fn generate_stream(&self, n: usize, stream_id: u64) -> Result<TimeSeries<f64>> {
        self.kind
            .generate(n, &mut RngContract::new(self.seed, stream_id).stream())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> RngStream {
        RngContract::new(seed, 0).stream()
    }

    #[test]
    fn ar1_recursion() {
        assert_eq!(ar1_step(0.5, true), 0.75);
        assert_eq!(ar1_step(0.5, false), 0.25);
        let s = gen_ar1_uniform(1000, &mut rng(3)).unwrap();
        assert!(s.iter().all(|&z| (0.0..=1.0).contains(&z)));
        for w in s.windows(2) {
            let d = 2.0 * w[1] - w[0];
            assert!(d.abs() < 1e-15 || (d - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn lsv_map_values() {
        assert_eq!(lsv_step(0.75, 0.25), 0.5);
        assert_eq!(lsv_step(0.25, 1.0), 0.375);
        assert_eq!(lsv_step(0.0, 0.25), 0.0);
        assert_eq!(lsv_step(0.5, 0.25), 0.0);
        assert!(lsv_step(0.5 - 1e-12, 0.25) > 0.999);
        assert_eq!(lsv_orbit(0.75, 0.25, 2, 0).values(), &[0.75, 0.5]);
    }

    #[test]
    fn lsv_burn_in_skips_steps() {
        let full = lsv_orbit(0.03, 0.25, 10, 0);
        let burnt = lsv_orbit(0.03, 0.25, 7, 3);
        assert_eq!(&full[3..], burnt.values());
    }

    #[test]
    fn linear_binary_extremes() {
        let k = 20;
        let ones = vec![0.5; 5 + k - 1];
        for v in linear_binary_from_innovations(&ones, k) {
            assert!((v - 0.5).abs() <= 2f64.powi(-(k as i32) - 1));
        }
        let neg = vec![-0.5; 5 + k - 1];
        for v in linear_binary_from_innovations(&neg, k) {
            assert!((v + 0.5).abs() <= 2f64.powi(-(k as i32) - 1));
        }
    }

    #[test]
    fn linear_binary_is_a_shifted_filter() {
        // X_i = eps_i/2 + X_{i-1}/2 - eps_{i-K}/2^{K+1}
        let s = gen_linear_binary(200, 8, &mut rng(1)).unwrap();
        for w in s.windows(2) {
            assert!(w[1] - 0.5 * w[0] <= 0.25 + 2f64.powi(-9) + 1e-15);
            assert!(w[1] - 0.5 * w[0] >= -0.25 - 2f64.powi(-9) - 1e-15);
        }
    }

    #[test]
    fn determinism_and_streams() {
        let spec = ProcessSpec::new(ProcessKind::IidNormal { mu: 0.0, sigma: 1.0 }, 99).unwrap();
        assert_eq!(spec.generate(1).unwrap(), spec.generate(1).unwrap());
        assert_ne!(spec.generate_stream(8, 0).unwrap(), spec.generate_stream(8, 1).unwrap());
        let lsv = ProcessSpec::new(ProcessKind::lsv(0.25), 5).unwrap();
        assert_eq!(lsv.generate(500).unwrap(), lsv.generate(500).unwrap());
    }

    #[test]
    fn uniform_draw_ranges() {
        let mut r = rng(11);
        for _ in 0..10_000 {
            let u = r.uniform();
            let o = r.uniform_open();
            assert!((0.0..1.0).contains(&u));
            assert!(o > 0.0 && o < 1.0);
        }
        let s = gen_iid_uniform(1000, 0.0, 1.0, &mut rng(2)).unwrap();
        assert!(s.iter().all(|&v| (0.0..1.0).contains(&v)));
    }

    #[test]
    fn ar1_gauss_median_and_quantile() {
        // Z = 1/2 maps to mu, Z = Phi(1.96) maps to 1.96
        assert_eq!(0.0 + 2.0 * normal_quantile(0.5).unwrap(), 0.0);
        let z = crate::testing::normal_cdf(1.96);
        assert!((normal_quantile(z).unwrap() - 1.96).abs() < 1e-9);
    }

    #[test]
    fn spec_strings() {
        let cases = [
            ("ar1-gauss:mu=0,sigma=2", ProcessKind::Ar1Gauss { mu: 0.0, sigma: 2.0 }),
            ("lsv:gamma=0.25", ProcessKind::lsv(0.25)),
            ("iid-normal:mu=0.2,sigma=1", ProcessKind::IidNormal { mu: 0.2, sigma: 1.0 }),
            ("iid-uniform:lo=0,hi=1", ProcessKind::IidUniform { lo: 0.0, hi: 1.0 }),
            ("linear-binary:k=40", ProcessKind::LinearBinary { k: 40 }),
            ("linear-binary", ProcessKind::LinearBinary { k: 40 }),
        ];
        for (text, kind) in cases {
            let parsed: ProcessKind = text.parse().unwrap();
            assert_eq!(parsed, kind, "{text}");
            assert_eq!(parsed.to_string().parse::<ProcessKind>().unwrap(), kind);
        }
        for bad in [
            "brownian:h=0.5",
            "lsv:gamma=1.5",
            "lsv:gamma=0.2,foo=1",
            "ar1-gauss:mu=0",
            "ar1-gauss:mu=0,sigma=-1",
            "iid-normal:mu=x,sigma=1",
            "linear-binary:k=0",
            "lsv:gamma",
        ] {
            assert!(bad.parse::<ProcessKind>().is_err(), "{bad}");
        }
    }
}
