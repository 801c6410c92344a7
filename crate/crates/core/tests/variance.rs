//! Long-run variance estimates against brute-force replication.

use mwdep::processes::{ProcessKind, RngContract};
use mwdep::testing::{one_sample_test, two_sample_test};
use mwdep::{Alternative, BandwidthConfig, KnownDistribution};

/// `V_n` on `H_Y(X_i)`, `X` the Gaussian AR(1) path and `Y ~ N(0,1)`, against
/// the replicated variance of `n^{-1/2} sum (H_Y(X_i) - 1/2)`.
#[test]
fn one_sample_estimate_matches_replication() {
    const N: usize = 10_000;
    const A: usize = 8;
    const REPS: u64 = 500;
    const REL_TOL: f64 = 0.15;

    let x_kind = ProcessKind::Ar1Gauss { mu: 0.0, sigma: 2.0 };
    let dist = KnownDistribution::normal(0.0, 1.0).unwrap();
    let mut sums = Vec::new();
    let mut estimates = Vec::new();
    for rep in 0..REPS {
        let x = x_kind.generate(N, &mut RngContract::new(17, rep).stream()).unwrap();
        let report = one_sample_test(&x, &dist, A, Alternative::TwoSided).unwrap();
        // mean of H_Y(X) is exactly 1/2 here by symmetry
        sums.push((N as f64).sqrt() * (report.u_stat - 0.5));
        estimates.push(report.v_n);
    }
    let mean = sums.iter().sum::<f64>() / REPS as f64;
    let brute = sums.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (REPS - 1) as f64;
    let avg_est = estimates.iter().sum::<f64>() / REPS as f64;

    assert!((avg_est - brute).abs() <= REL_TOL * brute, "mean V_n {avg_est} vs {brute}");
    assert!(
        (estimates[0] - brute).abs() <= REL_TOL * brute,
        "single V_n {} vs {brute}",
        estimates[0]
    );
}

#[test]
fn two_sample_estimate_tends_to_classical_value() {
    // V = (1 + c)/12 with c = n/m = 2
    let iid = ProcessKind::IidNormal { mu: 0.0, sigma: 1.0 };
    let x = iid.generate(4_000, &mut RngContract::new(1, 0).stream()).unwrap();
    let y = iid.generate(2_000, &mut RngContract::new(1, 1).stream()).unwrap();
    let report = two_sample_test(&x, &y, &BandwidthConfig::new(0, 0)).unwrap();
    assert!((report.v_n - 0.25).abs() < 0.02, "v_n {}", report.v_n);
}
