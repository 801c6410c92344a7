//! Marginal checks of the generators on long paths.

use mwdep::processes::{gen_ar1_uniform, ProcessKind, ProcessSpec, RngContract};
use mwdep::testing::one_sample_test;
use mwdep::{Alternative, KnownDistribution};

const N: usize = 100_000;

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64
}

#[test]
fn ar1_chain_has_uniform_marginal() {
    let z = gen_ar1_uniform(N, &mut RngContract::new(3, 0).stream()).unwrap();
    let sorted = z.sorted();
    let ks = sorted
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let lo = i as f64 / N as f64;
            let hi = (i + 1) as f64 / N as f64;
            (v - lo).abs().max((hi - v).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.01, "KS distance {ks}");
    assert!(z.iter().all(|&v| (0.0..=1.0).contains(&v)));
}

#[test]
fn ar1_gauss_moments() {
    let kind: ProcessKind = "ar1-gauss:mu=0,sigma=2".parse().unwrap();
    let x = ProcessSpec::new(kind, 5).unwrap().generate(N).unwrap();
    assert!(mean(&x).abs() < 0.05, "mean {}", mean(&x));
    assert!((variance(&x) - 4.0).abs() < 0.15, "variance {}", variance(&x));
}

#[test]
fn lsv_orbit_spends_time_on_the_right_branch() {
    let x = ProcessSpec::new(ProcessKind::lsv(0.25), 9).unwrap().generate(N).unwrap();
    let frac = x.iter().filter(|&&v| v >= 0.5).count() as f64 / N as f64;
    assert!(frac > 0.3 && frac < 0.6, "fraction {frac}");
    assert!(x.iter().all(|&v| (0.0..=1.0).contains(&v)));
}

#[test]
fn linear_binary_and_iid_means() {
    let lin = ProcessSpec::new("linear-binary:k=40".parse().unwrap(), 1)
        .unwrap()
        .generate(N)
        .unwrap();
    assert!(mean(&lin).abs() < 0.005, "mean {}", mean(&lin));
    assert!(lin.iter().all(|v| v.abs() <= 0.5));

    let iid = ProcessSpec::new("iid-normal:mu=0.2,sigma=1".parse().unwrap(), 1)
        .unwrap()
        .generate(N)
        .unwrap();
    assert!((mean(&iid) - 0.2).abs() < 0.01, "mean {}", mean(&iid));
}

#[test]
fn iid_uniform_one_sample_variance_is_one_twelfth() {
    let x = ProcessSpec::new("iid-uniform:lo=0,hi=1".parse().unwrap(), 2)
        .unwrap()
        .generate(20_000)
        .unwrap();
    let dist = KnownDistribution::uniform(0.0, 1.0).unwrap();
    let report = one_sample_test(&x, &dist, 0, Alternative::TwoSided).unwrap();
    assert!((report.v_n - 1.0 / 12.0).abs() < 0.01, "v_n {}", report.v_n);
    assert!(report.t_stat.unwrap().abs() < 4.0);
}

#[test]
fn streams_are_reproducible_and_distinct() {
    let spec = ProcessSpec::new(ProcessKind::Ar1Gauss { mu: 0.0, sigma: 1.0 }, 42).unwrap();
    assert_eq!(spec.generate(100).unwrap(), spec.generate(100).unwrap());
    assert_ne!(spec.generate_stream(100, 0).unwrap(), spec.generate_stream(100, 1).unwrap());
}
