//! Cross-module closure: the analytic occupation laws against the dense
//! oracle, and the heavier Monte Carlo consistency sweeps.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use slitmodes::montecarlo::{self, SamplerConfig};
use slitmodes::oracle::build_fock_state;
use slitmodes::states::BrightOccupationLaw;
use slitmodes::{Beta, ModeIndex, QuantumSource, SlitGeometry};

fn beta(v: f64) -> Beta {
    Beta::new(v).unwrap()
}

fn binomial_pmf(trials: u32, p: f64, k: u32) -> f64 {
    let mut coeff = 1.0;
    for i in 0..k {
        coeff *= f64::from(trials - i) / f64::from(i + 1);
    }
    coeff * p.powi(k as i32) * (1.0 - p).powi((trials - k) as i32)
}

/// The binomial bright-occupation law is a derived claim; it is only
/// trusted because the dense projector statistics reproduce it pointwise.
#[test]
fn bright_occupation_law_matches_dense_oracle() {
    for n in [1u32, 2, 3] {
        for v in [0.1 * PI, 0.3 * PI] {
            let fs = build_fock_state(4, n, beta(v)).unwrap();
            let p = fs.mode_amplitude(ModeIndex(0)).unwrap().norm_sqr();
            let dist = fs.bright_occupation_distribution();
            for (k, &measured) in dist.iter().enumerate() {
                let expected = binomial_pmf(n, p, k as u32);
                assert!(
                    (measured - expected).abs() <= 1e-10,
                    "N = {n}, beta = {v}, k = {k}: {measured} vs {expected}"
                );
            }
        }
    }
}

#[test]
fn binomial_variance_matches_dense_moments() {
    for n in [1u32, 2, 3] {
        for v in [0.1 * PI, 0.3 * PI] {
            let fs = build_fock_state(4, n, beta(v)).unwrap();
            let p = fs.mode_amplitude(ModeIndex(0)).unwrap().norm_sqr();
            let dist = fs.bright_occupation_distribution();
            let mean: f64 = dist.iter().enumerate().map(|(k, w)| k as f64 * w).sum();
            let mean_sq: f64 = dist
                .iter()
                .enumerate()
                .map(|(k, w)| (k as f64) * (k as f64) * w)
                .sum();
            let variance = mean_sq - mean * mean;
            let expected = f64::from(n) * p * (1.0 - p);
            assert!(
                (variance - expected).abs() <= 1e-10,
                "N = {n}, beta = {v}: {variance} vs {expected}"
            );
        }
    }
}

#[test]
fn law_mean_equals_dense_population() {
    for n in [1u32, 2, 3] {
        for v in [0.1 * PI, 0.3 * PI, 0.7 * PI] {
            let fs = build_fock_state(4, n, beta(v)).unwrap();
            let dense_p = fs.mode_amplitude(ModeIndex(0)).unwrap().norm_sqr();
            let dense_mean = fs.mode_population(ModeIndex(0)).unwrap();
            // Same-footing comparison: the law evaluated at the discrete
            // bright probability.
            let law = BrightOccupationLaw::Binomial {
                trials: n,
                success_prob: dense_p,
            };
            assert!(
                (law.mean() - dense_mean).abs() <= 1e-10,
                "N = {n}, beta = {v}"
            );
        }
    }
}

/// Histogram consistency across seeds: at 10^6 shots the chi-square
/// statistic against the analytic bin masses clears the 1e-4 significance
/// level for at least 99 of 100 seeds.
#[test]
fn chi_square_clears_for_99_of_100_seeds() {
    let geom = SlitGeometry::new(5.0, 1.0).unwrap();
    let critical = ChiSquared::new(200.0).unwrap().inverse_cdf(1.0 - 1e-4);
    let masses = {
        let cfg = SamplerConfig::new(0, 1, -0.5, 0.5, 201).unwrap();
        montecarlo::analytic_bin_masses(&geom, &cfg).unwrap()
    };
    let mut cleared = 0;
    for seed in 0..100u64 {
        let cfg = SamplerConfig::new(seed, 1_000_000, -0.5, 0.5, 201).unwrap();
        let hist = montecarlo::sample_pattern(&geom, &cfg).unwrap();
        let shots = cfg.shots() as f64;
        let stat: f64 = hist
            .counts()
            .iter()
            .zip(&masses)
            .filter(|(_, &m)| m > 0.0)
            .map(|(&c, &m)| (c as f64 - shots * m).powi(2) / (shots * m))
            .sum();
        if stat <= critical {
            cleared += 1;
        }
    }
    assert!(cleared >= 99, "only {cleared}/100 seeds cleared");
}

#[test]
fn sampled_g2_tracks_the_law_for_all_sources() {
    let geom = SlitGeometry::new(2.0, 1.0).unwrap();
    let cases = [
        (QuantumSource::SinglePhoton, 0.0),
        (QuantumSource::fock(3).unwrap(), 2.0 / 3.0),
        (QuantumSource::Coherent(Complex64::new(0.8, 0.3)), 1.0),
    ];
    for (src, expected) in cases {
        let cfg = SamplerConfig::new(77, 200_000, -0.5, 0.5, 1).unwrap();
        let est = montecarlo::sample_g2_detailed(&src, beta(0.4), &geom, &cfg).unwrap();
        let slack = (4.0 * est.stderr).max(1e-12);
        assert!(
            (est.g2 - expected).abs() <= slack,
            "{src:?}: g2 = {} vs {expected} (stderr {})",
            est.g2,
            est.stderr
        );
    }
}
