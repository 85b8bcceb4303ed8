//! Seeded stochastic reconstruction of the diffraction pattern and of the
//! photon-statistics observables.
//!
//! Detection angles are drawn by inverse-CDF lookup on a dense precomputed
//! cumulative grid (composite Simpson per panel, panels nested inside
//! histogram bins), so the per-shot cost is one uniform draw plus a binary
//! search and there is no efficiency collapse across wide dark regions.
//! Occupation numbers for the g2 estimator are drawn from the analytic
//! bright-occupation law, which is itself validated against the dense
//! oracle. Sampling is sequential from a single ChaCha12 stream, so equal
//! seed and config reproduce outputs bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Bernoulli, Binomial, Distribution, Poisson};

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::geometry::{beta_value_unchecked, Beta, SlitGeometry};
use crate::modes::{bright_probability, sinc};
use crate::numerics::NeumaierSum;
use crate::states::{bright_occupation_law, BrightOccupationLaw, QuantumSource};

/// Integration panels per histogram bin; the cumulative grid therefore has
/// at least `64 * bins` nodes.
pub const PANELS_PER_BIN: usize = 64;

/// Bright probabilities at or below this make g2 sampling meaningless.
pub const SAMPLING_DARK_THRESHOLD: f64 = 1e-12;

/// Seed, shot count, angular range, and binning for one sampling run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    seed: u64,
    shots: u64,
    theta_min: f64,
    theta_max: f64,
    bins: usize,
}

impl SamplerConfig {
    pub fn new(seed: u64, shots: u64, theta_min: f64, theta_max: f64, bins: usize) -> Result<Self> {
        let reject = |reason: &str| Error::InvalidSamplerConfig {
            reason: reason.to_string(),
        };
        if shots == 0 {
            return Err(reject("shots must be >= 1"));
        }
        if bins == 0 {
            return Err(reject("bins must be >= 1"));
        }
        if !(theta_min.is_finite() && theta_max.is_finite()) || theta_min >= theta_max {
            return Err(reject("need finite theta_min < theta_max"));
        }
        if theta_min <= -FRAC_PI_2 || theta_max >= FRAC_PI_2 {
            return Err(reject("theta range must lie inside (-pi/2, pi/2)"));
        }
        Ok(Self {
            seed,
            shots,
            theta_min,
            theta_max,
            bins,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn theta_min(&self) -> f64 {
        self.theta_min
    }

    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    pub fn bins(&self) -> usize {
        self.bins
    }
}

/// Binned angular detection counts with seed provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionHistogram {
    bin_edges: Vec<f64>,
    counts: Vec<u64>,
    total: u64,
    seed: u64,
}

impl DetectionHistogram {
    /// `bins + 1` edges, ascending.
    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Total detections; always equals the configured shot count.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Echo of the config seed that produced this histogram.
    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Normalized cumulative density over the panel grid.
struct DensityGrid {
    /// `panels + 1` entries; first 0, last exactly 1.
    cumulative: Vec<f64>,
    /// Per-panel masses, normalized.
    panel_mass: Vec<f64>,
}

fn build_density_grid(geom: &SlitGeometry, cfg: &SamplerConfig) -> Result<DensityGrid> {
    let panels = cfg.bins * PANELS_PER_BIN;
    let span = cfg.theta_max - cfg.theta_min;
    let width = span / panels as f64;
    let density = |theta: f64| {
        let s = sinc(beta_value_unchecked(geom, theta));
        s * s
    };

    let mut cumulative = Vec::with_capacity(panels + 1);
    let mut panel_mass = Vec::with_capacity(panels);
    let mut running = NeumaierSum::default();
    cumulative.push(0.0);
    let mut left = density(cfg.theta_min);
    for p in 0..panels {
        let t0 = cfg.theta_min + width * p as f64;
        let t1 = cfg.theta_min + width * (p + 1) as f64;
        let right = density(t1);
        let mid = density(0.5 * (t0 + t1));
        let mass = width / 6.0 * (left + 4.0 * mid + right);
        panel_mass.push(mass);
        running.add(mass);
        cumulative.push(running.total());
        left = right;
    }

    let total = cumulative[panels];
    if total < 1e-300 {
        return Err(Error::DegenerateDensity);
    }
    for c in &mut cumulative {
        *c /= total;
    }
    cumulative[panels] = 1.0;
    for m in &mut panel_mass {
        *m /= total;
    }
    Ok(DensityGrid {
        cumulative,
        panel_mass,
    })
}

/// Exact (to quadrature accuracy) probability mass of each histogram bin
/// under the normalized `sinc^2` density. The panels nest inside bins, so
/// these are the masses the sampler actually realizes.
pub fn analytic_bin_masses(geom: &SlitGeometry, cfg: &SamplerConfig) -> Result<Vec<f64>> {
    let grid = build_density_grid(geom, cfg)?;
    Ok(grid
        .panel_mass
        .chunks(PANELS_PER_BIN)
        .map(|chunk| chunk.iter().sum())
        .collect())
}

/// Draws `shots` detection angles from the density proportional to
/// `sinc^2(beta(theta))` and bins them. Identical seed and config give a
/// bit-identical histogram.
pub fn sample_pattern(geom: &SlitGeometry, cfg: &SamplerConfig) -> Result<DetectionHistogram> {
    let grid = build_density_grid(geom, cfg)?;
    let interior = &grid.cumulative[1..];

    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let mut counts = vec![0u64; cfg.bins];
    for _ in 0..cfg.shots {
        let u: f64 = rng.random();
        let panel = interior.partition_point(|&c| c <= u);
        counts[panel.min(interior.len() - 1) / PANELS_PER_BIN] += 1;
    }

    let span = cfg.theta_max - cfg.theta_min;
    let bin_edges = (0..=cfg.bins)
        .map(|i| cfg.theta_min + span * i as f64 / cfg.bins as f64)
        .collect();
    Ok(DetectionHistogram {
        bin_edges,
        counts,
        total: cfg.shots,
        seed: cfg.seed,
    })
}

/// Empirical g2 with a delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G2Estimate {
    pub g2: f64,
    pub stderr: f64,
    pub shots: u64,
}

/// Point estimate only; see [`sample_g2_detailed`].
pub fn sample_g2(
    src: &QuantumSource,
    beta: Beta,
    geom: &SlitGeometry,
    cfg: &SamplerConfig,
) -> Result<f64> {
    sample_g2_detailed(src, beta, geom, cfg).map(|e| e.g2)
}

/// Draws `shots` bright-mode occupations `m` from the source's occupation
/// law and returns the estimator `sum m(m-1) * shots / (sum m)^2`, which
/// converges to the closed-form g2 at rate `1/sqrt(shots)`.
pub fn sample_g2_detailed(
    src: &QuantumSource,
    beta: Beta,
    geom: &SlitGeometry,
    cfg: &SamplerConfig,
) -> Result<G2Estimate> {
    let bright = bright_probability(beta);
    if bright <= SAMPLING_DARK_THRESHOLD {
        return Err(Error::DarkAngle {
            beta: beta.value(),
            bright,
        });
    }
    let law = bright_occupation_law(src, beta, geom);

    enum Sampler {
        Bernoulli(Bernoulli),
        Binomial(Binomial),
        Poisson(Poisson<f64>),
    }
    let sampler = match law {
        BrightOccupationLaw::Bernoulli { success_prob } => Sampler::Bernoulli(
            Bernoulli::new(success_prob).expect("bright probability is in [0, 1]"),
        ),
        BrightOccupationLaw::Binomial {
            trials,
            success_prob,
        } => Sampler::Binomial(
            Binomial::new(u64::from(trials), success_prob)
                .expect("bright probability is in [0, 1]"),
        ),
        BrightOccupationLaw::Poisson { mean } => {
            if mean <= 0.0 {
                return Err(Error::NoDetections);
            }
            Sampler::Poisson(Poisson::new(mean).expect("positive mean"))
        }
    };

    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let (mut s_m, mut s_f, mut s_mm, mut s_ff, mut s_fm) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..cfg.shots {
        let m = match &sampler {
            Sampler::Bernoulli(d) => u64::from(d.sample(&mut rng)) as f64,
            Sampler::Binomial(d) => d.sample(&mut rng) as f64,
            Sampler::Poisson(d) => d.sample(&mut rng),
        };
        let f = m * (m - 1.0);
        s_m += m;
        s_f += f;
        s_mm += m * m;
        s_ff += f * f;
        s_fm += f * m;
    }
    if s_m == 0.0 {
        return Err(Error::NoDetections);
    }

    let shots = cfg.shots as f64;
    let mean_m = s_m / shots;
    let mean_f = s_f / shots;
    let g2 = mean_f / (mean_m * mean_m);

    // Delta method for the ratio f-bar / m-bar^2.
    let var_m = (s_mm / shots - mean_m * mean_m).max(0.0);
    let var_f = (s_ff / shots - mean_f * mean_f).max(0.0);
    let cov = s_fm / shots - mean_f * mean_m;
    let m2 = mean_m * mean_m;
    let variance = (var_f / (m2 * m2) + 4.0 * mean_f * mean_f * var_m / (m2 * m2 * m2)
        - 4.0 * mean_f * cov / (m2 * m2 * mean_m))
        / shots;
    let stderr = variance.max(0.0).sqrt();

    Ok(G2Estimate {
        g2,
        stderr,
        shots: cfg.shots,
    })
}
