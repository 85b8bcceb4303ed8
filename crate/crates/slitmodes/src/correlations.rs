//! Closed-form first- and second-order Glauber correlation functions at a
//! detection angle.
//!
//! `G1` is the detected intensity: the coupling squared times the bright-mode
//! population, so every source reproduces the classical `sinc^2` profile up
//! to scale. The normalized `G2` exposes the counting statistics instead:
//! `1 - 1/N` for a Fock state (spatially uniform antibunching), exactly `1`
//! for a coherent state, and `0` for a single photon.

use crate::error::{Error, Result};
use crate::geometry::{Beta, SlitGeometry};
use crate::modes::bright_probability;
use crate::states::{self, QuantumSource};

/// Detector coupling strength. Dimensionless here; it enters only as a
/// multiplicative `g^2` on `G1`, and `G2` is independent of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingConfig {
    g: f64,
}

impl CouplingConfig {
    pub fn new(g: f64) -> Result<Self> {
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::InvalidCoupling { g });
        }
        Ok(Self { g })
    }

    pub fn g(&self) -> f64 {
        self.g
    }
}

impl Default for CouplingConfig {
    fn default() -> Self {
        Self { g: 1.0 }
    }
}

/// Bright probabilities at or below this threshold are treated as a
/// vanishing `G2` denominator. A beta that is a floating-point multiple of
/// pi lands near 1e-33; angles carrying measurable intensity sit many
/// orders of magnitude above.
pub const DARK_DENOMINATOR_THRESHOLD: f64 = 1e-20;

/// First- and second-order correlations at one angle. `g2` is `None` where
/// its normalizing denominator vanishes (dark angles, or a coherent source
/// with zero amplitude); returning 0 or NaN there would misreport an
/// indeterminate quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub g1: f64,
    pub g2: Option<f64>,
}

/// `G1 = g^2 * (mean total photons) * sinc^2(beta)`.
pub fn g1(src: &QuantumSource, beta: Beta, geom: &SlitGeometry, cfg: &CouplingConfig) -> f64 {
    cfg.g() * cfg.g() * states::bright_mode_population(src, beta, geom)
}

/// Normalized second-order correlation: `1 - 1/N` for Fock, `1` for
/// coherent, `0` for a single photon, independent of beta wherever defined.
pub fn g2(src: &QuantumSource, beta: Beta) -> Option<f64> {
    if bright_probability(beta) <= DARK_DENOMINATOR_THRESHOLD {
        return None;
    }
    match src {
        QuantumSource::SinglePhoton => Some(0.0),
        QuantumSource::Fock(n) => Some(1.0 - 1.0 / f64::from(n.get())),
        QuantumSource::Coherent(alpha) if alpha.norm_sqr() == 0.0 => None,
        QuantumSource::Coherent(_) => Some(1.0),
    }
}

/// Both correlation functions in one call.
pub fn evaluate(
    src: &QuantumSource,
    beta: Beta,
    geom: &SlitGeometry,
    cfg: &CouplingConfig,
) -> CorrelationResult {
    CorrelationResult {
        g1: g1(src, beta, geom, cfg),
        g2: g2(src, beta),
    }
}
