//! Illumination sources and their mode-occupation structure in the
//! detector-oriented basis.
//!
//! All three sources share the same per-photon bright probability
//! `|c_0|^2 = sinc^2(beta)`; they differ in counting statistics. The bright
//! occupation is Bernoulli for a single photon, Binomial(N, |c_0|^2) for a
//! Fock state, and Poisson(|alpha_0|^2) for a coherent state. The binomial
//! form is a derived consequence of expanding the global creation operator
//! over modes, not an independently stated result, so it is gated behind a
//! dense-oracle equivalence test before any suite relies on it.

use std::num::NonZeroU32;

use num_complex::Complex64;

use crate::error::Result;
use crate::geometry::{Beta, SlitGeometry};
use crate::modes::{self, bright_probability};

/// Illumination entering the slit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuantumSource {
    /// One photon spread uniformly across the aperture.
    SinglePhoton,
    /// Definite photon number `N >= 1` under uniform illumination.
    Fock(NonZeroU32),
    /// Uniform coherent amplitude density, units 1/sqrt(length), so that
    /// `|alpha|^2 b` is the mean total photon number.
    Coherent(Complex64),
}

impl QuantumSource {
    /// Convenience constructor; `None` for zero photons.
    pub fn fock(photons: u32) -> Option<Self> {
        NonZeroU32::new(photons).map(Self::Fock)
    }
}

/// Distribution family of the bright-mode occupation number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BrightOccupationLaw {
    Bernoulli { success_prob: f64 },
    Binomial { trials: u32, success_prob: f64 },
    Poisson { mean: f64 },
}

impl BrightOccupationLaw {
    pub fn mean(&self) -> f64 {
        match *self {
            Self::Bernoulli { success_prob } => success_prob,
            Self::Binomial {
                trials,
                success_prob,
            } => f64::from(trials) * success_prob,
            Self::Poisson { mean } => mean,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Self::Bernoulli { success_prob } => success_prob * (1.0 - success_prob),
            Self::Binomial {
                trials,
                success_prob,
            } => f64::from(trials) * success_prob * (1.0 - success_prob),
            Self::Poisson { mean } => mean,
        }
    }
}

/// Expectation of the total photon number operator; conserved under the
/// change to the detector-oriented basis.
pub fn mean_total_photons(src: &QuantumSource, geom: &SlitGeometry) -> f64 {
    match src {
        QuantumSource::SinglePhoton => 1.0,
        QuantumSource::Fock(n) => f64::from(n.get()),
        QuantumSource::Coherent(alpha) => alpha.norm_sqr() * geom.slit_width(),
    }
}

/// Mean occupation of the bright mode: total photons times `sinc^2(beta)`.
pub fn bright_mode_population(src: &QuantumSource, beta: Beta, geom: &SlitGeometry) -> f64 {
    mean_total_photons(src, geom) * bright_probability(beta)
}

/// Full distribution of the bright-mode occupation number. Its mean equals
/// [`bright_mode_population`] for every source.
pub fn bright_occupation_law(
    src: &QuantumSource,
    beta: Beta,
    geom: &SlitGeometry,
) -> BrightOccupationLaw {
    let p = bright_probability(beta);
    match src {
        QuantumSource::SinglePhoton => BrightOccupationLaw::Bernoulli { success_prob: p },
        QuantumSource::Fock(n) => BrightOccupationLaw::Binomial {
            trials: n.get(),
            success_prob: p,
        },
        QuantumSource::Coherent(alpha) => BrightOccupationLaw::Poisson {
            mean: alpha.norm_sqr() * geom.slit_width() * p,
        },
    }
}

/// Per-mode coherent amplitudes `alpha_n = alpha sqrt(b) c_n`, ordered from
/// `n = -n_max` to `n = n_max`.
///
/// `sum |alpha_n|^2 <= |alpha|^2 b`, with deficit bounded by
/// `|alpha|^2 b` times the decomposition tail bound.
pub fn coherent_mode_amplitudes(
    alpha: Complex64,
    geom: &SlitGeometry,
    beta: Beta,
    n_max: u32,
) -> Result<Vec<Complex64>> {
    let dec = modes::decompose(beta, n_max)?;
    let scale = geom.slit_width().sqrt();
    Ok(dec.iter().map(|(_, c)| alpha * scale * c).collect())
}
