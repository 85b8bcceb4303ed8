//! Detector-oriented basis coefficients for the uniformly illuminated slit.
//!
//! At detection angle theta (entering as `beta`), the single-photon state
//! decomposes over one bright mode (`n = 0`) and a ladder of dark modes
//! (`n != 0`) with overlap coefficients
//!
//! ```text
//! c_n = e^{i(beta - n pi)} * sin(beta - n pi) / (beta - n pi)
//! ```
//!
//! `|c_0|^2 = sinc^2(beta)` is the classical diffraction profile; the dark
//! weights fall off like `1/(beta - n pi)^2`, so truncated decompositions
//! carry an explicit analytic tail bound.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{beta_from_angle, Beta, SlitGeometry};
use crate::numerics::NeumaierSum;

/// Default truncation when a caller does not specify one. The tail bound at
/// this size is ~1e-2; callers needing tighter normalization raise `n_max`.
pub const DEFAULT_N_MAX: u32 = 64;

/// Crossover below which `sin(x)/x` switches to its Taylor form. At 1e-4 the
/// two branches agree to better than 1e-16.
const SINC_TAYLOR_CROSSOVER: f64 = 1e-4;

/// `sin(x)/x` with the removable singularity evaluated by the Taylor form
/// `1 - x^2/6 + x^4/120` for `|x| < 1e-4`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_TAYLOR_CROSSOVER {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Index of a detector-oriented basis mode; `0` is the bright mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex(pub i32);

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Overlap of the uniform single-photon state with basis mode `n`:
/// a phased sinc of `beta - n pi`, with `|c_n| <= 1`.
pub fn coefficient(beta: Beta, n: ModeIndex) -> Complex64 {
    let x = beta.value() - f64::from(n.0) * PI;
    Complex64::from_polar(sinc(x), x)
}

/// `sinc^2(beta)`: the probability of finding the photon in the bright mode,
/// which is exactly the classical single-slit intensity profile.
pub fn bright_probability(beta: Beta) -> f64 {
    let s = sinc(beta.value());
    s * s
}

/// Truncated decomposition over modes `n in [-n_max, n_max]`.
#[derive(Debug, Clone)]
pub struct ModeDecomposition {
    beta: Beta,
    n_max: u32,
    coefficients: Vec<Complex64>,
    captured_weight: f64,
    tail_bound: f64,
}

impl ModeDecomposition {
    pub fn beta(&self) -> Beta {
        self.beta
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// Sum of `|c_n|^2` over the stored modes. Together with
    /// [`tail_bound`](Self::tail_bound) it brackets the exact unit norm:
    /// `captured_weight <= 1 <= captured_weight + tail_bound` up to
    /// floating-point error.
    pub fn captured_weight(&self) -> f64 {
        self.captured_weight
    }

    /// Analytic bound on the weight left outside the stored modes, from the
    /// envelope `|c_n|^2 <= 1/(beta - n pi)^2` and integral comparison.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn coefficient_at(&self, n: ModeIndex) -> Option<Complex64> {
        self.slot(n).map(|i| self.coefficients[i])
    }

    pub fn weight_at(&self, n: ModeIndex) -> Option<f64> {
        self.coefficient_at(n).map(|c| c.norm_sqr())
    }

    /// Stored modes in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = (ModeIndex, Complex64)> + '_ {
        let n_max = self.n_max as i64;
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(i, &c)| (ModeIndex((i as i64 - n_max) as i32), c))
    }

    fn slot(&self, n: ModeIndex) -> Option<usize> {
        let n = i64::from(n.0);
        let n_max = i64::from(self.n_max);
        if n.abs() > n_max {
            None
        } else {
            Some((n + n_max) as usize)
        }
    }
}

/// Decomposes the uniform single-photon state over `n in [-n_max, n_max]`.
///
/// The tail bound uses the integral-comparison estimate
/// `sum_{|n|>N} 1/(pi(n - beta/pi))^2 <= (1/pi^2)[1/(N - beta/pi) + 1/(N + beta/pi)]`,
/// which requires `N > |beta|/pi + 1`; smaller truncations are rejected so
/// the bound is always honest.
pub fn decompose(beta: Beta, n_max: u32) -> Result<ModeDecomposition> {
    let required = beta.value().abs() / PI + 1.0;
    if n_max == 0 || f64::from(n_max) <= required {
        return Err(Error::TruncationTooSmall { n_max, required });
    }

    let half = i64::from(n_max);
    let mut coefficients = Vec::with_capacity(2 * n_max as usize + 1);
    let mut weight = NeumaierSum::default();
    for n in -half..=half {
        let c = coefficient(beta, ModeIndex(n as i32));
        weight.add(c.norm_sqr());
        coefficients.push(c);
    }

    let t = beta.value() / PI;
    let nm = f64::from(n_max);
    let tail_bound = (1.0 / (PI * PI)) * (1.0 / (nm - t) + 1.0 / (nm + t));

    Ok(ModeDecomposition {
        beta,
        n_max,
        coefficients,
        captured_weight: weight.total(),
        tail_bound,
    })
}

/// Fraction of the dark weight held by each stored dark mode:
/// `|c_n|^2 / (1 - |c_0|^2)` for `n != 0`.
///
/// The shares sum to at most one, with deficit equal to the share of the
/// truncated tail. Errors when the bright mode holds everything.
pub fn dark_shares(dec: &ModeDecomposition) -> Result<BTreeMap<ModeIndex, f64>> {
    let bright = dec
        .weight_at(ModeIndex(0))
        .expect("bright mode is always stored");
    let dark_total = 1.0 - bright;
    if dark_total < 1e-14 {
        return Err(Error::NoDarkWeight {
            beta: dec.beta().value(),
        });
    }
    Ok(dec
        .iter()
        .filter(|(n, _)| n.0 != 0)
        .map(|(n, c)| (n, c.norm_sqr() / dark_total))
        .collect())
}

/// One row of the classical diffraction profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternPoint {
    pub theta: f64,
    pub beta: f64,
    pub intensity: f64,
}

/// Evaluates `sinc^2(beta(theta))` over a grid of detection angles.
pub fn pattern(geom: &SlitGeometry, theta_grid: &[f64]) -> Result<Vec<PatternPoint>> {
    if theta_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    theta_grid
        .iter()
        .map(|&theta| {
            let beta = beta_from_angle(geom, theta)?;
            Ok(PatternPoint {
                theta,
                beta: beta.value(),
                intensity: bright_probability(beta),
            })
        })
        .collect()
}
