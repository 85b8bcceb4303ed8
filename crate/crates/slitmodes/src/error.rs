//! Crate-wide error type.

/// Errors produced by the slitmodes library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("slit geometry requires positive finite lengths (slit width {slit_width}, wavelength {wavelength})")]
    InvalidGeometry { slit_width: f64, wavelength: f64 },

    #[error("angle {theta} rad is outside the forward half-plane (-pi/2, pi/2)")]
    AngleOutOfRange { theta: f64 },

    #[error("beta must be finite, got {value}")]
    NonFiniteBeta { value: f64 },

    #[error("position {x} lies outside the slit [0, {slit_width}]")]
    PositionOutOfRange { x: f64, slit_width: f64 },

    #[error("truncation too small: n_max = {n_max} must exceed |beta|/pi + 1 = {required}")]
    TruncationTooSmall { n_max: u32, required: f64 },

    #[error("no dark weight: |c0|^2 = 1 within 1e-14 at beta = {beta}")]
    NoDarkWeight { beta: f64 },

    #[error("theta grid is empty")]
    EmptyGrid,

    #[error("coupling strength must be positive and finite, got {g}")]
    InvalidCoupling { g: f64 },

    #[error("discrete model needs at least 2 points, got {m_points}")]
    TooFewPoints { m_points: usize },

    #[error("mode index {n} violates |n| < M/2 for M = {m_points}")]
    ModeIndexOutOfRange { n: i32, m_points: usize },

    #[error("Fock state needs at least one photon")]
    EmptyFockState,

    #[error("occupation basis dimension {dimension} exceeds the cap of {cap}")]
    DimensionCapExceeded { dimension: u128, cap: u64 },

    #[error("coherent oracle cutoff insufficient: neglected weight {neglected:e} exceeds 1e-10")]
    CutoffInsufficient { neglected: f64 },

    #[error("invalid sampler config: {reason}")]
    InvalidSamplerConfig { reason: String },

    #[error("detection density integrates to below 1e-300 over the requested range")]
    DegenerateDensity,

    #[error(
        "bright probability {bright:e} at beta = {beta} is below the sampling threshold 1e-12"
    )]
    DarkAngle { beta: f64, bright: f64 },

    #[error("occupation samples were all zero; g2 estimator undefined")]
    NoDetections,
}

pub type Result<T> = std::result::Result<T, Error>;
