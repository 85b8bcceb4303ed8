//! Bright/dark collective-mode description of single-slit Fraunhofer
//! diffraction.
//!
//! At every detection angle the field leaving a uniformly illuminated slit
//! splits over a detector-oriented basis: one *bright* mode whose phases add
//! constructively toward the detector, and a ladder of *dark* modes that a
//! sensor coupled to that direction cannot see. The bright weight
//! `|c_0|^2 = sinc^2(beta)` reproduces the classical diffraction profile;
//! the dark weights carry the rest of the (conserved) photon number.
//!
//! The crate provides:
//!
//! - [`geometry`]: reduction of slit width, wavelength, and angle to the
//!   dimensionless phase parameter `beta`;
//! - [`modes`]: the basis coefficients `c_n`, truncated decompositions with
//!   analytic tail bounds, dark-share tables, and the intensity pattern;
//! - [`states`]: single-photon, Fock, and coherent sources and their
//!   bright-mode occupation laws;
//! - [`correlations`]: closed-form first- and second-order Glauber
//!   correlation functions (`G2 = 1 - 1/N` for Fock light, `1` for
//!   coherent light);
//! - [`oracle`]: brute-force validation via an M-point discretized slit
//!   with an exactly orthonormal basis, dense Fock-space ladder algebra,
//!   and a dual-route coherent-state construction;
//! - [`montecarlo`]: seeded, bit-reproducible sampling of detection
//!   histograms and g2 estimates;
//! - [`verify`]: the runnable invariant suite behind the CLI `verify`
//!   command.

pub use num_complex;

pub mod correlations;
pub mod error;
pub mod geometry;
pub mod modes;
pub mod montecarlo;
mod numerics;
pub mod oracle;
pub mod states;
pub mod verify;

pub use correlations::{CorrelationResult, CouplingConfig};
pub use error::{Error, Result};
pub use geometry::{beta_from_angle, phase, Beta, SlitGeometry};
pub use modes::{
    bright_probability, coefficient, dark_shares, decompose, pattern, sinc, ModeDecomposition,
    ModeIndex, PatternPoint, DEFAULT_N_MAX,
};
pub use montecarlo::{DetectionHistogram, G2Estimate, SamplerConfig};
pub use oracle::{DenseFockSpace, DiscreteSlitModel};
pub use states::{BrightOccupationLaw, QuantumSource};
