//! Reduction of physical slit/detector parameters to the dimensionless
//! phase parameter `beta = pi b sin(theta) / lambda`.
//!
//! Everything downstream is a function of [`Beta`] alone; lengths (meters)
//! appear only in this module.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::error::{Error, Result};

/// Physical slit aperture: width of the opening and illumination wavelength,
/// both in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitGeometry {
    slit_width: f64,
    wavelength: f64,
}

impl SlitGeometry {
    /// Both lengths must be positive and finite.
    pub fn new(slit_width: f64, wavelength: f64) -> Result<Self> {
        let ok = slit_width.is_finite()
            && slit_width > 0.0
            && wavelength.is_finite()
            && wavelength > 0.0;
        if !ok {
            return Err(Error::InvalidGeometry {
                slit_width,
                wavelength,
            });
        }
        Ok(Self {
            slit_width,
            wavelength,
        })
    }

    pub fn slit_width(&self) -> f64 {
        self.slit_width
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }
}

/// Dimensionless phase parameter `pi b sin(theta) / lambda`.
///
/// Diffraction minima sit at nonzero integer multiples of pi.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Beta(f64);

impl Beta {
    /// Rejects NaN and infinities.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFiniteBeta { value });
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Detection angles are restricted to the open forward half-plane
/// (-pi/2, pi/2); grazing angles are rejected rather than extrapolated.
fn check_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() || theta.abs() >= FRAC_PI_2 {
        return Err(Error::AngleOutOfRange { theta });
    }
    Ok(())
}

/// `beta = pi b sin(theta) / lambda` for a detector at angle `theta`.
pub fn beta_from_angle(geom: &SlitGeometry, theta: f64) -> Result<Beta> {
    check_theta(theta)?;
    Ok(Beta(beta_value_unchecked(geom, theta)))
}

/// Fraunhofer phase delay `(2 pi / lambda) x sin(theta)` for a wave leaving
/// the slit at position `x` in `[0, b]`.
///
/// Satisfies `phase(b, theta) = 2 * beta_from_angle(theta)` and is linear
/// in `x`.
pub fn phase(x: f64, theta: f64, geom: &SlitGeometry) -> Result<f64> {
    check_theta(theta)?;
    if !x.is_finite() || x < 0.0 || x > geom.slit_width {
        return Err(Error::PositionOutOfRange {
            x,
            slit_width: geom.slit_width,
        });
    }
    Ok(2.0 * PI * x * theta.sin() / geom.wavelength)
}

/// Hot-loop variant for callers that have already validated `theta`.
pub(crate) fn beta_value_unchecked(geom: &SlitGeometry, theta: f64) -> f64 {
    PI * geom.slit_width * theta.sin() / geom.wavelength
}
