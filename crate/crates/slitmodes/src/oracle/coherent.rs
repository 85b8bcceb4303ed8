//! Dual-route construction of the discrete coherent state.
//!
//! Route (a): displace the uniform collective mode via a truncated exponential
//! series of the global creation operator applied to the vacuum.
//! Route (b): take the tensor product of independent per-mode coherent
//! states with amplitudes `alpha_n^(M) = alpha sqrt(b) c_n^(M)`.
//! The factorization property says the two vectors are identical; the check
//! returns their distance in a per-mode-truncated occupation space.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Beta, SlitGeometry};

use super::{build_discrete_model, fock::FOCK_DIMENSION_CAP};

/// Outcome of the dual-route coherent construction.
#[derive(Debug, Clone, Copy)]
pub struct CoherentFactorization {
    /// L2 distance between the displaced-mode and product-state vectors.
    pub distance: f64,
    /// `<B+B+BB>/<B+B>^2` of the constructed state; `None` if the bright
    /// mode is essentially empty.
    pub bright_g2: Option<f64>,
    /// Poisson-tail estimate of the weight lost to the per-mode cutoffs.
    pub neglected_weight: f64,
}

/// Occupation cutoff for one mode: 12 covers `|alpha_n| <= 1` with neglected
/// weight below 1e-10; larger amplitudes scale the cutoff up.
fn cutoff_for(amplitude: f64) -> u32 {
    if amplitude <= 1.0 {
        12
    } else {
        (amplitude * amplitude + 8.0 * amplitude + 10.0).ceil() as u32
    }
}

/// `P(Poisson(lambda) <= k)`.
fn poisson_cdf(lambda: f64, k: u32) -> f64 {
    let mut term = (-lambda).exp();
    let mut sum = term;
    for i in 1..=k {
        term *= lambda / f64::from(i);
        sum += term;
    }
    sum.min(1.0)
}

/// Mixed-radix occupation space with per-mode occupation cutoffs.
struct TruncatedModeSpace {
    cutoffs: Vec<u32>,
    strides: Vec<usize>,
    dim: usize,
}

impl TruncatedModeSpace {
    fn new(cutoffs: Vec<u32>) -> Result<Self> {
        let mut dim: u128 = 1;
        let mut strides = Vec::with_capacity(cutoffs.len());
        for &c in &cutoffs {
            strides.push(dim as usize);
            dim *= u128::from(c) + 1;
            if dim > u128::from(FOCK_DIMENSION_CAP) {
                return Err(Error::DimensionCapExceeded {
                    dimension: dim,
                    cap: FOCK_DIMENSION_CAP,
                });
            }
        }
        Ok(Self {
            cutoffs,
            strides,
            dim: dim as usize,
        })
    }

    fn occupation(&self, index: usize, mode: usize) -> u32 {
        ((index / self.strides[mode]) % (self.cutoffs[mode] as usize + 1)) as u32
    }

    /// Product of per-mode coherent states, truncated at the cutoffs.
    fn product_coherent(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        let tables: Vec<Vec<Complex64>> = amplitudes
            .iter()
            .zip(&self.cutoffs)
            .map(|(&a, &cutoff)| {
                let mut t = Vec::with_capacity(cutoff as usize + 1);
                t.push(Complex64::new((-a.norm_sqr() / 2.0).exp(), 0.0));
                for k in 1..=cutoff {
                    let prev = t[k as usize - 1];
                    t.push(prev * a / f64::from(k).sqrt());
                }
                t
            })
            .collect();
        (0..self.dim)
            .map(|idx| {
                let mut amp = Complex64::new(1.0, 0.0);
                for (mode, table) in tables.iter().enumerate() {
                    amp *= table[self.occupation(idx, mode) as usize];
                }
                amp
            })
            .collect()
    }

    /// Weighted creation operator with clipping at the cutoffs. Creation
    /// only raises occupations, so clipped paths can never feed back into
    /// retained ones.
    fn apply_weighted_creation(
        &self,
        amplitudes: &[Complex64],
        state: &[Complex64],
    ) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (idx, &amp) in state.iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (mode, &weight) in amplitudes.iter().enumerate() {
                let occ = self.occupation(idx, mode);
                if occ >= self.cutoffs[mode] {
                    continue;
                }
                let target = idx + self.strides[mode];
                out[target] += amp * weight * f64::from(occ + 1).sqrt();
            }
        }
        out
    }

    fn apply_annihilation(&self, mode: usize, state: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (idx, &amp) in state.iter().enumerate() {
            let occ = self.occupation(idx, mode);
            if occ == 0 || amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            out[idx - self.strides[mode]] += amp * f64::from(occ).sqrt();
        }
        out
    }

    /// `e^{-|zeta|^2/2} sum_k zeta^k (A-dagger)^k / k! |0>`: the displaced
    /// collective mode, built through the ladder path. The series terminates
    /// once every occupation is clipped.
    fn displaced_mode(&self, amplitudes: &[Complex64], zeta: Complex64) -> Vec<Complex64> {
        let k_max: u32 = self.cutoffs.iter().sum();
        let mut acc = vec![Complex64::new(0.0, 0.0); self.dim];
        let mut power = vec![Complex64::new(0.0, 0.0); self.dim];
        power[0] = Complex64::new(1.0, 0.0);
        acc[0] = Complex64::new(1.0, 0.0);
        let mut scale = Complex64::new(1.0, 0.0);
        for k in 1..=k_max {
            power = self.apply_weighted_creation(amplitudes, &power);
            scale *= zeta / f64::from(k);
            for (a, p) in acc.iter_mut().zip(&power) {
                *a += scale * p;
            }
        }
        let prefactor = (-zeta.norm_sqr() / 2.0).exp();
        for a in &mut acc {
            *a *= prefactor;
        }
        acc
    }
}

fn norm_sqr(state: &[Complex64]) -> f64 {
    state.iter().map(|a| a.norm_sqr()).sum()
}

/// Distance between the two constructions; see
/// [`coherent_factorization_detailed`] for the full outcome.
pub fn coherent_factorization_check(
    m_modes: usize,
    alpha: Complex64,
    geom: &SlitGeometry,
    beta: Beta,
) -> Result<f64> {
    coherent_factorization_detailed(m_modes, alpha, geom, beta).map(|out| out.distance)
}

/// Builds the discrete coherent state both ways and compares.
pub fn coherent_factorization_detailed(
    m_modes: usize,
    alpha: Complex64,
    geom: &SlitGeometry,
    beta: Beta,
) -> Result<CoherentFactorization> {
    let model = build_discrete_model(m_modes, beta)?;
    let zeta = alpha * geom.slit_width().sqrt();
    let mode_amplitudes: Vec<Complex64> = model
        .coefficient_vec()
        .into_iter()
        .map(|c| zeta * c)
        .collect();

    let cutoffs: Vec<u32> = mode_amplitudes
        .iter()
        .map(|a| cutoff_for(a.norm()))
        .collect();
    let retained: f64 = mode_amplitudes
        .iter()
        .zip(&cutoffs)
        .map(|(a, &c)| poisson_cdf(a.norm_sqr(), c))
        .product();
    let neglected_weight = 1.0 - retained;
    if neglected_weight > 1e-10 {
        return Err(Error::CutoffInsufficient {
            neglected: neglected_weight,
        });
    }

    let space = TruncatedModeSpace::new(cutoffs)?;
    let product = space.product_coherent(&mode_amplitudes);
    let displaced = space.displaced_mode(&model.coefficient_vec(), zeta);

    let distance = product
        .iter()
        .zip(&displaced)
        .map(|(p, d)| (p - d).norm_sqr())
        .sum::<f64>()
        .sqrt();

    let bright_slot = m_modes / 2;
    let total = norm_sqr(&displaced);
    let lowered = space.apply_annihilation(bright_slot, &displaced);
    let denom = norm_sqr(&lowered);
    let bright_g2 = if denom <= 1e-12 || total <= 1e-12 {
        None
    } else {
        let doubly = space.apply_annihilation(bright_slot, &lowered);
        Some(norm_sqr(&doubly) * total / (denom * denom))
    };

    Ok(CoherentFactorization {
        distance,
        bright_g2,
        neglected_weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn beta(v: f64) -> Beta {
        Beta::new(v).unwrap()
    }

    fn geom(b: f64) -> SlitGeometry {
        SlitGeometry::new(b, 1.0).unwrap()
    }

    #[test]
    fn poisson_cdf_sane() {
        assert_abs_diff_eq!(poisson_cdf(0.0, 0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(poisson_cdf(1.0, 0), (-1.0f64).exp(), epsilon = 1e-15);
        assert!(poisson_cdf(0.25, 12) > 1.0 - 1e-15);
    }

    #[test]
    fn vacuum_matches_both_ways() {
        let out = coherent_factorization_detailed(
            3,
            Complex64::new(0.0, 0.0),
            &geom(1.0),
            beta(0.3 * PI),
        )
        .unwrap();
        assert_eq!(out.distance, 0.0);
        assert_eq!(out.bright_g2, None);
    }

    #[test]
    fn factorization_agrees_at_03pi() {
        let out = coherent_factorization_detailed(
            3,
            Complex64::new(0.5, 0.0),
            &geom(1.0),
            beta(0.3 * PI),
        )
        .unwrap();
        assert!(out.distance <= 1e-8, "distance = {}", out.distance);
        assert!(out.neglected_weight <= 1e-10);
        let g2 = out.bright_g2.unwrap();
        assert!((g2 - 1.0).abs() <= 1e-8, "g2 = {g2}");
    }

    #[test]
    fn factorization_agrees_with_complex_amplitude() {
        let out =
            coherent_factorization_detailed(4, Complex64::new(0.3, -0.4), &geom(2.0), beta(1.1))
                .unwrap();
        assert!(out.distance <= 1e-8, "distance = {}", out.distance);
        let g2 = out.bright_g2.unwrap();
        assert!((g2 - 1.0).abs() <= 1e-8, "g2 = {g2}");
    }

    #[test]
    fn oversized_system_hits_dimension_cap() {
        // 8 modes at cutoff 12 each would need 13^8 > 8e8 amplitudes.
        assert!(matches!(
            coherent_factorization_check(8, Complex64::new(0.5, 0.0), &geom(1.0), beta(0.3)),
            Err(Error::DimensionCapExceeded { .. })
        ));
    }
}
