//! Independent brute-force validation machinery.
//!
//! The continuum formulas elsewhere in the crate are checked against an
//! M-point discretization of the slit whose detector-oriented basis is a
//! finite, exactly orthonormal phased Fourier family, plus dense Fock-space
//! computations over those M modes at small photon number. Everything here
//! is built by direct summation and explicit ladder-operator application so
//! it shares no code path with the closed forms it certifies.

mod coherent;
mod fock;

pub use coherent::{
    coherent_factorization_check, coherent_factorization_detailed, CoherentFactorization,
};
pub use fock::{
    build_fock_state, exact_g2_bright, exact_ladder_identity_check, DenseFockSpace,
    FOCK_DIMENSION_CAP,
};

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Beta;
use crate::modes::{self, sinc, ModeIndex};

/// Mode indices carried by an M-point model: `[-floor(M/2), ceil(M/2))`.
pub fn mode_index_range(m_points: usize) -> RangeInclusive<i32> {
    let lo = -((m_points / 2) as i32);
    let hi = ((m_points - 1) / 2) as i32;
    lo..=hi
}

/// M-point discretization of the slit.
///
/// Positions are midpoint-sampled, `x_j = (j + 1/2) b / M` (stored in units
/// of `b`); midpoint sampling is what makes the phased discrete-Fourier
/// family exactly orthonormal over M points. The basis is finite and
/// complete, so the discrete coefficients carry no tail.
#[derive(Debug, Clone)]
pub struct DiscreteSlitModel {
    m_points: usize,
    beta: Beta,
    positions: Vec<f64>,
    basis_vectors: Vec<Vec<Complex64>>,
    discrete_coeffs: Vec<Complex64>,
}

/// Builds the M-point model at the given beta.
///
/// Basis vector `n` has components `e^{-i phi(x_j)} e^{i k_n x_j} / sqrt(M)`
/// with `phi(x_j) = 2 beta x_j / b` and `k_n = 2 pi n / b`; the discrete
/// coefficient `c_n^(M)` is its overlap with the uniform vector, computed by
/// direct summation.
pub fn build_discrete_model(m_points: usize, beta: Beta) -> Result<DiscreteSlitModel> {
    if m_points < 2 {
        return Err(Error::TooFewPoints { m_points });
    }
    let m = m_points as f64;
    let positions: Vec<f64> = (0..m_points).map(|j| (j as f64 + 0.5) / m).collect();
    let norm = 1.0 / m.sqrt();

    let mut basis_vectors = Vec::with_capacity(m_points);
    let mut discrete_coeffs = Vec::with_capacity(m_points);
    for n in mode_index_range(m_points) {
        // In units of b: -phi + k_n x = 2 (n pi - beta) x.
        let freq = 2.0 * (f64::from(n) * PI - beta.value());
        let vector: Vec<Complex64> = positions
            .iter()
            .map(|&x| Complex64::from_polar(norm, freq * x))
            .collect();
        let overlap: Complex64 = vector.iter().map(|v| v.conj() * norm).sum();
        basis_vectors.push(vector);
        discrete_coeffs.push(overlap);
    }

    Ok(DiscreteSlitModel {
        m_points,
        beta,
        positions,
        basis_vectors,
        discrete_coeffs,
    })
}

impl DiscreteSlitModel {
    pub fn m_points(&self) -> usize {
        self.m_points
    }

    pub fn beta(&self) -> Beta {
        self.beta
    }

    /// Midpoint sample positions in units of the slit width.
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn basis_vector(&self, n: ModeIndex) -> Option<&[Complex64]> {
        self.slot(n.0).map(|u| self.basis_vectors[u].as_slice())
    }

    /// Discrete coefficient `c_n^(M)` from direct summation.
    pub fn coefficient(&self, n: ModeIndex) -> Option<Complex64> {
        self.slot(n.0).map(|u| self.discrete_coeffs[u])
    }

    /// All stored `(n, c_n^(M))` pairs in ascending mode order.
    pub fn coefficients(&self) -> impl Iterator<Item = (ModeIndex, Complex64)> + '_ {
        mode_index_range(self.m_points)
            .zip(self.discrete_coeffs.iter())
            .map(|(n, &c)| (ModeIndex(n), c))
    }

    pub(crate) fn coefficient_vec(&self) -> Vec<Complex64> {
        self.discrete_coeffs.clone()
    }

    /// Largest deviation of the basis Gram matrix from the identity.
    /// O(M^3); intended for small M.
    pub fn gram_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (a, va) in self.basis_vectors.iter().enumerate() {
            for (b, vb) in self.basis_vectors.iter().enumerate() {
                let inner: Complex64 = va.iter().zip(vb).map(|(x, y)| x.conj() * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((inner - target).norm());
            }
        }
        worst
    }

    /// `|sum_n |c_n^(M)|^2 - 1|`: the finite basis is complete, so this is
    /// pure floating-point residue.
    pub fn completeness_residual(&self) -> f64 {
        let sum: f64 = self.discrete_coeffs.iter().map(|c| c.norm_sqr()).sum();
        (sum - 1.0).abs()
    }

    fn slot(&self, n: i32) -> Option<usize> {
        let range = mode_index_range(self.m_points);
        if range.contains(&n) {
            Some((n + (self.m_points / 2) as i32) as usize)
        } else {
            None
        }
    }
}

/// Closed form of the discrete coefficient: a phased Dirichlet kernel,
/// `e^{i(beta - n pi)} sin(beta - n pi) / (M sin((beta - n pi)/M))`,
/// evaluated stably as a ratio of sinc values. Valid for
/// `|beta - n pi| < M pi`; converges to the continuum `c_n` as `O(1/M^2)`.
pub fn dirichlet_coefficient(beta: Beta, n: ModeIndex, m_points: usize) -> Complex64 {
    let x = beta.value() - f64::from(n.0) * PI;
    let m = m_points as f64;
    Complex64::from_polar(sinc(x) / sinc(x / m), x)
}

/// `|c_n^(M) - c_n|`, the discretization error of mode `n`. Decays as
/// `O(1/M^2)`.
pub fn discrete_vs_continuum_error(m_points: usize, beta: Beta, n: ModeIndex) -> Result<f64> {
    if m_points < 2 {
        return Err(Error::TooFewPoints { m_points });
    }
    if 2 * (n.0.unsigned_abs() as usize) >= m_points {
        return Err(Error::ModeIndexOutOfRange { n: n.0, m_points });
    }
    let discrete = dirichlet_coefficient(beta, n, m_points);
    let continuum = modes::coefficient(beta, n);
    Ok((discrete - continuum).norm())
}
