//! Dense Fock-space computations over the M discrete modes.
//!
//! States live in the occupation-number basis at fixed total photon number,
//! enumerated lexicographically; ladder operators act by combinatorial index
//! arithmetic, no matrix machinery. The N-photon state is built the way it
//! is defined: N applications of the global creation operator
//! `A-dagger = sum_n c_n^(M) J_n-dagger` to the vacuum, then normalization.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Beta;
use crate::modes::ModeIndex;

use super::build_discrete_model;

/// Hard cap on the occupation-basis dimension `C(M+N-1, N)`.
pub const FOCK_DIMENSION_CAP: u64 = 1_000_000;

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Number of ways to distribute `photons` over `modes` slots.
fn compositions(photons: u32, modes: usize) -> u128 {
    binomial(u64::from(photons) + modes as u64 - 1, u64::from(photons))
}

/// Occupation-number basis at fixed total photon number, in lexicographic
/// order (mode 0 most significant, occupations ascending).
struct FockBasis {
    modes: usize,
    photons: u32,
    states: Vec<Vec<u32>>,
}

impl FockBasis {
    fn new(modes: usize, photons: u32) -> Self {
        let mut states = Vec::with_capacity(compositions(photons, modes) as usize);
        let mut prefix = Vec::with_capacity(modes);
        enumerate(modes, photons, &mut prefix, &mut states);
        Self {
            modes,
            photons,
            states,
        }
    }

    fn len(&self) -> usize {
        self.states.len()
    }

    /// Position of an occupation tuple in the lexicographic enumeration:
    /// for each slot, count the complete blocks of states with a smaller
    /// occupation there.
    fn rank(&self, occ: &[u32]) -> usize {
        let mut rank: u128 = 0;
        let mut remaining = self.photons;
        for (i, &k) in occ.iter().enumerate().take(self.modes - 1) {
            let modes_left = self.modes - i - 1;
            for v in 0..k {
                rank += compositions(remaining - v, modes_left);
            }
            remaining -= k;
        }
        rank as usize
    }
}

fn enumerate(modes: usize, photons: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if modes == 1 {
        prefix.push(photons);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for v in 0..=photons {
        prefix.push(v);
        enumerate(modes - 1, photons - v, prefix, out);
        prefix.pop();
    }
}

/// `A-dagger` with per-mode amplitudes, mapping the `photons`-sector into the
/// `photons + 1`-sector.
fn apply_weighted_creation(
    amplitudes: &[Complex64],
    from: &FockBasis,
    to: &FockBasis,
    state: &[Complex64],
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); to.len()];
    let mut scratch = vec![0u32; from.modes];
    for (idx, &amp) in state.iter().enumerate() {
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let occ = &from.states[idx];
        for (q, &weight) in amplitudes.iter().enumerate() {
            if weight == Complex64::new(0.0, 0.0) {
                continue;
            }
            scratch.copy_from_slice(occ);
            scratch[q] += 1;
            let boost = f64::from(occ[q] + 1).sqrt();
            out[to.rank(&scratch)] += amp * weight * boost;
        }
    }
    out
}

/// Single-mode annihilation, mapping the `photons`-sector into the
/// `photons - 1`-sector.
fn apply_annihilation(
    mode_slot: usize,
    from: &FockBasis,
    to: &FockBasis,
    state: &[Complex64],
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); to.len()];
    let mut scratch = vec![0u32; from.modes];
    for (idx, &amp) in state.iter().enumerate() {
        let occ = &from.states[idx];
        if occ[mode_slot] == 0 || amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        scratch.copy_from_slice(occ);
        scratch[mode_slot] -= 1;
        out[to.rank(&scratch)] += amp * f64::from(occ[mode_slot]).sqrt();
    }
    out
}

fn norm_sqr(state: &[Complex64]) -> f64 {
    state.iter().map(|a| a.norm_sqr()).sum()
}

/// Dense N-photon state over the M discrete detector-oriented modes.
pub struct DenseFockSpace {
    m_modes: usize,
    n_photons: u32,
    amplitudes: Vec<Complex64>,
    basis: FockBasis,
    state: Vec<Complex64>,
}

/// Builds the N-photon Fock state of the M-point model at the given beta.
pub fn build_fock_state(m_points: usize, n_photons: u32, beta: Beta) -> Result<DenseFockSpace> {
    let model = build_discrete_model(m_points, beta)?;
    DenseFockSpace::from_amplitudes(model.coefficient_vec(), n_photons)
}

impl DenseFockSpace {
    /// `(A-dagger)^N |0>` normalized, where `A-dagger` carries the given
    /// per-mode amplitudes (indexed over the model's mode range).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, n_photons: u32) -> Result<Self> {
        let m_modes = amplitudes.len();
        if m_modes < 2 {
            return Err(Error::TooFewPoints { m_points: m_modes });
        }
        if n_photons == 0 {
            return Err(Error::EmptyFockState);
        }
        let dimension = compositions(n_photons, m_modes);
        if dimension > u128::from(FOCK_DIMENSION_CAP) {
            return Err(Error::DimensionCapExceeded {
                dimension,
                cap: FOCK_DIMENSION_CAP,
            });
        }

        let mut state = vec![Complex64::new(1.0, 0.0)];
        let mut from = FockBasis::new(m_modes, 0);
        for step in 1..=n_photons {
            let to = FockBasis::new(m_modes, step);
            state = apply_weighted_creation(&amplitudes, &from, &to, &state);
            from = to;
        }
        let norm = norm_sqr(&state).sqrt();
        for a in &mut state {
            *a /= norm;
        }

        Ok(Self {
            m_modes,
            n_photons,
            amplitudes,
            basis: from,
            state,
        })
    }

    pub fn m_modes(&self) -> usize {
        self.m_modes
    }

    pub fn n_photons(&self) -> u32 {
        self.n_photons
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn state_vector(&self) -> &[Complex64] {
        &self.state
    }

    /// The per-mode amplitude `c_n^(M)` used to build the state.
    pub fn mode_amplitude(&self, n: ModeIndex) -> Option<Complex64> {
        self.slot(n).map(|u| self.amplitudes[u])
    }

    /// Expectation of the number operator of mode `n`.
    pub fn mode_population(&self, n: ModeIndex) -> Option<f64> {
        let slot = self.slot(n)?;
        Some(
            self.basis
                .states
                .iter()
                .zip(&self.state)
                .map(|(occ, amp)| f64::from(occ[slot]) * amp.norm_sqr())
                .sum(),
        )
    }

    /// Expectation of `sum_n J_n-dagger J_n`; equals N up to normalization
    /// round-off because occupations are integers.
    pub fn total_number_expectation(&self) -> f64 {
        self.basis
            .states
            .iter()
            .zip(&self.state)
            .map(|(occ, amp)| {
                let total: u32 = occ.iter().sum();
                f64::from(total) * amp.norm_sqr()
            })
            .sum()
    }

    /// `P(bright occupation = m)` for `m = 0..=N`.
    pub fn bright_occupation_distribution(&self) -> Vec<f64> {
        let slot = self.bright_slot();
        let mut dist = vec![0.0; self.n_photons as usize + 1];
        for (occ, amp) in self.basis.states.iter().zip(&self.state) {
            dist[occ[slot] as usize] += amp.norm_sqr();
        }
        dist
    }

    fn bright_slot(&self) -> usize {
        self.m_modes / 2
    }

    fn slot(&self, n: ModeIndex) -> Option<usize> {
        if super::mode_index_range(self.m_modes).contains(&n.0) {
            Some((n.0 + (self.m_modes / 2) as i32) as usize)
        } else {
            None
        }
    }

    /// `B |state>`, one sector down.
    pub(crate) fn bright_annihilated(&self) -> Vec<Complex64> {
        let to = FockBasis::new(self.m_modes, self.n_photons - 1);
        apply_annihilation(self.bright_slot(), &self.basis, &to, &self.state)
    }
}

/// `<B+B+BB> / <B+B>^2` by dense ladder application; `None` where the
/// denominator vanishes. Equals `1 - 1/N` independent of M and beta
/// wherever defined.
pub fn exact_g2_bright(fs: &DenseFockSpace) -> Option<f64> {
    let lowered = fs.bright_annihilated();
    let denom = norm_sqr(&lowered);
    if denom <= 1e-12 {
        return None;
    }
    let numer = if fs.n_photons < 2 {
        0.0
    } else {
        let from = FockBasis::new(fs.m_modes, fs.n_photons - 1);
        let to = FockBasis::new(fs.m_modes, fs.n_photons - 2);
        norm_sqr(&apply_annihilation(fs.bright_slot(), &from, &to, &lowered))
    };
    Some(numer / (denom * denom))
}

/// Norm of `B|N> - sqrt(N) c_0^(M) |N-1>`, with `|N-1>` built by the same
/// constructor. Zero up to round-off when construction and ladder algebra
/// are consistent.
pub fn exact_ladder_identity_check(fs: &DenseFockSpace) -> f64 {
    let lowered = fs.bright_annihilated();
    let reference = if fs.n_photons == 1 {
        vec![Complex64::new(1.0, 0.0)]
    } else {
        DenseFockSpace::from_amplitudes(fs.amplitudes.clone(), fs.n_photons - 1)
            .expect("one sector below a valid state is valid")
            .state
    };
    let scale = f64::from(fs.n_photons).sqrt() * fs.amplitudes[fs.bright_slot()];
    lowered
        .iter()
        .zip(&reference)
        .map(|(a, r)| (a - scale * r).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
