//! Unitary evolution of labeled states under piecewise-constant Hamiltonians.
//!
//! Each constant segment is propagated exactly through the eigendecomposition
//! of its Hamiltonian, so sample points inside a segment are evaluated
//! directly from the segment-start state and do not accumulate stepping
//! error.

use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;

use crate::collective::{build_full_ladder, CollectiveLabel, DetuningChoice, HamiltonianMatrix, LadderParams};
use crate::linalg::{self, CMatrix, HermitianEigen};
use crate::{Error, Result, C64};

/// Norm tolerance enforced on every state.
pub const NORM_TOL: f64 = 1e-10;

/// Labeled complex amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState<L> {
    basis: Vec<L>,
    amplitudes: Vec<C64>,
}

impl<L: Clone + PartialEq> QuantumState<L> {
    pub fn new(basis: Vec<L>, amplitudes: Vec<C64>) -> Result<Self> {
        if basis.len() != amplitudes.len() {
            return Err(Error::BasisMismatch { expected: basis.len(), found: amplitudes.len() });
        }
        let norm = linalg::norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(QuantumState { basis, amplitudes })
    }

    /// The basis vector `|label⟩`.
    pub fn basis_state(basis: Vec<L>, label: &L) -> Result<Self> {
        let idx =
            basis.iter().position(|l| l == label).ok_or_else(|| Error::invalid("label", "not part of the basis"))?;
        let mut amplitudes = vec![C64::new(0.0, 0.0); basis.len()];
        amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(QuantumState { basis, amplitudes })
    }

    pub fn basis(&self) -> &[L] {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, label: &L) -> Option<C64> {
        self.basis.iter().position(|l| l == label).map(|i| self.amplitudes[i])
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amplitudes)
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn population(&self, label: &L) -> Option<f64> {
        self.amplitude(label).map(|z| z.norm_sqr())
    }

    /// `|⟨self|other⟩|²`; global phase never matters.
    pub fn fidelity(&self, other: &QuantumState<L>) -> Result<f64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch { expected: self.basis.len(), found: other.basis.len() });
        }
        Ok(linalg::fidelity(&self.amplitudes, &other.amplitudes))
    }
}

/// A Hamiltonian held constant for `duration` (Γ⁻¹). `phase` rotates every
/// off-diagonal coupling: `H_ij → H_ij·e^{iφ}` above the diagonal and the
/// conjugate below.
#[derive(Clone, Debug)]
pub struct PulseSegment<L> {
    hamiltonian: HamiltonianMatrix<L>,
    duration: f64,
    phase: f64,
}

impl<L: Clone + PartialEq> PulseSegment<L> {
    pub fn new(hamiltonian: HamiltonianMatrix<L>, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::invalid("duration", "must be finite and non-negative"));
        }
        Ok(PulseSegment { hamiltonian, duration, phase: 0.0 })
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_duration(mut self, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::invalid("duration", "must be finite and non-negative"));
        }
        self.duration = duration;
        Ok(self)
    }

    pub fn hamiltonian(&self) -> &HamiltonianMatrix<L> {
        &self.hamiltonian
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Hamiltonian with the drive phase applied.
    pub fn phased_matrix(&self) -> CMatrix {
        let mut m = self.hamiltonian.matrix().clone();
        if self.phase != 0.0 {
            let rot = C64::from_polar(1.0, self.phase);
            let n = m.dim();
            for i in 0..n {
                for j in (i + 1)..n {
                    m[(i, j)] *= rot;
                    m[(j, i)] *= rot.conj();
                }
            }
        }
        m
    }

    fn decompose(&self) -> Result<HermitianEigen> {
        self.phased_matrix().eigh()
    }
}

fn check_basis<L: PartialEq>(state: &[L], op: &[L]) -> Result<()> {
    if state.len() != op.len() || state.iter().zip(op).any(|(a, b)| a != b) {
        return Err(Error::BasisMismatch { expected: op.len(), found: state.len() });
    }
    Ok(())
}

/// `exp(−i·H·t)·ψ` for one segment.
pub fn propagate<L: Clone + PartialEq>(state: &QuantumState<L>, segment: &PulseSegment<L>) -> Result<QuantumState<L>> {
    check_basis(&state.basis, segment.hamiltonian.basis())?;
    if segment.duration == 0.0 {
        return Ok(state.clone());
    }
    let eig = segment.decompose()?;
    let amplitudes = eig.evolve(&state.amplitudes, segment.duration);
    Ok(QuantumState { basis: state.basis.clone(), amplitudes })
}

/// Propagates through consecutive segments.
pub fn propagate_sequence<L: Clone + PartialEq>(
    state: &QuantumState<L>,
    segments: &[PulseSegment<L>],
) -> Result<QuantumState<L>> {
    segments.iter().try_fold(state.clone(), |s, seg| propagate(&s, seg))
}

/// Population time series and the state at the end of the run.
#[derive(Clone, Debug)]
pub struct TrajectoryRecord<L> {
    basis: Vec<L>,
    times: Vec<f64>,
    /// One row per time sample, one column per basis label.
    populations: Vec<Vec<f64>>,
    final_state: QuantumState<L>,
}

/// Per-slice population-sum tolerance.
pub const POPULATION_SUM_TOL: f64 = 1e-9;

impl<L: Clone + PartialEq> TrajectoryRecord<L> {
    /// Assembles a record from externally computed series; rows must be
    /// probability distributions over `basis` and times strictly increasing.
    pub fn from_series(
        basis: Vec<L>,
        times: Vec<f64>,
        populations: Vec<Vec<f64>>,
        final_state: QuantumState<L>,
    ) -> Result<Self> {
        if times.len() != populations.len() {
            return Err(Error::invalid("populations", "one row per time sample"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("times", "must be strictly increasing"));
        }
        for row in &populations {
            if row.len() != basis.len() {
                return Err(Error::BasisMismatch { expected: basis.len(), found: row.len() });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > POPULATION_SUM_TOL || row.iter().any(|&p| !(-1e-12..=1.0 + 1e-12).contains(&p)) {
                return Err(Error::invalid("populations", "row is not a probability distribution"));
            }
        }
        check_basis(&basis, &final_state.basis)?;
        Ok(TrajectoryRecord { basis, times, populations, final_state })
    }

    pub fn basis(&self) -> &[L] {
        &self.basis
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.populations
    }

    pub fn final_state(&self) -> &QuantumState<L> {
        &self.final_state
    }

    /// Population of `label` across all samples.
    pub fn series(&self, label: &L) -> Option<Vec<f64>> {
        let idx = self.basis.iter().position(|l| l == label)?;
        Some(self.populations.iter().map(|row| row[idx]).collect())
    }

    /// Largest value of `label`'s population.
    pub fn max_population(&self, label: &L) -> Option<f64> {
        self.series(label).map(|s| s.into_iter().fold(0.0, f64::max))
    }
}

/// Sample times `0, h, 2h, …` up to `duration`, with `duration` itself
/// appended when it is not on the grid.
pub fn time_grid(duration: f64, sample_step: f64) -> Result<Vec<f64>> {
    if !(sample_step.is_finite() && sample_step > 0.0) {
        return Err(Error::invalid("sample_step", "must be positive"));
    }
    if !(duration.is_finite() && duration >= 0.0) {
        return Err(Error::invalid("duration", "must be finite and non-negative"));
    }
    let steps = libm::floor(duration / sample_step * (1.0 + 1e-12)) as usize;
    let mut times: Vec<f64> = (0..=steps).map(|k| k as f64 * sample_step).collect();
    let last = *times.last().unwrap_or(&0.0);
    if duration - last > 1e-9 * sample_step {
        times.push(duration);
    }
    Ok(times)
}

/// Evolves `state` through `segments` and records populations on a uniform
/// grid spanning the whole sequence.
pub fn sample_sequence<L: Clone + PartialEq>(
    state: &QuantumState<L>,
    segments: &[PulseSegment<L>],
    sample_step: f64,
) -> Result<TrajectoryRecord<L>> {
    for seg in segments {
        check_basis(&state.basis, seg.hamiltonian.basis())?;
    }
    let total: f64 = segments.iter().map(|s| s.duration).sum();
    let times = time_grid(total, sample_step)?;
    let mut rows = Vec::with_capacity(times.len());

    let mut start_state = state.clone();
    let mut seg_start = 0.0;
    let mut t_iter = times.iter().copied().peekable();
    for (k, seg) in segments.iter().enumerate() {
        let seg_end = seg_start + seg.duration;
        let last_segment = k + 1 == segments.len();
        let eig = if seg.duration > 0.0 { Some(seg.decompose()?) } else { None };
        while let Some(&t) = t_iter.peek() {
            if t > seg_end && !last_segment {
                break;
            }
            let local = (t - seg_start).max(0.0);
            let amps = match &eig {
                Some(e) => e.evolve(&start_state.amplitudes, local),
                None => start_state.amplitudes.clone(),
            };
            rows.push(amps.iter().map(|z| z.norm_sqr()).collect());
            t_iter.next();
        }
        start_state = match &eig {
            Some(e) => QuantumState {
                basis: start_state.basis.clone(),
                amplitudes: e.evolve(&start_state.amplitudes, seg.duration),
            },
            None => start_state,
        };
        seg_start = seg_end;
    }
    if segments.is_empty() {
        rows.push(state.populations());
    }
    Ok(TrajectoryRecord { basis: state.basis.clone(), times, populations: rows, final_state: start_state })
}

/// Starts the ensemble in |A⟩ and evolves it under the full ladder with Δ
/// chosen by `detuning`. Populations of every ladder state are recorded.
pub fn simulate_blockade_with(
    params: &LadderParams,
    duration: f64,
    sample_step: f64,
    detuning: DetuningChoice,
) -> Result<TrajectoryRecord<CollectiveLabel>> {
    if !(duration > 0.0) {
        return Err(Error::invalid("duration", "must be positive"));
    }
    let tuned = params.tuned(detuning)?;
    let h = build_full_ladder(&tuned)?;
    let psi0 = QuantumState::basis_state(h.basis().to_vec(), &CollectiveLabel::A)?;
    let seg = PulseSegment::new(h, duration)?;
    sample_sequence(&psi0, core::slice::from_ref(&seg), sample_step)
}

/// [`simulate_blockade_with`] at the resonant two-photon detuning.
pub fn simulate_blockade(
    params: &LadderParams,
    duration: f64,
    sample_step: f64,
) -> Result<TrajectoryRecord<CollectiveLabel>> {
    simulate_blockade_with(params, duration, sample_step, DetuningChoice::Resonant)
}

/// Oscillation parameters read off a population series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiFit {
    /// π / `first_pi_time`.
    pub frequency: f64,
    /// max − min of the series.
    pub contrast: f64,
    /// Time of the first maximum, refined by a parabola through the sampled
    /// peak and its neighbours.
    pub first_pi_time: f64,
}

const MIN_CONTRAST: f64 = 1e-6;

/// Fits the first maximum of `label`'s population. The population is
/// expected to start near its minimum (e.g. the target of a transfer).
///
/// A sample counts as the first maximum once the series has fallen by half
/// the contrast after it, which skips small ripples riding on the main
/// oscillation.
pub fn fit_rabi<L: Clone + PartialEq>(traj: &TrajectoryRecord<L>, label: &L) -> Result<RabiFit> {
    let series = traj.series(label).ok_or_else(|| Error::invalid("label", "not part of the trajectory basis"))?;
    let (lo, hi) = series.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)));
    let contrast = hi - lo;
    if !(contrast >= MIN_CONTRAST) {
        return Err(Error::FitFailure { contrast });
    }
    let mut peak = 0usize;
    let mut confirmed = false;
    for (k, &p) in series.iter().enumerate() {
        if p > series[peak] {
            peak = k;
        } else if series[peak] - p >= contrast / 2.0 {
            confirmed = true;
            break;
        }
    }
    if peak == 0 {
        return Err(Error::Precondition("population starts at its maximum; no rising edge to fit".into()));
    }
    if !confirmed && peak + 1 == series.len() {
        return Err(Error::FitFailure { contrast });
    }
    let times = traj.times();
    let t_peak = if peak + 1 < series.len() {
        parabola_vertex(
            (times[peak - 1], series[peak - 1]),
            (times[peak], series[peak]),
            (times[peak + 1], series[peak + 1]),
        )
    } else {
        times[peak]
    };
    Ok(RabiFit { frequency: core::f64::consts::PI / t_peak, contrast, first_pi_time: t_peak })
}

fn parabola_vertex((x0, y0): (f64, f64), (x1, y1): (f64, f64), (x2, y2): (f64, f64)) -> f64 {
    let denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    let a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    let b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    if !(a < 0.0) || !a.is_finite() {
        return x1;
    }
    (-b / (2.0 * a)).clamp(x0, x2)
}

/// Two-level Rabi Hamiltonian `[[0, Ω/2], [Ω/2, 0]]` on the given labels.
pub fn rabi_two_level<L: Clone + PartialEq>(labels: [L; 2], rabi: f64) -> Result<HamiltonianMatrix<L>> {
    let h = rabi / 2.0;
    HamiltonianMatrix::new(labels.to_vec(), CMatrix::from_real_rows(2, &[0.0, h, h, 0.0])?)
}

/// `Σ √(p_i q_i)` between two population rows.
pub fn population_overlap(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| sqrt(a.max(0.0) * b.max(0.0))).sum()
}
