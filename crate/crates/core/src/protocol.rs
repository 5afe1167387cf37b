//! The ensemble C-NOT, the photon link between two ensembles, and the
//! coincidence observable.
//!
//! Every pulse is a rotation on one or two (x, y) pairs of product states:
//! `x → cos(θ/2)·x + e^{iφ}·sin(θ/2)·y`, `y → cos(θ/2)·y − e^{−iφ}·sin(θ/2)·x`
//! for pulse area θ and drive phase φ. A π pulse therefore maps `x → e^{iφ}y`
//! and `y → −e^{−iφ}x`; the forward steps use φ = 0 and the return steps
//! φ = π so both carry phase +1.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use libm::{atan2, cos, sin, sqrt};

use crate::collective::{
    build_full_ladder, dressed_shift, dressed_shifts, CollectiveLabel, DetuningChoice, LadderParams,
};
use crate::linalg::CMatrix;
use crate::register::{EnsembleLevel, Register, Site, Slot};
use crate::units::gamma_time_to_seconds;
use crate::{Error, Result, C64};

/// Amplitude tolerance for span preconditions.
pub const SPAN_TOL: f64 = 1e-9;
/// Probability above which strict mode rejects a leak-prone component.
pub const STRICT_LEAK_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-10;

/// The ensemble a step acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    EnsembleI,
    EnsembleII,
    InterlinkQ1,
    InterlinkQ2,
}

impl Target {
    pub fn ensemble(self) -> Site {
        match self {
            Target::EnsembleI => Site::EnsembleI,
            Target::EnsembleII => Site::EnsembleII,
            Target::InterlinkQ1 => Site::Q1,
            Target::InterlinkQ2 => Site::Q2,
        }
    }

    /// The bosonic mode the ensemble talks to.
    pub fn mode(self) -> Site {
        match self {
            Target::EnsembleI | Target::EnsembleII => Site::Cavity,
            Target::InterlinkQ1 | Target::InterlinkQ2 => Site::FreeSpace,
        }
    }
}

/// The Raman transitions used by the protocols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transition {
    /// Blockaded collective rotation A ↔ C₁.
    CollectiveRaman,
    /// Single-excitation rotation C₁ ↔ D₁.
    InternalRaman,
    /// (A,0) ↔ (C₁,1): the ensemble qubit moves into the mode.
    EnsembleToCavity,
    /// (C₁,1) ↔ (S₁,0) and (D₁,1) ↔ (B₁,0).
    CavityToEnsemble,
    /// Read pulse of the link, (A,0) ↔ (C₁,1) on the free-space mode.
    PhotonEmission,
    /// Write pulse of the link, (A,1) ↔ (C₁,0).
    PhotonAbsorption,
}

type Pattern = Vec<Slot>;

impl Transition {
    /// The (x, y) pairs swapped by the transition.
    pub fn pairs(self, target: Target) -> Vec<(Pattern, Pattern)> {
        use EnsembleLevel::*;
        let s = target.ensemble();
        let m = target.mode();
        let em = |l, n| vec![Slot::ensemble(s, l), Slot::photons(m, n)];
        match self {
            Transition::CollectiveRaman => vec![(vec![Slot::ensemble(s, A)], vec![Slot::ensemble(s, C1)])],
            Transition::InternalRaman => vec![(vec![Slot::ensemble(s, C1)], vec![Slot::ensemble(s, D1)])],
            Transition::EnsembleToCavity | Transition::PhotonEmission => vec![(em(A, 0), em(C1, 1))],
            Transition::CavityToEnsemble => vec![(em(C1, 1), em(S1, 0)), (em(D1, 1), em(B1, 0))],
            Transition::PhotonAbsorption => vec![(em(A, 1), em(C1, 0))],
        }
    }

    /// Components the physical couplings would drive out of the register
    /// (into two-photon or two-excitation states).
    pub fn leak_prone(self, target: Target) -> Vec<Pattern> {
        use EnsembleLevel::*;
        let s = target.ensemble();
        let m = target.mode();
        let em = |l, n| vec![Slot::ensemble(s, l), Slot::photons(m, n)];
        match self {
            Transition::CollectiveRaman | Transition::InternalRaman => Vec::new(),
            Transition::EnsembleToCavity | Transition::PhotonEmission => vec![em(A, 1)],
            Transition::CavityToEnsemble => vec![em(S1, 1), em(B1, 1)],
            Transition::PhotonAbsorption => vec![em(C1, 1)],
        }
    }
}

/// One pulse of a protocol.
///
/// `leg_x` couples the x end of each pair to the intermediate level, `leg_y`
/// the y end; `detuning` is the signed single-photon detuning δ. The
/// effective two-photon rate is `leg_x·leg_y/(2|δ|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepSpec {
    pub target: Target,
    pub transition: Transition,
    pub leg_x: f64,
    pub leg_y: f64,
    pub detuning: f64,
    pub pulse_area: f64,
    pub drive_phase: f64,
    /// Atom number when `leg_x` carries the collective √N enhancement of
    /// the A ↔ C₁ ladder.
    pub collective_atoms: Option<u64>,
}

impl StepSpec {
    pub fn new(
        target: Target,
        transition: Transition,
        leg_x: f64,
        leg_y: f64,
        detuning: f64,
        pulse_area: f64,
        drive_phase: f64,
    ) -> Result<Self> {
        for (name, v) in [("leg_x", leg_x), ("leg_y", leg_y)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, "coupling must be positive and finite"));
            }
        }
        if !(detuning.is_finite() && detuning != 0.0) {
            return Err(Error::invalid("detuning", "must be finite and nonzero"));
        }
        if !(pulse_area.is_finite() && pulse_area >= 0.0) {
            return Err(Error::invalid("pulse_area", "must be finite and non-negative"));
        }
        if !drive_phase.is_finite() {
            return Err(Error::invalid("drive_phase", "must be finite"));
        }
        Ok(StepSpec { target, transition, leg_x, leg_y, detuning, pulse_area, drive_phase, collective_atoms: None })
    }

    pub fn with_collective_atoms(mut self, n: u64) -> Self {
        self.collective_atoms = Some(n);
        self
    }

    pub fn effective_rate(&self) -> f64 {
        self.leg_x * self.leg_y / (2.0 * libm::fabs(self.detuning))
    }

    /// Pulse duration in Γ⁻¹.
    pub fn duration(&self) -> f64 {
        self.pulse_area / self.effective_rate()
    }

    pub fn transition_pairs(&self) -> Vec<(Pattern, Pattern)> {
        self.transition.pairs(self.target)
    }
}

/// Ideal pulse matrix in the `[[u_xx, u_xy], [u_yx, u_yy]]` layout.
fn pulse_matrix(area: f64, phase: f64) -> [[C64; 2]; 2] {
    let c = C64::new(cos(area / 2.0), 0.0);
    let s = sin(area / 2.0);
    [[c, -C64::from_polar(s, -phase)], [C64::from_polar(s, phase), c]]
}

/// Rotation on an ensemble pair, as produced by a Raman pulse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotationPair {
    /// A ↔ C₁ (collective, blockaded).
    AC1,
    /// C₁ ↔ D₁.
    C1D1,
}

impl RotationPair {
    fn levels(self) -> (EnsembleLevel, EnsembleLevel) {
        match self {
            RotationPair::AC1 => (EnsembleLevel::A, EnsembleLevel::C1),
            RotationPair::C1D1 => (EnsembleLevel::C1, EnsembleLevel::D1),
        }
    }
}

/// Applies `[[cos θ/2, i·e^{iφ}·sin θ/2], [i·e^{−iφ}·sin θ/2, cos θ/2]]` on
/// the pair of `site`.
///
/// The site's amplitude must lie in the pair's span.
pub fn prepare_rotation(state: &Register, site: Site, pair: RotationPair, theta: f64, phase: f64) -> Result<Register> {
    if !site.is_ensemble() {
        return Err(Error::invalid("site", "rotations act on ensembles"));
    }
    if !(theta.is_finite() && phase.is_finite()) {
        return Err(Error::invalid("theta", "rotation angle and phase must be finite"));
    }
    let (lx, ly) = pair.levels();
    for level in EnsembleLevel::ALL {
        if level == lx || level == ly {
            continue;
        }
        for i in state.matching(&[Slot::ensemble(site, level)])? {
            let a = state.amplitudes()[i].norm();
            if a > SPAN_TOL {
                return Err(Error::Precondition(format!(
                    "{} has amplitude {a:e} on {} outside the rotation span",
                    site.name(),
                    level.name()
                )));
            }
        }
    }
    let mut out = state.clone();
    let pairs = out.partners(&[Slot::ensemble(site, lx)], &[Slot::ensemble(site, ly)])?;
    // same SU(2) family as a pulse with drive phase π/2 − φ
    out.apply_pair_unitary(&pairs, pulse_matrix(theta, FRAC_PI_2 - phase));
    Ok(out)
}

/// Applies the ideal pulse of `spec`. Leak-prone components are left
/// untouched.
pub fn pi_pulse(state: &Register, spec: &StepSpec) -> Result<Register> {
    Ok(apply_step(state, spec, GateMode::Ideal)?.0)
}

/// How a protocol step is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GateMode {
    /// Exact subspace rotations; leak-prone probability is reported.
    #[default]
    Ideal,
    /// Propagates each step's ground–excited–ground Raman chain (the full
    /// collective ladder for A ↔ C₁). Leaked amplitude is reported and the
    /// register renormalized.
    Chain,
    /// Ideal, but any leak-prone probability is an error.
    Strict,
}

/// Returns the new register and the step leakage.
fn apply_step(state: &Register, spec: &StepSpec, mode: GateMode) -> Result<(Register, f64)> {
    let mut leak_prone = 0.0;
    for pattern in spec.transition.leak_prone(spec.target) {
        leak_prone += state.probability(&pattern)?;
    }
    if mode == GateMode::Strict && leak_prone > STRICT_LEAK_TOL {
        return Err(Error::ProtocolViolation(format!(
            "{:?} on {} would leave the register (probability {leak_prone:e})",
            spec.transition,
            spec.target.ensemble().name()
        )));
    }
    let mut out = state.clone();
    match mode {
        GateMode::Ideal | GateMode::Strict => {
            let u = pulse_matrix(spec.pulse_area, spec.drive_phase);
            for (x, y) in spec.transition_pairs() {
                let pairs = out.partners(&x, &y)?;
                out.apply_pair_unitary(&pairs, u);
            }
            Ok((out, leak_prone))
        }
        GateMode::Chain => {
            let chain = RamanChain::for_step(spec)?;
            let mut lost = 0.0;
            for (x, y) in spec.transition_pairs() {
                let pairs = out.partners(&x, &y)?;
                lost += chain.apply(&mut out, &pairs, spec)?;
            }
            out.renormalize()?;
            Ok((out, leak_prone + lost))
        }
    }
}

/// A small Hermitian model of one physical pulse: x at `x_index`, y at
/// `y_index`, everything else is intermediate or leakage.
struct RamanChain {
    eigen: crate::linalg::HermitianEigen,
    dim: usize,
    x_index: usize,
    y_index: usize,
    sign: f64,
}

impl RamanChain {
    fn for_step(spec: &StepSpec) -> Result<Self> {
        let sign = if spec.detuning > 0.0 { 1.0 } else { -1.0 };
        if let (Transition::CollectiveRaman, Some(n)) = (spec.transition, spec.collective_atoms) {
            let omega1 = spec.leg_x / sqrt(n as f64);
            let params = LadderParams::from_common(n, omega1, spec.leg_y, spec.detuning, 0.0, 2)?
                .tuned(DetuningChoice::Resonant)?;
            let h = build_full_ladder(&params)?;
            // frame co-rotating with the dressed A level
            let frame = params.two_photon_detuning() / 2.0 + dressed_shifts(&params)?.eps_a;
            let h = h.shifted(-frame);
            let idx = |l: CollectiveLabel| h.index_of(&l).expect("ladder contains A and C1");
            return Ok(RamanChain {
                eigen: h.matrix().eigh()?,
                dim: h.dim(),
                x_index: idx(CollectiveLabel::A),
                y_index: idx(CollectiveLabel::C(1)),
                sign,
            });
        }
        let (a, b, d) = (spec.leg_x, spec.leg_y, spec.detuning);
        let sa = dressed_shift(a, d);
        let sb = dressed_shift(b, d);
        // y sits where its dressed energy matches the dressed x level
        let m = CMatrix::from_real_rows(3, &[-sa, a / 2.0, 0.0, a / 2.0, -d - sa, b / 2.0, 0.0, b / 2.0, -sb])?;
        Ok(RamanChain { eigen: m.eigh()?, dim: 3, x_index: 0, y_index: 2, sign })
    }

    /// Propagates every (x, y) pair; returns the probability left outside.
    fn apply(&self, reg: &mut Register, pairs: &[(usize, usize)], spec: &StepSpec) -> Result<f64> {
        // the bare chain rotates y by −i·sign; conjugate to reach the drive phase
        let chi = C64::from_polar(1.0, spec.drive_phase + self.sign * FRAC_PI_2);
        let t = spec.duration();
        let mut lost = 0.0;
        let amps = reg.amplitudes_mut();
        for &(ix, iy) in pairs {
            let mut v = vec![C64::new(0.0, 0.0); self.dim];
            v[self.x_index] = amps[ix];
            v[self.y_index] = amps[iy] * chi.conj();
            let w = self.eigen.evolve(&v, t);
            amps[ix] = w[self.x_index];
            amps[iy] = w[self.y_index] * chi;
            lost += w
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != self.x_index && *k != self.y_index)
                .map(|(_, z)| z.norm_sqr())
                .sum::<f64>();
        }
        Ok(lost)
    }
}

/// Physical couplings of the protocols, in Γ units.
///
/// `omega1`/`omega2` drive the collective A ↔ C₁ rotation, `omega1_prime`/
/// `omega2_prime` the C₁ ↔ D₁ rotation, `omega_i`/`omega_ii` the cavity
/// transfers of E-I and E-II with single-atom cavity coupling `g_c`, and
/// `omega_1c`/`omega_2c` with `g_f` the photon link.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolParams {
    pub n_atoms: u64,
    pub delta: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega1_prime: f64,
    pub omega2_prime: f64,
    pub omega_i: f64,
    pub omega_ii: f64,
    pub g_c: f64,
    pub omega_1c: f64,
    pub omega_2c: f64,
    pub g_f: f64,
    /// Photon time of flight between the two ensembles (s).
    pub flight_time: f64,
}

impl ProtocolParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_atoms < 2 {
            return Err(Error::invalid("n_atoms", "the blockaded rotation needs at least two atoms"));
        }
        if !(self.delta.is_finite() && self.delta != 0.0) {
            return Err(Error::invalid("delta", "must be finite and nonzero"));
        }
        let rates = [
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("omega1_prime", self.omega1_prime),
            ("omega2_prime", self.omega2_prime),
            ("omega_i", self.omega_i),
            ("omega_ii", self.omega_ii),
            ("g_c", self.g_c),
            ("omega_1c", self.omega_1c),
            ("omega_2c", self.omega_2c),
            ("g_f", self.g_f),
        ];
        for (name, v) in rates {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, "must be positive and finite"));
            }
        }
        if !(self.flight_time.is_finite() && self.flight_time >= 0.0) {
            return Err(Error::invalid("flight_time", "must be non-negative"));
        }
        Ok(())
    }

    fn sqrt_n(&self) -> f64 {
        sqrt(self.n_atoms as f64)
    }

    /// Ω_Ro = √N·Ω₁Ω₂/(2δ).
    pub fn rabi_collective(&self) -> f64 {
        self.sqrt_n() * self.omega1 * self.omega2 / (2.0 * libm::fabs(self.delta))
    }

    fn step(&self, target: Target, transition: Transition, area: f64, phase: f64) -> Result<StepSpec> {
        let n = self.sqrt_n();
        let (x, y) = match transition {
            Transition::CollectiveRaman => (n * self.omega1, self.omega2),
            Transition::InternalRaman => (self.omega1_prime, self.omega2_prime),
            Transition::EnsembleToCavity => (n * self.omega_i, self.g_c),
            Transition::CavityToEnsemble => (self.g_c, self.omega_ii),
            Transition::PhotonEmission => (n * self.omega_1c, self.g_f),
            Transition::PhotonAbsorption => (n * self.g_f, self.omega_2c),
        };
        let spec = StepSpec::new(target, transition, x, y, self.delta, area, phase)?;
        Ok(if transition == Transition::CollectiveRaman { spec.with_collective_atoms(self.n_atoms) } else { spec })
    }
}

/// One entry of a protocol run.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub name: &'static str,
    /// `None` for bookkeeping entries (frame updates, photon flight).
    pub spec: Option<StepSpec>,
    /// Γ⁻¹.
    pub duration: f64,
    pub leakage: f64,
    pub state: Register,
}

impl StepRecord {
    pub fn duration_seconds(&self) -> f64 {
        gamma_time_to_seconds(self.duration)
    }
}

/// Outcome of a protocol run.
#[derive(Clone, Debug, PartialEq)]
pub struct GateReport {
    pub mode: GateMode,
    pub inputs: Vec<(&'static str, C64)>,
    pub initial_state: Register,
    pub steps: Vec<StepRecord>,
    pub final_state: Register,
    pub target_state: Register,
    /// `|⟨target|final⟩|²`.
    pub fidelity: f64,
}

impl GateReport {
    pub fn per_step_leakage(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.leakage).collect()
    }

    pub fn total_leakage(&self) -> f64 {
        self.steps.iter().map(|s| s.leakage).sum()
    }

    /// (name, Γ⁻¹, seconds) per step.
    pub fn timings(&self) -> Vec<(&'static str, f64, f64)> {
        self.steps.iter().map(|s| (s.name, s.duration, s.duration_seconds())).collect()
    }

    pub fn total_duration(&self) -> f64 {
        self.steps.iter().map(|s| s.duration).sum()
    }
}

struct Runner {
    mode: GateMode,
    state: Register,
    steps: Vec<StepRecord>,
}

impl Runner {
    fn pulse(&mut self, name: &'static str, spec: StepSpec) -> Result<()> {
        let (state, leakage) = apply_step(&self.state, &spec, self.mode)?;
        self.record(name, Some(spec.clone()), spec.duration(), leakage, state)
    }

    fn rotation(&mut self, name: &'static str, spec: StepSpec, pair: RotationPair) -> Result<()> {
        let state = match self.mode {
            // imperfect earlier pulses leave small amplitude outside the span
            GateMode::Chain => return self.pulse(name, spec),
            _ => prepare_rotation(
                &self.state,
                spec.target.ensemble(),
                pair,
                spec.pulse_area,
                FRAC_PI_2 - spec.drive_phase,
            )?,
        };
        self.record(name, Some(spec.clone()), spec.duration(), 0.0, state)
    }

    fn record(
        &mut self,
        name: &'static str,
        spec: Option<StepSpec>,
        duration: f64,
        leakage: f64,
        state: Register,
    ) -> Result<()> {
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Numerical(format!("step {name} broke normalization ({norm})")));
        }
        self.steps.push(StepRecord { name, spec, duration, leakage, state: state.clone() });
        self.state = state;
        Ok(())
    }
}

fn check_qubit(name: &'static str, a: C64, b: C64) -> Result<()> {
    let n = a.norm_sqr() + b.norm_sqr();
    if !n.is_finite() || (n - 1.0).abs() > NORM_TOL {
        return Err(Error::invalid(name, format!("|a|² + |b|² = {n}, expected 1")));
    }
    Ok(())
}

/// Area and drive phase of a pulse taking x to `a·x + b·y` up to a global
/// phase.
fn preparation(a: C64, b: C64) -> (f64, f64) {
    let theta = 2.0 * atan2(b.norm(), a.norm());
    let phase = if b.norm() == 0.0 {
        0.0
    } else if a.norm() == 0.0 {
        b.arg()
    } else {
        b.arg() - a.arg()
    };
    (theta, phase)
}

/// Drive phase of the C₁ ↔ D₁ π pulse in step 4. Both branches then pick up
/// the same factor e^{iφ} (= i), which a frame update on E-I removes.
const STEP4_PHASE: f64 = FRAC_PI_2;

/// Runs the six-step C-NOT with control α|A⟩+β|C₁⟩ on E-I and target
/// ξ|C₁⟩+η|D₁⟩ on E-II.
///
/// Target state: αξ|A,0,C₁⟩ + αη|A,0,D₁⟩ + βξ|C₁,0,D₁⟩ + βη|C₁,0,C₁⟩.
pub fn run_cnot(
    params: &ProtocolParams,
    alpha: C64,
    beta: C64,
    xi: C64,
    eta: C64,
    mode: GateMode,
) -> Result<GateReport> {
    params.validate()?;
    check_qubit("alpha/beta", alpha, beta)?;
    check_qubit("xi/eta", xi, eta)?;
    use EnsembleLevel::*;
    let sites = vec![Site::EnsembleI, Site::Cavity, Site::EnsembleII];
    let initial = Register::basis_state(sites.clone(), &[A.index(), 0, A.index()])?;
    let mut run = Runner { mode, state: initial.clone(), steps: Vec::new() };

    let (theta_c, phase_c) = preparation(alpha, beta);
    let (theta_t, phase_t) = preparation(xi, eta);
    let (e1, e2) = (Target::EnsembleI, Target::EnsembleII);
    run.rotation("1a E-I", params.step(e1, Transition::CollectiveRaman, theta_c, phase_c)?, RotationPair::AC1)?;
    run.rotation("1a E-II", params.step(e2, Transition::CollectiveRaman, PI, 0.0)?, RotationPair::AC1)?;
    run.rotation("1b E-II", params.step(e2, Transition::InternalRaman, theta_t, phase_t)?, RotationPair::C1D1)?;
    run.pulse("2 E-I to cavity", params.step(e1, Transition::EnsembleToCavity, PI, 0.0)?)?;
    run.pulse("3 cavity to E-II", params.step(e2, Transition::CavityToEnsemble, PI, 0.0)?)?;
    run.pulse("4 E-II flip", params.step(e2, Transition::InternalRaman, PI, STEP4_PHASE)?)?;
    run.pulse("5 E-II to cavity", params.step(e2, Transition::CavityToEnsemble, PI, PI)?)?;
    run.pulse("6 cavity to E-I", params.step(e1, Transition::EnsembleToCavity, PI, PI)?)?;
    let mut state = run.state.clone();
    state.apply_phase(&[Slot::ensemble(Site::EnsembleI, C1)], C64::from_polar(1.0, -STEP4_PHASE))?;
    run.record("E-I frame update", None, 0.0, 0.0, state)?;

    let (a, c, d) = (A.index(), C1.index(), D1.index());
    let target_state = Register::from_terms(
        sites,
        &[(&[a, 0, c], alpha * xi), (&[a, 0, d], alpha * eta), (&[c, 0, d], beta * xi), (&[c, 0, c], beta * eta)],
    )?;
    let fidelity = run.state.fidelity(&target_state)?.min(1.0);
    Ok(GateReport {
        mode,
        inputs: vec![("alpha", alpha), ("beta", beta), ("xi", xi), ("eta", eta)],
        initial_state: initial,
        final_state: run.state.clone(),
        steps: run.steps,
        target_state,
        fidelity,
    })
}

/// Sends the Q1 qubit α|A⟩+β|C₁⟩ to Q2 through a single free-space photon.
///
/// Q1 is first flipped so that its β branch is the one that emits, then read
/// into the photon, written into Q2, and finally reset to |A⟩. With
/// `with_ancilla`, Q1 starts as α|0,A⟩ + β|1,C₁⟩ with a reference qubit,
/// which is maximally entangled for |α| = |β|.
pub fn run_interlink(
    params: &ProtocolParams,
    alpha: C64,
    beta: C64,
    with_ancilla: bool,
    mode: GateMode,
) -> Result<GateReport> {
    params.validate()?;
    check_qubit("alpha/beta", alpha, beta)?;
    let (a, c) = (EnsembleLevel::A.index(), EnsembleLevel::C1.index());
    let (initial, target_state) = if with_ancilla {
        let sites = vec![Site::Ancilla, Site::Q1, Site::FreeSpace, Site::Q2];
        (
            Register::from_terms(sites.clone(), &[(&[0, a, 0, a], alpha), (&[1, c, 0, a], beta)])?,
            Register::from_terms(sites, &[(&[0, a, 0, a], alpha), (&[1, a, 0, c], beta)])?,
        )
    } else {
        let sites = vec![Site::Q1, Site::FreeSpace, Site::Q2];
        (
            Register::from_terms(sites.clone(), &[(&[a, 0, a], alpha), (&[c, 0, a], beta)])?,
            Register::from_terms(sites, &[(&[a, 0, a], alpha), (&[a, 0, c], beta)])?,
        )
    };
    // the photon mode holds at most one excitation
    let strict = if mode == GateMode::Chain { GateMode::Chain } else { GateMode::Strict };
    let mut run = Runner { mode: strict, state: initial.clone(), steps: Vec::new() };
    let (q1, q2) = (Target::InterlinkQ1, Target::InterlinkQ2);
    run.pulse("Q1 pre-flip", params.step(q1, Transition::CollectiveRaman, PI, FRAC_PI_2)?)?;
    run.pulse("read", params.step(q1, Transition::PhotonEmission, PI, 0.0)?)?;
    let flight = crate::units::seconds_to_gamma_time(params.flight_time);
    let state = run.state.clone();
    run.record("flight", None, flight, 0.0, state)?;
    run.pulse("write", params.step(q2, Transition::PhotonAbsorption, PI, 0.0)?)?;
    run.pulse("Q1 reset", params.step(q1, Transition::CollectiveRaman, PI, PI)?)?;

    let fidelity = run.state.fidelity(&target_state)?.min(1.0);
    Ok(GateReport {
        mode,
        inputs: vec![("alpha", alpha), ("beta", beta)],
        initial_state: initial,
        final_state: run.state.clone(),
        steps: run.steps,
        target_state,
        fidelity,
    })
}

/// Heralding probabilities of the two verification photons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coincidence {
    /// Photon from E-I, emitted iff E-I is in |A⟩.
    pub p_photon1: f64,
    /// Photon from E-II, emitted iff E-II is in |C₁⟩.
    pub p_photon2: f64,
    pub p_coincidence: f64,
}

/// Ideal detectors: the probabilities are projector expectation values.
pub fn coincidence_probabilities(state: &Register) -> Result<Coincidence> {
    let a = Slot::ensemble(Site::EnsembleI, EnsembleLevel::A);
    let c = Slot::ensemble(Site::EnsembleII, EnsembleLevel::C1);
    if state.position(Site::Cavity).is_some() {
        let p1 = state.probability(&[Slot::photons(Site::Cavity, 1)])?;
        if p1 > SPAN_TOL {
            return Err(Error::Precondition(format!("cavity holds a photon with probability {p1:e}")));
        }
    }
    Ok(Coincidence {
        p_photon1: state.probability(&[a])?,
        p_photon2: state.probability(&[c])?,
        p_coincidence: state.probability(&[a, c])?,
    })
}

/// Short name for reports.
pub fn mode_name(mode: GateMode) -> &'static str {
    match mode {
        GateMode::Ideal => "ideal",
        GateMode::Chain => "chain",
        GateMode::Strict => "strict",
    }
}

/// Convenience for labelled snapshots: `(label, amplitude)` of every
/// nonzero component.
pub fn snapshot(state: &Register) -> Vec<(String, C64)> {
    state.amplitudes().iter().enumerate().filter(|(_, a)| a.norm() > 1e-15).map(|(i, a)| (state.label(i), *a)).collect()
}
