//! Collective-state ladder of a Λ-atom ensemble under two Raman legs.
//!
//! Leg 1 (Rabi frequency Ω₁, detuning δ₁) drives a→e, leg 2 (Ω₂, δ₂) drives
//! c→e. The symmetric collective states form a chain
//!
//! ```text
//! A - G(1) - C(1) - G(2) - C(2) - G(3) - C(3) - ...
//! ```
//!
//! where `C(n)` has n atoms in c and `G(n)` has one atom in e plus n−1 in c.
//! In the rotating frame the diagonal is `Δ/2` for A, `−(δ + (n−1)Δ)` for
//! `G(n)` and `−(2n−1)Δ/2` for `C(n)`; the couplings are `√(N−n+1)·Ω₁/2` on
//! `C(n−1)↔G(n)` and `√n·Ω₂/2` on `G(n)↔C(n)`, with δ = (δ₁+δ₂)/2 and
//! Δ = δ₁ − δ₂. Every Ω₁ leg of the chain is therefore detuned by exactly δ₁
//! and every Ω₂ leg by δ₂.
//!
//! Light shifts come in two flavours: the first-order closed forms
//! ([`light_shifts`]) and the exact two-level dressed shifts of each coupled
//! leg ([`dressed_shifts`]). The latter carry the second-order imbalance that
//! produces the blockade and are what the adiabatically eliminated
//! Hamiltonian uses by default.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use libm::sqrt;

use crate::linalg::CMatrix;
use crate::{Error, Result, C64};

/// Label of a symmetric collective state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CollectiveLabel {
    /// All atoms in a.
    A,
    /// One atom in e and `n − 1` atoms in c.
    G(u32),
    /// `n` atoms in c.
    C(u32),
}

impl fmt::Display for CollectiveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CollectiveLabel::A => f.write_str("A"),
            CollectiveLabel::G(1) => f.write_str("G1"),
            CollectiveLabel::G(n) => write!(f, "G1{}", n - 1),
            CollectiveLabel::C(n) => write!(f, "C{n}"),
        }
    }
}

/// Physical inputs of the collective Raman ladder. Rates in Γ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderParams {
    n_atoms: u64,
    omega1: f64,
    omega2: f64,
    delta1: f64,
    delta2: f64,
    truncation: u32,
    trailing_g: bool,
}

impl LadderParams {
    pub fn new(n_atoms: u64, omega1: f64, omega2: f64, delta1: f64, delta2: f64, truncation: u32) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::invalid("n_atoms", "must be at least 1"));
        }
        if truncation == 0 {
            return Err(Error::invalid("truncation", "must be at least 1"));
        }
        if u64::from(truncation) > n_atoms {
            return Err(Error::invalid(
                "truncation",
                alloc::format!("truncation {truncation} exceeds n_atoms {n_atoms}"),
            ));
        }
        for (name, v) in [("omega1", omega1), ("omega2", omega2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, "must be finite and non-negative"));
            }
        }
        for (name, v) in [("delta1", delta1), ("delta2", delta2)] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        Ok(LadderParams { n_atoms, omega1, omega2, delta1, delta2, truncation, trailing_g: false })
    }

    /// Builds the parameters from the common detuning δ and the two-photon
    /// detuning Δ (δ₁ = δ + Δ/2, δ₂ = δ − Δ/2).
    pub fn from_common(
        n_atoms: u64,
        omega1: f64,
        omega2: f64,
        delta: f64,
        two_photon: f64,
        truncation: u32,
    ) -> Result<Self> {
        Self::new(n_atoms, omega1, omega2, delta + two_photon / 2.0, delta - two_photon / 2.0, truncation)
    }

    /// Appends `G(n_max + 1)` after `C(n_max)`. With truncation 2 this gives
    /// the six-state basis A, G1, C1, G11, C2, G12.
    pub fn with_trailing_g(mut self, on: bool) -> Self {
        self.trailing_g = on;
        self
    }

    pub fn with_truncation(self, truncation: u32) -> Result<Self> {
        let p = Self::new(self.n_atoms, self.omega1, self.omega2, self.delta1, self.delta2, truncation)?;
        Ok(p.with_trailing_g(self.trailing_g))
    }

    pub fn with_omega1(self, omega1: f64) -> Result<Self> {
        let p = Self::new(self.n_atoms, omega1, self.omega2, self.delta1, self.delta2, self.truncation)?;
        Ok(p.with_trailing_g(self.trailing_g))
    }

    pub fn with_omega2(self, omega2: f64) -> Result<Self> {
        let p = Self::new(self.n_atoms, self.omega1, omega2, self.delta1, self.delta2, self.truncation)?;
        Ok(p.with_trailing_g(self.trailing_g))
    }

    /// Keeps δ and replaces Δ.
    pub fn with_two_photon_detuning(self, two_photon: f64) -> Result<Self> {
        let d = self.common_detuning();
        let p = Self::from_common(self.n_atoms, self.omega1, self.omega2, d, two_photon, self.truncation)?;
        Ok(p.with_trailing_g(self.trailing_g))
    }

    /// Keeps δ and sets Δ according to `choice`.
    pub fn tuned(self, choice: DetuningChoice) -> Result<Self> {
        let two_photon = match choice {
            DetuningChoice::Resonant => resonant_two_photon_detuning(&self)?,
            DetuningChoice::FirstOrder => {
                let ls = light_shifts(&self)?;
                ls.eps_c1 - ls.eps_a
            }
            DetuningChoice::Explicit(x) => x,
        };
        self.with_two_photon_detuning(two_photon)
    }

    pub fn n_atoms(&self) -> u64 {
        self.n_atoms
    }
    pub fn omega1(&self) -> f64 {
        self.omega1
    }
    pub fn omega2(&self) -> f64 {
        self.omega2
    }
    pub fn delta1(&self) -> f64 {
        self.delta1
    }
    pub fn delta2(&self) -> f64 {
        self.delta2
    }
    pub fn truncation(&self) -> u32 {
        self.truncation
    }
    pub fn trailing_g(&self) -> bool {
        self.trailing_g
    }

    /// δ = (δ₁ + δ₂)/2.
    pub fn common_detuning(&self) -> f64 {
        (self.delta1 + self.delta2) / 2.0
    }

    /// Δ = δ₁ − δ₂.
    pub fn two_photon_detuning(&self) -> f64 {
        self.delta1 - self.delta2
    }

    /// √N·Ω₁Ω₂/(2δ). Zero when δ = 0 would make it undefined; use
    /// [`light_shifts`] to get an error instead.
    pub fn rabi_collective(&self) -> f64 {
        let d = self.common_detuning();
        if d == 0.0 {
            return 0.0;
        }
        sqrt(self.n_atoms as f64) * self.omega1 * self.omega2 / (2.0 * d)
    }

    /// Ordered ladder basis.
    pub fn basis(&self) -> Vec<CollectiveLabel> {
        let mut labels = Vec::with_capacity(2 * self.truncation as usize + 2);
        labels.push(CollectiveLabel::A);
        for n in 1..=self.truncation {
            labels.push(CollectiveLabel::G(n));
            labels.push(CollectiveLabel::C(n));
        }
        if self.trailing_g {
            labels.push(CollectiveLabel::G(self.truncation + 1));
        }
        labels
    }
}

/// How the explicit two-photon detuning Δ is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DetuningChoice {
    /// Δ makes A ↔ C(1) resonant including the exact dressed light shifts.
    Resonant,
    /// Δ = ε_C1 − ε_A from the first-order formulas.
    FirstOrder,
    Explicit(f64),
}

/// A Hermitian matrix (units Γ) together with the labels of its basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianMatrix<L> {
    basis: Vec<L>,
    matrix: CMatrix,
}

/// Relative Hermiticity tolerance enforced at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

impl<L: Clone + PartialEq> HamiltonianMatrix<L> {
    pub fn new(basis: Vec<L>, matrix: CMatrix) -> Result<Self> {
        if basis.len() != matrix.dim() {
            return Err(Error::BasisMismatch { expected: matrix.dim(), found: basis.len() });
        }
        if !matrix.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::invalid(
                "hamiltonian",
                alloc::format!("not Hermitian (defect {:e})", matrix.hermiticity_defect()),
            ));
        }
        Ok(HamiltonianMatrix { basis, matrix })
    }

    pub fn basis(&self) -> &[L] {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, label: &L) -> Option<usize> {
        self.basis.iter().position(|l| l == label)
    }

    pub fn entry(&self, row: &L, col: &L) -> Option<C64> {
        Some(self.matrix[(self.index_of(row)?, self.index_of(col)?)])
    }

    /// `−H`, the generator of the time-reversed evolution.
    pub fn negated(&self) -> Self {
        HamiltonianMatrix { basis: self.basis.clone(), matrix: self.matrix.scale(-1.0) }
    }

    /// Shifts the zero of energy: `H − shift·1`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut m = self.matrix.clone();
        for i in 0..m.dim() {
            m[(i, i)] -= C64::new(shift, 0.0);
        }
        HamiltonianMatrix { basis: self.basis.clone(), matrix: m }
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.matrix.eigh()?.values)
    }
}

/// The full ladder Hamiltonian in the basis returned by
/// [`LadderParams::basis`].
pub fn build_full_ladder(params: &LadderParams) -> Result<HamiltonianMatrix<CollectiveLabel>> {
    let basis = params.basis();
    let n_atoms = params.n_atoms as f64;
    let delta = params.common_detuning();
    let two_photon = params.two_photon_detuning();
    let dim = basis.len();
    let mut m = CMatrix::zeros(dim);

    for (i, label) in basis.iter().enumerate() {
        let diag = match *label {
            CollectiveLabel::A => two_photon / 2.0,
            CollectiveLabel::G(n) => -(delta + f64::from(n - 1) * two_photon),
            CollectiveLabel::C(n) => -f64::from(2 * n - 1) * two_photon / 2.0,
        };
        m[(i, i)] = C64::new(diag, 0.0);
        if i + 1 < dim {
            let coupling = match basis[i + 1] {
                // C(n−1) → G(n) on leg 1
                CollectiveLabel::G(n) => {
                    let count = n_atoms - f64::from(n - 1);
                    if count < 0.0 {
                        return Err(Error::invalid(
                            "truncation",
                            alloc::format!("G({n}) needs at least {} atoms", n - 1),
                        ));
                    }
                    sqrt(count) * params.omega1 / 2.0
                }
                // G(n) → C(n) on leg 2
                CollectiveLabel::C(n) => sqrt(f64::from(n)) * params.omega2 / 2.0,
                CollectiveLabel::A => unreachable!("A only starts the ladder"),
            };
            m[(i, i + 1)] = C64::new(coupling, 0.0);
            m[(i + 1, i)] = C64::new(coupling, 0.0);
        }
    }
    HamiltonianMatrix::new(basis, m)
}

/// First-order light shifts, blockade shift and collective Raman frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LightShifts {
    pub eps_a: f64,
    pub eps_c1: f64,
    pub eps_c2: f64,
    /// Δ_B = −(Ω₂⁴ + Ω₁⁴)/(8δ³).
    pub blockade_shift: f64,
    /// Ω_Ro = √N·Ω₁Ω₂/(2δ).
    pub rabi_collective: f64,
}

impl LightShifts {
    /// ε_C1 − ε_A: the two-photon detuning that puts A ↔ C(1) on resonance.
    pub fn resonance(&self) -> f64 {
        self.eps_c1 - self.eps_a
    }

    /// (ε_C1 − ε_A) − (ε_C2 − ε_C1); zero by construction.
    pub fn balance_residual(&self) -> f64 {
        (self.eps_c1 - self.eps_a) - (self.eps_c2 - self.eps_c1)
    }
}

/// Closed-form shifts, all evaluated at the common detuning δ.
pub fn light_shifts(params: &LadderParams) -> Result<LightShifts> {
    let d = params.common_detuning();
    if d == 0.0 {
        return Err(Error::DivisionByZero {
            quantity: "light shifts", denominator: "common detuning δ = (δ₁+δ₂)/2"
        });
    }
    let n = params.n_atoms as f64;
    let o1 = params.omega1 * params.omega1;
    let o2 = params.omega2 * params.omega2;
    // ε_C1 − ε_A = (Ω₂² − Ω₁²)/4δ and ε_C2 − ε_C1 is the same expression,
    // so build both from the common step to keep the balance exact.
    let eps_a = n * o1 / (4.0 * d);
    let step = (o2 - o1) / (4.0 * d);
    Ok(LightShifts {
        eps_a,
        eps_c1: eps_a + step,
        eps_c2: eps_a + 2.0 * step,
        blockade_shift: -(o2 * o2 + o1 * o1) / (8.0 * d * d * d),
        rabi_collective: sqrt(n) * params.omega1 * params.omega2 / (2.0 * d),
    })
}

/// Exact energy shift of a level at zero coupled with strength `rabi/2` to a
/// level at `−detuning`: `(√(detuning² + rabi²) − detuning)/2` for positive
/// detuning, and the mirror image for negative detuning.
pub fn dressed_shift(rabi: f64, detuning: f64) -> f64 {
    let r2 = rabi * rabi;
    if r2 == 0.0 {
        return 0.0;
    }
    let root = sqrt(detuning * detuning + r2);
    // r²/(2(|d| + root)) is the cancellation-free form of (root − |d|)/2
    let magnitude = r2 / (2.0 * (libm::fabs(detuning) + root));
    if detuning >= 0.0 {
        magnitude
    } else {
        -magnitude
    }
}

/// Exact dressed shifts of A, C(1), C(2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedShifts {
    pub eps_a: f64,
    pub eps_c1: f64,
    pub eps_c2: f64,
}

impl DressedShifts {
    /// (ε_C2 − ε_C1) − (ε_C1 − ε_A).
    pub fn blockade_residual(&self) -> f64 {
        (self.eps_c2 - self.eps_c1) - (self.eps_c1 - self.eps_a)
    }
}

/// Dressed shifts of the three ground collective states, each leg treated as
/// an isolated two-level system at its own detuning (δ₁ for Ω₁, δ₂ for Ω₂).
pub fn dressed_shifts(params: &LadderParams) -> Result<DressedShifts> {
    if params.n_atoms < 2 {
        return Err(Error::invalid("n_atoms", "C(2) needs at least two atoms"));
    }
    Ok(dressed_shifts_at(params, params.delta1, params.delta2))
}

fn dressed_shifts_at(params: &LadderParams, delta1: f64, delta2: f64) -> DressedShifts {
    let n = params.n_atoms as f64;
    let leg1 = |count: f64| dressed_shift(sqrt(count.max(0.0)) * params.omega1, delta1);
    let leg2 = |count: f64| dressed_shift(sqrt(count) * params.omega2, delta2);
    DressedShifts { eps_a: leg1(n), eps_c1: leg2(1.0) + leg1(n - 1.0), eps_c2: leg2(2.0) + leg1(n - 2.0) }
}

/// Blockade shift from the exact dressed shifts; agrees with the closed form
/// of [`light_shifts`] deep in the perturbative regime.
pub fn blockade_shift_numeric(params: &LadderParams) -> Result<f64> {
    Ok(dressed_shifts(params)?.blockade_residual())
}

/// Two-photon detuning that makes A ↔ C(1) resonant once the exact dressed
/// shifts are included. δ is held fixed while δ₁ = δ + Δ/2 and δ₂ = δ − Δ/2
/// follow Δ, so the condition Δ = ε_C1(δ₁, δ₂) − ε_A(δ₁) is solved by fixed
/// point iteration (the map contracts with rate ~Ω²/δ²).
pub fn resonant_two_photon_detuning(params: &LadderParams) -> Result<f64> {
    let delta = params.common_detuning();
    if delta == 0.0 {
        return Err(Error::DivisionByZero {
            quantity: "resonant two-photon detuning",
            denominator: "common detuning δ",
        });
    }
    let n = params.n_atoms as f64;
    let shift_difference = |two_photon: f64| {
        let d1 = delta + two_photon / 2.0;
        let d2 = delta - two_photon / 2.0;
        let eps_a = dressed_shift(sqrt(n) * params.omega1, d1);
        let eps_c1 = dressed_shift(params.omega2, d2) + dressed_shift(sqrt(n - 1.0) * params.omega1, d1);
        eps_c1 - eps_a
    };
    let mut x = light_shifts(params).map(|ls| ls.eps_c1 - ls.eps_a)?;
    for _ in 0..200 {
        let next = shift_difference(x);
        if (next - x).abs() <= 4.0 * f64::EPSILON * next.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Numerical("resonant detuning iteration did not converge".into()))
}

/// Which light shifts populate the diagonal of the eliminated Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftModel {
    /// First-order closed forms at the common detuning.
    FirstOrder,
    /// Exact dressed shifts at the per-leg detunings.
    Dressed,
}

/// Three-level Hamiltonian on {A, C(1), C(2)} after eliminating the G states.
#[derive(Clone, Debug)]
pub struct EffectiveHamiltonian {
    pub hamiltonian: HamiltonianMatrix<CollectiveLabel>,
    /// Set when δ is not at least ten times every other rate.
    pub regime_warning: Option<String>,
}

fn regime_warning(params: &LadderParams) -> Option<String> {
    let d = params.common_detuning().abs();
    let largest =
        params.omega2.max(sqrt(params.n_atoms as f64) * params.omega1).max(params.two_photon_detuning().abs());
    if d < 10.0 * largest {
        Some(alloc::format!("|δ| = {d} is not ≫ max(Ω₂, √N·Ω₁, |Δ|) = {largest}; elimination is approximate"))
    } else {
        None
    }
}

/// Adiabatic elimination of the G states to the {A, C(1), C(2)} form
///
/// ```text
/// [ ε_A + Δ/2   Ω_Ro/2                 0                      ]
/// [ Ω_Ro/2      ε_C1 − Δ/2             √(2(N−1)/N)·Ω_Ro/2     ]
/// [ 0           √(2(N−1)/N)·Ω_Ro/2     ε_C2 − 3Δ/2            ]
/// ```
pub fn adiabatic_eliminate(params: &LadderParams, model: ShiftModel) -> Result<EffectiveHamiltonian> {
    if params.n_atoms < 2 {
        return Err(Error::invalid("n_atoms", "the three-level form needs C(2), i.e. N ≥ 2"));
    }
    let ls = light_shifts(params)?;
    let (eps_a, eps_c1, eps_c2) = match model {
        ShiftModel::FirstOrder => (ls.eps_a, ls.eps_c1, ls.eps_c2),
        ShiftModel::Dressed => {
            let d = dressed_shifts(params)?;
            (d.eps_a, d.eps_c1, d.eps_c2)
        }
    };
    let n = params.n_atoms as f64;
    let two_photon = params.two_photon_detuning();
    let half_ro = ls.rabi_collective / 2.0;
    let upper = sqrt(2.0 * (n - 1.0) / n) * half_ro;
    let m = CMatrix::from_real_rows(
        3,
        &[
            eps_a + two_photon / 2.0,
            half_ro,
            0.0,
            half_ro,
            eps_c1 - two_photon / 2.0,
            upper,
            0.0,
            upper,
            eps_c2 - 1.5 * two_photon,
        ],
    )?;
    Ok(EffectiveHamiltonian {
        hamiltonian: HamiltonianMatrix::new(
            alloc::vec![CollectiveLabel::A, CollectiveLabel::C(1), CollectiveLabel::C(2)],
            m,
        )?,
        regime_warning: regime_warning(params),
    })
}

/// The resonant two-level-plus-blockade form on {A, C(1), C(2)}:
///
/// ```text
/// [ 0        Ω_Ro/2    0       ]
/// [ Ω_Ro/2   0         Ω_Ro/√2 ]
/// [ 0        Ω_Ro/√2   Δ_B     ]
/// ```
pub fn balanced_form(rabi_collective: f64, blockade_shift: f64) -> Result<HamiltonianMatrix<CollectiveLabel>> {
    let a = rabi_collective / 2.0;
    let b = rabi_collective / core::f64::consts::SQRT_2;
    let m = CMatrix::from_real_rows(3, &[0.0, a, 0.0, a, 0.0, b, 0.0, b, blockade_shift])?;
    HamiltonianMatrix::new(alloc::vec![CollectiveLabel::A, CollectiveLabel::C(1), CollectiveLabel::C(2)], m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn reference_example() -> LadderParams {
        LadderParams::from_common(1225, 1e-3, 100.0, 1000.0, 2.5, 2).unwrap()
    }

    #[test]
    fn labels_print_like_the_ladder() {
        let p = reference_example().with_trailing_g(true);
        let names: Vec<_> = p.basis().iter().map(|l| l.to_string()).collect();
        assert_eq!(names, ["A", "G1", "C1", "G11", "C2", "G12"]);
    }

    #[test]
    fn six_level_entries() {
        let eta = 1e-3;
        let p = LadderParams::from_common(1200, eta, 100.0, 1000.0, 2.5, 2).unwrap().with_trailing_g(true);
        let h = build_full_ladder(&p).unwrap();
        use CollectiveLabel::*;
        let e = |a, b| h.entry(&a, &b).unwrap();
        assert!((e(A, G(1)).re - sqrt(1200.0) * eta / 2.0).abs() < 1e-15);
        assert_eq!(e(G(1), C(1)).re, 50.0);
        assert_eq!(e(G(3), G(3)).re, -1005.0);
        assert_eq!(e(A, A).re, 1.25);
        assert_eq!(e(C(1), C(1)).re, -1.25);
        assert_eq!(e(C(2), C(2)).re, -3.75);
        assert_eq!(e(G(2), G(2)).re, -1002.5);
        assert!((e(C(1), G(2)).re - sqrt(1199.0) * eta / 2.0).abs() < 1e-15);
        assert!((e(G(2), C(2)).re - sqrt(2.0) * 50.0).abs() < 1e-12);
        assert!((e(C(2), G(3)).re - sqrt(1198.0) * eta / 2.0).abs() < 1e-15);
        assert_eq!(e(A, C(1)).re, 0.0);
    }

    #[test]
    fn single_atom_decouples_after_c1() {
        let p = LadderParams::from_common(1, 0.3, 2.0, 50.0, 0.0, 1).unwrap().with_trailing_g(true);
        let h = build_full_ladder(&p).unwrap();
        let c = h.entry(&CollectiveLabel::C(1), &CollectiveLabel::G(2)).unwrap();
        assert_eq!(c, C64::new(0.0, 0.0));
    }

    #[test]
    fn truncation_beyond_atoms_is_rejected() {
        assert!(LadderParams::from_common(2, 0.1, 1.0, 10.0, 0.0, 3).is_err());
        assert!(LadderParams::from_common(0, 0.1, 1.0, 10.0, 0.0, 1).is_err());
        assert!(LadderParams::from_common(5, -0.1, 1.0, 10.0, 0.0, 1).is_err());
    }

    #[test]
    fn light_shift_values() {
        let p = LadderParams::from_common(1225, 0.0, 100.0, 1000.0, 0.0, 2).unwrap();
        let ls = light_shifts(&p).unwrap();
        assert_eq!(ls.blockade_shift, -1.0 / 80.0);
        assert!((ls.eps_c1 - ls.eps_a - 2.5).abs() < 1e-12);
        assert_eq!(ls.balance_residual(), 0.0);

        let p = LadderParams::from_common(1225, 1e-3, 100.0, 1000.0, 0.0, 2).unwrap();
        let ls = light_shifts(&p).unwrap();
        assert!((ls.rabi_collective - 1.75e-3).abs() < 1e-15);
    }

    #[test]
    fn no_fields_no_shifts() {
        let p = LadderParams::from_common(10, 0.0, 0.0, 100.0, 0.0, 2).unwrap();
        let ls = light_shifts(&p).unwrap();
        assert_eq!((ls.eps_a, ls.eps_c1, ls.eps_c2, ls.blockade_shift, ls.rabi_collective), (0.0, 0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn zero_detuning_is_an_error() {
        let p = LadderParams::from_common(10, 0.1, 1.0, 0.0, 0.0, 2).unwrap();
        assert!(matches!(light_shifts(&p), Err(Error::DivisionByZero { .. })));
    }

    #[test]
    fn dressed_shift_matches_two_level_eigenvalue() {
        for &(rabi, det) in &[(100.0, 1000.0), (3.0, -7.0), (0.02, 5.0)] {
            let m = CMatrix::from_real_rows(2, &[0.0, rabi / 2.0, rabi / 2.0, -det]).unwrap();
            let vals = m.eigh().unwrap().values;
            // the level that started at zero
            let exact = if det > 0.0 { vals[1] } else { vals[0] };
            assert!((dressed_shift(rabi, det) - exact).abs() < 1e-12 * (1.0 + det.abs()), "{rabi} {det}");
        }
    }

    #[test]
    fn numeric_blockade_without_leg_two_is_zero() {
        let p = LadderParams::from_common(100, 0.01, 0.0, 1000.0, 0.0, 2).unwrap();
        // Ω₁ legs alone still give −Ω₁⁴/8δ³, which is far below 1e-15 here
        assert!(blockade_shift_numeric(&p).unwrap().abs() < 1e-15);
        let p = LadderParams::from_common(100, 0.0, 0.0, 1000.0, 0.0, 2).unwrap();
        assert_eq!(blockade_shift_numeric(&p).unwrap(), 0.0);
    }

    #[test]
    fn resonant_detuning_is_self_consistent() {
        let p = reference_example();
        let x = resonant_two_photon_detuning(&p).unwrap();
        let tuned = p.with_two_photon_detuning(x).unwrap();
        let d = dressed_shifts(&tuned).unwrap();
        assert!((d.eps_c1 - d.eps_a - x).abs() < 1e-13);
        // second-order correction pulls Δ below the first-order 2.5
        assert!(x < 2.5 && x > 2.49);
    }

    #[test]
    fn elimination_entries() {
        let p = reference_example();
        let eff = adiabatic_eliminate(&p, ShiftModel::FirstOrder).unwrap();
        let h = &eff.hamiltonian;
        use CollectiveLabel::*;
        let ro = 1.75e-3;
        assert!((h.entry(&A, &C(1)).unwrap().re - ro / 2.0).abs() < 1e-15);
        let upper = h.entry(&C(1), &C(2)).unwrap().re;
        assert!((upper - sqrt(2.0 * 1224.0 / 1225.0) * ro / 2.0).abs() < 1e-15);
        assert!((upper - ro / sqrt(2.0)).abs() / (ro / sqrt(2.0)) < 5e-4);
        assert_eq!(h.entry(&A, &C(2)).unwrap().re, 0.0);
        assert!(eff.regime_warning.is_none());
    }

    #[test]
    fn elimination_without_leg_one_is_uncoupled() {
        let p = LadderParams::from_common(50, 0.0, 100.0, 1000.0, 2.5, 2).unwrap();
        let h = adiabatic_eliminate(&p, ShiftModel::Dressed).unwrap().hamiltonian;
        use CollectiveLabel::*;
        assert_eq!(h.entry(&A, &C(1)).unwrap().norm(), 0.0);
        assert_eq!(h.entry(&A, &C(2)).unwrap().norm(), 0.0);
    }

    #[test]
    fn regime_violation_is_flagged_not_fatal() {
        let p = LadderParams::from_common(50, 0.1, 100.0, 200.0, 2.5, 2).unwrap();
        let eff = adiabatic_eliminate(&p, ShiftModel::FirstOrder).unwrap();
        assert!(eff.regime_warning.is_some());
    }

    #[test]
    fn balanced_form_layout() {
        let h = balanced_form(2.0, -0.5).unwrap();
        let m = h.matrix();
        assert_eq!(m[(0, 1)].re, 1.0);
        assert!((m[(1, 2)].re - sqrt(2.0)).abs() < 1e-15);
        assert_eq!(m[(2, 2)].re, -0.5);
        assert_eq!(m[(0, 0)].re, 0.0);
    }
}
