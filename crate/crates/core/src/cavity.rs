//! Cavity figures of merit from geometry, mirror transmittivity and atom
//! number.
//!
//! The coupling is scaled from a reference cavity (`CavityAnchor`) rather
//! than computed from a dipole moment; [`first_principles_g`] is a separate
//! cross-check.

use core::f64::consts::PI;

use libm::sqrt;

use crate::collective::LadderParams;
use crate::units::{gamma_time_to_seconds, hz_to_gamma, EPSILON_0, GAMMA_SI, HBAR, SPEED_OF_LIGHT};
use crate::{Error, Result};

/// Rb D2 line angular frequency (rad/s), 780.241 nm.
pub const RB_D2_OMEGA: f64 = 2.0 * PI * SPEED_OF_LIGHT / 780.241e-9;

/// Effective transition dipole (C·m) that reproduces the anchor coupling:
/// 6.0 e·a₀.
pub const ANCHOR_DIPOLE_MOMENT: f64 = 6.0 * crate::units::ELEMENTARY_CHARGE * crate::units::BOHR_RADIUS;

/// Reference point for the coupling scaling law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityAnchor {
    /// Single-atom vacuum Rabi frequency (Γ).
    pub g0: f64,
    /// Length (m).
    pub length: f64,
    /// Mode diameter (m).
    pub mode_diameter: f64,
}

impl Default for CavityAnchor {
    fn default() -> Self {
        CavityAnchor { g0: 54.25, length: 40e-6, mode_diameter: 5e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityGeometry {
    /// m
    pub length: f64,
    /// m
    pub mode_diameter: f64,
    /// Intensity transmittivity of each mirror.
    pub mirror_transmittivity: f64,
    pub n_atoms: u64,
    pub anchor: CavityAnchor,
}

impl CavityGeometry {
    pub fn new(length: f64, mode_diameter: f64, mirror_transmittivity: f64, n_atoms: u64) -> Result<Self> {
        let g =
            CavityGeometry { length, mode_diameter, mirror_transmittivity, n_atoms, anchor: CavityAnchor::default() };
        g.validate()?;
        Ok(g)
    }

    pub fn with_anchor(mut self, anchor: CavityAnchor) -> Result<Self> {
        self.anchor = anchor;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("length", self.length),
            ("mode_diameter", self.mode_diameter),
            ("anchor.g0", self.anchor.g0),
            ("anchor.length", self.anchor.length),
            ("anchor.mode_diameter", self.anchor.mode_diameter),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidGeometry { name, reason: "must be positive and finite".into() });
            }
        }
        let t = self.mirror_transmittivity;
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidGeometry { name: "mirror_transmittivity", reason: "must lie in (0, 1)".into() });
        }
        if self.n_atoms == 0 {
            return Err(Error::InvalidGeometry { name: "n_atoms", reason: "need at least one atom".into() });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityFigures {
    /// Collective vacuum Rabi frequency (Γ).
    pub g: f64,
    pub finesse: f64,
    /// Free spectral range (Hz).
    pub fsr: f64,
    /// Field decay rate, half width at half maximum (Γ).
    pub gamma_hwhm: f64,
    /// Same as `gamma_hwhm`, in Hz.
    pub gamma_hwhm_hz: f64,
    /// Photon lifetime 1/(2π·γ_Hz) (s).
    pub lifetime: f64,
    /// m³
    pub mode_volume: f64,
}

pub fn cavity_figures(geom: &CavityGeometry) -> Result<CavityFigures> {
    geom.validate()?;
    let a = &geom.anchor;
    let mode_volume = PI / 4.0 * geom.mode_diameter * geom.mode_diameter * geom.length;
    let g = a.g0 * (a.mode_diameter / geom.mode_diameter) * sqrt(a.length / geom.length) * sqrt(geom.n_atoms as f64);
    let finesse = PI / geom.mirror_transmittivity;
    let fsr = SPEED_OF_LIGHT / (2.0 * geom.length);
    let gamma_hwhm_hz = fsr / (2.0 * finesse);
    Ok(CavityFigures {
        g,
        finesse,
        fsr,
        gamma_hwhm: hz_to_gamma(gamma_hwhm_hz),
        gamma_hwhm_hz,
        lifetime: 1.0 / (2.0 * PI * gamma_hwhm_hz),
        mode_volume,
    })
}

/// Single-atom coupling `d·E₁/(2ħ)` in Γ units, with the single-photon field
/// `E₁ = √(2ħω/(ε₀V))`.
pub fn first_principles_g(omega: f64, mode_volume: f64, dipole_moment: f64) -> Result<f64> {
    for (name, v) in [("omega", omega), ("mode_volume", mode_volume), ("dipole_moment", dipole_moment)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(name, "must be positive and finite"));
        }
    }
    let field = sqrt(2.0 * HBAR * omega / (EPSILON_0 * mode_volume));
    Ok(dipole_moment * field / (2.0 * HBAR) / GAMMA_SI)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Feasibility {
    pub pi_time_s: f64,
    pub lifetime_s: f64,
    /// pi_time / lifetime.
    pub ratio: f64,
    pub feasible: bool,
}

/// Compares the collective π time π/Ω_Ro with the cavity photon lifetime.
pub fn gate_feasibility(geom: &CavityGeometry, params: &LadderParams) -> Result<Feasibility> {
    let lifetime_s = cavity_figures(geom)?.lifetime;
    let rabi = libm::fabs(params.rabi_collective());
    if !(rabi > 0.0) {
        return Err(Error::DivisionByZero { quantity: "π time", denominator: "collective Rabi frequency" });
    }
    Ok(feasibility(gamma_time_to_seconds(PI / rabi), lifetime_s))
}

/// Feasibility from explicit times (s).
pub fn feasibility(pi_time_s: f64, lifetime_s: f64) -> Feasibility {
    let ratio = pi_time_s / lifetime_s;
    Feasibility { pi_time_s, lifetime_s, ratio, feasible: pi_time_s < lifetime_s }
}
