//! Physical constants and the Γ-unit conversions used at reporting boundaries.

use core::f64::consts::PI;

/// Natural linewidth of the excited state, as an angular rate (s⁻¹).
pub const GAMMA_SI: f64 = 2.0 * PI * 6.0e6;

/// Natural linewidth as a frequency (Hz): `GAMMA_SI / 2π`.
pub const GAMMA_HZ: f64 = 6.0e6;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Bohr radius (m).
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;

/// Converts a duration in Γ⁻¹ to seconds.
pub fn gamma_time_to_seconds(t: f64) -> f64 {
    t / GAMMA_SI
}

/// Converts a duration in seconds to Γ⁻¹.
pub fn seconds_to_gamma_time(t: f64) -> f64 {
    t * GAMMA_SI
}

/// Converts a frequency in Hz to Γ units.
pub fn hz_to_gamma(f: f64) -> f64 {
    f / GAMMA_HZ
}

/// Converts an angular rate (rad/s) to Γ units.
pub fn angular_to_gamma(w: f64) -> f64 {
    w / GAMMA_SI
}
