//! Light-shift-imbalance blockade of collective atomic excitations.
//!
//! The crate is `no_std` (it needs `alloc`) and holds all of the physics:
//!
//! - [`collective`]: collective-state ladder Hamiltonians, light shifts, the
//!   blockade shift and the adiabatically eliminated three-level forms.
//! - [`dynamics`]: exact piecewise-constant propagation, population
//!   trajectories and Rabi fits.
//! - [`protocol`]: the ensemble C-NOT, the inter-computer photon link and the
//!   coincidence observable on an explicit product register.
//! - [`cavity`]: cavity figures of merit from geometry and atom number.
//!
//! All energies and rates are in units of the excited-state linewidth Γ and
//! all times in Γ⁻¹ unless a name says otherwise; [`units`] converts at the
//! reporting boundary.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cavity;
pub mod collective;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod protocol;
pub mod register;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
