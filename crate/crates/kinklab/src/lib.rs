//! Stationary kink profiles under asymmetric double-well potentials.
//!
//! The crate computes the diffuse interface connecting the two degenerate
//! minima of a double-well energy on a finite interval, the energy level
//! that pins it there, and the localization diagnostics that show the
//! interface position converging (as the gradient-energy coefficient k
//! shrinks) to
//!
//! ```text
//!   x_0 = ell * sqrt(V''(b)) / (sqrt(V''(a)) + sqrt(V''(b)))
//! ```
//!
//! A finite-difference Newton solver provides an independent route to the
//! same profiles and extends to a coupled two-field poromechanics model,
//! whose degenerate case reduces to the one-field theory and predicts the
//! position of the fluid-rich/fluid-poor interface.

pub mod bvp;
pub mod error;
pub mod kinkcore;
pub mod numerics;
pub mod poromechanics;
pub mod potential;

pub use error::{Error, Result};
pub use kinkcore::{
    compute_profile, interface_position, limit_position, localization_diagnostics,
    profile_time, solve_energy_level, EnergySolution, KinkProfile, LocalizationDiagnostics,
};
pub use potential::{
    build_ratchet_cm, build_rocked_ratchet, quartic, DoubleWellPotential, RatchetCmParams,
    RockedRatchetParams, ValidationReport,
};
