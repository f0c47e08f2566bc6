//! Locating single-particle resonances of a radial Schrödinger problem with
//! a long-range Coulomb tail, by the spherical-box stabilization method.
//!
//! The continuum is discretized by forcing the radial wavefunction to vanish
//! at a box radius ℛ. Sweeping ℛ turns each resonance into a plateau of the
//! discrete levels E_n(ℛ); the inflection ∂²E/∂ℛ² = 0 pins the resonance
//! energy E_γ, and the slope dE/dℛ there yields the width Γ through a
//! Coulomb-corrected closed formula. An independent scattering oracle
//! extracts the phase shift η_l(E) by matching the integrated wavefunction
//! to the Coulomb-modified asymptotic form and fitting a Breit-Wigner
//! resonance profile, with no box anywhere — the two routes cross-validate
//! each other.
//!
//! Everything is in Hartree atomic units (ħ = m = e = 1).

// `!(x > 0.0)` deliberately reads "not provably positive": it rejects NaN
// along with the out-of-range values, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod oracle;
pub mod potential;
pub mod report;
pub mod solver;
pub mod stabilization;

pub use config::{Mode, RunConfig};
pub use error::{Error, Result};
pub use potential::PotentialSpec;
pub use solver::{EigenState, IntegrationParams, ShootResult};
pub use stabilization::{BranchCurve, ResonanceResult, StablePoint};
