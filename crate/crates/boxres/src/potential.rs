//! The model central potential and its effective (centrifugal-corrected) form.
//!
//! The potential is a finite-range bump plus a long-range Coulomb tail, in
//! Hartree atomic units (ħ = m = e = 1):
//!
//!   V(r) = V₀ r² e^(−r) + Z/r
//!
//! With V₀ = 7.5 and Z = −1 the finite-range part raises a barrier of height
//! ~3.57 around r ≈ 2.1 while the attractive tail falls off like −1/r. The
//! Coulomb coefficient Z is kept as an explicit field rather than folded into
//! an opaque closure: the width formula and the scattering asymptotics need
//! Z on its own, and the tail must never be truncated.

use crate::error::{Error, Result};

/// Parameters of the central potential for one partial wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    /// Strength of the finite-range part V₀ r² e^(−r).
    pub v0: f64,
    /// Coulomb coefficient; the tail is +Z/r (attractive for Z < 0).
    pub z: f64,
    /// Orbital angular momentum.
    pub l: u32,
}

impl PotentialSpec {
    pub fn new(v0: f64, z: f64, l: u32) -> Self {
        Self { v0, z, l }
    }

    /// The model potential of the reference calculation: V₀ = 7.5, Z = −1.
    pub fn model(l: u32) -> Self {
        Self::new(7.5, -1.0, l)
    }

    fn check_radius(r: f64) -> Result<()> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {r}")));
        }
        Ok(())
    }

    /// Finite-range part V₀ r² e^(−r).
    pub fn eval_finite_range(&self, r: f64) -> Result<f64> {
        Self::check_radius(r)?;
        Ok(self.v0 * r * r * (-r).exp())
    }

    /// Full potential V₀ r² e^(−r) + Z/r.
    pub fn eval_total(&self, r: f64) -> Result<f64> {
        Self::check_radius(r)?;
        Ok(self.v0 * r * r * (-r).exp() + self.z / r)
    }

    /// Effective potential including the centrifugal barrier,
    /// V(r) + l(l+1)/(2r²).
    pub fn eval_effective(&self, r: f64) -> Result<f64> {
        let l = f64::from(self.l);
        Ok(self.eval_total(r)? + l * (l + 1.0) / (2.0 * r * r))
    }
}
