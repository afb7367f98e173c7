//! Tweezer fields, cavity modes and the optomechanical couplings they produce.

use std::f64::consts::PI;

use crate::constants::{HBAR, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::error::{Error, Result};
use crate::model::particle::Polarizability;

/// A rate or frequency given either in rad/s or in units of the torsional
/// frequency, which is only known once the trap has been solved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScaledRate {
    RadPerSecond(f64),
    OmegaM(f64),
}

impl ScaledRate {
    pub fn resolve(self, omega_m: f64) -> f64 {
        match self {
            ScaledRate::RadPerSecond(v) => v,
            ScaledRate::OmegaM(v) => v * omega_m,
        }
    }
}

/// Linearly polarized Gaussian trapping beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tweezer {
    /// Vacuum wavelength (m).
    pub wavelength: f64,
    /// Power in focus (W).
    pub power: f64,
    /// Focal waist (m).
    pub waist: f64,
    /// Cavity detuning `omega_c - omega_j`.
    pub detuning: ScaledRate,
}

impl Tweezer {
    pub fn validate(&self, index: usize) -> Result<()> {
        let field = |k: &str| format!("tweezers[{index}].{k}");
        if !(self.wavelength.is_finite() && self.wavelength > 0.0) {
            return Err(Error::invalid(field("wavelength_m"), "must be positive"));
        }
        if !(self.power.is_finite() && self.power >= 0.0) {
            return Err(Error::invalid(field("power_w"), "must be non-negative"));
        }
        if !(self.waist.is_finite() && self.waist > 0.0) {
            return Err(Error::invalid(field("waist_m"), "must be positive"));
        }
        Ok(())
    }

    /// Optical angular frequency `2πc/λ`.
    pub fn angular_frequency(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.wavelength
    }

    pub fn rayleigh_range(&self) -> f64 {
        PI * self.waist * self.waist / self.wavelength
    }
}

/// Focal field amplitude `sqrt(4P / (π ε0 c w0²))` in V/m.
pub fn tweezer_amplitude(tw: &Tweezer) -> f64 {
    (4.0 * tw.power / (PI * VACUUM_PERMITTIVITY * SPEED_OF_LIGHT * tw.waist * tw.waist)).sqrt()
}

/// One cavity mode addressed by one tweezer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityMode {
    /// Resonance angular frequency (rad/s).
    pub resonance: f64,
    /// Amplitude decay rate.
    pub kappa: ScaledRate,
    /// Cavity length (m).
    pub length: f64,
    /// Mode waist (m).
    pub waist: f64,
    /// Phase of the standing wave at the particle; 0 is the anti-node.
    pub phase: f64,
}

impl CavityMode {
    pub fn validate(&self, index: usize) -> Result<()> {
        let field = |k: &str| format!("cavity_modes[{index}].{k}");
        if !(self.resonance.is_finite() && self.resonance > 0.0) {
            return Err(Error::invalid(field("resonance_rad_s"), "must be positive"));
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(Error::invalid(field("length_m"), "must be positive"));
        }
        if !(self.waist.is_finite() && self.waist > 0.0) {
            return Err(Error::invalid(field("waist_m"), "must be positive"));
        }
        let kappa = match self.kappa {
            ScaledRate::RadPerSecond(v) | ScaledRate::OmegaM(v) => v,
        };
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::invalid(field("kappa"), "decay rate must be positive"));
        }
        if !self.phase.is_finite() {
            return Err(Error::invalid(field("phase_rad"), "must be finite"));
        }
        Ok(())
    }

    /// `π d w_c² / 4`.
    pub fn mode_volume(&self) -> f64 {
        PI * self.length * self.waist * self.waist / 4.0
    }
}

/// Torsional trap frequency from the summed squared focal fields.
pub fn torsional_frequency(field_amplitudes: &[f64], pol: &Polarizability, inertia: f64) -> Result<f64> {
    let anisotropy = pol.anisotropy();
    if anisotropy <= 0.0 {
        return Err(Error::NoTrap(format!(
            "alpha_a - alpha_b = {anisotropy:e} must be positive"
        )));
    }
    let field_sq: f64 = field_amplitudes.iter().map(|e| e * e).sum();
    if field_sq <= 0.0 {
        return Err(Error::NoTrap("all tweezer amplitudes are zero".into()));
    }
    Ok((field_sq * anisotropy / (2.0 * inertia)).sqrt())
}

/// Zero-point angular fluctuation `sqrt(ħ / (2 I ω_m))`.
pub fn zero_point_fluctuation(inertia: f64, omega_m: f64) -> f64 {
    (HBAR / (2.0 * inertia * omega_m)).sqrt()
}

/// Coherent-scattering coupling between the torsional mode and one cavity mode.
pub fn coherent_scattering_coupling(pol: &Polarizability, field_amplitude: f64, xi0: f64, cav: &CavityMode) -> f64 {
    let vacuum = (cav.resonance / (8.0 * HBAR * VACUUM_PERMITTIVITY * cav.mode_volume())).sqrt();
    pol.anisotropy() * field_amplitude * xi0 * cav.phase.cos() * vacuum
}

/// Intrinsic (cavity-field-only) coupling. Diagnostic: it is dropped from the
/// dynamics because it is far weaker than the coherent-scattering term.
pub fn intrinsic_coupling(pol: &Polarizability, xi0: f64, cav: &CavityMode) -> f64 {
    let c = cav.phase.cos();
    pol.anisotropy() * cav.resonance * xi0 * c * c / (2.0 * VACUUM_PERMITTIVITY * cav.mode_volume())
}
