//! Physical parameters of the reduced linear model.
//!
//! Raw experimental inputs (particle, tweezers, cavity modes, gas) are
//! reduced to a [`SystemModel`]: torsional frequency and damping, thermal
//! occupation, and per cavity channel a coupling, a decay rate and a detuning.

pub mod gas;
pub mod optics;
pub mod particle;

pub use gas::{gas_damping, shape_functions, thermal_occupation, GasEnvironment};
pub use optics::{
    coherent_scattering_coupling, intrinsic_coupling, torsional_frequency, tweezer_amplitude, zero_point_fluctuation,
    CavityMode, ScaledRate, Tweezer,
};
pub use particle::{depolarization_factors, polarizability, DepolarizationFactors, Ellipsoid, Polarizability};

use crate::error::{Error, Result};

/// Cavity-mode waist used when a configuration leaves it out. It is a
/// calibration: with a single 10–100 mW tweezer it puts `g/ω_m` of the
/// reference particle in the 0.5–0.9 band.
pub const DEFAULT_CAVITY_WAIST: f64 = 10e-6;

/// Coupling-to-frequency ratio above which the rotating-wave approximation fails.
pub const ULTRA_STRONG_RATIO: f64 = 0.1;

/// One optical channel of the linear model, all rates in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub coupling: f64,
    pub kappa: f64,
    pub detuning: f64,
}

/// The linearized torsion + two-mode cavity model consumed by all dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemModel {
    pub omega_m: f64,
    pub gamma_m: f64,
    pub n_bar: f64,
    /// Zero-point angular fluctuation (rad).
    pub xi0: f64,
    pub mode_a: Channel,
    pub mode_b: Channel,
}

impl SystemModel {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be positive, got {v}")))
            }
        };
        let non_negative = |name: &str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be non-negative, got {v}")))
            }
        };
        positive("omega_m", self.omega_m)?;
        non_negative("gamma_m", self.gamma_m)?;
        non_negative("n_bar", self.n_bar)?;
        for (tag, ch) in [("A", &self.mode_a), ("B", &self.mode_b)] {
            positive(&format!("kappa_{tag}"), ch.kappa)?;
            if !ch.coupling.is_finite() || !ch.detuning.is_finite() {
                return Err(Error::invalid(format!("channel {tag}"), "coupling and detuning must be finite"));
            }
        }
        Ok(())
    }

    /// True when only channel A is coupled.
    pub fn is_single_mode(&self) -> bool {
        self.mode_b.coupling == 0.0
    }

    /// The same system with the A and B channel labels exchanged.
    pub fn swapped(&self) -> Self {
        SystemModel {
            mode_a: self.mode_b,
            mode_b: self.mode_a,
            ..*self
        }
    }

    /// The same system with every coupling switched off.
    pub fn decoupled(&self) -> Self {
        let mut s = *self;
        s.mode_a.coupling = 0.0;
        s.mode_b.coupling = 0.0;
        s
    }

    /// Inert second channel for single-tweezer setups.
    pub fn idle_channel(omega_m: f64) -> Channel {
        Channel {
            coupling: 0.0,
            kappa: omega_m,
            detuning: -omega_m,
        }
    }
}

/// Raw inputs of one experimental configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Setup {
    pub ellipsoid: Ellipsoid,
    pub tweezers: Vec<Tweezer>,
    pub cavities: Vec<CavityMode>,
    pub gas: GasEnvironment,
    /// Set when at least one cavity waist fell back to [`DEFAULT_CAVITY_WAIST`].
    pub calibrated_waist: bool,
}

/// Everything derived on the way from a [`Setup`] to its [`SystemModel`].
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub system: SystemModel,
    pub mass: f64,
    pub inertia: f64,
    pub depolarization: DepolarizationFactors,
    pub polarizability: Polarizability,
    pub field_amplitudes: Vec<f64>,
    /// Intrinsic couplings per channel, for comparison with the scattering ones.
    pub intrinsic_couplings: Vec<f64>,
    pub calibrated_waist: bool,
}

impl Derivation {
    pub fn coupling_ratios(&self) -> (f64, f64) {
        let s = &self.system;
        (s.mode_a.coupling / s.omega_m, s.mode_b.coupling / s.omega_m)
    }

    pub fn ultra_strong(&self) -> bool {
        let (a, b) = self.coupling_ratios();
        a.abs().max(b.abs()) > ULTRA_STRONG_RATIO
    }
}

pub fn derive(setup: &Setup) -> Result<Derivation> {
    setup.ellipsoid.validate()?;
    setup.gas.validate()?;
    let n = setup.tweezers.len();
    if n == 0 {
        return Err(Error::invalid("tweezers", "at least one tweezer is required"));
    }
    if n > 2 {
        return Err(Error::invalid("tweezers", format!("at most two tweezers are supported, got {n}")));
    }
    if setup.cavities.len() != n {
        return Err(Error::invalid(
            "cavity_modes",
            format!("expected one cavity mode per tweezer ({n}), got {}", setup.cavities.len()),
        ));
    }
    for (i, tw) in setup.tweezers.iter().enumerate() {
        tw.validate(i)?;
    }
    for (i, cav) in setup.cavities.iter().enumerate() {
        cav.validate(i)?;
    }

    let depolarization = depolarization_factors(&setup.ellipsoid)?;
    let pol = polarizability(&setup.ellipsoid, &depolarization);
    let inertia = setup.ellipsoid.inertia();
    let field_amplitudes: Vec<f64> = setup.tweezers.iter().map(tweezer_amplitude).collect();
    let omega_m = torsional_frequency(&field_amplitudes, &pol, inertia)?;
    let xi0 = zero_point_fluctuation(inertia, omega_m);
    let gamma_m = gas_damping(&setup.gas, &setup.ellipsoid);
    let n_bar = thermal_occupation(omega_m, setup.gas.bath_temperature);

    let channels: Vec<Channel> = setup
        .tweezers
        .iter()
        .zip(&setup.cavities)
        .zip(&field_amplitudes)
        .map(|((tw, cav), &e0)| Channel {
            coupling: coherent_scattering_coupling(&pol, e0, xi0, cav),
            kappa: cav.kappa.resolve(omega_m),
            detuning: tw.detuning.resolve(omega_m),
        })
        .collect();
    let intrinsic_couplings = setup.cavities.iter().map(|c| intrinsic_coupling(&pol, xi0, c)).collect();

    let system = SystemModel {
        omega_m,
        gamma_m,
        n_bar,
        xi0,
        mode_a: channels[0],
        mode_b: channels.get(1).copied().unwrap_or_else(|| SystemModel::idle_channel(omega_m)),
    };
    system.validate()?;
    Ok(Derivation {
        system,
        mass: setup.ellipsoid.mass(),
        inertia,
        depolarization,
        polarizability: pol,
        field_amplitudes,
        intrinsic_couplings,
        calibrated_waist: setup.calibrated_waist,
    })
}

pub fn build_system(setup: &Setup) -> Result<SystemModel> {
    derive(setup).map(|d| d.system)
}
