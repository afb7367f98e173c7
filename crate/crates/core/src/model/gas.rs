//! Residual-gas damping of the torsional motion and thermal occupation.

use std::f64::consts::PI;

use crate::constants::{BOLTZMANN, HBAR};
use crate::error::{Error, Result};
use crate::model::particle::{Ellipsoid, SERIES_TERMS, SMALL_ECCENTRICITY};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasEnvironment {
    /// Pa
    pub pressure: f64,
    /// Gas temperature (K).
    pub gas_temperature: f64,
    /// Molecular mass (kg).
    pub molecular_mass: f64,
    /// Fraction of diffusely reflected collisions, in [0, 1].
    pub accommodation: f64,
    /// Temperature of the torsional bath (K).
    pub bath_temperature: f64,
}

impl GasEnvironment {
    pub fn validate(&self) -> Result<()> {
        if !(self.pressure.is_finite() && self.pressure >= 0.0) {
            return Err(Error::invalid("gas.pressure_pa", format!("must be >= 0, got {}", self.pressure)));
        }
        if !(self.gas_temperature.is_finite() && self.gas_temperature > 0.0) {
            return Err(Error::invalid("gas.gas_temperature_k", "must be positive"));
        }
        if !(self.molecular_mass.is_finite() && self.molecular_mass > 0.0) {
            return Err(Error::invalid("gas.molecular_mass_kg", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.accommodation) {
            return Err(Error::invalid("gas.accommodation", "must lie in [0, 1]"));
        }
        if !(self.bath_temperature.is_finite() && self.bath_temperature >= 0.0) {
            return Err(Error::invalid("gas.bath_temperature_k", "must be >= 0"));
        }
        Ok(())
    }

    /// `m_a p / (k_B T_a)`.
    pub fn mass_density(&self) -> f64 {
        self.molecular_mass * self.pressure / (BOLTZMANN * self.gas_temperature)
    }

    /// Mean thermal speed `sqrt(8 k_B T_a / (π m_a))`.
    pub fn mean_speed(&self) -> f64 {
        (8.0 * BOLTZMANN * self.gas_temperature / (PI * self.molecular_mass)).sqrt()
    }
}

/// Series coefficients of `sqrt(1 - x)` and `arcsin(√x)/√x` in `x = e²`.
fn series_coefficients() -> ([f64; SERIES_TERMS + 2], [f64; SERIES_TERMS + 2]) {
    let mut d = [0.0; SERIES_TERMS + 2];
    let mut c = [0.0; SERIES_TERMS + 2];
    d[0] = 1.0;
    let mut b = 1.0;
    c[0] = 1.0;
    for k in 1..SERIES_TERMS + 2 {
        let kf = k as f64;
        d[k] = d[k - 1] * (kf - 1.5) / kf;
        b *= (2.0 * kf - 1.0) / (2.0 * kf);
        c[k] = b / (2.0 * kf + 1.0);
    }
    (d, c)
}

fn horner(x: f64, coeff: impl Fn(usize) -> f64) -> f64 {
    (0..SERIES_TERMS).rev().fold(0.0, |acc, k| acc * x + coeff(k))
}

/// Shape functions `(f1, f2, f3)` of the torque integrals.
pub fn shape_functions(e: f64) -> (f64, f64, f64) {
    let e2 = e * e;
    if e < SMALL_ECCENTRICITY {
        // The vanishing low orders of each bracket cancel between the
        // coefficients, so dividing by e² or e⁴ costs no precision.
        let (d, c) = series_coefficients();
        let f1 = 0.375 * horner(e2, |k| c[k + 1] - d[k + 1] + 2.0 * d[k]);
        let f2 = 0.1875 * horner(e2, |k| d[k + 1] + 2.0 * d[k] - c[k + 1] + 4.0 * c[k]);
        let f3 = 0.25 * horner(e2, |k| 3.0 * d[k + 2] - 2.0 * d[k + 1] + 4.0 * c[k + 1] - 3.0 * c[k + 2]);
        return (f1, f2, f3);
    }
    let s = (1.0 - e2).sqrt();
    let asin = e.asin() / e;
    let f1 = 3.0 / (8.0 * e2) * (asin - (1.0 - 2.0 * e2) * s);
    let f2 = 3.0 / (16.0 * e2) * ((1.0 + 2.0 * e2) * s - asin * (1.0 - 4.0 * e2));
    let f3 = ((3.0 - 2.0 * e2) * s + asin * (4.0 * e2 - 3.0)) / (4.0 * e2 * e2);
    (f1, f2, f3)
}

/// Torsional damping rate from free-molecular gas collisions (rad/s).
///
/// The length prefactor is `a sqrt(1 - e²) = b`; together with `1/(a² + b²)`
/// this gives a rate. The sphere limit is `5 ρ_a v̄ γ_ac / (8 ρ R)`.
pub fn gas_damping(gas: &GasEnvironment, ellipsoid: &Ellipsoid) -> f64 {
    let e = ellipsoid.eccentricity();
    let e2 = e * e;
    let (f1, f2, f3) = shape_functions(e);
    let a = ellipsoid.a;
    let b = ellipsoid.b;
    let pre = 5.0 * gas.mass_density() * gas.mean_speed() * a * (1.0 - e2).sqrt()
        / (8.0 * ellipsoid.density * (a * a + b * b));
    let diffuse = gas.accommodation * (f1 + (1.0 - e2) * f2);
    let specular = 3.0 * (1.0 - gas.accommodation * (6.0 - PI) / 8.0) * e2 * e2 * f3;
    pre * (diffuse + specular)
}

/// Bose–Einstein occupation `1 / (exp(ħω / k_B T) - 1)`; zero at `T = 0`.
pub fn thermal_occupation(omega_m: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega_m / (BOLTZMANN * temperature)).exp_m1()
}
