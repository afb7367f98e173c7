//! Geometry and dipole response of a prolate nano-spheroid.

use std::f64::consts::PI;

use crate::constants::VACUUM_PERMITTIVITY;
use crate::error::{Error, Result};

/// Below this eccentricity the closed forms, which cancel like `1/e²` or
/// `1/e⁴`, are replaced by their power series in `e²`.
pub const SMALL_ECCENTRICITY: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Terms kept in the `e²` series; `0.5^64` is far below rounding.
pub(crate) const SERIES_TERMS: usize = 64;

/// Uniform dielectric ellipsoid with semi-axes `a ≥ b = c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipsoid {
    /// Semi-axis along the symmetry axis (m).
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Mass density (kg/m³).
    pub density: f64,
    /// Relative permittivity.
    pub permittivity: f64,
}

impl Ellipsoid {
    pub fn new(a: f64, b: f64, c: f64, density: f64, permittivity: f64) -> Result<Self> {
        let e = Ellipsoid {
            a,
            b,
            c,
            density,
            permittivity,
        };
        e.validate()?;
        Ok(e)
    }

    /// Sphere of radius `r`.
    pub fn sphere(r: f64, density: f64, permittivity: f64) -> Result<Self> {
        Self::new(r, r, r, density, permittivity)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("c", self.c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(
                    format!("ellipsoid.semi_axis_{name}_m"),
                    format!("must be positive, got {v}"),
                ));
            }
        }
        if self.a < self.b {
            return Err(Error::invalid(
                "ellipsoid.semi_axis_a_m",
                format!(
                    "oblate particles are not supported (a = {} < b = {})",
                    self.a, self.b
                ),
            ));
        }
        if (self.b - self.c).abs() > 1e-12 * self.b {
            return Err(Error::invalid(
                "ellipsoid.semi_axis_c_m",
                format!("must equal b for a spheroid (b = {}, c = {})", self.b, self.c),
            ));
        }
        if !(self.density.is_finite() && self.density > 0.0) {
            return Err(Error::invalid(
                "ellipsoid.density_kg_m3",
                format!("must be positive, got {}", self.density),
            ));
        }
        if !(self.permittivity.is_finite() && self.permittivity > 1.0) {
            return Err(Error::invalid(
                "ellipsoid.relative_permittivity",
                format!("must exceed 1, got {}", self.permittivity),
            ));
        }
        Ok(())
    }

    pub fn volume(&self) -> f64 {
        4.0 / 3.0 * PI * self.a * self.b * self.c
    }

    pub fn mass(&self) -> f64 {
        self.volume() * self.density
    }

    /// Moment of inertia about a short axis, `M (a² + b²) / 5`.
    pub fn inertia(&self) -> f64 {
        self.mass() * (self.a * self.a + self.b * self.b) / 5.0
    }

    pub fn eccentricity(&self) -> f64 {
        let r = self.b / self.a;
        (1.0 - r * r).max(0.0).sqrt()
    }
}

/// Depolarization factors along the three semi-axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolarizationFactors {
    pub l_a: f64,
    pub l_b: f64,
    pub l_c: f64,
}

impl DepolarizationFactors {
    pub fn sum(&self) -> f64 {
        self.l_a + self.l_b + self.l_c
    }
}

/// Long-axis depolarization factor of a prolate spheroid of eccentricity `e`.
pub fn long_axis_factor(e: f64) -> f64 {
    if e < SMALL_ECCENTRICITY {
        // atanh(e)/e - 1 = Σ_{k≥1} e^{2k} / (2k + 1)
        let x = e * e;
        let sum = (0..SERIES_TERMS).rev().fold(0.0, |acc, k| acc * x + 1.0 / (2 * k + 3) as f64);
        (1.0 - x) * sum
    } else {
        // ln((1+e)/(1-e)) / 2 = atanh(e)
        (1.0 - e * e) / (e * e) * (e.atanh() / e - 1.0)
    }
}

pub fn depolarization_factors(ellipsoid: &Ellipsoid) -> Result<DepolarizationFactors> {
    ellipsoid.validate()?;
    let l_a = long_axis_factor(ellipsoid.eccentricity());
    let l_b = 0.5 * (1.0 - l_a);
    Ok(DepolarizationFactors { l_a, l_b, l_c: l_b })
}

/// Static dipole polarizabilities along the semi-axes (C·m²/V).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polarizability {
    pub alpha_a: f64,
    pub alpha_b: f64,
    pub alpha_c: f64,
}

impl Polarizability {
    /// `alpha_a - alpha_b`, the anisotropy that produces the restoring torque.
    pub fn anisotropy(&self) -> f64 {
        self.alpha_a - self.alpha_b
    }
}

pub fn polarizability(ellipsoid: &Ellipsoid, factors: &DepolarizationFactors) -> Polarizability {
    let chi = ellipsoid.permittivity - 1.0;
    let pre = 4.0 * PI * ellipsoid.a * ellipsoid.b * ellipsoid.c * VACUUM_PERMITTIVITY * chi;
    let along = |l: f64| pre / (3.0 * (1.0 + l * chi));
    Polarizability {
        alpha_a: along(factors.l_a),
        alpha_b: along(factors.l_b),
        alpha_c: along(factors.l_c),
    }
}
