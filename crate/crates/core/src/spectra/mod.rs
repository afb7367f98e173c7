//! Output-light squeezing spectra.
//!
//! Every output mode is written as a linear combination of the six input
//! noise operators `(b_in(ω), b_in†(-ω), a_A,in(ω), a_A,in†(-ω), a_B,in(ω),
//! a_B,in†(-ω))`. Noise correlators use `⟨b_in b_in†⟩ ∝ n̄ + 1`,
//! `⟨b_in† b_in⟩ ∝ n̄` and optical vacuum, so a decoupled cavity reflects
//! exactly shot noise (`S = 1`). The `2π δ(ω + ω')` factors are dropped.

pub mod formal;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::SteadyState;
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;

/// Weights of one output mode on the six input operators at one frequency,
/// input-output subtraction and `√κ` factors included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferCoefficients {
    pub weights: [Complex64; 6],
}

impl TransferCoefficients {
    /// Largest entrywise deviation relative to the largest weight.
    pub fn relative_difference(&self, other: &TransferCoefficients) -> f64 {
        let scale = self
            .weights
            .iter()
            .chain(&other.weights)
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let diff = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }
}

/// `S_{aa†}`, `S_{a†a}` (real, non-negative) and `S_{aa}` (complex).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawSpectra {
    pub s_aad: f64,
    pub s_ada: f64,
    pub s_aa: Complex64,
}

impl RawSpectra {
    /// Homodyne spectrum at measurement angle `theta`.
    pub fn at_angle(&self, theta: f64) -> f64 {
        let phase = Complex64::from_polar(1.0, -2.0 * theta);
        self.s_aad + self.s_ada + 2.0 * (phase * self.s_aa).re
    }

    /// Minimum over the homodyne angle and the angle in `[0, π)` attaining it.
    pub fn optimal(&self) -> (f64, f64) {
        let mag = self.s_aa.norm();
        let s1 = self.s_aad + self.s_ada - 2.0 * mag;
        if mag == 0.0 {
            return (s1, 0.0);
        }
        let theta = (0.5 * (-self.s_aa).arg()).rem_euclid(PI);
        (s1, if theta >= PI { 0.0 } else { theta })
    }
}

/// Quadrature pairing for the joint two-mode spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pairing {
    /// `X = ½Σ(a + a†)`, `Y = (1/2i)[(a_A - a_A†) - (a_B - a_B†)]`.
    #[default]
    Epr,
    /// Both quadratures summed over the modes. `[X, Y] = i` bounds
    /// `S_XX + S_YY ≥ 1` for this pairing.
    Symmetric,
}

impl std::str::FromStr for Pairing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "epr" => Ok(Pairing::Epr),
            "symmetric" => Ok(Pairing::Symmetric),
            other => Err(Error::Config(format!("unknown pairing `{other}` (epr|symmetric)"))),
        }
    }
}

impl std::fmt::Display for Pairing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Pairing::Epr => "epr",
            Pairing::Symmetric => "symmetric",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeSpectrum {
    pub s_xx: f64,
    pub s_yy: f64,
    pub s2: f64,
}

/// `⟨P(ω) Q(-ω)⟩` for operators with weights `p` (at ω) and `q` (at -ω).
pub fn correlate(p: &[Complex64; 6], q: &[Complex64; 6], n_bar: f64) -> Complex64 {
    (n_bar + 1.0) * p[0] * q[1] + n_bar * p[1] * q[0] + p[2] * q[3] + p[4] * q[5]
}

/// Weights of `[O(ω)]†` on the input operators at -ω, given those of `O(ω)`.
pub fn dagger(c: &[Complex64; 6]) -> [Complex64; 6] {
    [c[1].conj(), c[0].conj(), c[3].conj(), c[2].conj(), c[5].conj(), c[4].conj()]
}

/// Squeezing in dB below shot noise.
pub fn to_db(s: f64) -> f64 {
    -10.0 * s.log10()
}

pub fn single_mode_coeffs(ss: &SteadyState, omega: f64) -> Result<TransferCoefficients> {
    formal::single_mode_coeffs(ss, omega)
}

pub fn single_mode_raw_spectra(ss: &SteadyState, omega: f64) -> Result<RawSpectra> {
    formal::single_mode_raw_spectra(ss, omega)
}

pub fn squeezing_at_angle(ss: &SteadyState, omega: f64, theta: f64) -> Result<f64> {
    Ok(single_mode_raw_spectra(ss, omega)?.at_angle(theta))
}

/// `(S₁(ω), ϑ*)`.
pub fn optimal_single_mode(ss: &SteadyState, omega: f64) -> Result<(f64, f64)> {
    Ok(single_mode_raw_spectra(ss, omega)?.optimal())
}

pub fn two_mode_coeffs(ss: &SteadyState, omega: f64) -> Result<(TransferCoefficients, TransferCoefficients)> {
    formal::two_mode_coeffs(ss, omega)
}

pub fn two_mode_spectrum(ss: &SteadyState, omega: f64, pairing: Pairing) -> Result<TwoModeSpectrum> {
    formal::two_mode_spectrum(ss, omega, pairing)
}

/// A spectrum sampled on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Grid in units of ω_m.
    pub omega_grid: Vec<f64>,
    /// Shot-noise-normalized `S₁` or `S₂`.
    pub values: Vec<f64>,
    pub db: Vec<f64>,
    pub detail: SpectrumDetail,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumDetail {
    SingleMode { theta_opt: Vec<f64> },
    TwoMode { s_xx: Vec<f64>, s_yy: Vec<f64> },
}

impl SpectrumResult {
    /// Smallest value and the grid frequency (ω/ω_m) where it occurs.
    pub fn minimum(&self) -> (f64, f64) {
        let (i, v) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        (v, self.omega_grid[i])
    }

    /// Optimal homodyne angle at the minimum (single-mode spectra only).
    pub fn theta_at_minimum(&self) -> Option<f64> {
        let (v, _) = self.minimum();
        let i = self.values.iter().position(|&x| x == v)?;
        match &self.detail {
            SpectrumDetail::SingleMode { theta_opt } => theta_opt.get(i).copied(),
            SpectrumDetail::TwoMode { .. } => None,
        }
    }
}

/// Formal `S₁` spectrum; no stability check.
pub fn formal_single_mode_spectrum(sys: &crate::model::SystemModel, grid: &FrequencyGrid) -> Result<SpectrumResult> {
    let points = grid.points();
    let rows: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&x| formal::single_mode_raw_spectra(sys, x * sys.omega_m).map(|r| r.optimal()))
        .collect::<Result<_>>()?;
    let (values, theta_opt): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    Ok(SpectrumResult {
        db: values.iter().map(|&s| to_db(s)).collect(),
        omega_grid: points,
        values,
        detail: SpectrumDetail::SingleMode { theta_opt },
    })
}

/// Formal `S₂` spectrum; no stability check.
pub fn formal_two_mode_spectrum(
    sys: &crate::model::SystemModel,
    grid: &FrequencyGrid,
    pairing: Pairing,
) -> Result<SpectrumResult> {
    let points = grid.points();
    let rows: Vec<TwoModeSpectrum> = points
        .par_iter()
        .map(|&x| formal::two_mode_spectrum(sys, x * sys.omega_m, pairing))
        .collect::<Result<_>>()?;
    Ok(SpectrumResult {
        values: rows.iter().map(|r| r.s2).collect(),
        db: rows.iter().map(|r| to_db(r.s2)).collect(),
        omega_grid: points,
        detail: SpectrumDetail::TwoMode {
            s_xx: rows.iter().map(|r| r.s_xx).collect(),
            s_yy: rows.iter().map(|r| r.s_yy).collect(),
        },
    })
}

pub fn single_mode_spectrum(ss: &SteadyState, grid: &FrequencyGrid) -> Result<SpectrumResult> {
    formal_single_mode_spectrum(ss, grid)
}

pub fn two_mode_spectrum_grid(ss: &SteadyState, grid: &FrequencyGrid, pairing: Pairing) -> Result<SpectrumResult> {
    formal_two_mode_spectrum(ss, grid, pairing)
}
