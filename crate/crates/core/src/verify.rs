//! Cross-checks of the closed-form routes against [`crate::oracle`].

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::config::Config;
use crate::dynamics::SteadyState;
use crate::error::Result;
use crate::grid::FrequencyGrid;
use crate::model::{derive, Setup, SystemModel};
use crate::oracle::{self, LYAPUNOV_TOLERANCE};
use crate::spectra::{self, formal};
use crate::table::Table;

pub const COEFFICIENT_TOLERANCE: f64 = 1e-10;
pub const ANGLE_SCAN_POINTS: usize = 720;
/// Nominal scan resolution for near-shot-noise spectra. The angle check itself
/// uses the quadratic bound of [`angle_scan_gap`], which grows with `|S_aa|`.
pub const ANGLE_SCAN_TOLERANCE: f64 = 1e-5;
pub const OCCUPATION_TOLERANCE: f64 = 1e-2;
pub const TRAP_FREQUENCY_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub metric: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn upper(name: &str, metric: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            metric,
            tolerance,
            passed: metric <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub fingerprint: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["check_name", "config_fingerprint", "metric", "tolerance", "pass"])
            .with_meta("config_sha256", &self.fingerprint);
        for c in &self.checks {
            t.push(vec![
                c.name.as_str().into(),
                self.fingerprint.as_str().into(),
                c.metric.into(),
                c.tolerance.into(),
                (if c.passed { "pass" } else { "fail" }).into(),
            ]);
        }
        t
    }
}

/// Largest relative deviation between the closed-form and the dense-solve
/// output weights over `omegas` (rad/s). Both channels are compared.
pub fn coefficient_deviation(sys: &SystemModel, omegas: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &w in omegas {
        let (ga, gb) = oracle::formal_output_generic(sys, w)?;
        let (ca, cb) = formal::two_mode_coeffs(sys, w)?;
        worst = worst.max(ca.relative_difference(&ga)).max(cb.relative_difference(&gb));
        if sys.is_single_mode() {
            worst = worst.max(formal::single_mode_coeffs(sys, w)?.relative_difference(&ga));
        }
    }
    Ok(worst)
}

/// `(largest scan-minus-optimum gap, largest allowed gap)` where the allowed
/// gap is the quadratic bound `|S_aa| (π/n)²` of an `n`-point scan. A
/// negative gap means the scan beat the closed-form optimum.
pub fn angle_scan_gap(ss: &SteadyState, omegas: &[f64], n_angles: usize) -> Result<(f64, f64)> {
    let mut gap = f64::NEG_INFINITY;
    let mut worst_negative: f64 = 0.0;
    let mut bound: f64 = 0.0;
    for &w in omegas {
        let raw = spectra::single_mode_raw_spectra(ss, w)?;
        let (s1, _) = raw.optimal();
        let (scan, _) = oracle::angle_scan(ss, w, n_angles)?;
        let d = scan - s1;
        let slack = 1e-12 * (1.0 + s1.abs());
        if d < -slack {
            worst_negative = worst_negative.min(d);
        }
        gap = gap.max(d);
        bound = bound.max(raw.s_aa.norm() * (PI / n_angles as f64).powi(2) + slack);
    }
    Ok((if worst_negative < 0.0 { worst_negative } else { gap }, bound))
}

/// Frequency grid for occupation integrals: `[-40, 40] ω_m` with at least
/// `min_points` points, refined so the narrowest resonance spans ≥ 8 steps.
pub fn occupation_grid(ss: &SteadyState, min_points: usize) -> FrequencyGrid {
    let narrowest = ss
        .report()
        .eigenvalues
        .iter()
        .map(|z| -z.re / ss.omega_m)
        .fold(f64::INFINITY, f64::min);
    let needed = (80.0 / (narrowest / 8.0)).ceil() as usize + 1;
    FrequencyGrid {
        min: -40.0,
        max: 40.0,
        n: needed.clamp(min_points, 2_000_001),
    }
}

/// `(1/2π) ∫ S_{a†a}(ω) dω` of the intracavity field by the trapezoid rule.
pub fn spectral_occupation(ss: &SteadyState, channel: usize, grid: &FrequencyGrid) -> Result<f64> {
    let pts = grid.points();
    let wm = ss.omega_m;
    let dens: Vec<f64> = pts
        .par_iter()
        .map(|&x| formal::intracavity_number_density(ss, x * wm, channel))
        .collect::<Result<_>>()?;
    let mut acc = 0.0;
    for i in 1..pts.len() {
        acc += 0.5 * (dens[i] + dens[i - 1]) * (pts[i] - pts[i - 1]);
    }
    Ok(acc * wm / (2.0 * PI))
}

/// Relative mismatch between spectral and Lyapunov occupations of every
/// coupled channel.
pub fn occupation_mismatch(ss: &SteadyState, grid: &FrequencyGrid) -> Result<f64> {
    let cov = oracle::lyapunov_covariance(ss)?;
    let mut worst: f64 = 0.0;
    for (channel, ch) in [(0, &ss.mode_a), (1, &ss.mode_b)] {
        if ch.coupling == 0.0 {
            continue;
        }
        let lyap = cov.cavity_occupation(channel);
        let spec = spectral_occupation(ss, channel, grid)?;
        worst = worst.max((spec - lyap).abs() / lyap.abs().max(1e-300));
    }
    Ok(worst)
}

/// Relative gap between the closed-form trap frequency and the numeric
/// curvature of the dipole potential.
pub fn trap_frequency_deviation(setup: &Setup) -> Result<f64> {
    let closed = derive(setup)?.system.omega_m;
    let numeric = oracle::potential_curvature_frequency(&setup.ellipsoid, &setup.tweezers)?;
    Ok((numeric - closed).abs() / closed)
}

/// Runs every oracle against one configuration. Fails with
/// [`crate::error::Error::Unstable`] when there is no steady state to check.
pub fn verify_config(cfg: &Config) -> Result<VerificationReport> {
    let (setup, _) = cfg.to_setup()?;
    let derived = derive(&setup)?;
    let ss = SteadyState::new(derived.system)?;
    let wm = ss.omega_m;
    let grid = cfg.grid()?;
    let sample = FrequencyGrid::new(grid.min, grid.max, 64.min(grid.n).max(1))?;
    let omegas: Vec<f64> = sample.points().iter().map(|x| x * wm).collect();

    let mut checks = vec![
        Check::upper(
            "trap_frequency_curvature",
            trap_frequency_deviation(&setup)?,
            TRAP_FREQUENCY_TOLERANCE,
        ),
        Check::upper("coefficients_generic_solve", coefficient_deviation(&ss, &omegas)?, COEFFICIENT_TOLERANCE),
    ];
    if ss.is_single_mode() {
        let scan_omegas: Vec<f64> = omegas.iter().step_by(4).copied().collect();
        let (gap, bound) = angle_scan_gap(&ss, &scan_omegas, ANGLE_SCAN_POINTS)?;
        checks.push(Check {
            name: "angle_scan_optimum".into(),
            metric: gap,
            tolerance: bound,
            passed: (0.0..=bound).contains(&gap),
        });
    }
    let cov = oracle::lyapunov_covariance(&ss)?;
    checks.push(Check::upper("lyapunov_residual", cov.residual, LYAPUNOV_TOLERANCE));
    checks.push(Check::upper("lyapunov_hermiticity", cov.hermiticity_error(), 1e-10));
    let occ_grid = occupation_grid(&ss, 16001);
    checks.push(Check::upper(
        "wiener_khinchin_occupation",
        occupation_mismatch(&ss, &occ_grid)?,
        OCCUPATION_TOLERANCE,
    ));
    Ok(VerificationReport {
        fingerprint: cfg.fingerprint(),
        checks,
    })
}
