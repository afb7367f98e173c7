//! One- and two-axis parameter sweeps over a configuration.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::dynamics::stability;
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::model::{derive, Derivation};
use crate::spectra::{self, Pairing, SpectrumDetail, SpectrumResult};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    /// Parameter path such as `tweezers[0].power_w`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
    /// Several paths driven with the same value; the first names the column.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameters: Vec<String>,
    pub start: f64,
    pub stop: f64,
    pub n_points: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Axis {
    pub fn linear(parameter: &str, start: f64, stop: f64, n_points: usize) -> Self {
        Axis {
            parameter: Some(parameter.to_string()),
            parameters: Vec::new(),
            start,
            stop,
            n_points,
            scale: Scale::Linear,
        }
    }

    pub fn paths(&self) -> Vec<&str> {
        self.parameter.iter().chain(&self.parameters).map(String::as_str).collect()
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        let field = |k: &str| format!("{name}.{k}");
        if self.paths().is_empty() {
            return Err(Error::invalid(field("parameter"), "no parameter path given"));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::invalid(field("start"), "bounds must be finite"));
        }
        match self.n_points {
            0 => return Err(Error::invalid(field("n_points"), "must be at least 1")),
            1 if self.start != self.stop => {
                return Err(Error::invalid(field("n_points"), "a single point needs start == stop"))
            }
            1 => {}
            _ if self.start == self.stop => {
                return Err(Error::invalid(field("stop"), "must differ from start"))
            }
            _ => {}
        }
        if self.scale == Scale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(Error::invalid(field("scale"), "log axes need positive bounds"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.n_points;
        if n == 1 {
            return vec![self.start];
        }
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    return self.stop;
                }
                let t = i as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.start + (self.stop - self.start) * t,
                    Scale::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencySpec {
    pub omega_min_over_omega_m: f64,
    pub omega_max_over_omega_m: f64,
    pub n_omega: usize,
}

impl From<FrequencyGrid> for FrequencySpec {
    fn from(g: FrequencyGrid) -> Self {
        FrequencySpec {
            omega_min_over_omega_m: g.min,
            omega_max_over_omega_m: g.max,
            n_omega: g.n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis1: Axis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis2: Option<Axis>,
    /// Overrides the configuration's detection grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<FrequencySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn fingerprint(&self) -> String {
        let mut spec = self.clone();
        spec.output = None;
        let text = toml::to_string(&spec).expect("sweep spec is always representable as TOML");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    fn axes(&self) -> Vec<&Axis> {
        std::iter::once(&self.axis1).chain(self.axis2.as_ref()).collect()
    }

    /// Checks the axes and that every path resolves against `cfg`.
    pub fn validate(&self, cfg: &Config) -> Result<()> {
        for (i, axis) in self.axes().into_iter().enumerate() {
            axis.validate(&format!("axis{}", i + 1))?;
            for p in axis.paths() {
                cfg.with_parameter(p, axis.start)?;
            }
        }
        if let Some(f) = &self.frequency {
            FrequencyGrid::new(f.omega_min_over_omega_m, f.omega_max_over_omega_m, f.n_omega)?;
        }
        Ok(())
    }

    fn grid(&self, cfg: &Config) -> Result<FrequencyGrid> {
        match &self.frequency {
            Some(f) => FrequencyGrid::new(f.omega_min_over_omega_m, f.omega_max_over_omega_m, f.n_omega),
            None => cfg.grid(),
        }
    }
}

/// Columns of the derived-parameter report, all in SI units.
pub const DERIVED_COLUMNS: [&str; 12] = [
    "omega_m_rad_s",
    "gamma_m_rad_s",
    "n_bar",
    "g_A_rad_s",
    "g_B_rad_s",
    "kappa_A",
    "kappa_B",
    "Delta_A",
    "Delta_B",
    "xi0",
    "M_kg",
    "I_kgm2",
];

pub fn derived_cells(d: &Derivation) -> Vec<Cell> {
    let s = &d.system;
    [
        s.omega_m,
        s.gamma_m,
        s.n_bar,
        s.mode_a.coupling,
        s.mode_b.coupling,
        s.mode_a.kappa,
        s.mode_b.kappa,
        s.mode_a.detuning,
        s.mode_b.detuning,
        s.xi0,
        d.mass,
        d.inertia,
    ]
    .into_iter()
    .map(Cell::Float)
    .collect()
}

const SUMMARY_COLUMNS: [&str; 9] = [
    "g_A_over_omega_m",
    "g_B_over_omega_m",
    "max_real_eig_over_omega_m",
    "stable",
    "min_S",
    "argmin_omega_over_omega_m",
    "theta_opt_rad",
    "formal_min_S",
    "error",
];

/// Spectrum of the configuration's kind (`S₁` with one tweezer, `S₂` with two).
pub fn formal_spectrum(d: &Derivation, grid: &FrequencyGrid, two_mode: bool, pairing: Pairing) -> Result<SpectrumResult> {
    if two_mode {
        spectra::formal_two_mode_spectrum(&d.system, grid, pairing)
    } else {
        spectra::formal_single_mode_spectrum(&d.system, grid)
    }
}

fn evaluate(cfg: &Config, grid: &FrequencyGrid) -> Vec<Cell> {
    let nan = || Cell::Float(f64::NAN);
    let failed = |e: Error| {
        let mut row: Vec<Cell> = (0..DERIVED_COLUMNS.len() + SUMMARY_COLUMNS.len() - 1).map(|_| nan()).collect();
        row.push(Cell::Text(e.to_string()));
        row
    };
    let derived = match cfg.to_setup().and_then(|(s, _)| derive(&s)) {
        Ok(d) => d,
        Err(e) => return failed(e),
    };
    let report = match stability(&derived.system) {
        Ok(r) => r,
        Err(e) => return failed(e),
    };
    let pairing = cfg.detection.pairing().unwrap_or_default();
    let two_mode = cfg.is_two_mode();
    let formal = formal_spectrum(&derived, grid, two_mode, pairing);
    let (ga, gb) = derived.coupling_ratios();
    let mut row = derived_cells(&derived);
    row.extend([
        ga.into(),
        gb.into(),
        (report.max_real_eig / derived.system.omega_m).into(),
        report.stable.into(),
    ]);
    let mut error = String::new();
    // the steady-state summary is the formal one, reported only when stable
    match (&formal, report.stable) {
        (Ok(spec), true) => {
            let (min, at) = spec.minimum();
            let theta = spec.theta_at_minimum().unwrap_or(f64::NAN);
            row.extend([min.into(), at.into(), theta.into()]);
        }
        (Err(e), _) => {
            error = e.to_string();
            row.extend([nan(), nan(), nan()]);
        }
        (Ok(_), false) => row.extend([nan(), nan(), nan()]),
    }
    row.push(formal.map_or(f64::NAN, |s| s.minimum().0).into());
    row.push(Cell::Text(error));
    row
}

/// Evaluates every grid point of `spec` (axis 1 outermost). Unstable points
/// carry `stable = 0` and no steady-state summary; per-point physics errors
/// land in the `error` column.
pub fn run_sweep(cfg: &Config, spec: &SweepSpec) -> Result<Table> {
    spec.validate(cfg)?;
    let grid = spec.grid(cfg)?;
    let axes = spec.axes();
    let mut points: Vec<Vec<f64>> = axes[0].values().into_iter().map(|v| vec![v]).collect();
    if let Some(second) = axes.get(1) {
        points = points
            .into_iter()
            .flat_map(|p| second.values().into_iter().map(move |v| [p.clone(), vec![v]].concat()))
            .collect();
    }
    let configs: Vec<Config> = points
        .iter()
        .map(|vals| {
            axes.iter().zip(vals).try_fold(cfg.clone(), |c, (axis, &v)| {
                axis.paths().into_iter().try_fold(c, |c, p| c.with_parameter(p, v))
            })
        })
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<Cell>> = configs.par_iter().map(|c| evaluate(c, &grid)).collect();

    let mut columns: Vec<String> = axes.iter().map(|a| a.paths()[0].to_string()).collect();
    columns.extend(DERIVED_COLUMNS.iter().map(|s| s.to_string()));
    columns.extend(SUMMARY_COLUMNS.iter().map(|s| s.to_string()));
    let mut table = Table::new(columns)
        .with_meta("config_sha256", cfg.fingerprint())
        .with_meta("sweep_sha256", spec.fingerprint())
        .with_meta("spectrum", if cfg.is_two_mode() { "S2" } else { "S1" });
    for (vals, row) in points.into_iter().zip(rows) {
        let mut full: Vec<Cell> = vals.into_iter().map(Cell::Float).collect();
        full.extend(row);
        table.push(full);
    }
    Ok(table)
}

/// Long-format table of one spectrum.
pub fn spectrum_table(cfg: &Config, spec: &SpectrumResult) -> Table {
    let mut t = match &spec.detail {
        SpectrumDetail::SingleMode { .. } => {
            Table::new(["omega_over_omega_m", "S_value", "S_db", "theta_opt_rad"])
        }
        SpectrumDetail::TwoMode { .. } => Table::new(["omega_over_omega_m", "S_XX", "S_YY", "S2", "S2_db"]),
    }
    .with_meta("config_sha256", cfg.fingerprint());
    for row in spectrum_rows(spec) {
        t.push(row);
    }
    t
}

/// Rows matching [`spectrum_table`]'s columns.
pub fn spectrum_rows(spec: &SpectrumResult) -> Vec<Vec<Cell>> {
    (0..spec.omega_grid.len())
        .map(|i| {
            let w = spec.omega_grid[i].into();
            match &spec.detail {
                SpectrumDetail::SingleMode { theta_opt } => {
                    vec![w, spec.values[i].into(), spec.db[i].into(), theta_opt[i].into()]
                }
                SpectrumDetail::TwoMode { s_xx, s_yy } => vec![
                    w,
                    s_xx[i].into(),
                    s_yy[i].into(),
                    spec.values[i].into(),
                    spec.db[i].into(),
                ],
            }
        })
        .collect()
}
