//! Figure presets: frozen reference configurations bound to a sweep or a family
//! of spectra.

use rayon::prelude::*;

use crate::cli::sweep::{formal_spectrum, run_sweep, spectrum_rows, Axis, FrequencySpec, SweepSpec};
use crate::config::{CavityConfig, Config, DetectionConfig, EllipsoidConfig, GasConfig, TweezerConfig};
use crate::dynamics::stability;
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::model::derive;
use crate::table::{Cell, Table};

pub const PRESET_NAMES: [&str; 8] = ["fig2", "fig3", "fig4a", "fig4b", "fig5", "fig6a", "fig6b", "fig7"];

/// Fig. 3–4 power and Fig. 5–7 default power per tweezer (W).
pub const REFERENCE_POWER: f64 = 0.05;

fn tweezer(wavelength_m: f64, detuning: f64) -> TweezerConfig {
    TweezerConfig {
        wavelength_m,
        power_w: REFERENCE_POWER,
        waist_m: 1e-6,
        detuning_over_omega_m: Some(detuning),
        detuning_rad_s: None,
    }
}

fn cavity(kappa: f64) -> CavityConfig {
    CavityConfig {
        kappa_over_omega_m: Some(kappa),
        kappa_rad_s: None,
        length_m: 1e-3,
        waist_m: None,
        phase_rad: None,
        resonance_rad_s: None,
    }
}

/// The reference particle, tweezers and gas. Cavity waists are left to the
/// calibrated default.
pub fn reference_config(two_mode: bool) -> Config {
    let mut tweezers = vec![tweezer(780e-9, 1.0)];
    let mut cavity_modes = vec![cavity(1.0)];
    if two_mode {
        tweezers.push(tweezer(980e-9, -1.0));
        cavity_modes[0] = cavity(0.3);
        cavity_modes.push(cavity(3.0));
    }
    Config {
        ellipsoid: EllipsoidConfig {
            semi_axis_a_m: 100e-9,
            semi_axis_b_m: 50e-9,
            semi_axis_c_m: None,
            density_kg_m3: 2200.0,
            relative_permittivity: 2.1,
        },
        tweezers,
        cavity_modes,
        gas: GasConfig {
            pressure_pa: 1e-4,
            gas_temperature_k: 300.0,
            bath_temperature_k: Some(300.0),
            accommodation: 0.9,
            molecular_mass_kg: None,
        },
        detection: DetectionConfig::default(),
    }
}

/// The sweep bound to fig2 (both tweezer powers tied) and fig6a/b.
pub fn bound_sweep(name: &str) -> Option<(Config, SweepSpec)> {
    match name {
        "fig2" => {
            let mut axis1 = Axis::linear("tweezers[0].power_w", 0.01, 0.1, 19);
            axis1.parameters.push("tweezers[1].power_w".into());
            Some((
                reference_config(true),
                SweepSpec {
                    axis1,
                    axis2: None,
                    frequency: None,
                    output: None,
                },
            ))
        }
        "fig6a" | "fig6b" => Some((
            reference_config(true),
            SweepSpec {
                axis1: Axis::linear("cavity_modes[0].kappa_over_omega_m", 0.02, 3.0, 50),
                axis2: Some(Axis::linear("cavity_modes[1].kappa_over_omega_m", 0.02, 6.0, 50)),
                frequency: Some(FrequencySpec::from(FrequencyGrid::positive())),
                output: None,
            },
        )),
        _ => None,
    }
}

/// A set of spectra of one configuration, varied along one parameter.
struct Family {
    base: Config,
    parameter: &'static str,
    column: &'static str,
    values: Vec<f64>,
    labels: Option<Vec<&'static str>>,
}

fn family(name: &str) -> Option<Family> {
    let single = reference_config(false);
    let two = reference_config(true);
    let with = |c: &Config, path: &str, v: f64| c.with_parameter(path, v).expect("preset path");
    Some(match name {
        "fig3" => Family {
            base: single,
            parameter: "cavity_modes[0].kappa_over_omega_m",
            column: "kappa_A_over_omega_m",
            values: vec![0.1, 0.5, 1.0, 2.0, 3.0],
            labels: None,
        },
        "fig4a" => Family {
            base: with(&single, "cavity_modes[0].kappa_over_omega_m", 3.0),
            parameter: "gas.pressure_pa",
            column: "pressure_pa",
            values: vec![1e-2, 1e-4, 1e-6],
            labels: None,
        },
        "fig4b" => Family {
            base: with(
                &with(&single, "cavity_modes[0].kappa_over_omega_m", 3.0),
                "gas.pressure_pa",
                1e-2,
            ),
            parameter: "gas.bath_temperature_k",
            column: "bath_temperature_k",
            values: vec![1.0, 10.0, 100.0, 300.0],
            labels: None,
        },
        "fig5" => Family {
            base: two,
            parameter: "tweezers[1].detuning_over_omega_m",
            column: "Delta_B_over_omega_m",
            values: vec![1.0, -1.0],
            labels: Some(vec!["red-red", "red-blue"]),
        },
        "fig7" => Family {
            base: with(&two, "tweezers[0].power_w", 0.1),
            parameter: "tweezers[1].power_w",
            column: "power_B_w",
            values: vec![0.05, 0.1, 0.15, 0.5],
            labels: None,
        },
        _ => return None,
    })
}

fn run_family(f: &Family) -> Result<Table> {
    let two_mode = f.base.is_two_mode();
    let grid = f.base.grid()?;
    let pairing = f.base.detection.pairing()?;
    let blocks: Vec<Vec<Vec<Cell>>> = f
        .values
        .par_iter()
        .enumerate()
        .map(|(i, &v)| {
            let cfg = f.base.with_parameter(f.parameter, v)?;
            let (setup, _) = cfg.to_setup()?;
            let d = derive(&setup)?;
            let stable = stability(&d.system)?.stable;
            let spec = formal_spectrum(&d, &grid, two_mode, pairing)?;
            Ok(spectrum_rows(&spec)
                .into_iter()
                .map(|r| {
                    let mut row = Vec::with_capacity(r.len() + 3);
                    if let Some(labels) = &f.labels {
                        row.push(Cell::from(labels[i]));
                    }
                    row.push(v.into());
                    row.extend(r);
                    row.push(stable.into());
                    row
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut columns: Vec<&str> = Vec::new();
    if f.labels.is_some() {
        columns.push("drive");
    }
    columns.push(f.column);
    if two_mode {
        columns.extend(["omega_over_omega_m", "S_XX", "S_YY", "S2", "S2_db"]);
    } else {
        columns.extend(["omega_over_omega_m", "S_value", "S_db", "theta_opt_rad"]);
    }
    columns.push("stable");
    let mut t = Table::new(columns).with_meta("config_sha256", f.base.fingerprint());
    if two_mode {
        t = t.with_meta("pairing", pairing);
    }
    t.rows = blocks.into_iter().flatten().collect();
    Ok(t)
}

/// Runs one preset. Spectra of unstable configurations are the formal
/// closed-form continuation and carry `stable = 0`.
pub fn run_preset(name: &str) -> Result<Table> {
    let table = if let Some(f) = family(name) {
        run_family(&f)?
    } else if let Some((cfg, spec)) = bound_sweep(name) {
        let sweep = run_sweep(&cfg, &spec)?;
        let (a, b) = ("cavity_modes[0].kappa_over_omega_m", "cavity_modes[1].kappa_over_omega_m");
        let mut t = match name {
            "fig2" => sweep,
            "fig6a" => sweep
                .project(&[a, b, "min_S", "argmin_omega_over_omega_m", "formal_min_S", "stable"])
                .expect("sweep columns"),
            _ => sweep
                .project(&[a, b, "max_real_eig_over_omega_m", "stable"])
                .expect("sweep columns"),
        };
        if name != "fig2" {
            rename(&mut t, &[
                (a, "kappa_A_over_omega_m"),
                (b, "kappa_B_over_omega_m"),
                ("min_S", "min_S2"),
                ("formal_min_S", "formal_min_S2"),
            ]);
        }
        t
    } else {
        return Err(Error::UnknownPreset(name.to_string()));
    };
    let mut meta = vec![("preset".to_string(), name.to_string())];
    meta.extend(table.meta);
    meta.push(("cavity_waist".into(), "calibrated default".into()));
    Ok(Table { meta, ..table })
}

fn rename(t: &mut Table, pairs: &[(&str, &str)]) {
    for (from, to) in pairs {
        if let Some(k) = t.column(from) {
            t.columns[k] = to.to_string();
        }
    }
}
