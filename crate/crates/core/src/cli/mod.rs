//! Command-line front end: `validate`, `derive`, `spectrum`, `sweep`,
//! `preset` and `verify`.
//!
//! Exit codes: 0 success, 1 configuration error, 2 physics error (no steady
//! state where one is needed), 3 verification failure.

pub mod presets;
pub mod sweep;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::Config;
use crate::dynamics::{stability, SteadyState};
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::model::{derive, Derivation, Setup};
use crate::spectra::{self, Pairing};
use crate::table::{unix_now, Table};
use crate::verify::verify_config;

pub use presets::{run_preset, PRESET_NAMES};
pub use sweep::{run_sweep, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "torsqueeze", version, about = "Squeezed light from a levitated torsional oscillator")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Leave the `# generated_unix=` line out of CSV output.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every invariant and print the derived parameters.
    Validate { config: PathBuf },
    /// Print the reduced model parameters.
    Derive {
        config: PathBuf,
        /// Emit a CSV row instead of key = value lines.
        #[arg(long)]
        csv: bool,
    },
    /// Output squeezing spectrum; needs a steady state.
    Spectrum {
        config: PathBuf,
        /// Joint two-mode spectrum S2 (default when two tweezers are configured).
        #[arg(long)]
        two_mode: bool,
        #[arg(long, allow_hyphen_values = true)]
        omega_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        omega_max: Option<f64>,
        #[arg(long)]
        n_omega: Option<usize>,
        /// Quadrature pairing for S2: epr or symmetric.
        #[arg(long)]
        pairing: Option<Pairing>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Sweep one or two parameters described by a TOML sweep file.
    Sweep {
        config: PathBuf,
        spec: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Regenerate a figure table (fig2 … fig7, or `all`).
    Preset {
        name: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run the oracle suite against a configuration.
    Verify {
        config: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: {e}");
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(table: &Table, out: Option<&Path>, timestamp: Option<u64>) -> Result<()> {
    match out {
        Some(path) => table.write_to(path, timestamp),
        None => {
            print!("{}", table.render(timestamp));
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<(Config, Setup)> {
    let cfg = Config::load(path)?;
    let (setup, warnings) = cfg.to_setup()?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok((cfg, setup))
}

pub fn run(cli: &Cli) -> Result<i32> {
    let stamp = (!cli.no_timestamp).then(unix_now);
    match &cli.command {
        Command::Validate { config } => {
            let cfg = Config::load(config)?;
            let (text, ok) = validation_report(&cfg);
            print!("{text}");
            Ok(if ok { 0 } else { 1 })
        }
        Command::Derive { config, csv } => {
            let (cfg, setup) = load(config)?;
            let d = derive(&setup)?;
            if *csv {
                let mut t = Table::new(sweep::DERIVED_COLUMNS).with_meta("config_sha256", cfg.fingerprint());
                t.push(sweep::derived_cells(&d));
                emit(&t, None, stamp)?;
            } else {
                print!("{}", derived_block(&d));
            }
            Ok(0)
        }
        Command::Spectrum {
            config,
            two_mode,
            omega_min,
            omega_max,
            n_omega,
            pairing,
            out,
        } => {
            let (cfg, setup) = load(config)?;
            let ss = SteadyState::new(derive(&setup)?.system)?;
            let two = *two_mode || cfg.is_two_mode();
            let base = cfg.detection.grid(two)?;
            let grid = FrequencyGrid::new(
                omega_min.unwrap_or(base.min),
                omega_max.unwrap_or(base.max),
                n_omega.unwrap_or(base.n),
            )?;
            let result = if two {
                let p = match pairing {
                    Some(p) => *p,
                    None => cfg.detection.pairing()?,
                };
                spectra::two_mode_spectrum_grid(&ss, &grid, p)?
            } else {
                spectra::single_mode_spectrum(&ss, &grid)?
            };
            emit(&sweep::spectrum_table(&cfg, &result), out.as_deref(), stamp)?;
            Ok(0)
        }
        Command::Sweep { config, spec, out } => {
            let cfg = Config::load(config)?;
            let spec = SweepSpec::load(spec)?;
            let table = run_sweep(&cfg, &spec)?;
            let path = out.as_deref().or(spec.output.as_deref());
            emit(&table, path, stamp)?;
            Ok(0)
        }
        Command::Preset { name, out_dir } => {
            let names: Vec<&str> = if name == "all" {
                PRESET_NAMES.to_vec()
            } else {
                vec![name.as_str()]
            };
            std::fs::create_dir_all(out_dir)?;
            for n in names {
                let table = run_preset(n)?;
                let path = out_dir.join(format!("{n}.csv"));
                table.write_to(&path, stamp)?;
                eprintln!("wrote {}", path.display());
            }
            Ok(0)
        }
        Command::Verify { config, out } => {
            let (cfg, _) = load(config)?;
            let report = verify_config(&cfg)?;
            emit(&report.to_table(), out.as_deref(), stamp)?;
            if report.passed() {
                Ok(0)
            } else {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                Err(Error::Verification(failed.join(", ")))
            }
        }
    }
}

/// Human-readable derived parameters.
pub fn derived_block(d: &Derivation) -> String {
    let s = &d.system;
    let (ra, rb) = d.coupling_ratios();
    let mut out = String::new();
    let mut line = |k: &str, v: f64| writeln!(out, "{k} = {v:.6e}").unwrap();
    line("omega_m_rad_s", s.omega_m);
    line("gamma_m_rad_s", s.gamma_m);
    line("n_bar", s.n_bar);
    line("xi0_rad", s.xi0);
    line("M_kg", d.mass);
    line("I_kgm2", d.inertia);
    for (tag, ch, r) in [("A", &s.mode_a, ra), ("B", &s.mode_b, rb)] {
        line(&format!("g_{tag}_rad_s"), ch.coupling);
        line(&format!("g_{tag}_over_omega_m"), r);
        line(&format!("kappa_{tag}_rad_s"), ch.kappa);
        line(&format!("Delta_{tag}_rad_s"), ch.detuning);
    }
    writeln!(out, "ultra_strong = {}", d.ultra_strong()).unwrap();
    writeln!(out, "calibrated_cavity_waist = {}", d.calibrated_waist).unwrap();
    out
}

/// Collects every invariant violation, then derives and classifies the
/// configuration. Returns the report and whether the configuration is valid.
pub fn validation_report(cfg: &Config) -> (String, bool) {
    let mut out = String::new();
    let (setup, warnings) = match cfg.to_setup() {
        Ok(x) => x,
        Err(e) => {
            writeln!(out, "invalid: {e}").unwrap();
            return (out, false);
        }
    };
    for w in &warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    let mut violations: Vec<Error> = Vec::new();
    violations.extend(setup.ellipsoid.validate().err());
    violations.extend(setup.tweezers.iter().enumerate().filter_map(|(i, t)| t.validate(i).err()));
    violations.extend(setup.cavities.iter().enumerate().filter_map(|(i, c)| c.validate(i).err()));
    violations.extend(setup.gas.validate().err());
    if !violations.is_empty() {
        for v in &violations {
            writeln!(out, "invalid: {v}").unwrap();
        }
        return (out, false);
    }
    let d = match derive(&setup) {
        Ok(d) => d,
        Err(e) => {
            writeln!(out, "invalid: {e}").unwrap();
            return (out, false);
        }
    };
    writeln!(out, "valid").unwrap();
    writeln!(out, "config_sha256 = {}", cfg.fingerprint()).unwrap();
    out.push_str(&derived_block(&d));
    match stability(&d.system) {
        Ok(r) => {
            writeln!(out, "max_real_eig_over_omega_m = {:.6e}", r.max_real_eig / d.system.omega_m).unwrap();
            writeln!(out, "stable = {}", r.stable).unwrap();
        }
        Err(e) => writeln!(out, "stable = unknown ({e})").unwrap(),
    }
    (out, true)
}

