//! TOML configuration files.
//!
//! Every numeric key carries its unit in the name. Sections:
//!
//! ```toml
//! [ellipsoid]
//! semi_axis_a_m = 100e-9
//! semi_axis_b_m = 50e-9
//! density_kg_m3 = 2200.0
//! relative_permittivity = 2.1
//!
//! [[tweezers]]
//! wavelength_m = 780e-9
//! power_w = 0.05
//! waist_m = 1e-6
//! detuning_over_omega_m = 1.0
//!
//! [[cavity_modes]]
//! kappa_over_omega_m = 1.0
//! length_m = 1e-3
//!
//! [gas]
//! pressure_pa = 1e-4
//! gas_temperature_k = 300.0
//! bath_temperature_k = 300.0
//! accommodation = 0.9
//! ```
//!
//! `[detection]` is optional and sets the frequency grid and quadrature pairing.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constants::AIR_MOLECULAR_MASS;
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::model::{
    CavityMode, Ellipsoid, GasEnvironment, ScaledRate, Setup, Tweezer, DEFAULT_CAVITY_WAIST,
};
use crate::spectra::Pairing;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub ellipsoid: EllipsoidConfig,
    pub tweezers: Vec<TweezerConfig>,
    pub cavity_modes: Vec<CavityConfig>,
    pub gas: GasConfig,
    #[serde(default, skip_serializing_if = "DetectionConfig::is_empty")]
    pub detection: DetectionConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipsoidConfig {
    pub semi_axis_a_m: f64,
    pub semi_axis_b_m: f64,
    /// Defaults to `semi_axis_b_m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semi_axis_c_m: Option<f64>,
    pub density_kg_m3: f64,
    pub relative_permittivity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TweezerConfig {
    pub wavelength_m: f64,
    pub power_w: f64,
    pub waist_m: f64,
    /// `ω_c - ω_j`; at most one of the two detuning keys. Default: `+ω_m` for
    /// the first tweezer, `-ω_m` for the second.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detuning_over_omega_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detuning_rad_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    /// Exactly one of the two decay-rate keys.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_over_omega_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_rad_s: Option<f64>,
    pub length_m: f64,
    /// Defaults to [`DEFAULT_CAVITY_WAIST`], which is a calibration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waist_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_rad: Option<f64>,
    /// Defaults to the optical frequency of the matching tweezer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resonance_rad_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasConfig {
    pub pressure_pa: f64,
    pub gas_temperature_k: f64,
    /// Defaults to `gas_temperature_k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bath_temperature_k: Option<f64>,
    pub accommodation: f64,
    /// Defaults to dry air.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub molecular_mass_kg: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_min_over_omega_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_max_over_omega_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_omega: Option<usize>,
    /// `"epr"` (default) or `"symmetric"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<String>,
}

impl DetectionConfig {
    fn is_empty(&self) -> bool {
        *self == DetectionConfig::default()
    }

    /// Grid from the config, falling back to `[-4, 4]` for one channel and
    /// `[0, 2]` for two, 2001 points.
    pub fn grid(&self, two_mode: bool) -> Result<FrequencyGrid> {
        let base = if two_mode {
            FrequencyGrid::positive()
        } else {
            FrequencyGrid::default()
        };
        FrequencyGrid::new(
            self.omega_min_over_omega_m.unwrap_or(base.min),
            self.omega_max_over_omega_m.unwrap_or(base.max),
            self.n_omega.unwrap_or(base.n),
        )
    }

    pub fn pairing(&self) -> Result<Pairing> {
        self.pairing.as_deref().map_or(Ok(Pairing::default()), str::parse)
    }
}

fn exclusive(a: Option<f64>, b: Option<f64>, path: &str, names: (&str, &str)) -> Result<Option<(f64, bool)>> {
    match (a, b) {
        (Some(_), Some(_)) => Err(Error::invalid(
            path,
            format!("set only one of `{}` and `{}`", names.0, names.1),
        )),
        (Some(v), None) => Ok(Some((v, true))),
        (None, Some(v)) => Ok(Some((v, false))),
        (None, None) => Ok(None),
    }
}

fn scaled((v, over_omega_m): (f64, bool)) -> ScaledRate {
    if over_omega_m {
        ScaledRate::OmegaM(v)
    } else {
        ScaledRate::RadPerSecond(v)
    }
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Canonical serialization: fixed key order, unset optionals omitted.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_toml_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn is_two_mode(&self) -> bool {
        self.tweezers.len() == 2
    }

    pub fn grid(&self) -> Result<FrequencyGrid> {
        self.detection.grid(self.is_two_mode())
    }

    /// Converts to model inputs. The returned warnings name every default that
    /// stands in for a calibration.
    pub fn to_setup(&self) -> Result<(Setup, Vec<String>)> {
        let mut warnings = Vec::new();
        let e = &self.ellipsoid;
        // range checks happen in `model::derive`, so callers can collect them all
        let ellipsoid = Ellipsoid {
            a: e.semi_axis_a_m,
            b: e.semi_axis_b_m,
            c: e.semi_axis_c_m.unwrap_or(e.semi_axis_b_m),
            density: e.density_kg_m3,
            permittivity: e.relative_permittivity,
        };

        let mut tweezers = Vec::with_capacity(self.tweezers.len());
        for (i, t) in self.tweezers.iter().enumerate() {
            let path = format!("tweezers[{i}]");
            let default = if i == 0 { 1.0 } else { -1.0 };
            let detuning = exclusive(
                t.detuning_over_omega_m,
                t.detuning_rad_s,
                &path,
                ("detuning_over_omega_m", "detuning_rad_s"),
            )?
            .map_or(ScaledRate::OmegaM(default), scaled);
            tweezers.push(Tweezer {
                wavelength: t.wavelength_m,
                power: t.power_w,
                waist: t.waist_m,
                detuning,
            });
        }

        let mut cavities = Vec::with_capacity(self.cavity_modes.len());
        let mut calibrated_waist = false;
        for (i, c) in self.cavity_modes.iter().enumerate() {
            let path = format!("cavity_modes[{i}]");
            let kappa = exclusive(c.kappa_over_omega_m, c.kappa_rad_s, &path, ("kappa_over_omega_m", "kappa_rad_s"))?
                .map(scaled)
                .ok_or_else(|| Error::invalid(&path, "missing `kappa_over_omega_m` or `kappa_rad_s`"))?;
            let waist = c.waist_m.unwrap_or_else(|| {
                calibrated_waist = true;
                warnings.push(format!(
                    "{path}.waist_m not set; using the calibrated default {DEFAULT_CAVITY_WAIST:e} m"
                ));
                DEFAULT_CAVITY_WAIST
            });
            let resonance = match (c.resonance_rad_s, tweezers.get(i)) {
                (Some(w), _) => w,
                (None, Some(t)) => t.angular_frequency(),
                (None, None) => {
                    return Err(Error::invalid(
                        format!("{path}.resonance_rad_s"),
                        "required when the mode has no matching tweezer",
                    ))
                }
            };
            cavities.push(CavityMode {
                resonance,
                kappa,
                length: c.length_m,
                waist,
                phase: c.phase_rad.unwrap_or(0.0),
            });
        }

        let g = &self.gas;
        let gas = GasEnvironment {
            pressure: g.pressure_pa,
            gas_temperature: g.gas_temperature_k,
            molecular_mass: g.molecular_mass_kg.unwrap_or(AIR_MOLECULAR_MASS),
            accommodation: g.accommodation,
            bath_temperature: g.bath_temperature_k.unwrap_or(g.gas_temperature_k),
        };
        self.detection.pairing()?;
        self.grid()?;
        Ok((
            Setup {
                ellipsoid,
                tweezers,
                cavities,
                gas,
                calibrated_waist,
            },
            warnings,
        ))
    }

    /// Returns a copy with the numeric field at `path` (e.g.
    /// `"tweezers[1].power_w"`) set to `value`. Optional schema fields that
    /// are unset may be set too.
    pub fn with_parameter(&self, path: &str, value: f64) -> Result<Config> {
        let bad = |reason: &str| Error::invalid(path, reason.to_string());
        let mut root = toml::Value::try_from(self).map_err(|e| Error::Config(e.to_string()))?;
        let segments: Vec<&str> = path.split('.').collect();
        let (last, parents) = segments.split_last().ok_or_else(|| bad("empty parameter path"))?;
        let mut node = &mut root;
        for seg in parents {
            let (key, index) = parse_segment(seg).ok_or_else(|| bad("malformed path segment"))?;
            let table = node.as_table_mut().ok_or_else(|| bad("path does not resolve"))?;
            // omitted optional sections; unknown names fail the schema check below
            if index.is_none() && !table.contains_key(key) {
                table.insert(key.to_string(), toml::Value::Table(Default::default()));
            }
            node = table.get_mut(key).ok_or_else(|| bad("path does not resolve"))?;
            if let Some(i) = index {
                node = node
                    .as_array_mut()
                    .and_then(|a| a.get_mut(i))
                    .ok_or_else(|| bad("array index out of range"))?;
            }
        }
        if parents.is_empty() {
            return Err(bad("path must name a field inside a section"));
        }
        let table = node.as_table_mut().ok_or_else(|| bad("path does not resolve to a section"))?;
        let (key, index) = parse_segment(last).ok_or_else(|| bad("malformed path segment"))?;
        if index.is_some() {
            return Err(bad("the last path segment must be a field"));
        }
        let integer = match table.get(key) {
            Some(toml::Value::Integer(_)) => true,
            Some(toml::Value::Float(_)) => false,
            None => key == "n_omega",
            Some(_) => return Err(bad("not a numeric field")),
        };
        let new = if integer {
            if value.fract() != 0.0 || value < 0.0 {
                return Err(bad("integer field needs a non-negative whole number"));
            }
            toml::Value::Integer(value as i64)
        } else {
            toml::Value::Float(value)
        };
        table.insert(key.to_string(), new);
        root.try_into::<Config>()
            .map_err(|e| Error::invalid(path, format!("not a numeric config field: {e}")))
    }
}

fn parse_segment(seg: &str) -> Option<(&str, Option<usize>)> {
    match seg.split_once('[') {
        None => (!seg.is_empty()).then_some((seg, None)),
        Some((key, rest)) => {
            let idx = rest.strip_suffix(']')?.parse().ok()?;
            (!key.is_empty()).then_some((key, Some(idx)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
        [ellipsoid]
        semi_axis_a_m = 100e-9
        semi_axis_b_m = 50e-9
        density_kg_m3 = 2200
        relative_permittivity = 2.1

        [[tweezers]]
        wavelength_m = 780e-9
        power_w = 0.05
        waist_m = 1e-6

        [[cavity_modes]]
        kappa_over_omega_m = 1.0
        length_m = 1e-3

        [gas]
        pressure_pa = 1e-4
        gas_temperature_k = 300
        accommodation = 0.9
    "#;

    #[test]
    fn defaults_and_warning() {
        let cfg = Config::from_toml_str(SAMPLE).unwrap();
        let (setup, warnings) = cfg.to_setup().unwrap();
        assert!(setup.calibrated_waist);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("cavity_modes[0].waist_m"));
        assert_eq!(setup.cavities[0].waist, DEFAULT_CAVITY_WAIST);
        assert_eq!(setup.tweezers[0].detuning, ScaledRate::OmegaM(1.0));
        assert_eq!(setup.gas.bath_temperature, 300.0);
        assert_eq!(setup.ellipsoid.c, 50e-9);
        assert_eq!(cfg.grid().unwrap(), FrequencyGrid::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = SAMPLE.replace("power_w", "power_mw");
        assert!(matches!(Config::from_toml_str(&text), Err(Error::Config(_))));
    }

    #[test]
    fn conflicting_rates_rejected() {
        let text = SAMPLE.replace("kappa_over_omega_m = 1.0", "kappa_over_omega_m = 1.0\nkappa_rad_s = 1e6");
        let cfg = Config::from_toml_str(&text).unwrap();
        let err = cfg.to_setup().unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { ref field, .. } if field == "cavity_modes[0]"));
    }

    #[test]
    fn fingerprint_is_canonical() {
        let a = Config::from_toml_str(SAMPLE).unwrap();
        let reordered = SAMPLE.replace(
            "pressure_pa = 1e-4\n        gas_temperature_k = 300",
            "gas_temperature_k = 300.0\n        pressure_pa = 0.0001",
        );
        let b = Config::from_toml_str(&reordered).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint().len(), 64);
        let c = a.with_parameter("gas.pressure_pa", 1e-2).unwrap();
        assert_ne!(a.fingerprint(), c.fingerprint());
        assert_eq!(Config::from_toml_str(&a.to_toml_string()).unwrap(), a);
    }

    #[test]
    fn parameter_paths() {
        let cfg = Config::from_toml_str(SAMPLE).unwrap();
        let c = cfg.with_parameter("tweezers[0].power_w", 0.1).unwrap();
        assert_eq!(c.tweezers[0].power_w, 0.1);
        let c = cfg.with_parameter("cavity_modes[0].waist_m", 20e-6).unwrap();
        assert_eq!(c.cavity_modes[0].waist_m, Some(20e-6));
        let c = cfg.with_parameter("detection.n_omega", 11.0).unwrap();
        assert_eq!(c.detection.n_omega, Some(11));
        for bad in ["tweezers[3].power_w", "gas.pressure", "nope.x", "tweezers.power_w", "power_w", ""] {
            assert!(cfg.with_parameter(bad, 1.0).is_err(), "{bad}");
        }
    }

    #[test]
    fn negative_pressure_named() {
        let cfg = Config::from_toml_str(SAMPLE).unwrap().with_parameter("gas.pressure_pa", -1.0).unwrap();
        let (setup, _) = cfg.to_setup().unwrap();
        let err = crate::model::derive(&setup).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { ref field, .. } if field == "gas.pressure_pa"));
    }
}
