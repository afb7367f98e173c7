//! Python bindings for `torsqueeze`.
//!
//! Frequencies passed to and returned from spectra are in units of ω_m;
//! everything else is SI.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use torsqueeze::cli::{self, sweep, SweepSpec};
use torsqueeze::oracle;
use torsqueeze::spectra::{self, Pairing, SpectrumDetail, SpectrumResult};
use torsqueeze::{Error, FrequencyGrid, SteadyState};

create_exception!(torsqueeze_py, UnstableError, PyException, "No steady state: the drift matrix has a growing mode.");
create_exception!(torsqueeze_py, VerificationError, PyException, "An oracle disagreed with the closed form.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Unstable { .. } => UnstableError::new_err(e.to_string()),
        Error::Verification(_) => VerificationError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn pairing(name: &str) -> PyResult<Pairing> {
    name.parse().map_err(|e: Error| to_py(e))
}

/// A validated experiment description (TOML).
#[pyclass(name = "Config", module = "torsqueeze_py", from_py_object)]
#[derive(Clone)]
struct PyConfig {
    inner: torsqueeze::Config,
}

#[pymethods]
impl PyConfig {
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        torsqueeze::Config::from_toml_str(text)
            .map(|inner| PyConfig { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        torsqueeze::Config::load(&path).map(|inner| PyConfig { inner }).map_err(to_py)
    }

    /// The reference configuration used by the figure presets.
    #[staticmethod]
    #[pyo3(signature = (two_mode=false))]
    fn reference(two_mode: bool) -> Self {
        PyConfig {
            inner: cli::presets::reference_config(two_mode),
        }
    }

    fn to_toml(&self) -> String {
        self.inner.to_toml_string()
    }

    fn fingerprint(&self) -> String {
        self.inner.fingerprint()
    }

    #[getter]
    fn two_mode(&self) -> bool {
        self.inner.is_two_mode()
    }

    /// Copy with one parameter replaced, e.g. `"tweezers[1].power_w"`.
    fn with_parameter(&self, path: &str, value: f64) -> PyResult<Self> {
        self.inner
            .with_parameter(path, value)
            .map(|inner| PyConfig { inner })
            .map_err(to_py)
    }

    fn system(&self) -> PyResult<PySystemModel> {
        let (setup, _) = self.inner.to_setup().map_err(to_py)?;
        let d = torsqueeze::derive(&setup).map_err(to_py)?;
        Ok(PySystemModel { inner: d.system })
    }

    fn __repr__(&self) -> String {
        format!("Config(fingerprint='{}')", &self.inner.fingerprint()[..12])
    }
}

/// Derived parameters of a configuration as a dict.
#[pyfunction]
fn derive<'py>(py: Python<'py>, config: &PyConfig) -> PyResult<Bound<'py, PyDict>> {
    let (setup, warnings) = config.inner.to_setup().map_err(to_py)?;
    let d = torsqueeze::derive(&setup).map_err(to_py)?;
    let out = PyDict::new(py);
    for (name, cell) in sweep::DERIVED_COLUMNS.iter().zip(sweep::derived_cells(&d)) {
        out.set_item(*name, cell.as_f64())?;
    }
    out.set_item("ultra_strong", d.ultra_strong())?;
    out.set_item("calibrated_waist", d.calibrated_waist)?;
    out.set_item("warnings", warnings)?;
    Ok(out)
}

/// The linearized model. Rates in rad/s.
#[pyclass(name = "SystemModel", module = "torsqueeze_py", from_py_object)]
#[derive(Clone)]
struct PySystemModel {
    inner: torsqueeze::SystemModel,
}

impl PySystemModel {
    fn steady(&self) -> PyResult<SteadyState> {
        SteadyState::new(self.inner).map_err(to_py)
    }
}

fn spectrum_dict<'py>(py: Python<'py>, s: SpectrumResult) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    let (min, at) = s.minimum();
    out.set_item("min", min)?;
    out.set_item("argmin_omega", at)?;
    out.set_item("omega", s.omega_grid)?;
    out.set_item("S", s.values)?;
    out.set_item("dB", s.db)?;
    match s.detail {
        SpectrumDetail::SingleMode { theta_opt } => out.set_item("theta_opt", theta_opt)?,
        SpectrumDetail::TwoMode { s_xx, s_yy } => {
            out.set_item("S_XX", s_xx)?;
            out.set_item("S_YY", s_yy)?;
        }
    }
    Ok(out)
}

#[pymethods]
impl PySystemModel {
    #[new]
    #[pyo3(signature = (omega_m, gamma_m, n_bar, xi0, mode_a, mode_b=None))]
    fn new(omega_m: f64, gamma_m: f64, n_bar: f64, xi0: f64, mode_a: (f64, f64, f64), mode_b: Option<(f64, f64, f64)>) -> PyResult<Self> {
        let channel = |(coupling, kappa, detuning): (f64, f64, f64)| torsqueeze::Channel {
            coupling,
            kappa,
            detuning,
        };
        let sys = torsqueeze::SystemModel {
            omega_m,
            gamma_m,
            n_bar,
            xi0,
            mode_a: channel(mode_a),
            mode_b: mode_b.map(channel).unwrap_or(torsqueeze::SystemModel::idle_channel(omega_m)),
        };
        sys.validate().map_err(to_py)?;
        Ok(PySystemModel { inner: sys })
    }

    #[getter]
    fn omega_m(&self) -> f64 {
        self.inner.omega_m
    }

    #[getter]
    fn gamma_m(&self) -> f64 {
        self.inner.gamma_m
    }

    #[getter]
    fn n_bar(&self) -> f64 {
        self.inner.n_bar
    }

    /// `(coupling, kappa, detuning)` of channel A and B.
    #[getter]
    fn channels(&self) -> ((f64, f64, f64), (f64, f64, f64)) {
        let c = |ch: &torsqueeze::Channel| (ch.coupling, ch.kappa, ch.detuning);
        (c(&self.inner.mode_a), c(&self.inner.mode_b))
    }

    fn decoupled(&self) -> Self {
        PySystemModel {
            inner: self.inner.decoupled(),
        }
    }

    /// `(stable, max_real_eig, eigenvalues)`.
    fn stability(&self) -> PyResult<(bool, f64, Vec<Complex64>)> {
        let r = torsqueeze::stability(&self.inner).map_err(to_py)?;
        Ok((r.stable, r.max_real_eig, r.eigenvalues.to_vec()))
    }

    #[pyo3(signature = (omega_min=-4.0, omega_max=4.0, n_omega=2001))]
    fn single_mode_spectrum<'py>(&self, py: Python<'py>, omega_min: f64, omega_max: f64, n_omega: usize) -> PyResult<Bound<'py, PyDict>> {
        let grid = FrequencyGrid::new(omega_min, omega_max, n_omega).map_err(to_py)?;
        let s = spectra::single_mode_spectrum(&self.steady()?, &grid).map_err(to_py)?;
        spectrum_dict(py, s)
    }

    #[pyo3(signature = (omega_min=0.0, omega_max=2.0, n_omega=2001, pairing="epr"))]
    fn two_mode_spectrum<'py>(
        &self,
        py: Python<'py>,
        omega_min: f64,
        omega_max: f64,
        n_omega: usize,
        pairing: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let grid = FrequencyGrid::new(omega_min, omega_max, n_omega).map_err(to_py)?;
        let s = spectra::two_mode_spectrum_grid(&self.steady()?, &grid, self::pairing(pairing)?).map_err(to_py)?;
        spectrum_dict(py, s)
    }

    /// Steady-state `(n_mech, n_A, n_B)` from the Lyapunov equation.
    fn occupations(&self) -> PyResult<(f64, f64, f64)> {
        let cov = oracle::lyapunov_covariance(&self.steady()?).map_err(to_py)?;
        Ok((cov.mechanical_occupation(), cov.cavity_occupation(0), cov.cavity_occupation(1)))
    }

    /// Homodyne spectrum of channel A at `omega` (units of ω_m) and angle `theta`
    /// by the generic 6×6 solve.
    fn homodyne_oracle(&self, omega: f64, theta: f64) -> PyResult<f64> {
        let ss = self.steady()?;
        oracle::homodyne_spectrum(&ss, omega * ss.omega_m, theta).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        let (a, b) = self.channels();
        format!(
            "SystemModel(omega_m={:.6e}, gamma_m={:.3e}, n_bar={:.3e}, mode_a={a:?}, mode_b={b:?})",
            self.inner.omega_m, self.inner.gamma_m, self.inner.n_bar
        )
    }
}

#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    cli::PRESET_NAMES.to_vec()
}

/// CSV text of one figure preset, without the timestamp line.
#[pyfunction]
fn run_preset(py: Python<'_>, name: &str) -> PyResult<String> {
    let name = name.to_string();
    py.detach(move || cli::run_preset(&name).map(|t| t.render(None)))
        .map_err(to_py)
}

/// CSV text of a sweep described by TOML `spec` over `config`.
#[pyfunction]
fn run_sweep(py: Python<'_>, config: &PyConfig, spec: &str) -> PyResult<String> {
    let spec = SweepSpec::from_toml_str(spec).map_err(to_py)?;
    let cfg = config.inner.clone();
    py.detach(move || cli::run_sweep(&cfg, &spec).map(|t| t.render(None)))
        .map_err(to_py)
}

/// Runs the oracle suite; returns `[(check, metric, tolerance, passed)]`.
#[pyfunction]
fn verify(config: &PyConfig) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let report = torsqueeze::verify::verify_config(&config.inner).map_err(to_py)?;
    Ok(report
        .checks
        .into_iter()
        .map(|c| (c.name, c.metric, c.tolerance, c.passed))
        .collect())
}

#[pymodule]
fn torsqueeze_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConfig>()?;
    m.add_class::<PySystemModel>()?;
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(run_preset, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("UnstableError", m.py().get_type::<UnstableError>())?;
    m.add("VerificationError", m.py().get_type::<VerificationError>())?;
    Ok(())
}
