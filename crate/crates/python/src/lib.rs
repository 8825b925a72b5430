//! Python bindings: `import ptre`.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ptre_core::sweep::{ResultRow, SweepConfig, COLUMNS};
use ptre_core::tls::{analytic_limit_tau_z, LimitKind};
use ptre_core::PtreError;

fn to_py(e: PtreError) -> PyErr {
    match e {
        PtreError::Config(_) | PtreError::Domain(_) | PtreError::InvalidParameter { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Super-Ohmic phonon bath J(ω) = απω³/ω_c² e^{−ω/ω_c}.
#[pyclass(name = "PhononBath", frozen)]
struct PyPhononBath(ptre_core::PhononBath);

#[pymethods]
impl PyPhononBath {
    #[new]
    #[pyo3(signature = (alpha, omega_c = 5.0, beta_v = 1.0))]
    fn new(alpha: f64, omega_c: f64, beta_v: f64) -> PyResult<Self> {
        ptre_core::PhononBath::new(alpha, omega_c, beta_v)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    #[getter]
    fn omega_c(&self) -> f64 {
        self.0.omega_c()
    }

    #[getter]
    fn beta_v(&self) -> f64 {
        self.0.beta_v()
    }

    fn kappa(&self) -> f64 {
        self.0.kappa()
    }

    /// Q(t), complex.
    fn exponent(&self, t: f64) -> Complex64 {
        self.0.exponent(t).value
    }

    fn spectral_density(&self, omega: f64) -> PyResult<f64> {
        self.0.spectral_density(omega).map_err(to_py)
    }

    /// (f(t), g(t)) for t >= 0.
    fn kernels(&self, t: f64) -> PyResult<(f64, f64)> {
        self.0.kernels_f_g(t).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "PhononBath(alpha={}, omega_c={}, beta_v={})",
            self.0.alpha(),
            self.0.omega_c(),
            self.0.beta_v()
        )
    }
}

fn config(text: Option<&str>) -> PyResult<SweepConfig> {
    match text {
        Some(t) => ptre_core::parse_config(t).map_err(to_py),
        None => Ok(SweepConfig::default()),
    }
}

fn row_dict<'py>(py: Python<'py>, row: &ResultRow) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for c in COLUMNS {
        match row.get(c) {
            Some(v) => d.set_item(c, v)?,
            None => d.set_item(c, row.flags.clone())?,
        }
    }
    Ok(d)
}

/// Complex trigamma ψ₁(z).
#[pyfunction]
fn trigamma(z: Complex64) -> Complex64 {
    ptre_core::special::trigamma(z)
}

/// One parameter point as a dict of the CSV columns; `flags` is a list.
#[pyfunction]
#[pyo3(signature = (alpha, beta_v = None, config = None))]
fn run_point<'py>(
    py: Python<'py>,
    alpha: f64,
    beta_v: Option<f64>,
    config: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = self::config(config)?;
    let beta_v = beta_v.unwrap_or(cfg.phonon.beta_v());
    let row = py.detach(|| ptre_core::run_point(&cfg, alpha, beta_v));
    row_dict(py, &row)
}

/// The configured grid, one dict per point in CSV row order.
#[pyfunction]
#[pyo3(signature = (config = None, threads = 1))]
fn run_sweep<'py>(
    py: Python<'py>,
    config: Option<&str>,
    threads: usize,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = self::config(config)?;
    let rows = py
        .detach(|| ptre_core::run_sweep(&cfg, threads))
        .map_err(to_py)?;
    rows.iter().map(|r| row_dict(py, r)).collect()
}

/// Closed-form reference values.
#[pyfunction]
#[pyo3(signature = (config = None))]
fn limits<'py>(py: Python<'py>, config: Option<&str>) -> PyResult<Bound<'py, PyDict>> {
    let cfg = self::config(config)?;
    let (sys, bath) = (&cfg.system, &cfg.phonon);
    let d = PyDict::new(py);
    d.set_item("eta0", sys.eta0())?;
    d.set_item("kappa", bath.kappa())?;
    d.set_item(
        "tau_z_weak",
        analytic_limit_tau_z(sys, bath, LimitKind::Weak),
    )?;
    d.set_item(
        "tau_z_polaron",
        analytic_limit_tau_z(sys, bath, LimitKind::Polaron),
    )?;
    d.set_item(
        "tau_z_strong",
        analytic_limit_tau_z(sys, bath, LimitKind::Strong),
    )?;
    d.set_item("n_p", cfg.pump.n)?;
    d.set_item("n_t", cfg.trap.n)?;
    Ok(d)
}

/// Oracle suite as (name, passed, detail) tuples.
#[pyfunction]
#[pyo3(signature = (config = None))]
fn validate(py: Python<'_>, config: Option<&str>) -> PyResult<Vec<(String, bool, String)>> {
    let cfg = self::config(config)?;
    let checks = py.detach(|| ptre_core::validate::run_suite(&cfg));
    Ok(checks
        .into_iter()
        .map(|c| (c.name, c.passed, c.detail))
        .collect())
}

/// Runs the grid and writes the CSV to `path`.
#[pyfunction]
#[pyo3(signature = (path, config = None, threads = 1))]
fn write_csv(
    py: Python<'_>,
    path: std::path::PathBuf,
    config: Option<&str>,
    threads: usize,
) -> PyResult<()> {
    let cfg = self::config(config)?;
    py.detach(|| {
        let file = std::fs::File::create(&path)
            .map_err(|e| PtreError::Io(format!("cannot write {}: {e}", path.display())))?;
        let rows = ptre_core::run_sweep(&cfg, threads)?;
        ptre_core::sweep::write_csv(&cfg, &rows, std::io::BufWriter::new(file))
    })
    .map_err(to_py)
}

#[pymodule]
fn ptre(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPhononBath>()?;
    m.add_function(wrap_pyfunction!(trigamma, m)?)?;
    m.add_function(wrap_pyfunction!(run_point, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(limits, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(write_csv, m)?)?;
    m.add("COLUMNS", COLUMNS.to_vec())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
