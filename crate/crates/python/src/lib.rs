//! Python bindings for `tlms`.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tlms::bjorling::DegeneracyPolicy;
use tlms::geometry::{causal_character_default, LVec3, SplitCurve, Surface};
use tlms::interpolate::{minimality_conditions, Target};
use tlms::io::{self, MeshSpec};
use tlms::split::SplitComplex;
use tlms::verify::{Grid, VerifyConfig};

create_exception!(pytlms, TlmsError, PyException);

fn err(e: tlms::Error) -> PyErr {
    TlmsError::new_err(format!("{}: {}", e.kind(), e))
}

fn parse_json(text: &str) -> PyResult<serde_json::Value> {
    serde_json::from_str(text).map_err(|e| err(tlms::Error::Format(e.to_string())))
}

fn vec3(p: LVec3) -> (f64, f64, f64) {
    (p.x1, p.x2, p.x3)
}

#[pyclass(name = "SplitComplex", module = "pytlms", skip_from_py_object)]
#[derive(Clone, Copy)]
struct PySplit(SplitComplex);

#[pymethods]
impl PySplit {
    #[new]
    #[pyo3(signature = (re, im = 0.0))]
    fn new(re: f64, im: f64) -> Self {
        Self(SplitComplex::new(re, im))
    }

    #[staticmethod]
    fn exp_hyper(theta: f64) -> PyResult<Self> {
        SplitComplex::exp_hyper(theta).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_polar(rho: f64, theta: f64) -> PyResult<Self> {
        SplitComplex::from_polar(rho, theta).map(Self).map_err(err)
    }

    #[getter]
    fn re(&self) -> f64 {
        self.0.re
    }

    #[getter]
    fn im(&self) -> f64 {
        self.0.im
    }

    fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    fn quad(&self) -> f64 {
        self.0.quad()
    }

    fn mag(&self) -> f64 {
        self.0.mag()
    }

    fn inv(&self) -> PyResult<Self> {
        self.0.inv().map(Self).map_err(err)
    }

    fn to_polar(&self) -> PyResult<(f64, f64)> {
        self.0.to_polar().map_err(err)
    }

    fn __add__(&self, other: PyRef<'_, Self>) -> Self {
        Self(self.0 + other.0)
    }

    fn __sub__(&self, other: PyRef<'_, Self>) -> Self {
        Self(self.0 - other.0)
    }

    fn __mul__(&self, other: PyRef<'_, Self>) -> Self {
        Self(self.0 * other.0)
    }

    fn __neg__(&self) -> Self {
        Self(-self.0)
    }

    fn __eq__(&self, other: PyRef<'_, Self>) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("SplitComplex({}, {})", self.0.re, self.0.im)
    }
}

#[pyclass(name = "Curve", module = "pytlms", skip_from_py_object)]
#[derive(Clone)]
struct PyCurve(SplitCurve);

#[pymethods]
impl PyCurve {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::curve_from_json(&parse_json(text)?).map(Self).map_err(err)
    }

    #[staticmethod]
    fn constant(x1: f64, x2: f64, x3: f64) -> Self {
        Self(SplitCurve::constant(LVec3::new(x1, x2, x3)))
    }

    fn to_json(&self) -> PyResult<String> {
        Ok(io::to_pretty(&io::curve_to_json(&self.0).map_err(err)?))
    }

    fn eval(&self, theta: f64) -> PyResult<(f64, f64, f64)> {
        self.0.eval(theta).map(vec3).map_err(err)
    }

    fn derivative(&self) -> Self {
        Self(self.0.derivative())
    }

    fn causal_character(&self) -> PyResult<String> {
        causal_character_default(&self.0).map(|c| c.to_string()).map_err(err)
    }

    fn has_winding(&self) -> bool {
        self.0.has_winding()
    }
}

#[pyclass(name = "Surface", module = "pytlms", skip_from_py_object)]
#[derive(Clone)]
struct PySurface(Surface);

fn mesh_spec(
    s: &Surface,
    n_rho: usize,
    n_theta: usize,
    rho: Option<(f64, f64)>,
    theta: (f64, f64),
) -> MeshSpec {
    MeshSpec {
        n_rho,
        n_theta,
        rho_range: rho.unwrap_or((s.domain.rho_min, s.domain.rho_max)),
        theta_range: theta,
    }
}

#[pymethods]
impl PySurface {
    #[staticmethod]
    fn flat_plane() -> Self {
        Self(Surface::flat_plane())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::surface_from_json(&parse_json(text)?).map(Self).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        Ok(io::to_pretty(&io::surface_to_json(&self.0).map_err(err)?))
    }

    #[getter]
    fn domain(&self) -> (f64, f64) {
        (self.0.domain.rho_min, self.0.domain.rho_max)
    }

    fn eval(&self, rho: f64, theta: f64) -> PyResult<(f64, f64, f64)> {
        self.0.eval(rho, theta).map(vec3).map_err(err)
    }

    fn restrict_rho(&self, r: f64) -> PyResult<PyCurve> {
        self.0.restrict_rho(r).map(PyCurve).map_err(err)
    }

    fn metric_det(&self, rho: f64, theta: f64) -> PyResult<f64> {
        self.0.metric(rho, theta).map(|g| g.det()).map_err(err)
    }

    /// Coefficient sup-norm of `h_z conj(h_z̄) − ω_z²`.
    fn minimality_residual(&self) -> f64 {
        minimality_conditions(&self.0).1
    }

    #[pyo3(signature = (n_rho = 33, n_theta = 129, rho = None, theta = (-2.0, 2.0)))]
    fn obj(&self, n_rho: usize, n_theta: usize, rho: Option<(f64, f64)>, theta: (f64, f64)) -> PyResult<String> {
        io::mesh_obj(&self.0, &mesh_spec(&self.0, n_rho, n_theta, rho, theta)).map_err(err)
    }

    #[pyo3(signature = (n_rho = 33, n_theta = 129, rho = None, theta = (-2.0, 2.0)))]
    fn csv(&self, n_rho: usize, n_theta: usize, rho: Option<(f64, f64)>, theta: (f64, f64)) -> PyResult<String> {
        io::mesh_csv(&self.0, &mesh_spec(&self.0, n_rho, n_theta, rho, theta)).map_err(err)
    }
}

/// Returns `(surface, totally_degenerate)`.
#[pyfunction]
#[pyo3(signature = (gamma, field, policy = "error"))]
fn solve_bjorling(gamma: PyRef<'_, PyCurve>, field: PyRef<'_, PyCurve>, policy: &str) -> PyResult<(PySurface, bool)> {
    let policy = match policy {
        "error" => DegeneracyPolicy::Error,
        "warn" => DegeneracyPolicy::Warn,
        other => return Err(pyo3::exceptions::PyValueError::new_err(format!("unknown policy {other:?}"))),
    };
    let sol = tlms::solve_bjorling(&gamma.0, &field.0, policy).map_err(err)?;
    Ok((PySurface(sol.surface), sol.totally_degenerate))
}

#[pyfunction]
fn point_interpolant(gamma: PyRef<'_, PyCurve>, point: (f64, f64, f64), r: f64) -> PyResult<PySurface> {
    let p = LVec3::new(point.0, point.1, point.2);
    tlms::point_interpolant(&gamma.0, p, r).map(PySurface).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (gamma, alpha, r, allow_log = false))]
fn curve_interpolant(gamma: PyRef<'_, PyCurve>, alpha: PyRef<'_, PyCurve>, r: f64, allow_log: bool) -> PyResult<PySurface> {
    tlms::curve_interpolant(&gamma.0, &alpha.0, r, allow_log).map(PySurface).map_err(err)
}

/// `target` is either a `Curve` or an `(x1, x2, x3)` point. Returns a list of
/// `{"r", "norm", "feasible"}` dicts, best first.
#[pyfunction]
#[pyo3(signature = (gamma, target, r_min = 1.01, r_max = 10.0, grid = 200, allow_log = false))]
fn radius_search<'py>(
    py: Python<'py>,
    gamma: PyRef<'_, PyCurve>,
    target: &Bound<'py, PyAny>,
    r_min: f64,
    r_max: f64,
    grid: usize,
    allow_log: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let target = if let Ok(curve) = target.cast::<PyCurve>() {
        Target::Curve(curve.borrow().0.clone())
    } else {
        let (a, b, c): (f64, f64, f64) = target.extract()?;
        Target::Point(LVec3::new(a, b, c))
    };
    let report = tlms::radius_search(&gamma.0, &target, r_min, r_max, grid, allow_log).map_err(err)?;
    report
        .candidates
        .iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("r", c.r)?;
            d.set_item("norm", c.norm)?;
            d.set_item("feasible", c.feasible)?;
            Ok(d)
        })
        .collect()
}

/// Finite-difference verification; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (surface, n_rho = 33, n_theta = 129, delta = tlms::verify::DEFAULT_DELTA, delta2 = tlms::verify::DEFAULT_DELTA2))]
fn verify<'py>(
    py: Python<'py>,
    surface: PyRef<'_, PySurface>,
    n_rho: usize,
    n_theta: usize,
    delta: f64,
    delta2: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let s = &surface.0;
    let config = VerifyConfig {
        grid: Grid::default_for(s, n_rho, n_theta).map_err(err)?,
        delta,
        delta2,
        det_tol: tlms::verify::DEFAULT_DET_TOL,
    };
    let r = tlms::verify_surface(s, &config).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("wave_residual_max", r.wave_residual_max)?;
    d.set_item("conformal_residual_max", r.conformal_residual_max)?;
    d.set_item("cross_residual_max", r.cross_residual_max)?;
    d.set_item("det_min", r.det_min)?;
    d.set_item("det_max", r.det_max)?;
    d.set_item("singular_points", r.singular_points)?;
    d.set_item("classification", r.classification.as_str())?;
    d.set_item("delta", r.delta)?;
    d.set_item("delta2", r.delta2)?;
    Ok(d)
}

#[pymodule]
fn pytlms(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TlmsError", m.py().get_type::<TlmsError>())?;
    m.add_class::<PySplit>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PySurface>()?;
    m.add_function(wrap_pyfunction!(solve_bjorling, m)?)?;
    m.add_function(wrap_pyfunction!(point_interpolant, m)?)?;
    m.add_function(wrap_pyfunction!(curve_interpolant, m)?)?;
    m.add_function(wrap_pyfunction!(radius_search, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
