use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use kahler_core::algebra::grat::parse_rational;
use kahler_core::ch_metrics::ChKind;
use kahler_core::domains::DomainSpec;
use kahler_core::flag::{admissible_minors, coordinate_names, flag_dual_verdict, Group, PaintedDiagram};
use kahler_core::{curvature, domains, inducibility, verify};

fn err(e: kahler_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serialize through JSON so Python sees plain dicts, lists and strings.
fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

fn rationals(v: &[String]) -> PyResult<Vec<num_rational::BigRational>> {
    v.iter().map(|s| parse_rational(s).map_err(err)).collect()
}

fn single(spec: &str) -> PyResult<domains::CartanDomain> {
    let d: DomainSpec = spec.parse().map_err(err)?;
    d.single().ok_or_else(|| PyValueError::new_err("expected an irreducible domain"))
}

/// Irreducible bounded symmetric domain, e.g. `CH2`, `I:2x3`, `IV:5`, `EVI`.
#[pyclass(name = "CartanDomain", frozen)]
struct PyCartanDomain {
    inner: domains::CartanDomain,
}

#[pymethods]
impl PyCartanDomain {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Self { inner: single(spec)? })
    }

    #[getter]
    fn rank(&self) -> u32 {
        self.inner.r
    }

    #[getter]
    fn a(&self) -> u32 {
        self.inner.a
    }

    #[getter]
    fn b(&self) -> u32 {
        self.inner.b
    }

    #[getter]
    fn dimension(&self) -> u32 {
        self.inner.n
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.inner.gamma
    }

    fn wallach_threshold(&self) -> String {
        self.inner.wallach().threshold().to_string()
    }

    fn in_wallach_set(&self, x: &str) -> PyResult<bool> {
        self.inner.wallach().member(&parse_rational(x).map_err(err)?).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("CartanDomain({})", self.inner.family)
    }
}

/// Decide projective inducibility of a Cartan-Hartogs metric.
#[pyfunction]
#[pyo3(signature = (domain, metric, alpha, mu))]
fn decide<'py>(py: Python<'py>, domain: &str, metric: &str, alpha: &str, mu: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let kind: ChKind = metric.parse().map_err(err)?;
    let alpha = parse_rational(alpha).map_err(err)?;
    let mu = rationals(&mu)?;
    let dec = if kind.is_dual() && mu.len() != 1 {
        inducibility::decide_dual_finite(&alpha, &mu).map_err(err)?
    } else {
        let m = mu.first().ok_or_else(|| PyValueError::new_err("mu is empty"))?;
        inducibility::decide(&single(domain)?, kind, &alpha, m).map_err(err)?
    };
    to_py(py, &dec)
}

#[pyfunction]
#[pyo3(signature = (a, b, k, order = 20))]
fn psi_expansion<'py>(py: Python<'py>, a: u32, b: u32, k: u32, order: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &inducibility::psi_expansion(a, b, k, order).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (a, b, k, order = 40))]
fn psi_ratio_limit<'py>(py: Python<'py>, a: u32, b: u32, k: u32, order: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &inducibility::psi_ratio_limit(a, b, k, order).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (a, b, k, order = 8))]
fn propalphamu_witness<'py>(py: Python<'py>, a: u32, b: u32, k: u32, order: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &inducibility::propalphamu_witness(a, b, k, order).map_err(err)?)
}

fn diagram(group: &str, black: Vec<u32>) -> PyResult<PaintedDiagram> {
    let g: Group = group.parse().map_err(err)?;
    PaintedDiagram::new(g, black).map_err(err)
}

/// Admissible minors of the flag manifold, as strings in z1.., z1bar...
#[pyfunction]
fn flag_minors(group: &str, black: Vec<u32>) -> PyResult<Vec<String>> {
    let d = diagram(group, black)?;
    let names = coordinate_names(d.ncoords());
    Ok(admissible_minors(&d).map_err(err)?.iter().map(|p| p.display_with(&names)).collect())
}

#[pyfunction]
#[pyo3(signature = (group, black, c, order = 6))]
fn flag_verdict<'py>(py: Python<'py>, group: &str, black: Vec<u32>, c: Vec<String>, order: u32) -> PyResult<Bound<'py, PyAny>> {
    let d = diagram(group, black)?;
    to_py(py, &flag_dual_verdict(&d, &rationals(&c)?, order).map_err(err)?)
}

/// The exact curvature computation along the U(2,1) dual curve.
#[pyfunction]
#[pyo3(signature = (width_log2 = verify::ROOT_WIDTH_LOG2))]
fn hideyuki<'py>(py: Python<'py>, width_log2: u32) -> PyResult<Bound<'py, PyAny>> {
    let width = num_rational::BigRational::new(1.into(), num_bigint::BigInt::from(1) << width_log2);
    to_py(py, &curvature::hideyuki_check(&width).map_err(err)?)
}

/// Run the acceptance suite, or a subset of its checks.
#[pyfunction]
#[pyo3(signature = (order = 10, checks = None))]
fn verify_suite<'py>(py: Python<'py>, order: u32, checks: Option<Vec<u32>>) -> PyResult<Bound<'py, PyAny>> {
    match checks {
        None => to_py(py, &verify::run_suite(order)),
        Some(ids) => {
            let out = ids
                .into_iter()
                .map(|id| verify::run_check(id, order).ok_or_else(|| PyValueError::new_err(format!("no check {id}"))))
                .collect::<PyResult<Vec<_>>>()?;
            to_py(py, &out)
        }
    }
}

/// Run the command-line driver in-process; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let (mut out, mut e) = (Vec::new(), Vec::new());
    let argv = std::iter::once("kahler".to_string()).chain(args);
    let code = kahler_core::cli::run(argv, &mut out, &mut e);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&e).into_owned())
}

#[pymodule]
fn kahler_dual(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCartanDomain>()?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(psi_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(psi_ratio_limit, m)?)?;
    m.add_function(wrap_pyfunction!(propalphamu_witness, m)?)?;
    m.add_function(wrap_pyfunction!(flag_minors, m)?)?;
    m.add_function(wrap_pyfunction!(flag_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(hideyuki, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("SCHEMA_VERSION", verify::SCHEMA_VERSION)?;
    Ok(())
}
