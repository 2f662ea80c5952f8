//! Python bindings: operators, expansions, reports and the numerical check.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use ladderkit::coeff::UnitValues;
use ladderkit::errata::ORACLE_UNITS;
use ladderkit::fock::to_matrix;
use ladderkit::report::{naturalize_operator, to_latex, RunReport, Section};
use ladderkit::verify::{verify as run_verify, VerifyConfig};
use ladderkit::{parse_operator, Expansion as CoreExpansion, OperatorPoly};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn loads<'py>(py: Python<'py>, s: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (s,))
}

fn units(natural: bool) -> UnitValues {
    if natural {
        UnitValues::NATURAL
    } else {
        ORACLE_UNITS
    }
}

/// A normal-ordered polynomial in `a†` and `a` with exact coefficients.
#[pyclass(name = "Operator", module = "pyladderkit", skip_from_py_object)]
#[derive(Clone)]
pub struct PyOperator(OperatorPoly);

#[pymethods]
impl PyOperator {
    #[new]
    fn new(src: &str) -> PyResult<Self> {
        parse_operator(src).map(PyOperator).map_err(value_error)
    }

    #[staticmethod]
    fn annihilation() -> Self {
        PyOperator(OperatorPoly::annihilation())
    }

    #[staticmethod]
    fn creation() -> Self {
        PyOperator(OperatorPoly::creation())
    }

    #[staticmethod]
    fn number() -> Self {
        PyOperator(OperatorPoly::number())
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        serde_json::from_str(s).map(PyOperator).map_err(value_error)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("operator serializes")
    }

    fn dagger(&self) -> Self {
        PyOperator(self.0.dagger())
    }

    fn bar(&self) -> Self {
        PyOperator(self.0.bar())
    }

    fn check(&self) -> Self {
        PyOperator(self.0.check())
    }

    fn commutator(&self, other: &PyOperator) -> Self {
        PyOperator(self.0.commutator(&other.0))
    }

    fn natural(&self) -> Self {
        PyOperator(naturalize_operator(&self.0))
    }

    fn is_hermitian(&self) -> bool {
        self.0.is_hermitian()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn degree(&self) -> u32 {
        self.0.degree()
    }

    /// `(j, k, coefficient)` for each term `c a†^j a^k`.
    fn terms(&self) -> Vec<(u32, u32, String)> {
        self.0.terms().map(|(m, c)| (m.dag, m.ann, c.to_string())).collect()
    }

    /// Truncated Fock-space matrix, row-major.
    #[pyo3(signature = (dim, natural = true))]
    fn matrix(&self, dim: usize, natural: bool) -> PyResult<Vec<Vec<Complex64>>> {
        let m = to_matrix(&self.0, dim, &units(natural)).map_err(value_error)?;
        Ok((0..dim).map(|r| (0..dim).map(|c| m[(r, c)]).collect()).collect())
    }

    fn __add__(&self, o: &PyOperator) -> Self {
        PyOperator(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &PyOperator) -> Self {
        PyOperator(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &PyOperator) -> Self {
        PyOperator(self.0.normal_order_product(&o.0))
    }

    fn __neg__(&self) -> Self {
        PyOperator(-&self.0)
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> Self {
        PyOperator(self.0.pow(e))
    }

    fn __eq__(&self, o: &PyOperator) -> bool {
        self.0 == o.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Operator('{}')", self.0)
    }
}

fn operator_arg(v: &Bound<'_, PyAny>) -> PyResult<OperatorPoly> {
    if let Ok(op) = v.extract::<PyRef<'_, PyOperator>>() {
        return Ok(op.0.clone());
    }
    let src: String = v.extract()?;
    parse_operator(&src).map_err(value_error)
}

/// Perturbative corrections through a fixed order.
#[pyclass(name = "Expansion", module = "pyladderkit")]
pub struct PyExpansion(CoreExpansion);

#[pymethods]
impl PyExpansion {
    #[new]
    #[pyo3(signature = (v, order = 2))]
    fn new(v: &Bound<'_, PyAny>, order: usize) -> PyResult<Self> {
        let v = operator_arg(v)?;
        CoreExpansion::new(&v, order).map(PyExpansion).map_err(value_error)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    fn alphas(&self) -> Vec<PyOperator> {
        self.0.alphas().coeffs().iter().cloned().map(PyOperator).collect()
    }

    fn omegas(&self) -> Vec<PyOperator> {
        self.0.omegas().iter().cloned().map(PyOperator).collect()
    }

    /// Energy corrections `ε_m(n)` as display strings.
    fn energies(&self) -> Vec<String> {
        self.0.energies().eps.iter().map(|e| e.to_string()).collect()
    }

    /// `E_n(λ)` through the expansion order.
    #[pyo3(signature = (n, lam, natural = true))]
    fn energy(&self, n: usize, lam: f64, natural: bool) -> f64 {
        self.0.energies().partial_sum(n, lam, &units(natural))
    }

    /// Normalized `⟨O⟩` per order, as display strings.
    fn expectation(&self, o: &Bound<'_, PyAny>) -> PyResult<Vec<String>> {
        let o = operator_arg(o)?;
        Ok(self.0.expectation(&o).normalized.coeffs().iter().map(|p| p.to_string()).collect())
    }

    /// The full run report, parsed from its JSON form.
    #[pyo3(signature = (observables = Vec::new(), natural = false))]
    fn report<'py>(&self, py: Python<'py>, observables: Vec<String>, natural: bool) -> PyResult<Bound<'py, PyAny>> {
        let r = self.build(&observables, natural)?;
        loads(py, &serde_json::to_string(&r).expect("report serializes"))
    }

    #[pyo3(signature = (observables = Vec::new(), natural = false))]
    fn latex(&self, observables: Vec<String>, natural: bool) -> PyResult<String> {
        let r = self.build(&observables, natural)?;
        let mut sections = vec![Section::Alphas, Section::AlphaDaggers, Section::Nus, Section::Epsilons];
        if !observables.is_empty() {
            sections.extend([Section::Expectations, Section::Norms]);
        }
        Ok(to_latex(&r, &sections))
    }
}

impl PyExpansion {
    fn build(&self, observables: &[String], natural: bool) -> PyResult<RunReport> {
        let obs = observables
            .iter()
            .map(|s| parse_operator(s).map(|o| (s.clone(), o)).map_err(value_error))
            .collect::<PyResult<Vec<_>>>()?;
        let r = RunReport::from_expansion(&self.0, &obs);
        Ok(if natural { r.naturalized() } else { r })
    }
}

#[pyfunction]
fn parse(src: &str) -> PyResult<PyOperator> {
    PyOperator::new(src)
}

/// Numerical cross-check against a truncated Fock space.
#[pyfunction]
#[pyo3(signature = (v, order = 2, cutoff = 64, lambdas = None, relative = false))]
fn verify<'py>(
    py: Python<'py>,
    v: &Bound<'py, PyAny>,
    order: usize,
    cutoff: usize,
    lambdas: Option<Vec<f64>>,
    relative: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let v = operator_arg(v)?;
    let mut cfg = VerifyConfig { cutoff, order, relative_lambdas: relative, ..VerifyConfig::default() };
    if let Some(l) = lambdas {
        cfg.lambdas = l;
    }
    let r = py.detach(|| run_verify(&v, &cfg)).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    loads(py, &serde_json::to_string(&r).expect("report serializes"))
}

#[pymodule]
fn pyladderkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperator>()?;
    m.add_class::<PyExpansion>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
