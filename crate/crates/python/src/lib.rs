use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use cr_moduli::algebra::{parse_scalar, RatFn, Scalar};
use cr_moduli::cartan::{run_cartan, Branch};
use cr_moduli::cli;
use cr_moduli::exterior::dual_structure;
use cr_moduli::liealg::lie_pipeline;
use cr_moduli::model::{builtin_m14, builtin_m14_symbolic, parse_model, CRModel};
use cr_moduli::moduli::{self, BranchChoice, Certificate, InvariantReport, ModuliError, Pipeline};
use cr_moduli::vecfield::{build_frame, commutator_table};

create_exception!(cr_moduli, MathError, PyException, "A pipeline failed for mathematical reasons.");
create_exception!(cr_moduli, DegenerateModelError, MathError, "The model is not totally nondegenerate.");

fn math_err(e: impl ToString) -> PyErr {
    MathError::new_err(e.to_string())
}

fn moduli_err(e: ModuliError) -> PyErr {
    match e {
        ModuliError::DegenerateModel(_) => DegenerateModelError::new_err(e.to_string()),
        ModuliError::NotInFamily | ModuliError::Malformed(_) => PyValueError::new_err(e.to_string()),
        e => math_err(e),
    }
}

fn scalar(s: &str) -> PyResult<Scalar> {
    parse_scalar(s).map_err(|e| PyValueError::new_err(format!("{s}: {e}")))
}

fn branch_choice(b: &str) -> PyResult<BranchChoice> {
    match b {
        "+1" | "1" | "plus" => Ok(BranchChoice::One(Branch::Plus)),
        "-1" | "minus" => Ok(BranchChoice::One(Branch::Minus)),
        "both" => Ok(BranchChoice::Both),
        _ => Err(PyValueError::new_err(format!("branch must be +1, -1 or both, not {b}"))),
    }
}

/// Exact rational function over the Gaussian rationals.
#[pyclass(name = "Scalar", module = "cr_moduli", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyScalar(Scalar);

#[pymethods]
impl PyScalar {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        scalar(text).map(PyScalar)
    }

    fn conj(&self) -> Self {
        PyScalar(self.0.conj())
    }

    fn is_constant(&self) -> bool {
        self.0.is_constant()
    }

    fn __add__(&self, o: &PyScalar) -> Self {
        PyScalar(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &PyScalar) -> Self {
        PyScalar(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &PyScalar) -> Self {
        PyScalar(&self.0 * &o.0)
    }

    fn __truediv__(&self, o: &PyScalar) -> PyResult<Self> {
        self.0.checked_div(&o.0).map(PyScalar).map_err(|e| pyo3::exceptions::PyZeroDivisionError::new_err(e.to_string()))
    }

    fn __neg__(&self) -> Self {
        PyScalar(-&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Scalar('{}')", self.0)
    }
}

/// A CR-model given by its defining equations.
#[pyclass(name = "Model", module = "cr_moduli", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyModel(CRModel);

#[pymethods]
impl PyModel {
    /// `M(a,b)`; parameters left out stay symbolic.
    #[staticmethod]
    #[pyo3(signature = (a=None, b=None))]
    fn m14(a: Option<&str>, b: Option<&str>) -> PyResult<Self> {
        if a.is_none() && b.is_none() {
            return Ok(PyModel(builtin_m14_symbolic()));
        }
        let a = a.map(scalar).transpose()?.unwrap_or_else(|| RatFn::var(cr_moduli::algebra::var::A));
        let b = b.map(scalar).transpose()?.unwrap_or_else(|| RatFn::var(cr_moduli::algebra::var::B));
        Ok(PyModel(builtin_m14(&a, &b)))
    }

    /// Parses the model DSL.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_model(text).map(PyModel).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// `(a, b)` when the model belongs to the family.
    fn parameters(&self) -> Option<(PyScalar, PyScalar)> {
        self.0.m14_parameters().map(|(a, b)| (PyScalar(a), PyScalar(b)))
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "InvariantReport", module = "cr_moduli", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInvariantReport(InvariantReport);

#[pymethods]
impl PyInvariantReport {
    #[getter]
    fn class_tag(&self) -> &'static str {
        self.0.class.tag()
    }

    #[getter]
    fn invariant(&self) -> Option<PyScalar> {
        self.0.invariant.clone().map(PyScalar)
    }

    #[getter]
    fn pipeline(&self) -> &'static str {
        self.0.pipeline.name()
    }

    #[getter]
    fn trail(&self) -> Vec<String> {
        self.0.trail.clone()
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        InvariantReport::from_json(&v).map(PyInvariantReport).map_err(moduli_err)
    }

    fn __eq__(&self, o: &PyInvariantReport) -> bool {
        self.0 == o.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "Certificate", module = "cr_moduli", frozen)]
struct PyCertificate(Certificate);

#[pymethods]
impl PyCertificate {
    #[getter]
    fn verdict(&self) -> &'static str {
        self.0.verdict.name()
    }

    #[getter]
    fn equivalent(&self) -> bool {
        self.0.verdict == moduli::Verdict::Equivalent
    }

    #[getter]
    fn witness_chain(&self) -> Vec<String> {
        self.0.witness_chain.clone()
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }
}

/// Frame fields by role.
#[pyfunction]
fn frame(m: &PyModel) -> PyResult<Vec<(String, String)>> {
    let f = build_frame(&m.0).map_err(|e| DegenerateModelError::new_err(e.to_string()))?;
    Ok(f.roles.iter().zip(&f.fields).map(|(r, v)| (r.clone(), v.to_string())).collect())
}

#[pyfunction]
fn commutator_table_text(m: &PyModel) -> PyResult<String> {
    let f = build_frame(&m.0).map_err(|e| DegenerateModelError::new_err(e.to_string()))?;
    Ok(commutator_table(&f).map_err(math_err)?.to_string())
}

/// Structure equations of the coframe dual to the frame.
#[pyfunction]
fn coframe_text(m: &PyModel) -> PyResult<String> {
    let f = build_frame(&m.0).map_err(|e| DegenerateModelError::new_err(e.to_string()))?;
    let t = commutator_table(&f).map_err(math_err)?;
    Ok(dual_structure(&f, &t).map_err(math_err)?.render_text())
}

/// Stage dumps of the Cartan run as a JSON string.
#[pyfunction]
#[pyo3(signature = (m, branch="+1"))]
fn cartan_json(py: Python<'_>, m: &PyModel, branch: &str) -> PyResult<String> {
    let br = match branch_choice(branch)? {
        BranchChoice::One(b) => b,
        BranchChoice::Both => return Err(PyValueError::new_err("choose a single branch")),
    };
    let model = m.0.clone();
    let run = py.detach(move || run_cartan(&model, br)).map_err(math_err)?;
    Ok(run.to_json().to_string())
}

/// Coefficient left by the Lie pipeline on `g(r, b)`.
#[pyfunction]
fn lie_coefficient(r: &str, b: &str) -> PyResult<Option<PyScalar>> {
    let run = lie_pipeline(&scalar(r)?, &scalar(b)?).map_err(math_err)?;
    Ok(run.coefficient.map(PyScalar))
}

#[pyfunction]
#[pyo3(signature = (m, pipeline="cartan", branch="+1"))]
fn invariant(py: Python<'_>, m: &PyModel, pipeline: &str, branch: &str) -> PyResult<PyInvariantReport> {
    let choice = branch_choice(branch)?;
    let model = m.0.clone();
    let rep = match pipeline {
        "both" => py.detach(move || moduli::invariant_checked(&model, choice)),
        "cartan" => py.detach(move || moduli::cartan_invariant(&model, choice)),
        other => {
            let p = Pipeline::from_name(other).ok_or_else(|| PyValueError::new_err(format!("unknown pipeline {other}")))?;
            py.detach(move || moduli::invariant(&model, p))
        }
    };
    rep.map(PyInvariantReport).map_err(moduli_err)
}

#[pyfunction]
fn decide_equivalence(py: Python<'_>, m1: &PyModel, m2: &PyModel) -> PyResult<PyCertificate> {
    let (a, b) = (m1.0.clone(), m2.0.clone());
    py.detach(move || moduli::decide_equivalence(&a, &b)).map(PyCertificate).map_err(moduli_err)
}

/// Oracle report as a JSON string.
#[pyfunction]
#[pyo3(signature = (m, samples=50, seed=None))]
fn invariance_oracle(py: Python<'_>, m: &PyModel, samples: usize, seed: Option<u64>) -> PyResult<String> {
    let seed = seed.unwrap_or_else(|| moduli::seed_from_env(0));
    let model = m.0.clone();
    let rep = py.detach(move || moduli::invariance_oracle(&model, samples, seed)).map_err(moduli_err)?;
    Ok(rep.to_json().to_string())
}

/// Runs the command-line front end; returns `(status, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut argv = vec!["cr-moduli".to_string()];
    argv.extend(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

#[pymodule]
#[pyo3(name = "cr_moduli")]
fn cr_moduli_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalar>()?;
    m.add_class::<PyModel>()?;
    m.add_class::<PyInvariantReport>()?;
    m.add_class::<PyCertificate>()?;
    m.add("MathError", m.py().get_type::<MathError>())?;
    m.add("DegenerateModelError", m.py().get_type::<DegenerateModelError>())?;
    m.add_function(wrap_pyfunction!(frame, m)?)?;
    m.add_function(wrap_pyfunction!(commutator_table_text, m)?)?;
    m.add_function(wrap_pyfunction!(coframe_text, m)?)?;
    m.add_function(wrap_pyfunction!(cartan_json, m)?)?;
    m.add_function(wrap_pyfunction!(lie_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(invariant, m)?)?;
    m.add_function(wrap_pyfunction!(decide_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(invariance_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
