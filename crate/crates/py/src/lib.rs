//! Python bindings, importable as `pygsedf`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use gsedf::feasibility::K1Bound;
use gsedf::verify::default_spectral_tol;

fn to_py(e: gsedf::Error) -> PyErr {
    match e {
        gsedf::Error::TooLarge { .. } | gsedf::Error::Unsupported(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn tuple(v: u64, ks: Vec<u64>, lambdas: Option<Vec<u64>>) -> PyResult<gsedf::ParamTuple> {
    gsedf::ParamTuple::new(v, ks, lambdas).map_err(to_py)
}

#[pyclass(name = "AbelianGroup", module = "pygsedf", frozen)]
#[derive(Clone)]
struct PyGroup(gsedf::AbelianGroup);

#[pymethods]
impl PyGroup {
    #[new]
    fn new(factors: Vec<u64>) -> PyResult<Self> {
        gsedf::AbelianGroup::new(&factors).map(PyGroup).map_err(to_py)
    }

    #[getter]
    fn factors(&self) -> Vec<u64> {
        self.0.factors().to_vec()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.0.order()
    }

    fn element(&self, rank: usize) -> PyResult<Vec<u64>> {
        if rank >= self.0.len() {
            return Err(PyValueError::new_err(format!("rank {rank} out of range")));
        }
        Ok(self.0.element(rank).0)
    }

    fn __repr__(&self) -> String {
        format!("AbelianGroup({:?})", self.0.factors())
    }
}

#[pyclass(name = "DiffFamily", module = "pygsedf", frozen)]
#[derive(Clone)]
struct PyFamily(gsedf::DiffFamily);

#[pymethods]
impl PyFamily {
    /// Builds a family from element ranks.
    #[new]
    fn new(group: &PyGroup, sets: Vec<Vec<usize>>, lambdas: Vec<u64>) -> PyResult<Self> {
        gsedf::DiffFamily::from_ranks(group.0.clone(), &sets, lambdas).map(PyFamily).map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        gsedf::DiffFamily::from_json(text).map(PyFamily).map_err(to_py)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn group(&self) -> PyGroup {
        PyGroup(self.0.group().clone())
    }

    #[getter]
    fn v(&self) -> u64 {
        self.0.v()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn ks(&self) -> Vec<u64> {
        self.0.ks()
    }

    #[getter]
    fn lambdas(&self) -> Vec<u64> {
        self.0.lambdas().to_vec()
    }

    /// Sets as lists of element ranks.
    #[getter]
    fn sets(&self) -> Vec<Vec<usize>> {
        self.0.set_ranks()
    }

    fn __repr__(&self) -> String {
        format!("DiffFamily(v={}, ks={:?}, lambdas={:?})", self.0.v(), self.0.ks(), self.0.lambdas())
    }
}

/// Builds a family from a recipe name (`c1`, `paley_odd`, ...) and arguments.
#[pyfunction]
#[pyo3(signature = (name, args, base=None))]
fn construct(name: &str, args: Vec<u64>, base: Option<&PyFamily>) -> PyResult<PyFamily> {
    let recipe = gsedf::ConstructionRecipe::new(name.parse().map_err(to_py)?, args).map_err(to_py)?;
    recipe.build(base.map(|b| &b.0)).map(PyFamily).map_err(to_py)
}

#[pyfunction]
fn verify_gsedf(f: &PyFamily) -> bool {
    gsedf::verify_gsedf(&f.0).is_gsedf
}

/// The full verification report as JSON.
#[pyfunction]
fn verify_report(f: &PyFamily) -> String {
    serde_json::to_string(&gsedf::verify_gsedf(&f.0)).expect("serializable")
}

#[pyfunction]
#[pyo3(signature = (f, tol=None))]
fn spectral_verify(f: &PyFamily, tol: Option<f64>) -> PyResult<bool> {
    gsedf::spectral_verify(&f.0, tol.unwrap_or_else(|| default_spectral_tol(&f.0))).map_err(to_py)
}

#[pyfunction]
fn coset_check(f: &PyFamily) -> PyResult<bool> {
    gsedf::coset_check(&f.0).map_err(to_py)
}

#[pyfunction]
fn partition_equivalence_check(f: &PyFamily) -> PyResult<bool> {
    gsedf::partition_equivalence_check(&f.0).map_err(to_py)
}

#[pyfunction]
fn counting_solve(v: u64, ks: Vec<u64>) -> Option<Vec<u64>> {
    gsedf::counting_solve(v, &ks)
}

/// `(status, reason)` from the nonexistence filters.
#[pyfunction]
#[pyo3(signature = (v, ks, lambdas=None))]
fn rule_out(v: u64, ks: Vec<u64>, lambdas: Option<Vec<u64>>) -> PyResult<(String, String)> {
    let r = gsedf::rule_out(&tuple(v, ks, lambdas)?);
    Ok((r.status.as_str().to_string(), r.reason))
}

/// `(status, reason)` from filters, known constructions and the catalog.
#[pyfunction]
#[pyo3(signature = (v, ks, lambdas=None))]
fn classify(v: u64, ks: Vec<u64>, lambdas: Option<Vec<u64>>) -> PyResult<(String, String)> {
    let r = gsedf::classify(&tuple(v, ks, lambdas)?);
    Ok((r.status.as_str().to_string(), r.reason))
}

/// Counting-feasible tuples as `(v, ks, lambdas)`.
#[pyfunction]
#[pyo3(signature = (v_max, m, lambda_min=1, sum_k_eq_v=false, k1_above_sqrt_v=false, strictly_increasing=false))]
fn enumerate_params(
    v_max: u64,
    m: usize,
    lambda_min: u64,
    sum_k_eq_v: bool,
    k1_above_sqrt_v: bool,
    strictly_increasing: bool,
) -> PyResult<Vec<(u64, Vec<u64>, Vec<u64>)>> {
    let c = gsedf::Constraints {
        lambda_min,
        sum_k_eq_v,
        k1_bound: if k1_above_sqrt_v { K1Bound::AboveSqrtV } else { K1Bound::Any },
        strictly_increasing,
    };
    Ok(gsedf::enumerate_params(v_max, m, &c)
        .map_err(to_py)?
        .into_iter()
        .map(|t| (t.v, t.ks, t.lambdas.unwrap_or_default()))
        .collect())
}

/// Search outcome(s) as JSON: one object with `group`, else a list over all
/// groups of order `v`.
#[pyfunction]
#[pyo3(signature = (v, ks, lambdas=None, group=None, budget=gsedf::search::DEFAULT_BUDGET, workers=0))]
fn search(
    py: Python<'_>,
    v: u64,
    ks: Vec<u64>,
    lambdas: Option<Vec<u64>>,
    group: Option<&PyGroup>,
    budget: u64,
    workers: usize,
) -> PyResult<String> {
    let t = tuple(v, ks, lambdas)?;
    let cfg = gsedf::SearchConfig { budget, workers };
    let g = group.map(|g| g.0.clone());
    py.allow_threads(|| match g {
        Some(g) => gsedf::exhaustive_search(&g, &t, &cfg).map(|o| serde_json::to_string(&o).expect("serializable")),
        None => gsedf::search_all_groups(&t, &cfg).map(|o| serde_json::to_string(&o).expect("serializable")),
    })
    .map_err(to_py)
}

/// Decomposition text in `edges` or `dot` format.
#[pyfunction]
#[pyo3(signature = (f, format="edges"))]
fn decompose(f: &PyFamily, format: &str) -> PyResult<String> {
    let format: gsedf::EmitFormat = format.parse().map_err(to_py)?;
    let d = gsedf::decompose(&f.0).map_err(to_py)?;
    Ok(gsedf::emit(&d, format))
}

#[pyfunction]
fn verify_decomposition_of(f: &PyFamily) -> PyResult<bool> {
    Ok(gsedf::verify_decomposition(&gsedf::decompose(&f.0).map_err(to_py)?))
}

/// Alpha scan report as JSON.
#[pyfunction]
#[pyo3(signature = (lambdas, k, c_max=gsedf::feasibility::DEFAULT_C_MAX, grid=gsedf::feasibility::DEFAULT_GRID))]
fn alpha_scan(lambdas: Vec<u64>, k: u64, c_max: f64, grid: usize) -> PyResult<String> {
    let r = gsedf::alpha_scan(&lambdas, k, c_max, grid).map_err(to_py)?;
    Ok(serde_json::to_string(&r).expect("serializable"))
}

#[pyfunction]
fn abelian_groups_of_order(v: u64) -> PyResult<Vec<PyGroup>> {
    Ok(gsedf::abelian_groups_of_order(v).map_err(to_py)?.into_iter().map(PyGroup).collect())
}

#[pymodule]
fn pygsedf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyFamily>()?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(verify_gsedf, m)?)?;
    m.add_function(wrap_pyfunction!(verify_report, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_verify, m)?)?;
    m.add_function(wrap_pyfunction!(coset_check, m)?)?;
    m.add_function(wrap_pyfunction!(partition_equivalence_check, m)?)?;
    m.add_function(wrap_pyfunction!(counting_solve, m)?)?;
    m.add_function(wrap_pyfunction!(rule_out, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_params, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(verify_decomposition_of, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_scan, m)?)?;
    m.add_function(wrap_pyfunction!(abelian_groups_of_order, m)?)?;
    Ok(())
}
