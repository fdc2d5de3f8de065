use hyperfit::data::{self, generate_synthetic, Supervision, SyntheticConfig};
use hyperfit::eval::{self, CvConfig, FoldMode, Method};
use hyperfit::solver;
use hyperfit::{AttributeSpace, Budget, Error, RatingScale, SolverConfig, SolverKind, Status, Variant};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    let msg = format!("[{}] {e}", e.code());
    match e {
        Error::Io { .. } => PyOSError::new_err(msg),
        _ => PyValueError::new_err(msg),
    }
}

fn parse_variant(s: &str) -> PyResult<Variant> {
    s.parse().map_err(py_err)
}

fn to_json<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("serializable")
}

fn solver_config(
    solver: &str,
    time_ms: Option<u64>,
    iterations: Option<u64>,
    seed: u64,
    n: usize,
) -> PyResult<SolverConfig> {
    let budget = match (iterations, time_ms) {
        (Some(k), _) => Budget::Iterations(k),
        (None, Some(ms)) => Budget::millis(ms),
        (None, None) => Budget::millis(if n > 200 { 2000 } else { 1000 }),
    };
    let (kind, budget) = match solver {
        "exact" => (SolverKind::BranchAndBound, Budget::Unlimited),
        "bnb" => (SolverKind::BranchAndBound, budget),
        "local" => (SolverKind::LocalSearch, budget),
        "brute" => (SolverKind::BruteForce, Budget::Unlimited),
        other => return Err(PyValueError::new_err(format!("unknown solver {other:?}"))),
    };
    Ok(SolverConfig::new(kind, budget, seed))
}

/// A single user's rated items.
#[pyclass(frozen, skip_from_py_object, module = "hyperfit")]
#[derive(Clone)]
struct Dataset {
    inner: data::Dataset,
}

#[pymethods]
impl Dataset {
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Dataset { inner: data::load_dataset(path).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Dataset { inner: data::Dataset::from_json(text, data::LoadOptions::default()).map_err(py_err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn save(&self, path: &str) -> PyResult<()> {
        data::write_dataset(path, &self.inner).map_err(py_err)
    }

    #[getter]
    fn user_id(&self) -> String {
        self.inner.user_id().to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn item_ids(&self) -> Vec<String> {
        self.inner.items().iter().map(|i| i.id.clone()).collect()
    }

    #[getter]
    fn levels(&self) -> Vec<usize> {
        self.inner.ratings().iter().map(|r| r.level).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Dataset(user_id={:?}, items={}, n={})", self.inner.user_id(), self.inner.len(), self.inner.dim())
    }
}

/// A binary or ternary user vertex.
#[pyclass(frozen, eq, skip_from_py_object, module = "hyperfit")]
#[derive(Clone, PartialEq)]
struct UserModel {
    inner: hyperfit::UserModel,
}

#[pymethods]
impl UserModel {
    #[new]
    fn new(variant: &str, coords: Vec<i8>) -> PyResult<Self> {
        Ok(UserModel { inner: hyperfit::UserModel::new(parse_variant(variant)?, coords).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_code(variant: &str, code: &str) -> PyResult<Self> {
        Ok(UserModel { inner: hyperfit::UserModel::from_code(parse_variant(variant)?, code).map_err(py_err)? })
    }

    #[getter]
    fn variant(&self) -> String {
        self.inner.variant().to_string()
    }

    #[getter]
    fn coords(&self) -> Vec<i8> {
        self.inner.coords().to_vec()
    }

    #[getter]
    fn code(&self) -> String {
        self.inner.code()
    }

    fn __repr__(&self) -> String {
        format!("UserModel({:?}, {:?})", self.inner.variant().to_string(), self.inner.code())
    }
}

#[pyclass(frozen, module = "hyperfit")]
struct FitResult {
    #[pyo3(get)]
    model: UserModel,
    /// Exact objective as `p/q`.
    #[pyo3(get)]
    objective: String,
    #[pyo3(get)]
    objective_value: f64,
    #[pyo3(get)]
    status: String,
    #[pyo3(get)]
    iterations: u64,
}

#[pymethods]
impl FitResult {
    fn __repr__(&self) -> String {
        format!("FitResult(model={:?}, objective={}, status={})", self.model.inner.code(), self.objective, self.status)
    }
}

/// Fits a model to every rated item of `dataset`.
#[pyfunction]
#[pyo3(signature = (dataset, variant = "algo1", solver = "bnb", time_ms = None, iterations = None, seed = 42))]
fn fit(
    dataset: &Dataset,
    variant: &str,
    solver: &str,
    time_ms: Option<u64>,
    iterations: Option<u64>,
    seed: u64,
) -> PyResult<FitResult> {
    let config = solver_config(solver, time_ms, iterations, seed, dataset.inner.dim())?;
    let inst = dataset.inner.full_instance().map_err(py_err)?;
    let r = config.solve(&inst, parse_variant(variant)?).map_err(py_err)?;
    let status = match r.status {
        Status::Optimal => "optimal",
        Status::TimeLimitBest => "time_limit_best",
        Status::HeuristicBest => "heuristic_best",
    };
    Ok(FitResult {
        model: UserModel { inner: r.model },
        objective: r.objective.to_string(),
        objective_value: *r.objective.numer() as f64 / *r.objective.denom() as f64,
        status: status.to_string(),
        iterations: r.iterations,
    })
}

/// Predicted star level of every item in `dataset`.
#[pyfunction]
fn predict(model: &UserModel, dataset: &Dataset) -> PyResult<Vec<usize>> {
    dataset
        .inner
        .items()
        .iter()
        .map(|it| eval::predict(&model.inner, it, dataset.inner.space()))
        .collect::<hyperfit::Result<_>>()
        .map_err(py_err)
}

fn whole_space(n: usize, s: usize) -> PyResult<AttributeSpace> {
    AttributeSpace::anonymous(n, RatingScale::whole_stars(s).map_err(py_err)?).map_err(py_err)
}

/// d-rating of star level `level` on a 1..s scale over n attributes, as `p/q`.
#[pyfunction]
fn star_to_drating(level: usize, n: usize, s: usize) -> PyResult<String> {
    Ok(hyperfit::star_to_drating(level, &whole_space(n, s)?).map_err(py_err)?.value().to_string())
}

/// Star level predicted for an item at Hamming distance `d`.
#[pyfunction]
fn distance_to_star(d: usize, n: usize, s: usize) -> PyResult<usize> {
    hyperfit::distance_to_star(d, &whole_space(n, s)?).map_err(py_err)
}

/// Synthetic user with a planted model. Returns `(dataset, planted)`.
#[pyfunction]
#[pyo3(signature = (n, items, seed = 42, s = 5, variant = "algo1", star_rounded = false, noise = 0.0))]
fn synthetic(
    n: usize,
    items: usize,
    seed: u64,
    s: usize,
    variant: &str,
    star_rounded: bool,
    noise: f64,
) -> PyResult<(Dataset, UserModel)> {
    let mut config = SyntheticConfig::new(n, items, seed);
    config.s = s;
    config.variant = parse_variant(variant)?;
    config.supervision = if star_rounded { Supervision::StarRounded } else { Supervision::DistanceExact };
    config.noise = noise;
    let (d, m) = generate_synthetic(&config).map_err(py_err)?;
    Ok((Dataset { inner: d }, UserModel { inner: m }))
}

fn fold_mode(random: bool) -> FoldMode {
    if random {
        FoldMode::Random
    } else {
        FoldMode::Contiguous
    }
}

/// Fold plan as JSON, in the format read by external baselines.
#[pyfunction]
#[pyo3(signature = (dataset, k = 10, seed = 42, random = false))]
fn make_folds_json(dataset: &Dataset, k: usize, seed: u64, random: bool) -> PyResult<String> {
    Ok(eval::make_folds(&dataset.inner, k, seed, fold_mode(random)).map_err(py_err)?.to_json())
}

/// k-fold cross-validation; returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (dataset, variant = "algo1", k = 10, seed = 42, solver = "bnb", time_ms = None, iterations = None, random = false))]
#[allow(clippy::too_many_arguments)]
fn cross_validate_json(
    dataset: &Dataset,
    variant: &str,
    k: usize,
    seed: u64,
    solver: &str,
    time_ms: Option<u64>,
    iterations: Option<u64>,
    random: bool,
) -> PyResult<String> {
    let config = CvConfig {
        k,
        seed,
        fold_mode: fold_mode(random),
        solver: solver_config(solver, time_ms, iterations, seed, dataset.inner.dim())?,
    };
    let method = Method::Algo(parse_variant(variant)?);
    let (report, _) = eval::run_cross_validation(&dataset.inner, &method, &config).map_err(py_err)?;
    Ok(to_json(&report))
}

/// F-test gated two-sample t-test on two error samples.
#[pyfunction]
#[pyo3(signature = (a, b, alpha = 0.05))]
fn compare_methods<'py>(py: Python<'py>, a: Vec<f64>, b: Vec<f64>, alpha: f64) -> PyResult<Bound<'py, PyDict>> {
    let r = eval::compare_methods(&a, &b, alpha).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("f_statistic", r.f_statistic)?;
    d.set_item("f_p_value", r.f_p_value)?;
    d.set_item("t_statistic", r.t_statistic)?;
    d.set_item("t_df", r.t_df)?;
    d.set_item("t_p_value", r.t_p_value)?;
    d.set_item("welch_used", r.welch_used)?;
    d.set_item("significant", r.significant)?;
    Ok(d)
}

/// LP-format MILP for fitting `dataset`.
#[pyfunction]
#[pyo3(signature = (dataset, variant = "algo1"))]
fn export_milp(dataset: &Dataset, variant: &str) -> PyResult<String> {
    let inst = dataset.inner.full_instance().map_err(py_err)?;
    Ok(solver::export_milp(&inst, parse_variant(variant)?).map_err(py_err)?.text)
}

#[pymodule]
#[pyo3(name = "hyperfit")]
fn hyperfit_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Dataset>()?;
    m.add_class::<UserModel>()?;
    m.add_class::<FitResult>()?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(predict, m)?)?;
    m.add_function(wrap_pyfunction!(star_to_drating, m)?)?;
    m.add_function(wrap_pyfunction!(distance_to_star, m)?)?;
    m.add_function(wrap_pyfunction!(synthetic, m)?)?;
    m.add_function(wrap_pyfunction!(make_folds_json, m)?)?;
    m.add_function(wrap_pyfunction!(cross_validate_json, m)?)?;
    m.add_function(wrap_pyfunction!(compare_methods, m)?)?;
    m.add_function(wrap_pyfunction!(export_milp, m)?)?;
    Ok(())
}
