//! Python bindings: the algebra kernel, split preparation, training,
//! checkpoints and leave-one-out evaluation, driven in-process.

use std::collections::HashMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use hypercf::data;
use hypercf::eval;
use hypercf::model::{Model, ModelKind};
use hypercf::rng;
use hypercf::training::{self, OptimizerKind, TrainConfig};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn io_err(e: impl std::fmt::Display) -> PyErr {
    PyIOError::new_err(e.to_string())
}

/// Complex scalar `re + im*i`.
#[pyclass(name = "Complex", from_py_object)]
#[derive(Clone, Copy)]
struct PyComplex {
    inner: hypercf::Complex,
}

#[pymethods]
impl PyComplex {
    #[new]
    fn new(re: f64, im: f64) -> Self {
        Self { inner: hypercf::Complex::new(re, im) }
    }

    #[getter]
    fn re(&self) -> f64 {
        self.inner.re
    }

    #[getter]
    fn im(&self) -> f64 {
        self.inner.im
    }

    /// Complex multiplication (commutative).
    fn mul(&self, other: &PyComplex) -> PyComplex {
        PyComplex { inner: self.inner * other.inner }
    }

    fn conj(&self) -> PyComplex {
        PyComplex { inner: self.inner.conj() }
    }

    fn split_sigmoid(&self) -> PyComplex {
        PyComplex { inner: self.inner.split_sigmoid() }
    }

    fn __repr__(&self) -> String {
        format!("Complex({}, {})", self.inner.re, self.inner.im)
    }
}

/// Quaternion scalar `a + b*i + c*j + d*k`.
#[pyclass(name = "Quaternion", from_py_object)]
#[derive(Clone, Copy)]
struct PyQuaternion {
    inner: hypercf::Quaternion,
}

#[pymethods]
impl PyQuaternion {
    #[new]
    fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { inner: hypercf::Quaternion::new(a, b, c, d) }
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c
    }

    #[getter]
    fn d(&self) -> f64 {
        self.inner.d
    }

    /// Hamilton product (not commutative).
    fn hamilton(&self, other: &PyQuaternion) -> PyQuaternion {
        PyQuaternion { inner: self.inner.hamilton(other.inner) }
    }

    fn conj(&self) -> PyQuaternion {
        PyQuaternion { inner: self.inner.conj() }
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn split_sigmoid(&self) -> PyQuaternion {
        PyQuaternion { inner: self.inner.split_sigmoid() }
    }

    fn components(&self) -> (f64, f64, f64, f64) {
        (self.inner.a, self.inner.b, self.inner.c, self.inner.d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Quaternion({}, {}, {}, {})",
            self.inner.a, self.inner.b, self.inner.c, self.inner.d
        )
    }
}

/// Quaternion-aware table init: four rows x dim matrices (a/b/c/d parts).
#[pyfunction]
fn quaternion_init(rows: usize, dim: usize, seed: u64) -> PyResult<Vec<Vec<Vec<f64>>>> {
    let parts =
        hypercf::hypercomplex::quaternion_init(rows, dim, &mut rng::stream(seed, rng::STREAM_USER_INIT))
            .map_err(value_err)?;
    Ok(parts
        .iter()
        .map(|m| (0..m.rows()).map(|r| m.row(r).to_vec()).collect())
        .collect())
}

/// Prepared leave-one-out split: training positives plus, per user, one
/// held-out item and its 200 fixed evaluation negatives.
#[pyclass(name = "Split")]
struct PySplit {
    inner: data::Split,
}

#[pymethods]
impl PySplit {
    /// Ingest a raw interaction log and build the split.
    #[staticmethod]
    #[pyo3(signature = (path, *, delimiter="\t", header=false, with_timestamp=true, min_interactions=5, seed=42))]
    fn prepare(
        path: PathBuf,
        delimiter: &str,
        header: bool,
        with_timestamp: bool,
        min_interactions: usize,
        seed: u64,
    ) -> PyResult<Self> {
        let delim = delimiter.as_bytes().first().copied().unwrap_or(b'\t');
        let mut opts = if with_timestamp {
            data::FormatOptions::default()
        } else {
            data::FormatOptions::without_timestamp()
        };
        opts.delimiter = delim;
        opts.has_header = header;
        let loaded = data::load_interactions(&path, &opts).map_err(io_err)?;
        let dataset = data::build_dataset(&loaded.interactions, min_interactions).map_err(value_err)?;
        let mut split = data::leave_one_out(&dataset, seed).map_err(value_err)?;
        data::sample_eval_negatives(&dataset, &mut split, seed).map_err(value_err)?;
        Ok(Self { inner: split })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let (split, _seed) = data::read_split(&path).map_err(io_err)?;
        Ok(Self { inner: split })
    }

    fn save(&self, path: PathBuf, seed: u64) -> PyResult<()> {
        data::write_split(&path, &self.inner, seed).map_err(io_err)
    }

    #[getter]
    fn num_users(&self) -> usize {
        self.inner.num_users()
    }

    #[getter]
    fn num_items(&self) -> u32 {
        self.inner.num_items()
    }

    fn test_item(&self, user: u32) -> PyResult<u32> {
        self.inner
            .test_items
            .get(user as usize)
            .copied()
            .ok_or_else(|| value_err(format!("user {user} out of range")))
    }

    fn train_positives(&self, user: u32) -> PyResult<Vec<u32>> {
        if (user as usize) >= self.inner.num_users() {
            return Err(value_err(format!("user {user} out of range")));
        }
        Ok(self.inner.train.positives(user).to_vec())
    }

    fn eval_negatives(&self, user: u32) -> PyResult<Vec<u32>> {
        self.inner
            .eval_negatives
            .get(user as usize)
            .cloned()
            .ok_or_else(|| value_err(format!("user {user} out of range")))
    }
}

/// A trained (or freshly initialized) scoring model.
#[pyclass(name = "Model")]
struct PyModel {
    inner: Model,
}

fn epoch_dicts(trace: &[training::EpochRecord]) -> Vec<HashMap<String, f64>> {
    trace
        .iter()
        .map(|r| {
            let mut d = HashMap::new();
            d.insert("epoch".to_string(), r.epoch as f64);
            d.insert("mean_loss".to_string(), r.mean_loss);
            d.insert("elapsed_seconds".to_string(), r.elapsed_seconds);
            if let Some(v) = r.val_hr10 {
                d.insert("val_hr10".to_string(), v);
            }
            d
        })
        .collect()
}

#[pymethods]
impl PyModel {
    /// Train a fresh model on the split's training positives.
    #[staticmethod]
    #[pyo3(signature = (split, kind, dim, *, lr=0.001, l2=0.001, epochs=30, batch_size=256, neg_ratio=4, optimizer="adam", seed=42, validate=false))]
    #[allow(clippy::too_many_arguments)]
    fn train(
        split: &PySplit,
        kind: &str,
        dim: usize,
        lr: f64,
        l2: f64,
        epochs: usize,
        batch_size: usize,
        neg_ratio: usize,
        optimizer: &str,
        seed: u64,
        validate: bool,
    ) -> PyResult<(Self, Vec<HashMap<String, f64>>)> {
        let kind: ModelKind = kind.parse().map_err(value_err)?;
        let optimizer: OptimizerKind = optimizer.parse().map_err(value_err)?;
        let cfg = TrainConfig {
            learning_rate: lr,
            l2_lambda: l2,
            batch_size,
            epochs,
            neg_ratio,
            optimizer,
            seed,
        };
        let outcome = training::train(
            kind,
            dim,
            &split.inner.train,
            &cfg,
            validate.then_some(&split.inner),
        )
        .map_err(value_err)?;
        Ok((Self { inner: outcome.model }, epoch_dicts(&outcome.trace)))
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Self { inner: Model::load(&path).map_err(io_err)? })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        self.inner.save(&path).map_err(io_err)
    }

    #[getter]
    fn kind(&self) -> String {
        self.inner.kind().to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn num_users(&self) -> usize {
        self.inner.table.num_users()
    }

    #[getter]
    fn num_items(&self) -> usize {
        self.inner.table.num_items()
    }

    /// Recommendation score in (0, 1).
    fn predict(&self, user: u32, item: u32) -> PyResult<f64> {
        self.inner.predict(user, item).map_err(value_err)
    }

    /// Pre-activation score components (1, 2 or 4 values).
    fn score_components(&self, user: u32, item: u32) -> PyResult<Vec<f64>> {
        let comps = self.inner.score_components(user, item).map_err(value_err)?;
        let (vals, n) = comps.to_array();
        Ok(vals[..n].to_vec())
    }
}

/// Rank every user's 201-candidate list and average HR@k / NDCG@k.
#[pyfunction]
#[pyo3(signature = (model, split, ks=None))]
fn evaluate(
    model: &PyModel,
    split: &PySplit,
    ks: Option<Vec<usize>>,
) -> PyResult<HashMap<String, Py<PyAny>>> {
    let ks = ks.unwrap_or_else(|| vec![5, 10, 20]);
    let report = eval::evaluate(&model.inner, &split.inner, &ks).map_err(value_err)?;
    Python::attach(|py| {
        let mut out: HashMap<String, Py<PyAny>> = HashMap::new();
        out.insert("k".into(), report.ks.into_pyobject(py)?.unbind());
        out.insert("hr".into(), report.hr.into_pyobject(py)?.unbind());
        out.insert("ndcg".into(), report.ndcg.into_pyobject(py)?.unbind());
        out.insert("users".into(), report.users.into_pyobject(py)?.unbind().into());
        out.insert(
            "test_seconds".into(),
            report.test_seconds.into_pyobject(py)?.unbind().into(),
        );
        Ok(out)
    })
}

/// Fraction of ranks at or below k.
#[pyfunction]
fn hr_at_k(ranks: Vec<u32>, k: usize) -> PyResult<f64> {
    eval::hr_at_k(&ranks, k).map_err(value_err)
}

/// Mean 1/log2(rank+1) gain for ranks at or below k.
#[pyfunction]
fn ndcg_at_k(ranks: Vec<u32>, k: usize) -> PyResult<f64> {
    eval::ndcg_at_k(&ranks, k).map_err(value_err)
}

#[pymodule]
fn hypercf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComplex>()?;
    m.add_class::<PyQuaternion>()?;
    m.add_class::<PySplit>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(quaternion_init, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(hr_at_k, m)?)?;
    m.add_function(wrap_pyfunction!(ndcg_at_k, m)?)?;
    Ok(())
}
