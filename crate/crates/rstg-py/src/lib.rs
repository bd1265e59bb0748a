//! Python bindings: graph construction and sampling, reachability queries,
//! component estimates, closed-form quantities, and the sweep driver.
//!
//! Domain errors surface as ValueError, I/O problems as IOError. All
//! randomness is seeded explicitly; identical arguments give identical
//! results across processes.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use rstg::components as comp;
use rstg::experiments::{
    run_oracle_selftest, run_sweep, write_sweep_csv, ComponentMethod, SweepConfig, WindowProtocol,
};
use rstg::models::{sample_fnp, sample_fnp_sparse, sample_rstg_permutation};
use rstg::reach::{all_pairs_arrival, foremost_forest, ForestMode};
use rstg::theory;
use rstg::{RngStream, TemporalGraph, TimeLabel, TimeWindow, VertexId};

fn err(e: rstg::Error) -> PyErr {
    match e {
        rstg::Error::Io(_) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn window(a: f64, b: f64) -> PyResult<TimeWindow> {
    TimeWindow::from_f64(a, b).map_err(err)
}

fn ids(vs: Vec<u32>) -> Vec<VertexId> {
    vs.into_iter().map(VertexId).collect()
}

fn raw_ids(vs: &[VertexId]) -> Vec<u32> {
    vs.iter().map(|v| v.0).collect()
}

/// Simple temporal graph: distinct labels in [0, 1], edges sorted by label.
#[pyclass(name = "TemporalGraph")]
struct PyTemporalGraph {
    inner: TemporalGraph,
}

#[pymethods]
impl PyTemporalGraph {
    /// Build from an explicit edge list of (u, v, label) triples.
    #[new]
    fn new(n: usize, edges: Vec<(u32, u32, f64)>) -> PyResult<Self> {
        let edges = edges
            .into_iter()
            .map(|(u, v, t)| {
                let label = TimeLabel::new(t).map_err(err)?;
                rstg::TemporalEdge::new(VertexId(u), VertexId(v), label).map_err(err)
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: TemporalGraph::new(n, edges).map_err(err)?,
        })
    }

    /// Sample a random instance. `model` is "uniform" (dense complete-base
    /// sampler), "sparse" (same law, O(kept edges)), or "permutation"
    /// (binomial graph with rank labels).
    #[staticmethod]
    #[pyo3(signature = (n, p, seed, stream = 0, model = "uniform"))]
    fn sample(n: usize, p: f64, seed: u64, stream: u64, model: &str) -> PyResult<Self> {
        let mut rng = RngStream::new(seed, stream).rng();
        let inner = match model {
            "uniform" => sample_fnp(n, p, &mut rng),
            "sparse" => sample_fnp_sparse(n, p, &mut rng),
            "permutation" => sample_rstg_permutation(n, p, &mut rng),
            other => return Err(PyValueError::new_err(format!("unknown model {other:?}"))),
        }
        .map_err(err)?;
        Ok(Self { inner })
    }

    /// Parse the text form produced by `to_tgf`.
    #[staticmethod]
    fn from_tgf(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: rstg::io::from_tgf(text).map_err(err)?,
        })
    }

    fn to_tgf(&self) -> String {
        rstg::io::to_tgf(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn edges(&self) -> Vec<(u32, u32, f64)> {
        self.inner
            .edges()
            .iter()
            .map(|e| (e.u.0, e.v.0, e.label.get()))
            .collect()
    }

    /// Mirror every label t to 1 - t (exact on the sampler grid) and
    /// re-sort. Reachability reverses direction.
    fn reverse_time(&self) -> Self {
        Self {
            inner: self.inner.reverse_time(),
        }
    }

    /// Keep only edges with labels inside [a, b].
    #[pyo3(signature = (a = 0.0, b = 1.0))]
    fn restrict_window(&self, a: f64, b: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.restrict_window(window(a, b)?),
        })
    }

    /// All-pairs earliest arrivals within the label window.
    #[pyo3(signature = (a = 0.0, b = 1.0))]
    fn reach_matrix(&self, a: f64, b: f64) -> PyResult<PyReachMatrix> {
        Ok(PyReachMatrix {
            inner: all_pairs_arrival(&self.inner, window(a, b)?),
        })
    }

    /// Earliest-arrival forest grown from `sources`; returns the added
    /// edges as (k, vertex, parent, label) in acquisition order.
    #[pyo3(signature = (sources, a = 0.0, b = 1.0, mode = "sweep"))]
    fn forest(
        &self,
        sources: Vec<u32>,
        a: f64,
        b: f64,
        mode: &str,
    ) -> PyResult<Vec<(usize, u32, u32, f64)>> {
        let mode = match mode {
            "sweep" => ForestMode::Sweep,
            "literal" => ForestMode::Literal,
            other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
        };
        let (forest, _) =
            foremost_forest(&self.inner, &ids(sources), window(a, b)?, mode).map_err(err)?;
        Ok(forest
            .added()
            .iter()
            .map(|e| (e.k, e.vertex.0, e.parent.0, e.label.get()))
            .collect())
    }

    /// Certified (lower, upper, witness) for the largest open component:
    /// greedy clique below, coloring/degree bound above.
    #[pyo3(signature = (a = 0.0, b = 1.0))]
    fn open_component_bounds(&self, a: f64, b: f64) -> PyResult<(usize, usize, Vec<u32>)> {
        let est = comp::largest_open_bounds(&self.inner, window(a, b)?);
        Ok((est.size_lower(), est.upper_bound, raw_ids(&est.lower_set)))
    }

    /// Exact largest open component by branch and bound (n <= 64).
    #[pyo3(signature = (a = 0.0, b = 1.0))]
    fn open_component_exact(&self, a: f64, b: f64) -> PyResult<(usize, Vec<u32>)> {
        let est = comp::largest_open_exact(&self.inner, window(a, b)?, comp::OPEN_EXACT_CAP_DEFAULT)
            .map_err(err)?;
        Ok((est.size_lower(), raw_ids(&est.lower_set)))
    }

    /// Exact largest closed component by subset enumeration (n <= 16).
    #[pyo3(signature = (a = 0.0, b = 1.0))]
    fn closed_component_exact(&self, a: f64, b: f64) -> PyResult<(usize, Vec<u32>)> {
        let est = comp::largest_closed_exact_tiny(
            &self.inner,
            window(a, b)?,
            comp::CLOSED_EXACT_CAP_DEFAULT,
        )
        .map_err(err)?;
        Ok((est.size_lower(), raw_ids(&est.lower_set)))
    }

    /// Peeling lower bound for the largest closed component.
    #[pyo3(signature = (a = 0.0, b = 1.0))]
    fn closed_component_peel(&self, a: f64, b: f64) -> PyResult<(usize, Vec<u32>)> {
        let est = comp::largest_closed_peel(&self.inner, window(a, b)?);
        Ok((est.size_lower(), raw_ids(&est.lower_set)))
    }

    /// True when every pair of `members` mutually reaches using only
    /// vertices inside `members`.
    #[pyo3(signature = (members, a = 0.0, b = 1.0))]
    fn verify_closed(&self, members: Vec<u32>, a: f64, b: f64) -> PyResult<bool> {
        comp::verify_closed(&self.inner, &ids(members), window(a, b)?).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("TemporalGraph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

/// All-pairs reachability with earliest arrival times.
#[pyclass(name = "ReachMatrix")]
struct PyReachMatrix {
    inner: rstg::reach::ReachMatrix,
}

#[pymethods]
impl PyReachMatrix {
    fn reaches(&self, u: u32, v: u32) -> bool {
        self.inner.reaches(VertexId(u), VertexId(v))
    }

    /// Earliest arrival of a temporal path u -> v, or None; 0.0 on the
    /// diagonal.
    fn arrival(&self, u: u32, v: u32) -> Option<f64> {
        self.inner.arrival(VertexId(u), VertexId(v))
    }

    fn reach_counts(&self) -> Vec<usize> {
        self.inner.reach_counts()
    }

    fn coreach_count(&self, v: u32) -> usize {
        self.inner.coreach_count(VertexId(v))
    }

    fn is_source(&self, v: u32) -> bool {
        self.inner.is_source(VertexId(v))
    }

    fn is_temporally_connected(&self) -> bool {
        self.inner.is_temporally_connected()
    }
}

/// The four event thresholds at size n, as probabilities (multiples of
/// log n / n).
#[pyfunction]
fn thresholds(py: Python<'_>, n: usize) -> PyResult<Bound<'_, PyDict>> {
    let d = PyDict::new(py);
    for kind in theory::ThresholdKind::ALL {
        let name = match kind {
            theory::ThresholdKind::Pairwise => "pairwise",
            theory::ThresholdKind::Source => "source",
            theory::ThresholdKind::TemporalConnectivity => "temporal_connectivity",
            theory::ThresholdKind::GiantComponent => "giant_component",
        };
        d.set_item(name, theory::threshold(kind, n).map_err(err)?)?;
    }
    Ok(d)
}

/// Expected arrival sum over growth indices [s, k] at size n.
#[pyfunction]
fn arrival_sum(s: usize, k: usize, n: usize) -> PyResult<f64> {
    theory::harmonic_sum(s, k, n).map_err(err)
}

/// Logarithmic estimate of the arrival sum with its +-3/n bracket:
/// (value, lower, upper, exact_inside).
#[pyfunction]
fn arrival_sum_estimate(s: usize, k: usize, n: usize) -> PyResult<(f64, f64, f64, bool)> {
    let r = theory::harmonic_sum_estimate(s, k, n).map_err(err)?;
    Ok((r.value, r.lower, r.upper, r.satisfied))
}

/// Time for a forest grown from s seeds to cover a z fraction of n vertices.
#[pyfunction]
fn growth_time(z: f64, s: usize, n: usize) -> PyResult<f64> {
    theory::growth_time(z, s, n).map_err(err)
}

/// Run the (n, c) sweep and return the CSV text. Deterministic in
/// (arguments, seed) regardless of worker threads.
#[pyfunction]
#[pyo3(signature = (n_values, c_grid, trials, seed, protocol = "whole", method = "bounds"))]
fn sweep_csv(
    n_values: Vec<usize>,
    c_grid: Vec<f64>,
    trials: usize,
    seed: u64,
    protocol: &str,
    method: &str,
) -> PyResult<String> {
    let cfg = SweepConfig {
        n_values,
        c_grid,
        trials,
        master_seed: seed,
        window_protocol: protocol.parse::<WindowProtocol>().map_err(err)?,
        component_method: method.parse::<ComponentMethod>().map_err(err)?,
    };
    let out = run_sweep(&cfg).map_err(err)?;
    if let Some(f) = out.failures.first() {
        return Err(PyValueError::new_err(format!("trial failed: {f}")));
    }
    let mut buf = Vec::new();
    write_sweep_csv(&out.records, &mut buf).expect("write to Vec cannot fail");
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

/// Cross-validate the reachability engines on random instances; returns
/// (checks_run, failure_messages).
#[pyfunction]
#[pyo3(signature = (instances, n_lo, n_hi, seed))]
fn selftest(instances: usize, n_lo: usize, n_hi: usize, seed: u64) -> PyResult<(usize, Vec<String>)> {
    let report = run_oracle_selftest(instances, (n_lo, n_hi), seed).map_err(err)?;
    Ok((report.checks, report.failures))
}

#[pymodule]
fn rstg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTemporalGraph>()?;
    m.add_class::<PyReachMatrix>()?;
    m.add_function(wrap_pyfunction!(thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(arrival_sum, m)?)?;
    m.add_function(wrap_pyfunction!(arrival_sum_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(growth_time, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
