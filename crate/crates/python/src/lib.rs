//! Python bindings for `sdual-core`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sdual_core::cli::formats;
use sdual_core::duality::{
    build_dual, power_order, truncated_power_with_cap, verify_duality, DualOptions,
    DEFAULT_POWER_CAP,
};
use sdual_core::hom::{self, find_homomorphism_with, SearchLimits};
use sdual_core::{sparsity, Error};

fn err(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } | Error::Precondition(_) | Error::Usage(_) => {
            PyValueError::new_err(e.to_string())
        }
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

fn limits(node_limit: Option<u64>) -> SearchLimits {
    node_limit.map_or_else(SearchLimits::default, SearchLimits::nodes)
}

#[pyclass(frozen, from_py_object, module = "sdual")]
#[derive(Clone)]
struct Graph(sdual_core::Graph);

#[pymethods]
impl Graph {
    #[new]
    #[pyo3(signature = (n, edges=Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        sdual_core::Graph::from_edges(n, &edges)
            .map(Graph)
            .map_err(err)
    }

    #[staticmethod]
    fn from_graph6(s: &str) -> PyResult<Self> {
        formats::parse_graph6(s).map(Graph).map_err(err)
    }

    fn graph6(&self) -> String {
        formats::to_graph6(&self.0)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.0.n() && v < self.0.n() && self.0.has_edge(u, v)
    }

    fn __len__(&self) -> usize {
        self.0.n()
    }

    fn __eq__(&self, other: &Graph) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.0.n(), self.0.edge_count())
    }
}

/// Tree-depth and the parent array of a witnessing forest.
#[pyfunction]
fn tree_depth(g: &Graph) -> (usize, Vec<Option<usize>>) {
    let cert = sparsity::tree_depth(&g.0);
    (cert.value, cert.forest.parents().to_vec())
}

/// `∇_r(G)` as `(numerator, denominator, exact)`.
#[pyfunction]
fn grad(g: &Graph, r: usize) -> (i64, i64, bool) {
    let res = sparsity::grad_r(&g.0, r);
    (*res.value.numer(), *res.value.denom(), res.exact)
}

/// A homomorphism image vector, `None` if there is none.
#[pyfunction]
#[pyo3(signature = (g, h, node_limit=None))]
fn find_homomorphism(
    g: &Graph,
    h: &Graph,
    node_limit: Option<u64>,
) -> PyResult<Option<Vec<usize>>> {
    match find_homomorphism_with(&g.0, &h.0, limits(node_limit)) {
        hom::HomOutcome::Found(f) => Ok(Some(f.image)),
        hom::HomOutcome::NotFound => Ok(None),
        hom::HomOutcome::Budget => Err(PyRuntimeError::new_err("search budget exhausted")),
    }
}

#[pyfunction]
#[pyo3(name = "core")]
fn core_of(g: &Graph) -> PyResult<Graph> {
    hom::core(&g.0).map(|c| Graph(c.graph)).map_err(err)
}

#[pyfunction]
fn truncated_power_order(u: usize, h: usize, p: usize) -> Option<u128> {
    power_order(u, h, p)
}

/// Builds the truncated power and returns it with the color projection.
#[pyfunction]
#[pyo3(signature = (u, h, p, cap=DEFAULT_POWER_CAP))]
fn truncated_power(u: &Graph, h: &Graph, p: usize, cap: usize) -> PyResult<(Graph, Vec<usize>)> {
    let tp = truncated_power_with_cap(&u.0, &h.0, p, cap).map_err(err)?;
    Ok((Graph(tp.graph), tp.alpha.image))
}

/// Builds a dual for `Forb(forbidden)` over the corpus and verifies it.
/// Returns the dual, `p`, the color count and the verdict.
#[pyfunction]
#[pyo3(signature = (corpus, forbidden, p_override=None, node_limit=None))]
fn dual(
    corpus: Vec<Graph>,
    forbidden: Vec<Graph>,
    p_override: Option<usize>,
    node_limit: Option<u64>,
) -> PyResult<(Graph, usize, usize, bool)> {
    let corpus: Vec<_> = corpus.into_iter().map(|g| g.0).collect();
    let forbidden: Vec<_> = forbidden.into_iter().map(|g| g.0).collect();
    let opts = DualOptions {
        p_override,
        limits: limits(node_limit),
        ..DualOptions::default()
    };
    let built = build_dual(&corpus, &forbidden, &opts).map_err(err)?;
    let report =
        verify_duality(&corpus, &forbidden, &built.power.graph, opts.limits).map_err(err)?;
    let prov = &built.provenance;
    Ok((Graph(built.power.graph), prov.p, prov.n_colors, report.pass))
}

#[pymodule]
fn sdual(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(tree_depth, m)?)?;
    m.add_function(wrap_pyfunction!(grad, m)?)?;
    m.add_function(wrap_pyfunction!(find_homomorphism, m)?)?;
    m.add_function(wrap_pyfunction!(core_of, m)?)?;
    m.add_function(wrap_pyfunction!(truncated_power_order, m)?)?;
    m.add_function(wrap_pyfunction!(truncated_power, m)?)?;
    m.add_function(wrap_pyfunction!(dual, m)?)?;
    Ok(())
}
