//! Python bindings: metric spaces, relations and their distortion algebra,
//! exact Gromov-Hausdorff distances with certificates, finite topologies,
//! and the semicontinuity deciders.

use ghlab_core::family::{FamilyFilter, FamilyTag};
use ghlab_core::gh::{self, GhOutcome, SolverConfig};
use ghlab_core::metric::{FiniteMetricSpace, PointMetric};
use ghlab_core::relation;
use ghlab_core::sampling;
use ghlab_core::topology::{self, FiniteTopology, SetValuedMap};
use pyo3::exceptions::{PyIndexError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::sync::Arc;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_family(name: &str) -> PyResult<FamilyFilter> {
    let tag: FamilyTag = name.parse().map_err(value_err)?;
    FamilyFilter::for_tag(&tag)
        .ok_or_else(|| PyValueError::new_err(format!("no built-in filter for family {name:?}")))
}

/// A finite metric space with validated distances.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct MetricSpace {
    inner: Arc<FiniteMetricSpace>,
}

#[pymethods]
impl MetricSpace {
    #[new]
    #[pyo3(signature = (dist, labels=None))]
    fn new(dist: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let space = match labels {
            Some(labels) => FiniteMetricSpace::new(labels, dist),
            None => FiniteMetricSpace::from_matrix(dist),
        }
        .map_err(value_err)?;
        Ok(MetricSpace { inner: Arc::new(space) })
    }

    /// The one-point space.
    #[staticmethod]
    fn delta1() -> Self {
        MetricSpace { inner: Arc::new(FiniteMetricSpace::delta1()) }
    }

    /// Builds a space from coordinate vectors ("euclidean", "chebyshev" or
    /// "manhattan").
    #[staticmethod]
    #[pyo3(signature = (points, metric="euclidean"))]
    fn from_points(points: Vec<Vec<f64>>, metric: &str) -> PyResult<Self> {
        let metric: PointMetric = metric.parse().map_err(value_err)?;
        let space = FiniteMetricSpace::from_points(&points, metric).map_err(value_err)?;
        Ok(MetricSpace { inner: Arc::new(space) })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("MetricSpace({} points, diameter {})", self.inner.len(), self.inner.diameter())
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn dist(&self, i: usize, j: usize) -> PyResult<f64> {
        let n = self.inner.len();
        if i >= n || j >= n {
            return Err(PyIndexError::new_err(format!("point index out of range for {n} points")));
        }
        Ok(self.inner.dist(i, j))
    }

    fn matrix(&self) -> Vec<Vec<f64>> {
        self.inner.matrix()
    }

    fn diameter(&self) -> f64 {
        self.inner.diameter()
    }

    fn min_positive_distance(&self) -> Option<f64> {
        self.inner.min_positive_distance()
    }

    /// All distances multiplied by a nonnegative factor; zero collapses to
    /// the one-point space.
    fn scale(&self, factor: f64) -> PyResult<Self> {
        if factor < 0.0 {
            return Err(PyValueError::new_err("scale factor must be nonnegative"));
        }
        Ok(MetricSpace { inner: Arc::new(self.inner.scale(factor)) })
    }

    /// The sub-space on the given point indices.
    fn restriction(&self, members: Vec<usize>) -> PyResult<Self> {
        let space = self.inner.restriction(&members).map_err(value_err)?;
        Ok(MetricSpace { inner: Arc::new(space) })
    }

    /// |xA|: distance from a point to a nonempty subset.
    fn point_set_distance(&self, x: usize, members: Vec<usize>) -> PyResult<f64> {
        if x >= self.inner.len() {
            return Err(PyIndexError::new_err("point index out of range"));
        }
        let a = self.inner.subset(&members).map_err(value_err)?;
        Ok(a.point_distance(x))
    }

    /// |AB|: distance between two nonempty subsets.
    fn set_set_distance(&self, a: Vec<usize>, b: Vec<usize>) -> PyResult<f64> {
        let a = self.inner.subset(&a).map_err(value_err)?;
        let b = self.inner.subset(&b).map_err(value_err)?;
        Ok(a.set_distance(&b))
    }

    /// Open r-neighborhood of a subset, as point indices.
    fn open_neighborhood(&self, members: Vec<usize>, r: f64) -> PyResult<Vec<usize>> {
        let a = self.inner.subset(&members).map_err(value_err)?;
        Ok(a.open_neighborhood(r).map_err(value_err)?.members().to_vec())
    }

    /// Closed s-neighborhood of a subset, as point indices.
    fn closed_neighborhood(&self, members: Vec<usize>, s: f64) -> PyResult<Vec<usize>> {
        let a = self.inner.subset(&members).map_err(value_err)?;
        Ok(a.closed_neighborhood(s).map_err(value_err)?.members().to_vec())
    }

    /// Hausdorff distance between two nonempty subsets.
    fn hausdorff(&self, a: Vec<usize>, b: Vec<usize>) -> PyResult<f64> {
        let a = self.inner.subset(&a).map_err(value_err)?;
        let b = self.inner.subset(&b).map_err(value_err)?;
        Ok(a.hausdorff(&b))
    }
}

/// A nonempty relation between two metric spaces, stored by its cells.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Relation {
    inner: relation::Relation,
}

#[pymethods]
impl Relation {
    #[new]
    fn new(x: &MetricSpace, y: &MetricSpace, cells: Vec<(usize, usize)>) -> PyResult<Self> {
        let rel = relation::Relation::from_cells(x.inner.clone(), y.inner.clone(), &cells)
            .map_err(value_err)?;
        Ok(Relation { inner: rel })
    }

    /// The full relation X × Y.
    #[staticmethod]
    fn full(x: &MetricSpace, y: &MetricSpace) -> Self {
        Relation {
            inner: relation::Correspondence::full(x.inner.clone(), y.inner.clone())
                .into_relation(),
        }
    }

    /// The graph {(i, i)} between spaces of equal size.
    #[staticmethod]
    fn diagonal(x: &MetricSpace, y: &MetricSpace) -> PyResult<Self> {
        let corr = relation::Correspondence::diagonal(x.inner.clone(), y.inner.clone())
            .map_err(value_err)?;
        Ok(Relation { inner: corr.into_relation() })
    }

    fn __repr__(&self) -> String {
        format!(
            "Relation({}x{}, {} cells)",
            self.inner.source().len(),
            self.inner.target().len(),
            self.inner.cells().len()
        )
    }

    fn cells(&self) -> Vec<(usize, usize)> {
        self.inner.cells()
    }

    fn source(&self) -> MetricSpace {
        MetricSpace { inner: self.inner.source().clone() }
    }

    fn target(&self) -> MetricSpace {
        MetricSpace { inner: self.inner.target().clone() }
    }

    /// dis σ: the largest mismatch | |xx'| - |yy'| | over pairs of cells.
    fn distortion(&self) -> f64 {
        self.inner.distortion()
    }

    fn inverse(&self) -> Self {
        Relation { inner: self.inner.inverse() }
    }

    fn compose(&self, other: &Relation) -> PyResult<Self> {
        Ok(Relation { inner: self.inner.compose(&other.inner).map_err(value_err)? })
    }

    /// ε-thickening in the max product metric.
    fn thicken(&self, eps: f64) -> PyResult<Self> {
        Ok(Relation { inner: self.inner.epsilon_thicken(eps).map_err(value_err)? })
    }

    /// Topological closure; the identity on finite spaces.
    fn closure(&self) -> Self {
        Relation { inner: self.inner.closure() }
    }

    fn is_correspondence(&self) -> bool {
        self.inner.is_correspondence()
    }

    /// Whether this is the graph of a distance-preserving bijection.
    fn is_isometry_graph(&self) -> PyResult<bool> {
        let corr = relation::Correspondence::new(self.inner.clone()).map_err(value_err)?;
        Ok(corr.is_isometry_graph())
    }
}

/// A finite topological space in minimal-open-neighborhood form.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Topology {
    inner: Arc<FiniteTopology>,
}

#[pymethods]
impl Topology {
    #[new]
    #[pyo3(signature = (min_open, labels=None))]
    fn new(min_open: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let labels =
            labels.unwrap_or_else(|| (0..min_open.len()).map(|i| format!("p{i}")).collect());
        let top = FiniteTopology::new(labels, min_open).map_err(value_err)?;
        Ok(Topology { inner: Arc::new(top) })
    }

    #[staticmethod]
    fn discrete(n: usize) -> PyResult<Self> {
        Ok(Topology { inner: Arc::new(FiniteTopology::discrete(n).map_err(value_err)?) })
    }

    #[staticmethod]
    fn sierpinski() -> Self {
        Topology { inner: Arc::new(FiniteTopology::sierpinski()) }
    }

    /// The metric topology of a finite metric space (always discrete).
    #[staticmethod]
    fn from_metric(space: &MetricSpace) -> PyResult<Self> {
        Ok(Topology { inner: Arc::new(FiniteTopology::from_metric(&space.inner).map_err(value_err)?) })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Topology({} points, min_open {:?})", self.inner.len(), self.inner.min_open_sets())
    }

    fn min_open(&self, x: usize) -> PyResult<Vec<usize>> {
        if x >= self.inner.len() {
            return Err(PyIndexError::new_err("point index out of range"));
        }
        Ok(self.inner.min_open(x))
    }

    fn is_hausdorff(&self) -> bool {
        self.inner.is_hausdorff()
    }

    fn is_open(&self, set: Vec<usize>) -> PyResult<bool> {
        self.inner.is_open(&set).map_err(value_err)
    }

    fn is_closed(&self, set: Vec<usize>) -> PyResult<bool> {
        self.inner.is_closed(&set).map_err(value_err)
    }

    fn open_sets(&self) -> PyResult<Vec<Vec<usize>>> {
        self.inner.open_sets().map_err(value_err)
    }
}

/// A Gromov-Hausdorff distance with its certificate correspondence.
#[pyclass(frozen, skip_from_py_object)]
struct GhResult {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    status: String,
    #[pyo3(get)]
    family: String,
    #[pyo3(get)]
    certificate: Option<Vec<(usize, usize)>>,
}

impl GhResult {
    fn from_core(r: &gh::GhResult) -> Self {
        GhResult {
            value: r.value,
            status: match r.status {
                gh::BoundStatus::Exact => "exact".to_string(),
                gh::BoundStatus::LowerBound => "lower_bound".to_string(),
                gh::BoundStatus::UpperBound => "upper_bound".to_string(),
            },
            family: r.family.to_string(),
            certificate: r.certificate.as_ref().map(|c| c.as_relation().cells()),
        }
    }
}

#[pymethods]
impl GhResult {
    fn __repr__(&self) -> String {
        format!("GhResult(value={}, status={}, family={})", self.value, self.status, self.family)
    }
}

/// Exact Gromov-Hausdorff distance between two spaces. Raises RuntimeError
/// when |X|·|Y| exceeds the budget; use gh_bounds for large instances.
#[pyfunction]
#[pyo3(signature = (x, y, family="all", budget=None))]
fn gh_exact(x: &MetricSpace, y: &MetricSpace, family: &str, budget: Option<usize>) -> PyResult<GhResult> {
    let filter = parse_family(family)?;
    let mut config = SolverConfig::default();
    if let Some(b) = budget {
        config.budget = b;
    }
    match gh::gh_exact(&x.inner, &y.inner, &filter, &config) {
        GhOutcome::Exact(r) => Ok(GhResult::from_core(&r)),
        GhOutcome::BudgetExceeded { lower, upper } => Err(PyRuntimeError::new_err(format!(
            "budget exceeded for {} x {} points; bounds are [{}, {}]",
            x.inner.len(),
            y.inner.len(),
            lower.value,
            upper.value
        ))),
    }
}

/// Diameter bounds: (|diam X - diam Y|/2, max(diam X, diam Y)/2).
#[pyfunction]
fn gh_bounds(x: &MetricSpace, y: &MetricSpace) -> (f64, f64) {
    gh::gh_bounds(&x.inner, &y.inner)
}

/// Brute-force oracle over every correspondence; |X|·|Y| <= 20.
#[pyfunction]
#[pyo3(signature = (x, y, family="all"))]
fn gh_oracle(x: &MetricSpace, y: &MetricSpace, family: &str) -> PyResult<GhResult> {
    let filter = parse_family(family)?;
    let r = gh::gh_oracle(&x.inner, &y.inner, &filter).map_err(value_err)?;
    Ok(GhResult::from_core(&r))
}

fn build_map(
    images: Vec<Vec<usize>>,
    source: &Topology,
    target: &Topology,
) -> PyResult<SetValuedMap> {
    SetValuedMap::new(source.inner.clone(), target.inner.clone(), images).map_err(value_err)
}

/// Lower semicontinuity of a set-valued map given by its image sets.
#[pyfunction]
fn is_lower_semicontinuous(
    images: Vec<Vec<usize>>,
    source: &Topology,
    target: &Topology,
) -> PyResult<bool> {
    Ok(topology::is_lower_semicontinuous(&build_map(images, source, target)?))
}

/// Upper semicontinuity of a set-valued map given by its image sets.
#[pyfunction]
fn is_upper_semicontinuous(
    images: Vec<Vec<usize>>,
    source: &Topology,
    target: &Topology,
) -> PyResult<bool> {
    Ok(topology::is_upper_semicontinuous(&build_map(images, source, target)?))
}

/// Both semicontinuities at once.
#[pyfunction]
fn is_continuous(
    images: Vec<Vec<usize>>,
    source: &Topology,
    target: &Topology,
) -> PyResult<bool> {
    Ok(topology::is_continuous(&build_map(images, source, target)?))
}

/// Family membership (us, ls, rc) of a correspondence between the given
/// topologies.
#[pyfunction]
fn classify(rel: &Relation, top_x: &Topology, top_y: &Topology) -> PyResult<(bool, bool, bool)> {
    let corr = relation::Correspondence::new(rel.inner.clone()).map_err(value_err)?;
    let m = topology::classify_correspondence(&corr, &top_x.inner, &top_y.inner)
        .map_err(value_err)?;
    Ok((m.us, m.ls, m.rc))
}

/// A uniform net on [0, length] with the given number of segments.
#[pyfunction]
fn interval_net(length: f64, segments: usize) -> PyResult<MetricSpace> {
    let net = sampling::interval_net(length, segments).map_err(value_err)?;
    Ok(MetricSpace { inner: net.space })
}

/// A uniform net of n points on a circle with the intrinsic metric.
#[pyfunction]
fn circle_net(circumference: f64, points: usize) -> PyResult<MetricSpace> {
    let net = sampling::circle_net(circumference, points).map_err(value_err)?;
    Ok(MetricSpace { inner: net.space })
}

#[pymodule]
fn ghlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<MetricSpace>()?;
    m.add_class::<Relation>()?;
    m.add_class::<Topology>()?;
    m.add_class::<GhResult>()?;
    m.add_function(wrap_pyfunction!(gh_exact, m)?)?;
    m.add_function(wrap_pyfunction!(gh_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(gh_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(is_lower_semicontinuous, m)?)?;
    m.add_function(wrap_pyfunction!(is_upper_semicontinuous, m)?)?;
    m.add_function(wrap_pyfunction!(is_continuous, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(interval_net, m)?)?;
    m.add_function(wrap_pyfunction!(circle_net, m)?)?;
    Ok(())
}
