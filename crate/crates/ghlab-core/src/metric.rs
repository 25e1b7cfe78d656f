//! Finite metric spaces, nonempty subsets, metric neighborhoods, and the
//! Hausdorff distance between subsets of a common space.
//!
//! A [`FiniteMetricSpace`] is a labeled point set with a validated distance
//! matrix. Validation enforces the metric axioms (zero diagonal, symmetry,
//! strictly positive off-diagonal entries, triangle inequality) up to a
//! comparison tolerance; the stored matrix is taken authoritative and is
//! never repaired. All subsequent computations are exact max/min/abs over
//! the stored entries.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Comparison tolerance used by validation only. Algorithms never round.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A single violated metric axiom, with witnesses.
#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricViolation {
    #[error("distance matrix is empty; a metric space needs at least one point")]
    Empty,
    #[error("matrix is not square: row {row} has {got} entries, expected {expected}")]
    NotSquare { row: usize, got: usize, expected: usize },
    #[error("{labels} labels supplied for a {size}x{size} matrix")]
    LabelCountMismatch { labels: usize, size: usize },
    #[error("duplicate label {label:?} at indices {first} and {second}")]
    DuplicateLabel { label: String, first: usize, second: usize },
    #[error("non-finite entry at ({i},{j}): {value}")]
    NonFinite { i: usize, j: usize, value: f64 },
    #[error("negative entry at ({i},{j}): {value}")]
    NegativeEntry { i: usize, j: usize, value: f64 },
    #[error("nonzero diagonal at ({i},{i}): {value}")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("asymmetry at ({i},{j}): {forward} vs {backward}")]
    Asymmetry { i: usize, j: usize, forward: f64, backward: f64 },
    #[error("zero distance between distinct points {i} and {j}; pseudometrics are rejected")]
    ZeroOffDiagonal { i: usize, j: usize },
    #[error("triangle violation: d({i},{k}) = {direct} > {via} = d({i},{j}) + d({j},{k})")]
    TriangleViolation { i: usize, j: usize, k: usize, direct: f64, via: f64 },
}

/// Every axiom violation found in a candidate matrix.
///
/// Validation does not stop at the first failure: the report lists all of
/// them so a bad input file can be fixed in one pass.
#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<MetricViolation>,
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{} metric axiom violation(s):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("point index {index} out of range for a space with {size} points")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("operands live in different metric spaces")]
    SpaceMismatch,
    #[error("scale factor must be nonnegative, got {0}")]
    NegativeScale(f64),
    #[error("neighborhood radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("neighborhood radius must be nonnegative, got {0}")]
    NegativeRadius(f64),
}

/// A finite metric space: ordered point labels plus a validated square
/// distance matrix, immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    n: usize,
}

impl FiniteMetricSpace {
    /// Validates a candidate matrix and wraps it. Rejects anything that is
    /// not a genuine metric (pseudometrics included) and reports every
    /// violated axiom with witnesses.
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self, ValidationReport> {
        Self::with_tolerance(labels, rows, DEFAULT_TOLERANCE)
    }

    /// Same as [`FiniteMetricSpace::new`] with labels `p0, p1, ...`.
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self, ValidationReport> {
        let labels = (0..rows.len()).map(|i| format!("p{i}")).collect();
        Self::new(labels, rows)
    }

    /// Validates with an explicit comparison tolerance.
    pub fn with_tolerance(
        labels: Vec<String>,
        rows: Vec<Vec<f64>>,
        tol: f64,
    ) -> Result<Self, ValidationReport> {
        let mut violations = Vec::new();
        let n = rows.len();
        if n == 0 {
            violations.push(MetricViolation::Empty);
            return Err(ValidationReport { violations });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                violations.push(MetricViolation::NotSquare { row: i, got: row.len(), expected: n });
            }
        }
        if labels.len() != n {
            violations.push(MetricViolation::LabelCountMismatch { labels: labels.len(), size: n });
        }
        if !violations.is_empty() {
            // Shape is broken; the axiom checks below index out of bounds.
            return Err(ValidationReport { violations });
        }
        for i in 0..n {
            for j in i + 1..n {
                if labels[i] == labels[j] {
                    violations.push(MetricViolation::DuplicateLabel {
                        label: labels[i].clone(),
                        first: i,
                        second: j,
                    });
                }
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    violations.push(MetricViolation::NonFinite { i, j, value: v });
                }
            }
        }
        if violations.iter().any(|v| matches!(v, MetricViolation::NonFinite { .. })) {
            return Err(ValidationReport { violations });
        }
        for i in 0..n {
            if rows[i][i].abs() > tol {
                violations.push(MetricViolation::NonzeroDiagonal { i, value: rows[i][i] });
            }
            for j in 0..n {
                if rows[i][j] < -tol {
                    violations.push(MetricViolation::NegativeEntry { i, j, value: rows[i][j] });
                }
            }
            for j in i + 1..n {
                if (rows[i][j] - rows[j][i]).abs() > tol {
                    violations.push(MetricViolation::Asymmetry {
                        i,
                        j,
                        forward: rows[i][j],
                        backward: rows[j][i],
                    });
                }
                if rows[i][j].abs() <= tol && rows[j][i].abs() <= tol {
                    violations.push(MetricViolation::ZeroOffDiagonal { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let direct = rows[i][k];
                    let via = rows[i][j] + rows[j][k];
                    if direct > via + tol {
                        violations.push(MetricViolation::TriangleViolation { i, j, k, direct, via });
                    }
                }
            }
        }
        if violations.is_empty() {
            let dist = rows.into_iter().flatten().collect();
            Ok(FiniteMetricSpace { labels, dist, n })
        } else {
            Err(ValidationReport { violations })
        }
    }

    /// The one-point space Δ₁.
    pub fn delta1() -> Self {
        FiniteMetricSpace { labels: vec!["*".to_string()], dist: vec![0.0], n: 1 }
    }

    /// Builds a space from coordinate vectors under the given point metric.
    pub fn from_points(points: &[Vec<f64>], metric: PointMetric) -> Result<Self, ValidationReport> {
        let n = points.len();
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                rows[i][j] = metric.distance(&points[i], &points[j]);
            }
        }
        Self::from_matrix(rows)
    }

    /// Constructor for matrices that are valid by construction (scaling,
    /// net generation after its own validation pass). Not exported.
    pub(crate) fn new_unchecked(labels: Vec<String>, dist: Vec<f64>, n: usize) -> Self {
        debug_assert_eq!(dist.len(), n * n);
        FiniteMetricSpace { labels, dist, n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // validation guarantees at least one point
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Distance between points `i` and `j`.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// The raw matrix in row-major order.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.dist[i * self.n..(i + 1) * self.n].to_vec()).collect()
    }

    pub(crate) fn flat(&self) -> &[f64] {
        &self.dist
    }

    /// diam X = max over all entries.
    pub fn diameter(&self) -> f64 {
        self.dist.iter().cloned().fold(0.0, f64::max)
    }

    /// Smallest nonzero distance; `None` on the one-point space.
    pub fn min_positive_distance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let d = self.dist(i, j);
                best = Some(match best {
                    Some(b) => b.min(d),
                    None => d,
                });
            }
        }
        best
    }

    /// max_j d(i, j).
    pub fn eccentricity(&self, i: usize) -> f64 {
        (0..self.n).map(|j| self.dist(i, j)).fold(0.0, f64::max)
    }

    /// λX: multiplies every distance by λ > 0; 0X is Δ₁ by convention.
    ///
    /// Panics on negative λ.
    pub fn scale(&self, lambda: f64) -> FiniteMetricSpace {
        assert!(lambda >= 0.0, "scale factor must be nonnegative, got {lambda}");
        if lambda == 0.0 {
            return FiniteMetricSpace::delta1();
        }
        let dist = self.dist.iter().map(|d| lambda * d).collect();
        FiniteMetricSpace::new_unchecked(self.labels.clone(), dist, self.n)
    }

    /// Total order used to canonicalize argument pairs: size, then matrix,
    /// then labels. Gives the GH solver exact symmetry.
    pub fn cmp_key(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.n.cmp(&other.n) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.dist.iter().zip(other.dist.iter()) {
            match a.total_cmp(b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.labels.cmp(&other.labels)
    }

    /// The whole space as a subset of itself.
    pub fn whole(&self) -> Subset<'_> {
        Subset { space: self, members: (0..self.n).collect() }
    }

    /// The space induced on a nonempty subset of the points: the submatrix
    /// on those rows and columns, which inherits all the axioms.
    pub fn restriction(&self, members: &[usize]) -> Result<FiniteMetricSpace, MetricError> {
        let sub = Subset::new(self, members)?;
        let kept = sub.members();
        let labels = kept.iter().map(|&i| self.labels[i].clone()).collect();
        let mut dist = Vec::with_capacity(kept.len() * kept.len());
        for &i in kept {
            for &j in kept {
                dist.push(self.dist(i, j));
            }
        }
        Ok(FiniteMetricSpace::new_unchecked(labels, dist, kept.len()))
    }

    /// Builds a validated subset of this space.
    pub fn subset(&self, members: &[usize]) -> Result<Subset<'_>, MetricError> {
        Subset::new(self, members)
    }
}

/// Point metrics for coordinate-vector ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointMetric {
    Euclidean,
    Chebyshev,
    Manhattan,
}

impl PointMetric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            PointMetric::Euclidean => {
                a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
            }
            PointMetric::Chebyshev => {
                a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
            }
            PointMetric::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        }
    }
}

impl std::str::FromStr for PointMetric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euclidean" => Ok(PointMetric::Euclidean),
            "chebyshev" => Ok(PointMetric::Chebyshev),
            "manhattan" => Ok(PointMetric::Manhattan),
            other => Err(format!("unknown point metric {other:?}")),
        }
    }
}

/// A nonempty subset of a finite metric space, by point indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Subset<'a> {
    space: &'a FiniteMetricSpace,
    members: Vec<usize>,
}

impl<'a> Subset<'a> {
    pub fn new(space: &'a FiniteMetricSpace, members: &[usize]) -> Result<Self, MetricError> {
        if members.is_empty() {
            return Err(MetricError::EmptySubset);
        }
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &i in &sorted {
            if i >= space.len() {
                return Err(MetricError::IndexOutOfRange { index: i, size: space.len() });
            }
        }
        Ok(Subset { space, members: sorted })
    }

    pub fn space(&self) -> &'a FiniteMetricSpace {
        self.space
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.members.iter().all(|&i| other.contains(i))
    }

    fn assert_same_space(&self, other: &Subset) {
        assert!(
            std::ptr::eq(self.space, other.space) || self.space == other.space,
            "subsets live in different metric spaces"
        );
    }

    /// |xA| = min over a in A of d(x, a).
    pub fn point_distance(&self, x: usize) -> f64 {
        self.members.iter().map(|&a| self.space.dist(x, a)).fold(f64::INFINITY, f64::min)
    }

    /// |AB| = min over pairs.
    pub fn set_distance(&self, other: &Subset) -> f64 {
        self.assert_same_space(other);
        self.members.iter().map(|&a| other.point_distance(a)).fold(f64::INFINITY, f64::min)
    }

    /// U_r(A) = { x : |xA| < r }, r > 0. Always contains A.
    pub fn open_neighborhood(&self, r: f64) -> Result<Subset<'a>, MetricError> {
        if r <= 0.0 {
            return Err(MetricError::NonPositiveRadius(r));
        }
        let members =
            (0..self.space.len()).filter(|&x| self.point_distance(x) < r).collect::<Vec<_>>();
        Ok(Subset { space: self.space, members })
    }

    /// B_s(A) = { x : |xA| <= s }, s >= 0.
    pub fn closed_neighborhood(&self, s: f64) -> Result<Subset<'a>, MetricError> {
        if s < 0.0 {
            return Err(MetricError::NegativeRadius(s));
        }
        let members =
            (0..self.space.len()).filter(|&x| self.point_distance(x) <= s).collect::<Vec<_>>();
        Ok(Subset { space: self.space, members })
    }

    /// Hausdorff distance: max of the two directed sup-inf distances.
    pub fn hausdorff(&self, other: &Subset) -> f64 {
        self.assert_same_space(other);
        let forward =
            self.members.iter().map(|&a| other.point_distance(a)).fold(0.0, f64::max);
        let backward =
            other.members.iter().map(|&b| self.point_distance(b)).fold(0.0, f64::max);
        forward.max(backward)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_space() -> FiniteMetricSpace {
        // Points at coordinates 0, 1, 3 on a line.
        FiniteMetricSpace::from_matrix(vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 2.0],
            vec![3.0, 2.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn one_point_space_is_valid() {
        let x = FiniteMetricSpace::from_matrix(vec![vec![0.0]]).unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(x.diameter(), 0.0);
    }

    #[test]
    fn two_point_space_is_valid() {
        let x = FiniteMetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(x.diameter(), 1.0);
    }

    #[test]
    fn asymmetry_is_reported_with_witness() {
        let err = FiniteMetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, MetricViolation::Asymmetry { i: 0, j: 1, .. })));
    }

    #[test]
    fn every_violation_is_listed() {
        // Nonzero diagonal, asymmetry, a negative entry, and a triangle
        // violation all at once.
        let err = FiniteMetricSpace::from_matrix(vec![
            vec![0.5, 1.0, 9.0],
            vec![1.0, 0.0, -2.0],
            vec![9.0, 3.0, 0.0],
        ])
        .unwrap_err();
        let kinds: Vec<_> = err
            .violations
            .iter()
            .map(|v| match v {
                MetricViolation::NonzeroDiagonal { .. } => "diag",
                MetricViolation::Asymmetry { .. } => "asym",
                MetricViolation::NegativeEntry { .. } => "neg",
                MetricViolation::TriangleViolation { .. } => "tri",
                _ => "other",
            })
            .collect();
        assert!(kinds.contains(&"diag"));
        assert!(kinds.contains(&"asym"));
        assert!(kinds.contains(&"neg"));
        assert!(kinds.contains(&"tri"));
    }

    #[test]
    fn pseudometric_is_rejected() {
        let err = FiniteMetricSpace::from_matrix(vec![
            vec![0.0, 0.0],
            vec![0.0, 0.0],
        ])
        .unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, MetricViolation::ZeroOffDiagonal { i: 0, j: 1 })));
    }

    #[test]
    fn triangle_violation_has_witness_triple() {
        let err = FiniteMetricSpace::from_matrix(vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ])
        .unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, MetricViolation::TriangleViolation { .. })));
    }

    #[test]
    fn point_distance_examples() {
        let x = line_space();
        let a = x.subset(&[1, 2]).unwrap();
        assert_eq!(a.point_distance(0), 1.0);
        assert_eq!(a.point_distance(1), 0.0); // x in A
        let singleton = x.subset(&[2]).unwrap();
        assert_eq!(singleton.point_distance(0), 3.0);
    }

    #[test]
    fn set_distance_examples() {
        let x = FiniteMetricSpace::from_matrix(vec![
            // line points 0, 5, 2, 9
            vec![0.0, 5.0, 2.0, 9.0],
            vec![5.0, 0.0, 3.0, 4.0],
            vec![2.0, 3.0, 0.0, 7.0],
            vec![9.0, 4.0, 7.0, 0.0],
        ])
        .unwrap();
        let a = x.subset(&[0, 1]).unwrap(); // {0, 5}
        let b = x.subset(&[2, 3]).unwrap(); // {2, 9}
        assert_eq!(a.set_distance(&b), 2.0);
        let overlapping = x.subset(&[1, 2]).unwrap();
        assert_eq!(a.set_distance(&overlapping), 0.0);
        let zero = x.subset(&[0]).unwrap();
        let two = x.subset(&[2]).unwrap();
        assert_eq!(zero.set_distance(&two), 2.0);
    }

    #[test]
    fn neighborhood_examples() {
        let x = line_space();
        let a = x.subset(&[0]).unwrap();
        let u = a.open_neighborhood(1.5).unwrap();
        assert_eq!(u.members(), &[0, 1]);
        let b = a.closed_neighborhood(1.0).unwrap();
        assert_eq!(b.members(), &[0, 1]);
        // s = 0 recovers A itself on a finite metric space.
        let same = a.closed_neighborhood(0.0).unwrap();
        assert_eq!(same.members(), a.members());
        // r > diam covers everything.
        let all = a.open_neighborhood(x.diameter() + 1.0).unwrap();
        assert_eq!(all.members(), &[0, 1, 2]);
        let all2 = a.closed_neighborhood(x.diameter()).unwrap();
        assert_eq!(all2.members(), &[0, 1, 2]);
        assert!(a.is_subset_of(&u));
    }

    #[test]
    fn open_neighborhood_rejects_nonpositive_radius() {
        let x = line_space();
        let a = x.subset(&[0]).unwrap();
        assert!(a.open_neighborhood(0.0).is_err());
        assert!(a.closed_neighborhood(-1.0).is_err());
    }

    #[test]
    fn hausdorff_examples() {
        let x = FiniteMetricSpace::from_matrix(vec![
            // line points 0, 1, 5, 10
            vec![0.0, 1.0, 5.0, 10.0],
            vec![1.0, 0.0, 4.0, 9.0],
            vec![5.0, 4.0, 0.0, 5.0],
            vec![10.0, 9.0, 5.0, 0.0],
        ])
        .unwrap();
        let a = x.subset(&[0]).unwrap();
        let ab = x.subset(&[0, 1]).unwrap();
        assert_eq!(a.hausdorff(&ab), 1.0);
        assert_eq!(ab.hausdorff(&a), 1.0);
        assert_eq!(a.hausdorff(&a), 0.0);
        let ends = x.subset(&[0, 3]).unwrap(); // {0, 10}
        let mid = x.subset(&[2]).unwrap(); // {5}
        assert_eq!(ends.hausdorff(&mid), 5.0);
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(FiniteMetricSpace::delta1().diameter(), 0.0);
        assert_eq!(line_space().diameter(), 3.0);
    }

    #[test]
    fn scale_examples() {
        let x = line_space();
        let same = x.scale(1.0);
        assert_eq!(same.matrix(), x.matrix());
        let zero = x.scale(0.0);
        assert_eq!(zero.len(), 1);
        assert_eq!(zero.diameter(), 0.0);
        let double = x.scale(2.0);
        assert_eq!(double.diameter(), 2.0 * x.diameter());
    }

    #[test]
    fn scale_composes_for_dyadic_factors() {
        let x = line_space();
        let a = x.scale(0.5).scale(4.0);
        let b = x.scale(2.0);
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    #[should_panic(expected = "nonnegative")]
    fn scale_rejects_negative_factor() {
        line_space().scale(-1.0);
    }

    #[test]
    fn subset_validation() {
        let x = line_space();
        assert!(matches!(x.subset(&[]), Err(MetricError::EmptySubset)));
        assert!(matches!(x.subset(&[7]), Err(MetricError::IndexOutOfRange { .. })));
        let s = x.subset(&[2, 0, 2]).unwrap();
        assert_eq!(s.members(), &[0, 2]); // sorted, deduped
    }

    #[test]
    fn from_points_metrics() {
        let pts = vec![vec![0.0, 0.0], vec![3.0, 4.0]];
        let e = FiniteMetricSpace::from_points(&pts, PointMetric::Euclidean).unwrap();
        assert_eq!(e.dist(0, 1), 5.0);
        let c = FiniteMetricSpace::from_points(&pts, PointMetric::Chebyshev).unwrap();
        assert_eq!(c.dist(0, 1), 4.0);
        let m = FiniteMetricSpace::from_points(&pts, PointMetric::Manhattan).unwrap();
        assert_eq!(m.dist(0, 1), 7.0);
    }
}
