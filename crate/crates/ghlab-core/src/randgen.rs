//! Seeded generators for random valid metric spaces, relations and
//! correspondences. Used by the property suite and the tests; everything is
//! driven by an explicit RNG so runs are reproducible.

use crate::metric::FiniteMetricSpace;
use crate::relation::{Correspondence, IncidenceMatrix, Relation};
use rand::Rng;
use std::sync::Arc;

/// A random metric space on `n` points: symmetric positive weights on the
/// complete graph, closed under shortest paths, so all axioms hold.
pub fn random_metric_space<R: Rng>(rng: &mut R, n: usize, scale: f64) -> Arc<FiniteMetricSpace> {
    assert!(n >= 1);
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.random_range(0.1 * scale..=scale);
            rows[i][j] = w;
            rows[j][i] = w;
        }
    }
    floyd_warshall(&mut rows);
    Arc::new(FiniteMetricSpace::from_matrix(rows).expect("shortest-path closure is a metric"))
}

/// Like [`random_metric_space`] but with integer distances, so that scaling
/// by small integers and sums of distances stay exact in floating point.
pub fn random_integer_metric_space<R: Rng>(
    rng: &mut R,
    n: usize,
    max_weight: u32,
) -> Arc<FiniteMetricSpace> {
    assert!(n >= 1);
    assert!(max_weight >= 1);
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.random_range(1..=max_weight) as f64;
            rows[i][j] = w;
            rows[j][i] = w;
        }
    }
    floyd_warshall(&mut rows);
    Arc::new(FiniteMetricSpace::from_matrix(rows).expect("shortest-path closure is a metric"))
}

fn floyd_warshall(rows: &mut [Vec<f64>]) {
    let n = rows.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = rows[i][k] + rows[k][j];
                if via < rows[i][j] {
                    rows[i][j] = via;
                }
            }
        }
    }
}

/// A uniformly random permutation of the points of a space; useful for
/// producing genuinely isometric pairs.
pub fn permuted_copy<R: Rng>(rng: &mut R, space: &FiniteMetricSpace) -> Arc<FiniteMetricSpace> {
    let n = space.len();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[i][j] = space.dist(perm[i], perm[j]);
        }
    }
    let labels = (0..n).map(|i| space.labels()[perm[i]].clone()).collect();
    Arc::new(FiniteMetricSpace::new(labels, rows).expect("relabeling preserves the axioms"))
}

/// A random nonempty incidence matrix with the given cell density.
pub fn random_incidence<R: Rng>(rng: &mut R, rows: usize, cols: usize, density: f64) -> IncidenceMatrix {
    loop {
        let mut inc = IncidenceMatrix::empty(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if rng.random_bool(density) {
                    inc.set(i, j);
                }
            }
        }
        if inc.is_nonempty() {
            return inc;
        }
    }
}

pub fn random_relation<R: Rng>(
    rng: &mut R,
    x: Arc<FiniteMetricSpace>,
    y: Arc<FiniteMetricSpace>,
    density: f64,
) -> Relation {
    let inc = random_incidence(rng, x.len(), y.len(), density);
    Relation::new(x, y, inc).expect("nonempty by construction")
}

/// A random correspondence: a random row choice plus a random column choice
/// guarantee double surjectivity, then extra cells are sprinkled in.
pub fn random_correspondence<R: Rng>(
    rng: &mut R,
    x: Arc<FiniteMetricSpace>,
    y: Arc<FiniteMetricSpace>,
    extra_density: f64,
) -> Correspondence {
    let (n, m) = (x.len(), y.len());
    let mut inc = IncidenceMatrix::empty(n, m);
    for i in 0..n {
        inc.set(i, rng.random_range(0..m));
    }
    for j in 0..m {
        inc.set(rng.random_range(0..n), j);
    }
    for i in 0..n {
        for j in 0..m {
            if rng.random_bool(extra_density) {
                inc.set(i, j);
            }
        }
    }
    let rel = Relation::new(x, y, inc).expect("nonempty");
    Correspondence::new(rel).expect("doubly surjective by construction")
}
