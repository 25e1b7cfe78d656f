//! Relations and correspondences between two finite metric spaces, and the
//! distortion algebra built on them: inverse, composition, ε-thickening,
//! closure, and the isometry test.
//!
//! Incidence is stored as row-major bitsets over target indices, so
//! composition is a bitwise OR of rows and distortion is a scan over set
//! cells. Relations are immutable values; every operation returns a new one.

use crate::metric::FiniteMetricSpace;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelationError {
    #[error("a relation must contain at least one pair")]
    EmptyRelation,
    #[error("incidence shape {rows}x{cols} does not match spaces {x}x{y}")]
    ShapeMismatch { rows: usize, cols: usize, x: usize, y: usize },
    #[error("cell ({i},{j}) out of range for a {rows}x{cols} relation")]
    CellOutOfRange { i: usize, j: usize, rows: usize, cols: usize },
    #[error("relations do not share the middle space")]
    MiddleSpaceMismatch,
    #[error("composition is empty; the distortion algebra requires nonempty compositions")]
    EmptyComposition,
    #[error("not a correspondence: {0}")]
    NotCorrespondence(String),
    #[error("spaces must have equal point counts for a diagonal graph, got {x} and {y}")]
    DiagonalSizeMismatch { x: usize, y: usize },
    #[error("thickening radius must be positive, got {0}")]
    NonPositiveEpsilon(f64),
}

/// A rows × cols boolean matrix stored as row-major 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IncidenceMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl IncidenceMatrix {
    pub fn empty(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64).max(1);
        IncidenceMatrix { rows, cols, words_per_row, bits: vec![0; rows * words_per_row] }
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        let mut m = Self::empty(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j);
            }
        }
        m
    }

    pub fn from_cells(rows: usize, cols: usize, cells: &[(usize, usize)]) -> Result<Self, RelationError> {
        let mut m = Self::empty(rows, cols);
        for &(i, j) in cells {
            if i >= rows || j >= cols {
                return Err(RelationError::CellOutOfRange { i, j, rows, cols });
            }
            m.set(i, j);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words_per_row + j / 64] |= 1 << (j % 64);
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_nonempty(&self) -> bool {
        self.bits.iter().any(|&w| w != 0)
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn row_is_empty(&self, i: usize) -> bool {
        self.row_words(i).iter().all(|&w| w == 0)
    }

    pub fn row_cells(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w_idx, &w) in self.row_words(i).iter().enumerate() {
            let mut word = w;
            while word != 0 {
                let b = word.trailing_zeros() as usize;
                out.push(w_idx * 64 + b);
                word &= word - 1;
            }
        }
        out
    }

    pub fn col_is_empty(&self, j: usize) -> bool {
        (0..self.rows).all(|i| !self.get(i, j))
    }

    /// Every row and every column holds at least one cell.
    pub fn is_doubly_surjective(&self) -> bool {
        (0..self.rows).all(|i| !self.row_is_empty(i)) && {
            let mut col_cover = vec![0u64; self.words_per_row];
            for i in 0..self.rows {
                for (w, &word) in self.row_words(i).iter().enumerate() {
                    col_cover[w] |= word;
                }
            }
            (0..self.cols).all(|j| col_cover[j / 64] >> (j % 64) & 1 == 1)
        }
    }

    pub fn cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.count());
        for i in 0..self.rows {
            for j in self.row_cells(i) {
                out.push((i, j));
            }
        }
        out
    }

    pub fn transpose(&self) -> IncidenceMatrix {
        let mut t = IncidenceMatrix::empty(self.cols, self.rows);
        for (i, j) in self.cells() {
            t.set(j, i);
        }
        t
    }

    pub fn is_subset_of(&self, other: &IncidenceMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Row-major cell-sequence order: at the first differing cell, the
    /// matrix with that cell absent sorts first. Used for certificate
    /// tie-breaking; requires identical shapes.
    pub fn lex_cmp(&self, other: &IncidenceMatrix) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.bits.iter().zip(&other.bits) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                return if b >> bit & 1 == 1 { Ordering::Less } else { Ordering::Greater };
            }
        }
        Ordering::Equal
    }
}

/// All doubly-surjective incidence matrices of the given shape, ascending
/// in lexicographic cell order. Exponential; for exhaustive small audits.
pub fn enumerate_correspondence_incidences(rows: usize, cols: usize) -> Vec<IncidenceMatrix> {
    let cells = rows * cols;
    assert!(cells <= 16, "enumeration is exponential; {cells} cells is too many");
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << cells) {
        let mut inc = IncidenceMatrix::empty(rows, cols);
        for b in 0..cells {
            if mask >> (cells - 1 - b) & 1 == 1 {
                inc.set(b / cols, b % cols);
            }
        }
        if inc.is_doubly_surjective() {
            out.push(inc);
        }
    }
    out
}

/// JSON form of an incidence matrix: explicit cell list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationJson {
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<(usize, usize)>,
}

impl From<&IncidenceMatrix> for RelationJson {
    fn from(m: &IncidenceMatrix) -> Self {
        RelationJson { rows: m.rows(), cols: m.cols(), cells: m.cells() }
    }
}

impl TryFrom<&RelationJson> for IncidenceMatrix {
    type Error = RelationError;
    fn try_from(j: &RelationJson) -> Result<Self, RelationError> {
        IncidenceMatrix::from_cells(j.rows, j.cols, &j.cells)
    }
}

/// A nonempty relation σ ⊆ X × Y between two finite metric spaces.
#[derive(Debug, Clone)]
pub struct Relation {
    x: Arc<FiniteMetricSpace>,
    y: Arc<FiniteMetricSpace>,
    inc: IncidenceMatrix,
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.inc == other.inc && self.x == other.x && self.y == other.y
    }
}

fn same_space(a: &Arc<FiniteMetricSpace>, b: &Arc<FiniteMetricSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Relation {
    pub fn new(
        x: Arc<FiniteMetricSpace>,
        y: Arc<FiniteMetricSpace>,
        inc: IncidenceMatrix,
    ) -> Result<Self, RelationError> {
        if inc.rows() != x.len() || inc.cols() != y.len() {
            return Err(RelationError::ShapeMismatch {
                rows: inc.rows(),
                cols: inc.cols(),
                x: x.len(),
                y: y.len(),
            });
        }
        if !inc.is_nonempty() {
            return Err(RelationError::EmptyRelation);
        }
        Ok(Relation { x, y, inc })
    }

    pub fn from_cells(
        x: Arc<FiniteMetricSpace>,
        y: Arc<FiniteMetricSpace>,
        cells: &[(usize, usize)],
    ) -> Result<Self, RelationError> {
        let inc = IncidenceMatrix::from_cells(x.len(), y.len(), cells)?;
        Relation::new(x, y, inc)
    }

    pub fn source(&self) -> &Arc<FiniteMetricSpace> {
        &self.x
    }

    pub fn target(&self) -> &Arc<FiniteMetricSpace> {
        &self.y
    }

    pub fn incidence(&self) -> &IncidenceMatrix {
        &self.inc
    }

    pub fn cells(&self) -> Vec<(usize, usize)> {
        self.inc.cells()
    }

    /// dis σ = max over pairs of set cells of | |xx'| - |yy'| |.
    pub fn distortion(&self) -> f64 {
        distortion_of(&self.inc, &self.x, &self.y)
    }

    /// σ⁻¹ ⊆ Y × X. Distortion is preserved exactly.
    pub fn inverse(&self) -> Relation {
        Relation { x: self.y.clone(), y: self.x.clone(), inc: self.inc.transpose() }
    }

    /// τ∘σ for σ: X↔Y (self) and τ: Y↔Z. (x,z) is present iff some y links
    /// them. An empty composition is an error, mirroring the hypothesis
    /// under which composition subadditivity holds.
    pub fn compose(&self, tau: &Relation) -> Result<Relation, RelationError> {
        if !same_space(&self.y, &tau.x) {
            return Err(RelationError::MiddleSpaceMismatch);
        }
        let mut inc = IncidenceMatrix::empty(self.x.len(), tau.y.len());
        for i in 0..self.x.len() {
            for y in self.inc.row_cells(i) {
                for (w, &word) in tau.inc.row_words(y).iter().enumerate() {
                    inc.bits[i * inc.words_per_row + w] |= word;
                }
            }
        }
        if !inc.is_nonempty() {
            return Err(RelationError::EmptyComposition);
        }
        Relation::new(self.x.clone(), tau.y.clone(), inc)
    }

    /// U_ε(σ) in the max product metric: cell (x,y) is present iff some set
    /// cell (x',y') has max(|xx'|, |yy'|) < ε.
    pub fn epsilon_thicken(&self, eps: f64) -> Result<Relation, RelationError> {
        if eps <= 0.0 {
            return Err(RelationError::NonPositiveEpsilon(eps));
        }
        let mut inc = IncidenceMatrix::empty(self.x.len(), self.y.len());
        for (xi, yi) in self.inc.cells() {
            for x in 0..self.x.len() {
                if self.x.dist(x, xi) >= eps {
                    continue;
                }
                for y in 0..self.y.len() {
                    if self.y.dist(y, yi) < eps {
                        inc.set(x, y);
                    }
                }
            }
        }
        Relation::new(self.x.clone(), self.y.clone(), inc)
    }

    /// Topological closure in X × Y. Finite metric spaces carry the discrete
    /// topology, so this is the identity; it exists so closure-invariance of
    /// distortion is stated structurally and pipelines stay uniform.
    pub fn closure(&self) -> Relation {
        self.clone()
    }

    pub fn is_correspondence(&self) -> bool {
        self.inc.is_doubly_surjective()
    }
}

pub(crate) fn distortion_of(
    inc: &IncidenceMatrix,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> f64 {
    let cells = inc.cells();
    let mut dis = 0.0f64;
    for (a, &(x1, y1)) in cells.iter().enumerate() {
        for &(x2, y2) in &cells[a..] {
            let gap = (x.dist(x1, x2) - y.dist(y1, y2)).abs();
            if gap > dis {
                dis = gap;
            }
        }
    }
    dis
}

/// A correspondence: a relation whose projections onto both spaces are
/// surjective, i.e. every row and every column holds a cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Correspondence(Relation);

impl Correspondence {
    pub fn new(rel: Relation) -> Result<Self, RelationError> {
        for i in 0..rel.x.len() {
            if rel.inc.row_is_empty(i) {
                return Err(RelationError::NotCorrespondence(format!(
                    "point {i} of the source has no image"
                )));
            }
        }
        for j in 0..rel.y.len() {
            if rel.inc.col_is_empty(j) {
                return Err(RelationError::NotCorrespondence(format!(
                    "point {j} of the target is not covered"
                )));
            }
        }
        Ok(Correspondence(rel))
    }

    /// X × Y, the correspondence that relates everything to everything.
    pub fn full(x: Arc<FiniteMetricSpace>, y: Arc<FiniteMetricSpace>) -> Correspondence {
        let inc = IncidenceMatrix::full(x.len(), y.len());
        Correspondence(Relation { x, y, inc })
    }

    /// The graph {(i, i)} between two spaces of equal size. With x = y this
    /// is the identity correspondence.
    pub fn diagonal(
        x: Arc<FiniteMetricSpace>,
        y: Arc<FiniteMetricSpace>,
    ) -> Result<Correspondence, RelationError> {
        if x.len() != y.len() {
            return Err(RelationError::DiagonalSizeMismatch { x: x.len(), y: y.len() });
        }
        let mut inc = IncidenceMatrix::empty(x.len(), y.len());
        for i in 0..x.len() {
            inc.set(i, i);
        }
        Ok(Correspondence(Relation { x, y, inc }))
    }

    pub fn identity(x: Arc<FiniteMetricSpace>) -> Correspondence {
        Correspondence::diagonal(x.clone(), x).expect("equal sizes")
    }

    pub fn as_relation(&self) -> &Relation {
        &self.0
    }

    pub fn into_relation(self) -> Relation {
        self.0
    }

    pub fn inverse(&self) -> Correspondence {
        Correspondence(self.0.inverse())
    }

    /// Composition of correspondences is a correspondence and never empty.
    pub fn compose(&self, tau: &Correspondence) -> Result<Correspondence, RelationError> {
        let rel = self.0.compose(&tau.0)?;
        Correspondence::new(rel)
    }

    /// True iff the correspondence is the graph of a distance-preserving
    /// bijection. On validated metric spaces this is equivalent to zero
    /// distortion.
    pub fn is_isometry_graph(&self) -> bool {
        let rel = &self.0;
        let n = rel.x.len();
        let m = rel.y.len();
        if n != m {
            return false;
        }
        let mut image = vec![usize::MAX; n];
        let mut covered = vec![false; m];
        for i in 0..n {
            let row = rel.inc.row_cells(i);
            if row.len() != 1 {
                return false;
            }
            let j = row[0];
            if covered[j] {
                return false; // two source points share an image
            }
            covered[j] = true;
            image[i] = j;
        }
        for i in 0..n {
            for k in 0..n {
                if rel.x.dist(i, k) != rel.y.dist(image[i], image[k]) {
                    return false;
                }
            }
        }
        true
    }
}

impl std::ops::Deref for Correspondence {
    type Target = Relation;
    fn deref(&self) -> &Relation {
        &self.0
    }
}
