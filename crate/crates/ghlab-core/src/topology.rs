//! Finite topological spaces in Alexandrov form and set-valued maps between
//! them, with decision procedures for lower/upper semicontinuity and the
//! family classifiers for correspondences.
//!
//! A finite topology is stored as one minimal open neighborhood per point;
//! the open-set family is generated on demand. Point sets are 64-bit masks
//! internally, so a topology holds at most 64 points — plenty for the
//! exhaustive audits this module exists for.
//!
//! Two routes to each semicontinuity decision are kept deliberately
//! separate: the preimage criterion deciders ([`check_lower_semicontinuous`],
//! [`check_upper_semicontinuous`]) reduce to minimal opens and point
//! closures, while the `*_pointwise` functions evaluate the neighborhood
//! definitions by brute force over all open sets. The property suite checks
//! that the two routes always agree.

use crate::metric::FiniteMetricSpace;
use crate::relation::{Correspondence, IncidenceMatrix};
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

pub const MAX_POINTS: usize = 64;

/// Guard for brute-force enumeration of the full open-set family.
const MAX_ENUMERATION_POINTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("a finite topology needs at least one point")]
    Empty,
    #[error("at most {MAX_POINTS} points are supported, got {0}")]
    TooManyPoints(usize),
    #[error("{min_open} minimal neighborhoods supplied for {points} points")]
    CountMismatch { points: usize, min_open: usize },
    #[error("point {point} is missing from its own minimal neighborhood")]
    PointNotInMinOpen { point: usize },
    #[error("index {index} out of range for a topology on {size} points")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("minimal neighborhoods are inconsistent: {y} lies in min_open({x}) but min_open({y}) escapes it")]
    NotAlexandrov { x: usize, y: usize },
    #[error("set-valued map image at point {0} is empty")]
    EmptyImage(usize),
    #[error("operand sizes do not match: {0}")]
    SizeMismatch(String),
    #[error("source topology is not Hausdorff; points {x} and {y} cannot be separated")]
    NotHausdorff { x: usize, y: usize },
    #[error("enumeration over all open sets needs at most {MAX_ENUMERATION_POINTS} points, got {0}")]
    EnumerationTooLarge(usize),
}

fn mask_to_vec(mask: u64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut w = mask;
    while w != 0 {
        out.push(w.trailing_zeros() as usize);
        w &= w - 1;
    }
    out
}

fn vec_to_mask(set: &[usize], size: usize) -> Result<u64, TopologyError> {
    let mut mask = 0u64;
    for &i in set {
        if i >= size {
            return Err(TopologyError::IndexOutOfRange { index: i, size });
        }
        mask |= 1 << i;
    }
    Ok(mask)
}

/// A finite topological space given by minimal open neighborhoods.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTopology {
    labels: Vec<String>,
    min_open: Vec<u64>,
}

impl FiniteTopology {
    pub fn new(labels: Vec<String>, min_open_sets: Vec<Vec<usize>>) -> Result<Self, TopologyError> {
        let n = labels.len();
        if n == 0 {
            return Err(TopologyError::Empty);
        }
        if n > MAX_POINTS {
            return Err(TopologyError::TooManyPoints(n));
        }
        if min_open_sets.len() != n {
            return Err(TopologyError::CountMismatch { points: n, min_open: min_open_sets.len() });
        }
        let mut min_open = Vec::with_capacity(n);
        for set in &min_open_sets {
            min_open.push(vec_to_mask(set, n)?);
        }
        let top = FiniteTopology { labels, min_open };
        top.check_axioms()?;
        Ok(top)
    }

    pub(crate) fn from_masks(labels: Vec<String>, min_open: Vec<u64>) -> Result<Self, TopologyError> {
        let top = FiniteTopology { labels, min_open };
        top.check_axioms()?;
        Ok(top)
    }

    fn check_axioms(&self) -> Result<(), TopologyError> {
        let n = self.len();
        for x in 0..n {
            if self.min_open[x] >> x & 1 == 0 {
                return Err(TopologyError::PointNotInMinOpen { point: x });
            }
        }
        for x in 0..n {
            for y in mask_to_vec(self.min_open[x]) {
                if self.min_open[y] & !self.min_open[x] != 0 {
                    return Err(TopologyError::NotAlexandrov { x, y });
                }
            }
        }
        Ok(())
    }

    /// The discrete topology on n points: every singleton is open.
    pub fn discrete(n: usize) -> Result<Self, TopologyError> {
        let labels = (0..n).map(|i| format!("p{i}")).collect();
        Self::discrete_labeled(labels)
    }

    pub fn discrete_labeled(labels: Vec<String>) -> Result<Self, TopologyError> {
        let n = labels.len();
        if n == 0 {
            return Err(TopologyError::Empty);
        }
        if n > MAX_POINTS {
            return Err(TopologyError::TooManyPoints(n));
        }
        let min_open = (0..n).map(|i| 1u64 << i).collect();
        Ok(FiniteTopology { labels, min_open })
    }

    /// The metric topology of a finite metric space, which is discrete.
    pub fn from_metric(space: &FiniteMetricSpace) -> Result<Self, TopologyError> {
        Self::discrete_labeled(space.labels().to_vec())
    }

    /// The indiscrete topology: only ∅ and the whole set are open.
    pub fn indiscrete(n: usize) -> Result<Self, TopologyError> {
        if n == 0 {
            return Err(TopologyError::Empty);
        }
        if n > MAX_POINTS {
            return Err(TopologyError::TooManyPoints(n));
        }
        let labels = (0..n).map(|i| format!("p{i}")).collect();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Ok(FiniteTopology { labels, min_open: vec![all; n] })
    }

    /// The Sierpiński space on points {a, b}: {a} open, {b} not.
    pub fn sierpinski() -> Self {
        FiniteTopology {
            labels: vec!["a".to_string(), "b".to_string()],
            min_open: vec![0b01, 0b11],
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn min_open(&self, x: usize) -> Vec<usize> {
        mask_to_vec(self.min_open[x])
    }

    pub fn min_open_sets(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|x| self.min_open(x)).collect()
    }

    #[inline]
    pub(crate) fn min_open_mask(&self, x: usize) -> u64 {
        self.min_open[x]
    }

    pub(crate) fn universe_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// A set is open iff it contains the minimal neighborhood of each of its
    /// points.
    pub(crate) fn is_open_mask(&self, set: u64) -> bool {
        for x in mask_to_vec(set) {
            if self.min_open[x] & !set != 0 {
                return false;
            }
        }
        true
    }

    pub fn is_open(&self, set: &[usize]) -> Result<bool, TopologyError> {
        Ok(self.is_open_mask(vec_to_mask(set, self.len())?))
    }

    pub(crate) fn is_closed_mask(&self, set: u64) -> bool {
        self.is_open_mask(self.universe_mask() & !set)
    }

    pub fn is_closed(&self, set: &[usize]) -> Result<bool, TopologyError> {
        Ok(self.is_closed_mask(vec_to_mask(set, self.len())?))
    }

    /// cl(S) = { z : min_open(z) meets S }.
    pub(crate) fn closure_mask(&self, set: u64) -> u64 {
        let mut out = 0u64;
        for z in 0..self.len() {
            if self.min_open[z] & set != 0 {
                out |= 1 << z;
            }
        }
        out
    }

    pub fn closure(&self, set: &[usize]) -> Result<Vec<usize>, TopologyError> {
        Ok(mask_to_vec(self.closure_mask(vec_to_mask(set, self.len())?)))
    }

    /// All open sets, by scanning every subset. Exponential; guarded.
    pub(crate) fn open_set_masks(&self) -> Result<Vec<u64>, TopologyError> {
        let n = self.len();
        if n > MAX_ENUMERATION_POINTS {
            return Err(TopologyError::EnumerationTooLarge(n));
        }
        let universe = self.universe_mask();
        let mut out = Vec::new();
        for set in 0..=universe {
            if self.is_open_mask(set) {
                out.push(set);
            }
        }
        Ok(out)
    }

    pub fn open_sets(&self) -> Result<Vec<Vec<usize>>, TopologyError> {
        Ok(self.open_set_masks()?.into_iter().map(mask_to_vec).collect())
    }

    /// Hausdorff test by disjoint minimal neighborhoods. On finite spaces
    /// this forces the topology to be discrete.
    pub fn is_hausdorff(&self) -> bool {
        self.hausdorff_failure().is_none()
    }

    pub(crate) fn hausdorff_failure(&self) -> Option<(usize, usize)> {
        for x in 0..self.len() {
            for y in x + 1..self.len() {
                if self.min_open[x] & self.min_open[y] != 0 {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Product topology: minimal neighborhood of (x, y) is the box
    /// min_open(x) × min_open(y). Point (x, y) has index x·|Y| + y.
    pub fn product(&self, other: &FiniteTopology) -> Result<FiniteTopology, TopologyError> {
        let n = self.len();
        let m = other.len();
        if n * m > MAX_POINTS {
            return Err(TopologyError::TooManyPoints(n * m));
        }
        let mut labels = Vec::with_capacity(n * m);
        let mut min_open = Vec::with_capacity(n * m);
        for x in 0..n {
            for y in 0..m {
                labels.push(format!("({},{})", self.labels[x], other.labels[y]));
                let mut mask = 0u64;
                for a in mask_to_vec(self.min_open[x]) {
                    for b in mask_to_vec(other.min_open[y]) {
                        mask |= 1 << (a * m + b);
                    }
                }
                min_open.push(mask);
            }
        }
        Ok(FiniteTopology { labels, min_open })
    }

    /// Subspace topology on the given points, reindexed in their sorted
    /// order: minimal neighborhoods are intersected with the subset.
    pub fn subspace(&self, members: &[usize]) -> Result<FiniteTopology, TopologyError> {
        if members.is_empty() {
            return Err(TopologyError::Empty);
        }
        let mask = vec_to_mask(members, self.len())?;
        let kept = mask_to_vec(mask);
        let position: std::collections::BTreeMap<usize, usize> =
            kept.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let labels = kept.iter().map(|&old| self.labels[old].clone()).collect();
        let min_open = kept
            .iter()
            .map(|&old| {
                let mut m = 0u64;
                for p in mask_to_vec(self.min_open[old] & mask) {
                    m |= 1 << position[&p];
                }
                m
            })
            .collect();
        Ok(FiniteTopology { labels, min_open })
    }
}

/// Enumerates every topology on n labeled points (n ≤ 4) by scanning all
/// candidate minimal-neighborhood assignments.
pub fn enumerate_topologies(n: usize) -> Result<Vec<FiniteTopology>, TopologyError> {
    if n == 0 {
        return Err(TopologyError::Empty);
    }
    if n > 4 {
        return Err(TopologyError::TooManyPoints(n));
    }
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut out = Vec::new();
    let universe: u64 = (1 << n) - 1;
    let mut assignment = vec![0u64; n];
    fn rec(
        x: usize,
        n: usize,
        universe: u64,
        assignment: &mut Vec<u64>,
        labels: &[String],
        out: &mut Vec<FiniteTopology>,
    ) {
        if x == n {
            if let Ok(top) = FiniteTopology::from_masks(labels.to_vec(), assignment.clone()) {
                out.push(top);
            }
            return;
        }
        for set in 0..=universe {
            if set >> x & 1 == 1 {
                assignment[x] = set;
                rec(x + 1, n, universe, assignment, labels, out);
            }
        }
    }
    rec(0, n, universe, &mut assignment, &labels, &mut out);
    Ok(out)
}

/// A set-valued map between finite topological spaces: each source point
/// carries a nonempty subset of the target.
#[derive(Debug, Clone, PartialEq)]
pub struct SetValuedMap {
    source: Arc<FiniteTopology>,
    target: Arc<FiniteTopology>,
    image: Vec<u64>,
}

impl SetValuedMap {
    pub fn new(
        source: Arc<FiniteTopology>,
        target: Arc<FiniteTopology>,
        images: Vec<Vec<usize>>,
    ) -> Result<Self, TopologyError> {
        if images.len() != source.len() {
            return Err(TopologyError::SizeMismatch(format!(
                "{} image sets for {} source points",
                images.len(),
                source.len()
            )));
        }
        let mut image = Vec::with_capacity(images.len());
        for (x, set) in images.iter().enumerate() {
            let mask = vec_to_mask(set, target.len())?;
            if mask == 0 {
                return Err(TopologyError::EmptyImage(x));
            }
            image.push(mask);
        }
        Ok(SetValuedMap { source, target, image })
    }

    pub(crate) fn from_masks(
        source: Arc<FiniteTopology>,
        target: Arc<FiniteTopology>,
        image: Vec<u64>,
    ) -> Self {
        debug_assert!(image.iter().all(|&m| m != 0));
        SetValuedMap { source, target, image }
    }

    /// Views a relation's incidence rows as a set-valued map. Every row must
    /// be nonempty.
    pub fn from_incidence(
        inc: &IncidenceMatrix,
        source: Arc<FiniteTopology>,
        target: Arc<FiniteTopology>,
    ) -> Result<Self, TopologyError> {
        if inc.rows() != source.len() || inc.cols() != target.len() {
            return Err(TopologyError::SizeMismatch(format!(
                "{}x{} incidence between topologies on {} and {} points",
                inc.rows(),
                inc.cols(),
                source.len(),
                target.len()
            )));
        }
        let images = (0..inc.rows()).map(|i| inc.row_cells(i)).collect();
        SetValuedMap::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<FiniteTopology> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteTopology> {
        &self.target
    }

    pub fn image(&self, x: usize) -> Vec<usize> {
        mask_to_vec(self.image[x])
    }

    pub fn images(&self) -> Vec<Vec<usize>> {
        (0..self.image.len()).map(|x| self.image(x)).collect()
    }

    #[inline]
    pub(crate) fn image_mask(&self, x: usize) -> u64 {
        self.image[x]
    }

    pub(crate) fn full_preimage_mask(&self, d: u64) -> u64 {
        let mut out = 0u64;
        for (x, &img) in self.image.iter().enumerate() {
            if img & d != 0 {
                out |= 1 << x;
            }
        }
        out
    }

    pub(crate) fn small_preimage_mask(&self, d: u64) -> u64 {
        let mut out = 0u64;
        for (x, &img) in self.image.iter().enumerate() {
            if img & !d == 0 {
                out |= 1 << x;
            }
        }
        out
    }

    /// f⁻₋(D) = { x : f(x) ∩ D ≠ ∅ }.
    pub fn full_preimage(&self, d: &[usize]) -> Result<Vec<usize>, TopologyError> {
        Ok(mask_to_vec(self.full_preimage_mask(vec_to_mask(d, self.target.len())?)))
    }

    /// f⁻₊(D) = { x : f(x) ⊆ D }.
    pub fn small_preimage(&self, d: &[usize]) -> Result<Vec<usize>, TopologyError> {
        Ok(mask_to_vec(self.small_preimage_mask(vec_to_mask(d, self.target.len())?)))
    }
}

/// Where a semicontinuity check failed: the target set whose preimage
/// misbehaves, and a source point witnessing the failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemicontinuityWitness {
    /// Open (for lsc) or closed (for usc) subset of the target.
    pub target_set: Vec<usize>,
    /// Point of the full preimage whose neighborhood escapes it (lsc), or
    /// point of the preimage's closure that lies outside it (usc).
    pub point: usize,
}

/// Criterion decider: f is lower semicontinuous iff the full preimage of
/// every open target set is open. Reduces to minimal open neighborhoods,
/// since full preimages distribute over unions.
pub fn check_lower_semicontinuous(f: &SetValuedMap) -> Result<(), SemicontinuityWitness> {
    let src = &f.source;
    let tgt = &f.target;
    for y in 0..tgt.len() {
        let u = tgt.min_open_mask(y);
        let pre = f.full_preimage_mask(u);
        if !src.is_open_mask(pre) {
            let x = mask_to_vec(pre)
                .into_iter()
                .find(|&x| src.min_open_mask(x) & !pre != 0)
                .expect("some preimage point must witness non-openness");
            return Err(SemicontinuityWitness { target_set: mask_to_vec(u), point: x });
        }
    }
    Ok(())
}

pub fn is_lower_semicontinuous(f: &SetValuedMap) -> bool {
    check_lower_semicontinuous(f).is_ok()
}

/// Criterion decider: f is upper semicontinuous iff the full preimage of
/// every closed target set is closed. Reduces to point closures, which
/// generate all closed sets under the finite unions that full preimages
/// respect.
pub fn check_upper_semicontinuous(f: &SetValuedMap) -> Result<(), SemicontinuityWitness> {
    let src = &f.source;
    let tgt = &f.target;
    for y in 0..tgt.len() {
        let w = tgt.closure_mask(1 << y);
        let pre = f.full_preimage_mask(w);
        if !src.is_closed_mask(pre) {
            let x = mask_to_vec(src.closure_mask(pre) & !pre)
                .into_iter()
                .next()
                .expect("some closure point must witness non-closedness");
            return Err(SemicontinuityWitness { target_set: mask_to_vec(w), point: x });
        }
    }
    Ok(())
}

pub fn is_upper_semicontinuous(f: &SetValuedMap) -> bool {
    check_upper_semicontinuous(f).is_ok()
}

pub fn is_continuous(f: &SetValuedMap) -> bool {
    is_lower_semicontinuous(f) && is_upper_semicontinuous(f)
}

/// Pointwise definition of lower semicontinuity, evaluated by brute force
/// over all open sets: at every x, for every open U meeting f(x) there is an
/// open V around x all of whose points' images meet U.
///
/// Independent of [`check_lower_semicontinuous`]; the suite asserts the two
/// agree.
pub fn lower_semicontinuous_pointwise(f: &SetValuedMap) -> Result<bool, TopologyError> {
    let opens_src = f.source.open_set_masks()?;
    let opens_tgt = f.target.open_set_masks()?;
    for x in 0..f.source.len() {
        for &u in &opens_tgt {
            if f.image_mask(x) & u == 0 {
                continue;
            }
            let ok = opens_src.iter().any(|&v| {
                v >> x & 1 == 1 && mask_to_vec(v).into_iter().all(|x2| f.image_mask(x2) & u != 0)
            });
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Pointwise definition of upper semicontinuity by brute force: at every x,
/// for every open U containing f(x) there is an open V around x with
/// f(V) ⊆ U.
pub fn upper_semicontinuous_pointwise(f: &SetValuedMap) -> Result<bool, TopologyError> {
    let opens_src = f.source.open_set_masks()?;
    let opens_tgt = f.target.open_set_masks()?;
    for x in 0..f.source.len() {
        for &u in &opens_tgt {
            if f.image_mask(x) & !u != 0 {
                continue;
            }
            let ok = opens_src.iter().any(|&v| {
                v >> x & 1 == 1 && mask_to_vec(v).into_iter().all(|x2| f.image_mask(x2) & !u == 0)
            });
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// g∘f: applies f first, then unions g over the intermediate image.
pub fn compose_sv(f: &SetValuedMap, g: &SetValuedMap) -> Result<SetValuedMap, TopologyError> {
    if f.target.as_ref() != g.source.as_ref() {
        return Err(TopologyError::SizeMismatch(
            "middle topologies of a composition must match".to_string(),
        ));
    }
    let image = (0..f.source.len())
        .map(|x| {
            let mut mask = 0u64;
            for y in mask_to_vec(f.image_mask(x)) {
                mask |= g.image_mask(y);
            }
            mask
        })
        .collect();
    Ok(SetValuedMap::from_masks(f.source.clone(), g.target.clone(), image))
}

/// f restricted to a nonempty subset of its source, which carries the
/// subspace topology.
pub fn restrict_sv(f: &SetValuedMap, members: &[usize]) -> Result<SetValuedMap, TopologyError> {
    let sub = Arc::new(f.source.subspace(members)?);
    let mask = vec_to_mask(members, f.source.len())?;
    let kept = mask_to_vec(mask);
    let image = kept.iter().map(|&old| f.image_mask(old)).collect();
    Ok(SetValuedMap::from_masks(sub, f.target.clone(), image))
}

/// Which of the semicontinuity families a correspondence belongs to. The
/// continuous family is the conjunction by definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMembership {
    pub us: bool,
    pub ls: bool,
    pub rc: bool,
}

/// Runs the semicontinuity deciders on a doubly-surjective incidence matrix
/// and on its transpose, as set-valued maps between the given topologies.
pub fn classify_incidence(
    inc: &IncidenceMatrix,
    top_x: &Arc<FiniteTopology>,
    top_y: &Arc<FiniteTopology>,
) -> Result<FamilyMembership, TopologyError> {
    let forward = SetValuedMap::from_incidence(inc, top_x.clone(), top_y.clone())?;
    let backward = SetValuedMap::from_incidence(&inc.transpose(), top_y.clone(), top_x.clone())?;
    let us = is_upper_semicontinuous(&forward) && is_upper_semicontinuous(&backward);
    let ls = is_lower_semicontinuous(&forward) && is_lower_semicontinuous(&backward);
    Ok(FamilyMembership { us, ls, rc: us && ls })
}

/// Classifies a correspondence between metric spaces against explicit
/// topologies on its endpoints.
pub fn classify_correspondence(
    r: &Correspondence,
    top_x: &Arc<FiniteTopology>,
    top_y: &Arc<FiniteTopology>,
) -> Result<FamilyMembership, TopologyError> {
    classify_incidence(r.as_relation().incidence(), top_x, top_y)
}

/// Whether the relation's cell set is open in the product topology.
pub fn is_open_relation(
    inc: &IncidenceMatrix,
    top_x: &Arc<FiniteTopology>,
    top_y: &Arc<FiniteTopology>,
) -> Result<bool, TopologyError> {
    if inc.rows() != top_x.len() || inc.cols() != top_y.len() {
        return Err(TopologyError::SizeMismatch(format!(
            "{}x{} incidence between topologies on {} and {} points",
            inc.rows(),
            inc.cols(),
            top_x.len(),
            top_y.len()
        )));
    }
    for (x, y) in inc.cells() {
        for a in mask_to_vec(top_x.min_open_mask(x)) {
            for b in mask_to_vec(top_y.min_open_mask(y)) {
                if !inc.get(a, b) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether the relation's cell set is closed in the product topology.
pub fn is_closed_relation(
    inc: &IncidenceMatrix,
    top_x: &Arc<FiniteTopology>,
    top_y: &Arc<FiniteTopology>,
) -> Result<bool, TopologyError> {
    if inc.rows() != top_x.len() || inc.cols() != top_y.len() {
        return Err(TopologyError::SizeMismatch(format!(
            "{}x{} incidence between topologies on {} and {} points",
            inc.rows(),
            inc.cols(),
            top_x.len(),
            top_y.len()
        )));
    }
    // (x,y) is in the closure iff every basic box around it meets the set;
    // the minimal box suffices.
    for x in 0..inc.rows() {
        for y in 0..inc.cols() {
            if inc.get(x, y) {
                continue;
            }
            let box_meets = mask_to_vec(top_x.min_open_mask(x)).into_iter().any(|a| {
                mask_to_vec(top_y.min_open_mask(y)).into_iter().any(|b| inc.get(a, b))
            });
            if box_meets {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionAuditReport {
    pub opens_checked: usize,
    pub failures: Vec<Vec<usize>>,
}

/// Verifies on the given pair that the projection X × Y → X maps every open
/// set of the product to an open set.
pub fn projection_is_open_audit(
    top_x: &FiniteTopology,
    top_y: &FiniteTopology,
) -> Result<ProjectionAuditReport, TopologyError> {
    let product = top_x.product(top_y)?;
    let opens = product.open_set_masks()?;
    let m = top_y.len();
    let mut failures = Vec::new();
    for &open in &opens {
        let mut projected = 0u64;
        for p in mask_to_vec(open) {
            projected |= 1 << (p / m);
        }
        if !top_x.is_open_mask(projected) {
            failures.push(mask_to_vec(open));
        }
    }
    Ok(ProjectionAuditReport { opens_checked: opens.len(), failures })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosedGraphAuditReport {
    pub maps_checked: usize,
    pub closed_graphs: usize,
    /// Images of a closed-graph map that failed to be usc, if any.
    pub counterexample: Option<Vec<Vec<usize>>>,
}

/// Exhaustively verifies that every set-valued map with a closed graph in
/// X × Y is upper semicontinuous, for a compact (finite) Hausdorff source.
/// Rejects non-Hausdorff sources up front.
pub fn closed_graph_usc_audit(
    top_x: &Arc<FiniteTopology>,
    top_y: &Arc<FiniteTopology>,
) -> Result<ClosedGraphAuditReport, TopologyError> {
    if let Some((x, y)) = top_x.hausdorff_failure() {
        return Err(TopologyError::NotHausdorff { x, y });
    }
    let n = top_x.len();
    let m = top_y.len();
    if n * m > 16 {
        return Err(TopologyError::EnumerationTooLarge(n * m));
    }
    let mut maps_checked = 0usize;
    let mut closed_graphs = 0usize;
    let mut counterexample = None;
    let choices = (1u64 << m) - 1; // nonempty images
    let mut image = vec![1u64; n];
    'outer: loop {
        maps_checked += 1;
        let mut inc = IncidenceMatrix::empty(n, m);
        for (x, &img) in image.iter().enumerate() {
            for y in mask_to_vec(img) {
                inc.set(x, y);
            }
        }
        if is_closed_relation(&inc, top_x, top_y)? {
            closed_graphs += 1;
            let f = SetValuedMap::from_masks(top_x.clone(), top_y.clone(), image.clone());
            if !is_upper_semicontinuous(&f) && counterexample.is_none() {
                counterexample = Some(f.images());
            }
        }
        // next image vector
        for slot in image.iter_mut() {
            if *slot < choices {
                *slot += 1;
                continue 'outer;
            }
            *slot = 1;
        }
        break;
    }
    Ok(ClosedGraphAuditReport { maps_checked, closed_graphs, counterexample })
}

/// Every set-valued map between the two topologies, as image vectors.
pub fn enumerate_set_valued_maps(
    source: &Arc<FiniteTopology>,
    target: &Arc<FiniteTopology>,
) -> Result<Vec<SetValuedMap>, TopologyError> {
    let n = source.len();
    let m = target.len();
    if n * m > 16 {
        return Err(TopologyError::EnumerationTooLarge(n * m));
    }
    let choices = (1u64 << m) - 1;
    let mut out = Vec::new();
    let mut image = vec![1u64; n];
    'outer: loop {
        out.push(SetValuedMap::from_masks(source.clone(), target.clone(), image.clone()));
        for slot in image.iter_mut() {
            if *slot < choices {
                *slot += 1;
                continue 'outer;
            }
            *slot = 1;
        }
        break;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(t: FiniteTopology) -> Arc<FiniteTopology> {
        Arc::new(t)
    }

    #[test]
    fn discrete_and_metric_topologies() {
        let one = FiniteTopology::discrete(1).unwrap();
        assert_eq!(one.min_open(0), vec![0]);
        let space = FiniteMetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let top = FiniteTopology::from_metric(&space).unwrap();
        assert!(top.is_hausdorff());
        assert_eq!(top.min_open(1), vec![1]);
    }

    #[test]
    fn sierpinski_axioms() {
        let s = FiniteTopology::sierpinski();
        assert_eq!(s.min_open(0), vec![0]);
        assert_eq!(s.min_open(1), vec![0, 1]);
        assert!(!s.is_hausdorff());
        // Opens: ∅, {a}, {a,b}
        assert_eq!(s.open_set_masks().unwrap(), vec![0b00, 0b01, 0b11]);
    }

    #[test]
    fn alexandrov_consistency_is_enforced() {
        // 1 in min_open(0) but min_open(1) = {1,2} escapes min_open(0) = {0,1}.
        let err = FiniteTopology::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0, 1], vec![1, 2], vec![2]],
        )
        .unwrap_err();
        assert!(matches!(err, TopologyError::NotAlexandrov { x: 0, y: 1 }));
        let err = FiniteTopology::new(vec!["a".into()], vec![vec![]]).unwrap_err();
        assert!(matches!(err, TopologyError::PointNotInMinOpen { point: 0 }));
    }

    #[test]
    fn topology_count_on_three_points_is_29() {
        assert_eq!(enumerate_topologies(1).unwrap().len(), 1);
        assert_eq!(enumerate_topologies(2).unwrap().len(), 4);
        assert_eq!(enumerate_topologies(3).unwrap().len(), 29);
    }

    fn sierpinski_map() -> SetValuedMap {
        // f: a ↦ {b}, b ↦ {a, b} from the Sierpiński space to itself.
        let s = arc(FiniteTopology::sierpinski());
        SetValuedMap::new(s.clone(), s, vec![vec![1], vec![0, 1]]).unwrap()
    }

    #[test]
    fn preimage_examples() {
        let f = sierpinski_map();
        assert_eq!(f.full_preimage(&[0]).unwrap(), vec![1]);
        assert_eq!(f.full_preimage(&[0, 1]).unwrap(), vec![0, 1]);
        assert_eq!(f.full_preimage(&[]).unwrap(), Vec::<usize>::new());
        assert_eq!(f.small_preimage(&[1]).unwrap(), vec![0]);
        assert_eq!(f.small_preimage(&[0, 1]).unwrap(), vec![0, 1]);
        assert_eq!(f.small_preimage(&[]).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn discrete_source_makes_everything_semicontinuous() {
        let d2 = arc(FiniteTopology::discrete(2).unwrap());
        let d3 = arc(FiniteTopology::discrete(3).unwrap());
        for f in enumerate_set_valued_maps(&d2, &d3).unwrap() {
            assert!(is_lower_semicontinuous(&f));
            assert!(is_upper_semicontinuous(&f));
            assert!(is_continuous(&f));
        }
    }

    #[test]
    fn identity_map_is_continuous_on_any_topology() {
        for top in enumerate_topologies(3).unwrap() {
            let t = arc(top);
            let id = SetValuedMap::new(
                t.clone(),
                t.clone(),
                (0..t.len()).map(|i| vec![i]).collect(),
            )
            .unwrap();
            assert!(is_continuous(&id));
        }
    }

    #[test]
    fn sierpinski_constant_map_is_continuous() {
        // f: a ↦ {b}, b ↦ {b} from the Sierpiński space to a discrete pair.
        let s = arc(FiniteTopology::sierpinski());
        let d = arc(FiniteTopology::discrete(2).unwrap());
        let f = SetValuedMap::new(s, d, vec![vec![1], vec![1]]).unwrap();
        assert!(is_lower_semicontinuous(&f));
        assert!(is_upper_semicontinuous(&f));
        assert!(lower_semicontinuous_pointwise(&f).unwrap());
        assert!(upper_semicontinuous_pointwise(&f).unwrap());
    }

    #[test]
    fn lsc_holds_but_usc_fails_on_a_sierpinski_instance() {
        // f: a ↦ {c, d}, b ↦ {d} from the Sierpiński space to a discrete
        // pair: full preimage of the closed {c} is {a}, not closed.
        let s = arc(FiniteTopology::sierpinski());
        let d = arc(FiniteTopology::discrete(2).unwrap());
        let f = SetValuedMap::new(s, d, vec![vec![0, 1], vec![1]]).unwrap();
        assert!(is_lower_semicontinuous(&f));
        let w = check_upper_semicontinuous(&f).unwrap_err();
        assert_eq!(w.target_set, vec![0]);
        assert!(!is_continuous(&f));
        // The pointwise route agrees.
        assert!(lower_semicontinuous_pointwise(&f).unwrap());
        assert!(!upper_semicontinuous_pointwise(&f).unwrap());
    }

    #[test]
    fn lsc_failure_carries_a_witness() {
        // f: a ↦ {d}, b ↦ {c} into a discrete pair: preimage of {c} is {b},
        // which is not open in the Sierpiński source.
        let s = arc(FiniteTopology::sierpinski());
        let d = arc(FiniteTopology::discrete(2).unwrap());
        let f = SetValuedMap::new(s, d, vec![vec![1], vec![0]]).unwrap();
        let w = check_lower_semicontinuous(&f).unwrap_err();
        assert_eq!(w.target_set, vec![0]);
        assert_eq!(w.point, 1);
        assert!(!lower_semicontinuous_pointwise(&f).unwrap());
    }

    #[test]
    fn compose_with_identity_gives_same_images() {
        let f = sierpinski_map();
        let id = SetValuedMap::new(
            f.target().clone(),
            f.target().clone(),
            (0..f.target().len()).map(|i| vec![i]).collect(),
        )
        .unwrap();
        let g = compose_sv(&f, &id).unwrap();
        assert_eq!(g.images(), f.images());
    }

    #[test]
    fn restriction_carries_subspace_topology() {
        let s = arc(FiniteTopology::sierpinski());
        let d = arc(FiniteTopology::discrete(2).unwrap());
        let f = SetValuedMap::new(s, d, vec![vec![0, 1], vec![1]]).unwrap();
        let g = restrict_sv(&f, &[1]).unwrap();
        assert_eq!(g.source().len(), 1);
        assert_eq!(g.image(0), vec![1]);
        // A one-point subspace is discrete, so the restriction is continuous
        // even though f itself is not usc.
        assert!(is_continuous(&g));
    }

    #[test]
    fn classify_full_relation_as_continuous() {
        let s = arc(FiniteTopology::sierpinski());
        let d3 = arc(FiniteTopology::discrete(3).unwrap());
        let inc = IncidenceMatrix::full(2, 3);
        let m = classify_incidence(&inc, &s, &d3).unwrap();
        assert!(m.us && m.ls && m.rc);
    }

    #[test]
    fn classify_respects_the_lattice_on_small_instances() {
        let tops: Vec<_> = enumerate_topologies(2).unwrap().into_iter().map(arc).collect();
        for tx in &tops {
            for ty in &tops {
                for mask in 1u32..16 {
                    let cells: Vec<(usize, usize)> = (0..4)
                        .filter(|b| mask >> b & 1 == 1)
                        .map(|b| (b / 2, b % 2))
                        .collect();
                    let inc = IncidenceMatrix::from_cells(2, 2, &cells).unwrap();
                    if !inc.is_doubly_surjective() {
                        continue;
                    }
                    let m = classify_incidence(&inc, tx, ty).unwrap();
                    assert_eq!(m.rc, m.us && m.ls);
                }
            }
        }
    }

    #[test]
    fn open_relation_and_projection_audit() {
        let s = arc(FiniteTopology::sierpinski());
        let d = arc(FiniteTopology::discrete(2).unwrap());
        let full = IncidenceMatrix::full(2, 2);
        assert!(is_open_relation(&full, &s, &d).unwrap());
        let report = projection_is_open_audit(&s, &d).unwrap();
        assert!(report.failures.is_empty());
        assert!(report.opens_checked > 0);
    }

    #[test]
    fn closed_graph_audit_requires_hausdorff_source() {
        let s = arc(FiniteTopology::sierpinski());
        let d = arc(FiniteTopology::discrete(2).unwrap());
        assert!(matches!(
            closed_graph_usc_audit(&s, &d),
            Err(TopologyError::NotHausdorff { .. })
        ));
        let report = closed_graph_usc_audit(&d, &s).unwrap();
        assert!(report.counterexample.is_none());
        assert!(report.closed_graphs > 0);
    }

    #[test]
    fn product_topology_boxes() {
        let s = FiniteTopology::sierpinski();
        let d = FiniteTopology::discrete(2).unwrap();
        let p = s.product(&d).unwrap();
        assert_eq!(p.len(), 4);
        // min_open((b, p0)) = {a,b} × {p0} = {(a,p0), (b,p0)} = indices {0, 2}
        assert_eq!(p.min_open(2), vec![0, 2]);
    }

    #[test]
    fn subspace_reindexes_minimal_opens() {
        let s = FiniteTopology::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0], vec![0, 1], vec![0, 1, 2]],
        )
        .unwrap();
        let sub = s.subspace(&[1, 2]).unwrap();
        assert_eq!(sub.labels(), &["b".to_string(), "c".to_string()]);
        assert_eq!(sub.min_open(0), vec![0]);
        assert_eq!(sub.min_open(1), vec![0, 1]);
    }
}
