//! Finite metric spaces, relations and correspondences with their distortion
//! algebra, exact Gromov-Hausdorff distances with optimal-correspondence
//! certificates, finite topological spaces with semicontinuity deciders for
//! set-valued maps, and epsilon-net experiments on model compact spaces.
//!
//! Everything here works on explicit finite data: validated distance
//! matrices, boolean incidence matrices, and minimal-open-neighborhood
//! topologies. All values are immutable after construction and safe to share
//! across threads.

pub mod family;
pub mod gh;
pub mod io;
pub mod metric;
pub mod randgen;
pub mod relation;
pub mod sampling;
pub mod suite;
pub mod topology;

pub use family::{FamilyFilter, FamilyTag};
pub use gh::{
    gh_bounds, gh_exact, gh_feasible, gh_oracle, BoundStatus, GhOutcome, GhResult, SolverConfig,
};
pub use metric::{FiniteMetricSpace, Subset};
pub use relation::{Correspondence, IncidenceMatrix, Relation};
pub use topology::{FiniteTopology, SetValuedMap};
