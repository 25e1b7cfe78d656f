//! Correspondence families: the all-correspondences family, the
//! semicontinuity families (upper, lower, continuous) evaluated against the
//! discrete topologies carried by finite metric spaces, and user-supplied
//! custom families. A filter decides membership of a single correspondence;
//! the axiom checker probes whether a filter really is a family in the
//! categorical sense (identities, composition closure, inverse closure,
//! nonemptiness).

use crate::metric::FiniteMetricSpace;
use crate::relation::{enumerate_correspondence_incidences, Correspondence, Relation};
use crate::topology::{classify_incidence, FiniteTopology};
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTag {
    All,
    Us,
    Ls,
    Rc,
    Custom(String),
}

impl std::fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyTag::All => write!(f, "all"),
            FamilyTag::Us => write!(f, "us"),
            FamilyTag::Ls => write!(f, "ls"),
            FamilyTag::Rc => write!(f, "rc"),
            FamilyTag::Custom(name) => write!(f, "{name}"),
        }
    }
}

impl std::str::FromStr for FamilyTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(FamilyTag::All),
            "us" => Ok(FamilyTag::Us),
            "ls" => Ok(FamilyTag::Ls),
            "rc" => Ok(FamilyTag::Rc),
            other => Err(format!("unknown family {other:?} (expected all, us, ls or rc)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SemiKind {
    Upper,
    Lower,
    Continuous,
}

type CustomPredicate = Arc<dyn Fn(&Correspondence) -> bool + Send + Sync>;

enum FilterKind {
    All,
    /// Semicontinuity of the correspondence and its inverse, decided over
    /// the metric (hence discrete) topologies of its endpoint spaces.
    Semicontinuity(SemiKind),
    Custom(CustomPredicate),
}

/// A membership predicate for a family of correspondences, plus its tag.
pub struct FamilyFilter {
    tag: FamilyTag,
    kind: FilterKind,
}

impl std::fmt::Debug for FamilyFilter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FamilyFilter({})", self.tag)
    }
}

impl FamilyFilter {
    pub fn all() -> Self {
        FamilyFilter { tag: FamilyTag::All, kind: FilterKind::All }
    }

    pub fn upper_semicontinuous() -> Self {
        FamilyFilter { tag: FamilyTag::Us, kind: FilterKind::Semicontinuity(SemiKind::Upper) }
    }

    pub fn lower_semicontinuous() -> Self {
        FamilyFilter { tag: FamilyTag::Ls, kind: FilterKind::Semicontinuity(SemiKind::Lower) }
    }

    pub fn continuous() -> Self {
        FamilyFilter { tag: FamilyTag::Rc, kind: FilterKind::Semicontinuity(SemiKind::Continuous) }
    }

    pub fn custom(
        name: &str,
        pred: impl Fn(&Correspondence) -> bool + Send + Sync + 'static,
    ) -> Self {
        FamilyFilter {
            tag: FamilyTag::Custom(name.to_string()),
            kind: FilterKind::Custom(Arc::new(pred)),
        }
    }

    pub fn for_tag(tag: &FamilyTag) -> Option<Self> {
        match tag {
            FamilyTag::All => Some(Self::all()),
            FamilyTag::Us => Some(Self::upper_semicontinuous()),
            FamilyTag::Ls => Some(Self::lower_semicontinuous()),
            FamilyTag::Rc => Some(Self::continuous()),
            FamilyTag::Custom(_) => None,
        }
    }

    pub fn tag(&self) -> &FamilyTag {
        &self.tag
    }

    /// Membership of one correspondence. For the semicontinuity families the
    /// deciders genuinely run against the discrete metric topologies.
    pub fn accepts(&self, r: &Correspondence) -> bool {
        match &self.kind {
            FilterKind::All => true,
            FilterKind::Semicontinuity(kind) => {
                let top_x = Arc::new(
                    FiniteTopology::from_metric(r.source()).expect("metric topology fits"),
                );
                let top_y = Arc::new(
                    FiniteTopology::from_metric(r.target()).expect("metric topology fits"),
                );
                let m = classify_incidence(r.as_relation().incidence(), &top_x, &top_y)
                    .expect("shapes match by construction");
                match kind {
                    SemiKind::Upper => m.us,
                    SemiKind::Lower => m.ls,
                    SemiKind::Continuous => m.rc,
                }
            }
            FilterKind::Custom(pred) => pred(r),
        }
    }

    /// Whether the family provably contains every correspondence between
    /// finite metric spaces. True for the all-family and, since metric
    /// topologies on finite spaces are discrete and every set-valued map
    /// between discrete spaces is continuous, for the semicontinuity
    /// families as well. The solver uses this to keep its search on
    /// inclusion-minimal correspondences; the discrete-collapse checks in
    /// the suite confirm the claim against the actual deciders.
    pub fn accepts_all_correspondences(&self) -> bool {
        !matches!(self.kind, FilterKind::Custom(_))
    }
}

impl Clone for FamilyFilter {
    fn clone(&self) -> Self {
        FamilyFilter {
            tag: self.tag.clone(),
            kind: match &self.kind {
                FilterKind::All => FilterKind::All,
                FilterKind::Semicontinuity(k) => FilterKind::Semicontinuity(*k),
                FilterKind::Custom(p) => FilterKind::Custom(p.clone()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("family axiom check enumerates all correspondences and needs |X|·|Y| <= {max}, got {got}")]
    PairTooLarge { max: usize, got: usize },
}

const AXIOM_CHECK_MAX_CELLS: usize = 16;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyAxiomViolation {
    pub axiom: String,
    pub detail: String,
}

/// Result of probing a filter against the family axioms on sample spaces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyAxiomReport {
    pub family: FamilyTag,
    pub identities_checked: usize,
    pub pairs_checked: usize,
    pub members_seen: usize,
    pub compositions_checked: usize,
    pub violations: Vec<FamilyAxiomViolation>,
}

impl FamilyAxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks identity membership, nonemptiness per pair, inverse closure, and
/// composition closure of a filter over every correspondence between the
/// sample spaces. Reports counterexamples instead of stopping early.
pub fn check_family_axioms(
    filter: &FamilyFilter,
    spaces: &[Arc<FiniteMetricSpace>],
) -> Result<FamilyAxiomReport, FamilyError> {
    for a in spaces {
        for b in spaces {
            let cells = a.len() * b.len();
            if cells > AXIOM_CHECK_MAX_CELLS {
                return Err(FamilyError::PairTooLarge { max: AXIOM_CHECK_MAX_CELLS, got: cells });
            }
        }
    }
    let mut report = FamilyAxiomReport {
        family: filter.tag().clone(),
        identities_checked: 0,
        pairs_checked: 0,
        members_seen: 0,
        compositions_checked: 0,
        violations: Vec::new(),
    };
    for (i, space) in spaces.iter().enumerate() {
        report.identities_checked += 1;
        let id = Correspondence::identity(space.clone());
        if !filter.accepts(&id) {
            report.violations.push(FamilyAxiomViolation {
                axiom: "identity".to_string(),
                detail: format!("identity on sample space {i} is not a member"),
            });
        }
    }
    // Members between each ordered pair, reused for the closure checks.
    let mut members: Vec<Vec<Vec<Correspondence>>> =
        vec![vec![Vec::new(); spaces.len()]; spaces.len()];
    for (i, a) in spaces.iter().enumerate() {
        for (j, b) in spaces.iter().enumerate() {
            report.pairs_checked += 1;
            for inc in enumerate_correspondence_incidences(a.len(), b.len()) {
                let rel = Relation::new(a.clone(), b.clone(), inc).expect("nonempty");
                let corr = Correspondence::new(rel).expect("doubly surjective");
                if filter.accepts(&corr) {
                    members[i][j].push(corr);
                }
            }
            report.members_seen += members[i][j].len();
            if members[i][j].is_empty() {
                report.violations.push(FamilyAxiomViolation {
                    axiom: "nonempty".to_string(),
                    detail: format!("no member between sample spaces {i} and {j}"),
                });
            }
        }
    }
    for (i, row) in members.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            for corr in cell {
                if !filter.accepts(&corr.inverse()) {
                    report.violations.push(FamilyAxiomViolation {
                        axiom: "inverse".to_string(),
                        detail: format!(
                            "member between spaces {i} and {j} with cells {:?} has a non-member inverse",
                            corr.as_relation().cells()
                        ),
                    });
                }
            }
        }
    }
    for i in 0..spaces.len() {
        for j in 0..spaces.len() {
            for k in 0..spaces.len() {
                for sigma in &members[i][j] {
                    for tau in &members[j][k] {
                        report.compositions_checked += 1;
                        let composed = sigma.compose(tau).expect("correspondences compose");
                        if !filter.accepts(&composed) {
                            report.violations.push(FamilyAxiomViolation {
                                axiom: "composition".to_string(),
                                detail: format!(
                                    "composition of members ({i}->{j} and {j}->{k}) left the family"
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;

    fn two_point(d: f64) -> Arc<FiniteMetricSpace> {
        Arc::new(FiniteMetricSpace::from_matrix(vec![vec![0.0, d], vec![d, 0.0]]).unwrap())
    }

    fn three_point() -> Arc<FiniteMetricSpace> {
        Arc::new(
            FiniteMetricSpace::from_matrix(vec![
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.5],
                vec![2.0, 1.5, 0.0],
            ])
            .unwrap(),
        )
    }

    #[test]
    fn all_filter_satisfies_the_axioms() {
        let spaces = vec![two_point(1.0), two_point(3.0)];
        let report = check_family_axioms(&FamilyFilter::all(), &spaces).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert!(report.members_seen > 0);
    }

    #[test]
    fn continuous_filter_over_discrete_topologies_satisfies_the_axioms() {
        let spaces = vec![two_point(1.0), two_point(2.0)];
        let report = check_family_axioms(&FamilyFilter::continuous(), &spaces).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        // Over discrete topologies every correspondence is continuous, so
        // the member count matches the all-family.
        let all = check_family_axioms(&FamilyFilter::all(), &spaces).unwrap();
        assert_eq!(report.members_seen, all.members_seen);
    }

    #[test]
    fn single_valued_filter_fails_closure_on_unequal_sizes() {
        // "Functions only": every source point relates to exactly one target
        // point. Between spaces of unequal size this breaks the axioms.
        let filter = FamilyFilter::custom("functions", |r| {
            let inc = r.as_relation().incidence();
            (0..inc.rows()).all(|i| inc.row_cells(i).len() == 1)
        });
        let spaces = vec![two_point(1.0), three_point()];
        let report = check_family_axioms(&filter, &spaces).unwrap();
        assert!(!report.passed());
        let axioms: Vec<&str> = report.violations.iter().map(|v| v.axiom.as_str()).collect();
        // No function from 2 points covers 3 points: nonemptiness fails; and
        // a surjective function from 3 to 2 points has a non-function inverse.
        assert!(axioms.contains(&"nonempty"));
        assert!(axioms.contains(&"inverse"));
    }

    #[test]
    fn semicontinuity_filters_accept_every_correspondence_between_metric_spaces() {
        let x = three_point();
        let y = two_point(2.0);
        let full = Correspondence::full(x.clone(), y.clone());
        for filter in [
            FamilyFilter::all(),
            FamilyFilter::upper_semicontinuous(),
            FamilyFilter::lower_semicontinuous(),
            FamilyFilter::continuous(),
        ] {
            assert!(filter.accepts(&full));
            assert!(filter.accepts_all_correspondences());
        }
        let custom = FamilyFilter::custom("nothing", |_| false);
        assert!(!custom.accepts_all_correspondences());
        assert!(!custom.accepts(&full));
    }

    #[test]
    fn family_tag_parsing() {
        assert_eq!("us".parse::<FamilyTag>().unwrap(), FamilyTag::Us);
        assert!("bogus".parse::<FamilyTag>().is_err());
        assert_eq!(FamilyTag::Rc.to_string(), "rc");
    }
}
