//! Acceptance battery: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test -p ghlab-core --test acceptance -- --nocapture`
//! to see the lines; sizes and tolerances are fixed here, not configurable.

use ghlab_core::suite::{checks, PropertyOutcome, SuiteOptions};
use std::time::Instant;

const SEED: u64 = 20250810;

fn full() -> SuiteOptions {
    SuiteOptions { seed: SEED, quick: false }
}

fn report(criterion: &str, outcomes: &[PropertyOutcome], started: Instant, limit_s: Option<f64>) {
    let elapsed = started.elapsed().as_secs_f64();
    let pass = outcomes.iter().all(|o| o.pass) && limit_s.map_or(true, |l| elapsed <= l);
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("[acceptance] {criterion}: {verdict} ({elapsed:.2}s)");
    for o in outcomes {
        assert!(o.pass, "{criterion} / {}: {}", o.name, o.detail);
    }
    if let Some(limit) = limit_s {
        assert!(elapsed <= limit, "{criterion}: took {elapsed:.2}s, limit {limit}s");
    }
}

#[test]
fn criterion_01_one_point_distance() {
    let t = Instant::now();
    let outcome = checks::gh_one_point_law(&full());
    report("criterion 01 one-point distance", &[outcome], t, Some(1.0));
}

#[test]
fn criterion_02_scaling_geodesic() {
    let t = Instant::now();
    let outcomes = [checks::gh_geodesic(&full()), checks::gh_scaling(&full())];
    report("criterion 02 scaling geodesic", &outcomes, t, Some(10.0));
}

#[test]
fn criterion_03_oracle_equivalence() {
    let t = Instant::now();
    let outcome = checks::gh_oracle_equivalence(&full());
    report("criterion 03 oracle equivalence", &[outcome], t, Some(60.0));
}

#[test]
fn criterion_04_pseudometric_axioms() {
    let t = Instant::now();
    let outcome = checks::gh_pseudometric_axioms(&full());
    report("criterion 04 pseudometric axioms", &[outcome], t, None);
}

#[test]
fn criterion_05_distortion_algebra() {
    let t = Instant::now();
    let outcomes = [
        checks::relations_monotonicity(&full()),
        checks::relations_subadditivity(&full()),
        checks::relations_closure_invariance(&full()),
        checks::relations_epsilon_limit(&full()),
    ];
    report("criterion 05 distortion algebra", &outcomes, t, None);
}

#[test]
fn criterion_06_zero_distortion_isometry() {
    let t = Instant::now();
    let outcome = checks::relations_zero_distortion_isometry(&full());
    report("criterion 06 zero distortion iff isometry", &[outcome], t, None);
}

#[test]
fn criterion_07_semicontinuity_criteria() {
    let t = Instant::now();
    let outcome = checks::topology_criterion_definition_agreement(&full());
    report("criterion 07 semicontinuity criteria", &[outcome], t, Some(60.0));
}

#[test]
fn criterion_08_open_lsc_closed_usc() {
    let t = Instant::now();
    let outcomes = [
        checks::topology_open_implies_lsc(&full()),
        checks::topology_closed_graph_implies_usc(&full()),
    ];
    report("criterion 08 open implies lsc, closed graph implies usc", &outcomes, t, None);
}

#[test]
fn criterion_09_family_lattice() {
    let t = Instant::now();
    let outcomes = [
        checks::topology_family_lattice(&full()),
        checks::topology_composition_closure(&full()),
    ];
    report("criterion 09 family lattice and composition closure", &outcomes, t, None);
}

#[test]
fn criterion_10_discrete_collapse() {
    let t = Instant::now();
    let outcome = checks::gh_discrete_collapse(&full());
    report("criterion 10 discrete collapse", &[outcome], t, None);
}

#[test]
fn criterion_11_dense_subset_shadow() {
    let t = Instant::now();
    let outcomes = [
        checks::sampling_dense_subnet_decay(&full()),
        checks::sampling_delta1_law(&full()),
        checks::sampling_subnet_sandwich(&full()),
    ];
    report("criterion 11 dense-subset shadow", &outcomes, t, None);
}

#[test]
fn criterion_12_extension_contract() {
    let t = Instant::now();
    let outcome = checks::sampling_extension_contract(&full());
    report("criterion 12 extension contract", &[outcome], t, None);
}
