//! The full property suite: every documented invariant of every module,
//! runnable as one battery with seeded instance generation. Each check
//! returns a pass/fail outcome with a counterexample description instead of
//! panicking, so the battery always runs to completion.
//!
//! The acceptance tests and the `suite` CLI subcommand both drive these
//! checks; sizes follow the documented budgets (exhaustive where stated,
//! seeded random elsewhere).

use crate::family::{check_family_axioms, FamilyFilter};
use crate::gh::{
    geodesic_probe, gh_bounds, gh_exact, gh_oracle, triangle_audit, BoundStatus, SolverConfig,
};
use crate::io::GhResultJson;
use crate::metric::FiniteMetricSpace;
use crate::randgen::{
    permuted_copy, random_correspondence, random_incidence, random_integer_metric_space,
    random_metric_space, random_relation,
};
use crate::relation::{
    enumerate_correspondence_incidences, Correspondence, IncidenceMatrix, Relation,
};
use crate::sampling::{
    circle_net, delta1_convergence, dense_subnet_experiment, default_epsilon_schedule,
    epsilon_limit_experiment, extend_correspondence, generate_net, interval_net, mesh_within,
    Model, NetSpec,
};
use crate::topology::{
    classify_incidence, closed_graph_usc_audit, compose_sv, enumerate_set_valued_maps,
    enumerate_topologies, is_closed_relation, is_continuous, is_lower_semicontinuous,
    is_open_relation, is_upper_semicontinuous, lower_semicontinuous_pointwise,
    projection_is_open_audit, restrict_sv, upper_semicontinuous_pointwise, FiniteTopology,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl PropertyOutcome {
    fn of(name: &str, failures: Vec<String>, checked: usize) -> Self {
        if failures.is_empty() {
            PropertyOutcome {
                name: name.to_string(),
                pass: true,
                detail: format!("{checked} instances"),
            }
        } else {
            PropertyOutcome {
                name: name.to_string(),
                pass: false,
                detail: format!(
                    "{} of {} instances failed; first: {}",
                    failures.len(),
                    checked,
                    failures[0]
                ),
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Reduced instance counts for fast smoke runs.
    pub quick: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, quick: false }
    }
}

impl SuiteOptions {
    fn count(&self, full: usize) -> usize {
        if self.quick {
            (full / 10).max(3)
        } else {
            full
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(salt))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub outcomes: Vec<PropertyOutcome>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }
}

/// Runs every property check and collects one outcome per property.
pub fn run_full_suite(opts: &SuiteOptions) -> SuiteReport {
    let checks: Vec<fn(&SuiteOptions) -> PropertyOutcome> = vec![
        checks::metric_definition1_equivalence,
        checks::metric_hausdorff_axioms,
        checks::metric_neighborhood_monotonicity,
        checks::metric_scale_composition,
        checks::relations_monotonicity,
        checks::relations_subadditivity,
        checks::relations_inverse_invariance,
        checks::relations_zero_distortion_isometry,
        checks::relations_epsilon_limit,
        checks::relations_closure_invariance,
        checks::relations_family_axioms,
        checks::gh_one_point_law,
        checks::gh_geodesic,
        checks::gh_oracle_equivalence,
        checks::gh_pseudometric_axioms,
        checks::gh_scaling,
        checks::gh_bound_sandwich,
        checks::gh_discrete_collapse,
        checks::topology_criterion_definition_agreement,
        checks::topology_open_implies_lsc,
        checks::topology_closed_graph_implies_usc,
        checks::topology_family_lattice,
        checks::topology_composition_closure,
        checks::topology_restriction,
        checks::topology_discrete_collapse,
        checks::topology_projection_open,
        checks::sampling_net_validity,
        checks::sampling_subnet_sandwich,
        checks::sampling_dense_subnet_decay,
        checks::sampling_delta1_law,
        checks::sampling_epsilon_limit_stabilization,
        checks::sampling_extension_contract,
        checks::cli_determinism,
    ];
    SuiteReport { outcomes: checks.iter().map(|c| c(opts)).collect() }
}

pub mod checks {
    use super::*;

    fn small_topologies(opts: &SuiteOptions) -> Vec<Arc<FiniteTopology>> {
        let mut tops: Vec<Arc<FiniteTopology>> = Vec::new();
        for n in 1..=3 {
            if opts.quick && n == 3 {
                // Quick mode keeps a representative sample of the 29.
                let all = enumerate_topologies(3).expect("n <= 4");
                for (i, t) in all.into_iter().enumerate() {
                    if i % 7 == 0 {
                        tops.push(Arc::new(t));
                    }
                }
            } else {
                for t in enumerate_topologies(n).expect("n <= 4") {
                    tops.push(Arc::new(t));
                }
            }
        }
        tops
    }

    /// The three formulas for the Hausdorff distance agree: max of directed
    /// sups, infimum over open-neighborhood radii, and infimum over closed-
    /// neighborhood radii, the infima computed by scanning the finite set of
    /// candidate radii.
    pub fn metric_definition1_equivalence(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(1);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        let sizes: &[usize] = if opts.quick { &[2, 4] } else { &[2, 3, 5, 8] };
        for &n in sizes {
            let space = random_metric_space(&mut rng, n, 10.0);
            // Distances from every point to every nonempty subset, tabled.
            let subsets: Vec<u32> = (1..(1u32 << n)).collect();
            let mut to_subset = vec![vec![0.0f64; n]; subsets.len()];
            for (si, &s) in subsets.iter().enumerate() {
                for x in 0..n {
                    let mut best = f64::INFINITY;
                    for a in 0..n {
                        if s >> a & 1 == 1 {
                            best = best.min(space.dist(x, a));
                        }
                    }
                    to_subset[si][x] = best;
                }
            }
            let mut candidates: Vec<f64> = space.matrix().into_iter().flatten().collect();
            candidates.sort_by(f64::total_cmp);
            candidates.dedup();
            for (ai, &a) in subsets.iter().enumerate() {
                for (bi, &b) in subsets.iter().enumerate() {
                    checked += 1;
                    let mut h = 0.0f64;
                    for x in 0..n {
                        if a >> x & 1 == 1 {
                            h = h.max(to_subset[bi][x]);
                        }
                        if b >> x & 1 == 1 {
                            h = h.max(to_subset[ai][x]);
                        }
                    }
                    let cond_open = |r: f64| {
                        (0..n).all(|x| {
                            (a >> x & 1 == 0 || to_subset[bi][x] < r)
                                && (b >> x & 1 == 0 || to_subset[ai][x] < r)
                        })
                    };
                    let cond_closed = |s: f64| {
                        (0..n).all(|x| {
                            (a >> x & 1 == 0 || to_subset[bi][x] <= s)
                                && (b >> x & 1 == 0 || to_subset[ai][x] <= s)
                        })
                    };
                    // inf over r > 0 of the open condition: the largest
                    // failing candidate (the condition holds on exactly
                    // (h, infinity)).
                    let inf_open = candidates
                        .iter()
                        .filter(|&&v| v > 0.0 && !cond_open(v))
                        .cloned()
                        .fold(0.0, f64::max);
                    // inf over s >= 0 of the closed condition: the smallest
                    // satisfying candidate (attained).
                    let inf_closed = candidates
                        .iter()
                        .filter(|&&v| cond_closed(v))
                        .cloned()
                        .fold(f64::INFINITY, f64::min);
                    if inf_open != h || inf_closed != h {
                        failures.push(format!(
                            "n={n} A={a:b} B={b:b}: sup-formula {h}, open-inf {inf_open}, closed-inf {inf_closed}"
                        ));
                    }
                }
            }
        }
        // The same equivalence through the actual neighborhood operations on
        // a small space.
        let space = random_metric_space(&mut rng, 4, 6.0);
        let mut candidates: Vec<f64> = space.matrix().into_iter().flatten().collect();
        candidates.sort_by(f64::total_cmp);
        candidates.dedup();
        for a_mask in 1u32..16 {
            for b_mask in 1u32..16 {
                checked += 1;
                let a_idx: Vec<usize> = (0..4).filter(|&i| a_mask >> i & 1 == 1).collect();
                let b_idx: Vec<usize> = (0..4).filter(|&i| b_mask >> i & 1 == 1).collect();
                let a = space.subset(&a_idx).unwrap();
                let b = space.subset(&b_idx).unwrap();
                let h = a.hausdorff(&b);
                let cond_open = |r: f64| {
                    let ub = b.open_neighborhood(r).unwrap();
                    let ua = a.open_neighborhood(r).unwrap();
                    a.is_subset_of(&ub) && b.is_subset_of(&ua)
                };
                let inf_open = candidates
                    .iter()
                    .filter(|&&v| v > 0.0 && !cond_open(v))
                    .cloned()
                    .fold(0.0, f64::max);
                let cond_closed = |s: f64| {
                    let bb = b.closed_neighborhood(s).unwrap();
                    let ba = a.closed_neighborhood(s).unwrap();
                    a.is_subset_of(&bb) && b.is_subset_of(&ba)
                };
                let inf_closed = candidates
                    .iter()
                    .filter(|&&v| cond_closed(v))
                    .cloned()
                    .fold(f64::INFINITY, f64::min);
                if inf_open != h || inf_closed != h {
                    failures.push(format!(
                        "neighborhood route: A={a_idx:?} B={b_idx:?}: {h} vs {inf_open}/{inf_closed}"
                    ));
                }
            }
        }
        PropertyOutcome::of("metric.definition1-equivalence", failures, checked)
    }

    /// Hausdorff distance is a metric on the nonempty subsets of a finite
    /// space: symmetry, identity of indiscernibles, triangle inequality,
    /// exhaustively on a random 6-point space.
    pub fn metric_hausdorff_axioms(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(2);
        let n = 6usize;
        let space = random_metric_space(&mut rng, n, 9.0);
        let subsets: Vec<Vec<usize>> = (1..(1u32 << n))
            .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
            .collect();
        let k = subsets.len();
        let mut table = vec![vec![0.0f64; k]; k];
        for i in 0..k {
            let a = space.subset(&subsets[i]).unwrap();
            for j in 0..k {
                let b = space.subset(&subsets[j]).unwrap();
                table[i][j] = a.hausdorff(&b);
            }
        }
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for i in 0..k {
            for j in 0..k {
                checked += 1;
                if table[i][j] != table[j][i] {
                    failures.push(format!("symmetry fails at ({i},{j})"));
                }
                if (table[i][j] == 0.0) != (subsets[i] == subsets[j]) {
                    failures.push(format!("identity of indiscernibles fails at ({i},{j})"));
                }
            }
        }
        let stride = if opts.quick { 5 } else { 1 };
        for i in (0..k).step_by(stride) {
            for j in 0..k {
                for l in 0..k {
                    checked += 1;
                    if table[i][l] > table[i][j] + table[j][l] + TOL {
                        failures.push(format!("triangle fails at ({i},{j},{l})"));
                    }
                }
            }
        }
        PropertyOutcome::of("metric.hausdorff-axioms", failures, checked)
    }

    /// A ⊆ A' implies U_r(A) ⊆ U_r(A') and B_s(A) ⊆ B_s(A').
    pub fn metric_neighborhood_monotonicity(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(3);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for _ in 0..opts.count(50) {
            let n = rng.random_range(2..=7);
            let space = random_metric_space(&mut rng, n, 8.0);
            let sup_mask: u32 = rng.random_range(1..(1u32 << n));
            let mut sub_mask = sup_mask & rng.random_range(0..(1u32 << n));
            if sub_mask == 0 {
                sub_mask = 1 << sup_mask.trailing_zeros();
            }
            let small: Vec<usize> = (0..n).filter(|&i| sub_mask >> i & 1 == 1).collect();
            let large: Vec<usize> = (0..n).filter(|&i| sup_mask >> i & 1 == 1).collect();
            let a = space.subset(&small).unwrap();
            let a_big = space.subset(&large).unwrap();
            for _ in 0..4 {
                checked += 1;
                let r = rng.random_range(0.01..10.0);
                let open_ok =
                    a.open_neighborhood(r).unwrap().is_subset_of(&a_big.open_neighborhood(r).unwrap());
                let closed_ok = a
                    .closed_neighborhood(r)
                    .unwrap()
                    .is_subset_of(&a_big.closed_neighborhood(r).unwrap());
                if !open_ok || !closed_ok {
                    failures.push(format!("n={n} r={r}"));
                }
            }
        }
        PropertyOutcome::of("metric.neighborhood-monotonicity", failures, checked)
    }

    /// Scaling composes: scale(scale(X,λ),μ) = scale(X,λμ), exactly for
    /// dyadic factors and to within relative rounding for general ones.
    pub fn metric_scale_composition(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(4);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for _ in 0..opts.count(30) {
            let n = rng.random_range(2..=6);
            let space = random_metric_space(&mut rng, n, 5.0);
            for (lam, mu) in [(0.5, 2.0), (2.0, 4.0), (0.25, 0.5)] {
                checked += 1;
                let a = space.scale(lam).scale(mu);
                let b = space.scale(lam * mu);
                if a.matrix() != b.matrix() {
                    failures.push(format!("dyadic {lam}x{mu} on n={n}"));
                }
            }
            let lam: f64 = rng.random_range(0.1..3.0);
            let mu: f64 = rng.random_range(0.1..3.0);
            checked += 1;
            let a = space.scale(lam).scale(mu);
            let b = space.scale(lam * mu);
            let close = a
                .matrix()
                .into_iter()
                .flatten()
                .zip(b.matrix().into_iter().flatten())
                .all(|(p, q)| (p - q).abs() <= 1e-12 * (1.0 + q.abs()));
            if !close {
                failures.push(format!("general {lam}x{mu} on n={n}"));
            }
        }
        PropertyOutcome::of("metric.scale-composition", failures, checked)
    }

    fn pair_gap_table(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Vec<f64> {
        let (n, m) = (x.len(), y.len());
        let cells = n * m;
        let mut t = vec![0.0; cells * cells];
        for c1 in 0..cells {
            for c2 in 0..cells {
                t[c1 * cells + c2] =
                    (x.dist(c1 / m, c2 / m) - y.dist(c1 % m, c2 % m)).abs();
            }
        }
        t
    }

    fn dis_of_mask(mask: u32, cells: usize, gaps: &[f64]) -> f64 {
        let mut dis = 0.0f64;
        let mut w = mask;
        let mut bits = [0usize; 16];
        let mut count = 0;
        while w != 0 {
            bits[count] = w.trailing_zeros() as usize;
            count += 1;
            w &= w - 1;
        }
        for i in 0..count {
            for j in i..count {
                dis = dis.max(gaps[bits[i] * cells + bits[j]]);
            }
        }
        dis
    }

    /// Monotonicity of distortion under inclusion: exhaustive over all
    /// nested relation pairs on a 3x3 instance, plus random nested pairs on
    /// 5x5 instances.
    pub fn relations_monotonicity(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(5);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        let x = random_metric_space(&mut rng, 3, 5.0);
        let y = random_metric_space(&mut rng, 3, 5.0);
        let gaps = pair_gap_table(&x, &y);
        let mut dis_table = vec![0.0f64; 512];
        for mask in 1u32..512 {
            dis_table[mask as usize] = dis_of_mask(mask, 9, &gaps);
        }
        for sigma in 1u32..512 {
            // Enumerate nonempty sub-relations of sigma.
            let mut tau = sigma;
            loop {
                checked += 1;
                if dis_table[tau as usize] > dis_table[sigma as usize] {
                    failures.push(format!("3x3 sigma={sigma:b} tau={tau:b}"));
                }
                if tau == 0 {
                    break;
                }
                tau = (tau - 1) & sigma;
                if tau == 0 {
                    break;
                }
            }
        }
        for _ in 0..opts.count(100) {
            let x = random_integer_metric_space(&mut rng, 5, 9);
            let y = random_integer_metric_space(&mut rng, 5, 9);
            let sigma = random_incidence(&mut rng, 5, 5, 0.5);
            let rel = Relation::new(x.clone(), y.clone(), sigma.clone()).unwrap();
            let cells = sigma.cells();
            let keep: Vec<(usize, usize)> = cells
                .iter()
                .enumerate()
                .filter(|(i, _)| *i == 0 || rng.random_bool(0.5))
                .map(|(_, &c)| c)
                .collect();
            let tau =
                Relation::from_cells(x, y, &keep).expect("nonempty by keeping the first cell");
            checked += 1;
            if tau.distortion() > rel.distortion() {
                failures.push("5x5 nested pair".to_string());
            }
        }
        PropertyOutcome::of("relations.monotonicity", failures, checked)
    }

    /// dis(τ∘σ) <= dis σ + dis τ whenever the composition is nonempty,
    /// exactly on integer-valued spaces.
    pub fn relations_subadditivity(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(6);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for i in 0..opts.count(100) {
            // Alternate 4-point correspondence triples and 5x5 relations.
            if i % 2 == 0 {
                let x = random_integer_metric_space(&mut rng, 4, 8);
                let y = random_integer_metric_space(&mut rng, 4, 8);
                let z = random_integer_metric_space(&mut rng, 4, 8);
                let sigma = random_correspondence(&mut rng, x, y.clone(), 0.3);
                let tau = random_correspondence(&mut rng, y, z, 0.3);
                let composed = sigma.compose(&tau).expect("correspondences compose");
                checked += 1;
                if composed.as_relation().distortion()
                    > sigma.as_relation().distortion() + tau.as_relation().distortion()
                {
                    failures.push(format!("correspondence triple {i}"));
                }
            } else {
                let x = random_integer_metric_space(&mut rng, 5, 8);
                let y = random_integer_metric_space(&mut rng, 5, 8);
                let z = random_integer_metric_space(&mut rng, 5, 8);
                let sigma = random_relation(&mut rng, x, y.clone(), 0.4);
                let tau = random_relation(&mut rng, y, z, 0.4);
                match sigma.compose(&tau) {
                    Ok(composed) => {
                        checked += 1;
                        if composed.distortion() > sigma.distortion() + tau.distortion() {
                            failures.push(format!("relation triple {i}"));
                        }
                    }
                    Err(_) => continue, // empty composition is out of scope
                }
            }
        }
        PropertyOutcome::of("relations.subadditivity", failures, checked)
    }

    /// dis σ⁻¹ = dis σ exactly.
    pub fn relations_inverse_invariance(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(7);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for _ in 0..opts.count(100) {
            let x = random_metric_space(&mut rng, 5, 7.0);
            let y = random_metric_space(&mut rng, 5, 7.0);
            let sigma = random_relation(&mut rng, x, y, 0.4);
            checked += 1;
            if sigma.inverse().distortion() != sigma.distortion() {
                failures.push("5x5 inverse".to_string());
            }
        }
        PropertyOutcome::of("relations.inverse-invariance", failures, checked)
    }

    /// Zero distortion characterizes isometry graphs, exhaustively over all
    /// correspondences between all pairs drawn from a pool of 3-point
    /// spaces that includes genuinely isometric pairs.
    pub fn relations_zero_distortion_isometry(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(8);
        let mut pool: Vec<Arc<FiniteMetricSpace>> = Vec::new();
        let base = opts.count(10);
        for _ in 0..base {
            let s = random_metric_space(&mut rng, 3, 6.0);
            pool.push(permuted_copy(&mut rng, &s));
            pool.push(s);
        }
        for _ in 0..base {
            pool.push(random_integer_metric_space(&mut rng, 3, 4));
        }
        let incidences = enumerate_correspondence_incidences(3, 3);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        let mut isometric_pairs = 0usize;
        for i in 0..pool.len() {
            for j in i..pool.len() {
                let mut pair_has_isometry = false;
                for inc in &incidences {
                    checked += 1;
                    let corr = Correspondence::new(
                        Relation::new(pool[i].clone(), pool[j].clone(), inc.clone()).unwrap(),
                    )
                    .unwrap();
                    let zero = corr.as_relation().distortion() == 0.0;
                    let iso = corr.is_isometry_graph();
                    if zero != iso {
                        failures.push(format!("pool pair ({i},{j}) cells {:?}", inc.cells()));
                    }
                    pair_has_isometry |= iso;
                }
                if pair_has_isometry {
                    isometric_pairs += 1;
                }
            }
        }
        if isometric_pairs == 0 {
            failures.push("pool contained no isometric pair; check is vacuous".to_string());
        }
        PropertyOutcome::of("relations.zero-distortion-isometry", failures, checked)
    }

    /// ε-thickening distortion stabilizes at dis σ once ε is below half the
    /// smallest positive distance, and is monotone in ε.
    pub fn relations_epsilon_limit(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(9);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        let x3 = random_metric_space(&mut rng, 3, 5.0);
        let y3 = random_metric_space(&mut rng, 3, 5.0);
        let floor3 =
            x3.min_positive_distance().unwrap().min(y3.min_positive_distance().unwrap());
        for mask in 1u32..512 {
            checked += 1;
            let cells: Vec<(usize, usize)> =
                (0..9).filter(|b| mask >> b & 1 == 1).map(|b| (b / 3, b % 3)).collect();
            let sigma = Relation::from_cells(x3.clone(), y3.clone(), &cells).unwrap();
            let thick = sigma.epsilon_thicken(floor3 / 2.0).unwrap();
            if thick != sigma || thick.distortion() != sigma.distortion() {
                failures.push(format!("3x3 mask {mask:b} did not stabilize"));
            }
        }
        for _ in 0..opts.count(100) {
            let x = random_metric_space(&mut rng, 5, 6.0);
            let y = random_metric_space(&mut rng, 5, 6.0);
            let sigma = random_relation(&mut rng, x.clone(), y.clone(), 0.3);
            let mut eps = x.diameter().max(y.diameter()) * 1.5;
            let floor =
                x.min_positive_distance().unwrap().min(y.min_positive_distance().unwrap()) / 2.0;
            let mut prev = f64::INFINITY;
            checked += 1;
            let mut ok = true;
            while eps > floor / 4.0 {
                let dis = sigma.epsilon_thicken(eps).unwrap().distortion();
                ok &= dis <= prev;
                prev = dis;
                eps /= 2.0;
            }
            ok &= prev == sigma.distortion();
            if !ok {
                failures.push("5x5 schedule not monotone or not stabilized".to_string());
            }
        }
        PropertyOutcome::of("relations.epsilon-limit", failures, checked)
    }

    /// Closure is the identity on finite relations and preserves distortion.
    pub fn relations_closure_invariance(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(10);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for _ in 0..opts.count(100) {
            let x = random_metric_space(&mut rng, 5, 6.0);
            let y = random_metric_space(&mut rng, 4, 6.0);
            let sigma = random_relation(&mut rng, x, y, 0.35);
            checked += 1;
            let closed = sigma.closure();
            if closed != sigma || closed.distortion() != sigma.distortion() {
                failures.push("closure changed a finite relation".to_string());
            }
        }
        PropertyOutcome::of("relations.closure-invariance", failures, checked)
    }

    /// The four built-in families satisfy the family axioms on sample
    /// spaces; a single-valued "functions only" family does not.
    pub fn relations_family_axioms(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(11);
        let spaces =
            vec![random_metric_space(&mut rng, 2, 4.0), random_metric_space(&mut rng, 3, 4.0)];
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for filter in [
            FamilyFilter::all(),
            FamilyFilter::upper_semicontinuous(),
            FamilyFilter::lower_semicontinuous(),
            FamilyFilter::continuous(),
        ] {
            checked += 1;
            match check_family_axioms(&filter, &spaces) {
                Ok(report) if report.passed() => {}
                Ok(report) => failures.push(format!(
                    "family {} violated: {:?}",
                    filter.tag(),
                    report.violations.first()
                )),
                Err(e) => failures.push(format!("family {}: {e}", filter.tag())),
            }
        }
        let functions = FamilyFilter::custom("functions", |r| {
            let inc = r.as_relation().incidence();
            (0..inc.rows()).all(|i| inc.row_cells(i).len() == 1)
        });
        checked += 1;
        match check_family_axioms(&functions, &spaces) {
            Ok(report) if !report.passed() => {}
            Ok(_) => failures.push("functions-only family unexpectedly satisfied axioms".into()),
            Err(e) => failures.push(format!("functions-only family: {e}")),
        }
        PropertyOutcome::of("relations.family-axioms", failures, checked)
    }

    /// gh(Δ₁, X) = diam X / 2 exactly, on seeded random spaces of up to 8
    /// points.
    pub fn gh_one_point_law(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(12);
        let config = SolverConfig::default();
        let delta1 = Arc::new(FiniteMetricSpace::delta1());
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for i in 0..opts.count(50) {
            let n = rng.random_range(1..=8);
            let x = random_metric_space(&mut rng, n, 10.0);
            checked += 1;
            let v = gh_exact(&delta1, &x, &FamilyFilter::all(), &config)
                .exact_value()
                .expect("1xN is within budget");
            if v != x.diameter() / 2.0 {
                failures.push(format!("instance {i}: {v} vs {}", x.diameter() / 2.0));
            }
        }
        PropertyOutcome::of("gh.one-point-law", failures, checked)
    }

    /// The scaling curve is additive: geodesic probes on the grid
    /// {0, 1/4, 1/2, 3/4, 1} pass with tolerance 1e-9.
    pub fn gh_geodesic(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(13);
        let config = SolverConfig::default();
        let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for i in 0..opts.count(20) {
            let n = rng.random_range(2..=6);
            let x = random_metric_space(&mut rng, n, 5.0);
            checked += 1;
            match geodesic_probe(&x, &grid, &config, TOL) {
                Ok(probe) if probe.all_ok => {}
                Ok(probe) => {
                    let bad = probe.rows.iter().find(|r| !r.ok).unwrap();
                    failures.push(format!(
                        "instance {i}: t=({},{}) value {} expected {}",
                        bad.t_lo, bad.t_hi, bad.value, bad.expected
                    ));
                }
                Err(e) => failures.push(format!("instance {i}: {e}")),
            }
        }
        PropertyOutcome::of("gh.geodesic", failures, checked)
    }

    /// gh_exact equals gh_oracle exactly on seeded random pairs of spaces
    /// with at most 4 points.
    pub fn gh_oracle_equivalence(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(14);
        let config = SolverConfig::default();
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for i in 0..opts.count(200) {
            let n = rng.random_range(1..=4);
            let m = rng.random_range(1..=4);
            let x = random_metric_space(&mut rng, n, 6.0);
            let y = random_metric_space(&mut rng, m, 6.0);
            checked += 1;
            let exact = gh_exact(&x, &y, &FamilyFilter::all(), &config)
                .exact()
                .expect("within budget");
            let oracle = gh_oracle(&x, &y, &FamilyFilter::all()).expect("within oracle budget");
            if exact.value != oracle.value {
                failures.push(format!("pair {i}: exact {} oracle {}", exact.value, oracle.value));
            }
            let cert = exact.certificate.expect("exact results carry certificates");
            if cert.as_relation().distortion() != 2.0 * exact.value {
                failures.push(format!("pair {i}: certificate does not attain the value"));
            }
        }
        PropertyOutcome::of("gh.oracle-equivalence", failures, checked)
    }

    /// Symmetry (exact), self-distance zero, and the triangle inequality on
    /// seeded random triples of spaces with at most 4 points.
    pub fn gh_pseudometric_axioms(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(15);
        let config = SolverConfig::default();
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for i in 0..opts.count(100) {
            let n1 = rng.random_range(1..=4);
            let n2 = rng.random_range(1..=4);
            let n3 = rng.random_range(1..=4);
            let x = random_metric_space(&mut rng, n1, 7.0);
            let y = random_metric_space(&mut rng, n2, 7.0);
            let z = random_metric_space(&mut rng, n3, 7.0);
            checked += 1;
            let xy = gh_exact(&x, &y, &FamilyFilter::all(), &config).exact_value().unwrap();
            let yx = gh_exact(&y, &x, &FamilyFilter::all(), &config).exact_value().unwrap();
            if xy != yx {
                failures.push(format!("triple {i}: symmetry {xy} vs {yx}"));
            }
            let xx = gh_exact(&x, &x, &FamilyFilter::all(), &config).exact_value().unwrap();
            if xx != 0.0 {
                failures.push(format!("triple {i}: self-distance {xx}"));
            }
            match triangle_audit(&x, &y, &z, &FamilyFilter::all(), &config, TOL) {
                Ok(audit) => {
                    if !audit.holds {
                        failures.push(format!(
                            "triple {i}: {} > {} + {}",
                            audit.d_xz, audit.d_xy, audit.d_yz
                        ));
                    }
                    if audit.composite_slack.unwrap_or(0.0) < -TOL {
                        failures.push(format!("triple {i}: composite beats the optimum"));
                    }
                }
                Err(e) => failures.push(format!("triple {i}: {e}")),
            }
        }
        PropertyOutcome::of("gh.pseudometric-axioms", failures, checked)
    }

    /// gh(λX, λY) = λ·gh(X, Y), exactly on integer-valued spaces for
    /// λ ∈ {1/2, 2, 3}.
    pub fn gh_scaling(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(16);
        let config = SolverConfig::default();
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for i in 0..opts.count(30) {
            let n = rng.random_range(2..=4);
            let m = rng.random_range(2..=4);
            let x = random_integer_metric_space(&mut rng, n, 6);
            let y = random_integer_metric_space(&mut rng, m, 6);
            let base = gh_exact(&x, &y, &FamilyFilter::all(), &config).exact_value().unwrap();
            for lambda in [0.5, 2.0, 3.0] {
                checked += 1;
                let xs = Arc::new(x.scale(lambda));
                let ys = Arc::new(y.scale(lambda));
                let scaled =
                    gh_exact(&xs, &ys, &FamilyFilter::all(), &config).exact_value().unwrap();
                if scaled != lambda * base {
                    failures.push(format!("instance {i} λ={lambda}: {scaled} vs {}", lambda * base));
                }
            }
        }
        PropertyOutcome::of("gh.scaling", failures, checked)
    }

    /// gh_bounds sandwiches gh_exact.
    pub fn gh_bound_sandwich(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(17);
        let config = SolverConfig::default();
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for i in 0..opts.count(60) {
            let n = rng.random_range(1..=5);
            let m = rng.random_range(1..=5);
            let x = random_metric_space(&mut rng, n, 8.0);
            let y = random_metric_space(&mut rng, m, 8.0);
            checked += 1;
            let (lo, hi) = gh_bounds(&x, &y);
            let v = gh_exact(&x, &y, &FamilyFilter::all(), &config).exact_value().unwrap();
            if !(lo <= v && v <= hi) {
                failures.push(format!("pair {i}: {lo} <= {v} <= {hi} fails"));
            }
        }
        PropertyOutcome::of("gh.bound-sandwich", failures, checked)
    }

    /// On finite metric spaces the four families produce identical
    /// distances, through the solver and through the oracle (whose filter
    /// calls genuinely run the semicontinuity deciders).
    pub fn gh_discrete_collapse(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(18);
        let config = SolverConfig::default();
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for i in 0..opts.count(50) {
            let n = rng.random_range(1..=4);
            let m = rng.random_range(1..=4);
            let x = random_metric_space(&mut rng, n, 6.0);
            let y = random_metric_space(&mut rng, m, 6.0);
            checked += 1;
            let filters = [
                FamilyFilter::all(),
                FamilyFilter::upper_semicontinuous(),
                FamilyFilter::lower_semicontinuous(),
                FamilyFilter::continuous(),
            ];
            let values: Vec<f64> = filters
                .iter()
                .map(|f| gh_exact(&x, &y, f, &config).exact_value().unwrap())
                .collect();
            if values.iter().any(|&v| v != values[0]) {
                failures.push(format!("pair {i}: solver values differ: {values:?}"));
            }
            if i % 5 == 0 {
                let oracle_values: Vec<f64> = filters
                    .iter()
                    .map(|f| gh_oracle(&x, &y, f).unwrap().value)
                    .collect();
                if oracle_values.iter().any(|&v| v != values[0]) {
                    failures.push(format!("pair {i}: oracle values differ: {oracle_values:?}"));
                }
            }
        }
        PropertyOutcome::of("gh.discrete-collapse", failures, checked)
    }

    /// The preimage-criterion deciders agree with the pointwise definitions
    /// evaluated by brute force, for every set-valued map between every
    /// pair of topologies on up to 3 points.
    pub fn topology_criterion_definition_agreement(opts: &SuiteOptions) -> PropertyOutcome {
        let tops = small_topologies(opts);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for src in &tops {
            for tgt in &tops {
                for f in enumerate_set_valued_maps(src, tgt).expect("small") {
                    checked += 1;
                    let crit_ls = is_lower_semicontinuous(&f);
                    let point_ls = lower_semicontinuous_pointwise(&f).expect("small");
                    let crit_us = is_upper_semicontinuous(&f);
                    let point_us = upper_semicontinuous_pointwise(&f).expect("small");
                    if crit_ls != point_ls || crit_us != point_us {
                        failures.push(format!(
                            "images {:?} between {}p and {}p: criterion (ls {crit_ls}, us {crit_us}) vs pointwise (ls {point_ls}, us {point_us})",
                            f.images(),
                            src.len(),
                            tgt.len()
                        ));
                    }
                }
            }
        }
        PropertyOutcome::of("topology.criterion-definition-agreement", failures, checked)
    }

    /// Correspondences that are open in the product topology are lower
    /// semicontinuous together with their inverses.
    pub fn topology_open_implies_lsc(opts: &SuiteOptions) -> PropertyOutcome {
        let tops = small_topologies(opts);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for tx in &tops {
            for ty in &tops {
                for inc in enumerate_correspondence_incidences(tx.len(), ty.len()) {
                    if !is_open_relation(&inc, tx, ty).expect("shapes match") {
                        continue;
                    }
                    checked += 1;
                    let m = classify_incidence(&inc, tx, ty).expect("shapes match");
                    if !m.ls {
                        failures.push(format!(
                            "open correspondence {:?} between {}p and {}p not ls",
                            inc.cells(),
                            tx.len(),
                            ty.len()
                        ));
                    }
                }
            }
        }
        PropertyOutcome::of("topology.open-implies-lsc", failures, checked)
    }

    /// Over a compact Hausdorff (here: discrete) source, every set-valued
    /// map with closed graph is upper semicontinuous; non-Hausdorff sources
    /// are rejected by the audit's precondition.
    pub fn topology_closed_graph_implies_usc(opts: &SuiteOptions) -> PropertyOutcome {
        let tops = small_topologies(opts);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for n in 1..=3usize {
            let src = Arc::new(FiniteTopology::discrete(n).expect("small"));
            for tgt in &tops {
                checked += 1;
                match closed_graph_usc_audit(&src, tgt) {
                    Ok(report) => {
                        if let Some(images) = report.counterexample {
                            failures.push(format!(
                                "closed graph {images:?} into {}p target not usc",
                                tgt.len()
                            ));
                        }
                    }
                    Err(e) => failures.push(format!("audit error: {e}")),
                }
            }
        }
        checked += 1;
        let sierpinski = Arc::new(FiniteTopology::sierpinski());
        let discrete = Arc::new(FiniteTopology::discrete(2).expect("small"));
        if closed_graph_usc_audit(&sierpinski, &discrete).is_ok() {
            failures.push("non-Hausdorff source was not rejected".to_string());
        }
        PropertyOutcome::of("topology.closed-graph-implies-usc", failures, checked)
    }

    /// The family lattice: rc = us ∩ ls on every classified instance, and
    /// homeomorphism (here: identity) graphs are continuous.
    pub fn topology_family_lattice(opts: &SuiteOptions) -> PropertyOutcome {
        let tops = small_topologies(opts);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for tx in &tops {
            for ty in &tops {
                for inc in enumerate_correspondence_incidences(tx.len(), ty.len()) {
                    checked += 1;
                    let m = classify_incidence(&inc, tx, ty).expect("shapes match");
                    if m.rc != (m.us && m.ls) {
                        failures.push(format!("lattice broken at {:?}", inc.cells()));
                    }
                }
            }
        }
        for t in &tops {
            checked += 1;
            let mut inc = IncidenceMatrix::empty(t.len(), t.len());
            for i in 0..t.len() {
                inc.set(i, i);
            }
            let m = classify_incidence(&inc, t, t).expect("shapes match");
            if !m.rc {
                failures.push(format!("identity graph on a {}p topology not rc", t.len()));
            }
        }
        PropertyOutcome::of("topology.family-lattice", failures, checked)
    }

    fn compose_inc(a: &IncidenceMatrix, b: &IncidenceMatrix) -> IncidenceMatrix {
        let mut out = IncidenceMatrix::empty(a.rows(), b.cols());
        for i in 0..a.rows() {
            for k in a.row_cells(i) {
                for j in b.row_cells(k) {
                    out.set(i, j);
                }
            }
        }
        out
    }

    /// Composing two members of a semicontinuity family stays in the
    /// family; likewise for set-valued maps under compose_sv.
    pub fn topology_composition_closure(opts: &SuiteOptions) -> PropertyOutcome {
        let mut failures = Vec::new();
        let mut checked = 0usize;
        // Exhaustive over all 2-point topology triples.
        let two: Vec<Arc<FiniteTopology>> =
            enumerate_topologies(2).expect("small").into_iter().map(Arc::new).collect();
        let mut triples: Vec<[Arc<FiniteTopology>; 3]> = Vec::new();
        for a in &two {
            for b in &two {
                for c in &two {
                    triples.push([a.clone(), b.clone(), c.clone()]);
                }
            }
        }
        // Designated 3-point topologies: discrete, a chain, and one more.
        let three = enumerate_topologies(3).expect("small");
        let discrete3 = Arc::new(FiniteTopology::discrete(3).expect("small"));
        let chain = Arc::new(
            FiniteTopology::new(
                vec!["a".into(), "b".into(), "c".into()],
                vec![vec![0], vec![0, 1], vec![0, 1, 2]],
            )
            .expect("valid chain"),
        );
        let mixed = Arc::new(three[three.len() / 2].clone());
        if !opts.quick {
            for a in [&discrete3, &chain, &mixed] {
                for b in [&discrete3, &chain, &mixed] {
                    for c in [&discrete3, &chain, &mixed] {
                        triples.push([a.clone(), b.clone(), c.clone()]);
                    }
                }
            }
        }
        for [tx, ty, tz] in &triples {
            let members_xy: Vec<(IncidenceMatrix, crate::topology::FamilyMembership)> =
                enumerate_correspondence_incidences(tx.len(), ty.len())
                    .into_iter()
                    .map(|inc| {
                        let m = classify_incidence(&inc, tx, ty).expect("shapes match");
                        (inc, m)
                    })
                    .collect();
            let members_yz: Vec<(IncidenceMatrix, crate::topology::FamilyMembership)> =
                enumerate_correspondence_incidences(ty.len(), tz.len())
                    .into_iter()
                    .map(|inc| {
                        let m = classify_incidence(&inc, ty, tz).expect("shapes match");
                        (inc, m)
                    })
                    .collect();
            for (inc1, m1) in &members_xy {
                for (inc2, m2) in &members_yz {
                    if !(m1.us && m2.us) && !(m1.ls && m2.ls) {
                        continue;
                    }
                    checked += 1;
                    let composed = compose_inc(inc1, inc2);
                    let mc = classify_incidence(&composed, tx, tz).expect("shapes match");
                    if (m1.us && m2.us && !mc.us)
                        || (m1.ls && m2.ls && !mc.ls)
                        || (m1.rc && m2.rc && !mc.rc)
                    {
                        failures.push(format!(
                            "composition left the family: {:?} then {:?}",
                            inc1.cells(),
                            inc2.cells()
                        ));
                    }
                }
            }
        }
        // compose_sv preserves semicontinuity on sampled map pairs.
        let s = Arc::new(FiniteTopology::sierpinski());
        for f in enumerate_set_valued_maps(&s, &chain).expect("small") {
            for g in enumerate_set_valued_maps(&chain, &s).expect("small") {
                let f_ls = is_lower_semicontinuous(&f);
                let f_us = is_upper_semicontinuous(&f);
                let g_ls = is_lower_semicontinuous(&g);
                let g_us = is_upper_semicontinuous(&g);
                if !(f_ls && g_ls) && !(f_us && g_us) {
                    continue;
                }
                checked += 1;
                let composed = compose_sv(&f, &g).expect("middle matches");
                if (f_ls && g_ls && !is_lower_semicontinuous(&composed))
                    || (f_us && g_us && !is_upper_semicontinuous(&composed))
                {
                    failures.push(format!(
                        "compose_sv broke semicontinuity: {:?} then {:?}",
                        f.images(),
                        g.images()
                    ));
                }
            }
        }
        PropertyOutcome::of("topology.composition-closure", failures, checked)
    }

    /// Restriction to a subset of the source (with the subspace topology)
    /// preserves lower and upper semicontinuity, exhaustively on small
    /// instances.
    pub fn topology_restriction(opts: &SuiteOptions) -> PropertyOutcome {
        let tops = small_topologies(opts);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for src in &tops {
            for tgt in &tops {
                if src.len() < 2 {
                    continue;
                }
                for f in enumerate_set_valued_maps(src, tgt).expect("small") {
                    let f_ls = is_lower_semicontinuous(&f);
                    let f_us = is_upper_semicontinuous(&f);
                    if !f_ls && !f_us {
                        continue;
                    }
                    for mask in 1u32..(1u32 << src.len()) - 1 {
                        let members: Vec<usize> =
                            (0..src.len()).filter(|&i| mask >> i & 1 == 1).collect();
                        checked += 1;
                        let g = restrict_sv(&f, &members).expect("valid restriction");
                        if (f_ls && !is_lower_semicontinuous(&g))
                            || (f_us && !is_upper_semicontinuous(&g))
                        {
                            failures.push(format!(
                                "restriction to {members:?} broke semicontinuity of {:?}",
                                f.images()
                            ));
                        }
                    }
                }
            }
        }
        PropertyOutcome::of("topology.restriction", failures, checked)
    }

    /// Over discrete topologies every set-valued map is continuous and
    /// every correspondence classifies as rc.
    pub fn topology_discrete_collapse(opts: &SuiteOptions) -> PropertyOutcome {
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for n in 1..=3usize {
            for m in 1..=3usize {
                let src = Arc::new(FiniteTopology::discrete(n).expect("small"));
                let tgt = Arc::new(FiniteTopology::discrete(m).expect("small"));
                for f in enumerate_set_valued_maps(&src, &tgt).expect("small") {
                    checked += 1;
                    if !is_continuous(&f) {
                        failures.push(format!("{:?} not continuous over discrete", f.images()));
                    }
                }
                for inc in enumerate_correspondence_incidences(n, m) {
                    checked += 1;
                    let fm = classify_incidence(&inc, &src, &tgt).expect("shapes match");
                    if !fm.rc {
                        failures.push(format!("{:?} not rc over discrete", inc.cells()));
                    }
                }
            }
        }
        let _ = opts;
        PropertyOutcome::of("topology.discrete-collapse", failures, checked)
    }

    /// The projection from a product topology to its first factor maps open
    /// sets to open sets, and closed graphs are detected consistently in
    /// product subspaces.
    pub fn topology_projection_open(opts: &SuiteOptions) -> PropertyOutcome {
        let tops = small_topologies(opts);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for tx in &tops {
            for ty in &tops {
                checked += 1;
                match projection_is_open_audit(tx, ty) {
                    Ok(report) => {
                        if !report.failures.is_empty() {
                            failures.push(format!(
                                "projection not open between {}p and {}p",
                                tx.len(),
                                ty.len()
                            ));
                        }
                    }
                    Err(e) => failures.push(format!("audit error: {e}")),
                }
            }
        }
        // A relation that is closed in the product has closed full
        // preimages of point closures; sanity-check is_closed_relation on
        // the full relation, which is always closed.
        for tx in tops.iter().take(5) {
            for ty in tops.iter().take(5) {
                checked += 1;
                let full = IncidenceMatrix::full(tx.len(), ty.len());
                if !is_closed_relation(&full, tx, ty).expect("shapes match") {
                    failures.push("full relation not closed".to_string());
                }
            }
        }
        PropertyOutcome::of("topology.projection-open", failures, checked)
    }

    /// Every generated net passes metric validation and meets its mesh.
    pub fn sampling_net_validity(opts: &SuiteOptions) -> PropertyOutcome {
        let mut failures = Vec::new();
        let mut checked = 0usize;
        let specs = vec![
            NetSpec { model: Model::Interval { length: 1.0 }, mesh: 0.2 },
            NetSpec { model: Model::Interval { length: 3.0 }, mesh: 0.5 },
            NetSpec { model: Model::Circle { circumference: 2.0 * std::f64::consts::PI }, mesh: 0.7 },
            NetSpec { model: Model::Circle { circumference: 5.0 }, mesh: 0.4 },
            NetSpec {
                model: Model::Grid {
                    sides: vec![1.0, 1.0],
                    metric: crate::metric::PointMetric::Euclidean,
                },
                mesh: 0.4,
            },
        ];
        for spec in specs {
            checked += 1;
            match generate_net(&spec) {
                Ok(net) => {
                    if net.coverage_radius > spec.mesh {
                        failures.push(format!("coverage exceeds mesh for {spec:?}"));
                    }
                    if FiniteMetricSpace::new(net.space.labels().to_vec(), net.space.matrix())
                        .is_err()
                    {
                        failures.push(format!("net failed validation for {spec:?}"));
                    }
                }
                Err(e) => failures.push(format!("{spec:?}: {e}")),
            }
        }
        let _ = opts;
        PropertyOutcome::of("sampling.net-validity", failures, checked)
    }

    /// For a sub-net Y of X, gh(X, Y) never exceeds the covering mesh of Y
    /// in X, and the canonical nearest-point inclusion correspondence has
    /// distortion at most twice that mesh.
    pub fn sampling_subnet_sandwich(opts: &SuiteOptions) -> PropertyOutcome {
        let config = SolverConfig::default();
        let mut failures = Vec::new();
        let mut checked = 0usize;
        let nets = vec![
            interval_net(1.0, 6).expect("valid").space,
            circle_net(2.0 * std::f64::consts::PI, 8).expect("valid").space,
        ];
        for x in nets {
            let n = x.len();
            for stride in [2usize, 3] {
                let indices: Vec<usize> = (0..n).step_by(stride).collect();
                if indices.len() < 2 {
                    continue;
                }
                checked += 1;
                let y = Arc::new(x.restriction(&indices).expect("nonempty"));
                let mesh = mesh_within(&x, &indices);
                let value = match gh_exact(&x, &y, &FamilyFilter::all(), &config).exact_value() {
                    Some(v) => v,
                    None => {
                        failures.push("instance exceeded budget".to_string());
                        continue;
                    }
                };
                if value > mesh + TOL {
                    failures.push(format!("gh {value} exceeds mesh {mesh}"));
                }
                // Canonical inclusion correspondence: x adopts its nearest
                // sub-net point; sub-net points map to themselves.
                let mut inc = IncidenceMatrix::empty(n, indices.len());
                for p in 0..n {
                    let nearest = (0..indices.len())
                        .min_by(|&a, &b| {
                            x.dist(p, indices[a]).total_cmp(&x.dist(p, indices[b]))
                        })
                        .unwrap();
                    inc.set(p, nearest);
                }
                let corr = Correspondence::new(
                    Relation::new(x.clone(), y.clone(), inc).expect("nonempty"),
                )
                .expect("rows nonempty, columns cover themselves");
                if corr.as_relation().distortion() > 2.0 * mesh + TOL {
                    failures.push("inclusion correspondence exceeds 2·mesh".to_string());
                }
            }
        }
        let _ = opts;
        PropertyOutcome::of("sampling.subnet-sandwich", failures, checked)
    }

    /// Dense sub-net experiments: every level's value is bounded by the
    /// sub-net mesh and the values do not increase as the sub-net refines.
    pub fn sampling_dense_subnet_decay(opts: &SuiteOptions) -> PropertyOutcome {
        let config = SolverConfig::default();
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for model in [
            Model::Interval { length: 1.0 },
            Model::Circle { circumference: 2.0 * std::f64::consts::PI },
        ] {
            match dense_subnet_experiment(&model, 3, &config) {
                Ok(table) => {
                    for row in &table.rows {
                        checked += 1;
                        if row.bound_status != BoundStatus::Exact {
                            failures.push(format!("{}: level {} not exact", table.name, row.level));
                        }
                        if row.value > row.mesh + TOL {
                            failures.push(format!(
                                "{}: level {} value {} exceeds mesh {}",
                                table.name, row.level, row.value, row.mesh
                            ));
                        }
                    }
                    for pair in table.rows.windows(2) {
                        checked += 1;
                        if pair[1].value > pair[0].value + TOL {
                            failures.push(format!("{}: levels not decaying", table.name));
                        }
                    }
                    if table.rows.last().map(|r| r.value) != Some(0.0) {
                        failures.push(format!("{}: final level Y = X is not zero", table.name));
                    }
                }
                Err(e) => failures.push(format!("{model:?}: {e}")),
            }
        }
        let _ = opts;
        PropertyOutcome::of("sampling.dense-subnet-decay", failures, checked)
    }

    /// The one-point law on nets: interval nets give exactly half the
    /// length at every level; even circle nets give exactly a quarter of
    /// the circumference.
    pub fn sampling_delta1_law(opts: &SuiteOptions) -> PropertyOutcome {
        let config = SolverConfig::default();
        let mut failures = Vec::new();
        let mut checked = 0usize;
        let c = 2.0 * std::f64::consts::PI;
        match delta1_convergence(&Model::Circle { circumference: c }, 4, &config) {
            Ok(table) => {
                for row in &table.rows {
                    checked += 1;
                    if (row.value - c / 4.0).abs() > TOL {
                        failures.push(format!(
                            "circle level {}: {} vs {}",
                            row.level,
                            row.value,
                            c / 4.0
                        ));
                    }
                }
            }
            Err(e) => failures.push(format!("circle: {e}")),
        }
        match delta1_convergence(&Model::Interval { length: 1.0 }, 3, &config) {
            Ok(table) => {
                for row in &table.rows {
                    checked += 1;
                    if row.value != 0.5 {
                        failures.push(format!("interval level {}: {}", row.level, row.value));
                    }
                }
            }
            Err(e) => failures.push(format!("interval: {e}")),
        }
        let _ = opts;
        PropertyOutcome::of("sampling.delta1-law", failures, checked)
    }

    /// The ε-limit experiment on circle nets: distortion is nonincreasing
    /// along a decreasing schedule and stabilizes at dis σ below half the
    /// minimum positive distance.
    pub fn sampling_epsilon_limit_stabilization(opts: &SuiteOptions) -> PropertyOutcome {
        let mut rng = opts.rng(19);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for i in 0..opts.count(10) {
            let x = circle_net(6.0, 6).expect("valid").space;
            let y = circle_net(8.0, 6).expect("valid").space;
            let inc = random_incidence(&mut rng, 6, 6, 0.3);
            let sigma = Relation::new(x.clone(), y.clone(), inc).unwrap();
            let schedule = default_epsilon_schedule(&sigma);
            checked += 1;
            match epsilon_limit_experiment(&sigma, &schedule) {
                Ok(table) => {
                    let mut ok = true;
                    for pair in table.rows.windows(2) {
                        ok &= pair[1].value <= pair[0].value;
                    }
                    let floor = x
                        .min_positive_distance()
                        .unwrap()
                        .min(y.min_positive_distance().unwrap());
                    for row in table.rows.iter().filter(|r| r.mesh < floor / 2.0) {
                        ok &= row.value == sigma.distortion();
                    }
                    if !ok {
                        failures.push(format!("instance {i} not monotone or not stabilized"));
                    }
                }
                Err(e) => failures.push(format!("instance {i}: {e}")),
            }
        }
        PropertyOutcome::of("sampling.epsilon-limit-stabilization", failures, checked)
    }

    /// The nearest-point extension: distortion grows by at most twice the
    /// coarse-in-fine mesh, and restricting back recovers the original.
    pub fn sampling_extension_contract(opts: &SuiteOptions) -> PropertyOutcome {
        let config = SolverConfig::default();
        let mut failures = Vec::new();
        let mut checked = 0usize;
        let cases: Vec<(Arc<FiniteMetricSpace>, Vec<usize>)> = vec![
            (interval_net(1.0, 6).expect("valid").space, vec![0, 3, 6]),
            (interval_net(1.0, 6).expect("valid").space, vec![0, 2, 4, 6]),
            (interval_net(2.0, 4).expect("valid").space, vec![0, 2, 4]),
            (circle_net(2.0 * std::f64::consts::PI, 8).expect("valid").space, vec![0, 2, 4, 6]),
            (circle_net(6.0, 6).expect("valid").space, vec![0, 3]),
        ];
        for (fine, inclusion) in cases {
            let coarse = Arc::new(fine.restriction(&inclusion).expect("nonempty"));
            let x = interval_net(1.0, 2).expect("valid").space;
            let delta = mesh_within(&fine, &inclusion);
            let optimal = gh_exact(&coarse, &x, &FamilyFilter::all(), &config)
                .exact()
                .and_then(|r| r.certificate)
                .expect("within budget");
            let full = Correspondence::full(coarse.clone(), x.clone());
            for r_prime in [optimal, full] {
                checked += 1;
                match extend_correspondence(&r_prime, &fine, &inclusion) {
                    Ok(ext) => {
                        let before = r_prime.as_relation().distortion();
                        let after = ext.as_relation().distortion();
                        if after > before + 2.0 * delta + TOL {
                            failures.push(format!(
                                "extension contract: {after} > {before} + 2·{delta}"
                            ));
                        }
                        for (c, &f) in inclusion.iter().enumerate() {
                            if ext.as_relation().incidence().row_cells(f)
                                != r_prime.as_relation().incidence().row_cells(c)
                            {
                                failures.push("restriction does not recover R'".to_string());
                                break;
                            }
                        }
                    }
                    Err(e) => failures.push(format!("extension failed: {e}")),
                }
            }
        }
        let _ = opts;
        PropertyOutcome::of("sampling.extension-contract", failures, checked)
    }

    /// The same seed produces byte-identical serialized results.
    pub fn cli_determinism(opts: &SuiteOptions) -> PropertyOutcome {
        let config = SolverConfig::default();
        let mut failures = Vec::new();
        let run = || -> (String, String) {
            let mut rng = opts.rng(20);
            let x = random_metric_space(&mut rng, 4, 5.0);
            let y = random_metric_space(&mut rng, 3, 5.0);
            let r = gh_exact(&x, &y, &FamilyFilter::all(), &config).exact().unwrap();
            let json = serde_json::to_string(&GhResultJson::from(&r)).unwrap();
            let table = dense_subnet_experiment(&Model::Interval { length: 1.0 }, 3, &config)
                .unwrap()
                .to_csv();
            (json, table)
        };
        let first = run();
        let second = run();
        if first != second {
            failures.push("two seeded runs differ".to_string());
        }
        PropertyOutcome::of("cli.determinism", failures, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let report = run_full_suite(&SuiteOptions { seed: 7, quick: true });
        for outcome in &report.outcomes {
            assert!(outcome.pass, "{}: {}", outcome.name, outcome.detail);
        }
        assert!(report.outcomes.len() >= 30);
    }
}
