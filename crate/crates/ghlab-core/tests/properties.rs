//! Property-based tests over randomly generated valid metric spaces,
//! relations and topologies.

use ghlab_core::family::FamilyFilter;
use ghlab_core::gh::{gh_bounds, gh_exact, SolverConfig};
use ghlab_core::randgen::{random_incidence, random_integer_metric_space, random_metric_space};
use ghlab_core::relation::Relation;
use ghlab_core::topology::{
    enumerate_topologies, is_continuous, is_lower_semicontinuous, is_upper_semicontinuous,
    restrict_sv, SetValuedMap,
};
use ghlab_core::FiniteMetricSpace;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn arb_space(max_points: usize) -> impl Strategy<Value = Arc<FiniteMetricSpace>> {
    (any::<u64>(), 1..=max_points).prop_map(|(seed, n)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_metric_space(&mut rng, n, 10.0)
    })
}

fn arb_integer_space(max_points: usize) -> impl Strategy<Value = Arc<FiniteMetricSpace>> {
    (any::<u64>(), 2..=max_points).prop_map(|(seed, n)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_integer_metric_space(&mut rng, n, 9)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_spaces_satisfy_the_axioms(x in arb_space(7)) {
        // Re-validate through the public constructor.
        prop_assert!(FiniteMetricSpace::new(x.labels().to_vec(), x.matrix()).is_ok());
    }

    #[test]
    fn hausdorff_is_a_metric_on_subsets(
        x in arb_space(6),
        masks in prop::array::uniform3(1u32..63),
    ) {
        let n = x.len();
        let pick = |mask: u32| -> Vec<usize> {
            let picked: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if picked.is_empty() { vec![0] } else { picked }
        };
        let a = x.subset(&pick(masks[0])).unwrap();
        let b = x.subset(&pick(masks[1])).unwrap();
        let c = x.subset(&pick(masks[2])).unwrap();
        prop_assert_eq!(a.hausdorff(&b), b.hausdorff(&a));
        prop_assert_eq!(a.hausdorff(&a), 0.0);
        prop_assert!((a.hausdorff(&b) == 0.0) == (a.members() == b.members()));
        prop_assert!(a.hausdorff(&c) <= a.hausdorff(&b) + b.hausdorff(&c) + 1e-12);
    }

    #[test]
    fn neighborhoods_grow_with_their_set_and_radius(
        x in arb_space(7),
        mask in 1u32..127,
        r in 0.01f64..20.0,
    ) {
        let n = x.len();
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let members = if members.is_empty() { vec![0] } else { members };
        let a = x.subset(&members).unwrap();
        let whole = x.whole();
        prop_assert!(a.open_neighborhood(r).unwrap().is_subset_of(&whole.open_neighborhood(r).unwrap()));
        prop_assert!(a.is_subset_of(&a.open_neighborhood(r).unwrap()));
        prop_assert!(a
            .open_neighborhood(r)
            .unwrap()
            .is_subset_of(&a.closed_neighborhood(r).unwrap()));
    }

    #[test]
    fn distortion_algebra_properties(
        x in arb_integer_space(5),
        y in arb_integer_space(5),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = {
            let inc = random_incidence(&mut rng, x.len(), y.len(), 0.4);
            Relation::new(x.clone(), y.clone(), inc).unwrap()
        };
        // Inverse preserves distortion exactly.
        prop_assert_eq!(sigma.inverse().distortion(), sigma.distortion());
        // Closure is the identity.
        prop_assert_eq!(&sigma.closure(), &sigma);
        // Thickening only adds cells and never shrinks distortion.
        let eps = 1.0 + x.diameter().max(y.diameter()) / 2.0;
        let thick = sigma.epsilon_thicken(eps).unwrap();
        prop_assert!(sigma.incidence().is_subset_of(thick.incidence()));
        prop_assert!(thick.distortion() >= sigma.distortion());
        // Monotone under sub-relations.
        let cells = sigma.cells();
        let kept: Vec<(usize, usize)> = cells
            .iter()
            .enumerate()
            .filter(|(i, _)| *i == 0 || seed >> (i % 60) & 1 == 1)
            .map(|(_, &c)| c)
            .collect();
        let tau = Relation::from_cells(x, y, &kept).unwrap();
        prop_assert!(tau.distortion() <= sigma.distortion());
    }

    #[test]
    fn subadditivity_over_integer_spaces(
        x in arb_integer_space(4),
        y in arb_integer_space(4),
        z in arb_integer_space(4),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = Relation::new(
            x.clone(),
            y.clone(),
            random_incidence(&mut rng, x.len(), y.len(), 0.6),
        )
        .unwrap();
        let tau = Relation::new(
            y.clone(),
            z.clone(),
            random_incidence(&mut rng, y.len(), z.len(), 0.6),
        )
        .unwrap();
        if let Ok(composed) = sigma.compose(&tau) {
            prop_assert!(composed.distortion() <= sigma.distortion() + tau.distortion());
        }
    }

    #[test]
    fn gh_is_symmetric_and_sandwiched(x in arb_space(5), y in arb_space(5)) {
        let config = SolverConfig::default();
        let all = FamilyFilter::all();
        let a = gh_exact(&x, &y, &all, &config).exact_value().unwrap();
        let b = gh_exact(&y, &x, &all, &config).exact_value().unwrap();
        prop_assert_eq!(a, b);
        let (lo, hi) = gh_bounds(&x, &y);
        prop_assert!(lo <= a && a <= hi);
    }

    #[test]
    fn restriction_preserves_semicontinuity(
        top_idx in 0usize..29,
        image_seed in any::<u64>(),
        mask in 1u32..7,
    ) {
        let tops = enumerate_topologies(3).unwrap();
        let src = Arc::new(tops[top_idx].clone());
        let tgt = Arc::new(tops[(top_idx * 7 + 3) % 29].clone());
        let mut rng = ChaCha8Rng::seed_from_u64(image_seed);
        let images: Vec<Vec<usize>> = (0..3)
            .map(|_| {
                let m: u32 = rand::Rng::random_range(&mut rng, 1..8);
                (0..3).filter(|&i| m >> i & 1 == 1).collect()
            })
            .collect();
        let f = SetValuedMap::new(src, tgt, images).unwrap();
        let members: Vec<usize> = (0..3).filter(|&i| mask >> i & 1 == 1).collect();
        let g = restrict_sv(&f, &members).unwrap();
        if is_lower_semicontinuous(&f) {
            prop_assert!(is_lower_semicontinuous(&g));
        }
        if is_upper_semicontinuous(&f) {
            prop_assert!(is_upper_semicontinuous(&g));
        }
        if is_continuous(&f) {
            prop_assert!(is_continuous(&g));
        }
    }
}
