use cayley_core::analytic::{radius_of, AnalyticConfig};
use cayley_core::branching::gamma_graph;
use cayley_core::experiments::{tv_distance, EmpiricalDist};
use cayley_core::geodesic::{greedy_geodesic, point_to_path_distance, shadow_geodesic};
use cayley_core::samplers::{uniform_permutation, SphereSampler};
use cayley_core::walk::{self, WalkState};
use cayley_core::{cayley_distance, CycleTracker, Permutation, SeededRng, StepKind, Transposition};
use proptest::prelude::*;

fn perm(n: usize, seed: u64) -> Permutation {
    uniform_permutation(n, &mut SeededRng::new(seed, 0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_laws(n in 1usize..40, s1: u64, s2: u64, s3: u64) {
        let (f, g, h) = (perm(n, s1), perm(n, s2), perm(n, s3));
        let id = Permutation::identity(n).unwrap();
        prop_assert_eq!(f.compose(&g).unwrap().compose(&h).unwrap(), f.compose(&g.compose(&h).unwrap()).unwrap());
        prop_assert_eq!(f.compose(&f.inverse()).unwrap(), id.clone());
        prop_assert_eq!(f.compose(&id).unwrap(), f.clone());
        for x in 1..=n {
            prop_assert_eq!(f.compose(&g).unwrap().apply(x), f.apply(g.apply(x)));
        }
    }

    #[test]
    fn cayley_distance_is_a_metric(n in 1usize..40, s1: u64, s2: u64, s3: u64) {
        let (x, y, z) = (perm(n, s1), perm(n, s2), perm(n, s3));
        let d = |a: &Permutation, b: &Permutation| cayley_distance(a, b).unwrap();
        prop_assert_eq!(d(&x, &x), 0);
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
        prop_assert_eq!(x.distance_from_identity(), n - x.cycle_count());
        prop_assert_eq!(x.cycle_structure().sizes().sum::<usize>(), n);
        // Left translation is an isometry.
        prop_assert_eq!(d(&z.compose(&x).unwrap(), &z.compose(&y).unwrap()), d(&x, &y));
    }

    #[test]
    fn transpositions_change_distance_by_one(n in 2usize..40, s: u64, i in 1usize..40, j in 1usize..40) {
        let (i, j) = (1 + i % n, 1 + j % n);
        prop_assume!(i != j);
        let x = perm(n, s);
        let t = Transposition::new(i, j).unwrap();
        let (y, kind) = x.apply_transposition(&t).unwrap();
        let expected = match kind {
            StepKind::Coagulation => x.distance_from_identity() + 1,
            StepKind::Fragmentation => x.distance_from_identity() - 1,
        };
        prop_assert_eq!(y.distance_from_identity(), expected);
        prop_assert_eq!(kind == StepKind::Fragmentation, x.same_cycle(i, j));
        prop_assert_eq!(y.apply_transposition(&t).unwrap().0, x);
    }

    #[test]
    fn tracker_agrees_with_recomputation(n in 2usize..60, steps in 0usize..150, s: u64) {
        let mut rng = SeededRng::new(s, 1);
        let mut tracker = CycleTracker::new(perm(n, s));
        for _ in 0..steps {
            let t = walk::random_transposition(n, &mut rng);
            let before = tracker.perm().clone();
            let kind = tracker.apply(&t);
            prop_assert_eq!(kind == StepKind::Fragmentation, before.same_cycle(t.i(), t.j()));
            prop_assert_eq!(tracker.cycle_count(), tracker.perm().cycle_count());
        }
        let p = tracker.perm().clone();
        for a in 1..=n {
            prop_assert_eq!(tracker.cycle_size_of(a), p.cycle_len_of(a));
            for b in 1..=n {
                prop_assert_eq!(tracker.same_cycle(a, b), p.same_cycle(a, b));
            }
        }
    }

    #[test]
    fn walk_bookkeeping(n in 2usize..80, steps in 0usize..300, s: u64) {
        let mut rng = SeededRng::new(s, 0);
        let trace = walk::run(n, steps, &mut rng).unwrap();
        prop_assert_eq!(trace.distance_series.len(), steps + 1);
        for w in trace.distance_series.windows(2) {
            prop_assert_eq!(w[0].abs_diff(w[1]), 1);
        }
        let end = trace.endpoint();
        prop_assert_eq!(end.distance_from_identity(), *trace.distance_series.last().unwrap());
        prop_assert_eq!(end.distance_from_identity() + 2 * trace.fragmentations(), steps);
        let mut state = WalkState::new(n).unwrap();
        for t in trace.transpositions() {
            state.apply(t).unwrap();
        }
        // A cycle never straddles two graph components.
        for x in 1..=n {
            prop_assert_eq!(state.component_of(x).0, state.component_of(end.apply(x)).0);
        }
        let stats = state.component_stats();
        prop_assert_eq!(stats.components, state.component_count());
        prop_assert_eq!(stats.size_histogram.iter().map(|(s, c)| s * c).sum::<usize>(), n);
        prop_assert_eq!(stats.trees + stats.unicyclic + stats.complex, stats.components);
    }

    #[test]
    fn geodesics_are_geodesic(n in 1usize..40, steps in 0usize..80, s: u64) {
        let mut rng = SeededRng::new(s, 2);
        let sigma = perm(n, s);
        let g = greedy_geodesic(&sigma, &mut rng);
        prop_assert_eq!(g.len(), sigma.distance_from_identity());
        prop_assert!(g.validate().is_ok());
        let id = Permutation::identity(n).unwrap();
        prop_assert_eq!(point_to_path_distance(&id, &g).unwrap(), 0);
        prop_assert_eq!(point_to_path_distance(&sigma, &g).unwrap(), 0);
        if n >= 2 {
            let trace = walk::run(n, steps, &mut rng).unwrap();
            let shadow = shadow_geodesic(&trace, &mut rng).unwrap();
            prop_assert!(shadow.path.validate().is_ok());
            prop_assert_eq!(shadow.path.start(), &trace.endpoint());
            prop_assert!(shadow.max_measured_gap <= shadow.max_walk_gap);
            prop_assert!(shadow.residual_steps <= 2 * shadow.max_word_len.max(1) + shadow.skipped);
        }
    }

    #[test]
    fn sphere_samples_lie_on_the_sphere(n in 1usize..200, frac in 0.0f64..0.99, s: u64) {
        let k = radius_of(n, frac).min(n - 1);
        let sampler = SphereSampler::new(n, k, &AnalyticConfig::default()).unwrap();
        let mut rng = SeededRng::new(s, 0);
        for _ in 0..3 {
            prop_assert_eq!(sampler.sample(&mut rng).unwrap().distance_from_identity(), k);
        }
    }

    #[test]
    fn gamma_components_contain_product_cycles(n in 1usize..60, s1: u64, s2: u64) {
        let (sigma, pi) = (perm(n, s1), perm(n, s2));
        let g = gamma_graph(&sigma, &pi).unwrap();
        prop_assert_eq!(g.weights().iter().sum::<usize>(), n);
        prop_assert_eq!(g.edges().len(), pi.distance_from_identity());
        prop_assert_eq!(g.component_weights().iter().sum::<usize>(), n);
        let prod = sigma.compose(&pi).unwrap();
        for x in 1..=n {
            prop_assert_eq!(g.weighted_component(x), g.weighted_component(prod.apply(x)));
            prop_assert!(g.weighted_component(x) >= sigma.cycle_len_of(x));
        }
    }

    #[test]
    fn total_variation_is_a_metric(a in prop::collection::vec(0u64..12, 1..200),
                                   b in prop::collection::vec(0u64..12, 1..200),
                                   c in prop::collection::vec(0u64..12, 1..200)) {
        let (da, db, dc): (EmpiricalDist, EmpiricalDist, EmpiricalDist) =
            (a.into_iter().collect(), b.into_iter().collect(), c.into_iter().collect());
        let ab = tv_distance(&da, &db).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!((ab - tv_distance(&db, &da).unwrap()).abs() < 1e-12);
        prop_assert!(tv_distance(&da, &da).unwrap() < 1e-12);
        prop_assert!(ab <= tv_distance(&da, &dc).unwrap() + tv_distance(&dc, &db).unwrap() + 1e-12);
    }
}
