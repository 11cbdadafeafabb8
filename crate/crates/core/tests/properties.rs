use proptest::prelude::*;
use slrf_core::rng::from_seed;
use slrf_core::{
    least_confidence, Classifier, ClassifierSpec, FeatureBounds, ForestParams, GbParams, Sample, SobolStream,
    TreeParams,
};

fn samples(n_features: usize, n_classes: usize) -> impl Strategy<Value = Vec<Sample>> {
    prop::collection::vec(
        (prop::collection::vec(-100.0..100.0f64, n_features), 0..n_classes).prop_map(|(x, y)| Sample::new(x, y)),
        2..40,
    )
}

fn specs() -> impl Strategy<Value = ClassifierSpec> {
    prop_oneof![
        (1..8usize).prop_map(|t| ClassifierSpec::RandomForest(ForestParams { n_trees: t, ..ForestParams::default() })),
        (prop::option::of(1..6usize))
            .prop_map(|d| ClassifierSpec::DecisionTree(TreeParams { max_depth: d, min_samples_split: 2 })),
        (1..6usize).prop_map(|r| ClassifierSpec::GradientBoosting(GbParams { n_rounds: r, ..GbParams::default() })),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn predictions_are_distributions(
        data in samples(3, 4),
        spec in specs(),
        probe in prop::collection::vec(-200.0..200.0f64, 3),
        seed in any::<u64>(),
    ) {
        let model = spec.fit(&data, 4, &mut from_seed(seed)).unwrap();
        prop_assert!(model.check(3).is_ok());
        let p = model.proba(&probe);
        prop_assert_eq!(p.len(), 4);
        prop_assert!(p.as_slice().iter().all(|&v| (0.0..=1.0).contains(&v)));
        prop_assert!((p.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert_eq!(model.predict(&probe), p.argmax());
        let lcs = least_confidence(&p);
        prop_assert!((0.0..=0.75 + 1e-12).contains(&lcs));
    }

    #[test]
    fn refitting_with_the_same_seed_is_identical(data in samples(2, 3), spec in specs(), seed in any::<u64>()) {
        let a = spec.fit(&data, 3, &mut from_seed(seed)).unwrap();
        let b = spec.fit(&data, 3, &mut from_seed(seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn normalization_is_monotone_and_clamped(
        lo in -1e3..1e3f64,
        width in 0.0..1e3f64,
        a in -3e3..3e3f64,
        b in -3e3..3e3f64,
    ) {
        let bounds = FeatureBounds::new(vec![lo], vec![lo + width]).unwrap();
        let (na, nb) = (bounds.normalize_coord(0, a), bounds.normalize_coord(0, b));
        prop_assert!((0.0..=1.0).contains(&na));
        if width == 0.0 {
            prop_assert_eq!(na, 0.5);
        } else if a <= b {
            prop_assert!(na <= nb);
        }
    }

    #[test]
    fn sobol_points_lie_in_the_unit_cube(dim in 1..=32usize, count in 0..300usize) {
        let mut s = SobolStream::new(dim).unwrap();
        for p in s.points(count) {
            prop_assert_eq!(p.len(), dim);
            prop_assert!(p.iter().all(|&v| (0.0..1.0).contains(&v)));
        }
        prop_assert_eq!(s.index(), count as u64);
    }
}
