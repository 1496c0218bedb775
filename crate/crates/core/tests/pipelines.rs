use junta_core::boolfn::{make_function, plant_noisy_junta};
use junta_core::exactref::{exact_dist_to_juntas, ground_truth};
use junta_core::oracles::SimulatedProvider;
use junta_core::report::EstimateKind;
use junta_core::{Budget, EstimateParams, EstimatorRegistry, FunctionKind, SeedStream};

fn registry_run(name: &str, seed: u64) -> junta_core::report::Estimate {
    let p = plant_noisy_junta(10, 2, 0.05, 11).unwrap();
    EstimatorRegistry::with_defaults()
        .get(name)
        .unwrap()
        .estimate(&p.realized, EstimateParams { k: 2, eps: 0.2 }, &SimulatedProvider::default(), &Budget::desk(), SeedStream::new(seed))
        .unwrap()
}

#[test]
fn every_estimator_is_deterministic_in_its_seed() {
    for name in EstimatorRegistry::with_defaults().names() {
        let (a, b) = (registry_run(name, 5), registry_run(name, 5));
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn phase_query_counts_add_up() {
    let p = plant_noisy_junta(10, 2, 0.05, 12).unwrap();
    let est = junta_core::subexp::distance_estimate(&p.realized, 2, 0.2, &SimulatedProvider::default(), &Budget::desk(), SeedStream::new(1)).unwrap();
    assert_eq!(est.query_count(), p.realized.queries());
    assert_eq!(est.phases[0].queries, 0, "simulated provider reads the table for free");
}

#[test]
fn estimators_agree_with_ground_truth_on_a_planted_junta() {
    let p = plant_noisy_junta(10, 2, 0.05, 13).unwrap();
    let truth = ground_truth(&p.realized, 2, None).unwrap();
    let reg = EstimatorRegistry::with_defaults();
    for name in reg.names() {
        let est = reg
            .get(name)
            .unwrap()
            .estimate(&p.realized, EstimateParams { k: 2, eps: 0.2 }, &SimulatedProvider::default(), &Budget::desk(), SeedStream::new(2))
            .unwrap();
        let target = match est.kind {
            EstimateKind::Distance => truth.distance,
            EstimateKind::Mass => truth.subset_mass,
        };
        assert!((est.value - target).abs() <= 0.2, "{name}: {} vs {target}", est.value);
    }
}

#[test]
fn starved_sampler_fails_inside_a_named_phase() {
    let f = make_function(&FunctionKind::Majority(5), 10).unwrap();
    let budget = Budget { sampler_constant: 1e-9, sampler_delta: 0.5, ..Budget::desk() };
    let err = junta_core::prune::relaxed_distance_estimate(&f, 3, 0.2, &SimulatedProvider::default(), &budget, SeedStream::new(3)).unwrap_err();
    assert!(err.is_probabilistic());
    assert_eq!(err.phase(), Some("reduce"));
}

#[test]
fn dictator_is_a_one_junta() {
    let f = make_function(&FunctionKind::Dictator(4), 9).unwrap();
    assert_eq!(exact_dist_to_juntas(&f, 1).unwrap(), (0.0, 1 << 4));
    let est = junta_core::subexp::distance_estimate(&f, 1, 0.2, &SimulatedProvider::default(), &Budget::desk(), SeedStream::new(4)).unwrap();
    assert!(est.value < 0.1);
    assert_eq!(est.best_set, Some(1 << 4));
}
