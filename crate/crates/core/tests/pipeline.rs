mod common;

use common::{load, q};
use sgmc::algebra::{Point, Q};
use sgmc::chainfile::ChainFile;
use sgmc::markov::MarkovChainSpec;
use sgmc::pipeline::{check_point, full_report, path_checks, stationary, Options, Verification};
use sgmc::semigroup::Transformation;
use sgmc::Error;

fn thirds() -> Point {
    (0..3).map(|v| (v, q(1, 3))).collect()
}

/// The example chain with generator "3" sending both states to the second.
fn corrupted() -> MarkovChainSpec {
    let mut spec = load("example210.json");
    spec.generators[2].action = Transformation::new(vec![1, 1]).unwrap();
    spec
}

#[test]
fn example_stationary_values() {
    let spec = load("example210.json");
    let (result, verification) = full_report(&spec, &Options::default()).unwrap();
    assert!(verification.passed());
    assert_eq!(result.state_values(&thirds()).unwrap(), vec![q(1, 2), q(1, 2)]);
}

#[test]
fn all_examples_verify() {
    for name in ["d2.json", "d2c.json", "d2box.json", "example210.json"] {
        let file = ChainFile::load(&common::data_path(name)).unwrap();
        let spec = file.to_spec().unwrap();
        let mut opts = Options::default();
        file.apply_options(&mut opts);
        let (result, verification) = full_report(&spec, &opts).unwrap();
        assert!(verification.passed(), "{name}");
        assert!(verification.failure(&result.vars).is_none());
        assert!(path_checks(&result, 8, opts.max_paths).unwrap().iter().all(|c| c.passed()), "{name}");
    }
}

#[test]
fn corrupted_chain_fails_verification() {
    let spec = load("example210.json");
    let opts = Options::default();
    let result = stationary(&spec.semigroup(opts.max_elements).unwrap(), &opts).unwrap();
    let bad = corrupted();
    let check = check_point(&bad, &result, &thirds()).unwrap();
    assert!(!check.passed);
    let verification = Verification {
        checks: vec![check],
        normalization: true,
    };
    match verification.failure(&result.vars) {
        Some(Error::VerificationFailed { point, .. }) => assert!(point.contains("1/3"), "{point}"),
        other => panic!("expected a verification failure, got {other:?}"),
    }
}

#[test]
fn corrupted_chain_passes_on_its_own() {
    let (_, verification) = full_report(&corrupted(), &Options::default()).unwrap();
    assert!(verification.passed());
}

#[test]
fn force_general_agrees_with_left_zero() {
    let spec = load("example210.json");
    let lz = Options::default();
    let general = Options { force_general: true, ..Options::default() };
    let s = spec.semigroup(lz.max_elements).unwrap();
    let a = stationary(&s, &lz).unwrap();
    let b = stationary(&s, &general).unwrap();
    for p in [thirds(), [(0, q(1, 2)), (1, q(1, 4)), (2, q(1, 4))].into_iter().collect()] {
        assert_eq!(a.state_values(&p).unwrap(), b.state_values(&p).unwrap());
    }
    let total: Q = a.state_values(&thirds()).unwrap().into_iter().fold(q(0, 1), |x, y| x + y);
    assert_eq!(total, q(1, 1));
}
