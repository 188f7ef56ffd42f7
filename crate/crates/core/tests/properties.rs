mod common;

use common::*;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use annulus_core::geometry::Point;

fn check(r: Check) -> Result<(), TestCaseError> {
    r.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn crossing_membership(pivot in point_in(3.0), w in point_in(3.0), rho in 0.05..1.5f64, r in 0.05..1.5f64) {
        check(crossing_matches_distance(pivot, w, rho, r))?;
    }

    #[test]
    fn enclosing_circle(pts in points(3.0, 1..=12)) {
        check(enclosing_circle_is_minimal(&pts))?;
    }

    #[test]
    fn empty_circle(pts in points(3.0, 3..=15)) {
        check(empty_circle_is_empty_and_largest(&pts))?;
    }

    #[test]
    fn sweep_soundness(pts in points(3.0, 1..=10), b in buffer()) {
        check(witnesses_are_sound(&pts, b))?;
    }

    #[test]
    fn sweep_closure(pts in points(3.0, 1..=8), b in buffer(), centers in prop::collection::vec(
        (-1.5..4.5f64, -1.5..4.5f64).prop_map(|(x, y)| Point::new(x, y)), 200)) {
        check(sampled_centers_are_enumerated(&pts, b, &centers))?;
    }

    #[test]
    fn sweep_bounds_and_periodicity(pts in points(3.0, 1..=10), b in buffer()) {
        check(sweeps_are_bounded_and_periodic(&pts, b))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn adjacency_perturbation(pts in points(3.0, 1..=12), jitter in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 12)) {
        check(adjacency_is_stable(&pts, &jitter))?;
    }

    #[test]
    fn connectivity_exhaustive(pts in points(2.0, 1..=8)) {
        check(connectivity_matches_search(&pts))?;
    }

    #[test]
    fn reliability_monotone(pts in points(2.0, 2..=7), p in 0.05..0.99f64) {
        check(reliability_is_monotone(&pts, p))?;
    }

    #[test]
    fn relax_keeps_edges(pts in points(3.0, 2..=20), every in 2..6usize) {
        check(relax_preserves_edges(&pts, every))?;
    }
}
