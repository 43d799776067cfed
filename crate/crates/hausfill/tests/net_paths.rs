//! Net hierarchies and connector paths: covering radii, parent budgets,
//! exact endpoints, and the 1-Lipschitz property.

use hausfill::space::{build_net_hierarchy, connect, Point, SpaceDescriptor};
use hausfill::Error;

fn targets() -> Vec<SpaceDescriptor> {
    vec![
        SpaceDescriptor::euclidean_cube(1).unwrap(),
        SpaceDescriptor::euclidean_cube(2).unwrap(),
        SpaceDescriptor::circle(1.0).unwrap(),
    ]
}

#[test]
fn nets_respect_their_covering_and_parent_budgets() {
    for y in targets() {
        let net = build_net_hierarchy(&y, 4).unwrap();
        assert_eq!(net.n_max(), 4);
        for n in 0..=4 {
            assert!(net.k(n) >= 1);
            assert!(
                net.validated_radius(n) <= net.covering_budget(n) + 1e-12,
                "{}: level {n} radius {} over budget {}",
                y.label(),
                net.validated_radius(n),
                net.covering_budget(n)
            );
        }
        for n in 1..=4 {
            for j in 0..net.k(n) {
                let child = &net.level(n)[j];
                let parent = &net.level(n - 1)[net.parent_of(n, j)];
                let d = y.distance(parent, child);
                assert!(
                    d <= net.covering_budget(n - 1) + 1e-12,
                    "{}: level {n} child {j} is {d} from its parent",
                    y.label()
                );
            }
        }
    }
}

#[test]
fn connector_paths_run_parent_to_child_at_unit_speed() {
    for y in targets() {
        let net = build_net_hierarchy(&y, 3).unwrap();
        for n in 1..=3 {
            for j in 0..net.k(n) {
                let path = net.path(n, j);
                let parent = &net.level(n - 1)[net.parent_of(n, j)];
                let child = &net.level(n)[j];
                assert_eq!(path.parent().coords(), parent.coords());
                assert_eq!(path.child().coords(), child.coords());

                let len = path.domain_length();
                assert!(len >= y.distance(parent, child) - 1e-12);
                assert_eq!(path.eval(0.0).unwrap().coords(), parent.coords());
                assert_eq!(path.eval(len).unwrap().coords(), child.coords());

                let steps = 16;
                let mut prev = path.eval(0.0).unwrap();
                for i in 1..=steps {
                    let s = len * i as f64 / steps as f64;
                    let here = path.eval(s).unwrap();
                    let moved = y.distance(&prev, &here);
                    assert!(
                        moved <= len / steps as f64 + 1e-12,
                        "{}: level {n} path {j} moved {moved} over {}",
                        y.label(),
                        len / steps as f64
                    );
                    prev = here;
                }
            }
        }
    }
}

#[test]
fn circle_connectors_take_the_short_way_around() {
    let y = SpaceDescriptor::circle(1.0).unwrap();
    let parent = Point(vec![0.05]);
    let child = Point(vec![0.95]);
    assert!((y.distance(&parent, &child) - 0.1).abs() < 1e-12);
    let path = connect(&parent, &child, 3, &y).unwrap();
    let mid = path.eval(0.05).unwrap();
    assert!(
        y.distance(&parent, &mid) <= 0.05 + 1e-12,
        "midpoint drifted: {:?}",
        mid.coords()
    );
    // the short way crosses 0, so the midpoint sits near the wrap point
    assert!(mid.coords()[0] < 0.05 || mid.coords()[0] > 0.95);
}

#[test]
fn connectors_reject_out_of_budget_endpoints() {
    let y = SpaceDescriptor::euclidean_cube(1).unwrap();
    let a = Point(vec![0.0]);
    let b = Point(vec![0.9]);
    // level 2 budget is 2^-1 = 0.5 < 0.9
    let err = connect(&a, &b, 2, &y).unwrap_err();
    assert!(matches!(err, Error::BudgetExceeded(_)));
    assert!(connect(&a, &b, 1, &y).is_ok());
}

#[test]
fn net_rejects_non_length_targets() {
    let cantor = SpaceDescriptor::cantor_ultrametric(2, 1.0 / 3.0).unwrap();
    assert!(matches!(
        build_net_hierarchy(&cantor, 3),
        Err(Error::ConfigInvalid(_))
    ));
}
