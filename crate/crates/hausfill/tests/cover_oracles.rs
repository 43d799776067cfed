//! Cover and dimension estimates checked against closed forms and an
//! independent cell-counting oracle.

use hausfill::cover::{
    box_dimension, greedy_disjoint_subsets, grid_cover, measure_upper_profile, separated_net,
    CellModel, SetSample,
};
use hausfill::gauge::HausdorffFunction;
use hausfill::space::{Point, SpaceDescriptor};
use hausfill::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CANTOR_DIM: f64 = 0.6309297535714574;

#[test]
fn cantor_premeasure_sums_stay_near_one_in_its_own_gauge() {
    let h = HausdorffFunction::power(CANTOR_DIM).unwrap();
    for depth in 2..=6u32 {
        let e = SetSample::cantor_middle_thirds(depth).unwrap();
        let delta = 3f64.powi(-(depth as i32));
        let est = grid_cover(&e, &h, delta).unwrap();
        assert_eq!(est.cell_count(), 1 << depth, "depth {depth}");
        // 2^depth cells of diameter 3^-depth, each worth (3^-depth)^s = 2^-depth
        assert!(
            (est.sum - 1.0).abs() < 1e-9,
            "depth {depth}: sum {}",
            est.sum
        );
        est.verify(&e, &h).unwrap();
    }
}

#[test]
fn grid_counts_match_an_independent_point_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let h = HausdorffFunction::power(1.0).unwrap();
    let ambient = SpaceDescriptor::euclidean_cube(1).unwrap();
    for trial in 0..20 {
        let points: Vec<Point> = (0..60).map(|_| Point(vec![rng.gen::<f64>()])).collect();
        let e = SetSample::from_points(ambient.clone(), points.clone()).unwrap();
        for depth in 1..=8u32 {
            let side = 1u64 << depth;
            let mut addrs: Vec<u64> = points
                .iter()
                .map(|p| ((p.coords()[0] * side as f64) as u64).min(side - 1))
                .collect();
            addrs.sort_unstable();
            addrs.dedup();
            let est = grid_cover(&e, &h, 0.5f64.powi(depth as i32)).unwrap();
            assert_eq!(est.cell_count(), addrs.len(), "trial {trial} depth {depth}");
            est.verify(&e, &h).unwrap();
        }
    }
}

#[test]
fn box_dimensions_hit_the_closed_forms() {
    let cantor = SetSample::cantor_middle_thirds(10).unwrap();
    let est = box_dimension(&cantor, 3, 10).unwrap();
    assert!(
        (est.slope - CANTOR_DIM).abs() < 1e-9,
        "cantor slope {}",
        est.slope
    );
    assert!(est.r_squared > 1.0 - 1e-12);

    let square = SetSample::cube_full(2, CellModel::Dyadic, 8).unwrap();
    let est = box_dimension(&square, 3, 8).unwrap();
    assert!((est.slope - 2.0).abs() < 1e-9, "square slope {}", est.slope);

    let interval = SetSample::unit_interval(4).unwrap();
    let est = box_dimension(&interval, 3, 8).unwrap();
    assert!(
        (est.slope - 1.0).abs() < 1e-9,
        "interval slope {}",
        est.slope
    );
}

#[test]
fn cantor_length_profile_decays_like_two_thirds_powers() {
    let e = SetSample::cantor_middle_thirds(8).unwrap();
    let h = HausdorffFunction::power(1.0).unwrap();
    let deltas: Vec<f64> = (1..=6).map(|j| 3f64.powi(-j)).collect();
    let profile = measure_upper_profile(&e, &h, &deltas).unwrap();
    assert_eq!(profile.len(), 6);
    for (j, est) in profile.iter().enumerate() {
        let expected = (2f64 / 3f64).powi(j as i32 + 1);
        assert!(
            (est.sum - expected).abs() < 1e-9,
            "delta 3^-{}: sum {} vs {}",
            j + 1,
            est.sum,
            expected
        );
    }
    for pair in profile.windows(2) {
        assert!(pair[1].sum < pair[0].sum);
    }
}

#[test]
fn greedy_subsets_are_disjoint_and_chargeable() {
    let e = SetSample::unit_interval(3).unwrap();
    let h = HausdorffFunction::power(0.5).unwrap();
    let parts = greedy_disjoint_subsets(&e, &h, 4, 2).unwrap();
    assert_eq!(parts.len(), 4);
    for (i, a) in parts.iter().enumerate() {
        assert!(!a.is_empty());
        for b in parts.iter().skip(i + 1) {
            let (_, _, cells_a) = a.cells().unwrap();
            let (_, _, cells_b) = b.cells().unwrap();
            for ca in cells_a {
                assert!(!cells_b.contains(ca), "parts {i} share cell {ca:?}");
            }
        }
    }

    let err = greedy_disjoint_subsets(&e, &h, 100, 2).unwrap_err();
    assert!(matches!(err, Error::InsufficientMass(_)));
}

#[test]
fn separated_nets_keep_their_distance() {
    let circle = SpaceDescriptor::circle(1.0).unwrap();
    let net = separated_net(&circle, 0.3).unwrap();
    assert!(!net.is_empty());
    assert!(net.len() <= 4, "packing bound on the unit circle");
    for (i, a) in net.iter().enumerate() {
        for b in net.iter().skip(i + 1) {
            assert!(circle.distance(a, b) >= 0.3 - 1e-12);
        }
    }

    let cantor = SpaceDescriptor::cantor_ultrametric(2, 1.0 / 3.0).unwrap();
    let net = separated_net(&cantor, 0.2).unwrap();
    for (i, a) in net.iter().enumerate() {
        for b in net.iter().skip(i + 1) {
            assert!(cantor.distance(a, b) >= 0.2 - 1e-12);
        }
    }
}

#[test]
fn cover_verification_rejects_a_foreign_sample() {
    let cantor = SetSample::cantor_middle_thirds(4).unwrap();
    let h = HausdorffFunction::power(CANTOR_DIM).unwrap();
    let est = grid_cover(&cantor, &h, 1.0 / 81.0).unwrap();
    est.verify(&cantor, &h).unwrap();

    let middle = SetSample::from_points(
        SpaceDescriptor::euclidean_cube(1).unwrap(),
        vec![Point(vec![0.5])],
    )
    .unwrap();
    assert!(
        est.verify(&middle, &h).is_err(),
        "0.5 sits in the removed middle third"
    );
}
