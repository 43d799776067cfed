//! Hilbert-curve arithmetic checked against an independent geometric
//! recursion, plus exact preimage bookkeeping on random targets.

use hausfill::blowup::{
    blowup_demo, hilbert_d2xy, hilbert_eval, preimage, DyadicCurve, DyadicSquareSet,
};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Depth-`k` Hilbert traversal built from the four corner symmetries,
/// independent of the bit-twiddling walk under test: the lower-left copy is
/// the transpose, the two upper copies are shifted, the lower-right copy is
/// the anti-transpose.
fn oracle_order(depth: u32) -> Vec<(u64, u64)> {
    let mut order = vec![(0u64, 0u64)];
    for level in 0..depth {
        let n = 1u64 << level;
        let mut next = Vec::with_capacity(order.len() * 4);
        next.extend(order.iter().map(|&(x, y)| (y, x)));
        next.extend(order.iter().map(|&(x, y)| (x, y + n)));
        next.extend(order.iter().map(|&(x, y)| (x + n, y + n)));
        next.extend(order.iter().map(|&(x, y)| (2 * n - 1 - y, n - 1 - x)));
        order = next;
    }
    order
}

#[test]
fn walk_matches_the_geometric_recursion() {
    for depth in 1..=8u32 {
        let oracle = oracle_order(depth);
        for (d, &cell) in oracle.iter().enumerate() {
            assert_eq!(
                hilbert_d2xy(depth, d as u64),
                cell,
                "depth {depth}, step {d}"
            );
        }
    }
}

#[test]
fn consecutive_parameter_cells_map_to_edge_neighbours() {
    // the spec-level adjacency audit at depth 8: 4^8 - 1 consecutive pairs
    let depth = 8;
    let mut prev = hilbert_d2xy(depth, 0);
    for d in 1..1u64 << (2 * depth) {
        let here = hilbert_d2xy(depth, d);
        assert_eq!(
            prev.0.abs_diff(here.0) + prev.1.abs_diff(here.1),
            1,
            "step {d}"
        );
        prev = here;
    }
}

#[test]
fn evaluation_is_consistent_across_depths() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ts: Vec<f64> = std::iter::once(1.0)
        .chain((0..50).map(|_| rng.gen::<f64>()))
        .collect();
    for &t in &ts {
        for depth in 1..=10u32 {
            let coarse = hilbert_eval(t, depth).unwrap();
            let fine = hilbert_eval(t, depth + 1).unwrap();
            let cell = 0.5f64.powi(depth as i32);
            for axis in 0..2 {
                let lo = coarse.coords()[axis] - 0.5 * cell;
                let hi = coarse.coords()[axis] + 0.5 * cell;
                assert!(
                    fine.coords()[axis] > lo && fine.coords()[axis] < hi,
                    "t = {t}: depth {} point leaves its depth {depth} cell",
                    depth + 1
                );
            }
        }
    }
    // t = 1 pins the corner cell next to (1, 0) at every depth
    for depth in 1..=12u32 {
        let side = (1u64 << depth) as f64;
        let p = hilbert_eval(1.0, depth).unwrap();
        assert_eq!(p.coords()[0], (side - 0.5) / side);
        assert_eq!(p.coords()[1], 0.5 / side);
    }
}

#[test]
fn preimage_runs_match_a_naive_membership_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for depth in 1..=6u32 {
        let side = 1u64 << depth;
        let cells: Vec<(u64, u64)> = (0..side * side)
            .filter(|_| rng.gen::<f64>() < 0.4)
            .map(|i| (i % side, i / side))
            .collect();
        let target = DyadicSquareSet::new(depth, cells).unwrap();
        let union = preimage(DyadicCurve::Hilbert, &target).unwrap();

        let mut naive = vec![false; (side * side) as usize];
        for (d, flag) in naive.iter_mut().enumerate() {
            let (x, y) = hilbert_d2xy(depth, d as u64);
            *flag = target.contains(x, y);
        }
        let mut runs = Vec::new();
        let mut start = None;
        for (d, &hit) in naive.iter().enumerate() {
            match (hit, start) {
                (true, None) => start = Some(d as u64),
                (false, Some(s)) => {
                    runs.push((s, d as u64));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push((s, side * side));
        }
        assert_eq!(union.runs(), runs.as_slice(), "depth {depth}");
        assert_eq!(union.total_length(), target.area(), "depth {depth}");
    }
}

#[test]
fn half_plane_targets_split_the_parameter_evenly() {
    for depth in 1..=7u32 {
        let left = DyadicSquareSet::left_half(depth).unwrap();
        let pre = preimage(DyadicCurve::Hilbert, &left).unwrap();
        assert_eq!(pre.total_length(), Ratio::new(1, 2));
    }
}

#[test]
fn blowup_report_is_internally_consistent() {
    let report = blowup_demo(0.5, 8).unwrap();
    assert_eq!(report.ratio, (1, 4));
    for row in &report.preimage_bounds {
        // ratio 1/4 gives stage intervals of length 4^-d, so q = 2d
        assert_eq!(row.bound_den, 1u64 << (2 * row.depth).min(26));
    }
    for pair in report.preimage_bounds.windows(2) {
        assert!(pair[1].bound <= pair[0].bound);
    }
    assert!(
        (report.image_dimension.slope - 1.5).abs() < 0.1,
        "image of the 1/4 Cantor columns: slope {}",
        report.image_dimension.slope
    );
}
