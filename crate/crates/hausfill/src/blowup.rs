//! Hilbert-curve experiments: Hölder exponent estimation, exact dyadic
//! preimage bookkeeping, and blow-up reports for Cantor-column targets.
//!
//! The blow-up report rests on an exact identity. Covering a target
//! `C x [0,1]` by full dyadic columns of width `2^-q` costs `cols * 2^-q`
//! in area, and because the depth-`q` cell map is a bijection the same
//! number is the exact parameter length of the preimage of that cover.
//! The report therefore tracks `cols * 2^-q` per construction stage with
//! rational arithmetic, while the image keeps box dimension near
//! `1 + dim C`.

use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cover::{box_dimension, CellModel, DimensionEstimate, SetSample};
use crate::error::{Error, Result};
use crate::space::{Point, SpaceDescriptor};

/// Deepest dyadic refinement for curve cell arithmetic.
pub const CURVE_DEPTH_CAP: u32 = 26;
/// Deepest depth for exact preimage enumeration and blow-up reports.
pub const PREIMAGE_DEPTH_CAP: u32 = 12;
/// Largest explicit cell list a dyadic square set will hold.
pub const MAX_TARGET_CELLS: usize = 1 << 22;

type Rat = Ratio<i128>;

fn rot(s: u64, x: &mut u64, y: &mut u64, rx: u64, ry: u64) {
    if ry == 0 {
        if rx == 1 {
            *x = s - 1 - *x;
            *y = s - 1 - *y;
        }
        std::mem::swap(x, y);
    }
}

/// `(column, row)` of the `d`-th cell in the depth-`k` Hilbert traversal.
/// The walk starts in the corner cell at the origin and ends in the corner
/// cell at `(1, 0)`.
pub fn hilbert_d2xy(depth: u32, d: u64) -> (u64, u64) {
    let n = 1u64 << depth;
    let (mut x, mut y) = (0u64, 0u64);
    let mut t = d;
    let mut s = 1u64;
    while s < n {
        let rx = 1 & (t / 2);
        let ry = 1 & (t ^ rx);
        rot(s, &mut x, &mut y, rx, ry);
        x += s * rx;
        y += s * ry;
        t /= 4;
        s *= 2;
    }
    (x, y)
}

/// Center of the depth-`k` square assigned to the parameter cell of `t`.
pub fn hilbert_eval(t: f64, depth: u32) -> Result<Point> {
    if depth > CURVE_DEPTH_CAP {
        return Err(Error::DepthExceeded(format!(
            "hilbert_eval supports depth <= {CURVE_DEPTH_CAP}, got {depth}"
        )));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!(
            "curve parameter {t} outside [0, 1]"
        )));
    }
    let cells = 1u64 << (2 * depth);
    let m = ((t * cells as f64) as u64).min(cells - 1);
    let (x, y) = hilbert_d2xy(depth, m);
    let side = (1u64 << depth) as f64;
    Ok(Point(vec![
        (x as f64 + 0.5) / side,
        (y as f64 + 0.5) / side,
    ]))
}

/// Planar curves used in the Hölder experiments. Only the Hilbert curve
/// carries a genuine cell bijection; the rest are comparison curves with
/// known moduli of continuity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DyadicCurve {
    /// Classical U-order space-filling curve started in the origin corner.
    Hilbert,
    /// `t -> (t, 0)`, Lipschitz, exponent 1.
    Identity,
    /// `t -> (sqrt t, 0)`, exponent 1/2 at the left endpoint.
    SqrtSegment,
    /// `t -> (1/2, 1/2)`, degenerate.
    ConstantPoint,
}

impl DyadicCurve {
    /// Curve point at parameter `t`. `depth` fixes the cell resolution of
    /// the Hilbert curve and is validated for every variant.
    pub fn eval(&self, t: f64, depth: u32) -> Result<Point> {
        if let DyadicCurve::Hilbert = self {
            return hilbert_eval(t, depth);
        }
        if depth > CURVE_DEPTH_CAP {
            return Err(Error::DepthExceeded(format!(
                "curve evaluation supports depth <= {CURVE_DEPTH_CAP}, got {depth}"
            )));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidInput(format!(
                "curve parameter {t} outside [0, 1]"
            )));
        }
        Ok(match self {
            DyadicCurve::Identity => Point(vec![t, 0.0]),
            DyadicCurve::SqrtSegment => Point(vec![t.sqrt(), 0.0]),
            DyadicCurve::ConstantPoint => Point(vec![0.5, 0.5]),
            DyadicCurve::Hilbert => unreachable!(),
        })
    }
}

/// Log-log regression estimate of a Hölder exponent.
#[derive(Debug, Clone, Serialize)]
pub struct HolderEstimate {
    pub alpha_hat: f64,
    pub stderr: f64,
    /// `alpha_hat - 2 stderr, alpha_hat + 2 stderr`.
    pub band: (f64, f64),
    /// `(delta, largest sampled displacement)` per scale entering the fit.
    pub scales: Vec<(f64, f64)>,
}

/// Estimates the Hölder exponent of `curve` by regressing the log of the
/// largest sampled displacement against the log of the parameter gap over
/// the dyadic gaps `2^-2 ..= 2^-(2 depth - 2)`. The `pairs` budget is split
/// evenly across scales; each scale samples both endpoints plus seeded
/// uniform draws, so runs are deterministic in `(depth, pairs, seed)`.
pub fn holder_exponent(
    curve: DyadicCurve,
    depth: u32,
    pairs: usize,
    seed: u64,
) -> Result<HolderEstimate> {
    if !(3..=CURVE_DEPTH_CAP).contains(&depth) {
        return Err(Error::InvalidInput(format!(
            "holder_exponent needs depth in 3..={CURVE_DEPTH_CAP}, got {depth}"
        )));
    }
    if pairs < 1000 {
        return Err(Error::InvalidInput(format!(
            "holder_exponent needs at least 1000 pairs, got {pairs}"
        )));
    }
    let exponents: Vec<u32> = (2..=2 * depth - 2).collect();
    let per_scale = (pairs / exponents.len()).max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scales = Vec::with_capacity(exponents.len());
    for &j in &exponents {
        let delta = 0.5f64.powi(j as i32);
        let mut largest = 0.0f64;
        for i in 0..per_scale {
            let t = match i {
                0 => 0.0,
                1 => 1.0 - delta,
                _ => rng.gen::<f64>() * (1.0 - delta),
            };
            let a = curve.eval(t, depth)?;
            let b = curve.eval(t + delta, depth)?;
            largest = largest.max(planar_dist(&a, &b));
        }
        if largest > 0.0 {
            scales.push((delta, largest));
        }
    }
    if scales.len() < 2 {
        return Err(Error::DegenerateCurve(
            "sampled displacements vanish at every scale".into(),
        ));
    }
    let xs: Vec<f64> = scales.iter().map(|(d, _)| d.ln()).collect();
    let ys: Vec<f64> = scales.iter().map(|(_, m)| m.ln()).collect();
    let (slope, stderr) = slope_with_stderr(&xs, &ys);
    Ok(HolderEstimate {
        alpha_hat: slope,
        stderr,
        band: (slope - 2.0 * stderr, slope + 2.0 * stderr),
        scales,
    })
}

fn planar_dist(a: &Point, b: &Point) -> f64 {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(p, q)| (p - q).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn slope_with_stderr(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let df = xs.len().saturating_sub(2).max(1) as f64;
    (slope, (sse / df / sxx).sqrt())
}

/// Finite union of depth-`k` dyadic squares given by `(column, row)` cell
/// addresses, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicSquareSet {
    depth: u32,
    cells: Vec<(u64, u64)>,
}

impl DyadicSquareSet {
    pub fn new(depth: u32, mut cells: Vec<(u64, u64)>) -> Result<Self> {
        if depth > PREIMAGE_DEPTH_CAP {
            return Err(Error::ResolutionExceeded(format!(
                "dyadic square sets support depth <= {PREIMAGE_DEPTH_CAP}, got {depth}"
            )));
        }
        if cells.len() > MAX_TARGET_CELLS {
            return Err(Error::ResolutionExceeded(format!(
                "target lists at most {MAX_TARGET_CELLS} cells, got {}",
                cells.len()
            )));
        }
        let side = 1u64 << depth;
        for &(x, y) in &cells {
            if x >= side || y >= side {
                return Err(Error::InvalidInput(format!(
                    "cell ({x}, {y}) outside the depth-{depth} grid"
                )));
            }
        }
        cells.sort_unstable();
        cells.dedup();
        Ok(Self { depth, cells })
    }

    /// All cells with `x0 <= x <= x1` and `y0 <= y <= y1`.
    pub fn rect(depth: u32, x0: u64, x1: u64, y0: u64, y1: u64) -> Result<Self> {
        if depth > PREIMAGE_DEPTH_CAP {
            return Err(Error::ResolutionExceeded(format!(
                "dyadic square sets support depth <= {PREIMAGE_DEPTH_CAP}, got {depth}"
            )));
        }
        let side = 1u64 << depth;
        if x0 > x1 || y0 > y1 || x1 >= side || y1 >= side {
            return Err(Error::InvalidInput(format!(
                "bad rectangle ({x0}..={x1}, {y0}..={y1}) at depth {depth}"
            )));
        }
        let cells = (x0..=x1)
            .flat_map(|x| (y0..=y1).map(move |y| (x, y)))
            .collect();
        Self::new(depth, cells)
    }

    /// Cells in the left half of the square.
    pub fn left_half(depth: u32) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidInput("depth 0 has no left half".into()));
        }
        let side = 1u64 << depth;
        Self::rect(depth, 0, side / 2 - 1, 0, side - 1)
    }

    pub fn all(depth: u32) -> Result<Self> {
        let side = 1u64 << depth;
        Self::rect(depth, 0, side - 1, 0, side - 1)
    }

    pub fn empty(depth: u32) -> Result<Self> {
        Self::new(depth, Vec::new())
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn contains(&self, x: u64, y: u64) -> bool {
        self.cells.binary_search(&(x, y)).is_ok()
    }

    /// Exact total area, `cell_count / 4^depth`.
    pub fn area(&self) -> Ratio<i128> {
        Ratio::new(self.cells.len() as i128, 1i128 << (2 * self.depth))
    }
}

/// Disjoint union of parameter intervals with endpoints on the grid of
/// cell length `4^-depth`, stored as half-open runs in cell units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamUnion {
    depth: u32,
    runs: Vec<(u64, u64)>,
}

impl ParamUnion {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Half-open `[start, end)` runs in units of `4^-depth`.
    pub fn runs(&self) -> &[(u64, u64)] {
        &self.runs
    }

    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Exact total length.
    pub fn total_length(&self) -> Ratio<i128> {
        let cells: i128 = self.runs.iter().map(|&(a, b)| (b - a) as i128).sum();
        Ratio::new(cells, 1i128 << (2 * self.depth))
    }
}

/// Exact parameter preimage of `target` under the depth-`k` cell map of
/// `curve`: the union of the `4^-k`-length cells whose squares lie in the
/// target. Only the Hilbert curve has a cell bijection to pull back.
pub fn preimage(curve: DyadicCurve, target: &DyadicSquareSet) -> Result<ParamUnion> {
    if curve != DyadicCurve::Hilbert {
        return Err(Error::InvalidInput(
            "preimage needs a space-filling curve with a cell bijection".into(),
        ));
    }
    let depth = target.depth();
    let total = 1u64 << (2 * depth);
    let mut runs = Vec::new();
    let mut open: Option<u64> = None;
    for d in 0..total {
        let (x, y) = hilbert_d2xy(depth, d);
        match (target.contains(x, y), open) {
            (true, None) => open = Some(d),
            (false, Some(start)) => {
                runs.push((start, d));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        runs.push((start, total));
    }
    Ok(ParamUnion { depth, runs })
}

/// One construction stage of a blow-up report: the exact column cover bound
/// `bound_num / bound_den` on the parameter preimage, and the dyadic box
/// count of the image target at scale `2^-depth`.
#[derive(Debug, Clone, Serialize)]
pub struct BlowupRow {
    pub depth: u32,
    pub bound_num: u64,
    pub bound_den: u64,
    pub bound: f64,
    pub box_count: u64,
}

/// Witness report for the measure blow-up on a Cantor-column target.
#[derive(Debug, Clone, Serialize)]
pub struct BlowupReport {
    pub s_requested: f64,
    pub s_realized: f64,
    /// Exact contraction ratio of the generalized Cantor set; `(0, 1)` for
    /// the degenerate point target.
    pub ratio: (u32, u32),
    pub depth: u32,
    pub target: String,
    pub preimage_bounds: Vec<BlowupRow>,
    pub image_dimension: DimensionEstimate,
    pub verdict: String,
}

/// Builds the target `C x [0,1]` for the generalized Cantor set whose
/// contraction ratio is the closest fraction to `2^(-1/s_dim)` with
/// denominator at most 64 (strictly below 1/2), then reports exact column
/// cover bounds for the parameter preimage at stages `1..=depth` together
/// with a box dimension estimate of the image. The dimension fit uses cell
/// resolution `min(depth, 10)` to keep the sample in budget.
pub fn blowup_demo(s_dim: f64, depth: u32) -> Result<BlowupReport> {
    if !s_dim.is_finite() || s_dim <= 0.0 || s_dim >= 1.0 {
        return Err(Error::InvalidInput(format!(
            "s_dim must lie strictly inside (0, 1), got {s_dim}"
        )));
    }
    check_report_depth(depth)?;
    let (p, q) = best_ratio_below_half(2f64.powf(-1.0 / s_dim));
    let r = Rat::new(p as i128, q as i128);
    let (p, q) = (*r.numer() as u32, *r.denom() as u32);
    let s_realized = 2f64.ln() / (q as f64 / p as f64).ln();
    let final_lefts = cantor_stage_lefts(r, depth);
    let final_len = rat_pow(r, depth);
    let rows = stage_rows(
        |dd| {
            (
                cantor_stage_lefts(r, dd),
                rat_pow(r, dd),
                col_resolution(r, dd, CURVE_DEPTH_CAP),
            )
        },
        &final_lefts,
        final_len,
        depth,
    );
    let image_dimension = image_box_fit(&final_lefts, final_len, depth)?;
    let first = rows.first().expect("depth >= 6").bound;
    let last = rows.last().expect("depth >= 6").bound;
    let verdict = format!(
        "column cover bound falls {first:.6} -> {last:.6} across {depth} stages; \
         image box dimension fits {:.4} (r2 {:.4}) near target {:.4}",
        image_dimension.slope,
        image_dimension.r_squared,
        1.0 + s_realized
    );
    Ok(BlowupReport {
        s_requested: s_dim,
        s_realized,
        ratio: (p, q),
        depth,
        target: format!("cantor({p}/{q}) x [0,1]"),
        preimage_bounds: rows,
        image_dimension,
        verdict,
    })
}

/// Degenerate comparison target `{1/3} x [0,1]`: the column cover bound
/// decays like `2^-depth` and the image dimension estimate sits at 1.
pub fn blowup_demo_point(depth: u32) -> Result<BlowupReport> {
    check_report_depth(depth)?;
    let lefts = vec![Rat::new(1, 3)];
    let rows = stage_rows(
        |dd| (lefts.clone(), Rat::zero(), dd),
        &lefts,
        Rat::zero(),
        depth,
    );
    let image_dimension = image_box_fit(&lefts, Rat::zero(), depth)?;
    let last = rows.last().expect("depth >= 6").bound;
    let verdict = format!(
        "degenerate point target: column cover bound falls to {last:.6} while the \
         image stays one column wide (box dimension {:.4})",
        image_dimension.slope
    );
    Ok(BlowupReport {
        s_requested: 0.0,
        s_realized: 0.0,
        ratio: (0, 1),
        depth,
        target: "point(1/3) x [0,1]".into(),
        preimage_bounds: rows,
        image_dimension,
        verdict,
    })
}

fn check_report_depth(depth: u32) -> Result<()> {
    if depth > PREIMAGE_DEPTH_CAP {
        return Err(Error::ResolutionExceeded(format!(
            "blow-up reports support depth <= {PREIMAGE_DEPTH_CAP}, got {depth}"
        )));
    }
    if depth < 6 {
        return Err(Error::InvalidInput(format!(
            "blow-up reports need depth >= 6 for the dimension fit, got {depth}"
        )));
    }
    Ok(())
}

/// Closest fraction to `x` with denominator at most 64 and value strictly
/// below 1/2; ties keep the smaller denominator.
fn best_ratio_below_half(x: f64) -> (u32, u32) {
    let mut best = (1u32, 3u32);
    let mut err = f64::INFINITY;
    for den in 3..=64u32 {
        for num in 1..=(den - 1) / 2 {
            let e = (x - num as f64 / den as f64).abs();
            if e < err {
                err = e;
                best = (num, den);
            }
        }
    }
    best
}

fn rat_pow(r: Rat, e: u32) -> Rat {
    let mut out = Rat::one();
    for _ in 0..e {
        out *= r;
    }
    out
}

/// Left endpoints of the `2^stage` closed intervals of length `r^stage`
/// after `stage` splits of `[0, 1]`, in ascending order.
fn cantor_stage_lefts(r: Rat, stage: u32) -> Vec<Rat> {
    let mut lefts = vec![Rat::zero()];
    let mut len = Rat::one();
    for _ in 0..stage {
        let child = len * r;
        let mut next = Vec::with_capacity(lefts.len() * 2);
        for &a in &lefts {
            next.push(a);
            next.push(a + len - child);
        }
        lefts = next;
        len = child;
    }
    lefts
}

/// Smallest `q <= cap` with `2^-q <= r^stage`.
fn col_resolution(r: Rat, stage: u32, cap: u32) -> u32 {
    let len = rat_pow(r, stage);
    let half = Rat::new(1, 2);
    let mut w = Rat::one();
    let mut q = 0;
    while w > len && q < cap {
        w *= half;
        q += 1;
    }
    q
}

/// Merged inclusive index ranges of the width `2^-q` dyadic columns whose
/// closed interval meets one of the closed intervals `[a, a + len]`;
/// `lefts` must be ascending.
fn column_ranges(lefts: &[Rat], len: Rat, q: u32) -> Vec<(i128, i128)> {
    let scale = Rat::from_integer(1i128 << q);
    let top = (1i128 << q) - 1;
    let mut merged: Vec<(i128, i128)> = Vec::new();
    for &a in lefts {
        let lo = ((a * scale).ceil().to_integer() - 1).max(0);
        let hi = ((a + len) * scale).floor().to_integer().min(top);
        if lo > hi {
            continue;
        }
        match merged.last_mut() {
            Some(prev) if lo <= prev.1 + 1 => prev.1 = prev.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    merged
}

fn range_total(ranges: &[(i128, i128)]) -> u64 {
    ranges.iter().map(|&(lo, hi)| (hi - lo + 1) as u64).sum()
}

fn stage_rows(
    stage_geometry: impl Fn(u32) -> (Vec<Rat>, Rat, u32),
    final_lefts: &[Rat],
    final_len: Rat,
    depth: u32,
) -> Vec<BlowupRow> {
    (1..=depth)
        .map(|dd| {
            let (lefts, len, q) = stage_geometry(dd);
            let cols = range_total(&column_ranges(&lefts, len, q));
            let img_cols = range_total(&column_ranges(final_lefts, final_len, dd));
            BlowupRow {
                depth: dd,
                bound_num: cols,
                bound_den: 1u64 << q,
                bound: cols as f64 / (1u64 << q) as f64,
                box_count: img_cols << dd,
            }
        })
        .collect()
}

/// Box dimension of the column target over the final stage intervals,
/// sampled as full dyadic columns at resolution `min(depth, 10)`.
fn image_box_fit(lefts: &[Rat], len: Rat, depth: u32) -> Result<DimensionEstimate> {
    let image_depth = depth.min(10);
    let rows = 1u64 << image_depth;
    let mut addrs = Vec::new();
    for &(lo, hi) in &column_ranges(lefts, len, image_depth) {
        for cx in lo..=hi {
            for cy in 0..rows {
                addrs.push(vec![cx as u64, cy]);
            }
        }
    }
    let ambient = SpaceDescriptor::euclidean_cube(2)?;
    let sample = SetSample::from_cells(ambient, CellModel::Dyadic, image_depth, addrs)?;
    box_dimension(&sample, 3, image_depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::RngCore;

    #[test]
    fn hilbert_walk_hits_the_expected_corners() {
        assert_eq!(hilbert_d2xy(3, 0), (0, 0));
        assert_eq!(hilbert_d2xy(3, 63), (7, 0));
        let start = hilbert_eval(0.0, 3).unwrap();
        assert_relative_eq!(start.coords()[0], 0.5 / 8.0);
        assert_relative_eq!(start.coords()[1], 0.5 / 8.0);
        let end = hilbert_eval(1.0, 3).unwrap();
        assert_relative_eq!(end.coords()[0], 7.5 / 8.0);
        assert_relative_eq!(end.coords()[1], 0.5 / 8.0);
    }

    #[test]
    fn hilbert_walk_is_a_bijection_with_unit_steps() {
        for depth in 1..=6u32 {
            let side = 1u64 << depth;
            let mut seen = vec![false; (side * side) as usize];
            let mut prev: Option<(u64, u64)> = None;
            for d in 0..side * side {
                let (x, y) = hilbert_d2xy(depth, d);
                assert!(x < side && y < side);
                let idx = (y * side + x) as usize;
                assert!(!seen[idx], "cell revisited at depth {depth}");
                seen[idx] = true;
                if let Some((px, py)) = prev {
                    let step = px.abs_diff(x) + py.abs_diff(y);
                    assert_eq!(step, 1, "non-adjacent step at depth {depth}, d {d}");
                }
                prev = Some((x, y));
            }
            assert!(seen.iter().all(|&b| b));
        }
    }

    #[test]
    fn hilbert_refinement_respects_parents() {
        for depth in 1..=5u32 {
            for m in 0..1u64 << (2 * depth) {
                let (px, py) = hilbert_d2xy(depth, m);
                for i in 0..4 {
                    let (cx, cy) = hilbert_d2xy(depth + 1, 4 * m + i);
                    assert_eq!((cx >> 1, cy >> 1), (px, py));
                }
            }
        }
    }

    #[test]
    fn curve_evaluation_validates_inputs() {
        assert!(matches!(hilbert_eval(-0.1, 4), Err(Error::InvalidInput(_))));
        assert!(matches!(
            hilbert_eval(0.5, 27),
            Err(Error::DepthExceeded(_))
        ));
        assert!(matches!(
            DyadicCurve::Identity.eval(1.5, 4),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn holder_estimates_land_in_the_known_windows() {
        let hilbert = holder_exponent(DyadicCurve::Hilbert, 10, 10_000, 7).unwrap();
        assert!(
            hilbert.alpha_hat > 0.45 && hilbert.alpha_hat < 0.55,
            "hilbert alpha {}",
            hilbert.alpha_hat
        );
        assert!(hilbert.band.1 <= 0.6, "hilbert ucb {}", hilbert.band.1);

        let identity = holder_exponent(DyadicCurve::Identity, 10, 1_000, 7).unwrap();
        assert_relative_eq!(identity.alpha_hat, 1.0, epsilon = 1e-9);
        assert!(identity.stderr < 1e-9);

        let sqrt = holder_exponent(DyadicCurve::SqrtSegment, 10, 1_000, 7).unwrap();
        assert_relative_eq!(sqrt.alpha_hat, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn holder_rejects_degenerate_and_underpowered_runs() {
        assert!(matches!(
            holder_exponent(DyadicCurve::ConstantPoint, 8, 2_000, 1),
            Err(Error::DegenerateCurve(_))
        ));
        assert!(matches!(
            holder_exponent(DyadicCurve::Hilbert, 8, 999, 1),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn preimage_of_the_left_half_has_length_one_half() {
        for depth in 1..=6u32 {
            let target = DyadicSquareSet::left_half(depth).unwrap();
            let pre = preimage(DyadicCurve::Hilbert, &target).unwrap();
            assert_eq!(pre.total_length(), Ratio::new(1, 2), "depth {depth}");
            assert_eq!(pre.total_length(), target.area());
        }
    }

    #[test]
    fn preimage_of_everything_and_nothing() {
        let all = DyadicSquareSet::all(4).unwrap();
        let pre = preimage(DyadicCurve::Hilbert, &all).unwrap();
        assert_eq!(pre.runs(), &[(0, 256)]);
        assert_eq!(pre.total_length(), Ratio::from_integer(1));

        let empty = DyadicSquareSet::empty(4).unwrap();
        let pre = preimage(DyadicCurve::Hilbert, &empty).unwrap();
        assert!(pre.is_empty());
        assert_eq!(pre.total_length(), Ratio::from_integer(0));
    }

    #[test]
    fn preimage_length_matches_area_on_random_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for depth in 1..=6u32 {
            let side = 1u64 << depth;
            let cells: Vec<(u64, u64)> = (0..side * side)
                .filter(|_| rng.next_u32() % 3 == 0)
                .map(|i| (i % side, i / side))
                .collect();
            let target = DyadicSquareSet::new(depth, cells).unwrap();
            let pre = preimage(DyadicCurve::Hilbert, &target).unwrap();
            assert_eq!(pre.total_length(), target.area(), "depth {depth}");
        }
    }

    #[test]
    fn preimage_needs_the_cell_bijection() {
        let target = DyadicSquareSet::all(2).unwrap();
        assert!(matches!(
            preimage(DyadicCurve::Identity, &target),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn square_sets_validate_cells_and_depth() {
        assert!(matches!(
            DyadicSquareSet::new(2, vec![(4, 0)]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            DyadicSquareSet::new(13, Vec::new()),
            Err(Error::ResolutionExceeded(_))
        ));
        assert!(matches!(
            DyadicSquareSet::rect(3, 5, 2, 0, 7),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn blowup_for_the_triadic_cantor_target_matches_frozen_bounds() {
        let report = blowup_demo(2f64.ln() / 3f64.ln(), 10).unwrap();
        assert_eq!(report.ratio, (1, 3));
        assert_relative_eq!(report.s_realized, 2f64.ln() / 3f64.ln(), epsilon = 1e-12);
        let expected = [
            (4u64, 4u64),
            (10, 16),
            (16, 32),
            (42, 128),
            (70, 256),
            (154, 1024),
            (362, 4096),
            (570, 8192),
            (1340, 32768),
            (2158, 65536),
        ];
        assert_eq!(report.preimage_bounds.len(), expected.len());
        for (row, &(num, den)) in report.preimage_bounds.iter().zip(&expected) {
            assert_eq!(
                (row.bound_num, row.bound_den),
                (num, den),
                "stage {}",
                row.depth
            );
        }
        for pair in report.preimage_bounds.windows(2) {
            assert!(pair[1].bound <= pair[0].bound);
            assert!(pair[1].box_count >= 2 * pair[0].box_count);
        }
        assert!(report.preimage_bounds.last().unwrap().bound < 0.1);
        assert!(
            (report.image_dimension.slope - (1.0 + report.s_realized)).abs() <= 0.05,
            "image slope {}",
            report.image_dimension.slope
        );
        assert!(report.image_dimension.r_squared > 0.99);
    }

    #[test]
    fn blowup_point_target_is_flat() {
        let report = blowup_demo_point(8).unwrap();
        assert_eq!(report.ratio, (0, 1));
        for row in &report.preimage_bounds {
            assert_eq!((row.bound_num, row.bound_den), (1, 1u64 << row.depth));
            assert_eq!(row.box_count, 1u64 << row.depth);
        }
        assert_relative_eq!(report.image_dimension.slope, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn blowup_validates_parameters() {
        assert!(matches!(blowup_demo(1.0, 10), Err(Error::InvalidInput(_))));
        assert!(matches!(
            blowup_demo(0.6, 13),
            Err(Error::ResolutionExceeded(_))
        ));
        assert!(matches!(blowup_demo(0.6, 5), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn ratio_search_recovers_exact_cases() {
        assert_eq!(best_ratio_below_half(0.25), (1, 4));
        let r = best_ratio_below_half(2f64.powf(-(3f64.ln() / 2f64.ln())));
        assert_eq!((Ratio::new(r.0, r.1)), Ratio::new(1, 3));
    }
}
