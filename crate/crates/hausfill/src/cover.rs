//! Grid covers, premeasure profiles, box-counting dimension, and greedy nets.
//!
//! A [`SetSample`] is a finite description of a subset of an ambient space:
//! either a list of sample points or a union of grid cells at a fixed depth.
//! Every [`CoverEstimate`] produced here is certified: [`CoverEstimate::verify`]
//! re-derives the premeasure sum and re-checks coverage against the sample.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gauge::{Diam, HausdorffFunction, TOL};
use crate::space::{Point, SpaceDescriptor, SpaceKind};

/// Finest dyadic cell depth supported by the cell models.
pub const DYADIC_DEPTH_CAP: u32 = 26;
/// Finest triadic cell depth supported by the cell models.
pub const TRIADIC_DEPTH_CAP: u32 = 24;

const MAX_COVER_CELLS: u128 = 1 << 22;
const MAX_NET_POINTS: u128 = 1 << 16;

/// Subdivision scheme for grid cells in a cube ambient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellModel {
    Dyadic,
    Triadic,
}

impl CellModel {
    pub fn base(self) -> u64 {
        match self {
            CellModel::Dyadic => 2,
            CellModel::Triadic => 3,
        }
    }

    pub fn depth_cap(self) -> u32 {
        match self {
            CellModel::Dyadic => DYADIC_DEPTH_CAP,
            CellModel::Triadic => TRIADIC_DEPTH_CAP,
        }
    }
}

#[derive(Clone, Debug)]
enum SetData {
    Points(Vec<Point>),
    Cells {
        model: CellModel,
        depth: u32,
        /// Sorted, deduplicated per-axis cell indices at `depth`.
        addrs: Vec<Vec<u64>>,
    },
}

/// A finite sample of a subset of an ambient space.
#[derive(Clone, Debug)]
pub struct SetSample {
    ambient: SpaceDescriptor,
    data: SetData,
}

impl SetSample {
    /// Sample given by explicit points of the ambient space.
    pub fn from_points(ambient: SpaceDescriptor, points: Vec<Point>) -> Result<Self> {
        for p in &points {
            if !ambient.contains(p) {
                return Err(Error::InvalidInput(format!(
                    "point {:?} lies outside the ambient space {}",
                    p.coords(),
                    ambient.label()
                )));
            }
        }
        Ok(SetSample {
            ambient,
            data: SetData::Points(points),
        })
    }

    /// Sample given as a union of grid cells in a cube ambient.
    pub fn from_cells(
        ambient: SpaceDescriptor,
        model: CellModel,
        depth: u32,
        addrs: Vec<Vec<u64>>,
    ) -> Result<Self> {
        let dim = match ambient.kind() {
            SpaceKind::EuclideanCube { dim } | SpaceKind::SnowflakeCube { dim, .. } => *dim,
            _ => {
                return Err(Error::ConfigInvalid(format!(
                    "cell samples need a cube ambient, got {}",
                    ambient.label()
                )))
            }
        };
        if depth > model.depth_cap() {
            return Err(Error::ResolutionExceeded(format!(
                "cell depth {depth} exceeds the model cap {}",
                model.depth_cap()
            )));
        }
        let side = model.base().pow(depth);
        for addr in &addrs {
            if addr.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "cell address {addr:?} does not have {dim} axes"
                )));
            }
            if addr.iter().any(|&i| i >= side) {
                return Err(Error::InvalidInput(format!(
                    "cell address {addr:?} is out of range at depth {depth}"
                )));
            }
        }
        let mut addrs = addrs;
        addrs.sort();
        addrs.dedup();
        Ok(SetSample {
            ambient,
            data: SetData::Cells {
                model,
                depth,
                addrs,
            },
        })
    }

    /// The full cube `[0,1]^dim` as `base^(dim*depth)` cells.
    pub fn cube_full(dim: usize, model: CellModel, depth: u32) -> Result<Self> {
        let ambient = SpaceDescriptor::euclidean_cube(dim)?;
        let side = model.base().pow(depth);
        let total = (side as u128).pow(dim as u32);
        if total > MAX_COVER_CELLS {
            return Err(Error::ResolutionExceeded(format!(
                "full cube at depth {depth} needs {total} cells"
            )));
        }
        let mut addrs = Vec::with_capacity(total as usize);
        let mut addr = vec![0u64; dim];
        loop {
            addrs.push(addr.clone());
            let mut axis = dim;
            loop {
                if axis == 0 {
                    return SetSample::from_cells(ambient, model, depth, addrs);
                }
                axis -= 1;
                addr[axis] += 1;
                if addr[axis] < side {
                    break;
                }
                addr[axis] = 0;
            }
        }
    }

    /// The unit interval as dyadic cells.
    pub fn unit_interval(depth: u32) -> Result<Self> {
        SetSample::cube_full(1, CellModel::Dyadic, depth)
    }

    /// Level-`depth` approximation of the middle-thirds Cantor set:
    /// all triadic cells whose digits avoid 1.
    pub fn cantor_middle_thirds(depth: u32) -> Result<Self> {
        if depth > TRIADIC_DEPTH_CAP {
            return Err(Error::ResolutionExceeded(format!(
                "triadic depth {depth} exceeds the cap {TRIADIC_DEPTH_CAP}"
            )));
        }
        let mut addrs: Vec<Vec<u64>> = vec![vec![0]];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(addrs.len() * 2);
            for a in &addrs {
                next.push(vec![a[0] * 3]);
                next.push(vec![a[0] * 3 + 2]);
            }
            addrs = next;
        }
        SetSample::from_cells(
            SpaceDescriptor::euclidean_cube(1)?,
            CellModel::Triadic,
            depth,
            addrs,
        )
    }

    pub fn empty(ambient: SpaceDescriptor) -> Self {
        SetSample {
            ambient,
            data: SetData::Points(Vec::new()),
        }
    }

    pub fn ambient(&self) -> &SpaceDescriptor {
        &self.ambient
    }

    pub fn is_empty(&self) -> bool {
        match &self.data {
            SetData::Points(p) => p.is_empty(),
            SetData::Cells { addrs, .. } => addrs.is_empty(),
        }
    }

    /// Explicit points, if this sample is point data.
    pub fn points(&self) -> Option<&[Point]> {
        match &self.data {
            SetData::Points(p) => Some(p),
            SetData::Cells { .. } => None,
        }
    }

    /// Cell model, native depth, and sorted addresses, if this is cell data.
    pub fn cells(&self) -> Option<(CellModel, u32, &[Vec<u64>])> {
        match &self.data {
            SetData::Cells {
                model,
                depth,
                addrs,
            } => Some((*model, *depth, addrs)),
            SetData::Points(_) => None,
        }
    }

    /// Whether the coordinate `x` lies in some cell (or equals some point) of
    /// a one-dimensional sample. Cell boundaries count as inside.
    pub fn contains_coord(&self, x: f64) -> bool {
        match &self.data {
            SetData::Points(pts) => pts.iter().any(|p| p.coords() == [x]),
            SetData::Cells {
                model,
                depth,
                addrs,
            } => {
                let side = model.base().pow(*depth);
                let scaled = x * side as f64;
                if !(0.0..=side as f64).contains(&scaled) {
                    return false;
                }
                let hi = (scaled.floor() as u64).min(side - 1);
                let lo = if scaled == scaled.floor() && hi > 0 {
                    hi - 1
                } else {
                    hi
                };
                addrs.iter().any(|a| a[0] == hi || a[0] == lo)
            }
        }
    }

    fn dim(&self) -> usize {
        match self.ambient.kind() {
            SpaceKind::EuclideanCube { dim } | SpaceKind::SnowflakeCube { dim, .. } => *dim,
            _ => 1,
        }
    }

    fn is_cube_ambient(&self) -> bool {
        matches!(
            self.ambient.kind(),
            SpaceKind::EuclideanCube { .. } | SpaceKind::SnowflakeCube { .. }
        )
    }

    fn grid_base(&self) -> u64 {
        match &self.data {
            SetData::Cells { model, .. } => model.base(),
            SetData::Points(_) => 2,
        }
    }

    fn grid_depth_cap(&self) -> u32 {
        match &self.data {
            SetData::Cells { model, .. } => model.depth_cap(),
            SetData::Points(_) => DYADIC_DEPTH_CAP,
        }
    }

    /// Metric diameter of one grid cell at `depth`.
    fn cell_diam(&self, depth: u32) -> f64 {
        let base = self.grid_base();
        let euclid = (self.dim() as f64).sqrt() * (base as f64).powi(-(depth as i32));
        match self.ambient.kind() {
            SpaceKind::SnowflakeCube { alpha, .. } => euclid.powf(*alpha),
            _ => euclid,
        }
    }

    fn point_addr(&self, p: &Point, base: u64, depth: u32) -> Vec<u64> {
        let side = base.pow(depth);
        p.coords()
            .iter()
            .map(|&x| ((x * side as f64).floor() as u64).min(side - 1))
            .collect()
    }

    /// Distinct grid cells of depth `depth` meeting the sample, in
    /// lexicographic order.
    fn cells_at_depth(&self, depth: u32) -> Result<Vec<Vec<u64>>> {
        match &self.data {
            SetData::Points(pts) => {
                let set: BTreeSet<Vec<u64>> = pts
                    .iter()
                    .map(|p| self.point_addr(p, self.grid_base(), depth))
                    .collect();
                Ok(set.into_iter().collect())
            }
            SetData::Cells {
                model,
                depth: native,
                addrs,
            } => {
                if depth <= *native {
                    let shift = model.base().pow(native - depth);
                    let set: BTreeSet<Vec<u64>> = addrs
                        .iter()
                        .map(|a| a.iter().map(|&i| i / shift).collect())
                        .collect();
                    Ok(set.into_iter().collect())
                } else {
                    let factor = model.base().pow(depth - native);
                    let per_cell = (factor as u128).pow(self.dim() as u32);
                    let total = per_cell * addrs.len() as u128;
                    if total > MAX_COVER_CELLS {
                        return Err(Error::ResolutionExceeded(format!(
                            "refining to depth {depth} needs {total} cells"
                        )));
                    }
                    let dim = self.dim();
                    let mut out = Vec::with_capacity(total as usize);
                    for a in addrs {
                        let mut off = vec![0u64; dim];
                        loop {
                            out.push(a.iter().zip(&off).map(|(&i, &o)| i * factor + o).collect());
                            let mut axis = dim;
                            let mut done = false;
                            loop {
                                if axis == 0 {
                                    done = true;
                                    break;
                                }
                                axis -= 1;
                                off[axis] += 1;
                                if off[axis] < factor {
                                    break;
                                }
                                off[axis] = 0;
                            }
                            if done {
                                break;
                            }
                        }
                    }
                    Ok(out)
                }
            }
        }
    }

    /// Number of distinct depth-`depth` cells meeting the sample.
    fn count_at_depth(&self, depth: u32) -> Result<u64> {
        match &self.data {
            SetData::Points(_) => Ok(self.cells_at_depth(depth)?.len() as u64),
            SetData::Cells {
                model,
                depth: native,
                addrs,
            } => {
                if depth <= *native {
                    Ok(self.cells_at_depth(depth)?.len() as u64)
                } else {
                    let factor = model.base().pow(depth - native) as u128;
                    let total = factor.pow(self.dim() as u32) * addrs.len() as u128;
                    u64::try_from(total).map_err(|_| {
                        Error::ResolutionExceeded(format!("cell count at depth {depth} overflows"))
                    })
                }
            }
        }
    }
}

/// One covering set: a grid cell or a metric ball.
#[derive(Clone, Debug)]
pub enum CoverCell {
    GridCell { addr: Vec<u64>, diam: f64 },
    Ball { center: Point, diam: f64 },
}

impl CoverCell {
    pub fn diam(&self) -> f64 {
        match self {
            CoverCell::GridCell { diam, .. } | CoverCell::Ball { diam, .. } => *diam,
        }
    }
}

#[derive(Clone, Debug)]
enum CoverScheme {
    Grid {
        base: u64,
        depth: u32,
    },
    /// Metric balls; a point is covered when its distance to some center is
    /// at most `radius_factor` times that ball's diameter. Ultrametric balls
    /// of radius r have diameter at most r, so their factor is 1.
    Balls {
        radius_factor: f64,
    },
}

/// A certified delta-cover together with its premeasure sum.
#[derive(Clone, Debug)]
pub struct CoverEstimate {
    pub delta: f64,
    pub cells: Vec<CoverCell>,
    pub sum: f64,
    scheme: CoverScheme,
}

impl CoverEstimate {
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Re-checks the estimate against the sample it claims to cover:
    /// every diameter is at most `delta`, the sum is reproducible by the
    /// same left-to-right premeasure fold, and the cells cover the sample.
    pub fn verify(&self, e: &SetSample, h: &HausdorffFunction) -> Result<()> {
        let mut sum = 0.0;
        for c in &self.cells {
            if c.diam() > self.delta * (1.0 + TOL) {
                return Err(Error::InvalidInput(format!(
                    "cover cell of diameter {} exceeds delta {}",
                    c.diam(),
                    self.delta
                )));
            }
            sum += h.premeasure(Diam::Of(c.diam()))?;
        }
        if sum != self.sum {
            return Err(Error::InvalidInput(format!(
                "cover sum {} does not reproduce as {sum}",
                self.sum
            )));
        }
        match &self.scheme {
            CoverScheme::Grid { base, depth } => {
                let covered: BTreeSet<&[u64]> = self
                    .cells
                    .iter()
                    .map(|c| match c {
                        CoverCell::GridCell { addr, .. } => addr.as_slice(),
                        CoverCell::Ball { .. } => &[],
                    })
                    .collect();
                match &e.data {
                    SetData::Points(pts) => {
                        for p in pts {
                            let addr = e.point_addr(p, *base, *depth);
                            if !covered.contains(addr.as_slice()) {
                                return Err(Error::InvalidInput(format!(
                                    "point {:?} is not covered",
                                    p.coords()
                                )));
                            }
                        }
                    }
                    SetData::Cells {
                        model,
                        depth: native,
                        addrs,
                    } => {
                        if model.base() != *base {
                            return Err(Error::InvalidInput(
                                "cover base does not match the cell model".into(),
                            ));
                        }
                        if depth <= native {
                            let shift = base.pow(native - depth);
                            for a in addrs {
                                let prefix: Vec<u64> = a.iter().map(|&i| i / shift).collect();
                                if !covered.contains(prefix.as_slice()) {
                                    return Err(Error::InvalidInput(format!(
                                        "cell {a:?} is not covered"
                                    )));
                                }
                            }
                        } else {
                            let native_set: BTreeSet<&[u64]> =
                                addrs.iter().map(|a| a.as_slice()).collect();
                            let shift = base.pow(depth - native);
                            for c in &covered {
                                let prefix: Vec<u64> = c.iter().map(|&i| i / shift).collect();
                                if !native_set.contains(prefix.as_slice()) {
                                    return Err(Error::InvalidInput(format!(
                                        "cover cell {c:?} lies outside the sample"
                                    )));
                                }
                            }
                            let expected = e.count_at_depth(*depth)?;
                            if covered.len() as u64 != expected {
                                return Err(Error::InvalidInput(format!(
                                    "cover has {} cells but the sample refines to {expected}",
                                    covered.len()
                                )));
                            }
                        }
                    }
                }
            }
            CoverScheme::Balls { radius_factor } => {
                let pts = e.points().ok_or_else(|| {
                    Error::InvalidInput("ball covers verify against point samples".into())
                })?;
                for p in pts {
                    let ok = self.cells.iter().any(|c| match c {
                        CoverCell::Ball { center, diam } => {
                            e.ambient.distance(p, center) <= diam * radius_factor * (1.0 + TOL)
                        }
                        CoverCell::GridCell { .. } => false,
                    });
                    if !ok {
                        return Err(Error::InvalidInput(format!(
                            "point {:?} is not covered by any ball",
                            p.coords()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A cheapest grid (or greedy ball) delta-cover of the sample, priced by the
/// premeasure of `h`.
pub fn grid_cover(e: &SetSample, h: &HausdorffFunction, delta: f64) -> Result<CoverEstimate> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "delta must be positive, got {delta}"
        )));
    }
    if e.is_empty() {
        return Ok(CoverEstimate {
            delta,
            cells: Vec::new(),
            sum: 0.0,
            scheme: CoverScheme::Balls { radius_factor: 0.5 },
        });
    }
    if e.is_cube_ambient() {
        let cap = e.grid_depth_cap();
        let mut depth = None;
        for j in 0..=cap {
            if e.cell_diam(j) <= delta * (1.0 + TOL) {
                depth = Some(j);
                break;
            }
        }
        let depth = depth.ok_or_else(|| {
            Error::ResolutionExceeded(format!(
                "no grid of depth <= {cap} has cell diameter <= {delta}"
            ))
        })?;
        let diam = e.cell_diam(depth);
        let addrs = e.cells_at_depth(depth)?;
        let mut sum = 0.0;
        let mut cells = Vec::with_capacity(addrs.len());
        for addr in addrs {
            sum += h.premeasure(Diam::Of(diam))?;
            cells.push(CoverCell::GridCell { addr, diam });
        }
        Ok(CoverEstimate {
            delta,
            cells,
            sum,
            scheme: CoverScheme::Grid {
                base: e.grid_base(),
                depth,
            },
        })
    } else {
        let radius_factor = match e.ambient.kind() {
            SpaceKind::CantorUltrametric { .. } => 1.0,
            _ => 0.5,
        };
        let pts = e.points().expect("non-cube samples are point data");
        let mut centers: Vec<Point> = Vec::new();
        for p in pts {
            if centers
                .iter()
                .all(|c| e.ambient.distance(p, c) > delta * radius_factor)
            {
                centers.push(p.clone());
            }
        }
        let mut sum = 0.0;
        let mut cells = Vec::with_capacity(centers.len());
        for center in centers {
            sum += h.premeasure(Diam::Of(delta))?;
            cells.push(CoverCell::Ball {
                center,
                diam: delta,
            });
        }
        Ok(CoverEstimate {
            delta,
            cells,
            sum,
            scheme: CoverScheme::Balls { radius_factor },
        })
    }
}

/// Prices an explicit ball family as a cover: `delta` is the largest ball
/// diameter and the sum folds the premeasure of each ball.
pub fn cover_from_balls(
    ambient: &SpaceDescriptor,
    h: &HausdorffFunction,
    balls: &[(Point, f64)],
) -> Result<CoverEstimate> {
    if balls.is_empty() {
        return Err(Error::InvalidInput(
            "ball cover needs at least one ball".into(),
        ));
    }
    let mut delta = 0.0f64;
    for (center, radius) in balls {
        if !(*radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidRadii(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        if !ambient.contains(center) {
            return Err(Error::InvalidInput(format!(
                "ball center {:?} lies outside {}",
                center.coords(),
                ambient.label()
            )));
        }
        delta = delta.max(2.0 * radius);
    }
    let mut sum = 0.0;
    let mut cells = Vec::with_capacity(balls.len());
    for (center, radius) in balls {
        sum += h.premeasure(Diam::Of(2.0 * radius))?;
        cells.push(CoverCell::Ball {
            center: center.clone(),
            diam: 2.0 * radius,
        });
    }
    Ok(CoverEstimate {
        delta,
        cells,
        sum,
        scheme: CoverScheme::Balls { radius_factor: 0.5 },
    })
}

/// Covers the sample at each scale of a strictly decreasing delta schedule.
pub fn measure_upper_profile(
    e: &SetSample,
    h: &HausdorffFunction,
    deltas: &[f64],
) -> Result<Vec<CoverEstimate>> {
    if deltas.is_empty() {
        return Err(Error::InvalidInput("delta schedule is empty".into()));
    }
    for w in deltas.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::InvalidInput(format!(
                "delta schedule must be strictly decreasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    deltas.iter().map(|&d| grid_cover(e, h, d)).collect()
}

/// Log-log box-counting fit over a range of grid depths.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DimensionEstimate {
    pub slope: f64,
    pub r_squared: f64,
    /// `(delta, cell count)` at each depth used in the fit.
    pub scales: Vec<(f64, u64)>,
}

/// Box-counting dimension estimate from grid counts at depths
/// `depth_lo..=depth_hi` (at least four scales).
pub fn box_dimension(e: &SetSample, depth_lo: u32, depth_hi: u32) -> Result<DimensionEstimate> {
    if !e.is_cube_ambient() {
        return Err(Error::ConfigInvalid(format!(
            "box dimension needs a cube ambient, got {}",
            e.ambient.label()
        )));
    }
    if e.is_empty() {
        return Err(Error::UndefinedDimension(
            "the empty sample has no box dimension".into(),
        ));
    }
    if depth_hi < depth_lo + 3 {
        return Err(Error::InvalidInput(format!(
            "need at least four scales, got depths {depth_lo}..={depth_hi}"
        )));
    }
    if depth_hi > e.grid_depth_cap() {
        return Err(Error::ResolutionExceeded(format!(
            "depth {depth_hi} exceeds the model cap {}",
            e.grid_depth_cap()
        )));
    }
    let mut scales = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in depth_lo..=depth_hi {
        let count = e.count_at_depth(j)?;
        let delta = e.cell_diam(j);
        scales.push((delta, count));
        xs.push((1.0 / delta).ln());
        ys.push((count as f64).ln());
    }
    let (slope, r_squared) = ols_fit(&xs, &ys);
    Ok(DimensionEstimate {
        slope,
        r_squared,
        scales,
    })
}

/// Least-squares slope and r-squared; a flat response fits perfectly.
pub(crate) fn ols_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (my + slope * (x - mx))).powi(2))
        .sum();
    let r_squared = if ss_tot <= TOL {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    (slope, r_squared)
}

/// Splits the sample into `m` disjoint sub-samples, one per depth-`depth`
/// grid cell, taking the lexicographically first `m` occupied cells. Each
/// sub-sample is certified to carry positive premeasure at that resolution.
pub fn greedy_disjoint_subsets(
    e: &SetSample,
    h: &HausdorffFunction,
    m: usize,
    depth: u32,
) -> Result<Vec<SetSample>> {
    if m == 0 {
        return Err(Error::InvalidInput("need at least one subset".into()));
    }
    if !e.is_cube_ambient() {
        return Err(Error::ConfigInvalid(format!(
            "disjoint subsets need a cube ambient, got {}",
            e.ambient.label()
        )));
    }
    let keys = e.cells_at_depth(depth)?;
    if keys.len() < m {
        return Err(Error::InsufficientMass(format!(
            "sample occupies {} cells at depth {depth}, fewer than {m}",
            keys.len()
        )));
    }
    let chosen: Vec<&Vec<u64>> = keys.iter().take(m).collect();
    let mut out = Vec::with_capacity(m);
    match &e.data {
        SetData::Points(pts) => {
            for key in chosen {
                let members: Vec<Point> = pts
                    .iter()
                    .filter(|p| &e.point_addr(p, e.grid_base(), depth) == key)
                    .cloned()
                    .collect();
                out.push(SetSample::from_points(e.ambient.clone(), members)?);
            }
        }
        SetData::Cells {
            model,
            depth: native,
            addrs,
        } => {
            if depth <= *native {
                let shift = model.base().pow(native - depth);
                for key in chosen {
                    let members: Vec<Vec<u64>> = addrs
                        .iter()
                        .filter(|a| a.iter().zip(key).all(|(&i, &k)| i / shift == k))
                        .cloned()
                        .collect();
                    out.push(SetSample::from_cells(
                        e.ambient.clone(),
                        *model,
                        *native,
                        members,
                    )?);
                }
            } else {
                for key in chosen {
                    out.push(SetSample::from_cells(
                        e.ambient.clone(),
                        *model,
                        depth,
                        vec![key.clone()],
                    )?);
                }
            }
        }
    }
    for sub in &out {
        let est = grid_cover(sub, h, sub.cell_diam(depth))?;
        if !(est.sum > 0.0) {
            return Err(Error::InsufficientMass(format!(
                "a subset has premeasure sum {} at depth {depth}",
                est.sum
            )));
        }
    }
    Ok(out)
}

/// Greedy separated net over the deterministic sample stream of the space:
/// keeps a stream point iff it is at distance >= `sep` from every kept point.
pub fn separated_net(space: &SpaceDescriptor, sep: f64) -> Result<Vec<Point>> {
    if !(sep > 0.0) || !sep.is_finite() {
        return Err(Error::InvalidInput(format!(
            "separation must be positive, got {sep}"
        )));
    }
    let diam = space.diameter();
    let dim = match space.kind() {
        SpaceKind::EuclideanCube { dim } | SpaceKind::SnowflakeCube { dim, .. } => *dim,
        _ => 1,
    };
    let bound = (2.0 * diam / sep + 1.0).powi(dim as i32) as u128;
    if bound > MAX_NET_POINTS {
        return Err(Error::ResolutionExceeded(format!(
            "separation {sep} admits on the order of {bound} net points"
        )));
    }
    let depth = match space.kind() {
        SpaceKind::SinglePoint => 0,
        SpaceKind::EuclideanCube { dim } => {
            let need = (2.0 * (*dim as f64).sqrt() / sep).log2().ceil() as i64;
            let cap = match dim {
                1 => 16,
                2 => 9,
                _ => 6,
            };
            need.clamp(1, cap) as u32
        }
        SpaceKind::SnowflakeCube { dim, alpha } => {
            let euclid = (sep / 2.0).powf(1.0 / *alpha);
            let need = ((*dim as f64).sqrt() / euclid).log2().ceil() as i64;
            let cap = match dim {
                1 => 16,
                2 => 9,
                _ => 6,
            };
            need.clamp(1, cap) as u32
        }
        SpaceKind::CantorUltrametric {
            branching,
            scale,
            cap,
        } => {
            let mut j = 0u32;
            let mut w = 1.0;
            while w >= sep && j < *cap {
                w *= scale;
                j += 1;
            }
            let size_cap = (18.0 / (*branching as f64).log2()).floor() as u32;
            (j + 1).clamp(1, size_cap.max(1).min(*cap))
        }
        SpaceKind::Circle { circumference } => {
            let need = (2.0 * circumference / sep).log2().ceil() as i64;
            need.clamp(1, 16) as u32
        }
    };
    let stream = space.sample_stream(depth)?;
    let monotone = matches!(
        space.kind(),
        SpaceKind::EuclideanCube { dim: 1 }
            | SpaceKind::SnowflakeCube { dim: 1, .. }
            | SpaceKind::CantorUltrametric { .. }
    );
    let circular = matches!(space.kind(), SpaceKind::Circle { .. });
    let mut kept: Vec<Point> = Vec::new();
    for p in stream {
        let far = if kept.is_empty() {
            true
        } else if monotone {
            space.distance(&p, kept.last().unwrap()) >= sep
        } else if circular {
            space.distance(&p, kept.last().unwrap()) >= sep && space.distance(&p, &kept[0]) >= sep
        } else {
            kept.iter().all(|q| space.distance(&p, q) >= sep)
        };
        if far {
            kept.push(p);
        }
    }
    Ok(kept)
}
