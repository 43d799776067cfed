//! Built-in metric spaces and the net/path infrastructure used by the
//! filling construction: level sets `Y_n`, parent assignment, and
//! 1-Lipschitz connector paths.
//!
//! Spaces are closed-form descriptors, not point clouds: distance, a
//! deterministic sample stream, and (for length spaces) geodesic segments
//! are all computed from the descriptor. Supported kinds:
//!
//! - `euclidean-cube(dim)`: `[0,1]^dim` with the Euclidean metric (a
//!   geodesic space, so the length metric is the metric itself);
//! - `snowflake-cube(dim, α)`: same point set, distance `|x−y|^α`; not a
//!   length space, admitted as a construction domain only;
//! - `cantor-ultrametric(b, s)`: depth-capped `b`-ary sequence space with
//!   `d(x,y) = s^{common prefix}`; not a length space;
//! - `circle(c)`: circumference-`c` circle with the arc metric;
//! - `point`: the one-point space.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::gauge::TOL;

/// A point, stored as raw coordinates. Cube and snowflake points are
/// `dim`-vectors in `[0,1]^dim`; circle points are a single arclength
/// coordinate in `[0, c)`; Cantor points are the embedded value
/// `index / b^cap` of a depth-capped address; the one-point space uses
/// `[0.0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total order on coordinates; coordinates are never NaN.
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.partial_cmp(b).expect("point coordinates are not NaN") {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

/// Address resolution cap for the Cantor ultrametric: indices must stay
/// exactly recoverable from the embedded f64 coordinate.
const CANTOR_CAP_BITS: f64 = 40.0;
const CANTOR_CAP_MAX: u32 = 24;

/// Space kind plus parameters; see the module docs for the metrics.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceKind {
    EuclideanCube {
        dim: usize,
    },
    SnowflakeCube {
        dim: usize,
        alpha: f64,
    },
    CantorUltrametric {
        branching: u64,
        scale: f64,
        cap: u32,
    },
    Circle {
        circumference: f64,
    },
    SinglePoint,
}

/// A concrete metric space: kind, metric, diameter, deterministic sampler.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceDescriptor {
    kind: SpaceKind,
}

impl SpaceDescriptor {
    /// `[0,1]^dim`, Euclidean metric. `dim` ∈ 1..=3 (net and cover caps are
    /// tuned for desk-scale dimensions).
    pub fn euclidean_cube(dim: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::ConfigInvalid(format!(
                "cube dimension must be 1..=3, got {dim}"
            )));
        }
        Ok(Self {
            kind: SpaceKind::EuclideanCube { dim },
        })
    }

    /// `[0,1]^dim` with `d(x,y) = |x−y|^α`, `α ∈ (0,1)`.
    pub fn snowflake_cube(dim: usize, alpha: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::ConfigInvalid(format!(
                "cube dimension must be 1..=3, got {dim}"
            )));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::ConfigInvalid(format!(
                "snowflake exponent must lie in (0,1), got {alpha}"
            )));
        }
        Ok(Self {
            kind: SpaceKind::SnowflakeCube { dim, alpha },
        })
    }

    /// Depth-capped `branching`-ary sequence space with the ultrametric
    /// `d(x,y) = scale^{|common prefix|}` (diameter 1).
    pub fn cantor_ultrametric(branching: u64, scale: f64) -> Result<Self> {
        if branching < 2 {
            return Err(Error::ConfigInvalid(format!(
                "cantor branching must be at least 2, got {branching}"
            )));
        }
        if !(scale > 0.0 && scale <= 0.9) {
            return Err(Error::ConfigInvalid(format!(
                "cantor scale must lie in (0, 0.9], got {scale}"
            )));
        }
        let cap = (CANTOR_CAP_BITS / (branching as f64).log2()).floor() as u32;
        let cap = cap.min(CANTOR_CAP_MAX);
        Ok(Self {
            kind: SpaceKind::CantorUltrametric {
                branching,
                scale,
                cap,
            },
        })
    }

    /// Circle of circumference `c ≤ 2` with the arc (path) metric.
    pub fn circle(circumference: f64) -> Result<Self> {
        if !(circumference > 0.0 && circumference <= 2.0) {
            return Err(Error::ConfigInvalid(format!(
                "circle circumference must lie in (0, 2], got {circumference}"
            )));
        }
        Ok(Self {
            kind: SpaceKind::Circle { circumference },
        })
    }

    /// The one-point space.
    pub fn single_point() -> Self {
        Self {
            kind: SpaceKind::SinglePoint,
        }
    }

    /// Resolve a registry string: `cube:D`, `interval`, `square`,
    /// `unit-square`, `snowflake:D:ALPHA`, `cantor` (= `cantor:2:0.3333…`),
    /// `cantor:B:SCALE`, `circle` (= `circle:1`), `circle:C`, `point`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let parse_f64 = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::InvalidInput(format!("bad number {s:?} in space spec")))
        };
        let parse_usize = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::InvalidInput(format!("bad integer {s:?} in space spec")))
        };
        match spec {
            "interval" => return Self::euclidean_cube(1),
            "square" | "unit-square" => return Self::euclidean_cube(2),
            "cantor" => return Self::cantor_ultrametric(2, 1.0 / 3.0),
            "circle" => return Self::circle(1.0),
            "point" => return Ok(Self::single_point()),
            _ => {}
        }
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            ["cube", d] => Self::euclidean_cube(parse_usize(d)?),
            ["snowflake", d, a] => Self::snowflake_cube(parse_usize(d)?, parse_f64(a)?),
            ["cantor", b, s] => {
                let b: u64 = b
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad branching {b:?}")))?;
                Self::cantor_ultrametric(b, parse_f64(s)?)
            }
            ["circle", c] => Self::circle(parse_f64(c)?),
            _ => Err(Error::InvalidInput(format!("unknown space {spec:?}"))),
        }
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn label(&self) -> String {
        match &self.kind {
            SpaceKind::EuclideanCube { dim } => format!("cube:{dim}"),
            SpaceKind::SnowflakeCube { dim, alpha } => format!("snowflake:{dim}:{alpha}"),
            SpaceKind::CantorUltrametric {
                branching, scale, ..
            } => {
                format!("cantor:{branching}:{scale}")
            }
            SpaceKind::Circle { circumference } => format!("circle:{circumference}"),
            SpaceKind::SinglePoint => "point".to_string(),
        }
    }

    /// Number of coordinates a point of this space carries.
    pub fn point_dim(&self) -> usize {
        match &self.kind {
            SpaceKind::EuclideanCube { dim } | SpaceKind::SnowflakeCube { dim, .. } => *dim,
            _ => 1,
        }
    }

    pub fn diameter(&self) -> f64 {
        match &self.kind {
            SpaceKind::EuclideanCube { dim } => (*dim as f64).sqrt(),
            SpaceKind::SnowflakeCube { dim, alpha } => (*dim as f64).sqrt().powf(*alpha),
            SpaceKind::CantorUltrametric { .. } => 1.0,
            SpaceKind::Circle { circumference } => circumference / 2.0,
            SpaceKind::SinglePoint => 0.0,
        }
    }

    /// True for geodesic kinds (cube, circle, point): the kinds the net
    /// hierarchy and connector paths support.
    pub fn is_length_space(&self) -> bool {
        matches!(
            self.kind,
            SpaceKind::EuclideanCube { .. } | SpaceKind::Circle { .. } | SpaceKind::SinglePoint
        )
    }

    pub fn distance(&self, a: &Point, b: &Point) -> f64 {
        let d = self.point_dim();
        assert_eq!(a.dim(), d, "point dimension mismatch in {}", self.label());
        assert_eq!(b.dim(), d, "point dimension mismatch in {}", self.label());
        match &self.kind {
            SpaceKind::EuclideanCube { .. } => euclid(a, b),
            SpaceKind::SnowflakeCube { alpha, .. } => euclid(a, b).powf(*alpha),
            SpaceKind::CantorUltrametric {
                branching,
                scale,
                cap,
            } => {
                let ia = cantor_index(a.0[0], *branching, *cap);
                let ib = cantor_index(b.0[0], *branching, *cap);
                if ia == ib {
                    return 0.0;
                }
                let (mut ia, mut ib, mut depth) = (ia, ib, *cap);
                while ia != ib {
                    ia /= branching;
                    ib /= branching;
                    depth -= 1;
                }
                scale.powi(depth as i32)
            }
            SpaceKind::Circle { circumference } => {
                let d = (a.0[0] - b.0[0]).abs();
                d.min(circumference - d)
            }
            SpaceKind::SinglePoint => 0.0,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        if p.dim() != self.point_dim() {
            return false;
        }
        match &self.kind {
            SpaceKind::EuclideanCube { .. } | SpaceKind::SnowflakeCube { .. } => {
                p.0.iter().all(|&x| (-TOL..=1.0 + TOL).contains(&x))
            }
            SpaceKind::CantorUltrametric { .. } => (-TOL..1.0).contains(&p.0[0]),
            SpaceKind::Circle { circumference } => (-TOL..*circumference).contains(&p.0[0]),
            SpaceKind::SinglePoint => true,
        }
    }

    /// Deterministic sample stream: the lexicographically ordered uniform
    /// grid at the requested depth (per-axis spacing `2^{−depth}` for cube
    /// kinds, `c·2^{−depth}` arcs for the circle, all depth-`depth` addresses
    /// for the Cantor space). Streams larger than 2^22 points are refused.
    pub fn sample_stream(&self, depth: u32) -> Result<Vec<Point>> {
        const MAX_STREAM: u64 = 1 << 22;
        match &self.kind {
            SpaceKind::EuclideanCube { dim } | SpaceKind::SnowflakeCube { dim, .. } => {
                let side = (1u64 << depth) + 1;
                let total = side.pow(*dim as u32);
                if total > MAX_STREAM {
                    return Err(Error::ResolutionExceeded(format!(
                        "cube stream at depth {depth} has {total} points (cap {MAX_STREAM})"
                    )));
                }
                let h = 1.0 / (1u64 << depth) as f64;
                let mut out = Vec::with_capacity(total as usize);
                let mut idx = vec![0u64; *dim];
                loop {
                    out.push(Point(idx.iter().map(|&i| i as f64 * h).collect()));
                    let mut axis = *dim;
                    loop {
                        if axis == 0 {
                            return Ok(out);
                        }
                        axis -= 1;
                        idx[axis] += 1;
                        if idx[axis] < side {
                            break;
                        }
                        idx[axis] = 0;
                    }
                }
            }
            SpaceKind::CantorUltrametric { branching, cap, .. } => {
                let depth = depth.min(*cap);
                let total = branching.pow(depth);
                if total > MAX_STREAM {
                    return Err(Error::ResolutionExceeded(format!(
                        "cantor stream at depth {depth} has {total} points (cap {MAX_STREAM})"
                    )));
                }
                let denom = (*branching as f64).powi(depth as i32);
                Ok((0..total).map(|i| Point(vec![i as f64 / denom])).collect())
            }
            SpaceKind::Circle { circumference } => {
                let total = 1u64 << depth;
                if total > MAX_STREAM {
                    return Err(Error::ResolutionExceeded(format!(
                        "circle stream at depth {depth} has {total} points (cap {MAX_STREAM})"
                    )));
                }
                let h = circumference / total as f64;
                Ok((0..total).map(|i| Point(vec![i as f64 * h])).collect())
            }
            SpaceKind::SinglePoint => Ok(vec![Point(vec![0.0])]),
        }
    }
}

fn euclid(a: &Point, b: &Point) -> f64 {
    a.0.iter()
        .zip(&b.0)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn cantor_index(x: f64, branching: u64, cap: u32) -> u64 {
    let scale = (branching as f64).powi(cap as i32);
    let idx = (x * scale).round();
    let max = branching.pow(cap) - 1;
    (idx.max(0.0) as u64).min(max)
}

/// Geodesic shape backing a connector path.
#[derive(Debug, Clone, PartialEq)]
enum PathShape {
    /// parent == child; the path waits at the endpoint for its whole domain.
    Constant,
    /// Straight segment in a cube, arclength-parameterized.
    Segment { dist: f64 },
    /// Shortest circle arc; `dir` is ±1.0 (ties to +1).
    Arc {
        dist: f64,
        dir: f64,
        circumference: f64,
    },
}

/// An arclength-parameterized geodesic from `parent` to `child` on the
/// domain `[0, domain_length]` with a constant tail once the child is
/// reached; 1-Lipschitz by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectorPath {
    parent: Point,
    child: Point,
    domain_length: f64,
    shape: PathShape,
}

impl ConnectorPath {
    pub fn parent(&self) -> &Point {
        &self.parent
    }

    pub fn child(&self) -> &Point {
        &self.child
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_length
    }

    /// Evaluate at parameter `s ∈ [0, domain_length]`.
    pub fn eval(&self, s: f64) -> Result<Point> {
        if !(-TOL..=self.domain_length + TOL).contains(&s) {
            return Err(Error::InvalidInput(format!(
                "path parameter {s} outside [0, {}]",
                self.domain_length
            )));
        }
        let s = s.clamp(0.0, self.domain_length);
        Ok(match &self.shape {
            PathShape::Constant => self.child.clone(),
            PathShape::Segment { dist } => {
                let u = s.min(*dist) / dist;
                if u <= 0.0 {
                    self.parent.clone()
                } else if u >= 1.0 {
                    self.child.clone()
                } else {
                    Point(
                        self.parent
                            .0
                            .iter()
                            .zip(&self.child.0)
                            .map(|(p, c)| p + u * (c - p))
                            .collect(),
                    )
                }
            }
            PathShape::Arc {
                dist,
                dir,
                circumference,
            } => {
                let u = s.min(*dist);
                if u <= 0.0 {
                    self.parent.clone()
                } else if u >= *dist {
                    self.child.clone()
                } else {
                    Point(vec![(self.parent.0[0] + dir * u).rem_euclid(*circumference)])
                }
            }
        })
    }
}

/// Build the level-`n` connector from `parent` to `child` on the domain
/// `[0, 2^{−(n−1)}]`: a straight segment in cubes, the shortest arc on the
/// circle, a constant path when the endpoints coincide. The endpoints must
/// be within the domain budget.
pub fn connect(
    parent: &Point,
    child: &Point,
    level: usize,
    y: &SpaceDescriptor,
) -> Result<ConnectorPath> {
    if level == 0 {
        return Err(Error::InvalidInput("connector level must be ≥ 1".into()));
    }
    if !y.is_length_space() {
        return Err(Error::ConfigInvalid(format!(
            "{} is not a supported length space; connectors need cube, circle, or point",
            y.label()
        )));
    }
    let domain_length = 0.5f64.powi(level as i32 - 1);
    let dist = y.distance(parent, child);
    if dist > domain_length * (1.0 + TOL) {
        return Err(Error::BudgetExceeded(format!(
            "endpoints {dist} apart exceed the level-{level} path budget {domain_length}"
        )));
    }
    let shape = if dist == 0.0 {
        PathShape::Constant
    } else {
        match y.kind() {
            SpaceKind::EuclideanCube { .. } => PathShape::Segment { dist },
            SpaceKind::Circle { circumference } => {
                let c = *circumference;
                let fwd = (child.0[0] - parent.0[0]).rem_euclid(c);
                let (dist, dir) = if fwd <= c - fwd {
                    (fwd, 1.0)
                } else {
                    (c - fwd, -1.0)
                };
                PathShape::Arc {
                    dist,
                    dir,
                    circumference: c,
                }
            }
            _ => unreachable!("length-space check covers the remaining kinds"),
        }
    };
    Ok(ConnectorPath {
        parent: parent.clone(),
        child: child.clone(),
        domain_length,
        shape,
    })
}

/// Nets `Y_0, …, Y_{n_max}` with parent assignment and connector paths:
/// `Y_n` covers the space within `2^{−n}`, every child sits within
/// `2^{−(n−1)}` of its parent, and each child's connector runs from the
/// parent to the child.
#[derive(Debug, Clone)]
pub struct NetHierarchy {
    space: SpaceDescriptor,
    levels: Vec<Vec<Point>>,
    parents: Vec<Vec<usize>>,
    paths: Vec<Vec<ConnectorPath>>,
    validated_radius: Vec<f64>,
    validation_depth: u32,
}

impl NetHierarchy {
    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    /// Deepest built level.
    pub fn n_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &[Point] {
        &self.levels[n]
    }

    pub fn k(&self, n: usize) -> usize {
        self.levels[n].len()
    }

    /// Index into level `n−1` of the parent of child `j` at level `n ≥ 1`.
    pub fn parent_of(&self, n: usize, j: usize) -> usize {
        self.parents[n][j]
    }

    pub fn path(&self, n: usize, j: usize) -> &ConnectorPath {
        &self.paths[n][j]
    }

    /// Covering radius contract at level `n`.
    pub fn covering_budget(&self, n: usize) -> f64 {
        0.5f64.powi(n as i32)
    }

    /// Largest validation-sample distance to the level-`n` net actually
    /// observed while building.
    pub fn validated_radius(&self, n: usize) -> f64 {
        self.validated_radius[n]
    }

    /// Spacing of the validation grid (the "sample resolution" of the
    /// covering guarantees).
    pub fn validation_resolution(&self) -> f64 {
        0.5f64.powi(self.validation_depth as i32)
    }
}

/// Cube-net grid resolution at level `n ≥ 1`: the coarsest uniform grid
/// whose cell centers cover the cube within `2^{−n}`.
fn cube_grid(dim: usize, n: usize) -> u64 {
    ((dim as f64).sqrt() * 0.5f64.powi(1 - (n as i32))).ceil() as u64
}

fn cube_center(idx: &[u64], g: u64) -> Point {
    Point(idx.iter().map(|&i| (i as f64 + 0.5) / g as f64).collect())
}

/// Nearest level-`g_prev` grid center to coordinate `x = (2i+1)/(2g)`,
/// computed in exact integer arithmetic; equidistant pairs resolve to the
/// smaller index, which keeps the overall assignment lexicographic.
fn nearest_axis_center(i: u64, g: u64, g_prev: u64) -> u64 {
    let num = (2 * i + 1) * g_prev;
    let den = 2 * g;
    let mut j = num / den;
    if num.is_multiple_of(den) && j > 0 {
        j -= 1;
    }
    j.min(g_prev - 1)
}

/// Build the net hierarchy for a length space with the default validation
/// grid (two levels finer than `n_max`).
pub fn build_net_hierarchy(y: &SpaceDescriptor, n_max: usize) -> Result<NetHierarchy> {
    build_net_hierarchy_with(y, n_max, n_max as u32 + 2)
}

/// As [`build_net_hierarchy`] with an explicit validation-grid depth.
pub fn build_net_hierarchy_with(
    y: &SpaceDescriptor,
    n_max: usize,
    validation_depth: u32,
) -> Result<NetHierarchy> {
    if n_max == 0 {
        return Err(Error::InvalidInput("net hierarchy needs n_max ≥ 1".into()));
    }
    if !y.is_length_space() {
        return Err(Error::ConfigInvalid(format!(
            "{} is not a supported length space; nets need cube, circle, or point",
            y.label()
        )));
    }
    const MAX_LEVEL_POINTS: u64 = 1 << 22;

    let mut levels: Vec<Vec<Point>> = Vec::with_capacity(n_max + 1);
    let mut parents: Vec<Vec<usize>> = vec![Vec::new()];
    let mut paths: Vec<Vec<ConnectorPath>> = vec![Vec::new()];

    match y.kind() {
        SpaceKind::EuclideanCube { dim } => {
            let dim = *dim;
            levels.push(vec![Point(vec![0.5; dim])]);
            for n in 1..=n_max {
                let g = cube_grid(dim, n);
                let count = g.pow(dim as u32);
                if count > MAX_LEVEL_POINTS {
                    return Err(Error::ResolutionExceeded(format!(
                        "net level {n} needs {count} points (cap {MAX_LEVEL_POINTS})"
                    )));
                }
                let g_prev = if n == 1 { 0 } else { cube_grid(dim, n - 1) };
                let mut pts = Vec::with_capacity(count as usize);
                let mut par = Vec::with_capacity(count as usize);
                let mut idx = vec![0u64; dim];
                'grid: loop {
                    pts.push(cube_center(&idx, g));
                    if n == 1 {
                        par.push(0);
                    } else {
                        let mut flat = 0u64;
                        for (axis, &i) in idx.iter().enumerate() {
                            let j = nearest_axis_center(i, g, g_prev);
                            flat = flat * g_prev + j;
                            let _ = axis;
                        }
                        par.push(flat as usize);
                    }
                    let mut axis = dim;
                    loop {
                        if axis == 0 {
                            break 'grid;
                        }
                        axis -= 1;
                        idx[axis] += 1;
                        if idx[axis] < g {
                            break;
                        }
                        idx[axis] = 0;
                    }
                }
                levels.push(pts);
                parents.push(par);
            }
        }
        SpaceKind::Circle { circumference } => {
            let c = *circumference;
            levels.push(vec![Point(vec![0.0])]);
            for n in 1..=n_max {
                let count = 1u64 << n;
                if count > MAX_LEVEL_POINTS {
                    return Err(Error::ResolutionExceeded(format!(
                        "net level {n} needs {count} points (cap {MAX_LEVEL_POINTS})"
                    )));
                }
                let h = c / count as f64;
                let pts: Vec<Point> = (0..count).map(|i| Point(vec![i as f64 * h])).collect();
                let prev_count = 1usize << (n - 1);
                let par: Vec<usize> = (0..count as usize)
                    .map(|j| {
                        if j % 2 == 0 {
                            j / 2
                        } else {
                            let a = j / 2;
                            let b = (j / 2 + 1) % prev_count;
                            let da = y.distance(&pts[j], &levels[n - 1][a]);
                            let db = y.distance(&pts[j], &levels[n - 1][b]);
                            match da.partial_cmp(&db).expect("arc distances are not NaN") {
                                Ordering::Less => a,
                                Ordering::Greater => b,
                                Ordering::Equal => {
                                    // equidistant: lexicographically smaller point
                                    if levels[n - 1][a].lex_cmp(&levels[n - 1][b]) == Ordering::Less
                                    {
                                        a
                                    } else {
                                        b
                                    }
                                }
                            }
                        }
                    })
                    .collect();
                levels.push(pts);
                parents.push(par);
            }
        }
        SpaceKind::SinglePoint => {
            for _ in 0..=n_max {
                levels.push(vec![Point(vec![0.0])]);
            }
            for _ in 1..=n_max {
                parents.push(vec![0]);
            }
        }
        _ => unreachable!("length-space check covers the remaining kinds"),
    }

    // Connector paths: parent point -> child point on [0, 2^{-(n-1)}].
    for n in 1..=n_max {
        let mut level_paths = Vec::with_capacity(levels[n].len());
        for j in 0..levels[n].len() {
            let p = &levels[n - 1][parents[n][j]];
            level_paths.push(connect(p, &levels[n][j], n, y)?);
        }
        paths.push(level_paths);
    }

    // Covering validation on the deterministic grid.
    let sample = y.sample_stream(validation_depth)?;
    let mut validated_radius = Vec::with_capacity(n_max + 1);
    for (n, level) in levels.iter().enumerate() {
        let budget = 0.5f64.powi(n as i32);
        let mut worst = 0.0f64;
        for p in &sample {
            let d = match y.kind() {
                SpaceKind::EuclideanCube { dim } => {
                    if n == 0 {
                        y.distance(p, &level[0])
                    } else {
                        let g = cube_grid(*dim, n);
                        let mut sq = 0.0;
                        for &x in p.coords() {
                            let i = ((x * g as f64).floor() as u64).min(g - 1);
                            let c = (i as f64 + 0.5) / g as f64;
                            sq += (x - c) * (x - c);
                        }
                        sq.sqrt()
                    }
                }
                SpaceKind::Circle { .. } => level
                    .iter()
                    .map(|q| y.distance(p, q))
                    .fold(f64::INFINITY, f64::min),
                SpaceKind::SinglePoint => 0.0,
                _ => unreachable!(),
            };
            worst = worst.max(d);
        }
        if worst > budget {
            return Err(Error::ResolutionExceeded(format!(
                "level-{n} net misses the covering budget: {worst} > {budget}"
            )));
        }
        validated_radius.push(worst);
    }

    Ok(NetHierarchy {
        space: y.clone(),
        levels,
        parents,
        paths,
        validated_radius,
        validation_depth,
    })
}
