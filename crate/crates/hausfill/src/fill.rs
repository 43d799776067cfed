//! Bump functions, nested separated ball systems inside a perfect set, and
//! the level maps whose uniform limit fills the target space.
//!
//! The construction follows a fixed recipe. A net hierarchy on the target Y
//! prescribes, per level n, a list of required balls in the domain: one ball
//! per net point, each nested inside the ball of its parent net point, plus
//! constant filler balls so every ball has at least two children. The ball
//! radii ε_n are the largest dyadic values that satisfy separation, nesting,
//! and the smallness bound k_n·h(2ε_n) < 1/n; centers snap onto cells of the
//! perfect set P and are chosen greedily from the left. Level map n moves
//! points inside ball i along the net's connector path, driven by a bump
//! function, and agrees with level map n−1 everywhere else.

use crate::cover::SetSample;
use crate::error::{Error, Result};
use crate::gauge::HausdorffFunction;
use crate::space::{
    build_net_hierarchy, connect, ConnectorPath, NetHierarchy, Point, SpaceDescriptor, SpaceKind,
};

/// Ball radii are halved at most down to 2^-40, which keeps every center
/// and radius exactly representable and their comparisons exact.
pub const MAX_RADIUS_EXPONENT: i32 = 40;

/// Lipschitz bump supported strictly inside `B(x0, eps)`, identically 1 on
/// `B(x0, delta)`.
#[derive(Clone, Debug)]
pub struct BumpFunction {
    x0: Point,
    delta: f64,
    eps: f64,
    space: SpaceDescriptor,
}

impl BumpFunction {
    pub fn center(&self) -> &Point {
        &self.x0
    }

    pub fn inner_radius(&self) -> f64 {
        self.delta
    }

    pub fn outer_radius(&self) -> f64 {
        self.eps
    }

    /// `clamp((m − d(x, x0)) / (m − delta))` with `m = (delta + eps)/2`.
    pub fn eval(&self, x: &Point) -> f64 {
        let d = self.space.distance(&self.x0, x);
        bump_profile(d, self.delta, self.eps)
    }

    /// Upper bound on the Lipschitz constant: `2/(eps − delta)`.
    pub fn lipschitz_bound(&self) -> f64 {
        2.0 / (self.eps - self.delta)
    }
}

fn bump_profile(d: f64, delta: f64, eps: f64) -> f64 {
    let m = (delta + eps) / 2.0;
    ((m - d) / (m - delta)).clamp(0.0, 1.0)
}

/// Builds the bump function for the ball `B(x0, eps)` with plateau radius
/// `delta`.
pub fn bump(x0: &Point, delta: f64, eps: f64, x_space: &SpaceDescriptor) -> Result<BumpFunction> {
    if !(delta > 0.0) || !(delta < eps) || !eps.is_finite() {
        return Err(Error::InvalidRadii(format!(
            "need 0 < delta < eps, got delta={delta}, eps={eps}"
        )));
    }
    if !x_space.contains(x0) {
        return Err(Error::InvalidInput(format!(
            "bump center {:?} lies outside {}",
            x0.coords(),
            x_space.label()
        )));
    }
    Ok(BumpFunction {
        x0: x0.clone(),
        delta,
        eps,
        space: x_space.clone(),
    })
}

/// Candidate ball centers inside the perfect set P. Cell data admits one
/// candidate per cell at the working resolution (the cell midpoint); point
/// data admits the points themselves.
enum PModel {
    Cells {
        base: u64,
        native_depth: u32,
        native: Vec<u64>,
    },
    Points {
        xs: Vec<f64>,
    },
}

impl PModel {
    fn build(p: &SetSample) -> Result<PModel> {
        if !matches!(p.ambient().kind(), SpaceKind::EuclideanCube { dim: 1 }) {
            return Err(Error::ConfigInvalid(format!(
                "the perfect set must live in the unit interval, got {}",
                p.ambient().label()
            )));
        }
        if p.is_empty() {
            return Err(Error::InvalidInput(
                "the perfect set sample is empty".into(),
            ));
        }
        if let Some((model, depth, addrs)) = p.cells() {
            Ok(PModel::Cells {
                base: model.base(),
                native_depth: depth,
                native: addrs.iter().map(|a| a[0]).collect(),
            })
        } else {
            let mut xs: Vec<f64> = p.points().unwrap().iter().map(|q| q.coords()[0]).collect();
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Ok(PModel::Points { xs })
        }
    }

    /// Smallest candidate center `>= x` at the resolution matching `eps`.
    fn next_center(&self, eps: f64, x: f64) -> Option<f64> {
        match self {
            PModel::Points { xs } => {
                let i = xs.partition_point(|&v| v < x);
                xs.get(i).copied()
            }
            PModel::Cells {
                base,
                native_depth,
                native,
            } => {
                let mut j = 0u32;
                let mut w = 1.0f64;
                while w > eps {
                    w /= *base as f64;
                    j += 1;
                    if j > MAX_RADIUS_EXPONENT as u32 {
                        return None;
                    }
                }
                let j = j.max(*native_depth);
                let w = (*base as f64).powi(-(j as i32));
                let t = x / w - 0.5;
                let mut idx = if t <= 0.0 { 0 } else { t.ceil() as u64 };
                while (idx as f64 + 0.5) * w < x {
                    idx += 1;
                }
                while idx > 0 && (idx as f64 - 0.5) * w >= x {
                    idx -= 1;
                }
                let shift = base.pow(j - native_depth);
                let prefix = idx / shift;
                let pos = native.partition_point(|&a| a < prefix);
                match native.get(pos) {
                    None => None,
                    Some(&a) if a == prefix => Some((idx as f64 + 0.5) * w),
                    Some(&a) => Some((a * shift) as f64 * w + 0.5 * w),
                }
            }
        }
    }
}

/// One ball of the system: a center in P, the net point it serves, and the
/// connector path its level map follows.
#[derive(Clone, Debug)]
pub struct Ball {
    center: f64,
    target: Point,
    path: ConnectorPath,
    parent: Option<usize>,
    net_node: Option<usize>,
}

impl Ball {
    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn target(&self) -> &Point {
        &self.target
    }

    pub fn path(&self) -> &ConnectorPath {
        &self.path
    }

    /// Index of the parent ball on the previous level, if any.
    pub fn parent(&self) -> Option<usize> {
        self.parent
    }

    /// Index of the net point this ball serves; `None` for filler balls.
    pub fn net_node(&self) -> Option<usize> {
        self.net_node
    }
}

#[derive(Clone, Debug)]
pub struct BallLevel {
    eps: f64,
    delta: f64,
    balls: Vec<Ball>,
}

impl BallLevel {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }
}

/// The nested separated ball system of the construction.
#[derive(Clone, Debug)]
pub struct BallSystem {
    levels: Vec<BallLevel>,
    gauge: HausdorffFunction,
}

impl BallSystem {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Level `n` (1-based).
    pub fn level(&self, n: usize) -> &BallLevel {
        &self.levels[n - 1]
    }

    pub fn gauge(&self) -> &HausdorffFunction {
        &self.gauge
    }

    /// The smallness value `k_n·h(2ε_n)` at level `n`.
    pub fn smallness(&self, n: usize) -> f64 {
        let lvl = self.level(n);
        lvl.balls.len() as f64 * self.gauge.eval(2.0 * lvl.eps)
    }

    /// Re-checks all four ball-system invariants: separation, nesting,
    /// fertility, and smallness.
    pub fn verify(&self) -> Result<()> {
        for (li, lvl) in self.levels.iter().enumerate() {
            let n = li + 1;
            if !(self.smallness(n) * (n as f64) < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "smallness fails at level {n}: {} >= 1/{n}",
                    self.smallness(n)
                )));
            }
            for (a, ball) in lvl.balls.iter().enumerate() {
                for other in &lvl.balls[a + 1..] {
                    if !((ball.center - other.center).abs() >= 3.0 * lvl.eps) {
                        return Err(Error::InvalidInput(format!(
                            "separation fails at level {n}: centers {} and {}",
                            ball.center, other.center
                        )));
                    }
                }
            }
            if li == 0 {
                for ball in &lvl.balls {
                    if !(ball.center >= lvl.eps && ball.center <= 1.0 - lvl.eps) {
                        return Err(Error::InvalidInput(format!(
                            "level-1 ball at {} leaves the domain",
                            ball.center
                        )));
                    }
                }
            } else {
                let prev = &self.levels[li - 1];
                let mut child_count = vec![0usize; prev.balls.len()];
                for ball in &lvl.balls {
                    let pi = ball.parent.ok_or_else(|| {
                        Error::InvalidInput(format!("level-{n} ball lacks a parent"))
                    })?;
                    child_count[pi] += 1;
                    let pc = prev.balls[pi].center;
                    let room = prev.delta - lvl.eps;
                    if !(ball.center >= pc - room && ball.center <= pc + room) {
                        return Err(Error::InvalidInput(format!(
                            "nesting fails at level {n}: center {} under parent {pc}",
                            ball.center
                        )));
                    }
                    if !((ball.center - pc).abs() >= lvl.eps) {
                        return Err(Error::InvalidInput(format!(
                            "parent center {pc} falls inside the level-{n} ball at {}",
                            ball.center
                        )));
                    }
                }
                if let Some(pi) = child_count.iter().position(|&c| c < 2) {
                    return Err(Error::InvalidInput(format!(
                        "fertility fails: level-{} ball {pi} has {} children",
                        n - 1,
                        child_count[pi]
                    )));
                }
            }
        }
        Ok(())
    }
}

struct ChildSpec {
    parent: Option<usize>,
    net_node: Option<usize>,
    target: Point,
    path: ConnectorPath,
}

/// Chooses the nested separated ball system for the net hierarchy: one ball
/// per net point plus constant filler balls for fertility, with the largest
/// dyadic ε_n meeting separation, nesting, and smallness.
pub fn select_balls(
    p: &SetSample,
    net: &NetHierarchy,
    h: &HausdorffFunction,
    n_levels: usize,
) -> Result<BallSystem> {
    if n_levels == 0 {
        return Err(Error::InvalidInput(
            "the ball system needs at least one level".into(),
        ));
    }
    if n_levels > net.n_max() {
        return Err(Error::DepthExceeded(format!(
            "requested {n_levels} levels but the net stops at {}",
            net.n_max()
        )));
    }
    let pm = PModel::build(p)?;
    let y = net.space().clone();
    let mut net_children: Vec<Vec<Vec<usize>>> = Vec::new();
    for n in 2..=n_levels {
        let mut lists = vec![Vec::new(); net.k(n - 1)];
        for j in 0..net.k(n) {
            lists[net.parent_of(n, j)].push(j);
        }
        net_children.push(lists);
    }
    let mut levels: Vec<BallLevel> = Vec::new();
    let mut prev_exp = 0i32;
    for n in 1..=n_levels {
        let specs: Vec<ChildSpec> = if n == 1 {
            (0..net.k(1))
                .map(|j| ChildSpec {
                    parent: None,
                    net_node: Some(j),
                    target: net.level(1)[j].clone(),
                    path: net.path(1, j).clone(),
                })
                .collect()
        } else {
            let prev = &levels[n - 2];
            let mut specs = Vec::new();
            for (bi, ball) in prev.balls.iter().enumerate() {
                let mut kids = Vec::new();
                if let Some(node) = ball.net_node {
                    for &j in &net_children[n - 2][node] {
                        kids.push(ChildSpec {
                            parent: Some(bi),
                            net_node: Some(j),
                            target: net.level(n)[j].clone(),
                            path: net.path(n, j).clone(),
                        });
                    }
                }
                while kids.len() < 2 {
                    kids.push(ChildSpec {
                        parent: Some(bi),
                        net_node: None,
                        target: ball.target.clone(),
                        path: connect(&ball.target, &ball.target, n, &y)?,
                    });
                }
                specs.extend(kids);
            }
            specs
        };
        let k_n = specs.len();
        let mut exp = if n == 1 { 1 } else { prev_exp + 2 };
        let level = loop {
            if exp > MAX_RADIUS_EXPONENT {
                return Err(Error::CapacityExceeded {
                    level: n as u32,
                    msg: format!(
                        "no dyadic radius down to 2^-{MAX_RADIUS_EXPONENT} hosts \
                         {k_n} separated balls inside the perfect set"
                    ),
                });
            }
            let eps = 0.5f64.powi(exp);
            if !((n as f64) * (k_n as f64) * h.eval(2.0 * eps) < 1.0) {
                exp += 1;
                continue;
            }
            if let Some(centers) = place_level(&specs, &pm, eps, levels.last()) {
                let balls = specs
                    .iter()
                    .zip(&centers)
                    .map(|(s, &center)| Ball {
                        center,
                        target: s.target.clone(),
                        path: s.path.clone(),
                        parent: s.parent,
                        net_node: s.net_node,
                    })
                    .collect();
                break BallLevel {
                    eps,
                    delta: eps / 2.0,
                    balls,
                };
            }
            exp += 1;
        };
        prev_exp = exp;
        levels.push(level);
    }
    Ok(BallSystem {
        levels,
        gauge: h.clone(),
    })
}

/// Greedy left-to-right placement of one level at radius `eps`; `None` when
/// some parent cannot host its children.
fn place_level(
    specs: &[ChildSpec],
    pm: &PModel,
    eps: f64,
    prev: Option<&BallLevel>,
) -> Option<Vec<f64>> {
    let mut centers = Vec::with_capacity(specs.len());
    let mut i = 0;
    while i < specs.len() {
        let parent = specs[i].parent;
        let mut j = i;
        while j < specs.len() && specs[j].parent == parent {
            j += 1;
        }
        let need = j - i;
        let (lo, hi, excl) = match parent {
            None => (eps, 1.0 - eps, None),
            Some(pi) => {
                let pl = prev.expect("specs with parents follow a previous level");
                let pc = pl.balls[pi].center;
                let room = pl.delta - eps;
                if room < eps {
                    return None;
                }
                (pc - room, pc + room, Some((pc, eps)))
            }
        };
        if lo > hi {
            return None;
        }
        let mut cursor = lo;
        let mut placed = 0;
        while placed < need {
            let c = pm.next_center(eps, cursor)?;
            if c > hi {
                return None;
            }
            if let Some((pc, r)) = excl {
                if (c - pc).abs() < r {
                    cursor = pc + r;
                    continue;
                }
            }
            centers.push(c);
            placed += 1;
            cursor = c + 3.0 * eps;
        }
        i = j;
    }
    Some(centers)
}

/// The tower of level maps `f_0, …, f_N` with everything needed to evaluate
/// them and certify the construction.
#[derive(Clone, Debug)]
pub struct FillingMap {
    x_space: SpaceDescriptor,
    y_space: SpaceDescriptor,
    p: SetSample,
    net: NetHierarchy,
    balls: BallSystem,
    depth: usize,
    base_value: Point,
    /// `children[li][b]` lists level-`li+2` ball indices under ball `b` of
    /// level `li+1`.
    children: Vec<Vec<Vec<usize>>>,
    lipschitz: Vec<f64>,
}

/// Builds the filling tower: net hierarchy on Y, ball system in P, level
/// maps following the recursion `f_{n+1}(x) = γ_i^{n+1}(2^{−n}·η_i^{n+1}(x))`
/// inside ball i, and `f_n(x)` elsewhere.
pub fn build_filling(
    x: &SpaceDescriptor,
    y: &SpaceDescriptor,
    p: &SetSample,
    h: &HausdorffFunction,
    n_levels: usize,
) -> Result<FillingMap> {
    if !matches!(x.kind(), SpaceKind::EuclideanCube { dim: 1 }) {
        return Err(Error::ConfigInvalid(format!(
            "the domain must be the unit interval, got {}",
            x.label()
        )));
    }
    if n_levels == 0 {
        return Err(Error::InvalidInput(
            "the filling needs at least one level".into(),
        ));
    }
    let net = build_net_hierarchy(y, n_levels)?;
    let balls = select_balls(p, &net, h, n_levels)?;
    let mut children: Vec<Vec<Vec<usize>>> = Vec::new();
    for li in 0..n_levels - 1 {
        let mut lists = vec![Vec::new(); balls.levels[li].balls.len()];
        for (ci, ball) in balls.levels[li + 1].balls.iter().enumerate() {
            lists[ball.parent.expect("deeper levels carry parents")].push(ci);
        }
        children.push(lists);
    }
    let mut lipschitz = Vec::with_capacity(n_levels);
    let mut running: f64 = 0.0;
    for (li, lvl) in balls.levels.iter().enumerate() {
        let move_constant = 0.5f64.powi(li as i32) * 4.0 / lvl.eps;
        running = running.max(move_constant);
        lipschitz.push(running);
    }
    let base_value = net.level(0)[0].clone();
    Ok(FillingMap {
        x_space: x.clone(),
        y_space: y.clone(),
        p: p.clone(),
        net,
        balls,
        depth: n_levels,
        base_value,
        children,
        lipschitz,
    })
}

impl FillingMap {
    pub fn x_space(&self) -> &SpaceDescriptor {
        &self.x_space
    }

    pub fn y_space(&self) -> &SpaceDescriptor {
        &self.y_space
    }

    pub fn perfect_set(&self) -> &SetSample {
        &self.p
    }

    pub fn net(&self) -> &NetHierarchy {
        &self.net
    }

    pub fn balls(&self) -> &BallSystem {
        &self.balls
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn base_value(&self) -> &Point {
        &self.base_value
    }

    /// Reported per-level Lipschitz bounds: the running maximum of the
    /// per-level move constants `2^{−(n−1)}·(bump Lipschitz bound)`.
    pub fn lipschitz_bounds(&self) -> &[f64] {
        &self.lipschitz
    }

    /// Evaluates `f_level(x)` together with the uniform tail bound
    /// `Σ_{m ≥ level} 2^{−m} = 2^{−level+1}` valid for the limit map.
    pub fn eval(&self, x: &Point, level: usize) -> Result<(Point, f64)> {
        if level > self.depth {
            return Err(Error::DepthExceeded(format!(
                "level {level} exceeds the built depth {}",
                self.depth
            )));
        }
        if x.dim() != 1 || !self.x_space.contains(x) {
            return Err(Error::InvalidInput(format!(
                "{:?} is not a point of {}",
                x.coords(),
                self.x_space.label()
            )));
        }
        let xc = x.coords()[0];
        let mut value = self.base_value.clone();
        let mut ball_idx: Option<usize> = None;
        for m in 1..=level {
            let lvl = &self.balls.levels[m - 1];
            let hit = |ci: usize| (xc - lvl.balls[ci].center).abs() < lvl.eps;
            let candidate: Option<usize> = match ball_idx {
                None => {
                    let i = lvl.balls.partition_point(|b| b.center < xc);
                    [i.checked_sub(1), Some(i)]
                        .into_iter()
                        .flatten()
                        .filter(|&c| c < lvl.balls.len())
                        .find(|&c| hit(c))
                }
                Some(b) => {
                    let kids = &self.children[m - 2][b];
                    let i = kids.partition_point(|&ci| lvl.balls[ci].center < xc);
                    [i.checked_sub(1), Some(i)]
                        .into_iter()
                        .flatten()
                        .filter_map(|pos| kids.get(pos).copied())
                        .find(|&ci| hit(ci))
                }
            };
            let Some(bi) = candidate else { break };
            let ball = &lvl.balls[bi];
            let d = (xc - ball.center).abs();
            let eta = bump_profile(d, lvl.delta, lvl.eps);
            let s = 0.5f64.powi(m as i32 - 1) * eta;
            value = ball.path.eval(s)?;
            if d <= lvl.delta {
                ball_idx = Some(bi);
            } else {
                break;
            }
        }
        Ok((value, 0.5f64.powi(level as i32 - 1)))
    }

    /// Largest distance from a deterministic target-space sample to the
    /// image of the level-`level` ball centers under `f_level`.
    pub fn surjectivity_gap(&self, level: usize, sample_size: usize) -> Result<f64> {
        if level == 0 || level > self.depth {
            return Err(Error::DepthExceeded(format!(
                "gap level {level} outside 1..={}",
                self.depth
            )));
        }
        if sample_size == 0 {
            return Err(Error::InvalidInput(
                "gap sample size must be positive".into(),
            ));
        }
        let mut sample = self.y_space.sample_stream(0)?;
        for d in 1..=26u32 {
            if sample.len() >= sample_size {
                break;
            }
            match self.y_space.sample_stream(d) {
                Ok(s) => sample = s,
                Err(_) => break,
            }
        }
        let mut images = Vec::with_capacity(self.balls.levels[level - 1].balls.len());
        for ball in &self.balls.levels[level - 1].balls {
            let (v, _) = self.eval(&Point(vec![ball.center]), level)?;
            images.push(v);
        }
        let mut gap = 0.0f64;
        for y in &sample {
            let nearest = images
                .iter()
                .map(|im| self.y_space.distance(y, im))
                .fold(f64::INFINITY, f64::min);
            gap = gap.max(nearest);
        }
        Ok(gap)
    }

    /// The perfect null set P′: per-level closed-ball unions, the certified
    /// bound sequence, and explicit non-emptiness and infinitude witnesses.
    pub fn null_set_report(&self) -> PerfectSetDescriptor {
        let last = self.depth - 1;
        let descend = |mut li: usize, mut bi: usize| -> f64 {
            while li < last {
                bi = self.children[li][bi][0];
                li += 1;
            }
            self.balls.levels[li].balls[bi].center
        };
        for li in 0..last {
            let lvl = &self.balls.levels[li];
            for (bi, ball) in lvl.balls.iter().enumerate() {
                let kids = &self.children[li][bi];
                assert!(kids.len() >= 2, "fertility underflow at level {}", li + 1);
                let leaf0 = descend(li + 1, kids[0]);
                let leaf1 = descend(li + 1, kids[1]);
                let eps_last = self.balls.levels[last].eps;
                assert!(
                    (leaf0 - leaf1).abs() >= eps_last,
                    "witness chains collide under ball {bi} of level {}",
                    li + 1
                );
                for leaf in [leaf0, leaf1] {
                    assert!(
                        (leaf - ball.center).abs() <= lvl.delta,
                        "witness chain escapes ball {bi} of level {}",
                        li + 1
                    );
                }
            }
        }
        let levels: Vec<Vec<(f64, f64)>> = self
            .balls
            .levels
            .iter()
            .map(|lvl| lvl.balls.iter().map(|b| (b.center, lvl.eps)).collect())
            .collect();
        let bound_sequence: Vec<(usize, f64)> = (1..=self.depth)
            .map(|n| (n, self.balls.smallness(n)))
            .collect();
        for &(n, b) in &bound_sequence {
            assert!(b < 1.0 / n as f64, "smallness bound fails at level {n}");
        }
        let chain_witness = descend(0, 0);
        let witness_pair = if last == 0 {
            let balls = &self.balls.levels[0].balls;
            (balls[0].center, balls[balls.len() - 1].center)
        } else {
            let kids = &self.children[0][0];
            (descend(1, kids[0]), descend(1, kids[1]))
        };
        PerfectSetDescriptor {
            source: self.p.clone(),
            levels,
            bound_sequence,
            chain_witness,
            witness_pair,
        }
    }
}

/// The perfect null set P′ as reportable data.
#[derive(Clone, Debug)]
pub struct PerfectSetDescriptor {
    pub source: SetSample,
    /// Per level: the closed balls `(center, radius)` whose union hosts P′.
    pub levels: Vec<Vec<(f64, f64)>>,
    /// `(n, k_n·h(2ε_n))` per level; each entry is strictly below `1/n`.
    pub bound_sequence: Vec<(usize, f64)>,
    /// Limit representative of one nested center chain.
    pub chain_witness: f64,
    /// Two disjoint nested chains under the first ball.
    pub witness_pair: (f64, f64),
}
