//! Command-line front end for the hausfill library.
//!
//! One process, batch semantics. Parameters come from an optional flat
//! key=value config file plus command-line flags; flags win. Output is a
//! key=value report or a CSV, rendered deterministically, and both embed
//! the resolved configuration. Exit status is nonzero exactly when a
//! module returns an error; the error code is printed on stderr.

use std::collections::BTreeMap;
use std::fmt::{Display, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use hausfill::blowup::{blowup_demo, blowup_demo_point};
use hausfill::cover::{box_dimension, measure_upper_profile, CellModel, SetSample};
use hausfill::fill::build_filling;
use hausfill::gauge::{
    finite_order_check, precedes, HausdorffFunction, OrderVerdict, PrecedesVerdict, SupRatio,
};
use hausfill::space::{build_net_hierarchy, Point, SpaceDescriptor};
use hausfill::{Error, Result};

#[derive(Parser)]
#[command(
    name = "hausfill",
    version,
    about = "Gauge-measured space-filling constructions"
)]
struct Cli {
    /// Flat key=value config file; command-line flags override its keys.
    #[arg(long, value_name = "FILE", global = true)]
    config: Option<PathBuf>,
    /// Write the rendered output to this file instead of stdout.
    #[arg(long, value_name = "FILE", global = true)]
    out: Option<PathBuf>,
    /// Output format: report (default) or csv.
    #[arg(long, value_name = "FMT", global = true)]
    format: Option<String>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gauge diagnostics: finite-order and ordering checks.
    Hfun {
        #[command(subcommand)]
        action: HfunCmd,
    },
    /// Premeasure cover sums over a shrinking delta schedule.
    Measure(MeasureArgs),
    /// Box-counting dimension fit over a grid depth range.
    Dimension(DimensionArgs),
    /// Net hierarchy of a length-compact target space.
    Net(NetArgs),
    /// Filling-map construction certificate and sample trace.
    Fill(FillArgs),
    /// Cantor-column blow-up report for a Hilbert curve.
    Blowup(BlowupArgs),
}

#[derive(Subcommand)]
enum HfunCmd {
    /// Sample h(3t)/h(t) on a dyadic grid and classify the trend.
    Check(HfunCheckArgs),
    /// Check gauge ≺ gauge2, i.e. gauge2(t)/gauge(t) -> 0.
    Precedes(HfunPrecedesArgs),
}

#[derive(Args)]
struct HfunCheckArgs {
    /// Gauge spec: power:S, dimfun:T, or exp-inv.
    #[arg(long)]
    gauge: Option<String>,
    /// Dyadic grid depth for the ratio samples.
    #[arg(long)]
    levels: Option<String>,
    /// Stop the grid once t falls below this value.
    #[arg(long)]
    t_min: Option<String>,
}

#[derive(Args)]
struct HfunPrecedesArgs {
    /// Coarse gauge spec (the candidate left side of ≺).
    #[arg(long)]
    gauge: Option<String>,
    /// Fine gauge spec (the candidate right side of ≺).
    #[arg(long)]
    gauge2: Option<String>,
    /// Dyadic grid depth for the ratio samples.
    #[arg(long)]
    levels: Option<String>,
}

#[derive(Args)]
struct MeasureArgs {
    /// Sample set spec: cantor:D, interval:D, or square:D.
    #[arg(long)]
    set: Option<String>,
    /// Gauge spec: power:S, dimfun:T, or exp-inv.
    #[arg(long)]
    gauge: Option<String>,
    /// Delta schedule: B^-LO..HI for B^-LO, ..., B^-HI, or a comma list.
    #[arg(long)]
    deltas: Option<String>,
}

#[derive(Args)]
struct DimensionArgs {
    /// Sample set spec: cantor:D, interval:D, or square:D.
    #[arg(long)]
    set: Option<String>,
    /// Grid depth range LO..HI (inclusive) for the log-log fit.
    #[arg(long)]
    depth: Option<String>,
}

#[derive(Args)]
struct NetArgs {
    /// Target space spec: interval, square, circle:C, cube:D, point.
    #[arg(long)]
    space: Option<String>,
    /// Number of net levels to build.
    #[arg(long)]
    levels: Option<String>,
}

#[derive(Args)]
struct FillArgs {
    /// Target space Y spec: interval, square, circle:C, cube:D, point.
    #[arg(long)]
    space: Option<String>,
    /// Gauge spec pricing the ball system: power:S, dimfun:T, or exp-inv.
    #[arg(long)]
    gauge: Option<String>,
    /// Number of construction levels N.
    #[arg(long)]
    levels: Option<String>,
    /// Perfect-set sample P in [0,1]; defaults to interval:0.
    #[arg(long)]
    set: Option<String>,
    /// Sample budget for the surjectivity gap per level.
    #[arg(long)]
    samples: Option<String>,
    /// Parameter grid points for the trace and the Cauchy sup.
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct BlowupArgs {
    /// Target dimension s in (0,1), or "point" for the degenerate target.
    #[arg(long)]
    s_dim: Option<String>,
    /// Number of Cantor stages to report.
    #[arg(long)]
    depth: Option<String>,
}

/// Parameter bag merged from the config file and flag overrides.
///
/// Handlers consume keys as they resolve them; anything left over at the
/// end is an unknown key and rejects the run. Every resolved value, default
/// or not, is recorded for the provenance block of the output.
struct Ctx {
    cmd: &'static str,
    map: BTreeMap<String, String>,
    resolved: Vec<(String, String)>,
}

fn norm_key(raw: &str) -> String {
    raw.trim().replace('-', "_")
}

impl Ctx {
    fn new(cmd: &'static str, config: Option<&Path>) -> Result<Self> {
        let mut map = BTreeMap::new();
        if let Some(path) = config {
            let text = fs::read_to_string(path).map_err(|e| {
                Error::ConfigInvalid(format!("cannot read config {}: {e}", path.display()))
            })?;
            for (i, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    Error::ConfigInvalid(format!(
                        "config line {}: expected key=value, got {raw:?}",
                        i + 1
                    ))
                })?;
                let key = norm_key(k);
                if key.is_empty() {
                    return Err(Error::ConfigInvalid(format!(
                        "config line {}: empty key",
                        i + 1
                    )));
                }
                if map.insert(key.clone(), v.trim().to_string()).is_some() {
                    return Err(Error::ConfigInvalid(format!(
                        "duplicate config key {key:?}"
                    )));
                }
            }
            if map.is_empty() {
                return Err(Error::ConfigInvalid(format!(
                    "config {} sets no keys",
                    path.display()
                )));
            }
        }
        let resolved = vec![("command".to_string(), cmd.to_string())];
        Ok(Ctx { cmd, map, resolved })
    }

    fn over(&mut self, key: &str, value: &Option<String>) {
        if let Some(v) = value {
            self.map.insert(key.to_string(), v.clone());
        }
    }

    fn record(&mut self, key: &str, value: impl Display) {
        self.resolved.push((key.to_string(), value.to_string()));
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn parse<T: FromStr>(&self, key: &str, value: &str, what: &str) -> Result<T> {
        value.parse().map_err(|_| {
            Error::ConfigInvalid(format!(
                "{}: key {key:?} expects {what}, got {value:?}",
                self.cmd
            ))
        })
    }

    fn req_str(&mut self, key: &str) -> Result<String> {
        let v = self.take(key).ok_or_else(|| {
            Error::ConfigInvalid(format!("{}: missing required key {key:?}", self.cmd))
        })?;
        self.record(key, &v);
        Ok(v)
    }

    fn str_or(&mut self, key: &str, default: &str) -> String {
        let v = self.take(key).unwrap_or_else(|| default.to_string());
        self.record(key, &v);
        v
    }

    fn usize_or(&mut self, key: &str, default: usize) -> Result<usize> {
        match self.take(key) {
            Some(v) => {
                let n = self.parse(key, &v, "a non-negative integer")?;
                self.record(key, n);
                Ok(n)
            }
            None => {
                self.record(key, default);
                Ok(default)
            }
        }
    }

    fn req_usize(&mut self, key: &str) -> Result<usize> {
        let v = self.take(key).ok_or_else(|| {
            Error::ConfigInvalid(format!("{}: missing required key {key:?}", self.cmd))
        })?;
        let n = self.parse(key, &v, "a non-negative integer")?;
        self.record(key, n);
        Ok(n)
    }

    fn req_u32(&mut self, key: &str) -> Result<u32> {
        Ok(self.req_usize(key)? as u32)
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.take(key) {
            Some(v) => {
                let x = self.parse(key, &v, "a number")?;
                self.record(key, x);
                Ok(x)
            }
            None => {
                self.record(key, default);
                Ok(default)
            }
        }
    }

    fn finish(&self) -> Result<()> {
        if let Some((k, _)) = self.map.iter().next() {
            return Err(Error::ConfigInvalid(format!(
                "{}: unknown key {k:?}",
                self.cmd
            )));
        }
        Ok(())
    }
}

/// Rendered payload of one command, before format selection.
struct Output {
    report: Vec<(String, String)>,
    csv_header: &'static str,
    csv_rows: Vec<String>,
}

fn parse_set(ctx: &Ctx, spec: &str) -> Result<SetSample> {
    let parts: Vec<&str> = spec.split(':').collect();
    let depth = |s: &str| -> Result<u32> { ctx.parse("set", s, "a grid depth") };
    match parts.as_slice() {
        ["cantor", d] => SetSample::cantor_middle_thirds(depth(d)?),
        ["interval", d] => SetSample::unit_interval(depth(d)?),
        ["square", d] => SetSample::cube_full(2, CellModel::Dyadic, depth(d)?),
        _ => Err(Error::ConfigInvalid(format!(
            "{}: unknown set {spec:?} (expected cantor:D, interval:D, or square:D)",
            ctx.cmd
        ))),
    }
}

fn parse_range(ctx: &Ctx, key: &str, spec: &str) -> Result<(u32, u32)> {
    let err = || {
        Error::ConfigInvalid(format!(
            "{}: key {key:?} expects an inclusive range LO..HI, got {spec:?}",
            ctx.cmd
        ))
    };
    let (lo, hi) = spec.split_once("..").ok_or_else(err)?;
    let lo: u32 = lo.trim().parse().map_err(|_| err())?;
    let hi: u32 = hi.trim().parse().map_err(|_| err())?;
    if lo > hi {
        return Err(err());
    }
    Ok((lo, hi))
}

fn parse_deltas(ctx: &Ctx, spec: &str) -> Result<Vec<f64>> {
    if let Some((base, range)) = spec.split_once("^-") {
        let b: u32 = ctx.parse("deltas", base.trim(), "an integer base >= 2")?;
        if b < 2 {
            return Err(Error::ConfigInvalid(format!(
                "{}: delta base must be >= 2, got {b}",
                ctx.cmd
            )));
        }
        let (lo, hi) = parse_range(ctx, "deltas", range)?;
        if lo == 0 {
            return Err(Error::ConfigInvalid(format!(
                "{}: delta exponents start at 1, got {spec:?}",
                ctx.cmd
            )));
        }
        return Ok((lo..=hi).map(|j| (b as f64).powi(-(j as i32))).collect());
    }
    spec.split(',')
        .map(|s| {
            let d: f64 = ctx.parse("deltas", s.trim(), "a number")?;
            if !d.is_finite() || d <= 0.0 {
                return Err(Error::ConfigInvalid(format!(
                    "{}: deltas must be positive and finite, got {s:?}",
                    ctx.cmd
                )));
            }
            Ok(d)
        })
        .collect()
}

fn order_verdict(v: &OrderVerdict) -> &'static str {
    match v {
        OrderVerdict::FiniteOrder => "finite-order",
        OrderVerdict::NotFiniteOrder => "not-finite-order",
        OrderVerdict::Inconclusive => "inconclusive",
    }
}

fn precedes_verdict(v: &PrecedesVerdict) -> &'static str {
    match v {
        PrecedesVerdict::Precedes => "precedes",
        PrecedesVerdict::NotPrecedes => "not-precedes",
        PrecedesVerdict::Inconclusive => "inconclusive",
    }
}

fn hfun_check(ctx: &mut Ctx) -> Result<Output> {
    let gauge = ctx.req_str("gauge")?;
    let levels = ctx.usize_or("levels", 24)?;
    let t_min = ctx.f64_or("t_min", 1e-6)?;
    let h = HausdorffFunction::from_spec(&gauge)?;
    let rep = finite_order_check(&h, t_min, levels)?;
    let sup = match rep.sup_ratio {
        SupRatio::Finite(v) => v.to_string(),
        SupRatio::UnboundedTrend => "unbounded-trend".to_string(),
    };
    let verdict = order_verdict(&rep.verdict);
    let mut report = vec![
        ("gauge".to_string(), rep.gauge.clone()),
        ("sup_ratio".to_string(), sup.clone()),
        ("verdict".to_string(), verdict.to_string()),
    ];
    let mut rows = Vec::with_capacity(rep.ratio_samples.len());
    for (i, (t, ratio)) in rep.ratio_samples.iter().enumerate() {
        report.push((format!("sample.{}.t", i + 1), t.to_string()));
        report.push((format!("sample.{}.ratio", i + 1), ratio.to_string()));
        rows.push(format!("{t},{ratio},{sup},{verdict}"));
    }
    Ok(Output {
        report,
        csv_header: "t,ratio,sup_ratio,verdict",
        csv_rows: rows,
    })
}

fn hfun_precedes(ctx: &mut Ctx) -> Result<Output> {
    let gauge = ctx.req_str("gauge")?;
    let gauge2 = ctx.req_str("gauge2")?;
    let levels = ctx.usize_or("levels", 40)?;
    let g = HausdorffFunction::from_spec(&gauge)?;
    let h = HausdorffFunction::from_spec(&gauge2)?;
    let rep = precedes(&g, &h, levels)?;
    let verdict = precedes_verdict(&rep.verdict);
    let mut report = vec![
        ("coarse".to_string(), rep.coarse.clone()),
        ("fine".to_string(), rep.fine.clone()),
        ("verdict".to_string(), verdict.to_string()),
    ];
    let mut rows = Vec::with_capacity(rep.ratio_samples.len());
    for (i, (t, ratio)) in rep.ratio_samples.iter().enumerate() {
        report.push((format!("sample.{}.t", i + 1), t.to_string()));
        report.push((format!("sample.{}.ratio", i + 1), ratio.to_string()));
        rows.push(format!("{t},{ratio},{verdict}"));
    }
    Ok(Output {
        report,
        csv_header: "t,ratio,verdict",
        csv_rows: rows,
    })
}

fn measure(ctx: &mut Ctx) -> Result<Output> {
    let set = ctx.req_str("set")?;
    let gauge = ctx.req_str("gauge")?;
    let deltas_spec = ctx.req_str("deltas")?;
    let e = parse_set(ctx, &set)?;
    let h = HausdorffFunction::from_spec(&gauge)?;
    let deltas = parse_deltas(ctx, &deltas_spec)?;
    let profile = measure_upper_profile(&e, &h, &deltas)?;
    let mut report = Vec::new();
    let mut rows = Vec::with_capacity(profile.len());
    for (i, est) in profile.iter().enumerate() {
        let (delta, cells, sum) = (est.delta, est.cell_count(), est.sum);
        report.push((format!("scale.{}.delta", i + 1), delta.to_string()));
        report.push((format!("scale.{}.cell_count", i + 1), cells.to_string()));
        report.push((format!("scale.{}.sum", i + 1), sum.to_string()));
        rows.push(format!("{delta},{cells},{sum}"));
    }
    Ok(Output {
        report,
        csv_header: "delta,cell_count,sum",
        csv_rows: rows,
    })
}

fn dimension(ctx: &mut Ctx) -> Result<Output> {
    let set = ctx.req_str("set")?;
    let depth = ctx.req_str("depth")?;
    let e = parse_set(ctx, &set)?;
    let (lo, hi) = parse_range(ctx, "depth", &depth)?;
    let est = box_dimension(&e, lo, hi)?;
    let mut report = vec![
        ("slope".to_string(), est.slope.to_string()),
        ("r_squared".to_string(), est.r_squared.to_string()),
    ];
    let mut rows = Vec::with_capacity(est.scales.len());
    for (i, (delta, count)) in est.scales.iter().enumerate() {
        report.push((format!("scale.{}.delta", i + 1), delta.to_string()));
        report.push((format!("scale.{}.count", i + 1), count.to_string()));
        rows.push(format!("{delta},{count},{},{}", est.slope, est.r_squared));
    }
    Ok(Output {
        report,
        csv_header: "scale,count,slope,r_squared",
        csv_rows: rows,
    })
}

fn net(ctx: &mut Ctx) -> Result<Output> {
    let space = ctx.req_str("space")?;
    let levels = ctx.req_usize("levels")?;
    let y = SpaceDescriptor::from_spec(&space)?;
    let net = build_net_hierarchy(&y, levels)?;
    let mut report = vec![
        ("space".to_string(), y.label()),
        (
            "validation_resolution".to_string(),
            net.validation_resolution().to_string(),
        ),
    ];
    let mut rows = Vec::with_capacity(levels);
    for n in 1..=levels {
        let (k, budget, radius) = (net.k(n), net.covering_budget(n), net.validated_radius(n));
        report.push((format!("level.{n}.k"), k.to_string()));
        report.push((format!("level.{n}.covering_budget"), budget.to_string()));
        report.push((format!("level.{n}.validated_radius"), radius.to_string()));
        rows.push(format!("{n},{k},{budget},{radius}"));
    }
    Ok(Output {
        report,
        csv_header: "level,k,covering_budget,validated_radius",
        csv_rows: rows,
    })
}

fn fill(ctx: &mut Ctx) -> Result<Output> {
    let space = ctx.req_str("space")?;
    let gauge = ctx.req_str("gauge")?;
    let levels = ctx.req_usize("levels")?;
    let set = ctx.str_or("set", "interval:0");
    let samples = ctx.usize_or("samples", 512)?;
    let grid = ctx.usize_or("grid", 129)?;
    if grid < 2 {
        return Err(Error::ConfigInvalid(format!(
            "{}: trace grid needs at least 2 points, got {grid}",
            ctx.cmd
        )));
    }
    let x = SpaceDescriptor::euclidean_cube(1)?;
    let y = SpaceDescriptor::from_spec(&space)?;
    let p = parse_set(ctx, &set)?;
    let h = HausdorffFunction::from_spec(&gauge)?;
    let f = build_filling(&x, &y, &p, &h, levels)?;
    let null = f.null_set_report();

    // One trace per level on the shared grid; each entry is (f_n(x), bound).
    let xs: Vec<f64> = (0..grid).map(|i| i as f64 / (grid - 1) as f64).collect();
    let mut traces: Vec<Vec<(Point, f64)>> = Vec::with_capacity(levels);
    for n in 1..=levels {
        let mut row = Vec::with_capacity(xs.len());
        for &t in &xs {
            row.push(f.eval(&Point(vec![t]), n)?);
        }
        traces.push(row);
    }

    let mut report = vec![
        ("x".to_string(), f.x_space().label()),
        ("y".to_string(), y.label()),
        (
            "validation_resolution".to_string(),
            f.net().validation_resolution().to_string(),
        ),
        ("witness.chain".to_string(), null.chain_witness.to_string()),
        (
            "witness.pair.0".to_string(),
            null.witness_pair.0.to_string(),
        ),
        (
            "witness.pair.1".to_string(),
            null.witness_pair.1.to_string(),
        ),
    ];
    for n in 1..=levels {
        let lvl = f.balls().level(n);
        let gap = f.surjectivity_gap(n, samples)?;
        report.push((format!("level.{n}.k"), lvl.balls().len().to_string()));
        report.push((format!("level.{n}.eps"), lvl.eps().to_string()));
        report.push((format!("level.{n}.delta"), lvl.delta().to_string()));
        report.push((
            format!("level.{n}.smallness"),
            f.balls().smallness(n).to_string(),
        ));
        report.push((
            format!("level.{n}.lipschitz"),
            f.lipschitz_bounds()[n - 1].to_string(),
        ));
        if n < levels {
            // The grid alone misses the narrow level-(n+1) bumps, so also
            // probe the ball centers where the displacement peaks.
            let mut cauchy = (0..xs.len())
                .map(|i| y.distance(&traces[n - 1][i].0, &traces[n][i].0))
                .fold(0.0f64, f64::max);
            for ball in f.balls().level(n + 1).balls() {
                let at = Point(vec![ball.center()]);
                let (lo, _) = f.eval(&at, n)?;
                let (hi, _) = f.eval(&at, n + 1)?;
                cauchy = cauchy.max(y.distance(&lo, &hi));
            }
            report.push((format!("level.{n}.cauchy_max"), cauchy.to_string()));
        }
        report.push((format!("level.{n}.gap"), gap.to_string()));
    }

    let mut rows = Vec::with_capacity(levels * xs.len());
    for n in 1..=levels {
        for (i, &t) in xs.iter().enumerate() {
            let (p, bound) = &traces[n - 1][i];
            let coords: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
            rows.push(format!("{t},{n},{},{bound}", coords.join(";")));
        }
    }
    Ok(Output {
        report,
        csv_header: "x,level,f,error_bound",
        csv_rows: rows,
    })
}

fn blowup(ctx: &mut Ctx) -> Result<Output> {
    let s_dim = ctx.take("s_dim").ok_or_else(|| {
        Error::ConfigInvalid(format!("{}: missing required key \"s_dim\"", ctx.cmd))
    })?;
    let rep = if s_dim == "point" {
        ctx.record("s_dim", &s_dim);
        let depth = ctx.req_u32("depth")?;
        blowup_demo_point(depth)?
    } else {
        let s: f64 = ctx.parse("s_dim", &s_dim, "a number in (0,1) or \"point\"")?;
        ctx.record("s_dim", s);
        let depth = ctx.req_u32("depth")?;
        blowup_demo(s, depth)?
    };
    let mut report = vec![
        ("s_requested".to_string(), rep.s_requested.to_string()),
        ("s_realized".to_string(), rep.s_realized.to_string()),
        (
            "ratio".to_string(),
            format!("{}/{}", rep.ratio.0, rep.ratio.1),
        ),
        ("target".to_string(), rep.target.clone()),
        (
            "image.slope".to_string(),
            rep.image_dimension.slope.to_string(),
        ),
        (
            "image.r_squared".to_string(),
            rep.image_dimension.r_squared.to_string(),
        ),
        ("verdict".to_string(), rep.verdict.clone()),
    ];
    let mut rows = Vec::with_capacity(rep.preimage_bounds.len());
    for row in &rep.preimage_bounds {
        report.push((
            format!("stage.{}.bound_num", row.depth),
            row.bound_num.to_string(),
        ));
        report.push((
            format!("stage.{}.bound_den", row.depth),
            row.bound_den.to_string(),
        ));
        report.push((format!("stage.{}.bound", row.depth), row.bound.to_string()));
        report.push((
            format!("stage.{}.box_count", row.depth),
            row.box_count.to_string(),
        ));
        rows.push(format!("{},{},{}", row.depth, row.bound, row.box_count));
    }
    Ok(Output {
        report,
        csv_header: "depth,preimage_bound,image_box_count",
        csv_rows: rows,
    })
}

fn render(format: &str, ctx: &Ctx, out: &Output) -> String {
    let mut cfg = ctx.resolved.clone();
    cfg.sort();
    let mut s = String::new();
    match format {
        "report" => {
            s.push_str("# hausfill report\n");
            for (k, v) in &cfg {
                let _ = writeln!(s, "config.{k} = {v}");
            }
            for (k, v) in &out.report {
                let _ = writeln!(s, "output.{k} = {v}");
            }
        }
        _ => {
            for (k, v) in &cfg {
                let _ = writeln!(s, "# config.{k} = {v}");
            }
            let _ = writeln!(s, "{}", out.csv_header);
            for row in &out.csv_rows {
                let _ = writeln!(s, "{row}");
            }
        }
    }
    s
}

fn run(cli: &Cli) -> Result<()> {
    let cmd_name = match &cli.command {
        Cmd::Hfun {
            action: HfunCmd::Check(_),
        } => "hfun check",
        Cmd::Hfun {
            action: HfunCmd::Precedes(_),
        } => "hfun precedes",
        Cmd::Measure(_) => "measure",
        Cmd::Dimension(_) => "dimension",
        Cmd::Net(_) => "net",
        Cmd::Fill(_) => "fill",
        Cmd::Blowup(_) => "blowup",
    };
    let mut ctx = Ctx::new(cmd_name, cli.config.as_deref())?;
    ctx.over("format", &cli.format);
    ctx.over("out", &cli.out.as_ref().map(|p| p.display().to_string()));
    let format = ctx.str_or("format", "report");
    if format != "report" && format != "csv" {
        return Err(Error::ConfigInvalid(format!(
            "format must be \"report\" or \"csv\", got {format:?}"
        )));
    }
    let out_path = ctx.take("out");
    if let Some(p) = &out_path {
        ctx.record("out", p);
    }
    let output = match &cli.command {
        Cmd::Hfun {
            action: HfunCmd::Check(a),
        } => {
            ctx.over("gauge", &a.gauge);
            ctx.over("levels", &a.levels);
            ctx.over("t_min", &a.t_min);
            hfun_check(&mut ctx)?
        }
        Cmd::Hfun {
            action: HfunCmd::Precedes(a),
        } => {
            ctx.over("gauge", &a.gauge);
            ctx.over("gauge2", &a.gauge2);
            ctx.over("levels", &a.levels);
            hfun_precedes(&mut ctx)?
        }
        Cmd::Measure(a) => {
            ctx.over("set", &a.set);
            ctx.over("gauge", &a.gauge);
            ctx.over("deltas", &a.deltas);
            measure(&mut ctx)?
        }
        Cmd::Dimension(a) => {
            ctx.over("set", &a.set);
            ctx.over("depth", &a.depth);
            dimension(&mut ctx)?
        }
        Cmd::Net(a) => {
            ctx.over("space", &a.space);
            ctx.over("levels", &a.levels);
            net(&mut ctx)?
        }
        Cmd::Fill(a) => {
            ctx.over("space", &a.space);
            ctx.over("gauge", &a.gauge);
            ctx.over("levels", &a.levels);
            ctx.over("set", &a.set);
            ctx.over("samples", &a.samples);
            ctx.over("grid", &a.grid);
            fill(&mut ctx)?
        }
        Cmd::Blowup(a) => {
            ctx.over("s_dim", &a.s_dim);
            ctx.over("depth", &a.depth);
            blowup(&mut ctx)?
        }
    };
    ctx.finish()?;
    let text = render(&format, &ctx, &output);
    match out_path {
        Some(p) => fs::write(&p, text)
            .map_err(|e| Error::ConfigInvalid(format!("cannot write {p}: {e}")))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn exit_status(e: &Error) -> u8 {
    match e.code() {
        "config-invalid" => 2,
        "invalid-input" => 3,
        "invalid-gauge" => 4,
        "resolution-exceeded" => 5,
        "insufficient-mass" => 6,
        "undefined-dimension" => 7,
        "budget-exceeded" => 8,
        "capacity-exceeded" => 9,
        "depth-exceeded" => 10,
        "invalid-radii" => 11,
        "degenerate-curve" => 12,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(exit_status(&e))
        }
    }
}
