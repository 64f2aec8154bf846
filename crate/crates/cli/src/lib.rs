//! Command-line front end for the `walksearch` library.
//!
//! [`execute`] renders a command into a string so the binary and the tests
//! share one code path.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use walksearch::analytics::{self, Cell, WalkKind, TABLE_ROWS};
use walksearch::{
    model, qw_continuous, qw_discrete, rw_continuous, rw_discrete, CompleteGraph, EvolutionRecord,
    VertexReadout, WalkError,
};

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Walk(#[from] WalkError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Debug, Parser)]
#[command(
    name = "walksearch",
    version,
    about = "Random and quantum walk search on the complete graph"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Success-probability time series
    Simulate(RunArgs),
    /// Runtime and predicted success for a target error
    Runtime(RunArgs),
    /// Summary table comparing the four walks
    Table(RunArgs),
    /// Peak gap between the discrete and continuous random walks
    Delta(RunArgs),
    /// Measure the walker's position once
    Sample(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Full,
    Subspace,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

fn parse_walk(s: &str) -> Result<WalkKind, String> {
    s.parse().map_err(|_: WalkError| {
        let names: Vec<&str> = WalkKind::ALL.iter().map(|w| w.label()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

/// Flags shared by every subcommand; each command checks the ones it needs.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_parser = parse_walk)]
    pub walk: Option<WalkKind>,
    /// Vertex count; repeat for `delta`
    #[arg(long = "n")]
    pub n: Vec<usize>,
    /// Marked vertex, 1-based
    #[arg(long, default_value_t = 1)]
    pub marked: usize,
    #[arg(long, value_enum, default_value_t = Mode::Full)]
    pub mode: Mode,
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Rendered output plus advisory notes for the error stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub body: String,
    pub notes: Vec<String>,
}

/// `x` with 12 significant digits, in plain decimal notation when practical.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let (mantissa, e) = sci.split_once('e').unwrap();
        format!("{}e{}", trim_zeros(mantissa.to_string()), e)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `x` rounded to the printed precision, for JSON output.
fn round_sig(x: f64) -> Value {
    json!(fmt_sig(x).parse::<f64>().unwrap_or(x))
}

fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, round_sig)
}

fn csv_text(rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.write_record(row)
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

impl RunArgs {
    fn walk(&self) -> CliResult<WalkKind> {
        self.walk
            .ok_or_else(|| CliError::Usage("--walk is required".into()))
    }

    fn single_n(&self) -> CliResult<usize> {
        match self.n.as_slice() {
            [n] => Ok(*n),
            [] => usage("--n is required"),
            _ => usage("--n may be given only once for this command"),
        }
    }

    fn graph(&self) -> CliResult<CompleteGraph> {
        Ok(CompleteGraph::new(self.single_n()?, self.marked)?)
    }

    fn t_max(&self) -> CliResult<f64> {
        self.t_max
            .ok_or_else(|| CliError::Usage("--t-max is required".into()))
    }

    fn steps(&self) -> CliResult<u64> {
        let t = self.t_max()?;
        if !(t >= 0.0) || t.fract() != 0.0 || t > u32::MAX as f64 {
            return usage(format!(
                "--t-max must be a nonnegative integer step count for discrete walks, got {t}"
            ));
        }
        Ok(t as u64)
    }

    fn check_walk_flags(&self, walk: WalkKind) -> CliResult<()> {
        if self.dt.is_some() && !walk.is_continuous() {
            return usage("--dt applies only to continuous-time walks");
        }
        if self.gamma.is_some() && walk != WalkKind::QwContinuous {
            return usage("--gamma applies only to qw-continuous");
        }
        Ok(())
    }

    fn dt(&self, default: f64) -> CliResult<f64> {
        let dt = self.dt.unwrap_or(default);
        if !(dt > 0.0) || !dt.is_finite() {
            return usage(format!("--dt must be positive, got {dt}"));
        }
        Ok(dt)
    }
}

/// Runs one command and renders its output.
pub fn execute(command: &Command) -> CliResult<Rendered> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Runtime(a) => runtime(a),
        Command::Table(a) => table(a),
        Command::Delta(a) => delta(a),
        Command::Sample(a) => sample(a),
    }
}

pub fn args_of(command: &Command) -> &RunArgs {
    match command {
        Command::Simulate(a)
        | Command::Runtime(a)
        | Command::Table(a)
        | Command::Delta(a)
        | Command::Sample(a) => a,
    }
}

#[derive(Debug, Serialize)]
struct SimulateConfig {
    walk: WalkKind,
    n: usize,
    marked: usize,
    mode: Mode,
    t_max: f64,
    dt: Option<f64>,
    gamma: Option<f64>,
    closed_forms_apply: bool,
}

fn simulate(a: &RunArgs) -> CliResult<Rendered> {
    let walk = a.walk()?;
    a.check_walk_flags(walk)?;
    let g = a.graph()?;
    let n = g.n();
    let mut notes = Vec::new();
    let mut record = EvolutionRecord::new();
    let mut dt_used = None;
    let mut gamma_used = None;
    let mut critical = true;

    match walk {
        WalkKind::RwDiscrete => {
            let steps = a.steps()?;
            match a.mode {
                Mode::Full => record = rw_discrete::evolve_full(&g, steps)?,
                Mode::Subspace => {
                    for (t, c) in rw_discrete::evolve_subspace(&g, steps)?
                        .into_iter()
                        .enumerate()
                    {
                        record.push(t as f64, c.marked, c.total())?;
                    }
                }
                Mode::Closed => {
                    for t in 0..=steps {
                        let s = rw_discrete::success_closed_form(n, t as f64)?;
                        // the unmarked share is the complement by construction
                        record.push(t as f64, s, 1.0)?;
                    }
                }
            }
        }
        WalkKind::RwContinuous => {
            let t_max = a.t_max()?;
            let dt = a.dt(rw_continuous::default_dt(n))?;
            dt_used = Some(dt);
            match a.mode {
                Mode::Full => record = rw_continuous::evolve_full(&g, t_max, dt)?,
                Mode::Subspace => {
                    for t in model::time_grid(t_max, dt)? {
                        let c = rw_continuous::evolve_subspace(&g, t)?;
                        record.push(t, c.marked, c.total())?;
                    }
                }
                Mode::Closed => {
                    for t in model::time_grid(t_max, dt)? {
                        record.push(t, rw_continuous::success_closed_form(n, t)?, 1.0)?;
                    }
                }
            }
        }
        WalkKind::QwDiscrete => {
            let steps = a.steps()?;
            match a.mode {
                Mode::Full => record = qw_discrete::evolve_full(&g, steps)?,
                Mode::Subspace => {
                    for (t, c) in qw_discrete::evolve_subspace(&g, steps)?
                        .into_iter()
                        .enumerate()
                    {
                        record.push(t as f64, c.ab * c.ab, c.squared_norm())?;
                    }
                }
                Mode::Closed => {
                    for t in 0..=steps {
                        let c = qw_discrete::closed_form_coefficients(n, t)?;
                        record.push(t as f64, c.ab * c.ab, c.squared_norm())?;
                    }
                }
            }
        }
        WalkKind::QwContinuous => {
            let t_max = a.t_max()?;
            let dt = a.dt(qw_continuous::default_dt(n))?;
            let gamma = a.gamma.unwrap_or_else(|| qw_continuous::critical_gamma(n));
            dt_used = Some(dt);
            gamma_used = Some(gamma);
            critical = qw_continuous::is_critical(n, gamma);
            if !critical {
                if a.mode != Mode::Full {
                    return usage(format!(
                        "--mode {} needs gamma = 1/N; use --mode full for other gamma",
                        mode_name(a.mode)
                    ));
                }
                notes.push(format!(
                    "note: gamma = {} is not 1/N, so the closed forms do not describe this run",
                    fmt_sig(gamma)
                ));
            }
            match a.mode {
                Mode::Full => record = qw_continuous::evolve_full(&g, gamma, t_max, dt)?,
                Mode::Subspace => {
                    for t in model::time_grid(t_max, dt)? {
                        let c = qw_continuous::evolve_subspace(&g, t)?;
                        record.push(t, c.a.norm_sqr(), c.squared_norm())?;
                    }
                }
                Mode::Closed => {
                    for t in model::time_grid(t_max, dt)? {
                        let c = qw_continuous::closed_form_state(n, t)?;
                        record.push(t, c.a.norm_sqr(), c.squared_norm())?;
                    }
                }
            }
        }
    }

    let config = SimulateConfig {
        walk,
        n,
        marked: g.marked(),
        mode: a.mode,
        t_max: a.t_max()?,
        dt: dt_used,
        gamma: gamma_used,
        closed_forms_apply: critical,
    };
    let body = match a.format {
        Format::Csv => {
            let mut rows = vec![vec!["t".into(), "success".into(), "conserved".into()]];
            rows.extend(
                record
                    .samples()
                    .iter()
                    .map(|s| vec![fmt_sig(s.t), fmt_sig(s.success), fmt_sig(s.conserved)]),
            );
            csv_text(&rows)?
        }
        Format::Json => {
            let mut cfg = serde_json::to_value(&config).expect("config");
            for key in ["t_max", "dt", "gamma"] {
                if let Some(x) = cfg[key].as_f64() {
                    cfg[key] = round_sig(x);
                }
            }
            let samples: Vec<Value> = record
                .samples()
                .iter()
                .map(|s| json!([round_sig(s.t), round_sig(s.success), round_sig(s.conserved)]))
                .collect();
            json_text(&json!({ "config": cfg, "samples": samples }))
        }
    };
    Ok(Rendered { body, notes })
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Full => "full",
        Mode::Subspace => "subspace",
        Mode::Closed => "closed",
    }
}

/// One runtime query result; absent fields do not apply to the walk.
#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeRecord {
    pub walk: WalkKind,
    pub n: usize,
    pub epsilon: Option<f64>,
    pub t: f64,
    pub steps: Option<u64>,
    pub success: f64,
    pub runs: Option<u64>,
    pub total_steps: Option<f64>,
}

pub fn runtime_record(walk: WalkKind, n: usize, epsilon: Option<f64>) -> CliResult<RuntimeRecord> {
    let need_eps =
        || epsilon.ok_or_else(|| CliError::Usage(format!("--epsilon is required for {walk}")));
    let mut r = RuntimeRecord {
        walk,
        n,
        epsilon,
        t: 0.0,
        steps: None,
        success: 0.0,
        runs: None,
        total_steps: None,
    };
    match walk {
        WalkKind::RwDiscrete => {
            let eps = need_eps()?;
            r.t = rw_discrete::runtime_for_epsilon(n, eps)?;
            r.steps = Some(rw_discrete::steps_for_epsilon(n, eps)?);
            r.success = 1.0 - eps;
        }
        WalkKind::RwContinuous => {
            let eps = need_eps()?;
            r.t = rw_continuous::runtime_for_epsilon(n, eps)?;
            r.success = 1.0 - eps;
        }
        WalkKind::QwDiscrete => {
            r.t = qw_discrete::optimal_time(n)?;
            r.steps = Some(qw_discrete::optimal_steps(n)?);
            r.success = qw_discrete::success_at_optimum(n)?;
            if let Some(eps) = epsilon {
                let plan = qw_discrete::repetition_plan(n, eps)?;
                r.runs = Some(plan.runs);
                r.total_steps = Some(plan.total_steps);
            }
        }
        WalkKind::QwContinuous => {
            r.t = qw_continuous::runtime(n)?;
            r.success = qw_continuous::success_closed_form(n, r.t)?;
        }
    }
    Ok(r)
}

fn runtime(a: &RunArgs) -> CliResult<Rendered> {
    let walk = a.walk()?;
    let n = a.single_n()?;
    CompleteGraph::new(n, a.marked)?;
    let r = runtime_record(walk, n, a.epsilon)?;
    let body = match a.format {
        Format::Csv => {
            let opt = |x: Option<String>| x.unwrap_or_default();
            csv_text(&[
                [
                    "walk",
                    "n",
                    "epsilon",
                    "t",
                    "steps",
                    "success",
                    "runs",
                    "total_steps",
                ]
                .map(String::from)
                .to_vec(),
                vec![
                    walk.label().to_string(),
                    n.to_string(),
                    opt(r.epsilon.map(fmt_sig)),
                    fmt_sig(r.t),
                    opt(r.steps.map(|s| s.to_string())),
                    fmt_sig(r.success),
                    opt(r.runs.map(|s| s.to_string())),
                    opt(r.total_steps.map(fmt_sig)),
                ],
            ])?
        }
        Format::Json => json_text(&json!({
            "walk": walk,
            "n": n,
            "epsilon": opt_num(r.epsilon),
            "t": round_sig(r.t),
            "steps": r.steps,
            "success": round_sig(r.success),
            "runs": r.runs,
            "total_steps": opt_num(r.total_steps),
        })),
    };
    Ok(Rendered {
        body,
        notes: vec![],
    })
}

/// Default target error for `table` when `--epsilon` is omitted.
pub const DEFAULT_TABLE_EPSILON: f64 = 0.1;

fn cell_text(c: &Option<Cell>) -> String {
    match c {
        Some(Cell::Number(x)) => fmt_sig(*x),
        Some(Cell::Text(s)) => s.clone(),
        None => String::new(),
    }
}

fn cell_json(c: &Option<Cell>) -> Value {
    match c {
        Some(Cell::Number(x)) => round_sig(*x),
        Some(Cell::Text(s)) => json!(s),
        None => Value::Null,
    }
}

fn table(a: &RunArgs) -> CliResult<Rendered> {
    let n = a.single_n()?;
    let eps = a.epsilon.unwrap_or(DEFAULT_TABLE_EPSILON);
    let t = analytics::summary_table(n, eps)?;
    let labels: Vec<String> = t
        .columns
        .iter()
        .map(|c| c.walk.label().to_string())
        .collect();
    let rows: Vec<(&str, Vec<Option<Cell>>)> = TABLE_ROWS
        .iter()
        .map(|&name| (name, t.row(name).expect("known row")))
        .collect();
    let body = match a.format {
        Format::Csv => {
            let mut out = vec![std::iter::once("row".to_string()).chain(labels).collect()];
            for (name, cells) in &rows {
                out.push(
                    std::iter::once(name.to_string())
                        .chain(cells.iter().map(cell_text))
                        .collect(),
                );
            }
            csv_text(&out)?
        }
        Format::Json => {
            let mut map = Map::new();
            for (name, cells) in &rows {
                map.insert(
                    name.to_string(),
                    Value::Array(cells.iter().map(cell_json).collect()),
                );
            }
            json_text(&json!({
                "n": n,
                "epsilon": round_sig(eps),
                "columns": labels,
                "rows": map,
            }))
        }
    };
    Ok(Rendered {
        body,
        notes: vec![],
    })
}

fn delta(a: &RunArgs) -> CliResult<Rendered> {
    if a.n.is_empty() {
        return usage("--n is required");
    }
    let reports =
        a.n.iter()
            .map(|&n| analytics::delta_max(n))
            .collect::<Result<Vec<_>, _>>()?;
    let body = match a.format {
        Format::Csv => {
            let mut rows = vec![["n", "t_star", "delta_max", "asymptote"]
                .map(String::from)
                .to_vec()];
            rows.extend(reports.iter().map(|r| {
                vec![
                    r.n.to_string(),
                    fmt_sig(r.t_star),
                    fmt_sig(r.delta_max),
                    fmt_sig(r.asymptote),
                ]
            }));
            csv_text(&rows)?
        }
        Format::Json => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "t_star": round_sig(r.t_star),
                        "delta_max": round_sig(r.delta_max),
                        "asymptote": round_sig(r.asymptote),
                    })
                })
                .collect();
            json_text(&json!({ "rows": rows }))
        }
    };
    Ok(Rendered {
        body,
        notes: vec![],
    })
}

fn sample(a: &RunArgs) -> CliResult<Rendered> {
    let walk = a.walk()?;
    a.check_walk_flags(walk)?;
    if a.dt.is_some() {
        return usage("--dt does not apply to sample");
    }
    let g = a.graph()?;
    let seed = a.seed.unwrap_or(0);
    let t = a.t_max()?;
    let state: Box<dyn VertexReadout> = match walk {
        WalkKind::RwDiscrete => Box::new(rw_discrete::distribution_at(&g, a.steps()?)?),
        WalkKind::RwContinuous => Box::new(rw_continuous::distribution_at(&g, t)?),
        WalkKind::QwDiscrete => Box::new(qw_discrete::state_at(&g, a.steps()?)?),
        WalkKind::QwContinuous => {
            let gamma = a
                .gamma
                .unwrap_or_else(|| qw_continuous::critical_gamma(g.n()));
            Box::new(qw_continuous::state_at(&g, gamma, t)?)
        }
    };
    let vertex = model::sample_vertex(state.as_ref(), seed)?;
    let probability = state.vertex_probability(vertex)?;
    let body = match a.format {
        Format::Csv => csv_text(&[
            ["t", "vertex", "probability"].map(String::from).to_vec(),
            vec![fmt_sig(t), vertex.to_string(), fmt_sig(probability)],
        ])?,
        Format::Json => json_text(&json!({
            "walk": walk,
            "n": g.n(),
            "marked": g.marked(),
            "seed": seed,
            "t": round_sig(t),
            "vertex": vertex,
            "probability": round_sig(probability),
        })),
    };
    Ok(Rendered {
        body,
        notes: vec![],
    })
}

/// Writes `body` to `path`, or to standard output when absent.
pub fn emit(body: &str, path: Option<&std::path::Path>) -> CliResult<()> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, body)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_sig_examples() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(0.25), "0.25");
        assert_eq!(fmt_sig(25.0 / 36.0), "0.694444444444");
        assert_eq!(fmt_sig(1.0 / 324.0), "0.00308641975309");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(12.0), "12");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(1e-7), "1e-7");
        assert_eq!(fmt_sig(1.0 / 3.0 * 1e-9), "3.33333333333e-10");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt_sig(0.99999999999999), "1");
    }

    #[test]
    fn parse_round_trip_is_stable() {
        for x in [0.1, 2.0 / 3.0, 4.969362295916118, 1e-300, 6.02e23] {
            let once = fmt_sig(x);
            assert_eq!(fmt_sig(once.parse().unwrap()), once);
        }
    }
}
