//! Experiment harness: input sweeps, the rows they produce, statistics and
//! report bundles.

mod report;
mod stats;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Deserialize;

use crate::cfront::{parse, parse_expr, Ast, BinOp, Expr, ExprKind, UnOp};
use crate::corpus;
use crate::dynexec::{
    compile, interpret, Arg, ArrayGen, InterpConfig, NativeError, RunError, RunRecord, Source,
    DEFAULT_COMPILE_CMD,
};
use crate::instrument::{instrument, InstrumentConfig, InstrumentError, Timer};

pub use report::{read_estimates_csv, report, write_estimates_csv, write_rows_csv, Report};
pub use stats::{
    bucket_speedup, correlate, correlate_across_programs, correlate_size, correlate_within_program,
    group_by_bucket, pearson, strength, Bucket, BucketSpeedup, StatsError,
};

/// What stands for execution time in the statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TimeMetric {
    /// Interpreter step count.
    #[default]
    Steps,
    /// Measured milliseconds.
    Wall,
}

impl TimeMetric {
    /// Steps when every row has them, wall time otherwise.
    pub fn for_rows(rows: &[AnalysisRow]) -> TimeMetric {
        if rows.iter().all(|r| r.steps.is_some()) {
            TimeMetric::Steps
        } else {
            TimeMetric::Wall
        }
    }
}

impl fmt::Display for TimeMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimeMetric::Steps => "steps",
            TimeMetric::Wall => "time_ms",
        })
    }
}

impl FromStr for TimeMetric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "steps" => Ok(TimeMetric::Steps),
            "wall" | "time" | "time_ms" => Ok(TimeMetric::Wall),
            _ => Err(format!("unknown time metric `{}`", s)),
        }
    }
}

/// One program input with its counts and (mean) cost.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisRow {
    pub program: String,
    /// Input size: the first scalar argument, by corpus convention.
    pub n: i64,
    pub input: String,
    pub source: Source,
    pub path_len: u64,
    pub mems: u64,
    pub time_ms: Option<f64>,
    pub steps: Option<u64>,
    pub bucket: Bucket,
}

impl AnalysisRow {
    pub fn from_record(r: &RunRecord) -> AnalysisRow {
        AnalysisRow {
            program: r.program.clone(),
            n: r.input.first().copied().unwrap_or(0),
            input: r.input_text(),
            source: r.source,
            path_len: r.path_len,
            mems: r.mems,
            time_ms: r.time_ms,
            steps: r.steps,
            bucket: Bucket::of(r.mems),
        }
    }

    pub fn time(&self, metric: TimeMetric) -> Option<f64> {
        match metric {
            TimeMetric::Steps => self.steps.map(|s| s as f64),
            TimeMetric::Wall => self.time_ms,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("sweep spec: {0}")]
    Spec(String),
    #[error("{program}: {message}")]
    Parse { program: String, message: String },
    #[error("{program}: {error}")]
    Instrument {
        program: String,
        error: InstrumentError,
    },
    #[error("{program} ({input}): {error}")]
    Interp {
        program: String,
        input: String,
        error: RunError,
    },
    #[error("{program} ({input}): {error}")]
    Native {
        program: String,
        input: String,
        error: NativeError,
    },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Executor {
    Interpreter,
    Native { compile_cmd: String },
}

/// A grid entry: a constant or an expression over earlier parameters, such
/// as `n/2` or `3n/4`. Division floors.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    Int(i64),
    Expr(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramSweep {
    /// Program id in the rows.
    pub name: String,
    pub source: String,
    pub function: String,
    /// Values per scalar parameter.
    pub grid: BTreeMap<String, Vec<GridValue>>,
    /// Generator per array parameter; `{p}` is replaced by the value of
    /// scalar parameter `p`, e.g. `random:{n}:7`.
    pub arrays: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSpec {
    pub executor: Executor,
    pub repeat: usize,
    pub max_steps: u64,
    pub programs: Vec<ProgramSweep>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    executor: Option<String>,
    #[serde(default)]
    repeat: Option<usize>,
    #[serde(default)]
    compile_cmd: Option<String>,
    #[serde(default)]
    max_steps: Option<u64>,
    #[serde(default, rename = "program")]
    programs: Vec<RawProgram>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProgram {
    name: String,
    #[serde(default)]
    file: Option<String>,
    #[serde(default)]
    corpus: Option<String>,
    #[serde(default)]
    function: Option<String>,
    #[serde(default)]
    grid: BTreeMap<String, Vec<GridValue>>,
    #[serde(default)]
    arrays: BTreeMap<String, String>,
}

impl SweepSpec {
    /// Reads the TOML form. `file` paths are relative to `base_dir`.
    ///
    /// ```toml
    /// executor = "interpreter"   # or "native"
    /// repeat = 5
    ///
    /// [[program]]
    /// name = "test"
    /// corpus = "test"            # or: file = "prog.c"
    /// grid = { n = [10, 50], mode = ["0", "n/2", "n"] }
    /// ```
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<SweepSpec, LabError> {
        let raw: RawSpec = toml::from_str(text).map_err(|e| LabError::Spec(e.to_string()))?;
        let executor = match raw.executor.as_deref().unwrap_or("interpreter") {
            "interpreter" => Executor::Interpreter,
            "native" => Executor::Native {
                compile_cmd: raw
                    .compile_cmd
                    .unwrap_or_else(|| DEFAULT_COMPILE_CMD.to_string()),
            },
            other => return Err(LabError::Spec(format!("unknown executor `{}`", other))),
        };
        let repeat = raw.repeat.unwrap_or(crate::dynexec::DEFAULT_REPEAT);
        if repeat == 0 {
            return Err(LabError::Spec("repeat must be at least 1".into()));
        }
        let mut programs = Vec::new();
        for p in raw.programs {
            let source = match (&p.file, &p.corpus) {
                (Some(f), None) => std::fs::read_to_string(base_dir.join(f))
                    .map_err(|e| LabError::Spec(format!("{}: {}", f, e)))?,
                (None, Some(c)) => corpus::get(c)
                    .ok_or_else(|| LabError::Spec(format!("no corpus program `{}`", c)))?
                    .source
                    .to_string(),
                _ => {
                    return Err(LabError::Spec(format!(
                        "program `{}` needs exactly one of `file` and `corpus`",
                        p.name
                    )))
                }
            };
            programs.push(ProgramSweep {
                function: p.function.unwrap_or_else(|| p.name.clone()),
                name: p.name,
                source,
                grid: p.grid,
                arrays: p.arrays,
            });
        }
        Ok(SweepSpec {
            executor,
            repeat,
            max_steps: raw.max_steps.unwrap_or(InterpConfig::default().max_steps),
            programs,
        })
    }
}

fn eval_grid(e: &Expr, env: &BTreeMap<String, i64>) -> Result<i64, String> {
    Ok(match &e.kind {
        ExprKind::Int(v) => *v,
        ExprKind::Var(n) => *env
            .get(n)
            .ok_or_else(|| format!("`{}` is not an earlier parameter", n))?,
        ExprKind::Unary {
            op: UnOp::Neg,
            operand,
        } => eval_grid(operand, env)?.wrapping_neg(),
        ExprKind::Binary { op, lhs, rhs } => {
            let (a, b) = (eval_grid(lhs, env)?, eval_grid(rhs, env)?);
            match op {
                BinOp::Add => a.wrapping_add(b),
                BinOp::Sub => a.wrapping_sub(b),
                BinOp::Mul => a.wrapping_mul(b),
                BinOp::Div if b != 0 => a.div_euclid(b) - i64::from(b < 0 && a.rem_euclid(b) != 0),
                _ => return Err("only + - * / are allowed in grid expressions".into()),
            }
        }
        _ => return Err("unsupported grid expression".into()),
    })
}

/// `3n/4` is read as `3*n/4`.
fn grid_expr(text: &str) -> Result<Expr, String> {
    let mut s = String::new();
    let mut prev_digit = false;
    for c in text.chars() {
        if prev_digit && (c.is_ascii_alphabetic() || c == '_') {
            s.push('*');
        }
        prev_digit = c.is_ascii_digit();
        s.push(c);
    }
    parse_expr(&s).map_err(|e| format!("bad grid expression `{}`: {}", text, e))
}

/// Input cells of a program sweep: every grid combination, in parameter
/// order, with fractions floored.
pub fn grid_cells(ast: &Ast, p: &ProgramSweep) -> Result<Vec<Vec<Arg>>, LabError> {
    let spec_err = |m: String| LabError::Spec(format!("{}: {}", p.name, m));
    let f = ast
        .function(&p.function)
        .ok_or_else(|| spec_err(format!("no function `{}`", p.function)))?;
    for k in p.grid.keys().chain(p.arrays.keys()) {
        if !f.params.iter().any(|q| &q.name == k) {
            return Err(spec_err(format!(
                "`{}` is not a parameter of `{}`",
                k, f.name
            )));
        }
    }
    let mut cells: Vec<BTreeMap<String, i64>> = vec![BTreeMap::new()];
    for q in f.params.iter().filter(|q| !q.is_array()) {
        let values = p
            .grid
            .get(&q.name)
            .ok_or_else(|| spec_err(format!("no grid for parameter `{}`", q.name)))?;
        let mut next = Vec::new();
        for env in &cells {
            for v in values {
                let x = match v {
                    GridValue::Int(x) => *x,
                    GridValue::Expr(t) => {
                        eval_grid(&grid_expr(t).map_err(&spec_err)?, env).map_err(&spec_err)?
                    }
                };
                let mut e = env.clone();
                e.insert(q.name.clone(), x);
                next.push(e);
            }
        }
        cells = next;
    }
    let mut out = Vec::new();
    for env in cells {
        let mut args = Vec::new();
        for q in &f.params {
            if q.is_array() {
                let mut g = p
                    .arrays
                    .get(&q.name)
                    .ok_or_else(|| spec_err(format!("no generator for array `{}`", q.name)))?
                    .clone();
                for (k, v) in &env {
                    g = g.replace(&format!("{{{}}}", k), &v.to_string());
                }
                args.push(Arg::Array(g.parse::<ArrayGen>().map_err(&spec_err)?));
            } else {
                args.push(Arg::Int(env[&q.name]));
            }
        }
        out.push(args);
    }
    Ok(out)
}

fn input_label(args: &[Arg]) -> String {
    args.iter()
        .map(|a| match a {
            Arg::Int(v) => v.to_string(),
            Arg::Array(g) => g.to_string(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs every cell of the sweep. Interpreter cells run in parallel and once
/// each, since their counts and steps are deterministic; native cells run
/// serially, `repeat` times, and keep the mean time.
pub fn sweep_records(spec: &SweepSpec) -> Result<Vec<RunRecord>, LabError> {
    let mut out = Vec::new();
    for p in &spec.programs {
        let ast = parse(&p.source).map_err(|d| LabError::Parse {
            program: p.name.clone(),
            message: d.to_string(),
        })?;
        let cells = grid_cells(&ast, p)?;
        match &spec.executor {
            Executor::Interpreter => {
                let cfg = InterpConfig {
                    max_steps: spec.max_steps,
                    program: Some(p.name.clone()),
                    ..Default::default()
                };
                out.extend(run_parallel(&ast, p, &cells, &cfg)?);
            }
            Executor::Native { compile_cmd } => {
                let icfg = InstrumentConfig {
                    harness: Some(p.function.clone()),
                    timer: Timer::Monotonic,
                    ..Default::default()
                };
                let text = instrument(&ast, &icfg).map_err(|error| LabError::Instrument {
                    program: p.name.clone(),
                    error,
                })?;
                let bin = compile(&text, compile_cmd).map_err(|error| LabError::Native {
                    program: p.name.clone(),
                    input: String::new(),
                    error,
                })?;
                for cell in &cells {
                    let ints: Vec<i64> = cell
                        .iter()
                        .map(|a| match a {
                            Arg::Int(v) => Ok(*v),
                            Arg::Array(_) => Err(LabError::Spec(format!(
                                "{}: native runs take integer arguments only",
                                p.name
                            ))),
                        })
                        .collect::<Result<_, _>>()?;
                    let runs =
                        bin.run(&p.name, &ints, spec.repeat)
                            .map_err(|error| LabError::Native {
                                program: p.name.clone(),
                                input: input_label(cell),
                                error,
                            })?;
                    let mean =
                        runs.iter().filter_map(|r| r.time_ms).sum::<f64>() / runs.len() as f64;
                    let mut r = runs.into_iter().next().expect("at least one run");
                    r.time_ms = Some(mean);
                    r.trace = None;
                    out.push(r);
                }
            }
        }
    }
    Ok(out)
}

fn run_parallel(
    ast: &Ast,
    p: &ProgramSweep,
    cells: &[Vec<Arg>],
    cfg: &InterpConfig,
) -> Result<Vec<RunRecord>, LabError> {
    let results: Mutex<Vec<Option<Result<RunRecord, RunError>>>> =
        Mutex::new(vec![None; cells.len()]);
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(cells.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= cells.len() {
                    break;
                }
                let r = interpret(ast, &p.function, &cells[i], cfg).map(|mut r| {
                    r.trace = None;
                    r
                });
                results.lock().expect("no poisoned lock")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("no poisoned lock")
        .into_iter()
        .zip(cells)
        .map(|(r, cell)| {
            r.expect("every cell ran")
                .map_err(|error| LabError::Interp {
                    program: p.name.clone(),
                    input: input_label(cell),
                    error,
                })
        })
        .collect()
}

pub fn sweep(spec: &SweepSpec) -> Result<Vec<AnalysisRow>, LabError> {
    Ok(sweep_records(spec)?
        .iter()
        .map(AnalysisRow::from_record)
        .collect())
}
