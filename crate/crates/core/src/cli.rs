//! Command-line front end of the `mems` binary.
//!
//! Exit codes: 0 success, 1 usage error, 2 analysis or parse error,
//! 3 external tool failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cfront::{parse, Ast};
use crate::countest::{estimate_weighted, model_count, Domains, PathWeight};
use crate::dynexec::{
    compile, interpret_with_output, read_records_csv, write_records_csv, Arg, ArrayGen,
    InterpConfig, NativeError, RunRecord, DEFAULT_COMPILE_CMD, DEFAULT_REPEAT,
};
use crate::instrument::{instrument, strip, InstrumentConfig, Marker, Timer, TraceMode};
use crate::lab::{
    bucket_speedup, correlate, group_by_bucket, read_estimates_csv, report, strength,
    sweep_records, write_estimates_csv, AnalysisRow, LabError, SweepSpec, TimeMetric,
};
use crate::pathex::{enumerate_paths_assuming, read_paths, write_paths, Limits, PathexError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ANALYSIS: i32 = 2;
pub const EXIT_EXTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "mems",
    version,
    about = "Memory-access counting, path enumeration and performance estimation for MiniC"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TimerArg {
    Monotonic,
    None,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TraceArg {
    Full,
    Counts,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GroupBy {
    Bucket,
    Program,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MetricArg {
    Steps,
    Wall,
}

impl From<MetricArg> for TimeMetric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Steps => TimeMetric::Steps,
            MetricArg::Wall => TimeMetric::Wall,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Insert mems and path-length counters into a MiniC program.
    Instrument {
        file: PathBuf,
        /// Branch-line marker: `#` or `@`.
        #[arg(long, default_value = "#", value_parser = parse_marker)]
        marker: Marker,
        #[arg(long, value_enum, default_value = "monotonic")]
        timer: TimerArg,
        #[arg(long, value_enum, default_value = "full")]
        trace: TraceArg,
        /// Instrument only these functions (repeatable).
        #[arg(long = "fn")]
        functions: Vec<String>,
        /// Add a `main` calling this function with integer command-line arguments.
        #[arg(long)]
        harness: Option<String>,
        /// Remove instrumentation from FILE instead.
        #[arg(long, conflicts_with_all = ["functions", "harness"])]
        strip: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate the feasible paths of a function over integer input boxes.
    Paths {
        file: PathBuf,
        #[arg(long = "fn")]
        function: String,
        /// `<var>=<lo>..<hi>` or `<var>=<value>`; one per scalar parameter.
        #[arg(long = "domain", value_parser = parse_domain)]
        domains: Vec<(String, (i64, i64))>,
        /// Extra constraint on the inputs, e.g. `x > 20`.
        #[arg(long)]
        assume: Option<String>,
        #[arg(long, default_value_t = Limits::default().max_paths)]
        max_paths: usize,
        #[arg(long, default_value_t = Limits::default().max_loop_unroll)]
        unroll: usize,
        #[arg(long, default_value_t = Limits::default().max_depth)]
        max_depth: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count the inputs following each path.
    Count {
        #[arg(long)]
        paths: PathBuf,
        /// Overrides the domains recorded in the paths file.
        #[arg(long = "domain", value_parser = parse_domain)]
        domains: Vec<(String, (i64, i64))>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Frequency-weighted mean of the per-path mems.
    Estimate {
        #[arg(long)]
        paths: PathBuf,
        #[arg(long)]
        counts: PathBuf,
        /// Write per-path weights as CSV for `report`.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a function in the interpreter, printing what its instrumented
    /// version would print.
    Interp {
        file: PathBuf,
        #[arg(long = "fn")]
        function: String,
        /// Integer arguments, comma or space separated.
        #[arg(long, num_args = 0.., value_delimiter = ',', allow_negative_numbers = true)]
        args: Vec<i64>,
        /// `<param>=<generator>` for array parameters.
        #[arg(long = "array")]
        arrays: Vec<String>,
        #[arg(long, default_value = "#", value_parser = parse_marker)]
        marker: Marker,
        #[arg(long, value_enum, default_value = "full")]
        trace: TraceArg,
        #[arg(long, default_value_t = InterpConfig::default().max_steps)]
        max_steps: u64,
        /// Append the run record to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compile the instrumented program natively and run it.
    Run {
        file: PathBuf,
        /// Entry function; defaults to the only non-`main` function.
        #[arg(long = "fn")]
        function: Option<String>,
        /// Compile command with `{src}` and `{bin}` placeholders.
        #[arg(long, default_value = DEFAULT_COMPILE_CMD)]
        cc: String,
        #[arg(long, num_args = 0.., value_delimiter = ',', allow_negative_numbers = true)]
        args: Vec<i64>,
        #[arg(long, default_value_t = DEFAULT_REPEAT)]
        repeat: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run every cell of a sweep spec and write the records as CSV.
    Sweep {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Correlation tables for a records CSV.
    Analyze {
        csv: PathBuf,
        #[arg(long, value_enum, default_value = "program")]
        group_by: GroupBy,
        #[arg(long, value_enum)]
        metric: Option<MetricArg>,
        /// Second records CSV; prints per-bucket time ratios of CSV over it.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Write the report bundle for records and estimate CSVs.
    Report {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum)]
        metric: Option<MetricArg>,
    },
}

fn parse_marker(s: &str) -> Result<Marker, String> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => {
            Marker::from_char(c).ok_or_else(|| format!("marker must be # or @, got `{}`", s))
        }
        _ => Err(format!("marker must be # or @, got `{}`", s)),
    }
}

fn parse_domain(s: &str) -> Result<(String, (i64, i64)), String> {
    let bad = || format!("expected <var>=<lo>..<hi>, got `{}`", s);
    let (v, range) = s.split_once('=').ok_or_else(bad)?;
    let (lo, hi) = match range.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let x = range.trim().parse().map_err(|_| bad())?;
            (x, x)
        }
    };
    if lo > hi {
        return Err(format!("empty domain `{}`", s));
    }
    Ok((v.trim().to_string(), (lo, hi)))
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn analysis(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_ANALYSIS,
        message: message.into(),
    }
}

fn external(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_EXTERNAL,
        message: message.into(),
    }
}

type Res<T = ()> = Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {}", path.display(), e)))
}

fn parse_file(path: &Path) -> Res<(String, Ast)> {
    let text = read(path)?;
    let ast = parse(&text).map_err(|d| analysis(d.render(&path.display().to_string())))?;
    Ok((text, ast))
}

/// Writes to `path`, or to `out` when no path is given.
fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Res {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| analysis(format!("{}: {}", p.display(), e))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| analysis(e.to_string())),
    }
}

fn say(out: &mut dyn Write, text: impl AsRef<str>) -> Res {
    writeln!(out, "{}", text.as_ref()).map_err(|e| analysis(e.to_string()))
}

fn lab_failure(e: LabError) -> Failure {
    let code = match &e {
        LabError::Spec(_) => EXIT_USAGE,
        LabError::Native { .. } => EXIT_EXTERNAL,
        _ => EXIT_ANALYSIS,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn native_failure(e: NativeError) -> Failure {
    external(e.to_string())
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn domains_map(list: Vec<(String, (i64, i64))>) -> Domains {
    list.into_iter().collect()
}

fn load_records(path: &Path) -> Res<Vec<AnalysisRow>> {
    let text = read(path)?;
    let recs =
        read_records_csv(&text).map_err(|e| analysis(format!("{}: {}", path.display(), e)))?;
    Ok(recs.iter().map(AnalysisRow::from_record).collect())
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Res {
    match cmd {
        Command::Instrument {
            file,
            marker,
            timer,
            trace,
            functions,
            harness,
            strip: do_strip,
            output,
        } => {
            if do_strip {
                let text = read(&file)?;
                let plain = strip(&text).map_err(|e| analysis(e.to_string()))?;
                return emit(output.as_deref(), &plain, out);
            }
            let (_, ast) = parse_file(&file)?;
            let cfg = InstrumentConfig {
                cond_marker: marker,
                timer: match timer {
                    TimerArg::Monotonic => Timer::Monotonic,
                    TimerArg::None => Timer::None,
                },
                trace: trace_mode(trace),
                target_functions: (!functions.is_empty()).then_some(functions),
                harness,
            };
            let text = instrument(&ast, &cfg).map_err(|e| analysis(e.to_string()))?;
            emit(output.as_deref(), &text, out)
        }
        Command::Paths {
            file,
            function,
            domains,
            assume,
            max_paths,
            unroll,
            max_depth,
            output,
        } => {
            let (_, ast) = parse_file(&file)?;
            let limits = Limits {
                max_paths,
                max_loop_unroll: unroll,
                max_depth,
            };
            let domains = domains_map(domains);
            match enumerate_paths_assuming(&ast, &function, &domains, limits, assume.as_deref()) {
                Ok(set) => {
                    emit(output.as_deref(), &write_paths(&set), out)?;
                    if output.is_some() {
                        say(err, format!("{} paths", set.paths.len()))?;
                    }
                    Ok(())
                }
                Err(e) => {
                    if let Some(partial) = e.partial() {
                        emit(output.as_deref(), &write_paths(partial), out)?;
                    }
                    Err(match e {
                        PathexError::FunctionNotFound(_)
                        | PathexError::UnknownVariable(_)
                        | PathexError::UnboundedDomain(_) => usage(e.to_string()),
                        _ => analysis(e.to_string()),
                    })
                }
            }
        }
        Command::Count {
            paths,
            domains,
            output,
        } => {
            let file = read_paths(&read(&paths)?)
                .map_err(|e| analysis(format!("{}: {}", paths.display(), e)))?;
            let mut doms = file.domains.clone();
            doms.extend(domains_map(domains));
            let mut rows = vec!["path,delta,pind,len".to_string()];
            let mut total: u128 = 0;
            for p in &file.paths {
                let delta = model_count(&p.condition, &doms)
                    .map_err(|e| analysis(format!("path {}: {}", p.id, e)))?;
                total += delta;
                rows.push(format!("{},{},{},{}", p.id, delta, p.pind, p.path_len));
            }
            let size: u128 = doms
                .values()
                .map(|(lo, hi)| (hi - lo + 1) as u128)
                .product();
            emit(output.as_deref(), &(rows.join("\n") + "\n"), out)?;
            say(
                err,
                format!(
                    "{} inputs on {} paths; domain size {}",
                    total,
                    file.paths.len(),
                    size
                ),
            )
        }
        Command::Estimate {
            paths,
            counts,
            output,
        } => {
            let file = read_paths(&read(&paths)?)
                .map_err(|e| analysis(format!("{}: {}", paths.display(), e)))?;
            let deltas = read_counts(&read(&counts)?)
                .map_err(|e| analysis(format!("{}: {}", counts.display(), e)))?;
            let mut weights = Vec::new();
            for p in &file.paths {
                let delta = *deltas
                    .get(&p.id)
                    .ok_or_else(|| analysis(format!("no count for path {}", p.id)))?;
                weights.push(PathWeight {
                    path_id: p.id,
                    delta,
                    pind: p.pind,
                });
            }
            let est = estimate_weighted(weights).map_err(|e| analysis(e.to_string()))?;
            say(out, est.render())?;
            if let Some(o) = output {
                emit(
                    Some(&o),
                    &write_estimates_csv(&[(file.function.clone(), est)]),
                    out,
                )?;
            }
            Ok(())
        }
        Command::Interp {
            file,
            function,
            args,
            arrays,
            marker,
            trace,
            max_steps,
            csv,
        } => {
            let (_, ast) = parse_file(&file)?;
            let f = ast
                .function(&function)
                .ok_or_else(|| usage(format!("no function `{}`", function)))?;
            let mut gens: BTreeMap<String, ArrayGen> = BTreeMap::new();
            for a in &arrays {
                let (n, g) = a
                    .split_once('=')
                    .ok_or_else(|| usage(format!("expected <param>=<generator>, got `{}`", a)))?;
                gens.insert(n.to_string(), g.parse().map_err(usage)?);
            }
            let mut ints = args.iter();
            let mut call = Vec::new();
            for p in &f.params {
                if p.is_array() {
                    let g = gens
                        .remove(&p.name)
                        .ok_or_else(|| usage(format!("missing --array {}=<generator>", p.name)))?;
                    call.push(Arg::Array(g));
                } else {
                    let v = ints.next().ok_or_else(|| {
                        usage(format!("missing value for `{}` in --args", p.name))
                    })?;
                    call.push(Arg::Int(*v));
                }
            }
            if ints.next().is_some() || !gens.is_empty() {
                return Err(usage(format!("too many arguments for `{}`", function)));
            }
            let cfg = InterpConfig {
                max_steps,
                marker,
                trace: trace_mode(trace),
                ..Default::default()
            };
            match interpret_with_output(&ast, &function, &call, &cfg) {
                Ok((rec, stdout)) => {
                    emit(None, &stdout, out)?;
                    say(
                        err,
                        format!(
                            "path_len={} mems={} steps={}",
                            rec.path_len,
                            rec.mems,
                            rec.steps.unwrap_or(0)
                        ),
                    )?;
                    if let Some(path) = csv {
                        append_record(&path, &rec)?;
                    }
                    Ok(())
                }
                Err(e) => {
                    emit(None, &e.stdout, out)?;
                    Err(analysis(e.to_string()))
                }
            }
        }
        Command::Run {
            file,
            function,
            cc,
            args,
            repeat,
            output,
        } => {
            let (_, ast) = parse_file(&file)?;
            let entry = match function {
                Some(f) => f,
                None => {
                    let names: Vec<&str> = ast
                        .functions
                        .iter()
                        .map(|f| f.name.as_str())
                        .filter(|n| *n != "main")
                        .collect();
                    match names[..] {
                        [one] => one.to_string(),
                        _ => return Err(usage("several functions; choose one with --fn")),
                    }
                }
            };
            let has_main = ast.function("main").is_some();
            let cfg = InstrumentConfig {
                harness: (!has_main).then(|| entry.clone()),
                ..Default::default()
            };
            let text = instrument(&ast, &cfg).map_err(|e| analysis(e.to_string()))?;
            let bin = compile(&text, &cc).map_err(native_failure)?;
            let runs = bin.run(&entry, &args, repeat).map_err(native_failure)?;
            for (i, r) in runs.iter().enumerate() {
                say(
                    out,
                    format!(
                        "run {}: path_len={} mems={} time_ms={:.6}",
                        i + 1,
                        r.path_len,
                        r.mems,
                        r.time_ms.unwrap_or(0.0)
                    ),
                )?;
            }
            if let Some(o) = output {
                emit(Some(&o), &write_records_csv(&runs), out)?;
            }
            Ok(())
        }
        Command::Sweep { spec, output } => {
            let text = read(&spec)?;
            let base = spec.parent().unwrap_or(Path::new("."));
            let s = SweepSpec::from_toml(&text, base).map_err(lab_failure)?;
            let recs = sweep_records(&s).map_err(lab_failure)?;
            emit(output.as_deref(), &write_records_csv(&recs), out)?;
            if output.is_some() {
                say(err, format!("{} rows", recs.len()))?;
            }
            Ok(())
        }
        Command::Analyze {
            csv,
            group_by,
            metric,
            compare,
        } => {
            let rows = load_records(&csv)?;
            let metric = metric
                .map(TimeMetric::from)
                .unwrap_or_else(|| TimeMetric::for_rows(&rows));
            if let Some(other) = compare {
                let b = load_records(&other)?;
                let table =
                    bucket_speedup(&rows, &b, metric).map_err(|e| analysis(e.to_string()))?;
                say(
                    out,
                    format!(
                        "{:<10} {:>6} {:>6} {:>14} {:>14} {:>10}",
                        "bucket", "rows_a", "rows_b", "mean_a", "mean_b", "ratio"
                    ),
                )?;
                for s in table {
                    say(
                        out,
                        format!(
                            "{:<10} {:>6} {:>6} {:>14.6} {:>14.6} {:>10.6}",
                            s.bucket.label(),
                            s.rows_a,
                            s.rows_b,
                            s.mean_a,
                            s.mean_b,
                            s.ratio
                        ),
                    )?;
                }
                return Ok(());
            }
            let groups: Vec<(String, Vec<&AnalysisRow>)> = match group_by {
                GroupBy::Program => {
                    let mut names: Vec<&str> = Vec::new();
                    for r in &rows {
                        if !names.contains(&r.program.as_str()) {
                            names.push(&r.program);
                        }
                    }
                    names
                        .into_iter()
                        .map(|n| {
                            (
                                n.to_string(),
                                rows.iter().filter(|r| r.program == n).collect(),
                            )
                        })
                        .collect()
                }
                GroupBy::Bucket => group_by_bucket(&rows)
                    .into_iter()
                    .map(|(b, g)| (b.label().to_string(), g))
                    .collect(),
            };
            say(
                out,
                format!(
                    "{:<12} {:>6} {:>12} {:>14} {:>10} {:<12}",
                    "group",
                    "rows",
                    "mean mems",
                    format!("mean {}", metric),
                    "r",
                    "strength"
                ),
            )?;
            let all: Vec<&AnalysisRow> = rows.iter().collect();
            for (name, g) in groups
                .iter()
                .chain(std::iter::once(&("(all)".to_string(), all)))
            {
                if g.is_empty() {
                    continue;
                }
                let mean_mems = g.iter().map(|r| r.mems as f64).sum::<f64>() / g.len() as f64;
                let times: Vec<f64> = g.iter().filter_map(|r| r.time(metric)).collect();
                let mean_time = if times.len() == g.len() {
                    format!("{:.6}", times.iter().sum::<f64>() / times.len() as f64)
                } else {
                    "-".to_string()
                };
                let r = correlate(g, metric).ok();
                say(
                    out,
                    format!(
                        "{:<12} {:>6} {:>12.3} {:>14} {:>10} {:<12}",
                        name,
                        g.len(),
                        mean_mems,
                        mean_time,
                        r.map(|x| format!("{:.6}", x)).unwrap_or_else(|| "-".into()),
                        r.map(strength).unwrap_or("n/a")
                    ),
                )?;
            }
            Ok(())
        }
        Command::Report {
            inputs,
            output,
            metric,
        } => {
            let mut rows = Vec::new();
            let mut estimates = Vec::new();
            for path in &inputs {
                let text = read(path)?;
                if text.starts_with("function,path,delta,pind") {
                    estimates.extend(
                        read_estimates_csv(&text)
                            .map_err(|e| analysis(format!("{}: {}", path.display(), e)))?,
                    );
                } else {
                    rows.extend(load_records(path)?);
                }
            }
            let metric = metric
                .map(TimeMetric::from)
                .unwrap_or_else(|| TimeMetric::for_rows(&rows));
            let bundle = report(&rows, &estimates, metric);
            bundle
                .write_to(&output)
                .map_err(|e| analysis(format!("{}: {}", output.display(), e)))?;
            say(out, bundle.text().trim_end())
        }
    }
}

fn trace_mode(t: TraceArg) -> TraceMode {
    match t {
        TraceArg::Full => TraceMode::Full,
        TraceArg::Counts => TraceMode::CountsOnly,
    }
}

fn read_counts(text: &str) -> Result<BTreeMap<usize, u128>, String> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let headers = rd.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| format!("missing column `{}`", name))
    };
    let (pi, di) = (col("path")?, col("delta")?);
    let mut out = BTreeMap::new();
    for (i, row) in rd.records().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        let bad = || format!("row {}: bad number", i + 2);
        let id = row.get(pi).unwrap_or("").parse().map_err(|_| bad())?;
        let d = row.get(di).unwrap_or("").parse().map_err(|_| bad())?;
        out.insert(id, d);
    }
    Ok(out)
}

fn append_record(path: &Path, rec: &RunRecord) -> Res {
    let mut recs = match std::fs::read_to_string(path) {
        Ok(t) if !t.trim().is_empty() => {
            read_records_csv(&t).map_err(|e| analysis(format!("{}: {}", path.display(), e)))?
        }
        _ => Vec::new(),
    };
    recs.push(rec.clone());
    std::fs::write(path, write_records_csv(&recs))
        .map_err(|e| analysis(format!("{}: {}", path.display(), e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let mut full = vec!["mems"];
        full.extend_from_slice(args);
        let code = run(full, &mut o, &mut e);
        (
            code,
            String::from_utf8(o).unwrap(),
            String::from_utf8(e).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_1() {
        assert_eq!(call(&[]).0, EXIT_USAGE);
        assert_eq!(call(&["paths"]).0, EXIT_USAGE);
        assert_eq!(call(&["instrument", "/nonexistent.c"]).0, EXIT_USAGE);
        assert_eq!(call(&["instrument", "x.c", "--marker", "!"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn domain_syntax() {
        assert_eq!(parse_domain("x=1..5"), Ok(("x".into(), (1, 5))));
        assert_eq!(parse_domain("x=-3"), Ok(("x".into(), (-3, -3))));
        assert!(parse_domain("x=5..1").is_err());
        assert!(parse_domain("x").is_err());
    }

    #[test]
    fn counts_csv() {
        let m = read_counts("path,delta,pind,len\n0,60,3,2\n1,20,2,2\n").unwrap();
        assert_eq!(m[&0], 60);
        assert!(read_counts("a,b\n").is_err());
    }
}
