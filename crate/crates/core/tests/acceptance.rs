//! Acceptance criteria 1 to 10. Each prints one PASS or FAIL line with its
//! runtime against the allowed budget; the process fails if any criterion
//! does.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mems::cfront::{parse, pretty_print, Stmt, StmtKind};
use mems::corpus;
use mems::countest::{estimate_performance, model_count, Domains};
use mems::dynexec::{
    compile, interpret, interpret_with_output, Arg, InterpConfig, DEFAULT_COMPILE_CMD,
};
use mems::instrument::{instrument, strip, InstrumentConfig, Marker, Timer};
use mems::lab::{
    correlate_across_programs, correlate_within_program, pearson, sweep, Executor, GridValue,
    ProgramSweep, SweepSpec, TimeMetric,
};
use mems::memscount::count_stmt;
use mems::pathex::{enumerate_paths, enumerate_paths_assuming, Limits, PathCondition};

type Outcome = Result<String, String>;

/// Name, check, time budget.
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn ints(v: &[i64]) -> Vec<Arg> {
    v.iter().map(|x| Arg::Int(*x)).collect()
}

fn doms(spec: &[(&str, i64, i64)]) -> Domains {
    spec.iter()
        .map(|(v, lo, hi)| (v.to_string(), (*lo, *hi)))
        .collect()
}

/// A compile command when a C compiler is configured: `MEMS_CC`, else `cc`
/// if it is on the PATH.
fn compiler() -> Option<String> {
    if let Ok(cc) = std::env::var("MEMS_CC") {
        return Some(cc);
    }
    std::process::Command::new("sh")
        .args(["-c", "command -v cc"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|_| DEFAULT_COMPILE_CMD.to_string())
}

fn c1_model_counts() -> Outcome {
    let ast = parse("int f(int x) { if (x - 10 > 30) { return 1; } else { return 0; } }").unwrap();
    for (lo, hi) in [
        (21, 100),
        (0, 100),
        (-5000, 5000),
        (-1_000_000_000_000, 1_000_000_000_000),
    ] {
        let d = doms(&[("x", lo, hi)]);
        let set =
            enumerate_paths_assuming(&ast, "f", &d, Limits::default(), Some("x > 20 && x <= 100"))
                .map_err(|e| e.to_string())?;
        ensure!(
            set.paths.len() == 2,
            "expected 2 paths, got {}",
            set.paths.len()
        );
        let counts: Vec<u128> = set
            .paths
            .iter()
            .map(|p| model_count(&p.condition, &d).unwrap())
            .collect();
        ensure!(
            counts == [60, 20],
            "box [{}, {}]: counts {:?}",
            lo,
            hi,
            counts
        );
        ensure!(
            set.paths[0].condition.text() == "(x > 20) && (x <= 100) && (x - 10 > 30)",
            "true path text {}",
            set.paths[0].condition.text()
        );
        let texts = [
            "(x > 20) && (x <= 100) && (x - 10 > 30)",
            "(x > 20) && (x <= 100) && (x - 10 <= 30)",
        ];
        for (t, want) in texts.iter().zip([60u128, 20]) {
            let c = PathCondition::from_text(t).unwrap();
            ensure!(
                model_count(&c, &d) == Ok(want),
                "`{}` over [{}, {}]",
                t,
                lo,
                hi
            );
        }
    }
    Ok("delta_T = 60, delta_F = 20 over four boxes".into())
}

fn c2_estimator() -> Outcome {
    let e = estimate_performance(&[(60, 3), (20, 2)]).map_err(|e| e.to_string())?;
    ensure!(e.value == Ratio::new(11u128, 4), "value {}", e.value);
    // 60 * 3 + 20 * 2 = 220; the value 2.75 is 220/80.
    ensure!(
        e.weighted_sum == 60 * 3 + 20 * 2 && e.total_weight == 80,
        "{}",
        e.fraction_text()
    );
    ensure!(e.decimal(6) == "2.75", "decimal {}", e.decimal(6));
    Ok(e.render())
}

fn c3_mems_fixtures() -> Outcome {
    let body = |code: &str| -> Vec<Stmt> {
        let src = format!("void f(int arr[], int i, int b) {{ {} }}", code);
        parse(&src).unwrap().functions[0].body.stmts.clone()
    };
    let one = |code: &str| count_stmt(&body(code)[0]).total();
    ensure!(one("arr[i] = i+2;") == 1, "arr[i] = i+2");
    ensure!(one("arr[i+1] = arr[i];") == 2, "arr[i+1] = arr[i]");
    let two_mode = parse(corpus::TEST.source).unwrap();
    let f = two_mode.function("test").unwrap();
    let StmtKind::For {
        body: loop_body, ..
    } = &f.body.stmts[1].kind
    else {
        return Err("unexpected two-mode program shape".into());
    };
    let StmtKind::If {
        then_block,
        else_block: Some(else_block),
        ..
    } = &loop_body.stmts[0].kind
    else {
        return Err("unexpected two-mode program shape".into());
    };
    let t = count_stmt(&then_block.stmts[0]).total();
    let e = count_stmt(&else_block.stmts[0]).total();
    ensure!(t == 2 && e == 0, "true branch {}, else branch {}", t, e);
    Ok("1, 2, 2, 0".into())
}

const TWO_MODE_GRID: [(i64, i64); 12] = [
    (10, 0),
    (10, 5),
    (10, 10),
    (50, 0),
    (50, 25),
    (50, 50),
    (100, 0),
    (100, 50),
    (100, 100),
    (500, 0),
    (500, 250),
    (500, 500),
];

fn c4_two_mode_grid() -> Outcome {
    let ast = parse(corpus::TEST.source).unwrap();
    let icfg = InstrumentConfig {
        timer: Timer::None,
        ..Default::default()
    };
    let inst = parse(&instrument(&ast, &icfg).unwrap()).unwrap();
    for (n, mode) in TWO_MODE_GRID {
        let want = (2 * n as u64, 2 * mode as u64);
        let r = interpret(&ast, "test", &ints(&[n, mode]), &InterpConfig::default())
            .map_err(|e| e.to_string())?;
        ensure!(
            (r.path_len, r.mems) == want,
            "interpreter ({}, {}): {:?}",
            n,
            mode,
            (r.path_len, r.mems)
        );
        let r = interpret(&inst, "test", &ints(&[n, mode]), &InterpConfig::raw())
            .map_err(|e| e.to_string())?;
        ensure!(
            (r.path_len, r.mems) == want,
            "instrumented ({}, {}): {:?}",
            n,
            mode,
            (r.path_len, r.mems)
        );
    }
    let spec = SweepSpec {
        executor: Executor::Interpreter,
        repeat: 1,
        max_steps: 10_000_000,
        programs: vec![ProgramSweep {
            name: "test".into(),
            source: corpus::TEST.source.into(),
            function: "test".into(),
            grid: [
                (
                    "n".to_string(),
                    [10, 50, 100, 500].map(GridValue::Int).to_vec(),
                ),
                (
                    "mode".to_string(),
                    ["0", "n/2", "n"]
                        .map(|s| GridValue::Expr(s.into()))
                        .to_vec(),
                ),
            ]
            .into(),
            arrays: Default::default(),
        }],
    };
    let rows = sweep(&spec).map_err(|e| e.to_string())?;
    let got: Vec<(u64, u64)> = rows.iter().map(|r| (r.path_len, r.mems)).collect();
    let want: Vec<(u64, u64)> = TWO_MODE_GRID
        .iter()
        .map(|(n, m)| (2 * *n as u64, 2 * *m as u64))
        .collect();
    ensure!(got == want, "sweep rows {:?}", got);
    let mut how = "interpreter and instrumented source".to_string();
    if let Some(cc) = compiler() {
        let ncfg = InstrumentConfig {
            harness: Some("test".into()),
            ..Default::default()
        };
        let bin = compile(&instrument(&ast, &ncfg).unwrap(), &cc).map_err(|e| e.to_string())?;
        for (n, mode) in TWO_MODE_GRID {
            let runs = bin.run("test", &[n, mode], 1).map_err(|e| e.to_string())?;
            let r = &runs[0];
            ensure!(
                (r.path_len, r.mems) == (2 * n as u64, 2 * mode as u64),
                "native ({}, {})",
                n,
                mode
            );
        }
        how.push_str(" and native");
    }
    Ok(format!("12 rows, len = 2n and mems = 2*mode via {}", how))
}

struct Case {
    name: &'static str,
    domains: &'static [(&'static str, i64, i64)],
    inputs: &'static [&'static [i64]],
}

const CASES: [Case; 10] = [
    Case {
        name: "array",
        domains: &[("n", 0, 6)],
        inputs: &[&[0], &[3], &[6]],
    },
    Case {
        name: "bubble",
        domains: &[("n", 0, 5)],
        inputs: &[&[1], &[4], &[5]],
    },
    Case {
        name: "insertsort",
        domains: &[("n", 0, 5)],
        inputs: &[&[0], &[3], &[5]],
    },
    Case {
        name: "sieve",
        domains: &[("n", 0, 30)],
        inputs: &[&[2], &[17], &[30]],
    },
    Case {
        name: "change",
        domains: &[("amount", 0, 25)],
        inputs: &[&[0], &[7], &[25]],
    },
    Case {
        name: "shell",
        domains: &[("n", 0, 6)],
        inputs: &[&[1], &[5], &[6]],
    },
    Case {
        name: "selection",
        domains: &[("n", 0, 5)],
        inputs: &[&[0], &[2], &[5]],
    },
    Case {
        name: "binsearch",
        domains: &[("n", 0, 6), ("key", -2, 12)],
        inputs: &[&[6, 4], &[6, 5], &[3, -1]],
    },
    Case {
        name: "topo",
        domains: &[("n", 0, 5)],
        inputs: &[&[1], &[4], &[5]],
    },
    Case {
        name: "fwht",
        domains: &[("k", 0, 3)],
        inputs: &[&[0], &[2], &[3]],
    },
];

fn c5_oracle_equivalence() -> Outcome {
    let icfg = InstrumentConfig {
        timer: Timer::None,
        ..Default::default()
    };
    let cc = compiler();
    let mut checked = 0;
    for c in &CASES {
        let p = corpus::get(c.name).ok_or("missing corpus program")?;
        let ast = parse(p.source).unwrap();
        let inst = parse(&instrument(&ast, &icfg).unwrap()).unwrap();
        let d: Domains = c
            .domains
            .iter()
            .map(|(v, lo, hi)| (v.to_string(), (*lo, *hi)))
            .collect();
        let set = enumerate_paths(&ast, p.entry, &d, Limits::default())
            .map_err(|e| format!("{}: {}", c.name, e))?;
        let size: u128 = c
            .domains
            .iter()
            .map(|(_, lo, hi)| (hi - lo + 1) as u128)
            .product();
        let mut total = 0u128;
        for t in &set.paths {
            total += model_count(&t.condition, &d).map_err(|e| e.to_string())?;
        }
        ensure!(
            total == size,
            "{}: path counts sum to {}, domain has {}",
            c.name,
            total,
            size
        );
        let native = match &cc {
            Some(cc) => {
                let ncfg = InstrumentConfig {
                    harness: Some(p.entry.into()),
                    ..Default::default()
                };
                Some(compile(&instrument(&ast, &ncfg).unwrap(), cc).map_err(|e| e.to_string())?)
            }
            None => None,
        };
        let params: Vec<&str> = c.domains.iter().map(|d| d.0).collect();
        for input in c.inputs {
            let (dynamic, _) =
                interpret_with_output(&ast, p.entry, &ints(input), &InterpConfig::emulating(&icfg))
                    .map_err(|e| e.to_string())?;
            let reported = interpret(&inst, p.entry, &ints(input), &InterpConfig::raw())
                .map_err(|e| e.to_string())?;
            ensure!(
                dynamic.mems == reported.mems,
                "{} {:?}: interpreter {} vs instrumented {}",
                c.name,
                input,
                dynamic.mems,
                reported.mems
            );
            if let Some(bin) = &native {
                let r = &bin.run(p.name, input, 1).map_err(|e| e.to_string())?[0];
                ensure!(
                    r.mems == dynamic.mems && r.path_len == dynamic.path_len,
                    "{} {:?}: native {} vs {}",
                    c.name,
                    input,
                    r.mems,
                    dynamic.mems
                );
            }
            let env = |v: &str| input[params.iter().position(|p| *p == v).unwrap()];
            let matched: Vec<_> = set
                .paths
                .iter()
                .filter(|t| t.condition.holds(&env))
                .collect();
            ensure!(
                matched.len() == 1,
                "{} {:?}: {} matching paths",
                c.name,
                input,
                matched.len()
            );
            ensure!(
                matched[0].pind_mems == dynamic.mems,
                "{} {:?}: static pind {} vs dynamic {}",
                c.name,
                input,
                matched[0].pind_mems,
                dynamic.mems
            );
            checked += 1;
        }
    }
    Ok(format!(
        "{} inputs over 10 programs agree{}",
        checked,
        if cc.is_some() {
            ", native included"
        } else {
            ""
        }
    ))
}

fn corpus_rows(names: &[&str]) -> Result<Vec<mems::lab::AnalysisRow>, String> {
    let programs = names
        .iter()
        .map(|n| {
            let p = corpus::get(n).unwrap();
            let param = parse(p.source).unwrap().function(p.entry).unwrap().params[0]
                .name
                .clone();
            ProgramSweep {
                name: p.name.into(),
                source: p.source.into(),
                function: p.entry.into(),
                grid: [(param, p.sizes.iter().map(|s| GridValue::Int(*s)).collect())].into(),
                arrays: Default::default(),
            }
        })
        .collect();
    let spec = SweepSpec {
        executor: Executor::Interpreter,
        repeat: 1,
        max_steps: 500_000_000,
        programs,
    };
    sweep(&spec).map_err(|e| e.to_string())
}

const SIZE_SCALED: [&str; 4] = ["array", "bubble", "insertsort", "sieve"];

fn within_program(rows: &[mems::lab::AnalysisRow]) -> Result<Vec<(String, f64)>, String> {
    SIZE_SCALED
        .iter()
        .map(|p| {
            correlate_within_program(rows, p, TimeMetric::Steps)
                .map(|r| (p.to_string(), r))
                .map_err(|e| format!("{}: {}", p, e))
        })
        .collect()
}

fn c6_within_program() -> Outcome {
    let rows = corpus_rows(&SIZE_SCALED)?;
    for p in SIZE_SCALED {
        let n = rows.iter().filter(|r| r.program == p).count();
        ensure!(n >= 6, "{}: only {} sizes", p, n);
    }
    let rs = within_program(&rows)?;
    for (p, r) in &rs {
        ensure!(*r >= 0.99, "{}: r = {:.6}", p, r);
    }
    Ok(rs
        .iter()
        .map(|(p, r)| format!("{} {:.6}", p, r))
        .collect::<Vec<_>>()
        .join(", "))
}

fn c7_cross_program() -> Outcome {
    let mut names = SIZE_SCALED.to_vec();
    names.push("change");
    let rows = corpus_rows(&names)?;
    let within = within_program(&rows)?;
    let cross = correlate_across_programs(&rows, TimeMetric::Steps).map_err(|e| e.to_string())?;
    let min = within.iter().map(|(_, r)| *r).fold(f64::INFINITY, f64::min);
    let change_max = rows
        .iter()
        .filter(|r| r.program == "change")
        .map(|r| r.mems)
        .max()
        .unwrap_or(0);
    ensure!(
        change_max == 14,
        "change should touch memory 14 times, got {}",
        change_max
    );
    ensure!(
        cross < min,
        "cross-program r {:.6} is not below within-program minimum {:.6}",
        cross,
        min
    );
    Ok(format!(
        "cross-program r {:.6} < min within-program r {:.6}",
        cross, min
    ))
}

fn c8_round_trip() -> Outcome {
    let mut n = 0;
    let configs = [
        InstrumentConfig::default(),
        InstrumentConfig {
            cond_marker: Marker::At,
            timer: Timer::None,
            ..Default::default()
        },
        InstrumentConfig {
            harness: Some("test".into()),
            ..Default::default()
        },
    ];
    for p in corpus::all() {
        let ast = parse(p.source).unwrap();
        let printed = pretty_print(&ast);
        let again = parse(&printed).map_err(|e| format!("{}: {}", p.name, e))?;
        ensure!(
            pretty_print(&again) == printed,
            "{}: printing is not a fixpoint",
            p.name
        );
        for cfg in &configs {
            if cfg.harness.is_some() && p.name != "test" {
                continue;
            }
            let stripped = strip(&instrument(&ast, cfg).unwrap()).map_err(|e| e.to_string())?;
            ensure!(
                stripped == printed,
                "{}: strip(instrument(P)) differs from P",
                p.name
            );
            let back = parse(&stripped).map_err(|e| e.to_string())?;
            ensure!(
                pretty_print(&back) == printed,
                "{}: re-parse differs",
                p.name
            );
            n += 1;
        }
    }
    Ok(format!(
        "{} programs, {} strip checks",
        corpus::all().count(),
        n
    ))
}

fn c9_counter_vs_brute_force() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_901);
    let vars = ["x", "y", "z"];
    let rels = ["<", "<=", ">", ">=", "==", "!="];
    let mut nonzero = 0;
    for case in 0..200 {
        let k = rng.gen_range(1..=3usize);
        let mut boxes = Vec::new();
        let mut budget = 100_000i64;
        for _ in 0..k {
            let width = rng.gen_range(1..=(budget.min(400)));
            budget /= width;
            let lo = rng.gen_range(-200..=200);
            boxes.push((lo, lo + width - 1));
        }
        let m = rng.gen_range(1..=3);
        let mut cons = Vec::new();
        for _ in 0..m {
            let coeffs: Vec<i64> = (0..k).map(|_| rng.gen_range(-5..=5)).collect();
            let c0: i64 = rng.gen_range(-300..=300);
            let rel = rels[rng.gen_range(0..rels.len())];
            cons.push((coeffs, c0, rel));
        }
        let text = cons
            .iter()
            .map(|(cs, c0, rel)| {
                let lhs = cs
                    .iter()
                    .zip(vars)
                    .map(|(c, v)| format!("{} * {}", c, v))
                    .collect::<Vec<_>>()
                    .join(" + ");
                format!("({} {} {})", lhs, rel, c0)
            })
            .collect::<Vec<_>>()
            .join(" && ");
        let cond = PathCondition::from_text(&text).map_err(|e| format!("`{}`: {}", text, e))?;
        let d: Domains = boxes
            .iter()
            .zip(vars)
            .map(|(b, v)| (v.to_string(), *b))
            .collect();
        let fast = model_count(&cond, &d).map_err(|e| e.to_string())?;
        let mut brute = 0u128;
        let mut point = vec![0i64; k];
        let total: i64 = boxes.iter().map(|(lo, hi)| hi - lo + 1).product();
        for idx in 0..total {
            let mut rest = idx;
            for (i, (lo, hi)) in boxes.iter().enumerate() {
                let w = hi - lo + 1;
                point[i] = lo + rest % w;
                rest /= w;
            }
            let ok = cons.iter().all(|(cs, c0, rel)| {
                let lhs: i64 = cs.iter().zip(&point).map(|(c, x)| c * x).sum();
                match *rel {
                    "<" => lhs < *c0,
                    "<=" => lhs <= *c0,
                    ">" => lhs > *c0,
                    ">=" => lhs >= *c0,
                    "==" => lhs == *c0,
                    _ => lhs != *c0,
                }
            });
            brute += u128::from(ok);
        }
        ensure!(
            fast == brute,
            "case {}: `{}` over {:?}: counted {}, enumerated {}",
            case,
            text,
            boxes,
            fast,
            brute
        );
        nonzero += usize::from(brute > 0 && brute < total as u128);
    }
    Ok(format!(
        "200 conjunctions agree ({} strictly between empty and full)",
        nonzero
    ))
}

fn c10_pearson_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let n = rng.gen_range(2..60);
        let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1e3..1e3)).collect();
        let ys: Vec<f64> = (0..n).map(|_| rng.gen_range(-1e3..1e3)).collect();
        let r = pearson(&xs, &ys).map_err(|e| e.to_string())?;
        ensure!((-1.0..=1.0).contains(&r), "vector {}: r = {}", i, r);
        let s = pearson(&ys, &xs).unwrap();
        ensure!(
            (r - s).abs() < 1e-12,
            "vector {}: asymmetric {} vs {}",
            i,
            r,
            s
        );
        let a = rng.gen_range(0.01..100.0);
        let b = rng.gen_range(-1e4..1e4);
        let moved: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
        let t = pearson(&moved, &ys).unwrap();
        ensure!(
            (r - t).abs() < 1e-9,
            "vector {}: affine change {} vs {}",
            i,
            r,
            t
        );
        let line: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
        let neg: Vec<f64> = xs.iter().map(|x| -a * x + b).collect();
        ensure!(
            (pearson(&xs, &line).unwrap() - 1.0).abs() < 1e-12,
            "vector {}: +line",
            i
        );
        ensure!(
            (pearson(&xs, &neg).unwrap() + 1.0).abs() < 1e-12,
            "vector {}: -line",
            i
        );
    }
    Ok("100 random vectors".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "model counts of the two-branch example",
            c1_model_counts,
            Duration::from_secs(1),
        ),
        (
            "frequency-weighted estimate",
            c2_estimator,
            Duration::from_secs(1),
        ),
        (
            "mems counting fixtures",
            c3_mems_fixtures,
            Duration::from_secs(1),
        ),
        (
            "two-mode program len/mems table",
            c4_two_mode_grid,
            Duration::from_secs(5),
        ),
        (
            "oracle equivalence on the benchmark corpus",
            c5_oracle_equivalence,
            Duration::from_secs(60),
        ),
        (
            "within-program correlation of mems and steps",
            c6_within_program,
            Duration::from_secs(60),
        ),
        (
            "cross-program correlation is weaker",
            c7_cross_program,
            Duration::from_secs(60),
        ),
        (
            "round trip and strip",
            c8_round_trip,
            Duration::from_secs(10),
        ),
        (
            "model counter against brute force",
            c9_counter_vs_brute_force,
            Duration::from_secs(30),
        ),
        (
            "pearson properties",
            c10_pearson_properties,
            Duration::from_secs(5),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > *budget => Err(format!(
                "{} but took {:.2?} (budget {:?})",
                detail, took, budget
            )),
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {} ({:.2?}): {}",
                i + 1,
                name,
                took,
                detail
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {} ({:.2?}): {}",
                    i + 1,
                    name,
                    took,
                    why
                );
            }
        }
    }
    if failed > 0 {
        println!("{} of 10 criteria failed", failed);
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
