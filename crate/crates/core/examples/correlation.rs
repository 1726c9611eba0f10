//! Sweeps four corpus programs over their default sizes and compares the
//! within-program correlation of mems against interpreter steps with the
//! correlation over all rows pooled together.
//!
//! `cargo run --release --example correlation`

use std::collections::BTreeMap;

use mems::cfront::parse;
use mems::corpus;
use mems::lab::{
    correlate_across_programs, correlate_within_program, strength, sweep, Executor, GridValue,
    ProgramSweep, SweepSpec, TimeMetric,
};

fn main() {
    let names = ["array", "insertsort", "sieve", "change"];
    let programs = names
        .iter()
        .map(|name| {
            let p = corpus::get(name).unwrap();
            let size = parse(p.source).unwrap().function(p.entry).unwrap().params[0]
                .name
                .clone();
            ProgramSweep {
                name: p.name.into(),
                source: p.source.into(),
                function: p.entry.into(),
                grid: BTreeMap::from([(
                    size,
                    p.sizes.iter().map(|&s| GridValue::Int(s)).collect(),
                )]),
                arrays: BTreeMap::new(),
            }
        })
        .collect();
    let spec = SweepSpec {
        executor: Executor::Interpreter,
        repeat: 1,
        max_steps: 500_000_000,
        programs,
    };
    let rows = sweep(&spec).expect("sweep");

    for name in names {
        match correlate_within_program(&rows, name, TimeMetric::Steps) {
            Ok(r) => println!("{:<12} r = {:.6}  {}", name, r, strength(r)),
            // `change` touches memory a fixed number of times.
            Err(e) => println!("{:<12} {}", name, e),
        }
    }
    let all = correlate_across_programs(&rows, TimeMetric::Steps).unwrap();
    println!("{:<12} r = {:.6}  {}", "(pooled)", all, strength(all));
}
