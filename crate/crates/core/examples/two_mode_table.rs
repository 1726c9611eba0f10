//! Path length and memory accesses of the two-mode loop for a grid of
//! `n` and `mode`, measured by the interpreter. Every row satisfies
//! `len = 2n` and `mems = 2 * mode`.
//!
//! `cargo run --example two_mode_table`

use mems::cfront::parse;
use mems::corpus;
use mems::dynexec::{interpret, Arg, InterpConfig};

fn main() {
    let ast = parse(corpus::TEST.source).unwrap();
    println!(
        "{:<12}{:>6}{:>8}{:>8}{:>8}",
        "input", "len", "mems", "mode", "steps"
    );
    for n in [10, 50, 100, 500] {
        for mode in [0, n / 2, n] {
            let r = interpret(
                &ast,
                "test",
                &[Arg::Int(n), Arg::Int(mode)],
                &InterpConfig::default(),
            )
            .expect("runs to completion");
            println!(
                "{:<12}{:>6}{:>8}{:>8}{:>8}",
                format!("n={}", n),
                r.path_len,
                r.mems,
                mode,
                r.steps.unwrap_or(0)
            );
        }
    }
}
