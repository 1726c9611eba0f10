//! Static pipeline on a two-branch function: enumerate paths under a
//! precondition, count the inputs reaching each one, weight a per-path cost.
//!
//! `cargo run --example worked_example`

use mems::cfront::parse;
use mems::countest::{estimate_performance, model_count, Domains};
use mems::pathex::{enumerate_paths_assuming, Limits};

fn main() {
    let ast = parse(include_str!("data/twobranch.c")).expect("example parses");
    let domains: Domains = [("x".to_string(), (-1000, 1000))].into();
    let set = enumerate_paths_assuming(
        &ast,
        "classify",
        &domains,
        Limits::default(),
        Some("x > 20 && x <= 100"),
    )
    .expect("two paths");

    let mut weighted = Vec::new();
    for p in &set.paths {
        let delta = model_count(&p.condition, &domains).expect("affine condition");
        println!(
            "path {} [{}]  delta = {:>3}  {}",
            p.id,
            p.decision_string(),
            delta,
            p.condition.text()
        );
        weighted.push(delta);
    }

    // Costs attached by hand: 3 memory accesses on the taken branch, 2 on the other.
    let est = estimate_performance(&[(weighted[0], 3), (weighted[1], 2)]).unwrap();
    println!("estimate: {}", est.render());
}
