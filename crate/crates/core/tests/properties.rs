use proptest::prelude::*;

use mems::cfront::{expr_to_string, parse, parse_expr, pretty_print};
use mems::countest::{decimal, estimate_performance, model_count, Domains};
use mems::instrument::{instrument, strip, InstrumentConfig};
use mems::lab::{pearson, Bucket};
use mems::pathex::PathCondition;

fn series(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e4..1e4f64, n)
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..40).prop_flat_map(|n| (series(n), series(n)))
}

proptest! {
    #[test]
    fn pearson_is_bounded_and_symmetric((xs, ys) in pair()) {
        if let Ok(r) = pearson(&xs, &ys) {
            prop_assert!((-1.0..=1.0).contains(&r));
            let s = pearson(&ys, &xs).unwrap();
            prop_assert!((r - s).abs() < 1e-12);
        }
    }

    #[test]
    fn pearson_ignores_positive_affine_maps((xs, ys) in pair(), a in 0.001..1e3f64, b in -1e5..1e5f64) {
        if let Ok(r) = pearson(&xs, &ys) {
            let moved: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
            let flipped: Vec<f64> = xs.iter().map(|x| -a * x + b).collect();
            prop_assert!((pearson(&moved, &ys).unwrap() - r).abs() < 1e-9);
            prop_assert!((pearson(&flipped, &ys).unwrap() + r).abs() < 1e-9);
        }
    }

    #[test]
    fn every_count_has_exactly_one_bucket(m in any::<u64>()) {
        let b = Bucket::of(m);
        let (lo, hi) = b.bounds();
        prop_assert!(lo <= m);
        prop_assert!(hi.is_none_or(|h| m < h));
        let holders = Bucket::ALL
            .iter()
            .filter(|c| {
                let (lo, hi) = c.bounds();
                lo <= m && hi.is_none_or(|h| m < h)
            })
            .count();
        prop_assert_eq!(holders, 1);
    }

    #[test]
    fn counting_matches_enumeration(
        a in -4i64..=4, b in -4i64..=4, c in -60i64..=60,
        d in -4i64..=4, e in -4i64..=4, f in -60i64..=60,
        xlo in -30i64..=30, xw in 1i64..=40, ylo in -30i64..=30, yw in 1i64..=40,
        r1 in 0usize..6, r2 in 0usize..6,
    ) {
        const RELS: [&str; 6] = ["<", "<=", ">", ">=", "==", "!="];
        let text = format!(
            "({a} * x + {b} * y {} {c}) && ({d} * x + {e} * y {} {f})",
            RELS[r1], RELS[r2]
        );
        let cond = PathCondition::from_text(&text).unwrap();
        let doms: Domains = [("x".to_string(), (xlo, xlo + xw - 1)), ("y".to_string(), (ylo, ylo + yw - 1))].into();
        let rel = |i: usize, l: i64, r: i64| match i {
            0 => l < r,
            1 => l <= r,
            2 => l > r,
            3 => l >= r,
            4 => l == r,
            _ => l != r,
        };
        let mut brute = 0u128;
        for x in xlo..xlo + xw {
            for y in ylo..ylo + yw {
                if rel(r1, a * x + b * y, c) && rel(r2, d * x + e * y, f) {
                    brute += 1;
                }
            }
        }
        prop_assert_eq!(model_count(&cond, &doms).unwrap(), brute);
    }

    #[test]
    fn estimate_is_the_weighted_mean(paths in prop::collection::vec((1u128..1000, 0u64..1000), 1..8)) {
        let est = estimate_performance(&paths).unwrap();
        let num: u128 = paths.iter().map(|(d, p)| d * *p as u128).sum();
        let den: u128 = paths.iter().map(|(d, _)| d).sum();
        prop_assert_eq!(est.fraction_text(), format!("{}/{}", num, den));
        let approx: f64 = est.decimal(6).parse().unwrap();
        prop_assert!((approx - num as f64 / den as f64).abs() <= 5e-7 + 1e-12);
        let lo = paths.iter().map(|p| p.1).min().unwrap() as f64;
        let hi = paths.iter().map(|p| p.1).max().unwrap() as f64;
        prop_assert!(lo <= approx + 1e-6 && approx <= hi + 1e-6);
    }

    #[test]
    fn decimal_agrees_with_integer_division(num in 0u128..1_000_000, den in 1u128..10_000) {
        let d = decimal(num, den, 0);
        let want = (2 * num + den) / (2 * den);
        prop_assert_eq!(d, want.to_string());
    }

    #[test]
    fn parser_never_panics(src in "[ -~\n]{0,80}") {
        let _ = parse(&src);
    }

    #[test]
    fn token_soup_parses_or_diagnoses(toks in prop::collection::vec(prop::sample::select(vec![
        "int", "void", "if", "else", "for", "while", "return", "x", "a", "f", "0", "7",
        "(", ")", "{", "}", "[", "]", ";", ",", "=", "+", "-", "*", "/", "%", "<", "==", "&&", "||", "!", "++", "+=", "*p", "&",
    ]), 0..40)) {
        let src = toks.join(" ");
        if let Ok(ast) = parse(&src) {
            let printed = pretty_print(&ast);
            let again = parse(&printed).unwrap();
            prop_assert_eq!(pretty_print(&again), printed);
        }
    }

    #[test]
    fn printed_expressions_reparse_to_themselves(e in expr(3)) {
        let once = expr_to_string(&parse_expr(&e).unwrap());
        let twice = expr_to_string(&parse_expr(&once).unwrap());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn instrumenting_a_loop_program_strips_back(bound in 1i64..50, k in 1i64..9, cmp in 0usize..4) {
        const CMPS: [&str; 4] = ["<", "<=", ">", "!="];
        let src = format!(
            "int g(int n, int a[]) {{ int s = 0; for (int i = 0; i < n; i++) {{ if (i % {k} {} {bound}) {{ s += a[i]; }} else {{ a[i] = s; }} }} while (s > {bound}) {{ s = s / 2; }} return s; }}",
            CMPS[cmp]
        );
        let ast = parse(&src).unwrap();
        let printed = pretty_print(&ast);
        let inst = instrument(&ast, &InstrumentConfig::default()).unwrap();
        prop_assert_eq!(strip(&inst).unwrap(), printed);
    }
}

fn expr(depth: u32) -> BoxedStrategy<String> {
    let leaf = prop_oneof![
        (0i64..100).prop_map(|v| v.to_string()),
        prop::sample::select(vec!["x", "y", "n"]).prop_map(str::to_string),
        (prop::sample::select(vec!["a", "b"]), 0i64..5).prop_map(|(a, i)| format!("{}[{}]", a, i)),
    ];
    if depth == 0 {
        return leaf.boxed();
    }
    let ops = vec!["+", "-", "*", "/", "%", "<", "<=", "==", "!=", "&&", "||"];
    prop_oneof![
        leaf,
        (expr(depth - 1), prop::sample::select(ops), expr(depth - 1))
            .prop_map(|(l, op, r)| format!("({} {} {})", l, op, r)),
        expr(depth - 1).prop_map(|e| format!("-({})", e)),
        expr(depth - 1).prop_map(|e| format!("!({})", e)),
    ]
    .boxed()
}
