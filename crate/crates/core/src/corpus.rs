//! Built-in C programs: the two-mode example `test` and ten benchmarks.
//!
//! Every entry function takes scalar arguments only, with the input size
//! first, and builds its arrays itself.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Program {
    pub name: &'static str,
    pub source: &'static str,
    /// Entry function; always named like the program.
    pub entry: &'static str,
    /// Input sizes used by the default sweeps.
    pub sizes: &'static [i64],
}

macro_rules! program {
    ($name:literal, $sizes:expr) => {
        Program {
            name: $name,
            source: include_str!(concat!("../corpus/", $name, ".c")),
            entry: $name,
            sizes: $sizes,
        }
    };
}

pub const TEST: Program = program!("test", &[10, 50, 100, 500]);

pub const BENCHMARKS: [Program; 10] = [
    program!("array", &[50, 100, 200, 400, 800, 1600]),
    program!("bubble", &[10, 20, 40, 60, 80, 100]),
    program!("insertsort", &[50, 100, 150, 200, 300, 400]),
    program!("sieve", &[100, 500, 1000, 2000, 5000, 10000]),
    program!("change", &[10, 20, 50, 100, 150, 200]),
    program!("shell", &[50, 100, 200, 400, 800, 1600]),
    program!("selection", &[10, 20, 40, 60, 80, 100]),
    program!("binsearch", &[10, 100, 1000, 5000, 10000, 20000]),
    program!("topo", &[5, 10, 20, 30, 40, 50]),
    program!("fwht", &[2, 4, 6, 8, 10, 12]),
];

/// Looks a program up by name, `test` included.
pub fn get(name: &str) -> Option<Program> {
    std::iter::once(TEST)
        .chain(BENCHMARKS)
        .find(|p| p.name == name)
}

pub fn all() -> impl Iterator<Item = Program> {
    std::iter::once(TEST).chain(BENCHMARKS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfront::{parse, pretty_print};

    #[test]
    fn every_program_parses_and_has_its_entry() {
        for p in all() {
            let ast = parse(p.source).unwrap_or_else(|e| panic!("{}: {:?}", p.name, e));
            let f = ast.function(p.entry).expect(p.name);
            assert!(f.params.iter().all(|q| !q.is_array()), "{}", p.name);
            let again = parse(&pretty_print(&ast)).unwrap();
            assert_eq!(pretty_print(&again), pretty_print(&ast));
        }
        assert_eq!(get("sieve").unwrap().entry, "sieve");
        assert!(get("nope").is_none());
    }
}
