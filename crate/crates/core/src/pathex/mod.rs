//! Path enumeration by bounded symbolic execution.
//!
//! Scalar parameters of the analysed function become symbolic inputs with
//! bounded domains. Every branch whose outcome depends on the inputs forks
//! the exploration; each path comes back with its condition, the number of
//! branch entries the instrumented program would log (`path_len`), and the
//! mems it performs (`pind_mems`).
//!
//! Arrays declared inside the function are tracked element by element, so
//! sorts over locally generated data are handled. The contents of array
//! parameters are unknown: reading them is fine, branching on them is a
//! [`PathexError::DataDependentBranch`].
//!
//! Only the analysed function's own branches and accesses are attributed to
//! the path, the same way each instrumented function reports its own
//! counters. Callees still add constraints when they branch on inputs.

mod exec;
mod export;
mod sym;

use crate::cfront::Ast;
use crate::countest::{CountError, Domains};

pub use export::{read_paths, write_paths, PathRecord, PathsFile};
pub use sym::{apply_binop, split_and, Affine, Constraint, PathCondition, Rel, SymExpr, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    /// Pre-order index of the `if`/`for`/`while` statement in the function.
    pub site: usize,
    pub text: String,
    pub taken: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTrace {
    pub id: usize,
    pub function: String,
    pub decisions: Vec<Decision>,
    pub path_len: u64,
    pub pind_mems: u64,
    pub condition: PathCondition,
}

impl PathTrace {
    /// `T`/`F` per logged decision, `-` when there are none.
    pub fn decision_string(&self) -> String {
        if self.decisions.is_empty() {
            return "-".into();
        }
        self.decisions
            .iter()
            .map(|d| if d.taken { 'T' } else { 'F' })
            .collect()
    }

    /// The branch lines the instrumented program prints along this path.
    pub fn trace_lines(&self, marker: char) -> Vec<String> {
        self.decisions
            .iter()
            .map(|d| {
                if d.taken {
                    format!("{}({})", marker, d.text)
                } else {
                    format!("{}(!({}))", marker, d.text)
                }
            })
            .collect()
    }
}

pub fn path_pind(trace: &PathTrace) -> u64 {
    trace.pind_mems
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_paths: usize,
    /// Iterations per loop entry.
    pub max_loop_unroll: usize,
    /// Call depth, counting the analysed function.
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_paths: 10_000,
            max_loop_unroll: 1_000,
            max_depth: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSet {
    pub function: String,
    pub domains: Domains,
    pub paths: Vec<PathTrace>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathexError {
    #[error("function `{0}` not found")]
    FunctionNotFound(String),
    #[error("more than {} paths; {} reported", .0.paths.len(), .0.paths.len())]
    PathLimitExceeded(Box<PathSet>),
    #[error("a loop exceeded the unroll limit; {} complete paths reported", .0.paths.len())]
    UnrollLimitExceeded(Box<PathSet>),
    #[error("branch or index depends on array contents: `{0}`")]
    DataDependentBranch(String),
    #[error("input `{0}` has no bounded domain")]
    UnboundedDomain(String),
    #[error("domain given for `{0}`, which is not a scalar parameter")]
    UnknownVariable(String),
    #[error("bad precondition: {0}")]
    BadPrecondition(String),
    #[error("call depth limit {0} reached")]
    RecursionLimit(usize),
    #[error("{0}")]
    Count(CountError),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl PathexError {
    /// Partial results carried by the limit errors.
    pub fn partial(&self) -> Option<&PathSet> {
        match self {
            PathexError::PathLimitExceeded(s) | PathexError::UnrollLimitExceeded(s) => Some(s),
            _ => None,
        }
    }
}

pub fn enumerate_paths(
    ast: &Ast,
    function: &str,
    domains: &Domains,
    limits: Limits,
) -> Result<PathSet, PathexError> {
    enumerate_paths_assuming(ast, function, domains, limits, None)
}

/// As [`enumerate_paths`], restricted to inputs satisfying `precondition`,
/// a `&&`-conjunction over parameter names such as `x > 20 && x <= 100`.
pub fn enumerate_paths_assuming(
    ast: &Ast,
    function: &str,
    domains: &Domains,
    limits: Limits,
    precondition: Option<&str>,
) -> Result<PathSet, PathexError> {
    let f = ast
        .function(function)
        .ok_or_else(|| PathexError::FunctionNotFound(function.to_string()))?;
    for p in f.params.iter().filter(|p| !p.is_array()) {
        if !domains.contains_key(&p.name) {
            return Err(PathexError::UnboundedDomain(p.name.clone()));
        }
    }
    for v in domains.keys() {
        if !f.params.iter().any(|p| !p.is_array() && &p.name == v) {
            return Err(PathexError::UnknownVariable(v.clone()));
        }
    }
    let pre = match precondition {
        Some(text) => PathCondition::from_text(text).map_err(PathexError::BadPrecondition)?,
        None => PathCondition::default(),
    };
    for v in pre.vars() {
        if !domains.contains_key(&v) {
            return Err(PathexError::BadPrecondition(format!(
                "unknown variable `{}`",
                v
            )));
        }
    }

    let sites = exec::number_sites(f);
    let mut set = PathSet {
        function: function.to_string(),
        domains: domains.clone(),
        paths: Vec::new(),
        truncated: false,
    };
    let mut unroll_hit = false;
    let mut prefix = Vec::new();
    loop {
        let mut run = exec::Run::new(ast, domains, &limits, &sites, &prefix, &pre);
        match run.go(f) {
            Ok(mut trace) => {
                if set.paths.len() == limits.max_paths {
                    set.truncated = true;
                    return Err(PathexError::PathLimitExceeded(Box::new(set)));
                }
                trace.id = set.paths.len();
                set.paths.push(trace);
            }
            Err(exec::Stop::Prune) => {}
            Err(exec::Stop::Unroll) => unroll_hit = true,
            Err(exec::Stop::Fail(e)) => return Err(e),
        }
        match exec::next_prefix(&run.log) {
            Some(p) => prefix = p,
            None => break,
        }
    }
    if unroll_hit {
        set.truncated = true;
        return Err(PathexError::UnrollLimitExceeded(Box::new(set)));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfront::parse;
    use crate::countest::model_count;

    const TWO_MODE: &str = "void test(int n, int mode) {
    int arr[n], a = 0, b = 0;
    for(int i = 0; i < n; i++) {
        if(mode > 0) {
            arr[i] = i * 2 + arr[i];
            mode = mode - 1;
        } else {
            b = i * 3 + b;
            mode = mode - 1;
        }
    }
}";

    fn doms(spec: &[(&str, i64, i64)]) -> Domains {
        spec.iter()
            .map(|(v, lo, hi)| (v.to_string(), (*lo, *hi)))
            .collect()
    }

    #[test]
    fn two_paths_with_precondition() {
        let ast =
            parse("int f(int x) { if (x - 10 > 30) { return 1; } else { return 0; } }").unwrap();
        let d = doms(&[("x", -1000, 1000)]);
        let set =
            enumerate_paths_assuming(&ast, "f", &d, Limits::default(), Some("x > 20 && x <= 100"))
                .unwrap();
        assert_eq!(set.paths.len(), 2);
        assert_eq!(
            set.paths[0].condition.text(),
            "(x > 20) && (x <= 100) && (x - 10 > 30)"
        );
        assert_eq!(
            set.paths[1].condition.text(),
            "(x > 20) && (x <= 100) && (x - 10 <= 30)"
        );
        assert_eq!(model_count(&set.paths[0].condition, &d), Ok(60));
        assert_eq!(model_count(&set.paths[1].condition, &d), Ok(20));
        assert!(set
            .paths
            .iter()
            .all(|p| p.pind_mems == 0 && p.path_len == 1));
    }

    #[test]
    fn straight_line_has_one_path() {
        let ast = parse("int f(int x) { int y = x + 1; return y * 2; }").unwrap();
        let set = enumerate_paths(&ast, "f", &doms(&[("x", 0, 9)]), Limits::default()).unwrap();
        assert_eq!(set.paths.len(), 1);
        assert_eq!(set.paths[0].path_len, 0);
        assert_eq!(set.paths[0].condition.text(), "1");
    }

    #[test]
    fn two_mode_paths() {
        let ast = parse(TWO_MODE).unwrap();
        let d = doms(&[("n", 3, 3), ("mode", 0, 3)]);
        let set = enumerate_paths(&ast, "test", &d, Limits::default()).unwrap();
        assert_eq!(set.paths.len(), 4);
        let mut by_pind: Vec<(u64, u64)> = set
            .paths
            .iter()
            .map(|p| (p.pind_mems, p.path_len))
            .collect();
        by_pind.sort();
        assert_eq!(by_pind, vec![(0, 6), (2, 6), (4, 6), (6, 6)]);
        let total: u128 = set
            .paths
            .iter()
            .map(|p| model_count(&p.condition, &d).unwrap())
            .sum();
        assert_eq!(total, 4);
        let two = set
            .paths
            .iter()
            .find(|p| p.condition.holds(&|v| if v == "n" { 3 } else { 2 }))
            .unwrap();
        assert_eq!((two.path_len, two.pind_mems), (6, 4));
        assert_eq!(two.decision_string(), "TTTTTF");
    }

    #[test]
    fn symbolic_loop_bound_and_order() {
        let ast =
            parse("int f(int n) { int s = 0; while (s < n) { s = s + 1; } return s; }").unwrap();
        let set = enumerate_paths(&ast, "f", &doms(&[("n", 0, 3)]), Limits::default()).unwrap();
        let lens: Vec<u64> = set.paths.iter().map(|p| p.path_len).collect();
        // True before false: longer unrollings come first.
        assert_eq!(lens, vec![3, 2, 1, 0]);
    }

    #[test]
    fn limits_report_partial_results() {
        let ast =
            parse("int f(int n) { int s = 0; while (s < n) { s = s + 1; } return s; }").unwrap();
        let d = doms(&[("n", 0, 50)]);
        let lim = Limits {
            max_loop_unroll: 5,
            ..Limits::default()
        };
        let e = enumerate_paths(&ast, "f", &d, lim).unwrap_err();
        assert!(matches!(e, PathexError::UnrollLimitExceeded(_)));
        assert!(e.partial().unwrap().truncated);
        assert_eq!(e.partial().unwrap().paths.len(), 6);
        let lim = Limits {
            max_paths: 3,
            ..Limits::default()
        };
        let e = enumerate_paths(&ast, "f", &d, lim).unwrap_err();
        assert!(matches!(e, PathexError::PathLimitExceeded(_)));
        assert_eq!(e.partial().unwrap().paths.len(), 3);
    }

    #[test]
    fn array_parameter_branch_is_rejected() {
        let ast = parse("int f(int a[], int n) { if (a[0] > n) { return 1; } return 0; }").unwrap();
        let e = enumerate_paths(&ast, "f", &doms(&[("n", 0, 3)]), Limits::default()).unwrap_err();
        assert_eq!(e, PathexError::DataDependentBranch("a[0] > n".into()));
        let ast = parse("int f(int a[], int n) { return a[n] + a[0]; }").unwrap();
        let set = enumerate_paths(&ast, "f", &doms(&[("n", 0, 3)]), Limits::default()).unwrap();
        assert_eq!(set.paths[0].pind_mems, 2);
    }

    #[test]
    fn missing_domain() {
        let ast = parse("int f(int x, int y) { return x; }").unwrap();
        let e = enumerate_paths(&ast, "f", &doms(&[("x", 0, 1)]), Limits::default()).unwrap_err();
        assert_eq!(e, PathexError::UnboundedDomain("y".into()));
    }

    #[test]
    fn short_circuit_counts_only_evaluated_reads() {
        let src = "int f(int k) { int a[3] = {5, 6, 7}; int j = k; int c = 0; while (j >= 0 && a[j] > 5) { j = j - 1; c = c + 1; } return c; }";
        let ast = parse(src).unwrap();
        let set = enumerate_paths(&ast, "f", &doms(&[("k", -1, 2)]), Limits::default()).unwrap();
        for p in &set.paths {
            let k = (-1..=2).find(|&k| p.condition.holds(&|_| k)).unwrap();
            // Reads: one per evaluation of a[j] (only when j >= 0).
            let mut j = k;
            let mut reads = 0;
            let a = [5, 6, 7];
            while j >= 0 && {
                reads += 1;
                a[j as usize] > 5
            } {
                j -= 1;
            }
            assert_eq!(p.pind_mems, reads, "k = {}", k);
        }
    }
}
