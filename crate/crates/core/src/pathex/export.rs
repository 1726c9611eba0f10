//! Line-oriented paths file.
//!
//! ```text
//! #mems-paths 1
//! fn test
//! domain mode 0 3
//! domain n 3 3
//! truncated false
//! path 0  len 6  pind 6  decisions TTTTTT  cond (0 < n) && (mode > 0) && ...
//! ```
//!
//! Fields of a `path` record are tab-separated `key value` pairs.

use std::fmt::Write as _;

use crate::countest::Domains;

use super::sym::PathCondition;
use super::PathSet;

const MAGIC: &str = "#mems-paths 1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathRecord {
    pub id: usize,
    pub path_len: u64,
    pub pind: u64,
    pub decisions: String,
    pub condition: PathCondition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathsFile {
    pub function: String,
    pub domains: Domains,
    pub truncated: bool,
    pub paths: Vec<PathRecord>,
}

pub fn write_paths(set: &PathSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", MAGIC);
    let _ = writeln!(out, "fn {}", set.function);
    for (v, (lo, hi)) in &set.domains {
        let _ = writeln!(out, "domain {} {} {}", v, lo, hi);
    }
    let _ = writeln!(out, "truncated {}", set.truncated);
    for p in &set.paths {
        let _ = writeln!(
            out,
            "path {}\tlen {}\tpind {}\tdecisions {}\tcond {}",
            p.id,
            p.path_len,
            p.pind_mems,
            p.decision_string(),
            p.condition.text()
        );
    }
    out
}

pub fn read_paths(text: &str) -> Result<PathsFile, String> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim_end() == MAGIC => {}
        _ => return Err(format!("line 1: expected `{}`", MAGIC)),
    }
    let mut file = PathsFile {
        function: String::new(),
        domains: Domains::new(),
        truncated: false,
        paths: Vec::new(),
    };
    for (i, line) in lines {
        let at = |msg: &str| format!("line {}: {}", i + 1, msg);
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(' ').ok_or_else(|| at("malformed line"))?;
        match key {
            "fn" => file.function = rest.trim().to_string(),
            "domain" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [v, lo, hi] = parts[..] else {
                    return Err(at("expected `domain <var> <lo> <hi>`"));
                };
                let lo = lo.parse().map_err(|_| at("bad lower bound"))?;
                let hi = hi.parse().map_err(|_| at("bad upper bound"))?;
                file.domains.insert(v.to_string(), (lo, hi));
            }
            "truncated" => {
                file.truncated = rest
                    .trim()
                    .parse()
                    .map_err(|_| at("expected true or false"))?
            }
            "path" => {
                let fields: Vec<&str> = line.split('\t').collect();
                let get = |name: &str| -> Result<&str, String> {
                    fields
                        .iter()
                        .find_map(|f| f.strip_prefix(name).and_then(|r| r.strip_prefix(' ')))
                        .ok_or_else(|| at(&format!("missing `{}` field", name)))
                };
                let num = |name: &str| -> Result<u64, String> {
                    get(name)?
                        .trim()
                        .parse()
                        .map_err(|_| at(&format!("bad `{}` value", name)))
                };
                file.paths.push(PathRecord {
                    id: num("path")? as usize,
                    path_len: num("len")?,
                    pind: num("pind")?,
                    decisions: get("decisions")?.to_string(),
                    condition: PathCondition::from_text(get("cond")?).map_err(|e| at(&e))?,
                });
            }
            _ => return Err(at(&format!("unknown record `{}`", key))),
        }
    }
    if file.function.is_empty() {
        return Err("missing `fn` record".into());
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfront::parse;
    use crate::pathex::{enumerate_paths, Limits};

    #[test]
    fn write_then_read() {
        let ast = parse("int f(int x, int y) { if (x + y > 3) { return 1; } if (x == y) { return 2; } return 0; }").unwrap();
        let d: Domains = [("x".to_string(), (0, 4)), ("y".to_string(), (-2, 2))].into();
        let set = enumerate_paths(&ast, "f", &d, Limits::default()).unwrap();
        let text = write_paths(&set);
        assert!(text.starts_with(
            "#mems-paths 1\nfn f\ndomain x 0 4\ndomain y -2 2\ntruncated false\npath 0\t"
        ));
        let back = read_paths(&text).unwrap();
        assert_eq!(back.domains, d);
        assert_eq!(back.paths.len(), set.paths.len());
        for (r, p) in back.paths.iter().zip(&set.paths) {
            assert_eq!(r.condition, p.condition);
            assert_eq!(r.decisions, p.decision_string());
            assert_eq!((r.path_len, r.pind), (p.path_len, p.pind_mems));
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_paths("hello").is_err());
        assert!(
            read_paths("#mems-paths 1\nfn f\npath 0\tlen x\tpind 0\tdecisions -\tcond 1\n")
                .is_err()
        );
    }
}
