//! Dynamic execution: a MiniC interpreter that reproduces the output of the
//! instrumented program, a parser for that output, and a runner for natively
//! compiled instrumented code.

mod interp;
mod native;
mod output;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use interp::{
    format_printf, interpret, interpret_with_output, InterpConfig, PrintfArg, RunError,
    RunErrorKind,
};
pub use native::{compile, run_native, Compiled, NativeError, DEFAULT_COMPILE_CMD, DEFAULT_REPEAT};
pub use output::{parse_run_output, OutputBlock, OutputFormatMismatch, ParsedRun};

/// Scalar arguments and named array generators read back from an input field.
pub type ParsedInput = (Vec<i64>, Vec<(String, ArrayGen)>);

/// Initial contents for an array argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArrayGen {
    Values(Vec<i64>),
    /// `0, 1, ..., len-1`
    Sorted(usize),
    /// `len-1, ..., 1, 0`
    Reversed(usize),
    Const {
        len: usize,
        value: i64,
    },
    /// Uniform in `[0, max)` from a ChaCha8 stream seeded with `seed`.
    Random {
        len: usize,
        seed: u64,
        max: i64,
    },
}

pub const DEFAULT_RANDOM_MAX: i64 = 1000;

impl ArrayGen {
    pub fn generate(&self) -> Vec<i64> {
        match self {
            ArrayGen::Values(v) => v.clone(),
            ArrayGen::Sorted(n) => (0..*n as i64).collect(),
            ArrayGen::Reversed(n) => (0..*n as i64).rev().collect(),
            ArrayGen::Const { len, value } => vec![*value; *len],
            ArrayGen::Random { len, seed, max } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*len).map(|_| rng.gen_range(0..(*max).max(1))).collect()
            }
        }
    }
}

impl fmt::Display for ArrayGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrayGen::Values(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
            ArrayGen::Sorted(n) => write!(f, "sorted:{}", n),
            ArrayGen::Reversed(n) => write!(f, "reversed:{}", n),
            ArrayGen::Const { len, value } => write!(f, "const:{}:{}", len, value),
            ArrayGen::Random { len, seed, max } if *max == DEFAULT_RANDOM_MAX => {
                write!(f, "random:{}:{}", len, seed)
            }
            ArrayGen::Random { len, seed, max } => write!(f, "random:{}:{}:{}", len, seed, max),
        }
    }
}

impl FromStr for ArrayGen {
    type Err = String;

    /// `sorted:N`, `reversed:N`, `const:N:V`, `random:N:SEED[:MAX]`, or a
    /// value list `1,2,3` (brackets optional).
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let bad = || format!("bad array generator `{}`", s);
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<i64, String> {
            parts
                .get(i)
                .ok_or_else(bad)?
                .trim()
                .parse()
                .map_err(|_| bad())
        };
        let len =
            |i: usize| -> Result<usize, String> { usize::try_from(num(i)?).map_err(|_| bad()) };
        match parts[0] {
            "sorted" if parts.len() == 2 => Ok(ArrayGen::Sorted(len(1)?)),
            "reversed" if parts.len() == 2 => Ok(ArrayGen::Reversed(len(1)?)),
            "const" if parts.len() == 3 => Ok(ArrayGen::Const {
                len: len(1)?,
                value: num(2)?,
            }),
            "random" if parts.len() == 3 || parts.len() == 4 => Ok(ArrayGen::Random {
                len: len(1)?,
                seed: u64::try_from(num(2)?).map_err(|_| bad())?,
                max: if parts.len() == 4 {
                    num(3)?
                } else {
                    DEFAULT_RANDOM_MAX
                },
            }),
            _ => {
                let body = s.trim_start_matches('[').trim_end_matches(']');
                if body.trim().is_empty() {
                    return Ok(ArrayGen::Values(Vec::new()));
                }
                body.split(',')
                    .map(|x| x.trim().parse().map_err(|_| bad()))
                    .collect::<Result<_, _>>()
                    .map(ArrayGen::Values)
            }
        }
    }
}

/// One argument of the entry function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Int(i64),
    Array(ArrayGen),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Interpreter,
    Native,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Interpreter => "interpreter",
            Source::Native => "native",
        })
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "interpreter" => Ok(Source::Interpreter),
            "native" => Ok(Source::Native),
            _ => Err(format!("unknown source `{}`", s)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub program: String,
    pub input: Vec<i64>,
    /// Array arguments as `(parameter, generator)`.
    pub arrays: Vec<(String, ArrayGen)>,
    pub source: Source,
    pub path_len: u64,
    pub mems: u64,
    pub time_ms: Option<f64>,
    pub steps: Option<u64>,
    /// Branch lines logged by the entry function.
    pub trace: Option<Vec<String>>,
}

impl RunRecord {
    /// Scalars separated by spaces, then `name=generator` per array.
    pub fn input_text(&self) -> String {
        let mut parts: Vec<String> = self.input.iter().map(|x| x.to_string()).collect();
        parts.extend(self.arrays.iter().map(|(n, g)| format!("{}={}", n, g)));
        parts.join(" ")
    }

    pub fn parse_input(text: &str) -> Result<ParsedInput, String> {
        let mut ints = Vec::new();
        let mut arrays = Vec::new();
        for tok in text.split_whitespace() {
            match tok.split_once('=') {
                Some((n, g)) => arrays.push((n.to_string(), g.parse()?)),
                None => ints.push(
                    tok.parse()
                        .map_err(|_| format!("bad input value `{}`", tok))?,
                ),
            }
        }
        Ok((ints, arrays))
    }
}

pub const CSV_HEADER: [&str; 7] = [
    "program", "input", "source", "path_len", "mems", "time_ms", "steps",
];

pub fn write_records_csv(records: &[RunRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in records {
        w.write_record([
            r.program.clone(),
            r.input_text(),
            r.source.to_string(),
            r.path_len.to_string(),
            r.mems.to_string(),
            r.time_ms.map(|t| format!("{:.6}", t)).unwrap_or_default(),
            r.steps.map(|s| s.to_string()).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn read_records_csv(text: &str) -> Result<Vec<RunRecord>, String> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let headers = rd.headers().map_err(|e| e.to_string())?.clone();
    if headers.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(format!("expected header `{}`", CSV_HEADER.join(",")));
    }
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        let at = |m: String| format!("row {}: {}", i + 2, m);
        let field = |k: usize| row.get(k).unwrap_or("");
        let opt_f = |s: &str| -> Result<Option<f64>, String> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse()
                    .map(Some)
                    .map_err(|_| format!("bad number `{}`", s))
            }
        };
        let opt_u = |s: &str| -> Result<Option<u64>, String> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse()
                    .map(Some)
                    .map_err(|_| format!("bad integer `{}`", s))
            }
        };
        let (input, arrays) = RunRecord::parse_input(field(1)).map_err(at)?;
        out.push(RunRecord {
            program: field(0).to_string(),
            input,
            arrays,
            source: field(2).parse().map_err(at)?,
            path_len: field(3).parse().map_err(|_| at("bad path_len".into()))?,
            mems: field(4).parse().map_err(|_| at("bad mems".into()))?,
            time_ms: opt_f(field(5)).map_err(at)?,
            steps: opt_u(field(6)).map_err(at)?,
            trace: None,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        assert_eq!(ArrayGen::Sorted(3).generate(), vec![0, 1, 2]);
        assert_eq!(ArrayGen::Reversed(3).generate(), vec![2, 1, 0]);
        assert_eq!(
            "const:2:7".parse::<ArrayGen>().unwrap().generate(),
            vec![7, 7]
        );
        let r: ArrayGen = "random:50:9".parse().unwrap();
        assert_eq!(r.generate(), r.generate());
        assert!(r.generate().iter().all(|&x| (0..1000).contains(&x)));
        assert_ne!(
            r.generate(),
            "random:50:10".parse::<ArrayGen>().unwrap().generate()
        );
        for s in [
            "sorted:4",
            "reversed:0",
            "const:3:-1",
            "random:5:1",
            "random:5:1:10",
            "[1,-2,3]",
        ] {
            assert_eq!(s.parse::<ArrayGen>().unwrap().to_string(), s);
        }
        assert_eq!(
            "4, 5".parse::<ArrayGen>().unwrap(),
            ArrayGen::Values(vec![4, 5])
        );
        assert!("sorted:x".parse::<ArrayGen>().is_err());
    }

    #[test]
    fn csv_round_trip() {
        let recs = vec![
            RunRecord {
                program: "test".into(),
                input: vec![10, 5],
                arrays: vec![],
                source: Source::Interpreter,
                path_len: 20,
                mems: 10,
                time_ms: None,
                steps: Some(77),
                trace: None,
            },
            RunRecord {
                program: "sum".into(),
                input: vec![4],
                arrays: vec![("a".into(), ArrayGen::Reversed(4))],
                source: Source::Native,
                path_len: 4,
                mems: 4,
                time_ms: Some(0.0125),
                steps: None,
                trace: None,
            },
        ];
        let text = write_records_csv(&recs);
        assert!(text.starts_with("program,input,source,path_len,mems,time_ms,steps\n"));
        assert!(text.contains("test,10 5,interpreter,20,10,,77\n"));
        assert!(text.contains("sum,4 a=reversed:4,native,4,4,0.012500,\n"));
        assert_eq!(read_records_csv(&text).unwrap(), recs);
        assert!(read_records_csv("a,b\n").is_err());
    }
}
