//! Compiles instrumented C with the system compiler and runs it.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use super::output::{parse_run_output, OutputFormatMismatch};
use super::{RunRecord, Source};

pub const DEFAULT_REPEAT: usize = 5;

/// Used when no compile command is given. `{src}` and `{bin}` are replaced
/// by the source and binary paths.
pub const DEFAULT_COMPILE_CMD: &str = "cc -O0 -o {bin} {src}";

#[derive(Debug, thiserror::Error)]
pub enum NativeError {
    #[error("compilation failed:\n{0}")]
    CompileFailed(String),
    #[error("program exited with {status}:\n{stderr}")]
    RunFailed { status: String, stderr: String },
    #[error("unexpected program output: {0}")]
    OutputFormatMismatch(#[from] OutputFormatMismatch),
    #[error("program printed no `Path:` block")]
    NoBlock,
    #[error("counts differ between repetitions: {first:?} then {other:?}")]
    NonDeterministicCounts {
        first: (u64, u64),
        other: (u64, u64),
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// A compiled program; the binary is removed on drop.
pub struct Compiled {
    _dir: tempfile::TempDir,
    bin: PathBuf,
}

pub fn compile(source: &str, compile_cmd: &str) -> Result<Compiled, NativeError> {
    let dir = tempfile::tempdir()?;
    let src = dir.path().join("prog.c");
    let bin = dir.path().join("prog");
    std::fs::write(&src, source)?;
    let cmd = compile_cmd
        .replace("{src}", &shell_quote(&src.to_string_lossy()))
        .replace("{bin}", &shell_quote(&bin.to_string_lossy()));
    let out = Command::new("sh").arg("-c").arg(&cmd).output()?;
    if !out.status.success() || !bin.exists() {
        let mut msg = String::from_utf8_lossy(&out.stderr).into_owned();
        if msg.trim().is_empty() {
            msg = format!("`{}` exited with {}", cmd, out.status);
        }
        return Err(NativeError::CompileFailed(msg));
    }
    Ok(Compiled { _dir: dir, bin })
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "'\\''"))
}

impl Compiled {
    /// Runs the binary `repeat` times (at least once), one record per run.
    /// Counts must agree across runs.
    pub fn run(
        &self,
        program: &str,
        args: &[i64],
        repeat: usize,
    ) -> Result<Vec<RunRecord>, NativeError> {
        let mut counts: Option<(u64, u64)> = None;
        let mut records = Vec::new();
        for _ in 0..repeat.max(1) {
            let start = Instant::now();
            let out = Command::new(&self.bin)
                .args(args.iter().map(|a| a.to_string()))
                .output()?;
            let wall = start.elapsed().as_secs_f64() * 1e3;
            if !out.status.success() {
                return Err(NativeError::RunFailed {
                    status: out.status.to_string(),
                    stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
                });
            }
            let stdout = String::from_utf8_lossy(&out.stdout);
            let parsed = parse_run_output(&stdout)?;
            let block = parsed.entry().ok_or(NativeError::NoBlock)?;
            let c = (block.path_len, block.mems);
            match counts {
                Some(first) if first != c => {
                    return Err(NativeError::NonDeterministicCounts { first, other: c })
                }
                _ => counts = Some(c),
            }
            records.push(RunRecord {
                program: program.to_string(),
                input: args.to_vec(),
                arrays: Vec::new(),
                source: Source::Native,
                path_len: c.0,
                mems: c.1,
                time_ms: Some(block.time_ms.unwrap_or(wall)),
                steps: None,
                trace: Some(block.branch_lines()),
            });
        }
        Ok(records)
    }
}

/// Compiles `source` (an instrumented program with a harness `main`) and
/// runs it on `args`.
pub fn run_native(
    program: &str,
    source: &str,
    compile_cmd: &str,
    args: &[i64],
    repeat: usize,
) -> Result<Vec<RunRecord>, NativeError> {
    compile(source, compile_cmd)?.run(program, args, repeat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compile_failure_is_reported() {
        let err = compile("int main(void) { return 0; }", "false")
            .err()
            .unwrap();
        assert!(matches!(err, NativeError::CompileFailed(_)));
    }

    #[test]
    fn quoting() {
        assert_eq!(shell_quote("a b'c"), "'a b'\\''c'");
    }
}
