//! Parser for the stdout of an instrumented program.
//!
//! Every call of an instrumented function prints a block that opens with
//! `Path:` and closes with the totals lines. Blocks nest when an instrumented
//! function calls another one. Lines outside any block are program output.

#[derive(Clone, Debug, PartialEq)]
pub struct OutputBlock {
    /// Every line printed inside the block, nested blocks excluded.
    pub lines: Vec<String>,
    pub path_len: u64,
    pub mems: u64,
    pub time_ms: Option<f64>,
    /// Blocks of instrumented callees, in completion order.
    pub children: Vec<OutputBlock>,
}

impl OutputBlock {
    /// Branch lines: `#(...)` or `@(...)`.
    pub fn branch_lines(&self) -> Vec<String> {
        self.lines
            .iter()
            .filter(|l| is_branch_line(l))
            .cloned()
            .collect()
    }
}

fn is_branch_line(l: &str) -> bool {
    (l.starts_with("#(") || l.starts_with("@(")) && l.ends_with(')')
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ParsedRun {
    /// Completed top-level blocks in order.
    pub blocks: Vec<OutputBlock>,
    pub program_output: Vec<String>,
}

impl ParsedRun {
    /// The block of the function the program was started through: the last
    /// top-level one.
    pub fn entry(&self) -> Option<&OutputBlock> {
        self.blocks.last()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: expected {expected}, found `{found}`")]
pub struct OutputFormatMismatch {
    pub line: usize,
    pub expected: String,
    pub found: String,
}

const LEN_PREFIX: &str = "Total path length: ";
const MEMS_PREFIX: &str = "Total memory accesses: ";
const TIME_PREFIX: &str = "Execution time: ";

struct Open {
    block: OutputBlock,
    has_len: bool,
}

pub fn parse_run_output(stdout: &str) -> Result<ParsedRun, OutputFormatMismatch> {
    let mut run = ParsedRun::default();
    let mut stack: Vec<Open> = Vec::new();
    // Where a following `Execution time:` line belongs: (depth, index).
    let mut last_closed: Option<(usize, usize)> = None;
    let lines: Vec<&str> = stdout.lines().collect();
    let mismatch = |i: usize, expected: &str| OutputFormatMismatch {
        line: i + 1,
        expected: expected.to_string(),
        found: lines
            .get(i)
            .copied()
            .unwrap_or("<end of output>")
            .to_string(),
    };
    for (i, &line) in lines.iter().enumerate() {
        let closed_prev = last_closed.take();
        if let Some(top) = stack.last() {
            if top.has_len && !line.starts_with(MEMS_PREFIX) {
                return Err(mismatch(i, "`Total memory accesses: <n>`"));
            }
        }
        if line == "Path:" {
            stack.push(Open {
                block: OutputBlock {
                    lines: Vec::new(),
                    path_len: 0,
                    mems: 0,
                    time_ms: None,
                    children: Vec::new(),
                },
                has_len: false,
            });
        } else if let Some(rest) = line.strip_prefix(LEN_PREFIX) {
            let top = stack
                .last_mut()
                .ok_or_else(|| mismatch(i, "`Path:` before totals"))?;
            top.block.path_len = rest
                .trim()
                .parse()
                .map_err(|_| mismatch(i, "an integer path length"))?;
            top.has_len = true;
        } else if let Some(rest) = line.strip_prefix(MEMS_PREFIX) {
            let top = stack
                .last_mut()
                .ok_or_else(|| mismatch(i, "`Path:` before totals"))?;
            if !top.has_len {
                return Err(mismatch(i, "`Total path length: <n>`"));
            }
            top.block.mems = rest
                .trim()
                .parse()
                .map_err(|_| mismatch(i, "an integer mems count"))?;
            let done = stack.pop().expect("open block").block;
            let depth = stack.len();
            match stack.last_mut() {
                Some(parent) => {
                    parent.block.children.push(done);
                    last_closed = Some((depth, parent.block.children.len() - 1));
                }
                None => {
                    run.blocks.push(done);
                    last_closed = Some((0, run.blocks.len() - 1));
                }
            }
        } else if let Some(rest) = line.strip_prefix(TIME_PREFIX) {
            let Some((depth, idx)) = closed_prev else {
                return Err(mismatch(i, "`Execution time:` right after the totals"));
            };
            let ms = rest
                .strip_suffix(" ms")
                .and_then(|t| t.trim().parse::<f64>().ok())
                .ok_or_else(|| mismatch(i, "`Execution time: <t> ms`"))?;
            let block = if depth == 0 {
                &mut run.blocks[idx]
            } else {
                &mut stack[depth - 1].block.children[idx]
            };
            block.time_ms = Some(ms);
        } else {
            match stack.last_mut() {
                Some(top) => top.block.lines.push(line.to_string()),
                None => run.program_output.push(line.to_string()),
            }
        }
    }
    if let Some(top) = stack.last() {
        let expected = if top.has_len {
            "`Total memory accesses: <n>`"
        } else {
            "`Total path length: <n>`"
        };
        return Err(mismatch(lines.len(), expected));
    }
    Ok(run)
}
