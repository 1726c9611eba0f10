//! Source-to-source instrumentation.
//!
//! The instrumented program prints, for every call of a target function:
//!
//! ```text
//! Path:
//! #(i < n)
//! #(mode > 0)
//! arr[i] = i * 2 + arr[i];
//! ...
//! Total path length: 20
//! Total memory accesses: 10
//! Execution time: 0.001234 ms
//! ```
//!
//! Each taken branch logs its condition at the head of the branch body and
//! bumps `path_len`; loop exits are not logged. An `if` without `else` gets a
//! synthesized `else` that only logs. Array accesses bump `mems` by the static
//! count from [`crate::memscount`], with `&&`/`||` right operands guarded so
//! the count matches what actually gets evaluated.
//!
//! Every inserted line ends with [`INSTR_TAG`]; [`strip`] deletes exactly
//! those lines and gets back the canonical rendering of the input.

use std::collections::HashSet;

use crate::cfront::{
    escape_c_string, expr_to_string, print_with_hooks, signature, simple_to_string, Ast, BinOp,
    DeclKind, Expr, ExprKind, FunctionDef, LValue, PrintHooks, Stmt, StmtKind, UnOp,
};
use crate::memscount::{count_expr, count_lvalue};

/// Trailing comment on every inserted line.
pub const INSTR_TAG: &str = "// @mems";

const RESERVED: &[&str] = &["mems", "path_len", "mems_start", "mems_now_ms", "mems_i"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Marker {
    #[default]
    Hash,
    At,
}

impl Marker {
    pub fn as_char(self) -> char {
        match self {
            Marker::Hash => '#',
            Marker::At => '@',
        }
    }

    pub fn from_char(c: char) -> Option<Marker> {
        match c {
            '#' => Some(Marker::Hash),
            '@' => Some(Marker::At),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Timer {
    #[default]
    Monotonic,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TraceMode {
    #[default]
    Full,
    CountsOnly,
}

#[derive(Clone, Debug, Default)]
pub struct InstrumentConfig {
    pub cond_marker: Marker,
    pub timer: Timer,
    pub trace: TraceMode,
    /// `None` means every function except `main`.
    pub target_functions: Option<Vec<String>>,
    /// When set and the program has no `main`, emit a `main` that calls this
    /// function with integer arguments taken from the command line.
    pub harness: Option<String>,
}

impl InstrumentConfig {
    /// Functions that get instrumented; `main` is never among them.
    pub fn targets(&self, ast: &Ast) -> Result<Vec<String>, InstrumentError> {
        match &self.target_functions {
            None => Ok(ast
                .functions
                .iter()
                .filter(|f| f.name != "main")
                .map(|f| f.name.clone())
                .collect()),
            Some(names) => {
                for n in names {
                    if ast.function(n).is_none() {
                        return Err(InstrumentError::TargetNotFound(n.clone()));
                    }
                }
                Ok(names.iter().filter(|n| *n != "main").cloned().collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstrumentError {
    #[error("target function `{0}` not found")]
    TargetNotFound(String),
    #[error("unsupported construct: {0}")]
    UnsupportedConstruct(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StripError {
    #[error("input carries no instrumentation markers")]
    NotInstrumentedByUs,
}

pub fn instrument(ast: &Ast, cfg: &InstrumentConfig) -> Result<String, InstrumentError> {
    let targets: HashSet<String> = cfg.targets(ast)?.into_iter().collect();
    for f in ast.functions.iter().filter(|f| targets.contains(&f.name)) {
        check_reserved(f)?;
    }
    if let Some(entry) = &cfg.harness {
        let f = ast
            .function(entry)
            .ok_or_else(|| InstrumentError::TargetNotFound(entry.clone()))?;
        if f.params.iter().any(|p| p.is_array()) {
            return Err(InstrumentError::UnsupportedConstruct(format!(
                "harness entry `{}` must take only scalar parameters",
                entry
            )));
        }
    }
    let mut hooks = Hooks { cfg, targets };
    Ok(print_with_hooks(ast, &mut hooks))
}

/// Removes every inserted line.
pub fn strip(instrumented: &str) -> Result<String, StripError> {
    let mut found = false;
    let mut out = String::with_capacity(instrumented.len());
    for line in instrumented.lines() {
        if line.trim_end().ends_with(INSTR_TAG) {
            found = true;
        } else {
            out.push_str(line);
            out.push('\n');
        }
    }
    if found {
        Ok(out)
    } else {
        Err(StripError::NotInstrumentedByUs)
    }
}

/// Locals start at zero in MiniC but not in C, so uninitialized declarations
/// get explicit zeroing. Array lengths with calls are not re-evaluated.
fn zero_fill(s: &Stmt) -> Vec<String> {
    let StmtKind::Decl(ds) = &s.kind else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for d in ds {
        match &d.kind {
            DeclKind::Scalar { init: None } => out.push(tagged(format!("{} = 0;", d.name))),
            DeclKind::Array { len, init: None } if !len.has_call() => out.push(tagged(format!(
                "for (int mems_i = 0; mems_i < {}; mems_i++) {{ {}[mems_i] = 0; }}",
                expr_to_string(len),
                d.name
            ))),
            _ => {}
        }
    }
    out
}

fn check_reserved(f: &FunctionDef) -> Result<(), InstrumentError> {
    fn clash(name: &str, f: &FunctionDef) -> Result<(), InstrumentError> {
        if RESERVED.contains(&name) {
            return Err(InstrumentError::UnsupportedConstruct(format!(
                "identifier `{}` in `{}` collides with an instrumentation counter",
                name, f.name
            )));
        }
        Ok(())
    }
    fn walk(stmts: &[Stmt], f: &FunctionDef) -> Result<(), InstrumentError> {
        for s in stmts {
            match &s.kind {
                StmtKind::Decl(ds) => {
                    for d in ds {
                        clash(&d.name, f)?;
                    }
                }
                StmtKind::If {
                    then_block,
                    else_block,
                    ..
                } => {
                    walk(&then_block.stmts, f)?;
                    if let Some(b) = else_block {
                        walk(&b.stmts, f)?;
                    }
                }
                StmtKind::For { init, body, .. } => {
                    if let Some(i) = init {
                        walk(std::slice::from_ref(i), f)?;
                    }
                    walk(&body.stmts, f)?;
                }
                StmtKind::While { body, .. } => walk(&body.stmts, f)?,
                StmtKind::Block(b) => walk(&b.stmts, f)?,
                _ => {}
            }
        }
        Ok(())
    }
    clash(&f.name, f)?;
    for p in &f.params {
        clash(&p.name, f)?;
    }
    walk(&f.body.stmts, f)
}

/// Counter updates for one evaluation of an expression.
#[derive(Debug, Clone, PartialEq)]
enum Cost {
    Fixed(u64),
    /// Charged only when `guard` holds (the right operand of `&&`/`||`).
    Guarded {
        guard: String,
        body: Vec<Cost>,
    },
}

fn push_fixed(plan: &mut Vec<Cost>, k: u64) {
    if k == 0 {
        return;
    }
    if let Some(Cost::Fixed(prev)) = plan.last_mut() {
        *prev += k;
    } else {
        plan.push(Cost::Fixed(k));
    }
}

/// What a guard may rely on: its operand must have the same value when the
/// guard runs as when the program evaluates it.
struct Ctx<'s> {
    /// A call in the statement may rewrite array elements the guard reads.
    has_call: bool,
    /// Names the statement itself declares are not in scope for the guard.
    declared: Vec<&'s str>,
}

fn mentions(e: &Expr, names: &[&str]) -> bool {
    match &e.kind {
        ExprKind::Int(_) | ExprKind::Str(_) => false,
        ExprKind::Var(n) => names.contains(&n.as_str()),
        ExprKind::Index { base, index } => names.contains(&base.as_str()) || mentions(index, names),
        ExprKind::Binary { lhs, rhs, .. } => mentions(lhs, names) || mentions(rhs, names),
        ExprKind::Unary { operand, .. } => mentions(operand, names),
        ExprKind::Call { args, .. } => args.iter().any(|a| mentions(a, names)),
    }
}

fn guard_ok(lhs: &Expr, ctx: &Ctx) -> bool {
    !lhs.has_call()
        && !(ctx.has_call && count_expr(lhs).total() > 0)
        && !mentions(lhs, &ctx.declared)
}

fn expr_plan(e: &Expr, plan: &mut Vec<Cost>, ctx: &Ctx) {
    match &e.kind {
        ExprKind::Int(_) | ExprKind::Var(_) | ExprKind::Str(_) => {}
        ExprKind::Index { index, .. } => {
            push_fixed(plan, 1);
            expr_plan(index, plan, ctx);
        }
        ExprKind::Binary { op, lhs, rhs } if op.is_logical() && guard_ok(lhs, ctx) => {
            expr_plan(lhs, plan, ctx);
            let mut inner = Vec::new();
            expr_plan(rhs, &mut inner, ctx);
            if inner.is_empty() {
                return;
            }
            let guard = if *op == BinOp::And {
                expr_to_string(lhs)
            } else {
                expr_to_string(&Expr::unary(UnOp::Not, (**lhs).clone()))
            };
            plan.push(Cost::Guarded { guard, body: inner });
        }
        ExprKind::Binary { lhs, rhs, .. } => {
            expr_plan(lhs, plan, ctx);
            expr_plan(rhs, plan, ctx);
        }
        ExprKind::Unary { operand, .. } => expr_plan(operand, plan, ctx),
        ExprKind::Call { args, .. } => {
            for a in args {
                expr_plan(a, plan, ctx);
            }
        }
    }
}

fn is_fixed(plan: &[Cost]) -> bool {
    plan.iter().all(|c| matches!(c, Cost::Fixed(_)))
}

fn render_plan(plan: &[Cost]) -> String {
    plan.iter()
        .map(|c| match c {
            Cost::Fixed(k) => format!("mems = mems + {};", k),
            Cost::Guarded { guard, body } => format!("if ({}) {{ {} }}", guard, render_plan(body)),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn cond_plan(cond: &Expr) -> Vec<Cost> {
    let mut plan = Vec::new();
    let ctx = Ctx {
        has_call: cond.has_call(),
        declared: Vec::new(),
    };
    expr_plan(cond, &mut plan, &ctx);
    plan
}

fn lvalue_has_call(target: &LValue) -> bool {
    matches!(target, LValue::Index { index, .. } if index.has_call())
}

/// Plan for the non-control-flow part of a simple statement.
fn stmt_plan(s: &Stmt) -> Vec<Cost> {
    let mut plan = Vec::new();
    match &s.kind {
        StmtKind::Assign { target, value } | StmtKind::CompoundAssign { target, value, .. } => {
            let ctx = Ctx {
                has_call: lvalue_has_call(target) || value.has_call(),
                declared: Vec::new(),
            };
            let compound = matches!(s.kind, StmtKind::CompoundAssign { .. });
            if let LValue::Index { index, .. } = target {
                let own = count_lvalue(target, compound).total() - count_expr(index).total();
                push_fixed(&mut plan, own);
                expr_plan(index, &mut plan, &ctx);
            }
            expr_plan(value, &mut plan, &ctx);
        }
        StmtKind::Expr(e) | StmtKind::Return(Some(e)) => {
            let ctx = Ctx {
                has_call: e.has_call(),
                declared: Vec::new(),
            };
            expr_plan(e, &mut plan, &ctx);
        }
        StmtKind::Decl(ds) => {
            let exprs: Vec<&Expr> = ds
                .iter()
                .flat_map(|d| match &d.kind {
                    DeclKind::Scalar { init } => init.iter().collect::<Vec<_>>(),
                    DeclKind::Array { len, init } => {
                        std::iter::once(len).chain(init.iter().flatten()).collect()
                    }
                })
                .collect();
            let ctx = Ctx {
                has_call: exprs.iter().any(|e| e.has_call()),
                declared: ds.iter().map(|d| d.name.as_str()).collect(),
            };
            for e in exprs {
                expr_plan(e, &mut plan, &ctx);
            }
        }
        _ => {}
    }
    plan
}

fn tagged(code: impl AsRef<str>) -> String {
    format!("{} {}", code.as_ref(), INSTR_TAG)
}

fn printf_line(text: &str) -> String {
    format!(
        "printf(\"{}\\n\");",
        escape_c_string(&text.replace('%', "%%"))
    )
}

struct Hooks<'c> {
    cfg: &'c InstrumentConfig,
    targets: HashSet<String>,
}

impl<'c> Hooks<'c> {
    fn active(&self, f: &FunctionDef) -> bool {
        self.targets.contains(&f.name)
    }

    fn log_branch(&self, cond: &Expr, taken: bool) -> Vec<String> {
        let text = expr_to_string(cond);
        let text = if taken { text } else { format!("!({})", text) };
        let mut out = Vec::new();
        if self.cfg.trace == TraceMode::Full {
            out.push(tagged(printf_line(&format!(
                "{}({})",
                self.cfg.cond_marker.as_char(),
                text
            ))));
        }
        out.push(tagged("path_len = path_len + 1;"));
        out
    }

    fn plan_lines(plan: &[Cost]) -> Vec<String> {
        if plan.is_empty() {
            Vec::new()
        } else {
            vec![tagged(render_plan(plan))]
        }
    }

    fn cond_lines(cond: &Expr) -> Vec<String> {
        Self::plan_lines(&cond_plan(cond))
    }

    fn summary(&self) -> Vec<String> {
        let mut out = vec![
            tagged("printf(\"Total path length: %lld\\n\", path_len);"),
            tagged("printf(\"Total memory accesses: %lld\\n\", mems);"),
        ];
        if self.cfg.timer == Timer::Monotonic {
            out.push(tagged(
                "printf(\"Execution time: %.6f ms\\n\", mems_now_ms() - mems_start);",
            ));
        }
        out
    }
}

impl<'c> PrintHooks for Hooks<'c> {
    fn prologue(&mut self, ast: &Ast) -> Vec<String> {
        let mut out = Vec::new();
        if self.cfg.timer == Timer::Monotonic {
            out.push(tagged("#define _POSIX_C_SOURCE 199309L"));
        }
        out.push(tagged("#include <stdio.h>"));
        if self.harness_entry(ast).is_some() {
            out.push(tagged("#include <stdlib.h>"));
        }
        if self.cfg.timer == Timer::Monotonic {
            out.push(tagged("#include <time.h>"));
            out.push(tagged(
                "static double mems_now_ms(void) { struct timespec ts; clock_gettime(CLOCK_MONOTONIC, &ts); return (double) ts.tv_sec * 1e3 + (double) ts.tv_nsec / 1e6; }",
            ));
        }
        for f in &ast.functions {
            if f.name != "main" {
                out.push(tagged(format!("{};", signature(f))));
            }
        }
        out
    }

    fn epilogue(&mut self, ast: &Ast) -> Vec<String> {
        let Some(f) = self.harness_entry(ast) else {
            return Vec::new();
        };
        let n = f.params.len();
        let usage = f
            .params
            .iter()
            .map(|p| format!("<{}>", p.name))
            .collect::<Vec<_>>()
            .join(" ");
        let args = (1..=n)
            .map(|i| format!("atoll(argv[{}])", i))
            .collect::<Vec<_>>()
            .join(", ");
        vec![
            tagged(""),
            tagged("int main(int argc, char **argv) {"),
            tagged(format!(
                "    if (argc != {}) {{ fprintf(stderr, \"usage: %s {}\\n\", argv[0]); return 1; }}",
                n + 1,
                usage
            )),
            tagged(format!("    {}({});", f.name, args)),
            tagged("    return 0;"),
            tagged("}"),
        ]
    }

    fn function_entry(&mut self, f: &FunctionDef) -> Vec<String> {
        if !self.active(f) {
            return Vec::new();
        }
        let mut out = vec![
            tagged("long long mems = 0;"),
            tagged("long long path_len = 0;"),
        ];
        if self.cfg.timer == Timer::Monotonic {
            out.push(tagged("double mems_start = mems_now_ms();"));
        }
        out.push(tagged("printf(\"Path:\\n\");"));
        out
    }

    fn function_exit(&mut self, f: &FunctionDef) -> Vec<String> {
        let ends_in_return = matches!(
            f.body.stmts.last().map(|s| &s.kind),
            Some(StmtKind::Return(_))
        );
        if self.active(f) && !ends_in_return {
            self.summary()
        } else {
            Vec::new()
        }
    }

    fn before_stmt(&mut self, f: &FunctionDef, s: &Stmt) -> Vec<String> {
        if !self.active(f) {
            return Vec::new();
        }
        let mut out = Vec::new();
        match &s.kind {
            StmtKind::If { cond, .. } => out.extend(Self::cond_lines(cond)),
            StmtKind::For {
                init: Some(init), ..
            } => {
                out.extend(Self::plan_lines(&stmt_plan(init)));
            }
            StmtKind::Return(_) => {
                out.extend(Self::plan_lines(&stmt_plan(s)));
                out.extend(self.summary());
            }
            StmtKind::Assign { .. }
            | StmtKind::CompoundAssign { .. }
            | StmtKind::Expr(_)
            | StmtKind::Decl(_) => {
                if matches!(
                    s.kind,
                    StmtKind::Assign { .. } | StmtKind::CompoundAssign { .. }
                ) && self.cfg.trace == TraceMode::Full
                {
                    out.push(tagged(printf_line(&format!("{};", simple_to_string(s)))));
                }
                let plan = stmt_plan(s);
                if !is_fixed(&plan) {
                    out.extend(Self::plan_lines(&plan));
                }
            }
            _ => {}
        }
        out
    }

    fn after_stmt(&mut self, f: &FunctionDef, s: &Stmt) -> Vec<String> {
        let mut out = zero_fill(s);
        if !self.active(f) {
            return out;
        }
        out.extend(match &s.kind {
            // The final, failing test of a loop.
            StmtKind::For { cond, .. } | StmtKind::While { cond, .. } => Self::cond_lines(cond),
            StmtKind::Assign { .. }
            | StmtKind::CompoundAssign { .. }
            | StmtKind::Expr(_)
            | StmtKind::Decl(_) => {
                let plan = stmt_plan(s);
                if is_fixed(&plan) {
                    Self::plan_lines(&plan)
                } else {
                    Vec::new()
                }
            }
            _ => Vec::new(),
        });
        out
    }

    fn branch_head(&mut self, f: &FunctionDef, s: &Stmt, taken: bool) -> Vec<String> {
        if !self.active(f) {
            return Vec::new();
        }
        match &s.kind {
            StmtKind::If { cond, .. } => self.log_branch(cond, taken),
            StmtKind::For { cond, .. } | StmtKind::While { cond, .. } => {
                let mut out = self.log_branch(cond, true);
                out.extend(Self::cond_lines(cond));
                out
            }
            _ => Vec::new(),
        }
    }

    fn loop_tail(&mut self, f: &FunctionDef, s: &Stmt) -> Vec<String> {
        if !self.active(f) {
            return Vec::new();
        }
        match &s.kind {
            StmtKind::For {
                step: Some(step), ..
            } => Self::plan_lines(&stmt_plan(step)),
            _ => Vec::new(),
        }
    }

    fn missing_else(&mut self, f: &FunctionDef, s: &Stmt) -> Option<String> {
        if !self.active(f) {
            return None;
        }
        let StmtKind::If { cond, .. } = &s.kind else {
            return None;
        };
        let body = self
            .log_branch(cond, false)
            .into_iter()
            .map(|l| l.trim_end_matches(INSTR_TAG).trim_end().to_string())
            .collect::<Vec<_>>()
            .join(" ");
        Some(tagged(format!("else {{ {} }}", body)))
    }
}

impl<'c> Hooks<'c> {
    fn harness_entry<'a>(&self, ast: &'a Ast) -> Option<&'a FunctionDef> {
        let entry = self.cfg.harness.as_ref()?;
        if ast.function("main").is_some() {
            return None;
        }
        ast.function(entry)
    }
}
