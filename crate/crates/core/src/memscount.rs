//! Static mems rules: how many array-element reads and writes a statement
//! performs when it runs once.
//!
//! Only array elements count; scalar traffic is free. A subscript on the
//! left of `=` is one write, a subscript anywhere else (right-hand sides,
//! index subexpressions, call arguments, conditions) is one read, and a
//! compound assignment to an element is one read plus one write. For
//! `if`/`while`/`for` only the condition is charged, once per evaluation;
//! the `for` init and step are statements of their own. `&&`/`||` are
//! assumed to evaluate both operands.

use std::ops::Add;

use crate::cfront::{DeclKind, Expr, ExprKind, LValue, Span, Stmt, StmtKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct MemsDelta {
    pub span: Span,
    pub reads: u64,
    pub writes: u64,
}

impl MemsDelta {
    pub fn total(&self) -> u64 {
        self.reads + self.writes
    }

    fn reads(span: Span, reads: u64) -> Self {
        MemsDelta {
            span,
            reads,
            writes: 0,
        }
    }
}

impl Add for MemsDelta {
    type Output = MemsDelta;

    fn add(self, o: MemsDelta) -> MemsDelta {
        MemsDelta {
            span: self.span,
            reads: self.reads + o.reads,
            writes: self.writes + o.writes,
        }
    }
}

/// Array reads performed by evaluating `e` in read position.
pub fn count_expr(e: &Expr) -> MemsDelta {
    MemsDelta::reads(e.span, subscripts(e))
}

fn subscripts(e: &Expr) -> u64 {
    match &e.kind {
        ExprKind::Int(_) | ExprKind::Var(_) | ExprKind::Str(_) => 0,
        ExprKind::Index { index, .. } => 1 + subscripts(index),
        ExprKind::Binary { lhs, rhs, .. } => subscripts(lhs) + subscripts(rhs),
        ExprKind::Unary { operand, .. } => subscripts(operand),
        ExprKind::Call { args, .. } => args.iter().map(subscripts).sum(),
    }
}

/// Accesses caused by storing into `target`; `compound` adds the read of the
/// old element value.
pub fn count_lvalue(target: &LValue, compound: bool) -> MemsDelta {
    match target {
        LValue::Var { span, .. } => MemsDelta::reads(*span, 0),
        LValue::Index { index, span, .. } => MemsDelta {
            span: *span,
            reads: subscripts(index) + u64::from(compound),
            writes: 1,
        },
    }
}

pub fn count_stmt(s: &Stmt) -> MemsDelta {
    let zero = MemsDelta::reads(s.span, 0);
    let d = match &s.kind {
        StmtKind::Decl(ds) => ds.iter().fold(zero, |acc, d| match &d.kind {
            DeclKind::Scalar { init } => acc + init.as_ref().map(count_expr).unwrap_or(zero),
            DeclKind::Array { len, init } => {
                let items: u64 = init.iter().flatten().map(subscripts).sum();
                acc + count_expr(len) + MemsDelta::reads(s.span, items)
            }
        }),
        StmtKind::Assign { target, value } => count_lvalue(target, false) + count_expr(value),
        StmtKind::CompoundAssign { target, value, .. } => {
            count_lvalue(target, true) + count_expr(value)
        }
        StmtKind::Expr(e) => count_expr(e),
        StmtKind::If { cond, .. } | StmtKind::While { cond, .. } | StmtKind::For { cond, .. } => {
            count_expr(cond)
        }
        StmtKind::Return(e) => e.as_ref().map(count_expr).unwrap_or(zero),
        StmtKind::Block(_) => zero,
    };
    MemsDelta { span: s.span, ..d }
}
