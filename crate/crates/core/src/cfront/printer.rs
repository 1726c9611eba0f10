//! Canonical pretty-printer.
//!
//! Layout is fixed: four-space indentation, one statement per line, every
//! control-flow body braced, `} else {` on one line. The instrumenter reuses
//! this printer through [`PrintHooks`] so that every original line it emits is
//! byte-identical to the plain rendering.

use super::ast::*;

/// Extra lines injected around statements. Every method returns lines
/// (without indentation or trailing newline); the printer indents them.
pub trait PrintHooks {
    fn prologue(&mut self, _ast: &Ast) -> Vec<String> {
        Vec::new()
    }
    fn epilogue(&mut self, _ast: &Ast) -> Vec<String> {
        Vec::new()
    }
    fn function_entry(&mut self, _f: &FunctionDef) -> Vec<String> {
        Vec::new()
    }
    /// Lines before the closing brace of a function body.
    fn function_exit(&mut self, _f: &FunctionDef) -> Vec<String> {
        Vec::new()
    }
    fn before_stmt(&mut self, _f: &FunctionDef, _s: &Stmt) -> Vec<String> {
        Vec::new()
    }
    fn after_stmt(&mut self, _f: &FunctionDef, _s: &Stmt) -> Vec<String> {
        Vec::new()
    }
    /// Lines at the head of the then-branch (`taken == true`), else-branch or
    /// loop body (`taken == true`) of `s`.
    fn branch_head(&mut self, _f: &FunctionDef, _s: &Stmt, _taken: bool) -> Vec<String> {
        Vec::new()
    }
    /// Lines at the end of a loop body, before the closing brace.
    fn loop_tail(&mut self, _f: &FunctionDef, _s: &Stmt) -> Vec<String> {
        Vec::new()
    }
    /// A full line to place after an `if` that has no `else`.
    fn missing_else(&mut self, _f: &FunctionDef, _s: &Stmt) -> Option<String> {
        None
    }
}

struct NoHooks;
impl PrintHooks for NoHooks {}

pub fn pretty_print(ast: &Ast) -> String {
    print_with_hooks(ast, &mut NoHooks)
}

pub fn print_with_hooks(ast: &Ast, hooks: &mut dyn PrintHooks) -> String {
    let mut p = Printer {
        out: String::new(),
        hooks,
    };
    p.program(ast);
    p.out
}

struct Printer<'h> {
    out: String,
    hooks: &'h mut dyn PrintHooks,
}

const INDENT: &str = "    ";

impl<'h> Printer<'h> {
    fn line(&mut self, depth: usize, text: &str) {
        for _ in 0..depth {
            self.out.push_str(INDENT);
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn lines(&mut self, depth: usize, lines: Vec<String>) {
        for l in lines {
            self.line(depth, &l);
        }
    }

    fn program(&mut self, ast: &Ast) {
        let pro = self.hooks.prologue(ast);
        self.lines(0, pro);
        for (i, f) in ast.functions.iter().enumerate() {
            if i > 0 {
                self.out.push('\n');
            }
            self.function(f);
        }
        let epi = self.hooks.epilogue(ast);
        self.lines(0, epi);
    }

    fn function(&mut self, f: &FunctionDef) {
        self.line(0, &format!("{} {{", signature(f)));
        let entry = self.hooks.function_entry(f);
        self.lines(1, entry);
        self.stmts(f, &f.body.stmts, 1);
        let exit = self.hooks.function_exit(f);
        self.lines(1, exit);
        self.line(0, "}");
    }

    fn stmts(&mut self, f: &FunctionDef, stmts: &[Stmt], depth: usize) {
        for s in stmts {
            self.stmt(f, s, depth);
        }
    }

    fn stmt(&mut self, f: &FunctionDef, s: &Stmt, depth: usize) {
        let before = self.hooks.before_stmt(f, s);
        self.lines(depth, before);
        match &s.kind {
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                self.line(depth, &format!("if ({}) {{", expr_to_string(cond)));
                let head = self.hooks.branch_head(f, s, true);
                self.lines(depth + 1, head);
                self.stmts(f, &then_block.stmts, depth + 1);
                match else_block {
                    Some(eb) => {
                        self.line(depth, "} else {");
                        let head = self.hooks.branch_head(f, s, false);
                        self.lines(depth + 1, head);
                        self.stmts(f, &eb.stmts, depth + 1);
                        self.line(depth, "}");
                    }
                    None => {
                        self.line(depth, "}");
                        if let Some(l) = self.hooks.missing_else(f, s) {
                            self.line(depth, &l);
                        }
                    }
                }
            }
            StmtKind::For {
                init,
                cond,
                step,
                body,
            } => {
                let init = init
                    .as_ref()
                    .map(|s| simple_to_string(s))
                    .unwrap_or_default();
                let step = step
                    .as_ref()
                    .map(|s| simple_to_string(s))
                    .unwrap_or_default();
                self.line(
                    depth,
                    &format!("for ({}; {}; {}) {{", init, expr_to_string(cond), step),
                );
                self.loop_body(f, s, body, depth);
            }
            StmtKind::While { cond, body } => {
                self.line(depth, &format!("while ({}) {{", expr_to_string(cond)));
                self.loop_body(f, s, body, depth);
            }
            StmtKind::Block(b) => {
                self.line(depth, "{");
                self.stmts(f, &b.stmts, depth + 1);
                self.line(depth, "}");
            }
            _ => self.line(depth, &format!("{};", simple_to_string(s))),
        }
        let after = self.hooks.after_stmt(f, s);
        self.lines(depth, after);
    }

    fn loop_body(&mut self, f: &FunctionDef, s: &Stmt, body: &Block, depth: usize) {
        let head = self.hooks.branch_head(f, s, true);
        self.lines(depth + 1, head);
        self.stmts(f, &body.stmts, depth + 1);
        let tail = self.hooks.loop_tail(f, s);
        self.lines(depth + 1, tail);
        self.line(depth, "}");
    }
}

pub fn signature(f: &FunctionDef) -> String {
    let ret = match f.ret {
        ReturnType::Int => "int",
        ReturnType::Void => "void",
    };
    let params = f
        .params
        .iter()
        .map(|p| match &p.kind {
            ParamKind::Scalar => format!("int {}", p.name),
            ParamKind::Array { len: None } => format!("int {}[]", p.name),
            ParamKind::Array { len: Some(l) } => format!("int {}[{}]", p.name, expr_to_string(l)),
        })
        .collect::<Vec<_>>()
        .join(", ");
    format!("{} {}({})", ret, f.name, params)
}

/// Renders a non-compound statement (declaration, assignment, expression,
/// return) without the trailing `;`. Used for `for` headers and trace text.
pub fn simple_to_string(s: &Stmt) -> String {
    match &s.kind {
        StmtKind::Decl(ds) => {
            let parts = ds
                .iter()
                .map(|d| match &d.kind {
                    DeclKind::Scalar { init: None } => d.name.clone(),
                    DeclKind::Scalar { init: Some(e) } => {
                        format!("{} = {}", d.name, expr_to_string(e))
                    }
                    DeclKind::Array { len, init: None } => {
                        format!("{}[{}]", d.name, expr_to_string(len))
                    }
                    DeclKind::Array {
                        len,
                        init: Some(items),
                    } => format!(
                        "{}[{}] = {{{}}}",
                        d.name,
                        expr_to_string(len),
                        items
                            .iter()
                            .map(expr_to_string)
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                })
                .collect::<Vec<_>>()
                .join(", ");
            format!("int {}", parts)
        }
        StmtKind::Assign { target, value } => {
            format!("{} = {}", lvalue_to_string(target), expr_to_string(value))
        }
        StmtKind::CompoundAssign {
            target,
            op,
            value,
            postfix,
        } => {
            if *postfix {
                let sym = if *op == BinOp::Add { "++" } else { "--" };
                format!("{}{}", lvalue_to_string(target), sym)
            } else {
                format!(
                    "{} {}= {}",
                    lvalue_to_string(target),
                    op.symbol(),
                    expr_to_string(value)
                )
            }
        }
        StmtKind::Expr(e) => expr_to_string(e),
        StmtKind::Return(None) => "return".into(),
        StmtKind::Return(Some(e)) => format!("return {}", expr_to_string(e)),
        StmtKind::If { cond, .. } => format!("if ({})", expr_to_string(cond)),
        StmtKind::While { cond, .. } => format!("while ({})", expr_to_string(cond)),
        StmtKind::For { cond, .. } => format!("for (...; {}; ...)", expr_to_string(cond)),
        StmtKind::Block(_) => "{...}".into(),
    }
}

pub fn lvalue_to_string(lv: &LValue) -> String {
    match lv {
        LValue::Var { name, .. } => name.clone(),
        LValue::Index { base, index, .. } => format!("{}[{}]", base, expr_to_string(index)),
    }
}

pub fn expr_to_string(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0);
    s
}

/// Writes `e`, parenthesizing it if its own precedence is below `min_prec`.
fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    match &e.kind {
        ExprKind::Int(v) => out.push_str(&v.to_string()),
        ExprKind::Var(n) => out.push_str(n),
        ExprKind::Str(s) => {
            out.push('"');
            out.push_str(&escape_c_string(s));
            out.push('"');
        }
        ExprKind::Index { base, index } => {
            out.push_str(base);
            out.push('[');
            write_expr(out, index, 0);
            out.push(']');
        }
        ExprKind::Call { callee, args } => {
            out.push_str(callee);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, a, 0);
            }
            out.push(')');
        }
        ExprKind::Unary { op, operand } => {
            out.push_str(op.symbol());
            // Nested unary and binary operands are always parenthesized so
            // that `-(-x)` never prints as the `--` token.
            let atomic = match operand.kind {
                ExprKind::Int(v) => v >= 0,
                ExprKind::Var(_) | ExprKind::Index { .. } | ExprKind::Call { .. } => true,
                _ => false,
            };
            if atomic {
                write_expr(out, operand, 0);
            } else {
                out.push('(');
                write_expr(out, operand, 0);
                out.push(')');
            }
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let prec = op.precedence();
            let paren = prec < min_prec;
            if paren {
                out.push('(');
            }
            write_expr(out, lhs, prec);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            // Left-associative: an equal-precedence right child needs parens.
            write_expr(out, rhs, prec + 1);
            if paren {
                out.push(')');
            }
        }
    }
}

pub fn escape_c_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            '\0' => out.push_str("\\0"),
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            c => out.push(c),
        }
    }
    out
}
