//! Name resolution: every variable, array and callee must be declared and
//! used with the right kind.

use std::collections::HashMap;

use super::ast::*;
use super::diag::{DiagKind, Diagnostic};

/// Library functions callable from MiniC; treated as opaque output.
pub const EXTERN_FUNCTIONS: &[&str] = &["printf", "puts", "putchar"];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Scalar,
    Array,
}

struct Resolver<'a> {
    src: &'a str,
    /// name -> per-parameter kinds
    functions: HashMap<&'a str, Vec<Kind>>,
    scopes: Vec<HashMap<String, Kind>>,
    diags: Vec<Diagnostic>,
}

pub fn resolve(src: &str, ast: &Ast) -> Vec<Diagnostic> {
    let mut r = Resolver {
        src,
        functions: HashMap::new(),
        scopes: Vec::new(),
        diags: Vec::new(),
    };
    for f in &ast.functions {
        let kinds = f
            .params
            .iter()
            .map(|p| {
                if p.is_array() {
                    Kind::Array
                } else {
                    Kind::Scalar
                }
            })
            .collect();
        if EXTERN_FUNCTIONS.contains(&f.name.as_str()) {
            r.err(
                DiagKind::SyntaxError,
                f.span,
                format!("`{}` is a reserved library function", f.name),
            );
        }
        if r.functions.insert(&f.name, kinds).is_some() {
            r.err(
                DiagKind::SyntaxError,
                f.span,
                format!("redefinition of function `{}`", f.name),
            );
        }
    }
    for f in &ast.functions {
        r.function(f);
    }
    r.diags
}

impl<'a> Resolver<'a> {
    fn err(&mut self, kind: DiagKind, span: Span, msg: String) {
        self.diags.push(Diagnostic::new(kind, self.src, span, msg));
    }

    fn lookup(&self, name: &str) -> Option<Kind> {
        self.scopes.iter().rev().find_map(|s| s.get(name).copied())
    }

    fn declare(&mut self, name: &str, kind: Kind, span: Span) {
        let scope = self.scopes.last_mut().expect("scope");
        if scope.insert(name.to_string(), kind).is_some() {
            self.err(
                DiagKind::SyntaxError,
                span,
                format!("redeclaration of `{}`", name),
            );
        }
    }

    fn function(&mut self, f: &FunctionDef) {
        self.scopes.push(HashMap::new());
        for p in &f.params {
            if let ParamKind::Array { len: Some(l) } = &p.kind {
                self.expr(l);
            }
            let kind = if p.is_array() {
                Kind::Array
            } else {
                Kind::Scalar
            };
            self.declare(&p.name, kind, p.span);
        }
        // The body shares the parameter scope, as in C.
        self.stmts(&f.body.stmts);
        self.scopes.pop();
    }

    fn block(&mut self, b: &Block) {
        self.scopes.push(HashMap::new());
        self.stmts(&b.stmts);
        self.scopes.pop();
    }

    fn stmts(&mut self, stmts: &[Stmt]) {
        for s in stmts {
            self.stmt(s);
        }
    }

    fn stmt(&mut self, s: &Stmt) {
        match &s.kind {
            StmtKind::Decl(ds) => {
                for d in ds {
                    match &d.kind {
                        DeclKind::Scalar { init } => {
                            if let Some(e) = init {
                                self.expr(e);
                            }
                            self.declare(&d.name, Kind::Scalar, d.span);
                        }
                        DeclKind::Array { len, init } => {
                            self.expr(len);
                            for e in init.iter().flatten() {
                                self.expr(e);
                            }
                            self.declare(&d.name, Kind::Array, d.span);
                        }
                    }
                }
            }
            StmtKind::Assign { target, value } | StmtKind::CompoundAssign { target, value, .. } => {
                self.lvalue(target);
                self.expr(value);
            }
            StmtKind::Expr(e) => self.expr(e),
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                self.expr(cond);
                self.block(then_block);
                if let Some(b) = else_block {
                    self.block(b);
                }
            }
            StmtKind::For {
                init,
                cond,
                step,
                body,
            } => {
                self.scopes.push(HashMap::new());
                if let Some(i) = init {
                    self.stmt(i);
                }
                self.expr(cond);
                if let Some(st) = step {
                    self.stmt(st);
                }
                self.block(body);
                self.scopes.pop();
            }
            StmtKind::While { cond, body } => {
                self.expr(cond);
                self.block(body);
            }
            StmtKind::Return(e) => {
                if let Some(e) = e {
                    self.expr(e);
                }
            }
            StmtKind::Block(b) => self.block(b),
        }
    }

    fn lvalue(&mut self, lv: &LValue) {
        match lv {
            LValue::Var { name, span } => self.scalar_use(name, *span),
            LValue::Index { base, index, span } => {
                self.array_use(base, *span);
                self.expr(index);
            }
        }
    }

    fn scalar_use(&mut self, name: &str, span: Span) {
        match self.lookup(name) {
            Some(Kind::Scalar) => {}
            Some(Kind::Array) => self.err(
                DiagKind::UnsupportedConstruct,
                span,
                format!("array `{}` used as a value (only indexing or passing to a function is supported)", name),
            ),
            None => self.err(
                DiagKind::UnresolvedName,
                span,
                format!("use of undeclared identifier `{}`", name),
            ),
        }
    }

    fn array_use(&mut self, name: &str, span: Span) {
        match self.lookup(name) {
            Some(Kind::Array) => {}
            Some(Kind::Scalar) => self.err(
                DiagKind::UnresolvedName,
                span,
                format!("`{}` is not an array", name),
            ),
            None => self.err(
                DiagKind::UnresolvedName,
                span,
                format!("use of undeclared array `{}`", name),
            ),
        }
    }

    fn expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Int(_) => {}
            ExprKind::Str(_) => self.err(
                DiagKind::UnsupportedConstruct,
                e.span,
                "string literals are only allowed as arguments to library output functions".into(),
            ),
            ExprKind::Var(n) => self.scalar_use(n, e.span),
            ExprKind::Index { base, index } => {
                self.array_use(base, e.span);
                self.expr(index);
            }
            ExprKind::Binary { lhs, rhs, .. } => {
                self.expr(lhs);
                self.expr(rhs);
            }
            ExprKind::Unary { operand, .. } => self.expr(operand),
            ExprKind::Call { callee, args } => self.call(callee, args, e.span),
        }
    }

    fn call(&mut self, callee: &str, args: &[Expr], span: Span) {
        if EXTERN_FUNCTIONS.contains(&callee) {
            for a in args {
                match &a.kind {
                    ExprKind::Str(_) => {}
                    _ => self.expr(a),
                }
            }
            return;
        }
        let Some(kinds) = self.functions.get(callee).cloned() else {
            self.err(
                DiagKind::UnresolvedName,
                span,
                format!("call to undeclared function `{}`", callee),
            );
            return;
        };
        if kinds.len() != args.len() {
            self.err(
                DiagKind::SyntaxError,
                span,
                format!(
                    "`{}` takes {} argument(s) but {} were supplied",
                    callee,
                    kinds.len(),
                    args.len()
                ),
            );
        }
        for (a, k) in args
            .iter()
            .zip(kinds.iter().chain(std::iter::repeat(&Kind::Scalar)))
        {
            match (k, &a.kind) {
                (Kind::Array, ExprKind::Var(n)) => self.array_use(n, a.span),
                (Kind::Array, _) => self.err(
                    DiagKind::SyntaxError,
                    a.span,
                    format!("argument to `{}` must be an array name", callee),
                ),
                (Kind::Scalar, _) => self.expr(a),
            }
        }
    }
}
