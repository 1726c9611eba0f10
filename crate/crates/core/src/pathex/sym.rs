//! Symbolic values over integer inputs and the constraints built from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cfront::{expr_to_string, parse_expr, BinOp, Expr, ExprKind, UnOp};

/// Expression tree over input variables, for values that left affine form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Const(i64),
    Var(String),
    Bin(BinOp, Box<Term>, Box<Term>),
    Un(UnOp, Box<Term>),
}

impl Term {
    /// Evaluates with C semantics (wrapping, truncating division). `None` on
    /// division by zero.
    pub fn eval(&self, env: &dyn Fn(&str) -> i64) -> Option<i64> {
        Some(match self {
            Term::Const(c) => *c,
            Term::Var(v) => env(v),
            Term::Un(UnOp::Neg, t) => t.eval(env)?.wrapping_neg(),
            Term::Un(UnOp::Not, t) => i64::from(t.eval(env)? == 0),
            Term::Bin(BinOp::And, l, r) => i64::from(l.eval(env)? != 0 && r.eval(env)? != 0),
            Term::Bin(BinOp::Or, l, r) => i64::from(l.eval(env)? != 0 || r.eval(env)? != 0),
            Term::Bin(op, l, r) => apply_binop(*op, l.eval(env)?, r.eval(env)?)?,
        })
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Const(_) => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Bin(_, l, r) => {
                l.vars(out);
                r.vars(out);
            }
            Term::Un(_, t) => t.vars(out),
        }
    }

    pub fn to_expr(&self) -> Expr {
        match self {
            Term::Const(c) => Expr::int(*c),
            Term::Var(v) => Expr::var(v),
            Term::Bin(op, l, r) => Expr::binary(*op, l.to_expr(), r.to_expr()),
            Term::Un(op, t) => Expr::unary(*op, t.to_expr()),
        }
    }
}

/// Integer binary operator with C semantics; `None` on division by zero.
pub fn apply_binop(op: BinOp, a: i64, b: i64) -> Option<i64> {
    Some(match op {
        BinOp::Add => a.wrapping_add(b),
        BinOp::Sub => a.wrapping_sub(b),
        BinOp::Mul => a.wrapping_mul(b),
        BinOp::Div => {
            if b == 0 {
                return None;
            }
            a.wrapping_div(b)
        }
        BinOp::Mod => {
            if b == 0 {
                return None;
            }
            a.wrapping_rem(b)
        }
        BinOp::Lt => i64::from(a < b),
        BinOp::Le => i64::from(a <= b),
        BinOp::Gt => i64::from(a > b),
        BinOp::Ge => i64::from(a >= b),
        BinOp::Eq => i64::from(a == b),
        BinOp::Ne => i64::from(a != b),
        BinOp::And => i64::from(a != 0 && b != 0),
        BinOp::Or => i64::from(a != 0 || b != 0),
    })
}

/// `constant + Σ coeff·var`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Affine {
    pub constant: i64,
    pub coeffs: BTreeMap<String, i64>,
}

impl Affine {
    pub fn constant(c: i64) -> Affine {
        Affine {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn var(name: &str) -> Affine {
        Affine {
            constant: 0,
            coeffs: BTreeMap::from([(name.to_string(), 1)]),
        }
    }

    pub fn as_constant(&self) -> Option<i64> {
        self.coeffs.is_empty().then_some(self.constant)
    }

    fn combine(&self, o: &Affine, sign: i64) -> Affine {
        let mut r = self.clone();
        r.constant = r.constant.wrapping_add(o.constant.wrapping_mul(sign));
        for (v, c) in &o.coeffs {
            let e = r.coeffs.entry(v.clone()).or_insert(0);
            *e = e.wrapping_add(c.wrapping_mul(sign));
            if *e == 0 {
                r.coeffs.remove(v);
            }
        }
        r
    }

    fn scale(&self, k: i64) -> Affine {
        if k == 0 {
            return Affine::constant(0);
        }
        Affine {
            constant: self.constant.wrapping_mul(k),
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| (v.clone(), c.wrapping_mul(k)))
                .filter(|(_, c)| *c != 0)
                .collect(),
        }
    }

    /// Exact value over mathematical integers.
    pub fn eval_exact(&self, env: &dyn Fn(&str) -> i64) -> i128 {
        self.coeffs
            .iter()
            .fold(self.constant as i128, |acc, (v, c)| {
                acc + (*c as i128) * (env(v) as i128)
            })
    }

    pub fn to_expr(&self) -> Expr {
        let mut acc: Option<Expr> = None;
        for (v, c) in &self.coeffs {
            let mag = c.unsigned_abs();
            let term = if mag == 1 {
                Expr::var(v)
            } else {
                Expr::binary(BinOp::Mul, Expr::int(mag as i64), Expr::var(v))
            };
            acc = Some(match acc {
                None if *c < 0 => Expr::unary(UnOp::Neg, term),
                None => term,
                Some(a) if *c < 0 => Expr::binary(BinOp::Sub, a, term),
                Some(a) => Expr::binary(BinOp::Add, a, term),
            });
        }
        match acc {
            None => Expr::int(self.constant),
            Some(a) if self.constant > 0 => Expr::binary(BinOp::Add, a, Expr::int(self.constant)),
            Some(a) if self.constant < 0 && self.constant != i64::MIN => {
                Expr::binary(BinOp::Sub, a, Expr::int(-self.constant))
            }
            Some(a) if self.constant < 0 => Expr::binary(BinOp::Add, a, Expr::int(self.constant)),
            Some(a) => a,
        }
    }

    fn to_term(&self) -> Term {
        let mut t: Option<Term> = None;
        for (v, c) in &self.coeffs {
            let part = if *c == 1 {
                Term::Var(v.clone())
            } else {
                Term::Bin(
                    BinOp::Mul,
                    Box::new(Term::Const(*c)),
                    Box::new(Term::Var(v.clone())),
                )
            };
            t = Some(match t {
                None => part,
                Some(a) => Term::Bin(BinOp::Add, Box::new(a), Box::new(part)),
            });
        }
        match t {
            None => Term::Const(self.constant),
            Some(a) if self.constant == 0 => a,
            Some(a) => Term::Bin(
                BinOp::Add,
                Box::new(a),
                Box::new(Term::Const(self.constant)),
            ),
        }
    }
}

/// Symbolic value of a MiniC expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymExpr {
    Affine(Affine),
    NonAffine(Term),
    /// Depends on array-parameter contents, which are not modeled.
    Opaque,
}

impl SymExpr {
    pub fn constant(c: i64) -> SymExpr {
        SymExpr::Affine(Affine::constant(c))
    }

    pub fn var(name: &str) -> SymExpr {
        SymExpr::Affine(Affine::var(name))
    }

    pub fn as_constant(&self) -> Option<i64> {
        match self {
            SymExpr::Affine(a) => a.as_constant(),
            _ => None,
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, SymExpr::Affine(_))
    }

    fn to_term(&self) -> Option<Term> {
        match self {
            SymExpr::Affine(a) => Some(a.to_term()),
            SymExpr::NonAffine(t) => Some(t.clone()),
            SymExpr::Opaque => None,
        }
    }

    /// Applies a binary operator. `None` when both sides are constant and the
    /// operation divides by zero.
    pub fn binary(op: BinOp, l: &SymExpr, r: &SymExpr) -> Option<SymExpr> {
        if let (Some(a), Some(b)) = (l.as_constant(), r.as_constant()) {
            return apply_binop(op, a, b).map(SymExpr::constant);
        }
        let (SymExpr::Affine(la), SymExpr::Affine(ra)) = (l, r) else {
            return Some(Self::nonaffine(op, l, r));
        };
        Some(match op {
            BinOp::Add => SymExpr::Affine(la.combine(ra, 1)),
            BinOp::Sub => SymExpr::Affine(la.combine(ra, -1)),
            BinOp::Mul => match (la.as_constant(), ra.as_constant()) {
                (Some(k), _) => SymExpr::Affine(ra.scale(k)),
                (_, Some(k)) => SymExpr::Affine(la.scale(k)),
                _ => Self::nonaffine(op, l, r),
            },
            _ => Self::nonaffine(op, l, r),
        })
    }

    fn nonaffine(op: BinOp, l: &SymExpr, r: &SymExpr) -> SymExpr {
        match (l.to_term(), r.to_term()) {
            (Some(a), Some(b)) => SymExpr::NonAffine(Term::Bin(op, Box::new(a), Box::new(b))),
            _ => SymExpr::Opaque,
        }
    }

    pub fn unary(op: UnOp, v: &SymExpr) -> SymExpr {
        match (op, v) {
            (_, SymExpr::Opaque) => SymExpr::Opaque,
            (UnOp::Neg, SymExpr::Affine(a)) => SymExpr::Affine(a.scale(-1)),
            (UnOp::Not, _) if v.as_constant().is_some() => {
                SymExpr::constant(i64::from(v.as_constant() == Some(0)))
            }
            _ => SymExpr::NonAffine(Term::Un(op, Box::new(v.to_term().expect("not opaque")))),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        match self {
            SymExpr::Affine(a) => out.extend(a.coeffs.keys().cloned()),
            SymExpr::NonAffine(t) => t.vars(&mut out),
            SymExpr::Opaque => {}
        }
        out
    }

    /// Value at a point: exact for affine forms, C semantics otherwise.
    pub fn eval(&self, env: &dyn Fn(&str) -> i64) -> Option<i128> {
        match self {
            SymExpr::Affine(a) => Some(a.eval_exact(env)),
            SymExpr::NonAffine(t) => t.eval(env).map(i128::from),
            SymExpr::Opaque => None,
        }
    }

    /// Replaces `var` by a constant.
    pub fn substitute(&self, var: &str, value: i64) -> SymExpr {
        match self {
            SymExpr::Affine(a) => {
                let mut a = a.clone();
                if let Some(c) = a.coeffs.remove(var) {
                    a.constant = a.constant.wrapping_add(c.wrapping_mul(value));
                }
                SymExpr::Affine(a)
            }
            SymExpr::NonAffine(t) => SymExpr::NonAffine(subst_term(t, var, value)),
            SymExpr::Opaque => SymExpr::Opaque,
        }
    }

    pub fn to_expr(&self) -> Option<Expr> {
        match self {
            SymExpr::Affine(a) => Some(a.to_expr()),
            SymExpr::NonAffine(t) => Some(t.to_expr()),
            SymExpr::Opaque => None,
        }
    }

    /// Builds a symbolic value from a variable-only expression (inputs are the
    /// free variables).
    pub fn from_expr(e: &Expr) -> Result<SymExpr, String> {
        match &e.kind {
            ExprKind::Int(v) => Ok(SymExpr::constant(*v)),
            ExprKind::Var(n) => Ok(SymExpr::var(n)),
            ExprKind::Binary { op, lhs, rhs } => {
                let (l, r) = (Self::from_expr(lhs)?, Self::from_expr(rhs)?);
                Self::binary(*op, &l, &r).ok_or_else(|| "division by zero".to_string())
            }
            ExprKind::Unary { op, operand } => Ok(Self::unary(*op, &Self::from_expr(operand)?)),
            _ => Err(format!("unsupported term `{}`", expr_to_string(e))),
        }
    }
}

fn subst_term(t: &Term, var: &str, value: i64) -> Term {
    match t {
        Term::Var(v) if v == var => Term::Const(value),
        Term::Const(_) | Term::Var(_) => t.clone(),
        Term::Bin(op, l, r) => Term::Bin(
            *op,
            Box::new(subst_term(l, var, value)),
            Box::new(subst_term(r, var, value)),
        ),
        Term::Un(op, x) => Term::Un(*op, Box::new(subst_term(x, var, value))),
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_expr() {
            Some(e) => f.write_str(&expr_to_string(&e)),
            None => f.write_str("<array data>"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Rel {
    pub fn from_binop(op: BinOp) -> Option<Rel> {
        Some(match op {
            BinOp::Lt => Rel::Lt,
            BinOp::Le => Rel::Le,
            BinOp::Gt => Rel::Gt,
            BinOp::Ge => Rel::Ge,
            BinOp::Eq => Rel::Eq,
            BinOp::Ne => Rel::Ne,
            _ => return None,
        })
    }

    pub fn negate(self) -> Rel {
        match self {
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Gt => Rel::Le,
            Rel::Ge => Rel::Lt,
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
            Rel::Eq => "==",
            Rel::Ne => "!=",
        }
    }

    pub fn holds(self, v: i128) -> bool {
        match self {
            Rel::Lt => v < 0,
            Rel::Le => v <= 0,
            Rel::Gt => v > 0,
            Rel::Ge => v >= 0,
            Rel::Eq => v == 0,
            Rel::Ne => v != 0,
        }
    }
}

/// `lhs rel rhs`, stored normalized as `expr rel 0` with `expr = lhs - rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub expr: SymExpr,
    pub rel: Rel,
    pub lhs: SymExpr,
    pub rhs: SymExpr,
}

impl Constraint {
    pub fn new(lhs: SymExpr, rel: Rel, rhs: SymExpr) -> Constraint {
        let expr = if rhs.as_constant() == Some(0) {
            lhs.clone()
        } else {
            SymExpr::binary(BinOp::Sub, &lhs, &rhs).expect("subtraction is total")
        };
        Constraint {
            expr,
            rel,
            lhs,
            rhs,
        }
    }

    pub fn negate(&self) -> Constraint {
        Constraint {
            rel: self.rel.negate(),
            ..self.clone()
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.expr.vars()
    }

    /// Truth at a point; a division by zero counts as unsatisfied.
    pub fn holds(&self, env: &dyn Fn(&str) -> i64) -> bool {
        self.expr.eval(env).is_some_and(|v| self.rel.holds(v))
    }

    pub fn substitute(&self, var: &str, value: i64) -> Constraint {
        Constraint {
            expr: self.expr.substitute(var, value),
            rel: self.rel,
            lhs: self.lhs.substitute(var, value),
            rhs: self.rhs.substitute(var, value),
        }
    }

    pub fn text(&self) -> String {
        format!("{} {} {}", self.lhs, self.rel.symbol(), self.rhs)
    }
}

/// Conjunction of constraints.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PathCondition {
    pub constraints: Vec<Constraint>,
}

impl PathCondition {
    pub fn push(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.constraints.iter().flat_map(|c| c.vars()).collect()
    }

    pub fn holds(&self, env: &dyn Fn(&str) -> i64) -> bool {
        self.constraints.iter().all(|c| c.holds(env))
    }

    /// `(c1) && (c2) && ...`, or `1` for the empty conjunction.
    pub fn text(&self) -> String {
        if self.constraints.is_empty() {
            return "1".into();
        }
        self.constraints
            .iter()
            .map(|c| format!("({})", c.text()))
            .collect::<Vec<_>>()
            .join(" && ")
    }

    /// Parses the rendering produced by [`PathCondition::text`] (or any
    /// `&&`-conjunction over plain variables).
    pub fn from_text(text: &str) -> Result<PathCondition, String> {
        let e = parse_expr(text).map_err(|d| d.render("<condition>"))?;
        let mut conjuncts = Vec::new();
        split_and(&e, &mut conjuncts);
        let mut pc = PathCondition::default();
        for c in conjuncts {
            let constraint = match &c.kind {
                ExprKind::Binary { op, lhs, rhs } if op.is_comparison() => Constraint::new(
                    SymExpr::from_expr(lhs)?,
                    Rel::from_binop(*op).expect("comparison"),
                    SymExpr::from_expr(rhs)?,
                ),
                _ => Constraint::new(SymExpr::from_expr(c)?, Rel::Ne, SymExpr::constant(0)),
            };
            if constraint.vars().is_empty() && constraint.holds(&|_| 0) {
                continue;
            }
            pc.push(constraint);
        }
        Ok(pc)
    }
}

/// Flattens a tree of `&&` into its conjuncts, left to right.
pub fn split_and<'e>(e: &'e Expr, out: &mut Vec<&'e Expr>) {
    match &e.kind {
        ExprKind::Binary {
            op: BinOp::And,
            lhs,
            rhs,
        } => {
            split_and(lhs, out);
            split_and(rhs, out);
        }
        _ => out.push(e),
    }
}
