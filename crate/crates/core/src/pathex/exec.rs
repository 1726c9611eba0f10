//! Replay-driven symbolic execution of one function.
//!
//! Each run executes the function from the top. Whenever the run meets a
//! choice with more than one feasible option (a branch whose outcome depends
//! on the inputs, or a symbolic array length or index with several possible
//! values) it takes the option dictated by the replay prefix, or the first
//! option past the end of the prefix, and logs it. The next prefix advances
//! the deepest choice that still has options left, which yields a depth-first
//! walk with true before false and smaller values first.

use std::collections::HashMap;

use crate::cfront::{
    expr_to_string, Ast, BinOp, Block, DeclKind, Expr, ExprKind, FunctionDef, LValue, Stmt,
    StmtKind, UnOp, EXTERN_FUNCTIONS,
};
use crate::countest::{model_count_with_budget, CountError, Domains, DEFAULT_BUDGET};

use super::sym::{Constraint, PathCondition, Rel, SymExpr};
use super::{Decision, Limits, PathTrace, PathexError};

pub(super) enum Stop {
    /// No input reaches this point.
    Prune,
    /// A loop ran past the unroll limit.
    Unroll,
    Fail(PathexError),
}

impl From<PathexError> for Stop {
    fn from(e: PathexError) -> Stop {
        Stop::Fail(e)
    }
}

type Res<T> = Result<T, Stop>;

#[derive(Clone, Copy)]
enum Slot {
    Scalar(usize),
    Array(usize),
}

struct Frame<'a> {
    scopes: Vec<HashMap<&'a str, Slot>>,
}

enum Flow {
    Normal,
    Return(SymExpr),
}

pub(super) struct Run<'a> {
    ast: &'a Ast,
    domains: &'a Domains,
    limits: &'a Limits,
    sites: &'a HashMap<*const Stmt, usize>,
    prefix: &'a [usize],
    pub(super) log: Vec<(usize, usize)>,
    cond: PathCondition,
    decisions: Vec<Decision>,
    path_len: u64,
    pind: u64,
    scalars: Vec<SymExpr>,
    /// `None` marks an array parameter whose contents are unknown.
    arrays: Vec<Option<Vec<SymExpr>>>,
    frames: Vec<Frame<'a>>,
}

impl<'a> Run<'a> {
    pub(super) fn new(
        ast: &'a Ast,
        domains: &'a Domains,
        limits: &'a Limits,
        sites: &'a HashMap<*const Stmt, usize>,
        prefix: &'a [usize],
        precondition: &PathCondition,
    ) -> Run<'a> {
        Run {
            ast,
            domains,
            limits,
            sites,
            prefix,
            log: Vec::new(),
            cond: precondition.clone(),
            decisions: Vec::new(),
            path_len: 0,
            pind: 0,
            scalars: Vec::new(),
            arrays: Vec::new(),
            frames: Vec::new(),
        }
    }

    pub(super) fn go(&mut self, f: &'a FunctionDef) -> Res<PathTrace> {
        if !self.feasible(None)? {
            return Err(Stop::Prune);
        }
        let mut scope = HashMap::new();
        for p in &f.params {
            let slot = if p.is_array() {
                self.arrays.push(None);
                Slot::Array(self.arrays.len() - 1)
            } else {
                self.scalars.push(SymExpr::var(&p.name));
                Slot::Scalar(self.scalars.len() - 1)
            };
            scope.insert(p.name.as_str(), slot);
        }
        self.frames.push(Frame {
            scopes: vec![scope],
        });
        self.stmts(&f.body.stmts)?;
        Ok(PathTrace {
            id: 0,
            function: f.name.clone(),
            decisions: std::mem::take(&mut self.decisions),
            path_len: self.path_len,
            pind_mems: self.pind,
            condition: std::mem::take(&mut self.cond),
        })
    }

    fn choose(&mut self, options: usize) -> usize {
        let pos = self.log.len();
        let c = self.prefix.get(pos).copied().unwrap_or(0);
        self.log.push((options, c));
        c
    }

    fn feasible(&self, extra: Option<&Constraint>) -> Res<bool> {
        let mut pc = self.cond.clone();
        if let Some(c) = extra {
            pc.push(c.clone());
        }
        match model_count_with_budget(&pc, self.domains, DEFAULT_BUDGET) {
            Ok(n) => Ok(n > 0),
            Err(CountError::UnboundedDomain(v)) => Err(PathexError::UnboundedDomain(v).into()),
            Err(e) => Err(PathexError::Count(e).into()),
        }
    }

    /// Resolves a constraint to a truth value, forking when both outcomes are
    /// reachable.
    fn decide(&mut self, c: Constraint) -> Res<bool> {
        if c.vars().is_empty() {
            return Ok(c.holds(&|_| 0));
        }
        let neg = c.negate();
        let t = self.feasible(Some(&c))?;
        let f = self.feasible(Some(&neg))?;
        let taken = match (t, f) {
            (true, true) => self.choose(2) == 0,
            (true, false) => true,
            (false, true) => false,
            (false, false) => return Err(Stop::Prune),
        };
        self.cond.push(if taken { c } else { neg });
        Ok(taken)
    }

    fn data_dependent(&self, e: &Expr) -> Stop {
        Stop::Fail(PathexError::DataDependentBranch(expr_to_string(e)))
    }

    /// Truth of a condition, evaluated with short-circuiting.
    fn truth(&mut self, e: &'a Expr) -> Res<bool> {
        match &e.kind {
            ExprKind::Binary { op, lhs, rhs } if op.is_comparison() => {
                let l = self.eval(lhs)?;
                let r = self.eval(rhs)?;
                if l == SymExpr::Opaque || r == SymExpr::Opaque {
                    return Err(self.data_dependent(e));
                }
                self.decide(Constraint::new(
                    l,
                    Rel::from_binop(*op).expect("comparison"),
                    r,
                ))
            }
            ExprKind::Binary {
                op: BinOp::And,
                lhs,
                rhs,
            } => Ok(self.truth(lhs)? && self.truth(rhs)?),
            ExprKind::Binary {
                op: BinOp::Or,
                lhs,
                rhs,
            } => Ok(self.truth(lhs)? || self.truth(rhs)?),
            ExprKind::Unary {
                op: UnOp::Not,
                operand,
            } => Ok(!self.truth(operand)?),
            _ => {
                let v = self.eval(e)?;
                if v == SymExpr::Opaque {
                    return Err(self.data_dependent(e));
                }
                self.decide(Constraint::new(v, Rel::Ne, SymExpr::constant(0)))
            }
        }
    }

    /// A concrete value for `v`, forking over its feasible values if needed.
    fn concretize(&mut self, v: SymExpr, e: &Expr) -> Res<i64> {
        if let Some(c) = v.as_constant() {
            return Ok(c);
        }
        if v == SymExpr::Opaque {
            return Err(self.data_dependent(e));
        }
        let vars: Vec<String> = v.vars().into_iter().collect();
        let mut size: u128 = 1;
        for name in &vars {
            let &(lo, hi) = self
                .domains
                .get(name)
                .ok_or_else(|| PathexError::UnboundedDomain(name.clone()))?;
            size = size.saturating_mul(if lo > hi {
                0
            } else {
                (hi as i128 - lo as i128 + 1) as u128
            });
        }
        if size > DEFAULT_BUDGET as u128 {
            return Err(PathexError::Count(CountError::BudgetExceeded(DEFAULT_BUDGET)).into());
        }
        // Candidate values over the box of the expression's own variables.
        let mut candidates = std::collections::BTreeSet::new();
        let mut point: Vec<i64> = vars.iter().map(|n| self.domains[n].0).collect();
        if size > 0 {
            loop {
                let env = |name: &str| point[vars.iter().position(|n| n == name).expect("var")];
                if let Some(x) = v.eval(&env) {
                    if let Ok(x) = i64::try_from(x) {
                        candidates.insert(x);
                    }
                }
                let mut i = 0;
                while i < vars.len() && point[i] == self.domains[&vars[i]].1 {
                    point[i] = self.domains[&vars[i]].0;
                    i += 1;
                }
                if i == vars.len() {
                    break;
                }
                point[i] += 1;
            }
        }
        let mut feasible = Vec::new();
        for x in candidates {
            let c = Constraint::new(v.clone(), Rel::Eq, SymExpr::constant(x));
            if self.feasible(Some(&c))? {
                feasible.push((x, c));
            }
        }
        match feasible.len() {
            0 => Err(Stop::Prune),
            1 => Ok(feasible[0].0),
            n => {
                let k = self.choose(n);
                let (x, c) = feasible.swap_remove(k);
                self.cond.push(c);
                Ok(x)
            }
        }
    }

    fn frame(&mut self) -> &mut Frame<'a> {
        self.frames.last_mut().expect("active frame")
    }

    fn at_entry(&self) -> bool {
        self.frames.len() == 1
    }

    fn lookup(&self, name: &str) -> Slot {
        let f = self.frames.last().expect("active frame");
        f.scopes
            .iter()
            .rev()
            .find_map(|s| s.get(name).copied())
            .expect("names are resolved")
    }

    fn count(&mut self, n: u64) {
        if self.at_entry() {
            self.pind += n;
        }
    }

    fn runtime(&self, msg: String) -> Stop {
        Stop::Fail(PathexError::Runtime(msg))
    }

    fn element(&mut self, base: &str, index: &'a Expr) -> Res<(usize, usize)> {
        let Slot::Array(a) = self.lookup(base) else {
            unreachable!("resolved as array")
        };
        let iv = self.eval(index)?;
        let i = self.concretize(iv, index)?;
        if let Some(elems) = &self.arrays[a] {
            if i < 0 || i as usize >= elems.len() {
                return Err(self.runtime(format!(
                    "index {} out of bounds for `{}` of length {}",
                    i,
                    base,
                    elems.len()
                )));
            }
        }
        Ok((a, i as usize))
    }

    fn read(&self, a: usize, i: usize) -> SymExpr {
        match &self.arrays[a] {
            Some(elems) => elems[i].clone(),
            None => SymExpr::Opaque,
        }
    }

    fn write(&mut self, a: usize, i: usize, v: SymExpr) {
        if let Some(elems) = &mut self.arrays[a] {
            elems[i] = v;
        }
    }

    fn arith(&self, op: BinOp, l: &SymExpr, r: &SymExpr) -> Res<SymExpr> {
        SymExpr::binary(op, l, r).ok_or_else(|| self.runtime("division by zero".into()))
    }

    fn eval(&mut self, e: &'a Expr) -> Res<SymExpr> {
        match &e.kind {
            ExprKind::Int(v) => Ok(SymExpr::constant(*v)),
            ExprKind::Str(_) => Ok(SymExpr::constant(0)),
            ExprKind::Var(n) => match self.lookup(n) {
                Slot::Scalar(s) => Ok(self.scalars[s].clone()),
                Slot::Array(_) => unreachable!("arrays are not values"),
            },
            ExprKind::Index { base, index } => {
                let (a, i) = self.element(base, index)?;
                self.count(1);
                Ok(self.read(a, i))
            }
            ExprKind::Binary { op, .. } if op.is_logical() => {
                Ok(SymExpr::constant(i64::from(self.truth(e)?)))
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let l = self.eval(lhs)?;
                let r = self.eval(rhs)?;
                self.arith(*op, &l, &r)
            }
            ExprKind::Unary { op, operand } => Ok(SymExpr::unary(*op, &self.eval(operand)?)),
            ExprKind::Call { callee, args } => self.call(callee, args),
        }
    }

    fn call(&mut self, callee: &str, args: &'a [Expr]) -> Res<SymExpr> {
        if EXTERN_FUNCTIONS.contains(&callee) {
            for a in args {
                self.eval(a)?;
            }
            return Ok(SymExpr::constant(0));
        }
        let f = self.ast.function(callee).expect("resolved callee");
        if self.frames.len() >= self.limits.max_depth {
            return Err(PathexError::RecursionLimit(self.limits.max_depth).into());
        }
        let mut scope = HashMap::new();
        for (p, a) in f.params.iter().zip(args) {
            let slot = if p.is_array() {
                let ExprKind::Var(n) = &a.kind else {
                    unreachable!("array arguments are names")
                };
                self.lookup(n)
            } else {
                let v = self.eval(a)?;
                self.scalars.push(v);
                Slot::Scalar(self.scalars.len() - 1)
            };
            scope.insert(p.name.as_str(), slot);
        }
        self.frames.push(Frame {
            scopes: vec![scope],
        });
        let flow = self.stmts(&f.body.stmts);
        self.frames.pop();
        match flow? {
            Flow::Return(v) => Ok(v),
            Flow::Normal => Ok(SymExpr::constant(0)),
        }
    }

    fn block(&mut self, b: &'a Block) -> Res<Flow> {
        self.frame().scopes.push(HashMap::new());
        let r = self.stmts(&b.stmts);
        self.frame().scopes.pop();
        r
    }

    fn stmts(&mut self, stmts: &'a [Stmt]) -> Res<Flow> {
        for s in stmts {
            if let Flow::Return(v) = self.stmt(s)? {
                return Ok(Flow::Return(v));
            }
        }
        Ok(Flow::Normal)
    }

    fn declare(&mut self, name: &'a str, slot: Slot) {
        self.frame()
            .scopes
            .last_mut()
            .expect("scope")
            .insert(name, slot);
    }

    fn log(&mut self, s: &Stmt, cond: &Expr, taken: bool) {
        if self.at_entry() {
            self.path_len += 1;
            self.decisions.push(Decision {
                site: self
                    .sites
                    .get(&(s as *const Stmt))
                    .copied()
                    .unwrap_or(usize::MAX),
                text: expr_to_string(cond),
                taken,
            });
        }
    }

    fn assign(&mut self, target: &'a LValue, value: &'a Expr, op: Option<BinOp>) -> Res<()> {
        match target {
            LValue::Var { name, .. } => {
                let Slot::Scalar(s) = self.lookup(name) else {
                    unreachable!("scalar target")
                };
                let v = self.eval(value)?;
                let v = match op {
                    Some(op) => self.arith(op, &self.scalars[s].clone(), &v)?,
                    None => v,
                };
                self.scalars[s] = v;
            }
            LValue::Index { base, index, .. } => {
                let (a, i) = self.element(base, index)?;
                let old = if op.is_some() {
                    self.count(1);
                    Some(self.read(a, i))
                } else {
                    None
                };
                let v = self.eval(value)?;
                let v = match (op, old) {
                    (Some(op), Some(old)) => self.arith(op, &old, &v)?,
                    _ => v,
                };
                self.count(1);
                self.write(a, i, v);
            }
        }
        Ok(())
    }

    fn unrolled(&self, iterations: usize) -> Res<()> {
        if iterations > self.limits.max_loop_unroll {
            Err(Stop::Unroll)
        } else {
            Ok(())
        }
    }

    fn stmt(&mut self, s: &'a Stmt) -> Res<Flow> {
        match &s.kind {
            StmtKind::Decl(ds) => {
                for d in ds {
                    match &d.kind {
                        DeclKind::Scalar { init } => {
                            let v = match init {
                                Some(e) => self.eval(e)?,
                                None => SymExpr::constant(0),
                            };
                            self.scalars.push(v);
                            self.declare(&d.name, Slot::Scalar(self.scalars.len() - 1));
                        }
                        DeclKind::Array { len, init } => {
                            let lv = self.eval(len)?;
                            let n = self.concretize(lv, len)?;
                            if n < 0 {
                                return Err(
                                    self.runtime(format!("negative length {} for `{}`", n, d.name))
                                );
                            }
                            let mut elems = vec![SymExpr::constant(0); n as usize];
                            for (i, item) in init.iter().flatten().enumerate() {
                                let v = self.eval(item)?;
                                if i < elems.len() {
                                    elems[i] = v;
                                }
                            }
                            self.arrays.push(Some(elems));
                            self.declare(&d.name, Slot::Array(self.arrays.len() - 1));
                        }
                    }
                }
            }
            StmtKind::Assign { target, value } => self.assign(target, value, None)?,
            StmtKind::CompoundAssign {
                target, op, value, ..
            } => self.assign(target, value, Some(*op))?,
            StmtKind::Expr(e) => {
                self.eval(e)?;
            }
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                let taken = self.truth(cond)?;
                self.log(s, cond, taken);
                if taken {
                    return self.block(then_block);
                } else if let Some(b) = else_block {
                    return self.block(b);
                }
            }
            StmtKind::While { cond, body } => {
                let mut n = 0;
                while self.truth(cond)? {
                    self.log(s, cond, true);
                    n += 1;
                    self.unrolled(n)?;
                    if let Flow::Return(v) = self.block(body)? {
                        return Ok(Flow::Return(v));
                    }
                }
            }
            StmtKind::For {
                init,
                cond,
                step,
                body,
            } => {
                self.frame().scopes.push(HashMap::new());
                let r = self.for_loop(s, init.as_deref(), cond, step.as_deref(), body);
                self.frame().scopes.pop();
                return r;
            }
            StmtKind::Return(e) => {
                let v = match e {
                    Some(e) => self.eval(e)?,
                    None => SymExpr::constant(0),
                };
                return Ok(Flow::Return(v));
            }
            StmtKind::Block(b) => return self.block(b),
        }
        Ok(Flow::Normal)
    }

    fn for_loop(
        &mut self,
        s: &'a Stmt,
        init: Option<&'a Stmt>,
        cond: &'a Expr,
        step: Option<&'a Stmt>,
        body: &'a Block,
    ) -> Res<Flow> {
        if let Some(i) = init {
            self.stmt(i)?;
        }
        let mut n = 0;
        while self.truth(cond)? {
            self.log(s, cond, true);
            n += 1;
            self.unrolled(n)?;
            if let Flow::Return(v) = self.block(body)? {
                return Ok(Flow::Return(v));
            }
            if let Some(st) = step {
                self.stmt(st)?;
            }
        }
        Ok(Flow::Normal)
    }
}

/// Numbers branch statements (`if`, `for`, `while`) in pre-order.
pub(super) fn number_sites(f: &FunctionDef) -> HashMap<*const Stmt, usize> {
    fn walk(stmts: &[Stmt], out: &mut HashMap<*const Stmt, usize>) {
        for s in stmts {
            match &s.kind {
                StmtKind::If {
                    then_block,
                    else_block,
                    ..
                } => {
                    out.insert(s as *const Stmt, out.len());
                    walk(&then_block.stmts, out);
                    if let Some(b) = else_block {
                        walk(&b.stmts, out);
                    }
                }
                StmtKind::For { body, .. } | StmtKind::While { body, .. } => {
                    out.insert(s as *const Stmt, out.len());
                    walk(&body.stmts, out);
                }
                StmtKind::Block(b) => walk(&b.stmts, out),
                _ => {}
            }
        }
    }
    let mut out = HashMap::new();
    walk(&f.body.stmts, &mut out);
    out
}

/// The replay prefix for the next run, or `None` when every choice is spent.
pub(super) fn next_prefix(log: &[(usize, usize)]) -> Option<Vec<usize>> {
    let i = log
        .iter()
        .rposition(|&(options, chosen)| chosen + 1 < options)?;
    let mut p: Vec<usize> = log[..i].iter().map(|&(_, c)| c).collect();
    p.push(log[i].1 + 1);
    Some(p)
}
