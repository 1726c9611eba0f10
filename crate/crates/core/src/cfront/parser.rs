//! Recursive-descent parser for MiniC.

use super::ast::*;
use super::diag::{DiagKind, Diagnostic};
use super::lexer::{Tok, Token};

type PResult<T> = Result<T, Diagnostic>;

pub struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    pub fn new(src: &'a str, toks: Vec<Token>) -> Self {
        Parser { src, toks, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].span.end
        }
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, msg: impl Into<String>) -> Diagnostic {
        if let Tok::Unsupported(what) = self.peek() {
            return Diagnostic::new(
                DiagKind::UnsupportedConstruct,
                self.src,
                self.span(),
                format!("`{}` is outside the supported C subset", what),
            );
        }
        Diagnostic::new(DiagKind::SyntaxError, self.src, self.span(), msg)
    }

    fn unsupported(&self, span: Span, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(DiagKind::UnsupportedConstruct, self.src, span, msg)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<Span> {
        if self.peek() == &tok {
            Ok(self.bump().span)
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                what,
                describe(self.peek())
            )))
        }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().span;
                Ok((name, span))
            }
            other => Err(self.error(format!("expected identifier, found {}", describe(&other)))),
        }
    }

    fn at_type(&self) -> bool {
        matches!(self.peek(), Tok::KwInt | Tok::KwLong | Tok::KwVoid)
    }

    /// Parses `int`, `void`, `long`, `long int`, `long long`, `long long int`.
    /// Returns `true` for void.
    fn type_name(&mut self) -> PResult<bool> {
        match self.peek() {
            Tok::KwVoid => {
                self.bump();
                Ok(true)
            }
            Tok::KwInt => {
                self.bump();
                Ok(false)
            }
            Tok::KwLong => {
                self.bump();
                self.eat(&Tok::KwLong);
                self.eat(&Tok::KwInt);
                Ok(false)
            }
            _ => Err(self.error(format!("expected type, found {}", describe(self.peek())))),
        }
    }

    fn reject_pointer(&self) -> PResult<()> {
        if self.peek() == &Tok::Star {
            return Err(
                self.unsupported(self.span(), "pointers are outside the supported C subset")
            );
        }
        Ok(())
    }

    pub fn program(&mut self) -> PResult<Ast> {
        let mut functions = Vec::new();
        while self.peek() != &Tok::Eof {
            if let Some(f) = self.function()? {
                functions.push(f);
            }
        }
        Ok(Ast { functions })
    }

    /// A definition, or `None` for a prototype.
    fn function(&mut self) -> PResult<Option<FunctionDef>> {
        let start = self.span();
        let is_void = self.type_name()?;
        self.reject_pointer()?;
        let (name, _) = self.ident()?;
        if self.peek() != &Tok::LParen {
            return Err(
                self.unsupported(start, "only function definitions are allowed at file scope")
            );
        }
        self.bump();
        let mut params = Vec::new();
        if self.peek() == &Tok::KwVoid && self.peek_at(1) == &Tok::RParen {
            self.bump();
        } else if self.peek() != &Tok::RParen {
            loop {
                params.push(self.param()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        if self.eat(&Tok::Semi) {
            return Ok(None);
        }
        let body = self.block()?;
        let span = start.to(body.span);
        Ok(Some(FunctionDef {
            name,
            ret: if is_void {
                ReturnType::Void
            } else {
                ReturnType::Int
            },
            params,
            body,
            span,
        }))
    }

    fn param(&mut self) -> PResult<Param> {
        let start = self.span();
        if self.type_name()? {
            return Err(self.error("parameters cannot have type void"));
        }
        self.reject_pointer()?;
        let (name, _) = self.ident()?;
        let kind = if self.eat(&Tok::LBracket) {
            let len = if self.peek() == &Tok::RBracket {
                None
            } else {
                Some(self.expr()?)
            };
            self.expect(Tok::RBracket, "`]`")?;
            if self.peek() == &Tok::LBracket {
                return Err(
                    self.unsupported(self.span(), "multi-dimensional arrays are not supported")
                );
            }
            ParamKind::Array { len }
        } else {
            ParamKind::Scalar
        };
        Ok(Param {
            name,
            kind,
            span: start.to(Span::new(self.prev_end(), self.prev_end())),
        })
    }

    fn block(&mut self) -> PResult<Block> {
        let start = self.expect(Tok::LBrace, "`{`")?;
        let mut stmts = Vec::new();
        while self.peek() != &Tok::RBrace {
            if self.peek() == &Tok::Eof {
                return Err(self.error("expected `}` before end of input"));
            }
            stmts.push(self.stmt()?);
        }
        let end = self.bump().span;
        Ok(Block {
            stmts,
            span: start.to(end),
        })
    }

    /// Statement body of if/for/while: a braced block, or a single statement
    /// wrapped in a block.
    fn body(&mut self) -> PResult<Block> {
        if self.peek() == &Tok::LBrace {
            self.block()
        } else {
            let s = self.stmt()?;
            let span = s.span;
            Ok(Block {
                stmts: vec![s],
                span,
            })
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let start = self.span();
        let kind = match self.peek() {
            Tok::KwInt | Tok::KwLong => {
                let d = self.decl()?;
                self.expect(Tok::Semi, "`;`")?;
                d
            }
            Tok::KwVoid => return Err(self.error("variables cannot have type void")),
            Tok::KwIf => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let cond = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                let then_block = self.body()?;
                let else_block = if self.eat(&Tok::KwElse) {
                    Some(self.body()?)
                } else {
                    None
                };
                StmtKind::If {
                    cond,
                    then_block,
                    else_block,
                }
            }
            Tok::KwWhile => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let cond = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                let body = self.body()?;
                StmtKind::While { cond, body }
            }
            Tok::KwFor => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let init = if self.peek() == &Tok::Semi {
                    None
                } else {
                    let s = self.span();
                    let kind = if self.at_type() {
                        self.decl()?
                    } else {
                        self.simple()?
                    };
                    Some(Box::new(Stmt {
                        kind,
                        span: s.to(Span::new(self.prev_end(), self.prev_end())),
                    }))
                };
                self.expect(Tok::Semi, "`;`")?;
                if self.peek() == &Tok::Semi {
                    return Err(self.unsupported(
                        self.span(),
                        "`for` loops without a condition are not supported",
                    ));
                }
                let cond = self.expr()?;
                self.expect(Tok::Semi, "`;`")?;
                let step = if self.peek() == &Tok::RParen {
                    None
                } else {
                    let s = self.span();
                    let kind = self.simple()?;
                    Some(Box::new(Stmt {
                        kind,
                        span: s.to(Span::new(self.prev_end(), self.prev_end())),
                    }))
                };
                self.expect(Tok::RParen, "`)`")?;
                let body = self.body()?;
                StmtKind::For {
                    init,
                    cond,
                    step,
                    body,
                }
            }
            Tok::KwReturn => {
                self.bump();
                let value = if self.peek() == &Tok::Semi {
                    None
                } else {
                    Some(self.expr()?)
                };
                self.expect(Tok::Semi, "`;`")?;
                StmtKind::Return(value)
            }
            Tok::LBrace => StmtKind::Block(self.block()?),
            Tok::Semi => return Err(self.error("empty statements are not supported")),
            _ => {
                let k = self.simple()?;
                self.expect(Tok::Semi, "`;`")?;
                k
            }
        };
        Ok(Stmt {
            kind,
            span: start.to(Span::new(self.prev_end(), self.prev_end())),
        })
    }

    fn decl(&mut self) -> PResult<StmtKind> {
        self.type_name()?;
        let mut decls = Vec::new();
        loop {
            self.reject_pointer()?;
            let (name, nspan) = self.ident()?;
            let kind = if self.eat(&Tok::LBracket) {
                let len = if self.peek() == &Tok::RBracket {
                    None
                } else {
                    Some(self.expr()?)
                };
                self.expect(Tok::RBracket, "`]`")?;
                if self.peek() == &Tok::LBracket {
                    return Err(
                        self.unsupported(self.span(), "multi-dimensional arrays are not supported")
                    );
                }
                let init = if self.eat(&Tok::Assign) {
                    self.expect(Tok::LBrace, "`{`")?;
                    let mut items = Vec::new();
                    if self.peek() != &Tok::RBrace {
                        loop {
                            items.push(self.expr()?);
                            if !self.eat(&Tok::Comma) || self.peek() == &Tok::RBrace {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RBrace, "`}`")?;
                    Some(items)
                } else {
                    None
                };
                let len = match (len, &init) {
                    (Some(l), _) => l,
                    (None, Some(items)) => Expr::int(items.len() as i64),
                    (None, None) => return Err(self.error("array declaration needs a length")),
                };
                DeclKind::Array { len, init }
            } else {
                let init = if self.eat(&Tok::Assign) {
                    Some(self.expr()?)
                } else {
                    None
                };
                DeclKind::Scalar { init }
            };
            decls.push(Declarator {
                name,
                kind,
                span: nspan.to(Span::new(self.prev_end(), self.prev_end())),
            });
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(StmtKind::Decl(decls))
    }

    /// Assignment, compound assignment, increment/decrement or expression
    /// statement, without the trailing `;`.
    fn simple(&mut self) -> PResult<StmtKind> {
        if matches!(self.peek(), Tok::PlusPlus | Tok::MinusMinus) {
            let op = if self.bump().tok == Tok::PlusPlus {
                BinOp::Add
            } else {
                BinOp::Sub
            };
            let e = self.unary()?;
            let target = self.to_lvalue(e)?;
            return Ok(StmtKind::CompoundAssign {
                target,
                op,
                value: Expr::int(1),
                postfix: true,
            });
        }
        let lhs = self.expr()?;
        let compound = match self.peek() {
            Tok::Assign => {
                self.bump();
                let target = self.to_lvalue(lhs)?;
                let value = self.expr()?;
                return Ok(StmtKind::Assign { target, value });
            }
            Tok::PlusPlus | Tok::MinusMinus => {
                let op = if self.bump().tok == Tok::PlusPlus {
                    BinOp::Add
                } else {
                    BinOp::Sub
                };
                let target = self.to_lvalue(lhs)?;
                return Ok(StmtKind::CompoundAssign {
                    target,
                    op,
                    value: Expr::int(1),
                    postfix: true,
                });
            }
            Tok::PlusAssign => Some(BinOp::Add),
            Tok::MinusAssign => Some(BinOp::Sub),
            Tok::StarAssign => Some(BinOp::Mul),
            Tok::SlashAssign => Some(BinOp::Div),
            Tok::PercentAssign => Some(BinOp::Mod),
            _ => None,
        };
        match compound {
            Some(op) => {
                self.bump();
                let target = self.to_lvalue(lhs)?;
                let value = self.expr()?;
                Ok(StmtKind::CompoundAssign {
                    target,
                    op,
                    value,
                    postfix: false,
                })
            }
            None => Ok(StmtKind::Expr(lhs)),
        }
    }

    fn to_lvalue(&self, e: Expr) -> PResult<LValue> {
        match e.kind {
            ExprKind::Var(name) => Ok(LValue::Var { name, span: e.span }),
            ExprKind::Index { base, index } => Ok(LValue::Index {
                base,
                index,
                span: e.span,
            }),
            _ => Err(Diagnostic::new(
                DiagKind::SyntaxError,
                self.src,
                e.span,
                "left-hand side of assignment must be a variable or array element",
            )),
        }
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binop(&self) -> Option<BinOp> {
        Some(match self.peek() {
            Tok::OrOr => BinOp::Or,
            Tok::AndAnd => BinOp::And,
            Tok::EqEq => BinOp::Eq,
            Tok::Ne => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            Tok::Plus => BinOp::Add,
            Tok::Minus => BinOp::Sub,
            Tok::Star => BinOp::Mul,
            Tok::Slash => BinOp::Div,
            Tok::Percent => BinOp::Mod,
            _ => return None,
        })
    }

    /// Precedence climbing; all binary operators are left-associative.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binop() {
            if op.precedence() < min_prec {
                break;
            }
            self.bump();
            let rhs = self.binary(op.precedence() + 1)?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let start = self.span();
        match self.peek() {
            Tok::Minus => {
                self.bump();
                let operand = self.unary()?;
                let span = start.to(operand.span);
                Ok(Expr::new(
                    ExprKind::Unary {
                        op: UnOp::Neg,
                        operand: Box::new(operand),
                    },
                    span,
                ))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            Tok::Bang => {
                self.bump();
                let operand = self.unary()?;
                let span = start.to(operand.span);
                Ok(Expr::new(
                    ExprKind::Unary {
                        op: UnOp::Not,
                        operand: Box::new(operand),
                    },
                    span,
                ))
            }
            Tok::Star => Err(self.unsupported(
                start,
                "pointer dereference is outside the supported C subset",
            )),
            Tok::PlusPlus | Tok::MinusMinus => Err(self.unsupported(
                start,
                "increment/decrement inside an expression is not supported",
            )),
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let start = self.span();
        let e = match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Expr::new(ExprKind::Int(v), start)
            }
            Tok::Str(s) => {
                self.bump();
                Expr::new(ExprKind::Str(s), start)
            }
            Tok::LParen => {
                self.bump();
                if self.at_type() {
                    return Err(self.unsupported(start, "casts are outside the supported C subset"));
                }
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                inner
            }
            Tok::Ident(name) => {
                self.bump();
                if self.eat(&Tok::LParen) {
                    let mut args = Vec::new();
                    if self.peek() != &Tok::RParen {
                        loop {
                            args.push(self.expr()?);
                            if !self.eat(&Tok::Comma) {
                                break;
                            }
                        }
                    }
                    let end = self.expect(Tok::RParen, "`)`")?;
                    Expr::new(ExprKind::Call { callee: name, args }, start.to(end))
                } else if self.eat(&Tok::LBracket) {
                    let index = self.expr()?;
                    let end = self.expect(Tok::RBracket, "`]`")?;
                    if self.peek() == &Tok::LBracket {
                        return Err(self.unsupported(
                            self.span(),
                            "multi-dimensional arrays are not supported",
                        ));
                    }
                    Expr::new(
                        ExprKind::Index {
                            base: name,
                            index: Box::new(index),
                        },
                        start.to(end),
                    )
                } else {
                    Expr::new(ExprKind::Var(name), start)
                }
            }
            other => {
                return Err(self.error(format!("expected expression, found {}", describe(&other))))
            }
        };
        match self.peek() {
            Tok::LBracket => Err(self.unsupported(self.span(), "only named arrays can be indexed")),
            Tok::Unsupported(_) => Err(self.error("")),
            _ => Ok(e),
        }
    }

    pub fn at_eof(&self) -> bool {
        self.peek() == &Tok::Eof
    }

    pub fn eof_error(&self) -> Diagnostic {
        self.error(format!("unexpected {}", describe(self.peek())))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("integer `{}`", v),
        Tok::Ident(n) => format!("identifier `{}`", n),
        Tok::Str(_) => "string literal".into(),
        Tok::Eof => "end of input".into(),
        Tok::Unsupported(s) => format!("`{}`", s),
        other => format!("`{}`", token_text(other)),
    }
}

fn token_text(t: &Tok) -> &'static str {
    match t {
        Tok::KwInt => "int",
        Tok::KwLong => "long",
        Tok::KwVoid => "void",
        Tok::KwIf => "if",
        Tok::KwElse => "else",
        Tok::KwFor => "for",
        Tok::KwWhile => "while",
        Tok::KwReturn => "return",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBrace => "{",
        Tok::RBrace => "}",
        Tok::LBracket => "[",
        Tok::RBracket => "]",
        Tok::Semi => ";",
        Tok::Comma => ",",
        Tok::Assign => "=",
        Tok::PlusAssign => "+=",
        Tok::MinusAssign => "-=",
        Tok::StarAssign => "*=",
        Tok::SlashAssign => "/=",
        Tok::PercentAssign => "%=",
        Tok::PlusPlus => "++",
        Tok::MinusMinus => "--",
        Tok::Plus => "+",
        Tok::Minus => "-",
        Tok::Star => "*",
        Tok::Slash => "/",
        Tok::Percent => "%",
        Tok::Lt => "<",
        Tok::Le => "<=",
        Tok::Gt => ">",
        Tok::Ge => ">=",
        Tok::EqEq => "==",
        Tok::Ne => "!=",
        Tok::AndAnd => "&&",
        Tok::OrOr => "||",
        Tok::Bang => "!",
        _ => "?",
    }
}
