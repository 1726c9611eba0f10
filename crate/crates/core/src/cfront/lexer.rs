use super::ast::Span;
use super::diag::{DiagKind, Diagnostic};

/// Headers whose `#include` lines are accepted and dropped.
pub const ALLOWED_HEADERS: &[&str] = &["stdio.h", "stdlib.h", "string.h", "stdint.h", "time.h"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(i64),
    Ident(String),
    Str(String),
    // keywords
    KwInt,
    KwLong,
    KwVoid,
    KwIf,
    KwElse,
    KwFor,
    KwWhile,
    KwReturn,
    // punctuation
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Assign,
    PlusAssign,
    MinusAssign,
    StarAssign,
    SlashAssign,
    PercentAssign,
    PlusPlus,
    MinusMinus,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Ne,
    AndAnd,
    OrOr,
    Bang,
    /// Lexically valid C outside the subset (keyword or operator).
    Unsupported(String),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

const UNSUPPORTED_KEYWORDS: &[&str] = &[
    "struct", "union", "enum", "typedef", "char", "float", "double", "short", "unsigned", "signed",
    "const", "static", "extern", "volatile", "register", "switch", "case", "default", "do",
    "break", "continue", "goto", "sizeof", "auto", "inline", "bool",
];

pub fn lex(source: &str) -> Result<Vec<Token>, Diagnostic> {
    Lexer {
        src: source,
        bytes: source.as_bytes(),
        pos: 0,
        line_start: true,
    }
    .run()
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line_start: bool,
}

impl<'a> Lexer<'a> {
    fn err(&self, kind: DiagKind, start: usize, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(
            kind,
            self.src,
            Span::new(start, self.pos.max(start + 1)),
            msg,
        )
    }

    fn peek(&self, ahead: usize) -> u8 {
        self.bytes.get(self.pos + ahead).copied().unwrap_or(0)
    }

    fn run(mut self) -> Result<Vec<Token>, Diagnostic> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia()?;
            let start = self.pos;
            if self.pos >= self.bytes.len() {
                out.push(Token {
                    tok: Tok::Eof,
                    span: Span::new(start, start),
                });
                return Ok(out);
            }
            if self.line_start && self.peek(0) == b'#' {
                self.directive()?;
                continue;
            }
            self.line_start = false;
            let tok = self.token()?;
            out.push(Token {
                tok,
                span: Span::new(start, self.pos),
            });
        }
    }

    fn skip_trivia(&mut self) -> Result<(), Diagnostic> {
        while self.pos < self.bytes.len() {
            match self.peek(0) {
                b'\n' => {
                    self.pos += 1;
                    self.line_start = true;
                }
                b' ' | b'\t' | b'\r' | 0x0c => self.pos += 1,
                b'/' if self.peek(1) == b'/' => {
                    while self.pos < self.bytes.len() && self.peek(0) != b'\n' {
                        self.pos += 1;
                    }
                }
                b'/' if self.peek(1) == b'*' => {
                    let start = self.pos;
                    self.pos += 2;
                    loop {
                        if self.pos >= self.bytes.len() {
                            return Err(self.err(
                                DiagKind::SyntaxError,
                                start,
                                "unterminated comment",
                            ));
                        }
                        if self.peek(0) == b'*' && self.peek(1) == b'/' {
                            self.pos += 2;
                            break;
                        }
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
        Ok(())
    }

    fn directive(&mut self) -> Result<(), Diagnostic> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.peek(0) != b'\n' {
            self.pos += 1;
        }
        let mut line = &self.src[start..self.pos];
        if let Some(i) = line.find("//") {
            line = &line[..i];
        }
        let rest = line[1..].trim_start();
        if let Some(header) = rest.strip_prefix("include") {
            let header = header.trim();
            let name = header
                .strip_prefix('<')
                .and_then(|h| h.strip_suffix('>'))
                .or_else(|| header.strip_prefix('"').and_then(|h| h.strip_suffix('"')));
            match name {
                Some(h) if ALLOWED_HEADERS.contains(&h) => return Ok(()),
                Some(h) => {
                    return Err(self.err(
                        DiagKind::UnsupportedConstruct,
                        start,
                        format!("#include of `{}` is not supported", h),
                    ))
                }
                None => return Err(self.err(DiagKind::SyntaxError, start, "malformed #include")),
            }
        }
        Err(self.err(
            DiagKind::UnsupportedConstruct,
            start,
            format!("preprocessor directive `{}` is not supported", line.trim()),
        ))
    }

    fn token(&mut self) -> Result<Tok, Diagnostic> {
        let start = self.pos;
        let c = self.peek(0);
        if c.is_ascii_digit() {
            return self.number();
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.peek(0).is_ascii_alphanumeric() || self.peek(0) == b'_' {
                self.pos += 1;
            }
            let word = &self.src[start..self.pos];
            return Ok(match word {
                "int" => Tok::KwInt,
                "long" => Tok::KwLong,
                "void" => Tok::KwVoid,
                "if" => Tok::KwIf,
                "else" => Tok::KwElse,
                "for" => Tok::KwFor,
                "while" => Tok::KwWhile,
                "return" => Tok::KwReturn,
                w if UNSUPPORTED_KEYWORDS.contains(&w) => Tok::Unsupported(w.to_string()),
                w => Tok::Ident(w.to_string()),
            });
        }
        if c == b'"' {
            return self.string();
        }
        if c == b'\'' {
            self.pos += 1;
            return Ok(Tok::Unsupported("character literal".into()));
        }
        let two = [c, self.peek(1)];
        let (tok, len) = match &two {
            b"+=" => (Tok::PlusAssign, 2),
            b"-=" => (Tok::MinusAssign, 2),
            b"*=" => (Tok::StarAssign, 2),
            b"/=" => (Tok::SlashAssign, 2),
            b"%=" => (Tok::PercentAssign, 2),
            b"++" => (Tok::PlusPlus, 2),
            b"--" => (Tok::MinusMinus, 2),
            b"<=" => (Tok::Le, 2),
            b">=" => (Tok::Ge, 2),
            b"==" => (Tok::EqEq, 2),
            b"!=" => (Tok::Ne, 2),
            b"&&" => (Tok::AndAnd, 2),
            b"||" => (Tok::OrOr, 2),
            b"->" => (Tok::Unsupported("->".into()), 2),
            b"<<" => (Tok::Unsupported("<<".into()), 2),
            b">>" => (Tok::Unsupported(">>".into()), 2),
            _ => match c {
                b'(' => (Tok::LParen, 1),
                b')' => (Tok::RParen, 1),
                b'{' => (Tok::LBrace, 1),
                b'}' => (Tok::RBrace, 1),
                b'[' => (Tok::LBracket, 1),
                b']' => (Tok::RBracket, 1),
                b';' => (Tok::Semi, 1),
                b',' => (Tok::Comma, 1),
                b'=' => (Tok::Assign, 1),
                b'+' => (Tok::Plus, 1),
                b'-' => (Tok::Minus, 1),
                b'*' => (Tok::Star, 1),
                b'/' => (Tok::Slash, 1),
                b'%' => (Tok::Percent, 1),
                b'<' => (Tok::Lt, 1),
                b'>' => (Tok::Gt, 1),
                b'!' => (Tok::Bang, 1),
                b'&' | b'|' | b'^' | b'~' | b'?' | b':' | b'.' => {
                    (Tok::Unsupported((c as char).to_string()), 1)
                }
                _ => {
                    let ch = self.src[start..].chars().next().unwrap_or('?');
                    self.pos += ch.len_utf8();
                    return Err(self.err(
                        DiagKind::SyntaxError,
                        start,
                        format!("unexpected character `{}`", ch.escape_default()),
                    ));
                }
            },
        };
        self.pos += len;
        Ok(tok)
    }

    fn number(&mut self) -> Result<Tok, Diagnostic> {
        let start = self.pos;
        while self.peek(0).is_ascii_alphanumeric() || self.peek(0) == b'.' {
            self.pos += 1;
        }
        let text = &self.src[start..self.pos];
        if text.contains('.') || text.contains(['e', 'E']) && !text.starts_with("0x") {
            return Ok(Tok::Unsupported("floating-point literal".into()));
        }
        let digits = text.trim_end_matches(['l', 'L', 'u', 'U']);
        let parsed = if let Some(hex) = digits
            .strip_prefix("0x")
            .or_else(|| digits.strip_prefix("0X"))
        {
            i64::from_str_radix(hex, 16)
        } else {
            digits.parse::<i64>()
        };
        parsed.map(Tok::Int).map_err(|_| {
            self.err(
                DiagKind::SyntaxError,
                start,
                format!("invalid integer literal `{}`", text),
            )
        })
    }

    fn string(&mut self) -> Result<Tok, Diagnostic> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        loop {
            if self.pos >= self.bytes.len() || self.peek(0) == b'\n' {
                return Err(self.err(DiagKind::SyntaxError, start, "unterminated string literal"));
            }
            let c = self.peek(0);
            match c {
                b'"' => {
                    self.pos += 1;
                    return Ok(Tok::Str(out));
                }
                b'\\' => {
                    let esc = self.peek(1);
                    out.push(match esc {
                        b'n' => '\n',
                        b't' => '\t',
                        b'r' => '\r',
                        b'0' => '\0',
                        b'\\' => '\\',
                        b'"' => '"',
                        b'\'' => '\'',
                        _ => {
                            return Err(self.err(
                                DiagKind::SyntaxError,
                                self.pos,
                                "unknown escape sequence",
                            ))
                        }
                    });
                    self.pos += 2;
                }
                _ => {
                    let ch = self.src[self.pos..].chars().next().unwrap();
                    out.push(ch);
                    self.pos += ch.len_utf8();
                }
            }
        }
    }
}
