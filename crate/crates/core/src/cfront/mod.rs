//! MiniC front end: lexing, parsing, name resolution and pretty-printing.
//!
//! MiniC is the slice of C the rest of the toolchain understands: `int`
//! scalars (64-bit, wrapping), one-dimensional `int` arrays, `if`/`for`/`while`
//! with braced or single-statement bodies, `return`, calls to other MiniC
//! functions and to `printf`/`puts`/`putchar`. `long`/`long long` are accepted
//! as spellings of `int`. Comments and `#include` of standard headers are
//! dropped; everything else from C is rejected with a diagnostic.

pub mod ast;
mod diag;
mod lexer;
mod parser;
mod printer;
mod resolve;

pub use ast::*;
pub use diag::{line_col, DiagKind, Diagnostic, Diagnostics};
pub use lexer::ALLOWED_HEADERS;
pub use printer::{
    escape_c_string, expr_to_string, lvalue_to_string, pretty_print, print_with_hooks, signature,
    simple_to_string, PrintHooks,
};
pub use resolve::EXTERN_FUNCTIONS;

/// Parses and resolves a whole translation unit.
pub fn parse(source: &str) -> Result<Ast, Diagnostics> {
    let toks = lexer::lex(source).map_err(Diagnostics::single)?;
    let mut p = parser::Parser::new(source, toks);
    let ast = p.program().map_err(Diagnostics::single)?;
    let diags = resolve::resolve(source, &ast);
    if diags.is_empty() {
        Ok(ast)
    } else {
        Err(Diagnostics(diags))
    }
}

/// Parses a standalone expression (no name resolution).
pub fn parse_expr(source: &str) -> Result<Expr, Diagnostics> {
    let toks = lexer::lex(source).map_err(Diagnostics::single)?;
    let mut p = parser::Parser::new(source, toks);
    let e = p.expr().map_err(Diagnostics::single)?;
    if !p.at_eof() {
        return Err(Diagnostics::single(p.eof_error()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const TWO_MODE: &str = "void test(int n, int mode) {
    int arr[n], a = 0, b = 0;
    for(int i = 0; i < n; i++) {
        if(mode > 0) {
            arr[i] = i * 2 + arr[i];
            mode = mode - 1;
        } else {
            b = i * 3 + b;
            mode = mode - 1;
        }
    }
}
";

    fn reparse(src: &str) -> (Ast, Ast) {
        let a = parse(src).unwrap();
        let b = parse(&pretty_print(&a)).unwrap();
        (a, b)
    }

    #[test]
    fn two_mode_structure() {
        let ast = parse(TWO_MODE).unwrap();
        assert_eq!(ast.functions.len(), 1);
        let f = &ast.functions[0];
        assert_eq!(f.name, "test");
        assert_eq!(f.params.len(), 2);
        let StmtKind::For { body, .. } = &f.body.stmts[1].kind else {
            panic!("expected for loop");
        };
        assert!(matches!(
            body.stmts[0].kind,
            StmtKind::If {
                else_block: Some(_),
                ..
            }
        ));
    }

    #[test]
    fn empty_file() {
        assert_eq!(parse("").unwrap().functions.len(), 0);
    }

    #[test]
    fn pointer_deref_rejected() {
        let d = parse("int f(){ return *p; }").unwrap_err();
        assert!(d.has_kind(DiagKind::UnsupportedConstruct));
        assert_eq!(d.0[0].line, 1);
    }

    #[test]
    fn unsupported_constructs() {
        for src in [
            "struct s { int x; };",
            "int f(int *p) { return 0; }",
            "int f() { double x; return 0; }",
            "int f(int x) { return (int) x; }",
            "int f(int x) { return x ? 1 : 2; }",
            "int f(int x) { while (x) { break; } return 0; }",
            "int f(int x) { return x & 1; }",
            "int f(int x) { int a[2][2]; return 0; }",
        ] {
            let d = parse(src).unwrap_err();
            assert!(
                d.has_kind(DiagKind::UnsupportedConstruct),
                "{}: {:?}",
                src,
                d
            );
        }
    }

    #[test]
    fn unresolved_names() {
        let d = parse("int f(int x) { return y; }").unwrap_err();
        assert!(d.has_kind(DiagKind::UnresolvedName));
        let d = parse("int f(int x) { return x[0]; }").unwrap_err();
        assert!(d.has_kind(DiagKind::UnresolvedName));
        let d = parse("int f(int x) { return g(x); }").unwrap_err();
        assert!(d.has_kind(DiagKind::UnresolvedName));
        let d = parse("int f(int x) { { int y = 1; } return y; }").unwrap_err();
        assert!(d.has_kind(DiagKind::UnresolvedName));
    }

    #[test]
    fn syntax_error_has_position() {
        let d = parse("int f() {\n  x = ;\n}").unwrap_err();
        assert_eq!(d.0[0].kind, DiagKind::SyntaxError);
        assert_eq!((d.0[0].line, d.0[0].col), (2, 7));
        assert_eq!(
            d.render("a.c").lines().next().unwrap(),
            "a.c:2:7: error: expected expression, found `;`"
        );
    }

    #[test]
    fn assignment_prints_canonically() {
        let ast = parse("void f(int x) { x = x - 10; }").unwrap();
        let StmtKind::Assign { .. } = &ast.functions[0].body.stmts[0].kind else {
            panic!()
        };
        assert_eq!(
            simple_to_string(&ast.functions[0].body.stmts[0]),
            "x = x - 10"
        );
        assert!(pretty_print(&ast).contains("    x = x - 10;\n"));
    }

    #[test]
    fn two_mode_round_trip() {
        let (a, b) = reparse(TWO_MODE);
        assert_eq!(a, b);
    }

    #[test]
    fn nested_if_round_trip() {
        let src = "int f(int x, int y) { if (x > 0) if (y > 0) return 1; else return 2; else if (y < 0) { return 3; } return 4; }";
        let (a, b) = reparse(src);
        assert_eq!(a, b);
        let text = pretty_print(&a);
        assert!(text.contains(
            "    if (x > 0) {\n        if (y > 0) {\n            return 1;\n        } else {"
        ));
    }

    #[test]
    fn parenthesization_is_preserved() {
        for src in [
            "a - (b - c)",
            "(a + b) * c",
            "a / (b * c)",
            "-(a + b)",
            "!(a < b) && c || d",
            "a - -b",
            "-(-a)",
        ] {
            let e = parse_expr(src).unwrap();
            let printed = expr_to_string(&e);
            assert_eq!(parse_expr(&printed).unwrap(), e, "{} -> {}", src, printed);
        }
        assert_eq!(
            expr_to_string(&parse_expr("(a + b) + c").unwrap()),
            "a + b + c"
        );
    }

    #[test]
    fn long_long_is_int() {
        let ast = parse("int f() { long long m = 0; long k; m += 2; return m; }").unwrap();
        assert!(pretty_print(&ast).contains("int m = 0;"));
    }

    #[test]
    fn increments_and_compound_forms() {
        let (a, b) = reparse("void f(int a[], int i) { a[i]++; i--; ++i; a[i] += 3; i %= 2; }");
        assert_eq!(a, b);
        let text = pretty_print(&a);
        assert!(
            text.contains("a[i]++;") && text.contains("a[i] += 3;") && text.contains("i %= 2;")
        );
    }

    #[test]
    fn prototypes_are_dropped() {
        let ast =
            parse("int g(int x);\nint f() { return g(1); }\nint g(int x) { return x; }").unwrap();
        assert_eq!(ast.functions.len(), 2);
    }

    #[test]
    fn printf_accepts_strings() {
        parse("void f(int x) { printf(\"%d\\n\", x); }").unwrap();
        assert!(parse("void f() { int x = \"s\"; }").is_err());
    }

    #[test]
    fn array_initializer() {
        let (a, b) = reparse("int f() { int c[] = {25, 10, 5, 1}; return c[0]; }");
        assert_eq!(a, b);
        assert!(pretty_print(&a).contains("int c[4] = {25, 10, 5, 1};"));
    }
}
