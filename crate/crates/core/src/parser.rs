//! Concrete syntax.
//!
//! ```text
//! term  ::= ('\' | 'λ') ident [':' type] '.' term
//!         | 'if' term 'then' term 'else' term
//!         | atom+ [lambda | if]
//! atom  ::= ident | 'true' | 'false' | '(' term ')'
//! type  ::= tatom ['->' type]
//! tatom ::= 'Bool' | '(' type ')'
//! ctx   ::= [ident ':' type (',' ident ':' type)*]
//! ```
//!
//! Lambda bodies and `else` branches extend as far right as possible, and
//! application is left associative. Printing uses the fewest parentheses
//! that parse back to the same tree.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::ParseError;
use crate::syntax::{Ctx, Surface, Ty};

/// Byte offsets into the source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }
}

pub const KEYWORDS: [&str; 6] = ["if", "then", "else", "true", "false", "Bool"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token<'src> {
    Lambda,
    Dot,
    Colon,
    Comma,
    Arrow,
    LParen,
    RParen,
    Ident(&'src str),
    If,
    Then,
    Else,
    True,
    False,
    Bool,
}

impl Token<'_> {
    fn describe(&self) -> String {
        match self {
            Token::Lambda => "`\\`".into(),
            Token::Dot => "`.`".into(),
            Token::Colon => "`:`".into(),
            Token::Comma => "`,`".into(),
            Token::Arrow => "`->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Ident(name) => alloc::format!("identifier `{name}`"),
            Token::If => "`if`".into(),
            Token::Then => "`then`".into(),
            Token::Else => "`else`".into(),
            Token::True => "`true`".into(),
            Token::False => "`false`".into(),
            Token::Bool => "`Bool`".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(Token<'_>, Span)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        let token = match c {
            c if c.is_whitespace() => continue,
            '\\' | 'λ' => Token::Lambda,
            '.' => Token::Dot,
            ':' => Token::Colon,
            ',' => Token::Comma,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '-' => match chars.next() {
                Some((_, '>')) => Token::Arrow,
                _ => {
                    return Err(ParseError {
                        span: Span::new(start, start + 1),
                        message: "expected `->`".into(),
                    })
                }
            },
            c if is_ident_start(c) => {
                let mut end = start + c.len_utf8();
                while let Some(&(i, c)) = chars.peek() {
                    if !is_ident_continue(c) {
                        break;
                    }
                    end = i + c.len_utf8();
                    chars.next();
                }
                match &src[start..end] {
                    "if" => Token::If,
                    "then" => Token::Then,
                    "else" => Token::Else,
                    "true" => Token::True,
                    "false" => Token::False,
                    "Bool" => Token::Bool,
                    name => Token::Ident(name),
                }
            }
            c => {
                return Err(ParseError {
                    span: Span::new(start, start + c.len_utf8()),
                    message: alloc::format!("unexpected character `{c}`"),
                })
            }
        };
        let end = chars.peek().map_or(src.len(), |&(i, _)| i);
        tokens.push((token, Span::new(start, end)));
    }
    Ok(tokens)
}

struct Parser<'src> {
    tokens: Vec<(Token<'src>, Span)>,
    pos: usize,
    len: usize,
}

impl<'src> Parser<'src> {
    fn new(src: &'src str) -> Result<Parser<'src>, ParseError> {
        Ok(Parser {
            tokens: lex(src)?,
            pos: 0,
            len: src.len(),
        })
    }

    fn peek(&self) -> Option<&Token<'src>> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> Span {
        match self.tokens.get(self.pos) {
            Some((_, span)) => *span,
            None => Span::new(self.len, self.len),
        }
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        let found = match self.peek() {
            Some(token) => token.describe(),
            None => "end of input".into(),
        };
        Err(ParseError {
            span: self.span(),
            message: alloc::format!("expected {expected}, found {found}"),
        })
    }

    fn expect(&mut self, token: Token<'_>, expected: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&token) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(expected)
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Token::Ident(name)) => {
                let name = name.to_string();
                self.pos += 1;
                Ok(name)
            }
            _ => self.error("an identifier"),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => self.error("end of input"),
        }
    }

    fn term(&mut self) -> Result<Surface, ParseError> {
        match self.peek() {
            Some(Token::Lambda) => self.lambda(),
            Some(Token::If) => self.conditional(),
            _ => self.application(),
        }
    }

    fn lambda(&mut self) -> Result<Surface, ParseError> {
        self.expect(Token::Lambda, "`\\`")?;
        let name = self.ident()?;
        let ann = match self.peek() {
            Some(Token::Colon) => {
                self.pos += 1;
                Some(self.ty()?)
            }
            _ => None,
        };
        self.expect(Token::Dot, "`.` or `:`")?;
        let body = self.term()?;
        Ok(Surface::lam(name, ann, body))
    }

    fn conditional(&mut self) -> Result<Surface, ParseError> {
        self.expect(Token::If, "`if`")?;
        let cond = self.term()?;
        self.expect(Token::Then, "`then`")?;
        let then = self.term()?;
        self.expect(Token::Else, "`else`")?;
        let else_ = self.term()?;
        Ok(Surface::ite(cond, then, else_))
    }

    fn application(&mut self) -> Result<Surface, ParseError> {
        let mut head = match self.atom()? {
            Some(atom) => atom,
            None => return self.error("a term"),
        };
        loop {
            match self.peek() {
                Some(Token::Lambda | Token::If) => {
                    let arg = self.term()?;
                    return Ok(Surface::app(head, arg));
                }
                _ => match self.atom()? {
                    Some(arg) => head = Surface::app(head, arg),
                    None => return Ok(head),
                },
            }
        }
    }

    fn atom(&mut self) -> Result<Option<Surface>, ParseError> {
        let atom = match self.peek() {
            Some(Token::Ident(name)) => Surface::Var(name.to_string()),
            Some(Token::True) => Surface::True,
            Some(Token::False) => Surface::False,
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.term()?;
                self.expect(Token::RParen, "`)`")?;
                return Ok(Some(inner));
            }
            _ => return Ok(None),
        };
        self.pos += 1;
        Ok(Some(atom))
    }

    fn ty(&mut self) -> Result<Ty, ParseError> {
        let dom = match self.peek() {
            Some(Token::Bool) => {
                self.pos += 1;
                Ty::Bool
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.ty()?;
                self.expect(Token::RParen, "`)`")?;
                inner
            }
            _ => return self.error("a type"),
        };
        match self.peek() {
            Some(Token::Arrow) => {
                self.pos += 1;
                Ok(Ty::arrow(dom, self.ty()?))
            }
            _ => Ok(dom),
        }
    }

    fn ctx(&mut self) -> Result<Ctx, ParseError> {
        let mut ctx = Ctx::new();
        if self.peek().is_none() {
            return Ok(ctx);
        }
        loop {
            let name = self.ident()?;
            self.expect(Token::Colon, "`:`")?;
            let ty = self.ty()?;
            ctx.push(name, ty);
            match self.peek() {
                Some(Token::Comma) => self.pos += 1,
                _ => return Ok(ctx),
            }
        }
    }
}

pub fn parse_term(src: &str) -> Result<Surface, ParseError> {
    let mut parser = Parser::new(src)?;
    let term = parser.term()?;
    parser.finish()?;
    Ok(term)
}

pub fn parse_type(src: &str) -> Result<Ty, ParseError> {
    let mut parser = Parser::new(src)?;
    let ty = parser.ty()?;
    parser.finish()?;
    Ok(ty)
}

/// Parse a comma separated list of `name:Type` bindings. The last binding
/// is the innermost one.
pub fn parse_ctx(src: &str) -> Result<Ctx, ParseError> {
    let mut parser = Parser::new(src)?;
    let ctx = parser.ctx()?;
    parser.finish()?;
    Ok(ctx)
}

pub fn print_term(term: &Surface) -> String {
    term.to_string()
}

pub fn print_type(ty: &Ty) -> String {
    ty.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(name: &str) -> Surface {
        Surface::var(name)
    }

    #[test]
    fn parses_lambda() {
        assert_eq!(
            parse_term("\\x:Bool. x"),
            Ok(Surface::lam("x", Some(Ty::Bool), var("x")))
        );
        assert_eq!(parse_term("λx. x"), Ok(Surface::lam("x", None, var("x"))));
    }

    #[test]
    fn application_is_left_associative() {
        assert_eq!(
            parse_term("f x y"),
            Ok(Surface::app(Surface::app(var("f"), var("x")), var("y")))
        );
    }

    #[test]
    fn parses_conditional() {
        assert_eq!(
            parse_term("if true then false else true"),
            Ok(Surface::ite(Surface::True, Surface::False, Surface::True))
        );
    }

    #[test]
    fn lambda_body_extends_right() {
        assert_eq!(
            parse_term("\\x:Bool. f x"),
            Ok(Surface::lam(
                "x",
                Some(Ty::Bool),
                Surface::app(var("f"), var("x"))
            ))
        );
    }

    #[test]
    fn trailing_lambda_argument() {
        assert_eq!(
            parse_term("f \\x. x"),
            Ok(Surface::app(var("f"), Surface::lam("x", None, var("x"))))
        );
    }

    #[test]
    fn parses_types() {
        let bb = Ty::arrow(Ty::Bool, Ty::Bool);
        assert_eq!(parse_type("Bool"), Ok(Ty::Bool));
        assert_eq!(
            parse_type("Bool -> Bool -> Bool"),
            Ok(Ty::arrow(Ty::Bool, bb.clone()))
        );
        assert_eq!(
            parse_type("(Bool -> Bool) -> Bool"),
            Ok(Ty::arrow(bb, Ty::Bool))
        );
    }

    #[test]
    fn parses_contexts() {
        assert_eq!(parse_ctx("x:Bool"), Ok(Ctx::new().with("x", Ty::Bool)));
        assert_eq!(parse_ctx(""), Ok(Ctx::new()));
        assert_eq!(parse_ctx("  "), Ok(Ctx::new()));
        let ctx = parse_ctx("f:Bool->Bool, x:Bool").unwrap();
        assert_eq!(ctx.lookup(0), Some(&("x".into(), Ty::Bool)));
        assert_eq!(
            ctx.lookup(1),
            Some(&("f".into(), Ty::arrow(Ty::Bool, Ty::Bool)))
        );
        let dup = parse_ctx("x:Bool, x:Bool->Bool").unwrap();
        assert_eq!(dup.index_of("x"), Some(0));
    }

    #[test]
    fn prints_minimal_parentheses() {
        assert_eq!(
            print_term(&Surface::lam("x", Some(Ty::Bool), var("x"))),
            "\\x:Bool. x"
        );
        assert_eq!(
            print_term(&Surface::app(Surface::app(var("f"), var("x")), var("y"))),
            "f x y"
        );
        assert_eq!(
            print_term(&Surface::app(var("f"), Surface::app(var("x"), var("y")))),
            "f (x y)"
        );
        assert_eq!(
            print_type(&Ty::arrow(Ty::arrow(Ty::Bool, Ty::Bool), Ty::Bool)),
            "(Bool -> Bool) -> Bool"
        );
        assert_eq!(
            print_term(&Surface::app(
                Surface::lam("x", None, var("x")),
                Surface::True
            )),
            "(\\x. x) true"
        );
    }

    #[test]
    fn keywords_are_not_identifiers() {
        assert!(parse_term("\\if. if").is_err());
        assert!(parse_ctx("then:Bool").is_err());
    }

    #[test]
    fn errors_carry_spans_inside_input() {
        for src in [
            "",
            "(",
            "\\x",
            "\\x:. x",
            "f )",
            "if x then y",
            "x $",
            "Bool ->",
            "a -",
        ] {
            let err = parse_term(src).unwrap_err();
            assert!(
                err.span.start <= err.span.end && err.span.end <= src.len(),
                "{src:?}: {err:?}"
            );
        }
        for src in ["", "Bool ->", "(Bool", "x"] {
            let err = parse_type(src).unwrap_err();
            assert!(err.span.end <= src.len(), "{src:?}: {err:?}");
        }
        for src in ["x", "x:", "x:Bool,", "x:Bool y:Bool"] {
            let err = parse_ctx(src).unwrap_err();
            assert!(err.span.end <= src.len(), "{src:?}: {err:?}");
        }
    }

    #[test]
    fn error_span_points_at_offending_token() {
        let err = parse_term("f )").unwrap_err();
        assert_eq!(err.span, Span::new(2, 3));
        let err = parse_term("λx. x $").unwrap_err();
        assert_eq!(err.span, Span::new(7, 8));
    }
}
