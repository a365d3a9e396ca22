//! Recursive-descent parser.
//!
//! Labels and term variables share the lowercase identifier space. An
//! identifier in head position that is not bound by an enclosing binder and is
//! followed by an argument is read as an injection `l M`; constants (`add`,
//! `leq`, `not`, `concat`) are never labels.

use std::fmt;

use thiserror::Error;

use super::lexer::{lex, Tok, Token};
use super::{Base, Const, Kind, Span, Term, TermKind, TyName, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {span}: {message}")]
pub struct ParseError {
    pub message: String,
    pub span: Span,
}

impl ParseError {
    pub fn new(message: impl Into<String>, span: Span) -> ParseError {
        ParseError {
            message: message.into(),
            span,
        }
    }

    /// 1-based line and column of the error start.
    pub fn line_col(&self, src: &str) -> (usize, usize) {
        line_col(src, self.span.start)
    }
}

/// 1-based line and column of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub fn parse_program(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

/// Parses a type or a row.
pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.type_or_row()?;
    p.expect_eof()?;
    Ok(t)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: Vec<String>,
}

fn const_named(name: &str) -> Option<Const> {
    match name {
        "add" => Some(Const::Add),
        "leq" => Some(Const::Leq),
        "not" => Some(Const::Not),
        "concat" => Some(Const::Concat),
        _ => None,
    }
}

fn parse_name(s: &str) -> Option<TyName> {
    let digits = s.strip_prefix('a')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().map(TyName)
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            scope: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, what: &str) -> Result<T, ParseError> {
        Err(ParseError::new(
            format!("expected {what}, found {}", self.peek().describe()),
            self.span(),
        ))
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<Span, ParseError> {
        if *self.peek() == t {
            Ok(self.bump().span)
        } else {
            self.unexpected(what)
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected(what),
        }
    }

    fn uident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::UIdent(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected(what),
        }
    }

    fn kind(&mut self) -> Result<Kind, ParseError> {
        match self.peek() {
            Tok::UIdent(s) if s == "T" => {
                self.bump();
                Ok(Kind::T)
            }
            Tok::UIdent(s) if s == "R" => {
                self.bump();
                Ok(Kind::R)
            }
            _ => self.unexpected("kind `T` or `R`"),
        }
    }

    fn bound(&self, x: &str) -> bool {
        self.scope.iter().any(|y| y == x)
    }

    fn with_bound<T>(
        &mut self,
        xs: &[&str],
        f: impl FnOnce(&mut Parser) -> Result<T, ParseError>,
    ) -> Result<T, ParseError> {
        let n = self.scope.len();
        self.scope.extend(xs.iter().map(|x| x.to_string()));
        let r = f(self);
        self.scope.truncate(n);
        r
    }

    // ---- terms ----

    fn term(&mut self) -> Result<Term, ParseError> {
        let start = self.span();
        match self.peek() {
            Tok::Lam => {
                self.bump();
                let x = self.ident("variable name")?;
                self.expect(Tok::Colon, "`:`")?;
                let a = self.ty()?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.with_bound(&[&x], |p| p.term())?;
                let sp = start.join(body.span);
                Ok(Term::at(TermKind::Lam(x, a, Box::new(body)), sp))
            }
            Tok::BigLam => {
                self.bump();
                let x = self.uident("type variable")?;
                self.expect(Tok::Colon, "`:`")?;
                let k = self.kind()?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.term()?;
                let sp = start.join(body.span);
                Ok(Term::at(TermKind::TLam(x, k, Box::new(body)), sp))
            }
            Tok::Let => {
                self.bump();
                self.expect(Tok::LBrace, "`{`")?;
                let l = self.ident("label")?;
                self.expect(Tok::Eq, "`=`")?;
                let x = self.ident("variable name")?;
                self.expect(Tok::Semi, "`;`")?;
                let y = self.ident("variable name")?;
                self.expect(Tok::RBrace, "`}`")?;
                self.expect(Tok::Eq, "`=`")?;
                let m = self.term()?;
                self.expect(Tok::In, "`in`")?;
                let n = self.with_bound(&[&x, &y], |p| p.term())?;
                let sp = start.join(n.span);
                Ok(Term::at(
                    TermKind::RLet(l, x, y, Box::new(m), Box::new(n)),
                    sp,
                ))
            }
            Tok::Case => {
                self.bump();
                let m = self.term()?;
                self.expect(Tok::With, "`with`")?;
                self.expect(Tok::Lt, "`<`")?;
                let l = self.ident("label")?;
                let x = self.ident("variable name")?;
                self.expect(Tok::Arrow, "`->`")?;
                let n1 = self.with_bound(&[&x], |p| p.term())?;
                self.expect(Tok::Semi, "`;`")?;
                let y = self.ident("variable name")?;
                self.expect(Tok::Arrow, "`->`")?;
                let n2 = self.with_bound(&[&y], |p| p.term())?;
                let end = self.expect(Tok::Gt, "`>`")?;
                Ok(Term::at(
                    TermKind::VCase(Box::new(m), l, x, Box::new(n1), y, Box::new(n2)),
                    start.join(end),
                ))
            }
            _ => self.ascription(),
        }
    }

    fn ascription(&mut self) -> Result<Term, ParseError> {
        let mut t = self.app()?;
        while *self.peek() == Tok::Colon {
            self.bump();
            let ty_start = self.span();
            let a = self.ty()?;
            let ty_span = ty_start.join(self.prev_span());
            let sp = t.span.join(ty_span);
            t = Term::at(TermKind::Ascribe(Box::new(t), a, ty_span), sp);
        }
        Ok(t)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_)
                | Tok::Int(_)
                | Tok::Str(_)
                | Tok::True
                | Tok::False
                | Tok::LBrace
                | Tok::LParen
        )
    }

    fn is_label_head(&self) -> Option<String> {
        match self.peek() {
            Tok::Ident(l) if !self.bound(l) && const_named(l).is_none() => Some(l.clone()),
            _ => None,
        }
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let start = self.span();
        if let Some(l) = self.is_label_head() {
            match self.peek_at(1) {
                Tok::Caret => {
                    self.bump();
                    self.bump();
                    let a = self.atype()?;
                    let m = self.app()?;
                    let sp = start.join(m.span);
                    return Ok(Term::at(TermKind::VEmbed(l, a, Box::new(m)), sp));
                }
                Tok::Ident(_)
                | Tok::Int(_)
                | Tok::Str(_)
                | Tok::True
                | Tok::False
                | Tok::LBrace
                | Tok::LParen => {
                    self.bump();
                    let m = self.app()?;
                    let sp = start.join(m.span);
                    return Ok(Term::at(TermKind::VInj(l, Box::new(m)), sp));
                }
                _ => {}
            }
        }
        let mut t = self.atom()?;
        loop {
            if *self.peek() == Tok::LBrack {
                self.bump();
                let a = self.type_or_row()?;
                let end = self.expect(Tok::RBrack, "`]`")?;
                let sp = t.span.join(end);
                t = Term::at(TermKind::TApp(Box::new(t), a), sp);
            } else if self.starts_atom() {
                let arg = self.atom()?;
                let sp = t.span.join(arg.span);
                t = Term::at(TermKind::App(Box::new(t), Box::new(arg)), sp);
            } else {
                return Ok(t);
            }
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let sp = self.span();
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                let kind = match const_named(&x) {
                    Some(c) if !self.bound(&x) => TermKind::Const(c),
                    _ => TermKind::Var(x),
                };
                Ok(Term::at(kind, sp))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Term::at(TermKind::Const(Const::Int(n)), sp))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Term::at(TermKind::Const(Const::Str(s)), sp))
            }
            Tok::True => {
                self.bump();
                Ok(Term::at(TermKind::Const(Const::Bool(true)), sp))
            }
            Tok::False => {
                self.bump();
                Ok(Term::at(TermKind::Const(Const::Bool(false)), sp))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                let end = self.expect(Tok::RParen, "`)`")?;
                Ok(Term::at(t.kind, sp.join(end)))
            }
            Tok::LBrace => self.record(),
            _ => self.unexpected("a term"),
        }
    }

    fn record(&mut self) -> Result<Term, ParseError> {
        let start = self.expect(Tok::LBrace, "`{`")?;
        if *self.peek() == Tok::RBrace {
            let end = self.bump().span;
            return Ok(Term::at(TermKind::REmpty, start.join(end)));
        }
        let mut fields = Vec::new();
        let tail;
        loop {
            let fsp = self.span();
            let l = self.ident("label")?;
            self.expect(Tok::Eq, "`=`")?;
            let m = self.term()?;
            fields.push((l, m, fsp));
            match self.peek() {
                Tok::RBrace => {
                    let sp = self.bump().span;
                    tail = Term::at(TermKind::REmpty, sp);
                    break;
                }
                Tok::Semi => {
                    self.bump();
                    if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Eq {
                        continue;
                    }
                    tail = self.term()?;
                    self.expect(Tok::RBrace, "`}`")?;
                    break;
                }
                _ => return self.unexpected("`;` or `}`"),
            }
        }
        let end = self.prev_span();
        let mut acc = tail;
        for (l, m, fsp) in fields.into_iter().rev() {
            let sp = fsp.join(end);
            acc = Term::at(TermKind::RExtend(l, Box::new(m), Box::new(acc)), sp);
        }
        acc.span = start.join(end);
        Ok(acc)
    }

    // ---- types ----

    fn type_or_row(&mut self) -> Result<Type, ParseError> {
        if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Colon {
            self.row()
        } else {
            self.ty()
        }
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        if *self.peek() == Tok::Forall {
            self.bump();
            let x = self.uident("type variable")?;
            self.expect(Tok::Colon, "`:`")?;
            let k = self.kind()?;
            self.expect(Tok::Dot, "`.`")?;
            let body = self.ty()?;
            return Ok(Type::Forall(x, k, Box::new(body)));
        }
        let a = self.atype()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let b = self.ty()?;
            Ok(Type::fun(a, b))
        } else {
            Ok(a)
        }
    }

    fn atype(&mut self) -> Result<Type, ParseError> {
        match self.peek().clone() {
            Tok::UIdent(s) => {
                self.bump();
                Ok(match s.as_str() {
                    "Int" => Type::Base(Base::Int),
                    "Bool" => Type::Base(Base::Bool),
                    "Str" => Type::Base(Base::Str),
                    _ => Type::Var(s),
                })
            }
            Tok::Ident(s) if *self.peek_at(1) != Tok::Colon => match parse_name(&s) {
                Some(n) => {
                    self.bump();
                    Ok(Type::Name(n))
                }
                None => self.unexpected("a type"),
            },
            Tok::Question => {
                self.bump();
                Ok(Type::Dyn)
            }
            Tok::Dot => {
                self.bump();
                Ok(Type::Empty)
            }
            Tok::LBrack => {
                self.bump();
                let r = self.row()?;
                self.expect(Tok::RBrack, "`]`")?;
                Ok(Type::record(r))
            }
            Tok::Lt => {
                self.bump();
                let r = self.row()?;
                self.expect(Tok::Gt, "`>`")?;
                Ok(Type::variant(r))
            }
            Tok::LParen => {
                self.bump();
                let t = self.type_or_row()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.unexpected("a type"),
        }
    }

    fn row(&mut self) -> Result<Type, ParseError> {
        match self.peek().clone() {
            Tok::Ident(l) if *self.peek_at(1) == Tok::Colon => {
                self.bump();
                self.bump();
                let a = self.ty()?;
                self.expect(Tok::Semi, "`;`")?;
                let rest = self.row()?;
                Ok(Type::Ext(l, Box::new(a), Box::new(rest)))
            }
            Tok::Question | Tok::Dot | Tok::UIdent(_) | Tok::Ident(_) | Tok::LParen => {
                self.atype()
            }
            _ => self.unexpected("a row"),
        }
    }
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn application_and_type_application() {
        let t = parse_program("(Lam X:T. lam x:X. x) [Int] 3").unwrap();
        let expected = Term::app(
            Term::tapp(
                Term::tlam("X", Kind::T, Term::lam("x", Type::var("X"), Term::var("x"))),
                Type::int(),
            ),
            Term::int(3),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn case_on_free_variable() {
        let t = parse_program("case x with <l y -> y; z -> 1>").unwrap();
        assert_eq!(
            t,
            Term::case(Term::var("x"), "l", "y", Term::var("y"), "z", Term::int(1))
        );
    }

    #[test]
    fn unbalanced_paren_reports_position() {
        let err = parse_program("(lam x:Int. x x x))").unwrap_err();
        assert_eq!(err.span.start, 18);
        assert_eq!(err.line_col("(lam x:Int. x x x))"), (1, 19));
    }

    #[test]
    fn record_sugar_and_nesting_agree() {
        let a = parse_program("{l1=0; l2=true}").unwrap();
        let b = parse_program("{l1=0;{l2=true;{}}}").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn injections_and_embeddings() {
        let t = parse_program("l2 ^ Bool (l1 0)").unwrap();
        assert_eq!(
            t,
            Term::embed("l2", Type::bool(), Term::inj("l1", Term::int(0)))
        );
        // a bound identifier in head position is an application
        let t = parse_program("lam f:?. f 0").unwrap();
        assert_eq!(
            t,
            Term::lam("f", Type::Dyn, Term::app(Term::var("f"), Term::int(0)))
        );
    }

    #[test]
    fn ascription_chains_left() {
        let t = parse_program("{} : [.] : [?]").unwrap();
        assert_eq!(
            t,
            Term::ascribe(
                Term::ascribe(Term::rempty(), Type::record(Type::Empty)),
                Type::record(Type::Dyn)
            )
        );
    }

    #[test]
    fn types_and_rows() {
        assert_eq!(
            parse_type("forall X:R. [l:Int -> Int; X] -> <m:?; .>").unwrap(),
            Type::forall(
                "X",
                Kind::R,
                Type::fun(
                    Type::record(Type::ext("l", Type::fun(Type::int(), Type::int()), Type::var("X"))),
                    Type::variant(Type::ext("m", Type::Dyn, Type::Empty)),
                )
            )
        );
        assert_eq!(parse_type("l:Int; a3").unwrap(), Type::ext("l", Type::int(), Type::Name(TyName(3))));
        assert!(parse_type("[l:Int]").is_err());
    }

    #[test]
    fn ascription_span_covers_annotation() {
        let src = "0 : Int -> Int";
        match parse_program(src).unwrap().kind {
            TermKind::Ascribe(_, _, sp) => assert_eq!((sp.start, sp.end), (4, 14)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
