//! Surface syntax: types, rows, terms, the parser and the printer.

mod lexer;
mod parser;
pub(crate) mod pretty;

use std::fmt;

pub use lexer::{lex, Tok, Token};
pub use parser::{line_col, parse_program, parse_type, ParseError};
pub use pretty::{pretty_term, pretty_type};

/// Byte range in the source text.
///
/// Spans never take part in structural comparison: two spans are always equal,
/// so `==` on terms compares shapes only.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// Ordinary types.
    T,
    /// Rows.
    R,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::T => write!(f, "T"),
            Kind::R => write!(f, "R"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    Int,
    Bool,
    Str,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Int => write!(f, "Int"),
            Base::Bool => write!(f, "Bool"),
            Base::Str => write!(f, "Str"),
        }
    }
}

/// A runtime type name, allocated by type application.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TyName(pub u32);

impl fmt::Display for TyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

/// Types and rows share one tree; kinding tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Var(String),
    Name(TyName),
    Dyn,
    Base(Base),
    Fun(Box<Type>, Box<Type>),
    Forall(String, Kind, Box<Type>),
    Record(Box<Type>),
    Variant(Box<Type>),
    /// The empty row.
    Empty,
    /// `l:A; rho`
    Ext(String, Box<Type>, Box<Type>),
}

impl Type {
    pub fn var(x: &str) -> Type {
        Type::Var(x.to_string())
    }
    pub fn int() -> Type {
        Type::Base(Base::Int)
    }
    pub fn bool() -> Type {
        Type::Base(Base::Bool)
    }
    pub fn str() -> Type {
        Type::Base(Base::Str)
    }
    pub fn fun(a: Type, b: Type) -> Type {
        Type::Fun(Box::new(a), Box::new(b))
    }
    pub fn forall(x: &str, k: Kind, a: Type) -> Type {
        Type::Forall(x.to_string(), k, Box::new(a))
    }
    pub fn record(r: Type) -> Type {
        Type::Record(Box::new(r))
    }
    pub fn variant(r: Type) -> Type {
        Type::Variant(Box::new(r))
    }
    pub fn ext(l: &str, a: Type, r: Type) -> Type {
        Type::Ext(l.to_string(), Box::new(a), Box::new(r))
    }

    /// Builds `l1:A1; ...; ln:An; tail`.
    pub fn row<'a>(fields: impl IntoIterator<Item = (&'a str, Type)>, tail: Type) -> Type {
        let fields: Vec<_> = fields.into_iter().collect();
        fields
            .into_iter()
            .rev()
            .fold(tail, |acc, (l, a)| Type::ext(l, a, acc))
    }

    pub fn is_dyn(&self) -> bool {
        matches!(self, Type::Dyn)
    }

    pub fn contains_dyn(&self) -> bool {
        match self {
            Type::Dyn => true,
            Type::Var(_) | Type::Name(_) | Type::Base(_) | Type::Empty => false,
            Type::Fun(a, b) => a.contains_dyn() || b.contains_dyn(),
            Type::Forall(_, _, a) | Type::Record(a) | Type::Variant(a) => a.contains_dyn(),
            Type::Ext(_, a, r) => a.contains_dyn() || r.contains_dyn(),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_type(self))
    }
}

/// Built-in constants. The `*1` forms are partial applications.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Const {
    Int(i64),
    Bool(bool),
    Str(String),
    Add,
    Add1(i64),
    Leq,
    Leq1(i64),
    Not,
    Concat,
    Concat1(String),
}

impl Const {
    pub fn ty(&self) -> Type {
        let i = Type::int;
        let b = Type::bool;
        let s = Type::str;
        match self {
            Const::Int(_) => i(),
            Const::Bool(_) => b(),
            Const::Str(_) => s(),
            Const::Add => Type::fun(i(), Type::fun(i(), i())),
            Const::Add1(_) => Type::fun(i(), i()),
            Const::Leq => Type::fun(i(), Type::fun(i(), b())),
            Const::Leq1(_) => Type::fun(i(), b()),
            Const::Not => Type::fun(b(), b()),
            Const::Concat => Type::fun(s(), Type::fun(s(), s())),
            Const::Concat1(_) => Type::fun(s(), s()),
        }
    }

    /// The delta function: applies a constant to a constant argument.
    pub fn apply(&self, arg: &Const) -> Option<Const> {
        Some(match (self, arg) {
            (Const::Add, Const::Int(n)) => Const::Add1(*n),
            (Const::Add1(m), Const::Int(n)) => Const::Int(m.wrapping_add(*n)),
            (Const::Leq, Const::Int(n)) => Const::Leq1(*n),
            (Const::Leq1(m), Const::Int(n)) => Const::Bool(m <= n),
            (Const::Not, Const::Bool(b)) => Const::Bool(!b),
            (Const::Concat, Const::Str(s)) => Const::Concat1(s.clone()),
            (Const::Concat1(s), Const::Str(t)) => Const::Str(format!("{s}{t}")),
            _ => return None,
        })
    }

    pub fn is_base_value(&self) -> bool {
        matches!(self, Const::Int(_) | Const::Bool(_) | Const::Str(_))
    }
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const::Int(n) => write!(f, "{n}"),
            Const::Bool(b) => write!(f, "{b}"),
            Const::Str(s) => write!(f, "{s:?}"),
            Const::Add => write!(f, "add"),
            Const::Add1(n) => write!(f, "(add {n})"),
            Const::Leq => write!(f, "leq"),
            Const::Leq1(n) => write!(f, "(leq {n})"),
            Const::Not => write!(f, "not"),
            Const::Concat => write!(f, "concat"),
            Const::Concat1(s) => write!(f, "(concat {s:?})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermKind {
    Var(String),
    Const(Const),
    Lam(String, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    TLam(String, Kind, Box<Term>),
    TApp(Box<Term>, Type),
    REmpty,
    /// `{l = M; N}`
    RExtend(String, Box<Term>, Box<Term>),
    /// `let {l = x; y} = M in N`
    RLet(String, String, String, Box<Term>, Box<Term>),
    /// `l M`
    VInj(String, Box<Term>),
    /// `l ^ A M`
    VEmbed(String, Type, Box<Term>),
    /// `case M with <l x -> N1; y -> N2>`
    VCase(Box<Term>, String, String, Box<Term>, String, Box<Term>),
    /// `M : A`; the span covers the annotation.
    Ascribe(Box<Term>, Type, Span),
}

impl Term {
    pub fn new(kind: TermKind) -> Term {
        Term {
            kind,
            span: Span::default(),
        }
    }

    pub fn at(kind: TermKind, span: Span) -> Term {
        Term { kind, span }
    }

    pub fn var(x: &str) -> Term {
        Term::new(TermKind::Var(x.to_string()))
    }
    pub fn int(n: i64) -> Term {
        Term::new(TermKind::Const(Const::Int(n)))
    }
    pub fn bool(b: bool) -> Term {
        Term::new(TermKind::Const(Const::Bool(b)))
    }
    pub fn str(s: &str) -> Term {
        Term::new(TermKind::Const(Const::Str(s.to_string())))
    }
    pub fn konst(c: Const) -> Term {
        Term::new(TermKind::Const(c))
    }
    pub fn lam(x: &str, a: Type, body: Term) -> Term {
        Term::new(TermKind::Lam(x.to_string(), a, Box::new(body)))
    }
    pub fn app(f: Term, a: Term) -> Term {
        Term::new(TermKind::App(Box::new(f), Box::new(a)))
    }
    pub fn tlam(x: &str, k: Kind, body: Term) -> Term {
        Term::new(TermKind::TLam(x.to_string(), k, Box::new(body)))
    }
    pub fn tapp(f: Term, a: Type) -> Term {
        Term::new(TermKind::TApp(Box::new(f), a))
    }
    pub fn rempty() -> Term {
        Term::new(TermKind::REmpty)
    }
    pub fn rextend(l: &str, m: Term, n: Term) -> Term {
        Term::new(TermKind::RExtend(l.to_string(), Box::new(m), Box::new(n)))
    }
    pub fn rlet(l: &str, x: &str, y: &str, m: Term, n: Term) -> Term {
        Term::new(TermKind::RLet(
            l.to_string(),
            x.to_string(),
            y.to_string(),
            Box::new(m),
            Box::new(n),
        ))
    }
    pub fn inj(l: &str, m: Term) -> Term {
        Term::new(TermKind::VInj(l.to_string(), Box::new(m)))
    }
    pub fn embed(l: &str, a: Type, m: Term) -> Term {
        Term::new(TermKind::VEmbed(l.to_string(), a, Box::new(m)))
    }
    pub fn case(m: Term, l: &str, x: &str, n1: Term, y: &str, n2: Term) -> Term {
        Term::new(TermKind::VCase(
            Box::new(m),
            l.to_string(),
            x.to_string(),
            Box::new(n1),
            y.to_string(),
            Box::new(n2),
        ))
    }
    pub fn ascribe(m: Term, a: Type) -> Term {
        Term::new(TermKind::Ascribe(Box::new(m), a, Span::default()))
    }

    /// `{l1 = M1; ...; ln = Mn}` with an empty tail.
    pub fn record(fields: Vec<(&str, Term)>) -> Term {
        fields
            .into_iter()
            .rev()
            .fold(Term::rempty(), |acc, (l, m)| Term::rextend(l, m, acc))
    }

    /// Rewrites every ascription `M : A` as `(lam x:A. x) M`, keeping the
    /// annotation's span on the generated lambda.
    pub fn desugar_ascriptions(&self) -> Term {
        let d = |t: &Term| Box::new(t.desugar_ascriptions());
        let kind = match &self.kind {
            TermKind::Var(_) | TermKind::Const(_) | TermKind::REmpty => self.kind.clone(),
            TermKind::Lam(x, a, b) => TermKind::Lam(x.clone(), a.clone(), d(b)),
            TermKind::App(f, a) => TermKind::App(d(f), d(a)),
            TermKind::TLam(x, k, b) => TermKind::TLam(x.clone(), *k, d(b)),
            TermKind::TApp(f, a) => TermKind::TApp(d(f), a.clone()),
            TermKind::RExtend(l, m, n) => TermKind::RExtend(l.clone(), d(m), d(n)),
            TermKind::RLet(l, x, y, m, n) => {
                TermKind::RLet(l.clone(), x.clone(), y.clone(), d(m), d(n))
            }
            TermKind::VInj(l, m) => TermKind::VInj(l.clone(), d(m)),
            TermKind::VEmbed(l, a, m) => TermKind::VEmbed(l.clone(), a.clone(), d(m)),
            TermKind::VCase(m, l, x, n1, y, n2) => {
                TermKind::VCase(d(m), l.clone(), x.clone(), d(n1), y.clone(), d(n2))
            }
            TermKind::Ascribe(m, a, sp) => {
                let x = "asc";
                let id = Term::at(
                    TermKind::Lam(x.to_string(), a.clone(), Box::new(Term::var(x))),
                    *sp,
                );
                TermKind::App(Box::new(id), d(m))
            }
        };
        Term::at(kind, self.span)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_term(self))
    }
}
