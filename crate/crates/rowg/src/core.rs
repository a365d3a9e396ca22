//! The cast calculus: terms with casts, conversions and runtime type names,
//! convertibility, core typing, and translation from the gradual language.

use std::fmt;

use serde::Serialize;

use crate::gradual_rel::consistent_equiv;
use crate::statics::{check_kind, elaborate, Ctx, Mode, TypeError};
use crate::subst::{alpha_eq, open_pair, subst_ty};
use crate::syntax::pretty::ty as print_ty;
use crate::syntax::{Const, Kind, Span, Term, TyName, Type};

/// A blame label. Negation flips `negated`; it never allocates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlameLabel {
    pub id: u32,
    pub negated: bool,
}

impl BlameLabel {
    pub fn new(id: u32) -> BlameLabel {
        BlameLabel { id, negated: false }
    }

    pub fn negate(self) -> BlameLabel {
        BlameLabel {
            id: self.id,
            negated: !self.negated,
        }
    }
}

impl fmt::Display for BlameLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~p{}", self.id)
        } else {
            write!(f, "p{}", self.id)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Reveals the actual type behind a name.
    Plus,
    /// Conceals a type behind a name.
    Minus,
}

/// A conversion label `+α` or `-α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConvLabel {
    pub polarity: Polarity,
    pub name: TyName,
}

impl ConvLabel {
    pub fn plus(name: TyName) -> ConvLabel {
        ConvLabel {
            polarity: Polarity::Plus,
            name,
        }
    }

    pub fn minus(name: TyName) -> ConvLabel {
        ConvLabel {
            polarity: Polarity::Minus,
            name,
        }
    }

    pub fn negate(self) -> ConvLabel {
        ConvLabel {
            polarity: match self.polarity {
                Polarity::Plus => Polarity::Minus,
                Polarity::Minus => Polarity::Plus,
            },
            name: self.name,
        }
    }
}

impl fmt::Display for ConvLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.polarity {
            Polarity::Plus => '+',
            Polarity::Minus => '-',
        };
        write!(f, "{sign}{}", self.name)
    }
}

/// Binds runtime type names to their kinds and actual types.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameStore {
    entries: Vec<(Kind, Type)>,
}

impl NameStore {
    pub fn new() -> NameStore {
        NameStore::default()
    }

    /// Allocates the next name, numbered by the current store size.
    pub fn fresh(&mut self, k: Kind, a: Type) -> TyName {
        let n = TyName(self.entries.len() as u32);
        self.entries.push((k, a));
        n
    }

    pub fn get(&self, n: TyName) -> Option<&(Kind, Type)> {
        self.entries.get(n.0 as usize)
    }

    pub fn actual(&self, n: TyName) -> Option<&Type> {
        self.get(n).map(|(_, a)| a)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TyName, Kind, &Type)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, (k, a))| (TyName(i as u32), *k, a))
    }
}

impl fmt::Display for NameStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|(n, k, a)| format!("{n}:{k}:={a}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreTerm {
    Var(String),
    Const(Const),
    Lam(String, Type, Box<CoreTerm>),
    App(Box<CoreTerm>, Box<CoreTerm>),
    /// `ΛX:K. e :: A`, where `A` is the type of `e`.
    TLam(String, Kind, Box<CoreTerm>, Type),
    TApp(Box<CoreTerm>, Type),
    REmp,
    RExt(String, Box<CoreTerm>, Box<CoreTerm>),
    RLet(String, String, String, Box<CoreTerm>, Box<CoreTerm>),
    /// `l e`. The row is the rest of the variant type; it is not printed.
    Inj(String, Box<CoreTerm>, Type),
    Embed(String, Type, Box<CoreTerm>),
    Case(
        Box<CoreTerm>,
        String,
        String,
        Box<CoreTerm>,
        String,
        Box<CoreTerm>,
    ),
    Cast(Box<CoreTerm>, Type, BlameLabel, Type),
    Conv(Box<CoreTerm>, Type, ConvLabel, Type),
    Blame(BlameLabel),
}

impl CoreTerm {
    pub fn var(x: &str) -> CoreTerm {
        CoreTerm::Var(x.to_string())
    }
    pub fn int(n: i64) -> CoreTerm {
        CoreTerm::Const(Const::Int(n))
    }
    pub fn bool(b: bool) -> CoreTerm {
        CoreTerm::Const(Const::Bool(b))
    }
    pub fn str(s: &str) -> CoreTerm {
        CoreTerm::Const(Const::Str(s.to_string()))
    }
    pub fn app(f: CoreTerm, a: CoreTerm) -> CoreTerm {
        CoreTerm::App(Box::new(f), Box::new(a))
    }
    pub fn lam(x: &str, a: Type, e: CoreTerm) -> CoreTerm {
        CoreTerm::Lam(x.to_string(), a, Box::new(e))
    }
    pub fn tlam(x: &str, k: Kind, e: CoreTerm, a: Type) -> CoreTerm {
        CoreTerm::TLam(x.to_string(), k, Box::new(e), a)
    }
    pub fn tapp(e: CoreTerm, a: Type) -> CoreTerm {
        CoreTerm::TApp(Box::new(e), a)
    }
    pub fn rext(l: &str, e1: CoreTerm, e2: CoreTerm) -> CoreTerm {
        CoreTerm::RExt(l.to_string(), Box::new(e1), Box::new(e2))
    }
    pub fn rlet(l: &str, x: &str, y: &str, e1: CoreTerm, e2: CoreTerm) -> CoreTerm {
        CoreTerm::RLet(
            l.to_string(),
            x.to_string(),
            y.to_string(),
            Box::new(e1),
            Box::new(e2),
        )
    }
    pub fn inj(l: &str, e: CoreTerm, rest: Type) -> CoreTerm {
        CoreTerm::Inj(l.to_string(), Box::new(e), rest)
    }
    pub fn embed(l: &str, a: Type, e: CoreTerm) -> CoreTerm {
        CoreTerm::Embed(l.to_string(), a, Box::new(e))
    }
    pub fn case(e: CoreTerm, l: &str, x: &str, e1: CoreTerm, y: &str, e2: CoreTerm) -> CoreTerm {
        CoreTerm::Case(
            Box::new(e),
            l.to_string(),
            x.to_string(),
            Box::new(e1),
            y.to_string(),
            Box::new(e2),
        )
    }
    pub fn cast(e: CoreTerm, a: Type, p: BlameLabel, b: Type) -> CoreTerm {
        CoreTerm::Cast(Box::new(e), a, p, b)
    }
    pub fn conv(e: CoreTerm, a: Type, phi: ConvLabel, b: Type) -> CoreTerm {
        CoreTerm::Conv(Box::new(e), a, phi, b)
    }

    /// Rebuilds the node with `f` applied to each direct subterm, left to
    /// right.
    pub fn map_children(self, f: &mut impl FnMut(Box<CoreTerm>) -> Box<CoreTerm>) -> CoreTerm {
        match self {
            CoreTerm::Var(_) | CoreTerm::Const(_) | CoreTerm::REmp | CoreTerm::Blame(_) => self,
            CoreTerm::Lam(x, a, e) => CoreTerm::Lam(x, a, f(e)),
            CoreTerm::App(e1, e2) => {
                let e1 = f(e1);
                CoreTerm::App(e1, f(e2))
            }
            CoreTerm::TLam(x, k, e, a) => CoreTerm::TLam(x, k, f(e), a),
            CoreTerm::TApp(e, a) => CoreTerm::TApp(f(e), a),
            CoreTerm::RExt(l, e1, e2) => {
                let e1 = f(e1);
                CoreTerm::RExt(l, e1, f(e2))
            }
            CoreTerm::RLet(l, x, y, e1, e2) => {
                let e1 = f(e1);
                CoreTerm::RLet(l, x, y, e1, f(e2))
            }
            CoreTerm::Inj(l, e, r) => CoreTerm::Inj(l, f(e), r),
            CoreTerm::Embed(l, a, e) => CoreTerm::Embed(l, a, f(e)),
            CoreTerm::Case(e, l, x, e1, y, e2) => {
                let e = f(e);
                let e1 = f(e1);
                CoreTerm::Case(e, l, x, e1, y, f(e2))
            }
            CoreTerm::Cast(e, a, p, b) => CoreTerm::Cast(f(e), a, p, b),
            CoreTerm::Conv(e, a, phi, b) => CoreTerm::Conv(f(e), a, phi, b),
        }
    }

    /// Every cast in the term, outermost first.
    pub fn casts(&self) -> Vec<(&Type, BlameLabel, &Type)> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let CoreTerm::Cast(_, a, p, b) = e {
                out.push((a, *p, b));
            }
        });
        out
    }

    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a CoreTerm)) {
        f(self);
        match self {
            CoreTerm::Var(_) | CoreTerm::Const(_) | CoreTerm::REmp | CoreTerm::Blame(_) => {}
            CoreTerm::Lam(_, _, e)
            | CoreTerm::TLam(_, _, e, _)
            | CoreTerm::TApp(e, _)
            | CoreTerm::Inj(_, e, _)
            | CoreTerm::Embed(_, _, e)
            | CoreTerm::Cast(e, _, _, _)
            | CoreTerm::Conv(e, _, _, _) => e.visit(f),
            CoreTerm::App(e1, e2) | CoreTerm::RExt(_, e1, e2) | CoreTerm::RLet(_, _, _, e1, e2) => {
                e1.visit(f);
                e2.visit(f);
            }
            CoreTerm::Case(e, _, _, e1, _, e2) => {
                e.visit(f);
                e1.visit(f);
                e2.visit(f);
            }
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

impl fmt::Display for CoreTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        print_core(&mut s, self, 0);
        f.write_str(&s)
    }
}

fn type_str(a: &Type, atomic: bool) -> String {
    let mut s = String::new();
    print_ty(&mut s, a, atomic);
    s
}

// Levels: 0 anything, 1 injection argument or application head, 2 atom.
fn core_level(e: &CoreTerm) -> u8 {
    match e {
        CoreTerm::Lam(..) | CoreTerm::RLet(..) | CoreTerm::Case(..) => 0,
        CoreTerm::App(..) | CoreTerm::TApp(..) | CoreTerm::Inj(..) | CoreTerm::Embed(..) => 1,
        CoreTerm::Blame(_) => 1,
        _ => 2,
    }
}

fn print_core(out: &mut String, e: &CoreTerm, ctx: u8) {
    let paren = core_level(e) < ctx;
    if paren {
        out.push('(');
    }
    match e {
        CoreTerm::Var(x) => out.push_str(x),
        CoreTerm::Const(c) => out.push_str(&c.to_string()),
        CoreTerm::Lam(x, a, body) => {
            out.push_str(&format!("lam {x}:{}. ", type_str(a, false)));
            print_core(out, body, 0);
        }
        CoreTerm::App(f, a) => {
            let head_ctx = if matches!(**f, CoreTerm::Inj(..) | CoreTerm::Embed(..)) { 2 } else { 1 };
            print_core(out, f, head_ctx);
            out.push(' ');
            print_core(out, a, 2);
        }
        CoreTerm::TLam(x, k, body, a) => {
            out.push_str(&format!("(Lam {x}:{k}. "));
            print_core(out, body, 1);
            out.push_str(&format!(" :: {})", type_str(a, false)));
        }
        CoreTerm::TApp(f, a) => {
            print_core(out, f, 1);
            out.push_str(&format!(" [{}]", type_str(a, false)));
        }
        CoreTerm::REmp => out.push_str("{}"),
        CoreTerm::RExt(l, e1, e2) => {
            out.push_str(&format!("{{{l} = "));
            print_core(out, e1, 0);
            out.push_str("; ");
            print_core(out, e2, 0);
            out.push('}');
        }
        CoreTerm::RLet(l, x, y, e1, e2) => {
            out.push_str(&format!("let {{{l} = {x}; {y}}} = "));
            print_core(out, e1, 0);
            out.push_str(" in ");
            print_core(out, e2, 0);
        }
        CoreTerm::Inj(l, e1, _) => {
            out.push_str(&format!("{l} "));
            print_core(out, e1, 2);
        }
        CoreTerm::Embed(l, a, e1) => {
            out.push_str(&format!("{l} ^ {} ", type_str(a, true)));
            print_core(out, e1, 2);
        }
        CoreTerm::Case(e0, l, x, e1, y, e2) => {
            out.push_str("case ");
            print_core(out, e0, 0);
            out.push_str(&format!(" with <{l} {x} -> "));
            print_core(out, e1, 0);
            out.push_str(&format!("; {y} -> "));
            print_core(out, e2, 0);
            out.push('>');
        }
        CoreTerm::Cast(e1, a, p, b) => {
            out.push('(');
            print_core(out, e1, 1);
            out.push_str(&format!(" : {} ={p}=> {})", type_str(a, false), type_str(b, false)));
        }
        CoreTerm::Conv(e1, a, phi, b) => {
            out.push('(');
            print_core(out, e1, 1);
            out.push_str(&format!(" : {} ={phi}=> {})", type_str(a, false), type_str(b, false)));
        }
        CoreTerm::Blame(p) => out.push_str(&format!("blame {p}")),
    }
    if paren {
        out.push(')');
    }
}

/// `Σ ⊢ A ≺Φ B`.
pub fn convertible(store: &NameStore, a: &Type, phi: ConvLabel, b: &Type) -> bool {
    let alpha = phi.name;
    match (phi.polarity, a, b) {
        (Polarity::Plus, Type::Name(n), _) if *n == alpha => {
            store.actual(alpha).is_some_and(|actual| alpha_eq(b, actual))
        }
        (Polarity::Minus, _, Type::Name(n)) if *n == alpha => {
            store.actual(alpha).is_some_and(|actual| alpha_eq(a, actual))
        }
        (_, Type::Name(m), Type::Name(n)) => m == n && *m != alpha,
        (_, Type::Dyn, Type::Dyn) | (_, Type::Empty, Type::Empty) => true,
        (_, Type::Base(m), Type::Base(n)) => m == n,
        (_, Type::Var(x), Type::Var(y)) => x == y,
        (_, Type::Fun(a1, b1), Type::Fun(a2, b2)) => {
            convertible(store, a2, phi.negate(), a1) && convertible(store, b1, phi, b2)
        }
        (_, Type::Forall(x, k1, a1), Type::Forall(y, k2, b1)) => {
            if k1 != k2 {
                return false;
            }
            let (_, a1, b1) = open_pair(x, a1, y, b1);
            convertible(store, &a1, phi, &b1)
        }
        (_, Type::Record(r1), Type::Record(r2)) | (_, Type::Variant(r1), Type::Variant(r2)) => {
            convertible(store, r1, phi, r2)
        }
        (_, Type::Ext(l1, a1, r1), Type::Ext(l2, a2, r2)) => {
            l1 == l2 && convertible(store, a1, phi, a2) && convertible(store, r1, phi, r2)
        }
        _ => false,
    }
}

/// Types a core term. `Ok(None)` means the term's type is unconstrained:
/// it is `blame p`, or blame sits in an evaluation position that decides the
/// type.
pub fn typecheck_core(store: &NameStore, ctx: &Ctx, e: &CoreTerm) -> Result<Option<Type>, TypeError> {
    let mut ctx = ctx.clone();
    CoreChecker { store }.tc(&mut ctx, e)
}

/// Checks that a core term has exactly type `a` (up to alpha-equivalence).
pub fn typecheck_core_against(
    store: &NameStore,
    ctx: &Ctx,
    e: &CoreTerm,
    a: &Type,
) -> Result<(), TypeError> {
    match typecheck_core(store, ctx, e)? {
        Some(found) if !alpha_eq(&found, a) => Err(err(
            "T-Result",
            format!("term has type `{found}`, expected `{a}`"),
        )),
        _ => Ok(()),
    }
}

fn err(rule: &str, msg: impl Into<String>) -> TypeError {
    TypeError::new(rule, msg, Span::default())
}

struct CoreChecker<'a> {
    store: &'a NameStore,
}

impl CoreChecker<'_> {
    fn kind(&self, ctx: &Ctx, a: &Type, k: Kind, rule: &str) -> Result<(), TypeError> {
        check_kind(Some(self.store), ctx, a, k).map_err(|m| err(rule, m))
    }

    fn expect(&self, found: &Option<Type>, want: &Type, rule: &str) -> Result<(), TypeError> {
        match found {
            Some(t) if !alpha_eq(t, want) => {
                Err(err(rule, format!("found `{t}`, expected `{want}`")))
            }
            _ => Ok(()),
        }
    }

    fn tc(&self, ctx: &mut Ctx, e: &CoreTerm) -> Result<Option<Type>, TypeError> {
        match e {
            CoreTerm::Var(x) => ctx
                .lookup_term(x)
                .cloned()
                .map(Some)
                .ok_or_else(|| err("T-Var", format!("unbound variable `{x}`"))),
            CoreTerm::Const(c) => Ok(Some(c.ty())),
            CoreTerm::Lam(x, a, body) => {
                self.kind(ctx, a, Kind::T, "T-Abs")?;
                ctx.push_term(x, a.clone());
                let r = self.tc(ctx, body);
                ctx.pop();
                Ok(r?.map(|b| Type::fun(a.clone(), b)))
            }
            CoreTerm::App(f, arg) => {
                let tf = self.tc(ctx, f)?;
                let ta = self.tc(ctx, arg)?;
                match tf {
                    None => Ok(None),
                    Some(Type::Fun(a, b)) => {
                        self.expect(&ta, &a, "T-App")?;
                        Ok(Some(*b))
                    }
                    Some(t) => Err(err("T-App", format!("`{t}` is not a function type"))),
                }
            }
            CoreTerm::TLam(x, k, body, a) => {
                ctx.push_type(x, *k);
                let r = self
                    .tc(ctx, body)
                    .and_then(|t| self.expect(&t, a, "T-TAbs"))
                    .and_then(|_| self.kind(ctx, a, Kind::T, "T-TAbs"));
                ctx.pop();
                r?;
                Ok(Some(Type::Forall(x.clone(), *k, Box::new(a.clone()))))
            }
            CoreTerm::TApp(f, b) => match self.tc(ctx, f)? {
                None => Ok(None),
                Some(Type::Forall(x, k, a)) => {
                    self.kind(ctx, b, k, "T-TApp")?;
                    Ok(Some(subst_ty(&a, &x, b)))
                }
                Some(t) => Err(err("T-TApp", format!("`{t}` is not a quantified type"))),
            },
            CoreTerm::REmp => Ok(Some(Type::record(Type::Empty))),
            CoreTerm::RExt(l, e1, e2) => {
                let t1 = self.tc(ctx, e1)?;
                let t2 = self.tc(ctx, e2)?;
                match (t1, t2) {
                    (Some(a), Some(Type::Record(r))) => {
                        Ok(Some(Type::record(Type::Ext(l.clone(), Box::new(a), r))))
                    }
                    (_, Some(t)) if !matches!(t, Type::Record(_)) => {
                        Err(err("T-RExt", format!("`{t}` is not a record type")))
                    }
                    _ => Ok(None),
                }
            }
            CoreTerm::RLet(l, x, y, e1, e2) => match self.tc(ctx, e1)? {
                None => Ok(None),
                Some(Type::Record(r)) => match *r {
                    Type::Ext(m, a, rest) if m == *l => {
                        ctx.push_term(x, *a);
                        ctx.push_term(y, Type::Record(rest));
                        let res = self.tc(ctx, e2);
                        ctx.pop();
                        ctx.pop();
                        res
                    }
                    other => Err(err(
                        "T-RLet",
                        format!("record row `{other}` does not start with `{l}`"),
                    )),
                },
                Some(t) => Err(err("T-RLet", format!("`{t}` is not a record type"))),
            },
            CoreTerm::Inj(l, e1, rest) => {
                self.kind(ctx, rest, Kind::R, "T-VInj")?;
                Ok(self
                    .tc(ctx, e1)?
                    .map(|a| Type::variant(Type::Ext(l.clone(), Box::new(a), Box::new(rest.clone())))))
            }
            CoreTerm::Embed(l, a, e1) => {
                self.kind(ctx, a, Kind::T, "T-VEmbed")?;
                match self.tc(ctx, e1)? {
                    None => Ok(None),
                    Some(Type::Variant(r)) => {
                        Ok(Some(Type::variant(Type::Ext(l.clone(), Box::new(a.clone()), r))))
                    }
                    Some(t) => Err(err("T-VEmbed", format!("`{t}` is not a variant type"))),
                }
            }
            CoreTerm::Case(e0, l, x, e1, y, e2) => match self.tc(ctx, e0)? {
                None => Ok(None),
                Some(Type::Variant(r)) => match *r {
                    Type::Ext(m, a, rest) if m == *l => {
                        ctx.push_term(x, *a);
                        let c = self.tc(ctx, e1);
                        ctx.pop();
                        let c = c?;
                        ctx.push_term(y, Type::Variant(rest));
                        let d = self.tc(ctx, e2);
                        ctx.pop();
                        let d = d?;
                        match (c, d) {
                            (Some(c), Some(d)) => {
                                if alpha_eq(&c, &d) {
                                    Ok(Some(c))
                                } else {
                                    Err(err("T-VCase", format!("branches have types `{c}` and `{d}`")))
                                }
                            }
                            (Some(c), None) | (None, Some(c)) => Ok(Some(c)),
                            (None, None) => Ok(None),
                        }
                    }
                    other => Err(err(
                        "T-VCase",
                        format!("variant row `{other}` does not start with `{l}`"),
                    )),
                },
                Some(t) => Err(err("T-VCase", format!("`{t}` is not a variant type"))),
            },
            CoreTerm::Cast(e1, a, _, b) => {
                self.kind(ctx, a, Kind::T, "T-Cast")?;
                self.kind(ctx, b, Kind::T, "T-Cast")?;
                let t = self.tc(ctx, e1)?;
                self.expect(&t, a, "T-Cast")?;
                if !consistent_equiv(a, b) {
                    return Err(err("T-Cast", format!("`{a}` and `{b}` are not consistent")));
                }
                Ok(Some(b.clone()))
            }
            CoreTerm::Conv(e1, a, phi, b) => {
                if self.store.get(phi.name).is_none() {
                    return Err(err("T-Conv", format!("unbound type name `{}`", phi.name)));
                }
                self.kind(ctx, a, Kind::T, "T-Conv")?;
                self.kind(ctx, b, Kind::T, "T-Conv")?;
                let t = self.tc(ctx, e1)?;
                self.expect(&t, a, "T-Conv")?;
                if !convertible(self.store, a, *phi, b) {
                    return Err(err(
                        "T-Conv",
                        format!("`{a}` does not convert to `{b}` by {phi}"),
                    ));
                }
                Ok(Some(b.clone()))
            }
            CoreTerm::Blame(_) => Ok(None),
        }
    }
}

/// Translates a gradual program into the cast calculus, returning the core
/// term and the program's gradual type.
pub fn translate(ctx: &Ctx, m: &Term) -> Result<(CoreTerm, Type), TypeError> {
    elaborate(Mode::Gradual, ctx, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_program, parse_type};

    fn t(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn p(n: u32) -> BlameLabel {
        BlameLabel::new(n)
    }

    #[test]
    fn convertibility() {
        let mut store = NameStore::new();
        let a = store.fresh(Kind::T, Type::bool());
        let na = Type::Name(a);
        assert!(convertible(&store, &na, ConvLabel::plus(a), &Type::bool()));
        assert!(!convertible(&store, &na, ConvLabel::plus(a), &na));
        assert!(convertible(&store, &Type::var("X"), ConvLabel::plus(a), &Type::var("X")));
        assert!(convertible(
            &store,
            &Type::fun(Type::bool(), Type::int()),
            ConvLabel::minus(a),
            &Type::fun(na.clone(), Type::int())
        ));
        assert!(!convertible(
            &store,
            &Type::fun(Type::bool(), Type::int()),
            ConvLabel::plus(a),
            &Type::fun(na, Type::int())
        ));
    }

    #[test]
    fn core_typing_examples() {
        let store = NameStore::new();
        let ctx = Ctx::new();
        let up = CoreTerm::cast(CoreTerm::int(0), Type::int(), p(0), Type::Dyn);
        assert_eq!(typecheck_core(&store, &ctx, &up).unwrap(), Some(Type::Dyn));
        let bad = CoreTerm::cast(CoreTerm::int(0), Type::int(), p(0), Type::bool());
        assert_eq!(typecheck_core(&store, &ctx, &bad).unwrap_err().rule, "T-Cast");
        let id = CoreTerm::tlam(
            "X",
            Kind::T,
            CoreTerm::lam("x", Type::var("X"), CoreTerm::var("x")),
            t("X -> X"),
        );
        assert_eq!(
            typecheck_core(&store, &ctx, &id).unwrap(),
            Some(t("forall X:T. X -> X"))
        );
    }

    #[test]
    fn translation_of_dynamic_application() {
        let m = parse_program("lam f:?. f 0").unwrap();
        let (e, a) = translate(&Ctx::new(), &m).unwrap();
        assert_eq!(a, t("? -> ?"));
        assert_eq!(
            e.to_string(),
            "lam f:?. (f : ? =p0=> ? -> ?) (0 : Int =p1=> ?)"
        );
        let (e, _) = translate(&Ctx::new(), &parse_program("0").unwrap()).unwrap();
        assert_eq!(e, CoreTerm::int(0));
    }

    #[test]
    fn printing() {
        let e = CoreTerm::cast(CoreTerm::int(0), Type::int(), p(0), Type::Dyn);
        assert_eq!(e.to_string(), "(0 : Int =p0=> ?)");
        assert_eq!(CoreTerm::Blame(p(3)).to_string(), "blame p3");
        assert_eq!(p(0).negate().to_string(), "~p0");
        let c = CoreTerm::conv(CoreTerm::int(1), Type::int(), ConvLabel::plus(TyName(0)), Type::int());
        assert_eq!(c.to_string(), "(1 : Int =+a0=> Int)");
    }
}
