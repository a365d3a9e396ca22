//! Kinding, typing contexts, and the static and gradual typecheckers.
//!
//! Both checkers run on one engine. It is syntax-directed and carries an
//! optional expected type ("hint") downward, which lets an injection `l M`
//! pick up the rest of its row from the context it is used in. Without a
//! hint an injection gets the closed row `<l:A; .>`.
//!
//! The engine also produces the cast-inserted core term, so the gradual
//! checker and the translation cannot disagree.

use thiserror::Error;

use crate::core::{BlameLabel, CoreTerm, NameStore};
use crate::gradual_rel::{consistent_equiv, merge, type_match, Shape};
use crate::rows::{equiv, split_row};
use crate::subst::{alpha_eq, subst_ty};
use crate::syntax::{Kind, Span, Term, TermKind, Type};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    Term(String, Type),
    Type(String, Kind),
}

/// An ordered typing context; lookups see the rightmost binding.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ctx {
    bindings: Vec<Binding>,
}

impl Ctx {
    pub fn new() -> Ctx {
        Ctx::default()
    }

    pub fn with_term(mut self, x: &str, a: Type) -> Ctx {
        self.push_term(x, a);
        self
    }

    pub fn with_type(mut self, x: &str, k: Kind) -> Ctx {
        self.push_type(x, k);
        self
    }

    pub fn push_term(&mut self, x: &str, a: Type) {
        self.bindings.push(Binding::Term(x.to_string(), a));
    }

    pub fn push_type(&mut self, x: &str, k: Kind) {
        self.bindings.push(Binding::Type(x.to_string(), k));
    }

    pub fn pop(&mut self) {
        self.bindings.pop();
    }

    pub fn lookup_term(&self, x: &str) -> Option<&Type> {
        self.bindings.iter().rev().find_map(|b| match b {
            Binding::Term(y, a) if y == x => Some(a),
            _ => None,
        })
    }

    pub fn lookup_type(&self, x: &str) -> Option<Kind> {
        self.bindings.iter().rev().find_map(|b| match b {
            Binding::Type(y, k) if y == x => Some(*k),
            _ => None,
        })
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.bindings
    }
}

/// Errors name the rule that failed and the span of the offending term.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type error ({rule}) at {span}: {message}")]
pub struct TypeError {
    pub rule: String,
    pub message: String,
    pub span: Span,
}

impl TypeError {
    pub fn new(rule: impl Into<String>, message: impl Into<String>, span: Span) -> TypeError {
        TypeError {
            rule: rule.into(),
            message: message.into(),
            span,
        }
    }
}

/// Checks `A : K`. `?` has both kinds. Names are looked up in `store`.
pub fn check_kind(store: Option<&NameStore>, ctx: &Ctx, a: &Type, k: Kind) -> Result<(), String> {
    let want = |found: Kind| {
        if found == k {
            Ok(())
        } else {
            Err(format!("`{a}` has kind {found}, expected {k}"))
        }
    };
    match a {
        Type::Dyn => Ok(()),
        Type::Var(x) => match ctx.lookup_type(x) {
            Some(found) => want(found),
            None => Err(format!("unbound type variable `{x}`")),
        },
        Type::Name(n) => match store.and_then(|s| s.get(*n)) {
            Some((found, _)) => want(*found),
            None => Err(format!("unbound type name `{n}`")),
        },
        Type::Base(_) => want(Kind::T),
        Type::Fun(x, y) => {
            want(Kind::T)?;
            check_kind(store, ctx, x, Kind::T)?;
            check_kind(store, ctx, y, Kind::T)
        }
        Type::Forall(x, k2, body) => {
            want(Kind::T)?;
            let mut inner = ctx.clone();
            inner.push_type(x, *k2);
            check_kind(store, &inner, body, Kind::T)
        }
        Type::Record(r) | Type::Variant(r) => {
            want(Kind::T)?;
            check_kind(store, ctx, r, Kind::R)
        }
        Type::Empty => want(Kind::R),
        Type::Ext(_, f, r) => {
            want(Kind::R)?;
            check_kind(store, ctx, f, Kind::T)?;
            check_kind(store, ctx, r, Kind::R)
        }
    }
}

/// The kind of a type; `?` is reported as `T`.
pub fn kind_of(ctx: &Ctx, a: &Type) -> Result<Kind, String> {
    kind_of_in(None, ctx, a)
}

pub(crate) fn kind_of_in(store: Option<&NameStore>, ctx: &Ctx, a: &Type) -> Result<Kind, String> {
    let k = match a {
        Type::Empty | Type::Ext(..) => Kind::R,
        Type::Var(x) => ctx
            .lookup_type(x)
            .ok_or_else(|| format!("unbound type variable `{x}`"))?,
        Type::Name(n) => store
            .and_then(|s| s.get(*n))
            .map(|(k, _)| *k)
            .ok_or_else(|| format!("unbound type name `{n}`"))?,
        _ => Kind::T,
    };
    check_kind(store, ctx, a, k)?;
    Ok(k)
}

/// Every term binding's type kinds at `T` under the bindings before it.
pub fn wf_context(ctx: &Ctx) -> Result<(), String> {
    let mut prefix = Ctx::new();
    for b in &ctx.bindings {
        if let Binding::Term(x, a) = b {
            check_kind(None, &prefix, a, Kind::T).map_err(|e| format!("binding `{x}`: {e}"))?;
        }
        prefix.bindings.push(b.clone());
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Static,
    Gradual,
}

pub fn typecheck_static(ctx: &Ctx, m: &Term) -> Result<Type, TypeError> {
    elaborate(Mode::Static, ctx, m).map(|(_, a)| a)
}

pub fn typecheck_gradual(ctx: &Ctx, m: &Term) -> Result<Type, TypeError> {
    elaborate(Mode::Gradual, ctx, m).map(|(_, a)| a)
}

/// Typechecks `m` and builds its cast-inserted core term. Blame labels are
/// numbered `p0, p1, ...` in the order their casts complete, left to right.
pub fn elaborate(mode: Mode, ctx: &Ctx, m: &Term) -> Result<(CoreTerm, Type), TypeError> {
    wf_context(ctx).map_err(|e| TypeError::new("WF-Ctx", e, m.span))?;
    let mut engine = Engine { mode, next: 0 };
    let mut ctx = ctx.clone();
    let (e, a) = engine.go(&mut ctx, m, None)?;
    Ok((renumber(e), a))
}

struct Engine {
    mode: Mode,
    next: u32,
}

impl Engine {
    fn rule(&self, name: &str) -> String {
        match self.mode {
            Mode::Static => format!("Ts-{name}"),
            Mode::Gradual => format!("Tg-{name}"),
        }
    }

    fn err<T>(&self, rule: &str, msg: impl Into<String>, span: Span) -> Result<T, TypeError> {
        Err(TypeError::new(self.rule(rule), msg, span))
    }

    fn compat(&self, a: &Type, b: &Type) -> bool {
        match self.mode {
            Mode::Static => equiv(a, b),
            Mode::Gradual => consistent_equiv(a, b),
        }
    }

    fn join(&self, a: &Type, b: &Type) -> Option<Type> {
        match self.mode {
            Mode::Static => equiv(a, b).then(|| a.clone()),
            Mode::Gradual => merge(a, b),
        }
    }

    fn annotation(&self, ctx: &Ctx, a: &Type, k: Kind, rule: &str, span: Span) -> Result<(), TypeError> {
        if self.mode == Mode::Static && a.contains_dyn() {
            return self.err(rule, format!("`?` in `{a}` is not allowed in a static program"), span);
        }
        check_kind(None, ctx, a, k).map_err(|e| TypeError::new(self.rule(rule), e, span))
    }

    fn coerce(&mut self, e: CoreTerm, from: &Type, to: &Type) -> CoreTerm {
        if alpha_eq(from, to) {
            e
        } else {
            let p = BlameLabel::new(self.next);
            self.next += 1;
            CoreTerm::Cast(Box::new(e), from.clone(), p, to.clone())
        }
    }

    fn go(&mut self, ctx: &mut Ctx, m: &Term, hint: Option<&Type>) -> Result<(CoreTerm, Type), TypeError> {
        let sp = m.span;
        match &m.kind {
            TermKind::Var(x) => match ctx.lookup_term(x) {
                Some(a) => Ok((CoreTerm::Var(x.clone()), a.clone())),
                None => self.err("Var", format!("unbound variable `{x}`"), sp),
            },
            TermKind::Const(c) => Ok((CoreTerm::Const(c.clone()), c.ty())),
            TermKind::Lam(x, a, body) => {
                self.annotation(ctx, a, Kind::T, "Lam", sp)?;
                let body_hint = match hint {
                    Some(Type::Fun(_, b)) => Some((**b).clone()),
                    _ => None,
                };
                ctx.push_term(x, a.clone());
                let r = self.go(ctx, body, body_hint.as_ref());
                ctx.pop();
                let (e, b) = r?;
                Ok((
                    CoreTerm::Lam(x.clone(), a.clone(), Box::new(e)),
                    Type::fun(a.clone(), b),
                ))
            }
            TermKind::App(f, arg) => {
                let (e1, a1) = self.go(ctx, f, None)?;
                let Some(matched) = type_match(&a1, Shape::Fun) else {
                    return self.err("App", format!("`{a1}` is not a function type"), f.span);
                };
                let e1 = self.coerce(e1, &a1, &matched);
                let Type::Fun(dom, cod) = &matched else { unreachable!() };
                let (e2, a2) = self.go(ctx, arg, Some(dom))?;
                if !self.compat(&a2, dom) {
                    return self.err(
                        "App",
                        format!("argument has type `{a2}`, expected `{dom}`"),
                        arg.span,
                    );
                }
                let e2 = self.coerce(e2, &a2, dom);
                Ok((CoreTerm::App(Box::new(e1), Box::new(e2)), (**cod).clone()))
            }
            TermKind::TLam(x, k, body) => {
                let body_hint = match hint {
                    Some(Type::Forall(y, k2, b)) if k2 == k => {
                        Some(subst_ty(b, y, &Type::Var(x.clone())))
                    }
                    _ => None,
                };
                ctx.push_type(x, *k);
                let r = self.go(ctx, body, body_hint.as_ref());
                ctx.pop();
                let (e, a) = r?;
                Ok((
                    CoreTerm::TLam(x.clone(), *k, Box::new(e), a.clone()),
                    Type::Forall(x.clone(), *k, Box::new(a)),
                ))
            }
            TermKind::TApp(f, b) => {
                let (e, a) = self.go(ctx, f, None)?;
                let k = match (&a, b) {
                    (Type::Forall(_, k, _), Type::Dyn) => *k,
                    _ => kind_of(ctx, b).map_err(|msg| TypeError::new(self.rule("TApp"), msg, sp))?,
                };
                self.annotation(ctx, b, k, "TApp", sp)?;
                let Some(matched) = type_match(&a, Shape::Forall(k)) else {
                    return self.err(
                        "TApp",
                        format!("`{a}` is not a quantified type over kind {k}"),
                        f.span,
                    );
                };
                let e = self.coerce(e, &a, &matched);
                let Type::Forall(x, _, body) = &matched else { unreachable!() };
                Ok((CoreTerm::TApp(Box::new(e), b.clone()), subst_ty(body, x, b)))
            }
            TermKind::REmpty => Ok((CoreTerm::REmp, Type::record(Type::Empty))),
            TermKind::RExtend(l, m1, m2) => {
                let split = hint
                    .and_then(|h| type_match(h, Shape::Record))
                    .and_then(|h| match h {
                        Type::Record(r) => split_row(&r, l),
                        _ => None,
                    });
                let (h1, h2) = match split {
                    Some((b, rest)) => (Some(b), Some(Type::record(rest))),
                    None => (None, None),
                };
                let (e1, a1) = self.go(ctx, m1, h1.as_ref())?;
                let (e2, a2) = self.go(ctx, m2, h2.as_ref())?;
                let Some(matched) = type_match(&a2, Shape::Record) else {
                    return self.err("RExt", format!("`{a2}` is not a record type"), m2.span);
                };
                let e2 = self.coerce(e2, &a2, &matched);
                let Type::Record(rho) = matched else { unreachable!() };
                Ok((
                    CoreTerm::RExt(l.clone(), Box::new(e1), Box::new(e2)),
                    Type::record(Type::Ext(l.clone(), Box::new(a1), rho)),
                ))
            }
            TermKind::RLet(l, x, y, m1, m2) => {
                let (e1, a1) = self.go(ctx, m1, None)?;
                let Some(Type::Record(rho)) = type_match(&a1, Shape::Record) else {
                    return self.err("RLet", format!("`{a1}` is not a record type"), m1.span);
                };
                let Some((b, rest)) = split_row(&rho, l) else {
                    return self.err("RLet", format!("no field `{l}` in `{a1}`"), m1.span);
                };
                let target = Type::record(Type::ext(l, b.clone(), rest.clone()));
                let e1 = self.coerce(e1, &a1, &target);
                ctx.push_term(x, b);
                ctx.push_term(y, Type::record(rest));
                let r = self.go(ctx, m2, hint);
                ctx.pop();
                ctx.pop();
                let (e2, c) = r?;
                Ok((
                    CoreTerm::RLet(l.clone(), x.clone(), y.clone(), Box::new(e1), Box::new(e2)),
                    c,
                ))
            }
            TermKind::VInj(l, m1) => {
                let split = hint
                    .and_then(|h| type_match(h, Shape::Variant))
                    .and_then(|h| match h {
                        Type::Variant(r) => split_row(&r, l),
                        _ => None,
                    });
                let (h1, rest) = match split {
                    Some((b, rest)) => (Some(b), rest),
                    None => (None, Type::Empty),
                };
                let (e, a) = self.go(ctx, m1, h1.as_ref())?;
                Ok((
                    CoreTerm::Inj(l.clone(), Box::new(e), rest.clone()),
                    Type::variant(Type::ext(l, a, rest)),
                ))
            }
            TermKind::VEmbed(l, a, m1) => {
                self.annotation(ctx, a, Kind::T, "VEmbed", sp)?;
                let h1 = hint
                    .and_then(|h| type_match(h, Shape::Variant))
                    .and_then(|h| match h {
                        Type::Variant(r) => split_row(&r, l),
                        _ => None,
                    })
                    .map(|(_, rest)| Type::variant(rest));
                let (e, a1) = self.go(ctx, m1, h1.as_ref())?;
                let Some(matched) = type_match(&a1, Shape::Variant) else {
                    return self.err("VEmbed", format!("`{a1}` is not a variant type"), m1.span);
                };
                let e = self.coerce(e, &a1, &matched);
                let Type::Variant(rho) = matched else { unreachable!() };
                Ok((
                    CoreTerm::Embed(l.clone(), a.clone(), Box::new(e)),
                    Type::variant(Type::Ext(l.clone(), Box::new(a.clone()), rho)),
                ))
            }
            TermKind::VCase(m0, l, x, m1, y, m2) => {
                let (e0, a0) = self.go(ctx, m0, None)?;
                let Some(Type::Variant(rho)) = type_match(&a0, Shape::Variant) else {
                    return self.err("VCase", format!("`{a0}` is not a variant type"), m0.span);
                };
                let Some((b, rest)) = split_row(&rho, l) else {
                    return self.err("VCase", format!("no case `{l}` in `{a0}`"), m0.span);
                };
                let target = Type::variant(Type::ext(l, b.clone(), rest.clone()));
                let e0 = self.coerce(e0, &a0, &target);
                ctx.push_term(x, b);
                let r1 = self.go(ctx, m1, hint);
                ctx.pop();
                let (e1, c) = r1?;
                ctx.push_term(y, Type::variant(rest));
                let r2 = self.go(ctx, m2, hint);
                ctx.pop();
                let (e2, d) = r2?;
                let Some(joined) = self.join(&c, &d) else {
                    return self.err(
                        "VCase",
                        format!("branch types `{c}` and `{d}` do not agree"),
                        sp,
                    );
                };
                let e1 = self.coerce(e1, &c, &joined);
                let e2 = self.coerce(e2, &d, &joined);
                Ok((
                    CoreTerm::Case(
                        Box::new(e0),
                        l.clone(),
                        x.clone(),
                        Box::new(e1),
                        y.clone(),
                        Box::new(e2),
                    ),
                    joined,
                ))
            }
            TermKind::Ascribe(m1, a, asp) => {
                self.annotation(ctx, a, Kind::T, "Asc", *asp)?;
                let (e, b) = self.go(ctx, m1, Some(a))?;
                if !self.compat(&b, a) {
                    return self.err("Asc", format!("`{b}` is not compatible with `{a}`"), sp);
                }
                Ok((self.coerce(e, &b, a), a.clone()))
            }
        }
    }
}

/// Renumbers blame labels in post-order: a cast's label comes after every
/// label inside its subject, and siblings are numbered left to right.
fn renumber(e: CoreTerm) -> CoreTerm {
    fn walk(e: CoreTerm, next: &mut u32) -> CoreTerm {
        match e {
            CoreTerm::Cast(e, a, _, b) => {
                let e = walk(*e, next);
                let p = BlameLabel::new(*next);
                *next += 1;
                CoreTerm::Cast(Box::new(e), a, p, b)
            }
            other => other.map_children(&mut |c| Box::new(walk(*c, next))),
        }
    }
    walk(e, &mut 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_program, parse_type};

    fn t(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn stat(src: &str) -> Result<Type, TypeError> {
        typecheck_static(&Ctx::new(), &parse_program(src).unwrap())
    }

    fn grad(src: &str) -> Result<Type, TypeError> {
        typecheck_gradual(&Ctx::new(), &parse_program(src).unwrap())
    }

    #[test]
    fn kinding() {
        let ctx = Ctx::new().with_type("X", Kind::R);
        assert!(check_kind(None, &ctx, &t("[l:Int; .]"), Kind::T).is_ok());
        assert!(check_kind(None, &ctx, &t("l:Int; X"), Kind::R).is_ok());
        assert!(check_kind(None, &ctx, &t("l:Int; ."), Kind::T).is_err());
        assert!(check_kind(None, &ctx, &t("[?]"), Kind::T).is_ok());
        assert!(check_kind(None, &ctx, &Type::Dyn, Kind::R).is_ok());
        assert_eq!(kind_of(&ctx, &t("l:Int; X")), Ok(Kind::R));
    }

    #[test]
    fn contexts() {
        assert!(wf_context(&Ctx::new()).is_ok());
        assert!(wf_context(&Ctx::new().with_term("x", t("[?]"))).is_ok());
        assert!(wf_context(&Ctx::new().with_term("x", t("l:Int; ."))).is_err());
        let ctx = Ctx::new().with_term("x", Type::int()).with_term("x", Type::bool());
        assert_eq!(ctx.lookup_term("x"), Some(&Type::bool()));
    }

    #[test]
    fn static_examples() {
        assert_eq!(stat("lam x:Int. x").unwrap(), t("Int -> Int"));
        let err = stat("0 true").unwrap_err();
        assert_eq!(err.rule, "Ts-App");
        let reorder = "lam f:(forall X:R. [l1:Int; X] -> Int). f [l2:Bool; .] {l2=true;{l1=0;{}}}";
        assert_eq!(
            stat(reorder).unwrap(),
            t("(forall X:R. [l1:Int; X] -> Int) -> Int")
        );
        assert!(stat("lam x:?. x").is_err());
    }

    #[test]
    fn gradual_examples() {
        assert_eq!(grad("lam f:?. f 0").unwrap(), t("? -> ?"));
        assert_eq!(
            grad("lam w:[width:Int; ?]. let {width=x; y} = w in x").unwrap(),
            t("[width:Int; ?] -> Int")
        );
        assert_eq!(grad("0 1").unwrap_err().rule, "Tg-App");
    }

    #[test]
    fn injection_uses_expected_row() {
        assert_eq!(
            grad("l2 0 : <l1:Bool; l2:Int; .>").unwrap(),
            t("<l1:Bool; l2:Int; .>")
        );
        assert_eq!(stat("l 0").unwrap(), t("<l:Int; .>"));
        assert!(stat("l2 0 : <l1:Bool; .>").is_err());
    }

    #[test]
    fn branches_are_merged() {
        let src = "lam v:<a:Int; b:Bool; .>. case v with <a x -> (x : ?); y -> 1>";
        assert_eq!(grad(src).unwrap(), t("<a:Int; b:Bool; .> -> ?"));
        let bad = "lam v:<a:Int; .>. case v with <a x -> x; y -> true>";
        assert_eq!(grad(bad).unwrap_err().rule, "Tg-VCase");
    }

    #[test]
    fn errors_carry_spans() {
        let src = "lam x:Int. x true";
        let err = stat(src).unwrap_err();
        assert_eq!(&src[err.span.start..err.span.end], "x");
    }
}
