//! Small-step evaluation: the machine for the cast calculus, and a reference
//! evaluator for the static language.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::core::{
    typecheck_core, typecheck_core_against, BlameLabel, ConvLabel, CoreTerm, NameStore, Polarity,
};
use crate::gradual_rel::{consistent_equiv, ground_of, is_ground, qpoly};
use crate::rows::{fields, from_fields, grow, in_dom, is_ground_row, postpend, split_row};
use crate::statics::Ctx;
use crate::subst::{alpha_eq, fresh_name, ftv, open_pair, subst_ty};
use crate::syntax::{Term, TermKind, Type};

pub const DEFAULT_FUEL: u64 = 100_000;

/// Reads `ROWG_FUEL`, falling back to the default.
pub fn fuel_from_env() -> u64 {
    std::env::var("ROWG_FUEL")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_FUEL)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("stuck term: {0}")]
    Stuck(String),
    #[error("step {step} ({rule}) produced an ill-typed term: {message}")]
    IllTyped {
        step: u64,
        rule: String,
        message: String,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    pub fuel: u64,
    /// Re-typecheck the term after every step.
    pub check_steps: bool,
    /// Use the simplified variant-concealment rule.
    pub primed_conlift: bool,
    /// Record every intermediate state.
    pub trace: bool,
}

impl Default for EvalOptions {
    fn default() -> EvalOptions {
        EvalOptions {
            fuel: DEFAULT_FUEL,
            check_steps: false,
            primed_conlift: false,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Value(CoreTerm),
    Blamed(BlameLabel),
    FuelExhausted(CoreTerm),
}

#[derive(Debug, Clone)]
pub struct TraceEntry {
    pub step: u64,
    pub rule: &'static str,
    pub store: NameStore,
    pub term: CoreTerm,
}

/// One JSON-lines record of a trace.
#[derive(Debug, Clone, Serialize)]
pub struct TraceRecord {
    pub step: u64,
    pub rule: String,
    pub store: Vec<String>,
    pub term: String,
}

impl TraceEntry {
    /// The JSON form. `store` lists the names allocated since the store held
    /// `prev_len` entries.
    pub fn record(&self, prev_len: usize) -> TraceRecord {
        TraceRecord {
            step: self.step,
            rule: self.rule.to_string(),
            store: self
                .store
                .iter()
                .skip(prev_len)
                .map(|(n, k, a)| format!("{n}:{k}:={a}"))
                .collect(),
            term: self.term.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Run {
    pub outcome: Outcome,
    pub store: NameStore,
    pub steps: u64,
    pub trace: Vec<TraceEntry>,
}

impl Run {
    /// The sequence of rule names applied.
    pub fn rules(&self) -> Vec<&'static str> {
        self.trace.iter().map(|t| t.rule).collect()
    }
}

// ---------------------------------------------------------------------------
// Values and syntactic helpers
// ---------------------------------------------------------------------------

pub fn is_value(e: &CoreTerm) -> bool {
    match e {
        CoreTerm::Const(_) | CoreTerm::Lam(..) | CoreTerm::TLam(..) | CoreTerm::REmp => true,
        CoreTerm::RExt(_, v1, v2) => is_value(v1) && is_value(v2),
        CoreTerm::Inj(_, v, _) | CoreTerm::Embed(_, _, v) => is_value(v),
        CoreTerm::Cast(v, a, _, b) => {
            is_value(v)
                && match (a, b) {
                    (_, Type::Dyn) => !a.is_dyn() && is_ground(a),
                    (Type::Record(r), Type::Record(s)) | (Type::Variant(r), Type::Variant(s)) => {
                        s.is_dyn() && is_ground_row(r)
                    }
                    _ => false,
                }
        }
        CoreTerm::Conv(v, a, phi, b) => {
            is_value(v)
                && phi.polarity == Polarity::Minus
                && match (a, b) {
                    (_, Type::Name(n)) => *n == phi.name,
                    (Type::Record(_), Type::Record(r)) | (Type::Variant(_), Type::Variant(r)) => {
                        **r == Type::Name(phi.name)
                    }
                    _ => false,
                }
        }
        _ => false,
    }
}

/// `v ▷ℓ v1, v2`: takes the first `l` field out of a record value.
pub fn record_split_value(v: &CoreTerm, l: &str) -> Option<(CoreTerm, CoreTerm)> {
    match v {
        CoreTerm::RExt(m, v1, v2) => {
            if m == l {
                Some(((**v1).clone(), (**v2).clone()))
            } else {
                let (w, rest) = record_split_value(v2, l)?;
                Some((w, CoreTerm::RExt(m.clone(), v1.clone(), Box::new(rest))))
            }
        }
        _ => None,
    }
}

/// `⇑ρ e`: wraps `e` in one embedding per field of `ρ`, first field outermost.
pub fn row_embed(row: &Type, e: CoreTerm) -> CoreTerm {
    let (fs, _) = fields(row);
    fs.into_iter()
        .rev()
        .fold(e, |acc, (l, a)| CoreTerm::embed(l, a.clone(), acc))
}

/// Inserts `l:a` into `row` after its first `n` fields.
fn insert_field(row: &Type, n: usize, l: &str, a: &Type) -> Type {
    if n == 0 {
        return Type::ext(l, a.clone(), row.clone());
    }
    match row {
        Type::Ext(m, b, rest) => Type::Ext(
            m.clone(),
            b.clone(),
            Box::new(insert_field(rest, n - 1, l, a)),
        ),
        _ => Type::ext(l, a.clone(), row.clone()),
    }
}

/// `↓ρ,ℓ,A e`: moves a term of type `<ρ ⊙ ρ'>` to `<ρ ⊙ (l:A; ρ')>`,
/// where `erow` is the full row `ρ ⊙ ρ'` of `e`. Only the fields of `prefix`
/// matter; its tail is ignored.
pub fn field_insert(prefix: &Type, l: &str, a: &Type, e: CoreTerm, erow: &Type) -> CoreTerm {
    let (fs, _) = fields(prefix);
    insert_rec(&fs, l, a, e, erow)
}

fn insert_rec(fs: &[(&str, &Type)], l: &str, a: &Type, e: CoreTerm, erow: &Type) -> CoreTerm {
    match fs.split_first() {
        None => CoreTerm::embed(l, a.clone(), e),
        Some(((m, b), rest)) => {
            // `e` is closed, so the fixed binder names cannot capture anything.
            let tail = match erow {
                Type::Ext(_, _, t) => (**t).clone(),
                other => other.clone(),
            };
            let inj_row = insert_field(&tail, rest.len(), l, a);
            CoreTerm::case(
                e,
                m,
                "x",
                CoreTerm::inj(m, CoreTerm::var("x"), inj_row),
                "y",
                CoreTerm::embed(
                    m,
                    (*b).clone(),
                    insert_rec(rest, l, a, CoreTerm::var("y"), &tail),
                ),
            )
        }
    }
}

// ---------------------------------------------------------------------------
// Substitution on core terms
// ---------------------------------------------------------------------------

fn fv_core(e: &CoreTerm) -> BTreeSet<String> {
    fn go(e: &CoreTerm, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match e {
            CoreTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            CoreTerm::Lam(x, _, b) => {
                bound.push(x.clone());
                go(b, bound, out);
                bound.pop();
            }
            CoreTerm::RLet(_, x, y, e1, e2) => {
                go(e1, bound, out);
                bound.push(x.clone());
                bound.push(y.clone());
                go(e2, bound, out);
                bound.pop();
                bound.pop();
            }
            CoreTerm::Case(e0, _, x, e1, y, e2) => {
                go(e0, bound, out);
                bound.push(x.clone());
                go(e1, bound, out);
                bound.pop();
                bound.push(y.clone());
                go(e2, bound, out);
                bound.pop();
            }
            CoreTerm::Const(_) | CoreTerm::REmp | CoreTerm::Blame(_) => {}
            CoreTerm::TLam(_, _, b, _)
            | CoreTerm::TApp(b, _)
            | CoreTerm::Inj(_, b, _)
            | CoreTerm::Embed(_, _, b)
            | CoreTerm::Cast(b, ..)
            | CoreTerm::Conv(b, ..) => go(b, bound, out),
            CoreTerm::App(a, b) | CoreTerm::RExt(_, a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(e, &mut Vec::new(), &mut out);
    out
}

/// `e[v/x]`, capture-avoiding.
pub fn subst_core(e: &CoreTerm, x: &str, v: &CoreTerm) -> CoreTerm {
    let fv = fv_core(v);
    subst_core_with(e, x, v, &fv)
}

fn rename_binder(
    y: &str,
    body: &CoreTerm,
    x: &str,
    fv: &BTreeSet<String>,
) -> (String, CoreTerm) {
    if fv.contains(y) {
        let body_fv = fv_core(body);
        let z = fresh_name(y, |n| fv.contains(n) || body_fv.contains(n) || n == x);
        let body = subst_core(body, y, &CoreTerm::Var(z.clone()));
        (z, body)
    } else {
        (y.to_string(), body.clone())
    }
}

fn subst_core_with(e: &CoreTerm, x: &str, v: &CoreTerm, fv: &BTreeSet<String>) -> CoreTerm {
    let go = |t: &CoreTerm| Box::new(subst_core_with(t, x, v, fv));
    match e {
        CoreTerm::Var(y) => {
            if y == x {
                v.clone()
            } else {
                e.clone()
            }
        }
        CoreTerm::Lam(y, a, b) => {
            if y == x {
                return e.clone();
            }
            let (y2, b2) = rename_binder(y, b, x, fv);
            CoreTerm::Lam(y2, a.clone(), go(&b2))
        }
        CoreTerm::RLet(l, y1, y2, e1, e2) => {
            let e1 = go(e1);
            if y1 == x || y2 == x {
                return CoreTerm::RLet(l.clone(), y1.clone(), y2.clone(), e1, e2.clone());
            }
            let (n1, b) = rename_binder(y1, e2, x, fv);
            let (n2, b) = rename_binder(y2, &b, x, fv);
            CoreTerm::RLet(l.clone(), n1, n2, e1, go(&b))
        }
        CoreTerm::Case(e0, l, y1, e1, y2, e2) => {
            let e0 = go(e0);
            let (n1, e1) = if y1 == x {
                (y1.clone(), e1.clone())
            } else {
                let (n, b) = rename_binder(y1, e1, x, fv);
                (n, go(&b))
            };
            let (n2, e2) = if y2 == x {
                (y2.clone(), e2.clone())
            } else {
                let (n, b) = rename_binder(y2, e2, x, fv);
                (n, go(&b))
            };
            CoreTerm::Case(e0, l.clone(), n1, e1, n2, e2)
        }
        other => other.clone().map_children(&mut |c| go(&c)),
    }
}

/// `e[s/X]` on every type annotation inside `e`.
pub fn subst_ty_core(e: &CoreTerm, x: &str, s: &Type) -> CoreTerm {
    let fv = ftv(s);
    subst_ty_core_with(e, x, s, &fv)
}

fn subst_ty_core_with(e: &CoreTerm, x: &str, s: &Type, fv: &BTreeSet<String>) -> CoreTerm {
    let t = |a: &Type| subst_ty(a, x, s);
    let go = |c: &CoreTerm| Box::new(subst_ty_core_with(c, x, s, fv));
    match e {
        CoreTerm::Var(_) | CoreTerm::Const(_) | CoreTerm::REmp | CoreTerm::Blame(_) => e.clone(),
        CoreTerm::Lam(y, a, b) => CoreTerm::Lam(y.clone(), t(a), go(b)),
        CoreTerm::TLam(y, k, b, a) => {
            if y == x {
                return e.clone();
            }
            if fv.contains(y) {
                let z = fresh_name(y, |n| fv.contains(n) || n == x || core_mentions_tyvar(b, n));
                let zt = Type::Var(z.clone());
                let b2 = subst_ty_core(b, y, &zt);
                let a2 = subst_ty(a, y, &zt);
                return CoreTerm::TLam(z, *k, go(&b2), t(&a2));
            }
            CoreTerm::TLam(y.clone(), *k, go(b), t(a))
        }
        CoreTerm::TApp(b, a) => CoreTerm::TApp(go(b), t(a)),
        CoreTerm::Inj(l, b, r) => CoreTerm::Inj(l.clone(), go(b), t(r)),
        CoreTerm::Embed(l, a, b) => CoreTerm::Embed(l.clone(), t(a), go(b)),
        CoreTerm::Cast(b, a1, p, a2) => CoreTerm::Cast(go(b), t(a1), *p, t(a2)),
        CoreTerm::Conv(b, a1, phi, a2) => CoreTerm::Conv(go(b), t(a1), *phi, t(a2)),
        other => other.clone().map_children(&mut |c| go(&c)),
    }
}

fn core_mentions_tyvar(e: &CoreTerm, x: &str) -> bool {
    let mut found = false;
    e.visit(&mut |c| {
        let hit = match c {
            CoreTerm::Lam(_, a, _) | CoreTerm::TApp(_, a) | CoreTerm::Inj(_, _, a) => {
                ftv(a).contains(x)
            }
            CoreTerm::Embed(_, a, _) => ftv(a).contains(x),
            CoreTerm::TLam(y, _, _, a) => y == x || ftv(a).contains(x),
            CoreTerm::Cast(_, a, _, b) | CoreTerm::Conv(_, a, _, b) => {
                ftv(a).contains(x) || ftv(b).contains(x)
            }
            _ => false,
        };
        found |= hit;
    });
    found
}

// ---------------------------------------------------------------------------
// Reduction at the root
// ---------------------------------------------------------------------------

fn bx(e: CoreTerm) -> Box<CoreTerm> {
    Box::new(e)
}

/// One reduction step at the root of `e`, if any rule applies. Type
/// application of a type abstraction is not a reduction; see [`step`].
pub fn reduce(e: &CoreTerm, primed_conlift: bool) -> Option<(CoreTerm, &'static str)> {
    match e {
        CoreTerm::App(f, a) => match (&**f, &**a) {
            (CoreTerm::Const(k1), CoreTerm::Const(k2)) => {
                Some((CoreTerm::Const(k1.apply(k2)?), "R-Const"))
            }
            (CoreTerm::Lam(x, _, body), v) if is_value(v) => {
                Some((subst_core(body, x, v), "R-Beta"))
            }
            _ => None,
        },
        CoreTerm::RLet(l, x, y, v, body) => match &**v {
            CoreTerm::RExt(m, v1, v2) if m == l && is_value(v) => {
                let e2 = subst_core(body, x, v1);
                // `v2` is closed, so substituting it after `v1` is safe.
                Some((subst_core(&e2, y, v2), "R-Record"))
            }
            _ => None,
        },
        CoreTerm::Case(v, l, x, e1, y, e2) if is_value(v) => match &**v {
            CoreTerm::Inj(m, w, _) if m == l => Some((subst_core(e1, x, w), "R-CaseL")),
            CoreTerm::Embed(m, _, w) if m == l => Some((subst_core(e2, y, w), "R-CaseR")),
            _ => None,
        },
        CoreTerm::Cast(v, a, p, b) if is_value(v) && !is_value(e) => {
            reduce_cast(v, a, *p, b, primed_conlift)
        }
        CoreTerm::Conv(v, a, phi, b) if is_value(v) && !is_value(e) => reduce_conv(v, a, *phi, b),
        _ => None,
    }
}

fn reduce_cast(
    v: &CoreTerm,
    a: &Type,
    p: BlameLabel,
    b: &Type,
    primed_conlift: bool,
) -> Option<(CoreTerm, &'static str)> {
    let cast = |e: CoreTerm, x: &Type, q: BlameLabel, y: &Type| {
        CoreTerm::cast(e, x.clone(), q, y.clone())
    };
    match (a, b) {
        (Type::Dyn, Type::Dyn) | (Type::Base(_), Type::Base(_)) | (Type::Name(_), Type::Name(_))
            if a == b =>
        {
            Some((v.clone(), "R-Id"))
        }
        (Type::Fun(a1, b1), Type::Fun(a2, b2)) => {
            let x = "x";
            let arg = cast(CoreTerm::var(x), a2, p.negate(), a1);
            let body = cast(CoreTerm::app(v.clone(), arg), b1, p, b2);
            Some((CoreTerm::lam(x, (**a2).clone(), body), "R-Wrap"))
        }
        (Type::Forall(x, k1, a1), Type::Forall(y, k2, a2)) if k1 == k2 => {
            let (z, a1, a2) = open_pair(x, a1, y, a2);
            let inner = cast(
                CoreTerm::tapp(v.clone(), Type::Var(z.clone())),
                &a1,
                p,
                &a2,
            );
            Some((CoreTerm::tlam(&z, *k1, inner, a2), "R-Content"))
        }
        (Type::Forall(x, _, a1), _) if qpoly(b) => {
            let inst = subst_ty(a1, x, &Type::Dyn);
            Some((
                cast(CoreTerm::tapp(v.clone(), Type::Dyn), &inst, p, b),
                "R-Inst",
            ))
        }
        (_, Type::Forall(x, k, b1)) if qpoly(a) => Some((
            CoreTerm::tlam(x, *k, cast(v.clone(), a, p, b1), (**b1).clone()),
            "R-Gen",
        )),
        (Type::Record(r1), Type::Record(r2)) => reduce_record_cast(v, r1, p, r2),
        (Type::Variant(r1), Type::Variant(r2)) => reduce_variant_cast(v, r1, p, r2, primed_conlift),
        (_, Type::Dyn) => {
            let g = ground_of(a)?;
            if alpha_eq(a, &g) {
                return None;
            }
            Some((
                cast(cast(v.clone(), a, p, &g), &g, p, &Type::Dyn),
                "R-ToDyn",
            ))
        }
        (Type::Dyn, _) => {
            let g = ground_of(b)?;
            if !alpha_eq(b, &g) {
                return Some((
                    cast(cast(v.clone(), &Type::Dyn, p, &g), &g, p, b),
                    "R-FromDyn",
                ));
            }
            match v {
                CoreTerm::Cast(w, h, _, d) if d.is_dyn() => {
                    if alpha_eq(h, &g) {
                        Some(((**w).clone(), "R-Ground"))
                    } else {
                        Some((CoreTerm::Blame(p), "R-Blame"))
                    }
                }
                _ => None,
            }
        }
        _ => None,
    }
}

fn reduce_record_cast(
    v: &CoreTerm,
    r1: &Type,
    p: BlameLabel,
    r2: &Type,
) -> Option<(CoreTerm, &'static str)> {
    let rec = |r: &Type| Type::record(r.clone());
    if r1 == r2 && matches!(r1, Type::Empty | Type::Name(_)) {
        return Some((v.clone(), "R-RId"));
    }
    if r1.is_dyn() {
        // `v` is a record tagged with a ground row.
        let (w, gamma) = match v {
            CoreTerm::Cast(w, Type::Record(g), _, d) if *d == rec(&Type::Dyn) => {
                (w, g)
            }
            _ => return None,
        };
        return if consistent_equiv(gamma, r2) {
            Some((
                CoreTerm::cast((**w).clone(), rec(gamma), p, rec(r2)),
                "R-RFromDyn",
            ))
        } else {
            Some((CoreTerm::Blame(p), "R-RBlame"))
        };
    }
    if r2.is_dyn() {
        let g = grow(r1)?;
        if &g == r1 {
            return None;
        }
        return Some((
            CoreTerm::cast(
                CoreTerm::cast(v.clone(), rec(r1), p, rec(&g)),
                rec(&g),
                p,
                rec(&Type::Dyn),
            ),
            "R-RToDyn",
        ));
    }
    if let Type::Ext(l, b, rest2) = r2 {
        if in_dom(r1, l) {
            let (v1, v2) = record_split_value(v, l)?;
            let (a, rest1) = split_row(r1, l)?;
            let field = CoreTerm::cast(v1, a, p, (**b).clone());
            let others = CoreTerm::cast(v2, rec(&rest1), p, rec(rest2));
            return Some((CoreTerm::rext(l, field, others), "R-RRev"));
        }
        let mid = postpend(r1, l, b)?;
        return Some((
            CoreTerm::cast(
                CoreTerm::cast(v.clone(), rec(r1), p, rec(&mid)),
                rec(&mid),
                p,
                rec(r2),
            ),
            "R-RCon",
        ));
    }
    None
}

fn reduce_variant_cast(
    v: &CoreTerm,
    r1: &Type,
    p: BlameLabel,
    r2: &Type,
    primed_conlift: bool,
) -> Option<(CoreTerm, &'static str)> {
    let var = |r: &Type| Type::variant(r.clone());
    if r1 == r2 && matches!(r1, Type::Name(_)) {
        return Some((v.clone(), "R-VIdName"));
    }
    if r1.is_dyn() {
        let (w, gamma) = match v {
            CoreTerm::Cast(w, Type::Variant(g), _, d) if *d == var(&Type::Dyn) => (w, g),
            _ => return None,
        };
        return if consistent_equiv(gamma, r2) {
            Some((
                CoreTerm::cast((**w).clone(), var(gamma), p, var(r2)),
                "R-VFromDyn",
            ))
        } else {
            Some((CoreTerm::Blame(p), "R-VBlame"))
        };
    }
    if r2.is_dyn() {
        let g = grow(r1)?;
        if &g == r1 {
            return None;
        }
        return Some((
            CoreTerm::cast(
                CoreTerm::cast(v.clone(), var(r1), p, var(&g)),
                var(&g),
                p,
                var(&Type::Dyn),
            ),
            "R-VToDyn",
        ));
    }
    let (l, a, rho1) = match r1 {
        Type::Ext(l, a, rho1) => (l, a, rho1),
        _ => return None,
    };
    let (fs2, tail2) = fields(r2);
    match fs2.iter().position(|(m, _)| m == l) {
        Some(i) => {
            // ρ2 = ρ21 ⊙ (l:B; ·) ⊙ ρ22
            let owned: Vec<(String, Type)> = fs2
                .iter()
                .map(|(m, t)| (m.to_string(), (*t).clone()))
                .collect();
            let rho21 = from_fields(&owned[..i], Type::Empty);
            let b = owned[i].1.clone();
            let rho22 = from_fields(&owned[i + 1..], tail2.clone());
            match v {
                CoreTerm::Inj(m, w, _) if m == l => {
                    let inner = CoreTerm::cast((**w).clone(), (**a).clone(), p, b);
                    Some((
                        row_embed(&rho21, CoreTerm::inj(l, inner, rho22)),
                        "R-VRevInj",
                    ))
                }
                CoreTerm::Embed(m, _, w) if m == l => {
                    let mut rest = owned.clone();
                    rest.remove(i);
                    let rho2122 = from_fields(&rest, tail2.clone());
                    let inner = CoreTerm::cast((**w).clone(), var(rho1), p, var(&rho2122));
                    Some((
                        field_insert(&rho21, l, &b, inner, &rho2122),
                        "R-VRevLift",
                    ))
                }
                _ => None,
            }
        }
        None => match v {
            CoreTerm::Inj(m, w, _) if m == l => {
                let inj = CoreTerm::inj(l, (**w).clone(), Type::Dyn);
                let tagged = CoreTerm::cast(
                    inj,
                    var(&Type::ext(l, (**a).clone(), Type::Dyn)),
                    p,
                    var(&Type::Dyn),
                );
                Some((row_embed(r2, tagged), "R-VConInj"))
            }
            CoreTerm::Embed(m, _, w) if m == l => {
                let inner = CoreTerm::cast((**w).clone(), var(rho1), p, var(r2));
                if primed_conlift {
                    return Some((inner, "R-VConLift'"));
                }
                let grown = postpend(r2, l, a)?;
                Some((
                    CoreTerm::cast(field_insert(r2, l, a, inner, r2), var(&grown), p, var(r2)),
                    "R-VConLift",
                ))
            }
            _ => None,
        },
    }
}

fn reduce_conv(
    v: &CoreTerm,
    a: &Type,
    phi: ConvLabel,
    b: &Type,
) -> Option<(CoreTerm, &'static str)> {
    let conv = |e: CoreTerm, x: &Type, f: ConvLabel, y: &Type| {
        CoreTerm::conv(e, x.clone(), f, y.clone())
    };
    let alpha = phi.name;
    // Revealing a concealed value.
    if phi.polarity == Polarity::Plus {
        if let CoreTerm::Conv(w, _, inner, _) = v {
            if inner.polarity == Polarity::Minus && inner.name == alpha {
                let concealed = match a {
                    Type::Name(n) => *n == alpha,
                    Type::Record(r) | Type::Variant(r) => **r == Type::Name(alpha),
                    _ => false,
                };
                if concealed {
                    return Some(((**w).clone(), "R-CName"));
                }
            }
        }
    }
    let atomic = |t: &Type| match t {
        Type::Dyn | Type::Base(_) => true,
        Type::Name(n) => *n != alpha,
        Type::Record(r) => match &**r {
            Type::Dyn | Type::Empty => true,
            Type::Name(n) => *n != alpha,
            _ => false,
        },
        Type::Variant(r) => match &**r {
            Type::Dyn => true,
            Type::Name(n) => *n != alpha,
            _ => false,
        },
        _ => false,
    };
    if a == b && atomic(a) {
        return Some((v.clone(), "R-CId"));
    }
    match (a, b) {
        (Type::Fun(a1, b1), Type::Fun(a2, b2)) => {
            let x = "x";
            let arg = conv(CoreTerm::var(x), a2, phi.negate(), a1);
            let body = conv(CoreTerm::app(v.clone(), arg), b1, phi, b2);
            Some((CoreTerm::lam(x, (**a2).clone(), body), "R-CFun"))
        }
        (Type::Forall(x, k1, a1), Type::Forall(y, k2, a2)) if k1 == k2 => {
            let (z, a1, a2) = open_pair(x, a1, y, a2);
            let inner = conv(
                CoreTerm::tapp(v.clone(), Type::Var(z.clone())),
                &a1,
                phi,
                &a2,
            );
            Some((CoreTerm::tlam(&z, *k1, inner, a2), "R-CForall"))
        }
        (Type::Record(r1), Type::Record(r2)) => match (&**r1, &**r2) {
            (Type::Ext(l, a1, rho1), Type::Ext(m, b1, rho2)) if l == m => {
                let field = conv(CoreTerm::var("x"), a1, phi, b1);
                let rest = conv(
                    CoreTerm::var("y"),
                    &Type::record((**rho1).clone()),
                    phi,
                    &Type::record((**rho2).clone()),
                );
                Some((
                    CoreTerm::rlet(l, "x", "y", v.clone(), CoreTerm::rext(l, field, rest)),
                    "R-CRExt",
                ))
            }
            _ => None,
        },
        (Type::Variant(r1), Type::Variant(r2)) => match (&**r1, &**r2) {
            (Type::Ext(l, a1, rho1), Type::Ext(m, b1, rho2)) if l == m => {
                let hit = CoreTerm::inj(
                    l,
                    conv(CoreTerm::var("x"), a1, phi, b1),
                    (**rho2).clone(),
                );
                let miss = CoreTerm::embed(
                    l,
                    (**b1).clone(),
                    conv(
                        CoreTerm::var("y"),
                        &Type::variant((**rho1).clone()),
                        phi,
                        &Type::variant((**rho2).clone()),
                    ),
                );
                Some((CoreTerm::case(v.clone(), l, "x", hit, "y", miss), "R-CVar"))
            }
            _ => None,
        },
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Evaluation contexts
// ---------------------------------------------------------------------------

enum Step {
    Reduced(CoreTerm, &'static str),
    /// Blame found in an evaluation position.
    Blame(BlameLabel),
    Value,
    Stuck,
}

fn step_in(store: &mut NameStore, e: &CoreTerm, opts: &EvalOptions) -> Step {
    // Descend into the first non-value subterm in evaluation order.
    let descend = |store: &mut NameStore,
                   sub: &CoreTerm,
                   rebuild: &dyn Fn(CoreTerm) -> CoreTerm|
     -> Option<Step> {
        if is_value(sub) {
            return None;
        }
        Some(match step_in(store, sub, opts) {
            Step::Reduced(s, r) => Step::Reduced(rebuild(s), r),
            other => other,
        })
    };
    let inner = match e {
        CoreTerm::Blame(p) => return Step::Blame(*p),
        CoreTerm::App(f, a) => descend(store, f, &|s| CoreTerm::App(bx(s), a.clone()))
            .or_else(|| descend(store, a, &|s| CoreTerm::App(f.clone(), bx(s)))),
        CoreTerm::TApp(f, b) => descend(store, f, &|s| CoreTerm::TApp(bx(s), b.clone())),
        CoreTerm::RExt(l, e1, e2) => {
            descend(store, e1, &|s| CoreTerm::RExt(l.clone(), bx(s), e2.clone()))
                .or_else(|| descend(store, e2, &|s| CoreTerm::RExt(l.clone(), e1.clone(), bx(s))))
        }
        CoreTerm::RLet(l, x, y, e1, e2) => descend(store, e1, &|s| {
            CoreTerm::RLet(l.clone(), x.clone(), y.clone(), bx(s), e2.clone())
        }),
        CoreTerm::Inj(l, e1, r) => descend(store, e1, &|s| CoreTerm::Inj(l.clone(), bx(s), r.clone())),
        CoreTerm::Embed(l, a, e1) => {
            descend(store, e1, &|s| CoreTerm::Embed(l.clone(), a.clone(), bx(s)))
        }
        CoreTerm::Case(e0, l, x, e1, y, e2) => descend(store, e0, &|s| {
            CoreTerm::Case(bx(s), l.clone(), x.clone(), e1.clone(), y.clone(), e2.clone())
        }),
        CoreTerm::Cast(e1, a, p, b) => {
            descend(store, e1, &|s| CoreTerm::Cast(bx(s), a.clone(), *p, b.clone()))
        }
        CoreTerm::Conv(e1, a, phi, b) => {
            descend(store, e1, &|s| CoreTerm::Conv(bx(s), a.clone(), *phi, b.clone()))
        }
        _ => None,
    };
    if let Some(s) = inner {
        return s;
    }
    if is_value(e) {
        return Step::Value;
    }
    if let CoreTerm::TApp(f, b) = e {
        if let CoreTerm::TLam(x, k, body, a) = &**f {
            let alpha = store.fresh(*k, b.clone());
            let name = Type::Name(alpha);
            let opened = subst_ty_core(body, x, &name);
            let result = CoreTerm::conv(
                opened,
                subst_ty(a, x, &name),
                ConvLabel::plus(alpha),
                subst_ty(a, x, b),
            );
            return Step::Reduced(result, "E-TyBeta");
        }
    }
    match reduce(e, opts.primed_conlift) {
        Some((r, rule)) => Step::Reduced(r, rule),
        None => Step::Stuck,
    }
}

/// One machine step. Returns `None` for values and top-level blame.
pub fn step(
    store: &mut NameStore,
    e: &CoreTerm,
    opts: &EvalOptions,
) -> Result<Option<(CoreTerm, &'static str)>, EvalError> {
    match step_in(store, e, opts) {
        Step::Reduced(r, rule) => Ok(Some((r, rule))),
        Step::Blame(p) => {
            if matches!(e, CoreTerm::Blame(_)) {
                Ok(None)
            } else {
                Ok(Some((CoreTerm::Blame(p), "E-Blame")))
            }
        }
        Step::Value => Ok(None),
        Step::Stuck => Err(EvalError::Stuck(e.to_string())),
    }
}

/// Runs a closed core term from the empty store.
pub fn evaluate(e: &CoreTerm, opts: &EvalOptions) -> Result<Run, EvalError> {
    let mut store = NameStore::new();
    let ctx = Ctx::new();
    let expected = if opts.check_steps {
        typecheck_core(&store, &ctx, e).map_err(|err| EvalError::IllTyped {
            step: 0,
            rule: "initial".into(),
            message: err.to_string(),
        })?
    } else {
        None
    };
    let mut term = e.clone();
    let mut steps = 0;
    let mut trace = Vec::new();
    loop {
        if let CoreTerm::Blame(p) = term {
            return Ok(Run {
                outcome: Outcome::Blamed(p),
                store,
                steps,
                trace,
            });
        }
        if is_value(&term) {
            return Ok(Run {
                outcome: Outcome::Value(term),
                store,
                steps,
                trace,
            });
        }
        if steps >= opts.fuel {
            return Ok(Run {
                outcome: Outcome::FuelExhausted(term),
                store,
                steps,
                trace,
            });
        }
        let (next, rule) = match step(&mut store, &term, opts)? {
            Some(r) => r,
            None => return Err(EvalError::Stuck(term.to_string())),
        };
        steps += 1;
        if opts.check_steps {
            if let Some(a) = &expected {
                typecheck_core_against(&store, &ctx, &next, a).map_err(|err| {
                    EvalError::IllTyped {
                        step: steps,
                        rule: rule.to_string(),
                        message: err.to_string(),
                    }
                })?;
            }
        }
        if opts.trace {
            trace.push(TraceEntry {
                step: steps,
                rule,
                store: store.clone(),
                term: next.clone(),
            });
        }
        term = next;
    }
}

// ---------------------------------------------------------------------------
// The static language
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum StaticOutcome {
    Value(Term),
    FuelExhausted(Term),
}

/// The label of a variant value `w^l`.
fn variant_label(w: &Term) -> Option<&str> {
    match &w.kind {
        TermKind::VInj(l, v) if is_static_value(v) => Some(l),
        TermKind::VEmbed(l, _, v) if variant_label(v) == Some(l) => Some(l),
        _ => None,
    }
}

pub fn is_static_value(m: &Term) -> bool {
    match &m.kind {
        TermKind::Const(_) | TermKind::Lam(..) | TermKind::TLam(..) | TermKind::REmpty => true,
        TermKind::RExtend(_, a, b) => is_static_value(a) && is_static_value(b),
        TermKind::VInj(..) | TermKind::VEmbed(..) => variant_label(m).is_some(),
        _ => false,
    }
}

fn static_record_split(w: &Term, l: &str) -> Option<(Term, Term)> {
    match &w.kind {
        TermKind::RExtend(m, w1, w2) => {
            if m == l {
                Some(((**w1).clone(), (**w2).clone()))
            } else {
                let (v, rest) = static_record_split(w2, l)?;
                Some((v, Term::rextend(m, (**w1).clone(), rest)))
            }
        }
        _ => None,
    }
}

fn static_reduce(m: &Term) -> Option<Term> {
    match &m.kind {
        TermKind::App(f, a) => match (&f.kind, &a.kind) {
            (TermKind::Const(k1), TermKind::Const(k2)) => Some(Term::konst(k1.apply(k2)?)),
            (TermKind::Lam(x, _, body), _) if is_static_value(a) => Some(static_subst(body, x, a)),
            _ => None,
        },
        TermKind::TApp(f, a) => match &f.kind {
            TermKind::TLam(x, _, body) => Some(static_subst_ty(body, x, a)),
            _ => None,
        },
        TermKind::RLet(l, x, y, w, body) if is_static_value(w) => {
            let (w1, w2) = static_record_split(w, l)?;
            Some(static_subst(&static_subst(body, x, &w1), y, &w2))
        }
        TermKind::VEmbed(l, _, w) => match variant_label(w) {
            Some(m2) if m2 != l => Some((**w).clone()),
            _ => None,
        },
        TermKind::VCase(w, l, x, m1, y, m2) if is_static_value(w) => match &w.kind {
            TermKind::VInj(k, v) if k == l => Some(static_subst(m1, x, v)),
            TermKind::VEmbed(k, _, inner) if k == l => Some(static_subst(m2, y, inner)),
            _ => Some(static_subst(m2, y, w)),
        },
        _ => None,
    }
}

fn static_step(m: &Term) -> Option<Term> {
    let descend = |sub: &Term, rebuild: &dyn Fn(Term) -> TermKind| -> Option<Option<Term>> {
        if is_static_value(sub) {
            return None;
        }
        Some(static_step(sub).map(|s| Term::new(rebuild(s))))
    };
    let inner = match &m.kind {
        TermKind::App(f, a) => descend(f, &|s| TermKind::App(Box::new(s), a.clone()))
            .or_else(|| descend(a, &|s| TermKind::App(f.clone(), Box::new(s)))),
        TermKind::TApp(f, a) => descend(f, &|s| TermKind::TApp(Box::new(s), a.clone())),
        TermKind::RExtend(l, a, b) => {
            descend(a, &|s| TermKind::RExtend(l.clone(), Box::new(s), b.clone())).or_else(|| {
                descend(b, &|s| TermKind::RExtend(l.clone(), a.clone(), Box::new(s)))
            })
        }
        TermKind::RLet(l, x, y, a, b) => descend(a, &|s| {
            TermKind::RLet(l.clone(), x.clone(), y.clone(), Box::new(s), b.clone())
        }),
        TermKind::VInj(l, a) => descend(a, &|s| TermKind::VInj(l.clone(), Box::new(s))),
        TermKind::VEmbed(l, t, a) => {
            descend(a, &|s| TermKind::VEmbed(l.clone(), t.clone(), Box::new(s)))
        }
        TermKind::VCase(a, l, x, b1, y, b2) => descend(a, &|s| {
            TermKind::VCase(Box::new(s), l.clone(), x.clone(), b1.clone(), y.clone(), b2.clone())
        }),
        _ => None,
    };
    match inner {
        Some(r) => r,
        None => static_reduce(m),
    }
}

// Substitution in the static language. Evaluation only ever substitutes
// closed values and closed types, so binders never need renaming.
fn map_term(m: &Term, f: &mut dyn FnMut(&Term) -> Option<Term>) -> Term {
    if let Some(r) = f(m) {
        return r;
    }
    let mut d = |t: &Term| Box::new(map_term(t, f));
    let kind = match &m.kind {
        TermKind::Var(_) | TermKind::Const(_) | TermKind::REmpty => m.kind.clone(),
        TermKind::Lam(x, a, b) => TermKind::Lam(x.clone(), a.clone(), d(b)),
        TermKind::App(g, a) => {
            let g = d(g);
            TermKind::App(g, d(a))
        }
        TermKind::TLam(x, k, b) => TermKind::TLam(x.clone(), *k, d(b)),
        TermKind::TApp(g, a) => TermKind::TApp(d(g), a.clone()),
        TermKind::RExtend(l, a, b) => {
            let a = d(a);
            TermKind::RExtend(l.clone(), a, d(b))
        }
        TermKind::RLet(l, x, y, a, b) => {
            let a = d(a);
            TermKind::RLet(l.clone(), x.clone(), y.clone(), a, d(b))
        }
        TermKind::VInj(l, a) => TermKind::VInj(l.clone(), d(a)),
        TermKind::VEmbed(l, t, a) => TermKind::VEmbed(l.clone(), t.clone(), d(a)),
        TermKind::VCase(a, l, x, b1, y, b2) => {
            let a = d(a);
            let b1 = d(b1);
            TermKind::VCase(a, l.clone(), x.clone(), b1, y.clone(), d(b2))
        }
        TermKind::Ascribe(a, t, sp) => TermKind::Ascribe(d(a), t.clone(), *sp),
    };
    Term::at(kind, m.span)
}

fn static_subst(m: &Term, x: &str, w: &Term) -> Term {
    map_term(m, &mut |t| match &t.kind {
        TermKind::Var(y) if y == x => Some(w.clone()),
        TermKind::Lam(y, ..) if y == x => Some(t.clone()),
        TermKind::RLet(l, y1, y2, a, b) if y1 == x || y2 == x => Some(Term::at(
            TermKind::RLet(
                l.clone(),
                y1.clone(),
                y2.clone(),
                Box::new(static_subst(a, x, w)),
                b.clone(),
            ),
            t.span,
        )),
        TermKind::VCase(a, l, y1, b1, y2, b2) if y1 == x || y2 == x => {
            let b1 = if y1 == x { (**b1).clone() } else { static_subst(b1, x, w) };
            let b2 = if y2 == x { (**b2).clone() } else { static_subst(b2, x, w) };
            Some(Term::at(
                TermKind::VCase(
                    Box::new(static_subst(a, x, w)),
                    l.clone(),
                    y1.clone(),
                    Box::new(b1),
                    y2.clone(),
                    Box::new(b2),
                ),
                t.span,
            ))
        }
        _ => None,
    })
}

fn static_subst_ty(m: &Term, x: &str, a: &Type) -> Term {
    let s = |t: &Type| subst_ty(t, x, a);
    map_term(m, &mut |t| {
        let kind = match &t.kind {
            TermKind::TLam(y, ..) if y == x => return Some(t.clone()),
            TermKind::Lam(y, b, body) => {
                TermKind::Lam(y.clone(), s(b), Box::new(static_subst_ty(body, x, a)))
            }
            TermKind::TApp(g, b) => TermKind::TApp(Box::new(static_subst_ty(g, x, a)), s(b)),
            TermKind::VEmbed(l, b, body) => {
                TermKind::VEmbed(l.clone(), s(b), Box::new(static_subst_ty(body, x, a)))
            }
            TermKind::Ascribe(body, b, sp) => {
                TermKind::Ascribe(Box::new(static_subst_ty(body, x, a)), s(b), *sp)
            }
            _ => return None,
        };
        Some(Term::at(kind, t.span))
    })
}

/// Evaluates a closed program of the static language. Ascriptions are
/// desugared first.
pub fn eval_static(m: &Term, fuel: u64) -> Result<StaticOutcome, EvalError> {
    let mut term = m.desugar_ascriptions();
    let mut steps = 0;
    loop {
        if is_static_value(&term) {
            return Ok(StaticOutcome::Value(term));
        }
        if steps >= fuel {
            return Ok(StaticOutcome::FuelExhausted(term));
        }
        term = static_step(&term).ok_or_else(|| EvalError::Stuck(term.to_string()))?;
        steps += 1;
    }
}

/// The checked type of a core term, for callers that want it alongside a run.
pub fn core_type(e: &CoreTerm) -> Option<Type> {
    typecheck_core(&NameStore::new(), &Ctx::new(), e).ok().flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::translate;
    use crate::syntax::{parse_program, parse_type, Const};

    fn t(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn p(n: u32) -> BlameLabel {
        BlameLabel::new(n)
    }

    fn run_src(src: &str, primed: bool) -> Run {
        let m = parse_program(src).unwrap();
        let (e, _) = translate(&Ctx::new(), &m).unwrap();
        let opts = EvalOptions {
            trace: true,
            check_steps: true,
            primed_conlift: primed,
            ..EvalOptions::default()
        };
        evaluate(&e, &opts).unwrap()
    }

    fn run_core(e: &CoreTerm, primed: bool) -> Run {
        let opts = EvalOptions {
            trace: true,
            check_steps: true,
            primed_conlift: primed,
            ..EvalOptions::default()
        };
        evaluate(e, &opts).unwrap()
    }

    #[test]
    fn beta_and_constants() {
        let r = run_src("(lam x:Int. add x 1) 41", false);
        assert_eq!(r.outcome, Outcome::Value(CoreTerm::int(42)));
        assert_eq!(r.rules(), vec!["R-Beta", "R-Const", "R-Const"]);
    }

    #[test]
    fn record_injection_trace() {
        let r = run_src("{l1 = 0; {l2 = true; {}}} : [?]", false);
        assert_eq!(r.rules(), vec!["R-RToDyn", "R-RRev", "R-RToDyn", "R-RRev"]);
        let last = r.trace.last().unwrap().term.to_string();
        assert_eq!(
            last,
            "({l1 = (0 : Int =p0=> ?); ({l2 = (true : Bool =p0=> ?); ({} : [.] =p0=> [?])} \
             : [l2:?; ?] =p0=> [?])} : [l1:?; ?] =p0=> [?])"
        );
    }

    #[test]
    fn record_projection() {
        let base = "{l1 = 0; {l2 = true; {}}} : [?]";
        let ok = run_src(&format!("let {{l1 = x; y}} = ({base}) : [l1:Int; ?] in x"), false);
        assert_eq!(ok.outcome, Outcome::Value(CoreTerm::int(0)));
        let bad = run_src(&format!("let {{l1 = x; y}} = ({base}) : [l1:Bool; ?] in x"), false);
        assert_eq!(bad.outcome, Outcome::Blamed(p(1)));
        let missing = run_src(&format!("let {{l3 = x; y}} = ({base}) : [l3:Int; ?] in x"), false);
        assert_eq!(missing.outcome, Outcome::Blamed(p(1)));
        assert!(missing.rules().contains(&"R-RBlame"));
    }

    #[test]
    fn variant_trace() {
        let r = run_src("(l2 ^ Bool (l1 0)) : <?>", false);
        assert_eq!(r.rules(), vec!["R-VToDyn", "R-VRevLift", "R-VToDyn", "R-VRevInj"]);
        assert_eq!(
            r.trace.last().unwrap().term.to_string(),
            "(l2 ^ ? (l1 (0 : Int =p0=> ?) : <l1:?; ?> =p0=> <?>) : <l2:?; ?> =p0=> <?>)"
        );
    }

    // (l ^ Bool v) : <l:Bool; ?> =p3=> <l':Str; X> =p4=> <l:Bool; ?>
    fn conlift_term(x: &Type) -> CoreTerm {
        let v = CoreTerm::cast(
            CoreTerm::inj(
                "l",
                CoreTerm::cast(CoreTerm::int(0), Type::int(), p(1), Type::Dyn),
                Type::Dyn,
            ),
            t("<l:?; ?>"),
            p(2),
            t("<?>"),
        );
        let mid = Type::variant(Type::ext("m", Type::str(), x.clone()));
        CoreTerm::cast(
            CoreTerm::cast(CoreTerm::embed("l", Type::bool(), v), t("<l:Bool; ?>"), p(3), mid.clone()),
            mid,
            p(4),
            t("<l:Bool; ?>"),
        )
    }

    #[test]
    fn conlift_counterexample() {
        let star = conlift_term(&Type::Dyn);
        let row = conlift_term(&t("l:Bool; ?"));
        assert!(matches!(run_core(&star, false).outcome, Outcome::Value(_)));
        assert!(matches!(run_core(&row, false).outcome, Outcome::Value(_)));
        assert_eq!(run_core(&star, true).outcome, Outcome::Blamed(p(4)));
        assert!(matches!(run_core(&row, true).outcome, Outcome::Value(_)));
    }

    #[test]
    fn sealing_blames_nonparametric_identity() {
        let id_int = "Lam X:T. lam x:X. (x : ?) : Int";
        let id = "Lam X:T. lam x:X. (x : ?) : X";
        for (ty, v) in [("Int", "0"), ("Bool", "true"), ("[.]", "{}")] {
            let r = run_src(&format!("({id_int}) [{ty}] {v}"), false);
            assert!(matches!(r.outcome, Outcome::Blamed(_)), "{ty}");
            assert_eq!(r.store.len(), 1);
            let r = run_src(&format!("({id}) [{ty}] {v}"), false);
            let expected = translate(&Ctx::new(), &parse_program(v).unwrap()).unwrap().0;
            assert_eq!(r.outcome, Outcome::Value(expected), "{ty}");
        }
    }

    #[test]
    fn blame_collapses_context() {
        let r = run_src("add ((true : ?) : Int) 1", false);
        assert_eq!(r.outcome, Outcome::Blamed(p(1)));
        assert_eq!(r.rules().last(), Some(&"E-Blame"));
    }

    #[test]
    fn fuel_runs_out() {
        let omega = "(lam x:?. (x : ? -> ?) x) (lam x:?. (x : ? -> ?) x)";
        let m = parse_program(omega).unwrap();
        let (e, _) = translate(&Ctx::new(), &m).unwrap();
        let opts = EvalOptions {
            fuel: 50,
            ..EvalOptions::default()
        };
        let r = evaluate(&e, &opts).unwrap();
        assert!(matches!(r.outcome, Outcome::FuelExhausted(_)));
        assert_eq!(r.steps, 50);
    }

    #[test]
    fn helpers() {
        let v = CoreTerm::rext("a", CoreTerm::int(1), CoreTerm::rext("b", CoreTerm::int(2), CoreTerm::REmp));
        let (w, rest) = record_split_value(&v, "b").unwrap();
        assert_eq!(w, CoreTerm::int(2));
        assert_eq!(rest, CoreTerm::rext("a", CoreTerm::int(1), CoreTerm::REmp));
        assert!(record_split_value(&CoreTerm::REmp, "a").is_none());
        let e = CoreTerm::var("e");
        assert_eq!(row_embed(&Type::Empty, e.clone()), e);
        assert_eq!(
            row_embed(&t("a:Int; b:Bool; ?"), e.clone()).to_string(),
            "a ^ Int (b ^ Bool e)"
        );
        assert_eq!(
            field_insert(&Type::Empty, "l", &Type::int(), e.clone(), &Type::Empty).to_string(),
            "l ^ Int e"
        );
        assert_eq!(
            field_insert(&t("m:Bool; ."), "l", &Type::int(), e.clone(), &t("m:Bool; .")).to_string(),
            "case e with <m x -> m x; y -> m ^ Bool (l ^ Int y)>"
        );
    }

    #[test]
    fn value_forms() {
        let zero = CoreTerm::int(0);
        assert!(is_value(&CoreTerm::cast(zero.clone(), Type::int(), p(0), Type::Dyn)));
        assert!(!is_value(&CoreTerm::cast(zero.clone(), Type::int(), p(0), Type::bool())));
        let inj = CoreTerm::inj("m", zero.clone(), Type::Empty);
        assert!(is_value(&CoreTerm::embed("l", Type::int(), inj)));
        assert!(is_value(&CoreTerm::cast(CoreTerm::REmp, t("[.]"), p(0), t("[?]"))));
        assert!(!is_value(&CoreTerm::cast(CoreTerm::REmp, t("[.]"), p(0), t("[.]"))));
    }

    #[test]
    fn static_evaluation() {
        let run = |s: &str| match eval_static(&parse_program(s).unwrap(), 1000).unwrap() {
            StaticOutcome::Value(v) => v,
            other => panic!("{other:?}"),
        };
        assert_eq!(run("(lam x:Int. x) 0"), Term::int(0));
        assert_eq!(run("let {b = x; y} = {a = 1; b = 2} in x"), Term::int(2));
        assert_eq!(
            run("case (l ^ Int (l 1 : <l:Int; .>)) with <l x -> 0; y -> 1>"),
            Term::int(1)
        );
        assert_eq!(
            run("case (m 1 : <m:Int; .>) with <l x -> 0; y -> 7>"),
            Term::int(7)
        );
        let embedded = run("l ^ Int (m 1 : <m:Int; .>)");
        assert_eq!(embedded.to_string(), "m 1");
        assert_eq!(run("(Lam X:T. lam x:X. x) [Int] 5"), Term::konst(Const::Int(5)));
    }
}
