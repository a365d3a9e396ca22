//! Enumerators, brute-force reference implementations and program generators.
//!
//! The relations here are deliberately naive. `equiv_bruteforce` explores
//! every reordering reachable by swapping adjacent fields with distinct
//! labels, and `consistent_equiv_via_composition` searches those closures for
//! a consistent pair. They certify the algorithmic versions in `rows` and
//! `gradual_rel` on exhaustive enumerations of small types.

mod gen;
mod suites;

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use crate::gradual_rel::consistent;
use crate::syntax::{Base, Kind, Type};

pub use gen::{gen_well_typed_term, minimize, mutate, shrink, GenConfig, ProgramGen};
pub use suites::{
    check_composition, check_conservativity, check_equiv_oracle, check_inversion,
    check_relation_laws, check_round_trip, check_soundness, run_all, PropsConfig, Report,
};

#[derive(Debug, Clone)]
pub struct EnumConfig {
    /// Constructor nesting; leaves sit at depth 0.
    pub max_depth: u32,
    pub labels: Vec<String>,
    pub bases: Vec<Base>,
    pub allow_dyn: bool,
    /// Allows one quantifier per path, binding `X` at kind `T` or `R`.
    pub allow_forall: bool,
}

impl EnumConfig {
    /// Three labels, `Int` and `Bool`, `?` and quantifiers.
    pub fn standard(max_depth: u32) -> EnumConfig {
        EnumConfig {
            max_depth,
            labels: vec!["l1".into(), "l2".into(), "l3".into()],
            bases: vec![Base::Int, Base::Bool],
            allow_dyn: true,
            allow_forall: true,
        }
    }
}

/// Every closed type (kind `T`) and every closed row (kind `R`) up to the
/// configured depth, without duplicates.
#[derive(Debug, Clone, Default)]
pub struct Enumeration {
    pub types: Vec<Type>,
    pub rows: Vec<Type>,
}

impl Enumeration {
    pub fn len(&self) -> usize {
        self.types.len() + self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Type> {
        self.types.iter().chain(self.rows.iter())
    }

    /// Number of same-kind ordered pairs.
    pub fn pair_count(&self) -> u64 {
        let t = self.types.len() as u64;
        let r = self.rows.len() as u64;
        t * t + r * r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Scope {
    Free,
    Bound(Kind),
}

type Level = Rc<(Vec<Type>, Vec<Type>)>;

struct Enumerator<'a> {
    cfg: &'a EnumConfig,
    memo: HashMap<(u32, Scope), Level>,
}

const BINDER: &str = "X";

impl Enumerator<'_> {
    fn level(&mut self, d: u32, scope: Scope) -> Level {
        if let Some(l) = self.memo.get(&(d, scope)) {
            return l.clone();
        }
        let mut types: Vec<Type> = self.cfg.bases.iter().map(|b| Type::Base(*b)).collect();
        let mut rows = vec![Type::Empty];
        if self.cfg.allow_dyn {
            types.push(Type::Dyn);
            rows.push(Type::Dyn);
        }
        match scope {
            Scope::Bound(Kind::T) => types.push(Type::var(BINDER)),
            Scope::Bound(Kind::R) => rows.push(Type::var(BINDER)),
            Scope::Free => {}
        }
        if d > 0 {
            let below = self.level(d - 1, scope);
            let (ts, rs) = &*below;
            for a in ts {
                for b in ts {
                    types.push(Type::fun(a.clone(), b.clone()));
                }
            }
            for r in rs {
                types.push(Type::record(r.clone()));
                types.push(Type::variant(r.clone()));
            }
            if scope == Scope::Free && self.cfg.allow_forall {
                for k in [Kind::T, Kind::R] {
                    let body = self.level(d - 1, Scope::Bound(k));
                    for b in &body.0 {
                        types.push(Type::forall(BINDER, k, b.clone()));
                    }
                }
            }
            for l in &self.cfg.labels {
                for a in ts {
                    for r in rs {
                        rows.push(Type::ext(l, a.clone(), r.clone()));
                    }
                }
            }
        }
        let out = Rc::new((dedup(types), dedup(rows)));
        self.memo.insert((d, scope), out.clone());
        out
    }
}

fn dedup(v: Vec<Type>) -> Vec<Type> {
    let mut seen = HashSet::new();
    v.into_iter().filter(|t| seen.insert(t.clone())).collect()
}

pub fn enum_types(cfg: &EnumConfig) -> Enumeration {
    let mut e = Enumerator {
        cfg,
        memo: HashMap::new(),
    };
    let level = e.level(cfg.max_depth, Scope::Free);
    Enumeration {
        types: level.0.clone(),
        rows: level.1.clone(),
    }
}

/// Renames quantifier binders by nesting depth so that alpha-equivalent types
/// become structurally equal.
pub fn normalize_binders(t: &Type) -> Type {
    fn go(t: &Type, env: &mut Vec<(String, String)>) -> Type {
        match t {
            Type::Var(x) => match env.iter().rev().find(|(from, _)| from == x) {
                Some((_, to)) => Type::Var(to.clone()),
                None => t.clone(),
            },
            Type::Name(_) | Type::Dyn | Type::Base(_) | Type::Empty => t.clone(),
            Type::Fun(a, b) => Type::fun(go(a, env), go(b, env)),
            Type::Record(r) => Type::record(go(r, env)),
            Type::Variant(r) => Type::variant(go(r, env)),
            Type::Ext(l, a, r) => Type::ext(l, go(a, env), go(r, env)),
            Type::Forall(x, k, a) => {
                // `%` never appears in parsed identifiers.
                let fresh = format!("%{}", env.len());
                env.push((x.clone(), fresh.clone()));
                let body = go(a, env);
                env.pop();
                Type::Forall(fresh, *k, Box::new(body))
            }
        }
    }
    go(t, &mut Vec::new())
}

/// All types one adjacent distinct-label swap away from `t`, at any depth.
fn swap_neighbors(t: &Type) -> Vec<Type> {
    let mut out = Vec::new();
    match t {
        Type::Var(_) | Type::Name(_) | Type::Dyn | Type::Base(_) | Type::Empty => {}
        Type::Fun(a, b) => {
            out.extend(swap_neighbors(a).into_iter().map(|a2| Type::fun(a2, (**b).clone())));
            out.extend(swap_neighbors(b).into_iter().map(|b2| Type::fun((**a).clone(), b2)));
        }
        Type::Forall(x, k, a) => {
            out.extend(swap_neighbors(a).into_iter().map(|a2| Type::Forall(x.clone(), *k, Box::new(a2))));
        }
        Type::Record(r) => out.extend(swap_neighbors(r).into_iter().map(Type::record)),
        Type::Variant(r) => out.extend(swap_neighbors(r).into_iter().map(Type::variant)),
        Type::Ext(l, a, r) => {
            out.extend(swap_neighbors(a).into_iter().map(|a2| Type::ext(l, a2, (**r).clone())));
            out.extend(swap_neighbors(r).into_iter().map(|r2| Type::ext(l, (**a).clone(), r2)));
            if let Type::Ext(l2, b, rest) = &**r {
                if l != l2 {
                    out.push(Type::ext(l2, (**b).clone(), Type::ext(l, (**a).clone(), (**rest).clone())));
                }
            }
        }
    }
    out
}

/// Everything reachable from `t` by swaps, with binders normalized.
pub fn equiv_closure(t: &Type) -> HashSet<Type> {
    closure_with(t, swap_neighbors)
}

fn closure_with(t: &Type, step: fn(&Type) -> Vec<Type>) -> HashSet<Type> {
    let start = normalize_binders(t);
    let mut seen = HashSet::from([start.clone()]);
    let mut todo = vec![start];
    while let Some(cur) = todo.pop() {
        for n in step(&cur) {
            if seen.insert(n.clone()) {
                todo.push(n);
            }
        }
    }
    seen
}

/// `A ≡ B` by exhaustive search over swaps.
pub fn equiv_bruteforce(a: &Type, b: &Type) -> bool {
    equiv_closure(a).contains(&normalize_binders(b))
}

/// `A ≃ B` as the composition `≡ ; ∼ ; ≡`.
pub fn consistent_equiv_via_composition(a: &Type, b: &Type) -> bool {
    let ca = equiv_closure(a);
    let cb = equiv_closure(b);
    composes(&ca, &cb)
}

fn composes<'a>(
    ca: impl IntoIterator<Item = &'a Type>,
    cb: &'a HashSet<Type>,
) -> bool {
    ca.into_iter().any(|a| cb.iter().any(|b| consistent(a, b)))
}

/// A broken equivalence that also swaps fields with equal labels. The props
/// suite must catch it.
pub fn equiv_eq_swap_mutant(a: &Type, b: &Type) -> bool {
    fn loose(t: &Type) -> Vec<Type> {
        let mut out = swap_neighbors(t);
        if let Type::Ext(l, a, r) = t {
            if let Type::Ext(l2, b, rest) = &**r {
                if l == l2 {
                    out.push(Type::ext(l2, (**b).clone(), Type::ext(l, (**a).clone(), (**rest).clone())));
                }
            }
        }
        out
    }
    closure_with(a, loose).contains(&normalize_binders(b))
}
