//! Free variables, capture-avoiding substitution and alpha-equivalence on
//! types.

use std::collections::BTreeSet;

use crate::syntax::Type;

pub fn ftv(t: &Type) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    ftv_into(t, &mut Vec::new(), &mut out);
    out
}

fn ftv_into(t: &Type, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Type::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Type::Name(_) | Type::Dyn | Type::Base(_) | Type::Empty => {}
        Type::Fun(a, b) | Type::Ext(_, a, b) => {
            ftv_into(a, bound, out);
            ftv_into(b, bound, out);
        }
        Type::Record(a) | Type::Variant(a) => ftv_into(a, bound, out),
        Type::Forall(x, _, a) => {
            bound.push(x.clone());
            ftv_into(a, bound, out);
            bound.pop();
        }
    }
}

pub fn occurs_free(x: &str, t: &Type) -> bool {
    match t {
        Type::Var(y) => x == y,
        Type::Name(_) | Type::Dyn | Type::Base(_) | Type::Empty => false,
        Type::Fun(a, b) | Type::Ext(_, a, b) => occurs_free(x, a) || occurs_free(x, b),
        Type::Record(a) | Type::Variant(a) => occurs_free(x, a),
        Type::Forall(y, _, a) => x != y && occurs_free(x, a),
    }
}

/// A name based on `base` that `taken` rejects.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_');
    let stem = if stem.is_empty() { base } else { stem };
    (1..)
        .map(|i| format!("{stem}_{i}"))
        .find(|n| !taken(n))
        .expect("unbounded supply of names")
}

/// `t[s/x]`, renaming binders that would capture free variables of `s`.
pub fn subst_ty(t: &Type, x: &str, s: &Type) -> Type {
    let fv = ftv(s);
    subst_with(t, x, s, &fv)
}

fn subst_with(t: &Type, x: &str, s: &Type, fv: &BTreeSet<String>) -> Type {
    match t {
        Type::Var(y) => {
            if y == x {
                s.clone()
            } else {
                t.clone()
            }
        }
        Type::Name(_) | Type::Dyn | Type::Base(_) | Type::Empty => t.clone(),
        Type::Fun(a, b) => Type::Fun(
            Box::new(subst_with(a, x, s, fv)),
            Box::new(subst_with(b, x, s, fv)),
        ),
        Type::Ext(l, a, r) => Type::Ext(
            l.clone(),
            Box::new(subst_with(a, x, s, fv)),
            Box::new(subst_with(r, x, s, fv)),
        ),
        Type::Record(a) => Type::Record(Box::new(subst_with(a, x, s, fv))),
        Type::Variant(a) => Type::Variant(Box::new(subst_with(a, x, s, fv))),
        Type::Forall(y, k, a) => {
            if y == x || !occurs_free(x, a) {
                return t.clone();
            }
            if fv.contains(y) {
                let z = fresh_name(y, |n| fv.contains(n) || occurs_free(n, a) || n == x);
                let a2 = subst_ty(a, y, &Type::Var(z.clone()));
                Type::Forall(z, *k, Box::new(subst_with(&a2, x, s, fv)))
            } else {
                Type::Forall(y.clone(), *k, Box::new(subst_with(a, x, s, fv)))
            }
        }
    }
}

/// Alpha-equivalence: equality up to renaming of bound type variables.
pub fn alpha_eq(a: &Type, b: &Type) -> bool {
    alpha_env(a, b, &mut Vec::new())
}

fn alpha_env(a: &Type, b: &Type, env: &mut Vec<(String, String)>) -> bool {
    match (a, b) {
        (Type::Var(x), Type::Var(y)) => {
            let ix = env.iter().rposition(|(l, _)| l == x);
            let iy = env.iter().rposition(|(_, r)| r == y);
            match (ix, iy) {
                (None, None) => x == y,
                (Some(i), Some(j)) => i == j,
                _ => false,
            }
        }
        (Type::Name(m), Type::Name(n)) => m == n,
        (Type::Dyn, Type::Dyn) | (Type::Empty, Type::Empty) => true,
        (Type::Base(m), Type::Base(n)) => m == n,
        (Type::Fun(a1, b1), Type::Fun(a2, b2)) => {
            alpha_env(a1, a2, env) && alpha_env(b1, b2, env)
        }
        (Type::Ext(l1, a1, r1), Type::Ext(l2, a2, r2)) => {
            l1 == l2 && alpha_env(a1, a2, env) && alpha_env(r1, r2, env)
        }
        (Type::Record(r1), Type::Record(r2)) | (Type::Variant(r1), Type::Variant(r2)) => {
            alpha_env(r1, r2, env)
        }
        (Type::Forall(x, k1, a1), Type::Forall(y, k2, a2)) => {
            if k1 != k2 {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let r = alpha_env(a1, a2, env);
            env.pop();
            r
        }
        _ => false,
    }
}

/// Opens two quantifier bodies at a common variable, returned first.
pub fn open_pair(x: &str, a: &Type, y: &str, b: &Type) -> (String, Type, Type) {
    if x == y {
        return (x.to_string(), a.clone(), b.clone());
    }
    if !occurs_free(x, b) {
        return (
            x.to_string(),
            a.clone(),
            subst_ty(b, y, &Type::Var(x.to_string())),
        );
    }
    let z = fresh_name(x, |n| occurs_free(n, a) || occurs_free(n, b));
    (
        z.clone(),
        subst_ty(a, x, &Type::Var(z.clone())),
        subst_ty(b, y, &Type::Var(z)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_type, Kind};

    fn t(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn substitution_avoids_capture() {
        let body = t("forall Y:T. X -> Y");
        let r = subst_ty(&body, "X", &Type::var("Y"));
        match &r {
            Type::Forall(z, Kind::T, inner) => {
                assert_ne!(z, "Y");
                assert_eq!(**inner, Type::fun(Type::var("Y"), Type::Var(z.clone())));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_eq(&t("forall X:T. X -> X"), &t("forall Y:T. Y -> Y")));
        assert!(!alpha_eq(&t("forall X:T. X -> Y"), &t("forall Y:T. Y -> Y")));
        assert!(!alpha_eq(&t("forall X:T. X"), &t("forall X:R. X")));
        assert!(alpha_eq(
            &t("forall X:T. forall Y:T. X -> Y"),
            &t("forall Y:T. forall X:T. Y -> X")
        ));
    }

    #[test]
    fn shadowed_binder_blocks_substitution() {
        let a = t("forall X:T. X");
        assert_eq!(subst_ty(&a, "X", &Type::int()), a);
    }
}
