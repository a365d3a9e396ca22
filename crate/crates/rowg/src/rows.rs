//! Row operations and type equivalence up to field reordering.
//!
//! A row is a list of labelled fields ending in a tail: `.`, `?`, a row
//! variable or a type name. Labels may repeat; equivalence may swap only
//! adjacent fields with distinct labels.

use std::collections::BTreeSet;

use crate::subst::alpha_eq;
use crate::syntax::Type;

/// Splits a row into its fields and its tail.
pub fn fields(row: &Type) -> (Vec<(&str, &Type)>, &Type) {
    let mut out = Vec::new();
    let mut cur = row;
    while let Type::Ext(l, a, rest) = cur {
        out.push((l.as_str(), &**a));
        cur = rest;
    }
    (out, cur)
}

pub fn from_fields(fields: &[(String, Type)], tail: Type) -> Type {
    fields
        .iter()
        .rev()
        .fold(tail, |acc, (l, a)| Type::Ext(l.clone(), Box::new(a.clone()), Box::new(acc)))
}

/// Labels present in the row; the tail contributes nothing.
pub fn dom(row: &Type) -> BTreeSet<String> {
    fields(row).0.into_iter().map(|(l, _)| l.to_string()).collect()
}

pub fn in_dom(row: &Type, l: &str) -> bool {
    fields(row).0.iter().any(|(m, _)| *m == l)
}

/// `r1 ⊙ r2`; defined when `r1` ends in the empty row.
pub fn concat(r1: &Type, r2: &Type) -> Option<Type> {
    match r1 {
        Type::Empty => Some(r2.clone()),
        Type::Ext(l, a, rest) => Some(Type::Ext(
            l.clone(),
            a.clone(),
            Box::new(concat(rest, r2)?),
        )),
        _ => None,
    }
}

pub fn ends_with_dyn(row: &Type) -> bool {
    matches!(fields(row).1, Type::Dyn)
}

/// `row ▷ℓ A, rest`: removes the first `l` field. When `l` is absent and the
/// row ends in `?`, the dynamic row may still provide it, so the result is
/// `(?, row)`.
pub fn split_row(row: &Type, l: &str) -> Option<(Type, Type)> {
    match row {
        Type::Ext(m, a, rest) => {
            if m == l {
                Some(((**a).clone(), (**rest).clone()))
            } else {
                let (b, r) = split_row(rest, l)?;
                Some((b, Type::Ext(m.clone(), a.clone(), Box::new(r))))
            }
        }
        Type::Dyn => Some((Type::Dyn, Type::Dyn)),
        _ => None,
    }
}

/// `row @ l:A`: adds a field just before a dynamic tail.
pub fn postpend(row: &Type, l: &str, a: &Type) -> Option<Type> {
    match row {
        Type::Dyn => Some(Type::ext(l, a.clone(), Type::Dyn)),
        Type::Ext(m, b, rest) => Some(Type::Ext(
            m.clone(),
            b.clone(),
            Box::new(postpend(rest, l, a)?),
        )),
        _ => None,
    }
}

/// The ground row a row is cast through on its way to `?`.
pub fn grow(row: &Type) -> Option<Type> {
    match row {
        Type::Empty => Some(Type::Empty),
        Type::Name(n) => Some(Type::Name(*n)),
        Type::Ext(l, _, _) => Some(Type::ext(l, Type::Dyn, Type::Dyn)),
        _ => None,
    }
}

/// Ground rows: `α`, `.` and `l:?; ?`.
pub fn is_ground_row(row: &Type) -> bool {
    match row {
        Type::Name(_) | Type::Empty => true,
        Type::Ext(_, a, rest) => a.is_dyn() && rest.is_dyn(),
        _ => false,
    }
}

/// Sorts the fields of every row by label, keeping equal labels in their
/// original order.
pub fn canonicalize(t: &Type) -> Type {
    match t {
        Type::Var(_) | Type::Name(_) | Type::Dyn | Type::Base(_) | Type::Empty => t.clone(),
        Type::Fun(a, b) => Type::fun(canonicalize(a), canonicalize(b)),
        Type::Forall(x, k, a) => Type::Forall(x.clone(), *k, Box::new(canonicalize(a))),
        Type::Record(r) => Type::record(canonicalize(r)),
        Type::Variant(r) => Type::variant(canonicalize(r)),
        Type::Ext(..) => {
            let (fs, tail) = fields(t);
            let mut fs: Vec<(String, Type)> = fs
                .into_iter()
                .map(|(l, a)| (l.to_string(), canonicalize(a)))
                .collect();
            fs.sort_by(|x, y| x.0.cmp(&y.0));
            from_fields(&fs, canonicalize(tail))
        }
    }
}

/// `A ≡ B`.
pub fn equiv(a: &Type, b: &Type) -> bool {
    alpha_eq(&canonicalize(a), &canonicalize(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;

    fn t(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn split_examples() {
        assert_eq!(
            split_row(&t("l1:Int; l2:Bool; ."), "l2"),
            Some((Type::bool(), t("l1:Int; .")))
        );
        assert_eq!(
            split_row(&t("l1:Int; ?"), "l3"),
            Some((Type::Dyn, t("l1:Int; ?")))
        );
        assert_eq!(split_row(&t("l1:Int; ."), "l3"), None);
        assert_eq!(split_row(&t("l1:Int; X"), "l3"), None);
        // first occurrence wins
        assert_eq!(
            split_row(&t("l:Int; l:Bool; ."), "l"),
            Some((Type::int(), t("l:Bool; .")))
        );
    }

    #[test]
    fn postpend_and_grow() {
        assert_eq!(
            postpend(&t("l1:Int; ?"), "l2", &Type::bool()),
            Some(t("l1:Int; l2:Bool; ?"))
        );
        assert_eq!(postpend(&t("l1:Int; ."), "l2", &Type::bool()), None);
        assert_eq!(grow(&t("l1:Int; l2:Bool; .")), Some(t("l1:?; ?")));
        assert_eq!(grow(&Type::Dyn), None);
        assert_eq!(grow(&Type::var("X")), None);
        assert_eq!(grow(&Type::Empty), Some(Type::Empty));
    }

    #[test]
    fn dom_ignores_tail() {
        let d = dom(&t("l1:Int; l2:Bool; l1:Str; ?"));
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec!["l1", "l2"]);
    }

    #[test]
    fn equivalence() {
        assert!(equiv(&t("[l1:Int; l2:Bool; .]"), &t("[l2:Bool; l1:Int; .]")));
        assert!(!equiv(&t("[l:Int; l:Bool; .]"), &t("[l:Bool; l:Int; .]")));
        assert!(!equiv(&t("[l1:Int; .]"), &t("[l1:Int; ?]")));
        assert!(equiv(
            &t("forall X:R. [a:Int; b:Bool; X] -> Int"),
            &t("forall Y:R. [b:Bool; a:Int; Y] -> Int")
        ));
    }

    #[test]
    fn concat_needs_closed_left() {
        assert_eq!(
            concat(&t("a:Int; ."), &t("b:Bool; ?")),
            Some(t("a:Int; b:Bool; ?"))
        );
        assert_eq!(concat(&t("a:Int; ?"), &t(".")), None);
    }
}
