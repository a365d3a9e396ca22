//! Consistency, consistent equivalence, matching and merging.

use crate::rows::{ends_with_dyn, equiv, in_dom, split_row};
use crate::subst::{occurs_free, open_pair};
use crate::syntax::{Kind, Type};

/// Types that may stand in for a quantified type: not a quantifier, not a
/// row, and mentioning `?`.
pub fn qpoly(a: &Type) -> bool {
    !matches!(a, Type::Forall(..) | Type::Empty | Type::Ext(..)) && a.contains_dyn()
}

/// `A ∼ B`: consistency up to `?`, without reordering fields.
pub fn consistent(a: &Type, b: &Type) -> bool {
    match (a, b) {
        (Type::Dyn, _) | (_, Type::Dyn) => true,
        (Type::Forall(x, k1, a1), Type::Forall(y, k2, b1)) => {
            if k1 != k2 {
                return false;
            }
            let (_, a1, b1) = open_pair(x, a1, y, b1);
            consistent(&a1, &b1)
        }
        (Type::Forall(x, _, a1), _) => qpoly(b) && !occurs_free(x, b) && consistent(a1, b),
        (_, Type::Forall(y, _, b1)) => qpoly(a) && !occurs_free(y, a) && consistent(a, b1),
        (Type::Ext(l1, a1, r1), Type::Ext(l2, a2, r2)) => {
            if l1 == l2 {
                consistent(a1, a2) && consistent(r1, r2)
            } else {
                (ends_with_dyn(b) && !in_dom(b, l1) && consistent(r1, b))
                    || (ends_with_dyn(a) && !in_dom(a, l2) && consistent(a, r2))
            }
        }
        _ => same_head(a, b, consistent),
    }
}

/// `A ≃ B`: consistency up to `?` and reordering of fields with distinct
/// labels.
pub fn consistent_equiv(a: &Type, b: &Type) -> bool {
    match (a, b) {
        (Type::Dyn, _) | (_, Type::Dyn) => true,
        (Type::Forall(x, k1, a1), Type::Forall(y, k2, b1)) => {
            if k1 != k2 {
                return false;
            }
            let (_, a1, b1) = open_pair(x, a1, y, b1);
            consistent_equiv(&a1, &b1)
        }
        (Type::Forall(x, _, a1), _) => {
            qpoly(b) && !occurs_free(x, b) && consistent_equiv(a1, b)
        }
        (_, Type::Forall(y, _, b1)) => {
            qpoly(a) && !occurs_free(y, a) && consistent_equiv(a, b1)
        }
        (Type::Ext(l, a1, r1), _) => match split_row(b, l) {
            Some((b1, r2)) => consistent_equiv(a1, &b1) && consistent_equiv(r1, &r2),
            None => false,
        },
        (_, Type::Ext(l, b1, r2)) => match split_row(a, l) {
            Some((a1, r1)) => consistent_equiv(&a1, b1) && consistent_equiv(&r1, r2),
            None => false,
        },
        _ => same_head(a, b, consistent_equiv),
    }
}

/// Shared cases for constructors other than `?`, quantifiers and row
/// extensions.
fn same_head(a: &Type, b: &Type, rel: fn(&Type, &Type) -> bool) -> bool {
    match (a, b) {
        (Type::Var(x), Type::Var(y)) => x == y,
        (Type::Name(m), Type::Name(n)) => m == n,
        (Type::Base(m), Type::Base(n)) => m == n,
        (Type::Empty, Type::Empty) => true,
        (Type::Fun(a1, b1), Type::Fun(a2, b2)) => rel(a1, a2) && rel(b1, b2),
        (Type::Record(r1), Type::Record(r2)) | (Type::Variant(r1), Type::Variant(r2)) => {
            rel(r1, r2)
        }
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Fun,
    Forall(Kind),
    Record,
    Variant,
}

/// `A ▷ shape`: `?` matches the shape filled with `?`; a type already of the
/// shape matches itself.
pub fn type_match(a: &Type, shape: Shape) -> Option<Type> {
    match (a, shape) {
        (Type::Dyn, Shape::Fun) => Some(Type::fun(Type::Dyn, Type::Dyn)),
        (Type::Dyn, Shape::Forall(k)) => Some(Type::forall("X", k, Type::Dyn)),
        (Type::Dyn, Shape::Record) => Some(Type::record(Type::Dyn)),
        (Type::Dyn, Shape::Variant) => Some(Type::variant(Type::Dyn)),
        (Type::Fun(..), Shape::Fun)
        | (Type::Record(_), Shape::Record)
        | (Type::Variant(_), Shape::Variant) => Some(a.clone()),
        (Type::Forall(_, k, _), Shape::Forall(k2)) if *k == k2 => Some(a.clone()),
        _ => None,
    }
}

/// `A ⊕ B`: a type consistently equivalent to both, used to join the
/// branches of a case.
pub fn merge(a: &Type, b: &Type) -> Option<Type> {
    if equiv(a, b) {
        return Some(a.clone());
    }
    match (a, b) {
        (Type::Dyn, _) | (_, Type::Dyn) => Some(Type::Dyn),
        (Type::Fun(a1, b1), Type::Fun(a2, b2)) => Some(Type::fun(merge(a1, a2)?, merge(b1, b2)?)),
        (Type::Forall(x, k1, a1), Type::Forall(y, k2, b1)) if k1 == k2 => {
            let (z, a1, b1) = open_pair(x, a1, y, b1);
            Some(Type::Forall(z, *k1, Box::new(merge(&a1, &b1)?)))
        }
        (Type::Record(r1), Type::Record(r2)) => Some(Type::record(merge_row(r1, r2)?)),
        (Type::Variant(r1), Type::Variant(r2)) => Some(Type::variant(merge_row(r1, r2)?)),
        _ => None,
    }
}

fn merge_row(r1: &Type, r2: &Type) -> Option<Type> {
    match (r1, r2) {
        (Type::Dyn, _) | (_, Type::Dyn) => Some(Type::Dyn),
        (Type::Ext(l, a, rest), _) => {
            let (b, rest2) = split_row(r2, l)?;
            Some(Type::ext(l, merge(a, &b)?, merge_row(rest, &rest2)?))
        }
        _ => {
            if equiv(r1, r2) {
                Some(r1.clone())
            } else {
                None
            }
        }
    }
}

/// The ground type a type is cast through on its way to `?`. Undefined for
/// `?` and quantifiers.
pub fn ground_of(a: &Type) -> Option<Type> {
    match a {
        Type::Base(_) | Type::Name(_) => Some(a.clone()),
        Type::Fun(..) => Some(Type::fun(Type::Dyn, Type::Dyn)),
        Type::Record(_) => Some(Type::record(Type::Dyn)),
        Type::Variant(_) => Some(Type::variant(Type::Dyn)),
        _ => None,
    }
}

pub fn is_ground(a: &Type) -> bool {
    match a {
        Type::Base(_) | Type::Name(_) => true,
        Type::Fun(x, y) => x.is_dyn() && y.is_dyn(),
        Type::Record(r) | Type::Variant(r) => r.is_dyn(),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;

    fn t(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn consistency_examples() {
        assert!(consistent(&t("[l1:Int; ?]"), &t("[l2:Str; ?]")));
        assert!(!consistent(&t("[l1:Int; l2:Bool; .]"), &t("[l2:Bool; l1:Int; .]")));
        assert!(consistent(&t("forall X:T. X -> X"), &t("? -> ?")));
        assert!(!consistent(&t("forall X:T. X -> X"), &t("Int -> Int")));
        assert!(!consistent(&t("Int"), &t("Bool")));
    }

    #[test]
    fn consistent_equivalence_examples() {
        assert!(consistent_equiv(
            &t("[l1:Int; l2:Bool; .]"),
            &t("[l2:Bool; l1:Int; .]")
        ));
        assert!(consistent_equiv(&t("[l1:Int; ?]"), &t("[l2:Str; ?]")));
        assert!(!consistent_equiv(&t("[l1:Int; .]"), &t("[l2:Str; .]")));
        assert!(!consistent_equiv(&t("[l1:Int; .]"), &t("[l1:Int; l2:Str; .]")));
        assert!(consistent_equiv(&t("<l2:Bool; l1:Int; .>"), &t("<?>")));
    }

    #[test]
    fn matching() {
        assert_eq!(type_match(&Type::Dyn, Shape::Fun), Some(t("? -> ?")));
        assert_eq!(type_match(&t("Int -> Bool"), Shape::Fun), Some(t("Int -> Bool")));
        assert_eq!(type_match(&Type::int(), Shape::Record), None);
        assert_eq!(
            type_match(&Type::Dyn, Shape::Forall(Kind::R)),
            Some(t("forall X:R. ?"))
        );
    }

    #[test]
    fn merging() {
        let a = t("[l1:Int; ?]");
        let b = t("[l2:Str; ?]");
        let c = merge(&a, &b).unwrap();
        assert!(consistent_equiv(&a, &c) && consistent_equiv(&b, &c));
        assert_eq!(merge(&Type::int(), &Type::bool()), None);
        assert_eq!(merge(&t("Int -> ?"), &t("? -> Bool")), Some(t("? -> ?")));
        assert_eq!(
            merge(&t("[a:Int; b:Bool; .]"), &t("[b:Bool; a:Int; .]")),
            Some(t("[a:Int; b:Bool; .]"))
        );
    }

    #[test]
    fn qpoly_cases() {
        assert!(qpoly(&Type::Dyn));
        assert!(qpoly(&t("Int -> ?")));
        assert!(!qpoly(&t("Int -> Int")));
        assert!(!qpoly(&t("forall X:T. ?")));
        assert!(!qpoly(&t("l:?; .")));
    }
}
