use super::{Term, TermKind, Type};

pub fn pretty_type(t: &Type) -> String {
    let mut s = String::new();
    ty(&mut s, t, false);
    s
}

/// `atomic` asks for parentheses around arrows and quantifiers.
pub(crate) fn ty(out: &mut String, t: &Type, atomic: bool) {
    match t {
        Type::Var(x) => out.push_str(x),
        Type::Name(n) => out.push_str(&n.to_string()),
        Type::Dyn => out.push('?'),
        Type::Base(b) => out.push_str(&b.to_string()),
        Type::Empty => out.push('.'),
        Type::Fun(a, b) => {
            paren(out, atomic, |out| {
                ty(out, a, true);
                out.push_str(" -> ");
                ty(out, b, false);
            });
        }
        Type::Forall(x, k, a) => {
            paren(out, atomic, |out| {
                out.push_str(&format!("forall {x}:{k}. "));
                ty(out, a, false);
            });
        }
        Type::Record(r) => {
            out.push('[');
            row(out, r);
            out.push(']');
        }
        Type::Variant(r) => {
            out.push('<');
            row(out, r);
            out.push('>');
        }
        Type::Ext(..) => {
            if atomic {
                out.push('(');
                row(out, t);
                out.push(')');
            } else {
                row(out, t);
            }
        }
    }
}

fn row(out: &mut String, r: &Type) {
    match r {
        Type::Ext(l, a, rest) => {
            out.push_str(l);
            out.push(':');
            ty(out, a, false);
            out.push_str("; ");
            row(out, rest);
        }
        other => ty(out, other, true),
    }
}

fn paren(out: &mut String, yes: bool, f: impl FnOnce(&mut String)) {
    if yes {
        out.push('(');
    }
    f(out);
    if yes {
        out.push(')');
    }
}

// Precedence levels: 0 anything, 1 injection argument, 2 application head,
// 3 atom.
const TOP: u8 = 0;
const INJ: u8 = 1;
const HEAD: u8 = 2;
const ATOM: u8 = 3;

pub fn pretty_term(t: &Term) -> String {
    let mut s = String::new();
    term(&mut s, t, TOP);
    s
}

fn level(t: &TermKind) -> u8 {
    match t {
        TermKind::Lam(..)
        | TermKind::TLam(..)
        | TermKind::RLet(..)
        | TermKind::VCase(..)
        | TermKind::Ascribe(..) => TOP,
        TermKind::VInj(..) | TermKind::VEmbed(..) => INJ,
        TermKind::App(..) | TermKind::TApp(..) => HEAD,
        TermKind::Var(_) | TermKind::Const(_) | TermKind::REmpty | TermKind::RExtend(..) => ATOM,
    }
}

fn term(out: &mut String, t: &Term, ctx: u8) {
    let need = level(&t.kind) < ctx;
    paren(out, need, |out| match &t.kind {
        TermKind::Var(x) => out.push_str(x),
        TermKind::Const(c) => out.push_str(&c.to_string()),
        TermKind::Lam(x, a, b) => {
            out.push_str(&format!("lam {x}:"));
            ty(out, a, false);
            out.push_str(". ");
            term(out, b, TOP);
        }
        TermKind::TLam(x, k, b) => {
            out.push_str(&format!("Lam {x}:{k}. "));
            term(out, b, TOP);
        }
        TermKind::App(f, a) => {
            term(out, f, HEAD);
            out.push(' ');
            term(out, a, ATOM);
        }
        TermKind::TApp(f, a) => {
            term(out, f, HEAD);
            out.push_str(" [");
            ty(out, a, false);
            out.push(']');
        }
        TermKind::REmpty => out.push_str("{}"),
        TermKind::RExtend(..) => record(out, t),
        TermKind::RLet(l, x, y, m, n) => {
            out.push_str(&format!("let {{{l} = {x}; {y}}} = "));
            term(out, m, TOP);
            out.push_str(" in ");
            term(out, n, TOP);
        }
        TermKind::VInj(l, m) => {
            out.push_str(l);
            out.push(' ');
            term(out, m, ATOM);
        }
        TermKind::VEmbed(l, a, m) => {
            out.push_str(l);
            out.push_str(" ^ ");
            ty(out, a, true);
            out.push(' ');
            term(out, m, ATOM);
        }
        TermKind::VCase(m, l, x, n1, y, n2) => {
            out.push_str("case ");
            term(out, m, TOP);
            out.push_str(&format!(" with <{l} {x} -> "));
            term(out, n1, TOP);
            out.push_str(&format!("; {y} -> "));
            term(out, n2, TOP);
            out.push('>');
        }
        TermKind::Ascribe(m, a, _) => {
            term(out, m, INJ);
            out.push_str(" : ");
            ty(out, a, false);
        }
    })
}

/// Prints `{l1 = M1; l2 = M2}` when the record ends in `{}` and the nested
/// form otherwise.
fn record(out: &mut String, t: &Term) {
    let mut fields = Vec::new();
    let mut cur = t;
    while let TermKind::RExtend(l, m, n) = &cur.kind {
        fields.push((l, m));
        cur = n;
    }
    out.push('{');
    for (i, (l, m)) in fields.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        out.push_str(&format!("{l} = "));
        term(out, m, TOP);
    }
    if !matches!(cur.kind, TermKind::REmpty) {
        out.push_str("; ");
        term(out, cur, TOP);
    }
    out.push('}');
}

#[cfg(test)]
mod tests {
    use super::super::{parse_program, parse_type, Kind};
    use super::*;

    #[test]
    fn prints_types() {
        let t = Type::forall(
            "X",
            Kind::R,
            Type::fun(
                Type::fun(Type::int(), Type::Dyn),
                Type::record(Type::row([("l", Type::bool())], Type::var("X"))),
            ),
        );
        assert_eq!(pretty_type(&t), "forall X:R. (Int -> ?) -> [l:Bool; X]");
        assert_eq!(parse_type(&pretty_type(&t)).unwrap(), t);
    }

    #[test]
    fn prints_terms_round_trip() {
        for src in [
            "lam f:?. f 0",
            "l2 ^ Bool (l1 0) : <l2:Bool; l1:Int; .>",
            "{l1 = 0; l2 = true}",
            "let {l = x; y} = {l = 1} in x",
            "case l 1 : <l:Int; .> with <l x -> x; y -> 0>",
            "(Lam X:T. lam x:X. x) [Int] 3",
            "add 1 (add 2 3)",
        ] {
            let t = parse_program(src).unwrap();
            assert_eq!(pretty_term(&t), src);
        }
    }
}
