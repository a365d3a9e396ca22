use proptest::prelude::*;

use rowg::eval::{evaluate, EvalOptions, Outcome};
use rowg::gradual_rel::{consistent, consistent_equiv, merge};
use rowg::oracle::{equiv_closure, gen_well_typed_term};
use rowg::rows::{dom, equiv, grow, is_ground_row, split_row};
use rowg::statics::{typecheck_gradual, typecheck_static, Ctx};
use rowg::syntax::{parse_program, parse_type};
use rowg::{Kind, Type};

const LABELS: [&str; 3] = ["l1", "l2", "l3"];

fn row_of(inner: impl Strategy<Value = Type> + Clone) -> impl Strategy<Value = Type> + Clone {
    (
        prop::collection::vec((prop::sample::select(&LABELS[..]), inner), 0..4),
        prop::bool::ANY,
    )
        .prop_map(|(fs, dyn_tail)| {
            let tail = if dyn_tail { Type::Dyn } else { Type::Empty };
            Type::row(fs, tail)
        })
}

fn ty() -> impl Strategy<Value = Type> + Clone {
    let leaf = prop_oneof![Just(Type::int()), Just(Type::bool()), Just(Type::Dyn)];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::fun(a, b)),
            row_of(inner.clone()).prop_map(Type::record),
            row_of(inner.clone()).prop_map(Type::variant),
            inner.prop_map(|a| Type::forall("X", Kind::T, Type::fun(Type::var("X"), a))),
        ]
    })
}

fn row() -> impl Strategy<Value = Type> {
    row_of(ty())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn equiv_is_reflexive_and_closed_under_swaps(a in ty()) {
        prop_assert!(equiv(&a, &a));
        for b in equiv_closure(&a).iter().take(32) {
            prop_assert!(equiv(&a, b), "{a} vs {b}");
            prop_assert!(equiv(b, &a), "{b} vs {a}");
        }
    }

    #[test]
    fn consistency_is_symmetric(a in ty(), b in ty()) {
        prop_assert_eq!(consistent(&a, &b), consistent(&b, &a));
        prop_assert_eq!(consistent_equiv(&a, &b), consistent_equiv(&b, &a));
    }

    #[test]
    fn equiv_implies_consistent_equiv(a in ty()) {
        for b in equiv_closure(&a).iter().take(16) {
            prop_assert!(consistent_equiv(&a, b));
        }
        prop_assert!(consistent_equiv(&a, &Type::Dyn));
    }

    #[test]
    fn split_row_reconstructs(r in row(), l in prop::sample::select(&LABELS[..])) {
        match split_row(&r, l) {
            Some((a, rest)) if dom(&r).contains(l) => {
                let back = Type::record(Type::ext(l, a, rest));
                prop_assert!(equiv(&back, &Type::record(r.clone())), "{back} vs [{r}]");
            }
            Some((a, rest)) => {
                prop_assert!(a.is_dyn());
                prop_assert_eq!(rest, r);
            }
            None => prop_assert!(!dom(&r).contains(l)),
        }
    }

    #[test]
    fn grow_is_ground_and_consistent(r in row()) {
        if let Some(g) = grow(&r) {
            prop_assert!(is_ground_row(&g), "{g}");
            prop_assert!(consistent_equiv(&Type::record(r.clone()), &Type::record(g.clone())));
        } else {
            prop_assert!(r.is_dyn());
        }
    }

    #[test]
    fn merge_is_consistent_with_both(a in ty(), b in ty()) {
        if let Some(c) = merge(&a, &b) {
            prop_assert!(consistent_equiv(&a, &c), "{a} / {c}");
            prop_assert!(consistent_equiv(&b, &c), "{b} / {c}");
        }
        let m = merge(&a, &a);
        prop_assert!(m.is_some_and(|c| equiv(&a, &c)));
    }

    #[test]
    fn types_round_trip(a in ty()) {
        let back = parse_type(&a.to_string()).unwrap();
        prop_assert_eq!(back, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_terms_round_trip(seed in any::<u64>(), size in 0u32..16, gradual in any::<bool>()) {
        let m = gen_well_typed_term(seed, size, gradual);
        let text = m.to_string();
        let back = parse_program(&text).unwrap();
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn static_programs_check_in_both_modes(seed in any::<u64>(), size in 0u32..16) {
        let m = gen_well_typed_term(seed, size, false);
        let s = typecheck_static(&Ctx::new(), &m).unwrap();
        let g = typecheck_gradual(&Ctx::new(), &m).unwrap();
        prop_assert!(equiv(&s, &g), "{s} vs {g}");
    }

    #[test]
    fn gradual_programs_do_not_get_stuck(seed in any::<u64>(), size in 0u32..16) {
        let m = gen_well_typed_term(seed, size, true);
        let (e, _) = rowg::core::translate(&Ctx::new(), &m).unwrap();
        let opts = EvalOptions { fuel: 100_000, check_steps: true, primed_conlift: false, trace: false };
        let run = evaluate(&e, &opts).unwrap();
        prop_assert!(!matches!(run.outcome, Outcome::FuelExhausted(_)));
    }
}
