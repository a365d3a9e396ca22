//! Acceptance criteria, one line each. Exits non-zero if any fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rowg::core::translate;
use rowg::eval::{evaluate, EvalOptions, Outcome, Run};
use rowg::oracle::{
    check_composition, check_conservativity, check_equiv_oracle, check_inversion,
    check_soundness, enum_types, EnumConfig, Enumeration, Report,
};
use rowg::rows::equiv;
use rowg::statics::Ctx;
use rowg::syntax::{parse_program, parse_type};
use rowg::{BlameLabel, CoreTerm, Type};

type Verdict = Result<String, String>;
type Criterion<'a> = Box<dyn Fn() -> Verdict + 'a>;

fn corpus(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.rowg"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn run_core(e: &CoreTerm, primed: bool) -> Run {
    let opts = EvalOptions {
        trace: true,
        check_steps: true,
        primed_conlift: primed,
        ..EvalOptions::default()
    };
    evaluate(e, &opts).expect("evaluation does not get stuck")
}

fn run_src(src: &str, primed: bool) -> Run {
    let m = parse_program(src).expect("parses");
    let (e, _) = translate(&Ctx::new(), &m).expect("typechecks");
    run_core(&e, primed)
}

fn run_corpus(name: &str, primed: bool) -> Run {
    run_src(&corpus(name), primed)
}

fn p(n: u32) -> BlameLabel {
    BlameLabel::new(n)
}

fn t(s: &str) -> Type {
    parse_type(s).unwrap()
}

fn expect_trace(run: &Run, steps: &[(&str, &str)]) -> Result<(), String> {
    if run.trace.len() < steps.len() {
        return Err(format!("only {} steps", run.trace.len()));
    }
    for (i, (entry, (rule, term))) in run.trace.iter().zip(steps).enumerate() {
        if entry.rule != *rule || entry.term.to_string() != *term {
            return Err(format!(
                "step {}: got {} `{}`, want {rule} `{term}`",
                i + 1,
                entry.rule,
                entry.term
            ));
        }
    }
    Ok(())
}

fn expect_blame(run: &Run, label: BlameLabel) -> Result<(), String> {
    match &run.outcome {
        Outcome::Blamed(q) if *q == label => Ok(()),
        other => Err(format!("expected blame {label}, got {other:?}")),
    }
}

fn value_of(run: &Run) -> Result<&CoreTerm, String> {
    match &run.outcome {
        Outcome::Value(v) => Ok(v),
        other => Err(format!("expected a value, got {other:?}")),
    }
}

fn record_injection() -> Verdict {
    let run = run_corpus("record_injection", false);
    expect_trace(
        &run,
        &[
            ("R-RToDyn", "(({l1 = 0; {l2 = true; {}}} : [l1:Int; l2:Bool; .] =p0=> [l1:?; ?]) : [l1:?; ?] =p0=> [?])"),
            ("R-RRev", "({l1 = (0 : Int =p0=> ?); ({l2 = true; {}} : [l2:Bool; .] =p0=> [?])} : [l1:?; ?] =p0=> [?])"),
            ("R-RToDyn", "({l1 = (0 : Int =p0=> ?); (({l2 = true; {}} : [l2:Bool; .] =p0=> [l2:?; ?]) : [l2:?; ?] =p0=> [?])} : [l1:?; ?] =p0=> [?])"),
            ("R-RRev", "({l1 = (0 : Int =p0=> ?); ({l2 = (true : Bool =p0=> ?); ({} : [.] =p0=> [?])} : [l2:?; ?] =p0=> [?])} : [l1:?; ?] =p0=> [?])"),
        ],
    )?;
    if run.trace.len() != 4 {
        return Err(format!("{} steps instead of 4", run.trace.len()));
    }
    value_of(&run)?;
    Ok("4 steps, final value matches".into())
}

fn record_projection() -> Verdict {
    let ok = run_corpus("record_projection", false);
    if *value_of(&ok)? != CoreTerm::int(0) {
        return Err(format!("projection gave {:?}", ok.outcome));
    }
    // The projection's cast is the second one, p1.
    expect_blame(&run_corpus("record_projection_blame", false), p(1))?;
    let missing = run_corpus("record_projection_missing", false);
    expect_blame(&missing, p(1))?;
    if !missing.rules().contains(&"R-RBlame") {
        return Err("missing field not blamed by R-RBlame".into());
    }
    Ok("l1 -> 0; Bool -> blame p1; l3 -> blame p1 via R-RBlame".into())
}

fn variant_traces() -> Verdict {
    let run = run_corpus("variant_injection", false);
    expect_trace(
        &run,
        &[
            ("R-VToDyn", "((l2 ^ Bool (l1 0) : <l2:Bool; l1:Int; .> =p0=> <l2:?; ?>) : <l2:?; ?> =p0=> <?>)"),
            ("R-VRevLift", "(l2 ^ ? (l1 0 : <l1:Int; .> =p0=> <?>) : <l2:?; ?> =p0=> <?>)"),
            ("R-VToDyn", "(l2 ^ ? ((l1 0 : <l1:Int; .> =p0=> <l1:?; ?>) : <l1:?; ?> =p0=> <?>) : <l2:?; ?> =p0=> <?>)"),
            ("R-VRevInj", "(l2 ^ ? (l1 (0 : Int =p0=> ?) : <l1:?; ?> =p0=> <?>) : <l2:?; ?> =p0=> <?>)"),
        ],
    )?;
    if run.trace.len() != 4 {
        return Err(format!("{} steps instead of 4", run.trace.len()));
    }

    // Projection at the embedded label only retypes the embedding.
    let lift = run_corpus("variant_projection_lift", false);
    let v = "(l1 (0 : Int =p0=> ?) : <l1:?; ?> =p0=> <?>)";
    let at = |i: usize| lift.trace.get(i).map(|e| (e.rule, e.term.to_string()));
    if at(4) != Some(("R-VFromDyn", format!("(l2 ^ ? {v} : <l2:?; ?> =p1=> <l2:Int; ?>)"))) {
        return Err(format!("R-VFromDyn step: {:?}", at(4)));
    }
    if at(5) != Some(("R-VRevLift", format!("l2 ^ Int ({v} : <?> =p1=> <?>)"))) {
        return Err(format!("R-VRevLift step: {:?}", at(5)));
    }
    value_of(&lift)?;

    // Projection at another label inserts the embedded field.
    let proj = run_corpus("variant_projection", false);
    let want = format!(
        "((case ({v} : <?> =p1=> <l1:Int; ?>) with <l1 x -> l1 x; y -> l1 ^ Int (l2 ^ ? y)>) : <l1:Int; l2:?; ?> =p1=> <l1:Int; ?>)"
    );
    let got = proj.trace.get(5).map(|e| (e.rule, e.term.to_string()));
    if got != Some(("R-VConLift", want)) {
        return Err(format!("R-VConLift step: {got:?}"));
    }
    if value_of(&proj)?.to_string() != "l1 0" {
        return Err(format!("projection gave {:?}", proj.outcome));
    }
    expect_blame(&run_corpus("variant_projection_blame", false), p(1))?;
    Ok("4-step trace, lift/insert intermediate terms, A != Int blames p1".into())
}

fn sealing() -> Verdict {
    let id_int = "Lam X:T. lam x:X. (x : ?) : Int";
    let id = "Lam X:T. lam x:X. (x : ?) : X";
    for (ty, v) in [("Int", "0"), ("Bool", "true"), ("[.]", "{}")] {
        let r = run_src(&format!("({id_int}) [{ty}] {v}"), false);
        if !matches!(r.outcome, Outcome::Blamed(_)) {
            return Err(format!("Id_int [{ty}] {v} gave {:?}", r.outcome));
        }
        let r = run_src(&format!("({id}) [{ty}] {v}"), false);
        let arg = translate(&Ctx::new(), &parse_program(v).unwrap()).unwrap().0;
        if value_of(&r)? != &arg {
            return Err(format!("Id [{ty}] {v} gave {:?}", r.outcome));
        }
    }
    expect_blame(&run_corpus("id_int", false), p(1))?;
    if value_of(&run_corpus("id", false))? != &CoreTerm::int(0) {
        return Err("corpus id program".into());
    }
    Ok("Id_int blames at Int, Bool, [.]; Id returns its argument".into())
}

/// `(l ^ Bool v) : <l:Bool; ?> =p3=> <m:Str; X> =p4=> <l:Bool; ?>` with
/// `v = l (0 : Int =p1=> ?) : <l:?; ?> =p2=> <?>`.
fn conlift_term(x: &Type) -> CoreTerm {
    let v = CoreTerm::cast(
        CoreTerm::inj("l", CoreTerm::cast(CoreTerm::int(0), Type::int(), p(1), Type::Dyn), Type::Dyn),
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

fn conlift() -> Verdict {
    let star = conlift_term(&Type::Dyn);
    let row = conlift_term(&t("l:Bool; ?"));
    value_of(&run_core(&star, false)).map_err(|e| format!("default, X = ?: {e}"))?;
    value_of(&run_core(&row, false)).map_err(|e| format!("default, X = row: {e}"))?;
    expect_blame(&run_core(&star, true), p(4)).map_err(|e| format!("primed, X = ?: {e}"))?;
    value_of(&run_core(&row, true)).map_err(|e| format!("primed, X = row: {e}"))?;

    // The same chain from source; its outermost cast is p3.
    value_of(&run_corpus("conlift_dyn", false))?;
    value_of(&run_corpus("conlift_row", false))?;
    expect_blame(&run_corpus("conlift_dyn", true), p(3))?;
    value_of(&run_corpus("conlift_row", true))?;
    Ok("default: value, value; primed: blame p4, value".into())
}

fn suite(check: impl FnOnce() -> Report) -> Verdict {
    let started = Instant::now();
    let r = check();
    match r.failure {
        None => Ok(format!("{} checked in {:.1}s", r.checked, started.elapsed().as_secs_f64())),
        Some(f) => Err(format!("{} after {} checked", f, r.checked)),
    }
}

fn standard() -> Enumeration {
    enum_types(&EnumConfig::standard(2))
}

fn main() -> ExitCode {
    let en = standard();
    eprintln!(
        "enumeration: {} types, {} rows, {} same-kind pairs",
        en.types.len(),
        en.rows.len(),
        en.pair_count()
    );
    let criteria: Vec<(&str, Criterion)> = vec![
        ("record injection trace", Box::new(record_injection)),
        ("record projection", Box::new(record_projection)),
        ("variant traces", Box::new(variant_traces)),
        ("sealing", Box::new(sealing)),
        ("VConLift counterexample", Box::new(conlift)),
        ("consistent-equivalence theorem", Box::new(|| suite(|| check_composition(&en)))),
        ("equivalence oracle", Box::new(|| suite(|| check_equiv_oracle(&en, equiv)))),
        ("inversion lemma", Box::new(|| suite(|| check_inversion(&en)))),
        ("soundness fuzz", Box::new(|| suite(|| check_soundness(10_000, 0)))),
        ("conservativity", Box::new(|| suite(|| check_conservativity(10_000, 0)))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let verdict = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
