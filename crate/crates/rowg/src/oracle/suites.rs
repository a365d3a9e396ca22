//! Property suites shared by the test harness and `rowg props`.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::gen::{minimize, mutate, ProgramGen};
use super::{composes, enum_types, equiv_closure, normalize_binders, EnumConfig, Enumeration};
use crate::core::{translate, typecheck_core, CoreTerm, NameStore};
use crate::eval::{eval_static, evaluate, EvalOptions, Outcome, StaticOutcome};
use crate::gradual_rel::{consistent, consistent_equiv, merge};
use crate::rows::{equiv, split_row};
use crate::statics::{typecheck_gradual, typecheck_static, Ctx};
use crate::subst::alpha_eq;
use crate::syntax::{parse_program, Term, TermKind, Type};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub name: &'static str,
    pub checked: u64,
    /// The first counterexample, pretty-printed.
    pub failure: Option<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.failure {
            None => write!(f, "ok   {:<16} {} checked", self.name, self.checked),
            Some(c) => write!(f, "FAIL {:<16} after {} checked: {}", self.name, self.checked, c),
        }
    }
}

/// Checks `rel(a, b)` on every same-kind ordered pair; returns the number of
/// pairs and the first failure in enumeration order.
fn over_pairs<F>(en: &Enumeration, check: F) -> (u64, Option<String>)
where
    F: Fn(usize, usize, &[Type]) -> Option<String> + Sync,
{
    let mut checked = 0;
    for group in [&en.types, &en.rows] {
        let n = group.len();
        let first = (0..n)
            .into_par_iter()
            .map(|i| (0..n).find_map(|j| check(i, j, group)))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next();
        checked += (n * n) as u64;
        if first.is_some() {
            return (checked, first);
        }
    }
    (checked, None)
}

struct Closures {
    sets: Vec<HashSet<Type>>,
    norm: Vec<Type>,
}

fn closures(group: &[Type]) -> Closures {
    Closures {
        sets: group.par_iter().map(equiv_closure).collect(),
        norm: group.iter().map(normalize_binders).collect(),
    }
}

fn pair(a: &Type, b: &Type) -> String {
    format!("`{a}` vs `{b}`")
}

/// `impl_equiv` against the swap-closure oracle.
pub fn check_equiv_oracle(en: &Enumeration, impl_equiv: fn(&Type, &Type) -> bool) -> Report {
    let ct = closures(&en.types);
    let cr = closures(&en.rows);
    let (checked, failure) = over_pairs(en, |i, j, g| {
        let c = if std::ptr::eq(g, en.types.as_slice()) { &ct } else { &cr };
        let want = c.sets[i].contains(&c.norm[j]);
        let got = impl_equiv(&g[i], &g[j]);
        (want != got).then(|| format!("{}: oracle says {want}, equiv says {got}", pair(&g[i], &g[j])))
    });
    Report {
        name: "equiv-oracle",
        checked,
        failure,
    }
}

/// `consistent_equiv` against the composition `≡ ; ∼ ; ≡`.
pub fn check_composition(en: &Enumeration) -> Report {
    let ct = closures(&en.types);
    let cr = closures(&en.rows);
    let (checked, failure) = over_pairs(en, |i, j, g| {
        let c = if std::ptr::eq(g, en.types.as_slice()) { &ct } else { &cr };
        let want = composes(&c.sets[i], &c.sets[j]);
        let got = consistent_equiv(&g[i], &g[j]);
        (want != got).then(|| {
            format!("{}: composition says {want}, consistent_equiv says {got}", pair(&g[i], &g[j]))
        })
    });
    Report {
        name: "composition",
        checked,
        failure,
    }
}

/// `l:A; ρ1 ≃ ρ2` implies `ρ2` splits at `l` into consistently equivalent
/// parts.
pub fn check_inversion(en: &Enumeration) -> Report {
    let rows = &en.rows;
    let n = rows.len();
    let results: Vec<(u64, Option<String>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let Type::Ext(l, a, r1) = &rows[i] else {
                return (0, None);
            };
            let mut checked = 0;
            for r2 in rows {
                if !consistent_equiv(&rows[i], r2) {
                    continue;
                }
                checked += 1;
                let ok = match split_row(r2, l) {
                    Some((b, rest)) => consistent_equiv(a, &b) && consistent_equiv(r1, &rest),
                    None => false,
                };
                if !ok {
                    return (checked, Some(pair(&rows[i], r2)));
                }
            }
            (checked, None)
        })
        .collect();
    Report {
        name: "inversion",
        checked: results.iter().map(|r| r.0).sum(),
        failure: results.into_iter().find_map(|r| r.1),
    }
}

/// Symmetry, reflexivity, subsumption and the merge postconditions.
pub fn check_relation_laws(en: &Enumeration) -> Report {
    let (checked, failure) = over_pairs(en, |i, j, g| {
        let (a, b) = (&g[i], &g[j]);
        let fail = |what: &str| Some(format!("{what}: {}", pair(a, b)));
        if i == j && !(equiv(a, a) && consistent(a, a) && consistent_equiv(a, a)) {
            return fail("reflexivity");
        }
        let ce = consistent_equiv(a, b);
        if equiv(a, b) != equiv(b, a) {
            return fail("equiv symmetry");
        }
        if consistent(a, b) != consistent(b, a) || ce != consistent_equiv(b, a) {
            return fail("consistency symmetry");
        }
        if (equiv(a, b) || consistent(a, b)) && !ce {
            return fail("subsumption");
        }
        if std::ptr::eq(g, en.types.as_slice()) {
            match merge(a, b) {
                Some(c) if !(consistent_equiv(a, &c) && consistent_equiv(b, &c)) => {
                    return fail("merge result");
                }
                m if !a.contains_dyn() && !b.contains_dyn() => {
                    let defined = m.is_some();
                    if defined != equiv(a, b) || m.is_some_and(|c| !equiv(a, &c)) {
                        return fail("merge on static types");
                    }
                }
                _ => {}
            }
        }
        None
    });
    Report {
        name: "relation-laws",
        checked,
        failure,
    }
}

const PROGRAM_SIZE: u32 = 14;

fn program_seed(base: u64, i: u64) -> u64 {
    base.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i)
}

fn soundness_one(m: &Term) -> Result<(), String> {
    let (e, a) = translate(&Ctx::new(), m).map_err(|e| format!("rejected: {e}"))?;
    match typecheck_core(&NameStore::new(), &Ctx::new(), &e) {
        Ok(Some(b)) if alpha_eq(&a, &b) => {}
        Ok(Some(b)) => return Err(format!("translation has type `{b}`, source `{a}`")),
        Ok(None) => return Err("translation has no type".into()),
        Err(e) => return Err(format!("translation ill-typed: {e}")),
    }
    let opts = EvalOptions {
        check_steps: true,
        ..EvalOptions::default()
    };
    let run = evaluate(&e, &opts).map_err(|e| e.to_string())?;
    match run.outcome {
        Outcome::Value(_) | Outcome::Blamed(_) => Ok(()),
        Outcome::FuelExhausted(_) => Err("ran out of fuel".into()),
    }
}

fn fuzz(
    name: &'static str,
    count: u64,
    seed: u64,
    gradual: bool,
    one: impl Fn(&Term, u64) -> Result<(), String> + Sync,
) -> Report {
    let first = (0..count)
        .into_par_iter()
        .find_first(|i| {
            let m = ProgramGen::new(program_seed(seed, *i), gradual).program(PROGRAM_SIZE).0;
            one(&m, *i).is_err()
        });
    let failure = first.map(|i| {
        let m = ProgramGen::new(program_seed(seed, i), gradual).program(PROGRAM_SIZE).0;
        let small = minimize(&m, gradual, |c| one(c, i).is_err());
        let why = one(&small, i).err().unwrap_or_default();
        format!("program #{i}: {small}\n  {why}")
    });
    Report {
        name,
        checked: first.map_or(count, |i| i + 1),
        failure,
    }
}

/// Generated gradual programs translate, keep their type, and evaluate to a
/// value or blame with every intermediate term well typed.
pub fn check_soundness(count: u64, seed: u64) -> Report {
    fuzz("soundness", count, seed, true, |m, _| soundness_one(m))
}

fn conservativity_one(m: &Term, i: u64) -> Result<(), String> {
    let ctx = Ctx::new();
    let s = typecheck_static(&ctx, m).map_err(|e| format!("static checker rejects: {e}"))?;
    let g = typecheck_gradual(&ctx, m).map_err(|e| format!("gradual checker rejects: {e}"))?;
    if !equiv(&s, &g) {
        return Err(format!("static `{s}`, gradual `{g}`"));
    }
    let (e, _) = translate(&ctx, m).map_err(|e| e.to_string())?;
    match typecheck_core(&NameStore::new(), &ctx, &e) {
        Ok(Some(c)) if equiv(&c, &s) => {}
        other => return Err(format!("translation typed as {other:?}, static `{s}`")),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(i);
    let bad = mutate(m, &mut rng);
    let s2 = typecheck_static(&ctx, &bad);
    let g2 = typecheck_gradual(&ctx, &bad);
    match (&s2, &g2) {
        (Ok(a), Ok(b)) if !equiv(a, b) => {
            return Err(format!("mutant {bad}: static `{a}`, gradual `{b}`"));
        }
        (Ok(_), Err(_)) | (Err(_), Ok(_)) => {
            return Err(format!("mutant {bad}: static {}, gradual {}", s2.is_ok(), g2.is_ok()));
        }
        _ => {}
    }

    if !matches!(s, Type::Base(_)) {
        return Ok(());
    }
    let fuel = crate::eval::DEFAULT_FUEL;
    let want = match eval_static(m, fuel).map_err(|e| e.to_string())? {
        StaticOutcome::Value(v) => match v.kind {
            TermKind::Const(c) => c,
            _ => return Err(format!("static result {v} is not a constant")),
        },
        StaticOutcome::FuelExhausted(_) => return Ok(()),
    };
    let run = evaluate(&e, &EvalOptions { fuel, ..EvalOptions::default() }).map_err(|e| e.to_string())?;
    match run.outcome {
        Outcome::Value(CoreTerm::Const(c)) if c == want => Ok(()),
        other => Err(format!("static result {want}, gradual {other:?}")),
    }
}

/// On programs without `?`: both checkers agree (also on damaged programs),
/// and both evaluators compute the same constant at base type.
pub fn check_conservativity(count: u64, seed: u64) -> Report {
    fuzz("conservativity", count, seed, false, conservativity_one)
}

/// The printer's output parses back to the same program.
pub fn check_round_trip(count: u64, seed: u64) -> Report {
    fuzz("round-trip", count, seed, true, |m, _| {
        let text = m.to_string();
        match parse_program(&text) {
            Ok(back) if back == *m => Ok(()),
            Ok(back) => Err(format!("reparsed as {back}")),
            Err(e) => Err(format!("parse error: {e}")),
        }
    })
}

#[derive(Debug, Clone)]
pub struct PropsConfig {
    pub depth: u32,
    pub programs: u64,
    pub seed: u64,
    /// Run the equivalence suite against the equal-label-swapping mutant.
    pub mutant: bool,
}

impl Default for PropsConfig {
    fn default() -> PropsConfig {
        PropsConfig {
            depth: 2,
            programs: 10_000,
            seed: 0,
            mutant: false,
        }
    }
}

/// Every suite, in order.
pub fn run_all(cfg: &PropsConfig) -> Vec<Report> {
    let en = enum_types(&EnumConfig::standard(cfg.depth));
    let impl_equiv = if cfg.mutant {
        super::equiv_eq_swap_mutant
    } else {
        equiv
    };
    vec![
        check_equiv_oracle(&en, impl_equiv),
        check_composition(&en),
        check_inversion(&en),
        check_relation_laws(&en),
        check_round_trip(cfg.programs, cfg.seed),
        check_soundness(cfg.programs, cfg.seed),
        check_conservativity(cfg.programs, cfg.seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_depth_suites_pass() {
        let en = enum_types(&EnumConfig::standard(1));
        for r in [
            check_equiv_oracle(&en, equiv),
            check_composition(&en),
            check_inversion(&en),
            check_relation_laws(&en),
        ] {
            assert!(r.passed(), "{r}");
            assert!(r.checked > 0);
        }
    }

    #[test]
    fn mutant_is_caught() {
        let cfg = EnumConfig {
            labels: vec!["l".into()],
            bases: vec![crate::syntax::Base::Int],
            allow_forall: false,
            ..EnumConfig::standard(2)
        };
        let r = check_equiv_oracle(&enum_types(&cfg), super::super::equiv_eq_swap_mutant);
        assert!(r.failure.unwrap().contains("l:Int; l:"));
    }

    #[test]
    fn program_suites_pass() {
        for r in [
            check_round_trip(200, 1),
            check_soundness(200, 1),
            check_conservativity(200, 1),
        ] {
            assert!(r.passed(), "{r}");
        }
    }
}
