//! Seeded, type-directed program generation and shrinking.
//!
//! The generator picks a target type and builds a closed term of exactly that
//! type. Every injection is wrapped in an ascription, so the typechecker's
//! hint propagation never changes the type a subterm was built for.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::statics::{typecheck_gradual, typecheck_static, Ctx};
use crate::syntax::{Const, Kind, Term, TermKind, Type};

const LABELS: [&str; 3] = ["l1", "l2", "l3"];

/// Production weights. Gradual-only productions are ignored for static
/// programs.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub var: u32,
    pub app_lam: u32,
    pub let_record: u32,
    pub case: u32,
    pub prim: u32,
    pub build: u32,
    pub row_poly: u32,
    pub sealing: u32,
    pub chain: u32,
    pub blame_chain: u32,
    pub dyn_app: u32,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            var: 6,
            app_lam: 3,
            let_record: 4,
            case: 4,
            prim: 3,
            build: 4,
            row_poly: 3,
            sealing: 2,
            chain: 3,
            blame_chain: 1,
            dyn_app: 2,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Prod {
    Var,
    AppLam,
    LetRecord,
    Case,
    Prim,
    Build,
    RowPolyRecord,
    RowPolyVariant,
    Id,
    IdInt,
    Chain,
    BlameChain,
    DynVar,
    DynApp,
    DynPoly,
}

pub struct ProgramGen {
    rng: ChaCha8Rng,
    gradual: bool,
    cfg: GenConfig,
    ctx: Vec<(String, Type)>,
    next_var: u32,
}

impl ProgramGen {
    pub fn new(seed: u64, gradual: bool) -> ProgramGen {
        ProgramGen::with_config(seed, gradual, GenConfig::default())
    }

    pub fn with_config(seed: u64, gradual: bool, cfg: GenConfig) -> ProgramGen {
        ProgramGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            gradual,
            cfg,
            ctx: Vec::new(),
            next_var: 0,
        }
    }

    /// A closed program of roughly `size` nodes, and the type it was built at.
    pub fn program(&mut self, size: u32) -> (Term, Type) {
        self.ctx.clear();
        self.next_var = 0;
        let ty = if size == 0 { self.base() } else { self.ty(2) };
        let m = self.term(&ty, size);
        (m, ty)
    }

    fn fresh(&mut self) -> String {
        let x = format!("x{}", self.next_var);
        self.next_var += 1;
        x
    }

    fn base(&mut self) -> Type {
        [Type::int(), Type::bool(), Type::str()]
            .choose(&mut self.rng)
            .unwrap()
            .clone()
    }

    fn literal(&mut self, ty: &Type) -> Term {
        match ty {
            Type::Base(crate::syntax::Base::Int) => Term::int(self.rng.gen_range(0..10)),
            Type::Base(crate::syntax::Base::Bool) => Term::bool(self.rng.gen()),
            _ => Term::str(["a", "b", ""].choose(&mut self.rng).unwrap()),
        }
    }

    /// A random target type. No type variables, no quantifiers, and rows
    /// never repeat a label.
    pub fn ty(&mut self, depth: u32) -> Type {
        let dyn_ok = self.gradual && self.rng.gen_ratio(1, 8);
        if depth == 0 || self.rng.gen_ratio(2, 5) {
            return if dyn_ok { Type::Dyn } else { self.base() };
        }
        match self.rng.gen_range(0..4) {
            0 if dyn_ok => Type::Dyn,
            0 | 1 => Type::fun(self.ty(depth - 1), self.ty(depth - 1)),
            2 => Type::record(self.row(depth - 1, false)),
            _ => Type::variant(self.row(depth - 1, true)),
        }
    }

    fn row(&mut self, depth: u32, nonempty: bool) -> Type {
        let mut labels = LABELS.to_vec();
        labels.shuffle(&mut self.rng);
        let tail = if self.gradual && self.rng.gen_ratio(1, 3) {
            Type::Dyn
        } else {
            Type::Empty
        };
        let lo = usize::from(nonempty && tail == Type::Empty);
        let n = self.rng.gen_range(lo..=2);
        let fields: Vec<(&str, Type)> = labels[..n]
            .iter()
            .map(|l| (*l, self.ty(depth)))
            .collect();
        Type::row(fields, tail)
    }

    /// A row with no `l` field, used as the instance of a row variable.
    fn rest_row(&mut self, l: &str) -> Type {
        let r = self.row(1, false);
        let (fs, tail) = crate::rows::fields(&r);
        let kept: Vec<(String, Type)> = fs
            .into_iter()
            .filter(|(m, _)| *m != l)
            .map(|(m, a)| (m.to_string(), a.clone()))
            .collect();
        crate::rows::from_fields(&kept, tail.clone())
    }

    /// Replaces random parts of `a` by `?`; the result is consistent with `a`.
    fn dynify(&mut self, a: &Type) -> Type {
        if self.rng.gen_ratio(1, 4) {
            return Type::Dyn;
        }
        match a {
            Type::Fun(x, y) => Type::fun(self.dynify(x), self.dynify(y)),
            Type::Record(r) => Type::record(self.dynify(r)),
            Type::Variant(r) => Type::variant(self.dynify(r)),
            Type::Ext(l, x, r) => Type::ext(l, self.dynify(x), self.dynify(r)),
            _ => a.clone(),
        }
    }

    /// Like `dynify`, but a record or variant may also lose and reorder
    /// fields, ending in `?`. Casting through the result exercises field
    /// insertion and reordering.
    fn loosen(&mut self, a: &Type) -> Type {
        let row = match a {
            Type::Record(r) | Type::Variant(r) if self.rng.gen() => r,
            _ => return self.dynify(a),
        };
        let (fs, _) = crate::rows::fields(row);
        let mut kept: Vec<(String, Type)> = Vec::new();
        for (l, b) in fs {
            if self.rng.gen_ratio(2, 3) {
                let b = self.dynify(b);
                kept.push((l.to_string(), b));
            }
        }
        kept.shuffle(&mut self.rng);
        let row = crate::rows::from_fields(&kept, Type::Dyn);
        match a {
            Type::Record(_) => Type::record(row),
            _ => Type::variant(row),
        }
    }

    fn with_var<T>(&mut self, x: &str, a: &Type, f: impl FnOnce(&mut Self) -> T) -> T {
        self.ctx.push((x.to_string(), a.clone()));
        let out = f(self);
        self.ctx.pop();
        out
    }

    fn split(&mut self, size: u32, parts: usize) -> Vec<u32> {
        let mut out = vec![0; parts];
        for _ in 0..size {
            let i = self.rng.gen_range(0..parts);
            out[i] += 1;
        }
        out
    }

    fn vars_of(&self, ty: &Type) -> Vec<String> {
        self.ctx
            .iter()
            .filter(|(_, a)| a == ty)
            .map(|(x, _)| x.clone())
            .collect()
    }

    /// A closed-under-context term of exactly type `ty`.
    pub fn term(&mut self, ty: &Type, size: u32) -> Term {
        if size == 0 {
            return self.leaf(ty);
        }
        let w = self.cfg.clone();
        let g = self.gradual;
        let is_base = matches!(ty, Type::Base(_));
        let has_var = !self.vars_of(ty).is_empty();
        let has_dyn_var = g && !self.vars_of(&Type::Dyn).is_empty();
        let mut prods: Vec<(u32, Prod)> = vec![
            (w.app_lam, Prod::AppLam),
            (w.let_record, Prod::LetRecord),
            (w.case, Prod::Case),
            (w.build, Prod::Build),
            (w.row_poly, Prod::RowPolyRecord),
            (w.row_poly, Prod::RowPolyVariant),
            (w.sealing, Prod::Id),
        ];
        if has_var {
            prods.push((w.var, Prod::Var));
        }
        if is_base {
            prods.push((w.prim, Prod::Prim));
        }
        if g {
            prods.push((w.chain, Prod::Chain));
            prods.push((w.blame_chain, Prod::BlameChain));
            if *ty == Type::int() {
                prods.push((w.sealing, Prod::IdInt));
            }
            if has_dyn_var && !ty.is_dyn() {
                prods.push((w.var, Prod::DynVar));
            }
            if ty.is_dyn() {
                prods.push((w.dyn_app, Prod::DynApp));
                prods.push((w.dyn_app, Prod::DynPoly));
            }
        }
        let prod = prods.choose_weighted(&mut self.rng, |p| p.0).unwrap().1;
        let s = size - 1;
        match prod {
            Prod::Var => {
                let xs = self.vars_of(ty);
                Term::var(xs.choose(&mut self.rng).unwrap())
            }
            Prod::DynVar => {
                let xs = self.vars_of(&Type::Dyn);
                let x = xs.choose(&mut self.rng).unwrap().clone();
                Term::ascribe(Term::var(&x), ty.clone())
            }
            Prod::AppLam => {
                let arg_ty = self.ty(1);
                let ann = if g && self.rng.gen_ratio(1, 3) {
                    self.dynify(&arg_ty)
                } else {
                    arg_ty.clone()
                };
                let [s1, s2] = self.split(s, 2)[..] else { unreachable!() };
                let x = self.fresh();
                let body = self.with_var(&x, &ann, |me| me.term(ty, s1));
                let arg = self.term(&arg_ty, s2);
                Term::app(Term::lam(&x, ann, body), arg)
            }
            Prod::LetRecord => {
                let l = *LABELS.choose(&mut self.rng).unwrap();
                let b = self.ty(1);
                let rest = self.rest_row(l);
                let rec = Type::record(Type::ext(l, b.clone(), rest.clone()));
                let [s1, s2] = self.split(s, 2)[..] else { unreachable!() };
                let r = self.term(&rec, s1);
                let (x, y) = (self.fresh(), self.fresh());
                let body = self.with_var(&x, &b, |me| {
                    me.with_var(&y, &Type::record(rest), |me| me.term(ty, s2))
                });
                Term::rlet(l, &x, &y, r, body)
            }
            Prod::Case => {
                let l = *LABELS.choose(&mut self.rng).unwrap();
                let b = self.ty(1);
                let rest = self.rest_row(l);
                let var = Type::variant(Type::ext(l, b.clone(), rest.clone()));
                let [s0, s1, s2] = self.split(s, 3)[..] else { unreachable!() };
                let v = self.term(&var, s0);
                let (x, y) = (self.fresh(), self.fresh());
                let m1 = self.with_var(&x, &b, |me| me.term(ty, s1));
                let m2 = self.with_var(&y, &Type::variant(rest), |me| me.term(ty, s2));
                Term::case(v, l, &x, m1, &y, m2)
            }
            Prod::Prim => self.prim(ty, s),
            Prod::Build => self.build(ty, s),
            Prod::RowPolyRecord => {
                // (Lam X:R. lam r:[l:B; X]. let {l=x; y} = r in M) [rest] R
                let l = *LABELS.choose(&mut self.rng).unwrap();
                let b = self.ty(1);
                let rest = self.rest_row(l);
                let [s1, s2] = self.split(s, 2)[..] else { unreachable!() };
                let (r, x, y) = (self.fresh(), self.fresh(), self.fresh());
                let poly_row = Type::ext(l, b.clone(), Type::var("X"));
                let body = self.with_var(&x, &b, |me| {
                    me.with_var(&y, &Type::record(Type::var("X")), |me| me.term(ty, s1))
                });
                let f = Term::tlam(
                    "X",
                    Kind::R,
                    Term::lam(
                        &r,
                        Type::record(poly_row.clone()),
                        Term::rlet(l, &x, &y, self.through_dyn(Term::var(&r), Type::record(poly_row.clone())), body),
                    ),
                );
                let arg = self.term(&Type::record(Type::ext(l, b, rest.clone())), s2);
                Term::app(Term::tapp(f, rest), arg)
            }
            Prod::RowPolyVariant => {
                // (Lam X:R. lam v:<l:B; X>. case v with <l x -> M1; y -> M2>) [rest] V
                let l = *LABELS.choose(&mut self.rng).unwrap();
                let b = self.ty(1);
                let rest = self.rest_row(l);
                let [s0, s1, s2] = self.split(s, 3)[..] else { unreachable!() };
                let (v, x, y) = (self.fresh(), self.fresh(), self.fresh());
                let m1 = self.with_var(&x, &b, |me| me.term(ty, s1));
                let m2 = self.with_var(&y, &Type::variant(Type::var("X")), |me| me.term(ty, s2));
                let f = Term::tlam(
                    "X",
                    Kind::R,
                    Term::lam(
                        &v,
                        Type::variant(Type::ext(l, b.clone(), Type::var("X"))),
                        Term::case(
                            self.through_dyn(
                                Term::var(&v),
                                Type::variant(Type::ext(l, b.clone(), Type::var("X"))),
                            ),
                            l,
                            &x,
                            m1,
                            &y,
                            m2,
                        ),
                    ),
                );
                let arg = self.term(&Type::variant(Type::ext(l, b, rest.clone())), s0);
                Term::app(Term::tapp(f, rest), arg)
            }
            Prod::Id => {
                let arg = self.term(ty, s);
                let mut id = self.identity(None);
                if g && self.rng.gen_ratio(1, 3) {
                    let poly = Type::forall("X", Kind::T, Type::fun(Type::var("X"), Type::var("X")));
                    id = Term::ascribe(Term::ascribe(id, Type::Dyn), poly);
                }
                Term::app(Term::tapp(id, ty.clone()), arg)
            }
            Prod::IdInt => {
                let b = self.ty(1);
                let arg = self.term(&b, s);
                Term::app(Term::tapp(self.identity(Some(Type::int())), b), arg)
            }
            Prod::Chain => {
                let mid = self.loosen(ty);
                let m = self.term(ty, s);
                Term::ascribe(Term::ascribe(m, mid), ty.clone())
            }
            Prod::BlameChain => {
                let other = self.ty(1);
                let m = self.term(&other, s);
                Term::ascribe(Term::ascribe(m, Type::Dyn), ty.clone())
            }
            Prod::DynApp => {
                // (F : ?) N
                let a = self.ty(1);
                let b = self.ty(1);
                let [s1, s2] = self.split(s, 2)[..] else { unreachable!() };
                let f = self.term(&Type::fun(a.clone(), b), s1);
                let n = self.term(&a, s2);
                Term::app(Term::ascribe(f, Type::Dyn), n)
            }
            Prod::DynPoly => {
                // ((Lam X:T. lam x:X. x) : ?) [B] N
                let b = self.ty(1);
                let n = self.term(&b, s);
                let id = Term::ascribe(self.identity(None), Type::Dyn);
                Term::app(Term::tapp(id, b), n)
            }
        }
    }

    /// In gradual programs, sometimes `((m : ?) : a)` instead of `m`.
    fn through_dyn(&mut self, m: Term, a: Type) -> Term {
        if self.gradual && self.rng.gen_ratio(1, 3) {
            Term::ascribe(Term::ascribe(m, Type::Dyn), a)
        } else {
            m
        }
    }

    /// `Lam X:T. lam x:X. body`, returning `x` at `X` or, when `result` is
    /// given, at that type through `?`.
    fn identity(&mut self, result: Option<Type>) -> Term {
        let x = self.fresh();
        let body = match result {
            Some(r) => Term::ascribe(Term::ascribe(Term::var(&x), Type::Dyn), r),
            None if self.gradual && self.rng.gen() => {
                Term::ascribe(Term::ascribe(Term::var(&x), Type::Dyn), Type::var("X"))
            }
            None => Term::var(&x),
        };
        Term::tlam("X", Kind::T, Term::lam(&x, Type::var("X"), body))
    }

    fn prim(&mut self, ty: &Type, s: u32) -> Term {
        let [s1, s2] = self.split(s, 2)[..] else { unreachable!() };
        let binop = |c: Const, me: &mut Self, a: &Type| {
            let m = me.term(a, s1);
            let n = me.term(a, s2);
            Term::app(Term::app(Term::konst(c), m), n)
        };
        match ty {
            Type::Base(crate::syntax::Base::Int) => binop(Const::Add, self, &Type::int()),
            Type::Base(crate::syntax::Base::Str) => binop(Const::Concat, self, &Type::str()),
            _ if self.rng.gen() => binop(Const::Leq, self, &Type::int()),
            _ => {
                let m = self.term(&Type::bool(), s);
                Term::app(Term::konst(Const::Not), m)
            }
        }
    }

    /// Introduction form for the target's outermost constructor.
    fn build(&mut self, ty: &Type, s: u32) -> Term {
        match ty {
            Type::Fun(a, b) => {
                let x = self.fresh();
                let body = self.with_var(&x, a, |me| me.term(b, s));
                Term::lam(&x, (**a).clone(), body)
            }
            Type::Record(row) => self.record(row, s),
            Type::Variant(row) => {
                let (fs, _) = crate::rows::fields(row);
                let fs: Vec<(String, Type)> =
                    fs.into_iter().map(|(l, a)| (l.to_string(), a.clone())).collect();
                if let Some((l, a)) = fs.first().filter(|_| self.rng.gen_ratio(1, 3)) {
                    // l ^ A M
                    let (_, rest) = crate::rows::split_row(row, l).unwrap();
                    if !fs[1..].is_empty() || rest.is_dyn() || ends_dyn(&rest) {
                        let m = self.term(&Type::variant(rest), s);
                        return Term::embed(l, a.clone(), m);
                    }
                }
                self.inject(row, s)
            }
            Type::Dyn => {
                let a = self.ty(1);
                let m = self.term(&a, s);
                Term::ascribe(m, Type::Dyn)
            }
            _ => self.leaf(ty),
        }
    }

    fn record(&mut self, row: &Type, s: u32) -> Term {
        let (fs, tail) = crate::rows::fields(row);
        let mut fs: Vec<(String, Type)> =
            fs.into_iter().map(|(l, a)| (l.to_string(), a.clone())).collect();
        let open = tail.is_dyn();
        if open && self.rng.gen() {
            let unused: Vec<&str> = LABELS
                .iter()
                .copied()
                .filter(|l| !fs.iter().any(|(m, _)| m == l))
                .collect();
            if let Some(l) = unused.choose(&mut self.rng) {
                let a = self.base();
                fs.push((l.to_string(), a));
            }
        }
        let sizes = self.split(s, fs.len().max(1));
        let mut built = Vec::new();
        for ((l, a), n) in fs.iter().zip(sizes) {
            built.push((l.clone(), self.term(a, n)));
        }
        let m = built
            .into_iter()
            .rev()
            .fold(Term::rempty(), |acc, (l, m)| Term::rextend(&l, m, acc));
        if open {
            Term::ascribe(m, Type::record(row.clone()))
        } else {
            m
        }
    }

    fn inject(&mut self, row: &Type, s: u32) -> Term {
        let (fs, _) = crate::rows::fields(row);
        let (l, a) = match fs.choose(&mut self.rng) {
            Some((l, a)) => (l.to_string(), (*a).clone()),
            None => (LABELS.choose(&mut self.rng).unwrap().to_string(), self.base()),
        };
        let m = self.term(&a, s);
        Term::ascribe(Term::inj(&l, m), Type::variant(row.clone()))
    }

    fn leaf(&mut self, ty: &Type) -> Term {
        let xs = self.vars_of(ty);
        if !xs.is_empty() && self.rng.gen() {
            return Term::var(xs.choose(&mut self.rng).unwrap());
        }
        match ty {
            Type::Base(_) => self.literal(ty),
            Type::Dyn => {
                let b = self.base();
                Term::ascribe(self.literal(&b), Type::Dyn)
            }
            Type::Fun(..) | Type::Record(_) => self.build(ty, 0),
            Type::Variant(row) => self.inject(row, 0),
            other => panic!("generator has no leaf for `{other}`"),
        }
    }
}

fn ends_dyn(row: &Type) -> bool {
    crate::rows::ends_with_dyn(row)
}

/// A closed program accepted by the static checker (`gradual = false`, and
/// then free of `?`) or by the gradual checker.
pub fn gen_well_typed_term(seed: u64, size: u32, gradual: bool) -> Term {
    ProgramGen::new(seed, gradual).program(size).0
}

fn accepts(m: &Term, gradual: bool) -> bool {
    let ctx = Ctx::new();
    if gradual {
        typecheck_gradual(&ctx, m).is_ok()
    } else {
        typecheck_static(&ctx, m).is_ok()
    }
}

fn children(m: &Term) -> Vec<&Term> {
    match &m.kind {
        TermKind::Var(_) | TermKind::Const(_) | TermKind::REmpty => vec![],
        TermKind::Lam(_, _, b) | TermKind::TLam(_, _, b) | TermKind::TApp(b, _) => vec![b],
        TermKind::VInj(_, b) | TermKind::VEmbed(_, _, b) | TermKind::Ascribe(b, _, _) => vec![b],
        TermKind::App(a, b) | TermKind::RExtend(_, a, b) | TermKind::RLet(_, _, _, a, b) => {
            vec![a, b]
        }
        TermKind::VCase(a, _, _, b, _, c) => vec![a, b, c],
    }
}

fn replace_child(m: &Term, i: usize, new: Term) -> Term {
    let mut out = m.clone();
    let slot: &mut Term = match (&mut out.kind, i) {
        (TermKind::Lam(_, _, b), 0)
        | (TermKind::TLam(_, _, b), 0)
        | (TermKind::TApp(b, _), 0)
        | (TermKind::VInj(_, b), 0)
        | (TermKind::VEmbed(_, _, b), 0)
        | (TermKind::Ascribe(b, _, _), 0)
        | (TermKind::App(b, _), 0)
        | (TermKind::RExtend(_, b, _), 0)
        | (TermKind::RLet(_, _, _, b, _), 0)
        | (TermKind::VCase(b, ..), 0) => b,
        (TermKind::App(_, b), 1)
        | (TermKind::RExtend(_, _, b), 1)
        | (TermKind::RLet(_, _, _, _, b), 1)
        | (TermKind::VCase(_, _, _, b, _, _), 1) => b,
        (TermKind::VCase(_, _, _, _, _, b), 2) => b,
        _ => panic!("no child {i}"),
    };
    *slot = new;
    out
}

/// Smaller variants of `m` that still typecheck: each proper subterm, and
/// `m` with one child replaced by one of that child's own subterms.
pub fn shrink(m: &Term, gradual: bool) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    let kids = children(m);
    for k in &kids {
        out.push((*k).clone());
    }
    for (i, k) in kids.iter().enumerate() {
        for g in children(k) {
            out.push(replace_child(m, i, g.clone()));
        }
    }
    out.retain(|c| accepts(c, gradual));
    out
}

/// Greedily shrinks `m` while `fails` keeps holding.
pub fn minimize(m: &Term, gradual: bool, fails: impl Fn(&Term) -> bool) -> Term {
    let mut cur = m.clone();
    'outer: for _ in 0..200 {
        for c in shrink(&cur, gradual) {
            if fails(&c) {
                cur = c;
                continue 'outer;
            }
        }
        break;
    }
    cur
}

fn count_nodes(m: &Term) -> usize {
    1 + children(m).into_iter().map(count_nodes).sum::<usize>()
}

/// Damages one random node: replaces it with a constant, or changes a
/// lambda's annotation. The result may or may not still typecheck.
pub fn mutate(m: &Term, rng: &mut impl Rng) -> Term {
    let target = rng.gen_range(0..count_nodes(m));
    let konst = match rng.gen_range(0..3) {
        0 => Term::int(1),
        1 => Term::bool(false),
        _ => Term::str("z"),
    };
    let ann = [Type::int(), Type::bool(), Type::fun(Type::int(), Type::int())]
        .choose(rng)
        .unwrap()
        .clone();
    fn go(m: &Term, target: usize, seen: &mut usize, konst: &Term, ann: &Type) -> Term {
        let here = *seen;
        *seen += 1;
        if here == target {
            return match &m.kind {
                TermKind::Lam(x, _, b) => Term::lam(x, ann.clone(), (**b).clone()),
                _ => konst.clone(),
            };
        }
        let mut out = m.clone();
        for (i, k) in children(m).into_iter().enumerate() {
            let k2 = go(k, target, seen, konst, ann);
            out = replace_child(&out, i, k2);
        }
        out
    }
    go(m, target, &mut 0, &konst, &ann)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_zero_is_constant() {
        for seed in 0..20 {
            let m = gen_well_typed_term(seed, 0, true);
            assert!(matches!(m.kind, TermKind::Const(_)), "{m}");
        }
    }

    #[test]
    fn generated_programs_typecheck() {
        for gradual in [false, true] {
            for seed in 0..300 {
                let (m, ty) = ProgramGen::new(seed, gradual).program(14);
                let got = if gradual {
                    typecheck_gradual(&Ctx::new(), &m)
                } else {
                    typecheck_static(&Ctx::new(), &m)
                };
                match got {
                    Ok(a) => assert!(crate::subst::alpha_eq(&a, &ty), "{m}: {a} vs {ty}"),
                    Err(e) => panic!("seed {seed}: {m}\n{e}"),
                }
            }
        }
    }

    #[test]
    fn static_programs_are_dyn_free() {
        for seed in 0..100 {
            let m = gen_well_typed_term(seed, 14, false);
            assert!(!m.to_string().contains('?'), "{m}");
        }
    }

    #[test]
    fn shrinking_keeps_types() {
        let m = gen_well_typed_term(7, 14, true);
        for c in shrink(&m, true) {
            assert!(accepts(&c, true));
        }
    }
}
