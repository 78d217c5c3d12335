use std::collections::{BTreeMap, BTreeSet};

use super::{param_of, symbol_of, BuiltinExpr, MacroDef, MacroError, MacroRegistry, Pattern, PredRef};
use crate::fresh::FreshNames;
use crate::syntax::{print_arg, rename_free_pred, subst, Arg, Formula, PrintOptions, Symbol, Term};

/// Parameter bindings in effect while a definition is instantiated.
pub type Env = BTreeMap<Symbol, Arg>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpandOptions {
    pub max_depth: usize,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions { max_depth: super::DEFAULT_MAX_DEPTH }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltinValue {
    Renamed(Formula, Symbol),
    Arity(usize),
    Formula(Formula),
    Symbol(Symbol),
}

impl BuiltinValue {
    fn into_args(self) -> Vec<Arg> {
        match self {
            BuiltinValue::Renamed(f, s) => vec![Arg::Formula(f), sym_arg(s)],
            BuiltinValue::Arity(n) => vec![sym_arg(Symbol::new(n.to_string()))],
            BuiltinValue::Formula(f) => vec![Arg::Formula(f)],
            BuiltinValue::Symbol(s) => vec![sym_arg(s)],
        }
    }
}

fn sym_arg(s: Symbol) -> Arg {
    Arg::Term(Term::App(s, Vec::new()))
}

/// Expand every macro call in `f` with the default depth bound.
pub fn expand(reg: &MacroRegistry, f: &Formula, fresh: &mut FreshNames) -> Result<Formula, MacroError> {
    expand_with(reg, f, fresh, ExpandOptions::default())
}

pub fn expand_with(
    reg: &MacroRegistry,
    f: &Formula,
    fresh: &mut FreshNames,
    opts: ExpandOptions,
) -> Result<Formula, MacroError> {
    fresh.reserve_all(f.symbols());
    fresh.reserve_all(reg.symbols());
    let mut ex = Expander { reg, fresh, opts };
    ex.formula(f, 0)
}

/// Evaluate a where-binding builtin under `env`.
pub fn builtin_eval(
    reg: &MacroRegistry,
    e: &BuiltinExpr,
    env: &Env,
    fresh: &mut FreshNames,
) -> Result<BuiltinValue, MacroError> {
    fresh.reserve_all(reg.symbols());
    let mut ex = Expander { reg, fresh, opts: ExpandOptions::default() };
    ex.builtin(e, env, 0)
}

/// Beta-reduce `lambda([v..], body)` applied to `args`.
pub fn apply_lambda(l: &Formula, args: &[Term]) -> Result<Formula, MacroError> {
    let Formula::Lambda(params, body) = l else {
        return Err(MacroError::TypeMismatch {
            param: Symbol::new("lambda"),
            value: l.to_string(),
            role: "a lambda",
        });
    };
    if params.len() != args.len() {
        return Err(MacroError::LambdaArity { expected: params.len(), got: args.len() });
    }
    let sub: BTreeMap<Symbol, Term> = params.iter().cloned().zip(args.iter().cloned()).collect();
    Ok(subst(body, &sub))
}

struct Expander<'a> {
    reg: &'a MacroRegistry,
    fresh: &'a mut FreshNames,
    opts: ExpandOptions,
}

impl Expander<'_> {
    fn formula(&mut self, f: &Formula, depth: usize) -> Result<Formula, MacroError> {
        match f {
            Formula::Atom(p, _) if p.is_param() => Err(MacroError::UnboundParam(p.clone())),
            Formula::Atom(n, args) if self.reg.contains(n, args.len()) => {
                let args: Vec<Arg> = args.iter().cloned().map(Arg::Term).collect();
                self.call(n, &args, depth)
            }
            Formula::MacroCall(n, args) => self.call(n, args, depth),
            Formula::Lambda(..) => Err(MacroError::LambdaResidue),
            _ => {
                if let Some(p) = param_in_terms(f) {
                    return Err(MacroError::UnboundParam(p));
                }
                f.try_map_children(&mut |c| self.formula(c, depth))
            }
        }
    }

    fn call(&mut self, name: &Symbol, args: &[Arg], depth: usize) -> Result<Formula, MacroError> {
        if depth >= self.opts.max_depth {
            return Err(MacroError::DepthExceeded(self.opts.max_depth));
        }
        let reg = self.reg;
        let mut seen = false;
        for def in reg.lookup(name, args.len()) {
            seen = true;
            let mut env = Env::new();
            if def.params.iter().zip(args).all(|(p, a)| match_pattern(p, a, &mut env)) {
                let body = self.instantiate_def(def, env, depth)?;
                return self.formula(&body, depth + 1);
            }
        }
        if seen {
            Err(MacroError::NoMatch { name: name.clone(), arity: args.len() })
        } else {
            Err(MacroError::Unknown { name: name.clone(), arity: args.len() })
        }
    }

    fn instantiate_def(&mut self, def: &MacroDef, mut env: Env, depth: usize) -> Result<Formula, MacroError> {
        for b in &def.where_bindings {
            let vals = self.builtin(&b.expr, &env, depth + 1)?.into_args();
            for (t, v) in b.targets.iter().zip(vals) {
                env.insert(t.clone(), v);
            }
        }
        for p in def.auto_fresh_params() {
            let base = p.as_str().trim_start_matches('_').to_ascii_lowercase();
            let s = self.fresh.fresh(if base.is_empty() { "c" } else { &base });
            env.insert(p, sym_arg(s));
        }
        inst_formula(&def.body, &env)
    }

    fn arg_formula(&mut self, a: &Arg, env: &Env, depth: usize) -> Result<Formula, MacroError> {
        let a = inst_arg(a, env)?;
        let f = a.to_formula().ok_or_else(|| MacroError::Builtin {
            builtin: "formula argument",
            message: format!("`{}` is not a formula", show(&a)),
        })?;
        self.formula(&f, depth)
    }

    fn builtin(&mut self, e: &BuiltinExpr, env: &Env, depth: usize) -> Result<BuiltinValue, MacroError> {
        let fail = |message: String| MacroError::Builtin { builtin: e.name(), message };
        match e {
            BuiltinExpr::RenameFreePredicate { formula, pred } => {
                let f = self.arg_formula(formula, env, depth)?;
                let p = inst_symbol(pred, env).ok_or_else(|| fail(format!("`{}` is not a predicate", show(pred))))?;
                self.fresh.reserve_all(f.symbols());
                let q = self.fresh.fresh(&format!("{p}_p"));
                Ok(BuiltinValue::Renamed(rename_free_pred(&f, &p, &q), q))
            }
            BuiltinExpr::Arity { pred, formula } => {
                let f = self.arg_formula(formula, env, depth)?;
                let p = inst_symbol(pred, env).ok_or_else(|| fail(format!("`{}` is not a predicate", show(pred))))?;
                let mut arities = BTreeSet::new();
                free_pred_arities(&f, &p, &mut Vec::new(), &mut arities);
                match arities.len() {
                    0 => Err(fail(format!("predicate `{p}` does not occur in `{f}`"))),
                    1 => Ok(BuiltinValue::Arity(arities.into_iter().next().unwrap())),
                    _ => Err(fail(format!("predicate `{p}` occurs with arities {arities:?}"))),
                }
            }
            BuiltinExpr::Implications { from, to } => {
                if from.len() != to.len() {
                    return Err(fail(format!("lists of length {} and {}", from.len(), to.len())));
                }
                let mut conj = Vec::new();
                for (a, b) in from.iter().zip(to) {
                    let (p, n) = resolve_pred_ref(a, env).map_err(fail)?;
                    let (q, m) = resolve_pred_ref(b, env).map_err(fail)?;
                    if n != m {
                        return Err(fail(format!("`{p}/{n}` and `{q}/{m}` differ in arity")));
                    }
                    let vars = standard_vars(n);
                    let ts: Vec<Term> = vars.iter().cloned().map(Term::Var).collect();
                    conj.push(Formula::forall(
                        vars,
                        Formula::implies(Formula::Atom(p, ts.clone()), Formula::Atom(q, ts)),
                    ));
                }
                Ok(BuiltinValue::Formula(Formula::and(conj)))
            }
            BuiltinExpr::FreshSymbol(base) => Ok(BuiltinValue::Symbol(self.fresh.fresh(base))),
        }
    }
}

fn show(a: &Arg) -> String {
    print_arg(a, &PrintOptions::default())
}

/// `x`, `y`, `z` for up to three places, else `x1`..`xn`.
pub(crate) fn standard_vars(n: usize) -> Vec<Symbol> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| Symbol::new(*s)).collect()
    } else {
        (1..=n).map(|i| Symbol::new(format!("x{i}"))).collect()
    }
}

fn resolve_pred_ref(r: &PredRef, env: &Env) -> Result<(Symbol, usize), String> {
    let p = if r.pred.is_param() {
        env.get(&r.pred).and_then(symbol_of).ok_or_else(|| format!("`{}` is not bound to a predicate", r.pred))?
    } else {
        r.pred.clone()
    };
    let a = match &r.arity {
        None => return Err(format!("arity of `{p}` not given")),
        Some(a) if a.is_param() => env.get(a).and_then(symbol_of).ok_or_else(|| format!("`{a}` is unbound"))?,
        Some(a) => a.clone(),
    };
    let n = a.as_str().parse::<usize>().map_err(|_| format!("`{a}` is not an arity"))?;
    Ok((p, n))
}

fn free_pred_arities(f: &Formula, p: &Symbol, bound: &mut Vec<Symbol>, out: &mut BTreeSet<usize>) {
    match f {
        Formula::Atom(q, args) if q == p && !bound.contains(p) => {
            out.insert(args.len());
        }
        Formula::ForAll2(ps, b) | Formula::Exists2(ps, b) => {
            let d = bound.len();
            bound.extend(ps.iter().cloned());
            free_pred_arities(b, p, bound, out);
            bound.truncate(d);
        }
        _ => {
            for c in f.children() {
                free_pred_arities(c, p, bound, out);
            }
        }
    }
}

/// Rename free occurrences of predicate `p` to `q`.
fn param_in_terms(f: &Formula) -> Option<Symbol> {
    fn term(t: &Term) -> Option<Symbol> {
        match t {
            Term::Var(_) => None,
            Term::App(s, _) if s.is_param() => Some(s.clone()),
            Term::App(_, args) => args.iter().find_map(term),
        }
    }
    match f {
        Formula::Atom(_, args) => args.iter().find_map(term),
        Formula::Eq(a, b) => term(a).or_else(|| term(b)),
        _ => None,
    }
}

fn normalize(a: &Arg) -> Arg {
    match a {
        Arg::Formula(Formula::Atom(s, args)) => Arg::Term(Term::App(s.clone(), args.clone())),
        Arg::List(items) => Arg::List(items.iter().map(normalize).collect()),
        Arg::Cons(h, t) => Arg::Cons(Box::new(normalize(h)), Box::new(normalize(t))),
        other => other.clone(),
    }
}

fn match_pattern(p: &Pattern, a: &Arg, env: &mut Env) -> bool {
    match p {
        Pattern::Param(s) => bind(s, a, env),
        Pattern::Structure(pat) => match_arg(pat, a, env),
    }
}

fn bind(s: &Symbol, a: &Arg, env: &mut Env) -> bool {
    match env.get(s) {
        Some(prev) => normalize(prev) == normalize(a),
        None => {
            env.insert(s.clone(), a.clone());
            true
        }
    }
}

fn match_arg(pat: &Arg, a: &Arg, env: &mut Env) -> bool {
    if let Some(s) = param_of(pat) {
        return bind(&s, a, env);
    }
    match (normalize(pat), normalize(a)) {
        (Arg::Cons(h, t), Arg::List(items)) => {
            !items.is_empty()
                && match_arg(&h, &items[0], env)
                && match_arg(&t, &Arg::List(items[1..].to_vec()), env)
        }
        (Arg::List(ps), Arg::List(items)) => {
            ps.len() == items.len() && ps.iter().zip(&items).all(|(p, i)| match_arg(p, i, env))
        }
        (Arg::Term(Term::App(f, ps)), Arg::Term(Term::App(g, ts))) => {
            f == g
                && ps.len() == ts.len()
                && ps.iter().zip(ts).all(|(p, t)| match_arg(&Arg::Term(p.clone()), &Arg::Term(t), env))
        }
        (p, a) => p == a,
    }
}

fn mismatch(param: &Symbol, value: &Arg, role: &'static str) -> MacroError {
    MacroError::TypeMismatch { param: param.clone(), value: show(value), role }
}

fn lookup<'e>(p: &Symbol, env: &'e Env) -> Result<&'e Arg, MacroError> {
    env.get(p).ok_or_else(|| MacroError::UnboundParam(p.clone()))
}

fn inst_symbol(a: &Arg, env: &Env) -> Option<Symbol> {
    match param_of(a) {
        Some(p) => env.get(&p).and_then(symbol_of),
        None => symbol_of(a),
    }
}

fn inst_binders(vs: &[Symbol], env: &Env) -> Result<Vec<Symbol>, MacroError> {
    let mut out = Vec::new();
    for v in vs {
        if !v.is_param() {
            out.push(v.clone());
            continue;
        }
        let a = lookup(v, env)?;
        match a {
            Arg::List(items) => {
                for i in items {
                    out.push(symbol_of(i).ok_or_else(|| mismatch(v, a, "a list of symbols"))?);
                }
            }
            _ => out.push(symbol_of(a).ok_or_else(|| mismatch(v, a, "a symbol"))?),
        }
    }
    Ok(out)
}

fn inst_term(t: &Term, env: &Env) -> Result<Term, MacroError> {
    match t {
        Term::Var(v) if v.is_param() => {
            let a = lookup(v, env)?;
            Ok(Term::Var(symbol_of(a).ok_or_else(|| mismatch(v, a, "a variable"))?))
        }
        Term::Var(_) => Ok(t.clone()),
        Term::App(s, args) => {
            let args = args.iter().map(|a| inst_term(a, env)).collect::<Result<Vec<_>, _>>()?;
            if !s.is_param() {
                return Ok(Term::App(s.clone(), args));
            }
            let a = lookup(s, env)?;
            if args.is_empty() {
                a.to_term().ok_or_else(|| mismatch(s, a, "a term"))
            } else {
                Ok(Term::App(symbol_of(a).ok_or_else(|| mismatch(s, a, "a function symbol"))?, args))
            }
        }
    }
}

fn inst_arg(a: &Arg, env: &Env) -> Result<Arg, MacroError> {
    if let Some(p) = param_of(a) {
        return lookup(&p, env).cloned();
    }
    Ok(match a {
        Arg::Term(t) => Arg::Term(inst_term(t, env)?),
        Arg::Formula(f) => Arg::Formula(inst_formula(f, env)?),
        Arg::List(items) => Arg::List(items.iter().map(|i| inst_arg(i, env)).collect::<Result<_, _>>()?),
        Arg::Cons(h, t) => {
            let h = inst_arg(h, env)?;
            match inst_arg(t, env)? {
                Arg::List(mut items) => {
                    items.insert(0, h);
                    Arg::List(items)
                }
                t => Arg::Cons(Box::new(h), Box::new(t)),
            }
        }
    })
}

fn inst_formula(f: &Formula, env: &Env) -> Result<Formula, MacroError> {
    match f {
        Formula::Atom(p, args) if p.is_param() => {
            let a = lookup(p, env)?;
            let args = args.iter().map(|t| inst_term(t, env)).collect::<Result<Vec<_>, _>>()?;
            match a {
                Arg::Formula(l @ Formula::Lambda(..)) => apply_lambda(l, &args),
                _ if args.is_empty() => a.to_formula().ok_or_else(|| mismatch(p, a, "a formula")),
                _ => Ok(Formula::Atom(symbol_of(a).ok_or_else(|| mismatch(p, a, "a predicate"))?, args)),
            }
        }
        Formula::Atom(n, args) => {
            let margs = args
                .iter()
                .map(|t| inst_arg(&Arg::Term(t.clone()), env))
                .collect::<Result<Vec<_>, _>>()?;
            let terms: Option<Vec<Term>> = margs
                .iter()
                .map(|a| match a {
                    Arg::Term(t) => Some(t.clone()),
                    _ => None,
                })
                .collect();
            Ok(match terms {
                Some(ts) => Formula::Atom(n.clone(), ts),
                None => Formula::MacroCall(n.clone(), margs),
            })
        }
        Formula::Eq(a, b) => Ok(Formula::Eq(inst_term(a, env)?, inst_term(b, env)?)),
        Formula::ForAll(vs, b) => Ok(Formula::ForAll(inst_binders(vs, env)?, Box::new(inst_formula(b, env)?))),
        Formula::Exists(vs, b) => Ok(Formula::Exists(inst_binders(vs, env)?, Box::new(inst_formula(b, env)?))),
        Formula::ForAll2(vs, b) => Ok(Formula::ForAll2(inst_binders(vs, env)?, Box::new(inst_formula(b, env)?))),
        Formula::Exists2(vs, b) => Ok(Formula::Exists2(inst_binders(vs, env)?, Box::new(inst_formula(b, env)?))),
        Formula::Lambda(vs, b) => Ok(Formula::Lambda(inst_binders(vs, env)?, Box::new(inst_formula(b, env)?))),
        Formula::MacroCall(n, args) => {
            let n = if n.is_param() {
                let a = lookup(n, env)?;
                symbol_of(a).ok_or_else(|| mismatch(n, a, "a macro name"))?
            } else {
                n.clone()
            };
            Ok(Formula::MacroCall(n, args.iter().map(|a| inst_arg(a, env)).collect::<Result<_, _>>()?))
        }
        _ => f.try_map_children(&mut |c| inst_formula(c, env)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::macros::parse_macro_def;
    use crate::syntax::parse_formula;

    const KB1: &str = "kb1 :: (sprinkler_was_on -> wet(grass)), (rained_last_night -> wet(grass)), (wet(grass) -> wet(shoes))";
    const CIRC: &str = "circ(P, F) :: F, ~ex2(P_p, (F_p, T1, ~T2)) where \
        [F_p, P_p] := rename_free_predicate(F, P), A := arity(P, F), \
        T1 := implications([P_p/A], [P/A]), T2 := implications([P/A], [P_p/A])";

    fn registry(defs: &[&str]) -> MacroRegistry {
        let mut reg = MacroRegistry::new();
        for d in defs {
            reg.define(parse_macro_def(d).unwrap()).unwrap();
        }
        reg
    }

    fn exp(reg: &MacroRegistry, s: &str) -> Result<Formula, MacroError> {
        expand(reg, &parse_formula(s).unwrap(), &mut FreshNames::new())
    }

    #[test]
    fn label_macro() {
        let reg = registry(&[KB1]);
        let f = exp(&reg, "kb1, rained_last_night -> wet(shoes)").unwrap();
        let Formula::Implies(a, _) = &f else { panic!() };
        let Formula::And(items) = a.as_ref() else { panic!() };
        assert_eq!(items[0], parse_formula(KB1.split(" :: ").nth(1).unwrap()).unwrap());
    }

    #[test]
    fn circ_instance() {
        let reg = registry(&[CIRC]);
        let got = exp(&reg, "circ(p, p(a))").unwrap();
        let want = parse_formula("p(a), ~ex2(p_p, (p_p(a), all(x, p_p(x) -> p(x)), ~all(x, p(x) -> p_p(x))))").unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn fresh_rename_avoids_existing() {
        let reg = registry(&[CIRC]);
        let got = exp(&reg, "circ(p, (p(a), p_p))").unwrap();
        assert!(got.symbols().contains(&Symbol::new("p_p1")));
    }

    #[test]
    fn explanation_with_list() {
        let reg = registry(&[KB1, "explanation(Kb, Na, Ob) :: all2(Na, (Kb -> Ob))"]);
        let got = exp(&reg, "explanation(kb1, [wet], wet(shoes))").unwrap();
        let Formula::ForAll2(ps, body) = &got else { panic!("{got}") };
        assert_eq!(ps, &vec![Symbol::new("wet")]);
        assert!(matches!(body.as_ref(), Formula::Implies(..)));
    }

    #[test]
    fn lambda_in_predicate_position() {
        let reg = registry(&[
            "col2(E) :: ex2([r,g], (all(x, (r(x) ; g(x))), all([x,y], (E(x,y) -> (~((r(x), r(y))), ~((g(x), g(y))))))))",
        ]);
        let got = exp(&reg, "col2(lambda([u,v],((u=1,v=2);(u=2,v=3))))").unwrap();
        let want = parse_formula(
            "ex2([r,g], (all(x, (r(x) ; g(x))), all([x,y], (((x=1,y=2);(x=2,y=3)) -> (~((r(x), r(y))), ~((g(x), g(y))))))))",
        )
        .unwrap();
        assert_eq!(got, want);
        let plain = exp(&reg, "col2(e)").unwrap();
        assert!(plain.symbols().contains(&Symbol::new("e")));
    }

    #[test]
    fn beta_reduction_avoids_capture() {
        let l = parse_formula("lambda([u], ex(v, p(u,v)))").unwrap();
        let got = apply_lambda(&l, &[Term::Var(Symbol::new("v"))]).unwrap();
        let want = Formula::exists(
            vec![Symbol::new("v1")],
            Formula::atom("p", vec![Term::var("v"), Term::var("v1")]),
        );
        assert_eq!(got, want);
        assert!(matches!(apply_lambda(&l, &[]), Err(MacroError::LambdaArity { expected: 1, got: 0 })));
    }

    #[test]
    fn structural_recursion() {
        let reg = registry(&["conj([]) :: true", "conj([X|Xs]) :: X, conj(Xs)"]);
        let got = exp(&reg, "conj([p, q(a), r])").unwrap();
        assert_eq!(got, parse_formula("p, (q(a), (r, true))").unwrap());
    }

    #[test]
    fn runaway_recursion_hits_bound() {
        let reg = registry(&["loop(X) :: loop(f(X))"]);
        let e = expand_with(&reg, &parse_formula("loop(a)").unwrap(), &mut FreshNames::new(), ExpandOptions { max_depth: 20 });
        assert_eq!(e.unwrap_err(), MacroError::DepthExceeded(20));
    }

    #[test]
    fn errors() {
        let reg = registry(&["only(a) :: p"]);
        assert!(matches!(exp(&reg, "only(b)"), Err(MacroError::NoMatch { .. })));
        assert!(matches!(exp(&reg, "other([a])"), Err(MacroError::Unknown { .. })));
        let reg = registry(&[CIRC]);
        assert!(matches!(exp(&reg, "circ(q, p(a))"), Err(MacroError::Builtin { builtin: "arity", .. })));
    }

    #[test]
    fn auto_fresh_symbol() {
        let reg = registry(&["m :: ex2(Q, Q(a))"]);
        assert_eq!(exp(&reg, "m, q").unwrap(), parse_formula("ex2(q1, q1(a)), q").unwrap());
    }

    #[test]
    fn idempotent() {
        let reg = registry(&[KB1, CIRC]);
        let mut fresh = FreshNames::new();
        let once = expand(&reg, &parse_formula("circ(wet, kb1)").unwrap(), &mut fresh).unwrap();
        assert_eq!(expand(&reg, &once, &mut fresh).unwrap(), once);
    }

    #[test]
    fn builtins_direct() {
        let reg = MacroRegistry::new();
        let mut fresh = FreshNames::new();
        let mut env = Env::new();
        env.insert(Symbol::new("F"), Arg::Formula(parse_formula("p(a)").unwrap()));
        env.insert(Symbol::new("P"), sym_arg(Symbol::new("p")));
        let f = Arg::Term(Term::App(Symbol::new("F"), vec![]));
        let p = Arg::Term(Term::App(Symbol::new("P"), vec![]));
        let ar = builtin_eval(&reg, &BuiltinExpr::Arity { pred: p.clone(), formula: f.clone() }, &env, &mut fresh);
        assert_eq!(ar.unwrap(), BuiltinValue::Arity(1));
        let imp = BuiltinExpr::Implications {
            from: vec![PredRef { pred: Symbol::new("q"), arity: Some(Symbol::new("1")) }],
            to: vec![PredRef { pred: Symbol::new("P"), arity: Some(Symbol::new("1")) }],
        };
        assert_eq!(
            builtin_eval(&reg, &imp, &env, &mut fresh).unwrap(),
            BuiltinValue::Formula(parse_formula("all(x, q(x) -> p(x))").unwrap())
        );
        fresh.reserve(Symbol::new("q"));
        let r = builtin_eval(&reg, &BuiltinExpr::RenameFreePredicate { formula: f, pred: p }, &env, &mut fresh);
        assert_eq!(r.unwrap(), BuiltinValue::Renamed(parse_formula("p_p(a)").unwrap(), Symbol::new("p_p")));
    }
}
