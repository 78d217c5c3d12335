use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::dpll::{dpll_budget, SatResult};
use super::{clauses_of, universal_closure};
use crate::fresh::FreshNames;
use crate::syntax::{signature_of, Formula, Symbol, Term};
use crate::transform::{Clause, TransformError};

/// A finite interpretation over the domain `0..size`. Tables are total
/// for every symbol they mention.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Model {
    pub size: usize,
    pub predicates: BTreeMap<(Symbol, Vec<usize>), bool>,
    pub functions: BTreeMap<(Symbol, Vec<usize>), usize>,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "domain {{")?;
        for i in 0..self.size {
            write!(f, "{}{i}", if i > 0 { "," } else { "" })?;
        }
        write!(f, "}}")?;
        let tuple = |args: &[usize]| -> String {
            if args.is_empty() {
                String::new()
            } else {
                format!("({})", args.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
            }
        };
        for ((s, args), v) in &self.functions {
            write!(f, "; {s}{} = {v}", tuple(args))?;
        }
        let true_atoms: Vec<String> =
            self.predicates.iter().filter(|(_, v)| **v).map(|((p, args), _)| format!("{p}{}", tuple(args))).collect();
        write!(f, "; true: {{{}}}", true_atoms.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("evaluation budget exhausted")]
    Budget,
    #[error("formula still contains macro calls or lambdas")]
    Unexpanded,
    #[error("symbol `{0}` is not interpreted by the model")]
    Uninterpreted(Symbol),
}

/// Truth value of `f` in `m`, free individual variables read universally.
/// Second-order quantifiers are evaluated by enumerating relations, which
/// counts against an evaluation budget of 10^7 atom lookups.
pub fn eval_formula(m: &Model, f: &Formula) -> Result<bool, EvalError> {
    let mut budget = 10_000_000;
    eval_formula_budget(m, f, &mut budget)
}

pub fn eval_formula_budget(m: &Model, f: &Formula, budget: &mut u64) -> Result<bool, EvalError> {
    let mut ev = Evaluator { m, vars: BTreeMap::new(), rels: BTreeMap::new(), budget };
    ev.eval(&universal_closure(f))
}

struct Evaluator<'a, 'b> {
    m: &'a Model,
    vars: BTreeMap<Symbol, usize>,
    rels: BTreeMap<Symbol, (usize, Vec<bool>)>,
    budget: &'b mut u64,
}

fn tuple_index(args: &[usize], n: usize) -> usize {
    args.iter().fold(0, |acc, a| acc * n + a)
}

/// Arity with which `p` is used in `f`, if it occurs.
fn arity_in(f: &Formula, p: &Symbol) -> Option<usize> {
    match f {
        Formula::Atom(q, args) if q == p => Some(args.len()),
        _ => f.children().into_iter().find_map(|c| arity_in(c, p)),
    }
}

impl Evaluator<'_, '_> {
    fn term(&self, t: &Term) -> Result<usize, EvalError> {
        match t {
            Term::Var(v) => self.vars.get(v).copied().ok_or_else(|| EvalError::Uninterpreted(v.clone())),
            Term::App(f, args) => {
                let vals = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                self.m.functions.get(&(f.clone(), vals)).copied().ok_or_else(|| EvalError::Uninterpreted(f.clone()))
            }
        }
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        if *self.budget == 0 {
            return Err(EvalError::Budget);
        }
        *self.budget -= 1;
        Ok(())
    }

    fn quantify(&mut self, vs: &[Symbol], body: &Formula, universal: bool) -> Result<bool, EvalError> {
        let Some((v, rest)) = vs.split_first() else {
            return self.eval(body);
        };
        let saved = self.vars.get(v).copied();
        let mut result = universal;
        for d in 0..self.m.size {
            self.vars.insert(v.clone(), d);
            let r = self.quantify(rest, body, universal);
            match r {
                Ok(b) if b != universal => {
                    result = b;
                    break;
                }
                Ok(_) => {}
                Err(e) => {
                    self.restore_var(v, saved);
                    return Err(e);
                }
            }
        }
        self.restore_var(v, saved);
        Ok(result)
    }

    fn restore_var(&mut self, v: &Symbol, saved: Option<usize>) {
        match saved {
            Some(d) => self.vars.insert(v.clone(), d),
            None => self.vars.remove(v),
        };
    }

    fn quantify2(&mut self, ps: &[Symbol], body: &Formula, universal: bool) -> Result<bool, EvalError> {
        let Some((p, rest)) = ps.split_first() else {
            return self.eval(body);
        };
        let k = arity_in(body, p).unwrap_or(0);
        let cells = self.m.size.pow(k as u32);
        if cells >= 24 {
            return Err(EvalError::Budget);
        }
        let saved = self.rels.remove(p);
        let mut result = Ok(universal);
        for mask in 0u64..1 << cells {
            let table = (0..cells).map(|i| mask >> i & 1 == 1).collect();
            self.rels.insert(p.clone(), (k, table));
            match self.quantify2(rest, body, universal) {
                Ok(b) if b != universal => {
                    result = Ok(b);
                    break;
                }
                Ok(_) => {}
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
        }
        self.rels.remove(p);
        if let Some(s) = saved {
            self.rels.insert(p.clone(), s);
        }
        result
    }

    fn eval(&mut self, f: &Formula) -> Result<bool, EvalError> {
        match f {
            Formula::Atom(p, args) => {
                self.tick()?;
                let vals = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                if let Some((_, table)) = self.rels.get(p) {
                    return Ok(table[tuple_index(&vals, self.m.size)]);
                }
                self.m.predicates.get(&(p.clone(), vals)).copied().ok_or_else(|| EvalError::Uninterpreted(p.clone()))
            }
            Formula::Eq(a, b) => {
                self.tick()?;
                Ok(self.term(a)? == self.term(b)?)
            }
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            Formula::Not(a) => Ok(!self.eval(a)?),
            Formula::And(fs) => {
                for g in fs {
                    if !self.eval(g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Or(fs) => {
                for g in fs {
                    if self.eval(g)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Implies(a, b) => Ok(!self.eval(a)? || self.eval(b)?),
            Formula::Iff(a, b) => Ok(self.eval(a)? == self.eval(b)?),
            Formula::ForAll(vs, b) => self.quantify(vs, b, true),
            Formula::Exists(vs, b) => self.quantify(vs, b, false),
            Formula::ForAll2(ps, b) => self.quantify2(ps, b, true),
            Formula::Exists2(ps, b) => self.quantify2(ps, b, false),
            Formula::Lambda(..) | Formula::MacroCall(..) => Err(EvalError::Unexpanded),
        }
    }
}

/// Limits for the model search at each domain size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelBudget {
    pub max_ground_clauses: usize,
    pub max_decisions: u64,
}

impl Default for ModelBudget {
    fn default() -> Self {
        ModelBudget { max_ground_clauses: 400_000, max_decisions: 100_000 }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum AtomKey {
    Pred(Symbol, Vec<usize>),
    Graph(Symbol, Vec<usize>, usize),
}

/// A clause with every non-variable subterm named by a variable.
struct Flat {
    nvars: usize,
    preds: Vec<(bool, Symbol, Vec<usize>)>,
    eqs: Vec<(bool, usize, usize)>,
    /// `f(args) = result`, occurring negatively.
    graphs: Vec<(Symbol, Vec<usize>, usize)>,
}

fn flatten(c: &Clause) -> Flat {
    let mut vars: BTreeMap<Symbol, usize> = BTreeMap::new();
    let mut cache: BTreeMap<Term, usize> = BTreeMap::new();
    let mut flat = Flat { nvars: 0, preds: vec![], eqs: vec![], graphs: vec![] };
    fn name(t: &Term, vars: &mut BTreeMap<Symbol, usize>, cache: &mut BTreeMap<Term, usize>, flat: &mut Flat) -> usize {
        match t {
            Term::Var(v) => *vars.entry(v.clone()).or_insert_with(|| {
                flat.nvars += 1;
                flat.nvars - 1
            }),
            Term::App(f, args) => {
                if let Some(&i) = cache.get(t) {
                    return i;
                }
                let a: Vec<usize> = args.iter().map(|x| name(x, vars, cache, flat)).collect();
                let r = flat.nvars;
                flat.nvars += 1;
                flat.graphs.push((f.clone(), a, r));
                cache.insert(t.clone(), r);
                r
            }
        }
    }
    for l in &c.literals {
        let args: Vec<usize> = l.args.iter().map(|t| name(t, &mut vars, &mut cache, &mut flat)).collect();
        if l.is_eq() {
            flat.eqs.push((l.positive, args[0], args[1]));
        } else {
            flat.preds.push((l.positive, l.pred.clone(), args));
        }
    }
    flat
}

struct Grounder {
    atoms: HashMap<AtomKey, i32>,
    clauses: Vec<Vec<i32>>,
}

impl Grounder {
    fn atom(&mut self, k: AtomKey) -> i32 {
        let n = self.atoms.len() as i32 + 1;
        *self.atoms.entry(k).or_insert(n)
    }
}

fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(k as u32)).map(move |mut i| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = i % n;
            i /= n;
        }
        t
    })
}

/// Search for a model of `f` with domain sizes `1..=max_size` by
/// grounding its clausal form and running DPLL. Every returned model is
/// checked against `f` by direct evaluation.
pub fn find_model(f: &Formula, max_size: usize, budget: &ModelBudget) -> Result<Option<Model>, TransformError> {
    let closed = universal_closure(f);
    let sig = signature_of(&closed).map_err(|e| TransformError::IllFormed(e.to_string()))?;
    let mut fresh = FreshNames::new();
    fresh.reserve_all(closed.symbols());
    let cs = clauses_of(&closed, &mut fresh)?;
    let flats: Vec<Flat> = cs.clauses.iter().map(flatten).collect();

    let mut funcs: BTreeMap<Symbol, usize> = sig.functions.clone();
    funcs.extend(sig.constants.iter().map(|c| (c.clone(), 0)));
    let mut preds: BTreeMap<Symbol, usize> = sig.predicates.iter().map(|(p, i)| (p.clone(), i.arity)).collect();
    for fl in &flats {
        for (g, args, _) in &fl.graphs {
            funcs.insert(g.clone(), args.len());
        }
        for (_, p, args) in &fl.preds {
            preds.insert(p.clone(), args.len());
        }
    }

    'sizes: for n in 1..=max_size {
        let mut g = Grounder { atoms: HashMap::new(), clauses: Vec::new() };
        for (fsym, &k) in &funcs {
            for t in tuples(n, k) {
                let lits: Vec<i32> = (0..n).map(|e| g.atom(AtomKey::Graph(fsym.clone(), t.clone(), e))).collect();
                g.clauses.push(lits.clone());
                for i in 0..n {
                    for j in i + 1..n {
                        g.clauses.push(vec![-lits[i], -lits[j]]);
                    }
                }
            }
        }
        for fl in &flats {
            'assign: for vals in tuples(n, fl.nvars) {
                let mut clause = Vec::new();
                for &(pos, a, b) in &fl.eqs {
                    if (vals[a] == vals[b]) == pos {
                        continue 'assign;
                    }
                }
                for (fsym, args, r) in &fl.graphs {
                    let key = AtomKey::Graph(fsym.clone(), args.iter().map(|&a| vals[a]).collect(), vals[*r]);
                    clause.push(-g.atom(key));
                }
                for (pos, p, args) in &fl.preds {
                    let a = g.atom(AtomKey::Pred(p.clone(), args.iter().map(|&x| vals[x]).collect()));
                    clause.push(if *pos { a } else { -a });
                }
                g.clauses.push(clause);
                if g.clauses.len() > budget.max_ground_clauses {
                    break 'sizes;
                }
            }
        }
        let Some(result) = dpll_budget(g.atoms.len(), &g.clauses, budget.max_decisions) else {
            break;
        };
        let SatResult::Sat(assignment) = result else {
            continue;
        };
        let value = |g: &Grounder, k: &AtomKey| g.atoms.get(k).is_some_and(|&v| assignment[v as usize - 1]);
        let mut m = Model { size: n, ..Model::default() };
        let keep: BTreeSet<Symbol> = closed.symbols();
        for (p, &k) in &preds {
            if !keep.contains(p) {
                continue;
            }
            for t in tuples(n, k) {
                let v = value(&g, &AtomKey::Pred(p.clone(), t.clone()));
                m.predicates.insert((p.clone(), t), v);
            }
        }
        for (fsym, &k) in &funcs {
            if !keep.contains(fsym) {
                continue;
            }
            for t in tuples(n, k) {
                let e = (0..n).find(|&e| value(&g, &AtomKey::Graph(fsym.clone(), t.clone(), e))).unwrap_or(0);
                m.functions.insert((fsym.clone(), t), e);
            }
        }
        if eval_formula(&m, &closed) == Ok(true) {
            return Ok(Some(m));
        }
        debug_assert!(false, "model failed verification");
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn model(s: &str, max: usize) -> Option<Model> {
        find_model(&parse_formula(s).unwrap(), max, &ModelBudget::default()).unwrap()
    }

    #[test]
    fn contradiction_has_no_model() {
        assert!(model("~(p -> p)", 4).is_none());
    }

    #[test]
    fn countermodel_for_kb1() {
        let f = "~(((rained_last_night -> wet(grass)), (sprinkler_was_on -> wet(grass)), (wet(grass) -> wet(shoes))) -> wet(shoes))";
        let m = model(f, 4).unwrap();
        assert_eq!(m.size, 1);
        assert!(!m.predicates[&(Symbol::new("rained_last_night"), vec![])]);
        assert!(!m.predicates[&(Symbol::new("sprinkler_was_on"), vec![])]);
    }

    #[test]
    fn cardinality_forced() {
        assert_eq!(model("ex([x,y], ~(x = y))", 4).unwrap().size, 2);
        assert_eq!(model("ex([x,y,z], (~(x = y), ~(y = z), ~(x = z)))", 4).unwrap().size, 3);
    }

    #[test]
    fn functions_interpreted() {
        let m = model("all(x, ~(f(x) = x)), p(f(a))", 3).unwrap();
        assert_eq!(m.size, 2);
        assert_eq!(eval_formula(&m, &parse_formula("all(x, ~(f(x) = x))").unwrap()), Ok(true));
    }

    #[test]
    fn second_order_evaluation() {
        let m = Model { size: 2, ..Model::default() };
        let f = parse_formula("all(x, ex2(p, (p(x), ~p(x))))").unwrap();
        assert_eq!(eval_formula(&m, &f), Ok(false));
        let f = parse_formula("all(x, ex2(p, (p(x), ~all(y, p(y)))))").unwrap();
        assert_eq!(eval_formula(&m, &f), Ok(true));
    }
}
