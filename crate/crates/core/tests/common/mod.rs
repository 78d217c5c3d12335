//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use folwork_core::prover::{dpll, eval_formula, Model};
use folwork_core::syntax::{signature_of, Formula, Symbol, Term};
use folwork_core::transform::ClauseSet;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random formula over 0-ary atoms `a0..a{n-1}` with every connective.
pub fn prop_formula(r: &mut StdRng, atoms: usize, depth: usize) -> Formula {
    if depth == 0 || r.gen_bool(0.25) {
        return match r.gen_range(0..20) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::prop(&format!("a{}", r.gen_range(0..atoms))),
        };
    }
    let sub = |r: &mut StdRng| prop_formula(r, atoms, depth - 1);
    match r.gen_range(0..5) {
        0 => Formula::not(sub(r)),
        1 => Formula::And((0..r.gen_range(2..4)).map(|_| sub(r)).collect()),
        2 => Formula::Or((0..r.gen_range(2..4)).map(|_| sub(r)).collect()),
        3 => Formula::implies(sub(r), sub(r)),
        _ => Formula::iff(sub(r), sub(r)),
    }
}

/// Truth value under `v`; `None` for anything beyond 0-ary atoms.
pub fn prop_eval(f: &Formula, v: &BTreeMap<Symbol, bool>) -> Option<bool> {
    Some(match f {
        Formula::Atom(p, args) if args.is_empty() => *v.get(p)?,
        Formula::True => true,
        Formula::False => false,
        Formula::Not(a) => !prop_eval(a, v)?,
        Formula::And(fs) => fs.iter().map(|g| prop_eval(g, v)).collect::<Option<Vec<_>>>()?.into_iter().all(|b| b),
        Formula::Or(fs) => fs.iter().map(|g| prop_eval(g, v)).collect::<Option<Vec<_>>>()?.into_iter().any(|b| b),
        Formula::Implies(a, b) => !prop_eval(a, v)? || prop_eval(b, v)?,
        Formula::Iff(a, b) => prop_eval(a, v)? == prop_eval(b, v)?,
        _ => return None,
    })
}

pub fn prop_atoms(f: &Formula) -> BTreeSet<Symbol> {
    fn walk(f: &Formula, out: &mut BTreeSet<Symbol>) {
        if let Formula::Atom(p, _) = f {
            out.insert(p.clone());
        }
        f.children().into_iter().for_each(|c| walk(c, out));
    }
    let mut out = BTreeSet::new();
    walk(f, &mut out);
    out
}

pub fn assignments(atoms: &BTreeSet<Symbol>) -> impl Iterator<Item = BTreeMap<Symbol, bool>> + '_ {
    (0..1u64 << atoms.len()).map(move |m| atoms.iter().enumerate().map(|(i, s)| (s.clone(), m >> i & 1 == 1)).collect())
}

/// Truth-table equivalence; `None` if either side is not propositional.
pub fn tt_equivalent(a: &Formula, b: &Formula) -> Option<bool> {
    let mut atoms = prop_atoms(a);
    atoms.extend(prop_atoms(b));
    for v in assignments(&atoms) {
        if prop_eval(a, &v)? != prop_eval(b, &v)? {
            return Some(false);
        }
    }
    Some(true)
}

pub fn tt_satisfiable(f: &Formula) -> Option<bool> {
    let atoms = prop_atoms(f);
    for v in assignments(&atoms) {
        if prop_eval(f, &v)? {
            return Some(true);
        }
    }
    Some(false)
}

/// Clauses as DIMACS-style integers, one variable per distinct atom text.
pub struct Numbering {
    pub index: BTreeMap<String, i32>,
}

impl Numbering {
    pub fn new() -> Self {
        Numbering { index: BTreeMap::new() }
    }

    pub fn lit(&mut self, atom: String, positive: bool) -> i32 {
        let n = self.index.len() as i32 + 1;
        let v = *self.index.entry(atom).or_insert(n);
        if positive {
            v
        } else {
            -v
        }
    }

    pub fn clauses(&mut self, cs: &ClauseSet) -> Vec<Vec<i32>> {
        cs.clauses
            .iter()
            .map(|c| c.literals.iter().map(|l| self.lit(l.atom_formula().to_string(), l.positive)).collect())
            .collect()
    }
}

/// Satisfiability of clauses read as ground propositional clauses.
pub fn dpll_sat(clauses: &[Vec<i32>], numbering: &Numbering) -> bool {
    dpll(numbering.index.len(), clauses).is_sat()
}

pub fn clause_set_sat(cs: &ClauseSet) -> bool {
    let mut n = Numbering::new();
    let clauses = n.clauses(cs);
    dpll_sat(&clauses, &n)
}

const UNARY: [&str; 3] = ["p", "q", "r"];
const CONSTANTS: [&str; 2] = ["a", "b"];

fn random_term(r: &mut StdRng, vars: &[&str]) -> Term {
    if !vars.is_empty() && r.gen_bool(0.6) {
        return Term::var(vars.choose(r).unwrap());
    }
    if r.gen_bool(0.15) {
        return Term::app("f", vec![random_term(r, vars)]);
    }
    Term::constant(CONSTANTS.choose(r).unwrap())
}

/// Random closed first-order formula over `p/1, q/1, r/1, e/2, f/1, a, b`
/// and `=`.
pub fn fo_formula(r: &mut StdRng, depth: usize) -> Formula {
    fo_open(r, depth, &[])
}

fn fo_open(r: &mut StdRng, depth: usize, vars: &[&'static str]) -> Formula {
    if depth == 0 || r.gen_bool(0.2) {
        return match r.gen_range(0..10) {
            0 => Formula::Eq(random_term(r, vars), random_term(r, vars)),
            1 | 2 => Formula::atom("e", vec![random_term(r, vars), random_term(r, vars)]),
            _ => Formula::atom(UNARY.choose(r).unwrap(), vec![random_term(r, vars)]),
        };
    }
    let pool: [&'static str; 3] = ["x", "y", "z"];
    match r.gen_range(0..7) {
        0 => Formula::not(fo_open(r, depth - 1, vars)),
        1 => Formula::And(vec![fo_open(r, depth - 1, vars), fo_open(r, depth - 1, vars)]),
        2 => Formula::Or(vec![fo_open(r, depth - 1, vars), fo_open(r, depth - 1, vars)]),
        3 => Formula::implies(fo_open(r, depth - 1, vars), fo_open(r, depth - 1, vars)),
        q => {
            let v = pool[vars.len().min(2)];
            let mut inner = vars.to_vec();
            inner.push(v);
            let body = fo_open(r, depth - 1, &inner);
            if q % 2 == 0 {
                Formula::forall(vec![Symbol::new(v)], body)
            } else {
                Formula::exists(vec![Symbol::new(v)], body)
            }
        }
    }
}

/// Every interpretation of the free symbols of `fs` over a domain of
/// `size` elements, or `None` if there are more than `cap`.
pub fn interpretations(fs: &[&Formula], size: usize, cap: u64) -> Option<Vec<Model>> {
    let mut sig = signature_of(fs[0]).ok()?;
    for f in &fs[1..] {
        sig.merge(&signature_of(f).ok()?);
    }
    let mut cells: Vec<(Symbol, Vec<usize>, bool)> = Vec::new();
    for (p, info) in &sig.predicates {
        for args in tuples(size, info.arity) {
            cells.push((p.clone(), args, true));
        }
    }
    for (s, a) in sig.functions.iter().map(|(s, a)| (s, *a)).chain(sig.constants.iter().map(|c| (c, 0))) {
        for args in tuples(size, a) {
            cells.push((s.clone(), args, false));
        }
    }
    let radix: Vec<u64> = cells.iter().map(|c| if c.2 { 2 } else { size as u64 }).collect();
    let total = radix.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x))?;
    if total > cap {
        return None;
    }
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut m = Model { size, ..Default::default() };
        for ((s, args, pred), &rdx) in cells.iter().zip(&radix) {
            let d = code % rdx;
            code /= rdx;
            if *pred {
                m.predicates.insert((s.clone(), args.clone()), d == 1);
            } else {
                m.functions.insert((s.clone(), args.clone()), d as usize);
            }
        }
        out.push(m);
    }
    Some(out)
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (0..n).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

/// Value of a ground term in `m`.
pub fn term_value(m: &Model, t: &Term) -> Option<usize> {
    match t {
        Term::App(s, args) => {
            let vals = args.iter().map(|a| term_value(m, a)).collect::<Option<Vec<_>>>()?;
            m.functions.get(&(s.clone(), vals)).copied()
        }
        Term::Var(_) => None,
    }
}

pub fn holds(m: &Model, f: &Formula) -> bool {
    eval_formula(m, f).expect("evaluation")
}
