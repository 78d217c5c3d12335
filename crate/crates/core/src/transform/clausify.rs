use std::collections::BTreeSet;

use super::nnf::{flat_and, flat_or};
use super::{nnf, skolemize, Clause, ClauseSet, Literal, TransformError};
use crate::fresh::FreshNames;
use crate::syntax::{free_vars, Formula, Symbol, Term};

pub const DEFAULT_MAX_CLAUSES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CnfOptions {
    pub max_clauses: usize,
}

impl Default for CnfOptions {
    fn default() -> Self {
        CnfOptions { max_clauses: DEFAULT_MAX_CLAUSES }
    }
}

fn check_input(f: &Formula) -> Result<(), TransformError> {
    if f.has_macro_residue() {
        return Err(TransformError::Unexpanded);
    }
    if f.is_second_order() {
        return Err(TransformError::SecondOrder);
    }
    Ok(())
}

/// Clausal form by NNF, Skolemization and distribution.
pub fn cnf(f: &Formula, fresh: &mut FreshNames) -> Result<ClauseSet, TransformError> {
    cnf_with(f, fresh, &CnfOptions::default())
}

pub fn cnf_with(f: &Formula, fresh: &mut FreshNames, opts: &CnfOptions) -> Result<ClauseSet, TransformError> {
    check_input(f)?;
    let (g, sk) = skolemize(&nnf(f), fresh);
    let lits = distribute(&g, opts.max_clauses)?;
    let mut cs = ClauseSet::new(lits.into_iter().map(make_clause).collect());
    cs.skolem_symbols = sk;
    Ok(cs)
}

fn make_clause(lits: Vec<Literal>) -> Clause {
    let mut c = Clause::new(lits);
    c.dedup();
    c
}

fn literal(f: &Formula) -> Option<Literal> {
    Literal::from_formula(f)
}

fn distribute(g: &Formula, max: usize) -> Result<Vec<Vec<Literal>>, TransformError> {
    if let Some(l) = literal(g) {
        return Ok(vec![vec![l]]);
    }
    match g {
        Formula::True => Ok(vec![]),
        Formula::False => Ok(vec![vec![]]),
        Formula::ForAll(_, b) => distribute(b, max),
        Formula::And(fs) => {
            let mut out = Vec::new();
            for f in fs {
                out.extend(distribute(f, max)?);
                if out.len() > max {
                    return Err(TransformError::TooManyClauses(max));
                }
            }
            Ok(out)
        }
        Formula::Or(fs) => {
            let mut acc: Vec<Vec<Literal>> = vec![vec![]];
            for f in fs {
                let part = distribute(f, max)?;
                if acc.len().saturating_mul(part.len()) > max {
                    return Err(TransformError::TooManyClauses(max));
                }
                acc = product(&acc, &part);
            }
            Ok(acc)
        }
        _ => unreachable!("not in Skolemized NNF: {g}"),
    }
}

fn product(a: &[Vec<Literal>], b: &[Vec<Literal>]) -> Vec<Vec<Literal>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut c = x.clone();
            c.extend(y.iter().cloned());
            out.push(c);
        }
    }
    out
}

/// Disjunctive normal form. Quantified subformulas (after NNF) are kept
/// as opaque members of the conjunctions.
pub fn dnf(f: &Formula) -> Result<Formula, TransformError> {
    let terms = dnf_terms(&nnf(f), DEFAULT_MAX_CLAUSES)?;
    Ok(Formula::or(terms.into_iter().map(Formula::and).collect()))
}

fn dnf_terms(g: &Formula, max: usize) -> Result<Vec<Vec<Formula>>, TransformError> {
    match g {
        Formula::True => Ok(vec![vec![]]),
        Formula::False => Ok(vec![]),
        Formula::Or(fs) => {
            let mut out = Vec::new();
            for f in fs {
                out.extend(dnf_terms(f, max)?);
                if out.len() > max {
                    return Err(TransformError::TooManyClauses(max));
                }
            }
            Ok(out)
        }
        Formula::And(fs) => {
            let mut acc: Vec<Vec<Formula>> = vec![vec![]];
            for f in fs {
                let part = dnf_terms(f, max)?;
                if acc.len().saturating_mul(part.len()) > max {
                    return Err(TransformError::TooManyClauses(max));
                }
                let mut next = Vec::new();
                for x in &acc {
                    for y in &part {
                        let mut c = x.clone();
                        for m in y {
                            if !c.contains(m) {
                                c.push(m.clone());
                            }
                        }
                        next.push(c);
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
        other => Ok(vec![vec![other.clone()]]),
    }
}

/// Structure-preserving clausification. Biconditionals and their
/// non-literal operands are named by fresh predicates, and conjunctions
/// below disjunctions are named when distributing them would multiply
/// clauses. The result is equivalent to the input under existential
/// quantification of the returned predicates (and Skolem functions).
pub fn definitional_cnf(f: &Formula, fresh: &mut FreshNames) -> Result<(ClauseSet, Vec<Symbol>), TransformError> {
    check_input(f)?;
    fresh.reserve_all(f.symbols());
    let mut st = Namer { fresh, defs: Vec::new(), introduced: Vec::new(), extra: Vec::new() };
    let main = st.name_iffs(&nnf_keep_iff(f, true), true, false);
    let mut all = vec![main];
    all.append(&mut st.defs);
    let (g, sk) = skolemize(&flat_and(all), st.fresh);
    let mut clauses = st.clausify(&g)?;
    clauses.append(&mut st.extra);
    let mut cs = ClauseSet::new(clauses.into_iter().map(make_clause).collect());
    cs.skolem_symbols = sk;
    Ok((cs, st.introduced))
}

fn nnf_keep_iff(f: &Formula, pos: bool) -> Formula {
    match f {
        Formula::Iff(a, b) => Formula::iff(nnf_keep_iff(a, true), nnf_keep_iff(b, pos)),
        Formula::Not(a) => nnf_keep_iff(a, !pos),
        Formula::And(fs) | Formula::Or(fs) => {
            let items: Vec<Formula> = fs.iter().map(|g| nnf_keep_iff(g, pos)).collect();
            if matches!(f, Formula::And(_)) == pos {
                flat_and(items)
            } else {
                flat_or(items)
            }
        }
        Formula::Implies(a, b) => {
            if pos {
                flat_or(vec![nnf_keep_iff(a, false), nnf_keep_iff(b, true)])
            } else {
                flat_and(vec![nnf_keep_iff(a, true), nnf_keep_iff(b, false)])
            }
        }
        Formula::ForAll(vs, b) | Formula::Exists(vs, b) => {
            let body = Box::new(nnf_keep_iff(b, pos));
            if matches!(f, Formula::ForAll(..)) == pos {
                Formula::ForAll(vs.clone(), body)
            } else {
                Formula::Exists(vs.clone(), body)
            }
        }
        _ => nnf(&if pos { f.clone() } else { Formula::not(f.clone()) }),
    }
}

fn is_literal(f: &Formula) -> bool {
    literal(f).is_some()
}

fn ordered_free_vars(f: &Formula) -> Vec<Term> {
    let fv = free_vars(f);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    fn walk(f: &Formula, fv: &BTreeSet<Symbol>, seen: &mut BTreeSet<Symbol>, out: &mut Vec<Term>) {
        let mut term = |t: &Term| {
            let mut vs = BTreeSet::new();
            crate::syntax::term_vars(t, &mut vs);
            for v in vs {
                if fv.contains(&v) && seen.insert(v.clone()) {
                    out.push(Term::Var(v));
                }
            }
        };
        match f {
            Formula::Atom(_, args) => args.iter().for_each(&mut term),
            Formula::Eq(a, b) => {
                term(a);
                term(b);
            }
            _ => f.children().into_iter().for_each(|c| walk(c, fv, seen, out)),
        }
    }
    walk(f, &fv, &mut seen, &mut out);
    out
}

struct Namer<'a> {
    fresh: &'a mut FreshNames,
    defs: Vec<Formula>,
    introduced: Vec<Symbol>,
    extra: Vec<Vec<Literal>>,
}

fn close(vars: &[Term], body: Formula) -> Formula {
    let vs = vars
        .iter()
        .map(|t| match t {
            Term::Var(v) => v.clone(),
            _ => unreachable!(),
        })
        .collect();
    Formula::forall(vs, body)
}

impl Namer<'_> {
    fn new_pred(&mut self) -> Symbol {
        let d = self.fresh.fresh_indexed("def");
        self.introduced.push(d.clone());
        d
    }

    /// Replace biconditionals by named atoms; `pos`/`neg` give the
    /// polarities in which `g` occurs.
    fn name_iffs(&mut self, g: &Formula, pos: bool, neg: bool) -> Formula {
        match g {
            Formula::Iff(a, b) => {
                let a = self.name_iffs(a, true, true);
                let b = self.name_iffs(b, true, true);
                let a = self.name_operand(a);
                let b = self.name_operand(b);
                let iff = Formula::iff(a.clone(), b.clone());
                let vars = ordered_free_vars(&iff);
                let d = Formula::Atom(self.new_pred(), vars.clone());
                let na = nnf(&Formula::not(a.clone()));
                let nb = nnf(&Formula::not(b.clone()));
                if pos {
                    let body = flat_or(vec![
                        Formula::not(d.clone()),
                        flat_and(vec![flat_or(vec![na.clone(), b.clone()]), flat_or(vec![a.clone(), nb.clone()])]),
                    ]);
                    self.defs.push(close(&vars, body));
                }
                if neg {
                    let body = flat_or(vec![
                        d.clone(),
                        flat_or(vec![flat_and(vec![a.clone(), nb]), flat_and(vec![na, b])]),
                    ]);
                    self.defs.push(close(&vars, body));
                }
                d
            }
            Formula::Atom(..) | Formula::Eq(..) | Formula::Not(_) | Formula::True | Formula::False => g.clone(),
            _ => g.map_children(&mut |c| self.name_iffs(c, pos, neg)),
        }
    }

    fn name_operand(&mut self, a: Formula) -> Formula {
        if is_literal(&a) || matches!(a, Formula::True | Formula::False) {
            return a;
        }
        let vars = ordered_free_vars(&a);
        let e = Formula::Atom(self.new_pred(), vars.clone());
        self.defs.push(close(&vars, flat_or(vec![Formula::not(e.clone()), a.clone()])));
        self.defs.push(close(&vars, flat_or(vec![e.clone(), nnf(&Formula::not(a))])));
        e
    }

    fn clausify(&mut self, g: &Formula) -> Result<Vec<Vec<Literal>>, TransformError> {
        if let Some(l) = literal(g) {
            return Ok(vec![vec![l]]);
        }
        match g {
            Formula::True => Ok(vec![]),
            Formula::False => Ok(vec![vec![]]),
            Formula::ForAll(_, b) => self.clausify(b),
            Formula::And(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    out.extend(self.clausify(f)?);
                }
                Ok(out)
            }
            Formula::Or(fs) => {
                let mut parts = Vec::new();
                for f in fs {
                    parts.push((f, self.clausify(f)?));
                }
                let largest = (0..parts.len()).max_by_key(|&i| parts[i].1.len()).unwrap_or(0);
                let mut acc: Vec<Vec<Literal>> = vec![vec![]];
                for (i, (f, cl)) in parts.into_iter().enumerate() {
                    let cl = if i != largest && cl.len() > 1 {
                        let vars = ordered_free_vars(f);
                        let d = self.new_pred();
                        for c in cl {
                            let mut c2 = vec![Literal::new(false, d.clone(), vars.clone())];
                            c2.extend(c);
                            self.extra.push(c2);
                        }
                        vec![vec![Literal::new(true, d, vars)]]
                    } else {
                        cl
                    };
                    acc = product(&acc, &cl);
                }
                Ok(acc)
            }
            _ => unreachable!("not in Skolemized NNF: {g}"),
        }
    }
}
