use std::collections::{BTreeMap, BTreeSet};

use super::{Clause, ClauseSet, Literal};
use crate::syntax::{Formula, Symbol, Term};

/// Result of un-Skolemization. `residual` lists Skolem symbols that could
/// not be turned back into quantifiers and remain as functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unskolemized {
    pub formula: Formula,
    pub residual: BTreeSet<Symbol>,
}

/// Rebuild a quantified formula from clauses by turning Skolem terms back
/// into existentially quantified variables.
///
/// Each Skolem function must occur only with distinct variables as
/// arguments, consistently across each clause; variables of different
/// clauses that fill the same argument slot are identified. The argument
/// sets of all Skolem functions must form a chain so that one quantifier
/// prefix serves every clause. Functions violating this are left in place
/// and reported.
pub fn unskolemize(cs: &ClauseSet) -> Unskolemized {
    let occurring = occurring_symbols(&cs.clauses);
    let mut cands: BTreeSet<Symbol> =
        cs.skolem_symbols.keys().filter(|s| occurring.contains(*s)).cloned().collect();
    loop {
        match attempt(&cs.clauses, &cands, &occurring) {
            Ok(formula) => {
                let residual = cs
                    .skolem_symbols
                    .keys()
                    .filter(|s| occurring.contains(*s) && !cands.contains(*s))
                    .cloned()
                    .collect();
                return Unskolemized { formula, residual };
            }
            Err(bad) => {
                cands.remove(&bad);
            }
        }
    }
}

fn occurring_symbols(clauses: &[Clause]) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    for c in clauses {
        for l in &c.literals {
            out.insert(l.pred.clone());
            for t in &l.args {
                term_symbols(t, &mut out);
            }
        }
    }
    out
}

fn term_symbols(t: &Term, out: &mut BTreeSet<Symbol>) {
    if let Term::App(f, args) = t {
        out.insert(f.clone());
        args.iter().for_each(|a| term_symbols(a, out));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Slot(Symbol, usize),
    Var(usize, Symbol),
}

#[derive(Default)]
struct UnionFind {
    ids: BTreeMap<Node, usize>,
    parent: Vec<usize>,
}

impl UnionFind {
    fn id(&mut self, n: Node) -> usize {
        let next = self.parent.len();
        let id = *self.ids.entry(n).or_insert(next);
        if id == next {
            self.parent.push(next);
        }
        id
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
        }
    }

    fn class_of(&mut self, n: &Node) -> Option<usize> {
        let id = *self.ids.get(n)?;
        Some(self.find(id))
    }
}

/// Skolem occurrences in a term, outermost first.
fn skolem_occurrences<'a>(t: &'a Term, cands: &BTreeSet<Symbol>, out: &mut Vec<(&'a Symbol, &'a [Term])>) {
    if let Term::App(f, args) = t {
        if cands.contains(f) {
            out.push((f, args));
        }
        for a in args {
            skolem_occurrences(a, cands, out);
        }
    }
}

const POOL: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

struct Names<'a> {
    avoid: &'a BTreeSet<Symbol>,
    next: usize,
}

impl Names<'_> {
    fn take(&mut self) -> Symbol {
        loop {
            let i = self.next;
            self.next += 1;
            let s = if i < POOL.len() {
                Symbol::new(POOL[i])
            } else {
                Symbol::new(format!("{}{}", POOL[i % POOL.len()], i / POOL.len()))
            };
            if !self.avoid.contains(&s) {
                return s;
            }
        }
    }
}

/// Clauses linked by shared Skolem symbols get a common prefix; unrelated
/// groups are closed separately.
fn attempt(clauses: &[Clause], cands: &BTreeSet<Symbol>, avoid: &BTreeSet<Symbol>) -> Result<Formula, Symbol> {
    let mut groups: Vec<(BTreeSet<Symbol>, Vec<Clause>)> = Vec::new();
    for c in clauses {
        let mut syms = BTreeSet::new();
        for l in &c.literals {
            l.args.iter().for_each(|t| term_symbols(t, &mut syms));
        }
        syms.retain(|s| cands.contains(s));
        let mut merged = (syms.clone(), vec![c.clone()]);
        if !syms.is_empty() {
            let mut i = 0;
            while i < groups.len() {
                if groups[i].0.is_disjoint(&merged.0) {
                    i += 1;
                } else {
                    let (gs, gc) = groups.remove(i);
                    merged.0.extend(gs);
                    let mut all = gc;
                    all.append(&mut merged.1);
                    merged.1 = all;
                }
            }
        }
        groups.push(merged);
    }
    let mut parts = Vec::new();
    for (_, group) in &groups {
        match attempt_group(group, cands, avoid)? {
            Formula::And(fs) => parts.extend(fs),
            f => parts.push(f),
        }
    }
    Ok(Formula::and(parts))
}

fn attempt_group(clauses: &[Clause], cands: &BTreeSet<Symbol>, avoid: &BTreeSet<Symbol>) -> Result<Formula, Symbol> {
    let mut uf = UnionFind::default();
    let mut arity: BTreeMap<Symbol, usize> = BTreeMap::new();
    for (ci, c) in clauses.iter().enumerate() {
        let mut seen: BTreeMap<&Symbol, &[Term]> = BTreeMap::new();
        for l in &c.literals {
            let mut occ = Vec::new();
            l.args.iter().for_each(|t| skolem_occurrences(t, cands, &mut occ));
            for (f, args) in occ {
                let mut vs = BTreeSet::new();
                for a in args {
                    match a {
                        Term::Var(v) if vs.insert(v) => {}
                        _ => return Err(f.clone()),
                    }
                }
                match seen.get(f) {
                    Some(prev) if *prev != args => return Err(f.clone()),
                    _ => {
                        seen.insert(f, args);
                    }
                }
                arity.insert(f.clone(), args.len());
                for (i, a) in args.iter().enumerate() {
                    let Term::Var(v) = a else { unreachable!() };
                    let s = uf.id(Node::Slot(f.clone(), i));
                    let x = uf.id(Node::Var(ci, v.clone()));
                    uf.union(s, x);
                }
            }
        }
    }
    let mut deps: BTreeMap<Symbol, Vec<usize>> = BTreeMap::new();
    for (f, n) in &arity {
        let classes: Vec<usize> = (0..*n).map(|i| uf.class_of(&Node::Slot(f.clone(), i)).unwrap()).collect();
        if classes.iter().collect::<BTreeSet<_>>().len() != classes.len() {
            return Err(f.clone());
        }
        deps.insert(f.clone(), classes);
    }
    for (ci, c) in clauses.iter().enumerate() {
        let mut used = BTreeMap::new();
        for v in c.vars() {
            if let Some(k) = uf.class_of(&Node::Var(ci, v.clone())) {
                if let Some(other) = used.insert(k, v.clone()) {
                    let _ = other;
                    let f = arity.keys().find(|f| deps[*f].contains(&k)).unwrap();
                    return Err(f.clone());
                }
            }
        }
    }
    let mut order: Vec<&Symbol> = deps.keys().collect();
    order.sort_by_key(|f| (deps[*f].len(), (*f).clone()));
    for w in order.windows(2) {
        let a: BTreeSet<_> = deps[w[0]].iter().collect();
        let b: BTreeSet<_> = deps[w[1]].iter().collect();
        if !a.is_subset(&b) {
            return Err(w[1].clone());
        }
    }

    let mut names = Names { avoid, next: 0 };
    let mut prefix: Vec<(bool, Symbol)> = Vec::new();
    let mut class_name: BTreeMap<usize, Symbol> = BTreeMap::new();
    let mut sk_name: BTreeMap<Symbol, Symbol> = BTreeMap::new();
    for f in &order {
        for k in &deps[*f] {
            if !class_name.contains_key(k) {
                let n = names.take();
                class_name.insert(*k, n.clone());
                prefix.push((true, n));
            }
        }
        let n = names.take();
        sk_name.insert((*f).clone(), n.clone());
        prefix.push((false, n));
    }
    let first_local = names.next;

    let mut matrix = Vec::new();
    for (ci, c) in clauses.iter().enumerate() {
        let mut local = Names { avoid, next: first_local };
        let mut ren: BTreeMap<Symbol, Symbol> = BTreeMap::new();
        let mut locals = Vec::new();
        for v in c.vars_in_order() {
            match uf.class_of(&Node::Var(ci, v.clone())) {
                Some(k) => {
                    ren.insert(v, class_name[&k].clone());
                }
                None => {
                    let n = local.take();
                    ren.insert(v, n.clone());
                    locals.push(n);
                }
            }
        }
        let lits: Vec<Literal> =
            c.literals.iter().map(|l| l.map_terms(&mut |t| rewrite(t, &ren, &sk_name))).collect();
        matrix.push(Formula::forall(locals, implication(&lits)));
    }
    let mut out = Formula::and(matrix);
    for (universal, v) in prefix.into_iter().rev() {
        out = match (universal, out) {
            (true, Formula::ForAll(mut vs, b)) => {
                vs.insert(0, v);
                Formula::ForAll(vs, b)
            }
            (false, Formula::Exists(mut vs, b)) => {
                vs.insert(0, v);
                Formula::Exists(vs, b)
            }
            (true, b) => Formula::ForAll(vec![v], Box::new(b)),
            (false, b) => Formula::Exists(vec![v], Box::new(b)),
        };
    }
    Ok(out)
}

fn rewrite(t: &Term, ren: &BTreeMap<Symbol, Symbol>, sk: &BTreeMap<Symbol, Symbol>) -> Term {
    match t {
        Term::Var(v) => Term::Var(ren.get(v).cloned().unwrap_or_else(|| v.clone())),
        Term::App(f, _) if sk.contains_key(f) => Term::Var(sk[f].clone()),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| rewrite(a, ren, sk)).collect()),
    }
}

/// `negatives -> positives`, or a plain disjunction / negated conjunction.
pub(crate) fn implication(lits: &[Literal]) -> Formula {
    let neg: Vec<Formula> = lits.iter().filter(|l| !l.positive).map(Literal::atom_formula).collect();
    let pos: Vec<Formula> = lits.iter().filter(|l| l.positive).map(Literal::atom_formula).collect();
    match (neg.is_empty(), pos.is_empty()) {
        (true, _) => Formula::or(pos),
        (false, true) => Formula::not(Formula::and(neg)),
        (false, false) => Formula::implies(Formula::and(neg), Formula::or(pos)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fresh::FreshNames;
    use crate::syntax::parse_formula;
    use crate::transform::cnf;

    fn unsk(s: &str) -> Unskolemized {
        unskolemize(&cnf(&parse_formula(s).unwrap(), &mut FreshNames::new()).unwrap())
    }

    #[test]
    fn skolem_constant() {
        let mut cs = ClauseSet::new(vec![Clause::new(vec![Literal::pos("p", vec![Term::constant("c"), Term::var("y")])])]);
        cs.skolem_symbols.insert(Symbol::new("c"), 0);
        let u = unskolemize(&cs);
        assert_eq!(u.formula, parse_formula("ex(x, all(y, p(x,y)))").unwrap());
        assert!(u.residual.is_empty());
    }

    #[test]
    fn no_skolem_symbols() {
        let u = unsk("all(x, p(x))");
        assert_eq!(u.formula, parse_formula("all(x, p(x))").unwrap());
    }

    #[test]
    fn shared_argument_slots() {
        let u = unsk("all(x, ex(y, (p(x,y), q(y,x))))");
        assert_eq!(u.formula, parse_formula("all(x, ex(y, (p(x,y), q(y,x))))").unwrap());
    }

    #[test]
    fn chain_of_dependencies() {
        let u = unsk("ex(z, all(x, ex(y, r(x,y,z))))");
        assert_eq!(u.formula, parse_formula("ex(x, all(y, ex(z, r(y,z,x))))").unwrap());
    }

    #[test]
    fn incomparable_dependencies_left_as_functions() {
        let u = unsk("all(x, ex(y, p(x,y))), all(z, ex(w, q(z,w)))");
        assert_eq!(u.formula, parse_formula("all(x, ex(y, p(x,y))), all(x, ex(y, q(x,y)))").unwrap());
        let u = unsk("all([x,z], (ex(y, p(x,y)) ; ex(w, q(z,w))))");
        assert_eq!(u.residual.len(), 1, "{}", u.formula);
    }
}
