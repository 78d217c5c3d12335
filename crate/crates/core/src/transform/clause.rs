use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::{term_vars, Formula, PrintOptions, Symbol, Term};

/// Predicate name used for equality literals.
pub const EQ: &str = "=";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    A,
    B,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub pred: Symbol,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(positive: bool, pred: Symbol, args: Vec<Term>) -> Self {
        Literal { positive, pred, args }
    }

    pub fn pos(pred: &str, args: Vec<Term>) -> Self {
        Literal::new(true, Symbol::new(pred), args)
    }

    pub fn neg(pred: &str, args: Vec<Term>) -> Self {
        Literal::new(false, Symbol::new(pred), args)
    }

    pub fn is_eq(&self) -> bool {
        self.pred.as_str() == EQ && self.args.len() == 2
    }

    pub fn complement(&self) -> Literal {
        Literal { positive: !self.positive, ..self.clone() }
    }

    pub fn is_complement_of(&self, other: &Literal) -> bool {
        self.positive != other.positive && self.pred == other.pred && self.args == other.args
    }

    pub fn key(&self) -> (Symbol, usize) {
        (self.pred.clone(), self.args.len())
    }

    pub fn atom_formula(&self) -> Formula {
        if self.is_eq() {
            Formula::Eq(self.args[0].clone(), self.args[1].clone())
        } else {
            Formula::Atom(self.pred.clone(), self.args.clone())
        }
    }

    pub fn to_formula(&self) -> Formula {
        let a = self.atom_formula();
        if self.positive {
            a
        } else {
            Formula::not(a)
        }
    }

    /// Read back an atom, equation or negated one.
    pub fn from_formula(f: &Formula) -> Option<Literal> {
        match f {
            Formula::Atom(p, args) => Some(Literal::new(true, p.clone(), args.clone())),
            Formula::Eq(a, b) => Some(Literal::new(true, Symbol::new(EQ), vec![a.clone(), b.clone()])),
            Formula::Not(g) => Literal::from_formula(g).filter(|l| l.positive).map(|l| l.complement()),
            _ => None,
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<Symbol>) {
        for t in &self.args {
            term_vars(t, out);
        }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Literal {
        Literal { positive: self.positive, pred: self.pred.clone(), args: self.args.iter().map(|t| f(t)).collect() }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    pub literals: Vec<Literal>,
    pub color: Option<Color>,
    pub origin: Option<usize>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { literals, color: None, origin: None }
    }

    pub fn with_color(mut self, c: Color) -> Self {
        self.color = Some(c);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for l in &self.literals {
            l.vars(&mut out);
        }
        out
    }

    /// Variables in order of first occurrence.
    pub fn vars_in_order(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::new();
        fn walk(t: &Term, out: &mut Vec<Symbol>) {
            match t {
                Term::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone())
                    }
                }
                Term::App(_, args) => args.iter().for_each(|a| walk(a, out)),
            }
        }
        for l in &self.literals {
            l.args.iter().for_each(|t| walk(t, &mut out));
        }
        out
    }

    pub fn is_negative(&self) -> bool {
        self.literals.iter().all(|l| !l.positive)
    }

    pub fn is_tautology(&self) -> bool {
        self.literals
            .iter()
            .enumerate()
            .any(|(i, l)| self.literals[i + 1..].iter().any(|m| l.is_complement_of(m)))
    }

    /// Drop repeated literals, keeping first occurrences.
    pub fn dedup(&mut self) {
        let mut seen = BTreeSet::new();
        self.literals.retain(|l| seen.insert(l.clone()));
    }

    pub fn to_formula(&self) -> Formula {
        Formula::forall(self.vars_in_order(), Formula::or(self.literals.iter().map(Literal::to_formula).collect()))
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.literals).finish()?;
        if let Some(c) = self.color {
            write!(f, "{c:?}")?;
        }
        Ok(())
    }
}

/// Quantifier-free clauses; free variables are implicitly universal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClauseSet {
    pub clauses: Vec<Clause>,
    /// Skolem symbols introduced by clausification, with their arities.
    pub skolem_symbols: BTreeMap<Symbol, usize>,
}

impl ClauseSet {
    pub fn new(clauses: Vec<Clause>) -> Self {
        ClauseSet { clauses, skolem_symbols: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn predicates(&self) -> BTreeSet<(Symbol, usize)> {
        self.clauses.iter().flat_map(|c| c.literals.iter().map(Literal::key)).collect()
    }

    pub fn is_propositional(&self) -> bool {
        self.clauses.iter().all(|c| c.literals.iter().all(|l| l.args.is_empty()))
    }

    pub fn has_equality(&self) -> bool {
        self.clauses.iter().any(|c| c.literals.iter().any(Literal::is_eq))
    }

    pub fn with_color(mut self, color: Color) -> Self {
        for c in &mut self.clauses {
            c.color = Some(color);
        }
        self
    }

    /// Conjunction of the universally closed clauses.
    pub fn to_formula(&self) -> Formula {
        Formula::and(self.clauses.iter().map(Clause::to_formula).collect())
    }
}

/// Predicates whose meaning simplification must keep.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProtectedPreds(pub BTreeSet<(Symbol, usize)>);

impl ProtectedPreds {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn all_of(cs: &ClauseSet) -> Self {
        ProtectedPreds(cs.predicates())
    }

    pub fn contains(&self, pred: &Symbol, arity: usize) -> bool {
        pred.as_str() == EQ || self.0.contains(&(pred.clone(), arity))
    }
}

/// A clause as an implication `negatives -> positives`, universally
/// closed over its variables.
pub fn clause_to_formula(c: &Clause) -> Formula {
    let neg: Vec<Formula> = c.literals.iter().filter(|l| !l.positive).map(Literal::atom_formula).collect();
    let pos: Vec<Formula> = c.literals.iter().filter(|l| l.positive).map(Literal::atom_formula).collect();
    let body = match (neg.is_empty(), pos.is_empty()) {
        (true, _) => Formula::or(pos),
        (false, true) => Formula::not(Formula::and(neg)),
        (false, false) => Formula::implies(Formula::and(neg), Formula::or(pos)),
    };
    Formula::forall(c.vars_in_order(), body)
}

pub fn clauses_to_formula(cs: &[Clause]) -> Formula {
    Formula::and(cs.iter().map(clause_to_formula).collect())
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = crate::syntax::print_formula(&clause_to_formula(self), &PrintOptions::default());
        f.write_str(&s)
    }
}
