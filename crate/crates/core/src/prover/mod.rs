//! Connection tableau prover, finite model finder and the validity
//! driver combining the two.

mod dpll;
mod model;
mod tableau;

pub use dpll::{dpll, dpll_budget, SatResult};
pub use model::{eval_formula, eval_formula_budget, find_model, EvalError, Model, ModelBudget};

use std::collections::{BTreeMap, BTreeSet};

use crate::fresh::FreshNames;
use crate::syntax::{free_vars, Formula, Symbol, Term};
use crate::transform::{
    cnf, definitional_cnf, simplify_clauses, Clause, ClauseSet, Color, Literal, ProtectedPreds, TransformError, EQ,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    ByExtension,
    /// Closed against the ancestor at this depth (start clause literals
    /// are at depth 1).
    ByReduction { ancestor_depth: usize },
}

/// A node of a closed connection tableau. The root carries no literal;
/// the children of every node are an instance of clause `clause_origin`
/// of [`Proof::clauses`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauNode {
    pub literal: Option<Literal>,
    pub clause_origin: Option<usize>,
    pub color: Option<Color>,
    pub children: Vec<TableauNode>,
    pub closure: Option<Closure>,
}

impl TableauNode {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(TableauNode::size).sum::<usize>()
    }

    /// Clause index of the group formed by this node's children.
    pub fn children_origin(&self) -> Option<usize> {
        if self.literal.is_none() {
            self.clause_origin
        } else {
            self.children.first().and_then(|c| c.clause_origin)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub root: TableauNode,
    pub substitution: BTreeMap<Symbol, Term>,
    pub depth: usize,
    /// The clauses the tableau refers to: the input followed by any
    /// equality axioms.
    pub clauses: Vec<Clause>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofResult {
    Proved(Proof),
    DepthExhausted(usize),
    ResourceOut,
}

impl ProofResult {
    pub fn proof(&self) -> Option<&Proof> {
        match self {
            ProofResult::Proved(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProverLimits {
    pub max_depth: usize,
    /// Inference steps allowed per deepening iteration.
    pub inference_cap: u64,
}

impl Default for ProverLimits {
    fn default() -> Self {
        ProverLimits { max_depth: 12, inference_cap: 20_000_000 }
    }
}

/// Search for a closed regular connection tableau for `cs`, adding
/// equality axioms when `=` occurs.
pub fn prove(cs: &ClauseSet, limits: &ProverLimits) -> ProofResult {
    tableau::search(&with_equality_axioms(cs), limits)
}

/// Search over clauses that already contain any equality axioms needed.
pub fn search_clauses(clauses: &[Clause], limits: &ProverLimits) -> ProofResult {
    tableau::search(clauses, limits)
}

/// The clauses of `cs`, followed by reflexivity, symmetry, transitivity
/// and substitutivity axioms for its signature when `=` occurs.
pub fn with_equality_axioms(cs: &ClauseSet) -> Vec<Clause> {
    let mut out = cs.clauses.clone();
    if cs.has_equality() {
        out.extend(equality_axioms(cs));
    }
    out
}

pub fn equality_axioms(cs: &ClauseSet) -> Vec<Clause> {
    let v = |s: &str| Term::var(s);
    let eq = |p: bool, a: Term, b: Term| Literal::new(p, Symbol::new(EQ), vec![a, b]);
    let mut out = vec![
        Clause::new(vec![eq(true, v("X"), v("X"))]),
        Clause::new(vec![eq(false, v("X"), v("Y")), eq(true, v("Y"), v("X"))]),
        Clause::new(vec![eq(false, v("X"), v("Y")), eq(false, v("Y"), v("Z")), eq(true, v("X"), v("Z"))]),
    ];
    let mut funcs = BTreeSet::new();
    for c in &cs.clauses {
        for l in &c.literals {
            l.args.iter().for_each(|t| function_arities(t, &mut funcs));
        }
    }
    let args = |n: usize, i: usize, x: &str| -> Vec<Term> {
        (0..n).map(|k| if k == i { v(x) } else { v(&format!("Z{k}")) }).collect()
    };
    for (f, n) in funcs {
        for i in 0..n {
            out.push(Clause::new(vec![
                eq(false, v("X"), v("Y")),
                eq(true, Term::App(f.clone(), args(n, i, "X")), Term::App(f.clone(), args(n, i, "Y"))),
            ]));
        }
    }
    for (p, n) in cs.predicates() {
        if p.as_str() == EQ {
            continue;
        }
        for i in 0..n {
            out.push(Clause::new(vec![
                eq(false, v("X"), v("Y")),
                Literal::new(false, p.clone(), args(n, i, "X")),
                Literal::new(true, p.clone(), args(n, i, "Y")),
            ]));
        }
    }
    out
}

fn function_arities(t: &Term, out: &mut BTreeSet<(Symbol, usize)>) {
    if let Term::App(f, args) = t {
        if !args.is_empty() {
            out.insert((f.clone(), args.len()));
        }
        args.iter().for_each(|a| function_arities(a, out));
    }
}

type Binding = BTreeMap<Symbol, Term>;

fn match_lit(pattern: &Literal, lit: &Literal, th: &mut Binding) -> bool {
    fn mt(p: &Term, t: &Term, th: &mut Binding) -> bool {
        match p {
            Term::Var(v) => match th.get(v) {
                Some(b) => b == t,
                None => {
                    th.insert(v.clone(), t.clone());
                    true
                }
            },
            Term::App(f, ps) => match t {
                Term::App(g, ts) if f == g && ps.len() == ts.len() => ps.iter().zip(ts).all(|(a, b)| mt(a, b, th)),
                _ => false,
            },
        }
    }
    pattern.positive == lit.positive
        && pattern.pred == lit.pred
        && pattern.args.len() == lit.args.len()
        && pattern.args.iter().zip(&lit.args).all(|(p, t)| mt(p, t, th))
}

/// Independent check of a closed tableau against `clauses`: every node
/// group instantiates its origin clause, every leaf is closed by a
/// syntactically complementary parent or ancestor, and no branch repeats
/// a literal. On failure the error names the offending path.
pub fn check_tableau(root: &TableauNode, clauses: &[Clause]) -> Result<(), String> {
    if root.literal.is_some() {
        return Err("root carries a literal".into());
    }
    if root.children.is_empty() {
        let ok = root.clause_origin.and_then(|o| clauses.get(o)).is_some_and(Clause::is_empty);
        return if ok { Ok(()) } else { Err("empty tableau without an empty clause".into()) };
    }
    let mut branch = Vec::new();
    check_node(root, clauses, &mut branch, &mut Vec::new())
}

fn check_group(children: &[TableauNode], clauses: &[Clause], path: &[usize]) -> Result<(), String> {
    let origin = children[0].clause_origin.ok_or_else(|| format!("{path:?}: missing origin"))?;
    if children.iter().any(|c| c.clause_origin != Some(origin)) {
        return Err(format!("{path:?}: mixed origins"));
    }
    let clause = clauses.get(origin).ok_or_else(|| format!("{path:?}: unknown clause {origin}"))?;
    let mut th = Binding::new();
    let ok = clause.literals.len() == children.len()
        && clause
            .literals
            .iter()
            .zip(children)
            .all(|(l, c)| c.literal.as_ref().is_some_and(|lit| match_lit(l, lit, &mut th)));
    if ok {
        Ok(())
    } else {
        Err(format!("{path:?}: node group is not an instance of clause {origin}"))
    }
}

fn check_node(
    node: &TableauNode,
    clauses: &[Clause],
    branch: &mut Vec<Literal>,
    path: &mut Vec<usize>,
) -> Result<(), String> {
    if let Some(l) = &node.literal {
        if branch.contains(l) {
            return Err(format!("{path:?}: irregular branch repeats {l:?}"));
        }
    }
    if node.children.is_empty() {
        let lit = node.literal.as_ref().ok_or_else(|| format!("{path:?}: leaf without literal"))?;
        return match node.closure {
            Some(Closure::ByExtension) => match branch.last() {
                Some(parent) if parent.is_complement_of(lit) => Ok(()),
                _ => Err(format!("{path:?}: extension leaf not complementary to its parent")),
            },
            Some(Closure::ByReduction { ancestor_depth }) => match ancestor_depth.checked_sub(1).and_then(|d| branch.get(d)) {
                Some(anc) if anc.is_complement_of(lit) && ancestor_depth < branch.len() + 1 => Ok(()),
                _ => Err(format!("{path:?}: reduction leaf not complementary to ancestor {ancestor_depth}")),
            },
            None => Err(format!("{path:?}: open leaf")),
        };
    }
    if node.closure.is_some() {
        return Err(format!("{path:?}: inner node marked closed"));
    }
    check_group(&node.children, clauses, path)?;
    if let Some(l) = &node.literal {
        branch.push(l.clone());
    }
    for (i, c) in node.children.iter().enumerate() {
        path.push(i);
        check_node(c, clauses, branch, path)?;
        path.pop();
    }
    if node.literal.is_some() {
        branch.pop();
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidityVerdict {
    Valid(Box<Proof>),
    NotValid(Model),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityConfig {
    pub model_max: usize,
    pub model_budget: ModelBudget,
    pub limits: ProverLimits,
}

impl Default for ValidityConfig {
    fn default() -> Self {
        ValidityConfig { model_max: 4, model_budget: ModelBudget::default(), limits: ProverLimits::default() }
    }
}

/// Universal closure over the free individual variables.
pub fn universal_closure(f: &Formula) -> Formula {
    Formula::forall(free_vars(f).into_iter().collect(), f.clone())
}

/// Clauses for refuting `f`: plain CNF, falling back to the definitional
/// form when distribution exceeds the size guard.
pub fn refutation_clauses(f: &Formula, fresh: &mut FreshNames) -> Result<ClauseSet, TransformError> {
    Ok(simplify_clauses(&clauses_of(f, fresh)?, &ProtectedPreds::none()))
}

pub(crate) fn clauses_of(f: &Formula, fresh: &mut FreshNames) -> Result<ClauseSet, TransformError> {
    match cnf(f, fresh) {
        Err(TransformError::TooManyClauses(_)) => Ok(definitional_cnf(f, fresh)?.0),
        r => r,
    }
}

/// Search for a countermodel of `f` first, then for a proof.
pub fn validity(f: &Formula, cfg: &ValidityConfig) -> Result<ValidityVerdict, TransformError> {
    let neg = Formula::not(universal_closure(f));
    if let Some(m) = find_model(&neg, cfg.model_max, &cfg.model_budget)? {
        return Ok(ValidityVerdict::NotValid(m));
    }
    let mut fresh = FreshNames::new();
    fresh.reserve_all(f.symbols());
    let cs = refutation_clauses(&neg, &mut fresh)?;
    Ok(match prove(&cs, &cfg.limits) {
        ProofResult::Proved(p) => ValidityVerdict::Valid(Box::new(p)),
        _ => ValidityVerdict::Unknown,
    })
}

/// Entailment `premise ⊨ conclusion` by proof search alone (no model
/// search); `Some(false)` is never returned, only `None` for failure.
pub fn entails(premise: &Formula, conclusion: &Formula, limits: &ProverLimits) -> Option<Proof> {
    let f = Formula::and(vec![universal_closure(premise), Formula::not(universal_closure(conclusion))]);
    let mut fresh = FreshNames::new();
    fresh.reserve_all(f.symbols());
    let cs = refutation_clauses(&f, &mut fresh).ok()?;
    match prove(&cs, limits) {
        ProofResult::Proved(p) => Some(p),
        _ => None,
    }
}
