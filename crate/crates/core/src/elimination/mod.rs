//! Second-order quantifier elimination.
//!
//! [`eliminate`] removes `ex2`/`all2` quantifiers innermost first. Each
//! predicate is brought into clausal form, simplified with the predicate
//! left unprotected, and then either rewritten with Ackermann's lemma or,
//! when a ground atom of the predicate blocks that, split on the truth
//! value of that atom. Anything else ends in
//! [`ElimError::EliminationFailed`].

mod oracle;

pub use oracle::{so_equivalent_finite, OracleError, OracleOutcome};

use std::collections::{BTreeMap, BTreeSet};

use crate::fresh::FreshNames;
use crate::syntax::{
    free_vars, rename_bound_apart, signature_of, subst, Formula, Symbol, Term,
};
use crate::transform::{
    cnf, nnf, push_not, shape_c6, simplify_clauses, simplify_formula, sort_clauses, unskolemize, Clause, ClauseSet,
    ProtectedPreds, TransformError,
};

pub const DEFAULT_MAX_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `all(x̄, A(x̄) -> P(x̄))` with `P` only negative in the rest.
    ImpliedBy,
    /// `all(x̄, P(x̄) -> A(x̄))` with `P` only positive in the rest.
    Implies,
}

/// `ex2(P, definition ∧ rest)` in a shape Ackermann's lemma applies to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AckermannForm {
    pub pred: Symbol,
    pub params: Vec<Symbol>,
    /// The `A` side, free in at most `params`; must not mention `pred`.
    pub definition: Formula,
    pub rest: Formula,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ElimError {
    #[error("`{0}` occurs in its own definition")]
    Recursive(Symbol),
    #[error("`{0}` occurs with both polarities in the rest")]
    MixedPolarity(Symbol),
    #[error("no rewriting step applies to {stuck}")]
    EliminationFailed { stuck: Box<Formula> },
    #[error("atom to forget must be a ground atom")]
    NotGroundAtom,
    #[error(transparent)]
    Transform(#[from] TransformError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimpPipeline {
    C6,
}

impl SimpPipeline {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "c6" => Some(SimpPipeline::C6),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElimOptions {
    pub simp_result: Option<SimpPipeline>,
    /// Rewriting steps allowed per quantified predicate.
    pub max_steps: usize,
}

impl Default for ElimOptions {
    fn default() -> Self {
        ElimOptions { simp_result: None, max_steps: DEFAULT_MAX_STEPS }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub formula: Formula,
    /// Skolem functions that could not be turned back into quantifiers.
    pub residual_skolems: BTreeSet<Symbol>,
}

/// Rewrite with Ackermann's lemma: every atom `P(t̄)` of the rest becomes
/// the definition instantiated at `t̄`.
pub fn ackermann_rewrite(af: &AckermannForm) -> Result<Formula, ElimError> {
    if af.definition.mentions_pred(&af.pred) {
        return Err(ElimError::Recursive(af.pred.clone()));
    }
    let sig = signature_of(&af.rest).map_err(|e| TransformError::IllFormed(e.to_string()))?;
    if let Some(info) = sig.predicates.get(&af.pred) {
        let wrong = match af.orientation {
            Orientation::ImpliedBy => info.polarities.pos,
            Orientation::Implies => info.polarities.neg,
        };
        if wrong {
            return Err(ElimError::MixedPolarity(af.pred.clone()));
        }
    }
    Ok(replace_pred(&af.rest, &af.pred, &|args| {
        let sub: BTreeMap<Symbol, Term> = af.params.iter().cloned().zip(args.iter().cloned()).collect();
        subst(&af.definition, &sub)
    }))
}

fn replace_pred(f: &Formula, p: &Symbol, by: &dyn Fn(&[Term]) -> Formula) -> Formula {
    match f {
        Formula::Atom(q, args) if q == p => by(args),
        Formula::ForAll2(ps, _) | Formula::Exists2(ps, _) if ps.contains(p) => f.clone(),
        _ => f.map_children(&mut |c| replace_pred(c, p, by)),
    }
}

/// Forget the ground atom `atom` in `f`: the disjunction of `f` with the
/// atom's value forced each way, other instances of the predicate kept
/// apart by equality guards.
pub fn forget_ground_atom(f: &Formula, atom: &Formula) -> Result<Formula, ElimError> {
    let Formula::Atom(p, ground) = atom else {
        return Err(ElimError::NotGroundAtom);
    };
    if !ground.iter().all(Term::is_ground) {
        return Err(ElimError::NotGroundAtom);
    }
    let plus = replace_pred(f, p, &|args| {
        if args == ground.as_slice() {
            return Formula::True;
        }
        let a = Formula::Atom(p.clone(), args.to_vec());
        Formula::Or(vec![args_equal(args, ground), Formula::And(vec![args_differ(args, ground), a])])
    });
    let minus = replace_pred(f, p, &|args| {
        if args == ground.as_slice() {
            return Formula::False;
        }
        Formula::And(vec![args_differ(args, ground), Formula::Atom(p.clone(), args.to_vec())])
    });
    Ok(simplify_formula(&Formula::Or(vec![plus, minus])))
}

fn args_equal(a: &[Term], b: &[Term]) -> Formula {
    Formula::and(a.iter().zip(b).map(|(s, t)| Formula::Eq(s.clone(), t.clone())).collect())
}

fn args_differ(a: &[Term], b: &[Term]) -> Formula {
    Formula::or(a.iter().zip(b).map(|(s, t)| Formula::not(Formula::Eq(s.clone(), t.clone()))).collect())
}

/// Eliminate every second-order quantifier of a macro-expanded formula.
pub fn eliminate(f: &Formula, opts: &ElimOptions) -> Result<Elimination, ElimError> {
    if f.has_macro_residue() {
        return Err(TransformError::Unexpanded.into());
    }
    let mut fresh = FreshNames::new();
    fresh.reserve_all(f.symbols());
    let mut st = State { fresh, opts, residual: BTreeSet::new() };
    let g = simplify_formula(&st.walk(f)?);
    let formula = match opts.simp_result {
        Some(SimpPipeline::C6) => shape_c6(&g, &mut st.fresh)?,
        None => g,
    };
    Ok(Elimination { formula, residual_skolems: st.residual })
}

struct State<'a> {
    fresh: FreshNames,
    opts: &'a ElimOptions,
    residual: BTreeSet<Symbol>,
}

impl State<'_> {
    fn walk(&mut self, f: &Formula) -> Result<Formula, ElimError> {
        match f {
            Formula::Exists2(ps, body) => {
                let body = self.walk(body)?;
                self.block(ps, &body)
            }
            Formula::ForAll2(ps, body) => {
                let body = self.walk(body)?;
                let r = self.block(ps, &Formula::not(body))?;
                Ok(push_negations(&push_not(&r)))
            }
            _ => f.try_map_children(&mut |c| self.walk(c)),
        }
    }

    /// `ex2(ps, body)` for first-order `body`.
    fn block(&mut self, ps: &[Symbol], body: &Formula) -> Result<Formula, ElimError> {
        let body = simplify_formula(&nnf(body));
        let conjuncts = match body {
            Formula::And(items) => items,
            g => vec![g],
        };
        let (inner, outer): (Vec<Formula>, Vec<Formula>) =
            conjuncts.into_iter().partition(|c| ps.iter().any(|p| c.mentions_pred(p)));
        if inner.is_empty() {
            return Ok(Formula::and(outer));
        }
        let inner = Formula::and(inner);

        let free: Vec<Symbol> = free_vars(&inner).into_iter().collect();
        let mut frozen = BTreeMap::new();
        let mut thaw = BTreeMap::new();
        for v in &free {
            let c = self.fresh.fresh(&format!("{v}_"));
            frozen.insert(v.clone(), Term::App(c.clone(), Vec::new()));
            thaw.insert(c, v.clone());
        }
        let mut cs = cnf(&subst(&inner, &frozen), &mut self.fresh)?;
        let mut unprotected: BTreeSet<Symbol> = ps.iter().cloned().collect();
        for p in ps {
            let mut steps = 0;
            cs = self.eliminate_pred(p, cs, &unprotected, &mut steps)?;
            unprotected.remove(p);
        }
        let cs = resolve_disequations(&cs);
        let mut cs = simplify_clauses(&cs, &ProtectedPreds::all_of(&cs));
        sort_clauses(&mut cs.clauses);
        let un = unskolemize(&cs);
        self.residual.extend(un.residual);
        let mut used: BTreeSet<Symbol> = free.iter().cloned().collect();
        let result = thaw_constants(&rename_bound_apart(&un.formula, &mut used), &thaw);
        let mut all = outer;
        all.push(result);
        Ok(simplify_formula(&Formula::and(all)))
    }

    fn eliminate_pred(
        &mut self,
        p: &Symbol,
        cs: ClauseSet,
        unprotected: &BTreeSet<Symbol>,
        steps: &mut usize,
    ) -> Result<ClauseSet, ElimError> {
        *steps += 1;
        let stuck = |cs: &ClauseSet| ElimError::EliminationFailed {
            stuck: Box::new(Formula::Exists2(vec![p.clone()], Box::new(cs.to_formula()))),
        };
        if *steps > self.opts.max_steps {
            return Err(stuck(&cs));
        }
        let protect =
            ProtectedPreds(cs.predicates().into_iter().filter(|(q, _)| !unprotected.contains(q)).collect());
        let cs = simplify_clauses(&resolve_disequations(&cs), &protect);
        if !cs.clauses.iter().any(|c| c.literals.iter().any(|l| &l.pred == p)) {
            return Ok(cs);
        }
        for orientation in [Orientation::ImpliedBy, Orientation::Implies] {
            if let Some(af) = self.clausal_form(p, &cs, orientation) {
                let g = ackermann_rewrite(&af)?;
                let mut out = cnf(&g, &mut self.fresh)?;
                out.skolem_symbols.extend(cs.skolem_symbols.clone());
                return Ok(out);
            }
        }
        let Some(atom) = split_atom(p, &cs) else {
            return Err(stuck(&cs));
        };
        let whole = cs.to_formula();
        let mut branches = Vec::new();
        for value in [true, false] {
            let g = simplify_formula(&replace_pred(&whole, p, &|args| {
                if args == atom.as_slice() {
                    return if value { Formula::True } else { Formula::False };
                }
                let a = Formula::Atom(p.clone(), args.to_vec());
                if value {
                    Formula::or(vec![args_equal(args, &atom), a])
                } else {
                    Formula::and(vec![args_differ(args, &atom), a])
                }
            }));
            let mut branch = cnf(&g, &mut self.fresh)?;
            branch.skolem_symbols.extend(cs.skolem_symbols.clone());
            let branch = self.eliminate_pred(p, branch, unprotected, steps)?;
            branches.push(branch.to_formula());
        }
        let mut out = cnf(&simplify_formula(&Formula::or(branches)), &mut self.fresh)?;
        out.skolem_symbols.extend(cs.skolem_symbols.clone());
        Ok(out)
    }

    /// Read `cs` as `definition ∧ rest` for `p` if every clause holding
    /// `p` with the defining sign holds exactly one `p` literal.
    fn clausal_form(&mut self, p: &Symbol, cs: &ClauseSet, orientation: Orientation) -> Option<AckermannForm> {
        let sign = orientation == Orientation::ImpliedBy;
        let mut defs: Vec<&Clause> = Vec::new();
        let mut rest = Vec::new();
        for c in &cs.clauses {
            let with_sign = c.literals.iter().filter(|l| &l.pred == p && l.positive == sign).count();
            let other = c.literals.iter().any(|l| &l.pred == p && l.positive != sign);
            match (with_sign, other) {
                (0, _) => rest.push(c.to_formula()),
                (1, false) => defs.push(c),
                _ => return None,
            }
        }
        let arity = cs.clauses.iter().flat_map(|c| &c.literals).find(|l| &l.pred == p)?.args.len();
        let params: Vec<Symbol> = (0..arity).map(|_| self.fresh.fresh("x")).collect();
        let parts: Vec<Formula> = defs.iter().map(|c| definition_part(p, c, &params, sign)).collect();
        let definition = if sign { Formula::or(parts) } else { Formula::and(parts) };
        Some(AckermannForm { pred: p.clone(), params, definition, rest: Formula::and(rest), orientation })
    }
}

/// One clause `P(t̄) ∨ R` as `ex(ȳ, x̄ = t̄ ∧ ¬R)`, or `¬P(t̄) ∨ R` as
/// `all(ȳ, x̄ ≠ t̄ ∨ R)`. Argument variables are identified with the
/// parameters where possible instead of producing equations.
fn definition_part(p: &Symbol, c: &Clause, params: &[Symbol], sign: bool) -> Formula {
    let lit = c.literals.iter().find(|l| &l.pred == p && l.positive == sign).unwrap();
    let mut sub: BTreeMap<Symbol, Term> = BTreeMap::new();
    for (t, x) in lit.args.iter().zip(params) {
        if let Term::Var(v) = t {
            sub.entry(v.clone()).or_insert_with(|| Term::Var(x.clone()));
        }
    }
    let mut eqs = Vec::new();
    for (t, x) in lit.args.iter().zip(params) {
        let t = crate::syntax::subst_term(t, &sub);
        if t != Term::Var(x.clone()) {
            eqs.push(Formula::Eq(Term::Var(x.clone()), t));
        }
    }
    let others: Vec<Formula> =
        c.literals.iter().filter(|l| *l != lit).map(|l| subst(&l.to_formula(), &sub)).collect();
    let bound: Vec<Symbol> = c.vars_in_order().into_iter().filter(|v| !sub.contains_key(v)).collect();
    if sign {
        let mut body = eqs;
        body.extend(others.iter().map(push_not));
        Formula::exists(bound, Formula::and(body))
    } else {
        let mut body: Vec<Formula> = eqs.into_iter().map(Formula::not).collect();
        body.extend(others);
        Formula::forall(bound, Formula::or(body))
    }
}

/// A ground atom of `p` to split on, preferring one in a clause where `p`
/// occurs with both signs.
fn split_atom(p: &Symbol, cs: &ClauseSet) -> Option<Vec<Term>> {
    let ground = |c: &Clause| {
        c.literals.iter().find(|l| &l.pred == p && l.args.iter().all(Term::is_ground)).map(|l| l.args.clone())
    };
    let mixed = |c: &&Clause| {
        c.literals.iter().any(|l| &l.pred == p && l.positive) && c.literals.iter().any(|l| &l.pred == p && !l.positive)
    };
    cs.clauses.iter().filter(mixed).find_map(ground).or_else(|| cs.clauses.iter().find_map(ground))
}

/// Drop `t = t` from clauses where it occurs negatively and resolve
/// away negative equations `x = t` by instantiating `x` with `t`.
fn resolve_disequations(cs: &ClauseSet) -> ClauseSet {
    let mut out = Vec::new();
    'clauses: for c in &cs.clauses {
        let mut lits = c.literals.clone();
        loop {
            lits.retain(|l| !(l.is_eq() && !l.positive && l.args[0] == l.args[1]));
            if lits.iter().any(|l| l.is_eq() && l.positive && l.args[0] == l.args[1]) {
                continue 'clauses;
            }
            let pick = lits.iter().enumerate().find_map(|(i, l)| {
                if !l.is_eq() || l.positive {
                    return None;
                }
                match (&l.args[0], &l.args[1]) {
                    (Term::Var(x), t) | (t, Term::Var(x)) if !t.has_var(x) => Some((i, x.clone(), t.clone())),
                    _ => None,
                }
            });
            let Some((i, x, t)) = pick else { break };
            lits.remove(i);
            let sub = BTreeMap::from([(x, t)]);
            lits = lits.iter().map(|l| l.map_terms(&mut |u| crate::syntax::subst_term(u, &sub))).collect();
        }
        let mut d = Clause::new(lits);
        d.color = c.color;
        d.dedup();
        out.push(d);
    }
    ClauseSet { clauses: out, skolem_symbols: cs.skolem_symbols.clone() }
}

/// Move negations in front of atoms.
fn push_negations(f: &Formula) -> Formula {
    match f {
        Formula::Not(a) if !matches!(**a, Formula::Atom(..) | Formula::Eq(..)) => push_negations(&push_not(a)),
        _ => f.map_children(&mut push_negations),
    }
}

fn thaw_constants(f: &Formula, thaw: &BTreeMap<Symbol, Symbol>) -> Formula {
    fn term(t: &Term, thaw: &BTreeMap<Symbol, Symbol>) -> Term {
        match t {
            Term::App(c, args) if args.is_empty() => thaw.get(c).map_or_else(|| t.clone(), |v| Term::Var(v.clone())),
            Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| term(a, thaw)).collect()),
            Term::Var(_) => t.clone(),
        }
    }
    if thaw.is_empty() {
        return f.clone();
    }
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| term(a, thaw)).collect()),
        Formula::Eq(a, b) => Formula::Eq(term(a, thaw), term(b, thaw)),
        _ => f.map_children(&mut |c| thaw_constants(c, thaw)),
    }
}
