//! Craig–Lyndon interpolants from two-colored closed clausal tableaux.
//!
//! The premise is clausified as the A side and the negated conclusion as
//! the B side. A closed tableau for their union yields a quantifier-free
//! interpolant, whose side-local terms are then abstracted to quantified
//! variables.

use std::collections::{BTreeMap, BTreeSet};

use crate::fresh::FreshNames;
use crate::prover::{check_tableau, with_equality_axioms, Closure, Proof, ProofResult, ProverLimits, TableauNode};
use crate::syntax::{free_vars, rename_free_pred, substitute, Formula, Symbol, Term};
use crate::transform::{cnf, shape_c6, simplify_formula, Clause, ClauseSet, Color, TransformError, EQ};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IpolError {
    #[error("unsupported second-order shape: {0}")]
    UnsupportedShape(String),
    #[error("no proof found ({0})")]
    NoProof(String),
    #[error("tableau node without color")]
    Uncolored,
    #[error(transparent)]
    Transform(#[from] TransformError),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IpolConfig {
    pub limits: ProverLimits,
    /// Post-process the lifted interpolant with the `c6` pipeline.
    pub shape_c6: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpolant {
    pub formula: Formula,
    /// The quantifier-free interpolant before lifting; remaining tableau
    /// variables appear as variables named `_N`.
    pub ground: Formula,
    pub proof: Proof,
}

/// Drop an existential second-order prefix of `f` and a universal one of
/// `g`, renaming the quantified predicates to fresh symbols.
pub fn reduce_so_entailment(f: &Formula, g: &Formula, fresh: &mut FreshNames) -> Result<(Formula, Formula), IpolError> {
    fresh.reserve_all(f.symbols());
    fresh.reserve_all(g.symbols());
    let strip = |mut h: Formula, existential: bool, fresh: &mut FreshNames| -> Result<Formula, IpolError> {
        loop {
            match h {
                Formula::Exists2(ps, body) if existential => h = rename_all(&body, &ps, fresh),
                Formula::ForAll2(ps, body) if !existential => h = rename_all(&body, &ps, fresh),
                Formula::Exists2(..) | Formula::ForAll2(..) => {
                    let side = if existential { "premise" } else { "conclusion" };
                    return Err(IpolError::UnsupportedShape(format!("second-order prefix of the wrong polarity in the {side}")));
                }
                other if other.is_second_order() => {
                    return Err(IpolError::UnsupportedShape("second-order quantifier below the prefix".into()));
                }
                other => return Ok(other),
            }
        }
    };
    Ok((strip(f.clone(), true, fresh)?, strip(g.clone(), false, fresh)?))
}

fn rename_all(body: &Formula, ps: &[Symbol], fresh: &mut FreshNames) -> Formula {
    ps.iter().fold(body.clone(), |acc, p| rename_free_pred(&acc, p, &fresh.fresh(p.as_str())))
}

/// Function and constant symbols of a formula.
fn function_symbols(f: &Formula) -> BTreeSet<Symbol> {
    fn term(t: &Term, out: &mut BTreeSet<Symbol>) {
        if let Term::App(s, args) = t {
            out.insert(s.clone());
            args.iter().for_each(|a| term(a, out));
        }
    }
    fn walk(f: &Formula, out: &mut BTreeSet<Symbol>) {
        match f {
            Formula::Atom(_, args) => args.iter().for_each(|t| term(t, out)),
            Formula::Eq(a, b) => {
                term(a, out);
                term(b, out);
            }
            _ => f.children().into_iter().for_each(|c| walk(c, out)),
        }
    }
    let mut out = BTreeSet::new();
    walk(f, &mut out);
    out
}

fn clause_symbols(c: &Clause) -> (BTreeSet<Symbol>, BTreeSet<Symbol>) {
    let mut preds = BTreeSet::new();
    let mut funs = BTreeSet::new();
    for l in &c.literals {
        preds.insert(l.pred.clone());
        l.args.iter().for_each(|t| t.collect_symbols(&mut funs));
    }
    (preds, funs)
}

/// Interpolant for `f ⊨ g`.
pub fn interpolate(f: &Formula, g: &Formula, cfg: &IpolConfig) -> Result<Interpolant, IpolError> {
    let mut fresh = FreshNames::new();
    let (f1, g1) = reduce_so_entailment(f, g, &mut fresh)?;

    // Free individual variables are rigid: freeze them to constants.
    let mut frozen: BTreeMap<Symbol, Symbol> = BTreeMap::new();
    let mut sub = BTreeMap::new();
    for v in free_vars(&f1).into_iter().chain(free_vars(&g1)) {
        if !frozen.contains_key(&v) {
            let c = fresh.fresh_indexed(v.as_str());
            sub.insert(v.clone(), Term::App(c.clone(), vec![]));
            frozen.insert(c, v);
        }
    }
    let f1 = substitute(&f1, &sub).map_err(|e| IpolError::UnsupportedShape(e.to_string()))?;
    let g1 = substitute(&g1, &sub).map_err(|e| IpolError::UnsupportedShape(e.to_string()))?;

    let a = cnf(&f1, &mut fresh)?.with_color(Color::A);
    let b = cnf(&Formula::not(g1.clone()), &mut fresh)?.with_color(Color::B);

    let mut f_syms = function_symbols(&f1);
    f_syms.extend(a.skolem_symbols.keys().cloned());
    let g_syms = function_symbols(&g1);
    let shared: BTreeSet<Symbol> = f_syms.intersection(&g_syms).cloned().collect();

    let mut all = ClauseSet::new(a.clauses.iter().chain(&b.clauses).cloned().collect());
    all.skolem_symbols = a.skolem_symbols.iter().chain(&b.skolem_symbols).map(|(k, v)| (k.clone(), *v)).collect();
    let a_preds: BTreeSet<Symbol> = a.predicates().into_iter().map(|(p, _)| p).collect();
    let n_input = all.clauses.len();
    let mut clauses = with_equality_axioms(&all);
    for c in clauses.iter_mut().skip(n_input) {
        let (preds, funs) = clause_symbols(c);
        let on_a = preds.iter().all(|p| a_preds.contains(p)) && funs.iter().all(|s| f_syms.contains(s));
        c.color = Some(if on_a { Color::A } else { Color::B });
    }

    let proof = match crate::prover::search_clauses(&clauses, &cfg.limits) {
        ProofResult::Proved(p) => p,
        ProofResult::DepthExhausted(d) => return Err(IpolError::NoProof(format!("depth {d} exhausted"))),
        ProofResult::ResourceOut => return Err(IpolError::NoProof("inference limit reached".into())),
    };
    debug_assert!(check_tableau(&proof.root, &proof.clauses).is_ok());
    let ground = ground_ipol(&proof.root)?;
    let mut lifted = lift_interpolant(&ground, &shared, &f_syms);
    if !frozen.is_empty() {
        lifted = unfreeze(&lifted, &frozen);
    }
    if cfg.shape_c6 {
        let mut fresh = FreshNames::new();
        fresh.reserve_all(lifted.symbols());
        lifted = shape_c6(&lifted, &mut fresh)?;
    }
    Ok(Interpolant { formula: lifted, ground, proof })
}

fn unfreeze(f: &Formula, frozen: &BTreeMap<Symbol, Symbol>) -> Formula {
    fn term(t: &Term, frozen: &BTreeMap<Symbol, Symbol>) -> Term {
        match t {
            Term::App(c, args) if args.is_empty() && frozen.contains_key(c) => Term::Var(frozen[c].clone()),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| term(a, frozen)).collect()),
            v => v.clone(),
        }
    }
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| term(a, frozen)).collect()),
        Formula::Eq(a, b) => Formula::Eq(term(a, frozen), term(b, frozen)),
        _ => f.map_children(&mut |c| unfreeze(c, frozen)),
    }
}

/// Quantifier-free interpolant of a closed two-colored tableau.
///
/// A leaf closed against a partner literal (its parent for extension
/// steps, an ancestor for reductions) gives `false` when both are A,
/// `true` when both are B, and otherwise the literal of the A side. Inner
/// nodes combine their children with `∨` below an A clause and `∧`
/// below a B clause.
pub fn ground_ipol(root: &TableauNode) -> Result<Formula, IpolError> {
    let mut branch = Vec::new();
    let f = ipol_node(root, &mut branch)?;
    Ok(simplify_formula(&f))
}

fn ipol_node<'a>(n: &'a TableauNode, branch: &mut Vec<&'a TableauNode>) -> Result<Formula, IpolError> {
    if n.children.is_empty() {
        let Some(lit) = &n.literal else {
            // Empty input clause: it alone is inconsistent.
            return match n.color {
                Some(Color::A) => Ok(Formula::False),
                Some(Color::B) => Ok(Formula::True),
                None => Err(IpolError::Uncolored),
            };
        };
        let partner = match n.closure {
            Some(Closure::ByExtension) => branch.last().copied(),
            Some(Closure::ByReduction { ancestor_depth }) => ancestor_depth.checked_sub(1).and_then(|d| branch.get(d).copied()),
            None => None,
        };
        let partner = partner.ok_or_else(|| IpolError::NoProof("open leaf".into()))?;
        return match (n.color, partner.color) {
            (Some(Color::A), Some(Color::A)) => Ok(Formula::False),
            (Some(Color::B), Some(Color::B)) => Ok(Formula::True),
            (Some(Color::A), Some(Color::B)) => Ok(lit.to_formula()),
            (Some(Color::B), Some(Color::A)) => Ok(lit.complement().to_formula()),
            _ => Err(IpolError::Uncolored),
        };
    }
    let color = n.children[0].color.ok_or(IpolError::Uncolored)?;
    if n.literal.is_some() {
        branch.push(n);
    }
    let parts = n.children.iter().map(|c| ipol_node(c, branch)).collect::<Result<Vec<_>, _>>();
    if n.literal.is_some() {
        branch.pop();
    }
    let parts = parts?;
    Ok(match color {
        Color::A => Formula::or(parts),
        Color::B => Formula::and(parts),
    })
}

fn term_depth(t: &Term) -> usize {
    match t {
        Term::Var(_) => 1,
        Term::App(_, args) => 1 + args.iter().map(term_depth).max().unwrap_or(0),
    }
}

const POOL: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

struct Lifter<'a> {
    shared: &'a BTreeSet<Symbol>,
    premise: &'a BTreeSet<Symbol>,
    terms: Vec<(Term, bool)>,
    index: BTreeMap<Term, usize>,
}

impl Lifter<'_> {
    fn placeholder(i: usize) -> Term {
        Term::Var(Symbol::new(format!("#{i}")))
    }

    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::App(f, args) if self.shared.contains(f) => Term::App(f.clone(), args.iter().map(|a| self.term(a)).collect()),
            _ => {
                if let Some(&i) = self.index.get(t) {
                    return Self::placeholder(i);
                }
                let existential = matches!(t, Term::App(f, _) if self.premise.contains(f));
                let i = self.terms.len();
                self.terms.push((t.clone(), existential));
                self.index.insert(t.clone(), i);
                Self::placeholder(i)
            }
        }
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| self.term(a)).collect()),
            Formula::Eq(a, b) => Formula::Eq(self.term(a), self.term(b)),
            _ => f.map_children(&mut |c| self.formula(c)),
        }
    }
}

/// Abstract maximal terms whose head is not shared: premise-only terms
/// become existential variables, conclusion-only and leftover tableau
/// variables universal ones. Smaller terms are quantified further out,
/// existentials first among equals.
pub fn lift_interpolant(i: &Formula, shared: &BTreeSet<Symbol>, premise: &BTreeSet<Symbol>) -> Formula {
    let mut l = Lifter { shared, premise, terms: Vec::new(), index: BTreeMap::new() };
    let body = l.formula(i);
    if l.terms.is_empty() {
        return body;
    }
    let mut order: Vec<usize> = (0..l.terms.len()).collect();
    order.sort_by_key(|&k| (term_depth(&l.terms[k].0), !l.terms[k].1, k));
    let avoid = i.symbols();
    let mut pool = (0..).map(|k: usize| {
        if k < POOL.len() {
            Symbol::new(POOL[k])
        } else {
            Symbol::new(format!("{}{}", POOL[k % POOL.len()], k / POOL.len()))
        }
    });
    let mut names = BTreeMap::new();
    for &k in &order {
        let n = pool.by_ref().find(|s| !avoid.contains(s)).unwrap();
        names.insert(Symbol::new(format!("#{k}")), Term::Var(n));
    }
    let mut out = crate::syntax::subst(&body, &names);
    for &k in order.iter().rev() {
        let Term::Var(v) = &names[&Symbol::new(format!("#{k}"))] else { unreachable!() };
        out = match (l.terms[k].1, out) {
            (true, Formula::Exists(mut vs, b)) => {
                vs.insert(0, v.clone());
                Formula::Exists(vs, b)
            }
            (false, Formula::ForAll(mut vs, b)) => {
                vs.insert(0, v.clone());
                Formula::ForAll(vs, b)
            }
            (true, b) => Formula::exists(vec![v.clone()], b),
            (false, b) => Formula::forall(vec![v.clone()], b),
        };
    }
    out
}

/// One interpolant per premise, each over the vocabulary it shares with
/// the other premises and the conclusion; together they entail `g`.
pub fn symmetric_interpolate(fs: &[Formula], g: &Formula, cfg: &IpolConfig) -> Result<Vec<Formula>, IpolError> {
    let mut done: Vec<Formula> = Vec::new();
    for (i, fi) in fs.iter().enumerate() {
        let others: Vec<Formula> = done.iter().cloned().chain(fs[i + 1..].iter().cloned()).collect();
        let rest = if others.is_empty() { g.clone() } else { Formula::implies(Formula::and(others), g.clone()) };
        done.push(interpolate(fi, &rest, cfg)?.formula);
    }
    Ok(done)
}

/// Symbols with the polarities in which predicates occur, for Lyndon
/// checks: `(predicates with polarity, function symbols)`.
pub fn vocabulary(f: &Formula) -> (BTreeSet<(Symbol, bool)>, BTreeSet<Symbol>) {
    fn walk(f: &Formula, pos: bool, out: &mut BTreeSet<(Symbol, bool)>) {
        match f {
            Formula::Atom(p, _) => {
                out.insert((p.clone(), pos));
            }
            Formula::Eq(..) => {
                out.insert((Symbol::new(EQ), pos));
            }
            Formula::Not(a) => walk(a, !pos, out),
            Formula::Implies(a, b) => {
                walk(a, !pos, out);
                walk(b, pos, out);
            }
            Formula::Iff(a, b) => {
                for s in [true, false] {
                    walk(a, s, out);
                    walk(b, s, out);
                }
            }
            _ => f.children().into_iter().for_each(|c| walk(c, pos, out)),
        }
    }
    let mut preds = BTreeSet::new();
    walk(f, true, &mut preds);
    (preds, function_symbols(f))
}

/// Lyndon condition: every predicate polarity and function symbol of `h`
/// occurs in both `f` and `g`.
pub fn is_lyndon_interpolant_vocabulary(h: &Formula, f: &Formula, g: &Formula) -> bool {
    let (hp, hf) = vocabulary(h);
    let (fp, ff) = vocabulary(f);
    let (gp, gf) = vocabulary(g);
    hp.iter().all(|x| fp.contains(x) && gp.contains(x)) && hf.iter().all(|s| ff.contains(s) && gf.contains(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::entails;
    use crate::syntax::{alpha_eq, parse_formula};
    use crate::transform::testutil::equivalent;

    fn ipol(f: &str, g: &str) -> Formula {
        interpolate(&parse_formula(f).unwrap(), &parse_formula(g).unwrap(), &IpolConfig::default()).unwrap().formula
    }

    #[test]
    fn quantified_example() {
        let h = ipol("all(x, p(a,x)), q", "ex(x, p(x,b)) ; r");
        assert!(alpha_eq(&h, &parse_formula("ex(x, all(y, p(x,y)))").unwrap()), "{h}");
    }

    #[test]
    fn shared_atom() {
        assert_eq!(ipol("p", "p"), parse_formula("p").unwrap());
    }

    #[test]
    fn propositional_vocabulary() {
        let h = ipol("p, q", "p ; r");
        assert!(equivalent(&h, &parse_formula("p").unwrap()), "{h}");
    }

    #[test]
    fn inconsistent_sides() {
        let cs = |s: &str, c| cnf(&parse_formula(s).unwrap(), &mut FreshNames::new()).unwrap().with_color(c);
        let run = |a: &ClauseSet, b: &ClauseSet| {
            let clauses: Vec<Clause> = a.clauses.iter().chain(&b.clauses).cloned().collect();
            let p = crate::prover::search_clauses(&clauses, &ProverLimits::default());
            ground_ipol(&p.proof().unwrap().root).unwrap()
        };
        let empty = ClauseSet::default();
        assert_eq!(run(&cs("p, ~p", Color::A), &empty), Formula::False);
        assert_eq!(run(&empty, &cs("q, ~q", Color::B)), Formula::True);
        assert_eq!(run(&cs("p", Color::A), &cs("~p", Color::B)), parse_formula("p").unwrap());
    }

    #[test]
    fn lifting_maximal_terms() {
        let i = parse_formula("p(f(c))").unwrap();
        let premise: BTreeSet<Symbol> = ["f", "c"].into_iter().map(Symbol::new).collect();
        let h = lift_interpolant(&i, &BTreeSet::new(), &premise);
        assert_eq!(h, parse_formula("ex(x, p(x))").unwrap());
        let shared: BTreeSet<Symbol> = ["f", "c"].into_iter().map(Symbol::new).collect();
        assert_eq!(lift_interpolant(&i, &shared, &premise), i);
    }

    #[test]
    fn second_order_reduction() {
        let mut fresh = FreshNames::new();
        let f = parse_formula("ex2(p, p(a))").unwrap();
        let g = parse_formula("ex(x, x = x)").unwrap();
        let (f1, g1) = reduce_so_entailment(&f, &g, &mut fresh).unwrap();
        assert_eq!(f1, parse_formula("p1(a)").unwrap());
        assert_eq!(g1, g);
        assert!(entails(&f1, &g1, &ProverLimits::default()).is_some());
        let bad = parse_formula("all2(p, p(a))").unwrap();
        assert!(reduce_so_entailment(&bad, &g, &mut FreshNames::new()).is_err());
    }

    #[test]
    fn symmetric() {
        let fs = vec![parse_formula("p").unwrap(), parse_formula("p -> q").unwrap()];
        let hs = symmetric_interpolate(&fs, &parse_formula("q").unwrap(), &IpolConfig::default()).unwrap();
        assert!(equivalent(&hs[0], &fs[0]), "{}", hs[0]);
        assert!(equivalent(&hs[1], &fs[1]), "{}", hs[1]);
    }
}
