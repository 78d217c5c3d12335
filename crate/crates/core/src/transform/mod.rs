//! Normal forms, clausification, clause simplification, Skolemization and
//! its inverse, and the `c6` result-shaping pipeline.

mod clause;
mod clausify;
mod nnf;
mod order;
mod simplify;
mod skolem;
mod unskolem;

pub use clause::{clause_to_formula, clauses_to_formula, Clause, ClauseSet, Color, Literal, ProtectedPreds, EQ};
pub use clausify::{cnf, cnf_with, definitional_cnf, dnf, CnfOptions, DEFAULT_MAX_CLAUSES};
pub use nnf::{nnf, push_not, simplify_formula};
pub use order::{cmp_literal, cmp_term, sort_clauses};
pub use simplify::{simplify_clauses, subsumes};
pub use skolem::skolemize;
pub use unskolem::{unskolemize, Unskolemized};

use crate::fresh::FreshNames;
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("clause limit of {0} exceeded during distribution")]
    TooManyClauses(usize),
    #[error("second-order quantifier in first-order context")]
    SecondOrder,
    #[error("formula still contains macro calls or lambdas")]
    Unexpanded,
    #[error("{0}")]
    IllFormed(String),
}

/// Convert to clauses, simplify with every predicate protected, and read
/// the clauses back as a quantified formula.
pub fn shape_c6(f: &Formula, fresh: &mut FreshNames) -> Result<Formula, TransformError> {
    let cs = cnf(f, fresh)?;
    let protect = ProtectedPreds::all_of(&cs);
    let mut cs = simplify_clauses(&cs, &protect);
    sort_clauses(&mut cs.clauses);
    Ok(unskolemize(&cs).formula)
}

#[cfg(test)]
pub(crate) mod testutil {
    use std::collections::{BTreeMap, BTreeSet};

    use crate::syntax::{Formula, Symbol};

    /// Propositional atoms of a quantifier-free, function-free formula.
    pub fn atoms(f: &Formula, out: &mut BTreeSet<Symbol>) {
        match f {
            Formula::Atom(p, _) => {
                out.insert(p.clone());
            }
            _ => f.children().into_iter().for_each(|c| atoms(c, out)),
        }
    }

    pub fn eval(f: &Formula, v: &BTreeMap<Symbol, bool>) -> bool {
        match f {
            Formula::Atom(p, _) => v[p],
            Formula::True => true,
            Formula::False => false,
            Formula::Not(a) => !eval(a, v),
            Formula::And(fs) => fs.iter().all(|g| eval(g, v)),
            Formula::Or(fs) => fs.iter().any(|g| eval(g, v)),
            Formula::Implies(a, b) => !eval(a, v) || eval(b, v),
            Formula::Iff(a, b) => eval(a, v) == eval(b, v),
            _ => panic!("not propositional: {f}"),
        }
    }

    pub fn assignments(atoms: &BTreeSet<Symbol>) -> Vec<BTreeMap<Symbol, bool>> {
        let list: Vec<&Symbol> = atoms.iter().collect();
        (0..1u32 << list.len())
            .map(|m| list.iter().enumerate().map(|(i, s)| ((*s).clone(), m >> i & 1 == 1)).collect())
            .collect()
    }

    pub fn equivalent(a: &Formula, b: &Formula) -> bool {
        let mut at = BTreeSet::new();
        atoms(a, &mut at);
        atoms(b, &mut at);
        assignments(&at).iter().all(|v| eval(a, v) == eval(b, v))
    }

    pub fn satisfiable(f: &Formula) -> bool {
        let mut at = BTreeSet::new();
        atoms(f, &mut at);
        assignments(&at).iter().any(|v| eval(f, v))
    }
}
