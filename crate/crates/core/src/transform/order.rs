use std::cmp::Ordering;

use super::{Clause, Literal};
use crate::syntax::Term;

/// Prolog standard order: variables, then numbers, then constants, then
/// compound terms by arity, name and arguments.
pub fn cmp_term(a: &Term, b: &Term) -> Ordering {
    fn rank(t: &Term) -> u8 {
        match t {
            Term::Var(_) => 0,
            Term::App(s, args) if args.is_empty() && s.is_numeral() => 1,
            Term::App(_, args) if args.is_empty() => 2,
            Term::App(..) => 3,
        }
    }
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => x.cmp(y),
        (Term::App(f, xs), Term::App(g, ys)) if rank(a) == rank(b) => {
            if rank(a) == 1 {
                let n = |s: &str| s.parse::<u128>().unwrap_or(u128::MAX);
                return n(f.as_str()).cmp(&n(g.as_str())).then_with(|| f.cmp(g));
            }
            xs.len()
                .cmp(&ys.len())
                .then_with(|| f.cmp(g))
                .then_with(|| xs.iter().zip(ys).map(|(x, y)| cmp_term(x, y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal))
        }
        _ => rank(a).cmp(&rank(b)),
    }
}

/// Negative before positive, then the atoms in standard order.
pub fn cmp_literal(a: &Literal, b: &Literal) -> Ordering {
    a.positive.cmp(&b.positive).then_with(|| {
        cmp_term(&Term::App(a.pred.clone(), a.args.clone()), &Term::App(b.pred.clone(), b.args.clone()))
    })
}

fn cmp_clause(a: &Clause, b: &Clause) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        a.literals
            .iter()
            .zip(&b.literals)
            .map(|(x, y)| cmp_literal(x, y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// Sort literals within each clause, then clauses by length and literals.
pub fn sort_clauses(cs: &mut [Clause]) {
    for c in cs.iter_mut() {
        c.literals.sort_by(cmp_literal);
    }
    cs.sort_by(cmp_clause);
}
