use std::collections::{BTreeMap, BTreeSet};

use super::{Clause, ClauseSet, Literal, ProtectedPreds};
use crate::syntax::{Symbol, Term};

type Binding = BTreeMap<Symbol, Term>;

/// Clausal simplification to a fixpoint: tautology deletion, duplicate
/// literal removal, subsumption, subsumption resolution (which includes
/// unit propagation) and purity deletion for predicates outside
/// `protect`. Equality is always protected.
pub fn simplify_clauses(cs: &ClauseSet, protect: &ProtectedPreds) -> ClauseSet {
    let mut clauses: Vec<Clause> = cs.clauses.clone();
    loop {
        let mut changed = false;
        for c in &mut clauses {
            let n = c.len();
            c.dedup();
            changed |= c.len() != n;
        }
        let n = clauses.len();
        clauses.retain(|c| !c.is_tautology());
        changed |= clauses.len() != n;
        changed |= remove_subsumed(&mut clauses);
        changed |= subsumption_resolution(&mut clauses);
        changed |= purity(&mut clauses, protect);
        if !changed {
            break;
        }
    }
    let mut out = ClauseSet::new(clauses);
    out.skolem_symbols = cs.skolem_symbols.clone();
    out
}

fn remove_subsumed(clauses: &mut Vec<Clause>) -> bool {
    let mut dead = vec![false; clauses.len()];
    for i in 0..clauses.len() {
        if dead[i] {
            continue;
        }
        for j in 0..clauses.len() {
            if i != j && !dead[j] && subsumes(&clauses[i], &clauses[j]) {
                dead[j] = true;
            }
        }
    }
    let any = dead.iter().any(|d| *d);
    let mut k = 0;
    clauses.retain(|_| {
        k += 1;
        !dead[k - 1]
    });
    any
}

/// Does `c` θ-subsume `d` (with `|c| <= |d|`)? The variables of `d` are
/// treated as constants.
pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    c.len() <= d.len() && subsume_from(&c.literals, &d.literals, None, &mut Binding::new())
}

fn subsume_from(c: &[Literal], d: &[Literal], skip: Option<usize>, th: &mut Binding) -> bool {
    let Some((first, rest)) = c.split_first() else {
        return true;
    };
    for (j, m) in d.iter().enumerate() {
        if Some(j) == skip || m.positive != first.positive || m.pred != first.pred || m.args.len() != first.args.len() {
            continue;
        }
        let mut th2 = th.clone();
        if first.args.iter().zip(&m.args).all(|(p, t)| match_term(p, t, &mut th2)) && subsume_from(rest, d, skip, &mut th2) {
            *th = th2;
            return true;
        }
    }
    false
}

pub(crate) fn match_term(p: &Term, t: &Term, th: &mut Binding) -> bool {
    match p {
        Term::Var(v) => match th.get(v) {
            Some(b) => b == t,
            None => {
                th.insert(v.clone(), t.clone());
                true
            }
        },
        Term::App(f, ps) => match t {
            Term::App(g, ts) if f == g && ps.len() == ts.len() => ps.iter().zip(ts).all(|(a, b)| match_term(a, b, th)),
            _ => false,
        },
    }
}

/// If `c = c' ∨ L` and `d ⊇ c'θ ∨ ¬Lθ`, the resolvent `d - ¬Lθ` replaces `d`.
fn subsumption_resolution(clauses: &mut [Clause]) -> bool {
    let mut changed = false;
    for j in 0..clauses.len() {
        let mut again = true;
        while again {
            again = false;
            for i in 0..clauses.len() {
                if i == j || clauses[i].len() > clauses[j].len() {
                    continue;
                }
                if let Some(k) = resolvable(&clauses[i], &clauses[j]) {
                    clauses[j].literals.remove(k);
                    changed = true;
                    again = true;
                    break;
                }
            }
        }
    }
    changed
}

fn resolvable(c: &Clause, d: &Clause) -> Option<usize> {
    for (i, l) in c.literals.iter().enumerate() {
        let rest: Vec<Literal> = c.literals.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, x)| x.clone()).collect();
        for (k, m) in d.literals.iter().enumerate() {
            if m.positive == l.positive || m.pred != l.pred || m.args.len() != l.args.len() {
                continue;
            }
            let mut th = Binding::new();
            if l.args.iter().zip(&m.args).all(|(p, t)| match_term(p, t, &mut th))
                && subsume_from(&rest, &d.literals, Some(k), &mut th)
            {
                return Some(k);
            }
        }
    }
    None
}

fn purity(clauses: &mut Vec<Clause>, protect: &ProtectedPreds) -> bool {
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    for c in clauses.iter() {
        for l in &c.literals {
            if l.positive {
                pos.insert(l.key());
            } else {
                neg.insert(l.key());
            }
        }
    }
    let pure: BTreeSet<(Symbol, usize)> = pos
        .symmetric_difference(&neg)
        .filter(|(p, n)| !protect.contains(p, *n))
        .cloned()
        .collect();
    if pure.is_empty() {
        return false;
    }
    let n = clauses.len();
    clauses.retain(|c| !c.literals.iter().any(|l| pure.contains(&l.key())));
    clauses.len() != n
}
