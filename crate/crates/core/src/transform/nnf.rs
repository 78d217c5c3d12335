use std::collections::BTreeSet;

use crate::syntax::{free_vars, Formula};

/// Negation normal form: `Implies`/`Iff` removed, negation only on atoms.
/// Second-order quantifiers are kept and dualized like first-order ones.
pub fn nnf(f: &Formula) -> Formula {
    go(f, true)
}

fn go(f: &Formula, pos: bool) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Eq(..) | Formula::Lambda(..) | Formula::MacroCall(..) => {
            if pos {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::True => if pos { Formula::True } else { Formula::False },
        Formula::False => if pos { Formula::False } else { Formula::True },
        Formula::Not(a) => go(a, !pos),
        Formula::And(fs) | Formula::Or(fs) => {
            let items: Vec<Formula> = fs.iter().map(|g| go(g, pos)).collect();
            if matches!(f, Formula::And(_)) == pos {
                flat_and(items)
            } else {
                flat_or(items)
            }
        }
        Formula::Implies(a, b) => {
            if pos {
                flat_or(vec![go(a, false), go(b, true)])
            } else {
                flat_and(vec![go(a, true), go(b, false)])
            }
        }
        Formula::Iff(a, b) => {
            if pos {
                flat_and(vec![flat_or(vec![go(a, false), go(b, true)]), flat_or(vec![go(a, true), go(b, false)])])
            } else {
                flat_or(vec![flat_and(vec![go(a, true), go(b, false)]), flat_and(vec![go(a, false), go(b, true)])])
            }
        }
        Formula::ForAll(vs, b) | Formula::Exists(vs, b) => {
            let body = go(b, pos);
            if matches!(f, Formula::ForAll(..)) == pos {
                Formula::ForAll(vs.clone(), Box::new(body))
            } else {
                Formula::Exists(vs.clone(), Box::new(body))
            }
        }
        Formula::ForAll2(ps, b) | Formula::Exists2(ps, b) => {
            let body = go(b, pos);
            if matches!(f, Formula::ForAll2(..)) == pos {
                Formula::ForAll2(ps.clone(), Box::new(body))
            } else {
                Formula::Exists2(ps.clone(), Box::new(body))
            }
        }
    }
}

pub(crate) fn flat_and(items: Vec<Formula>) -> Formula {
    let mut out = Vec::new();
    for i in items {
        match i {
            Formula::And(inner) => out.extend(inner),
            g => out.push(g),
        }
    }
    Formula::and(out)
}

pub(crate) fn flat_or(items: Vec<Formula>) -> Formula {
    let mut out = Vec::new();
    for i in items {
        match i {
            Formula::Or(inner) => out.extend(inner),
            g => out.push(g),
        }
    }
    Formula::or(out)
}

/// Negate `f`, moving the negation inward only as far as needed to
/// cancel double negations and constants; implications keep their shape
/// where they are not negated.
pub fn push_not(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Not(a) => (**a).clone(),
        Formula::And(fs) => flat_or(fs.iter().map(push_not).collect()),
        Formula::Or(fs) => flat_and(fs.iter().map(push_not).collect()),
        Formula::Implies(a, b) => flat_and(vec![(**a).clone(), push_not(b)]),
        Formula::ForAll(vs, b) => Formula::Exists(vs.clone(), Box::new(push_not(b))),
        Formula::Exists(vs, b) => Formula::ForAll(vs.clone(), Box::new(push_not(b))),
        Formula::ForAll2(ps, b) => Formula::Exists2(ps.clone(), Box::new(push_not(b))),
        Formula::Exists2(ps, b) => Formula::ForAll2(ps.clone(), Box::new(push_not(b))),
        _ => Formula::not(f.clone()),
    }
}

/// Equivalence-preserving cleanup: constants propagated, nested
/// conjunctions and disjunctions flattened, duplicate and complementary
/// members handled, vacuous quantifiers dropped.
pub fn simplify_formula(f: &Formula) -> Formula {
    match f {
        Formula::Eq(a, b) if a == b => Formula::True,
        Formula::Not(a) => match simplify_formula(a) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(b) => *b,
            g => Formula::not(g),
        },
        Formula::And(fs) | Formula::Or(fs) => {
            let is_and = matches!(f, Formula::And(_));
            let (unit, zero) = if is_and { (Formula::True, Formula::False) } else { (Formula::False, Formula::True) };
            let mut out: Vec<Formula> = Vec::new();
            for g in fs {
                let g = simplify_formula(g);
                let parts = match g {
                    Formula::And(inner) if is_and => inner,
                    Formula::Or(inner) if !is_and => inner,
                    g => vec![g],
                };
                for p in parts {
                    if p == zero {
                        return zero;
                    }
                    if p != unit && !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
            let seen: BTreeSet<&Formula> = out.iter().collect();
            if out.iter().any(|g| matches!(g, Formula::Not(a) if seen.contains(a.as_ref()))) {
                return zero;
            }
            if is_and {
                Formula::and(out)
            } else {
                Formula::or(out)
            }
        }
        Formula::Implies(a, b) => match (simplify_formula(a), simplify_formula(b)) {
            (Formula::True, b) => b,
            (Formula::False, _) | (_, Formula::True) => Formula::True,
            (a, Formula::False) => simplify_formula(&push_not(&a)),
            (a, b) if a == b => Formula::True,
            (a, b) => Formula::implies(a, b),
        },
        Formula::Iff(a, b) => match (simplify_formula(a), simplify_formula(b)) {
            (Formula::True, g) | (g, Formula::True) => g,
            (Formula::False, g) | (g, Formula::False) => simplify_formula(&push_not(&g)),
            (a, b) if a == b => Formula::True,
            (a, b) => Formula::iff(a, b),
        },
        Formula::ForAll(vs, b) | Formula::Exists(vs, b) => {
            let body = simplify_formula(b);
            let fv = free_vars(&body);
            let vs: Vec<_> = vs.iter().filter(|v| fv.contains(*v)).cloned().collect();
            if vs.is_empty() {
                body
            } else if matches!(f, Formula::ForAll(..)) {
                Formula::ForAll(vs, Box::new(body))
            } else {
                Formula::Exists(vs, Box::new(body))
            }
        }
        Formula::ForAll2(ps, b) | Formula::Exists2(ps, b) => {
            let body = simplify_formula(b);
            let ps: Vec<_> = ps.iter().filter(|p| body.mentions_pred(p)).cloned().collect();
            if ps.is_empty() {
                body
            } else if matches!(f, Formula::ForAll2(..)) {
                Formula::ForAll2(ps, Box::new(body))
            } else {
                Formula::Exists2(ps, Box::new(body))
            }
        }
        _ => f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use crate::transform::testutil::equivalent;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn basic_nnf() {
        assert_eq!(nnf(&p("~(p -> q)")), p("p, ~q"));
        assert_eq!(nnf(&p("~all(x, q(x))")), p("ex(x, ~q(x))"));
        assert_eq!(nnf(&p("~ex2(r, r(a))")), p("all2(r, ~r(a))"));
    }

    #[test]
    fn nnf_preserves_truth_table() {
        for s in ["~(p <-> (q ; ~r))", "(p -> q) -> ~(q, r)", "~~(p ; (q <-> r)), true"] {
            assert!(equivalent(&p(s), &nnf(&p(s))), "{s}");
        }
    }

    #[test]
    fn simplification() {
        assert_eq!(simplify_formula(&p("(true, p), (q ; false)")), p("p, q"));
        assert_eq!(simplify_formula(&p("p ; ~p")), Formula::True);
        assert_eq!(simplify_formula(&p("all(x, q)")), p("q"));
        assert_eq!(simplify_formula(&p("(p -> false)")), p("~p"));
        assert_eq!(push_not(&p("p -> q")), p("p, ~q"));
    }
}
