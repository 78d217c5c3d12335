use std::collections::BTreeMap;

use crate::prover::{eval_formula_budget, EvalError, Model};
use crate::syntax::{free_vars, signature_of, subst, Formula, SignatureError, Symbol, Term};

const EVAL_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Equivalent,
    /// An interpretation where the two formulas take different values.
    Differs(Model),
    /// The enumeration did not fit in the budget at this domain size.
    Overflow { size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Eval(EvalError),
}

/// Compare `f` and `g` in every interpretation of their free symbols over
/// domains of size `1..=max_size`. Free individual variables are shared
/// between the two formulas and interpreted like constants.
pub fn so_equivalent_finite(f: &Formula, g: &Formula, max_size: usize) -> Result<OracleOutcome, OracleError> {
    let mut frees = free_vars(f);
    frees.extend(free_vars(g));
    let mut used = f.symbols();
    used.extend(g.symbols());
    let mut sub = BTreeMap::new();
    for v in frees {
        let c = (0..).map(|i| Symbol::new(format!("{v}_{i}"))).find(|c| !used.contains(c)).unwrap();
        used.insert(c.clone());
        sub.insert(v, Term::App(c, Vec::new()));
    }
    let (f, g) = (subst(f, &sub), subst(g, &sub));
    let mut sig = signature_of(&f)?;
    sig.merge(&signature_of(&g)?);

    let mut budget = EVAL_BUDGET;
    for n in 1..=max_size {
        // (symbol, arguments, is predicate) per cell of every table
        let mut cells: Vec<(Symbol, Vec<usize>, bool)> = Vec::new();
        for (p, info) in &sig.predicates {
            for args in tuples(n, info.arity) {
                cells.push((p.clone(), args, true));
            }
        }
        let funs = sig.functions.iter().map(|(s, a)| (s, *a)).chain(sig.constants.iter().map(|c| (c, 0)));
        for (s, a) in funs {
            for args in tuples(n, a) {
                cells.push((s.clone(), args, false));
            }
        }
        let radix: Vec<u64> = cells.iter().map(|c| if c.2 { 2 } else { n as u64 }).collect();
        let total = radix.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r));
        if total.map_or(true, |t| t > budget) {
            return Ok(OracleOutcome::Overflow { size: n });
        }
        let mut digits = vec![0u64; cells.len()];
        loop {
            let mut m = Model { size: n, ..Default::default() };
            for ((s, args, is_pred), &d) in cells.iter().zip(&digits) {
                if *is_pred {
                    m.predicates.insert((s.clone(), args.clone()), d == 1);
                } else {
                    m.functions.insert((s.clone(), args.clone()), d as usize);
                }
            }
            let a = eval_formula_budget(&m, &f, &mut budget);
            let b = eval_formula_budget(&m, &g, &mut budget);
            match (a, b) {
                (Ok(a), Ok(b)) if a != b => return Ok(OracleOutcome::Differs(m)),
                (Ok(_), Ok(_)) => {}
                (Err(EvalError::Budget), _) | (_, Err(EvalError::Budget)) => {
                    return Ok(OracleOutcome::Overflow { size: n })
                }
                (Err(e), _) | (_, Err(e)) => return Err(OracleError::Eval(e)),
            }
            if !advance(&mut digits, &radix) {
                break;
            }
        }
    }
    Ok(OracleOutcome::Equivalent)
}

fn advance(digits: &mut [u64], radix: &[u64]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radix) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (0..n).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn check(f: &str, g: &str, n: usize) -> OracleOutcome {
        so_equivalent_finite(&parse_formula(f).unwrap(), &parse_formula(g).unwrap(), n).unwrap()
    }

    #[test]
    fn trivial_second_order() {
        assert_eq!(check("ex2(p, p(a))", "true", 3), OracleOutcome::Equivalent);
        assert_eq!(check("ex2(p, (p(a), ~p(b)))", "~(a = b)", 3), OracleOutcome::Equivalent);
    }

    #[test]
    fn difference_found() {
        assert!(matches!(check("all(x, p(x))", "p(a)", 2), OracleOutcome::Differs(m) if m.size == 2));
        assert_eq!(check("all(x, p(x))", "p(a)", 1), OracleOutcome::Equivalent);
    }

    #[test]
    fn overflow_is_distinct() {
        assert!(matches!(
            check("all(x, all(y, r(x,y,x)))", "all(x, all(y, r(x,y,x)))", 4),
            OracleOutcome::Overflow { .. }
        ));
    }
}
