use std::collections::BTreeMap;

use crate::fresh::FreshNames;
use crate::syntax::{free_vars, nonvar_symbols, rename_bound_apart, subst, Formula, Symbol, Term};

/// Replace existential quantifiers of an NNF formula by Skolem terms over
/// the enclosing universal variables that occur free below the quantifier.
/// Bound variables are first renamed apart. Returns the new symbols with
/// their arities.
pub fn skolemize(f: &Formula, fresh: &mut FreshNames) -> (Formula, BTreeMap<Symbol, usize>) {
    fresh.reserve_all(f.symbols());
    let mut used = nonvar_symbols(f);
    used.extend(free_vars(f));
    let f = rename_bound_apart(f, &mut used);
    let mut map = BTreeMap::new();
    let out = walk(&f, &mut Vec::new(), fresh, &mut map);
    (out, map)
}

fn walk(f: &Formula, univ: &mut Vec<Symbol>, fresh: &mut FreshNames, map: &mut BTreeMap<Symbol, usize>) -> Formula {
    match f {
        Formula::ForAll(vs, b) => {
            let d = univ.len();
            univ.extend(vs.iter().cloned());
            let body = walk(b, univ, fresh, map);
            univ.truncate(d);
            Formula::ForAll(vs.clone(), Box::new(body))
        }
        Formula::Exists(vs, b) => {
            let fv = free_vars(f);
            let deps: Vec<Term> = univ.iter().filter(|u| fv.contains(*u)).cloned().map(Term::Var).collect();
            let mut sub = BTreeMap::new();
            for v in vs {
                let sk = fresh.fresh_indexed("sk");
                map.insert(sk.clone(), deps.len());
                sub.insert(v.clone(), Term::App(sk, deps.clone()));
            }
            walk(&subst(b, &sub), univ, fresh, map)
        }
        _ => f.map_children(&mut |c| walk(c, univ, fresh, map)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn constant_and_function() {
        let (g, m) = skolemize(&parse_formula("ex(x, p(x))").unwrap(), &mut FreshNames::new());
        assert_eq!(g, parse_formula("p(sk1)").unwrap());
        assert_eq!(m[&Symbol::new("sk1")], 0);
        let (g, m) = skolemize(&parse_formula("all(x, ex(y, p(x,y)))").unwrap(), &mut FreshNames::new());
        assert_eq!(g, parse_formula("all(x, p(x, sk1(x)))").unwrap());
        assert_eq!(m[&Symbol::new("sk1")], 1);
    }

    #[test]
    fn only_relevant_dependencies() {
        let (g, _) = skolemize(&parse_formula("all(x, (q(x) ; ex(y, p(y))))").unwrap(), &mut FreshNames::new());
        assert_eq!(g, parse_formula("all(x, (q(x) ; p(sk1)))").unwrap());
    }
}
