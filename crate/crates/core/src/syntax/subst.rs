//! Capture-avoiding substitution and alpha-equivalence.

use std::collections::{BTreeMap, BTreeSet};

use super::{Arg, Formula, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubstError {
    #[error("`{0}` is not an individual variable; predicate-position bindings go through lambda application")]
    NotIndividual(Symbol),
}

pub fn term_vars(t: &Term, out: &mut BTreeSet<Symbol>) {
    match t {
        Term::Var(v) => {
            out.insert(v.clone());
        }
        Term::App(_, args) => args.iter().for_each(|a| term_vars(a, out)),
    }
}

/// Predicate, function and constant names, bound or free; variables
/// excluded.
pub fn nonvar_symbols(f: &Formula) -> BTreeSet<Symbol> {
    fn term(t: &Term, out: &mut BTreeSet<Symbol>) {
        if let Term::App(s, args) = t {
            out.insert(s.clone());
            args.iter().for_each(|a| term(a, out));
        }
    }
    fn walk(f: &Formula, out: &mut BTreeSet<Symbol>) {
        match f {
            Formula::Atom(p, args) => {
                out.insert(p.clone());
                args.iter().for_each(|t| term(t, out));
            }
            Formula::Eq(a, b) => {
                term(a, out);
                term(b, out);
            }
            Formula::ForAll2(ps, b) | Formula::Exists2(ps, b) => {
                out.extend(ps.iter().cloned());
                walk(b, out);
            }
            _ => f.children().into_iter().for_each(|c| walk(c, out)),
        }
    }
    let mut out = BTreeSet::new();
    walk(f, &mut out);
    out
}

/// Free individual variables.
pub fn free_vars(f: &Formula) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    collect_free(f, &mut Vec::new(), &mut out);
    out
}

fn collect_free(f: &Formula, bound: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
    let add_term = |t: &Term, bound: &Vec<Symbol>, out: &mut BTreeSet<Symbol>| {
        let mut vs = BTreeSet::new();
        term_vars(t, &mut vs);
        out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
    };
    match f {
        Formula::Atom(_, args) => args.iter().for_each(|t| add_term(t, bound, out)),
        Formula::Eq(a, b) => {
            add_term(a, bound, out);
            add_term(b, bound, out);
        }
        Formula::ForAll(vs, b) | Formula::Exists(vs, b) | Formula::Lambda(vs, b) => {
            let d = bound.len();
            bound.extend(vs.iter().cloned());
            collect_free(b, bound, out);
            bound.truncate(d);
        }
        Formula::MacroCall(_, args) => {
            for a in args {
                collect_free_arg(a, bound, out);
            }
        }
        _ => {
            for c in f.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

fn collect_free_arg(a: &Arg, bound: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
    match a {
        Arg::Term(t) => {
            let mut vs = BTreeSet::new();
            term_vars(t, &mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        }
        Arg::Formula(f) => collect_free(f, bound, out),
        Arg::List(items) => items.iter().for_each(|i| collect_free_arg(i, bound, out)),
        Arg::Cons(h, t) => {
            collect_free_arg(h, bound, out);
            collect_free_arg(t, bound, out);
        }
    }
}

/// Replace free occurrences of individual variables, renaming binders
/// that would capture variables of the substituted terms.
pub fn substitute(f: &Formula, sub: &BTreeMap<Symbol, Term>) -> Result<Formula, SubstError> {
    let mut preds = BTreeSet::new();
    collect_preds(f, &mut preds);
    for k in sub.keys() {
        if k.is_param() || preds.contains(k) {
            return Err(SubstError::NotIndividual(k.clone()));
        }
    }
    Ok(subst(f, sub))
}

fn collect_preds(f: &Formula, out: &mut BTreeSet<Symbol>) {
    match f {
        Formula::Atom(p, _) => {
            out.insert(p.clone());
        }
        Formula::ForAll2(ps, b) | Formula::Exists2(ps, b) => {
            out.extend(ps.iter().cloned());
            collect_preds(b, out);
        }
        _ => f.children().into_iter().for_each(|c| collect_preds(c, out)),
    }
}

pub(crate) fn subst_term(t: &Term, sub: &BTreeMap<Symbol, Term>) -> Term {
    match t {
        Term::Var(v) => sub.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| subst_term(a, sub)).collect()),
    }
}

/// Substitution without the domain check; callers guarantee the keys are
/// individual variables.
pub(crate) fn subst(f: &Formula, sub: &BTreeMap<Symbol, Term>) -> Formula {
    if sub.is_empty() {
        return f.clone();
    }
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| subst_term(t, sub)).collect()),
        Formula::Eq(a, b) => Formula::Eq(subst_term(a, sub), subst_term(b, sub)),
        Formula::ForAll(vs, b) => {
            let (vs, b) = subst_binder(vs, b, sub);
            Formula::ForAll(vs, Box::new(b))
        }
        Formula::Exists(vs, b) => {
            let (vs, b) = subst_binder(vs, b, sub);
            Formula::Exists(vs, Box::new(b))
        }
        Formula::Lambda(vs, b) => {
            let (vs, b) = subst_binder(vs, b, sub);
            Formula::Lambda(vs, Box::new(b))
        }
        Formula::MacroCall(n, args) => Formula::MacroCall(n.clone(), args.iter().map(|a| subst_arg(a, sub)).collect()),
        _ => f.map_children(&mut |c| subst(c, sub)),
    }
}

fn subst_arg(a: &Arg, sub: &BTreeMap<Symbol, Term>) -> Arg {
    match a {
        Arg::Term(t) => Arg::Term(subst_term(t, sub)),
        Arg::Formula(f) => Arg::Formula(subst(f, sub)),
        Arg::List(items) => Arg::List(items.iter().map(|i| subst_arg(i, sub)).collect()),
        Arg::Cons(h, t) => Arg::Cons(Box::new(subst_arg(h, sub)), Box::new(subst_arg(t, sub))),
    }
}

fn subst_binder(vs: &[Symbol], body: &Formula, sub: &BTreeMap<Symbol, Term>) -> (Vec<Symbol>, Formula) {
    let body_free = free_vars(body);
    let mut inner: BTreeMap<Symbol, Term> = sub
        .iter()
        .filter(|(k, _)| !vs.contains(k) && body_free.contains(*k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    if inner.is_empty() {
        return (vs.to_vec(), body.clone());
    }
    let mut range_vars = BTreeSet::new();
    for t in inner.values() {
        term_vars(t, &mut range_vars);
    }
    let mut avoid = body.symbols();
    avoid.extend(range_vars.iter().cloned());
    avoid.extend(vs.iter().cloned());
    let mut new_vs = Vec::with_capacity(vs.len());
    for v in vs {
        if range_vars.contains(v) {
            let fresh = fresh_variant(v, &avoid);
            avoid.insert(fresh.clone());
            inner.insert(v.clone(), Term::Var(fresh.clone()));
            new_vs.push(fresh);
        } else {
            new_vs.push(v.clone());
        }
    }
    (new_vs, subst(body, &inner))
}

/// `base` followed by the smallest natural-number suffix not in `avoid`.
pub(crate) fn fresh_variant(base: &Symbol, avoid: &BTreeSet<Symbol>) -> Symbol {
    let stem = base.as_str().trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { base.as_str() } else { stem };
    (1..)
        .map(|i| Symbol::new(format!("{stem}{i}")))
        .find(|s| !avoid.contains(s))
        .unwrap()
}

/// Give every bound individual variable a name that is unique in the
/// formula and not in `used`; names are added to `used`.
pub fn rename_bound_apart(f: &Formula, used: &mut BTreeSet<Symbol>) -> Formula {
    match f {
        Formula::ForAll(vs, b) | Formula::Exists(vs, b) => {
            let mut sub = BTreeMap::new();
            let mut new_vs = Vec::new();
            for v in vs {
                let nv = if used.contains(v) { fresh_variant(v, used) } else { v.clone() };
                used.insert(nv.clone());
                if &nv != v {
                    sub.insert(v.clone(), Term::Var(nv.clone()));
                }
                new_vs.push(nv);
            }
            let body = rename_bound_apart(&subst(b, &sub), used);
            if matches!(f, Formula::ForAll(..)) {
                Formula::ForAll(new_vs, Box::new(body))
            } else {
                Formula::Exists(new_vs, Box::new(body))
            }
        }
        _ => f.map_children(&mut |c| rename_bound_apart(c, used)),
    }
}

/// Equality up to renaming of bound individual variables and bound
/// predicate symbols.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    canonical(a, &mut 0, &BTreeMap::new()) == canonical(b, &mut 0, &BTreeMap::new())
}

fn canonical(f: &Formula, counter: &mut usize, preds: &BTreeMap<Symbol, Symbol>) -> Formula {
    match f {
        Formula::ForAll(vs, b) | Formula::Exists(vs, b) | Formula::Lambda(vs, b) => {
            let mut sub = BTreeMap::new();
            let mut new_vs = Vec::new();
            for v in vs {
                let nv = Symbol::new(format!("_v{counter}"));
                *counter += 1;
                sub.insert(v.clone(), Term::Var(nv.clone()));
                new_vs.push(nv);
            }
            let body = Box::new(canonical(&subst(b, &sub), counter, preds));
            match f {
                Formula::ForAll(..) => Formula::ForAll(new_vs, body),
                Formula::Exists(..) => Formula::Exists(new_vs, body),
                _ => Formula::Lambda(new_vs, body),
            }
        }
        Formula::ForAll2(ps, b) | Formula::Exists2(ps, b) => {
            let mut inner = preds.clone();
            let mut new_ps = Vec::new();
            for p in ps {
                let np = Symbol::new(format!("_P{counter}"));
                *counter += 1;
                inner.insert(p.clone(), np.clone());
                new_ps.push(np);
            }
            let body = Box::new(canonical(b, counter, &inner));
            if matches!(f, Formula::ForAll2(..)) {
                Formula::ForAll2(new_ps, body)
            } else {
                Formula::Exists2(new_ps, body)
            }
        }
        Formula::Atom(p, args) => Formula::Atom(preds.get(p).cloned().unwrap_or_else(|| p.clone()), args.clone()),
        _ => f.map_children(&mut |c| canonical(c, counter, preds)),
    }
}

/// Rename free occurrences of predicate `p` to `q`.
pub fn rename_free_pred(f: &Formula, p: &Symbol, q: &Symbol) -> Formula {
    match f {
        Formula::Atom(r, args) if r == p => Formula::Atom(q.clone(), args.clone()),
        Formula::ForAll2(ps, _) | Formula::Exists2(ps, _) if ps.contains(p) => f.clone(),
        _ => f.map_children(&mut |c| rename_free_pred(c, p, q)),
    }
}
