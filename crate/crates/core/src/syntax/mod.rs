//! Formula data model, surface syntax, printers and signatures.

mod lexer;
mod parser;
mod print;
mod signature;
mod subst;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use lexer::{tokenize, tokenize_from, Pos, Token, TokenKind};
pub use parser::{parse_arg, parse_formula, parse_term, Parser, PTerm};
pub use print::{print_arg, print_formula, print_term, PrintOptions, Target};
pub use signature::{signature_of, Polarities, PredInfo, SignatureError, SignatureInfo};
pub use subst::{
    alpha_eq, free_vars, nonvar_symbols, rename_bound_apart, rename_free_pred, substitute, term_vars, SubstError,
};
pub(crate) use subst::{subst, subst_term};

/// An interned-by-value name. Lowercase initial: ordinary symbol,
/// uppercase or `_` initial: macro parameter.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: impl AsRef<str>) -> Self {
        Symbol(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Macro parameters start with an uppercase letter or `_`.
    pub fn is_param(&self) -> bool {
        self.0
            .chars()
            .next()
            .map_or(false, |c| c.is_ascii_uppercase() || c == '_')
    }

    pub fn is_numeral(&self) -> bool {
        !self.0.is_empty() && self.0.chars().all(|c| c.is_ascii_digit())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// First-order term. `App` with no arguments is a constant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Symbol),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Symbol::new(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::App(Symbol::new(name), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(Symbol::new(name), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Does `name` occur as a variable in this term?
    pub fn has_var(&self, name: &Symbol) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::App(_, args) => args.iter().any(|a| a.has_var(name)),
        }
    }

    pub fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(f, args) => {
                out.insert(f.clone());
                for a in args {
                    a.collect_symbols(out);
                }
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self, &PrintOptions::default()))
    }
}

/// First- and second-order formulas, including the pre-expansion forms
/// (`Lambda`, `MacroCall`, parameter symbols).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Symbol, Vec<Term>),
    Eq(Term, Term),
    True,
    False,
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForAll(Vec<Symbol>, Box<Formula>),
    Exists(Vec<Symbol>, Box<Formula>),
    ForAll2(Vec<Symbol>, Box<Formula>),
    Exists2(Vec<Symbol>, Box<Formula>),
    Lambda(Vec<Symbol>, Box<Formula>),
    MacroCall(Symbol, Vec<Arg>),
}

/// Argument of a macro call: a term, a formula, or a list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arg {
    Term(Term),
    Formula(Formula),
    List(Vec<Arg>),
    /// `[Head|Tail]`, only meaningful as a macro pattern.
    Cons(Box<Arg>, Box<Arg>),
}

impl fmt::Debug for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_arg(self, &PrintOptions::default()))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self, &PrintOptions::default()))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self, &PrintOptions::default()))
    }
}

impl Formula {
    pub fn atom(name: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(Symbol::new(name), args)
    }

    pub fn prop(name: &str) -> Formula {
        Formula::Atom(Symbol::new(name), Vec::new())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: Vec<Symbol>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::ForAll(vars, Box::new(body))
        }
    }

    pub fn exists(vars: Vec<Symbol>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    /// Conjunction that collapses the degenerate cases.
    pub fn and(mut items: Vec<Formula>) -> Formula {
        match items.len() {
            0 => Formula::True,
            1 => items.pop().unwrap(),
            _ => Formula::And(items),
        }
    }

    /// Disjunction that collapses the degenerate cases.
    pub fn or(mut items: Vec<Formula>) -> Formula {
        match items.len() {
            0 => Formula::False,
            1 => items.pop().unwrap(),
            _ => Formula::Or(items),
        }
    }

    /// Direct subformulas, in order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(..) | Formula::Eq(..) | Formula::True | Formula::False => vec![],
            Formula::Not(f) => vec![f],
            Formula::And(fs) | Formula::Or(fs) => fs.iter().collect(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
            Formula::ForAll(_, f)
            | Formula::Exists(_, f)
            | Formula::ForAll2(_, f)
            | Formula::Exists2(_, f)
            | Formula::Lambda(_, f) => vec![f],
            Formula::MacroCall(_, args) => {
                let mut out = Vec::new();
                for a in args {
                    collect_arg_formulas(a, &mut out);
                }
                out
            }
        }
    }

    /// Apply `f` to every direct subformula, rebuilding the node.
    pub fn map_children(&self, f: &mut impl FnMut(&Formula) -> Formula) -> Formula {
        match self {
            Formula::Atom(..) | Formula::Eq(..) | Formula::True | Formula::False => self.clone(),
            Formula::Not(a) => Formula::Not(Box::new(f(a))),
            Formula::And(fs) => Formula::And(fs.iter().map(|x| f(x)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|x| f(x)).collect()),
            Formula::Implies(a, b) => Formula::Implies(Box::new(f(a)), Box::new(f(b))),
            Formula::Iff(a, b) => Formula::Iff(Box::new(f(a)), Box::new(f(b))),
            Formula::ForAll(v, a) => Formula::ForAll(v.clone(), Box::new(f(a))),
            Formula::Exists(v, a) => Formula::Exists(v.clone(), Box::new(f(a))),
            Formula::ForAll2(v, a) => Formula::ForAll2(v.clone(), Box::new(f(a))),
            Formula::Exists2(v, a) => Formula::Exists2(v.clone(), Box::new(f(a))),
            Formula::Lambda(v, a) => Formula::Lambda(v.clone(), Box::new(f(a))),
            Formula::MacroCall(n, args) => {
                Formula::MacroCall(n.clone(), args.iter().map(|a| map_arg(a, f)).collect())
            }
        }
    }

    /// Fallible [`Formula::map_children`]; macro-call arguments are kept.
    pub fn try_map_children<E>(
        &self,
        f: &mut impl FnMut(&Formula) -> Result<Formula, E>,
    ) -> Result<Formula, E> {
        Ok(match self {
            Formula::Atom(..) | Formula::Eq(..) | Formula::True | Formula::False | Formula::MacroCall(..) => {
                self.clone()
            }
            Formula::Not(a) => Formula::Not(Box::new(f(a)?)),
            Formula::And(fs) => Formula::And(fs.iter().map(|x| f(x)).collect::<Result<_, _>>()?),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|x| f(x)).collect::<Result<_, _>>()?),
            Formula::Implies(a, b) => Formula::Implies(Box::new(f(a)?), Box::new(f(b)?)),
            Formula::Iff(a, b) => Formula::Iff(Box::new(f(a)?), Box::new(f(b)?)),
            Formula::ForAll(v, a) => Formula::ForAll(v.clone(), Box::new(f(a)?)),
            Formula::Exists(v, a) => Formula::Exists(v.clone(), Box::new(f(a)?)),
            Formula::ForAll2(v, a) => Formula::ForAll2(v.clone(), Box::new(f(a)?)),
            Formula::Exists2(v, a) => Formula::Exists2(v.clone(), Box::new(f(a)?)),
            Formula::Lambda(v, a) => Formula::Lambda(v.clone(), Box::new(f(a)?)),
        })
    }

    /// Every symbol name occurring anywhere, bound or free.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    pub fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Formula::Atom(p, args) => {
                out.insert(p.clone());
                for a in args {
                    a.collect_symbols(out);
                }
            }
            Formula::Eq(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Formula::ForAll(vs, f)
            | Formula::Exists(vs, f)
            | Formula::ForAll2(vs, f)
            | Formula::Exists2(vs, f)
            | Formula::Lambda(vs, f) => {
                out.extend(vs.iter().cloned());
                f.collect_symbols(out);
            }
            Formula::MacroCall(n, args) => {
                out.insert(n.clone());
                for a in args {
                    a.collect_symbols(out);
                }
            }
            _ => {
                for c in self.children() {
                    c.collect_symbols(out);
                }
            }
        }
    }

    /// True when the formula mentions predicate `p` free or bound.
    pub fn mentions_pred(&self, p: &Symbol) -> bool {
        match self {
            Formula::Atom(q, _) => q == p,
            _ => self.children().into_iter().any(|c| c.mentions_pred(p)),
        }
    }

    pub fn is_second_order(&self) -> bool {
        match self {
            Formula::ForAll2(..) | Formula::Exists2(..) => true,
            _ => self.children().into_iter().any(Formula::is_second_order),
        }
    }

    pub fn has_macro_residue(&self) -> bool {
        match self {
            Formula::Lambda(..) | Formula::MacroCall(..) => true,
            Formula::Atom(p, _) if p.is_param() => true,
            _ => self.children().into_iter().any(Formula::has_macro_residue),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::ForAll(..)
            | Formula::Exists(..)
            | Formula::ForAll2(..)
            | Formula::Exists2(..)
            | Formula::Lambda(..) => false,
            _ => self.children().into_iter().all(Formula::is_quantifier_free),
        }
    }

    /// Flatten nested conjunctions/disjunctions into n-ary nodes.
    pub fn flatten(&self) -> Formula {
        match self {
            Formula::And(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match f.flatten() {
                        Formula::And(inner) => out.extend(inner),
                        g => out.push(g),
                    }
                }
                Formula::and(out)
            }
            Formula::Or(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match f.flatten() {
                        Formula::Or(inner) => out.extend(inner),
                        g => out.push(g),
                    }
                }
                Formula::or(out)
            }
            _ => self.map_children(&mut |c| c.flatten()),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }
}

fn collect_arg_formulas<'a>(a: &'a Arg, out: &mut Vec<&'a Formula>) {
    match a {
        Arg::Formula(f) => out.push(f),
        Arg::List(items) => {
            for i in items {
                collect_arg_formulas(i, out);
            }
        }
        Arg::Cons(h, t) => {
            collect_arg_formulas(h, out);
            collect_arg_formulas(t, out);
        }
        Arg::Term(_) => {}
    }
}

fn map_arg(a: &Arg, f: &mut impl FnMut(&Formula) -> Formula) -> Arg {
    match a {
        Arg::Formula(g) => Arg::Formula(f(g)),
        Arg::List(items) => Arg::List(items.iter().map(|i| map_arg(i, f)).collect()),
        Arg::Cons(h, t) => Arg::Cons(Box::new(map_arg(h, f)), Box::new(map_arg(t, f))),
        Arg::Term(t) => Arg::Term(t.clone()),
    }
}

impl Arg {
    pub fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Arg::Term(t) => t.collect_symbols(out),
            Arg::Formula(f) => f.collect_symbols(out),
            Arg::List(items) => {
                for i in items {
                    i.collect_symbols(out);
                }
            }
            Arg::Cons(h, t) => {
                h.collect_symbols(out);
                t.collect_symbols(out);
            }
        }
    }

    /// View the argument as a formula where that is meaningful.
    pub fn to_formula(&self) -> Option<Formula> {
        match self {
            Arg::Formula(f) => Some(f.clone()),
            Arg::Term(Term::App(f, args)) => Some(Formula::Atom(f.clone(), args.clone())),
            _ => None,
        }
    }

    /// A term-valued view; atomic formulas are read back as terms.
    pub fn to_term(&self) -> Option<Term> {
        match self {
            Arg::Term(t) => Some(t.clone()),
            Arg::Formula(Formula::Atom(f, args)) => Some(Term::App(f.clone(), args.clone())),
            _ => None,
        }
    }
}

/// Position-annotated parse failure.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn at(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}
