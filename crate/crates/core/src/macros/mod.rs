//! Formula macros.
//!
//! A macro has a name, a list of argument patterns, a body formula and an
//! optional list of computed bindings evaluated before the body is
//! instantiated. Definitions with the same name and arity are tried in
//! definition order; the first whose patterns match is used.

mod def_parse;
mod expand;

use std::collections::BTreeSet;

use crate::syntax::{Arg, Formula, Symbol, SyntaxError, Term};

pub use def_parse::{parse_macro_def, parse_macro_tokens};
pub use expand::{apply_lambda, builtin_eval, expand, expand_with, BuiltinValue, Env, ExpandOptions};

pub const DEFAULT_MAX_DEPTH: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MacroError {
    #[error("unknown macro `{name}/{arity}`")]
    Unknown { name: Symbol, arity: usize },
    #[error("no definition of `{name}/{arity}` matches the arguments")]
    NoMatch { name: Symbol, arity: usize },
    #[error("macro expansion exceeded depth {0}")]
    DepthExceeded(usize),
    #[error("{builtin}: {message}")]
    Builtin { builtin: &'static str, message: String },
    #[error("lambda expects {expected} arguments, got {got}")]
    LambdaArity { expected: usize, got: usize },
    #[error("parameter `{0}` is unbound")]
    UnboundParam(Symbol),
    #[error("parameter `{param}` is bound to `{value}`, which cannot be used as {role}")]
    TypeMismatch { param: Symbol, value: String, role: &'static str },
    #[error("lambda left outside predicate position")]
    LambdaResidue,
    #[error("ill-formed definition: {0}")]
    IllFormed(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// Argument pattern of a definition head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Param(Symbol),
    /// Structure matched literally; may contain parameters, e.g. `[X|Xs]`.
    Structure(Arg),
}

impl Pattern {
    pub fn from_arg(a: Arg) -> Pattern {
        match param_of(&a) {
            Some(p) => Pattern::Param(p),
            None => Pattern::Structure(a),
        }
    }

    pub fn to_arg(&self) -> Arg {
        match self {
            Pattern::Param(p) => Arg::Term(Term::App(p.clone(), Vec::new())),
            Pattern::Structure(a) => a.clone(),
        }
    }
}

/// `P` or `P/A`; either part may be a parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredRef {
    pub pred: Symbol,
    pub arity: Option<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltinExpr {
    /// Rename the free occurrences of a predicate to a fresh symbol;
    /// yields the renamed formula and the new symbol.
    RenameFreePredicate { formula: Arg, pred: Arg },
    Arity { pred: Arg, formula: Arg },
    /// Conjunction of `all(x.., p_i(x..) -> q_i(x..))`.
    Implications { from: Vec<PredRef>, to: Vec<PredRef> },
    FreshSymbol(String),
}

impl BuiltinExpr {
    pub fn name(&self) -> &'static str {
        match self {
            BuiltinExpr::RenameFreePredicate { .. } => "rename_free_predicate",
            BuiltinExpr::Arity { .. } => "arity",
            BuiltinExpr::Implications { .. } => "implications",
            BuiltinExpr::FreshSymbol(_) => "fresh",
        }
    }

    pub fn result_count(&self) -> usize {
        match self {
            BuiltinExpr::RenameFreePredicate { .. } => 2,
            _ => 1,
        }
    }

    fn params(&self) -> BTreeSet<Symbol> {
        let mut syms = BTreeSet::new();
        match self {
            BuiltinExpr::RenameFreePredicate { formula, pred } | BuiltinExpr::Arity { pred, formula } => {
                formula.collect_symbols(&mut syms);
                pred.collect_symbols(&mut syms);
            }
            BuiltinExpr::Implications { from, to } => {
                for r in from.iter().chain(to) {
                    syms.insert(r.pred.clone());
                    syms.extend(r.arity.iter().cloned());
                }
            }
            BuiltinExpr::FreshSymbol(_) => {}
        }
        syms.into_iter().filter(Symbol::is_param).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhereBinding {
    pub targets: Vec<Symbol>,
    pub expr: BuiltinExpr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroDef {
    pub name: Symbol,
    pub params: Vec<Pattern>,
    pub body: Formula,
    pub where_bindings: Vec<WhereBinding>,
}

impl MacroDef {
    pub fn new(name: &str, params: Vec<Pattern>, body: Formula) -> Self {
        MacroDef { name: Symbol::new(name), params, body, where_bindings: Vec::new() }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// Parameters bound by the head patterns.
    pub fn pattern_params(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for p in &self.params {
            match p {
                Pattern::Param(s) => {
                    out.insert(s.clone());
                }
                Pattern::Structure(a) => {
                    let mut syms = BTreeSet::new();
                    a.collect_symbols(&mut syms);
                    out.extend(syms.into_iter().filter(Symbol::is_param));
                }
            }
        }
        out
    }

    /// Parameters of the body that are bound neither by the head nor by a
    /// where binding; they receive fresh symbols at expansion.
    pub fn auto_fresh_params(&self) -> BTreeSet<Symbol> {
        let mut bound = self.pattern_params();
        for b in &self.where_bindings {
            bound.extend(b.targets.iter().cloned());
        }
        self.body.symbols().into_iter().filter(|s| s.is_param() && !bound.contains(s)).collect()
    }

    pub fn validate(&self) -> Result<(), MacroError> {
        if self.name.is_param() {
            return Err(MacroError::IllFormed(format!("macro name `{}` is a parameter", self.name)));
        }
        let mut bound = self.pattern_params();
        for b in &self.where_bindings {
            if b.targets.len() != b.expr.result_count() {
                return Err(MacroError::IllFormed(format!(
                    "`{}` yields {} values, {} targets given",
                    b.expr.name(),
                    b.expr.result_count(),
                    b.targets.len()
                )));
            }
            if let Some(p) = b.expr.params().into_iter().find(|p| !bound.contains(p)) {
                return Err(MacroError::IllFormed(format!("`{p}` is used before it is bound")));
            }
            for t in &b.targets {
                if !t.is_param() {
                    return Err(MacroError::IllFormed(format!("binding target `{t}` is not a parameter")));
                }
                if !bound.insert(t.clone()) {
                    return Err(MacroError::IllFormed(format!("`{t}` is bound twice")));
                }
            }
        }
        Ok(())
    }
}

/// Definitions in the order they were made.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MacroRegistry {
    defs: Vec<MacroDef>,
}

impl MacroRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append a definition after existing ones of the same name and arity.
    pub fn define(&mut self, def: MacroDef) -> Result<(), MacroError> {
        def.validate()?;
        self.defs.push(def);
        Ok(())
    }

    pub fn lookup<'a>(&'a self, name: &'a Symbol, arity: usize) -> impl Iterator<Item = &'a MacroDef> + 'a {
        self.defs.iter().filter(move |d| &d.name == name && d.arity() == arity)
    }

    pub fn contains(&self, name: &Symbol, arity: usize) -> bool {
        self.lookup(name, arity).next().is_some()
    }

    pub fn defs(&self) -> &[MacroDef] {
        &self.defs
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    /// Distinct (name, arity) keys in first-definition order.
    pub fn keys(&self) -> Vec<(Symbol, usize)> {
        let mut out: Vec<(Symbol, usize)> = Vec::new();
        for d in &self.defs {
            let k = (d.name.clone(), d.arity());
            if !out.contains(&k) {
                out.push(k);
            }
        }
        out
    }

    /// Every symbol mentioned by any definition.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for d in &self.defs {
            out.insert(d.name.clone());
            for p in &d.params {
                p.to_arg().collect_symbols(&mut out);
            }
            d.body.collect_symbols(&mut out);
        }
        out
    }
}

/// Functional form of [`MacroRegistry::define`].
pub fn define_macro(mut reg: MacroRegistry, def: MacroDef) -> Result<MacroRegistry, MacroError> {
    reg.define(def)?;
    Ok(reg)
}

/// The parameter an argument consists of, if it is a bare parameter.
pub(crate) fn param_of(a: &Arg) -> Option<Symbol> {
    match a {
        Arg::Term(Term::App(s, args)) | Arg::Formula(Formula::Atom(s, args)) if args.is_empty() && s.is_param() => {
            Some(s.clone())
        }
        _ => None,
    }
}

/// The plain symbol an argument consists of, e.g. `wet` in `circ(wet, kb1)`.
pub(crate) fn symbol_of(a: &Arg) -> Option<Symbol> {
    match a {
        Arg::Term(Term::App(s, args)) | Arg::Formula(Formula::Atom(s, args)) if args.is_empty() => Some(s.clone()),
        _ => None,
    }
}
