use std::collections::{BTreeMap, BTreeSet};

use super::{Formula, Symbol, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Polarities {
    pub pos: bool,
    pub neg: bool,
}

impl Polarities {
    pub fn contains(&self, other: &Polarities) -> bool {
        (!other.pos || self.pos) && (!other.neg || self.neg)
    }

    pub fn intersect(&self, other: &Polarities) -> Polarities {
        Polarities { pos: self.pos && other.pos, neg: self.neg && other.neg }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredInfo {
    pub arity: usize,
    pub polarities: Polarities,
}

/// Free vocabulary of a formula. Equality is logical and not listed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SignatureInfo {
    pub predicates: BTreeMap<Symbol, PredInfo>,
    pub functions: BTreeMap<Symbol, usize>,
    pub constants: BTreeSet<Symbol>,
    pub free_individual_vars: BTreeSet<Symbol>,
}

impl SignatureInfo {
    /// Function and constant symbols together.
    pub fn function_symbols(&self) -> BTreeSet<Symbol> {
        self.functions.keys().cloned().chain(self.constants.iter().cloned()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty()
            && self.functions.is_empty()
            && self.constants.is_empty()
            && self.free_individual_vars.is_empty()
    }

    /// Merge another signature into this one (union of polarities).
    pub fn merge(&mut self, other: &SignatureInfo) {
        for (p, info) in &other.predicates {
            let e = self.predicates.entry(p.clone()).or_insert(PredInfo {
                arity: info.arity,
                polarities: Polarities::default(),
            });
            e.polarities.pos |= info.polarities.pos;
            e.polarities.neg |= info.polarities.neg;
        }
        self.functions.extend(other.functions.iter().map(|(k, v)| (k.clone(), *v)));
        self.constants.extend(other.constants.iter().cloned());
        self.free_individual_vars.extend(other.free_individual_vars.iter().cloned());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("symbol `{symbol}` used with arities {first} and {second}")]
    InconsistentArity { symbol: Symbol, first: usize, second: usize },
    #[error("formula still contains macro calls, lambdas or parameters")]
    Unexpanded,
}

struct Walker {
    sig: SignatureInfo,
    fun_arity: BTreeMap<Symbol, usize>,
    bound_vars: Vec<Symbol>,
    bound_preds: Vec<Symbol>,
}

/// Collect the free vocabulary of a fully expanded formula, with the
/// polarity of every predicate computed as in negation normal form.
pub fn signature_of(f: &Formula) -> Result<SignatureInfo, SignatureError> {
    let mut w = Walker {
        sig: SignatureInfo::default(),
        fun_arity: BTreeMap::new(),
        bound_vars: Vec::new(),
        bound_preds: Vec::new(),
    };
    w.formula(f, Polarities { pos: true, neg: false })?;
    for (s, a) in w.fun_arity {
        if a == 0 {
            w.sig.constants.insert(s);
        } else {
            w.sig.functions.insert(s, a);
        }
    }
    Ok(w.sig)
}

fn flip(p: Polarities) -> Polarities {
    Polarities { pos: p.neg, neg: p.pos }
}

const BOTH: Polarities = Polarities { pos: true, neg: true };

impl Walker {
    fn formula(&mut self, f: &Formula, pol: Polarities) -> Result<(), SignatureError> {
        match f {
            Formula::True | Formula::False => Ok(()),
            Formula::Atom(p, args) => {
                if p.is_param() {
                    return Err(SignatureError::Unexpanded);
                }
                if !self.bound_preds.contains(p) {
                    let e = self.sig.predicates.entry(p.clone()).or_insert(PredInfo {
                        arity: args.len(),
                        polarities: Polarities::default(),
                    });
                    if e.arity != args.len() {
                        return Err(SignatureError::InconsistentArity {
                            symbol: p.clone(),
                            first: e.arity,
                            second: args.len(),
                        });
                    }
                    e.polarities.pos |= pol.pos;
                    e.polarities.neg |= pol.neg;
                }
                args.iter().try_for_each(|t| self.term(t))
            }
            Formula::Eq(a, b) => {
                self.term(a)?;
                self.term(b)
            }
            Formula::Not(a) => self.formula(a, flip(pol)),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().try_for_each(|g| self.formula(g, pol)),
            Formula::Implies(a, b) => {
                self.formula(a, flip(pol))?;
                self.formula(b, pol)
            }
            Formula::Iff(a, b) => {
                self.formula(a, BOTH)?;
                self.formula(b, BOTH)
            }
            Formula::ForAll(vs, b) | Formula::Exists(vs, b) => {
                let d = self.bound_vars.len();
                self.bound_vars.extend(vs.iter().cloned());
                let r = self.formula(b, pol);
                self.bound_vars.truncate(d);
                r
            }
            Formula::ForAll2(ps, b) | Formula::Exists2(ps, b) => {
                let d = self.bound_preds.len();
                self.bound_preds.extend(ps.iter().cloned());
                let r = self.formula(b, pol);
                self.bound_preds.truncate(d);
                r
            }
            Formula::Lambda(..) | Formula::MacroCall(..) => Err(SignatureError::Unexpanded),
        }
    }

    fn term(&mut self, t: &Term) -> Result<(), SignatureError> {
        match t {
            Term::Var(v) => {
                if !self.bound_vars.contains(v) {
                    self.sig.free_individual_vars.insert(v.clone());
                }
                Ok(())
            }
            Term::App(f, args) => {
                if f.is_param() {
                    return Err(SignatureError::Unexpanded);
                }
                match self.fun_arity.get(f) {
                    Some(&a) if a != args.len() => {
                        return Err(SignatureError::InconsistentArity {
                            symbol: f.clone(),
                            first: a,
                            second: args.len(),
                        })
                    }
                    _ => {
                        self.fun_arity.insert(f.clone(), args.len());
                    }
                }
                args.iter().try_for_each(|a| self.term(a))
            }
        }
    }
}
