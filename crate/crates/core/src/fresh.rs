//! Fresh symbol generation.

use std::collections::BTreeSet;

use crate::syntax::Symbol;

/// Source of symbols that collide with nothing seen so far.
///
/// Callers register every symbol of the inputs they work on with
/// [`FreshNames::reserve`]; generated names are reserved as well, so the
/// same generator never hands out a name twice.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreshNames {
    used: BTreeSet<Symbol>,
    generated: u64,
}

impl FreshNames {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reserve(&mut self, s: Symbol) {
        self.used.insert(s);
    }

    pub fn reserve_all(&mut self, syms: impl IntoIterator<Item = Symbol>) {
        self.used.extend(syms);
    }

    pub fn is_used(&self, s: &Symbol) -> bool {
        self.used.contains(s)
    }

    /// Number of symbols generated so far; never decreases.
    pub fn generated(&self) -> u64 {
        self.generated
    }

    /// `base` itself when unused, else `base` plus the smallest unused
    /// natural-number suffix.
    pub fn fresh(&mut self, base: &str) -> Symbol {
        let cand = Symbol::new(base);
        if !base.is_empty() && !self.used.contains(&cand) {
            return self.take(cand);
        }
        self.fresh_indexed(base)
    }

    /// `base1`, `base2`, ... always with a suffix.
    pub fn fresh_indexed(&mut self, base: &str) -> Symbol {
        let cand = (1..)
            .map(|i| Symbol::new(format!("{base}{i}")))
            .find(|s| !self.used.contains(s))
            .unwrap();
        self.take(cand)
    }

    fn take(&mut self, s: Symbol) -> Symbol {
        self.used.insert(s.clone());
        self.generated += 1;
        s
    }
}
