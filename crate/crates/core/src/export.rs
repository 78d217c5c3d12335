//! TPTP FOF and DIMACS CNF output, and a DIMACS reader for round trips.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::syntax::{Formula, Symbol, Term};
use crate::transform::{Clause, ClauseSet, Literal};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExportError {
    #[error("second-order quantifiers cannot be written as TPTP FOF")]
    SecondOrder,
    #[error("formula still contains macro calls or lambdas")]
    Unexpanded,
    #[error("literal `{0}` is not propositional")]
    NotPropositional(String),
    #[error("line {line}: {message}")]
    Dimacs { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TptpRole {
    Axiom,
    Conjecture,
}

impl TptpRole {
    fn as_str(self) -> &'static str {
        match self {
            TptpRole::Axiom => "axiom",
            TptpRole::Conjecture => "conjecture",
        }
    }
}

/// One `fof` unit for `f`. Symbols that are not valid TPTP words are
/// renamed; each renaming is listed in a `%` comment line before the
/// unit.
pub fn export_tptp(f: &Formula, role: TptpRole, name: &str) -> Result<String, ExportError> {
    if f.has_macro_residue() {
        return Err(ExportError::Unexpanded);
    }
    if f.is_second_order() {
        return Err(ExportError::SecondOrder);
    }
    let mut names = TptpNames::default();
    names.scan(f);
    let body = names.formula(f, true);
    let mut out = String::new();
    for (from, to) in &names.renamed {
        let _ = writeln!(out, "% {to} = {from}");
    }
    let _ = writeln!(out, "fof({}, {}, {}).", tptp_word(name, false), role.as_str(), body);
    Ok(out)
}

fn tptp_word(s: &str, upper: bool) -> String {
    let mut w: String = s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect();
    let first = w.chars().next();
    let ok = match first {
        Some(c) if upper => c.is_ascii_uppercase(),
        Some(c) => c.is_ascii_lowercase(),
        None => false,
    };
    if !ok {
        match first {
            Some(c) if c.is_ascii_alphabetic() => {
                let c2 = if upper { c.to_ascii_uppercase() } else { c.to_ascii_lowercase() };
                w.replace_range(..1, &c2.to_string());
            }
            _ => w.insert(0, if upper { 'V' } else { 'n' }),
        }
    }
    w
}

#[derive(Default)]
struct TptpNames {
    map: BTreeMap<(Symbol, bool), String>,
    taken: BTreeSet<String>,
    renamed: Vec<(Symbol, String)>,
}

impl TptpNames {
    fn scan(&mut self, f: &Formula) {
        let mut syms = BTreeSet::new();
        let mut vars = BTreeSet::new();
        collect(f, &mut syms, &mut vars);
        // keep names that are already valid so renamed ones cannot steal them
        for (s, upper) in syms.iter().map(|s| (s, false)).chain(vars.iter().map(|v| (v, true))) {
            if tptp_word(s.as_str(), upper) == s.as_str() {
                self.taken.insert(s.as_str().to_string());
                self.map.insert((s.clone(), upper), s.as_str().to_string());
            }
        }
        for (s, upper) in syms.iter().map(|s| (s, false)).chain(vars.iter().map(|v| (v, true))) {
            if self.map.contains_key(&(s.clone(), upper)) {
                continue;
            }
            let base = tptp_word(s.as_str(), upper);
            let mut cand = base.clone();
            let mut i = 1;
            while self.taken.contains(&cand) {
                cand = format!("{base}{i}");
                i += 1;
            }
            self.taken.insert(cand.clone());
            if !upper {
                self.renamed.push((s.clone(), cand.clone()));
            }
            self.map.insert((s.clone(), upper), cand);
        }
    }

    fn name(&self, s: &Symbol, upper: bool) -> &str {
        &self.map[&(s.clone(), upper)]
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Var(v) => self.name(v, true).to_string(),
            Term::App(f, args) if args.is_empty() => self.name(f, false).to_string(),
            Term::App(f, args) => {
                let args: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("{}({})", self.name(f, false), args.join(","))
            }
        }
    }

    fn formula(&self, f: &Formula, top: bool) -> String {
        let s = match f {
            Formula::Atom(p, args) if args.is_empty() => return self.name(p, false).to_string(),
            Formula::Atom(p, args) => {
                let args: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                return format!("{}({})", self.name(p, false), args.join(","));
            }
            Formula::Eq(a, b) => return format!("{} = {}", self.term(a), self.term(b)),
            Formula::True => return "$true".into(),
            Formula::False => return "$false".into(),
            Formula::Not(a) => match a.as_ref() {
                Formula::Eq(x, y) => return format!("{} != {}", self.term(x), self.term(y)),
                g => return format!("~{}", self.formula(g, false)),
            },
            Formula::And(fs) => fs.iter().map(|g| self.formula(g, false)).collect::<Vec<_>>().join(" & "),
            Formula::Or(fs) => fs.iter().map(|g| self.formula(g, false)).collect::<Vec<_>>().join(" | "),
            Formula::Implies(a, b) => format!("{} => {}", self.formula(a, false), self.formula(b, false)),
            Formula::Iff(a, b) => format!("{} <=> {}", self.formula(a, false), self.formula(b, false)),
            Formula::ForAll(vs, b) | Formula::Exists(vs, b) => {
                let q = if matches!(f, Formula::ForAll(..)) { "!" } else { "?" };
                let vs: Vec<&str> = vs.iter().map(|v| self.name(v, true)).collect();
                format!("{q} [{}] : {}", vs.join(","), self.formula(b, false))
            }
            _ => unreachable!("checked before printing"),
        };
        if top {
            s
        } else {
            format!("({s})")
        }
    }
}

fn collect(f: &Formula, syms: &mut BTreeSet<Symbol>, vars: &mut BTreeSet<Symbol>) {
    fn term(t: &Term, syms: &mut BTreeSet<Symbol>, vars: &mut BTreeSet<Symbol>) {
        match t {
            Term::Var(v) => {
                vars.insert(v.clone());
            }
            Term::App(f, args) => {
                syms.insert(f.clone());
                args.iter().for_each(|a| term(a, syms, vars));
            }
        }
    }
    match f {
        Formula::Atom(p, args) => {
            syms.insert(p.clone());
            args.iter().for_each(|a| term(a, syms, vars));
        }
        Formula::Eq(a, b) => {
            term(a, syms, vars);
            term(b, syms, vars);
        }
        Formula::ForAll(vs, b) | Formula::Exists(vs, b) => {
            vars.extend(vs.iter().cloned());
            collect(b, syms, vars);
        }
        _ => f.children().into_iter().for_each(|c| collect(c, syms, vars)),
    }
}

/// DIMACS CNF for propositional clauses. Atoms are numbered from 1 in
/// lexicographic order; with `table` set, `c <n> <atom>` comment lines
/// listing the numbering precede the header.
pub fn export_dimacs(cs: &ClauseSet, table: bool) -> Result<String, ExportError> {
    let mut atoms = BTreeSet::new();
    for c in &cs.clauses {
        for l in &c.literals {
            if !l.args.is_empty() || l.is_eq() {
                return Err(ExportError::NotPropositional(l.to_formula().to_string()));
            }
            atoms.insert(l.pred.as_str().to_string());
        }
    }
    let index: BTreeMap<&str, usize> = atoms.iter().enumerate().map(|(i, a)| (a.as_str(), i + 1)).collect();
    let mut out = String::new();
    if table {
        for (a, i) in &index {
            let _ = writeln!(out, "c {i} {a}");
        }
    }
    let _ = writeln!(out, "p cnf {} {}", atoms.len(), cs.clauses.len());
    for c in &cs.clauses {
        for l in &c.literals {
            let v = index[l.pred.as_str()] as i64;
            let _ = write!(out, "{} ", if l.positive { v } else { -v });
        }
        out.push_str("0\n");
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dimacs {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    /// Atom names read from `c <n> <name>` comment lines.
    pub names: BTreeMap<u32, String>,
}

impl Dimacs {
    /// Clauses over the named atoms, `v<n>` for unnamed variables.
    pub fn to_clause_set(&self) -> ClauseSet {
        let name = |v: u32| self.names.get(&v).cloned().unwrap_or_else(|| format!("v{v}"));
        ClauseSet::new(
            self.clauses
                .iter()
                .map(|c| Clause::new(c.iter().map(|&l| Literal::new(l > 0, Symbol::new(name(l.unsigned_abs())), Vec::new())).collect()))
                .collect(),
        )
    }
}

pub fn parse_dimacs(text: &str) -> Result<Dimacs, ExportError> {
    let err = |line: usize, message: &str| ExportError::Dimacs { line, message: message.to_string() };
    let mut d = Dimacs::default();
    let mut header: Option<(usize, usize)> = None;
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            let mut parts = rest.split_whitespace();
            if let (Some(v), Some(a), None) = (parts.next(), parts.next(), parts.next()) {
                if let Ok(v) = v.parse::<u32>() {
                    d.names.insert(v, a.to_string());
                }
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["cnf", v, c] => {
                    let v = v.parse().map_err(|_| err(n, "bad variable count"))?;
                    let c = c.parse().map_err(|_| err(n, "bad clause count"))?;
                    header = Some((v, c));
                }
                _ => return Err(err(n, "expected `p cnf <vars> <clauses>`")),
            }
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(err(n, "clause before header"));
        };
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| err(n, "expected an integer literal"))?;
            if l == 0 {
                d.clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() as usize > vars {
                return Err(err(n, "variable out of range"));
            } else {
                current.push(l);
            }
        }
    }
    let Some((vars, count)) = header else {
        return Err(err(0, "missing header"));
    };
    if !current.is_empty() {
        d.clauses.push(current);
    }
    if d.clauses.len() != count {
        return Err(err(0, "clause count differs from header"));
    }
    d.num_vars = vars;
    Ok(d)
}
