//! Text and LaTeX printers.
//!
//! Text output uses the same operator table as the parser, so printing
//! and re-reading a parsed formula gives back the same tree. LaTeX output
//! is plain math-mode source: predicate, function and constant names in
//! `\mathsf`, variables and parameters in `\mathit`, a trailing digit run
//! as subscript and a `_p` suffix as prime.

use super::{Arg, Formula, Symbol, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Target {
    #[default]
    Text,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrintOptions {
    pub target: Target,
    /// Omit parentheses and commas of applications.
    pub compact: bool,
    pub prime_rendering: bool,
    pub subscript_digits: bool,
}

impl Default for PrintOptions {
    fn default() -> Self {
        PrintOptions {
            target: Target::Text,
            compact: false,
            prime_rendering: true,
            subscript_digits: true,
        }
    }
}

impl PrintOptions {
    pub fn latex() -> Self {
        PrintOptions { target: Target::Latex, ..Default::default() }
    }
}

pub fn print_formula(f: &Formula, opts: &PrintOptions) -> String {
    let mut p = Printer { opts, bound_preds: Vec::new(), out: String::new() };
    match opts.target {
        Target::Text => p.text(f, 1200),
        Target::Latex => p.latex(f, 1000),
    }
    p.out
}

pub fn print_term(t: &Term, opts: &PrintOptions) -> String {
    let mut p = Printer { opts, bound_preds: Vec::new(), out: String::new() };
    p.term(t);
    p.out
}

pub fn print_arg(a: &Arg, opts: &PrintOptions) -> String {
    let mut p = Printer { opts, bound_preds: Vec::new(), out: String::new() };
    p.arg(a);
    p.out
}

struct Printer<'a> {
    opts: &'a PrintOptions,
    bound_preds: Vec<Symbol>,
    out: String,
}

fn text_prec(f: &Formula) -> u32 {
    match f {
        Formula::Eq(..) => 700,
        Formula::Not(_) => 900,
        Formula::And(fs) if fs.len() >= 2 => 1000,
        Formula::Implies(..) | Formula::Iff(..) => 1050,
        Formula::Or(fs) if fs.len() >= 2 => 1100,
        _ => 0,
    }
}

fn latex_prec(f: &Formula) -> u32 {
    match f {
        Formula::Not(_)
        | Formula::ForAll(..)
        | Formula::Exists(..)
        | Formula::ForAll2(..)
        | Formula::Exists2(..) => 100,
        Formula::And(fs) if fs.len() >= 2 => 200,
        Formula::Or(fs) if fs.len() >= 2 => 300,
        Formula::Implies(..) | Formula::Iff(..) => 400,
        _ => 0,
    }
}

enum Style {
    Sans,
    Italic,
}

impl Printer<'_> {
    fn latex_mode(&self) -> bool {
        self.opts.target == Target::Latex
    }

    fn text(&mut self, f: &Formula, max: u32) {
        let paren = text_prec(f) > max;
        if paren {
            self.out.push('(');
        }
        match f {
            Formula::True => self.out.push_str("true"),
            Formula::False => self.out.push_str("false"),
            Formula::Atom(p, args) => self.application(p, args, Style::Sans),
            Formula::Eq(a, b) => {
                self.term(a);
                self.out.push_str(" = ");
                self.term(b);
            }
            Formula::Not(a) => {
                self.out.push('~');
                self.text(a, 900);
            }
            Formula::And(fs) | Formula::Or(fs) if fs.len() < 2 => match fs.first() {
                Some(g) => self.text(g, max),
                None => self.out.push_str(if matches!(f, Formula::And(_)) { "true" } else { "false" }),
            },
            Formula::And(fs) => self.join_text(fs, ", ", 999),
            Formula::Or(fs) => self.join_text(fs, " ; ", 1099),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.text(a, 1049);
                self.out.push_str(if matches!(f, Formula::Implies(..)) { " -> " } else { " <-> " });
                self.text(b, 1050);
            }
            Formula::ForAll(vs, b) => self.binder_text("all", vs, b),
            Formula::Exists(vs, b) => self.binder_text("ex", vs, b),
            Formula::ForAll2(vs, b) => self.binder_text("all2", vs, b),
            Formula::Exists2(vs, b) => self.binder_text("ex2", vs, b),
            Formula::Lambda(vs, b) => {
                self.out.push_str("lambda([");
                self.symbols(vs, ",");
                self.out.push_str("], ");
                self.text(b, 999);
                self.out.push(')');
            }
            Formula::MacroCall(n, args) => {
                self.out.push_str(n.as_str());
                self.out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        self.out.push(',');
                    }
                    self.arg(a);
                }
                self.out.push(')');
            }
        }
        if paren {
            self.out.push(')');
        }
    }

    fn join_text(&mut self, fs: &[Formula], sep: &str, max: u32) {
        for (i, g) in fs.iter().enumerate() {
            if i > 0 {
                self.out.push_str(sep);
            }
            self.text(g, max);
        }
    }

    fn symbols(&mut self, vs: &[Symbol], sep: &str) {
        for (i, v) in vs.iter().enumerate() {
            if i > 0 {
                self.out.push_str(sep);
            }
            self.out.push_str(v.as_str());
        }
    }

    fn binder_text(&mut self, kw: &str, vs: &[Symbol], body: &Formula) {
        self.out.push_str(kw);
        self.out.push('(');
        if vs.len() == 1 {
            self.out.push_str(vs[0].as_str());
        } else {
            self.out.push('[');
            self.symbols(vs, ",");
            self.out.push(']');
        }
        self.out.push_str(", ");
        self.text(body, 999);
        self.out.push(')');
    }

    fn arg(&mut self, a: &Arg) {
        match a {
            Arg::Term(t) => self.term(t),
            Arg::Formula(f) => {
                if self.latex_mode() {
                    self.latex(f, 399)
                } else {
                    self.text(f, 999)
                }
            }
            Arg::List(items) => {
                self.out.push_str(if self.latex_mode() { "{[}" } else { "[" });
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        self.out.push(',');
                    }
                    self.arg(it);
                }
                self.out.push_str(if self.latex_mode() { "{]}" } else { "]" });
            }
            Arg::Cons(h, t) => {
                self.out.push('[');
                self.arg(h);
                self.out.push('|');
                self.arg(t);
                self.out.push(']');
            }
        }
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Var(v) => self.name(v, Style::Italic),
            Term::App(f, args) => self.application(f, args, Style::Sans),
        }
    }

    fn application(&mut self, head: &Symbol, args: &[Term], style: Style) {
        let style = if head.is_param() || self.bound_preds.contains(head) { Style::Italic } else { style };
        self.name(head, style);
        if args.is_empty() {
            return;
        }
        if self.opts.compact {
            for a in args {
                self.out.push_str(if self.latex_mode() { "\\," } else { " " });
                let nested = matches!(a, Term::App(_, xs) if !xs.is_empty());
                if nested {
                    self.out.push('(');
                }
                self.term(a);
                if nested {
                    self.out.push(')');
                }
            }
            return;
        }
        self.out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                self.out.push(',');
            }
            self.term(a);
        }
        self.out.push(')');
    }

    fn name(&mut self, s: &Symbol, style: Style) {
        if !self.latex_mode() {
            self.out.push_str(s.as_str());
            return;
        }
        let style = if s.is_param() { Style::Italic } else { style };
        let (core, primes) = latex_name(s.as_str(), self.opts);
        self.out.push_str(match style {
            Style::Sans => "\\mathsf{",
            Style::Italic => "\\mathit{",
        });
        self.out.push_str(&core);
        self.out.push('}');
        if primes > 0 {
            self.out.push_str("^{");
            for _ in 0..primes {
                self.out.push_str("\\prime");
            }
            self.out.push('}');
        }
    }

    fn latex(&mut self, f: &Formula, max: u32) {
        let paren = latex_prec(f) > max;
        if paren {
            self.out.push('(');
        }
        match f {
            Formula::True => self.out.push_str("\\top"),
            Formula::False => self.out.push_str("\\bot"),
            Formula::Atom(p, args) => self.application(p, args, Style::Sans),
            Formula::Eq(a, b) => {
                self.term(a);
                self.out.push('=');
                self.term(b);
            }
            Formula::Not(a) => {
                self.out.push_str("\\lnot ");
                self.latex(a, 100);
            }
            Formula::And(fs) | Formula::Or(fs) if fs.len() < 2 => match fs.first() {
                Some(g) => self.latex(g, max),
                None => self.out.push_str(if matches!(f, Formula::And(_)) { "\\top" } else { "\\bot" }),
            },
            Formula::And(fs) => self.join_latex(fs, " \\land ", 200),
            Formula::Or(fs) => self.join_latex(fs, " \\lor ", 300),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.latex(a, 399);
                self.out
                    .push_str(if matches!(f, Formula::Implies(..)) { " \\rightarrow " } else { " \\leftrightarrow " });
                self.latex(b, 399);
            }
            Formula::ForAll(vs, b) => self.binder_latex("\\forall", vs, b, false),
            Formula::Exists(vs, b) => self.binder_latex("\\exists", vs, b, false),
            Formula::ForAll2(vs, b) => self.binder_latex("\\forall", vs, b, true),
            Formula::Exists2(vs, b) => self.binder_latex("\\exists", vs, b, true),
            Formula::Lambda(vs, b) => {
                self.out.push_str("\\lambda ");
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        self.out.push(',');
                    }
                    self.name(v, Style::Italic);
                }
                self.out.push_str(" . ");
                self.latex(b, 100);
            }
            Formula::MacroCall(n, args) => {
                self.name(n, Style::Sans);
                self.out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        self.out.push(',');
                    }
                    self.arg(a);
                }
                self.out.push(')');
            }
        }
        if paren {
            self.out.push(')');
        }
    }

    fn join_latex(&mut self, fs: &[Formula], sep: &str, max: u32) {
        for (i, g) in fs.iter().enumerate() {
            if i > 0 {
                self.out.push_str(sep);
            }
            self.latex(g, max);
        }
    }

    fn binder_latex(&mut self, q: &str, vs: &[Symbol], body: &Formula, second_order: bool) {
        for v in vs {
            self.out.push_str(q);
            self.out.push(' ');
            self.name(v, Style::Italic);
            self.out.push_str(" \\, ");
        }
        let depth = self.bound_preds.len();
        if second_order {
            self.bound_preds.extend(vs.iter().cloned());
        }
        self.latex(body, 100);
        self.bound_preds.truncate(depth);
    }
}

/// Name core with `_` escaped and digits subscripted, plus the number of
/// primes to append.
fn latex_name(name: &str, opts: &PrintOptions) -> (String, usize) {
    let mut base = name;
    let mut sub = None;
    if opts.subscript_digits {
        let trimmed = base.trim_end_matches(|c: char| c.is_ascii_digit());
        if !trimmed.is_empty() && trimmed.len() < base.len() {
            sub = Some(&base[trimmed.len()..]);
            base = trimmed.trim_end_matches('_');
            if base.is_empty() {
                base = trimmed;
            }
        }
    }
    let mut primes = 0;
    if opts.prime_rendering {
        while base.len() > 2 && base.ends_with("_p") {
            base = &base[..base.len() - 2];
            primes += 1;
        }
    }
    let mut core = base.replace('_', "\\_");
    if let Some(s) = sub {
        core.push_str("_{");
        core.push_str(s);
        core.push('}');
    }
    (core, primes)
}
