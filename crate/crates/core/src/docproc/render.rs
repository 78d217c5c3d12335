use super::{bool_opt, Directive, DirectiveKind, Options};
use crate::macros::{BuiltinExpr, MacroDef, PredRef};
use crate::prover::ValidityVerdict;
use crate::syntax::{print_arg, print_formula, Formula, PrintOptions, Symbol};

fn print_opts(o: &Options) -> PrintOptions {
    PrintOptions { compact: bool_opt(o, "compact", false), ..PrintOptions::latex() }
}

fn inline(f: &Formula, o: &Options) -> String {
    print_formula(f, &print_opts(o))
}

fn sym(s: &Symbol, o: &Options) -> String {
    inline(&Formula::Atom(s.clone(), Vec::new()), o)
}

/// Escape text for LaTeX prose.
pub fn escape(text: &str) -> String {
    let mut out = String::new();
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '{' | '}' | '_' | '&' | '%' | '$' | '#' => {
                out.push('\\');
                out.push(c);
            }
            '^' => out.push_str("\\textasciicircum{}"),
            '~' => out.push_str("\\textasciitilde{}"),
            _ => out.push(c),
        }
    }
    out
}

/// Array rows, one top-level conjunct per row, closed by `end`.
fn rows(f: &Formula, end: &str, o: &Options) -> String {
    let items: Vec<&Formula> = match f {
        Formula::And(fs) if !fs.is_empty() => fs.iter().collect(),
        _ => vec![f],
    };
    let mut out = String::new();
    for (i, item) in items.iter().enumerate() {
        let text = inline(item, o);
        if items.len() > 1 && matches!(item, Formula::Implies(..) | Formula::Iff(..) | Formula::Or(_)) {
            out.push_str(&format!("({text})"));
        } else {
            out.push_str(&text);
        }
        out.push_str(if i + 1 < items.len() { " &&&&\\; \\land \\\\\n" } else { end });
    }
    out.push('\n');
    out
}

fn display(f: &Formula, o: &Options) -> String {
    format!("\\[\\begin{{array}}{{lllll}}\n{}\\end{{array}}\n\\]\n", rows(f, ".", o))
}

pub fn definition(d: &MacroDef, o: &Options) -> String {
    let head = if d.params.is_empty() {
        sym(&d.name, o)
    } else {
        let args: Vec<String> = d.params.iter().map(|p| print_arg(&p.to_arg(), &print_opts(o))).collect();
        format!("{}({})", sym(&d.name, o), args.join(","))
    };
    let end = if d.where_bindings.is_empty() { "." } else { "," };
    let mut out = format!(
        "\\begin{{center}}\n$\\begin{{array}}{{l}}\n{head} \\mathrel{{\\mathop:}}=\n\\end{{array}}$\\\\\n$\\begin{{array}}{{lllll}}\n{}\\end{{array}}$\n\\end{{center}}\n",
        rows(&d.body, end, o)
    );
    if !d.where_bindings.is_empty() {
        out.push_str("\\noindent where\n\\begin{center}\n$\\begin{array}{l}\n");
        let n = d.where_bindings.len();
        for (i, b) in d.where_bindings.iter().enumerate() {
            out.push_str(&binding(&b.targets, &b.expr, o));
            out.push_str(if i + 1 < n { ",\\\\\n" } else { ".\n" });
        }
        out.push_str("\\end{array}$\n\\end{center}\n");
    }
    out
}

fn binding(targets: &[Symbol], e: &BuiltinExpr, o: &Options) -> String {
    let po = print_opts(o);
    let assign = |t: &Symbol, rhs: String| format!("{} \\mathrel{{\\mathop:}}= {rhs}", sym(t, o));
    let refs = |rs: &[PredRef]| {
        let items: Vec<String> = rs
            .iter()
            .map(|r| match &r.arity {
                Some(a) => format!("{}/{}", sym(&r.pred, o), sym(a, o)),
                None => sym(&r.pred, o),
            })
            .collect();
        format!("{{[}}{}{{]}}", items.join(","))
    };
    match e {
        BuiltinExpr::RenameFreePredicate { formula, pred } => {
            let (f, p) = (print_arg(formula, &po), print_arg(pred, &po));
            let renamed = targets.get(1).map_or_else(|| "\\ldots".to_string(), |s| sym(s, o));
            targets.first().map(|t| assign(t, format!("{f}[{p} \\mapsto {renamed}]"))).unwrap_or_default()
        }
        BuiltinExpr::Arity { pred, formula } => {
            let rhs = format!(
                "\\mathrm{{arity\\ of}}\\; {}\\; \\mathrm{{in}}\\; {}",
                print_arg(pred, &po),
                print_arg(formula, &po)
            );
            targets.first().map(|t| assign(t, rhs)).unwrap_or_default()
        }
        BuiltinExpr::Implications { from, to } => {
            let rhs = format!("\\mathrm{{transfer\\ clauses}}\\; {} \\rightarrow {}", refs(from), refs(to));
            targets.first().map(|t| assign(t, rhs)).unwrap_or_default()
        }
        BuiltinExpr::FreshSymbol(base) => {
            let rhs = format!("\\mathrm{{fresh}}(\\mathtt{{{}}})", escape(base));
            targets.first().map(|t| assign(t, rhs)).unwrap_or_default()
        }
    }
}

pub fn verdict(f: &Formula, v: &ValidityVerdict, o: &Options) -> String {
    let label = match v {
        ValidityVerdict::Valid(_) => "Valid",
        ValidityVerdict::NotValid(_) => "Not valid",
        ValidityVerdict::Unknown => "Failed to validate",
    };
    format!("\\noindent {label}: ${}.$\n", inline(f, o))
}

pub fn result(input: &Formula, task: &str, r: &Formula, o: &Options) -> String {
    format!("\\noindent Input: ${}.$\\\\\n\\noindent Result of {task}:\n{}", inline(input, o), display(r, o))
}

pub fn expansion(input: &Formula, expanded: &Formula, o: &Options) -> String {
    format!("\\noindent ${}$ expands into\n{}", inline(input, o), display(expanded, o))
}

pub fn note(text: &str) -> String {
    format!("\\noindent Note: {}.\n", escape(text))
}

pub fn failure(d: &Directive, message: &str, o: &Options) -> String {
    let task = match d.kind {
        DirectiveKind::Valid => return format!(
            "\\noindent Failed to validate: ${}.$\\\\\n\\noindent Error (line {}): {}.\n",
            inline(&d.formula, o),
            d.line,
            escape(message)
        ),
        DirectiveKind::Ipol => "interpolation",
        DirectiveKind::Elim => "elimination",
        DirectiveKind::Print => "expansion",
    };
    format!(
        "\\noindent Input: ${}.$\\\\\n\\noindent Failed {task} (line {}): {}.\n",
        inline(&d.formula, o),
        d.line,
        escape(message)
    )
}

pub fn standalone(body: &str) -> String {
    format!("\\documentclass{{article}}\n\\usepackage{{amsmath,amssymb}}\n\\begin{{document}}\n{body}\\end{{document}}\n")
}
