use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use folwork_core::docproc::{
    limits_from, load_document, parse_document, process_document, simp_from, validity_config_from, OptValue,
    RenderOptions, Session,
};
use folwork_core::elimination::{eliminate, ElimOptions};
use folwork_core::export::{export_dimacs, export_tptp, TptpRole};
use folwork_core::fresh::FreshNames;
use folwork_core::interpolation::{interpolate, IpolConfig, IpolError};
use folwork_core::prover::{validity, ValidityVerdict};
use folwork_core::syntax::{parse_formula, print_formula, Formula, PrintOptions};
use folwork_core::transform::cnf;

#[derive(Parser)]
#[command(name = "folwork", version, about = "First-order logic workbench")]
struct Cli {
    /// Load macro definitions and settings from a document (repeatable).
    #[arg(long, global = true, value_name = "FILE")]
    load: Vec<PathBuf>,
    #[arg(long, global = true)]
    max_depth: Option<u64>,
    #[arg(long, global = true)]
    model_max: Option<u64>,
    /// Inference steps per deepening iteration.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Result shaping for `elim` and `ipol`.
    #[arg(long, global = true, value_enum)]
    shape: Option<Shape>,
    /// Omit parentheses and commas of applications in LaTeX output.
    #[arg(long, global = true)]
    compact: bool,
    /// Wrap processed documents in a LaTeX preamble.
    #[arg(long, global = true)]
    standalone: bool,
    /// Write output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Print result formulas as LaTeX.
    #[arg(long, global = true)]
    latex: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    None,
    C6,
}

#[derive(Clone, Copy, ValueEnum)]
enum Role {
    Axiom,
    Conjecture,
}

#[derive(Subcommand)]
enum Command {
    /// Process a document (`.lgd`) into LaTeX.
    Process { file: PathBuf },
    /// Decide validity of a formula (given inline or as a file).
    Valid { formula: String },
    /// Interpolate an implication `F -> G`.
    Ipol { formula: String },
    /// Eliminate second-order quantifiers.
    Elim { formula: String },
    /// Expand macros.
    Expand { formula: String },
    /// Export a first-order formula as a TPTP FOF unit.
    ExportTptp {
        formula: String,
        #[arg(long, value_enum, default_value = "axiom")]
        role: Role,
        #[arg(long, default_value = "f1")]
        name: String,
    },
    /// Export the clausal form of a propositional formula as DIMACS CNF.
    ExportDimacs {
        formula: String,
        /// Precede the header with `c <n> <atom>` comment lines.
        #[arg(long)]
        table: bool,
    },
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Failed = 1,
    Unknown = 2,
    Usage = 3,
}

#[derive(Debug)]
struct Usage(anyhow::Error);

fn usage(e: impl Into<anyhow::Error>) -> Usage {
    Usage(e.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Usage as u8 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(Failure::Usage(Usage(e))) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Status::Usage as u8)
        }
        Err(Failure::Other(e, status)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(status as u8)
        }
    }
}

enum Failure {
    Usage(Usage),
    Other(anyhow::Error, Status),
}

impl From<Usage> for Failure {
    fn from(u: Usage) -> Self {
        Failure::Usage(u)
    }
}

fn failed(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Other(e.into(), Status::Failed)
}

fn session(cli: &Cli) -> Result<Session, Usage> {
    let mut s = Session::new();
    for path in &cli.load {
        let text = read(path)?;
        let doc = parse_document(&text).map_err(|e| usage(anyhow!("{}: {e}", path.display())))?;
        s = load_document(&doc, &path.display().to_string(), s);
    }
    let flags = [("max_depth", cli.max_depth), ("model_max", cli.model_max), ("budget", cli.budget)];
    for (key, v) in flags {
        if let Some(v) = v {
            s.config.insert(key.into(), OptValue::Int(v));
        }
    }
    if let Some(shape) = cli.shape {
        let name = match shape {
            Shape::None => "none",
            Shape::C6 => "c6",
        };
        s.config.insert("simp_result".into(), OptValue::List(vec![OptValue::Name(name.into())]));
    }
    if cli.compact {
        s.config.insert("compact".into(), OptValue::Bool(true));
    }
    for w in &s.warnings {
        eprintln!("warning: {w}");
    }
    Ok(s)
}

fn read(path: &Path) -> Result<String, Usage> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(Usage)
}

/// A formula given inline, or the contents of a file of that name.
fn formula_arg(arg: &str) -> Result<Formula, Usage> {
    let text = if Path::new(arg).is_file() { read(Path::new(arg))? } else { arg.to_string() };
    let text = text.trim();
    let text = text.strip_suffix('.').unwrap_or(text);
    parse_formula(text).map_err(usage)
}

fn expanded(s: &mut Session, arg: &str) -> Result<Formula, Usage> {
    let f = formula_arg(arg)?;
    s.expand(&f).map_err(usage)
}

fn show(cli: &Cli, s: &Session, f: &Formula) -> String {
    let opts = if cli.latex {
        PrintOptions { compact: s.config.get("compact") == Some(&OptValue::Bool(true)), ..PrintOptions::latex() }
    } else {
        PrintOptions::default()
    };
    print_formula(f, &opts)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.is_empty() && !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())).map_err(failed),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<Status, Failure> {
    let mut s = session(cli)?;
    match &cli.command {
        Command::Process { file } => {
            let text = read(file)?;
            let doc = parse_document(&text).map_err(|e| usage(anyhow!("{}: {e}", file.display())))?;
            let p = process_document(&doc, &file.display().to_string(), s, RenderOptions { standalone: cli.standalone });
            for w in &p.session.warnings {
                eprintln!("warning: {w}");
            }
            emit(cli, &p.latex)?;
            if p.failures > 0 {
                eprintln!("{} directive(s) failed", p.failures);
                return Ok(Status::Failed);
            }
            Ok(Status::Ok)
        }
        Command::Valid { formula } => {
            let f = expanded(&mut s, formula)?;
            let v = validity(&f, &validity_config_from(&s.config)).map_err(failed)?;
            let (text, status) = match v {
                ValidityVerdict::Valid(_) => ("*Valid*", Status::Ok),
                ValidityVerdict::NotValid(_) => ("*Not valid*", Status::Failed),
                ValidityVerdict::Unknown => ("*Failed to validate*", Status::Unknown),
            };
            emit(cli, text)?;
            Ok(status)
        }
        Command::Ipol { formula } => {
            let f = expanded(&mut s, formula)?;
            let Formula::Implies(lhs, rhs) = &f else {
                return Err(usage(anyhow!("the argument of `ipol` must be an implication")).into());
            };
            let shape_c6 = simp_from(&s.config).map_err(|e| usage(anyhow!(e)))?.is_some();
            let cfg = IpolConfig { limits: limits_from(&s.config), shape_c6 };
            match interpolate(lhs, rhs, &cfg) {
                Ok(h) => {
                    emit(cli, &show(cli, &s, &h.formula))?;
                    Ok(Status::Ok)
                }
                Err(e @ IpolError::NoProof(_)) => Err(Failure::Other(e.into(), Status::Unknown)),
                Err(e) => Err(failed(e)),
            }
        }
        Command::Elim { formula } => {
            let f = expanded(&mut s, formula)?;
            let simp_result = simp_from(&s.config).map_err(|e| usage(anyhow!(e)))?;
            match eliminate(&f, &ElimOptions { simp_result, ..Default::default() }) {
                Ok(r) => {
                    emit(cli, &show(cli, &s, &r.formula))?;
                    Ok(Status::Ok)
                }
                Err(e) => Err(failed(e)),
            }
        }
        Command::Expand { formula } => {
            let f = expanded(&mut s, formula)?;
            emit(cli, &show(cli, &s, &f))?;
            Ok(Status::Ok)
        }
        Command::ExportTptp { formula, role, name } => {
            let f = expanded(&mut s, formula)?;
            let role = match role {
                Role::Axiom => TptpRole::Axiom,
                Role::Conjecture => TptpRole::Conjecture,
            };
            emit(cli, &export_tptp(&f, role, name).map_err(usage)?)?;
            Ok(Status::Ok)
        }
        Command::ExportDimacs { formula, table } => {
            let f = expanded(&mut s, formula)?;
            let mut fresh = FreshNames::new();
            let cs = cnf(&f, &mut fresh).map_err(failed)?;
            emit(cli, &export_dimacs(&cs, *table).map_err(usage)?)?;
            Ok(Status::Ok)
        }
    }
}
