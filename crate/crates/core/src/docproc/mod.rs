//! Literate documents (`.lgd`): LaTeX prose, macro definitions and
//! reasoning directives, processed into LaTeX with the results inlined.
//!
//! ```text
//! @text
//! Some \LaTeX{} prose.
//! @end
//! def kb1 :: (sprinkler_was_on -> wet(grass)), (wet(grass) -> wet(shoes)).
//! :- set(max_depth=10).
//! :- valid((kb1, sprinkler_was_on -> wet(shoes))).
//! :- elim(circ(wet, kb1), [simp_result=[c6]]).
//! ```

mod parse;
mod render;

pub use parse::parse_document;

use std::collections::BTreeMap;

use crate::elimination::{eliminate, ElimOptions, SimpPipeline};
use crate::fresh::FreshNames;
use crate::interpolation::{interpolate, IpolConfig};
use crate::macros::{expand, MacroDef, MacroRegistry};
use crate::prover::{validity, ProverLimits, ValidityConfig, ValidityVerdict};
use crate::syntax::{Formula, Symbol, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct DocError {
    pub line: usize,
    pub message: String,
}

impl From<SyntaxError> for DocError {
    fn from(e: SyntaxError) -> Self {
        DocError { line: e.line, message: format!("column {}: {}", e.column, e.message) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum OptValue {
    Bool(bool),
    Int(u64),
    Name(String),
    List(Vec<OptValue>),
}

pub type Options = BTreeMap<String, OptValue>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectiveKind {
    Valid,
    Ipol,
    Elim,
    /// Render the macro expansion of a formula.
    Print,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Directive {
    pub kind: DirectiveKind,
    /// As written, before macro expansion.
    pub formula: Formula,
    pub options: Options,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Prose(String),
    Macro(MacroDef),
    Directive(Directive),
    Config(Options),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub blocks: Vec<Block>,
}

/// System defaults for every option the directives read.
pub fn system_defaults() -> Options {
    let limits = ProverLimits::default();
    Options::from([
        ("max_depth".into(), OptValue::Int(limits.max_depth as u64)),
        ("budget".into(), OptValue::Int(limits.inference_cap)),
        ("model_max".into(), OptValue::Int(ValidityConfig::default().model_max as u64)),
        ("printing".into(), OptValue::Bool(true)),
        ("compact".into(), OptValue::Bool(false)),
    ])
}

/// Macro definitions, configuration and results carried between
/// documents and directives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    defs: Vec<(String, MacroDef)>,
    pub registry: MacroRegistry,
    pub config: Options,
    pub fresh: FreshNames,
    pub registers: BTreeMap<String, Formula>,
    pub last_result: Option<Formula>,
    pub warnings: Vec<String>,
}

impl Default for Session {
    fn default() -> Self {
        Session {
            defs: Vec::new(),
            registry: MacroRegistry::new(),
            config: system_defaults(),
            fresh: FreshNames::new(),
            registers: BTreeMap::new(),
            last_result: None,
            warnings: Vec::new(),
        }
    }
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry with the result registers visible as macros without
    /// parameters: `last_result` and every `r=name` register.
    fn registry_with_results(&self) -> MacroRegistry {
        let mut reg = self.registry.clone();
        let results = self.last_result.iter().map(|f| ("last_result".to_string(), f)).chain(
            self.registers.iter().map(|(k, f)| (k.clone(), f)),
        );
        for (name, f) in results {
            let _ = reg.define(MacroDef::new(&name, Vec::new(), f.clone()));
        }
        reg
    }

    /// Expand `f` with the session's macros.
    pub fn expand(&mut self, f: &Formula) -> Result<Formula, crate::macros::MacroError> {
        let reg = self.registry_with_results();
        expand(&reg, f, &mut self.fresh)
    }
}

/// Register the definitions and configuration of `doc`, replacing what an
/// earlier load of the same `origin` contributed. Runs no directives.
pub fn load_document(doc: &Document, origin: &str, mut s: Session) -> Session {
    s.defs.retain(|(o, _)| o != origin);
    for b in &doc.blocks {
        match b {
            Block::Macro(d) => {
                let clash = s.defs.iter().find(|(_, e)| e.name == d.name && e.arity() == d.arity());
                if let Some((o, _)) = clash {
                    let w = format!("`{}/{}` from {origin} adds to the definition from {o}", d.name, d.arity());
                    if !s.warnings.contains(&w) {
                        s.warnings.push(w);
                    }
                }
                s.defs.push((origin.to_string(), d.clone()));
            }
            Block::Config(opts) => s.config.extend(opts.clone()),
            Block::Prose(_) | Block::Directive(_) => {}
        }
    }
    let mut reg = MacroRegistry::new();
    for (_, d) in &s.defs {
        // definitions were validated when parsed
        let _ = reg.define(d.clone());
    }
    s.registry = reg;
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Processed {
    pub latex: String,
    pub session: Session,
    /// Directives that raised an error or could not decide validity.
    pub failures: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RenderOptions {
    /// Wrap the output in a minimal `article` preamble.
    pub standalone: bool,
}

/// Load `doc`, then run its directives in order and render the whole
/// document.
pub fn process_document(doc: &Document, origin: &str, s: Session, opts: RenderOptions) -> Processed {
    let mut s = load_document(doc, origin, s);
    let mut out = String::new();
    let mut failures = 0;
    for b in &doc.blocks {
        match b {
            Block::Prose(text) => out.push_str(text),
            Block::Macro(d) => {
                out.push_str(&render::definition(d, &s.config));
                out.push('\n');
            }
            Block::Config(_) => {}
            Block::Directive(d) => {
                let (text, ok) = run_directive(d, &mut s);
                if !text.is_empty() {
                    out.push_str(&text);
                    out.push('\n');
                }
                if !ok {
                    failures += 1;
                }
            }
        }
    }
    let latex = if opts.standalone { render::standalone(&out) } else { out };
    Processed { latex, session: s, failures }
}

fn merged(s: &Session, d: &Directive) -> Options {
    let mut o = s.config.clone();
    o.extend(d.options.clone());
    o
}

fn int_opt(o: &Options, key: &str) -> Option<u64> {
    match o.get(key) {
        Some(OptValue::Int(i)) => Some(*i),
        _ => None,
    }
}

fn bool_opt(o: &Options, key: &str, default: bool) -> bool {
    match o.get(key) {
        Some(OptValue::Bool(b)) => *b,
        _ => default,
    }
}

fn name_opt(o: &Options, key: &str) -> Option<String> {
    match o.get(key) {
        Some(OptValue::Name(n)) => Some(n.clone()),
        Some(OptValue::List(items)) => match items.as_slice() {
            [OptValue::Name(n)] => Some(n.clone()),
            _ => None,
        },
        _ => None,
    }
}

/// Prover limits from `max_depth` and `budget`.
pub fn limits_from(o: &Options) -> ProverLimits {
    let d = ProverLimits::default();
    ProverLimits {
        max_depth: int_opt(o, "max_depth").map_or(d.max_depth, |v| v as usize),
        inference_cap: int_opt(o, "budget").unwrap_or(d.inference_cap),
    }
}

/// Validity settings from `max_depth`, `budget` and `model_max`.
pub fn validity_config_from(o: &Options) -> ValidityConfig {
    let d = ValidityConfig::default();
    ValidityConfig {
        model_max: int_opt(o, "model_max").map_or(d.model_max, |v| v as usize),
        limits: limits_from(o),
        ..d
    }
}

/// Result shaping from `simp_result` (e.g. `[c6]`) or `shape`.
pub fn simp_from(o: &Options) -> Result<Option<SimpPipeline>, String> {
    let Some(name) = name_opt(o, "simp_result").or_else(|| name_opt(o, "shape")) else {
        return Ok(None);
    };
    if name == "none" {
        return Ok(None);
    }
    SimpPipeline::from_name(&name).map(Some).ok_or_else(|| format!("unknown result shaping `{name}`"))
}

/// Execute one directive; the rendered text and whether it succeeded.
fn run_directive(d: &Directive, s: &mut Session) -> (String, bool) {
    let o = merged(s, d);
    let expanded = match s.expand(&d.formula) {
        Ok(f) => f,
        Err(e) => return (render::failure(d, &e.to_string(), &o), false),
    };
    match d.kind {
        DirectiveKind::Print => (render::expansion(&d.formula, &expanded, &o), true),
        DirectiveKind::Valid => match validity(&expanded, &validity_config_from(&o)) {
            Ok(v) => {
                let ok = !matches!(v, ValidityVerdict::Unknown);
                (render::verdict(&d.formula, &v, &o), ok)
            }
            Err(e) => (render::failure(d, &e.to_string(), &o), false),
        },
        DirectiveKind::Ipol => {
            let Formula::Implies(f, g) = &expanded else {
                return (render::failure(d, "the argument of `ipol` must be an implication", &o), false);
            };
            let shape = match simp_from(&o) {
                Ok(x) => x.is_some(),
                Err(e) => return (render::failure(d, &e, &o), false),
            };
            let cfg = IpolConfig { limits: limits_from(&o), shape_c6: shape };
            match interpolate(f, g, &cfg) {
                Ok(h) => {
                    s.last_result = Some(h.formula.clone());
                    store_register(s, &o, &h.formula);
                    (render::result(&d.formula, "interpolation", &h.formula, &o), true)
                }
                Err(e) => (render::failure(d, &e.to_string(), &o), false),
            }
        }
        DirectiveKind::Elim => {
            let simp_result = match simp_from(&o) {
                Ok(x) => x,
                Err(e) => return (render::failure(d, &e, &o), false),
            };
            let opts = ElimOptions { simp_result, ..Default::default() };
            match eliminate(&expanded, &opts) {
                Ok(r) => {
                    s.last_result = Some(r.formula.clone());
                    store_register(s, &o, &r.formula);
                    let mut text = render::result(&d.formula, "elimination", &r.formula, &o);
                    if !r.residual_skolems.is_empty() {
                        let names: Vec<&str> = r.residual_skolems.iter().map(Symbol::as_str).collect();
                        text.push_str(&render::note(&format!("Skolem functions remain: {}", names.join(", "))));
                    }
                    if bool_opt(&o, "printing", true) {
                        (text, true)
                    } else {
                        (String::new(), true)
                    }
                }
                Err(e) => (render::failure(d, &e.to_string(), &o), false),
            }
        }
    }
}

fn store_register(s: &mut Session, o: &Options, f: &Formula) {
    if let Some(name) = name_opt(o, "r") {
        s.registers.insert(name, f.clone());
    }
}

#[cfg(test)]
mod tests;
