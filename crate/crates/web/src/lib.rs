//! Browser bindings: validity, elimination and macro expansion against a
//! set of macro definitions written in document syntax.

use wasm_bindgen::prelude::*;

use folwork_core::docproc::{load_document, parse_document, simp_from, validity_config_from, OptValue, Session};
use folwork_core::elimination::{eliminate, ElimOptions};
use folwork_core::prover::{validity, ValidityVerdict};
use folwork_core::syntax::{parse_formula, print_formula, Formula, PrintOptions};

fn session(defs: &str) -> Result<Session, String> {
    let doc = parse_document(defs).map_err(|e| format!("definitions: {e}"))?;
    Ok(load_document(&doc, "defs", Session::new()))
}

fn input(s: &mut Session, formula: &str) -> Result<Formula, String> {
    let text = formula.trim();
    let f = parse_formula(text.strip_suffix('.').unwrap_or(text)).map_err(|e| e.to_string())?;
    s.expand(&f).map_err(|e| e.to_string())
}

/// `*Valid*`, `*Not valid*` (with the countermodel) or `*Failed to validate*`.
pub fn check_valid(defs: &str, formula: &str) -> Result<String, String> {
    let mut s = session(defs)?;
    let f = input(&mut s, formula)?;
    let v = validity(&f, &validity_config_from(&s.config)).map_err(|e| e.to_string())?;
    Ok(match v {
        ValidityVerdict::Valid(_) => "*Valid*".into(),
        ValidityVerdict::NotValid(m) => format!("*Not valid*\n{m}"),
        ValidityVerdict::Unknown => "*Failed to validate*".into(),
    })
}

/// Eliminate second-order quantifiers; `shape` is `""` or `"c6"`.
pub fn run_elim(defs: &str, formula: &str, shape: &str) -> Result<String, String> {
    let mut s = session(defs)?;
    let f = input(&mut s, formula)?;
    if !shape.is_empty() {
        s.config.insert("shape".into(), OptValue::Name(shape.into()));
    }
    let opts = ElimOptions { simp_result: simp_from(&s.config)?, ..Default::default() };
    let r = eliminate(&f, &opts).map_err(|e| e.to_string())?;
    Ok(print_formula(&r.formula, &PrintOptions::default()))
}

pub fn run_expand(defs: &str, formula: &str) -> Result<String, String> {
    let mut s = session(defs)?;
    let f = input(&mut s, formula)?;
    Ok(print_formula(&f, &PrintOptions::default()))
}

#[wasm_bindgen]
pub fn valid(defs: &str, formula: &str) -> Result<String, String> {
    check_valid(defs, formula)
}

#[wasm_bindgen]
pub fn elim(defs: &str, formula: &str, shape: &str) -> Result<String, String> {
    run_elim(defs, formula, shape)
}

#[wasm_bindgen]
pub fn expand(defs: &str, formula: &str) -> Result<String, String> {
    run_expand(defs, formula)
}
