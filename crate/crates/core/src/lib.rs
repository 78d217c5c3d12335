//! A first-order logic workbench.
//!
//! Formulas are read in a Prolog-style surface syntax, expanded through a
//! macro system, and handed to a connection-tableau prover, a Craig/Lyndon
//! interpolation procedure, or second-order quantifier elimination.
//! Literate documents mix macro definitions, reasoning directives and
//! LaTeX prose and render to LaTeX with the results inlined.

pub mod macros;
pub mod syntax;
pub mod fresh;
pub mod interpolation;
pub mod prover;
pub mod transform;
pub mod elimination;
pub mod export;
pub mod docproc;
