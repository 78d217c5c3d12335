use super::{BuiltinExpr, MacroDef, MacroError, Pattern, PredRef, WhereBinding};
use crate::syntax::{tokenize, PTerm, Parser, Pos, Symbol, SyntaxError, Token, TokenKind};

const MAX: u32 = 1200;

/// Read a definition `[def] head :: body [where T := builtin(..), ...][.]`.
///
/// Builtins: `rename_free_predicate(F, P)` (two targets, `[F_p, P_p] := ...`),
/// `arity(P, F)`, `implications([P/A, ..], [Q/A, ..])` and `fresh(base)`.
pub fn parse_macro_def(text: &str) -> Result<MacroDef, MacroError> {
    let end = Pos { line: text.lines().count().max(1), column: 1 };
    parse_macro_tokens(tokenize(text)?, end)
}

/// As [`parse_macro_def`], on tokens already read from a larger source.
pub fn parse_macro_tokens(mut tokens: Vec<Token>, end: Pos) -> Result<MacroDef, MacroError> {
    if matches!(tokens.last(), Some(Token { kind: TokenKind::End, .. })) {
        tokens.pop();
    }
    if let Some(t) = tokens.iter().find(|t| t.kind == TokenKind::End) {
        return Err(SyntaxError::at(t.pos, "unexpected `.` inside a definition").into());
    }
    if matches!(tokens.first(), Some(Token { kind: TokenKind::Ident(w), .. }) if w == "def") {
        tokens.remove(0);
    }
    let mut p = Parser::new(tokens, end);
    let head = p.parse(MAX, true)?;
    match p.peek() {
        Some(Token { kind: TokenKind::Op("::"), .. }) => p.advance(),
        _ => return Err(SyntaxError::at(p.pos(), "expected `::` after the macro head").into()),
    }
    let body_pt = p.parse(MAX, true)?;
    let mut where_bindings = Vec::new();
    if matches!(p.peek(), Some(Token { kind: TokenKind::Ident(w), .. }) if w == "where") {
        p.advance();
        let bs = p.parse(MAX, true)?;
        let mut items = Vec::new();
        flatten_commas(&bs, &mut items);
        for b in items {
            where_bindings.push(binding(b)?);
        }
    }
    p.expect_eof()?;
    let (name, params) = match head.unparen() {
        PTerm::Name(n, _) => (Symbol::new(n), Vec::new()),
        PTerm::Compound(n, args, _) => {
            let ps = args.iter().map(|a| a.to_arg().map(Pattern::from_arg)).collect::<Result<Vec<_>, _>>()?;
            (Symbol::new(n), ps)
        }
        other => return Err(SyntaxError::at(other.pos(), "macro head must be a name or `name(Params..)`").into()),
    };
    let def = MacroDef { name, params, body: body_pt.to_formula()?, where_bindings };
    def.validate()?;
    Ok(def)
}

fn flatten_commas<'a>(pt: &'a PTerm, out: &mut Vec<&'a PTerm>) {
    match pt {
        PTerm::Op(",", args, _) => {
            flatten_commas(&args[0], out);
            flatten_commas(&args[1], out);
        }
        other => out.push(other),
    }
}

fn name_of(pt: &PTerm) -> Result<Symbol, SyntaxError> {
    match pt.unparen() {
        PTerm::Name(n, _) => Ok(Symbol::new(n)),
        other => Err(SyntaxError::at(other.pos(), "expected a name")),
    }
}

fn binding(pt: &PTerm) -> Result<WhereBinding, SyntaxError> {
    let PTerm::Op(":=", args, pos) = pt.unparen() else {
        return Err(SyntaxError::at(pt.pos(), "where clause expects `Target := builtin(..)`"));
    };
    let targets = match args[0].unparen() {
        PTerm::List(items, None, _) => items.iter().map(name_of).collect::<Result<Vec<_>, _>>()?,
        other => vec![name_of(other)?],
    };
    let (b, bargs) = match args[1].unparen() {
        PTerm::Compound(n, a, _) => (n.as_str(), a.as_slice()),
        other => return Err(SyntaxError::at(other.pos(), "expected a builtin call")),
    };
    let want = |n: usize| {
        if bargs.len() == n {
            Ok(())
        } else {
            Err(SyntaxError::at(*pos, format!("`{b}` expects {n} arguments")))
        }
    };
    let expr = match b {
        "rename_free_predicate" => {
            want(2)?;
            BuiltinExpr::RenameFreePredicate { formula: bargs[0].to_arg()?, pred: bargs[1].to_arg()? }
        }
        "arity" => {
            want(2)?;
            BuiltinExpr::Arity { pred: bargs[0].to_arg()?, formula: bargs[1].to_arg()? }
        }
        "implications" => {
            want(2)?;
            BuiltinExpr::Implications { from: pred_refs(&bargs[0])?, to: pred_refs(&bargs[1])? }
        }
        "fresh" => {
            want(1)?;
            BuiltinExpr::FreshSymbol(name_of(&bargs[0])?.as_str().to_string())
        }
        other => return Err(SyntaxError::at(*pos, format!("unknown builtin `{other}`"))),
    };
    Ok(WhereBinding { targets, expr })
}

fn pred_refs(pt: &PTerm) -> Result<Vec<PredRef>, SyntaxError> {
    let PTerm::List(items, None, _) = pt.unparen() else {
        return Err(SyntaxError::at(pt.pos(), "expected a list of `Pred/Arity` items"));
    };
    items
        .iter()
        .map(|i| match i.unparen() {
            PTerm::Op("/", a, _) => Ok(PredRef { pred: name_of(&a[0])?, arity: Some(name_of(&a[1])?) }),
            other => Ok(PredRef { pred: name_of(other)?, arity: None }),
        })
        .collect()
}
