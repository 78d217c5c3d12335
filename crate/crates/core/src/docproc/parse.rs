use super::{Block, DocError, Directive, DirectiveKind, Document, OptValue, Options};
use crate::macros::{parse_macro_tokens, MacroError};
use crate::syntax::{tokenize_from, Formula, PTerm, Parser, Pos, SyntaxError, Token, TokenKind};

const MAX: u32 = 1200;

/// Read a document: `@text`/`@end` prose fences, `def` statements and
/// `:-` directives, each statement ending in `.`.
pub fn parse_document(text: &str) -> Result<Document, DocError> {
    let lines: Vec<&str> = text.split_inclusive('\n').collect();
    let mut blocks = Vec::new();
    let mut code = String::new();
    let mut code_start = 1;
    let mut i = 0;
    while i < lines.len() {
        let line = lines[i];
        if line.trim() == "@text" {
            statements(&code, code_start, &mut blocks)?;
            code.clear();
            let open = i + 1;
            let mut prose = String::new();
            i += 1;
            loop {
                let Some(l) = lines.get(i) else {
                    return Err(DocError { line: open, message: "`@text` without matching `@end`".into() });
                };
                i += 1;
                if l.trim() == "@end" {
                    break;
                }
                prose.push_str(l);
                if !l.ends_with('\n') {
                    prose.push('\n');
                }
            }
            blocks.push(Block::Prose(prose));
            code_start = i + 1;
            continue;
        }
        if line.trim() == "@end" {
            return Err(DocError { line: i + 1, message: "`@end` without `@text`".into() });
        }
        code.push_str(line);
        i += 1;
    }
    statements(&code, code_start, &mut blocks)?;
    Ok(Document { blocks })
}

fn statements(code: &str, first_line: usize, blocks: &mut Vec<Block>) -> Result<(), DocError> {
    let tokens = tokenize_from(code, Pos { line: first_line, column: 1 })?;
    let mut current: Vec<Token> = Vec::new();
    for t in tokens {
        if t.kind == TokenKind::End {
            let stmt = std::mem::take(&mut current);
            blocks.push(statement(stmt, t.pos)?);
        } else {
            current.push(t);
        }
    }
    if let Some(t) = current.first() {
        return Err(DocError { line: t.pos.line, message: "statement not terminated by `.`".into() });
    }
    Ok(())
}

fn statement(tokens: Vec<Token>, end: Pos) -> Result<Block, DocError> {
    let first = &tokens[0];
    let line = first.pos.line;
    match &first.kind {
        TokenKind::Ident(w) if w == "def" => {
            let def = parse_macro_tokens(tokens, end).map_err(|e| macro_error(e, line))?;
            Ok(Block::Macro(def))
        }
        TokenKind::Op(":-") => directive(tokens[1..].to_vec(), end, line),
        _ => Err(DocError { line, message: "expected `def`, `:-` or `@text`".into() }),
    }
}

fn macro_error(e: MacroError, line: usize) -> DocError {
    match e {
        MacroError::Syntax(s) => s.into(),
        other => DocError { line, message: other.to_string() },
    }
}

fn directive(tokens: Vec<Token>, end: Pos, line: usize) -> Result<Block, DocError> {
    let mut p = Parser::new(tokens, end);
    let t = p.parse(MAX, true)?;
    p.expect_eof()?;
    let (name, args) = match t.unparen() {
        PTerm::Compound(n, args, _) => (n.as_str(), args.as_slice()),
        other => return Err(SyntaxError::at(other.pos(), "expected a directive such as `valid(..)`").into()),
    };
    if name == "set" {
        let mut opts = Options::new();
        for a in args {
            let (k, v) = option(a)?;
            opts.insert(k, v);
        }
        return Ok(Block::Config(opts));
    }
    let kind = match name {
        "valid" => DirectiveKind::Valid,
        "ipol" => DirectiveKind::Ipol,
        "elim" => DirectiveKind::Elim,
        "print" => DirectiveKind::Print,
        _ => return Err(DocError { line, message: format!("unknown directive `{name}`") }),
    };
    if args.is_empty() || args.len() > 2 {
        return Err(DocError { line, message: format!("`{name}` expects a formula and optional options") });
    }
    let formula = args[0].to_formula()?;
    if kind == DirectiveKind::Ipol && !matches!(formula, Formula::Implies(..)) {
        return Err(DocError { line, message: "the argument of `ipol` must be an implication".into() });
    }
    let mut options = Options::new();
    if let Some(list) = args.get(1) {
        let PTerm::List(items, None, _) = list.unparen() else {
            return Err(SyntaxError::at(list.pos(), "options must be a list `[key=value, ..]`").into());
        };
        for item in items {
            let (k, v) = option(item)?;
            options.insert(k, v);
        }
    }
    Ok(Block::Directive(Directive { kind, formula, options, line }))
}

fn option(t: &PTerm) -> Result<(String, OptValue), SyntaxError> {
    let PTerm::Op("=", args, _) = t.unparen() else {
        return Err(SyntaxError::at(t.pos(), "expected `key=value`"));
    };
    let PTerm::Name(k, _) = args[0].unparen() else {
        return Err(SyntaxError::at(args[0].pos(), "option key must be a name"));
    };
    Ok((k.clone(), value(&args[1])?))
}

fn value(t: &PTerm) -> Result<OptValue, SyntaxError> {
    match t.unparen() {
        PTerm::Name(n, _) => Ok(match n.as_str() {
            "true" => OptValue::Bool(true),
            "false" => OptValue::Bool(false),
            _ => match n.parse::<u64>() {
                Ok(i) => OptValue::Int(i),
                Err(_) => OptValue::Name(n.clone()),
            },
        }),
        PTerm::List(items, None, _) => Ok(OptValue::List(items.iter().map(value).collect::<Result<_, _>>()?)),
        other => Err(SyntaxError::at(other.pos(), "option value must be a name, number or list")),
    }
}
