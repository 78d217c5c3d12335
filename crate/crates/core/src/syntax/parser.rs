//! Operator-precedence parser for the Prolog-style surface syntax.
//!
//! Parsing happens in two stages: tokens are read into a generic
//! [`PTerm`] (the shape Prolog's reader would produce), which is then
//! interpreted as a [`Formula`], [`Term`] or macro [`Arg`]. Identifiers
//! bound by an enclosing `all`/`ex`/`lambda` become variables; all other
//! lowercase identifiers are constants, functions or predicates.

use super::lexer::{tokenize, Pos, Token, TokenKind};
use super::{Arg, Formula, Symbol, SyntaxError, Term};

pub const MAX_PREC: u32 = 1200;

const RESERVED: &[&str] = &["all", "ex", "all2", "ex2", "lambda", "true", "false"];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Assoc {
    Xfx,
    Xfy,
    Yfx,
}

fn infix(op: &str) -> Option<(u32, Assoc)> {
    Some(match op {
        "," => (1000, Assoc::Xfy),
        "->" | "<->" => (1050, Assoc::Xfy),
        ";" => (1100, Assoc::Xfy),
        "=" | "\\=" => (700, Assoc::Xfx),
        "/" => (400, Assoc::Yfx),
        ":=" => (990, Assoc::Xfx),
        _ => return None,
    })
}

const NOT_PREC: u32 = 900;

/// Generic parse tree, before interpretation.
#[derive(Debug, Clone, PartialEq)]
pub enum PTerm {
    Name(String, Pos),
    Compound(String, Vec<PTerm>, Pos),
    List(Vec<PTerm>, Option<Box<PTerm>>, Pos),
    Op(&'static str, Vec<PTerm>, Pos),
    Paren(Box<PTerm>, Pos),
}

impl PTerm {
    pub fn pos(&self) -> Pos {
        match self {
            PTerm::Name(_, p)
            | PTerm::Compound(_, _, p)
            | PTerm::List(_, _, p)
            | PTerm::Op(_, _, p)
            | PTerm::Paren(_, p) => *p,
        }
    }

    /// Strip redundant parentheses.
    pub fn unparen(&self) -> &PTerm {
        match self {
            PTerm::Paren(inner, _) => inner.unparen(),
            other => other,
        }
    }

    pub fn to_formula(&self) -> Result<Formula, SyntaxError> {
        let mut scope = Vec::new();
        formula(self, &mut scope)
    }

    pub fn to_arg(&self) -> Result<Arg, SyntaxError> {
        let mut scope = Vec::new();
        arg(self, &mut scope)
    }

    pub fn to_term(&self) -> Option<Term> {
        term(self, &[])
    }
}

/// Token-stream parser; also used by the document reader.
pub struct Parser {
    tokens: Vec<Token>,
    idx: usize,
    end_pos: Pos,
}

impl Parser {
    pub fn new(tokens: Vec<Token>, end_pos: Pos) -> Self {
        Parser { tokens, idx: 0, end_pos }
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx)
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.tokens.len()
    }

    pub fn pos(&self) -> Pos {
        self.peek().map_or(self.end_pos, |t| t.pos)
    }

    /// Skip the current token.
    pub fn advance(&mut self) {
        self.next();
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub fn expect_eof(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            None => Ok(()),
            Some(Token { kind: TokenKind::RParen, pos }) => {
                Err(SyntaxError::at(*pos, "unbalanced parentheses: unexpected `)`"))
            }
            Some(t) => Err(SyntaxError::at(t.pos, format!("unexpected {}", describe(&t.kind)))),
        }
    }

    /// Parse one term with priority at most `max`; `,` acts as the
    /// conjunction operator only when `comma` is set.
    pub fn parse(&mut self, max: u32, comma: bool) -> Result<PTerm, SyntaxError> {
        let (mut left, mut left_prec) = self.primary(max)?;
        loop {
            let (op, pos) = match self.peek() {
                Some(Token { kind: TokenKind::Comma, pos }) if comma => (",", *pos),
                Some(Token { kind: TokenKind::Op(op), pos }) => (*op, *pos),
                _ => break,
            };
            let Some((prec, assoc)) = infix(op) else { break };
            if prec > max {
                break;
            }
            let left_max = if assoc == Assoc::Yfx { prec } else { prec - 1 };
            if left_prec > left_max {
                break;
            }
            self.next();
            let right_max = if assoc == Assoc::Xfy { prec } else { prec - 1 };
            let right = self.parse(right_max, comma)?;
            left = PTerm::Op(op, vec![left, right], pos);
            left_prec = prec;
        }
        Ok(left)
    }

    fn primary(&mut self, max: u32) -> Result<(PTerm, u32), SyntaxError> {
        let pos = self.pos();
        let Some(tok) = self.next() else {
            return Err(SyntaxError::at(pos, "unexpected end of input"));
        };
        match tok.kind {
            TokenKind::Op("~") => {
                if NOT_PREC > max {
                    return Err(SyntaxError::at(pos, "negation needs parentheses here"));
                }
                let arg = self.parse(NOT_PREC, true)?;
                Ok((PTerm::Op("~", vec![arg], pos), NOT_PREC))
            }
            TokenKind::Ident(name) => {
                if matches!(self.peek(), Some(Token { kind: TokenKind::LParen, .. })) {
                    self.next();
                    let args = self.sequence(TokenKind::RParen, pos)?;
                    Ok((PTerm::Compound(name, args, pos), 0))
                } else {
                    Ok((PTerm::Name(name, pos), 0))
                }
            }
            TokenKind::LParen => {
                let inner = self.parse(MAX_PREC, true)?;
                match self.next() {
                    Some(Token { kind: TokenKind::RParen, .. }) => Ok((PTerm::Paren(Box::new(inner), pos), 0)),
                    Some(t) => Err(SyntaxError::at(t.pos, format!("expected `)`, found {}", describe(&t.kind)))),
                    None => Err(SyntaxError::at(pos, "unbalanced parentheses: missing `)`")),
                }
            }
            TokenKind::LBracket => {
                let mut items = Vec::new();
                if matches!(self.peek(), Some(Token { kind: TokenKind::RBracket, .. })) {
                    self.next();
                    return Ok((PTerm::List(items, None, pos), 0));
                }
                loop {
                    items.push(self.parse(MAX_PREC, false)?);
                    match self.next() {
                        Some(Token { kind: TokenKind::Comma, .. }) => continue,
                        Some(Token { kind: TokenKind::RBracket, .. }) => return Ok((PTerm::List(items, None, pos), 0)),
                        Some(Token { kind: TokenKind::Bar, .. }) => {
                            let tail = self.parse(MAX_PREC, false)?;
                            match self.next() {
                                Some(Token { kind: TokenKind::RBracket, .. }) => {
                                    return Ok((PTerm::List(items, Some(Box::new(tail)), pos), 0))
                                }
                                _ => return Err(SyntaxError::at(pos, "unbalanced brackets: missing `]`")),
                            }
                        }
                        Some(t) => {
                            return Err(SyntaxError::at(t.pos, format!("expected `,` or `]`, found {}", describe(&t.kind))))
                        }
                        None => return Err(SyntaxError::at(pos, "unbalanced brackets: missing `]`")),
                    }
                }
            }
            TokenKind::RParen => Err(SyntaxError::at(pos, "unbalanced parentheses: unexpected `)`")),
            other => Err(SyntaxError::at(pos, format!("unexpected {}", describe(&other)))),
        }
    }

    fn sequence(&mut self, close: TokenKind, open: Pos) -> Result<Vec<PTerm>, SyntaxError> {
        let mut items = Vec::new();
        loop {
            items.push(self.parse(MAX_PREC, false)?);
            match self.next() {
                Some(Token { kind: TokenKind::Comma, .. }) => continue,
                Some(t) if t.kind == close => return Ok(items),
                Some(t) => {
                    return Err(SyntaxError::at(t.pos, format!("expected `,` or `)`, found {}", describe(&t.kind))))
                }
                None => return Err(SyntaxError::at(open, "unbalanced parentheses: missing `)`")),
            }
        }
    }
}

fn describe(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Ident(s) => format!("`{s}`"),
        TokenKind::LParen => "`(`".into(),
        TokenKind::RParen => "`)`".into(),
        TokenKind::LBracket => "`[`".into(),
        TokenKind::RBracket => "`]`".into(),
        TokenKind::Comma => "`,`".into(),
        TokenKind::Bar => "`|`".into(),
        TokenKind::Op(op) => format!("`{op}`"),
        TokenKind::End => "end of statement `.`".into(),
    }
}

fn parse_pterm(text: &str) -> Result<PTerm, SyntaxError> {
    let tokens = tokenize(text)?;
    let end = end_pos(text);
    let mut p = Parser::new(tokens, end);
    let t = p.parse(MAX_PREC, true)?;
    p.expect_eof()?;
    Ok(t)
}

fn end_pos(text: &str) -> Pos {
    let line = text.lines().count().max(1);
    let column = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    Pos { line, column }
}

/// Parse a complete formula in the surface syntax.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    parse_pterm(text)?.to_formula()
}

/// Parse a closed term (identifiers are constants).
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let t = parse_pterm(text)?;
    t.to_term()
        .ok_or_else(|| SyntaxError::at(t.pos(), "expected a term"))
}

/// Parse a macro argument: a term, a list, or a formula.
pub fn parse_arg(text: &str) -> Result<Arg, SyntaxError> {
    parse_pterm(text)?.to_arg()
}

fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
}

fn binder_list(pt: &PTerm) -> Result<Vec<Symbol>, SyntaxError> {
    let one = |p: &PTerm| match p.unparen() {
        PTerm::Name(n, _) if !is_reserved(n) && !n.starts_with(|c: char| c.is_ascii_digit()) => Ok(Symbol::new(n)),
        other => Err(SyntaxError::at(other.pos(), "binder expects a symbol or a list of symbols")),
    };
    match pt.unparen() {
        PTerm::List(items, None, _) => items.iter().map(one).collect(),
        other => Ok(vec![one(other)?]),
    }
}

fn chain<'a>(pt: &'a PTerm, op: &str, out: &mut Vec<&'a PTerm>) {
    match pt {
        PTerm::Op(o, args, _) if *o == op && args.len() == 2 => {
            chain(&args[0], op, out);
            chain(&args[1], op, out);
        }
        other => out.push(other),
    }
}

fn formula(pt: &PTerm, scope: &mut Vec<Symbol>) -> Result<Formula, SyntaxError> {
    match pt {
        PTerm::Paren(inner, _) => formula(inner, scope),
        PTerm::Name(n, pos) => match n.as_str() {
            "true" => Ok(Formula::True),
            "false" => Ok(Formula::False),
            _ if is_reserved(n) => Err(SyntaxError::at(*pos, format!("reserved word `{n}` used as an atom"))),
            _ if n.starts_with(|c: char| c.is_ascii_digit()) => {
                Err(SyntaxError::at(*pos, format!("number `{n}` used as a formula")))
            }
            _ if scope.iter().any(|s| s.as_str() == n) => {
                Err(SyntaxError::at(*pos, format!("variable `{n}` used as a formula")))
            }
            _ => Ok(Formula::Atom(Symbol::new(n), Vec::new())),
        },
        PTerm::Compound(name, args, pos) => {
            if is_reserved(name) {
                return binder(name, args, *pos, scope);
            }
            let terms: Option<Vec<Term>> = args.iter().map(|a| term(a, scope)).collect();
            match terms {
                Some(ts) => Ok(Formula::Atom(Symbol::new(name), ts)),
                None => {
                    let margs = args.iter().map(|a| arg(a, scope)).collect::<Result<Vec<_>, _>>()?;
                    Ok(Formula::MacroCall(Symbol::new(name), margs))
                }
            }
        }
        PTerm::Op(op, args, pos) => match (*op, args.as_slice()) {
            ("~", [a]) => Ok(Formula::not(formula(a, scope)?)),
            (",", [_, _]) | (";", [_, _]) => {
                let mut items = Vec::new();
                chain(pt, op, &mut items);
                let fs = items.into_iter().map(|i| formula(i, scope)).collect::<Result<Vec<_>, _>>()?;
                Ok(if *op == "," { Formula::And(fs) } else { Formula::Or(fs) })
            }
            ("->", [a, b]) => Ok(Formula::implies(formula(a, scope)?, formula(b, scope)?)),
            ("<->", [a, b]) => Ok(Formula::iff(formula(a, scope)?, formula(b, scope)?)),
            ("=", [a, b]) | ("\\=", [a, b]) => {
                let ta = term(a, scope).ok_or_else(|| SyntaxError::at(a.pos(), "equality expects terms"))?;
                let tb = term(b, scope).ok_or_else(|| SyntaxError::at(b.pos(), "equality expects terms"))?;
                let eq = Formula::Eq(ta, tb);
                Ok(if *op == "=" { eq } else { Formula::not(eq) })
            }
            (op, _) => Err(SyntaxError::at(*pos, format!("operator `{op}` is not allowed in a formula"))),
        },
        PTerm::List(_, _, pos) => Err(SyntaxError::at(*pos, "list used in formula position")),
    }
}

fn binder(name: &str, args: &[PTerm], pos: Pos, scope: &mut Vec<Symbol>) -> Result<Formula, SyntaxError> {
    if matches!(name, "true" | "false") {
        return Err(SyntaxError::at(pos, format!("reserved word `{name}` takes no arguments")));
    }
    if args.len() != 2 {
        return Err(SyntaxError::at(pos, format!("reserved word `{name}` expects 2 arguments")));
    }
    let vars = binder_list(&args[0])?;
    match name {
        "all" | "ex" | "lambda" => {
            let depth = scope.len();
            scope.extend(vars.iter().cloned());
            let body = formula(&args[1], scope);
            scope.truncate(depth);
            let body = Box::new(body?);
            Ok(match name {
                "all" => Formula::ForAll(vars, body),
                "ex" => Formula::Exists(vars, body),
                _ => Formula::Lambda(vars, body),
            })
        }
        "all2" => Ok(Formula::ForAll2(vars, Box::new(formula(&args[1], scope)?))),
        _ => Ok(Formula::Exists2(vars, Box::new(formula(&args[1], scope)?))),
    }
}

fn term(pt: &PTerm, scope: &[Symbol]) -> Option<Term> {
    match pt {
        PTerm::Paren(inner, _) => term(inner, scope),
        PTerm::Name(n, _) => {
            if is_reserved(n) {
                None
            } else if scope.iter().any(|s| s.as_str() == n) {
                Some(Term::Var(Symbol::new(n)))
            } else {
                Some(Term::App(Symbol::new(n), Vec::new()))
            }
        }
        PTerm::Compound(n, args, _) => {
            if is_reserved(n) {
                return None;
            }
            let ts: Option<Vec<Term>> = args.iter().map(|a| term(a, scope)).collect();
            Some(Term::App(Symbol::new(n), ts?))
        }
        PTerm::Op(..) | PTerm::List(..) => None,
    }
}

fn arg(pt: &PTerm, scope: &mut Vec<Symbol>) -> Result<Arg, SyntaxError> {
    match pt.unparen() {
        PTerm::List(items, tail, _) => {
            let items = items.iter().map(|i| arg(i, scope)).collect::<Result<Vec<_>, _>>()?;
            match tail {
                None => Ok(Arg::List(items)),
                Some(t) => {
                    let mut acc = arg(t, scope)?;
                    for item in items.into_iter().rev() {
                        acc = Arg::Cons(Box::new(item), Box::new(acc));
                    }
                    Ok(acc)
                }
            }
        }
        _ => match term(pt, scope) {
            Some(t) => Ok(Arg::Term(t)),
            None => Ok(Arg::Formula(formula(pt, scope)?)),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn atomic() {
        assert_eq!(p("p"), Formula::prop("p"));
    }

    #[test]
    fn kb1_body() {
        let f = p("(sprinkler_was_on -> wet(grass)), (rained_last_night -> wet(grass)), (wet(grass) -> wet(shoes))");
        let wet = |x: &str| Formula::atom("wet", vec![Term::constant(x)]);
        assert_eq!(
            f,
            Formula::And(vec![
                Formula::implies(Formula::prop("sprinkler_was_on"), wet("grass")),
                Formula::implies(Formula::prop("rained_last_night"), wet("grass")),
                Formula::implies(wet("grass"), wet("shoes")),
            ])
        );
    }

    #[test]
    fn conjunction_binds_tighter_than_implication() {
        assert_eq!(
            p("a, b -> c"),
            Formula::implies(Formula::And(vec![Formula::prop("a"), Formula::prop("b")]), Formula::prop("c"))
        );
        assert_eq!(
            p("a, b ; c"),
            Formula::Or(vec![Formula::And(vec![Formula::prop("a"), Formula::prop("b")]), Formula::prop("c")])
        );
        assert_eq!(
            p("a -> b ; c"),
            Formula::Or(vec![Formula::implies(Formula::prop("a"), Formula::prop("b")), Formula::prop("c")])
        );
    }

    #[test]
    fn parenthesized_chains_stay_nested() {
        let f = p("a, (b, c)");
        assert_eq!(
            f,
            Formula::And(vec![Formula::prop("a"), Formula::And(vec![Formula::prop("b"), Formula::prop("c")])])
        );
        assert_eq!(p("a, b, c"), Formula::And(vec![Formula::prop("a"), Formula::prop("b"), Formula::prop("c")]));
    }

    #[test]
    fn bound_identifiers_become_variables() {
        let f = p("all(x, p(a, x))");
        assert_eq!(
            f,
            Formula::ForAll(vec![Symbol::new("x")], Box::new(Formula::atom("p", vec![Term::constant("a"), Term::var("x")])))
        );
        let g = p("all([x,y], ex(z, r(x,y,z)))");
        match g {
            Formula::ForAll(vs, _) => assert_eq!(vs.len(), 2),
            _ => panic!(),
        }
    }

    #[test]
    fn macro_calls_with_lists_and_lambdas() {
        match p("explanation(kb1, [wet], wet(shoes))") {
            Formula::MacroCall(n, args) => {
                assert_eq!(n.as_str(), "explanation");
                assert_eq!(args[1], Arg::List(vec![Arg::Term(Term::constant("wet"))]));
            }
            other => panic!("{other:?}"),
        }
        match p("col2(lambda([u,v],((u=1,v=2);(u=2,v=3))))") {
            Formula::MacroCall(_, args) => assert!(matches!(&args[0], Arg::Formula(Formula::Lambda(..)))),
            other => panic!("{other:?}"),
        }
        assert_eq!(p("circ(p, p(a))"), Formula::atom("circ", vec![Term::constant("p"), Term::app("p", vec![Term::constant("a")])]));
    }

    #[test]
    fn lenient_arguments() {
        assert_eq!(p("all(x, p(x) -> q(x))"), p("all(x, (p(x) -> q(x)))"));
    }

    #[test]
    fn inequality_sugar() {
        assert_eq!(p("a \\= b"), Formula::not(Formula::Eq(Term::constant("a"), Term::constant("b"))));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("(p, q").unwrap_err();
        assert!(e.message.contains("unbalanced"), "{e}");
        let e = parse_formula("p)").unwrap_err();
        assert!(e.message.contains("unbalanced"));
        let e = parse_formula("p,\n  -> q").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_formula("all(x)").unwrap_err();
        assert!(e.message.contains("reserved"));
        let e = parse_formula("true(a)").unwrap_err();
        assert!(e.message.contains("reserved"));
        assert!(parse_formula("all(x, x)").is_err());
        assert!(parse_formula("").is_err());
    }
}
