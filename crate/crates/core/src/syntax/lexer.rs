use super::SyntaxError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Bar,
    /// Symbolic operator such as `->`, `;`, `~`, `=`.
    Op(&'static str),
    /// Statement terminator: `.` followed by whitespace, `%` or end of input.
    End,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

// Longest first.
const OPERATORS: &[&str] = &["<->", "->", ":=", ":-", "::", "\\=", "~", "=", ";", "/"];

/// Split `src` into tokens. `%` starts a comment running to end of line.
pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    tokenize_from(src, Pos { line: 1, column: 1 })
}

/// As [`tokenize`], numbering positions from `start`.
pub fn tokenize_from(src: &str, start: Pos) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = start.line;
    let mut col = start.column;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if word.starts_with(|c: char| c.is_ascii_digit()) && !word.chars().all(|c| c.is_ascii_digit()) {
                return Err(SyntaxError::at(pos, format!("malformed number `{word}`")));
            }
            col += i - start;
            out.push(Token { kind: TokenKind::Ident(word), pos });
            continue;
        }
        let simple = match c {
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            ',' => Some(TokenKind::Comma),
            '|' => Some(TokenKind::Bar),
            '.' => {
                let next = chars.get(i + 1).copied();
                if next.map_or(true, |n| n.is_whitespace() || n == '%') {
                    Some(TokenKind::End)
                } else {
                    return Err(SyntaxError::at(pos, "unexpected `.` inside a formula"));
                }
            }
            _ => None,
        };
        if let Some(kind) = simple {
            out.push(Token { kind, pos });
            i += 1;
            col += 1;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        match OPERATORS.iter().find(|op| rest.starts_with(**op)) {
            Some(op) => {
                out.push(Token { kind: TokenKind::Op(op), pos });
                i += op.len();
                col += op.len();
            }
            None => return Err(SyntaxError::at(pos, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators_and_idents() {
        let toks = tokenize("p(x) -> ~q <-> a\\=b").unwrap();
        let kinds: Vec<_> = toks.into_iter().map(|t| t.kind).collect();
        assert_eq!(kinds[4], TokenKind::Op("->"));
        assert_eq!(kinds[5], TokenKind::Op("~"));
        assert_eq!(kinds[7], TokenKind::Op("<->"));
        assert_eq!(kinds[9], TokenKind::Op("\\="));
    }

    #[test]
    fn end_token_needs_trailing_space() {
        let toks = tokenize("p.\nq.").unwrap();
        assert_eq!(toks[1].kind, TokenKind::End);
        assert_eq!(toks[2].pos, Pos { line: 2, column: 1 });
        assert!(tokenize("p.q").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let toks = tokenize("p % comment, with stuff\n, q").unwrap();
        assert_eq!(toks.len(), 3);
    }
}
