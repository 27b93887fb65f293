use thiserror::Error;

use super::{BinaryOp, Expr, UnaryOp, Var};

/// Maximum depth of a parsed tree. Evaluation, printing and
/// differentiation are recursive, so deeper input is rejected up front.
pub const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Unexpected character or end of input.
    Syntax(String),
    UnknownIdentifier(String),
    /// A function applied to the wrong number of arguments, or a variable
    /// used as a function.
    Arity(String),
    TooDeep,
}

/// Parse failure with the 1-based character position of the offending
/// token. End of input is reported as `len + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} at position {position}", describe(.kind))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Syntax(m) => format!("syntax error: {m}"),
        ParseErrorKind::UnknownIdentifier(name) => format!("unknown identifier `{name}`"),
        ParseErrorKind::Arity(m) => format!("arity mismatch: {m}"),
        ParseErrorKind::TooDeep => format!("expression nested deeper than {MAX_DEPTH}"),
    }
}

/// Parse an expression.
///
/// ```text
/// expr   := term (('+'|'-') term)*
/// term   := factor (('*'|'/') factor)*
/// factor := base ('^' factor)?
/// base   := number | ident | ident '(' expr ')' | '(' expr ')' | '-' base
/// ```
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser {
        len: text.chars().count(),
        tokens: tokenize(text)?,
        pos: 0,
    };
    let (expr, _) = parser.expr(0)?;
    match parser.peek() {
        None => Ok(expr),
        Some(tok) => Err(ParseError {
            kind: ParseErrorKind::Syntax(format!("unexpected {}", tok.kind.describe())),
            position: tok.position,
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Number(v) => format!("number {v}"),
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Op(c) => format!("`{c}`"),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Comma => "`,`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    position: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let position = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let kind = match c {
            '+' | '-' | '*' | '/' | '^' => {
                i += 1;
                TokenKind::Op(c)
            }
            '(' => {
                i += 1;
                TokenKind::LParen
            }
            ')' => {
                i += 1;
                TokenKind::RParen
            }
            ',' => {
                i += 1;
                TokenKind::Comma
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '.' {
                    i += 1;
                    let frac = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == frac {
                        return Err(syntax(i + 1, "expected digits after decimal point"));
                    }
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    i += 1;
                    if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                        i += 1;
                    }
                    let exp = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == exp {
                        return Err(syntax(i + 1, "expected exponent digits"));
                    }
                }
                let literal: String = chars[start..i].iter().collect();
                let value: f64 = literal
                    .parse()
                    .map_err(|_| syntax(position, "malformed number"))?;
                if !value.is_finite() {
                    return Err(syntax(position, "number out of range"));
                }
                TokenKind::Number(value)
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                TokenKind::Ident(chars[start..i].iter().collect())
            }
            other => return Err(syntax(position, &format!("unexpected character `{other}`"))),
        };
        tokens.push(Token { kind, position });
    }
    Ok(tokens)
}

fn syntax(position: usize, msg: &str) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax(msg.to_string()),
        position,
    }
}

struct Parser {
    /// Character count of the input, for end-of-input positions.
    len: usize,
    tokens: Vec<Token>,
    pos: usize,
}

type Parsed = (Expr, usize);

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn end_position(&self) -> usize {
        self.len + 1
    }

    fn here(&self) -> usize {
        self.peek()
            .map(|t| t.position)
            .unwrap_or_else(|| self.end_position())
    }

    fn next_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Op(c),
                ..
            }) if ops.contains(c) => {
                let c = *c;
                self.pos += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn check_depth(&self, depth: usize, position: usize) -> Result<(), ParseError> {
        if depth > MAX_DEPTH {
            Err(ParseError {
                kind: ParseErrorKind::TooDeep,
                position,
            })
        } else {
            Ok(())
        }
    }

    fn expr(&mut self, nesting: usize) -> Result<Parsed, ParseError> {
        let (mut lhs, mut depth) = self.term(nesting)?;
        while let Some(op) = self.next_op(&['+', '-']) {
            let at = self.here();
            let (rhs, rd) = self.term(nesting)?;
            let op = if op == '+' {
                BinaryOp::Add
            } else {
                BinaryOp::Sub
            };
            depth = 1 + depth.max(rd);
            self.check_depth(depth, at)?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok((lhs, depth))
    }

    fn term(&mut self, nesting: usize) -> Result<Parsed, ParseError> {
        let (mut lhs, mut depth) = self.factor(nesting)?;
        while let Some(op) = self.next_op(&['*', '/']) {
            let at = self.here();
            let (rhs, rd) = self.factor(nesting)?;
            let op = if op == '*' {
                BinaryOp::Mul
            } else {
                BinaryOp::Div
            };
            depth = 1 + depth.max(rd);
            self.check_depth(depth, at)?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok((lhs, depth))
    }

    fn factor(&mut self, nesting: usize) -> Result<Parsed, ParseError> {
        let at = self.here();
        self.check_depth(nesting, at)?;
        let (base, bd) = self.base(nesting)?;
        if self.next_op(&['^']).is_some() {
            let at = self.here();
            let (exponent, ed) = self.factor(nesting + 1)?;
            let depth = 1 + bd.max(ed);
            self.check_depth(depth, at)?;
            Ok((Expr::binary(BinaryOp::Pow, base, exponent), depth))
        } else {
            Ok((base, bd))
        }
    }

    fn base(&mut self, nesting: usize) -> Result<Parsed, ParseError> {
        let at = self.here();
        self.check_depth(nesting, at)?;
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(at, "expected operand, found end of input"));
        };
        self.pos += 1;
        match tok.kind {
            TokenKind::Number(v) => Ok((Expr::Const(v), 1)),
            TokenKind::Op('-') => {
                let (inner, d) = self.base(nesting + 1)?;
                Ok((Expr::unary(UnaryOp::Neg, inner), d + 1))
            }
            TokenKind::LParen => {
                let (inner, d) = self.expr(nesting + 1)?;
                self.expect_rparen()?;
                Ok((inner, d))
            }
            TokenKind::Ident(name) => self.identifier(name, tok.position, nesting),
            other => Err(syntax(
                tok.position,
                &format!("expected operand, found {}", other.describe()),
            )),
        }
    }

    fn identifier(
        &mut self,
        name: String,
        position: usize,
        nesting: usize,
    ) -> Result<Parsed, ParseError> {
        let followed_by_paren = matches!(
            self.peek(),
            Some(Token {
                kind: TokenKind::LParen,
                ..
            })
        );
        if let Some(op) = UnaryOp::from_name(&name) {
            if !followed_by_paren {
                return Err(ParseError {
                    kind: ParseErrorKind::Arity(format!("`{name}` takes exactly one argument")),
                    position: self.here(),
                });
            }
            self.pos += 1;
            if matches!(
                self.peek(),
                Some(Token {
                    kind: TokenKind::RParen,
                    ..
                })
            ) {
                return Err(ParseError {
                    kind: ParseErrorKind::Arity(format!("`{name}` called with no arguments")),
                    position: self.here(),
                });
            }
            let (arg, d) = self.expr(nesting + 1)?;
            if let Some(Token {
                kind: TokenKind::Comma,
                position,
            }) = self.peek()
            {
                return Err(ParseError {
                    kind: ParseErrorKind::Arity(format!("`{name}` takes exactly one argument")),
                    position: *position,
                });
            }
            self.expect_rparen()?;
            return Ok((Expr::unary(op, arg), d + 1));
        }
        let var = variable(&name).ok_or_else(|| ParseError {
            kind: ParseErrorKind::UnknownIdentifier(name.clone()),
            position,
        })?;
        if followed_by_paren {
            return Err(ParseError {
                kind: ParseErrorKind::Arity(format!("`{name}` is a variable, not a function")),
                position: self.here(),
            });
        }
        Ok((Expr::Var(var), 1))
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::RParen,
                ..
            }) => {
                self.pos += 1;
                Ok(())
            }
            Some(tok) => Err(syntax(
                tok.position,
                &format!("expected `)`, found {}", tok.kind.describe()),
            )),
            None => Err(syntax(
                self.end_position(),
                "expected `)`, found end of input",
            )),
        }
    }
}

/// `x<digits>` or `u<digits>` with a positive index.
fn variable(name: &str) -> Option<Var> {
    let (head, digits) = name.split_at(1);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let idx: usize = digits.parse().ok()?;
    if idx == 0 {
        return None;
    }
    match head {
        "x" => Some(Var::X(idx)),
        "u" => Some(Var::U(idx)),
        _ => None,
    }
}
