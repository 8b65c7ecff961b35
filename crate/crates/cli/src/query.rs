//! Query language over the space lattice.
//!
//! ```text
//! query   := join ( ("<=" | "≤") join )?
//! join    := meet ( ("|" | "∨") meet )*
//! meet    := postfix ( ("&" | "∧") postfix )*
//! postfix := primary "'"*
//! primary := atom | "(" query ")" | ("M" | "Mconv" | "dual") "(" query ")"
//! atom    := "Lp" "(" exp ")" | ("L" | "W") "(" exp "," exp ")"
//! exp     := (integer ("/" integer)? | "inf" | "omega") ("-" | "+")?
//! ```
//!
//! Binding strength: `'` > `M`, `Mconv` > `&` > `|` > `<=`. `M(...)` and `Mconv(...)`
//! always take a parenthesized argument, so only the infix levels need precedence.

use std::fmt;
use std::ops::Range;

use parlat_core::exponent::EnrichedExponent;
use parlat_core::space::{SpaceError, SpaceLattice, SpacePoint};
use serde::Serialize;
use thiserror::Error;

pub const MAX_QUERY_LEN: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Number(String),
    Slash,
    Plus,
    Minus,
    LParen,
    RParen,
    Comma,
    Meet,
    Join,
    Leq,
    Quote,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Number(n) => write!(f, "`{n}`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Meet => f.write_str("`&`"),
            Tok::Join => f.write_str("`|`"),
            Tok::Leq => f.write_str("`<=`"),
            Tok::Quote => f.write_str("`'`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParseErrorKind {
    Lexical,
    Grammar,
    Exponent,
    TooLong,
}

/// Diagnostic positioned at a byte offset of the input.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[error("{}", self.describe())]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl ParseError {
    fn describe(&self) -> String {
        let mut s = format!("{} error at byte {}", kind_name(self.kind), self.offset);
        if !self.expected.is_empty() {
            s.push_str(&format!(": expected {}", self.expected.join(" or ")));
            s.push_str(&format!(", found {}", self.found));
        } else {
            s.push_str(&format!(": {}", self.found));
        }
        if let Some(m) = &self.message {
            s.push_str(&format!(" ({m})"));
        }
        s
    }

    /// The input line with a caret under the offending byte.
    pub fn render(&self, input: &str) -> String {
        let col = input[..self.offset.min(input.len())].chars().count();
        format!("{}\n  {input}\n  {}^", self, " ".repeat(col))
    }
}

fn kind_name(k: ParseErrorKind) -> &'static str {
    match k {
        ParseErrorKind::Lexical => "lexical",
        ParseErrorKind::Grammar => "syntax",
        ParseErrorKind::Exponent => "exponent",
        ParseErrorKind::TooLong => "length",
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, Range<usize>)>, ParseError> {
    let mut out = Vec::new();
    let mut it = input.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        let single = |t: Tok| (t, i..i + c.len_utf8());
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '∞' | 'ω' => {
                out.push(single(Tok::Word(c.to_string())));
                it.next();
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = i;
                while let Some(&(j, d)) = it.peek() {
                    if d.is_ascii_alphanumeric() {
                        end = j + 1;
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Word(input[i..end].to_string()), i..end));
            }
            c if c.is_ascii_digit() => {
                let mut end = i;
                while let Some(&(j, d)) = it.peek() {
                    if d.is_ascii_digit() {
                        end = j + 1;
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Number(input[i..end].to_string()), i..end));
            }
            '<' => {
                it.next();
                match it.peek() {
                    Some(&(_, '=')) => {
                        it.next();
                        out.push((Tok::Leq, i..i + 2));
                    }
                    _ => {
                        return Err(ParseError {
                            kind: ParseErrorKind::Lexical,
                            offset: i,
                            expected: vec!["`<=`".into()],
                            found: "`<`".into(),
                            message: None,
                        })
                    }
                }
            }
            _ => {
                let tok = match c {
                    '/' => Tok::Slash,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '&' | '∧' => Tok::Meet,
                    '|' | '∨' => Tok::Join,
                    '≤' => Tok::Leq,
                    '\'' | '′' => Tok::Quote,
                    other => {
                        return Err(ParseError {
                            kind: ParseErrorKind::Lexical,
                            offset: i,
                            expected: Vec::new(),
                            found: format!("unexpected character {other:?}"),
                            message: None,
                        })
                    }
                };
                out.push(single(tok));
                it.next();
            }
        }
    }
    out.push((Tok::End, input.len()..input.len()));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Atom(SpacePoint),
    Meet(Box<Spanned>, Box<Spanned>),
    Join(Box<Spanned>, Box<Spanned>),
    Leq(Box<Spanned>, Box<Spanned>),
    Dual(Box<Spanned>),
    Mult(Box<Spanned>),
    Conv(Box<Spanned>),
}

/// An expression with the byte range of its source text.
#[derive(Clone, Debug)]
pub struct Spanned {
    pub expr: Expr,
    pub span: Range<usize>,
}

/// Spans are provenance only; equality compares trees.
impl PartialEq for Spanned {
    fn eq(&self, other: &Self) -> bool {
        self.expr == other.expr
    }
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(Tok, Range<usize>)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Range<usize> {
        self.toks[self.pos].1.clone()
    }

    fn bump(&mut self) -> (Tok, Range<usize>) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Grammar,
            offset: self.span().start,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
            message: None,
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<Range<usize>, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.error(&[name]))
        }
    }

    fn query(&mut self) -> Result<Spanned, ParseError> {
        let lhs = self.join()?;
        if *self.peek() == Tok::Leq {
            self.bump();
            let rhs = self.join()?;
            let span = lhs.span.start..rhs.span.end;
            return Ok(Spanned {
                expr: Expr::Leq(Box::new(lhs), Box::new(rhs)),
                span,
            });
        }
        Ok(lhs)
    }

    fn join(&mut self) -> Result<Spanned, ParseError> {
        let mut lhs = self.meet()?;
        while *self.peek() == Tok::Join {
            self.bump();
            let rhs = self.meet()?;
            let span = lhs.span.start..rhs.span.end;
            lhs = Spanned {
                expr: Expr::Join(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn meet(&mut self) -> Result<Spanned, ParseError> {
        let mut lhs = self.postfix()?;
        while *self.peek() == Tok::Meet {
            self.bump();
            let rhs = self.postfix()?;
            let span = lhs.span.start..rhs.span.end;
            lhs = Spanned {
                expr: Expr::Meet(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<Spanned, ParseError> {
        let mut e = self.primary()?;
        while *self.peek() == Tok::Quote {
            let end = self.bump().1.end;
            let span = e.span.start..end;
            e = Spanned {
                expr: Expr::Dual(Box::new(e)),
                span,
            };
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Spanned, ParseError> {
        const START: [&str; 7] = ["`Lp`", "`L`", "`W`", "`M`", "`Mconv`", "`dual`", "`(`"];
        let start = self.span().start;
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.query()?;
                let end = self.expect(Tok::RParen, "`)`")?.end;
                Ok(Spanned {
                    expr: inner.expr,
                    span: start..end,
                })
            }
            Tok::Word(w) => match w.as_str() {
                "M" | "Mconv" | "dual" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let inner = Box::new(self.query()?);
                    let end = self.expect(Tok::RParen, "`)`")?.end;
                    let expr = match w.as_str() {
                        "M" => Expr::Mult(inner),
                        "Mconv" => Expr::Conv(inner),
                        _ => Expr::Dual(inner),
                    };
                    Ok(Spanned { expr, span: start..end })
                }
                "Lp" | "L" | "W" => self.atom(&w),
                _ => Err(self.error(&START)),
            },
            _ => Err(self.error(&START)),
        }
    }

    fn atom(&mut self, head: &str) -> Result<Spanned, ParseError> {
        let start = self.bump().1.start;
        self.expect(Tok::LParen, "`(`")?;
        let first = self.exponent()?;
        let point = if head == "Lp" {
            SpacePoint::chain(first)
        } else {
            self.expect(Tok::Comma, "`,`")?;
            let second = self.exponent()?;
            if head == "L" {
                SpacePoint::square(first, second)
            } else {
                SpacePoint::amalgam(first, second)
            }
        };
        let end = self.expect(Tok::RParen, "`)`")?.end;
        Ok(Spanned {
            expr: Expr::Atom(point),
            span: start..end,
        })
    }

    fn exponent(&mut self) -> Result<EnrichedExponent, ParseError> {
        const EXP: [&str; 3] = ["exponent literal", "`inf`", "`omega`"];
        let start = self.span().start;
        match self.peek().clone() {
            Tok::Number(_) => {
                self.bump();
                if *self.peek() == Tok::Slash {
                    self.bump();
                    if !matches!(self.peek(), Tok::Number(_)) {
                        return Err(self.error(&["denominator"]));
                    }
                    self.bump();
                }
            }
            Tok::Word(w) if matches!(w.as_str(), "inf" | "∞" | "omega" | "ω") => {
                self.bump();
            }
            _ => return Err(self.error(&EXP)),
        }
        if matches!(self.peek(), Tok::Plus | Tok::Minus) {
            self.bump();
        }
        let end = self.toks[self.pos - 1].1.end;
        let text: String = self.input[start..end].chars().filter(|c| !c.is_whitespace()).collect();
        text.parse().map_err(|e: parlat_core::exponent::ExponentError| ParseError {
            kind: ParseErrorKind::Exponent,
            offset: start,
            expected: Vec::new(),
            found: format!("malformed exponent `{text}`"),
            message: Some(e.to_string()),
        })
    }
}

pub fn parse_query(text: &str) -> Result<Spanned, ParseError> {
    if text.chars().count() > MAX_QUERY_LEN {
        return Err(ParseError {
            kind: ParseErrorKind::TooLong,
            offset: text.char_indices().nth(MAX_QUERY_LEN).map_or(text.len(), |(i, _)| i),
            expected: Vec::new(),
            found: format!("query longer than {MAX_QUERY_LEN} characters"),
            message: None,
        });
    }
    let toks = lex(text)?;
    let mut p = Parser { input: text, toks, pos: 0 };
    let e = p.query()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["`&`", "`|`", "`<=`", "`'`", "end of input"]));
    }
    Ok(e)
}

/// Canonical text: binary nodes fully parenthesized below the top level.
pub fn print_query(e: &Spanned) -> String {
    fn go(e: &Expr, top: bool) -> String {
        let bin = |a: &Spanned, op: &str, b: &Spanned| {
            let s = format!("{} {op} {}", go(&a.expr, false), go(&b.expr, false));
            if top {
                s
            } else {
                format!("({s})")
            }
        };
        match e {
            Expr::Atom(p) => p.to_string(),
            Expr::Meet(a, b) => bin(a, "&", b),
            Expr::Join(a, b) => bin(a, "|", b),
            Expr::Leq(a, b) => bin(a, "<=", b),
            Expr::Dual(a) => format!("dual({})", go(&a.expr, true)),
            Expr::Mult(a) => format!("M({})", go(&a.expr, true)),
            Expr::Conv(a) => format!("Mconv({})", go(&a.expr, true)),
        }
    }
    go(&e.expr, true)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Space(SpacePoint),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Space(p) => p.fmt(f),
            Value::Bool(b) => b.fmt(f),
        }
    }
}

/// Evaluation failure at a subexpression.
#[derive(Clone, Debug, PartialEq, Error, Serialize)]
#[error("{message} in `{text}` (bytes {start}..{end})")]
pub struct EvalError {
    pub start: usize,
    pub end: usize,
    pub text: String,
    pub message: String,
}

pub fn eval_query(e: &Spanned, source: &str, lattice: &SpaceLattice) -> Result<Value, EvalError> {
    let fail = |node: &Spanned, message: String| EvalError {
        start: node.span.start,
        end: node.span.end,
        text: source.get(node.span.clone()).unwrap_or_default().to_string(),
        message,
    };
    let space = |node: &Spanned| -> Result<SpacePoint, EvalError> {
        match eval_query(node, source, lattice)? {
            Value::Space(p) => Ok(p),
            Value::Bool(_) => Err(fail(node, "expected a space, got a boolean".into())),
        }
    };
    let lift = |node: &Spanned, r: Result<SpacePoint, SpaceError>| r.map_err(|err| fail(node, err.to_string()));
    match &e.expr {
        Expr::Atom(p) => Ok(Value::Space(*p)),
        Expr::Meet(a, b) => Ok(Value::Space(lift(e, lattice.meet(&space(a)?, &space(b)?))?)),
        Expr::Join(a, b) => Ok(Value::Space(lift(e, lattice.join(&space(a)?, &space(b)?))?)),
        Expr::Leq(a, b) => lattice
            .leq(&space(a)?, &space(b)?)
            .map(Value::Bool)
            .map_err(|err| fail(e, err.to_string())),
        Expr::Dual(a) => Ok(Value::Space(lattice.dual(&space(a)?))),
        Expr::Mult(a) => Ok(Value::Space(lattice.mult_multiplier(&space(a)?))),
        Expr::Conv(a) => Ok(Value::Space(lift(e, lattice.conv_multiplier(&space(a)?))?)),
    }
}
