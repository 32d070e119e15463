//! Nonassociative term syntax.
//!
//! A [`Term`] is a binary product tree whose leaves are constituent
//! generators (`f[i,α](x)`, `b[i,β](x)`) or observable symbols
//! (`Phi[α,β](x)`). Every product is written with explicit parentheses:
//!
//! ```text
//! term    := leaf | "(" term term ")"
//! leaf    := fgen | bgen | phi
//! fgen    := "f" "[" int "," int "]" "(" ident ")"
//! bgen    := "b" "[" int "," int "]" "(" ident ")"
//! phi     := "Phi" "[" int "," int "]" "(" ident ")"
//! int     := [1-9][0-9]*
//! ident   := [a-zA-Z][a-zA-Z0-9]*
//! ```
//!
//! Whitespace is allowed between tokens. The printer emits exactly one space
//! between the two factors of a product and nothing else, so
//! `parse(&t.to_string()) == Ok(t)` for every term.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Opaque label for a spacetime point. Only identity matters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointLabel(Arc<str>);

impl PointLabel {
    /// Builds a label, checking it against the `ident` production.
    pub fn new(name: &str) -> Option<Self> {
        let mut chars = name.chars();
        let first = chars.next()?;
        if !first.is_ascii_alphabetic() || !chars.all(|c| c.is_ascii_alphanumeric()) {
            return None;
        }
        Some(PointLabel(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Ordered index pair `m = (α, β)` labelling an observable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPair {
    pub alpha: u32,
    pub beta: u32,
}

impl IndexPair {
    /// Returns `None` unless both indices are positive.
    pub fn new(alpha: u32, beta: u32) -> Option<Self> {
        (alpha > 0 && beta > 0).then_some(IndexPair { alpha, beta })
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorKind {
    F,
    B,
}

impl GeneratorKind {
    fn keyword(self) -> &'static str {
        match self {
            GeneratorKind::F => "f",
            GeneratorKind::B => "b",
        }
    }
}

/// A nonassociative constituent `f^i_α(x)` or `b_{iβ}(x)`.
///
/// `color` is the summation index `i`; `external` is `α` for `F` and `β`
/// for `B`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub color: u32,
    pub external: u32,
    pub point: PointLabel,
}

impl Generator {
    pub fn new(kind: GeneratorKind, color: u32, external: u32, point: PointLabel) -> Option<Self> {
        (color > 0 && external > 0).then_some(Generator {
            kind,
            color,
            external,
            point,
        })
    }

    pub fn f(color: u32, alpha: u32, point: &str) -> Option<Self> {
        Self::new(GeneratorKind::F, color, alpha, PointLabel::new(point)?)
    }

    pub fn b(color: u32, beta: u32, point: &str) -> Option<Self> {
        Self::new(GeneratorKind::B, color, beta, PointLabel::new(point)?)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{},{}]({})",
            self.kind.keyword(),
            self.color,
            self.external,
            self.point
        )
    }
}

/// Observable `Φ_m(x)` with `m = (α, β)`.
///
/// Ordered by index pair first, then point; this order fixes the canonical
/// ordering of words in the normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObservableSymbol {
    pub m: IndexPair,
    pub point: PointLabel,
}

impl ObservableSymbol {
    pub fn new(m: IndexPair, point: PointLabel) -> Self {
        ObservableSymbol { m, point }
    }

    pub fn from_parts(alpha: u32, beta: u32, point: &str) -> Option<Self> {
        Some(ObservableSymbol {
            m: IndexPair::new(alpha, beta)?,
            point: PointLabel::new(point)?,
        })
    }
}

impl fmt::Display for ObservableSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phi[{},{}]({})", self.m.alpha, self.m.beta, self.point)
    }
}

/// The associator scalar `μ²_{m_a m_b}`. No exchange symmetry is assumed:
/// `μ²_{m_a m_b}` and `μ²_{m_b m_a}` are distinct symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MuSymbol {
    pub left: IndexPair,
    pub right: IndexPair,
}

impl MuSymbol {
    pub fn new(left: IndexPair, right: IndexPair) -> Self {
        MuSymbol { left, right }
    }
}

impl fmt::Display for MuSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mu2[{},{}]", self.left, self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Leaf {
    Generator(Generator),
    Observable(ObservableSymbol),
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::Generator(g) => g.fmt(f),
            Leaf::Observable(o) => o.fmt(f),
        }
    }
}

/// Binary product tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Leaf(Leaf),
    Node(Box<Term>, Box<Term>),
}

impl Term {
    pub fn generator(g: Generator) -> Self {
        Term::Leaf(Leaf::Generator(g))
    }

    pub fn observable(o: ObservableSymbol) -> Self {
        Term::Leaf(Leaf::Observable(o))
    }

    pub fn product(left: Term, right: Term) -> Self {
        Term::Node(Box::new(left), Box::new(right))
    }

    /// Left-nested quartet `(((f b) f) b)`.
    pub fn quartet(f1: Generator, b1: Generator, f2: Generator, b2: Generator) -> Self {
        Term::product(
            Term::product(
                Term::product(Term::generator(f1), Term::generator(b1)),
                Term::generator(f2),
            ),
            Term::generator(b2),
        )
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Term::Leaf(_) => 1,
            Term::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Leaf(_) => 0,
            Term::Node(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&Leaf> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Leaf>) {
        match self {
            Term::Leaf(l) => out.push(l),
            Term::Node(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Leaf(l) => l.fmt(f),
            Term::Node(l, r) => write!(f, "({l} {r})"),
        }
    }
}

/// Canonical text of a term.
pub fn print(t: &Term) -> String {
    t.to_string()
}

/// Indices extracted from a left-nested quartet `(((f b) f) b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuartetMatch {
    pub m1: IndexPair,
    pub p1: PointLabel,
    pub m2: IndexPair,
    pub p2: PointLabel,
}

/// Recognizes the quartet shape `(((f b) f) b)`.
///
/// Each f–b pair must share its color index and its point. The two pairs
/// are independent of each other.
pub fn match_quartet(t: &Term) -> Option<QuartetMatch> {
    let Term::Node(abc, b2) = t else { return None };
    let Term::Node(ab, f2) = abc.as_ref() else { return None };
    let Term::Node(f1, b1) = ab.as_ref() else { return None };

    let (f1, b1, f2, b2) = (
        as_generator(f1, GeneratorKind::F)?,
        as_generator(b1, GeneratorKind::B)?,
        as_generator(f2, GeneratorKind::F)?,
        as_generator(b2, GeneratorKind::B)?,
    );
    let paired = |f: &Generator, b: &Generator| f.color == b.color && f.point == b.point;
    if !paired(f1, b1) || !paired(f2, b2) {
        return None;
    }
    Some(QuartetMatch {
        m1: IndexPair { alpha: f1.external, beta: b1.external },
        p1: f1.point.clone(),
        m2: IndexPair { alpha: f2.external, beta: b2.external },
        p2: f2.point.clone(),
    })
}

fn as_generator(t: &Term, kind: GeneratorKind) -> Option<&Generator> {
    match t {
        Term::Leaf(Leaf::Generator(g)) if g.kind == kind => Some(g),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnbalancedParens,
    UnknownGeneratorKind(String),
    MissingIndex,
    TrailingInput,
    /// An index that does not match `[1-9][0-9]*` or overflows `u32`.
    InvalidIndex(String),
    /// A point label that does not match `[a-zA-Z][a-zA-Z0-9]*`.
    InvalidPoint,
    UnexpectedToken { expected: &'static str, found: String },
}

impl ParseErrorKind {
    pub fn name(&self) -> &'static str {
        match self {
            ParseErrorKind::UnbalancedParens => "UnbalancedParens",
            ParseErrorKind::UnknownGeneratorKind(_) => "UnknownGeneratorKind",
            ParseErrorKind::MissingIndex => "MissingIndex",
            ParseErrorKind::TrailingInput => "TrailingInput",
            ParseErrorKind::InvalidIndex(_) => "InvalidIndex",
            ParseErrorKind::InvalidPoint => "InvalidPoint",
            ParseErrorKind::UnexpectedToken { .. } => "UnexpectedToken",
        }
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnbalancedParens => f.write_str("unbalanced parentheses"),
            ParseErrorKind::UnknownGeneratorKind(k) => write!(f, "unknown generator kind `{k}`"),
            ParseErrorKind::MissingIndex => f.write_str("missing index"),
            ParseErrorKind::TrailingInput => f.write_str("trailing input after term"),
            ParseErrorKind::InvalidIndex(s) => write!(f, "invalid index `{s}`"),
            ParseErrorKind::InvalidPoint => f.write_str("invalid point label"),
            ParseErrorKind::UnexpectedToken { expected, found } => {
                write!(f, "expected {expected}, found {found}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input; equal to the input length for
    /// end-of-input errors.
    pub offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Int(&'a str),
    Ident(&'a str),
    Other(char),
    Eof,
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Int(s) | Tok::Ident(s) => format!("`{s}`"),
            Tok::Other(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the next token and its starting byte offset without consuming it.
    fn peek(&mut self) -> (Tok<'a>, usize) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return (Tok::Eof, start);
        };
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            c if c.is_ascii_digit() => {
                let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
                Tok::Int(&rest[..len])
            }
            c if c.is_ascii_alphabetic() => {
                let len = rest
                    .find(|c: char| !c.is_ascii_alphanumeric())
                    .unwrap_or(rest.len());
                Tok::Ident(&rest[..len])
            }
            c => Tok::Other(c),
        };
        (tok, start)
    }

    fn bump(&mut self, tok: Tok<'_>) {
        self.pos += match tok {
            Tok::Int(s) | Tok::Ident(s) => s.len(),
            Tok::Other(c) => c.len_utf8(),
            Tok::Eof => 0,
            _ => 1,
        };
    }

    fn next(&mut self) -> (Tok<'a>, usize) {
        let (tok, at) = self.peek();
        self.bump(tok);
        (tok, at)
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    /// Offsets of currently open `(`.
    open: Vec<usize>,
}

/// Parses one fully parenthesized term.
pub fn parse(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        lex: Lexer::new(text),
        open: Vec::new(),
    };
    let term = p.term()?;
    match p.lex.peek() {
        (Tok::Eof, _) => Ok(term),
        (_, at) => Err(ParseError {
            kind: ParseErrorKind::TrailingInput,
            offset: at,
        }),
    }
}

impl Parser<'_> {
    fn err<T>(&self, kind: ParseErrorKind, offset: usize) -> Result<T, ParseError> {
        Err(ParseError { kind, offset })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (tok, at) = self.lex.next();
        match tok {
            Tok::LParen => {
                self.open.push(at);
                let left = self.term()?;
                let right = self.term()?;
                match self.lex.next() {
                    (Tok::RParen, _) => {
                        self.open.pop();
                        Ok(Term::product(left, right))
                    }
                    (Tok::Eof, end) => self.err(ParseErrorKind::UnbalancedParens, end),
                    (other, at) => self.err(
                        ParseErrorKind::UnexpectedToken {
                            expected: "`)` closing a binary product",
                            found: other.describe(),
                        },
                        at,
                    ),
                }
            }
            Tok::Ident(word) => self.leaf(word, at),
            Tok::Eof if !self.open.is_empty() => self.err(ParseErrorKind::UnbalancedParens, at),
            Tok::RParen if self.open.is_empty() => self.err(ParseErrorKind::UnbalancedParens, at),
            other => self.err(
                ParseErrorKind::UnexpectedToken {
                    expected: "a term",
                    found: other.describe(),
                },
                at,
            ),
        }
    }

    fn leaf(&mut self, word: &str, at: usize) -> Result<Term, ParseError> {
        let kind = match word {
            "f" => Some(GeneratorKind::F),
            "b" => Some(GeneratorKind::B),
            "Phi" => None,
            other => {
                return self.err(ParseErrorKind::UnknownGeneratorKind(other.to_string()), at);
            }
        };
        let (first, second) = self.index_pair()?;
        let point = self.point()?;
        Ok(match kind {
            Some(kind) => Term::generator(Generator {
                kind,
                color: first,
                external: second,
                point,
            }),
            None => Term::observable(ObservableSymbol {
                m: IndexPair { alpha: first, beta: second },
                point,
            }),
        })
    }

    fn index_pair(&mut self) -> Result<(u32, u32), ParseError> {
        match self.lex.next() {
            (Tok::LBracket, _) => {}
            (_, at) => return self.err(ParseErrorKind::MissingIndex, at),
        }
        let first = self.index()?;
        match self.lex.next() {
            (Tok::Comma, _) => {}
            (_, at) => return self.err(ParseErrorKind::MissingIndex, at),
        }
        let second = self.index()?;
        match self.lex.next() {
            (Tok::RBracket, _) => Ok((first, second)),
            (other, at) => self.err(
                ParseErrorKind::UnexpectedToken {
                    expected: "`]`",
                    found: other.describe(),
                },
                at,
            ),
        }
    }

    fn index(&mut self) -> Result<u32, ParseError> {
        match self.lex.peek() {
            (Tok::Int(digits), at) => {
                self.lex.bump(Tok::Int(digits));
                match digits.parse::<u32>() {
                    Ok(v) if !digits.starts_with('0') => Ok(v),
                    _ => self.err(ParseErrorKind::InvalidIndex(digits.to_string()), at),
                }
            }
            (_, at) => self.err(ParseErrorKind::MissingIndex, at),
        }
    }

    fn point(&mut self) -> Result<PointLabel, ParseError> {
        let (tok, at) = self.lex.next();
        if tok != Tok::LParen {
            return self.err(
                ParseErrorKind::UnexpectedToken {
                    expected: "`(` before a point label",
                    found: tok.describe(),
                },
                at,
            );
        }
        let label = match self.lex.next() {
            (Tok::Ident(name), _) => PointLabel(Arc::from(name)),
            (_, at) => return self.err(ParseErrorKind::InvalidPoint, at),
        };
        match self.lex.next() {
            (Tok::RParen, _) => Ok(label),
            (Tok::Eof, end) => self.err(ParseErrorKind::UnbalancedParens, end),
            (other, at) => self.err(
                ParseErrorKind::UnexpectedToken {
                    expected: "`)` after a point label",
                    found: other.describe(),
                },
                at,
            ),
        }
    }
}
