//! Formula syntax: parsing, negation normal form, and printing.
//!
//! The concrete syntax is
//!
//! ```text
//! F ::= F '|' T | T          (disjunction, lowest precedence, left-assoc)
//! T ::= T '&' U | U          (conjunction, left-assoc)
//! U ::= '~' U | '[]' U | '<>' U | '(' F ')' | atom
//! ```
//!
//! with atoms matching `[a-zA-Z][a-zA-Z0-9_]*`. There are no constants for
//! truth/falsity and no implication arrow. `parse` produces an [`Ast`] that
//! may contain negation anywhere; the solver itself works on [`Formula`],
//! which keeps negation on atoms only (NNF by construction).

use std::fmt;
use thiserror::Error;

/// Parser output: formulas with unrestricted negation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ast {
    Atom(String),
    Not(Box<Ast>),
    And(Box<Ast>, Box<Ast>),
    Or(Box<Ast>, Box<Ast>),
    Box_(Box<Ast>),
    Dia(Box<Ast>),
}

/// Formulas in negation normal form: negation occurs only on atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    NegAtom(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Box_(Box<Formula>),
    Dia(Box<Formula>),
}

/// Syntax error with the byte offset it occurred at and what would have
/// been legal there.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" | "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(String),
    Amp,
    Pipe,
    Tilde,
    BoxOp,
    DiaOp,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Atom(s) => format!("atom '{s}'"),
            Tok::Amp => "'&'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Tilde => "'~'".into(),
            Tok::BoxOp => "'[]'".into(),
            Tok::DiaOp => "'<>'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'&' => {
                toks.push((i, Tok::Amp));
                i += 1;
            }
            b'|' => {
                toks.push((i, Tok::Pipe));
                i += 1;
            }
            b'~' => {
                toks.push((i, Tok::Tilde));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'[' => {
                if bytes.get(i + 1) == Some(&b']') {
                    toks.push((i, Tok::BoxOp));
                    i += 2;
                } else {
                    return Err(ParseError {
                        offset: i + 1,
                        expected: vec!["']'"],
                        found: found_at(src, i + 1),
                    });
                }
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((i, Tok::DiaOp));
                    i += 2;
                } else {
                    return Err(ParseError {
                        offset: i + 1,
                        expected: vec!["'>'"],
                        found: found_at(src, i + 1),
                    });
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((start, Tok::Atom(src[start..i].to_string())));
            }
            _ => {
                return Err(ParseError {
                    offset: i,
                    expected: vec!["'~'", "'[]'", "'<>'", "'('", "atom"],
                    found: found_at(src, i),
                });
            }
        }
    }
    toks.push((src.len(), Tok::Eof));
    Ok(toks)
}

fn found_at(src: &str, offset: usize) -> String {
    match src[offset..].chars().next() {
        Some(c) => format!("'{c}'"),
        None => "end of input".into(),
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected,
            found: self.peek().describe(),
        }
    }

    fn or_level(&mut self) -> Result<Ast, ParseError> {
        let mut f = self.and_level()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let g = self.and_level()?;
            f = Ast::Or(Box::new(f), Box::new(g));
        }
        Ok(f)
    }

    fn and_level(&mut self) -> Result<Ast, ParseError> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let g = self.unary()?;
            f = Ast::And(Box::new(f), Box::new(g));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Ast::Not(Box::new(self.unary()?)))
            }
            Tok::BoxOp => {
                self.bump();
                Ok(Ast::Box_(Box::new(self.unary()?)))
            }
            Tok::DiaOp => {
                self.bump();
                Ok(Ast::Dia(Box::new(self.unary()?)))
            }
            Tok::LParen => {
                self.bump();
                let f = self.or_level()?;
                if *self.peek() == Tok::RParen {
                    self.bump();
                    Ok(f)
                } else {
                    Err(self.error(vec!["'&'", "'|'", "')'"]))
                }
            }
            Tok::Atom(name) => {
                self.bump();
                Ok(Ast::Atom(name))
            }
            _ => Err(self.error(vec!["'~'", "'[]'", "'<>'", "'('", "atom"])),
        }
    }
}

/// Parse a formula. Empty input is an error; errors carry the byte offset
/// and the set of tokens that would have been accepted there.
pub fn parse(src: &str) -> Result<Ast, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.or_level()?;
    if *p.peek() == Tok::Eof {
        Ok(f)
    } else {
        Err(p.error(vec!["'&'", "'|'", "end of input"]))
    }
}

/// Parse and convert to NNF in one step.
pub fn parse_nnf(src: &str) -> Result<Formula, ParseError> {
    Ok(to_nnf(&parse(src)?))
}

/// Push negations down to the atoms: `~(F & G)` becomes `~F | ~G`,
/// `~[]F` becomes `<>~F`, `~~F` becomes `F`, and dually.
pub fn to_nnf(ast: &Ast) -> Formula {
    fn pos(f: &Ast) -> Formula {
        match f {
            Ast::Atom(p) => Formula::Atom(p.clone()),
            Ast::Not(g) => neg(g),
            Ast::And(a, b) => Formula::And(Box::new(pos(a)), Box::new(pos(b))),
            Ast::Or(a, b) => Formula::Or(Box::new(pos(a)), Box::new(pos(b))),
            Ast::Box_(g) => Formula::Box_(Box::new(pos(g))),
            Ast::Dia(g) => Formula::Dia(Box::new(pos(g))),
        }
    }
    fn neg(f: &Ast) -> Formula {
        match f {
            Ast::Atom(p) => Formula::NegAtom(p.clone()),
            Ast::Not(g) => pos(g),
            Ast::And(a, b) => Formula::Or(Box::new(neg(a)), Box::new(neg(b))),
            Ast::Or(a, b) => Formula::And(Box::new(neg(a)), Box::new(neg(b))),
            Ast::Box_(g) => Formula::Dia(Box::new(neg(g))),
            Ast::Dia(g) => Formula::Box_(Box::new(neg(g))),
        }
    }
    pos(ast)
}

impl Formula {
    /// Number of nodes in the formula tree (literals count as one node).
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) => 1,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::Box_(f) | Formula::Dia(f) => 1 + f.size(),
        }
    }

    /// Maximal nesting depth of `[]`/`<>`.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) => 0,
            Formula::And(a, b) | Formula::Or(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Box_(f) | Formula::Dia(f) => 1 + f.modal_depth(),
        }
    }

    /// Back to the general syntax (used when a formula must be fed to code
    /// that evaluates unrestricted negation).
    pub fn to_ast(&self) -> Ast {
        match self {
            Formula::Atom(p) => Ast::Atom(p.clone()),
            Formula::NegAtom(p) => Ast::Not(Box::new(Ast::Atom(p.clone()))),
            Formula::And(a, b) => Ast::And(Box::new(a.to_ast()), Box::new(b.to_ast())),
            Formula::Or(a, b) => Ast::Or(Box::new(a.to_ast()), Box::new(b.to_ast())),
            Formula::Box_(f) => Ast::Box_(Box::new(f.to_ast())),
            Formula::Dia(f) => Ast::Dia(Box::new(f.to_ast())),
        }
    }
}

// Precedence levels for printing: `|` is 0, `&` is 1, prefix operators and
// atoms are 2. Binary operators are left-associative, so the right operand
// is printed one level tighter.
fn fmt_formula(f: &Formula, level: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let own = match f {
        Formula::Or(..) => 0,
        Formula::And(..) => 1,
        _ => 2,
    };
    if own < level {
        write!(out, "(")?;
    }
    match f {
        Formula::Atom(p) => write!(out, "{p}")?,
        Formula::NegAtom(p) => write!(out, "~{p}")?,
        Formula::And(a, b) => {
            fmt_formula(a, 1, out)?;
            write!(out, " & ")?;
            fmt_formula(b, 2, out)?;
        }
        Formula::Or(a, b) => {
            fmt_formula(a, 0, out)?;
            write!(out, " | ")?;
            fmt_formula(b, 1, out)?;
        }
        Formula::Box_(g) => {
            write!(out, "[]")?;
            fmt_formula(g, 2, out)?;
        }
        Formula::Dia(g) => {
            write!(out, "<>")?;
            fmt_formula(g, 2, out)?;
        }
    }
    if own < level {
        write!(out, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, 0, out)
    }
}
