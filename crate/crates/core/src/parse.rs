//! Rule-text parser.
//!
//! Grammar (one statement per line by convention, whitespace-insensitive):
//!
//! ```text
//! rule    := head ( ":-" body )? "."
//! body    := lit ( "," lit )*
//! lit     := atom | "not" atom
//! atom    := name | name "(" term ("," term)* ")"
//! nogood  := "#nogood" atom+ "."
//! ```
//!
//! Names match `[a-zA-Z_][a-zA-Z0-9_]*`. Terms starting with an uppercase
//! letter are variables; everything else is a constant. `%` starts a
//! comment that runs to the end of the line.
//!
//! The parser produces a surface AST. Propositional lowering rejects
//! variables and treats ground compound atoms such as `p(c)` as opaque
//! atom names; first-order lowering lives in the `firstorder` module.

use crate::kb::{Atom, KnowledgeBase, Nogood, Rule};
use std::fmt;
use thiserror::Error;

/// Parse failure with source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

/// Non-fatal parse diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// A term inside a compound atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum RawTerm {
    /// Uppercase-initial name.
    Variable(String),
    /// Lowercase- or underscore-initial name.
    Constant(String),
}

impl RawTerm {
    pub fn text(&self) -> &str {
        match self {
            RawTerm::Variable(s) | RawTerm::Constant(s) => s,
        }
    }
}

/// Surface atom: a name with optional term arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawAtom {
    pub name: String,
    pub args: Vec<RawTerm>,
    pub line: usize,
    pub col: usize,
}

impl RawAtom {
    pub fn is_ground(&self) -> bool {
        self.args
            .iter()
            .all(|t| matches!(t, RawTerm::Constant(_)))
    }

    /// Canonical spelling, `p` or `p(c1,c2)`, with no whitespace.
    pub fn ground_name(&self) -> String {
        ground_atom_name(
            &self.name,
            self.args.iter().map(|t| t.text()),
        )
    }
}

/// Canonical ground-atom spelling shared with the grounder.
pub fn ground_atom_name<'a, I>(pred: &str, args: I) -> String
where
    I: IntoIterator<Item = &'a str>,
{
    let mut s = pred.to_string();
    let mut iter = args.into_iter().peekable();
    if iter.peek().is_some() {
        s.push('(');
        let parts: Vec<&str> = iter.collect();
        s.push_str(&parts.join(","));
        s.push(')');
    }
    s
}

/// One parsed statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Rule {
        head: RawAtom,
        pos: Vec<RawAtom>,
        neg: Vec<RawAtom>,
        line: usize,
    },
    Nogood {
        atoms: Vec<RawAtom>,
        line: usize,
    },
}

/// A propositional program: knowledge base plus its nogood directives
/// and any parse warnings.
#[derive(Debug, Clone)]
pub struct Program {
    pub kb: KnowledgeBase,
    pub nogoods: Vec<Nogood>,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Name(String),
    Arrow,
    Dot,
    Comma,
    LParen,
    RParen,
    NogoodDirective,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Name(s) => write!(f, "'{s}'"),
            Token::Arrow => write!(f, "':-'"),
            Token::Dot => write!(f, "'.'"),
            Token::Comma => write!(f, "','"),
            Token::LParen => write!(f, "'('"),
            Token::RParen => write!(f, "')'"),
            Token::NogoodDirective => write!(f, "'#nogood'"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Token, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c == '%' {
                    while let Some(&d) = self.chars.peek() {
                        if d == '\n' {
                            break;
                        }
                        self.bump();
                    }
                } else if c.is_whitespace() {
                    self.bump();
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(&c) = self.chars.peek() else {
                return Ok(out);
            };
            let token = if c.is_alphabetic() || c == '_' {
                let mut name = String::new();
                while let Some(&d) = self.chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        name.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Token::Name(name)
            } else {
                match c {
                    '.' => {
                        self.bump();
                        Token::Dot
                    }
                    ',' => {
                        self.bump();
                        Token::Comma
                    }
                    '(' => {
                        self.bump();
                        Token::LParen
                    }
                    ')' => {
                        self.bump();
                        Token::RParen
                    }
                    ':' => {
                        self.bump();
                        if self.chars.peek() == Some(&'-') {
                            self.bump();
                            Token::Arrow
                        } else {
                            return Err(ParseError::new(line, col, "expected '-' after ':'"));
                        }
                    }
                    '#' => {
                        self.bump();
                        let mut name = String::new();
                        while let Some(&d) = self.chars.peek() {
                            if d.is_alphanumeric() || d == '_' {
                                name.push(d);
                                self.bump();
                            } else {
                                break;
                            }
                        }
                        if name == "nogood" {
                            Token::NogoodDirective
                        } else {
                            return Err(ParseError::new(
                                line,
                                col,
                                format!("unknown directive '#{name}'"),
                            ));
                        }
                    }
                    other => {
                        return Err(ParseError::new(
                            line,
                            col,
                            format!("unexpected character '{other}'"),
                        ));
                    }
                }
            };
            out.push((token, line, col));
        }
    }
}

struct Parser {
    tokens: Vec<(Token, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(Token, usize, usize)> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<(Token, usize, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((1, 1))
    }

    fn atom(&mut self) -> Result<RawAtom, ParseError> {
        let (token, line, col) = self.next().ok_or_else(|| {
            let (l, c) = self.here();
            ParseError::new(l, c, "expected atom, found end of input")
        })?;
        let Token::Name(name) = token else {
            return Err(ParseError::new(line, col, format!("expected atom, found {token}")));
        };
        if name == "not" {
            return Err(ParseError::new(line, col, "'not' is not a valid atom name"));
        }
        let mut args = Vec::new();
        if matches!(self.peek(), Some((Token::LParen, _, _))) {
            self.next();
            loop {
                let (t, l, c) = self.next().ok_or_else(|| {
                    let (l, c) = self.here();
                    ParseError::new(l, c, "expected term, found end of input")
                })?;
                let Token::Name(term) = t else {
                    return Err(ParseError::new(l, c, format!("expected term, found {t}")));
                };
                let starts_upper = term.chars().next().is_some_and(|ch| ch.is_uppercase());
                args.push(if starts_upper {
                    RawTerm::Variable(term)
                } else {
                    RawTerm::Constant(term)
                });
                match self.next() {
                    Some((Token::Comma, _, _)) => continue,
                    Some((Token::RParen, _, _)) => break,
                    Some((t, l, c)) => {
                        return Err(ParseError::new(l, c, format!("expected ',' or ')', found {t}")));
                    }
                    None => {
                        let (l, c) = self.here();
                        return Err(ParseError::new(l, c, "expected ',' or ')', found end of input"));
                    }
                }
            }
        }
        Ok(RawAtom { name, args, line, col })
    }

    fn literal(&mut self) -> Result<(RawAtom, bool), ParseError> {
        if let Some((Token::Name(n), _, _)) = self.peek() {
            if n == "not" {
                self.next();
                return Ok((self.atom()?, true));
            }
        }
        Ok((self.atom()?, false))
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        if matches!(self.peek(), Some((Token::NogoodDirective, _, _))) {
            let (_, line, _) = self.next().unwrap();
            let mut atoms = Vec::new();
            loop {
                match self.peek() {
                    Some((Token::Dot, _, _)) => {
                        self.next();
                        break;
                    }
                    Some(_) => atoms.push(self.atom()?),
                    None => {
                        let (l, c) = self.here();
                        return Err(ParseError::new(l, c, "unterminated '#nogood' directive"));
                    }
                }
            }
            if atoms.is_empty() {
                let (l, c) = self.here();
                return Err(ParseError::new(l, c, "'#nogood' requires at least one atom"));
            }
            return Ok(Statement::Nogood { atoms, line });
        }
        let head = self.atom()?;
        let line = head.line;
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        match self.next() {
            Some((Token::Dot, _, _)) => {}
            Some((Token::Arrow, _, _)) => loop {
                let (atom, negated) = self.literal()?;
                if negated {
                    neg.push(atom);
                } else {
                    pos.push(atom);
                }
                match self.next() {
                    Some((Token::Comma, _, _)) => continue,
                    Some((Token::Dot, _, _)) => break,
                    Some((t, l, c)) => {
                        return Err(ParseError::new(l, c, format!("expected ',' or '.', found {t}")));
                    }
                    None => {
                        let (l, c) = self.here();
                        return Err(ParseError::new(l, c, "expected ',' or '.', found end of input"));
                    }
                }
            },
            Some((t, l, c)) => {
                return Err(ParseError::new(l, c, format!("expected ':-' or '.', found {t}")));
            }
            None => {
                let (l, c) = self.here();
                return Err(ParseError::new(l, c, "expected ':-' or '.', found end of input"));
            }
        }
        Ok(Statement::Rule { head, pos, neg, line })
    }
}

/// Parses source text into the surface AST.
pub fn parse_statements(text: &str) -> Result<Vec<Statement>, ParseError> {
    let tokens = Lexer::new(text).tokens()?;
    let mut parser = Parser { tokens, pos: 0 };
    let mut out = Vec::new();
    while parser.peek().is_some() {
        out.push(parser.statement()?);
    }
    Ok(out)
}

/// Parses a propositional program: rules, nogood directives, warnings.
///
/// Variables are rejected; ground compound atoms are interned under
/// their canonical spelling. Atoms are interned in first-appearance
/// order. Duplicate literals within one body are deduplicated with a
/// warning; duplicate rules are retained.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parse_program_into(text, KnowledgeBase::new())
}

/// Like [`parse_program`] but extends an existing atom table, keeping
/// established atom ids stable.
pub fn parse_program_into(text: &str, mut kb: KnowledgeBase) -> Result<Program, ParseError> {
    let statements = parse_statements(text)?;
    let mut warnings = Vec::new();
    let mut nogoods = Vec::new();
    let lower = |atom: &RawAtom, kb: &mut KnowledgeBase| -> Result<Atom, ParseError> {
        if let Some(RawTerm::Variable(v)) = atom
            .args
            .iter()
            .find(|t| matches!(t, RawTerm::Variable(_)))
        {
            return Err(ParseError::new(
                atom.line,
                atom.col,
                format!("variable '{v}' is not allowed in a propositional program"),
            ));
        }
        Ok(kb.intern(&atom.ground_name()))
    };
    for statement in &statements {
        match statement {
            Statement::Rule { head, pos, neg, line } => {
                let head_atom = lower(head, &mut kb)?;
                let mut pos_atoms = Vec::new();
                let mut neg_atoms = Vec::new();
                for (raw, out, sign) in [(pos, &mut pos_atoms, "literal"), (neg, &mut neg_atoms, "negative literal")] {
                    for atom in raw {
                        let a = lower(atom, &mut kb)?;
                        if out.contains(&a) {
                            warnings.push(Warning {
                                line: *line,
                                message: format!(
                                    "duplicate {sign} '{}' in rule body, deduplicated",
                                    atom.ground_name()
                                ),
                            });
                        } else {
                            out.push(a);
                        }
                    }
                }
                kb.add_rule(Rule::new(head_atom, pos_atoms, neg_atoms));
            }
            Statement::Nogood { atoms, .. } => {
                let mut set = std::collections::BTreeSet::new();
                for atom in atoms {
                    set.insert(lower(atom, &mut kb)?);
                }
                nogoods.push(Nogood::new(set));
            }
        }
    }
    Ok(Program { kb, nogoods, warnings })
}

/// Parses rule text into a [`KnowledgeBase`], discarding nogood
/// directives (use [`parse_program`] to keep them).
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    parse_program(text).map(|p| p.kb)
}
