//! Recursive-descent parser for concepts, axioms and queries.
//!
//! ```text
//! concept  := or
//! or       := and ("or" and)*
//! and      := unary ("and" unary)*
//! unary    := "not" unary | "top" | "bot" | IDENT | "(" concept ")"
//!
//! axiom    := concept "<=" concept [cmp NUMBER]
//!           | "T" "(" concept ")" "<=" concept
//!           | concept "(" individual ")" cmp NUMBER
//! query    := "P" "(" concept ")"
//!           | "P" "(" concept "|" concept ")"
//!           | "P" "(" concept "|" "elem:" ID ")"
//!           | "P" "(" "elem:" ID "|" concept ")"
//!           | "deg" "(" concept "<=" concept ")"
//!           | "mem" "(" concept "," "elem:" ID ")"
//!           | "plaus" "(" IDENT "," IDENT ")"
//!           | axiom
//! cmp      := ">=" | "<=" | ">" | "<"
//! individual := IDENT | "elem:" ID
//! ```
//!
//! `T`, `P`, `deg`, `mem` and `plaus` are only special when directly
//! followed by `(` at the start of a statement. `#` starts a comment.

use std::fmt;

use thiserror::Error;

use super::ast::{is_keyword, Axiom, Cmp, Concept, Degree, Query};

#[derive(Debug, Clone, PartialEq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Elem(String),
    Number(String),
    LParen,
    RParen,
    Pipe,
    Comma,
    Le,
    Ge,
    Lt,
    Gt,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Elem(s) => format!("`elem:{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| ParseError {
        line,
        column,
        message,
        expected: Vec::new(),
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i);
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    advance(1, &mut i);
                }
                continue;
            }
            '(' | ')' | '|' | ',' => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '|' => Tok::Pipe,
                    _ => Tok::Comma,
                };
                advance(1, &mut i);
                out.push(Token {
                    tok,
                    line: tl,
                    column: tc,
                });
            }
            '<' | '>' => {
                let eq = chars.get(i + 1) == Some(&'=');
                let tok = match (c, eq) {
                    ('<', true) => Tok::Le,
                    ('<', false) => Tok::Lt,
                    ('>', true) => Tok::Ge,
                    _ => Tok::Gt,
                };
                advance(if eq { 2 } else { 1 }, &mut i);
                out.push(Token {
                    tok,
                    line: tl,
                    column: tc,
                });
            }
            '⊑' => {
                advance(1, &mut i);
                out.push(Token {
                    tok: Tok::Le,
                    line: tl,
                    column: tc,
                });
            }
            '≥' | '≤' => {
                let tok = if c == '≥' { Tok::Ge } else { Tok::Le };
                advance(1, &mut i);
                out.push(Token {
                    tok,
                    line: tl,
                    column: tc,
                });
            }
            c if c.is_ascii_digit() || c == '.' || c == '-' || c == '+' => {
                let start = i;
                advance(1, &mut i);
                while i < chars.len() {
                    let d = chars[i];
                    let exp_sign = (d == '-' || d == '+') && matches!(chars[i - 1], 'e' | 'E');
                    if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exp_sign {
                        advance(1, &mut i);
                    } else {
                        break;
                    }
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Number(s),
                    line: tl,
                    column: tc,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    advance(1, &mut i);
                }
                let word: String = chars[start..i].iter().collect();
                if word == "elem" && chars.get(i) == Some(&':') {
                    advance(1, &mut i);
                    let id_start = i;
                    while i < chars.len()
                        && !chars[i].is_whitespace()
                        && !matches!(chars[i], '(' | ')' | '|' | ',' | '#')
                    {
                        advance(1, &mut i);
                    }
                    if i == id_start {
                        return Err(err(tl, tc, "empty element id after `elem:`".into()));
                    }
                    let id: String = chars[id_start..i].iter().collect();
                    out.push(Token {
                        tok: Tok::Elem(id),
                        line: tl,
                        column: tc,
                    });
                } else {
                    out.push(Token {
                        tok: Tok::Ident(word),
                        line: tl,
                        column: tc,
                    });
                }
            }
            other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(text: &str) -> PResult<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            column: t.column,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error_here(format!("unexpected {}", self.peek().describe()), expected)
    }

    fn expect(&mut self, tok: Tok, name: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    fn expect_eof(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    fn is_call(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name) && *self.peek_at(1) == Tok::LParen
    }

    fn concept(&mut self) -> PResult<Concept> {
        let mut lhs = self.and()?;
        while matches!(self.peek(), Tok::Ident(s) if s == "or") {
            self.bump();
            let rhs = self.and()?;
            lhs = Concept::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<Concept> {
        let mut lhs = self.unary()?;
        while matches!(self.peek(), Tok::Ident(s) if s == "and") {
            self.bump();
            let rhs = self.unary()?;
            lhs = Concept::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Concept> {
        const EXPECTED: [&str; 5] = ["`not`", "`top`", "`bot`", "identifier", "`(`"];
        match self.peek().clone() {
            Tok::Ident(s) => match s.as_str() {
                "not" => {
                    self.bump();
                    Ok(Concept::not(self.unary()?))
                }
                "top" => {
                    self.bump();
                    Ok(Concept::Top)
                }
                "bot" => {
                    self.bump();
                    Ok(Concept::Bot)
                }
                "T" if *self.peek_at(1) == Tok::LParen => Err(self.error_here(
                    "typicality `T(...)` is only allowed as the left side of a defeasible inclusion",
                    &[],
                )),
                kw if is_keyword(kw) => Err(self.unexpected(&EXPECTED)),
                _ => {
                    self.bump();
                    Ok(Concept::Atom(s))
                }
            },
            Tok::LParen => {
                self.bump();
                let c = self.concept()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(c)
            }
            _ => Err(self.unexpected(&EXPECTED)),
        }
    }

    fn cmp(&mut self) -> Option<Cmp> {
        let c = match self.peek() {
            Tok::Ge => Cmp::Ge,
            Tok::Le => Cmp::Le,
            Tok::Gt => Cmp::Gt,
            Tok::Lt => Cmp::Lt,
            _ => return None,
        };
        self.bump();
        Some(c)
    }

    fn degree(&mut self) -> PResult<Degree> {
        let at = self.pos;
        match self.bump() {
            Tok::Number(s) => {
                let here = &self.toks[at];
                let v: f64 = s.parse().map_err(|_| ParseError {
                    line: here.line,
                    column: here.column,
                    message: format!("invalid number `{s}`"),
                    expected: Vec::new(),
                })?;
                Degree::new(v).ok_or_else(|| ParseError {
                    line: here.line,
                    column: here.column,
                    message: format!("degree {v} outside [0,1]"),
                    expected: Vec::new(),
                })
            }
            _ => {
                self.pos = at;
                Err(self.unexpected(&["number"]))
            }
        }
    }

    fn element(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Elem(id) => {
                self.bump();
                Ok(id)
            }
            _ => Err(self.unexpected(&["`elem:ID`"])),
        }
    }

    fn category_name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&["category name"])),
        }
    }

    fn axiom(&mut self) -> PResult<Axiom> {
        if self.is_call("T") {
            self.bump();
            self.bump();
            let lhs = self.concept()?;
            self.expect(Tok::RParen, "`)`")?;
            self.expect(Tok::Le, "`<=`")?;
            let rhs = self.concept()?;
            return Ok(Axiom::Defeasible(lhs, rhs));
        }
        let lhs = self.concept()?;
        match self.peek() {
            Tok::Le => {
                self.bump();
                let rhs = self.concept()?;
                match self.cmp() {
                    Some(cmp) => {
                        let n = self.degree()?;
                        Ok(Axiom::FuzzyInclusion { lhs, rhs, cmp, n })
                    }
                    None => Ok(Axiom::Strict(lhs, rhs)),
                }
            }
            Tok::LParen => {
                self.bump();
                let individual = match self.bump() {
                    Tok::Ident(s) if !is_keyword(&s) => s,
                    Tok::Elem(s) => s,
                    _ => {
                        self.pos -= 1;
                        return Err(self.unexpected(&["individual"]));
                    }
                };
                self.expect(Tok::RParen, "`)`")?;
                let cmp = self
                    .cmp()
                    .ok_or_else(|| self.unexpected(&["`>=`", "`<=`", "`>`", "`<`"]))?;
                let n = self.degree()?;
                Ok(Axiom::FuzzyAssertion {
                    concept: lhs,
                    individual,
                    cmp,
                    n,
                })
            }
            _ => Err(self.unexpected(&["`<=`", "`(`", "`and`", "`or`"])),
        }
    }

    fn query(&mut self) -> PResult<Query> {
        if self.is_call("P") {
            self.bump();
            self.bump();
            if let Tok::Elem(element) = self.peek().clone() {
                self.bump();
                self.expect(Tok::Pipe, "`|`")?;
                let concept = self.concept()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(Query::Likelihood { element, concept });
            }
            let concept = self.concept()?;
            let q = match self.peek().clone() {
                Tok::RParen => Query::Prob(concept),
                Tok::Pipe => {
                    self.bump();
                    if let Tok::Elem(element) = self.peek().clone() {
                        self.bump();
                        Query::ProbGivenElement { concept, element }
                    } else {
                        let given = self.concept()?;
                        Query::CondProb { concept, given }
                    }
                }
                _ => return Err(self.unexpected(&["`)`", "`|`"])),
            };
            self.expect(Tok::RParen, "`)`")?;
            return Ok(q);
        }
        if self.is_call("deg") {
            self.bump();
            self.bump();
            let lhs = self.concept()?;
            self.expect(Tok::Le, "`<=`")?;
            let rhs = self.concept()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Query::InclusionDegree(lhs, rhs));
        }
        if self.is_call("mem") {
            self.bump();
            self.bump();
            let concept = self.concept()?;
            self.expect(Tok::Comma, "`,`")?;
            let element = self.element()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Query::Membership { concept, element });
        }
        if self.is_call("plaus") {
            self.bump();
            self.bump();
            let src = self.category_name()?;
            self.expect(Tok::Comma, "`,`")?;
            let dst = self.category_name()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Query::Plausibility { src, dst });
        }
        Ok(Query::CheckAxiom(self.axiom()?))
    }
}

pub fn parse_concept(text: &str) -> Result<Concept, ParseError> {
    let mut p = Parser::new(text)?;
    let c = p.concept()?;
    p.expect_eof()?;
    Ok(c)
}

pub fn parse_axiom(text: &str) -> Result<Axiom, ParseError> {
    let mut p = Parser::new(text)?;
    let a = p.axiom()?;
    p.expect_eof()?;
    Ok(a)
}

pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    let mut p = Parser::new(text)?;
    let q = p.query()?;
    p.expect_eof()?;
    Ok(q)
}

/// One entry per non-blank, non-comment line: `(line number, text, result)`.
/// Error positions refer to the file, not the line.
pub fn parse_query_file(text: &str) -> Vec<(usize, String, Result<Query, ParseError>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                return None;
            }
            let result = parse_query(line).map_err(|mut e| {
                e.line = i + 1;
                e
            });
            Some((i + 1, body.to_string(), result))
        })
        .collect()
}
