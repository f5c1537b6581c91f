//! Surface syntax: named λ-terms, simple types, rewriting systems and
//! derivation listings.
//!
//! Term grammar: identifiers are variables, `\x. body` (or `λx. body`) is an
//! abstraction, `\x y z. body` groups binders, application is juxtaposition
//! and associates to the left. Type grammar: `o` is ι, `->` associates to the
//! right. Rule grammar: one `a b => c d` per line, `#` starts a comment.

use std::fmt::Write as _;

use thiserror::Error;

use crate::ssts::{Rule, Ssts, SstsError, Step};
use crate::term::Term;
use crate::types::SimpleType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("parse error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("rule file contains no rules")]
    EmptyRuleSet,
    #[error("unbound variable `{name}` at offset {offset}")]
    Unbound { name: String, offset: usize },
}

/// A λ-term with explicit variable names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedTerm {
    Var(String),
    App(Box<NamedTerm>, Box<NamedTerm>),
    Lam(String, Box<NamedTerm>),
}

impl NamedTerm {
    /// Converts to the nameless form. Names not bound inside the term are
    /// looked up in `free` (index 0 is the innermost free variable); unknown
    /// names are an error.
    pub fn to_term(&self, free: &[String]) -> Result<Term, ParseError> {
        let mut scope: Vec<&str> = free.iter().rev().map(String::as_str).collect();
        self.convert(&mut scope)
    }

    /// Converts to the nameless form, collecting unknown names as free
    /// variables in order of first occurrence.
    pub fn to_term_with_free(&self) -> (Term, Vec<String>) {
        let mut free = Vec::new();
        self.collect_free(&mut Vec::new(), &mut free);
        // first occurrence is the outermost free variable
        let ctx: Vec<String> = free.iter().rev().cloned().collect();
        let term = self.to_term(&ctx).expect("all free names collected");
        (term, ctx)
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut Vec<String>) {
        match self {
            NamedTerm::Var(x) => {
                if !bound.contains(&x.as_str()) && !out.contains(x) {
                    out.push(x.clone());
                }
            }
            NamedTerm::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            NamedTerm::Lam(x, b) => {
                bound.push(x);
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn convert<'a>(&'a self, scope: &mut Vec<&'a str>) -> Result<Term, ParseError> {
        match self {
            NamedTerm::Var(x) => scope
                .iter()
                .rev()
                .position(|y| y == x)
                .map(Term::Var)
                .ok_or_else(|| ParseError::Unbound {
                    name: x.clone(),
                    offset: 0,
                }),
            NamedTerm::App(f, a) => Ok(Term::app(f.convert(scope)?, a.convert(scope)?)),
            NamedTerm::Lam(x, b) => {
                scope.push(x);
                let body = b.convert(scope);
                scope.pop();
                Ok(Term::lam(body?))
            }
        }
    }
}

/// Parses a term in the named surface syntax.
pub fn parse_term(text: &str) -> Result<NamedTerm, ParseError> {
    let mut p = Parser::new(text);
    let t = p.term()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

/// Parses a closed term straight to the nameless form.
pub fn parse_closed_term(text: &str) -> Result<Term, ParseError> {
    let named = parse_term(text)?;
    let (term, free) = named.to_term_with_free();
    match free.last() {
        None => Ok(term),
        Some(name) => Err(ParseError::Unbound {
            name: name.clone(),
            offset: text.find(name.as_str()).unwrap_or(0),
        }),
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '\'' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        (self.pos > start).then(|| self.src[start..self.pos].to_string())
    }

    fn term(&mut self) -> Result<NamedTerm, ParseError> {
        self.skip_ws();
        if self.eat('\\') || self.eat('λ') {
            let mut names = Vec::new();
            while let Some(x) = self.ident() {
                names.push(x);
            }
            if names.is_empty() {
                return Err(self.error("expected a binder name"));
            }
            if !self.eat('.') {
                return Err(self.error("expected `.` after binders"));
            }
            let body = self.term()?;
            return Ok(names
                .into_iter()
                .rev()
                .fold(body, |acc, x| NamedTerm::Lam(x, Box::new(acc))));
        }
        let mut acc = self.atom()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('(') => {
                    let a = self.atom()?;
                    acc = NamedTerm::App(Box::new(acc), Box::new(a));
                }
                Some('\\') | Some('λ') => {
                    let a = self.term()?;
                    acc = NamedTerm::App(Box::new(acc), Box::new(a));
                    return Ok(acc);
                }
                Some(c) if c.is_alphanumeric() || c == '_' => {
                    let a = self.atom()?;
                    acc = NamedTerm::App(Box::new(acc), Box::new(a));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn atom(&mut self) -> Result<NamedTerm, ParseError> {
        self.skip_ws();
        if self.eat('(') {
            let t = self.term()?;
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(t);
        }
        match self.ident() {
            Some(x) => Ok(NamedTerm::Var(x)),
            None => Err(self.error("expected a term")),
        }
    }
}

/// Printing style for [`print_term`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// Fresh names `x0, x1, …` by binder depth.
    Named,
    /// Binder distances: `\. 0`.
    Indexed,
}

/// Prints a term. Free variables are rendered as `free0, free1, …` by
/// distance past the outermost binder in the named style.
pub fn print_term(term: &Term, style: Style) -> String {
    print_term_in(term, style, &[])
}

/// Prints a term whose free variables are named by `free` (index 0 is the
/// innermost free variable).
pub fn print_term_in(term: &Term, style: Style, free: &[String]) -> String {
    let mut out = String::new();
    write_term(&mut out, term, style, 0, free, Ctx::Top);
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    Function,
    Argument,
}

fn write_term(out: &mut String, t: &Term, style: Style, depth: usize, free: &[String], ctx: Ctx) {
    match t {
        Term::Var(k) => match style {
            Style::Indexed => {
                let _ = write!(out, "{k}");
            }
            Style::Named => {
                if *k < depth {
                    let _ = write!(out, "x{}", depth - 1 - k);
                } else {
                    let j = k - depth;
                    match free.get(j) {
                        Some(name) => out.push_str(name),
                        None => {
                            let _ = write!(out, "free{j}");
                        }
                    }
                }
            }
        },
        Term::Lam(_) => {
            let wrap = ctx != Ctx::Top;
            if wrap {
                out.push('(');
            }
            let (n, body) = t.strip_lams();
            match style {
                Style::Indexed => {
                    for _ in 0..n {
                        out.push_str("\\. ");
                    }
                }
                Style::Named => {
                    for i in 0..n {
                        let _ = write!(out, "\\x{}. ", depth + i);
                    }
                }
            }
            write_term(out, body, style, depth + n, free, Ctx::Top);
            if wrap {
                out.push(')');
            }
        }
        Term::App(f, a) => {
            let wrap = ctx == Ctx::Argument;
            if wrap {
                out.push('(');
            }
            write_term(out, f, style, depth, free, Ctx::Function);
            out.push(' ');
            write_term(out, a, style, depth, free, Ctx::Argument);
            if wrap {
                out.push(')');
            }
        }
    }
}

/// Parses `o`, `A -> B` (right associative) and parentheses.
pub fn parse_type(text: &str) -> Result<SimpleType, ParseError> {
    let mut p = Parser::new(text);
    let t = type_arrow(&mut p)?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

fn type_arrow(p: &mut Parser<'_>) -> Result<SimpleType, ParseError> {
    let lhs = type_atom(p)?;
    p.skip_ws();
    if p.src[p.pos..].starts_with("->") {
        p.pos += 2;
        let rhs = type_arrow(p)?;
        return Ok(SimpleType::arrow(lhs, rhs));
    }
    Ok(lhs)
}

fn type_atom(p: &mut Parser<'_>) -> Result<SimpleType, ParseError> {
    if p.eat('(') {
        let t = type_arrow(p)?;
        if !p.eat(')') {
            return Err(p.error("expected `)`"));
        }
        return Ok(t);
    }
    match p.ident() {
        Some(x) if x == "o" => Ok(SimpleType::Atom),
        _ => Err(p.error("expected `o` or `(`")),
    }
}

pub fn print_type(t: &SimpleType) -> String {
    match t {
        SimpleType::Atom => "o".to_string(),
        SimpleType::Arrow(a, b) => {
            let lhs = match a.as_ref() {
                SimpleType::Atom => "o".to_string(),
                other => format!("({})", print_type(other)),
            };
            format!("{lhs} -> {}", print_type(b))
        }
    }
}

/// Parses a rule file: one `a b => c d` per line with decimal symbols.
/// The alphabet size is one more than the largest symbol, at least 2.
pub fn parse_ssts(text: &str) -> Result<Ssts, ParseError> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| ParseError::Line {
            line: i + 1,
            message: message.to_string(),
        };
        let (lhs, rhs) = line
            .split_once("=>")
            .ok_or_else(|| err("expected `a b => c d`"))?;
        let side = |s: &str| -> Result<[u32; 2], ParseError> {
            let nums: Vec<&str> = s.split_whitespace().collect();
            if nums.len() != 2 {
                return Err(err("each side needs exactly two symbols"));
            }
            let a = nums[0]
                .parse()
                .map_err(|_| err("symbols are decimal numbers"))?;
            let b = nums[1]
                .parse()
                .map_err(|_| err("symbols are decimal numbers"))?;
            Ok([a, b])
        };
        let [a, b] = side(lhs)?;
        let [c, d] = side(rhs)?;
        rules.push(Rule::new(a, b, c, d));
    }
    if rules.is_empty() {
        return Err(ParseError::EmptyRuleSet);
    }
    let alphabet = rules
        .iter()
        .flat_map(|r| [r.a, r.b, r.c, r.d])
        .max()
        .map_or(2, |m| (m + 1).max(2));
    Ssts::new(alphabet, rules).map_err(|e| match e {
        SstsError::EmptyRuleSet => ParseError::EmptyRuleSet,
        other => ParseError::Line {
            line: 0,
            message: other.to_string(),
        },
    })
}

pub fn print_ssts(system: &Ssts) -> String {
    system
        .rules()
        .iter()
        .map(|r| format!("{} {} => {} {}\n", r.a, r.b, r.c, r.d))
        .collect()
}

/// Parses a derivation listing: one `rule position` pair per line (1-based).
pub fn parse_derivation(text: &str) -> Result<Vec<Step>, ParseError> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        let parsed: Option<Vec<usize>> = nums.iter().map(|s| s.parse().ok()).collect();
        match parsed.as_deref() {
            Some([rule, position]) => steps.push(Step::new(*rule, *position)),
            _ => {
                return Err(ParseError::Line {
                    line: i + 1,
                    message: "expected `rule position`".to_string(),
                })
            }
        }
    }
    Ok(steps)
}
