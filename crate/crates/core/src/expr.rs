//! Parsing and printing of polynomial expressions.
//!
//! Grammar (whitespace ignored, no implicit multiplication):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```

use std::collections::HashSet;

use num_bigint::BigInt;
use thiserror::Error;

use crate::coeffs::{CoeffError, RingDescriptor, Scalar};
use crate::poly::SparsePoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("parse error at position {position}: expected {expected}")]
    ParseError { position: usize, expected: String },
    #[error("unknown variable {name:?} at position {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("negative exponent at position {position}")]
    NegativeExponent { position: usize },
    #[error("invalid variable name {0:?}")]
    InvalidName(String),
    #[error("duplicate variable name {0:?}")]
    DuplicateName(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Ordered variable names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    distinguished_last: bool,
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VarTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, ExprError> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if !valid_name(n) {
                return Err(ExprError::InvalidName(n.to_string()));
            }
            if !seen.insert(n.to_string()) {
                return Err(ExprError::DuplicateName(n.to_string()));
            }
            out.push(n.to_string());
        }
        Ok(VarTable {
            names: out,
            distinguished_last: false,
        })
    }

    /// Marks the last variable as the distinguished `y`.
    pub fn with_distinguished_last(mut self) -> Self {
        self.distinguished_last = true;
        self
    }

    pub fn distinguished_last(&self) -> bool {
        self.distinguished_last
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Collects the identifiers of `texts` in natural order (`x2` < `x10`).
    pub fn infer<S: AsRef<str>>(texts: &[S]) -> Result<Self, ExprError> {
        let mut names: Vec<String> = Vec::new();
        for t in texts {
            for id in identifiers(t.as_ref()) {
                if !names.contains(&id) {
                    names.push(id);
                }
            }
        }
        names.sort_by_key(|a| natural_key(a));
        VarTable::new(&names)
    }
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Chunk {
    Text(String),
    Num(u128, usize),
}

fn natural_key(s: &str) -> Vec<Chunk> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        let mut buf = String::new();
        if c.is_ascii_digit() {
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                buf.push(d);
                chars.next();
            }
            out.push(Chunk::Num(buf.parse().unwrap_or(u128::MAX), buf.len()));
        } else {
            while let Some(&d) = chars.peek().filter(|d| !d.is_ascii_digit()) {
                buf.push(d);
                chars.next();
            }
            out.push(Chunk::Text(buf));
        }
    }
    out
}

fn identifiers(text: &str) -> Vec<String> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        if b[i].is_ascii_alphabetic() {
            let s = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(text[s..i].to_string());
        } else if b[i].is_ascii_digit() {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a VarTable,
    ring: RingDescriptor,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, expected: &str) -> ExprError {
        ExprError::ParseError {
            position: self.pos,
            expected: expected.to_string(),
        }
    }

    fn expr(&mut self) -> Result<SparsePoly, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SparsePoly, ExprError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<SparsePoly, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let s = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if s == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[s..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    fn power(&mut self) -> Result<SparsePoly, ExprError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        if self.peek() == Some(b'-') {
            return Err(ExprError::NegativeExponent { position: self.pos });
        }
        let at = self.pos;
        let e = self
            .integer()
            .ok_or_else(|| self.err("nonnegative integer exponent"))?;
        let e: u32 = e.try_into().map_err(|_| ExprError::ParseError {
            position: at,
            expected: "exponent below 2^32".into(),
        })?;
        let mut acc = SparsePoly::one(self.vars.len(), self.ring);
        for _ in 0..e {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<SparsePoly, ExprError> {
        let n = self.vars.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer().expect("digit present");
                let c = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self
                        .integer()
                        .ok_or_else(|| self.err("integer denominator"))?;
                    Scalar::from_fraction(self.ring, num, den)?
                } else {
                    Scalar::from_int(self.ring, num)
                };
                Ok(SparsePoly::constant(n, c))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let s = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[s..self.pos]).expect("ascii");
                let i = self
                    .vars
                    .index(name)
                    .ok_or_else(|| ExprError::UnknownVariable {
                        name: name.to_string(),
                        position: s,
                    })?;
                Ok(SparsePoly::var(n, self.ring, i))
            }
            _ => Err(self.err("number, variable or '('")),
        }
    }
}

/// Parse `text` into a canonical polynomial over `ring`.
pub fn parse(text: &str, vars: &VarTable, ring: RingDescriptor) -> Result<SparsePoly, ExprError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
        ring,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("operator or end of input"));
    }
    Ok(out)
}

fn render_monomial(e: &[i64], vars: &VarTable) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(vars.names[i].clone()),
            _ => parts.push(format!("{}^{}", vars.names[i], k)),
        }
    }
    parts.join("*")
}

/// Canonical rendering in ascending degree-lexicographic order.
pub fn render(f: &SparsePoly, vars: &VarTable) -> String {
    assert_eq!(
        f.nvars(),
        vars.len(),
        "variable table does not match polynomial"
    );
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (e, c)) in f.terms().enumerate() {
        let neg = c.is_negative_rational();
        let abs = if neg { -c } else { c.clone() };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = render_monomial(e, vars);
        if mono.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{abs}*{mono}"));
        }
    }
    out
}
