//! Infix polynomial expressions: `+ - * ^`, parentheses, integer constants,
//! implicit multiplication (`2xy^2`, `x(y+1)`), and the symbol `a` for the
//! generator of a field extension.

use crate::error::{Error, Result};
use crate::poly::{PolyRing, Polynomial};

pub const FIELD_GENERATOR: &str = "a";

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_polynomial(ring: &PolyRing, names: &[String], s: &str) -> Result<Polynomial> {
    let mut p = Parser::new(ring, names, s);
    let f = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(f)
}

/// Comma-separated polynomials; an empty or all-blank string gives none.
pub fn parse_polynomial_list(ring: &PolyRing, names: &[String], s: &str) -> Result<Vec<Polynomial>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut p = Parser::new(ring, names, s);
    let mut out = vec![p.expr()?];
    loop {
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b',') => {
                p.pos += 1;
                out.push(p.expr()?);
            }
            Some(_) => return Err(p.error("expected ',' or end of list")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a PolyRing,
    names: &'a [String],
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a PolyRing, names: &'a [String], s: &'a str) -> Self {
        Parser {
            ring,
            names,
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::parse(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = self.ring.neg(&acc);
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.add(&acc, &t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = self.ring.mul(&acc, &f)?;
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'_' => {
                    let f = self.power()?;
                    acc = self.ring.mul(&acc, &f)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected exponent"));
            }
            let k: u32 = digits.parse().map_err(|_| Error::parse(1, start + 1, "exponent too large"))?;
            return self.ring.pow(&base, k);
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let f = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(f)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                let p = self.ring.field().characteristic() as u128;
                let mut v: u128 = 0;
                for d in digits.bytes() {
                    v = (v * 10 + (d - b'0') as u128) % p;
                }
                Ok(self.ring.constant(self.ring.field().from_int(v as i64)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = self.pos;
                while self.src.get(end).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
                    end += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..end]).expect("ascii");
                let (f, used) = self.identifier(ident, start)?;
                self.pos = start + used;
                Ok(f)
            }
            None => Err(self.error("unexpected end of expression")),
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    /// A declared variable, the field generator, or the first name of a
    /// juxtaposition of declared variables such as `xz`; returns the
    /// polynomial and the number of bytes consumed.
    fn identifier(&self, ident: &str, start: usize) -> Result<(Polynomial, usize)> {
        if let Some(i) = self.names.iter().position(|n| n == ident) {
            return Ok((self.ring.var(i), ident.len()));
        }
        let field = self.ring.field();
        if ident == FIELD_GENERATOR && field.degree() > 1 {
            return Ok((self.ring.constant(field.generator()), ident.len()));
        }
        match split_names(ident, self.names) {
            Some(parts) => Ok((self.ring.var(parts[0]), self.names[parts[0]].len())),
            None => Err(Error::parse(
                1,
                start + 1,
                format!("undeclared variable {ident:?}"),
            )),
        }
    }
}

/// Splits `ident` into a sequence of declared names, preferring longer
/// names first.
fn split_names(ident: &str, names: &[String]) -> Option<Vec<usize>> {
    if ident.is_empty() {
        return Some(Vec::new());
    }
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(names[i].len()));
    for i in order {
        if let Some(rest) = ident.strip_prefix(names[i].as_str()) {
            if let Some(mut tail) = split_names(rest, names) {
                tail.insert(0, i);
                return Some(tail);
            }
        }
    }
    None
}
