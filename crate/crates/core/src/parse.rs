//! Tokenizer and polynomial-expression parser shared by the script language.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeff::{Coeff, Rat};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    pub offset: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                s.push(chars[i].1);
                i += 1;
                col += 1;
            }
            out.push(Token { tok: Tok::Int(s), line, col: start_col, offset: off });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                s.push(chars[i].1);
                i += 1;
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line, col: start_col, offset: off });
            continue;
        }
        if "+-*/^()[],;:=".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line, col: start_col, offset: off });
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::Parse { line, col, offset: off, msg: format!("unexpected character '{c}'") });
    }
    out.push(Token { tok: Tok::Eof, line, col, offset: src.len() });
    Ok(out)
}

/// Cursor over a token stream.
pub struct Cursor<'a> {
    pub toks: &'a [Token],
    pub pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = self.here();
        Err(Error::Parse { line: t.line, col: t.col, offset: t.offset, msg: msg.into() })
    }

    pub fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    pub fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_kw(&mut self, kw: &str) -> Result<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.err(format!("expected '{kw}'"))
        }
    }

    pub fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    pub fn int(&mut self) -> Result<i64> {
        let neg = self.eat_sym('-');
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                let v: i64 = s.parse().map_err(|_| Error::Invalid(format!("integer {s} too large")))?;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected integer"),
        }
    }

    /// Raw source text of a polynomial expression: consumes tokens up to a
    /// top-level `,` `;` `)` `]` and returns them.
    pub fn expr_tokens(&mut self) -> Result<Vec<Token>> {
        let mut depth = 0i32;
        let start = self.pos;
        loop {
            match self.peek() {
                Tok::Eof => break,
                Tok::Sym('(') => depth += 1,
                Tok::Sym(')') | Tok::Sym(']') if depth == 0 => break,
                Tok::Sym(')') => depth -= 1,
                Tok::Sym(',') | Tok::Sym(';') if depth == 0 => break,
                Tok::Ident(s) if depth == 0 && (s == "at" || s == "shifts") => break,
                _ => {}
            }
            self.bump();
        }
        if self.pos == start {
            return self.err("expected expression");
        }
        let mut v = self.toks[start..self.pos].to_vec();
        let last = self.toks[self.pos].clone();
        v.push(Token { tok: Tok::Eof, ..last });
        Ok(v)
    }
}

/// Parse a polynomial expression from tokens (terminated by `Eof`).
pub fn parse_poly_tokens(ring: &Ring, toks: &[Token]) -> Result<Poly> {
    let mut c = Cursor::new(toks);
    let p = expr(ring, &mut c)?;
    if *c.peek() != Tok::Eof {
        return c.err("trailing input in expression");
    }
    Ok(p)
}

pub fn parse_poly_str(ring: &Ring, s: &str) -> Result<Poly> {
    let toks = tokenize(s)?;
    parse_poly_tokens(ring, &toks)
}

fn expr(ring: &Ring, c: &mut Cursor) -> Result<Poly> {
    let mut neg = false;
    if c.eat_sym('-') {
        neg = true;
    } else {
        c.eat_sym('+');
    }
    let mut acc = term(ring, c)?;
    if neg {
        acc = acc.neg();
    }
    loop {
        if c.eat_sym('+') {
            acc = acc.add(&term(ring, c)?);
        } else if c.eat_sym('-') {
            acc = acc.sub(&term(ring, c)?);
        } else {
            return Ok(acc);
        }
    }
}

fn term(ring: &Ring, c: &mut Cursor) -> Result<Poly> {
    let mut acc = factor(ring, c)?;
    loop {
        if c.eat_sym('*') {
            acc = acc.mul_raw(&factor(ring, c)?);
        } else if c.is_sym('/') {
            c.bump();
            let d = factor(ring, c)?;
            match d.constant_value() {
                Some(v) if !v.is_zero() => acc = acc.scale(&v.inv()),
                _ => return c.err("division only by nonzero constants"),
            }
        } else {
            return Ok(acc);
        }
    }
}

fn factor(ring: &Ring, c: &mut Cursor) -> Result<Poly> {
    let base = atom(ring, c)?;
    if c.eat_sym('^') {
        let e = c.int()?;
        if e < 0 {
            return c.err("negative exponent");
        }
        let mut r = Poly::one(ring);
        for _ in 0..e {
            r = r.mul_raw(&base);
        }
        return Ok(r);
    }
    Ok(base)
}

fn atom(ring: &Ring, c: &mut Cursor) -> Result<Poly> {
    match c.peek().clone() {
        Tok::Int(s) => {
            c.bump();
            let n: BigInt = s.parse().unwrap();
            let r = Rat::from_big(BigRational::from_integer(n));
            Ok(Poly::constant(ring, Coeff::Q(r)))
        }
        Tok::Ident(name) => match ring.var_index(&name) {
            Some(i) => {
                c.bump();
                Ok(Poly::var(ring, i))
            }
            None => c.err(format!("unknown variable '{name}'")),
        },
        Tok::Sym('(') => {
            c.bump();
            let p = expr(ring, c)?;
            c.expect_sym(')')?;
            Ok(p)
        }
        Tok::Sym('-') => {
            c.bump();
            Ok(factor(ring, c)?.neg())
        }
        _ => c.err("expected a number, variable or '('"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDescriptor;

    #[test]
    fn parses_rationals_and_powers() {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1), ("y", 1)])).unwrap();
        let p = parse_poly_str(&r, "3/2*x^2 - (x+y)^2 + 2*x*y").unwrap();
        assert_eq!(p.to_string(), "1/2*x^2 - y^2");
    }

    #[test]
    fn reports_location() {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1)])).unwrap();
        match parse_poly_str(&r, "x + q") {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 5),
            other => panic!("{other:?}"),
        }
    }
}
