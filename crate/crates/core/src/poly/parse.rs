//! Recursive-descent reader for the textual polynomial form.
//!
//! Grammar: `expr := term (('+'|'-') term)*`, `term := unary (('*'|'/') unary)*`,
//! `unary := '-' unary | power`, `power := atom ('^' integer)?`,
//! `atom := integer | identifier | '(' expr ')'`. Division is allowed, so the
//! result is a [`RationalFunction`].

use std::sync::Arc;

use num_bigint::BigInt;

use super::{PolyError, Polynomial, RationalFunction, VariableTable};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>, PolyError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Num(s.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(PolyError::Parse { text: text.to_string(), reason: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a Arc<VariableTable>,
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, reason: impl Into<String>) -> PolyError {
        PolyError::Parse { text: self.text.to_string(), reason: reason.into() }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction, PolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc = acc.checked_add(&self.term()?)?;
            } else if self.eat_op('-') {
                acc = acc.checked_add(&-&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction, PolyError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc = acc.checked_mul(&self.unary()?)?;
            } else if self.eat_op('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc.checked_div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction, PolyError> {
        if self.eat_op('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction, PolyError> {
        let base = self.atom()?;
        if self.eat_op('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RationalFunction, PolyError> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(RationalFunction::constant(self.vars, Rational::from_integer(n)))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let i = self.vars.index(&name).ok_or(PolyError::UnknownVariable(name))?;
                Ok(Polynomial::var(self.vars, i).into())
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat_op(')') {
                    return Err(self.err("missing `)`"));
                }
                Ok(e)
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses an expression such as `-R11^2 - 2*R11*R21 + 1/2*R22` or `-r11^2/r12`.
pub fn parse_rational_function(text: &str, vars: &Arc<VariableTable>) -> Result<RationalFunction, PolyError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(PolyError::Parse { text: text.to_string(), reason: "empty expression".into() });
    }
    let mut p = Parser { tokens, pos: 0, vars, text };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Like [`parse_rational_function`] but rejects non-polynomial results.
pub fn parse_polynomial(text: &str, vars: &Arc<VariableTable>) -> Result<Polynomial, PolyError> {
    let rf = parse_rational_function(text, vars)?;
    rf.as_polynomial()
        .cloned()
        .ok_or_else(|| PolyError::Parse { text: text.to_string(), reason: "not a polynomial".into() })
}
