//! Text syntax for Weyl elements.
//!
//! ```text
//! expr   := [+|-] term ((+|-) term)*
//! term   := factor ([*] factor)*
//! factor := atom [^ uint]
//! atom   := uint [/ uint] | x<i> | d<i> | E | ( expr ) | [ expr , expr ]
//! ```
//!
//! `E` needs a weight system. Juxtaposition multiplies, so the printer's
//! `3/2*x0^2 d1` parses back to the same element.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{euler_field, WeylElement};
use crate::scalar::Q;
use crate::semigroup::WeightSystem;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: {}", self.position, self.message)
    }
}

#[derive(Debug, Clone)]
enum Ast {
    Number(Q),
    X(usize),
    D(usize),
    Euler,
    Sum(Vec<(bool, Ast)>),
    Product(Vec<Ast>),
    Power(Box<Ast>, u32),
    Commutator(Box<Ast>, Box<Ast>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        // no whitespace allowed between the letter and its index
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a variable index");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("variable index too large")
        })
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            terms.push((negative, self.term()?));
            match self.peek() {
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(Ast::Sum(terms))
    }

    fn starts_factor(&mut self) -> bool {
        matches!(
            self.peek(),
            Some(b'0'..=b'9' | b'x' | b'd' | b'E' | b'(' | b'[')
        )
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.peek() == Some(b'*') {
                self.pos += 1;
                factors.push(self.factor()?);
            } else if self.starts_factor() {
                factors.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok(Ast::Product(factors))
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let e = self.uint()?;
            let e = u32::try_from(e).or_else(|_| {
                self.pos = at;
                self.err("exponent too large")
            })?;
            return Ok(Ast::Power(Box::new(atom), e));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let num = self.uint()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let at = self.pos;
                    let den = self.uint()?;
                    if den.is_zero() {
                        self.pos = at;
                        return self.err("division by zero");
                    }
                    Ok(Ast::Number(Q::new(num, den)))
                } else {
                    Ok(Ast::Number(Q::from_integer(num)))
                }
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Ast::X(self.index()?))
            }
            Some(b'd') => {
                self.pos += 1;
                Ok(Ast::D(self.index()?))
            }
            Some(b'E') => {
                self.pos += 1;
                Ok(Ast::Euler)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b']')?;
                Ok(Ast::Commutator(Box::new(a), Box::new(b)))
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

fn max_index(ast: &Ast) -> Option<usize> {
    match ast {
        Ast::X(i) | Ast::D(i) => Some(*i),
        Ast::Number(_) | Ast::Euler => None,
        Ast::Sum(ts) => ts.iter().filter_map(|(_, t)| max_index(t)).max(),
        Ast::Product(fs) => fs.iter().filter_map(max_index).max(),
        Ast::Power(a, _) => max_index(a),
        Ast::Commutator(a, b) => max_index(a).max(max_index(b)),
    }
}

fn uses_euler(ast: &Ast) -> bool {
    match ast {
        Ast::Euler => true,
        Ast::Number(_) | Ast::X(_) | Ast::D(_) => false,
        Ast::Sum(ts) => ts.iter().any(|(_, t)| uses_euler(t)),
        Ast::Product(fs) => fs.iter().any(uses_euler),
        Ast::Power(a, _) => uses_euler(a),
        Ast::Commutator(a, b) => uses_euler(a) || uses_euler(b),
    }
}

fn eval(ast: &Ast, nvars: usize, weights: Option<&WeightSystem>) -> WeylElement<Q> {
    match ast {
        Ast::Number(c) => WeylElement::constant(nvars, c.clone()),
        Ast::X(i) => WeylElement::x(nvars, *i),
        Ast::D(i) => WeylElement::d(nvars, *i),
        Ast::Euler => euler_field(weights.expect("checked before evaluation")),
        Ast::Sum(ts) => ts.iter().fold(WeylElement::zero(nvars), |acc, (neg, t)| {
            let v = eval(t, nvars, weights);
            if *neg {
                acc.sub(&v)
            } else {
                acc.add(&v)
            }
        }),
        Ast::Product(fs) => fs.iter().fold(WeylElement::one(nvars), |acc, f| {
            acc.multiply(&eval(f, nvars, weights))
        }),
        Ast::Power(a, e) => eval(a, nvars, weights).pow(*e),
        Ast::Commutator(a, b) => eval(a, nvars, weights).commutator(&eval(b, nvars, weights)),
    }
}

fn parse_ast(input: &str) -> Result<Ast, ParseError> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let ast = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(ast)
}

/// Parses an element. With weights, the arity is the number of weights and
/// `E` is available; without, the arity is one more than the largest
/// variable index that occurs.
pub fn parse_weyl(input: &str, weights: Option<&WeightSystem>) -> Result<WeylElement<Q>, ParseError> {
    let ast = parse_ast(input)?;
    let top = max_index(&ast);
    let nvars = match weights {
        Some(w) => {
            if let Some(i) = top.filter(|&i| i >= w.len()) {
                return Err(ParseError {
                    position: input.find(&i.to_string()).unwrap_or(0),
                    message: format!("variable index {i} out of range for {} weights", w.len()),
                });
            }
            w.len()
        }
        None => {
            if uses_euler(&ast) {
                return Err(ParseError {
                    position: input.find('E').unwrap_or(0),
                    message: "`E` requires weights".into(),
                });
            }
            top.map_or(1, |i| i + 1)
        }
    };
    Ok(eval(&ast, nvars, weights))
}

/// Parses an element of a fixed arity, without `E`.
pub fn parse_weyl_nvars(input: &str, nvars: usize) -> Result<WeylElement<Q>, ParseError> {
    let ast = parse_ast(input)?;
    if uses_euler(&ast) {
        return Err(ParseError {
            position: input.find('E').unwrap_or(0),
            message: "`E` requires weights".into(),
        });
    }
    if let Some(i) = max_index(&ast).filter(|&i| i >= nvars) {
        return Err(ParseError {
            position: 0,
            message: format!("variable index {i} out of range for {nvars} variables"),
        });
    }
    Ok(eval(&ast, nvars, None))
}
