//! Plain-text polynomials: `2*x1^2*x2 - 1/3*x3`.
//!
//! Terms are joined by `+`/`-`; a term is a product of rational literals
//! (`p/q`, integers or decimals) and variables `x1..xd` with optional caret
//! powers. [`format_poly`] prints highest degree first and its output parses
//! back to the same polynomial.

use std::cmp::Ordering;

use dunkl_core::field::{parse_rational, rational, Field, Rational};
use dunkl_core::poly::{Exponent, MPoly};

use crate::error::{CliError, CliResult};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> CliResult<T> {
        Err(CliError::Parse { pos: self.pos, msg: msg.into() })
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

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn number(&mut self) -> CliResult<Rational> {
        let start = self.pos;
        self.digits();
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            self.digits();
        } else if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            if self.digits().is_empty() {
                return self.err("expected a denominator");
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match parse_rational(text) {
            Some(q) => Ok(q),
            None => self.err(format!("bad number {text:?}")),
        }
    }

    fn term(&mut self) -> CliResult<MPoly<Rational>> {
        let mut coeff = rational(1, 1);
        let mut exp = vec![0u32; self.dim];
        loop {
            match self.peek() {
                Some(b'x') => {
                    self.pos += 1;
                    let idx: usize = match self.digits().parse() {
                        Ok(i) => i,
                        Err(_) => return self.err("expected a variable index after x"),
                    };
                    if idx == 0 || idx > self.dim {
                        return self.err(format!("variable x{idx} outside x1..x{}", self.dim));
                    }
                    let mut power = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        power = match self.digits().parse() {
                            Ok(p) => p,
                            Err(_) => return self.err("expected an exponent after ^"),
                        };
                    }
                    exp[idx - 1] += power;
                }
                Some(c) if c.is_ascii_digit() || c == b'.' => coeff *= self.number()?,
                _ => return self.err("expected a number or a variable"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(MPoly::monomial(Exponent(exp), coeff))
    }

    fn poly(&mut self) -> CliResult<MPoly<Rational>> {
        let mut acc = MPoly::zero(self.dim);
        let mut negative = false;
        match self.peek() {
            Some(b'-') => {
                negative = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            None => return self.err("empty polynomial"),
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negative { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                None => return Ok(acc),
                Some(_) => return self.err("expected + or -"),
            }
            self.pos += 1;
        }
    }
}

pub fn parse_poly(s: &str, dim: usize) -> CliResult<MPoly<Rational>> {
    Parser { src: s.as_bytes(), pos: 0, dim }.poly()
}

fn is_negative<F: Field>(c: &F) -> bool {
    match c.sign() {
        0 => c.to_f64() < 0.0,
        s => s < 0,
    }
}

fn monomial_text(e: &Exponent) -> String {
    e.as_slice()
        .iter()
        .enumerate()
        .filter(|(_, a)| **a > 0)
        .map(|(i, a)| if *a == 1 { format!("x{}", i + 1) } else { format!("x{}^{a}", i + 1) })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn format_poly<F: Field>(p: &MPoly<F>) -> String {
    let mut terms: Vec<(&Exponent, &F)> = p.terms().collect();
    terms.sort_by(|a, b| match b.0.degree().cmp(&a.0.degree()) {
        Ordering::Equal => a.0.cmp(b.0),
        o => o,
    });
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (e, c)) in terms.into_iter().enumerate() {
        let neg = is_negative(c);
        let mag = if neg { -c.clone() } else { c.clone() };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mono = monomial_text(e);
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag == F::one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    out
}

/// Embeds a rational polynomial into another coefficient field.
pub fn lift<F: Field>(p: &MPoly<Rational>) -> MPoly<F> {
    let terms = p.terms().map(|(e, c)| (e.clone(), F::from_rational(c)));
    MPoly::from_terms(p.dim(), terms).unwrap_or_else(|_| MPoly::zero(p.dim()))
}
