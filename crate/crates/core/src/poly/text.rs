//! Text forms of polynomials.
//!
//! The infix form mirrors SymPy's default printer: variables `x1..xn`
//! sorted as strings inside each monomial, terms in descending lex order
//! over those names, constant last (`-x10 - x3 + 1`). The machine form is a
//! list of `(1-based index list, "num/den")` pairs in canonical order.

use std::cmp::Ordering;
use std::fmt::Display;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Monomial, PolyError, Polynomial, QuotientContext, RawPolynomial};
use crate::error::ParseError;
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

fn var_names(m: &Monomial) -> Vec<String> {
    let mut names: Vec<String> = m.vars().map(|v| format!("x{}", v + 1)).collect();
    names.sort();
    names
}

/// SymPy's lex order on multilinear monomials, greatest first.
fn sympy_order(a: &[String], b: &[String]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            // the smaller generator is present in `a` only
            Ordering::Less => return Ordering::Less,
            Ordering::Greater => return Ordering::Greater,
        }
    }
    b.len().cmp(&a.len())
}

/// Renders in SymPy-like infix form, e.g. `x1*x5 - x1 + x2*x5 - x2 - x5 + 1`.
pub fn to_infix<S: Scalar + Display>(p: &Polynomial<S>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(Vec<String>, &S)> = p.terms().map(|(m, c)| (var_names(m), c)).collect();
    terms.sort_by(|a, b| sympy_order(&a.0, &b.0));
    let mut out = String::new();
    for (k, (names, c)) in terms.iter().enumerate() {
        let negative = c.is_negative();
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mag = c.abs();
        if names.is_empty() {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push_str(&names.join("*"));
        }
    }
    out
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }
}

/// Parses infix text into an unreduced polynomial. Accepts `x<k>` (1-based),
/// integer or `a/b` coefficients, `*`, `+`, `-`, and `^`/`**` exponents.
pub fn parse_infix(src: &str) -> Result<RawPolynomial<Rational>, ParseError> {
    let err = |reason: &str| ParseError::Polynomial {
        input: src.to_string(),
        reason: reason.to_string(),
    };
    let mut lx = Lexer { src, pos: 0 };
    let mut out = RawPolynomial::default();
    let mut first = true;
    loop {
        let mut sign = Rational::one();
        if lx.eat("-") {
            sign = -sign;
        } else if !lx.eat("+") && !first {
            return Err(err("expected '+' or '-'"));
        }
        first = false;
        let mut coeff = sign;
        let mut mono = Vec::new();
        loop {
            match lx.peek() {
                Some('x') => {
                    lx.eat("x");
                    let idx: usize = lx
                        .digits()
                        .ok_or_else(|| err("variable index"))?
                        .parse()
                        .map_err(|_| err("variable index"))?;
                    if idx == 0 {
                        return Err(err("variables are 1-based"));
                    }
                    let mut exp = 1u32;
                    if lx.eat("**") || lx.eat("^") {
                        exp = lx
                            .digits()
                            .ok_or_else(|| err("exponent"))?
                            .parse()
                            .map_err(|_| err("exponent"))?;
                    }
                    mono.push((idx - 1, exp));
                }
                Some(c) if c.is_ascii_digit() => {
                    let num = lx.digits().unwrap();
                    let text = if lx.eat("/") {
                        let den = lx.digits().ok_or_else(|| err("denominator"))?;
                        format!("{num}/{den}")
                    } else {
                        num.to_string()
                    };
                    coeff = coeff * parse_rational(&text)?;
                }
                _ => return Err(err("expected a factor")),
            }
            if !lx.eat("*") {
                break;
            }
        }
        out.push(mono, coeff);
        if lx.peek().is_none() {
            break;
        }
    }
    Ok(out)
}

/// Parses and reduces in one go.
pub fn parse_reduced(src: &str, ctx: &QuotientContext) -> Result<Polynomial<Rational>, crate::Error> {
    let raw = parse_infix(src)?;
    Ok(super::reduce(&raw, ctx)?)
}

/// One `(1-based indices, "num/den")` pair of the machine form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineTerm(pub Vec<usize>, pub String);

pub fn to_machine(p: &Polynomial<Rational>) -> Vec<MachineTerm> {
    p.terms()
        .map(|(m, c)| MachineTerm(m.vars().map(|v| v + 1).collect(), format_rational(c)))
        .collect()
}

/// Reads the machine form; every monomial must already be reduced in `ctx`.
pub fn from_machine(terms: &[MachineTerm], ctx: &QuotientContext) -> Result<Polynomial<Rational>, crate::Error> {
    let mut out = Polynomial::zero();
    for MachineTerm(vars, c) in terms {
        if vars.iter().any(|&v| v == 0) {
            return Err(PolyError::VariableOutOfRange { var: 0, n: ctx.n() }.into());
        }
        let m = Monomial::from_vars(vars.iter().map(|v| v - 1));
        if m.degree() != vars.len() {
            return Err(PolyError::NotReduced(format!("{vars:?}")).into());
        }
        ctx.check_monomial(&m)?;
        let c = parse_rational(c)?;
        if c.is_zero() {
            continue;
        }
        if out.coeff(&m) != Rational::zero() {
            return Err(PolyError::DuplicateMonomial(m.to_string()).into());
        }
        out.add_term(m, c);
    }
    Ok(out)
}
