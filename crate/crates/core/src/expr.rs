//! Bivariate polynomials in `z, w` and a small expression parser.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' nat]
//! atom   := rational | 'z' | 'w' | '(' expr ')'
//! ```
//!
//! Rational literals are `p` or `p/q`; exponents are non-negative
//! integers. `"w^2 - z^3"` and `"z*w + 3/2*z^2"` are typical inputs.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::branch::BranchParametrization;
use crate::exactnum::{format_rational, parse_rational, Rational};
use crate::series::{SparseSeries, Truncation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("unexpected character `{ch}` at position {pos}")]
    UnexpectedChar { pos: usize, ch: char },
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unexpected token at position {pos}: expected {expected}")]
    Unexpected { pos: usize, expected: &'static str },
    #[error("exponent at position {pos} must be a non-negative integer")]
    BadExponent { pos: usize },
    #[error("invalid rational literal at position {pos}")]
    BadLiteral { pos: usize },
}

/// A polynomial in `z` and `w` over `Q`, keyed by `(z_exp, w_exp)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u64, u64), Rational>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn var_z() -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(1, 0, Rational::one());
        p
    }

    pub fn var_w() -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(0, 1, Rational::one());
        p
    }

    pub fn monomial(z_exp: u64, w_exp: u64, c: Rational) -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(z_exp, w_exp, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, u64, &Rational)> {
        self.terms.iter().map(|(&(ze, we), c)| (ze, we, c))
    }

    pub fn add_term(&mut self, z_exp: u64, w_exp: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((z_exp, w_exp)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(z_exp, w_exp));
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (ze, we, c) in rhs.terms() {
            out.add_term(ze, we, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (ze, we, c) in rhs.terms() {
            out.add_term(ze, we, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        BivarPoly { terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = BivarPoly::zero();
        for (z1, w1, c1) in self.terms() {
            for (z2, w2, c2) in rhs.terms() {
                out.add_term(z1 + z2, w1 + w2, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = BivarPoly::constant(Rational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact pullback along `(z, w) = (t^m, g(t))`.
    pub fn pullback(&self, branch: &BranchParametrization) -> SparseSeries<Rational> {
        self.pullback_impl(branch, None)
    }

    /// Pullback with all series truncated at `bound`; correct up to `t^bound`
    /// and much cheaper for high `w`-powers.
    pub fn pullback_truncated(
        &self,
        branch: &BranchParametrization,
        bound: u64,
    ) -> SparseSeries<Rational> {
        self.pullback_impl(branch, Some(bound))
    }

    fn pullback_impl(&self, branch: &BranchParametrization, bound: Option<u64>) -> SparseSeries<Rational> {
        let trunc = match bound {
            Some(n) => Truncation::TruncatedAt(n),
            None => Truncation::Exact,
        };
        let g = match bound {
            Some(n) => branch.g_series().truncate_to(n),
            None => branch.g_series(),
        };
        let m = branch.multiplicity();
        // Cache powers of g up to the largest w-exponent used.
        let max_w = self.terms.keys().map(|&(_, we)| we).max().unwrap_or(0);
        let mut pows: Vec<SparseSeries<Rational>> =
            Vec::with_capacity(max_w as usize + 1);
        pows.push(SparseSeries::monomial(0, Rational::one()));
        for _ in 0..max_w {
            let mut next = pows.last().unwrap().mul(&g);
            if let Some(n) = bound {
                next = next.truncate_to(n);
            }
            pows.push(next);
        }
        let mut acc = SparseSeries::zero(trunc);
        for (ze, we, c) in self.terms() {
            let shifted = pows[we as usize].scale(c).shift_up(ze * m);
            acc = acc.add(&shifted);
        }
        acc
    }

    pub fn parse(input: &str) -> Result<Self, ExprError> {
        Parser::new(input)?.parse()
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest w-power first, then lowest z-power, matching the usual
        // Weierstrass normal form reading order.
        let mut keys: Vec<(u64, u64)> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        for (i, key) in keys.iter().enumerate() {
            let c = &self.terms[key];
            let (ze, we) = *key;
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || (ze == 0 && we == 0) {
                parts.push(format_rational(&a));
            }
            if ze == 1 {
                parts.push("z".into());
            } else if ze > 1 {
                parts.push(format!("z^{ze}"));
            }
            if we == 1 {
                parts.push("w".into());
            } else if we > 1 {
                parts.push(format!("w^{we}"));
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Z,
    W,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn new(input: &str) -> Result<Self, ExprError> {
        let mut toks = Vec::new();
        let bytes: Vec<char> = input.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let ch = bytes[i];
            match ch {
                c if c.is_whitespace() => i += 1,
                '+' => {
                    toks.push((i, Tok::Plus));
                    i += 1;
                }
                '-' => {
                    toks.push((i, Tok::Minus));
                    i += 1;
                }
                '*' => {
                    toks.push((i, Tok::Star));
                    i += 1;
                }
                '^' => {
                    toks.push((i, Tok::Caret));
                    i += 1;
                }
                '(' => {
                    toks.push((i, Tok::LParen));
                    i += 1;
                }
                ')' => {
                    toks.push((i, Tok::RParen));
                    i += 1;
                }
                'z' => {
                    toks.push((i, Tok::Z));
                    i += 1;
                }
                'w' => {
                    toks.push((i, Tok::W));
                    i += 1;
                }
                c if c.is_ascii_digit() => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    // optional /q part of an exact rational literal
                    if i < bytes.len() && bytes[i] == '/' {
                        let mut j = i + 1;
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        if j == i + 1 {
                            return Err(ExprError::BadLiteral { pos: start });
                        }
                        i = j;
                    }
                    let lit: String = bytes[start..i].iter().collect();
                    let q = parse_rational(&lit)
                        .map_err(|_| ExprError::BadLiteral { pos: start })?;
                    toks.push((start, Tok::Num(q)));
                }
                c => return Err(ExprError::UnexpectedChar { pos: i, ch: c }),
            }
        }
        Ok(Parser { toks, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(usize::MAX, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse(mut self) -> Result<BivarPoly, ExprError> {
        let e = self.parse_expr()?;
        if self.pos != self.toks.len() {
            return Err(ExprError::Unexpected { pos: self.here(), expected: "end of input" });
        }
        Ok(e)
    }

    fn parse_expr(&mut self) -> Result<BivarPoly, ExprError> {
        let mut negate_first = false;
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            negate_first = true;
        }
        let mut acc = self.parse_term()?;
        if negate_first {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<BivarPoly, ExprError> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let f = self.parse_factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<BivarPoly, ExprError> {
        let atom = self.parse_atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Some(Tok::Num(q)) => {
                    if !q.is_integer() || q.is_negative() {
                        return Err(ExprError::BadExponent { pos });
                    }
                    let e: u64 = q
                        .to_integer()
                        .try_into()
                        .map_err(|_| ExprError::BadExponent { pos })?;
                    return Ok(atom.pow(e));
                }
                Some(_) => return Err(ExprError::BadExponent { pos }),
                None => return Err(ExprError::UnexpectedEnd),
            }
        }
        Ok(atom)
    }

    fn parse_atom(&mut self) -> Result<BivarPoly, ExprError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Num(q)) => Ok(BivarPoly::constant(q)),
            Some(Tok::Z) => Ok(BivarPoly::var_z()),
            Some(Tok::W) => Ok(BivarPoly::var_w()),
            Some(Tok::LParen) => {
                let e = self.parse_expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    Some(_) => Err(ExprError::Unexpected { pos: self.here(), expected: "`)`" }),
                    None => Err(ExprError::UnexpectedEnd),
                }
            }
            Some(_) => Err(ExprError::Unexpected {
                pos,
                expected: "a rational literal, `z`, `w`, or `(`",
            }),
            None => Err(ExprError::UnexpectedEnd),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parses_weierstrass_normal_form() {
        let p = BivarPoly::parse("w^2 - z^3").unwrap();
        let expect = BivarPoly::var_w().pow(2).sub(&BivarPoly::var_z().pow(3));
        assert_eq!(p, expect);
        assert_eq!(p.to_string(), "w^2 - z^3");
    }

    #[test]
    fn parses_rational_coefficients() {
        let p = BivarPoly::parse("z*w + 3/2*z^2").unwrap();
        let mut expect = BivarPoly::zero();
        expect.add_term(1, 1, q("1"));
        expect.add_term(2, 0, q("3/2"));
        assert_eq!(p, expect);
    }

    #[test]
    fn parses_unary_minus_and_parens() {
        let p = BivarPoly::parse("-z^2 + 2*(w - z)").unwrap();
        let mut expect = BivarPoly::zero();
        expect.add_term(2, 0, q("-1"));
        expect.add_term(0, 1, q("2"));
        expect.add_term(1, 0, q("-2"));
        assert_eq!(p, expect);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(BivarPoly::parse("x + 1"), Err(ExprError::UnexpectedChar { .. })));
        assert!(matches!(BivarPoly::parse("w^"), Err(ExprError::UnexpectedEnd)));
        assert!(matches!(BivarPoly::parse("w^-2"), Err(ExprError::BadExponent { .. })));
        assert!(matches!(BivarPoly::parse("w^(1/2)"), Err(ExprError::BadExponent { .. })));
        assert!(matches!(BivarPoly::parse("z +"), Err(ExprError::UnexpectedEnd)));
        assert!(matches!(BivarPoly::parse("(z"), Err(ExprError::UnexpectedEnd)));
        assert!(matches!(BivarPoly::parse("3/"), Err(ExprError::BadLiteral { .. })));
        assert!(matches!(BivarPoly::parse("z z"), Err(ExprError::Unexpected { .. })));
    }

    #[test]
    fn pullback_on_the_cusp() {
        let b = crate::branch::BranchParametrization::new(2, vec![(3, q("1"))]).unwrap();
        // w^2 - z^3 vanishes on the curve.
        let p = BivarPoly::parse("w^2 - z^3").unwrap();
        assert!(p.pullback(&b).is_empty());
        // w/zish data: w pulls back to t^3, z to t^2.
        assert_eq!(
            BivarPoly::parse("w").unwrap().pullback(&b),
            SparseSeries::monomial(3, q("1"))
        );
        assert_eq!(
            BivarPoly::parse("z^2*w").unwrap().pullback(&b),
            SparseSeries::monomial(7, q("1"))
        );
    }

    #[test]
    fn truncated_pullback_agrees_within_window() {
        let b = crate::branch::BranchParametrization::new(4, vec![(6, q("1")), (7, q("1/3"))])
            .unwrap();
        let p = BivarPoly::parse("w^3 - 2*z^2*w + z^5").unwrap();
        let exact = p.pullback(&b);
        let trunc = p.pullback_truncated(&b, 25);
        for (e, c) in trunc.terms() {
            assert_eq!(exact.stored(e), Some(c));
        }
        for (e, c) in exact.terms() {
            if e <= 25 {
                assert_eq!(trunc.stored(e), Some(c));
            }
        }
    }
}
