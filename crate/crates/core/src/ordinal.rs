//! Ordinals below ω^ω in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `ω^e₀·c₀ + ω^e₁·c₁ + …` with strictly
//! decreasing exponents and positive coefficients. The empty sum is `0`.
//!
//! The textual form accepted by [`Ordinal::from_str`] is
//! `term ('+' term)*` where a term is `w^E[*C]`, `w[*C]` or a plain natural
//! `N`. `ω` may be used in place of `w`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// One summand `ω^exp · coef` of a normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub exp: u64,
    pub coef: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("exponents must be strictly decreasing (term {index})")]
    NotDescending { index: usize },
    #[error("zero coefficient in term {index}")]
    ZeroCoefficient { index: usize },
    #[error("value does not fit in 64 bits: {0}")]
    Overflow(String),
}

/// An ordinal below ω^ω.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    /// The finite ordinal `n`.
    pub fn nat(n: u64) -> Self {
        Self::omega_pow_times(0, n)
    }

    /// `ω^exp`.
    pub fn omega_pow(exp: u64) -> Self {
        Self::omega_pow_times(exp, 1)
    }

    /// `ω^exp · coef`; zero when `coef == 0`.
    pub fn omega_pow_times(exp: u64, coef: u64) -> Self {
        if coef == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![Term { exp, coef }],
            }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(1)
    }

    /// Builds a normal form from `(exponent, coefficient)` pairs, rejecting
    /// anything that is not already canonical.
    pub fn from_terms<I>(terms: I) -> Result<Self, OrdinalError>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut out: Vec<Term> = Vec::new();
        for (index, (exp, coef)) in terms.into_iter().enumerate() {
            if coef == 0 {
                return Err(OrdinalError::ZeroCoefficient { index });
            }
            if let Some(prev) = out.last() {
                if prev.exp <= exp {
                    return Err(OrdinalError::NotDescending { index });
                }
            }
            out.push(Term { exp, coef });
        }
        Ok(Ordinal { terms: out })
    }

    /// `ω^exp` where the exponent is an unbounded natural; fails instead of
    /// truncating when it does not fit the internal width.
    pub fn omega_pow_big(exp: &num_bigint::BigUint) -> Result<Self, OrdinalError> {
        let e = u64::try_from(exp).map_err(|_| OrdinalError::Overflow(exp.to_string()))?;
        Ok(Self::omega_pow(e))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for `β + 1`.
    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some(t) if t.exp == 0)
    }

    /// True for `β + ω^n` with `n ≥ 1`.
    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some(t) if t.exp > 0)
    }

    /// Leading exponent, `None` for zero.
    pub fn degree(&self) -> Option<u64> {
        self.terms.first().map(|t| t.exp)
    }

    /// The finite part (coefficient of `ω^0`).
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some(t) if t.exp == 0 => t.coef,
            _ => 0,
        }
    }

    /// `self + 1`.
    pub fn succ(&self) -> Self {
        self.clone() + Ordinal::nat(1)
    }

    /// The fundamental-sequence step `α[m]`.
    ///
    /// `0[m] = 0`, `(β+1)[m] = β`, `(β+ω^n)[m] = β + ω^(n-1)·m` for `n ≥ 1`.
    pub fn fund(&self, m: u64) -> Self {
        let mut out = self.clone();
        out.fund_in_place(m);
        out
    }

    /// In-place form of [`Ordinal::fund`].
    pub fn fund_in_place(&mut self, m: u64) {
        let Some(last) = self.terms.last_mut() else {
            return;
        };
        let exp = last.exp;
        last.coef -= 1;
        if last.coef == 0 {
            self.terms.pop();
        }
        if exp > 0 && m > 0 {
            self.terms.push(Term { exp: exp - 1, coef: m });
        }
    }

    /// Canonical text form, e.g. `w^2*3+w+5`.
    pub fn format(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self, OrdinalError> {
        Parser::new(text).parse()
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.exp.cmp(&b.exp) {
                Ordering::Equal => {}
                ord => return ord,
            }
            match a.coef.cmp(&b.coef) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Three-way comparison in ordinal order.
pub fn compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

/// Ordinal addition (not commutative: `1 + ω = ω`).
impl Add for Ordinal {
    type Output = Ordinal;

    fn add(mut self, rhs: Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first().copied() else {
            return self;
        };
        while matches!(self.terms.last(), Some(t) if t.exp < lead.exp) {
            self.terms.pop();
        }
        let mut rest = rhs.terms.into_iter();
        if let Some(t) = self.terms.last_mut() {
            if t.exp == lead.exp {
                t.coef = t
                    .coef
                    .checked_add(lead.coef)
                    .expect("ordinal coefficient overflow");
                rest.next();
            }
        }
        self.terms.extend(rest);
        self
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match (t.exp, t.coef) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ordinal::parse(s)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
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

    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T, OrdinalError> {
        Err(OrdinalError::Parse {
            pos,
            msg: msg.into(),
        })
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

    fn number(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected a decimal natural");
        }
        let digits = &self.src[start..self.pos];
        digits
            .parse::<u64>()
            .map_err(|_| OrdinalError::Overflow(digits.to_string()))
    }

    fn term(&mut self) -> Result<(usize, Term), OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('w') | Some('ω') => {
                self.pos += self.peek().map(char::len_utf8).unwrap_or(1);
                let exp = if self.eat('^') { self.number()? } else { 1 };
                let coef = if self.eat('*') { self.number()? } else { 1 };
                Ok((start, Term { exp, coef }))
            }
            Some(c) if c.is_ascii_digit() => {
                let coef = self.number()?;
                Ok((start, Term { exp: 0, coef }))
            }
            Some(c) => self.err(start, format!("unexpected character '{c}'")),
            None => self.err(start, "unexpected end of input"),
        }
    }

    fn parse(mut self) -> Result<Ordinal, OrdinalError> {
        let mut terms: Vec<(usize, Term)> = vec![self.term()?];
        while self.eat('+') {
            terms.push(self.term()?);
        }
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err(self.pos, "trailing input");
        }
        if terms.len() == 1 && terms[0].1.exp == 0 && terms[0].1.coef == 0 {
            return Ok(Ordinal::zero());
        }
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (pos, t) in terms {
            if t.coef == 0 {
                return self.err(pos, "zero coefficient is not canonical");
            }
            if let Some(prev) = out.last() {
                if prev.exp <= t.exp {
                    return self.err(pos, "exponents must be strictly decreasing");
                }
            }
            out.push(t);
        }
        Ok(Ordinal { terms: out })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&Ordinal::zero(), &Ordinal::zero()), Ordering::Equal);
        assert_eq!(compare(&o("w"), &o("5")), Ordering::Greater);
        assert_eq!(compare(&o("w^2*2+3"), &o("w^2*2+w")), Ordering::Less);
        assert_eq!(compare(&o("w^2"), &o("w*100+7")), Ordering::Greater);
        assert_eq!(compare(&o("w+1"), &o("w")), Ordering::Greater);
    }

    #[test]
    fn fund_examples() {
        assert_eq!(o("w").fund(3), o("3"));
        assert_eq!(o("w^2*2+1").fund(5), o("w^2*2"));
        assert_eq!(o("w^3").fund(2), o("w^2*2"));
        assert_eq!(o("w").fund(0), Ordinal::zero());
        assert_eq!(Ordinal::zero().fund(7), Ordinal::zero());
        assert_eq!(o("w^2*2").fund(3), o("w^2+w*3"));
    }

    #[test]
    fn parse_examples() {
        let a = o("w^2*3+w+5");
        let pairs: Vec<(u64, u64)> = a.terms().iter().map(|t| (t.exp, t.coef)).collect();
        assert_eq!(pairs, vec![(2, 3), (1, 1), (0, 5)]);
        assert!(o("0").is_zero());
        assert_eq!(o(" ω^2 + ω*2 "), o("w^2+w*2"));
        assert_eq!(o("w^0*4"), o("4"));
    }

    #[test]
    fn parse_rejects_non_canonical() {
        match Ordinal::parse("w+w^2") {
            Err(OrdinalError::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Ordinal::parse("w+w").is_err());
        assert!(Ordinal::parse("w*0").is_err());
        assert!(Ordinal::parse("w+0").is_err());
        assert!(Ordinal::parse("").is_err());
        assert!(Ordinal::parse("w^").is_err());
        assert!(Ordinal::parse("w x").is_err());
        assert!(matches!(
            Ordinal::parse("99999999999999999999999"),
            Err(OrdinalError::Overflow(_))
        ));
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(o("w^1*1+w^0*2").to_string(), "w+2");
        assert_eq!(o("w^3*2+w*4+1").to_string(), "w^3*2+w*4+1");
        assert_eq!(Ordinal::zero().to_string(), "0");
    }

    #[test]
    fn addition_absorbs_lower_terms() {
        assert_eq!(o("1") + o("w"), o("w"));
        assert_eq!(o("w+3") + o("w^2"), o("w^2"));
        assert_eq!(o("w*2+3") + o("w+1"), o("w*3+1"));
        assert_eq!(o("w") + Ordinal::zero(), o("w"));
    }

    #[test]
    fn from_terms_validates() {
        assert!(Ordinal::from_terms([(1, 1), (1, 2)]).is_err());
        assert!(Ordinal::from_terms([(2, 0)]).is_err());
        assert_eq!(Ordinal::from_terms([(2, 1), (0, 3)]).unwrap(), o("w^2+3"));
    }

    #[test]
    fn big_exponent_does_not_wrap() {
        let big = num_bigint::BigUint::from(3u32).pow(60);
        assert!(Ordinal::omega_pow_big(&big).is_err());
        let small = num_bigint::BigUint::from(81u32);
        assert_eq!(Ordinal::omega_pow_big(&small).unwrap(), Ordinal::omega_pow(81));
    }
}
