//! Ordinals below epsilon_0 in Cantor normal form.
//!
//! An ordinal is a finite sum `w^e1*c1 + w^e2*c2 + ...` with strictly
//! decreasing exponents (themselves ordinals) and positive integer
//! coefficients. The empty sum is 0. Everything here is exact: comparison,
//! the usual (non-commutative) sum and product, and the Hessenberg natural
//! sum used by the fusion combinatorics.

use serde::de::Error as DeError;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ordinal {
    // Invariant: exponents strictly decreasing, coefficients >= 1.
    terms: Vec<(Ordinal, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrdinalKind {
    Zero,
    Successor,
    Limit,
}

/// Shape report for an ordinal: its kind, the number of CNF summands counted
/// with multiplicity (`w*2` has length 2), and whether it is additively
/// indecomposable (a single `w^e` term; 0 is not).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrdinalAnalysis {
    pub kind: OrdinalKind,
    pub cnf_length: u64,
    pub indecomposable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrdinalError {
    #[error("coefficient must be >= 1")]
    ZeroCoefficient,
    #[error("exponents must be strictly decreasing")]
    ExponentOrder,
}

/// Syntax error produced by [`Ordinal::parse`], with a byte offset into the
/// input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at position {position}: {message}")]
pub struct ParseOrdinalError {
    pub position: usize,
    pub message: String,
}

impl Ordinal {
    pub fn zero() -> Ordinal {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Ordinal {
        Ordinal::from_nat(1)
    }

    pub fn omega() -> Ordinal {
        Ordinal {
            terms: vec![(Ordinal::from_nat(1), 1)],
        }
    }

    pub fn from_nat(n: u64) -> Ordinal {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(Ordinal::zero(), n)],
            }
        }
    }

    /// Builds an ordinal from explicit CNF terms, validating the invariants.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Ordinal, OrdinalError> {
        for (i, (exp, coef)) in terms.iter().enumerate() {
            if *coef == 0 {
                return Err(OrdinalError::ZeroCoefficient);
            }
            if i > 0 && terms[i - 1].0 <= *exp {
                return Err(OrdinalError::ExponentOrder);
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_successor(&self) -> bool {
        self.kind() == OrdinalKind::Successor
    }

    pub fn is_limit(&self) -> bool {
        self.kind() == OrdinalKind::Limit
    }

    pub fn kind(&self) -> OrdinalKind {
        match self.terms.last() {
            None => OrdinalKind::Zero,
            Some((exp, _)) if exp.is_zero() => OrdinalKind::Successor,
            Some(_) => OrdinalKind::Limit,
        }
    }

    /// `Some(n)` when the ordinal is the natural number n.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(exp, coef)] if exp.is_zero() => Some(*coef),
            _ => None,
        }
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|(e, _)| e)
    }

    pub fn successor(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// Strips one from a successor ordinal; `None` for 0 and limits.
    pub fn predecessor(&self) -> Option<Ordinal> {
        let (exp, coef) = self.terms.last()?;
        if !exp.is_zero() {
            return None;
        }
        let mut terms = self.terms.clone();
        if *coef > 1 {
            terms.last_mut().unwrap().1 -= 1;
        } else {
            terms.pop();
        }
        Some(Ordinal { terms })
    }

    pub fn compare(&self, other: &Ordinal) -> Ordering {
        for (ta, tb) in self.terms.iter().zip(other.terms.iter()) {
            match ta.0.compare(&tb.0).then_with(|| ta.1.cmp(&tb.1)) {
                Ordering::Equal => continue,
                diff => return diff,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }

    /// Ordinal sum. Not commutative: terms of `self` below the leading
    /// exponent of `other` are absorbed.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some((lead, lead_coef)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> = Vec::new();
        for (exp, coef) in &self.terms {
            match exp.compare(lead) {
                Ordering::Greater => terms.push((exp.clone(), *coef)),
                _ => break,
            }
        }
        match self
            .terms
            .get(terms.len())
            .filter(|(exp, _)| exp == lead)
        {
            Some((_, coef)) => terms.push((
                lead.clone(),
                coef.checked_add(*lead_coef).expect("coefficient overflow"),
            )),
            None => terms.push((lead.clone(), *lead_coef)),
        }
        terms.extend(other.terms.iter().skip(1).cloned());
        Ordinal { terms }
    }

    /// Ordinal product, distributing over the right factor's CNF.
    pub fn mul(&self, other: &Ordinal) -> Ordinal {
        if self.is_zero() || other.is_zero() {
            return Ordinal::zero();
        }
        let lead_exp = &self.terms[0].0;
        let mut acc = Ordinal::zero();
        for (exp, coef) in &other.terms {
            let part = if exp.is_zero() {
                // Right factor contributes a finite summand: multiply the
                // leading coefficient, keep the tail.
                let mut t = self.clone();
                t.terms[0].1 = t.terms[0].1.checked_mul(*coef).expect("coefficient overflow");
                t
            } else {
                Ordinal {
                    terms: vec![(lead_exp.add(exp), *coef)],
                }
            };
            acc = acc.add(&part);
        }
        acc
    }

    /// Hessenberg (natural) sum: coefficient-wise addition of the CNF
    /// polynomials. Commutative and strictly monotone in each argument.
    pub fn nat_add(&self, other: &Ordinal) -> Ordinal {
        let mut terms: Vec<(Ordinal, u64)> = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let pick = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.compare(&b.0),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => unreachable!(),
            };
            match pick {
                Ordering::Greater => {
                    terms.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    terms.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let coef = self.terms[i]
                        .1
                        .checked_add(other.terms[j].1)
                        .expect("coefficient overflow");
                    terms.push((self.terms[i].0.clone(), coef));
                    i += 1;
                    j += 1;
                }
            }
        }
        Ordinal { terms }
    }

    /// `w^exp`.
    pub fn omega_pow(exp: &Ordinal) -> Ordinal {
        Ordinal {
            terms: vec![(exp.clone(), 1)],
        }
    }

    pub fn analyze(&self) -> OrdinalAnalysis {
        OrdinalAnalysis {
            kind: self.kind(),
            cnf_length: self.terms.iter().map(|(_, c)| *c).sum(),
            indecomposable: matches!(self.terms.as_slice(), [(_, 1)]),
        }
    }

    /// Parses the literal grammar
    /// `ord := term ('+' term)*` with
    /// `term := 'w' ('^' nat | '^(' ord ')')? ('*' nat)? | nat`.
    ///
    /// Evaluation goes through [`Ordinal::add`], [`Ordinal::mul`] and
    /// [`Ordinal::omega_pow`], so non-canonical inputs like `1+w` normalize.
    pub fn parse(input: &str) -> Result<Ordinal, ParseOrdinalError> {
        let mut p = Parser {
            bytes: input.as_bytes(),
            pos: 0,
        };
        let ord = p.ordinal()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error("trailing input"));
        }
        Ok(ord)
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Ordinal {
        Ordinal::from_nat(n)
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Ordinal) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Ordinal) -> Ordering {
        self.compare(other)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exp, coef)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if exp.is_zero() {
                write!(f, "{coef}")?;
                continue;
            }
            match exp.as_nat() {
                Some(1) => write!(f, "w")?,
                Some(n) => write!(f, "w^{n}")?,
                None => write!(f, "w^({exp})")?,
            }
            if *coef > 1 {
                write!(f, "*{coef}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Ordinal {
    type Err = ParseOrdinalError;

    fn from_str(s: &str) -> Result<Ordinal, ParseOrdinalError> {
        Ordinal::parse(s)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for term in &self.terms {
            seq.serialize_element(&(&term.0, term.1))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Ordinal, D::Error> {
        let terms = Vec::<(Ordinal, u64)>::deserialize(deserializer)?;
        Ordinal::from_terms(terms).map_err(D::Error::custom)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> ParseOrdinalError {
        ParseOrdinalError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, ParseOrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseOrdinalError {
                position: start,
                message: "number out of range".to_string(),
            })
    }

    fn ordinal(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            let t = self.term()?;
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exp = if self.eat(b'^') {
                    if self.eat(b'(') {
                        let inner = self.ordinal()?;
                        if !self.eat(b')') {
                            return Err(self.error("expected ')'"));
                        }
                        inner
                    } else {
                        Ordinal::from_nat(self.nat()?)
                    }
                } else {
                    Ordinal::one()
                };
                let mut value = Ordinal::omega_pow(&exp);
                if self.eat(b'*') {
                    value = value.mul(&Ordinal::from_nat(self.nat()?));
                }
                Ok(value)
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::from_nat(self.nat()?)),
            _ => Err(self.error("expected 'w' or a number")),
        }
    }
}
