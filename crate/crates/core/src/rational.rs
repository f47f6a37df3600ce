//! Exact rational numbers used for every payoff and probability.
//!
//! Values are [`BigRational`], always kept in lowest terms with a positive
//! denominator. The helpers here parse and print the literal syntax used by the
//! text formats: an optionally signed integer `a` or fraction `a/b`. Decimal
//! literals are rejected so that no value is ever rounded.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

pub use num_rational::BigRational as Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LiteralError {
    #[error("empty rational literal")]
    Empty,
    #[error("decimal literal `{0}` is not allowed, write it as a fraction a/b")]
    Decimal(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
}

/// Parses `a`, `-a`, `a/b` or `-a/b` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, LiteralError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(LiteralError::Empty);
    }
    if text.contains('.') || text.contains('e') || text.contains('E') {
        return Err(LiteralError::Decimal(text.to_string()));
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let numer = parse_int(num, true).ok_or_else(|| LiteralError::Malformed(text.to_string()))?;
    let denom = match den {
        Some(d) => parse_int(d, false).ok_or_else(|| LiteralError::Malformed(text.to_string()))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(LiteralError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(numer, denom))
}

fn parse_int(text: &str, signed: bool) -> Option<BigInt> {
    let digits = match text.strip_prefix('-') {
        Some(rest) if signed => rest,
        Some(_) => return None,
        None => text.strip_prefix('+').filter(|_| signed).unwrap_or(text),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Shorthand for `n/d`; panics on a zero denominator.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical literal: `3`, `-3`, `1/3`, `-1/3`.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// A payoff vector with one exact entry per active player (player `i` lives at index `i - 1`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Payoffs(pub Vec<Rational>);

impl Payoffs {
    pub fn zeros(players: usize) -> Self {
        Payoffs(vec![Rational::zero(); players])
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Payoffs(values.iter().map(|&v| int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Payoff of active player `player` (1-based).
    pub fn of(&self, player: usize) -> &Rational {
        &self.0[player - 1]
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, v| acc + v)
    }

    /// `self += weight * other`
    pub fn add_scaled(&mut self, weight: &Rational, other: &Payoffs) {
        for (acc, v) in self.0.iter_mut().zip(&other.0) {
            *acc += weight * v;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rational> {
        self.0.iter()
    }
}

impl fmt::Display for Payoffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_rational(v))?;
        }
        f.write_str(")")
    }
}
