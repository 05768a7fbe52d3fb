//! Colour tokens: the single codomain shared by every colouring.
//!
//! Tokens serialize to a compact canonical JSON form. Integers are JSON
//! numbers (decimal strings when they do not fit in 64 bits), rationals are
//! `[num, den]` in lowest terms with a positive denominator, and the matrix
//! sentinel is the string `"TOP"`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::Value;

/// A single coordinate value as it appears inside a sigma sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Int(BigInt),
    Rational(BigRational),
}

impl Scalar {
    /// Normalizes integral rationals to `Int` so equal values compare equal.
    pub fn from_rational(r: BigRational) -> Self {
        if r.denom().is_one() {
            Scalar::Int(r.numer().clone())
        } else {
            Scalar::Rational(r)
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Int(i) => int_json(i),
            Scalar::Rational(r) => rational_json(r),
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Int(BigInt::from(v))
    }
}

/// Entry of a Δ-matrix: a finite ordinal, or the diagonal sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatrixEntry {
    Ordinal(u32),
    Top,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColourToken {
    Int(BigInt),
    Rational(BigRational),
    Seq(Vec<Scalar>),
    Matrix(Vec<Vec<MatrixEntry>>),
    Tuple(Vec<ColourToken>),
    Bit(u8),
}

impl ColourToken {
    /// Integral values collapse to `Int`.
    pub fn from_rational(r: BigRational) -> Self {
        if r.denom().is_one() {
            ColourToken::Int(r.numer().clone())
        } else {
            ColourToken::Rational(r)
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ColourToken::Int(i) => int_json(i),
            ColourToken::Rational(r) => rational_json(r),
            ColourToken::Seq(items) => Value::Array(items.iter().map(Scalar::to_json).collect()),
            ColourToken::Matrix(rows) => Value::Array(
                rows.iter()
                    .map(|row| {
                        Value::Array(
                            row.iter()
                                .map(|e| match e {
                                    MatrixEntry::Ordinal(o) => Value::from(*o),
                                    MatrixEntry::Top => Value::from("TOP"),
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            ),
            ColourToken::Tuple(items) => {
                Value::Array(items.iter().map(ColourToken::to_json).collect())
            }
            ColourToken::Bit(b) => Value::from(*b),
        }
    }

    /// Compact JSON with no whitespace; the hashing form.
    pub fn to_canonical_json(&self) -> String {
        self.to_json().to_string()
    }
}

impl fmt::Display for ColourToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_json())
    }
}

pub(crate) fn int_json(i: &BigInt) -> Value {
    match i.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(i.to_string()),
    }
}

pub(crate) fn rational_json(r: &BigRational) -> Value {
    Value::Array(vec![int_json(r.numer()), int_json(r.denom())])
}
