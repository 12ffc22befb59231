//! Judgment values and their ordinal classes.
//!
//! Scale-sourced judgments are stored as reduced rationals so that `v` and
//! `1/v` round-trip exactly and the `Equal` class is never lost to rounding.
//! Judgments loaded from raw matrix files may be arbitrary positive reals.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordinal class of a judgment `a_ij`: whether object `i` is preferred to,
/// dominated by, or equivalent to object `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Less,
    Equal,
    More,
}

impl Relation {
    pub const ALL: [Relation; 3] = [Relation::More, Relation::Less, Relation::Equal];

    pub fn sign(self) -> i8 {
        match self {
            Relation::More => 1,
            Relation::Equal => 0,
            Relation::Less => -1,
        }
    }

    /// Inverse of [`Relation::sign`]; any positive value maps to `More`.
    pub fn from_sign(sign: i32) -> Relation {
        match sign.cmp(&0) {
            Ordering::Greater => Relation::More,
            Ordering::Equal => Relation::Equal,
            Ordering::Less => Relation::Less,
        }
    }

    /// Relation of the reciprocal judgment (`j` versus `i`).
    pub fn reverse(self) -> Relation {
        Relation::from_sign(-i32::from(self.sign()))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::More => "more",
            Relation::Less => "less",
            Relation::Equal => "equal",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies a raw positive value against 1 using exact comparison.
pub fn relation_of(v: f64) -> Result<Relation> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::BadValue(v));
    }
    Ok(match v.partial_cmp(&1.0) {
        Some(Ordering::Greater) => Relation::More,
        Some(Ordering::Less) => Relation::Less,
        _ => Relation::Equal,
    })
}

/// A positive rational `num/den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RatioRepr", into = "RatioRepr")]
pub struct Ratio {
    num: u32,
    den: u32,
}

#[derive(Serialize, Deserialize)]
struct RatioRepr {
    value_num: u32,
    value_den: u32,
}

impl TryFrom<RatioRepr> for Ratio {
    type Error = Error;

    fn try_from(r: RatioRepr) -> Result<Self> {
        Ratio::new(r.value_num, r.value_den)
    }
}

impl From<Ratio> for RatioRepr {
    fn from(r: Ratio) -> Self {
        RatioRepr { value_num: r.num, value_den: r.den }
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::BadValue(if den == 0 { f64::INFINITY } else { 0.0 }));
        }
        let g = gcd(num, den);
        Ok(Ratio { num: num / g, den: den / g })
    }

    pub fn integer(n: u32) -> Result<Self> {
        Ratio::new(n, 1)
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    pub fn recip(self) -> Ratio {
        Ratio { num: self.den, den: self.num }
    }

    pub fn value(self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }

    pub fn relation(self) -> Relation {
        match self.num.cmp(&self.den) {
            Ordering::Greater => Relation::More,
            Ordering::Equal => Relation::Equal,
            Ordering::Less => Relation::Less,
        }
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (u64::from(self.num) * u64::from(other.den)).cmp(&(u64::from(other.num) * u64::from(self.den)))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// One judgment `a_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JudgmentValue {
    /// A scale value, exact.
    Exact(Ratio),
    /// A free positive real from a raw matrix file.
    Real(f64),
}

impl JudgmentValue {
    pub fn real(v: f64) -> Result<Self> {
        relation_of(v)?;
        Ok(JudgmentValue::Real(v))
    }

    pub fn value(self) -> f64 {
        match self {
            JudgmentValue::Exact(r) => r.value(),
            JudgmentValue::Real(v) => v,
        }
    }

    pub fn recip(self) -> JudgmentValue {
        match self {
            JudgmentValue::Exact(r) => JudgmentValue::Exact(r.recip()),
            JudgmentValue::Real(v) => JudgmentValue::Real(1.0 / v),
        }
    }

    pub fn relation(self) -> Relation {
        match self {
            JudgmentValue::Exact(r) => r.relation(),
            // constructors guarantee v > 0
            JudgmentValue::Real(v) => relation_of(v).unwrap_or(Relation::Equal),
        }
    }

    pub fn as_ratio(self) -> Option<Ratio> {
        match self {
            JudgmentValue::Exact(r) => Some(r),
            JudgmentValue::Real(_) => None,
        }
    }
}

impl From<Ratio> for JudgmentValue {
    fn from(r: Ratio) -> Self {
        JudgmentValue::Exact(r)
    }
}

impl fmt::Display for JudgmentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JudgmentValue::Exact(r) => r.fmt(f),
            JudgmentValue::Real(v) => write!(f, "{v}"),
        }
    }
}
