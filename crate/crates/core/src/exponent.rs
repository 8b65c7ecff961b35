//! Exact Lebesgue exponents and their enriched `p-`/`p`/`p+` decorations.
//!
//! An exponent `p ∈ [1, ∞]` is stored through its reciprocal `t = 1/p`, an exact
//! rational in `[0, 1]`. `p = ∞` is `t = 0` and conjugation is `t ↦ 1 - t`.
//!
//! Two orders show up in the formulas and they run in opposite directions:
//!
//! * the *t-order* (the `Ord` impls here) sorts by `1/p`; on `[0,1]` it is the
//!   inclusion order of the spaces, `L^∞ ⊂ L^ω ⊂ … ⊂ L^{p+} ⊂ L^p ⊂ L^{p-} ⊂ … ⊂ L^1`;
//! * the *p-order* sorts by `p`. `p ∧ q = min{p, q}` in the multiplier formulas is
//!   [`p_min`], which is the t-order maximum; [`p_max`] is the t-order minimum.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = Ratio<i64>;

/// Largest numerator/denominator accepted from text, so that sums of a few
/// reciprocals stay far away from `i64` overflow.
const LITERAL_LIMIT: i64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExponentError {
    #[error("reciprocal exponent {0} lies outside [0, 1] (p must be in [1, ∞])")]
    OutOfRange(Rational),
    #[error("malformed exponent literal `{0}`")]
    Malformed(String),
    #[error("exponent literal `{0}` is too large")]
    TooLarge(String),
}

/// A Lebesgue exponent `p ∈ [1, ∞]`, held as `t = 1/p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Exponent {
    t: Rational,
}

impl Exponent {
    pub const INFINITY: Exponent = Exponent {
        t: Ratio::new_raw(0, 1),
    };
    pub const ONE: Exponent = Exponent {
        t: Ratio::new_raw(1, 1),
    };
    pub const TWO: Exponent = Exponent {
        t: Ratio::new_raw(1, 2),
    };

    pub fn from_reciprocal(t: Rational) -> Result<Self, ExponentError> {
        if t < Rational::zero() || t > Rational::one() {
            return Err(ExponentError::OutOfRange(t));
        }
        Ok(Exponent { t })
    }

    /// `p = num/den`; `num/den` must be at least 1.
    pub fn from_p(num: i64, den: i64) -> Result<Self, ExponentError> {
        if num <= 0 || den <= 0 {
            return Err(ExponentError::Malformed(format!("{num}/{den}")));
        }
        Self::from_reciprocal(Rational::new(den, num))
    }

    /// Panicking shorthand for literals in tests and fixed tables.
    pub fn p(num: i64, den: i64) -> Self {
        Self::from_p(num, den).expect("valid exponent literal")
    }

    pub fn reciprocal(self) -> Rational {
        self.t
    }

    pub fn is_infinite(self) -> bool {
        self.t.is_zero()
    }

    /// `p` as an exact rational, `None` for `p = ∞`.
    pub fn p_value(self) -> Option<Rational> {
        if self.is_infinite() {
            None
        } else {
            Some(self.t.recip())
        }
    }

    /// `p` as a float (`f64::INFINITY` for `t = 0`).
    pub fn to_f64(self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            *self.t.denom() as f64 / *self.t.numer() as f64
        }
    }

    /// The conjugate exponent: `1/p + 1/p̄ = 1`.
    pub fn conjugate(self) -> Self {
        Exponent {
            t: Rational::one() - self.t,
        }
    }
}

impl Ord for Exponent {
    /// t-order (see module docs).
    fn cmp(&self, other: &Self) -> Ordering {
        self.t.cmp(&other.t)
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.p_value() {
            None => f.write_str("inf"),
            Some(p) if p.is_integer() => write!(f, "{}", p.numer()),
            Some(p) => write!(f, "{}/{}", p.numer(), p.denom()),
        }
    }
}

/// Position of an enriched point inside the triplet `L^{p+} ⊂ L^p ⊂ L^{p-}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decoration {
    Plus,
    Exact,
    Minus,
}

impl Decoration {
    /// Rank in the t-order: `Plus < Exact < Minus`.
    pub fn rank(self) -> u8 {
        match self {
            Decoration::Plus => 0,
            Decoration::Exact => 1,
            Decoration::Minus => 2,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Decoration::Plus => Decoration::Minus,
            Decoration::Exact => Decoration::Exact,
            Decoration::Minus => Decoration::Plus,
        }
    }
}

/// A point of the completed exponent line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnrichedExponent {
    pub base: Exponent,
    pub decoration: Decoration,
}

impl EnrichedExponent {
    pub const INFINITY: EnrichedExponent = EnrichedExponent::exact(Exponent::INFINITY);
    pub const ONE: EnrichedExponent = EnrichedExponent::exact(Exponent::ONE);
    /// `L^ω = L^{∞-}`.
    pub const OMEGA: EnrichedExponent = EnrichedExponent {
        base: Exponent::INFINITY,
        decoration: Decoration::Minus,
    };

    pub const fn new(base: Exponent, decoration: Decoration) -> Self {
        EnrichedExponent { base, decoration }
    }

    pub const fn exact(base: Exponent) -> Self {
        EnrichedExponent {
            base,
            decoration: Decoration::Exact,
        }
    }

    /// Undecorated `p = num/den`, panicking on invalid literals.
    pub fn p(num: i64, den: i64) -> Self {
        Self::exact(Exponent::p(num, den))
    }

    pub fn plus(self) -> Self {
        Self::new(self.base, Decoration::Plus)
    }

    pub fn minus(self) -> Self {
        Self::new(self.base, Decoration::Minus)
    }

    pub fn is_exact(self) -> bool {
        self.decoration == Decoration::Exact
    }

    pub fn reciprocal(self) -> Rational {
        self.base.reciprocal()
    }

    /// `(t, Exact) ↦ (1-t, Exact)`, `(t, Minus) ↦ (1-t, Plus)`, `(t, Plus) ↦ (1-t, Minus)`.
    pub fn dual(self) -> Self {
        Self::new(self.base.conjugate(), self.decoration.flip())
    }
}

impl Ord for EnrichedExponent {
    /// t-order refined by decoration rank; inclusion order of the chain on `[0,1]`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.base
            .cmp(&other.base)
            .then(self.decoration.rank().cmp(&other.decoration.rank()))
    }
}

impl PartialOrd for EnrichedExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Exponent> for EnrichedExponent {
    fn from(e: Exponent) -> Self {
        EnrichedExponent::exact(e)
    }
}

/// Conjugate exponent.
pub fn conjugate(e: Exponent) -> Exponent {
    e.conjugate()
}

/// Decoration-swapping duality on the completed line.
pub fn enriched_dual(e: EnrichedExponent) -> EnrichedExponent {
    e.dual()
}

/// Total order consistent with inclusion of the spaces on `[0,1]`.
pub fn enriched_compare(a: EnrichedExponent, b: EnrichedExponent) -> Ordering {
    a.cmp(&b)
}

/// `p ∧ q = min{p, q}` in p-terms; the larger of the two in t-order.
pub fn p_min(a: EnrichedExponent, b: EnrichedExponent) -> EnrichedExponent {
    a.max(b)
}

/// `p ∨ q = max{p, q}` in p-terms; the smaller of the two in t-order.
pub fn p_max(a: EnrichedExponent, b: EnrichedExponent) -> EnrichedExponent {
    a.min(b)
}

/// Alias of [`p_min`] under the operation name used by the lattice formulas.
pub fn exp_min(a: EnrichedExponent, b: EnrichedExponent) -> EnrichedExponent {
    p_min(a, b)
}

/// Alias of [`p_max`].
pub fn exp_max(a: EnrichedExponent, b: EnrichedExponent) -> EnrichedExponent {
    p_max(a, b)
}

impl fmt::Display for EnrichedExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == EnrichedExponent::OMEGA {
            return f.write_str("omega");
        }
        write!(f, "{}", self.base)?;
        match self.decoration {
            Decoration::Plus => f.write_str("+"),
            Decoration::Exact => Ok(()),
            Decoration::Minus => f.write_str("-"),
        }
    }
}

fn parse_int(s: &str, whole: &str) -> Result<i64, ExponentError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ExponentError::Malformed(whole.to_string()));
    }
    let v: i64 = s
        .parse()
        .map_err(|_| ExponentError::TooLarge(whole.to_string()))?;
    if v > LITERAL_LIMIT {
        return Err(ExponentError::TooLarge(whole.to_string()));
    }
    Ok(v)
}

impl FromStr for Exponent {
    type Err = ExponentError;

    /// Accepts `3`, `3/2`, `inf` (or `∞`), optionally prefixed by `p=`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim();
        let body = body.strip_prefix("p=").unwrap_or(body).trim();
        match body {
            "inf" | "∞" => return Ok(Exponent::INFINITY),
            "" => return Err(ExponentError::Malformed(s.to_string())),
            _ => {}
        }
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (parse_int(n, s)?, parse_int(d, s)?),
            None => (parse_int(body, s)?, 1),
        };
        if den == 0 || num == 0 {
            return Err(ExponentError::Malformed(s.to_string()));
        }
        Exponent::from_p(num, den)
    }
}

impl FromStr for EnrichedExponent {
    type Err = ExponentError;

    /// Accepts everything [`Exponent`] does plus `omega`/`ω` and a `+`/`-` suffix.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim();
        let body = body.strip_prefix("p=").unwrap_or(body).trim();
        if body == "omega" || body == "ω" {
            return Ok(EnrichedExponent::OMEGA);
        }
        let (core, decoration) = if let Some(c) = body.strip_suffix('+') {
            (c, Decoration::Plus)
        } else if let Some(c) = body.strip_suffix('-') {
            (c, Decoration::Minus)
        } else {
            (body, Decoration::Exact)
        };
        let base: Exponent = core.parse().map_err(|e| match e {
            ExponentError::Malformed(_) => ExponentError::Malformed(s.to_string()),
            other => other,
        })?;
        Ok(EnrichedExponent::new(base, decoration))
    }
}

/// JSON form `{num, den, dec}`: `num/den` is the reciprocal `t = 1/p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentJson {
    pub num: i64,
    pub den: i64,
    pub dec: Decoration,
}

impl From<EnrichedExponent> for ExponentJson {
    fn from(e: EnrichedExponent) -> Self {
        let t = e.reciprocal();
        ExponentJson {
            num: *t.numer(),
            den: *t.denom(),
            dec: e.decoration,
        }
    }
}

impl TryFrom<ExponentJson> for EnrichedExponent {
    type Error = ExponentError;

    fn try_from(j: ExponentJson) -> Result<Self, Self::Error> {
        if j.den == 0 {
            return Err(ExponentError::Malformed(format!("{}/{}", j.num, j.den)));
        }
        let base = Exponent::from_reciprocal(Rational::new(j.num, j.den))?;
        Ok(EnrichedExponent::new(base, j.dec))
    }
}

impl Serialize for EnrichedExponent {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ExponentJson::from(*self).serialize(serializer)
    }
}

#[derive(Serialize, Deserialize)]
struct ReciprocalJson {
    num: i64,
    den: i64,
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ReciprocalJson {
            num: *self.t.numer(),
            den: *self.t.denom(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = ReciprocalJson::deserialize(deserializer)?;
        if j.den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Exponent::from_reciprocal(Rational::new(j.num, j.den)).map_err(serde::de::Error::custom)
    }
}

impl<'de> Deserialize<'de> for EnrichedExponent {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = ExponentJson::deserialize(deserializer)?;
        EnrichedExponent::try_from(j).map_err(serde::de::Error::custom)
    }
}
