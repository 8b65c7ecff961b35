//! Symbolic lattice of the concrete space families.
//!
//! * [`SpacePoint::Chain`]: `L^p([0,1])` on the enriched chain.
//! * [`SpacePoint::Square`]: `L^(p,q)` on ℝ, i.e. `L^p ∩ L^q` for `p ≥ q` and `L^p + L^q`
//!   for `p ≤ q`, one point of the unit square `(1/p, 1/q)`.
//! * [`SpacePoint::Amalgam`]: `(L^p, ℓ^q)`, same square, same order.
//!
//! Decorated coordinates on the square propagate componentwise through every
//! operation; results built from them report [`SpacePoint::is_extension`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponent::{p_max, p_min, EnrichedExponent, ExponentError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Chain,
    Square,
    Amalgam,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::Chain => "chain space Lp(..)",
            SpaceKind::Square => "square space L(..,..)",
            SpaceKind::Amalgam => "amalgam space W(..,..)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("cannot combine a {0} with a {1}")]
    VariantMismatch(SpaceKind, SpaceKind),
    #[error("convolution multipliers are not defined on the [0,1] chain")]
    ConvolutionOnChain,
    #[error("operation requires a {expected}, got a {got}")]
    WrongVariant { expected: SpaceKind, got: SpaceKind },
    #[error("malformed space literal `{0}`")]
    Malformed(String),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error("J(f) = [1, 1) is empty; every f in L^1 has 1 ∈ J(f)")]
    EmptyMembership,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpacePoint {
    Chain(EnrichedExponent),
    Square {
        local: EnrichedExponent,
        global: EnrichedExponent,
    },
    Amalgam {
        local: EnrichedExponent,
        global: EnrichedExponent,
    },
}

impl SpacePoint {
    pub fn chain(e: EnrichedExponent) -> Self {
        SpacePoint::Chain(e)
    }

    pub fn square(local: EnrichedExponent, global: EnrichedExponent) -> Self {
        SpacePoint::Square { local, global }
    }

    /// The diagonal point `L^(p,p) = L^p`.
    pub fn lp(p: EnrichedExponent) -> Self {
        SpacePoint::Square {
            local: p,
            global: p,
        }
    }

    pub fn amalgam(local: EnrichedExponent, global: EnrichedExponent) -> Self {
        SpacePoint::Amalgam { local, global }
    }

    pub fn kind(&self) -> SpaceKind {
        match self {
            SpacePoint::Chain(_) => SpaceKind::Chain,
            SpacePoint::Square { .. } => SpaceKind::Square,
            SpacePoint::Amalgam { .. } => SpaceKind::Amalgam,
        }
    }

    /// The local (first) exponent; for the chain, its only exponent.
    pub fn local(&self) -> EnrichedExponent {
        match *self {
            SpacePoint::Chain(e) => e,
            SpacePoint::Square { local, .. } | SpacePoint::Amalgam { local, .. } => local,
        }
    }

    pub fn global(&self) -> Option<EnrichedExponent> {
        match *self {
            SpacePoint::Chain(_) => None,
            SpacePoint::Square { global, .. } | SpacePoint::Amalgam { global, .. } => Some(global),
        }
    }

    fn coords(&self) -> impl Iterator<Item = EnrichedExponent> {
        std::iter::once(self.local()).chain(self.global())
    }

    /// True when a two-index point carries a `±` decoration, i.e. when results on it use
    /// the componentwise extension of the published rules.
    pub fn is_extension(&self) -> bool {
        !matches!(self, SpacePoint::Chain(_)) && self.coords().any(|e| !e.is_exact())
    }

    /// Interior points are reflexive. Undecorated boundary exponents (1 or ∞) are not,
    /// while `L^ω`, `L^{1+}` and friends are.
    pub fn is_reflexive(&self) -> bool {
        self.coords().all(|e| {
            let t = e.reciprocal();
            !(e.is_exact() && (t == 0.into() || t == 1.into()))
        })
    }

    /// On the bottom row `L^(s,∞)` (or `L^(s,ω)`) of the square.
    pub fn is_on_multiplier_chain(&self) -> bool {
        match self.global() {
            Some(g) => g.base.is_infinite(),
            None => true,
        }
    }
}

fn same_kind(a: &SpacePoint, b: &SpacePoint) -> Result<(), SpaceError> {
    if a.kind() == b.kind() {
        Ok(())
    } else {
        Err(SpaceError::VariantMismatch(a.kind(), b.kind()))
    }
}

/// Which top index the pointwise multiplier chain uses on the square.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MultiplierTop {
    /// `L^(p,∞) = L^p + L^∞`.
    #[default]
    Infinity,
    /// `L^(p,ω)`, excluding `L^∞`.
    Omega,
}

impl MultiplierTop {
    pub fn exponent(self) -> EnrichedExponent {
        match self {
            MultiplierTop::Infinity => EnrichedExponent::INFINITY,
            MultiplierTop::Omega => EnrichedExponent::OMEGA,
        }
    }
}

/// Lattice operations under a fixed multiplier configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SpaceLattice {
    pub top: MultiplierTop,
}

impl SpaceLattice {
    pub const fn new(top: MultiplierTop) -> Self {
        SpaceLattice { top }
    }

    pub fn omega() -> Self {
        SpaceLattice::new(MultiplierTop::Omega)
    }

    /// `a ⊆ b`. On the square: `p ≥ p'` and `q ≤ q'`.
    pub fn leq(&self, a: &SpacePoint, b: &SpacePoint) -> Result<bool, SpaceError> {
        same_kind(a, b)?;
        Ok(match (*a, *b) {
            (SpacePoint::Chain(x), SpacePoint::Chain(y)) => x <= y,
            _ => {
                let (ga, gb) = (a.global().unwrap(), b.global().unwrap());
                // p ≥ p' is t_p ≤ t_p'; q ≤ q' is t_q ≥ t_q'.
                a.local() <= b.local() && ga >= gb
            }
        })
    }

    /// `(p,q) ∧ (p',q') = (p ∨ p', q ∧ q')`; intersection on the chain.
    pub fn meet(&self, a: &SpacePoint, b: &SpacePoint) -> Result<SpacePoint, SpaceError> {
        same_kind(a, b)?;
        Ok(match (*a, *b) {
            (SpacePoint::Chain(x), SpacePoint::Chain(y)) => SpacePoint::Chain(p_max(x, y)),
            _ => rebuild(
                a,
                p_max(a.local(), b.local()),
                p_min(a.global().unwrap(), b.global().unwrap()),
            ),
        })
    }

    /// `(p,q) ∨ (p',q') = (p ∧ p', q ∨ q')`; union on the chain.
    pub fn join(&self, a: &SpacePoint, b: &SpacePoint) -> Result<SpacePoint, SpaceError> {
        same_kind(a, b)?;
        Ok(match (*a, *b) {
            (SpacePoint::Chain(x), SpacePoint::Chain(y)) => SpacePoint::Chain(p_min(x, y)),
            _ => rebuild(
                a,
                p_min(a.local(), b.local()),
                p_max(a.global().unwrap(), b.global().unwrap()),
            ),
        })
    }

    /// Componentwise duality, the point reflection through `(1/2, 1/2)`.
    pub fn dual(&self, a: &SpacePoint) -> SpacePoint {
        match *a {
            SpacePoint::Chain(e) => SpacePoint::Chain(e.dual()),
            _ => rebuild(a, a.local().dual(), a.global().unwrap().dual()),
        }
    }

    /// Space of pointwise multipliers.
    ///
    /// Off the bottom row: `M L^(p,q) = L^(p̄ ∧ q̄, top)`. On the bottom row the
    /// matching-pair rule `M L^(s,top) = L^(s̄,top)` applies, which makes `MM` and `MMM`
    /// behave as the closure pair they are. Amalgams: `M (L^p, ℓ^q) = (L^p̄, ℓ^∞)`.
    pub fn mult_multiplier(&self, a: &SpacePoint) -> SpacePoint {
        match *a {
            SpacePoint::Chain(e) => SpacePoint::Chain(e.dual()),
            SpacePoint::Square { local, global } => {
                let first = if global.base.is_infinite() {
                    local.dual()
                } else {
                    p_min(local.dual(), global.dual())
                };
                SpacePoint::square(first, self.top.exponent())
            }
            SpacePoint::Amalgam { local, .. } => {
                SpacePoint::amalgam(local.dual(), EnrichedExponent::INFINITY)
            }
        }
    }

    /// Space of convolution multipliers: `M_* L^(p,q) = L^(1, p̄ ∧ q̄)`, likewise for amalgams.
    pub fn conv_multiplier(&self, a: &SpacePoint) -> Result<SpacePoint, SpaceError> {
        match *a {
            SpacePoint::Chain(_) => Err(SpaceError::ConvolutionOnChain),
            _ => Ok(rebuild(
                a,
                EnrichedExponent::ONE,
                p_min(a.local().dual(), a.global().unwrap().dual()),
            )),
        }
    }

    /// Whether every element of `a` multiplies every element of `b`.
    ///
    /// Decided from the generating chain: some `s` with `a ⊆ L^(s,top)` and
    /// `b ⊆ L^(s̄,top)`. Symmetric by construction.
    pub fn is_multiplicable(&self, a: &SpacePoint, b: &SpacePoint) -> Result<bool, SpaceError> {
        same_kind(a, b)?;
        let fits_top = |x: &SpacePoint| match (x.kind(), x.global()) {
            (SpaceKind::Square, Some(g)) => g >= self.top.exponent(),
            (_, Some(g)) => g >= EnrichedExponent::INFINITY,
            (_, None) => true,
        };
        let ok = fits_top(a) && fits_top(b) && b.local() <= a.local().dual();
        if a.kind() == SpaceKind::Chain
            || a.is_on_multiplier_chain()
            || a.local() <= a.global().unwrap()
        {
            debug_assert_eq!(ok, self.leq(b, &self.mult_multiplier(a))?);
        }
        Ok(ok)
    }

    /// `M M a`, which for square points equals `L^(p ∨ q, top)`.
    pub fn iterated_multiplier(&self, a: &SpacePoint) -> Result<SpacePoint, SpaceError> {
        if a.kind() != SpaceKind::Square {
            return Err(SpaceError::WrongVariant {
                expected: SpaceKind::Square,
                got: a.kind(),
            });
        }
        Ok(self.mult_multiplier(&self.mult_multiplier(a)))
    }
}

fn rebuild(shape: &SpacePoint, local: EnrichedExponent, global: EnrichedExponent) -> SpacePoint {
    match shape {
        SpacePoint::Amalgam { .. } => SpacePoint::Amalgam { local, global },
        _ => SpacePoint::Square { local, global },
    }
}

const DEFAULT: SpaceLattice = SpaceLattice::new(MultiplierTop::Infinity);

pub fn space_leq(a: &SpacePoint, b: &SpacePoint) -> Result<bool, SpaceError> {
    DEFAULT.leq(a, b)
}

pub fn space_meet(a: &SpacePoint, b: &SpacePoint) -> Result<SpacePoint, SpaceError> {
    DEFAULT.meet(a, b)
}

pub fn space_join(a: &SpacePoint, b: &SpacePoint) -> Result<SpacePoint, SpaceError> {
    DEFAULT.join(a, b)
}

pub fn space_dual(a: &SpacePoint) -> SpacePoint {
    DEFAULT.dual(a)
}

pub fn mult_multiplier(a: &SpacePoint) -> SpacePoint {
    DEFAULT.mult_multiplier(a)
}

pub fn conv_multiplier(a: &SpacePoint) -> Result<SpacePoint, SpaceError> {
    DEFAULT.conv_multiplier(a)
}

pub fn is_multiplicable(a: &SpacePoint, b: &SpacePoint) -> Result<bool, SpaceError> {
    DEFAULT.is_multiplicable(a, b)
}

pub fn iterated_multiplier_check(a: &SpacePoint) -> Result<SpacePoint, SpaceError> {
    DEFAULT.iterated_multiplier(a)
}

/// `J(f) = {q ≥ 1 : f ∈ L^q}` for a function on `[0,1]`: `[1, p]` or `[1, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipInterval {
    pub sup_p: crate::exponent::Exponent,
    pub closed_at_sup: bool,
}

impl MembershipInterval {
    pub fn new(sup_p: crate::exponent::Exponent, closed_at_sup: bool) -> Result<Self, SpaceError> {
        if sup_p == crate::exponent::Exponent::ONE && !closed_at_sup {
            return Err(SpaceError::EmptyMembership);
        }
        Ok(MembershipInterval {
            sup_p,
            closed_at_sup,
        })
    }

    pub fn contains(&self, p: crate::exponent::Exponent) -> bool {
        // p ≤ sup_p  ⟺  t_p ≥ t_sup
        if self.closed_at_sup {
            p >= self.sup_p
        } else {
            p > self.sup_p
        }
    }
}

impl fmt::Display for MembershipInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let close = if self.closed_at_sup { ']' } else { ')' };
        write!(f, "[1, {}{}", self.sup_p, close)
    }
}

/// Multiplier space of a single function from its membership set:
/// `[1,p] ↦ L^p̄` and `[1,p) ↦ L^{p̄+}`.
pub fn element_multiplier(j: MembershipInterval) -> SpacePoint {
    let base = EnrichedExponent::exact(j.sup_p.conjugate());
    SpacePoint::Chain(if j.closed_at_sup { base } else { base.plus() })
}

impl fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpacePoint::Chain(e) => write!(f, "Lp({e})"),
            SpacePoint::Square { local, global } => write!(f, "L({local},{global})"),
            SpacePoint::Amalgam { local, global } => write!(f, "W({local},{global})"),
        }
    }
}

impl FromStr for SpacePoint {
    type Err = SpaceError;

    /// `Lp(3-)`, `L(3/2,omega)`, `W(3,5)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let malformed = || SpaceError::Malformed(s.to_string());
        let open = s.find('(').ok_or_else(malformed)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(malformed)?;
        let head = s[..open].trim();
        let args: Vec<&str> = inner.split(',').map(str::trim).collect();
        match (head, args.as_slice()) {
            ("Lp", [e]) => Ok(SpacePoint::Chain(e.parse()?)),
            ("L", [p, q]) => Ok(SpacePoint::square(p.parse()?, q.parse()?)),
            ("W", [p, q]) => Ok(SpacePoint::amalgam(p.parse()?, q.parse()?)),
            _ => Err(malformed()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceJson {
    variant: SpaceKind,
    local: EnrichedExponent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    global: Option<EnrichedExponent>,
}

impl Serialize for SpacePoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SpaceJson {
            variant: self.kind(),
            local: self.local(),
            global: self.global(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpacePoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = SpaceJson::deserialize(deserializer)?;
        match (j.variant, j.global) {
            (SpaceKind::Chain, None) => Ok(SpacePoint::Chain(j.local)),
            (SpaceKind::Chain, Some(_)) => Err(D::Error::custom("chain spaces take no global exponent")),
            (SpaceKind::Square, Some(g)) => Ok(SpacePoint::square(j.local, g)),
            (SpaceKind::Amalgam, Some(g)) => Ok(SpacePoint::amalgam(j.local, g)),
            (_, None) => Err(D::Error::custom("missing global exponent")),
        }
    }
}
