//! Inequality checks. Each report carries both sides, so a pass is auditable.

use num_traits::{One, Zero};
use serde::Serialize;

use super::norms::{amalgam_norm, inductive_norm, lp_norm, one_infinity_norm, projective_norm, DEFAULT_INDUCTIVE_TOL};
use super::{Domain, GridFunction, NumericsError};
use crate::exponent::{EnrichedExponent, Exponent, Rational};
use crate::space::{mult_multiplier, space_dual, SpacePoint};

/// Multiplicative slack for identities that are exact up to summation rounding.
pub const HOLDER_SLACK: f64 = 1e-12;
/// Slack where convolution sums accumulate rounding.
pub const CONVOLUTION_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, lhs: f64, rhs: f64, slack: f64) -> Self {
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        CheckReport {
            check: check.into(),
            lhs,
            rhs,
            ratio,
            pass: lhs.is_finite() && lhs <= rhs * (1.0 + slack),
        }
    }
}

/// `‖fg‖₁ ≤ ‖f‖_p ‖g‖_p̄`.
pub fn check_holder(f: &GridFunction, g: &GridFunction, e: Exponent) -> Result<CheckReport, NumericsError> {
    let fg = f.product(g)?;
    Ok(CheckReport::new(
        format!("holder p={e}"),
        lp_norm(&fg, Exponent::ONE),
        lp_norm(f, e) * lp_norm(g, e.conjugate()),
        HOLDER_SLACK,
    ))
}

/// `1/r = 1/p + 1/q - 1`, when nonnegative.
pub fn young_exponent(ep: Exponent, eq: Exponent) -> Result<Exponent, NumericsError> {
    let t = ep.reciprocal() + eq.reciprocal() - Rational::one();
    if t < Rational::zero() {
        return Err(NumericsError::YoungExponents(
            ep.reciprocal().to_f64() + eq.reciprocal().to_f64(),
        ));
    }
    Ok(Exponent::from_reciprocal(t).expect("t ≤ 1 since both reciprocals are ≤ 1"))
}

trait RationalF64 {
    fn to_f64(&self) -> f64;
}

impl RationalF64 for Rational {
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

/// `‖f∗g‖_r ≤ ‖f‖_p ‖g‖_q` for factors supported in the central half of the window.
pub fn check_young(f: &GridFunction, g: &GridFunction, ep: Exponent, eq: Exponent) -> Result<CheckReport, NumericsError> {
    let r = young_exponent(ep, eq)?;
    let conv = f.convolve(g)?;
    Ok(CheckReport::new(
        format!("young p={ep} q={eq} r={r}"),
        lp_norm(&conv, r),
        lp_norm(f, ep) * lp_norm(g, eq),
        CONVOLUTION_SLACK,
    ))
}

/// `‖fg‖₁ ≤ ‖f‖_{p,q} ‖g‖_{p̄,q̄}` for amalgam norms.
pub fn check_amalgam_holder(
    f: &GridFunction,
    g: &GridFunction,
    ep: Exponent,
    eq: Exponent,
) -> Result<CheckReport, NumericsError> {
    let fg = f.product(g)?;
    Ok(CheckReport::new(
        format!("amalgam holder p={ep} q={eq}"),
        lp_norm(&fg, Exponent::ONE),
        amalgam_norm(f, ep, eq)? * amalgam_norm(g, ep.conjugate(), eq.conjugate())?,
        HOLDER_SLACK,
    ))
}

fn exact(e: EnrichedExponent, space: &SpacePoint) -> Result<Exponent, NumericsError> {
    if e.is_exact() {
        Ok(e.base)
    } else {
        Err(NumericsError::PairingSpace(space.to_string()))
    }
}

/// Norm of `f` in a concrete space: `L^p` on `[0,1]` for chain points; on a window,
/// `‖·‖_p` on the diagonal, the projective norm on `L^p ∩ L^q` (`p > q`), the inductive
/// norm on `L^p + L^q` (`p < q`), and the amalgam norm for `W(p,q)`.
pub fn space_norm(f: &GridFunction, space: &SpacePoint) -> Result<f64, NumericsError> {
    let window = matches!(f.domain(), Domain::RealWindow { .. });
    match *space {
        SpacePoint::Chain(e) if !window => Ok(lp_norm(f, exact(e, space)?)),
        SpacePoint::Square { local, global } if window => {
            let (p, q) = (exact(local, space)?, exact(global, space)?);
            if p == q {
                Ok(lp_norm(f, p))
            } else if p < q {
                // t_p < t_q, i.e. p > q: intersection
                Ok(projective_norm(f, p, q))
            } else if p == Exponent::ONE && q == Exponent::INFINITY {
                Ok(one_infinity_norm(f))
            } else {
                Ok(inductive_norm(f, p, q, DEFAULT_INDUCTIVE_TOL)?.value)
            }
        }
        SpacePoint::Amalgam { local, global } if window => {
            amalgam_norm(f, exact(local, space)?, exact(global, space)?)
        }
        _ => Err(NumericsError::PairingSpace(space.to_string())),
    }
}

/// `|⟨f, g⟩| ≤ ‖f‖_X ‖g‖_{X'}` with `X' = space_dual(X)`: the functional `x ↦ ∫ g x`
/// is bounded on `X` by the dual norm of `g`.
pub fn dual_pairing_check(f: &GridFunction, g: &GridFunction, space: &SpacePoint) -> Result<CheckReport, NumericsError> {
    let dual = space_dual(space);
    Ok(CheckReport::new(
        format!("pairing {space} x {dual}"),
        f.pairing(g)?.norm(),
        space_norm(f, space)? * space_norm(g, &dual)?,
        CONVOLUTION_SLACK,
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BanachPair {
    /// Element of the multiplier space of `b`'s space.
    pub a: GridFunction,
    pub b: GridFunction,
}

/// `‖ab‖ ≤ ‖a‖_{MX} ‖b‖_X` for `X = L^s` on `[0,1]` (Hölder) or `X = L^(s,∞)` on ℝ, where
/// `MX = L^(s̄,∞)` and products land in `L^(1,∞)`. The constant is one: `‖u‖_{1∨∞}` is
/// the largest integral of `|u|` over a set of measure one, hence below every `‖u‖_r`.
pub fn check_banach_inequality(pairs: &[BanachPair], space: &SpacePoint) -> Result<Vec<CheckReport>, NumericsError> {
    let mult = mult_multiplier(space);
    let product_space = match space {
        SpacePoint::Chain(_) => SpacePoint::Chain(EnrichedExponent::ONE),
        SpacePoint::Square { global, .. } if global.base.is_infinite() && global.is_exact() => {
            SpacePoint::square(EnrichedExponent::ONE, EnrichedExponent::INFINITY)
        }
        _ => return Err(NumericsError::PairingSpace(space.to_string())),
    };
    pairs
        .iter()
        .map(|pair| {
            let ab = pair.a.product(&pair.b)?;
            Ok(CheckReport::new(
                format!("banach {mult} x {space}"),
                space_norm(&ab, &product_space)?,
                space_norm(&pair.a, &mult)? * space_norm(&pair.b, space)?,
                HOLDER_SLACK,
            ))
        })
        .collect()
}
