//! The family `f(x) = x^{-α} (1 - ln x)^{-β}` on `(0,1]`, whose membership sets
//! `J(f) = {q ≥ 1 : f ∈ L^q}` realize both shapes `[1,p]` and `[1,p)`.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{Domain, GridFunction, NumericsError};
use crate::exponent::{Exponent, Rational};
use crate::space::MembershipInterval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PowerLogFamily {
    pub alpha: Rational,
    pub beta: Rational,
}

impl PowerLogFamily {
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self, NumericsError> {
        if alpha < Rational::zero() || beta < Rational::zero() {
            return Err(NumericsError::Parameter(format!("powerlog:alpha={alpha},beta={beta}")));
        }
        Ok(PowerLogFamily { alpha, beta })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = (to_f64(self.alpha), to_f64(self.beta));
        x.powf(-a) * (1.0 - x.ln()).powf(-b)
    }

    pub fn sample(&self, resolution: usize) -> Result<GridFunction, NumericsError> {
        GridFunction::from_real_fn(Domain::UnitInterval, resolution, |x| self.eval(x))
    }

    /// `f ∈ L^p` iff `αp < 1`, or `αp = 1` and `βp > 1`; `f ∈ L^∞` iff `α = 0`.
    pub fn in_lp(&self, e: Exponent) -> bool {
        match e.p_value() {
            None => self.alpha.is_zero(),
            Some(p) => {
                let s = self.alpha * p;
                s < Rational::one() || (s == Rational::one() && self.beta * p > Rational::one())
            }
        }
    }
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `J(f)` from the analytic rule: `sup J = 1/α`, attained iff `β/α > 1`.
pub fn membership_set(fam: PowerLogFamily) -> Result<MembershipInterval, NumericsError> {
    if fam.alpha.is_zero() {
        return Ok(MembershipInterval::new(Exponent::INFINITY, true).expect("[1,∞] is nonempty"));
    }
    let sup = Exponent::from_reciprocal(fam.alpha)
        .map_err(|_| NumericsError::NotIntegrable(format!("alpha = {}", fam.alpha)))?;
    let closed = fam.beta / fam.alpha > Rational::one();
    MembershipInterval::new(sup, closed)
        .map_err(|_| NumericsError::NotIntegrable(format!("alpha = 1, beta = {}", fam.beta)))
}

/// Numerical verdict from how `Σ h |f|^p` moves as the grid is refined.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinementVerdict {
    /// `log2` of each resolution.
    pub levels: Vec<u32>,
    pub sums: Vec<f64>,
    /// `|S_{m+1} - S_m|`.
    pub increments: Vec<f64>,
    /// Slope `b` of `ln δ_m ≈ a + b m`.
    pub geometric_rate: f64,
    /// Decay `γ` of `ln δ_m ≈ a - γ ln(1 + m ln 2)`.
    pub polynomial_decay: f64,
    pub model: &'static str,
    pub converges: bool,
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss = x.iter().zip(y).map(|(u, v)| (v - icpt - slope * u).powi(2)).sum();
    (icpt, slope, rss)
}

/// Classifies `∫₀¹ |f|^p < ∞` from midpoint sums at resolutions `2^lo ..= 2^hi`.
///
/// Increments decaying geometrically (`x^{-s}`, `s ≠ 1`) or polynomially in the level
/// (the `x^{-1} (1 - ln x)^{-γ}` boundary, where a level contributes about
/// `(1 + m ln 2)^{-γ}`) are fitted; the better fit decides.
pub fn refinement_converges(fam: PowerLogFamily, e: Exponent, lo: u32, hi: u32) -> RefinementVerdict {
    assert!(lo < hi && hi - lo >= 3, "need at least three increments");
    let p = e.to_f64();
    let levels: Vec<u32> = (lo..=hi).collect();
    let sums: Vec<f64> = levels
        .iter()
        .map(|&m| {
            let res = 1usize << m;
            let h = 1.0 / res as f64;
            if p.is_infinite() {
                (0..res).map(|i| fam.eval((i as f64 + 0.5) * h)).fold(0.0, f64::max)
            } else {
                h * (0..res).map(|i| fam.eval((i as f64 + 0.5) * h).powf(p)).sum::<f64>()
            }
        })
        .collect();
    let increments: Vec<f64> = sums.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let scale = sums.last().copied().unwrap_or(0.0).abs().max(1e-300);
    if increments.iter().all(|&d| d <= 1e-13 * scale) {
        return RefinementVerdict {
            levels,
            sums,
            increments,
            geometric_rate: f64::NEG_INFINITY,
            polynomial_decay: f64::INFINITY,
            model: "exact",
            converges: true,
        };
    }
    let ms: Vec<f64> = levels[..increments.len()].iter().map(|&m| m as f64).collect();
    let y: Vec<f64> = increments.iter().map(|d| d.max(1e-300).ln()).collect();
    let (_, b, rss_geo) = least_squares(&ms, &y);
    let logs: Vec<f64> = ms.iter().map(|m| (1.0 + m * std::f64::consts::LN_2).ln()).collect();
    let (_, slope, rss_poly) = least_squares(&logs, &y);
    let gamma = -slope;
    let (model, converges) = if rss_geo <= rss_poly {
        ("geometric", b < 0.0)
    } else {
        ("polynomial", gamma > 1.0)
    };
    RefinementVerdict {
        levels,
        sums,
        increments,
        geometric_rate: b,
        polynomial_decay: gamma,
        model,
        converges,
    }
}
