//! Sampled functions on `[0,1]` or a window `[-T, T]` of ℝ.
//!
//! Every norm uses the same midpoint rule: sample `i` sits at the center of cell `i`,
//! cells have width `h = 1/resolution`, and `∫ |f|^p ≈ h Σ |f_i|^p`. Inequalities that
//! hold for integrals hold verbatim for these weighted sums, so the checks are exact
//! statements about the discrete model.

pub mod checks;
pub mod families;
pub mod norms;
pub mod powerlog;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponent::Exponent;

pub use checks::{
    check_amalgam_holder, check_banach_inequality, check_holder, check_young, dual_pairing_check, BanachPair, CheckReport,
};
pub use norms::{
    amalgam_norm, inductive_norm, lp_norm, one_infinity_norm, projective_norm, InductiveNorm,
    DEFAULT_INDUCTIVE_TOL,
};
pub use powerlog::{membership_set, refinement_converges, PowerLogFamily, RefinementVerdict};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("resolution must be at least 2, got {0}")]
    Resolution(usize),
    #[error("window half-width must be at least 1")]
    HalfWidth,
    #[error("expected {expected} samples, got {got}")]
    Length { expected: usize, got: usize },
    #[error("functions live on different grids")]
    GridMismatch,
    #[error("operation needs a function on a window of ℝ")]
    NeedsWindow,
    #[error("sample {index} at x = {x} lies outside the central half of the window")]
    Support { index: usize, x: f64 },
    #[error("1/p + 1/q = {0} < 1 has no Young exponent")]
    YoungExponents(f64),
    #[error("inductive norm needs two distinct exponents")]
    EqualExponents,
    #[error("unknown function family `{0}`")]
    Family(String),
    #[error("invalid parameter in `{0}`")]
    Parameter(String),
    #[error("{0} is not in L^1, so J(f) is empty")]
    NotIntegrable(String),
    #[error("no norm for {0} on this grid")]
    PairingSpace(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    UnitInterval,
    /// `[-T, T]` with integer `T`, so unit cells tile the window.
    RealWindow { half_width: u32 },
}

impl Domain {
    pub fn left(self) -> f64 {
        match self {
            Domain::UnitInterval => 0.0,
            Domain::RealWindow { half_width } => -(half_width as f64),
        }
    }

    pub fn length(self) -> usize {
        match self {
            Domain::UnitInterval => 1,
            Domain::RealWindow { half_width } => 2 * half_width as usize,
        }
    }
}

/// Complex samples at cell midpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    domain: Domain,
    resolution: usize,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(domain: Domain, resolution: usize, values: Vec<Complex64>) -> Result<Self, NumericsError> {
        if resolution < 2 {
            return Err(NumericsError::Resolution(resolution));
        }
        if domain == (Domain::RealWindow { half_width: 0 }) {
            return Err(NumericsError::HalfWidth);
        }
        let expected = domain.length() * resolution;
        if values.len() != expected {
            return Err(NumericsError::Length {
                expected,
                got: values.len(),
            });
        }
        Ok(GridFunction {
            domain,
            resolution,
            values,
        })
    }

    pub fn from_fn(
        domain: Domain,
        resolution: usize,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self, NumericsError> {
        let n = domain.length() * resolution;
        let h = 1.0 / resolution as f64;
        let left = domain.left();
        let values = (0..n).map(|i| f(left + (i as f64 + 0.5) * h)).collect();
        GridFunction::new(domain, resolution, values)
    }

    pub fn from_real_fn(
        domain: Domain,
        resolution: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self, NumericsError> {
        GridFunction::from_fn(domain, resolution, |x| Complex64::new(f(x), 0.0))
    }

    pub fn constant(domain: Domain, resolution: usize, c: f64) -> Result<Self, NumericsError> {
        GridFunction::from_real_fn(domain, resolution, |_| c)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn h(&self) -> f64 {
        1.0 / self.resolution as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.domain.left() + (i as f64 + 0.5) * self.h()
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn same_grid(&self, other: &GridFunction) -> Result<(), NumericsError> {
        if self.domain == other.domain && self.resolution == other.resolution {
            Ok(())
        } else {
            Err(NumericsError::GridMismatch)
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridFunction {
        GridFunction {
            values: self.values.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: f64) -> GridFunction {
        self.map(|v| v * c)
    }

    pub fn product(&self, other: &GridFunction) -> Result<GridFunction, NumericsError> {
        self.same_grid(other)?;
        Ok(GridFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
            ..self.clone()
        })
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction, NumericsError> {
        self.same_grid(other)?;
        Ok(GridFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    /// `h Σ f_i g_i`, the bilinear pairing `∫ f g`.
    pub fn pairing(&self, other: &GridFunction) -> Result<Complex64, NumericsError> {
        self.same_grid(other)?;
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        Ok(s * self.h())
    }

    /// Rejects samples outside `[-T/2, T/2]` that are not exactly zero.
    pub fn check_central_support(&self) -> Result<(), NumericsError> {
        let Domain::RealWindow { half_width } = self.domain else {
            return Err(NumericsError::NeedsWindow);
        };
        let bound = half_width as f64 / 2.0;
        match self
            .values
            .iter()
            .enumerate()
            .find(|(i, v)| self.point(*i).abs() > bound && **v != Complex64::new(0.0, 0.0))
        {
            Some((index, _)) => Err(NumericsError::Support {
                index,
                x: self.point(index),
            }),
            None => Ok(()),
        }
    }

    /// Linear convolution `(f∗g)_k = h Σ_j f_j g_{k+n/2-j}`, supported in the window when both
    /// factors sit in its central half. Output sample `k` lives at `x_k + h/2`; norms do not
    /// see the shift.
    pub fn convolve(&self, other: &GridFunction) -> Result<GridFunction, NumericsError> {
        self.same_grid(other)?;
        self.check_central_support()?;
        other.check_central_support()?;
        let n = self.len();
        let half = n / 2;
        let h = self.h();
        let f_nz: Vec<(usize, Complex64)> = self
            .values
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, v)| v.norm_sqr() > 0.0)
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, slot) in out.iter_mut().enumerate() {
            let s = k + half;
            let mut acc = Complex64::new(0.0, 0.0);
            for &(j, fj) in &f_nz {
                if j <= s && s - j < n {
                    acc += fj * other.values[s - j];
                }
            }
            *slot = acc * h;
        }
        Ok(GridFunction {
            values: out,
            ..self.clone()
        })
    }

    /// Samples of cell `(m, m+1)` of a window, `m = -T..T-1`.
    pub fn unit_cells(&self) -> Result<impl Iterator<Item = &[Complex64]>, NumericsError> {
        match self.domain {
            Domain::RealWindow { .. } => Ok(self.values.chunks(self.resolution)),
            Domain::UnitInterval => Err(NumericsError::NeedsWindow),
        }
    }

    /// Exponent-indexed shorthand for [`lp_norm`].
    pub fn norm(&self, e: Exponent) -> f64 {
        lp_norm(self, e)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SampleJson {
    Real(f64),
    Complex([f64; 2]),
}

/// JSON form `{"domain": "unit"|"window", "T"?: int, "resolution": int, "values": [...]}`;
/// values are reals or `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridFunctionJson {
    pub domain: String,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<u32>,
    pub resolution: usize,
    pub values: Vec<SampleJson>,
}

impl TryFrom<GridFunctionJson> for GridFunction {
    type Error = NumericsError;

    fn try_from(j: GridFunctionJson) -> Result<Self, Self::Error> {
        let domain = match (j.domain.as_str(), j.half_width) {
            ("unit", None) => Domain::UnitInterval,
            ("window", Some(t)) => Domain::RealWindow { half_width: t },
            _ => return Err(NumericsError::Parameter(format!("domain {}", j.domain))),
        };
        let values = j
            .values
            .into_iter()
            .map(|v| match v {
                SampleJson::Real(r) => Complex64::new(r, 0.0),
                SampleJson::Complex([re, im]) => Complex64::new(re, im),
            })
            .collect();
        GridFunction::new(domain, j.resolution, values)
    }
}
