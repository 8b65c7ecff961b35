//! A truncated discrete scale of Hilbert spaces and the operators acting on it.
//!
//! `H_s` is `ℂ^N` with norm `(Σ h_k^{2s} |x_k|²)^{1/2}`, `s ∈ I = {-n..n}`. Since
//! `h_k ≥ 1`, a larger index gives a larger norm and hence a smaller space: the lattice
//! order on `I` used below is inclusion, `r ⪯ s` iff `H_r ⊆ H_s` iff `r ≥ s` as integers.
//! So the inclusion meet of two indices is their integer maximum.
//!
//! Every matrix is bounded between any two levels of a finite truncation. Boundedness is
//! therefore replaced by a norm cap: `A_{pq}: H_q → H_p` is a representative iff
//! `‖A‖_{q→p} ≤ cap`. With weights `h_1 = 1`, the diagonal comparison operators
//! `diag(h^α)` have norm exactly 1 wherever they are bounded in the limit, and grow like
//! `h_N^{α-(q-p)}` elsewhere.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois::{
    closed_lattice, tightness_check, Check, ElemSet, FiniteRelationAlgebra, GaloisError, Side, TightnessReport,
};

pub const OP_NORM_TOL: f64 = 1e-8;
pub const OP_NORM_MAX_ITER: usize = 20_000;
pub const DEFAULT_DIM: usize = 64;
pub const DEFAULT_CAP: f64 = 10.0;
/// Relative distance to the cap inside which a coherence violation is a plateau effect.
pub const PLATEAU_BAND: f64 = 0.01;
pub const ADJOINT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LhsError {
    #[error("half range must be positive")]
    HalfRange,
    #[error("dimension must be positive")]
    Dimension,
    #[error("weights must satisfy 1 ≤ h_1 < h_2 < …, with one weight per coordinate")]
    Weights,
    #[error("norm cap must be positive and finite, got {0}")]
    Cap(f64),
    #[error("matrix of dimension {got} on a scale of dimension {expected}")]
    MatrixShape { expected: usize, got: usize },
    #[error("index {index} outside {{-{n}..{n}}}")]
    Index { index: i32, n: i32 },
    #[error("J(A) not coherent at ({q},{p}) -> ({q2},{p2}): norm {norm} within 1% of cap {cap}; the cap sits on a norm plateau")]
    Plateau {
        q: i32,
        p: i32,
        q2: i32,
        p2: i32,
        norm: f64,
        cap: f64,
    },
    #[error("J(A) not coherent at ({q},{p}) -> ({q2},{p2})")]
    Incoherent { q: i32, p: i32, q2: i32, p2: i32 },
    #[error("operator description: {0}")]
    Description(String),
    #[error(transparent)]
    Galois(#[from] GaloisError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Named(String),
    Explicit(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct HilbertScale {
    n: i32,
    weights: Vec<f64>,
    cap: f64,
}

impl HilbertScale {
    pub fn new(n: i32, weights: Vec<f64>, cap: f64) -> Result<Self, LhsError> {
        if n < 1 {
            return Err(LhsError::HalfRange);
        }
        if weights.is_empty() {
            return Err(LhsError::Dimension);
        }
        if !(weights[0] >= 1.0 && weights.windows(2).all(|w| w[0] < w[1]) && weights.iter().all(|h| h.is_finite())) {
            return Err(LhsError::Weights);
        }
        if !(cap > 0.0 && cap.is_finite()) {
            return Err(LhsError::Cap(cap));
        }
        Ok(HilbertScale { n, weights, cap })
    }

    /// `h_k = k`, `k = 1..dim`.
    pub fn linear(n: i32, dim: usize) -> Result<Self, LhsError> {
        HilbertScale::new(n, (1..=dim).map(|k| k as f64).collect(), DEFAULT_CAP)
    }

    pub fn quadratic(n: i32, dim: usize) -> Result<Self, LhsError> {
        HilbertScale::new(n, (1..=dim).map(|k| (k * k) as f64).collect(), DEFAULT_CAP)
    }

    /// `h_k = e^k`.
    pub fn exponential(n: i32, dim: usize) -> Result<Self, LhsError> {
        HilbertScale::new(n, (1..=dim).map(|k| (k as f64).exp()).collect(), DEFAULT_CAP)
    }

    pub fn with_cap(self, cap: f64) -> Result<Self, LhsError> {
        HilbertScale::new(self.n, self.weights, cap)
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn indices(&self) -> impl Iterator<Item = i32> + Clone {
        -self.n..=self.n
    }

    pub fn contains(&self, s: i32) -> bool {
        (-self.n..=self.n).contains(&s)
    }

    fn check_index(&self, s: i32) -> Result<(), LhsError> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(LhsError::Index { index: s, n: self.n })
        }
    }

    pub fn norm(&self, x: &[Complex64], s: i32) -> f64 {
        self.weights
            .iter()
            .zip(x)
            .map(|(h, v)| h.powi(2 * s) * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Index order of the scale: `r ⪯ s` iff `H_r ⊆ H_s`.
pub fn index_leq(r: i32, s: i32) -> bool {
    r >= s
}

/// `H_r ∩ H_s = H_{r ∧ s}`.
pub fn index_meet(r: i32, s: i32) -> i32 {
    r.max(s)
}

/// `H_r + H_s = H_{r ∨ s}`.
pub fn index_join(r: i32, s: i32) -> i32 {
    r.min(s)
}

pub fn index_dual(s: i32) -> i32 {
    -s
}

/// Square matrix, row-major, with a declared growth order.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleOperator {
    dim: usize,
    matrix: Vec<Complex64>,
    pub order: i32,
}

impl ScaleOperator {
    pub fn new(dim: usize, matrix: Vec<Complex64>, order: i32) -> Result<Self, LhsError> {
        if dim == 0 {
            return Err(LhsError::Dimension);
        }
        if matrix.len() != dim * dim {
            return Err(LhsError::Description(format!(
                "matrix has {} entries, expected {}",
                matrix.len(),
                dim * dim
            )));
        }
        Ok(ScaleOperator { dim, matrix, order })
    }

    pub fn diagonal(diag: &[Complex64], order: i32) -> Result<Self, LhsError> {
        let dim = diag.len();
        let mut m = vec![Complex64::default(); dim * dim];
        for (k, &d) in diag.iter().enumerate() {
            m[k * dim + k] = d;
        }
        ScaleOperator::new(dim, m, order)
    }

    pub fn identity(dim: usize) -> Result<Self, LhsError> {
        ScaleOperator::diagonal(&vec![Complex64::new(1.0, 0.0); dim], 0)
    }

    /// `diag(h^α)`, the power `H^α` of the generating operator.
    pub fn weight_power(scale: &HilbertScale, alpha: i32) -> Self {
        let d: Vec<Complex64> = scale.weights.iter().map(|h| Complex64::new(h.powi(alpha), 0.0)).collect();
        ScaleOperator::diagonal(&d, alpha).expect("scale dimension is positive")
    }

    /// `A[i][i+k] = 1`: `k > 0` shifts coordinates down, `k < 0` up.
    pub fn shift(dim: usize, k: i64) -> Result<Self, LhsError> {
        let mut m = vec![Complex64::default(); dim * dim];
        for i in 0..dim as i64 {
            let j = i + k;
            if (0..dim as i64).contains(&j) {
                m[i as usize * dim + j as usize] = Complex64::new(1.0, 0.0);
            }
        }
        ScaleOperator::new(dim, m, 0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[i * self.dim + j]
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn conjugate_transpose(&self) -> ScaleOperator {
        let n = self.dim;
        let mut m = vec![Complex64::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                m[j * n + i] = self.matrix[i * n + j].conj();
            }
        }
        ScaleOperator {
            dim: n,
            matrix: m,
            order: self.order,
        }
    }

    pub fn matmul(&self, other: &ScaleOperator) -> Result<ScaleOperator, LhsError> {
        if self.dim != other.dim {
            return Err(LhsError::MatrixShape {
                expected: self.dim,
                got: other.dim,
            });
        }
        let n = self.dim;
        let mut m = vec![Complex64::default(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.matrix[i * n + k];
                if a == Complex64::default() {
                    continue;
                }
                for j in 0..n {
                    m[i * n + j] += a * other.matrix[k * n + j];
                }
            }
        }
        Ok(ScaleOperator {
            dim: n,
            matrix: m,
            order: self.order + other.order,
        })
    }

    fn check_scale(&self, scale: &HilbertScale) -> Result<(), LhsError> {
        if self.dim == scale.dim() {
            Ok(())
        } else {
            Err(LhsError::MatrixShape {
                expected: scale.dim(),
                got: self.dim,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OpNorm {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `‖A‖_{q→p}`: the largest singular value of `diag(h^p) A diag(h^{-q})`, by power
/// iteration on `M*M`. Iteration stops once the extrapolated distance to the limit,
/// from the contraction ratio of successive increments, is below `OP_NORM_TOL`.
pub fn op_norm(scale: &HilbertScale, a: &ScaleOperator, q: i32, p: i32) -> Result<OpNorm, LhsError> {
    a.check_scale(scale)?;
    scale.check_index(q)?;
    scale.check_index(p)?;
    let n = a.dim;
    let hp: Vec<f64> = scale.weights.iter().map(|h| h.powi(p)).collect();
    let hq: Vec<f64> = scale.weights.iter().map(|h| h.powi(-q)).collect();
    let m: Vec<Complex64> = (0..n * n).map(|ij| a.matrix[ij] * hp[ij / n] * hq[ij % n]).collect();
    Ok(power_iteration(&m, n))
}

fn power_iteration(m: &[Complex64], n: usize) -> OpNorm {
    // generic start, nonorthogonal to every coordinate direction
    let mut v: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(1.0 + 0.5 * (1.7 * k as f64).sin(), 0.3 * (0.9 * k as f64).cos()))
        .collect();
    normalize(&mut v);
    let mut w = vec![Complex64::default(); n];
    let (mut prev, mut prev_step) = (0.0f64, f64::NAN);
    let mut best = 0.0f64;
    for it in 1..=OP_NORM_MAX_ITER {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = m[i * n..(i + 1) * n].iter().zip(&v).map(|(a, x)| a * x).sum();
        }
        let est = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        best = best.max(est);
        if est == 0.0 {
            // v ∈ ker M; M = 0 unless v was unlucky, so restart from a coordinate with mass
            match (0..n).find(|&j| (0..n).any(|i| m[i * n + j] != Complex64::default())) {
                None => {
                    return OpNorm {
                        value: 0.0,
                        iterations: it,
                        converged: true,
                    }
                }
                Some(j) => {
                    v.iter_mut().for_each(|x| *x = Complex64::default());
                    v[j] = Complex64::new(1.0, 0.0);
                    continue;
                }
            }
        }
        for (j, vj) in v.iter_mut().enumerate() {
            *vj = (0..n).map(|i| m[i * n + j].conj() * w[i]).sum();
        }
        normalize(&mut v);
        let step = est - prev;
        let ratio = step / prev_step;
        let remaining = if ratio.is_finite() && (0.0..1.0).contains(&ratio) {
            step.abs() * ratio / (1.0 - ratio)
        } else {
            step.abs()
        };
        if it > 2 && step.abs() <= OP_NORM_TOL * est && remaining <= OP_NORM_TOL * est {
            return OpNorm {
                value: best,
                iterations: it,
                converged: true,
            };
        }
        prev_step = step;
        prev = est;
    }
    OpNorm {
        value: best,
        iterations: OP_NORM_MAX_ITER,
        converged: false,
    }
}

fn normalize(v: &mut [Complex64]) {
    let s = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if s > 0.0 {
        v.iter_mut().for_each(|z| *z /= s);
    }
}

/// All `(q→p)` norms of an operator on the scale, `norms[q+n][p+n]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormTable {
    pub n: i32,
    pub norms: Vec<Vec<f64>>,
    pub all_converged: bool,
}

impl NormTable {
    pub fn compute(scale: &HilbertScale, a: &ScaleOperator) -> Result<Self, LhsError> {
        let mut all_converged = true;
        let mut norms = Vec::new();
        for q in scale.indices() {
            let mut row = Vec::new();
            for p in scale.indices() {
                let r = op_norm(scale, a, q, p)?;
                all_converged &= r.converged;
                row.push(r.value);
            }
            norms.push(row);
        }
        Ok(NormTable {
            n: scale.n,
            norms,
            all_converged,
        })
    }

    pub fn get(&self, q: i32, p: i32) -> f64 {
        self.norms[(q + self.n) as usize][(p + self.n) as usize]
    }
}

/// `J(A)` with its projections. `D(A)` is upward closed and `I(A)` downward closed as
/// integer sets, i.e. initial resp. final in the inclusion order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexSets {
    pub domain: BTreeSet<i32>,
    pub image: BTreeSet<i32>,
    /// Pairs `(q, p)` with `A_{pq}: H_q → H_p` a representative.
    pub pairs: BTreeSet<(i32, i32)>,
}

impl IndexSets {
    /// Inclusion-join of `D(A)`, the largest domain space.
    pub fn q_max(&self) -> Option<i32> {
        self.domain.iter().next().copied()
    }

    /// Inclusion-meet of `I(A)`, the smallest target space.
    pub fn p_min(&self) -> Option<i32> {
        self.image.iter().next_back().copied()
    }
}

pub fn index_sets(scale: &HilbertScale, a: &ScaleOperator) -> Result<IndexSets, LhsError> {
    index_sets_from(scale, &NormTable::compute(scale, a)?)
}

pub fn index_sets_from(scale: &HilbertScale, table: &NormTable) -> Result<IndexSets, LhsError> {
    let cap = scale.cap;
    let pairs: BTreeSet<(i32, i32)> = scale
        .indices()
        .flat_map(|q| scale.indices().map(move |p| (q, p)))
        .filter(|&(q, p)| table.get(q, p) <= cap)
        .collect();
    for &(q, p) in &pairs {
        // shrinking the source or enlarging the target keeps a map bounded
        for q2 in q..=scale.n {
            for p2 in -scale.n..=p {
                if !pairs.contains(&(q2, p2)) {
                    let norm = table.get(q2, p2);
                    if (norm - cap).abs() <= PLATEAU_BAND * cap || (table.get(q, p) - cap).abs() <= PLATEAU_BAND * cap {
                        return Err(LhsError::Plateau {
                            q,
                            p,
                            q2,
                            p2,
                            norm,
                            cap,
                        });
                    }
                    return Err(LhsError::Incoherent { q, p, q2, p2 });
                }
            }
        }
    }
    Ok(IndexSets {
        domain: pairs.iter().map(|&(q, _)| q).collect(),
        image: pairs.iter().map(|&(_, p)| p).collect(),
        pairs,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Adjoint {
    pub op: ScaleOperator,
    /// Largest relative gap between `‖A‖_{r→s}` and `‖A*‖_{s̄→r̄}`.
    pub max_relative_gap: f64,
    /// `J(A*) = {(s̄, r̄) : (r,s) ∈ J(A)}`.
    pub mirrored: bool,
}

pub fn adjoint(scale: &HilbertScale, a: &ScaleOperator) -> Result<Adjoint, LhsError> {
    let star = a.conjugate_transpose();
    let ta = NormTable::compute(scale, a)?;
    let ts = NormTable::compute(scale, &star)?;
    let mut gap = 0.0f64;
    for r in scale.indices() {
        for s in scale.indices() {
            let (x, y) = (ta.get(r, s), ts.get(-s, -r));
            let scale_ = x.max(y);
            if scale_ > 0.0 {
                gap = gap.max((x - y).abs() / scale_);
            }
        }
    }
    let ja = index_sets_from(scale, &ta)?;
    let js = index_sets_from(scale, &ts)?;
    let mirror: BTreeSet<(i32, i32)> = ja.pairs.iter().map(|&(r, s)| (-s, -r)).collect();
    Ok(Adjoint {
        op: star,
        max_relative_gap: gap,
        mirrored: mirror == js.pairs,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Composition {
    /// `AB` with the levels `q ∈ I(B) ∩ D(A)` through which it factors.
    Defined { product: ScaleOperator, via: BTreeSet<i32> },
    Undefined,
}

impl Composition {
    pub fn is_defined(&self) -> bool {
        matches!(self, Composition::Defined { .. })
    }
}

/// `AB` exists iff some `q ∈ I(B) ∩ D(A)`, giving `(AB)_{sr} = A_{sq} B_{qr}`.
pub fn partial_compose(scale: &HilbertScale, a: &ScaleOperator, b: &ScaleOperator) -> Result<Composition, LhsError> {
    let (ia, ib) = (index_sets(scale, a)?, index_sets(scale, b)?);
    compose_from(a, b, &ia, &ib)
}

pub fn compose_from(
    a: &ScaleOperator,
    b: &ScaleOperator,
    ia: &IndexSets,
    ib: &IndexSets,
) -> Result<Composition, LhsError> {
    let via: BTreeSet<i32> = ib.image.intersection(&ia.domain).copied().collect();
    if via.is_empty() {
        Ok(Composition::Undefined)
    } else {
        Ok(Composition::Defined {
            product: a.matmul(b)?,
            via,
        })
    }
}

/// Lattice checks of `L_s = {C : s ∈ D(C)}`, `R_s = {B : s ∈ I(B)}` over a sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplierSets {
    pub s: i32,
    /// Sample positions in `L_s`.
    pub left: Vec<usize>,
    /// Sample positions in `R_s`.
    pub right: Vec<usize>,
    pub checks: Vec<Check>,
}

impl MultiplierSets {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn check(name: &str, failure: Option<String>) -> Check {
    Check {
        name: name.to_string(),
        pass: failure.is_none(),
        counterexample: failure,
    }
}

pub fn multiplier_sets(scale: &HilbertScale, ops: &[ScaleOperator], s: i32) -> Result<MultiplierSets, LhsError> {
    scale.check_index(s)?;
    let sets = ops.iter().map(|a| index_sets(scale, a)).collect::<Result<Vec<_>, _>>()?;
    Ok(multiplier_sets_from(scale, &sets, s))
}

pub fn multiplier_sets_from(scale: &HilbertScale, sets: &[IndexSets], s: i32) -> MultiplierSets {
    let l = |t: i32| -> BTreeSet<usize> { (0..sets.len()).filter(|&i| sets[i].domain.contains(&t)).collect() };
    let r = |t: i32| -> BTreeSet<usize> { (0..sets.len()).filter(|&i| sets[i].image.contains(&t)).collect() };
    let pairs: Vec<(i32, i32)> = scale.indices().flat_map(|p| scale.indices().map(move |q| (p, q))).collect();

    let left_meet = pairs
        .iter()
        .find(|&&(p, q)| l(p).intersection(&l(q)).copied().collect::<BTreeSet<_>>() != l(index_join(p, q)))
        .map(|(p, q)| format!("p={p} q={q}"));
    let right_meet = pairs
        .iter()
        .find(|&&(p, q)| r(p).intersection(&r(q)).copied().collect::<BTreeSet<_>>() != r(index_meet(p, q)))
        .map(|(p, q)| format!("p={p} q={q}"));
    let monotone = pairs
        .iter()
        .find(|&&(q, q2)| index_leq(q, q2) && !r(q).is_subset(&r(q2)))
        .map(|(q, q2)| format!("q={q} q'={q2}"));

    let composable = |x: &IndexSets, y: &IndexSets| y.image.intersection(&x.domain).next().is_some();
    let left_of = (0..sets.len()).find_map(|a| {
        let p_min = sets[a].p_min()?;
        let la: BTreeSet<usize> = (0..sets.len()).filter(|&c| composable(&sets[c], &sets[a])).collect();
        (la != l(p_min)).then(|| format!("operator {a}"))
    });
    let right_of = (0..sets.len()).find_map(|a| {
        let q_max = sets[a].q_max()?;
        let ra: BTreeSet<usize> = (0..sets.len()).filter(|&b| composable(&sets[a], &sets[b])).collect();
        (ra != r(q_max)).then(|| format!("operator {a}"))
    });

    MultiplierSets {
        s,
        left: l(s).into_iter().collect(),
        right: r(s).into_iter().collect(),
        checks: vec![
            check("L_p ∧ L_q = L_{p∨q}", left_meet),
            check("R_p ∧ R_q = R_{p∧q}", right_meet),
            check("q ⪯ q' ⟹ R_q ⊆ R_q'", monotone),
            check("L(A) = L_{p_min}", left_of),
            check("R(A) = R_{q_max}", right_of),
        ],
    }
}

/// Degrees `{0..n}` with `Γ(i,j)` iff `i + j ≤ n`, identity involution and unit 0: the
/// polynomials of degree ≤ n under the partial product that keeps the degree in range.
pub fn polynomial_counterexample(n: usize) -> Result<FiniteRelationAlgebra, GaloisError> {
    let size = n + 1;
    let gamma: Vec<Vec<bool>> = (0..size).map(|i| (0..size).map(|j| i + j <= n).collect()).collect();
    FiniteRelationAlgebra::new((0..size).collect(), 0, &gamma)
}

/// `P_j = {0..j}`.
pub fn degrees_up_to(j: usize) -> ElemSet {
    (0..=j).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub n: usize,
    /// `F^R`, ordered by size.
    pub chain: Vec<ElemSet>,
    pub is_chain: bool,
    /// `M(P_j) = P_{n-j}` for every `j`.
    pub multipliers_match: bool,
    pub tightness: TightnessReport,
}

pub fn counterexample_report(n: usize) -> Result<CounterexampleReport, GaloisError> {
    let a = polynomial_counterexample(n)?;
    let fr = closed_lattice(&a, Side::R)?;
    let mut chain = fr.sets.clone();
    chain.sort_by_key(|s| (s.len(), s.0));
    let multipliers_match = (0..=n).all(|j| a.right_mult(degrees_up_to(j)) == degrees_up_to(n - j));
    let tightness = tightness_check(&a, &chain)?;
    Ok(CounterexampleReport {
        n,
        is_chain: fr.is_chain(),
        chain,
        multipliers_match,
        tightness,
    })
}

/// The three-level scale `H_1 ⊂ H_0 ⊂ H_{-1}`.
pub fn triplet_configuration() -> HilbertScale {
    HilbertScale::linear(1, DEFAULT_DIM).expect("valid defaults")
}

/// Position of an operator in the triplet picture: the whole algebra is `B(H_1, H_{-1})`,
/// `R𝔄 = B(H_1)`, `L𝔄 = B(H_{-1})`, and `𝔄₀` holds `A` with `A, A* ∈ B(H_1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TripletMembership {
    pub in_algebra: bool,
    pub in_right_universal: bool,
    pub in_left_universal: bool,
    pub in_core: bool,
}

pub fn triplet_membership(scale: &HilbertScale, a: &ScaleOperator) -> Result<TripletMembership, LhsError> {
    let bounded = |op: &ScaleOperator, q: i32, p: i32| -> Result<bool, LhsError> {
        Ok(op_norm(scale, op, q, p)?.value <= scale.cap)
    };
    let in_right = bounded(a, 1, 1)?;
    Ok(TripletMembership {
        in_algebra: bounded(a, 1, -1)?,
        in_right_universal: in_right,
        in_left_universal: bounded(a, -1, -1)?,
        in_core: in_right && bounded(&a.conjugate_transpose(), 1, 1)?,
    })
}

/// `{n, dim, weights: "linear"|"quadratic"|"exponential"|[..], cap}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleConfig {
    pub n: i32,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub weights: Option<WeightSpec>,
    #[serde(default)]
    pub cap: Option<f64>,
}

impl ScaleConfig {
    pub fn build(&self) -> Result<HilbertScale, LhsError> {
        let dim = self.dim.unwrap_or(DEFAULT_DIM);
        let scale = match &self.weights {
            None => HilbertScale::linear(self.n, dim)?,
            Some(WeightSpec::Named(name)) => match name.as_str() {
                "linear" => HilbertScale::linear(self.n, dim)?,
                "quadratic" => HilbertScale::quadratic(self.n, dim)?,
                "exponential" | "exp" => HilbertScale::exponential(self.n, dim)?,
                other => return Err(LhsError::Description(format!("unknown weights {other:?}"))),
            },
            Some(WeightSpec::Explicit(h)) => {
                if self.dim.is_some_and(|d| d != h.len()) {
                    return Err(LhsError::Weights);
                }
                HilbertScale::new(self.n, h.clone(), DEFAULT_CAP)?
            }
        };
        scale.with_cap(self.cap.unwrap_or(DEFAULT_CAP))
    }
}

/// `{dim, order, matrix: [[re,im],…] | diagonal: [..] | power: α | shift: k}`; the
/// matrix is row-major, `power` is `diag(h^α)` on the target scale.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorJson {
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub order: Option<i32>,
    #[serde(default)]
    pub matrix: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub diagonal: Option<Vec<f64>>,
    #[serde(default)]
    pub power: Option<i32>,
    #[serde(default)]
    pub shift: Option<i64>,
}

impl OperatorJson {
    pub fn build(&self, scale: &HilbertScale) -> Result<ScaleOperator, LhsError> {
        let dim = self.dim.unwrap_or(scale.dim());
        let given = [
            self.matrix.is_some(),
            self.diagonal.is_some(),
            self.power.is_some(),
            self.shift.is_some(),
        ];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(LhsError::Description(
                "exactly one of matrix, diagonal, power, shift is required".into(),
            ));
        }
        let op = if let Some(m) = &self.matrix {
            let entries = m.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
            ScaleOperator::new(dim, entries, self.order.unwrap_or(0))?
        } else if let Some(d) = &self.diagonal {
            let d: Vec<Complex64> = d.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            ScaleOperator::diagonal(&d, self.order.unwrap_or(0))?
        } else if let Some(alpha) = self.power {
            let mut op = ScaleOperator::weight_power(scale, alpha);
            op.order = self.order.unwrap_or(alpha);
            op
        } else {
            let mut op = ScaleOperator::shift(dim, self.shift.unwrap_or_default())?;
            op.order = self.order.unwrap_or(0);
            op
        };
        op.check_scale(scale)?;
        Ok(op)
    }
}

impl fmt::Display for IndexSets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<i32>| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "D(A) = {{{}}}, I(A) = {{{}}}", list(&self.domain), list(&self.image))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(xs: impl IntoIterator<Item = i32>) -> BTreeSet<i32> {
        xs.into_iter().collect()
    }

    fn random_op(dim: usize, rng: &mut ChaCha8Rng) -> ScaleOperator {
        let m = (0..dim * dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ScaleOperator::new(dim, m, 0).unwrap()
    }

    /// Closed form for diagonal weight powers: `max_k h_k^{α+p-q}`.
    fn diag_norm(scale: &HilbertScale, alpha: i32, q: i32, p: i32) -> f64 {
        let e = alpha + p - q;
        scale.weights().iter().map(|h| h.powi(e)).fold(0.0, f64::max)
    }

    #[test]
    fn op_norm_diagonal_examples() {
        let s = HilbertScale::linear(2, 64).unwrap();
        let id = ScaleOperator::identity(64).unwrap();
        for q in -2..=2 {
            for p in -2..=q {
                assert!((op_norm(&s, &id, q, p).unwrap().value - 1.0).abs() < 1e-8);
            }
        }
        let h = ScaleOperator::weight_power(&s, 1);
        for q in -1..=2 {
            assert!((op_norm(&s, &h, q, q - 1).unwrap().value - 1.0).abs() < 1e-12);
        }
        let h2 = ScaleOperator::weight_power(&s, 2);
        let r = op_norm(&s, &h2, 1, 0).unwrap();
        assert!(r.converged && (r.value - 64.0).abs() < 64.0 * 1e-8);
        for alpha in -2..=2 {
            let op = ScaleOperator::weight_power(&s, alpha);
            for q in -2..=2 {
                for p in -2..=2 {
                    let want = diag_norm(&s, alpha, q, p);
                    let got = op_norm(&s, &op, q, p).unwrap();
                    assert!((got.value - want).abs() <= 1e-7 * want, "{alpha} {q} {p}");
                }
            }
        }
    }

    #[test]
    fn op_norm_rejects_bad_input() {
        let s = HilbertScale::linear(2, 8).unwrap();
        let id = ScaleOperator::identity(8).unwrap();
        assert!(matches!(op_norm(&s, &id, 3, 0), Err(LhsError::Index { index: 3, .. })));
        let other = ScaleOperator::identity(4).unwrap();
        assert!(matches!(op_norm(&s, &other, 0, 0), Err(LhsError::MatrixShape { .. })));
        let zero = ScaleOperator::new(8, vec![Complex64::default(); 64], 0).unwrap();
        assert_eq!(op_norm(&s, &zero, 0, 0).unwrap().value, 0.0);
        assert!(HilbertScale::new(1, vec![1.0, 1.0], 1.0).is_err());
        assert!(HilbertScale::new(1, vec![0.5, 1.0], 1.0).is_err());
        assert!(HilbertScale::new(0, vec![1.0], 1.0).is_err());
    }

    #[test]
    fn index_set_examples() {
        let s = HilbertScale::linear(2, 64).unwrap().with_cap(1.5).unwrap();
        let h = ScaleOperator::weight_power(&s, 1);
        let js = index_sets(&s, &h).unwrap();
        assert_eq!(js.domain, set(-1..=2));
        assert_eq!(js.image, set(-2..=1));
        let want: BTreeSet<(i32, i32)> = (-2..=2)
            .flat_map(|q| (-2..=2).map(move |p| (q, p)))
            .filter(|&(q, p)| p < q)
            .collect();
        assert_eq!(js.pairs, want);
        assert_eq!(js.to_string(), "D(A) = {-1,0,1,2}, I(A) = {-2,-1,0,1}");

        let id = index_sets(&s, &ScaleOperator::identity(64).unwrap()).unwrap();
        assert_eq!(id.domain, set(-2..=2));
        assert_eq!(id.image, set(-2..=2));

        let wide = ScaleOperator::weight_power(&s, 5);
        let js = index_sets(&s, &wide).unwrap();
        assert!(js.domain.is_empty() && js.image.is_empty());
    }

    #[test]
    fn plateau_is_reported() {
        // identity norms sit exactly on a cap of 1; a rounding-level inflation of one
        // entry flips a single pair out of J(A)
        let s = HilbertScale::linear(1, 4).unwrap().with_cap(1.0).unwrap();
        let mut t = NormTable::compute(&s, &ScaleOperator::identity(4).unwrap()).unwrap();
        t.norms[2][0] = 1.0 + 1e-15;
        assert!(matches!(index_sets_from(&s, &t), Err(LhsError::Plateau { .. })));
        let s = s.with_cap(2.0).unwrap();
        t.norms[2][0] = 5.0;
        assert!(matches!(index_sets_from(&s, &t), Err(LhsError::Incoherent { .. })));
    }

    #[test]
    fn adjoint_examples() {
        let s = HilbertScale::linear(2, 16).unwrap();
        let h = ScaleOperator::weight_power(&s, 1);
        let adj = adjoint(&s, &h).unwrap();
        assert_eq!(adj.op, h);
        assert!(adj.mirrored && adj.max_relative_gap < ADJOINT_TOL);

        let shift = ScaleOperator::shift(16, 1).unwrap();
        let weighted = ScaleOperator::weight_power(&s, 1).matmul(&shift).unwrap();
        let adj = adjoint(&s, &weighted).unwrap();
        assert!(adj.mirrored && adj.max_relative_gap < ADJOINT_TOL);
        assert_eq!(adj.op.conjugate_transpose(), weighted);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let a = random_op(16, &mut rng);
            let adj = adjoint(&s, &a).unwrap();
            assert!(adj.max_relative_gap < ADJOINT_TOL, "{}", adj.max_relative_gap);
        }
    }

    #[test]
    fn composition_examples() {
        let s = HilbertScale::linear(2, 64).unwrap().with_cap(1.5).unwrap();
        let h = ScaleOperator::weight_power(&s, 1);
        match partial_compose(&s, &h, &h).unwrap() {
            Composition::Defined { product, via } => {
                assert_eq!(via, set(-1..=1));
                assert_eq!(product, ScaleOperator::weight_power(&s, 2));
                assert_eq!(product.order, 2);
            }
            Composition::Undefined => panic!("H·H is defined"),
        }
        let h3 = ScaleOperator::weight_power(&s, 3);
        assert_eq!(partial_compose(&s, &h3, &h3).unwrap(), Composition::Undefined);
        let wider = HilbertScale::linear(3, 64).unwrap().with_cap(1.5).unwrap();
        assert!(partial_compose(&wider, &h3, &h3).unwrap().is_defined());

        let id = ScaleOperator::identity(64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_op(64, &mut rng);
        match partial_compose(&s, &id, &a).unwrap() {
            Composition::Defined { product, .. } => assert_eq!(product, a),
            Composition::Undefined => panic!("unit composes with everything"),
        }
    }

    #[test]
    fn multiplier_examples() {
        let s = HilbertScale::linear(2, 64).unwrap().with_cap(1.5).unwrap();
        let id = ScaleOperator::identity(64).unwrap();
        for t in -2..=2 {
            let m = multiplier_sets(&s, std::slice::from_ref(&id), t).unwrap();
            assert_eq!((m.left.as_slice(), m.right.as_slice()), (&[0][..], &[0][..]));
            assert!(m.pass());
        }
        let ops: Vec<ScaleOperator> = (0..=2).map(|a| ScaleOperator::weight_power(&s, a)).collect();
        for t in -2..=2 {
            let m = multiplier_sets(&s, &ops, t).unwrap();
            assert!(m.pass(), "{m:?}");
            let want_left: Vec<usize> = (0..=2).filter(|&a| t - a as i32 >= -2).collect();
            let want_right: Vec<usize> = (0..=2).filter(|&a| t + a as i32 <= 2).collect();
            assert_eq!(m.left, want_left);
            assert_eq!(m.right, want_right);
        }
    }

    #[test]
    fn polynomial_chain() {
        let r = counterexample_report(3).unwrap();
        assert!(r.is_chain && r.multipliers_match && !r.tightness.tight);
        assert_eq!(r.chain, (0..=3).map(degrees_up_to).collect::<Vec<_>>());
        let a = polynomial_counterexample(3).unwrap();
        assert_eq!(a.right_mult(ElemSet::singleton(2)), degrees_up_to(1));
        assert_eq!(a.right_universal(), ElemSet::singleton(0));
        let one = counterexample_report(1).unwrap();
        assert_eq!(one.chain.len(), 2);
        assert!(!one.tightness.tight);
    }

    #[test]
    fn triplet_examples() {
        let s = triplet_configuration();
        assert_eq!(s.indices().collect::<Vec<_>>(), vec![-1, 0, 1]);
        let id = triplet_membership(&s, &ScaleOperator::identity(64).unwrap()).unwrap();
        assert!(id.in_algebra && id.in_right_universal && id.in_left_universal && id.in_core);
        let h = triplet_membership(&s, &ScaleOperator::weight_power(&s, 1)).unwrap();
        assert!(h.in_algebra && !h.in_right_universal && !h.in_left_universal);
        // |e_N⟩⟨e_1|: bounded on H_{-1} only
        let mut m = vec![Complex64::default(); 64 * 64];
        m[63 * 64] = Complex64::new(1.0, 0.0);
        let rank_one = ScaleOperator::new(64, m, 0).unwrap();
        let r = triplet_membership(&s, &rank_one).unwrap();
        assert!(r.in_left_universal && !r.in_right_universal && !r.in_core);
        let inv = triplet_membership(&s, &ScaleOperator::weight_power(&s, -1)).unwrap();
        assert!(inv.in_core);
    }

    #[test]
    fn config_json() {
        let cfg: ScaleConfig = serde_json::from_str(r#"{"n":2,"dim":8,"weights":"quadratic","cap":3}"#).unwrap();
        let s = cfg.build().unwrap();
        assert_eq!(s.weights()[2], 9.0);
        assert_eq!(s.cap(), 3.0);
        let s2 = ScaleConfig {
            n: 1,
            dim: None,
            weights: Some(WeightSpec::Explicit(vec![1.0, 2.0, 4.0])),
            cap: None,
        }
        .build()
        .unwrap();
        assert_eq!(s2.dim(), 3);
        let op: OperatorJson = serde_json::from_str(r#"{"power":1}"#).unwrap();
        assert_eq!(op.build(&s).unwrap(), ScaleOperator::weight_power(&s, 1));
        let op: OperatorJson = serde_json::from_str(r#"{"dim":2,"matrix":[[1,0],[0,1],[0,0],[2,0]]}"#).unwrap();
        let s2 = HilbertScale::linear(1, 2).unwrap();
        assert_eq!(op.build(&s2).unwrap().entry(0, 1), Complex64::new(0.0, 1.0));
        let bad: OperatorJson = serde_json::from_str(r#"{"power":1,"shift":1}"#).unwrap();
        assert!(bad.build(&s).is_err());
        assert!(serde_json::from_str::<OperatorJson>(r#"{"sparse":1}"#).is_err());
    }
}
