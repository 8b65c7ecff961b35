//! Galois connections of finite compatibility relations.
//!
//! A [`FiniteRelationAlgebra`] replaces the vector space of a partial *-algebra by a
//! finite carrier `{0..n}`; subspaces become subsets. For `S ⊆ carrier`
//!
//! * `L(S) = {x : (x,y) ∈ Γ for all y ∈ S}`
//! * `R(S) = {y : (x,y) ∈ Γ for all x ∈ S}`
//!
//! and `LR`, `RL` are closure operators whose closed sets form the lattices `F^L`, `F^R`.
//! Linearity and the values of products are not modeled.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard limit of the bitset representation.
pub const MAX_CARRIER: usize = 64;
/// Limit for closed-set enumeration.
pub const MAX_LATTICE_CARRIER: usize = 20;

/// Subset of a carrier of at most 64 elements.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet(pub u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_CARRIER);
        if n == 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(x: usize) -> Self {
        ElemSet(1 << x)
    }

    pub fn contains(self, x: usize) -> bool {
        x < 64 && self.0 >> x & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1 << x;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let x = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(x)
            }
        })
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for ElemSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ElemSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&x) = v.iter().find(|&&x| x >= MAX_CARRIER) {
            return Err(serde::de::Error::custom(format!("element {x} out of range")));
        }
        Ok(v.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("carrier of size {n} exceeds the limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error("carrier must be nonempty")]
    Empty,
    #[error("{what} has length {got}, expected {expected}")]
    Shape {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("element index {0} out of range")]
    OutOfRange(usize),
    #[error("involution is not involutive at {0}")]
    NotInvolutive(usize),
    #[error("({x},{y}) ∈ Γ but ({y}*,{x}*) ∉ Γ")]
    NotSymmetric { x: usize, y: usize },
    #[error("unit {0} is not self-adjoint")]
    UnitNotSelfAdjoint(usize),
    #[error("unit {unit} is not compatible with {x}")]
    UnitIncompatible { unit: usize, x: usize },
    #[error("gamma entries must be 0 or 1")]
    GammaEntry,
    #[error("{set} is not {side}-closed")]
    NotClosed { set: ElemSet, side: Side },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "LR",
            Side::R => "RL",
        })
    }
}

/// Finite carrier with involution, unit and compatibility relation `Γ`, optionally
/// carrying a topology for the tightness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRelationAlgebra {
    n: usize,
    involution: Vec<usize>,
    unit: usize,
    /// `row[x] = R({x}) = {y : (x,y) ∈ Γ}`
    row: Vec<ElemSet>,
    /// `col[y] = L({y}) = {x : (x,y) ∈ Γ}`
    col: Vec<ElemSet>,
    /// `x ∈ cl(D)` iff `approximants[x]` is nonempty and contained in `D`.
    approximants: Vec<ElemSet>,
}

impl FiniteRelationAlgebra {
    pub fn new(
        involution: Vec<usize>,
        unit: usize,
        gamma: &[Vec<bool>],
    ) -> Result<Self, GaloisError> {
        let n = involution.len();
        if n == 0 {
            return Err(GaloisError::Empty);
        }
        if n > MAX_CARRIER {
            return Err(GaloisError::TooLarge {
                n,
                max: MAX_CARRIER,
            });
        }
        if gamma.len() != n {
            return Err(GaloisError::Shape {
                what: "gamma",
                got: gamma.len(),
                expected: n,
            });
        }
        if let Some(r) = gamma.iter().find(|r| r.len() != n) {
            return Err(GaloisError::Shape {
                what: "gamma row",
                got: r.len(),
                expected: n,
            });
        }
        for (x, &xs) in involution.iter().enumerate() {
            if xs >= n {
                return Err(GaloisError::OutOfRange(xs));
            }
            if involution[xs] != x {
                return Err(GaloisError::NotInvolutive(x));
            }
        }
        if unit >= n {
            return Err(GaloisError::OutOfRange(unit));
        }
        if involution[unit] != unit {
            return Err(GaloisError::UnitNotSelfAdjoint(unit));
        }
        for x in 0..n {
            if !gamma[unit][x] || !gamma[x][unit] {
                return Err(GaloisError::UnitIncompatible { unit, x });
            }
            for y in 0..n {
                if gamma[x][y] && !gamma[involution[y]][involution[x]] {
                    return Err(GaloisError::NotSymmetric { x, y });
                }
            }
        }
        let row = (0..n)
            .map(|x| (0..n).filter(|&y| gamma[x][y]).collect())
            .collect();
        let col = (0..n)
            .map(|y| (0..n).filter(|&x| gamma[x][y]).collect())
            .collect();
        Ok(FiniteRelationAlgebra {
            n,
            involution,
            unit,
            row,
            col,
            approximants: vec![ElemSet::EMPTY; n],
        })
    }

    /// Attaches a topology: each element is a limit of any set containing its
    /// (nonempty) approximant set. Empty approximants mean the point is isolated.
    pub fn with_approximants(mut self, approximants: Vec<ElemSet>) -> Result<Self, GaloisError> {
        if approximants.len() != self.n {
            return Err(GaloisError::Shape {
                what: "approximants",
                got: approximants.len(),
                expected: self.n,
            });
        }
        if let Some(s) = approximants.iter().find(|s| !s.is_subset(self.carrier())) {
            return Err(GaloisError::OutOfRange(
                s.iter().max().unwrap_or_default(),
            ));
        }
        self.approximants = approximants;
        Ok(self)
    }

    /// `Γ = carrier × carrier`, identity involution, unit 0.
    pub fn total(n: usize) -> Result<Self, GaloisError> {
        FiniteRelationAlgebra::new((0..n).collect(), 0, &vec![vec![true; n]; n])
    }

    /// `(x,y) ∈ Γ` iff `x ∈ A₀` or `y ∈ A₀`; elements outside `A₀` are approximated by `A₀`.
    pub fn quasi_algebra(
        involution: Vec<usize>,
        a0: ElemSet,
        unit: usize,
    ) -> Result<Self, GaloisError> {
        let n = involution.len();
        let gamma: Vec<Vec<bool>> = (0..n)
            .map(|x| (0..n).map(|y| a0.contains(x) || a0.contains(y)).collect())
            .collect();
        let alg = FiniteRelationAlgebra::new(involution, unit, &gamma)?;
        let approx = (0..n)
            .map(|x| if a0.contains(x) { ElemSet::EMPTY } else { a0 })
            .collect();
        alg.with_approximants(approx)
    }

    /// A random valid algebra: a random involution fixing the unit 0, a Bernoulli
    /// relation of the given density made compatible with the involution.
    pub fn random<G: Rng + ?Sized>(n: usize, density: f64, rng: &mut G) -> Self {
        assert!((1..=MAX_CARRIER).contains(&n));
        let mut others: Vec<usize> = (1..n).collect();
        others.shuffle(rng);
        let mut involution: Vec<usize> = (0..n).collect();
        let mut rest = others.as_slice();
        while rest.len() >= 2 {
            if rng.gen_bool(0.5) {
                involution[rest[0]] = rest[1];
                involution[rest[1]] = rest[0];
                rest = &rest[2..];
            } else {
                rest = &rest[1..];
            }
        }
        let mut gamma = vec![vec![false; n]; n];
        for x in 0..n {
            for y in 0..n {
                if x == 0 || y == 0 || rng.gen_bool(density) {
                    gamma[x][y] = true;
                    gamma[involution[y]][involution[x]] = true;
                }
            }
        }
        FiniteRelationAlgebra::new(involution, 0, &gamma).expect("generator yields valid algebras")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    pub fn gamma(&self, x: usize, y: usize) -> bool {
        self.row[x].contains(y)
    }

    pub fn approximants(&self) -> &[ElemSet] {
        &self.approximants
    }

    /// `S* = {x* : x ∈ S}`.
    pub fn star(&self, s: ElemSet) -> ElemSet {
        s.iter().map(|x| self.involution[x]).collect()
    }

    pub fn left_mult(&self, s: ElemSet) -> ElemSet {
        s.iter()
            .fold(self.carrier(), |acc, y| acc.intersection(self.col[y]))
    }

    pub fn right_mult(&self, s: ElemSet) -> ElemSet {
        s.iter()
            .fold(self.carrier(), |acc, x| acc.intersection(self.row[x]))
    }

    pub fn mult(&self, side: Side, s: ElemSet) -> ElemSet {
        match side {
            Side::L => self.left_mult(s),
            Side::R => self.right_mult(s),
        }
    }

    /// `L(R(S))`.
    pub fn lr_closure(&self, s: ElemSet) -> ElemSet {
        self.left_mult(self.right_mult(s))
    }

    /// `R(L(S))`.
    pub fn rl_closure(&self, s: ElemSet) -> ElemSet {
        self.right_mult(self.left_mult(s))
    }

    pub fn closure(&self, side: Side, s: ElemSet) -> ElemSet {
        match side {
            Side::L => self.lr_closure(s),
            Side::R => self.rl_closure(s),
        }
    }

    /// `L𝔄`, the bottom of `F^L`.
    pub fn left_universal(&self) -> ElemSet {
        self.left_mult(self.carrier())
    }

    /// `R𝔄`, the bottom of `F^R`.
    pub fn right_universal(&self) -> ElemSet {
        self.right_mult(self.carrier())
    }

    /// Topological closure of `d`.
    pub fn topological_closure(&self, d: ElemSet) -> ElemSet {
        let mut cl = d;
        loop {
            let next = (0..self.n)
                .filter(|&x| {
                    cl.contains(x)
                        || (!self.approximants[x].is_empty() && self.approximants[x].is_subset(cl))
                })
                .collect();
            if next == cl {
                return cl;
            }
            cl = next;
        }
    }
}

/// JSON form `{"n", "involution", "unit", "gamma": [[0|1]], "approximants"?: [[int]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationJson {
    pub n: usize,
    pub involution: Vec<usize>,
    pub unit: usize,
    pub gamma: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approximants: Option<Vec<ElemSet>>,
}

impl TryFrom<RelationJson> for FiniteRelationAlgebra {
    type Error = GaloisError;

    fn try_from(j: RelationJson) -> Result<Self, Self::Error> {
        if j.involution.len() != j.n {
            return Err(GaloisError::Shape {
                what: "involution",
                got: j.involution.len(),
                expected: j.n,
            });
        }
        let gamma = j
            .gamma
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| match v {
                        0 => Ok(false),
                        1 => Ok(true),
                        _ => Err(GaloisError::GammaEntry),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let alg = FiniteRelationAlgebra::new(j.involution, j.unit, &gamma)?;
        match j.approximants {
            Some(a) => alg.with_approximants(a),
            None => Ok(alg),
        }
    }
}

impl From<&FiniteRelationAlgebra> for RelationJson {
    fn from(a: &FiniteRelationAlgebra) -> Self {
        RelationJson {
            n: a.n,
            involution: a.involution.clone(),
            unit: a.unit,
            gamma: (0..a.n)
                .map(|x| (0..a.n).map(|y| a.gamma(x, y) as u8).collect())
                .collect(),
            approximants: a
                .approximants
                .iter()
                .any(|s| !s.is_empty())
                .then(|| a.approximants.clone()),
        }
    }
}

/// All closed subsets on one side, sorted by size then bit pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFamily {
    pub side: Side,
    pub sets: Vec<ElemSet>,
}

impl ClosedFamily {
    pub fn top(&self) -> ElemSet {
        *self.sets.last().expect("closed families contain the carrier")
    }

    pub fn bottom(&self) -> ElemSet {
        self.sets[0]
    }

    pub fn contains(&self, s: ElemSet) -> bool {
        self.sets.binary_search_by(|probe| order_key(*probe).cmp(&order_key(s))).is_ok()
    }

    pub fn meet(&self, a: ElemSet, b: ElemSet) -> ElemSet {
        a.intersection(b)
    }

    pub fn join(&self, alg: &FiniteRelationAlgebra, a: ElemSet, b: ElemSet) -> ElemSet {
        alg.closure(self.side, a.union(b))
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// True when the family is totally ordered by inclusion.
    pub fn is_chain(&self) -> bool {
        self.sets.windows(2).all(|w| w[0].is_subset(w[1]))
    }
}

fn order_key(s: ElemSet) -> (usize, u64) {
    (s.len(), s.0)
}

fn family(side: Side, sets: impl IntoIterator<Item = ElemSet>) -> ClosedFamily {
    let mut sets: Vec<ElemSet> = sets.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    sets.sort_by_key(|&s| order_key(s));
    ClosedFamily { side, sets }
}

/// `F^L` or `F^R`: every closed set is an intersection of the generators
/// `L({y})` (resp. `R({x})`), so the family is the intersection-closure of those.
pub fn closed_lattice(a: &FiniteRelationAlgebra, side: Side) -> Result<ClosedFamily, GaloisError> {
    if a.n > MAX_LATTICE_CARRIER {
        return Err(GaloisError::TooLarge {
            n: a.n,
            max: MAX_LATTICE_CARRIER,
        });
    }
    let generators: Vec<ElemSet> = {
        let g = match side {
            Side::L => &a.col,
            Side::R => &a.row,
        };
        g.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    };
    let mut seen: HashSet<ElemSet> = HashSet::from([a.carrier()]);
    let mut frontier = vec![a.carrier()];
    while let Some(s) = frontier.pop() {
        for &g in &generators {
            let t = s.intersection(g);
            if seen.insert(t) {
                frontier.push(t);
            }
        }
    }
    Ok(family(side, seen))
}

/// The image of `L` (resp. `R`) over all `2ⁿ` subsets. Test oracle for [`closed_lattice`].
pub fn closed_lattice_power_set(a: &FiniteRelationAlgebra, side: Side) -> ClosedFamily {
    assert!(a.n <= MAX_LATTICE_CARRIER);
    family(
        side,
        (0..1u64 << a.n).map(|bits| a.mult(side, ElemSet(bits))),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem21Report {
    pub n: usize,
    pub left_lattice_size: usize,
    pub right_lattice_size: usize,
    pub checks: Vec<Check>,
}

impl Theorem21Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct CheckBuilder {
    name: &'static str,
    failure: Option<String>,
}

impl CheckBuilder {
    fn new(name: &'static str) -> Self {
        CheckBuilder {
            name,
            failure: None,
        }
    }

    fn require(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok && self.failure.is_none() {
            self.failure = Some(witness());
        }
    }

    fn finish(self) -> Check {
        Check {
            name: self.name.to_string(),
            pass: self.failure.is_none(),
            counterexample: self.failure,
        }
    }
}

/// Exhaustive check of the lattice structure: closure laws over every subset, the
/// anti-isomorphisms `L: F^R → F^L`, `R: F^L → F^R` over every pair of closed sets,
/// and the involution isomorphism `F^L ≅ F^R`.
pub fn verify_theorem21(a: &FiniteRelationAlgebra) -> Result<Theorem21Report, GaloisError> {
    let fl = closed_lattice(a, Side::L)?;
    let fr = closed_lattice(a, Side::R)?;
    let mut checks = Vec::new();

    let mut extensive = CheckBuilder::new("S ⊆ LR(S) and S ⊆ RL(S)");
    let mut lrl = CheckBuilder::new("LRL = L and RLR = R");
    let mut antitone = CheckBuilder::new("S ⊆ T implies L(T) ⊆ L(S)");
    let mut exchange = CheckBuilder::new("(L S)* = R(S*)");
    let subsets: Vec<ElemSet> = if a.n <= 12 {
        (0..1u64 << a.n).map(ElemSet).collect()
    } else {
        fl.sets.iter().chain(&fr.sets).copied().collect()
    };
    for &s in &subsets {
        extensive.require(s.is_subset(a.lr_closure(s)) && s.is_subset(a.rl_closure(s)), || {
            format!("S = {s}")
        });
        lrl.require(
            a.left_mult(a.rl_closure(s)) == a.left_mult(s)
                && a.right_mult(a.lr_closure(s)) == a.right_mult(s),
            || format!("S = {s}"),
        );
        exchange.require(a.star(a.left_mult(s)) == a.right_mult(a.star(s)), || {
            format!("S = {s}")
        });
        for x in 0..a.n {
            let t = s.union(ElemSet::singleton(x));
            antitone.require(
                a.left_mult(t).is_subset(a.left_mult(s)) && a.right_mult(t).is_subset(a.right_mult(s)),
                || format!("S = {s}, T = {t}"),
            );
        }
    }
    checks.extend([extensive.finish(), lrl.finish(), antitone.finish(), exchange.finish()]);

    let mut bounds = CheckBuilder::new("top is the carrier, bottoms are L𝔄 and R𝔄");
    bounds.require(
        fl.top() == a.carrier()
            && fr.top() == a.carrier()
            && fl.bottom() == a.left_universal()
            && fr.bottom() == a.right_universal(),
        || format!("F^L = [{}, {}], F^R = [{}, {}]", fl.bottom(), fl.top(), fr.bottom(), fr.top()),
    );
    checks.push(bounds.finish());

    for (side, fam, image) in [(Side::R, &fr, &fl), (Side::L, &fl, &fr)] {
        let map = |s| a.mult(side.other(), s);
        let (name_meet, name_join, name_bij) = match side {
            Side::R => (
                "L(M ∧ N) = LM ∨ LN on F^R",
                "L(M ∨ N) = LM ∧ LN on F^R",
                "L: F^R → F^L is a bijection with inverse R",
            ),
            Side::L => (
                "R(M ∧ N) = RM ∨ RN on F^L",
                "R(M ∨ N) = RM ∧ RN on F^L",
                "R: F^L → F^R is a bijection with inverse L",
            ),
        };
        let mut meet = CheckBuilder::new(name_meet);
        let mut join = CheckBuilder::new(name_join);
        for (i, &m) in fam.sets.iter().enumerate() {
            for &n in &fam.sets[i..] {
                let (lm, ln) = (map(m), map(n));
                meet.require(map(fam.meet(m, n)) == image.join(a, lm, ln), || {
                    format!("M = {m}, N = {n}")
                });
                join.require(map(fam.join(a, m, n)) == image.meet(lm, ln), || {
                    format!("M = {m}, N = {n}")
                });
            }
        }
        let mut bij = CheckBuilder::new(name_bij);
        let images: BTreeSet<ElemSet> = fam.sets.iter().map(|&m| map(m)).collect();
        bij.require(images.len() == fam.len() && images.len() == image.len(), || {
            format!("{} closed sets map onto {} of {}", fam.len(), images.len(), image.len())
        });
        for &m in &fam.sets {
            bij.require(image.contains(map(m)) && a.mult(side, map(m)) == m, || {
                format!("M = {m}")
            });
        }
        checks.extend([meet.finish(), join.finish(), bij.finish()]);
    }

    let mut iso = CheckBuilder::new("S ↦ S* is an order isomorphism F^L → F^R");
    let starred: BTreeSet<ElemSet> = fl.sets.iter().map(|&s| a.star(s)).collect();
    iso.require(starred == fr.sets.iter().copied().collect(), || {
        "image of F^L under * differs from F^R".to_string()
    });
    for &m in &fl.sets {
        for &n in &fl.sets {
            iso.require(m.is_subset(n) == a.star(m).is_subset(a.star(n)), || {
                format!("M = {m}, N = {n}")
            });
        }
    }
    checks.push(iso.finish());

    Ok(Theorem21Report {
        n: a.n,
        left_lattice_size: fl.len(),
        right_lattice_size: fr.len(),
        checks,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingPair {
    pub left: ElemSet,
    pub right: ElemSet,
}

/// `F^Γ = {(L M, M) : M ∈ F^R}`; each pair also satisfies `M = R(L M)`.
pub fn matching_pairs(a: &FiniteRelationAlgebra) -> Result<Vec<MatchingPair>, GaloisError> {
    let fr = closed_lattice(a, Side::R)?;
    Ok(fr
        .sets
        .iter()
        .map(|&m| MatchingPair {
            left: a.left_mult(m),
            right: m,
        })
        .collect())
}

/// `(x,y) ∈ Γ` iff some pair has `x ∈ N`, `y ∈ M`. Returned as rows.
pub fn reconstruct_gamma(n: usize, pairs: &[MatchingPair]) -> Vec<ElemSet> {
    let mut rows = vec![ElemSet::EMPTY; n];
    for p in pairs {
        for x in p.left.iter() {
            rows[x] = rows[x].union(p.right);
        }
    }
    rows
}

/// Whether the matching pairs reproduce `Γ` exactly.
pub fn reconstruction_holds(a: &FiniteRelationAlgebra, pairs: &[MatchingPair]) -> bool {
    reconstruct_gamma(a.n, pairs) == a.row
}

/// Generating family on `side`: contains the bottom (`R𝔄` resp. `L𝔄`) and the carrier, and
/// witnesses every compatible pair.
pub fn is_generating(
    a: &FiniteRelationAlgebra,
    fam: &[ElemSet],
    side: Side,
) -> Result<bool, GaloisError> {
    if let Some(&set) = fam.iter().find(|&&s| a.closure(side, s) != s) {
        return Err(GaloisError::NotClosed { set, side });
    }
    let bottom = a.mult(side, a.carrier());
    if !fam.contains(&bottom) || !fam.contains(&a.carrier()) {
        return Ok(false);
    }
    let pairs: Vec<MatchingPair> = fam
        .iter()
        .map(|&s| match side {
            Side::R => MatchingPair {
                left: a.left_mult(s),
                right: s,
            },
            Side::L => MatchingPair {
                left: s,
                right: a.right_mult(s),
            },
        })
        .collect();
    Ok(reconstruction_holds(a, &pairs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemberDensity {
    pub set: ElemSet,
    pub dense: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TightnessReport {
    pub right_universal: ElemSet,
    /// Per-member density of `R𝔄` for the supplied family.
    pub members: Vec<MemberDensity>,
    /// Every member of the supplied family is dense.
    pub family_dense: bool,
    /// Some generating family has `R𝔄` dense in each member.
    pub tight: bool,
    /// Closed sets in which `R𝔄` is dense.
    pub dense_closed_sets: Vec<ElemSet>,
}

/// Density of `R𝔄` in a closed set `M` means `M ⊆ cl(R𝔄)`; with the default discrete
/// topology this is `M = R𝔄`. The algebra is tight iff the dense members of `F^R`
/// form a generating family, since generation is monotone in the family.
pub fn tightness_check(
    a: &FiniteRelationAlgebra,
    fam: &[ElemSet],
) -> Result<TightnessReport, GaloisError> {
    if let Some(&set) = fam.iter().find(|&&s| a.rl_closure(s) != s) {
        return Err(GaloisError::NotClosed { set, side: Side::R });
    }
    let ra = a.right_universal();
    let cl = a.topological_closure(ra);
    let members: Vec<MemberDensity> = fam
        .iter()
        .map(|&set| MemberDensity {
            set,
            dense: set.is_subset(cl),
        })
        .collect();
    let fr = closed_lattice(a, Side::R)?;
    let dense_closed_sets: Vec<ElemSet> = fr.sets.iter().copied().filter(|s| s.is_subset(cl)).collect();
    Ok(TightnessReport {
        right_universal: ra,
        family_dense: members.iter().all(|m| m.dense),
        members,
        tight: is_generating(a, &dense_closed_sets, Side::R)?,
        dense_closed_sets,
    })
}
