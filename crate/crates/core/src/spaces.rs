//! Finite metric spaces, candidate distances κ and their axiom checkers.
//!
//! # Finite-space semantics
//!
//! On a finite space a sequence converges iff it is eventually constant. Two
//! consequences shape the checkers here:
//!
//! - (τ2) only ever constrains eventually constant sequences, where it is
//!   trivially true, so it passes unconditionally.
//! - (τ3) reduces to a condition on zero entries: it fails iff there are
//!   `a != b` with `κ(a,a) = 0` and `κ(a,b) = 0` (take `x_n = a`, `y_n = b`).
//!   The converse direction is a pigeonhole argument on the tail of a
//!   counterexample. [`sequence_oracle_tau3`] searches sequences directly
//!   and is kept independent of this reduction so the two can be compared.
//!
//! The `ρ` in the statement of (τ3) is read as the ambient metric `d`.
//!
//! Every nonempty subset of a finite space is closed and bounded, so the
//! families of nonempty, closed and closed-bounded subsets coincide and are
//! all represented by [`FiniteSubset`].
//!
//! # Numeric contract
//!
//! Comparisons are exact (`<=`, `==` on `f64`, no epsilon). Generated values
//! are multiples of `2⁻⁶` bounded by `2¹⁰`, so every sum formed by the
//! checkers is exact.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::report::{Rule, Verdict, Witness};
use crate::{Error, Result, SquareMatrix};

/// A point of a space together with its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointId {
    pub index: usize,
    pub label: String,
}

/// Nonempty set of point indices, kept sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<usize>", into = "Vec<usize>"))]
pub struct FiniteSubset {
    members: Vec<usize>,
}

impl FiniteSubset {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Self { members })
    }

    /// Like [`FiniteSubset::new`], also checking every index is below `len`.
    pub fn within(len: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set = Self::new(members)?;
        set.check_within(len)?;
        Ok(set)
    }

    pub fn singleton(x: usize) -> Self {
        Self {
            members: alloc::vec![x],
        }
    }

    /// All points `0..len`.
    pub fn full(len: usize) -> Result<Self> {
        Self::new(0..len)
    }

    /// The set whose members are the bits of `mask`.
    pub fn from_mask(mask: u64) -> Result<Self> {
        Self::new((0..64).filter(|b| mask >> b & 1 == 1))
    }

    pub fn check_within(&self, len: usize) -> Result<()> {
        match self.members.last() {
            Some(&index) if index >= len => Err(Error::PointOutOfRange { index, len }),
            _ => Ok(()),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &FiniteSubset) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    pub fn insert(&mut self, x: usize) -> bool {
        match self.members.binary_search(&x) {
            Ok(_) => false,
            Err(pos) => {
                self.members.insert(pos, x);
                true
            }
        }
    }

    /// Removes `x` unless it is the last member.
    pub fn remove(&mut self, x: usize) -> bool {
        if self.members.len() == 1 {
            return false;
        }
        match self.members.binary_search(&x) {
            Ok(pos) => {
                self.members.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn union(&self, other: &FiniteSubset) -> FiniteSubset {
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        FiniteSubset::new(members).expect("union of nonempty sets is nonempty")
    }
}

impl TryFrom<Vec<usize>> for FiniteSubset {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        FiniteSubset::new(v)
    }
}

impl From<FiniteSubset> for Vec<usize> {
    fn from(s: FiniteSubset) -> Self {
        s.members
    }
}

/// Labeled point set with a validated metric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    d: SquareMatrix,
}

impl FiniteMetricSpace {
    /// Validates labels and the metric axioms; a failing axiom is reported
    /// through [`Error::NotAMetric`].
    pub fn new(labels: Vec<String>, d: SquareMatrix) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptySet);
        }
        if labels.len() != d.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: d.len(),
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::Malformed(alloc::format!(
                    "duplicate label {label:?}"
                )));
            }
        }
        if let Verdict::Fail(w) = validate_metric(&d)? {
            return Err(Error::NotAMetric(alloc::format!(
                "{:?} violated at {:?} with values {:?}",
                w.rule,
                w.points,
                w.values
            )));
        }
        Ok(Self { labels, d })
    }

    /// Space with labels `p0, p1, …`.
    pub fn with_default_labels(d: SquareMatrix) -> Result<Self> {
        let labels = default_labels(d.len());
        Self::new(labels, d)
    }

    /// Points on a line at the given coordinates, `d = |·−·|`.
    pub fn on_line(coords: &[f64]) -> Result<Self> {
        let d = SquareMatrix::from_fn(coords.len(), |i, j| {
            if coords[i] >= coords[j] {
                coords[i] - coords[j]
            } else {
                coords[j] - coords[i]
            }
        });
        Self::with_default_labels(d)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.d.get(i, j)
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.d
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn point(&self, index: usize) -> PointId {
        PointId {
            index,
            label: self.labels[index].clone(),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The metric viewed as a candidate distance.
    pub fn as_distance(&self) -> DistanceFunction {
        DistanceFunction {
            kappa: self.d.clone(),
        }
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| alloc::format!("p{i}")).collect()
}

/// A candidate `κ : X × X → [0,∞)` stored as a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceFunction {
    kappa: SquareMatrix,
}

impl DistanceFunction {
    pub fn new(kappa: SquareMatrix) -> Result<Self> {
        for i in 0..kappa.len() {
            for j in 0..kappa.len() {
                let v = kappa.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Malformed(alloc::format!(
                        "kappa({i},{j}) = {v} is not a finite nonnegative number"
                    )));
                }
            }
        }
        Ok(Self { kappa })
    }

    pub fn for_space(space: &FiniteMetricSpace, kappa: SquareMatrix) -> Result<Self> {
        if kappa.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: kappa.len(),
            });
        }
        Self::new(kappa)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.kappa.get(x, y)
    }

    pub fn len(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa.is_empty()
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.kappa
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.kappa
    }
}

/// Keys of an [`AxiomReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Axiom {
    Metric,
    Tau1,
    Tau2,
    Tau3,
    Tau4,
    Tau4prime,
    ZeroDiagonal,
    IsEDistance,
    IsE0Distance,
    IsTauFunction,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AxiomReport {
    pub verdicts: BTreeMap<Axiom, Verdict>,
}

impl AxiomReport {
    pub fn get(&self, axiom: Axiom) -> Option<&Verdict> {
        self.verdicts.get(&axiom)
    }

    pub fn passes(&self, axiom: Axiom) -> bool {
        self.get(axiom).is_some_and(Verdict::is_pass)
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.values().all(Verdict::is_pass)
    }

    pub fn failed(&self) -> impl Iterator<Item = Axiom> + '_ {
        self.verdicts
            .iter()
            .filter(|(_, v)| v.is_fail())
            .map(|(a, _)| *a)
    }

    pub fn insert(&mut self, axiom: Axiom, verdict: Verdict) {
        self.verdicts.insert(axiom, verdict);
    }

    pub fn extend(&mut self, other: AxiomReport) {
        self.verdicts.extend(other.verdicts);
    }
}

/// Checks the metric axioms. Pairs are scanned first (sign, diagonal,
/// positivity, symmetry), then triples for the triangle inequality, each in
/// lexicographic order; the first violation is the witness.
pub fn validate_metric(d: &SquareMatrix) -> Result<Verdict> {
    let n = d.len();
    for i in 0..n {
        for j in 0..n {
            let v = d.get(i, j);
            if !v.is_finite() {
                return Err(Error::Malformed(alloc::format!(
                    "entry ({i},{j}) is not finite"
                )));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let v = d.get(i, j);
            if v < 0.0 {
                return Ok(Verdict::Fail(Witness::new(Rule::Nonnegative, [i, j], [v])));
            }
            if i == j && v != 0.0 {
                return Ok(Verdict::Fail(Witness::new(Rule::ZeroDiagonal, [i], [v])));
            }
            if i != j && v <= 0.0 {
                return Ok(Verdict::Fail(Witness::new(Rule::Positivity, [i, j], [v])));
            }
            if v != d.get(j, i) {
                return Ok(Verdict::Fail(Witness::new(
                    Rule::Symmetry,
                    [i, j],
                    [v, d.get(j, i)],
                )));
            }
        }
    }
    Ok(first_triangle_violation(d, Rule::Triangle))
}

fn first_triangle_violation(m: &SquareMatrix, rule: Rule) -> Verdict {
    let n = m.len();
    for i in 0..n {
        for j in 0..n {
            let ij = m.get(i, j);
            for k in 0..n {
                let (ik, jk) = (m.get(i, k), m.get(j, k));
                if ik > ij + jk {
                    return Verdict::Fail(Witness::new(rule, [i, j, k], [ik, ij, jk]));
                }
            }
        }
    }
    Verdict::Pass
}

/// (τ1): `κ(x,z) <= κ(x,y) + κ(y,z)` for every ordered triple.
pub fn check_tau1(kappa: &DistanceFunction) -> Verdict {
    first_triangle_violation(kappa.matrix(), Rule::Tau1)
}

pub fn check_zero_diagonal(kappa: &DistanceFunction) -> Verdict {
    (0..kappa.len())
        .find(|&x| kappa.get(x, x) != 0.0)
        .map_or(Verdict::Pass, |x| {
            Verdict::Fail(Witness::new(Rule::ZeroDiagonal, [x], [kappa.get(x, x)]))
        })
}

/// Verdicts for (τ2), (τ3), (τ4) and (τ4)′ under finite-space semantics.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroStructure {
    pub tau2: Verdict,
    pub tau3: Verdict,
    pub tau4: Verdict,
    pub tau4prime: Verdict,
}

pub fn check_zero_structure(kappa: &DistanceFunction) -> ZeroStructure {
    let n = kappa.len();
    let zero = |x: usize, y: usize| kappa.get(x, y) == 0.0;

    let mut tau3 = Verdict::Pass;
    'tau3: for a in 0..n {
        if !zero(a, a) {
            continue;
        }
        for b in 0..n {
            if b != a && zero(a, b) {
                tau3 = Verdict::Fail(Witness::new(
                    Rule::Tau3,
                    [a, b],
                    [kappa.get(a, a), kappa.get(a, b)],
                ));
                break 'tau3;
            }
        }
    }

    let first_split = |x: usize, rule: Rule| -> Option<Witness> {
        let mut zeros = (0..n).filter(|&y| zero(x, y));
        let y = zeros.next()?;
        let z = zeros.next()?;
        Some(Witness::new(
            rule,
            [x, y, z],
            [kappa.get(x, y), kappa.get(x, z)],
        ))
    };

    let tau4 = (0..n)
        .find_map(|x| first_split(x, Rule::Tau4))
        .map_or(Verdict::Pass, Verdict::Fail);
    let tau4prime = (0..n)
        .filter(|&x| zero(x, x))
        .find_map(|x| first_split(x, Rule::Tau4Prime))
        .map_or(Verdict::Pass, Verdict::Fail);

    ZeroStructure {
        tau2: Verdict::Pass,
        tau3,
        tau4,
        tau4prime,
    }
}

/// Result of the brute-force (τ3) sequence search.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum OracleVerdict {
    /// No counterexample among templates with cycles up to this length.
    PassAtDepth(usize),
    /// Periodic sequences `x_n = x_cycle[n mod |x_cycle|]` and likewise for
    /// `y` violating (τ3).
    Fail {
        x_cycle: Vec<usize>,
        y_cycle: Vec<usize>,
    },
}

impl OracleVerdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, OracleVerdict::Fail { .. })
    }
}

/// Searches pairs of eventually periodic sequences for a (τ3)
/// counterexample, evaluating the three limits directly on the sequences.
///
/// Templates have preperiod zero and primitive cycles of length at most
/// `depth`. A preperiod changes none of the three limits; its only effect on
/// a pair is to shift the relative phase of the two tails, and every phase
/// is already produced by some rotation of the `y` cycle.
pub fn sequence_oracle_tau3(
    space: &FiniteMetricSpace,
    kappa: &DistanceFunction,
    depth: usize,
) -> Result<OracleVerdict> {
    if depth == 0 {
        return Err(Error::Domain("depth must be at least 1".to_string()));
    }
    if kappa.len() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            found: kappa.len(),
        });
    }
    let cycles = primitive_cycles(space.len(), depth);

    // lim_n sup_{m>n} κ(x_n, x_m) = 0 on a periodic sequence means the sup
    // over one full period after every n vanishes.
    let cauchy_tail = |c: &[usize]| {
        let len = c.len();
        (0..len).all(|n| (n + 1..=n + len).all(|m| kappa.get(c[n], c[m % len]) == 0.0))
    };

    for x in cycles.iter().filter(|c| cauchy_tail(c)) {
        for y in &cycles {
            let period = lcm(x.len(), y.len());
            let at = |n: usize| (x[n % x.len()], y[n % y.len()]);
            let kappa_vanishes = (0..period).all(|n| {
                let (a, b) = at(n);
                kappa.get(a, b) == 0.0
            });
            let d_stays_positive = (0..period).any(|n| {
                let (a, b) = at(n);
                space.d(a, b) > 0.0
            });
            if kappa_vanishes && d_stays_positive {
                return Ok(OracleVerdict::Fail {
                    x_cycle: x.clone(),
                    y_cycle: y.clone(),
                });
            }
        }
    }
    Ok(OracleVerdict::PassAtDepth(depth))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Words over `0..n` of length `1..=max_len` that are not a power of a
/// shorter word, ordered by length and then lexicographically.
fn primitive_cycles(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for len in 1..=max_len {
        let mut word = alloc::vec![0usize; len];
        'words: loop {
            let primitive = (1..len)
                .filter(|p| len % p == 0)
                .all(|p| (p..len).any(|i| word[i] != word[i - p]));
            if primitive {
                out.push(word.clone());
            }
            let mut pos = len;
            loop {
                if pos == 0 {
                    break 'words;
                }
                pos -= 1;
                word[pos] += 1;
                if word[pos] < n {
                    break;
                }
                word[pos] = 0;
            }
        }
    }
    out
}

/// Full classification: the component axioms plus e-distance, e⁰-distance
/// and τ-function verdicts. A derived verdict that fails reuses the witness
/// of its first failing component.
pub fn classify(kappa: &DistanceFunction) -> AxiomReport {
    let tau1 = check_tau1(kappa);
    let zero_diagonal = check_zero_diagonal(kappa);
    let ZeroStructure {
        tau2,
        tau3,
        tau4,
        tau4prime,
    } = check_zero_structure(kappa);

    let all = |parts: &[&Verdict]| -> Verdict {
        parts
            .iter()
            .find(|v| v.is_fail())
            .map_or(Verdict::Pass, |v| (*v).clone())
    };
    let is_e = all(&[&tau1, &tau2, &tau3]);
    let is_e0 = all(&[&is_e, &zero_diagonal]);
    let is_tau = all(&[&is_e, &tau4]);

    let mut report = AxiomReport::default();
    report.insert(Axiom::IsEDistance, is_e);
    report.insert(Axiom::IsE0Distance, is_e0);
    report.insert(Axiom::IsTauFunction, is_tau);
    report.insert(Axiom::Tau1, tau1);
    report.insert(Axiom::Tau2, tau2);
    report.insert(Axiom::Tau3, tau3);
    report.insert(Axiom::Tau4, tau4);
    report.insert(Axiom::Tau4prime, tau4prime);
    report.insert(Axiom::ZeroDiagonal, zero_diagonal);
    report
}

/// Fails with a precondition error naming the first axiom that keeps `κ`
/// from being an e⁰-distance.
pub fn require_e0(kappa: &DistanceFunction) -> Result<()> {
    let report = classify(kappa);
    for axiom in [Axiom::Tau1, Axiom::Tau3, Axiom::ZeroDiagonal] {
        if let Some(Verdict::Fail(w)) = report.get(axiom) {
            return Err(Error::Precondition(alloc::format!(
                "kappa is not an e0-distance: {axiom:?} fails at {:?}",
                w.points
            )));
        }
    }
    Ok(())
}

/// `κ(x, C) = min_{y ∈ C} κ(x, y)`.
pub fn point_to_set(kappa: &DistanceFunction, x: usize, set: &FiniteSubset) -> f64 {
    set.iter()
        .map(|y| kappa.get(x, y))
        .fold(f64::INFINITY, f64::min)
}

/// Floyd–Warshall shortest-path closure of a nonnegative weight matrix; the
/// diagonal is forced to zero. The result satisfies (τ1).
pub fn shortest_path_closure(weights: &SquareMatrix) -> SquareMatrix {
    let n = weights.len();
    let mut m = weights.clone();
    for i in 0..n {
        m.set(i, i, 0.0);
    }
    for k in 0..n {
        for i in 0..n {
            let ik = m.get(i, k);
            for j in 0..n {
                let via = ik + m.get(k, j);
                if via < m.get(i, j) {
                    m.set(i, j, via);
                }
            }
        }
    }
    m
}

impl Witness {
    /// Re-evaluates an axiom witness against `m` and reports whether the
    /// recorded violation is still present with the recorded values.
    /// Witnesses of non-axiom rules are not handled and return `false`.
    pub fn reproduces(&self, m: &SquareMatrix) -> bool {
        let p = &self.points;
        let v = &self.values;
        let same = |a: f64, b: f64| a == b;
        match (self.rule, p.as_slice()) {
            (Rule::Nonnegative, &[i, j]) => same(m.get(i, j), v[0]) && v[0] < 0.0,
            (Rule::ZeroDiagonal, &[i]) => same(m.get(i, i), v[0]) && v[0] != 0.0,
            (Rule::Positivity, &[i, j]) => i != j && same(m.get(i, j), v[0]) && v[0] <= 0.0,
            (Rule::Symmetry, &[i, j]) => {
                same(m.get(i, j), v[0]) && same(m.get(j, i), v[1]) && v[0] != v[1]
            }
            (Rule::Triangle | Rule::Tau1, &[i, j, k]) => {
                same(m.get(i, k), v[0])
                    && same(m.get(i, j), v[1])
                    && same(m.get(j, k), v[2])
                    && v[0] > v[1] + v[2]
            }
            (Rule::Tau3, &[a, b]) => a != b && m.get(a, a) == 0.0 && m.get(a, b) == 0.0,
            (Rule::Tau4, &[x, y, z]) => y != z && m.get(x, y) == 0.0 && m.get(x, z) == 0.0,
            (Rule::Tau4Prime, &[x, y, z]) => {
                y != z && m.get(x, x) == 0.0 && m.get(x, y) == 0.0 && m.get(x, z) == 0.0
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn line() -> FiniteMetricSpace {
        FiniteMetricSpace::on_line(&[0.0, 1.0, 3.0]).unwrap()
    }

    #[test]
    fn line_space_is_a_metric() {
        assert_eq!(validate_metric(line().matrix()).unwrap(), Verdict::Pass);
    }

    #[test]
    fn broken_triangle_names_first_triple() {
        let d =
            SquareMatrix::from_rows(&[[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]]).unwrap();
        let Verdict::Fail(w) = validate_metric(&d).unwrap() else {
            panic!("expected failure")
        };
        assert_eq!(w.rule, Rule::Triangle);
        assert_eq!(w.points, vec![0, 1, 2]);
        assert!(w.reproduces(&d));
        assert!(FiniteMetricSpace::with_default_labels(d).is_err());
    }

    #[test]
    fn one_point_space() {
        let d = SquareMatrix::from_rows(&[[0.0]]).unwrap();
        assert!(validate_metric(&d).unwrap().is_pass());
    }

    #[test]
    fn malformed_matrices() {
        assert!(SquareMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0]]).is_err());
        assert!(SquareMatrix::from_rows(&[[0.0, f64::NAN], [1.0, 0.0]]).is_err());
        assert!(DistanceFunction::new(
            SquareMatrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap()
        )
        .is_err());
        let labels = vec!["a".into(), "a".into()];
        let d = SquareMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(FiniteMetricSpace::new(labels, d).is_err());
    }

    #[test]
    fn tau1_failure() {
        let k = DistanceFunction::new(
            SquareMatrix::from_rows(&[[0.0, 1.0, 10.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]).unwrap(),
        )
        .unwrap();
        let Verdict::Fail(w) = check_tau1(&k) else {
            panic!()
        };
        assert_eq!(w.points, vec![0, 1, 2]);
        assert_eq!(w.values, vec![10.0, 1.0, 1.0]);
    }

    #[test]
    fn zero_structure_of_a_metric() {
        let z = check_zero_structure(&line().as_distance());
        assert!(z.tau2.is_pass() && z.tau3.is_pass() && z.tau4.is_pass() && z.tau4prime.is_pass());
    }

    #[test]
    fn zero_pair_breaks_tau3() {
        let space = line();
        let mut m = space.matrix().clone();
        m.set(0, 1, 0.0);
        let k = DistanceFunction::new(m).unwrap();
        let z = check_zero_structure(&k);
        assert_eq!(z.tau3.witness().unwrap().points, vec![0, 1]);
        let oracle = sequence_oracle_tau3(&space, &k, 1).unwrap();
        assert_eq!(
            oracle,
            OracleVerdict::Fail {
                x_cycle: vec![0],
                y_cycle: vec![1]
            }
        );
    }

    #[test]
    fn oracle_passes_on_metric() {
        let space = line();
        assert_eq!(
            sequence_oracle_tau3(&space, &space.as_distance(), 3).unwrap(),
            OracleVerdict::PassAtDepth(3)
        );
        assert!(sequence_oracle_tau3(&space, &space.as_distance(), 0).is_err());
    }

    #[test]
    fn tau4_without_diagonal_hypothesis() {
        // κ(0,0) > 0 so (τ4)' is silent at x = 0, but (τ4) still fails there.
        let k = DistanceFunction::new(
            SquareMatrix::from_rows(&[[1.0, 0.0, 0.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]).unwrap(),
        )
        .unwrap();
        let z = check_zero_structure(&k);
        assert_eq!(z.tau4.witness().unwrap().points, vec![0, 1, 2]);
        assert!(z.tau4prime.is_pass());
        assert!(z.tau3.is_pass());
    }

    #[test]
    fn classify_metric_and_zero_kappa() {
        let r = classify(&line().as_distance());
        assert!(r.all_pass());
        let zero = DistanceFunction::new(SquareMatrix::zeros(2)).unwrap();
        let r = classify(&zero);
        assert!(r.get(Axiom::Tau3).unwrap().is_fail());
        assert!(r.get(Axiom::IsEDistance).unwrap().is_fail());
        assert!(require_e0(&zero).is_err());
    }

    #[test]
    fn point_to_set_examples() {
        let k = line().as_distance();
        assert_eq!(
            point_to_set(&k, 0, &FiniteSubset::new([1, 2]).unwrap()),
            1.0
        );
        assert_eq!(
            point_to_set(&k, 1, &FiniteSubset::new([1, 2]).unwrap()),
            0.0
        );
        assert_eq!(point_to_set(&k, 2, &FiniteSubset::singleton(0)), 3.0);
        assert_eq!(FiniteSubset::new(Vec::new()), Err(Error::EmptySet));
    }

    #[test]
    fn subset_helpers() {
        let mut s = FiniteSubset::new([3, 1, 3]).unwrap();
        assert_eq!(s.members(), &[1, 3]);
        assert!(s.insert(2));
        assert!(!s.insert(2));
        assert!(s.remove(1));
        assert_eq!(s.members(), &[2, 3]);
        assert!(FiniteSubset::singleton(4).check_within(4).is_err());
        assert_eq!(FiniteSubset::from_mask(0b1010).unwrap().members(), &[1, 3]);
    }

    #[test]
    fn primitive_cycle_count() {
        // Necklace-free word counts: n, n²−n, n³−n, n⁴−n².
        let n = 3;
        let c = primitive_cycles(n, 4);
        assert_eq!(c.len(), 3 + 6 + 24 + 72);
        assert!(!c.contains(&vec![1, 1]));
        assert!(c.contains(&vec![0, 1, 0, 2]));
    }
}
