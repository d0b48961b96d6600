//! Multivalued maps, the contraction-type hypotheses, greedy orbits and
//! theorem runs checked against enumeration oracles.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::hyperspace::dkappa;
use crate::mt::{check_statement, GaugeWitness};
use crate::report::{Rule, Verdict, Witness};
use crate::spaces::{classify, point_to_set, Axiom};
use crate::{DistanceFunction, Error, FiniteSubset, Instance, PiecewiseLinearGauge, Result};

/// `T : X → 2^X \ {∅}` as a table of images.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct MultivaluedMap {
    images: Vec<FiniteSubset>,
}

impl MultivaluedMap {
    pub fn new(images: Vec<FiniteSubset>) -> Result<Self> {
        let map = Self { images };
        map.check_within(map.len())?;
        Ok(map)
    }

    pub fn constant(len: usize, set: FiniteSubset) -> Result<Self> {
        Self::new(alloc::vec![set; len])
    }

    pub fn identity(len: usize) -> Self {
        Self {
            images: (0..len).map(FiniteSubset::singleton).collect(),
        }
    }

    pub fn single_valued(targets: &[usize]) -> Result<Self> {
        Self::new(
            targets
                .iter()
                .map(|&y| FiniteSubset::singleton(y))
                .collect(),
        )
    }

    pub fn check_within(&self, len: usize) -> Result<()> {
        if self.images.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: self.images.len(),
            });
        }
        self.images.iter().try_for_each(|s| s.check_within(len))
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, x: usize) -> &FiniteSubset {
        &self.images[x]
    }

    pub fn images(&self) -> &[FiniteSubset] {
        &self.images
    }

    /// Replaces `Tx`. The caller keeps indices in range.
    pub fn set_image(&mut self, x: usize, image: FiniteSubset) {
        self.images[x] = image;
    }

    pub fn image_mut(&mut self, x: usize) -> &mut FiniteSubset {
        &mut self.images[x]
    }

    pub fn is_single_valued(&self) -> bool {
        self.images.iter().all(|s| s.len() == 1)
    }
}

/// A total self-map `φ : X → X`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct SelfMap {
    image: Vec<usize>,
}

impl SelfMap {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let map = Self { image };
        map.check_within(map.len())?;
        Ok(map)
    }

    pub fn identity(len: usize) -> Self {
        Self {
            image: (0..len).collect(),
        }
    }

    pub fn check_within(&self, len: usize) -> Result<()> {
        if self.image.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: self.image.len(),
            });
        }
        match self.image.iter().find(|&&y| y >= len) {
            Some(&index) => Err(Error::PointOutOfRange { index, len }),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn set(&mut self, x: usize, y: usize) {
        self.image[x] = y;
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x == y)
    }
}

/// `F(T) = {x : x ∈ Tx}`.
pub fn fixed_points(t: &MultivaluedMap) -> Vec<usize> {
    (0..t.len()).filter(|&x| t.image(x).contains(x)).collect()
}

/// `COP(φ,T) = {x : φx ∈ Tx}`.
pub fn coincidence_points(phi: &SelfMap, t: &MultivaluedMap) -> Vec<usize> {
    (0..t.len())
        .filter(|&x| t.image(x).contains(phi.apply(x)))
        .collect()
}

fn mu_term(mu: &PiecewiseLinearGauge, k: f64) -> f64 {
    mu.value_at(k) * k
}

/// For each `x` and `y ∈ Tx` with `y != x`, some `z ∈ Ty` has
/// `κ(y,z) ≤ μ(κ(x,y))κ(x,y)`. Witness `(x,y)` with `[κ(x,y), bound, κ(y,Ty)]`.
pub fn check_s1(
    kappa: &DistanceFunction,
    t: &MultivaluedMap,
    mu: &PiecewiseLinearGauge,
) -> Verdict {
    for x in 0..t.len() {
        for y in t.image(x).iter().filter(|&y| y != x) {
            let kxy = kappa.get(x, y);
            let bound = mu_term(mu, kxy);
            let best = point_to_set(kappa, y, t.image(y));
            if best > bound {
                return Verdict::Fail(Witness::new(Rule::S1, [x, y], [kxy, bound, best]));
            }
        }
    }
    Verdict::Pass
}

/// For each `x` and every `y ∈ Tx`, `y = x` included,
/// `κ(y,Ty) ≤ μ(κ(x,y))κ(x,y)`. Witness `(x,y)` with `[κ(y,Ty), bound]`.
pub fn check_s3(
    kappa: &DistanceFunction,
    t: &MultivaluedMap,
    mu: &PiecewiseLinearGauge,
) -> Verdict {
    for x in 0..t.len() {
        for y in t.image(x).iter() {
            let bound = mu_term(mu, kappa.get(x, y));
            let lhs = point_to_set(kappa, y, t.image(y));
            if lhs > bound {
                return Verdict::Fail(Witness::new(Rule::S3, [x, y], [lhs, bound]));
            }
        }
    }
    Verdict::Pass
}

/// `φ(Tx) ⊆ Tx` for every `x`. Witness `(x, y, φy)` with `y ∈ Tx`, `φy ∉ Tx`.
pub fn check_s4(phi: &SelfMap, t: &MultivaluedMap) -> Verdict {
    for x in 0..t.len() {
        let tx = t.image(x);
        if let Some(y) = tx.iter().find(|&y| !tx.contains(phi.apply(y))) {
            return Verdict::Fail(Witness::new(Rule::S4, [x, y, phi.apply(y)], []));
        }
    }
    Verdict::Pass
}

fn scan_pairs(
    rule: Rule,
    kappa: &DistanceFunction,
    t: &MultivaluedMap,
    phi: &SelfMap,
    mu: &PiecewiseLinearGauge,
    l: f64,
    lhs: impl Fn(usize, usize) -> f64,
) -> Verdict {
    for x in 0..t.len() {
        for y in 0..t.len() {
            let left = lhs(x, y);
            let contraction = mu_term(mu, kappa.get(x, y));
            let offset = point_to_set(kappa, phi.apply(y), t.image(x));
            if left > contraction + l * offset {
                return Verdict::Fail(Witness::new(rule, [x, y], [left, contraction, offset, l]));
            }
        }
    }
    Verdict::Pass
}

/// `κ(y,Ty) ≤ μ(κ(x,y))κ(x,y) + Lκ(φy,Tx)` for all `x, y`. Witness `(x,y)`
/// with `[κ(y,Ty), μ-term, κ(φy,Tx), L]`.
pub fn check_s5(
    kappa: &DistanceFunction,
    t: &MultivaluedMap,
    phi: &SelfMap,
    mu: &PiecewiseLinearGauge,
    l: f64,
) -> Verdict {
    scan_pairs(Rule::S5, kappa, t, phi, mu, l, |_, y| {
        point_to_set(kappa, y, t.image(y))
    })
}

/// `D_κ(Tx,Ty) ≤ μ(κ(x,y))κ(x,y) + Lκ(φy,Tx)` for all `x, y`. Witness as in
/// [`check_s5`] with `D_κ(Tx,Ty)` first.
pub fn check_s6(
    kappa: &DistanceFunction,
    t: &MultivaluedMap,
    phi: &SelfMap,
    mu: &PiecewiseLinearGauge,
    l: f64,
) -> Verdict {
    scan_pairs(Rule::S6, kappa, t, phi, mu, l, |x, y| {
        dkappa(kappa, t.image(x), t.image(y))
    })
}

/// A verdict with an optional remark about how it was reached.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ConditionCheck {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub verdict: Verdict,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub note: Option<String>,
}

impl ConditionCheck {
    fn plain(verdict: Verdict) -> Self {
        Self {
            verdict,
            note: None,
        }
    }

    fn noted(verdict: Verdict, note: &str) -> Self {
        Self {
            verdict,
            note: Some(note.into()),
        }
    }
}

const DISCRETE_NOTE: &str = "holds on every finite space: the topology is discrete";

/// The five alternatives of the (S2) condition.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct S2Report {
    pub h1: ConditionCheck,
    pub h2: ConditionCheck,
    pub h3: ConditionCheck,
    pub h4: ConditionCheck,
    pub h5: ConditionCheck,
}

impl S2Report {
    /// (S2) asks for one of the alternatives.
    pub fn holds(&self) -> bool {
        [&self.h1, &self.h2, &self.h3, &self.h4, &self.h5]
            .iter()
            .any(|h| h.verdict.is_pass())
    }

    /// The verdict for (S2) as a whole; fails with the (H4) or (H5) witness.
    pub fn verdict(&self) -> Verdict {
        if self.holds() {
            Verdict::Pass
        } else {
            self.h4.verdict.clone()
        }
    }
}

/// Decides (H1)–(H5).
///
/// (H1)–(H3) are topological and hold trivially. A convergent orbit is
/// eventually constant at some `v`, which forces `v ∈ Tv`, so (H4) reduces to
/// `κ(v,Tv) = 0` on `F(T)`. (H5) evaluates its infimum exactly.
pub fn check_s2(kappa: &DistanceFunction, t: &MultivaluedMap) -> S2Report {
    let fixed = fixed_points(t);
    let h4 = fixed
        .iter()
        .map(|&v| (v, point_to_set(kappa, v, t.image(v))))
        .find(|&(_, gap)| gap != 0.0)
        .map_or(Verdict::Pass, |(v, gap)| {
            Verdict::Fail(Witness::new(Rule::H4, [v], [gap]))
        });

    let n = t.len();
    let h5 = if fixed.len() == n {
        ConditionCheck::noted(Verdict::Pass, "vacuous: every point is fixed")
    } else {
        let self_gap: Vec<f64> = (0..n).map(|x| point_to_set(kappa, x, t.image(x))).collect();
        let failure = (0..n).filter(|z| !fixed.contains(z)).find_map(|z| {
            (0..n)
                .find(|&x| kappa.get(x, z) + self_gap[x] <= 0.0)
                .map(|x| Witness::new(Rule::H5, [z, x], [kappa.get(x, z), self_gap[x]]))
        });
        ConditionCheck::plain(failure.map_or(Verdict::Pass, Verdict::Fail))
    };

    S2Report {
        h1: ConditionCheck::noted(Verdict::Pass, DISCRETE_NOTE),
        h2: ConditionCheck::noted(Verdict::Pass, DISCRETE_NOTE),
        h3: ConditionCheck::noted(Verdict::Pass, DISCRETE_NOTE),
        h4: ConditionCheck::plain(h4),
        h5,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "kind", content = "point", rename_all = "snake_case")
)]
pub enum OrbitOutcome {
    FixedPoint(usize),
    IterationCap,
    /// A step of zero κ-gap that did not land on a fixed point.
    Stalled,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct OrbitTrace {
    pub points: Vec<usize>,
    pub gaps: Vec<f64>,
    pub cauchy_bound: Vec<f64>,
    pub outcome: OrbitOutcome,
}

impl OrbitTrace {
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }
}

/// `|X|² + 1`.
pub fn default_max_iter(n: usize) -> usize {
    n * n + 1
}

/// Greedy orbit from `x0`: stop at a fixed point, otherwise move to the
/// point of `Tx` nearest to `x` under `κ` (smallest index on ties).
pub fn iterate(
    kappa: &DistanceFunction,
    t: &MultivaluedMap,
    x0: usize,
    max_iter: usize,
) -> Result<OrbitTrace> {
    if max_iter == 0 {
        return Err(Error::Domain("max_iter must be at least 1".into()));
    }
    if x0 >= t.len() {
        return Err(Error::PointOutOfRange {
            index: x0,
            len: t.len(),
        });
    }
    let mut points = alloc::vec![x0];
    let mut gaps = Vec::new();
    let mut x = x0;
    let outcome = loop {
        if t.image(x).contains(x) {
            break OrbitOutcome::FixedPoint(x);
        }
        if gaps.len() == max_iter {
            break OrbitOutcome::IterationCap;
        }
        let mut next = None;
        for y in t.image(x).iter() {
            if next.is_none_or(|(_, best)| kappa.get(x, y) < best) {
                next = Some((y, kappa.get(x, y)));
            }
        }
        let (y, gap) = next.expect("images are nonempty");
        points.push(y);
        gaps.push(gap);
        x = y;
        if gap == 0.0 && !t.image(y).contains(y) {
            break OrbitOutcome::Stalled;
        }
    };
    let mut trace = OrbitTrace {
        points,
        gaps,
        cauchy_bound: Vec::new(),
        outcome,
    };
    trace.cauchy_bound = cauchy_diagnostic(&trace, kappa).bounds;
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CauchyDiagnostic {
    /// `b_n = max_{m>n} κ(x_n, x_m)` along the trace.
    pub bounds: Vec<f64>,
    /// First index from which every recorded `b_n` is 0.
    pub zero_from: Option<usize>,
}

impl CauchyDiagnostic {
    pub fn eventually_zero(&self) -> bool {
        self.zero_from.is_some()
    }
}

/// Computes `b_n`. A trace that ends at a fixed point `v` continues as the
/// constant sequence `v, v, …`, so its last bound is `κ(v,v)`; any other
/// trace has no bound for its last index.
pub fn cauchy_diagnostic(trace: &OrbitTrace, kappa: &DistanceFunction) -> CauchyDiagnostic {
    let mut pts = trace.points.clone();
    if let OrbitOutcome::FixedPoint(v) = trace.outcome {
        pts.push(v);
    }
    let bounds: Vec<f64> = (0..pts.len().saturating_sub(1))
        .map(|n| {
            pts[n + 1..]
                .iter()
                .map(|&m| kappa.get(pts[n], m))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let zero_from = match bounds.iter().rposition(|&b| b != 0.0) {
        None if bounds.is_empty() => None,
        None => Some(0),
        Some(i) if i + 1 < bounds.len() => Some(i + 1),
        Some(_) => None,
    };
    CauchyDiagnostic { bounds, zero_from }
}

/// Theorems that can be verified on an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum TheoremId {
    #[cfg_attr(feature = "serde", serde(rename = "T2.1"))]
    T21,
    #[cfg_attr(feature = "serde", serde(rename = "T2.2"))]
    T22,
    #[cfg_attr(feature = "serde", serde(rename = "T2.3"))]
    T23,
    #[cfg_attr(feature = "serde", serde(rename = "T2.4"))]
    T24,
    #[cfg_attr(feature = "serde", serde(rename = "T1.1"))]
    BerindeBerinde,
    #[cfg_attr(feature = "serde", serde(rename = "mizoguchi-takahashi"))]
    MizoguchiTakahashi,
    #[cfg_attr(feature = "serde", serde(rename = "nadler"))]
    Nadler,
    #[cfg_attr(feature = "serde", serde(rename = "banach"))]
    Banach,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::T21,
        TheoremId::T22,
        TheoremId::T23,
        TheoremId::T24,
        TheoremId::BerindeBerinde,
        TheoremId::MizoguchiTakahashi,
        TheoremId::Nadler,
        TheoremId::Banach,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::T21 => "T2.1",
            TheoremId::T22 => "T2.2",
            TheoremId::T23 => "T2.3",
            TheoremId::T24 => "T2.4",
            TheoremId::BerindeBerinde => "T1.1",
            TheoremId::MizoguchiTakahashi => "mizoguchi-takahashi",
            TheoremId::Nadler => "nadler",
            TheoremId::Banach => "banach",
        }
    }

    /// Whether the conclusion is about coincidence points as well.
    pub fn concludes_coincidence(self) -> bool {
        matches!(self, TheoremId::T23 | TheoremId::T24)
    }

    fn is_metric_form(self) -> bool {
        matches!(
            self,
            TheoremId::BerindeBerinde
                | TheoremId::MizoguchiTakahashi
                | TheoremId::Nadler
                | TheoremId::Banach
        )
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let id = match lower.trim_start_matches('t') {
            "2.1" => TheoremId::T21,
            "2.2" => TheoremId::T22,
            "2.3" => TheoremId::T23,
            "2.4" => TheoremId::T24,
            "1.1" => TheoremId::BerindeBerinde,
            _ => match lower.as_str() {
                "berinde-berinde" | "t1.1-berindeberinde" => TheoremId::BerindeBerinde,
                "mizoguchi-takahashi" | "mt" => TheoremId::MizoguchiTakahashi,
                "nadler" => TheoremId::Nadler,
                "banach" => TheoremId::Banach,
                _ => return Err(Error::Domain(alloc::format!("unknown theorem `{s}`"))),
            },
        };
        Ok(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Hypothesis {
    E0Distance,
    MtFunction,
    NonnegativeL,
    ConstantGauge,
    SingleValued,
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct HypothesisCheck {
    pub hypothesis: Hypothesis,
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub check: ConditionCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Conclusion {
    /// Some hypothesis failed, so the theorem says nothing.
    NotAsserted,
    Pass,
    /// Hypotheses hold but the conclusion does not: a theorem violation.
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct OrbitSummary {
    pub start: usize,
    pub steps: usize,
    pub outcome: OrbitOutcome,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub hypotheses: Vec<HypothesisCheck>,
    pub s2: Option<S2Report>,
    pub conclusion: Conclusion,
    pub fixed_points: Vec<usize>,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub coincidence_points: Option<Vec<usize>>,
    pub orbit: OrbitSummary,
}

impl TheoremReport {
    pub fn hypotheses_pass(&self) -> bool {
        self.hypotheses.iter().all(|h| h.check.verdict.is_pass())
    }

    pub fn hypothesis(&self, which: Hypothesis) -> Option<&HypothesisCheck> {
        self.hypotheses.iter().find(|h| h.hypothesis == which)
    }

    /// 0 when hypotheses and conclusion pass, 1 when a hypothesis fails,
    /// 3 on a theorem violation.
    pub fn exit_code(&self) -> i32 {
        match self.conclusion {
            Conclusion::Pass => 0,
            Conclusion::NotAsserted => 1,
            Conclusion::Fail => 3,
        }
    }
}

fn mt_function_check(mu: &PiecewiseLinearGauge) -> Verdict {
    if mu.lambda() != 1.0 {
        return Verdict::Fail(Witness::new(Rule::MtFunction, [], [mu.lambda()]));
    }
    match check_statement(mu, 1).expect("statement index in range") {
        Verdict::Pass => Verdict::Pass,
        Verdict::Fail(GaugeWitness::RightLimit { t, value, lambda }) => {
            Verdict::Fail(Witness::new(Rule::MtFunction, [], [t, value, lambda]))
        }
        Verdict::Fail(_) => Verdict::Fail(Witness::new(Rule::MtFunction, [], [])),
    }
}

fn require<'a, T>(part: &'a Option<T>, name: &'static str) -> Result<&'a T> {
    part.as_ref().ok_or(Error::MissingComponent(name))
}

/// Checks the hypotheses of `which` on `instance` and, when they all hold,
/// asserts the conclusion against the enumerated `F(T)` and `COP(φ,T)`.
///
/// The classical forms (T1.1, Mizoguchi–Takahashi, Nadler, Banach) run on
/// the metric specialization `κ = d`, `φ = id`:
///
/// - T1.1: (S6) with the instance `μ` and `L`.
/// - Mizoguchi–Takahashi: (S6) with `L = 0`.
/// - Nadler: as Mizoguchi–Takahashi with a constant `μ`.
/// - Banach: as Nadler with a single-valued `T`.
pub fn verify_theorem(instance: &Instance, which: TheoremId) -> Result<TheoremReport> {
    instance.validate()?;
    let specialized;
    let inst = if which.is_metric_form() {
        specialized = instance.metric_specialization();
        &specialized
    } else {
        instance
    };
    let kappa = &inst.kappa;
    let t = &inst.map;
    let mu = require(&inst.mu, "mu")?;
    let l = match which {
        TheoremId::T23 | TheoremId::T24 | TheoremId::BerindeBerinde => {
            *require(&inst.lipschitz, "L")?
        }
        _ => 0.0,
    };
    let phi = match which {
        TheoremId::T23 | TheoremId::T24 | TheoremId::BerindeBerinde => {
            Some(require(&inst.phi, "phi")?)
        }
        _ => inst.phi.as_ref(),
    };

    let mut hypotheses = Vec::new();
    let mut push = |hypothesis, check| hypotheses.push(HypothesisCheck { hypothesis, check });

    let e0 = classify(kappa)
        .get(Axiom::IsE0Distance)
        .cloned()
        .unwrap_or(Verdict::Pass);
    push(Hypothesis::E0Distance, ConditionCheck::plain(e0));
    push(
        Hypothesis::MtFunction,
        ConditionCheck::plain(mt_function_check(mu)),
    );
    if matches!(
        which,
        TheoremId::T23 | TheoremId::T24 | TheoremId::BerindeBerinde
    ) {
        let v = if l >= 0.0 {
            Verdict::Pass
        } else {
            Verdict::Fail(Witness::new(Rule::NonnegativeL, [], [l]))
        };
        push(Hypothesis::NonnegativeL, ConditionCheck::plain(v));
    }
    if matches!(which, TheoremId::Nadler | TheoremId::Banach) {
        let v = if mu.is_constant() {
            Verdict::Pass
        } else {
            Verdict::Fail(Witness::new(Rule::ConstantGauge, [], []))
        };
        push(Hypothesis::ConstantGauge, ConditionCheck::plain(v));
    }
    if which == TheoremId::Banach {
        let v = match (0..t.len()).find(|&x| t.image(x).len() > 1) {
            None => Verdict::Pass,
            Some(x) => Verdict::Fail(Witness::new(
                Rule::SingleValued,
                [x],
                [t.image(x).len() as f64],
            )),
        };
        push(Hypothesis::SingleValued, ConditionCheck::plain(v));
    }

    let identity = SelfMap::identity(t.len());
    let mut s2 = None;
    match which {
        TheoremId::T21 => push(
            Hypothesis::S1,
            ConditionCheck::plain(check_s1(kappa, t, mu)),
        ),
        TheoremId::T22 => push(
            Hypothesis::S3,
            ConditionCheck::plain(check_s3(kappa, t, mu)),
        ),
        TheoremId::T23 | TheoremId::T24 => {
            let phi = phi.expect("required above");
            push(Hypothesis::S4, ConditionCheck::plain(check_s4(phi, t)));
            let v = if which == TheoremId::T23 {
                (Hypothesis::S5, check_s5(kappa, t, phi, mu, l))
            } else {
                (Hypothesis::S6, check_s6(kappa, t, phi, mu, l))
            };
            push(v.0, ConditionCheck::plain(v.1));
        }
        _ => push(
            Hypothesis::S6,
            ConditionCheck::plain(check_s6(kappa, t, &identity, mu, l)),
        ),
    }
    if !which.is_metric_form() {
        let report = check_s2(kappa, t);
        push(Hypothesis::S2, ConditionCheck::plain(report.verdict()));
        s2 = Some(report);
    }

    let fixed = fixed_points(t);
    let cop = phi
        .filter(|_| which.concludes_coincidence())
        .map(|phi| coincidence_points(phi, t));
    let all_pass = hypotheses.iter().all(|h| h.check.verdict.is_pass());
    let conclusion = if !all_pass {
        Conclusion::NotAsserted
    } else {
        let holds = match &cop {
            Some(cop) => cop.iter().any(|x| fixed.contains(x)),
            None => !fixed.is_empty(),
        };
        if holds {
            Conclusion::Pass
        } else {
            Conclusion::Fail
        }
    };
    let trace = iterate(kappa, t, 0, default_max_iter(t.len()))?;
    Ok(TheoremReport {
        theorem: which,
        hypotheses,
        s2,
        conclusion,
        fixed_points: fixed,
        coincidence_points: cop,
        orbit: OrbitSummary {
            start: 0,
            steps: trace.steps(),
            outcome: trace.outcome,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FiniteMetricSpace;
    use alloc::vec;

    fn line() -> FiniteMetricSpace {
        FiniteMetricSpace::on_line(&[0.0, 1.0, 3.0]).unwrap()
    }

    fn map(images: &[&[usize]]) -> MultivaluedMap {
        MultivaluedMap::new(
            images
                .iter()
                .map(|m| FiniteSubset::new(m.iter().copied()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn mu(q: f64) -> PiecewiseLinearGauge {
        PiecewiseLinearGauge::constant(1.0, q).unwrap()
    }

    #[test]
    fn fixed_point_enumeration() {
        assert_eq!(fixed_points(&MultivaluedMap::identity(3)), vec![0, 1, 2]);
        assert_eq!(fixed_points(&map(&[&[1], &[2], &[2]])), vec![2]);
        assert!(fixed_points(&map(&[&[1], &[0]])).is_empty());
    }

    #[test]
    fn coincidence_enumeration() {
        let t = map(&[&[2], &[0, 2], &[2]]);
        assert_eq!(
            coincidence_points(&SelfMap::identity(3), &t),
            fixed_points(&t)
        );
        assert_eq!(
            coincidence_points(&SelfMap::new(vec![2, 2, 2]).unwrap(), &t),
            vec![0, 1, 2]
        );
        let phi = SelfMap::new(vec![1, 1, 2]).unwrap();
        assert!(!coincidence_points(&phi, &t).contains(&0));
    }

    #[test]
    fn s1_examples() {
        let k = line().as_distance();
        assert!(check_s1(&k, &map(&[&[1], &[1], &[2]]), &mu(0.9)).is_pass());
        let v = check_s1(&k, &map(&[&[1], &[2], &[2]]), &mu(0.9));
        assert_eq!(v.witness().unwrap().points, vec![0, 1]);
        assert!(check_s1(
            &k,
            &MultivaluedMap::constant(3, FiniteSubset::singleton(2)).unwrap(),
            &mu(0.0)
        )
        .is_pass());
    }

    #[test]
    fn s3_examples() {
        let k = line().as_distance();
        assert!(check_s3(&k, &map(&[&[1], &[1], &[2]]), &mu(0.9)).is_pass());
        let v = check_s3(&k, &map(&[&[1], &[2], &[2]]), &mu(0.9));
        let w = v.witness().unwrap();
        assert_eq!((w.points.as_slice(), w.values[0]), ([0, 1].as_slice(), 2.0));
    }

    #[test]
    fn s4_examples() {
        let t = map(&[&[1], &[1], &[2]]);
        assert!(check_s4(&SelfMap::identity(3), &t).is_pass());
        let whole = MultivaluedMap::constant(3, FiniteSubset::full(3).unwrap()).unwrap();
        assert!(check_s4(&SelfMap::new(vec![2, 0, 1]).unwrap(), &whole).is_pass());
        let v = check_s4(&SelfMap::new(vec![0, 2, 2]).unwrap(), &t);
        assert_eq!(v.witness().unwrap().points, vec![0, 1, 2]);
    }

    #[test]
    fn s5_and_s6_whole_space_images() {
        let k = line().as_distance();
        let whole = MultivaluedMap::constant(3, FiniteSubset::full(3).unwrap()).unwrap();
        let phi = SelfMap::new(vec![1, 2, 0]).unwrap();
        assert!(check_s5(&k, &whole, &phi, &mu(0.0), 0.0).is_pass());
        assert!(check_s6(&k, &whole, &phi, &mu(0.0), 0.0).is_pass());
    }

    #[test]
    fn s5_with_zero_l_is_stronger_than_s3() {
        let k = line().as_distance();
        let t = map(&[&[1], &[1], &[2]]);
        assert!(check_s3(&k, &t, &mu(0.9)).is_pass());
        let v = check_s5(&k, &t, &SelfMap::identity(3), &mu(0.9), 0.0);
        // y = p0 is in no image and κ(p0, Tp0) = 1 > 0.
        assert_eq!(v.witness().unwrap().points, vec![0, 0]);
    }

    #[test]
    fn h5_examples() {
        let k = line().as_distance();
        let s2 = check_s2(&k, &map(&[&[1], &[2], &[2]]));
        assert!(s2.h5.verdict.is_pass() && s2.h4.verdict.is_pass() && s2.holds());
        let two = FiniteMetricSpace::on_line(&[0.0, 1.0])
            .unwrap()
            .as_distance();
        let cyc = map(&[&[1], &[0]]);
        assert!(check_s2(&two, &cyc).h5.verdict.is_pass());
        assert!(check_s1(&two, &cyc, &mu(0.9)).is_fail());
        let all_fixed = check_s2(&k, &MultivaluedMap::identity(3));
        assert!(all_fixed.h5.note.is_some());
    }

    #[test]
    fn orbit_examples() {
        let k = line().as_distance();
        let t = map(&[&[1], &[1], &[2]]);
        let tr = iterate(&k, &t, 0, 10).unwrap();
        assert_eq!(tr.points, vec![0, 1]);
        assert_eq!(tr.outcome, OrbitOutcome::FixedPoint(1));
        assert_eq!(tr.cauchy_bound, vec![1.0, 0.0]);
        let tr = iterate(&k, &t, 2, 10).unwrap();
        assert_eq!(
            (tr.points.len(), tr.outcome),
            (1, OrbitOutcome::FixedPoint(2))
        );
        assert!(iterate(&k, &t, 0, 0).is_err());
    }

    #[test]
    fn two_cycle_hits_cap() {
        let two = FiniteMetricSpace::on_line(&[0.0, 1.0])
            .unwrap()
            .as_distance();
        let tr = iterate(&two, &map(&[&[1], &[0]]), 0, 3).unwrap();
        assert_eq!(tr.points, vec![0, 1, 0, 1]);
        assert_eq!(tr.outcome, OrbitOutcome::IterationCap);
        let diag = cauchy_diagnostic(&tr, &two);
        assert_eq!(diag.bounds, vec![1.0, 1.0, 1.0]);
        assert!(!diag.eventually_zero());
    }

    #[test]
    fn theorem_runs_on_line_instance() {
        let space = line();
        let k = space.as_distance();
        let mut inst = Instance::new(space, k, map(&[&[1], &[1], &[2]])).unwrap();
        assert!(matches!(
            verify_theorem(&inst, TheoremId::T22),
            Err(Error::MissingComponent("mu"))
        ));
        inst.mu = Some(mu(0.9));
        let r = verify_theorem(&inst, TheoremId::T22).unwrap();
        assert_eq!(r.conclusion, Conclusion::Pass);
        assert_eq!(r.fixed_points, vec![1, 2]);
        assert!(matches!(
            verify_theorem(&inst, TheoremId::T23),
            Err(Error::MissingComponent("L"))
        ));
        inst.lipschitz = Some(4.0);
        inst.phi = Some(SelfMap::identity(3));
        let r = verify_theorem(&inst, TheoremId::T23).unwrap();
        assert_eq!(r.exit_code(), 0, "{r:?}");
        assert_eq!(r.coincidence_points.as_deref(), Some([1, 2].as_slice()));
    }

    #[test]
    fn theorem_ids_parse() {
        for id in TheoremId::ALL {
            assert_eq!(id.name().parse::<TheoremId>().unwrap(), id);
        }
        assert_eq!("2.3".parse::<TheoremId>().unwrap(), TheoremId::T23);
        assert!("T9".parse::<TheoremId>().is_err());
    }
}
