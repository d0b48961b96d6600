//! Piecewise-linear gauges `μ : [0,∞) → [0,λ)` and exact deciders for the
//! ten equivalent characterizations of MT(λ)-functions.
//!
//! A gauge has breakpoints `0 = t₀ < t₁ < … < t_k`. At each breakpoint it
//! takes the value `p_i`; on the open piece after `t_i` it is the line
//! `c_i + m_i (s − t_i)`, where `c_i` is the right-limit at `t_i`. The last
//! piece `(t_k, ∞)` must be constant. Right-intercepts are independent of
//! point values, so a gauge can have right-limit exactly `λ` at a breakpoint
//! without ever attaining `λ`; those are the gauges that are not MT(λ).
//!
//! Statements are numbered as follows:
//!
//! 1. `limsup_{s→t⁺} μ(s) < λ` for every `t`.
//! 2. `μ/λ` satisfies (1) with `λ = 1`.
//! 3. to 6. for every `t` there are `ξ < λ` and `ε > 0` with `μ ≤ ξ` on
//!    `(t,t+ε)`, `[t,t+ε]`, `(t,t+ε]` and `[t,t+ε)` respectively.
//! 7. to 10. `sup_n μ(x_n) < λ` for every nonincreasing, strictly
//!    decreasing, eventually nonincreasing and eventually strictly
//!    decreasing sequence respectively.
//!
//! Every `t` on an open piece behaves like every other point of that piece,
//! so each decider inspects the breakpoints plus one interior point per
//! piece. The interval variants are evaluated literally even though they
//! agree on this class of functions.

use alloc::string::ToString;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::report::Verdict;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PiecewiseLinearGauge {
    lambda: f64,
    breakpoints: Vec<f64>,
    point_values: Vec<f64>,
    right_intercepts: Vec<f64>,
    slopes: Vec<f64>,
}

/// Where a point `s` falls relative to the breakpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Locus {
    Breakpoint(usize),
    /// Inside the open piece that starts at breakpoint `i`.
    Piece(usize),
}

impl PiecewiseLinearGauge {
    pub fn new(
        lambda: f64,
        breakpoints: Vec<f64>,
        point_values: Vec<f64>,
        right_intercepts: Vec<f64>,
        slopes: Vec<f64>,
    ) -> Result<Self> {
        let g = Self {
            lambda,
            breakpoints,
            point_values,
            right_intercepts,
            slopes,
        };
        g.validate()?;
        Ok(g)
    }

    /// `μ ≡ value`.
    pub fn constant(lambda: f64, value: f64) -> Result<Self> {
        Self::new(
            lambda,
            alloc::vec![0.0],
            alloc::vec![value],
            alloc::vec![value],
            alloc::vec![0.0],
        )
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidGauge(msg));
        let lambda = self.lambda;
        if !(lambda.is_finite() && lambda > 0.0) {
            return bad(alloc::format!(
                "lambda = {lambda} must be positive and finite"
            ));
        }
        let k1 = self.breakpoints.len();
        if k1 == 0 {
            return bad("at least one breakpoint is required".to_string());
        }
        if self.point_values.len() != k1
            || self.right_intercepts.len() != k1
            || self.slopes.len() != k1
        {
            return bad(
                "breakpoints, point_values, right_intercepts and slopes must have equal length"
                    .to_string(),
            );
        }
        let all_finite = [
            &self.breakpoints,
            &self.point_values,
            &self.right_intercepts,
            &self.slopes,
        ]
        .iter()
        .all(|v| v.iter().all(|x| x.is_finite()));
        if !all_finite {
            return bad("all gauge entries must be finite".to_string());
        }
        if self.breakpoints[0] != 0.0 {
            return bad("the first breakpoint must be 0".to_string());
        }
        if self.breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return bad("breakpoints must be strictly increasing".to_string());
        }
        for (i, &p) in self.point_values.iter().enumerate() {
            if !(0.0..lambda).contains(&p) {
                return bad(alloc::format!(
                    "point value {p} at breakpoint {i} is outside [0, lambda)"
                ));
            }
        }
        let k = k1 - 1;
        for i in 0..k {
            let c = self.right_intercepts[i];
            let m = self.slopes[i];
            let e = self.piece_value(i, self.breakpoints[i + 1]);
            // Endpoint limits are not attained on the open piece, so they
            // may touch λ or 0; a flat piece attains its value.
            let ok = if m == 0.0 {
                (0.0..lambda).contains(&c)
            } else {
                c.min(e) >= 0.0 && c.max(e) <= lambda
            };
            if !ok {
                return bad(alloc::format!(
                    "piece {i} leaves [0, lambda): right-limit {c}, left-limit {e}"
                ));
            }
        }
        if self.slopes[k] != 0.0 {
            return bad("the unbounded last piece must be constant".to_string());
        }
        if !(0.0..lambda).contains(&self.right_intercepts[k]) {
            return bad("the unbounded last piece must lie in [0, lambda)".to_string());
        }
        Ok(())
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn point_values(&self) -> &[f64] {
        &self.point_values
    }

    pub fn right_intercepts(&self) -> &[f64] {
        &self.right_intercepts
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    /// Whether every point value and every piece equal the same constant.
    pub fn is_constant(&self) -> bool {
        let q = self.point_values[0];
        self.point_values.iter().all(|&p| p == q)
            && self.right_intercepts.iter().all(|&c| c == q)
            && self.slopes.iter().all(|&m| m == 0.0)
    }

    fn last(&self) -> usize {
        self.breakpoints.len() - 1
    }

    fn piece_value(&self, i: usize, s: f64) -> f64 {
        self.right_intercepts[i] + self.slopes[i] * (s - self.breakpoints[i])
    }

    fn piece_end(&self, i: usize) -> f64 {
        self.breakpoints
            .get(i + 1)
            .copied()
            .unwrap_or(f64::INFINITY)
    }

    fn locate(&self, s: f64) -> Locus {
        match self
            .breakpoints
            .binary_search_by(|t| t.partial_cmp(&s).expect("finite breakpoints"))
        {
            Ok(i) => Locus::Breakpoint(i),
            Err(0) => Locus::Breakpoint(0),
            Err(i) => Locus::Piece(i - 1),
        }
    }

    /// `μ(s)` for `s >= 0`.
    pub fn value_at(&self, s: f64) -> f64 {
        assert!(s >= 0.0, "gauge evaluated at negative argument {s}");
        match self.locate(s) {
            Locus::Breakpoint(i) => self.point_values[i],
            Locus::Piece(i) => self.piece_value(i, s),
        }
    }

    /// Exact supremum of `μ` over the interval from `a` to `b` (`a < b`)
    /// with the given endpoint inclusion.
    fn sup_on(&self, a: f64, b: f64, left_closed: bool, right_closed: bool) -> f64 {
        let mut sup = f64::NEG_INFINITY;
        if left_closed {
            sup = sup.max(self.value_at(a));
        }
        if right_closed {
            sup = sup.max(self.value_at(b));
        }
        for i in 0..=self.last() {
            let lo = a.max(self.breakpoints[i]);
            let hi = b.min(self.piece_end(i));
            if lo < hi {
                sup = sup
                    .max(self.piece_value(i, lo))
                    .max(self.piece_value(i, hi));
            }
        }
        for (j, &t) in self.breakpoints.iter().enumerate() {
            if a < t && t < b {
                sup = sup.max(self.point_values[j]);
            }
        }
        sup
    }

    /// Breakpoints and one interior point of every piece, each with the
    /// distance to the next breakpoint (1 on the unbounded piece).
    fn probe_points(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(2 * self.breakpoints.len());
        for i in 0..=self.last() {
            let t = self.breakpoints[i];
            let end = self.piece_end(i);
            if end.is_finite() {
                let mid = t + (end - t) / 2.0;
                out.push((t, end - t));
                out.push((mid, end - mid));
            } else {
                out.push((t, 1.0));
                out.push((t + 1.0, 1.0));
            }
        }
        out
    }
}

/// Exact right-limit (equal to the right-limsup) of `μ` at `t`.
pub fn right_limsup(mu: &PiecewiseLinearGauge, t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(alloc::format!(
            "t = {t} must be finite and nonnegative"
        )));
    }
    Ok(match mu.locate(t) {
        Locus::Breakpoint(i) => mu.right_intercepts[i],
        Locus::Piece(i) => mu.piece_value(i, t),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum IntervalShape {
    /// `(t, t+ε)`
    Open,
    /// `[t, t+ε]`
    Closed,
    /// `(t, t+ε]`
    LeftOpen,
    /// `[t, t+ε)`
    RightOpen,
}

impl IntervalShape {
    fn closed_ends(self) -> (bool, bool) {
        match self {
            IntervalShape::Open => (false, false),
            IntervalShape::Closed => (true, true),
            IntervalShape::LeftOpen => (false, true),
            IntervalShape::RightOpen => (true, false),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SequenceKind {
    Nonincreasing,
    StrictlyDecreasing,
    EventuallyNonincreasing,
    EventuallyStrictlyDecreasing,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 4] = [
        SequenceKind::Nonincreasing,
        SequenceKind::StrictlyDecreasing,
        SequenceKind::EventuallyNonincreasing,
        SequenceKind::EventuallyStrictlyDecreasing,
    ];

    fn allows_repeats(self) -> bool {
        matches!(
            self,
            SequenceKind::Nonincreasing | SequenceKind::EventuallyNonincreasing
        )
    }

    fn allows_prefix(self) -> bool {
        matches!(
            self,
            SequenceKind::EventuallyNonincreasing | SequenceKind::EventuallyStrictlyDecreasing
        )
    }
}

/// Why a statement fails.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case"))]
pub enum GaugeWitness {
    /// The right-limit at `t` reaches `λ`.
    RightLimit { t: f64, value: f64, lambda: f64 },
    /// No `ε` (halved down to `eps`) keeps the supremum on the interval
    /// below `λ`.
    Interval {
        t: f64,
        eps: f64,
        shape: IntervalShape,
        sup: f64,
    },
    /// The sequence `limit + start·ratioⁿ` has `sup μ(x_n) = sup`.
    Sequence {
        kind: SequenceKind,
        limit: f64,
        start: f64,
        ratio: f64,
        sup: f64,
    },
}

pub type GaugeVerdict = Verdict<GaugeWitness>;

/// Decides statement `k` (1 to 10) of the MT(λ) characterization.
pub fn check_statement(mu: &PiecewiseLinearGauge, k: u8) -> Result<GaugeVerdict> {
    match k {
        1 => Ok(statement_right_limit(mu)),
        2 => Ok(statement_right_limit(&scale_to_unit(mu))),
        3 => Ok(statement_interval(mu, IntervalShape::Open)),
        4 => Ok(statement_interval(mu, IntervalShape::Closed)),
        5 => Ok(statement_interval(mu, IntervalShape::LeftOpen)),
        6 => Ok(statement_interval(mu, IntervalShape::RightOpen)),
        7 => Ok(statement_sequences(mu, SequenceKind::Nonincreasing)),
        8 => Ok(statement_sequences(mu, SequenceKind::StrictlyDecreasing)),
        9 => Ok(statement_sequences(
            mu,
            SequenceKind::EventuallyNonincreasing,
        )),
        10 => Ok(statement_sequences(
            mu,
            SequenceKind::EventuallyStrictlyDecreasing,
        )),
        _ => Err(Error::Domain(alloc::format!(
            "statement {k} is outside 1..=10"
        ))),
    }
}

fn statement_right_limit(mu: &PiecewiseLinearGauge) -> GaugeVerdict {
    for (t, _) in mu.probe_points() {
        let value = right_limsup(mu, t).expect("probe points are valid");
        if value >= mu.lambda {
            return Verdict::Fail(GaugeWitness::RightLimit {
                t,
                value,
                lambda: mu.lambda,
            });
        }
    }
    Verdict::Pass
}

fn statement_interval(mu: &PiecewiseLinearGauge, shape: IntervalShape) -> GaugeVerdict {
    let (left, right) = shape.closed_ends();
    for (t, room) in mu.probe_points() {
        let mut eps = room / 2.0;
        let mut sup = mu.sup_on(t, t + eps, left, right);
        let mut tries = 0;
        while sup >= mu.lambda && tries < 64 && t + eps / 2.0 > t {
            eps /= 2.0;
            sup = mu.sup_on(t, t + eps, left, right);
            tries += 1;
        }
        if sup >= mu.lambda {
            return Verdict::Fail(GaugeWitness::Interval { t, eps, shape, sup });
        }
    }
    Verdict::Pass
}

fn statement_sequences(mu: &PiecewiseLinearGauge, kind: SequenceKind) -> GaugeVerdict {
    // A (eventually) nonincreasing sequence in [0,∞) converges. Finitely many
    // terms each stay below λ, so sup μ(x_n) reaches λ only through the
    // limit: the right-limit at the limit point for a strictly decreasing
    // tail, or μ at the limit point for an eventually constant one.
    for (t, room) in mu.probe_points() {
        let approach = right_limsup(mu, t).expect("probe points are valid");
        let stationary = if kind.allows_repeats() {
            mu.value_at(t)
        } else {
            f64::NEG_INFINITY
        };
        let sup = approach.max(stationary);
        if sup >= mu.lambda {
            return Verdict::Fail(GaugeWitness::Sequence {
                kind,
                limit: t,
                start: room / 2.0,
                ratio: 0.5,
                sup,
            });
        }
    }
    Verdict::Pass
}

/// Verdicts for all ten statements.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct MtReport {
    pub lambda: f64,
    pub statements: Vec<StatementVerdict>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct StatementVerdict {
    pub statement: u8,
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub verdict: GaugeVerdict,
}

impl MtReport {
    pub fn all_pass(&self) -> bool {
        self.statements.iter().all(|s| s.verdict.is_pass())
    }

    /// Whether all ten verdicts agree.
    pub fn consistent(&self) -> bool {
        let first = self.statements[0].verdict.is_pass();
        self.statements.iter().all(|s| s.verdict.is_pass() == first)
    }
}

pub fn check_all(mu: &PiecewiseLinearGauge) -> MtReport {
    let statements = (1..=10)
        .map(|k| StatementVerdict {
            statement: k,
            verdict: check_statement(mu, k).expect("k in range"),
        })
        .collect();
    MtReport {
        lambda: mu.lambda,
        statements,
    }
}

/// Whether `μ` is an MT(λ)-function.
pub fn is_mt(mu: &PiecewiseLinearGauge) -> bool {
    statement_right_limit(mu).is_pass()
}

/// `μ/λ` as a gauge with `λ = 1`.
pub fn scale_to_unit(mu: &PiecewiseLinearGauge) -> PiecewiseLinearGauge {
    if mu.lambda == 1.0 {
        return mu.clone();
    }
    let div = |v: &[f64]| v.iter().map(|x| x / mu.lambda).collect::<Vec<_>>();
    PiecewiseLinearGauge {
        lambda: 1.0,
        breakpoints: mu.breakpoints.clone(),
        point_values: div(&mu.point_values),
        right_intercepts: div(&mu.right_intercepts),
        slopes: div(&mu.slopes),
    }
}

/// Largest `sup_n μ(x_n)` seen by the sampler and the sequence attaining it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SampledSup {
    pub sup: f64,
    pub sequence: Vec<f64>,
}

const SAMPLE_TERMS: usize = 64;
/// Smallest offset from the target, as a fraction of the room, so that the
/// gauge value stays distinguishable from its limit in `f64`.
const MIN_OFFSET: f64 = 1.0 / 1073741824.0;

/// Draws `n` sequences of the given kind, the `j`-th approaching breakpoint
/// `j mod (k+1)` from the right geometrically, and reports the largest
/// observed supremum. This is a semi-decision only.
pub fn sequence_sampler(
    mu: &PiecewiseLinearGauge,
    kind: SequenceKind,
    seed: u64,
    n: usize,
) -> SampledSup {
    sample(mu, kind, seed, n, |j| {
        mu.breakpoints[j % mu.breakpoints.len()]
    })
}

/// Like [`sequence_sampler`] with every sequence decreasing to `target`.
pub fn sample_toward(
    mu: &PiecewiseLinearGauge,
    kind: SequenceKind,
    target: f64,
    seed: u64,
    n: usize,
) -> SampledSup {
    sample(mu, kind, seed, n, |_| target)
}

fn sample(
    mu: &PiecewiseLinearGauge,
    kind: SequenceKind,
    seed: u64,
    n: usize,
    target: impl Fn(usize) -> f64,
) -> SampledSup {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let horizon = mu.breakpoints[mu.last()] + 2.0;
    let mut best = SampledSup {
        sup: f64::NEG_INFINITY,
        sequence: Vec::new(),
    };
    for j in 0..n.max(1) {
        let t = target(j);
        let room = match mu.locate(t) {
            Locus::Breakpoint(i) | Locus::Piece(i) => mu.piece_end(i).min(t + 2.0) - t,
        };
        let mut offset = room * rng.gen_range(0.25..1.0);
        let ratio = rng.gen_range(0.25..0.5);
        let mut seq = Vec::with_capacity(SAMPLE_TERMS + 4);
        if kind.allows_prefix() {
            for _ in 0..rng.gen_range(1..=4) {
                seq.push(rng.gen_range(0.0..horizon));
            }
        }
        let mut last = f64::INFINITY;
        while seq.len() < SAMPLE_TERMS {
            let x = t + offset;
            if x >= last || offset < room * MIN_OFFSET {
                break;
            }
            seq.push(x);
            if kind.allows_repeats() && rng.gen_bool(0.25) {
                seq.push(x);
            }
            last = x;
            offset *= ratio;
        }
        let sup = seq
            .iter()
            .map(|&x| mu.value_at(x))
            .fold(f64::NEG_INFINITY, f64::max);
        if sup > best.sup {
            best = SampledSup { sup, sequence: seq };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// λ = 1, right-limit 1 at 0, `1 − s/10` on `(0,10)`, 0 afterwards.
    fn spike() -> PiecewiseLinearGauge {
        PiecewiseLinearGauge::new(
            1.0,
            vec![0.0, 10.0],
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![-0.1, 0.0],
        )
        .unwrap()
    }

    #[test]
    fn right_limits() {
        let half = PiecewiseLinearGauge::constant(1.0, 0.5).unwrap();
        assert_eq!(right_limsup(&half, 0.0).unwrap(), 0.5);
        assert_eq!(right_limsup(&half, 17.25).unwrap(), 0.5);
        assert_eq!(right_limsup(&spike(), 0.0).unwrap(), 1.0);
        assert_eq!(right_limsup(&spike(), 5.0).unwrap(), 0.5);
        assert!(right_limsup(&spike(), -1.0).is_err());
        assert!(right_limsup(&spike(), f64::NAN).is_err());
    }

    #[test]
    fn right_limit_matches_dense_sampling() {
        let g = spike();
        let near = (1..=1000).map(|i| g.value_at(5.0 + i as f64 * 1e-9));
        let sampled = near.fold(f64::NEG_INFINITY, f64::max);
        assert!((sampled - right_limsup(&g, 5.0).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn constant_passes_everything() {
        let r = check_all(&PiecewiseLinearGauge::constant(1.0, 0.5).unwrap());
        assert!(r.all_pass());
    }

    #[test]
    fn spike_fails_everything_at_zero() {
        let r = check_all(&spike());
        assert!(r.consistent());
        for s in &r.statements {
            let w = s.verdict.witness().expect("fails");
            let t = match *w {
                GaugeWitness::RightLimit { t, .. } => t,
                GaugeWitness::Interval { t, .. } => t,
                GaugeWitness::Sequence { limit, .. } => limit,
            };
            assert_eq!(t, 0.0, "statement {}", s.statement);
        }
    }

    #[test]
    fn statement_index_checked() {
        assert!(check_statement(&spike(), 0).is_err());
        assert!(check_statement(&spike(), 11).is_err());
    }

    #[test]
    fn rejects_attaining_lambda() {
        assert!(PiecewiseLinearGauge::constant(1.0, 1.0).is_err());
        // Rising piece that crosses λ inside the piece.
        assert!(PiecewiseLinearGauge::new(
            1.0,
            vec![0.0, 2.0],
            vec![0.0, 0.0],
            vec![0.5, 0.0],
            vec![0.5, 0.0]
        )
        .is_err());
        // Non-constant tail.
        assert!(
            PiecewiseLinearGauge::new(1.0, vec![0.0], vec![0.0], vec![0.5], vec![-0.1]).is_err()
        );
        // Negative value.
        assert!(
            PiecewiseLinearGauge::new(1.0, vec![0.0], vec![-0.1], vec![0.0], vec![0.0]).is_err()
        );
        assert!(
            PiecewiseLinearGauge::new(1.0, vec![1.0], vec![0.0], vec![0.0], vec![0.0]).is_err()
        );
        assert!(
            PiecewiseLinearGauge::new(0.0, vec![0.0], vec![0.0], vec![0.0], vec![0.0]).is_err()
        );
    }

    #[test]
    fn scaling() {
        let g = PiecewiseLinearGauge::constant(2.0, 1.0).unwrap();
        let u = scale_to_unit(&g);
        assert_eq!(u.lambda(), 1.0);
        assert_eq!(u.value_at(3.0), 0.5);
        let half = PiecewiseLinearGauge::constant(1.0, 0.5).unwrap();
        assert_eq!(scale_to_unit(&half), half);
    }

    #[test]
    fn sampler_on_constant() {
        let g = PiecewiseLinearGauge::constant(1.0, 0.5).unwrap();
        for kind in SequenceKind::ALL {
            assert_eq!(sequence_sampler(&g, kind, 7, 8).sup, 0.5);
        }
    }

    #[test]
    fn sampler_approaches_lambda_on_spike() {
        let s = sample_toward(&spike(), SequenceKind::StrictlyDecreasing, 0.0, 3, 4);
        assert!(s.sup > 1.0 - 2f64.powi(-20));
        assert!(s.sup < 1.0);
        assert!(s.sequence.windows(2).all(|w| w[0] > w[1]));
    }
}
