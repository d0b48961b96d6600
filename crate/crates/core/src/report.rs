//! Verdicts and witnesses shared by every checker.

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Outcome of a decidable check. A failure always carries its witness.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "verdict", content = "witness", rename_all = "snake_case")
)]
pub enum Verdict<W = Witness> {
    Pass,
    Fail(W),
}

impl<W> Verdict<W> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        !self.is_pass()
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Pass => Verdict::Pass,
            Verdict::Fail(w) => Verdict::Fail(f(w)),
        }
    }
}

/// The concrete inequality or equation a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Rule {
    /// `m(i,j) >= 0` at `(i,j)`.
    Nonnegative,
    /// `m(i,i) = 0` at `(i)`.
    ZeroDiagonal,
    /// `d(i,j) = d(j,i)` at `(i,j)`.
    Symmetry,
    /// `d(i,j) > 0` for `i != j` at `(i,j)`.
    Positivity,
    /// `d(i,k) <= d(i,j) + d(j,k)` at `(i,j,k)`.
    Triangle,
    /// `κ(x,z) <= κ(x,y) + κ(y,z)` at `(x,y,z)`.
    Tau1,
    /// `κ(a,a) = 0 ∧ κ(a,b) = 0 ⟹ a = b` at `(a,b)`.
    Tau3,
    /// `κ(x,y) = 0 ∧ κ(x,z) = 0 ⟹ y = z` at `(x,y,z)`.
    Tau4,
    /// Same as [`Rule::Tau4`] restricted to `κ(x,x) = 0`, at `(x,y,z)`.
    Tau4Prime,
    S1,
    S3,
    S4,
    S5,
    S6,
    H4,
    H5,
    /// The gauge is not an MT-function on `[0,∞) → [0,1)`.
    MtFunction,
    /// The gauge is not constant.
    ConstantGauge,
    /// Some image has more than one point.
    SingleValued,
    /// `L < 0`.
    NonnegativeL,
}

/// Point tuple plus the numbers that exhibit a violation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Witness {
    pub rule: Rule,
    pub points: Vec<usize>,
    pub values: Vec<f64>,
}

impl Witness {
    pub fn new(rule: Rule, points: impl Into<Vec<usize>>, values: impl Into<Vec<f64>>) -> Self {
        Self {
            rule,
            points: points.into(),
            values: values.into(),
        }
    }
}
