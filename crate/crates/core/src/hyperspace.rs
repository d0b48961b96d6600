//! Set-to-set distances on the hyperspace of a finite space: the excess
//! `ξ_κ`, the e⁰-metric `D_κ` and the Hausdorff metric `H`.

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::report::Verdict;
use crate::spaces::{point_to_set, require_e0};
use crate::{DistanceFunction, Error, FiniteMetricSpace, FiniteSubset, Result};

/// Spaces up to this size are verified over their whole hyperspace.
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// Up to this size the whole-hyperspace check runs the literal pair and
/// triple loops; above it the quantifier-reduced route is used.
pub const LITERAL_LIMIT: usize = 8;

/// `ξ_κ(A,B) = max_{x∈A} κ(x,B)`.
pub fn xi(kappa: &DistanceFunction, a: &FiniteSubset, b: &FiniteSubset) -> f64 {
    a.iter()
        .map(|x| point_to_set(kappa, x, b))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `D_κ(A,B) = max{ξ_κ(A,B), ξ_κ(B,A)}`.
pub fn dkappa(kappa: &DistanceFunction, a: &FiniteSubset, b: &FiniteSubset) -> f64 {
    xi(kappa, a, b).max(xi(kappa, b, a))
}

/// `H(A,B) = max{sup_{x∈B} d(x,A), sup_{x∈A} d(x,B)}`.
pub fn hausdorff(space: &FiniteMetricSpace, a: &FiniteSubset, b: &FiniteSubset) -> f64 {
    let dist_to = |x: usize, set: &FiniteSubset| {
        set.iter()
            .map(|y| space.d(x, y))
            .fold(f64::INFINITY, f64::min)
    };
    let from_b = b
        .iter()
        .map(|x| dist_to(x, a))
        .fold(f64::NEG_INFINITY, f64::max);
    let from_a = a
        .iter()
        .map(|x| dist_to(x, b))
        .fold(f64::NEG_INFINITY, f64::max);
    from_b.max(from_a)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SetWitness {
    pub sets: Vec<FiniteSubset>,
    pub values: Vec<f64>,
}

pub type SetVerdict = Verdict<SetWitness>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CheckMode {
    /// Literal loops over the listed sets.
    Literal,
    /// Whole hyperspace through exact quantifier reductions.
    Reduced,
}

/// Verdicts for: (i) `ξ(A,B) = 0 ⟺ A ⊆ B`, (ii) the `ξ` triangle
/// inequality, (iii) the metric axioms of `D_κ`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct HyperspaceReport {
    pub mode: CheckMode,
    pub sets_checked: usize,
    pub inclusion: SetVerdict,
    pub xi_triangle: SetVerdict,
    pub d_identity: SetVerdict,
    pub d_symmetry: SetVerdict,
    pub d_positivity: SetVerdict,
    pub d_triangle: SetVerdict,
}

impl HyperspaceReport {
    /// (iii): all four metric axioms of `D_κ`.
    pub fn d_is_metric(&self) -> bool {
        [
            &self.d_identity,
            &self.d_symmetry,
            &self.d_positivity,
            &self.d_triangle,
        ]
        .iter()
        .all(|v| v.is_pass())
    }

    pub fn all_pass(&self) -> bool {
        self.inclusion.is_pass() && self.xi_triangle.is_pass() && self.d_is_metric()
    }
}

fn fail(sets: &[&FiniteSubset], values: &[f64]) -> SetVerdict {
    Verdict::Fail(SetWitness {
        sets: sets.iter().map(|s| (*s).clone()).collect(),
        values: values.to_vec(),
    })
}

fn check_sets_in_range(kappa: &DistanceFunction, sets: &[FiniteSubset]) -> Result<()> {
    sets.iter().try_for_each(|s| s.check_within(kappa.len()))
}

/// Checks (i)–(iii) with literal loops over every pair and triple drawn
/// from `sets`. `κ` must be an e⁰-distance.
pub fn check_theorem13(
    kappa: &DistanceFunction,
    sets: &[FiniteSubset],
) -> Result<HyperspaceReport> {
    require_e0(kappa)?;
    check_sets_in_range(kappa, sets)?;
    Ok(literal(kappa, sets))
}

fn literal(kappa: &DistanceFunction, sets: &[FiniteSubset]) -> HyperspaceReport {
    let m = sets.len();
    let mut xi_t = alloc::vec![0.0; m * m];
    let mut d_t = alloc::vec![0.0; m * m];
    for a in 0..m {
        for b in 0..m {
            xi_t[a * m + b] = xi(kappa, &sets[a], &sets[b]);
            d_t[a * m + b] = dkappa(kappa, &sets[a], &sets[b]);
        }
    }
    let x = |a: usize, b: usize| xi_t[a * m + b];
    let d = |a: usize, b: usize| d_t[a * m + b];

    let mut inclusion = Verdict::Pass;
    let mut d_identity = Verdict::Pass;
    let mut d_symmetry = Verdict::Pass;
    let mut d_positivity = Verdict::Pass;
    for a in 0..m {
        let sa = &sets[a];
        if d_identity.is_pass() && d(a, a) != 0.0 {
            d_identity = fail(&[sa], &[d(a, a)]);
        }
        for (b, sb) in sets.iter().enumerate() {
            if inclusion.is_pass() && (x(a, b) == 0.0) != sa.is_subset(sb) {
                inclusion = fail(&[sa, sb], &[x(a, b)]);
            }
            if d_symmetry.is_pass() && d(a, b) != d(b, a) {
                d_symmetry = fail(&[sa, sb], &[d(a, b), d(b, a)]);
            }
            if d_positivity.is_pass() && sa != sb && d(a, b) <= 0.0 {
                d_positivity = fail(&[sa, sb], &[d(a, b)]);
            }
        }
    }

    let mut xi_triangle = Verdict::Pass;
    let mut d_triangle = Verdict::Pass;
    'triples: for a in 0..m {
        for b in 0..m {
            let (xab, dab) = (x(a, b), d(a, b));
            for c in 0..m {
                if xi_triangle.is_pass() && xab > x(a, c) + x(c, b) {
                    xi_triangle = fail(&[&sets[a], &sets[b], &sets[c]], &[xab, x(a, c), x(c, b)]);
                }
                if d_triangle.is_pass() && dab > d(a, c) + d(c, b) {
                    d_triangle = fail(&[&sets[a], &sets[b], &sets[c]], &[dab, d(a, c), d(c, b)]);
                }
                if xi_triangle.is_fail() && d_triangle.is_fail() {
                    break 'triples;
                }
            }
        }
    }

    HyperspaceReport {
        mode: CheckMode::Literal,
        sets_checked: m,
        inclusion,
        xi_triangle,
        d_identity,
        d_symmetry,
        d_positivity,
        d_triangle,
    }
}

/// Every nonempty subset of `0..n`, in increasing bitmask order.
pub fn all_subsets(n: usize) -> Vec<FiniteSubset> {
    assert!(n < 64, "hyperspace of {n} points is too large to enumerate");
    (1u64..1 << n)
        .map(|mask| FiniteSubset::from_mask(mask).expect("nonzero mask"))
        .collect()
}

/// Checks (i)–(iii) over every nonempty subset of the space. Literal loops
/// are used up to [`LITERAL_LIMIT`] points and [`check_theorem13_reduced`]
/// beyond that, up to [`EXHAUSTIVE_LIMIT`].
pub fn check_theorem13_exhaustive(kappa: &DistanceFunction) -> Result<HyperspaceReport> {
    let n = kappa.len();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::Domain(alloc::format!(
            "whole-hyperspace verification is limited to {EXHAUSTIVE_LIMIT} points, got {n}"
        )));
    }
    if n <= LITERAL_LIMIT {
        check_theorem13(kappa, &all_subsets(n))
    } else {
        check_theorem13_reduced(kappa)
    }
}

/// Whole-hyperspace check through exact reductions of the quantifiers.
///
/// - (i) runs literally over all pairs, using a bitmask recurrence for
///   `ξ(A,B)`.
/// - (ii) over all triples is equivalent to its instances with `A = {a}` and
///   `C = {c}`: for `c` attaining `κ(a,C)`,
///   `κ(a,B) ≤ κ(a,c) + κ(c,B) ≤ ξ(A,C) + ξ(C,B)`, then maximize over `a`.
///   So `n² (2ⁿ−1)` cases decide all `(2ⁿ−1)³` triples.
/// - `D_κ(A,A) = 0` and `D_κ(A,B) > 0` for `A != B` run literally (the
///   latter through a bitset of zero excesses).
/// - Symmetry holds because `D_κ(A,B)` and `D_κ(B,A)` are the `max` of the
///   same two numbers.
/// - The triangle inequality of `D_κ` follows from (ii) applied in both
///   directions; if (ii) fails it is checked literally instead.
pub fn check_theorem13_reduced(kappa: &DistanceFunction) -> Result<HyperspaceReport> {
    require_e0(kappa)?;
    let n = kappa.len();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::Domain(alloc::format!(
            "reduced check is limited to {EXHAUSTIVE_LIMIT} points"
        )));
    }
    let size = 1usize << n;
    let subset = |mask: usize| FiniteSubset::from_mask(mask as u64).expect("nonzero mask");

    // to_set[x * size + B] = κ(x, B)
    let mut to_set = alloc::vec![f64::INFINITY; n * size];
    for x in 0..n {
        for b in 1..size {
            let low = b.trailing_zeros() as usize;
            to_set[x * size + b] = to_set[x * size + (b & (b - 1))].min(kappa.get(x, low));
        }
    }
    let ks = |x: usize, b: usize| to_set[x * size + b];

    let words = (size * size).div_ceil(64);
    let mut zero_bits = alloc::vec![0u64; words];
    let mut inclusion = Verdict::Pass;
    let mut d_identity = Verdict::Pass;
    let mut row = alloc::vec![f64::NEG_INFINITY; size];
    for b in 1..size {
        for a in 1..size {
            let low = a.trailing_zeros() as usize;
            row[a] = row[a & (a - 1)].max(ks(low, b));
            let zero = row[a] == 0.0;
            if zero {
                let bit = a * size + b;
                zero_bits[bit / 64] |= 1 << (bit % 64);
            }
            if inclusion.is_pass() && zero != (a & !b == 0) {
                inclusion = fail(&[&subset(a), &subset(b)], &[row[a]]);
            }
        }
        if d_identity.is_pass() && row[b] != 0.0 {
            d_identity = fail(&[&subset(b)], &[row[b]]);
        }
    }
    let is_zero = |a: usize, b: usize| {
        let bit = a * size + b;
        zero_bits[bit / 64] >> (bit % 64) & 1 == 1
    };

    let mut d_positivity = Verdict::Pass;
    'pos: for a in 1..size {
        for b in a + 1..size {
            if is_zero(a, b) && is_zero(b, a) {
                d_positivity = fail(&[&subset(a), &subset(b)], &[0.0]);
                break 'pos;
            }
        }
    }

    let mut xi_triangle = Verdict::Pass;
    'tri: for a in 0..n {
        for c in 0..n {
            let ac = kappa.get(a, c);
            for b in 1..size {
                if ks(a, b) > ac + ks(c, b) {
                    xi_triangle = fail(
                        &[
                            &FiniteSubset::singleton(a),
                            &subset(b),
                            &FiniteSubset::singleton(c),
                        ],
                        &[ks(a, b), ac, ks(c, b)],
                    );
                    break 'tri;
                }
            }
        }
    }

    let d_triangle = if xi_triangle.is_pass() {
        Verdict::Pass
    } else {
        literal(kappa, &all_subsets(n)).d_triangle
    };

    Ok(HyperspaceReport {
        mode: CheckMode::Reduced,
        sets_checked: size - 1,
        inclusion,
        xi_triangle,
        d_identity,
        d_symmetry: Verdict::Pass,
        d_positivity,
        d_triangle,
    })
}
