//! Seeded generation of spaces, distances, gauges, maps and complete
//! instances, plus single-edit mutations for negative testing.
//!
//! All numbers produced here are dyadic rationals of small magnitude, so
//! every sum, product and comparison the checkers perform on them is exact.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::hyperspace::dkappa;
use crate::instance::Provenance;
use crate::mt::is_mt;
use crate::report::{Rule, Verdict};
use crate::solver::{
    check_s1, check_s3, check_s4, check_s5, check_s6, verify_theorem, MultivaluedMap, SelfMap,
    TheoremId,
};
use crate::spaces::{check_zero_structure, point_to_set, shortest_path_closure};
use crate::{
    DistanceFunction, Error, FiniteMetricSpace, FiniteSubset, Instance, PiecewiseLinearGauge,
    Result, SquareMatrix,
};

pub const MIN_POINTS: usize = 2;
pub const MAX_POINTS: usize = 200;

/// Repair rounds before a generation attempt is rejected.
pub const REPAIR_BUDGET: usize = 32;

const WEIGHT_UNIT: f64 = 1.0 / 64.0;
const GAUGE_UNIT: f64 = 1.0 / 256.0;

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        #[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
        pub enum $name {
            $(#[cfg_attr(feature = "serde", serde(rename = $text))] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(Error::Domain(alloc::format!(
                        concat!("unknown ", stringify!($name), " `{}`"), s
                    ))),
                }
            }
        }
    };
}

named_enum! {
    SpaceKind {
        GridClosure => "grid-closure",
        Line => "line",
    }
}

named_enum! {
    MapKind {
        ConstantTarget => "constant-target",
        Funnel => "funnel",
        RandomRejection => "random-rejection",
        Cycle => "cycle",
    }
}

named_enum! {
    Mutation {
        DropZ => "drop-z",
        RaiseGap => "raise-gap",
        BreakInvariance => "break-invariance",
        ZeroOffdiagonal => "zero-offdiagonal",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum KappaKind {
    Metric,
    /// `κ = β·d` with `β ∈ {1, 2, 4}`.
    ScaledMetric(u8),
    AsymmetricClosure,
}

impl KappaKind {
    pub fn name(self) -> String {
        match self {
            KappaKind::Metric => "metric".into(),
            KappaKind::ScaledMetric(b) => alloc::format!("scaled-metric-{b}"),
            KappaKind::AsymmetricClosure => "asymmetric-closure".into(),
        }
    }
}

impl fmt::Display for KappaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for KappaKind {
    type Err = Error;

    /// `metric`, `asymmetric-closure`, `scaled-metric` (β = 2) or
    /// `scaled-metric-β`.
    fn from_str(s: &str) -> Result<Self> {
        let kind = match s {
            "metric" => KappaKind::Metric,
            "asymmetric-closure" => KappaKind::AsymmetricClosure,
            "scaled-metric" => KappaKind::ScaledMetric(2),
            _ => match s
                .strip_prefix("scaled-metric-")
                .and_then(|b| b.parse::<u8>().ok())
            {
                Some(b @ (1 | 2 | 4)) => KappaKind::ScaledMetric(b),
                _ => return Err(Error::Domain(alloc::format!("unknown KappaKind `{s}`"))),
            },
        };
        Ok(kind)
    }
}

/// Everything that determines a generated instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GenProfile {
    pub seed: u64,
    pub n_points: usize,
    pub space_kind: SpaceKind,
    pub kappa_kind: KappaKind,
    pub map_kind: MapKind,
    pub theorem_target: Option<TheoremId>,
    pub mutation: Option<Mutation>,
}

impl GenProfile {
    pub fn new(seed: u64, n_points: usize) -> Self {
        Self {
            seed,
            n_points,
            space_kind: SpaceKind::GridClosure,
            kappa_kind: KappaKind::Metric,
            map_kind: MapKind::Funnel,
            theorem_target: None,
            mutation: None,
        }
    }

    pub fn target(mut self, theorem: TheoremId) -> Self {
        self.theorem_target = Some(theorem);
        self
    }

    pub fn space(mut self, kind: SpaceKind) -> Self {
        self.space_kind = kind;
        self
    }

    pub fn kappa(mut self, kind: KappaKind) -> Self {
        self.kappa_kind = kind;
        self
    }

    pub fn map(mut self, kind: MapKind) -> Self {
        self.map_kind = kind;
        self
    }

    pub fn mutate(mut self, mutation: Mutation) -> Self {
        self.mutation = Some(mutation);
        self
    }

    /// Compact description stored as provenance; the seed is kept apart.
    pub fn describe(&self) -> String {
        let mut s = alloc::format!(
            "n={} space={} kappa={} map={}",
            self.n_points,
            self.space_kind,
            self.kappa_kind,
            self.map_kind
        );
        if let Some(t) = self.theorem_target {
            s.push_str(&alloc::format!(" target={t}"));
        }
        if let Some(m) = self.mutation {
            s.push_str(&alloc::format!(" mutation={m}"));
        }
        s
    }

    /// Inverse of [`GenProfile::describe`]: whitespace-separated `key=value`
    /// pairs with keys `n`, `space`, `kappa`, `map`, `target`, `mutation`.
    /// Missing keys keep the defaults of [`GenProfile::new`] with 8 points.
    pub fn from_description(seed: u64, text: &str) -> Result<Self> {
        let mut p = GenProfile::new(seed, 8);
        for token in text.split_whitespace() {
            let (key, value) = token.split_once('=').ok_or_else(|| {
                Error::Domain(alloc::format!("expected key=value, got `{token}`"))
            })?;
            match key {
                "n" => {
                    p.n_points = value
                        .parse()
                        .map_err(|_| Error::Domain(alloc::format!("bad point count `{value}`")))?
                }
                "space" => p.space_kind = value.parse()?,
                "kappa" => p.kappa_kind = value.parse()?,
                "map" => p.map_kind = value.parse()?,
                "target" => p.theorem_target = Some(value.parse()?),
                "mutation" => p.mutation = Some(value.parse()?),
                _ => return Err(Error::Domain(alloc::format!("unknown profile key `{key}`"))),
            }
        }
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        if !(MIN_POINTS..=MAX_POINTS).contains(&self.n_points) {
            return Err(Error::Domain(alloc::format!(
                "n_points = {} is outside {MIN_POINTS}..={MAX_POINTS}",
                self.n_points
            )));
        }
        if let KappaKind::ScaledMetric(b) = self.kappa_kind {
            if !matches!(b, 1 | 2 | 4) {
                return Err(Error::Domain(alloc::format!(
                    "scale factor {b} is not one of 1, 2, 4"
                )));
            }
        }
        Ok(())
    }
}

/// Independent random stream for one generation stage.
fn stream(seed: u64, stage: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stage);
    rng
}

fn grid_weight(rng: &mut impl Rng) -> f64 {
    rng.gen_range(16u32..=80) as f64 * WEIGHT_UNIT
}

/// Space for `profile`: a shortest-path closure of random symmetric grid
/// weights, or points of a line at the triangular numbers `0, 1, 3, 6, …`.
pub fn gen_space(profile: &GenProfile) -> Result<FiniteMetricSpace> {
    profile.check()?;
    let n = profile.n_points;
    match profile.space_kind {
        SpaceKind::Line => {
            let coords: Vec<f64> = (0..n).map(|i| (i * (i + 1) / 2) as f64).collect();
            FiniteMetricSpace::on_line(&coords)
        }
        SpaceKind::GridClosure => {
            let mut rng = stream(profile.seed, 1);
            let mut w = SquareMatrix::zeros(n);
            for i in 0..n {
                for j in i + 1..n {
                    let x = grid_weight(&mut rng);
                    w.set(i, j, x);
                    w.set(j, i, x);
                }
            }
            FiniteMetricSpace::with_default_labels(shortest_path_closure(&w))
        }
    }
}

/// An e⁰-distance of the requested kind on `space`.
pub fn gen_kappa(profile: &GenProfile, space: &FiniteMetricSpace) -> Result<DistanceFunction> {
    profile.check()?;
    let n = space.len();
    let m = match profile.kappa_kind {
        KappaKind::Metric => space.matrix().clone(),
        KappaKind::ScaledMetric(b) => space.matrix().scaled(b as f64),
        KappaKind::AsymmetricClosure => {
            let mut rng = stream(profile.seed, 2);
            let w =
                SquareMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { grid_weight(&mut rng) });
            shortest_path_closure(&w)
        }
    };
    DistanceFunction::for_space(space, m)
}

/// Unconstrained matrix with sprinkled zeros, for exercising the axiom
/// checkers on distances that are not e⁰.
pub fn gen_raw_kappa(seed: u64, n: usize) -> DistanceFunction {
    let mut rng = stream(seed, 7);
    let m = SquareMatrix::from_fn(n, |i, j| {
        let zero_odds = if i == j { 0.75 } else { 0.2 };
        if rng.gen_bool(zero_odds) {
            0.0
        } else {
            grid_weight(&mut rng)
        }
    });
    DistanceFunction::new(m).expect("entries are finite and nonnegative")
}

/// A piecewise-linear gauge with values in `[0, λ)`. With `mt = false` one
/// finite piece has right-limit exactly `λ` at its left breakpoint, so the
/// gauge is not MT(λ). With `mt = true` an occasional piece still
/// approaches `λ` from the left, which does not break the MT property.
pub fn gen_gauge(seed: u64, lambda: f64, mt: bool) -> PiecewiseLinearGauge {
    let mut rng = stream(seed, 4);
    let pieces = rng.gen_range(1usize..=4);
    let level = |rng: &mut ChaCha8Rng| lambda * rng.gen_range(0u32..256) as f64 * GAUGE_UNIT;
    let mut breakpoints = alloc::vec![0.0];
    for _ in 1..pieces {
        let step = f64::from(1u32 << rng.gen_range(0..5)) / 4.0;
        breakpoints.push(breakpoints.last().unwrap() + step);
    }
    let spike = (!mt && pieces > 1).then(|| rng.gen_range(0..pieces - 1));
    let mut point_values = Vec::new();
    let mut intercepts = Vec::new();
    let mut slopes = Vec::new();
    for i in 0..pieces {
        point_values.push(level(&mut rng));
        if i + 1 == pieces {
            intercepts.push(level(&mut rng));
            slopes.push(0.0);
            continue;
        }
        let len = breakpoints[i + 1] - breakpoints[i];
        let (c, e) = if spike == Some(i) {
            (lambda, level(&mut rng))
        } else if mt && rng.gen_bool(0.125) {
            (level(&mut rng), lambda)
        } else {
            (level(&mut rng), level(&mut rng))
        };
        intercepts.push(c);
        slopes.push((e - c) / len);
    }
    if !mt && spike.is_none() {
        // A single constant piece cannot reach λ; add a spike piece before it.
        breakpoints.push(1.0);
        point_values.push(level(&mut rng));
        intercepts[0] = lambda;
        slopes[0] = -lambda;
        intercepts.push(level(&mut rng));
        slopes.push(0.0);
    }
    PiecewiseLinearGauge::new(lambda, breakpoints, point_values, intercepts, slopes)
        .expect("generated gauge is well formed")
}

/// MT-function with values at most `15/16` used by theorem instances.
pub fn gen_unit_mt_gauge(seed: u64) -> PiecewiseLinearGauge {
    let mut rng = stream(seed, 5);
    let mut level = || rng.gen_range(0u32..=240) as f64 * GAUGE_UNIT;
    let shape = level() as u32 % 3;
    let mu = match shape {
        0 => PiecewiseLinearGauge::constant(1.0, 0.5 + level() / 2.0),
        _ => {
            let (p0, c0, e0, p1, c1) = (level(), level(), level(), level(), level());
            PiecewiseLinearGauge::new(
                1.0,
                alloc::vec![0.0, 4.0],
                alloc::vec![p0, p1],
                alloc::vec![c0, c1],
                alloc::vec![(e0 - c0) / 4.0, 0.0],
            )
        }
    };
    let mu = mu.expect("generated gauge is well formed");
    debug_assert!(is_mt(&mu));
    mu
}

fn random_subset(rng: &mut ChaCha8Rng, pool: &[usize], max: usize) -> FiniteSubset {
    let k = rng.gen_range(1..=max.min(pool.len()));
    FiniteSubset::new(pool.choose_multiple(rng, k).copied()).expect("pool is nonempty")
}

fn initial_map(
    kind: MapKind,
    kappa: &DistanceFunction,
    rng: &mut ChaCha8Rng,
    attractor: usize,
) -> MultivaluedMap {
    let n = kappa.len();
    let all: Vec<usize> = (0..n).collect();
    let images = match kind {
        MapKind::ConstantTarget => alloc::vec![FiniteSubset::singleton(attractor); n],
        MapKind::Cycle => (0..n)
            .map(|x| FiniteSubset::singleton((x + 1) % n))
            .collect(),
        MapKind::RandomRejection => (0..n).map(|_| random_subset(rng, &all, 3)).collect(),
        MapKind::Funnel => (0..n)
            .map(|x| {
                if x == attractor {
                    return FiniteSubset::singleton(x);
                }
                let mut closer: Vec<usize> = (0..n)
                    .filter(|&y| kappa.get(y, attractor) < kappa.get(x, attractor))
                    .collect();
                closer.retain(|&y| y != x);
                random_subset(rng, &closer, 3)
            })
            .collect(),
    };
    MultivaluedMap::new(images).expect("images are in range")
}

fn single_valued_funnel(
    kappa: &DistanceFunction,
    rng: &mut ChaCha8Rng,
    attractor: usize,
) -> MultivaluedMap {
    let n = kappa.len();
    let targets: Vec<usize> = (0..n)
        .map(|x| {
            if x == attractor {
                return x;
            }
            let closer: Vec<usize> = (0..n)
                .filter(|&y| y != x && kappa.get(y, attractor) < kappa.get(x, attractor))
                .collect();
            *closer.choose(rng).expect("the attractor is closer")
        })
        .collect();
    MultivaluedMap::single_valued(&targets).expect("targets are in range")
}

/// Repairs (S1) or (S3) violations. Early rounds add an admissible `z` to
/// `Ty`; later rounds make `y` a fixed point, which always resolves the pair.
fn repair_contraction(
    kappa: &DistanceFunction,
    t: &mut MultivaluedMap,
    mu: &PiecewiseLinearGauge,
    rng: &mut ChaCha8Rng,
    include_diagonal: bool,
) -> bool {
    let n = t.len();
    for round in 0..REPAIR_BUDGET {
        let mut clean = true;
        for x in 0..n {
            let members: Vec<usize> = t.image(x).iter().collect();
            for y in members {
                if y == x && !include_diagonal {
                    continue;
                }
                let bound = mu.value_at(kappa.get(x, y)) * kappa.get(x, y);
                if point_to_set(kappa, y, t.image(y)) <= bound {
                    continue;
                }
                clean = false;
                let admissible: Vec<usize> = (0..n)
                    .filter(|&z| z != y && kappa.get(y, z) <= bound)
                    .collect();
                let z = match admissible.choose(rng) {
                    Some(&z) if round < REPAIR_BUDGET / 2 => z,
                    _ => y,
                };
                t.image_mut(y).insert(z);
            }
        }
        if clean {
            return true;
        }
    }
    false
}

/// Adds `φ(Tx)` to `Tx` until every image is φ-invariant.
fn close_under(phi: &SelfMap, t: &mut MultivaluedMap) {
    for x in 0..t.len() {
        let mut frontier: Vec<usize> = t.image(x).iter().collect();
        while let Some(y) = frontier.pop() {
            if t.image_mut(x).insert(phi.apply(y)) {
                frontier.push(phi.apply(y));
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PairCondition {
    S5,
    S6,
}

/// Smallest `L` making the pair condition hold, or every pair no `L` can
/// fix (its offset `κ(φy,Tx)` is 0).
fn minimal_l(
    cond: PairCondition,
    kappa: &DistanceFunction,
    t: &MultivaluedMap,
    phi: &SelfMap,
    mu: &PiecewiseLinearGauge,
) -> core::result::Result<f64, Vec<(usize, usize)>> {
    let mut l_min: f64 = 0.0;
    let mut stuck = Vec::new();
    for x in 0..t.len() {
        for y in 0..t.len() {
            let lhs = match cond {
                PairCondition::S5 => point_to_set(kappa, y, t.image(y)),
                PairCondition::S6 => dkappa(kappa, t.image(x), t.image(y)),
            };
            let slack = lhs - mu.value_at(kappa.get(x, y)) * kappa.get(x, y);
            if slack <= 0.0 {
                continue;
            }
            let offset = point_to_set(kappa, phi.apply(y), t.image(x));
            if offset == 0.0 {
                stuck.push((x, y));
            } else {
                l_min = l_min.max(slack / offset);
            }
        }
    }
    if stuck.is_empty() {
        Ok(l_min)
    } else {
        Err(stuck)
    }
}

fn pair_check(
    cond: PairCondition,
    kappa: &DistanceFunction,
    t: &MultivaluedMap,
    phi: &SelfMap,
    mu: &PiecewiseLinearGauge,
    l: f64,
) -> Verdict {
    match cond {
        PairCondition::S5 => check_s5(kappa, t, phi, mu, l),
        PairCondition::S6 => check_s6(kappa, t, phi, mu, l),
    }
}

/// `L` on the 2⁻⁶ grid strictly above the minimum, confirmed by the checker.
fn calibrate_l(
    cond: PairCondition,
    kappa: &DistanceFunction,
    t: &MultivaluedMap,
    phi: &SelfMap,
    mu: &PiecewiseLinearGauge,
    l_min: f64,
) -> Option<f64> {
    let mut l = libm_floor(l_min * 64.0) / 64.0 + WEIGHT_UNIT;
    for _ in 0..4 {
        if pair_check(cond, kappa, t, phi, mu, l).is_pass() {
            return Some(l);
        }
        l += WEIGHT_UNIT;
    }
    None
}

fn libm_floor(x: f64) -> f64 {
    // Values here are nonnegative and far below 2⁵².
    (x as u64) as f64
}

/// Makes (S5) or (S6) satisfiable for some `L` while keeping (S4), then
/// calibrates `L`. Unfixable pairs are resolved by `φ(y) = y` when `y ∉ Tx`;
/// otherwise (S5) makes `y` a fixed point and (S6) sets `Ty := Tx`.
fn repair_pair_condition(
    cond: PairCondition,
    kappa: &DistanceFunction,
    t: &mut MultivaluedMap,
    phi: &mut SelfMap,
    mu: &PiecewiseLinearGauge,
) -> Option<f64> {
    for _ in 0..REPAIR_BUDGET {
        close_under(phi, t);
        match minimal_l(cond, kappa, t, phi, mu) {
            Ok(l_min) => return calibrate_l(cond, kappa, t, phi, mu, l_min),
            Err(stuck) => {
                for (x, y) in stuck {
                    if !t.image(x).contains(y) && phi.apply(y) != y {
                        phi.set(y, y);
                    } else if cond == PairCondition::S5 {
                        t.image_mut(y).insert(y);
                    } else {
                        let tx = t.image(x).clone();
                        t.set_image(y, tx);
                    }
                }
            }
        }
    }
    None
}

/// Merges images until `D_κ(Tx,Ty) ≤ μ(κ(x,y))κ(x,y)` for all pairs.
fn repair_l0_contraction(
    kappa: &DistanceFunction,
    t: &mut MultivaluedMap,
    mu: &PiecewiseLinearGauge,
) -> bool {
    let n = t.len();
    for _ in 0..REPAIR_BUDGET {
        let mut clean = true;
        for x in 0..n {
            for y in 0..n {
                let bound = mu.value_at(kappa.get(x, y)) * kappa.get(x, y);
                if dkappa(kappa, t.image(x), t.image(y)) > bound {
                    clean = false;
                    let tx = t.image(x).clone();
                    t.set_image(y, tx);
                }
            }
        }
        if clean {
            return true;
        }
    }
    false
}

/// Largest ratio `D_κ(Tx,Ty)/κ(x,y)`, rounded up to the 2⁻⁸ grid.
fn contraction_constant(kappa: &DistanceFunction, t: &MultivaluedMap) -> f64 {
    let n = t.len();
    let mut q: f64 = 0.0;
    for x in 0..n {
        for y in 0..n {
            if x != y {
                q = q.max(dkappa(kappa, t.image(x), t.image(y)) / kappa.get(x, y));
            }
        }
    }
    let steps = q * 256.0;
    let up = libm_floor(steps);
    (if up < steps { up + 1.0 } else { up }) * GAUGE_UNIT
}

fn random_phi(rng: &mut ChaCha8Rng, n: usize) -> SelfMap {
    SelfMap::new(
        (0..n)
            .map(|x| {
                if rng.gen_bool(0.5) {
                    x
                } else {
                    rng.gen_range(0..n)
                }
            })
            .collect(),
    )
    .expect("values are in range")
}

/// One deterministic generation attempt for `profile`.
pub fn gen_instance(profile: &GenProfile) -> Result<Instance> {
    let failed =
        |why: &str| Error::GenerationFailed(alloc::format!("{}: {why}", profile.describe()));
    let space = gen_space(profile)?;
    let n = space.len();
    let target = profile.theorem_target;
    let metric_form = matches!(
        target,
        Some(
            TheoremId::BerindeBerinde
                | TheoremId::MizoguchiTakahashi
                | TheoremId::Nadler
                | TheoremId::Banach
        )
    );
    let kappa = if metric_form {
        space.as_distance()
    } else {
        gen_kappa(profile, &space)?
    };

    let mut rng = stream(profile.seed, 3);
    let attractor = rng.gen_range(0..n);
    let mut mu = gen_unit_mt_gauge(profile.seed);
    let mut t = if target == Some(TheoremId::Banach) && profile.map_kind == MapKind::Funnel {
        single_valued_funnel(&kappa, &mut rng, attractor)
    } else {
        initial_map(profile.map_kind, &kappa, &mut rng, attractor)
    };
    let mut phi = None;
    let mut lipschitz = None;

    let rejection = profile.map_kind == MapKind::RandomRejection;
    match target {
        None => {}
        Some(which @ (TheoremId::T21 | TheoremId::T22)) => {
            let diagonal = which == TheoremId::T22;
            if rejection {
                let check = |t: &MultivaluedMap| {
                    if diagonal {
                        check_s3(&kappa, t, &mu)
                    } else {
                        check_s1(&kappa, t, &mu)
                    }
                    .is_pass()
                };
                let all: Vec<usize> = (0..n).collect();
                let mut tries = 0;
                while !check(&t) {
                    tries += 1;
                    if tries == REPAIR_BUDGET {
                        return Err(failed("no random map passed the checker"));
                    }
                    t = MultivaluedMap::new(
                        (0..n).map(|_| random_subset(&mut rng, &all, 3)).collect(),
                    )?;
                }
            } else if profile.map_kind != MapKind::Cycle
                && !repair_contraction(&kappa, &mut t, &mu, &mut rng, diagonal)
            {
                return Err(failed("repair budget exhausted"));
            }
        }
        Some(which @ (TheoremId::T23 | TheoremId::T24 | TheoremId::BerindeBerinde)) => {
            let cond = if which == TheoremId::T23 {
                PairCondition::S5
            } else {
                PairCondition::S6
            };
            let mut p = if which == TheoremId::BerindeBerinde {
                SelfMap::identity(n)
            } else {
                random_phi(&mut rng, n)
            };
            let l = match repair_pair_condition(cond, &kappa, &mut t, &mut p, &mu) {
                Some(l) => l,
                None if cond == PairCondition::S6 && profile.map_kind != MapKind::Cycle => {
                    t = MultivaluedMap::constant(n, FiniteSubset::singleton(attractor))?;
                    p.set(attractor, attractor);
                    0.0
                }
                None => return Err(failed("repair budget exhausted")),
            };
            phi = Some(p);
            lipschitz = Some(l);
        }
        Some(which @ (TheoremId::MizoguchiTakahashi | TheoremId::Nadler | TheoremId::Banach)) => {
            if which == TheoremId::MizoguchiTakahashi {
                if !repair_l0_contraction(&kappa, &mut t, &mu) {
                    t = MultivaluedMap::constant(n, FiniteSubset::singleton(attractor))?;
                }
            } else {
                let ceiling = PiecewiseLinearGauge::constant(1.0, 255.0 * GAUGE_UNIT)?;
                if !repair_l0_contraction(&kappa, &mut t, &ceiling) {
                    t = MultivaluedMap::constant(n, FiniteSubset::singleton(attractor))?;
                }
                mu = PiecewiseLinearGauge::constant(1.0, contraction_constant(&kappa, &t))?;
            }
            phi = Some(SelfMap::identity(n));
            lipschitz = Some(0.0);
        }
    }

    let mut inst = Instance::new(space, kappa, t)?;
    inst.mu = Some(mu);
    inst.phi = phi;
    inst.lipschitz = lipschitz;
    inst.provenance = Some(Provenance {
        seed: profile.seed,
        profile: profile.describe(),
    });
    if let Some(which) = target {
        if profile.map_kind != MapKind::Cycle && !verify_theorem(&inst, which)?.hypotheses_pass() {
            return Err(failed("targeted hypotheses do not hold"));
        }
    }
    Ok(inst)
}

/// Seed used by the `attempt`-th reseed of `seed`.
pub fn reseed(seed: u64, attempt: u64) -> u64 {
    seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Retries [`gen_instance`] with derived seeds until an attempt succeeds.
/// The seed that succeeded is recorded in the provenance, so regenerating
/// from it reproduces the instance directly.
pub fn generate_reseeding(profile: &GenProfile, attempts: u64) -> Result<Instance> {
    let mut last = None;
    for attempt in 0..attempts.max(1) {
        let p = GenProfile {
            seed: reseed(profile.seed, attempt),
            ..profile.clone()
        };
        match gen_instance(&p) {
            Ok(inst) => return Ok(inst),
            Err(e @ Error::GenerationFailed(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// One cell changed by a mutation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "edit", rename_all = "snake_case"))]
pub enum Edit {
    ImageShrunk {
        x: usize,
        removed: Vec<usize>,
    },
    KappaChanged {
        from: usize,
        to: usize,
        before: f64,
        after: f64,
    },
    PhiChanged {
        x: usize,
        before: usize,
        after: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mutant {
    pub instance: Instance,
    pub mutation: Mutation,
    pub edits: Vec<Edit>,
    /// The rule the mutation breaks.
    pub target: Rule,
    /// Points at which the targeted rule now fails.
    pub at: Vec<usize>,
}

impl Mutant {
    /// Runs the checker this mutation targets.
    pub fn targeted_check(&self) -> Result<Verdict> {
        let inst = &self.instance;
        let mu = || inst.mu.as_ref().ok_or(Error::MissingComponent("mu"));
        Ok(match self.target {
            Rule::S1 => check_s1(&inst.kappa, &inst.map, mu()?),
            Rule::S3 => check_s3(&inst.kappa, &inst.map, mu()?),
            Rule::S4 => check_s4(
                inst.phi.as_ref().ok_or(Error::MissingComponent("phi"))?,
                &inst.map,
            ),
            _ => check_zero_structure(&inst.kappa).tau3,
        })
    }
}

fn skipped(m: Mutation, why: &str) -> Error {
    Error::MutationSkipped(alloc::format!("{m}: {why}"))
}

/// Applies exactly one structural edit that breaks the rule `mutation`
/// targets. The candidate site is picked with `seed`.
pub fn mutate(instance: &Instance, mutation: Mutation, seed: u64) -> Result<Mutant> {
    let mut rng = stream(seed, 6);
    let mut inst = instance.clone();
    let n = inst.len();
    let kappa = &instance.kappa;
    let t = &instance.map;
    let (edits, target, at) = match mutation {
        Mutation::DropZ => {
            let mu = inst.mu.as_ref().ok_or(Error::MissingComponent("mu"))?;
            let mut sites = Vec::new();
            for x in 0..n {
                for y in t.image(x).iter().filter(|&y| y != x) {
                    let bound = mu.value_at(kappa.get(x, y)) * kappa.get(x, y);
                    let good: Vec<usize> = t
                        .image(y)
                        .iter()
                        .filter(|&z| kappa.get(y, z) <= bound)
                        .collect();
                    if !good.is_empty() && good.len() < t.image(y).len() {
                        sites.push((x, y, good));
                    }
                }
            }
            let (x, y, good) = sites
                .choose(&mut rng)
                .cloned()
                .ok_or_else(|| skipped(mutation, "no droppable z"))?;
            for &z in &good {
                inst.map.image_mut(y).remove(z);
            }
            (
                alloc::vec![Edit::ImageShrunk {
                    x: y,
                    removed: good
                }],
                Rule::S1,
                alloc::vec![x, y],
            )
        }
        Mutation::RaiseGap => {
            let mu = inst.mu.as_ref().ok_or(Error::MissingComponent("mu"))?;
            let mut sites = Vec::new();
            for x in 0..n {
                for y in t.image(x).iter().filter(|&y| y != x) {
                    let ty = t.image(y);
                    if ty.len() != 1 || ty.contains(y) {
                        continue;
                    }
                    let z = ty.members()[0];
                    let bound = mu.value_at(kappa.get(x, y)) * kappa.get(x, y);
                    let ceiling = (0..n)
                        .filter(|&u| u != y && u != z)
                        .map(|u| kappa.get(y, u) + kappa.get(u, z))
                        .fold(f64::INFINITY, f64::min);
                    let raised = if ceiling.is_finite() {
                        ceiling
                    } else {
                        2.0 * (bound + kappa.get(y, z)) + 1.0
                    };
                    if raised > bound && raised > kappa.get(y, z) {
                        sites.push((x, y, z, raised));
                    }
                }
            }
            let &(x, y, z, raised) = sites
                .choose(&mut rng)
                .ok_or_else(|| skipped(mutation, "no raisable gap"))?;
            let before = kappa.get(y, z);
            let mut m = kappa.matrix().clone();
            m.set(y, z, raised);
            inst.kappa = DistanceFunction::new(m)?;
            (
                alloc::vec![Edit::KappaChanged {
                    from: y,
                    to: z,
                    before,
                    after: raised
                }],
                Rule::S3,
                alloc::vec![x, y],
            )
        }
        Mutation::BreakInvariance => {
            let phi = inst.phi.clone().unwrap_or_else(|| SelfMap::identity(n));
            let sites: Vec<usize> = (0..n).filter(|&x| t.image(x).len() < n).collect();
            let &x = sites
                .choose(&mut rng)
                .ok_or_else(|| skipped(mutation, "every image is the whole space"))?;
            let members = t.image(x).members();
            let y = *members.choose(&mut rng).expect("images are nonempty");
            let outside: Vec<usize> = (0..n).filter(|&w| !t.image(x).contains(w)).collect();
            let w = *outside.choose(&mut rng).expect("image is a proper subset");
            let mut p = phi.clone();
            p.set(y, w);
            inst.phi = Some(p);
            (
                alloc::vec![Edit::PhiChanged {
                    x: y,
                    before: phi.apply(y),
                    after: w
                }],
                Rule::S4,
                alloc::vec![x, y, w],
            )
        }
        Mutation::ZeroOffdiagonal => {
            if n < 2 {
                return Err(skipped(mutation, "no off-diagonal cell"));
            }
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            let before = kappa.get(a, b);
            let mut m = kappa.matrix().clone();
            m.set(a, b, 0.0);
            inst.kappa = DistanceFunction::new(m)?;
            (
                alloc::vec![Edit::KappaChanged {
                    from: a,
                    to: b,
                    before,
                    after: 0.0
                }],
                Rule::Tau3,
                alloc::vec![a, b],
            )
        }
    };
    if let Some(p) = inst.provenance.as_mut() {
        p.profile.push_str(&alloc::format!(" mutation={mutation}"));
    }
    Ok(Mutant {
        instance: inst,
        mutation,
        edits,
        target,
        at,
    })
}

/// Generates `profile` and, when it names a mutation, applies it with the
/// profile seed.
pub fn generate(profile: &GenProfile) -> Result<(Instance, Option<Mutant>)> {
    let base = GenProfile {
        mutation: None,
        ..profile.clone()
    };
    let inst = gen_instance(&base)?;
    match profile.mutation {
        None => Ok((inst, None)),
        Some(m) => {
            let mutant = mutate(&inst, m, profile.seed)?;
            Ok((mutant.instance.clone(), Some(mutant)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mt::check_all;
    use crate::spaces::{classify, validate_metric, Axiom};

    #[test]
    fn rejects_bad_sizes() {
        assert!(gen_space(&GenProfile::new(1, 1)).is_err());
        assert!(gen_space(&GenProfile::new(1, 201)).is_err());
    }

    #[test]
    fn canonical_line() {
        let s = gen_space(&GenProfile::new(9, 3).space(SpaceKind::Line)).unwrap();
        assert_eq!(s.d(0, 1), 1.0);
        assert_eq!(s.d(0, 2), 3.0);
        assert_eq!(s.d(1, 2), 2.0);
    }

    #[test]
    fn spaces_are_metric_and_kappas_e0() {
        for seed in 0..20 {
            for kind in [
                KappaKind::Metric,
                KappaKind::ScaledMetric(4),
                KappaKind::AsymmetricClosure,
            ] {
                let p = GenProfile::new(seed, 2 + seed as usize % 9).kappa(kind);
                let s = gen_space(&p).unwrap();
                assert!(validate_metric(s.matrix()).unwrap().is_pass());
                let k = gen_kappa(&p, &s).unwrap();
                assert!(
                    classify(&k).passes(Axiom::IsE0Distance),
                    "{kind:?} seed {seed}"
                );
            }
        }
    }

    #[test]
    fn gauges_have_requested_kind() {
        for seed in 0..50 {
            for lambda in [0.5, 1.0, 3.0] {
                assert!(check_all(&gen_gauge(seed, lambda, true)).all_pass());
                let bad = check_all(&gen_gauge(seed, lambda, false));
                assert!(bad.statements.iter().all(|s| s.verdict.is_fail()));
            }
            assert!(is_mt(&gen_unit_mt_gauge(seed)));
        }
    }

    #[test]
    fn determinism() {
        let p = GenProfile::new(77, 10).target(TheoremId::T22);
        assert_eq!(gen_instance(&p).unwrap(), gen_instance(&p).unwrap());
    }

    #[test]
    fn positive_targets_pass() {
        for which in TheoremId::ALL {
            for seed in 0..6 {
                let p = GenProfile::new(seed, 6 + seed as usize).target(which);
                let inst = generate_reseeding(&p, 8).unwrap();
                assert!(
                    verify_theorem(&inst, which).unwrap().hypotheses_pass(),
                    "{which} {seed}"
                );
            }
        }
    }

    #[test]
    fn constant_target_passes_s1_s3() {
        let p = GenProfile::new(3, 8).map(MapKind::ConstantTarget);
        let inst = gen_instance(&p).unwrap();
        let mu = inst.mu.as_ref().unwrap();
        assert!(check_s1(&inst.kappa, &inst.map, mu).is_pass());
        assert!(check_s3(&inst.kappa, &inst.map, mu).is_pass());
    }

    #[test]
    fn two_point_cycle() {
        let p = GenProfile::new(0, 2).map(MapKind::Cycle);
        let inst = gen_instance(&p).unwrap();
        assert!(crate::solver::fixed_points(&inst.map).is_empty());
        assert!(check_s1(&inst.kappa, &inst.map, inst.mu.as_ref().unwrap()).is_fail());
    }

    #[test]
    fn mutations_break_their_target() {
        let base = generate_reseeding(&GenProfile::new(5, 12).target(TheoremId::T23), 8).unwrap();
        for m in [Mutation::BreakInvariance, Mutation::ZeroOffdiagonal] {
            let mutant = mutate(&base, m, 1).unwrap();
            assert!(mutant.targeted_check().unwrap().is_fail(), "{m}");
        }
        let zero = mutate(&base, Mutation::ZeroOffdiagonal, 2).unwrap();
        assert!(!classify(&zero.instance.kappa).passes(Axiom::Tau3));
    }

    #[test]
    fn descriptions_round_trip() {
        let p = GenProfile::new(4, 17)
            .space(SpaceKind::Line)
            .kappa(KappaKind::ScaledMetric(4))
            .map(MapKind::ConstantTarget)
            .target(TheoremId::Nadler)
            .mutate(Mutation::DropZ);
        assert_eq!(GenProfile::from_description(4, &p.describe()).unwrap(), p);
        assert!(GenProfile::from_description(4, "n=3 colour=red").is_err());
    }

    #[test]
    fn names_round_trip() {
        for k in MapKind::ALL {
            assert_eq!(k.name().parse::<MapKind>().unwrap(), *k);
        }
        for k in [
            KappaKind::Metric,
            KappaKind::ScaledMetric(4),
            KappaKind::AsymmetricClosure,
        ] {
            assert_eq!(k.name().parse::<KappaKind>().unwrap(), k);
        }
        assert!("scaled-metric-3".parse::<KappaKind>().is_err());
    }
}
