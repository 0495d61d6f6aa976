//! The random-walk monotonicity tester on the augmented hypergrid, the edge
//! tester, repetition to a full ε-tester, and persistence estimates.
//!
//! One invocation of the tester:
//!
//! 1. `p` is the largest integer with `2^p ≤ sqrt(d / (10 log2 d))`
//!    (clamped to 0 for `d ≤ 2` or when the bound is below 1); `τ = 2^t`
//!    with `t` uniform on `{0..p}`.
//! 2. `x` uniform over the grid.
//! 3. Per dimension `i`, `a_i` uniform on `{0..log2 n - 1}` and `c_i` a fair
//!    bit select the matching `H_i = H^{c_i}_{i,a_i}`.
//! 4. `S` is the set of dimensions where `x` is a lower endpoint of `H_i`.
//! 5. If `|S| < τ` then `y = x`, otherwise a uniform `τ`-subset `T ⊆ S` is
//!    stepped: `y_i = x_i + 2^{a_i}` for `i ∈ T`.
//! 6. Reject iff `f(x) = 1` and `f(y) = 0`.

use num_rational::Ratio;
use rand::Rng;

use crate::error::{Error, Result};
use crate::func::BoolFunc;
use crate::grid::{coord_side, matching_size, GridShape, MatchingId, Point, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

/// Everything one invocation of the tester saw.
#[derive(Clone, Debug, PartialEq)]
pub struct TestTranscript {
    pub tau: usize,
    pub x: Point,
    /// The matching drawn for each dimension.
    pub matchings: Vec<MatchingId>,
    /// Dimensions where `x` is a lower endpoint, ascending.
    pub lower_dims: Vec<usize>,
    /// Stepped dimensions, ascending; empty when `|S| < τ`.
    pub stepped: Vec<usize>,
    pub y: Point,
    pub fx: bool,
    pub fy: bool,
    pub verdict: Verdict,
    pub queries_used: u32,
}

/// Result of the repeated tester.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TesterVerdict {
    pub accepted: bool,
    pub invocations: u64,
    pub total_queries: u64,
}

/// The exponent bound `p` of step 1.
pub fn tau_exponent_bound(d: usize) -> u32 {
    if d <= 2 {
        return 0;
    }
    let d = d as f64;
    let bound = (d / (10.0 * d.log2())).sqrt();
    if bound < 1.0 {
        return 0;
    }
    let mut p = 0;
    while ((1u64 << (p + 1)) as f64) <= bound {
        p += 1;
    }
    p
}

pub fn sample_tau<R: Rng + ?Sized>(d: usize, rng: &mut R) -> usize {
    let p = tau_exponent_bound(d);
    1 << rng.gen_range(0..=p)
}

/// Uniform `k`-subset of `0..m` by Floyd's algorithm, sorted ascending.
pub fn floyd_subset<R: Rng + ?Sized>(m: usize, k: usize, rng: &mut R) -> Vec<usize> {
    assert!(k <= m);
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for j in (m - k)..m {
        let t = rng.gen_range(0..=j);
        if chosen.contains(&t) {
            chosen.push(j);
        } else {
            chosen.push(t);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Steps 3–5 for a fixed `τ`: draws the matchings and the stepped set and
/// returns `(matchings, S, T, y)` as linear indices.
pub(crate) fn sample_walk<R: Rng + ?Sized>(
    shape: &GridShape,
    log_n: u32,
    x: usize,
    tau: usize,
    rng: &mut R,
) -> (Vec<MatchingId>, Vec<usize>, Vec<usize>, usize) {
    let mut matchings = Vec::with_capacity(shape.d());
    let mut lower = Vec::new();
    for dim in 0..shape.d() {
        let exp = rng.gen_range(0..log_n);
        let parity = rng.gen_range(0..2u8);
        let m = MatchingId { dim, exp, parity };
        if coord_side(shape.n(), shape.coord_of(x, dim), exp, parity) == Side::Lower {
            lower.push(dim);
        }
        matchings.push(m);
    }
    let (stepped, y) = step_from(shape, x, &matchings, &lower, tau, |m, k| floyd_subset(m, k, rng));
    (matchings, lower, stepped, y)
}

fn step_from(
    shape: &GridShape,
    x: usize,
    matchings: &[MatchingId],
    lower: &[usize],
    tau: usize,
    choose: impl FnOnce(usize, usize) -> Vec<usize>,
) -> (Vec<usize>, usize) {
    if lower.len() < tau {
        return (Vec::new(), x);
    }
    let stepped: Vec<usize> = choose(lower.len(), tau).into_iter().map(|k| lower[k]).collect();
    let y = stepped
        .iter()
        .fold(x, |acc, &dim| acc + matchings[dim].step() * shape.stride(dim));
    (stepped, y)
}

/// Evaluates steps 4–6 for fully specified randomness. `stepped` must be a
/// `τ`-subset of the lower dimensions when there are at least `τ` of them,
/// and empty otherwise.
pub fn run_with_choices(
    f: &BoolFunc,
    tau: usize,
    x: usize,
    matchings: &[MatchingId],
    stepped: &[usize],
) -> Result<TestTranscript> {
    let shape = *f.shape();
    let log_n = shape.log2_n()?;
    if x >= shape.len() || matchings.len() != shape.d() || tau == 0 {
        return Err(Error::Domain("malformed tester choices".into()));
    }
    for (dim, m) in matchings.iter().enumerate() {
        if m.dim != dim || m.exp >= log_n || m.parity > 1 {
            return Err(Error::Domain(format!("matching {m} drawn for dimension {dim}")));
        }
    }
    let lower: Vec<usize> = (0..shape.d())
        .filter(|&dim| {
            let m = matchings[dim];
            coord_side(shape.n(), shape.coord_of(x, dim), m.exp, m.parity) == Side::Lower
        })
        .collect();
    let valid = if lower.len() < tau {
        stepped.is_empty()
    } else {
        stepped.len() == tau && stepped.windows(2).all(|w| w[0] < w[1]) && stepped.iter().all(|s| lower.contains(s))
    };
    if !valid {
        return Err(Error::Domain(format!("stepped set {stepped:?} is not a {tau}-subset of {lower:?}")));
    }
    let (stepped, y) = step_from(&shape, x, matchings, &lower, tau, |_, _| {
        stepped.iter().map(|s| lower.iter().position(|l| l == s).unwrap()).collect()
    });
    Ok(finish(f, tau, x, matchings.to_vec(), lower, stepped, y))
}

fn finish(
    f: &BoolFunc,
    tau: usize,
    x: usize,
    matchings: Vec<MatchingId>,
    lower_dims: Vec<usize>,
    stepped: Vec<usize>,
    y: usize,
) -> TestTranscript {
    let shape = f.shape();
    let fx = f.eval_index(x);
    let (fy, queries_used) = if y == x { (fx, 1) } else { (f.eval_index(y), 2) };
    TestTranscript {
        tau,
        x: Point::new(shape.coords_of(x)),
        matchings,
        lower_dims,
        stepped,
        y: Point::new(shape.coords_of(y)),
        fx,
        fy,
        verdict: if fx && !fy { Verdict::Reject } else { Verdict::Accept },
        queries_used,
    }
}

/// One invocation of the tester.
pub fn single_test<R: Rng + ?Sized>(f: &BoolFunc, rng: &mut R) -> Result<TestTranscript> {
    let shape = *f.shape();
    let log_n = shape.log2_n()?;
    if log_n == 0 {
        return Err(Error::Domain("the tester needs n >= 2".into()));
    }
    let tau = sample_tau(shape.d(), rng);
    let x = rng.gen_range(0..shape.len());
    let (matchings, lower, stepped, y) = sample_walk(&shape, log_n, x, tau, rng);
    Ok(finish(f, tau, x, matchings, lower, stepped, y))
}

/// Largest randomness space [`exact_rejection_probability`] walks.
pub const RANDOMNESS_SPACE_LIMIT: u64 = 1 << 24;

/// Rejection probability of one invocation, summed exactly over every
/// outcome of the tester's randomness via [`run_with_choices`].
pub fn exact_rejection_probability(f: &BoolFunc) -> Result<Ratio<u64>> {
    let shape = *f.shape();
    let log_n = shape.log2_n()?;
    if log_n == 0 {
        return Err(Error::Domain("the tester needs n >= 2".into()));
    }
    let d = shape.d();
    let per_x = (2 * log_n as u64).checked_pow(d as u32);
    let taus: Vec<usize> = (0..=tau_exponent_bound(d)).map(|p| 1usize << p).collect();
    let space = per_x.and_then(|m| m.checked_mul(shape.len() as u64 * taus.len() as u64));
    let per_x = match space {
        Some(s) if s <= RANDOMNESS_SPACE_LIMIT => per_x.unwrap(),
        _ => return Err(Error::Capacity(format!("randomness space of {shape} is too large to enumerate"))),
    };
    let mut total = Ratio::from_integer(0u64);
    let all: Vec<MatchingId> = (0..log_n)
        .flat_map(|exp| (0..2u8).map(move |parity| (exp, parity)))
        .map(|(exp, parity)| MatchingId { dim: 0, exp, parity })
        .collect();
    for &tau in &taus {
        for x in 0..shape.len() {
            for code in 0..per_x {
                let mut rest = code;
                let matchings: Vec<MatchingId> = (0..d)
                    .map(|dim| {
                        let m = all[(rest % all.len() as u64) as usize];
                        rest /= all.len() as u64;
                        MatchingId { dim, ..m }
                    })
                    .collect();
                let lower: Vec<usize> = (0..d)
                    .filter(|&dim| {
                        let m = matchings[dim];
                        coord_side(shape.n(), shape.coord_of(x, dim), m.exp, m.parity) == Side::Lower
                    })
                    .collect();
                let subsets = if lower.len() < tau { vec![Vec::new()] } else { k_subsets(&lower, tau) };
                let weight = Ratio::new(1, taus.len() as u64 * shape.len() as u64 * per_x * subsets.len() as u64);
                for stepped in &subsets {
                    if run_with_choices(f, tau, x, &matchings, stepped)?.verdict == Verdict::Reject {
                        total += weight;
                    }
                }
            }
        }
    }
    Ok(total)
}

fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out: Vec<Vec<usize>> = k_subsets(&items[1..], k - 1)
        .into_iter()
        .map(|mut rest| {
            rest.insert(0, items[0]);
            rest
        })
        .collect();
    out.extend(k_subsets(&items[1..], k));
    out
}

/// Samples augmented edges uniformly from the full edge set.
#[derive(Clone, Debug)]
pub struct EdgeSampler {
    shape: GridShape,
    ids: Vec<MatchingId>,
    cumulative: Vec<usize>,
}

impl EdgeSampler {
    pub fn new(shape: GridShape) -> Result<Self> {
        let ids: Vec<MatchingId> = shape
            .matching_ids()?
            .into_iter()
            .filter(|&m| matching_size(&shape, m).map(|s| s > 0).unwrap_or(false))
            .collect();
        if ids.is_empty() {
            return Err(Error::Domain(format!("{shape} has no augmented edges")));
        }
        let mut total = 0;
        let cumulative = ids
            .iter()
            .map(|&m| {
                total += matching_size(&shape, m).unwrap();
                total
            })
            .collect();
        Ok(Self { shape, ids, cumulative })
    }

    pub fn edge_count(&self) -> usize {
        *self.cumulative.last().unwrap()
    }

    /// A uniform edge as `(lower_index, upper_index, matching)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize, MatchingId) {
        let u = rng.gen_range(0..self.edge_count());
        let k = self.cumulative.partition_point(|&c| c <= u);
        let m = self.ids[k];
        let s = m.step();
        let half = self.shape.n() / 2;
        let eligible = if m.parity == 0 { half } else { half - s };
        let j = rng.gen_range(0..eligible);
        let v = (j / s) * 2 * s + j % s + if m.parity == 0 { 0 } else { s };
        let stride = self.shape.stride(m.dim);
        let mut other = rng.gen_range(0..self.shape.len() / self.shape.n());
        // splice v into the dimension slot of the remaining coordinates
        let low = other % stride;
        other /= stride;
        let lower = low + v * stride + other * stride * self.shape.n();
        (lower, lower + s * stride, m)
    }
}

/// The edge tester: one uniform augmented edge, reject iff violated.
pub fn edge_test<R: Rng + ?Sized>(f: &BoolFunc, rng: &mut R) -> Result<TestTranscript> {
    let sampler = EdgeSampler::new(*f.shape())?;
    Ok(edge_test_with(f, &sampler, rng))
}

pub fn edge_test_with<R: Rng + ?Sized>(f: &BoolFunc, sampler: &EdgeSampler, rng: &mut R) -> TestTranscript {
    let (lo, hi, m) = sampler.sample(rng);
    let shape = f.shape();
    let matchings = (0..shape.d())
        .map(|dim| if dim == m.dim { m } else { MatchingId { dim, exp: 0, parity: 0 } })
        .collect();
    finish(f, 1, lo, matchings, vec![m.dim], vec![m.dim], hi)
}

fn clamped_log2(v: f64) -> f64 {
    v.log2().max(1.0)
}

/// Repetition count `⌈c · d^{5/6} · log2(d)^{3/2} · (log2 n + log2 d)^{4/3} · ε^{-4/3}⌉`,
/// both logarithmic factors clamped below at 1.
pub fn repetitions(shape: &GridShape, eps: f64, calibration: f64) -> Result<u64> {
    if !(calibration > 0.0 && calibration.is_finite()) {
        return Err(Error::Domain(format!("calibration = {calibration} must be positive")));
    }
    Ok((calibration * repetition_factor(shape, eps)?).ceil() as u64)
}

/// The repetition count before calibration and rounding.
pub fn repetition_factor(shape: &GridShape, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps = {eps} must lie in (0, 1)")));
    }
    let d = shape.d() as f64;
    let n = shape.n() as f64;
    Ok(d.powf(5.0 / 6.0)
        * clamped_log2(d).powf(1.5)
        * (n.log2() + d.log2()).max(1.0).powf(4.0 / 3.0)
        * eps.powf(-4.0 / 3.0))
}

/// Repeats [`single_test`] until the first rejection or the repetition
/// budget is spent.
pub fn amplified_test<R: Rng + ?Sized>(f: &BoolFunc, eps: f64, calibration: f64, rng: &mut R) -> Result<TesterVerdict> {
    let reps = repetitions(f.shape(), eps, calibration)?;
    let mut total_queries = 0;
    for k in 1..=reps {
        let t = single_test(f, rng)?;
        total_queries += t.queries_used as u64;
        if t.verdict == Verdict::Reject {
            return Ok(TesterVerdict { accepted: false, invocations: k, total_queries });
        }
    }
    Ok(TesterVerdict { accepted: true, invocations: reps, total_queries })
}

/// Fraction of rejecting invocations with its 95% Wilson interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateEstimate {
    pub trials: u64,
    pub rejections: u64,
    pub estimate: f64,
    pub wilson_interval: (f64, f64),
}

impl RateEstimate {
    pub fn from_counts(rejections: u64, trials: u64) -> Self {
        Self { trials, rejections, estimate: rejections as f64 / trials as f64, wilson_interval: wilson(rejections, trials) }
    }
}

/// 95% Wilson score interval.
pub fn wilson(successes: u64, trials: u64) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

pub fn detection_rate<R: Rng + ?Sized>(f: &BoolFunc, trials: u64, rng: &mut R) -> Result<RateEstimate> {
    if trials == 0 {
        return Err(Error::Domain("detection_rate needs at least one trial".into()));
    }
    let mut rejections = 0;
    for _ in 0..trials {
        if single_test(f, rng)?.verdict == Verdict::Reject {
            rejections += 1;
        }
    }
    Ok(RateEstimate::from_counts(rejections, trials))
}

/// Estimated fraction of `τ`-non-persistent points: a sampled `x` counts
/// when more than a tenth of `inner` walks of Steps 3–5 change `f`.
pub fn persistence_fraction<R: Rng + ?Sized>(
    f: &BoolFunc,
    tau: usize,
    outer: u64,
    inner: u64,
    rng: &mut R,
) -> Result<f64> {
    let shape = *f.shape();
    let log_n = shape.log2_n()?;
    if tau == 0 || outer == 0 || inner == 0 || log_n == 0 {
        return Err(Error::Domain("persistence needs tau, sample counts and log2 n all >= 1".into()));
    }
    let mut non_persistent = 0;
    for _ in 0..outer {
        let x = rng.gen_range(0..shape.len());
        let fx = f.eval_index(x);
        let mut changes = 0;
        for _ in 0..inner {
            let (_, _, _, y) = sample_walk(&shape, log_n, x, tau, rng);
            if y != x && f.eval_index(y) != fx {
                changes += 1;
            }
        }
        if changes as f64 / inner as f64 > 0.1 {
            non_persistent += 1;
        }
    }
    Ok(non_persistent as f64 / outer as f64)
}
