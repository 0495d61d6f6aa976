//! Sweeps behind the `augrid` subcommands.
//!
//! Every Monte-Carlo trial draws from [`trial_rng`] keyed by the master
//! seed, an experiment id and the trial index, and per-trial results are
//! combined by sums, so a report depends only on its configuration and seed,
//! never on the worker count.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::func::{generate, BitTable, BoolFunc, Family};
use crate::grid::GridShape;
use crate::oracle::{
    distance_to_monotonicity, isoperimetry_report, optimal_matching, ratio_f64, sensitive_edge_counts, InfluenceReport,
    IsoperimetryRatios, EXACT_ORACLE_CAPACITY,
};
use crate::reduce::{lift, plan};
use crate::rng::{experiment_seed, trial_rng};
use crate::structure::{crossing_counts, routing_pipeline};
use crate::tester::{persistence_fraction, single_test, RateEstimate, Verdict};

pub const DEFAULT_SEED: u64 = 20_240_917;

pub const RATE_HEADER: &str = "n,d,family,eps_true,trials,rejections,rate,wilson_lo,wilson_hi";
pub const ISOPERIMETRY_HEADER: &str = "n,d,function_id,eps,I,I_minus,gamma_minus,r,margulis_ratio,edge_ratio,vertex_ratio";
pub const PERSISTENCE_HEADER: &str = "n,d,tau,family,nonpersistent_fraction,reference_bound";

/// Contents of a config file. Every section is optional and command-line
/// flags take precedence over it.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub calibration: Option<f64>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub rate: RateConfig,
    #[serde(default)]
    pub isoperimetry: IsoperimetryConfig,
    #[serde(default)]
    pub persistence: PersistenceConfig,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RateConfig {
    pub ns: Vec<usize>,
    pub ds: Vec<usize>,
    pub families: Vec<String>,
    pub trials: u64,
}

impl Default for RateConfig {
    fn default() -> Self {
        Self { ns: vec![4, 8], ds: vec![2, 4, 8], families: vec!["anti_slab".into(), "block_parity".into()], trials: 10_000 }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct IsoperimetryConfig {
    /// `[n, d]` pairs.
    pub shapes: Vec<[usize; 2]>,
    /// Shapes with at most this many points are swept over every function.
    pub exhaustive_points: usize,
    /// Uniformly random functions drawn on larger shapes.
    pub samples: u64,
}

impl Default for IsoperimetryConfig {
    fn default() -> Self {
        Self { shapes: vec![[4, 1], [2, 2]], exhaustive_points: 16, samples: 1000 }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PersistenceConfig {
    pub n: usize,
    pub d: usize,
    pub taus: Vec<usize>,
    pub families: Vec<String>,
    /// Sampled points per `(τ, family)`.
    pub outer: u64,
    /// Walks per sampled point.
    pub inner: u64,
}

impl Default for PersistenceConfig {
    fn default() -> Self {
        Self {
            n: 8,
            d: 4,
            taus: vec![1, 2, 4],
            families: vec!["anti_slab".into(), "block_parity".into(), "uniform_random".into()],
            outer: 2000,
            inner: 50,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Usage(format!("config: {e}")))
    }

    pub fn load_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn workers(&self) -> usize {
        self.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

/// Runs `job` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Err(Error::Usage("workers must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
    Ok(pool.install(job))
}

/// Parses `name` or `name:param`, e.g. `anti_slab:1` or `random_monotone:0.3`.
pub fn parse_family(spec: &str) -> Result<Family> {
    let (name, param) = match spec.split_once(':') {
        Some((name, p)) => {
            let v: f64 = p.parse().map_err(|_| Error::Usage(format!("bad family parameter in `{spec}`")))?;
            (name, Some(v))
        }
        None => (spec, None),
    };
    Family::parse(name, param)
}

/// The deterministic member of `spec` on `shape` used by every sweep.
pub fn family_function(spec: &str, shape: GridShape, seed: u64) -> Result<BoolFunc> {
    let family = parse_family(spec)?;
    let key = format!("function/{spec}/{}/{}", shape.n(), shape.d());
    generate(&family, shape, experiment_seed(seed, &key))
}

/// Exact distance to monotonicity of a generated member of `family`.
///
/// Grids within the oracle's capacity use the oracle. Larger grids are only
/// supported for families with a known distance: monotone families are at
/// distance 0, `anti_slab` at 1/2 for even `n`, and `block_parity` inherits
/// the distance of the parity pattern on `[2]^d`, of which it is a blow-up.
pub fn family_eps(family: &Family, f: &BoolFunc) -> Result<Ratio<u64>> {
    let shape = *f.shape();
    if shape.len() <= EXACT_ORACLE_CAPACITY {
        return Ok(distance_to_monotonicity(f)?.eps);
    }
    match family {
        _ if family.is_monotone_family() => Ok(Ratio::from_integer(0)),
        Family::AntiSlab { .. } if shape.n().is_multiple_of(2) => Ok(Ratio::new(1, 2)),
        Family::BlockParity if shape.n().is_multiple_of(2) => {
            let cube = GridShape::new(2, shape.d())?;
            family_eps(family, &generate(family, cube, 0)?)
        }
        _ => Err(Error::Capacity(format!("no exact distance for {} on {shape}", family.name()))),
    }
}

/// Rejection count of `trials` single invocations, trial `t` using stream
/// `t` of `experiment`.
pub fn parallel_detection(f: &BoolFunc, trials: u64, seed: u64, experiment: &str) -> Result<RateEstimate> {
    if trials == 0 {
        return Err(Error::Domain("detection needs at least one trial".into()));
    }
    let rejections = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, experiment, t);
            Ok::<u64, Error>((single_test(f, &mut rng)?.verdict == Verdict::Reject) as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(RateEstimate::from_counts(rejections, trials))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateRow {
    pub n: usize,
    pub d: usize,
    pub family: String,
    pub eps_true: Ratio<u64>,
    pub estimate: RateEstimate,
}

pub fn rate_sweep(cfg: &RateConfig, seed: u64, workers: usize) -> Result<Vec<RateRow>> {
    with_workers(workers, || {
        let mut rows = Vec::new();
        for spec in &cfg.families {
            for &n in &cfg.ns {
                for &d in &cfg.ds {
                    let shape = GridShape::new(n, d)?;
                    let f = family_function(spec, shape, seed)?;
                    let eps_true = family_eps(&parse_family(spec)?, &f)?;
                    let estimate = parallel_detection(&f, cfg.trials, seed, &format!("rate/{spec}/{n}/{d}"))?;
                    rows.push(RateRow { n, d, family: spec.clone(), eps_true, estimate });
                }
            }
        }
        Ok(rows)
    })?
}

pub fn rate_csv(rows: &[RateRow]) -> String {
    let mut out = format!("{RATE_HEADER}\n");
    for r in rows {
        let (lo, hi) = r.estimate.wilson_interval;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            r.d,
            r.family,
            ratio_f64(r.eps_true),
            r.estimate.trials,
            r.estimate.rejections,
            r.estimate.estimate,
            lo,
            hi
        );
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsoRow {
    pub function_id: u64,
    pub report: InfluenceReport,
}

/// Isoperimetry reports of every ε-far function examined on one shape.
#[derive(Clone, Debug, PartialEq)]
pub struct IsoSweep {
    pub shape: GridShape,
    pub exhaustive: bool,
    pub functions: u64,
    pub rows: Vec<IsoRow>,
    /// Componentwise minima over `rows`.
    pub minima: Option<IsoperimetryRatios>,
}

/// Sweeps every function when `n^d ≤ exhaustive_points`, otherwise
/// `samples` uniformly random ones. Function ids are the table bits of the
/// exhaustive sweep, or the sample index.
pub fn isoperimetry_shape(shape: GridShape, exhaustive_points: usize, samples: u64, seed: u64) -> Result<IsoSweep> {
    let exhaustive = shape.len() <= exhaustive_points;
    if exhaustive && shape.len() > 24 {
        return Err(Error::Capacity(format!("exhaustive sweep over {shape} has too many functions")));
    }
    let functions = if exhaustive { 1u64 << shape.len() } else { samples };
    let experiment = format!("isoperimetry/{}/{}", shape.n(), shape.d());
    let reports: Vec<Option<IsoRow>> = (0..functions)
        .into_par_iter()
        .map(|id| {
            let table = if exhaustive {
                BitTable::from_mask(shape.len(), id)
            } else {
                let mut rng = trial_rng(seed, &experiment, id);
                BitTable::from_bools(&(0..shape.len()).map(|_| rng.gen::<bool>()).collect::<Vec<_>>())
            };
            let report = isoperimetry_report(&BoolFunc::from_table(shape, table)?)?;
            Ok(report.ratios.is_some().then_some(IsoRow { function_id: id, report }))
        })
        .collect::<Result<_>>()?;
    let rows: Vec<IsoRow> = reports.into_iter().flatten().collect();
    let minima = rows.iter().filter_map(|r| r.report.ratios).reduce(|a, b| IsoperimetryRatios {
        margulis: a.margulis.min(b.margulis),
        edge: a.edge.min(b.edge),
        vertex: a.vertex.min(b.vertex),
    });
    Ok(IsoSweep { shape, exhaustive, functions, rows, minima })
}

pub fn isoperimetry_sweep(cfg: &IsoperimetryConfig, seed: u64, workers: usize) -> Result<Vec<IsoSweep>> {
    with_workers(workers, || {
        cfg.shapes
            .iter()
            .map(|&[n, d]| isoperimetry_shape(GridShape::new(n, d)?, cfg.exhaustive_points, cfg.samples, seed))
            .collect()
    })?
}

pub fn isoperimetry_csv(sweeps: &[IsoSweep]) -> String {
    let mut out = format!("{ISOPERIMETRY_HEADER}\n");
    for s in sweeps {
        for row in &s.rows {
            let r = &row.report;
            let ratios = r.ratios.expect("rows are eps-far");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                s.shape.n(),
                s.shape.d(),
                row.function_id,
                ratio_f64(r.eps),
                ratio_f64(r.i_total),
                ratio_f64(r.i_minus),
                ratio_f64(r.gamma_minus),
                r.r.map_or(0.0, ratio_f64),
                ratio_f64(ratios.margulis),
                ratio_f64(ratios.edge),
                ratio_f64(ratios.vertex)
            );
        }
    }
    out
}

/// One line per shape with the exact minimum of each ratio.
pub fn isoperimetry_minima(sweeps: &[IsoSweep]) -> String {
    let mut out = String::new();
    for s in sweeps {
        let kind = if s.exhaustive { "exhaustive" } else { "sampled" };
        match s.minima {
            Some(m) => {
                let _ = writeln!(
                    out,
                    "{} {kind}: {} functions, {} far, min margulis {} edge {} vertex {}",
                    s.shape,
                    s.functions,
                    s.rows.len(),
                    m.margulis,
                    m.edge,
                    m.vertex
                );
            }
            None => {
                let _ = writeln!(out, "{} {kind}: {} functions, none far", s.shape, s.functions);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceRow {
    pub n: usize,
    pub d: usize,
    pub tau: usize,
    pub family: String,
    pub fraction: f64,
    pub reference_bound: f64,
}

/// Estimated non-persistent fraction beside `τ·I_f/(d·log2 n)`.
pub fn persistence_sweep(cfg: &PersistenceConfig, seed: u64, workers: usize) -> Result<Vec<PersistenceRow>> {
    let shape = GridShape::new(cfg.n, cfg.d)?;
    let log_n = shape.log2_n()?;
    if log_n == 0 || cfg.outer == 0 || cfg.inner == 0 {
        return Err(Error::Usage("persistence needs n >= 2 and positive sample counts".into()));
    }
    if let Some(&tau) = cfg.taus.iter().find(|&&t| t == 0 || t > cfg.d) {
        return Err(Error::Usage(format!("tau = {tau} must lie in [1, d]")));
    }
    with_workers(workers, || {
        let mut rows = Vec::new();
        for spec in &cfg.families {
            let f = family_function(spec, shape, seed)?;
            let (plus, minus) = sensitive_edge_counts(&f)?;
            let influence = (plus + minus) as f64 / shape.len() as f64;
            for &tau in &cfg.taus {
                let experiment = format!("persistence/{spec}/{}/{}/{tau}", cfg.n, cfg.d);
                let hits = (0..cfg.outer)
                    .into_par_iter()
                    .map(|k| persistence_fraction(&f, tau, 1, cfg.inner, &mut trial_rng(seed, &experiment, k)))
                    .try_reduce(|| 0.0, |a, b| Ok(a + b))?;
                rows.push(PersistenceRow {
                    n: cfg.n,
                    d: cfg.d,
                    tau,
                    family: spec.clone(),
                    fraction: hits / cfg.outer as f64,
                    reference_bound: tau as f64 * influence / (cfg.d as f64 * log_n as f64),
                });
            }
        }
        Ok(rows)
    })?
}

pub fn persistence_csv(rows: &[PersistenceRow]) -> String {
    let mut out = format!("{PERSISTENCE_HEADER}\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{},{}", r.n, r.d, r.tau, r.family, r.fraction, r.reference_bound);
    }
    out
}

/// Decomposition, routing and crossing summary of one function.
pub fn structure_summary(f: &BoolFunc) -> Result<String> {
    let report = routing_pipeline(f)?;
    let mstar = optimal_matching(f)?.mstar;
    let mut out = format!(
        "matching {} pairs, {} disjoint violated edges, degree monotone {}, layer dichotomy {}\n",
        report.matching_size, report.gamma_count, report.degree_monotone, report.layer_dichotomy
    );
    out.push_str("ell,pairs,parts,paths\n");
    for (ell, size, parts, routed) in &report.classes {
        let _ = writeln!(out, "{ell},{size},{parts},{routed}");
    }
    if f.shape().is_pow2() {
        out.push_str("matching,cross,violation_walks,distinct_violations,violated_edges\n");
        for c in crossing_counts(f, &mstar)? {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.matching, c.cross, c.violation_walks, c.distinct_violations, c.h_violations
            );
        }
    }
    Ok(out)
}

/// Parseval and influence-chain checks of one function.
pub fn fourier_summary(f: &BoolFunc) -> Result<String> {
    use crate::fourier::{influence_chain_check, parseval_sum, plus_minus_table, transform};
    let shape = *f.shape();
    let spectrum = transform(&shape, &plus_minus_table(f)?)?;
    let chain = influence_chain_check(f)?;
    let mut out = format!("parseval sum {}\n", parseval_sum(&spectrum));
    let _ = writeln!(out, "influence chain lhs {} rhs {} holds {}", chain.lhs, chain.rhs, chain.holds);
    Ok(out)
}

/// Exhaustive line checks over all `2^n` functions on `[n]`.
pub fn line_sweep(n: usize) -> Result<LineSweep> {
    use crate::fourier::{line_delta_report, sort_comparisons};
    let shape = GridShape::new(n, 1)?;
    if shape.log2_n()? < 2 || n > 24 {
        return Err(Error::Domain(format!("line sweep needs n a power of 2 in [4, 16], got {n}")));
    }
    let outcome = (0..1u64 << n)
        .into_par_iter()
        .map(|mask| {
            let g = BoolFunc::from_table(shape, BitTable::from_mask(n, mask))?;
            let r = line_delta_report(&g)?;
            let s = sort_comparisons(&g)?;
            Ok::<_, Error>(LineSweep {
                functions: 1,
                inequality_failures: !r.inequality_holds as u64,
                monotone_bound_failures: (r.monotone_bound_holds == Some(false)) as u64,
                sorted_failures: !s.delta_sorted_ge as u64,
                final_failures: !s.final_bound_holds as u64,
            })
        })
        .try_reduce(LineSweep::default, |a, b| Ok(a.merge(b)))?;
    Ok(outcome)
}

/// Failure counts of the exact line checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LineSweep {
    pub functions: u64,
    pub inequality_failures: u64,
    pub monotone_bound_failures: u64,
    pub sorted_failures: u64,
    pub final_failures: u64,
}

impl LineSweep {
    fn merge(self, o: LineSweep) -> LineSweep {
        LineSweep {
            functions: self.functions + o.functions,
            inequality_failures: self.inequality_failures + o.inequality_failures,
            monotone_bound_failures: self.monotone_bound_failures + o.monotone_bound_failures,
            sorted_failures: self.sorted_failures + o.sorted_failures,
            final_failures: self.final_failures + o.final_failures,
        }
    }

    pub fn all_hold(&self) -> bool {
        self.inequality_failures + self.monotone_bound_failures + self.sorted_failures + self.final_failures == 0
    }
}

/// Plan, lift and exact distances on both sides when they fit the oracle.
pub fn reduce_summary(f: BoolFunc) -> Result<String> {
    let shape = *f.shape();
    let p = plan(shape.n(), shape.d())?;
    let f = std::sync::Arc::new(f);
    let g = lift(&p, std::sync::Arc::clone(&f))?;
    let mut out = format!("plan i = {}, N = {}, m = {}, blocks {:?}\n", p.i, p.big_n, p.m, p.block_sizes);
    if p.lifted_shape()?.len() <= EXACT_ORACLE_CAPACITY {
        f.reset_queries();
        let g = g.materialize(EXACT_ORACLE_CAPACITY)?;
        let _ = writeln!(out, "queries forwarded {} for {} lifted points", f.queries(), g.shape().len());
        let (df, dg) = (distance_to_monotonicity(&f)?.eps, distance_to_monotonicity(&g)?.eps);
        let _ = writeln!(out, "distance {df} lifted {dg} ratio holds {}", dg * 6 >= df);
        let _ = writeln!(out, "monotone {} lifted {}", f.is_monotone()?, g.is_monotone()?);
    } else {
        let _ = writeln!(out, "lifted grid {} exceeds the oracle; distances skipped", p.lifted_shape()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parses_and_rejects_unknown_keys() {
        let cfg = ExperimentConfig::parse("seed = 5\n[rate]\nns = [4]\ntrials = 10\n").unwrap();
        assert_eq!(cfg.seed(), 5);
        assert_eq!(cfg.rate.ns, vec![4]);
        assert_eq!(cfg.rate.ds, RateConfig::default().ds);
        assert_eq!(cfg.isoperimetry, IsoperimetryConfig::default());
        assert!(matches!(ExperimentConfig::parse("sed = 5\n"), Err(Error::Usage(_))));
        assert!(matches!(ExperimentConfig::parse("[rate]\ntrails = 5\n"), Err(Error::Usage(_))));
        assert_eq!(ExperimentConfig::parse("").unwrap().seed(), DEFAULT_SEED);
    }

    #[test]
    fn family_specs() {
        assert_eq!(parse_family("anti_slab:1").unwrap(), Family::AntiSlab { dim: 1 });
        assert_eq!(parse_family("random_monotone:0.3").unwrap(), Family::RandomMonotone { density: 0.3 });
        assert!(parse_family("anti_slab:x").is_err());
        assert!(parse_family("nope").is_err());
    }

    #[test]
    fn closed_form_distances_match_oracle() {
        for (n, d) in [(2, 2), (4, 2), (8, 2), (4, 3), (2, 5), (8, 3)] {
            let shape = GridShape::new(n, d).unwrap();
            for family in [Family::AntiSlab { dim: 0 }, Family::BlockParity] {
                let f = generate(&family, shape, 0).unwrap();
                let exact = distance_to_monotonicity(&f).unwrap().eps;
                let expected = match family {
                    Family::AntiSlab { .. } => Ratio::new(1, 2),
                    _ => distance_to_monotonicity(&generate(&family, GridShape::new(2, d).unwrap(), 0).unwrap())
                        .unwrap()
                        .eps,
                };
                assert_eq!(exact, expected, "{} on {shape}", family.name());
            }
        }
        let big = GridShape::new(8, 8).unwrap();
        let f = generate(&Family::BlockParity, big, 0).unwrap();
        let cube = generate(&Family::BlockParity, GridShape::new(2, 8).unwrap(), 0).unwrap();
        assert_eq!(family_eps(&Family::BlockParity, &f).unwrap(), distance_to_monotonicity(&cube).unwrap().eps);
        let u = generate(&Family::UniformRandom, big, 0).unwrap();
        assert!(matches!(family_eps(&Family::UniformRandom, &u), Err(Error::Capacity(_))));
    }

    #[test]
    fn rate_sweep_is_worker_independent() {
        let cfg = RateConfig { ns: vec![4], ds: vec![2, 3], families: vec!["anti_slab".into()], trials: 3000 };
        let a = rate_csv(&rate_sweep(&cfg, 3, 1).unwrap());
        let b = rate_csv(&rate_sweep(&cfg, 3, 4).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with(RATE_HEADER));
        assert_eq!(a.lines().count(), 3);
    }

    #[test]
    fn isoperimetry_line_example() {
        let s = isoperimetry_shape(GridShape::new(4, 1).unwrap(), 16, 0, 0).unwrap();
        assert!(s.exhaustive);
        assert_eq!(s.functions, 16);
        assert_eq!(s.rows.len(), 16 - 5);
        let row = s.rows.iter().find(|r| r.function_id == 0b0011).unwrap();
        assert_eq!(row.report.ratios.unwrap().margulis, Ratio::new(3, 2));
        let csv = isoperimetry_csv(&[s]);
        assert_eq!(csv.lines().count(), 12);
        assert!(csv.contains("\n4,1,3,0.5,"));
    }

    #[test]
    fn persistence_rejects_bad_tau() {
        let cfg = PersistenceConfig { n: 4, d: 2, taus: vec![3], ..Default::default() };
        assert!(matches!(persistence_sweep(&cfg, 0, 1), Err(Error::Usage(_))));
        let cfg = PersistenceConfig { n: 4, d: 2, taus: vec![1, 2], outer: 50, inner: 10, ..Default::default() };
        let rows = persistence_sweep(&cfg, 0, 2).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r.fraction) && r.reference_bound.is_finite()));
    }

    #[test]
    fn line_sweep_small() {
        let s = line_sweep(4).unwrap();
        assert_eq!(s.functions, 16);
        assert!(s.all_hold());
        assert!(line_sweep(2).is_err());
    }
}
