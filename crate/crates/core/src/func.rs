//! Boolean functions over the grid with query counting, the test families
//! used by the experiments, line restriction and line sorting, and the
//! `AGF1` binary file format.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{GridShape, Point};

/// Largest grid that will be materialized as a dense table by default.
pub const DEFAULT_TABLE_CAPACITY: usize = 1 << 24;

const MAGIC: &[u8; 4] = b"AGF1";

/// Dense bit table indexed by linear point index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitTable {
    len: usize,
    words: Vec<u64>,
}

impl BitTable {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut t = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            t.set(i, b);
        }
        t
    }

    /// Table of length `len` whose bit `k` is bit `k` of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64);
        let mut t = Self::zeros(len);
        if len > 0 {
            t.words[0] = if len == 64 { mask } else { mask & ((1u64 << len) - 1) };
        }
        t
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Low 64 bits as an integer (bit k = value at index k).
    pub fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Debug for BitTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitTable({s})")
    }
}

type Predicate = Arc<dyn Fn(&[usize]) -> bool + Send + Sync>;

#[derive(Clone)]
enum Backing {
    Table(BitTable),
    Predicate(Predicate),
}

/// A queryable Boolean function `f: [n]^d → {0,1}`.
///
/// Every call to [`BoolFunc::eval`] or [`BoolFunc::eval_index`] increments
/// an atomic query counter. Cloning copies the backing and starts a fresh
/// counter.
pub struct BoolFunc {
    shape: GridShape,
    backing: Backing,
    queries: AtomicU64,
}

impl Clone for BoolFunc {
    fn clone(&self) -> Self {
        Self { shape: self.shape, backing: self.backing.clone(), queries: AtomicU64::new(0) }
    }
}

impl fmt::Debug for BoolFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.backing {
            Backing::Table(t) => write!(f, "BoolFunc({}, {:?})", self.shape, t),
            Backing::Predicate(_) => write!(f, "BoolFunc({}, <predicate>)", self.shape),
        }
    }
}

impl BoolFunc {
    pub fn from_table(shape: GridShape, table: BitTable) -> Result<Self> {
        if table.len() != shape.len() {
            return Err(Error::Domain(format!(
                "table has {} entries but {shape} has {} points",
                table.len(),
                shape.len()
            )));
        }
        Ok(Self { shape, backing: Backing::Table(table), queries: AtomicU64::new(0) })
    }

    pub fn from_bools(shape: GridShape, bits: &[bool]) -> Result<Self> {
        Self::from_table(shape, BitTable::from_bools(bits))
    }

    /// Table-backed function from a 0/1 slice, e.g. `&[1, 1, 0, 0]`.
    pub fn from_values(shape: GridShape, values: &[u8]) -> Result<Self> {
        let bits: Vec<bool> = values.iter().map(|&v| v != 0).collect();
        Self::from_bools(shape, &bits)
    }

    /// Materializes `rule` over every point.
    pub fn tabulate(shape: GridShape, rule: impl Fn(&[usize]) -> bool) -> Result<Self> {
        check_capacity(&shape, DEFAULT_TABLE_CAPACITY)?;
        let mut table = BitTable::zeros(shape.len());
        for idx in 0..shape.len() {
            table.set(idx, rule(&shape.coords_of(idx)));
        }
        Self::from_table(shape, table)
    }

    pub fn constant(shape: GridShape, value: bool) -> Result<Self> {
        Self::tabulate(shape, |_| value)
    }

    /// Predicate-backed function; nothing is materialized.
    pub fn predicate(shape: GridShape, rule: impl Fn(&[usize]) -> bool + Send + Sync + 'static) -> Self {
        Self { shape, backing: Backing::Predicate(Arc::new(rule)), queries: AtomicU64::new(0) }
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn table(&self) -> Option<&BitTable> {
        match &self.backing {
            Backing::Table(t) => Some(t),
            Backing::Predicate(_) => None,
        }
    }

    pub fn is_table_backed(&self) -> bool {
        self.table().is_some()
    }

    pub fn eval(&self, x: &Point) -> Result<bool> {
        let idx = self.shape.linear_index(x)?;
        self.queries.fetch_add(1, Ordering::Relaxed);
        Ok(self.lookup(idx))
    }

    /// Counted evaluation by linear index. Panics when out of range.
    #[inline]
    pub fn eval_index(&self, idx: usize) -> bool {
        assert!(idx < self.shape.len(), "index {idx} out of range");
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.lookup(idx)
    }

    /// Value at `idx` without touching this function's counter.
    #[inline]
    pub fn peek(&self, idx: usize) -> bool {
        self.lookup(idx)
    }

    #[inline]
    fn lookup(&self, idx: usize) -> bool {
        match &self.backing {
            Backing::Table(t) => t.get(idx),
            Backing::Predicate(p) => p(&self.shape.coords_of(idx)),
        }
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset_queries(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    /// Dense-table copy; predicate-backed functions are evaluated at every
    /// point (uncounted here, forwarded queries still count downstream).
    pub fn materialize(&self, capacity: usize) -> Result<BoolFunc> {
        match &self.backing {
            Backing::Table(t) => BoolFunc::from_table(self.shape, t.clone()),
            Backing::Predicate(_) => {
                check_capacity(&self.shape, capacity)?;
                let mut table = BitTable::zeros(self.shape.len());
                for idx in 0..self.shape.len() {
                    table.set(idx, self.lookup(idx));
                }
                BoolFunc::from_table(self.shape, table)
            }
        }
    }

    /// The table, materializing predicate backings up to the default capacity.
    pub fn to_table(&self) -> Result<BitTable> {
        match &self.backing {
            Backing::Table(t) => Ok(t.clone()),
            Backing::Predicate(_) => Ok(self.materialize(DEFAULT_TABLE_CAPACITY)?.table().unwrap().clone()),
        }
    }

    pub fn is_monotone(&self) -> Result<bool> {
        let table = match &self.backing {
            Backing::Table(t) => t.clone(),
            Backing::Predicate(_) => self.materialize(DEFAULT_TABLE_CAPACITY)?.to_table()?,
        };
        Ok(table_is_monotone(&self.shape, &table))
    }

    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        let table = self
            .table()
            .ok_or_else(|| Error::Domain("only table-backed functions can be saved".into()))?;
        sink.write_all(MAGIC)?;
        sink.write_all(&(self.shape.n() as u64).to_le_bytes())?;
        sink.write_all(&(self.shape.d() as u64).to_le_bytes())?;
        let mut payload = vec![0u8; table.len().div_ceil(8)];
        for k in 0..table.len() {
            if table.get(k) {
                payload[k / 8] |= 1 << (k % 8);
            }
        }
        sink.write_all(&payload)?;
        Ok(())
    }

    pub fn load<R: Read>(mut source: R) -> Result<BoolFunc> {
        let mut header = [0u8; 20];
        source
            .read_exact(&mut header)
            .map_err(|_| Error::Format("truncated header".into()))?;
        if &header[..4] != MAGIC {
            return Err(Error::Format("bad magic, expected AGF1".into()));
        }
        let n = u64::from_le_bytes(header[4..12].try_into().unwrap());
        let d = u64::from_le_bytes(header[12..20].try_into().unwrap());
        let shape = GridShape::new(
            usize::try_from(n).map_err(|_| Error::Format("n does not fit".into()))?,
            usize::try_from(d).map_err(|_| Error::Format("d does not fit".into()))?,
        )
        .map_err(|e| Error::Format(format!("invalid shape in header: {e}")))?;
        check_capacity(&shape, DEFAULT_TABLE_CAPACITY)?;
        let mut payload = Vec::new();
        source.read_to_end(&mut payload)?;
        let expected = shape.len().div_ceil(8);
        if payload.len() != expected {
            return Err(Error::Format(format!(
                "payload has {} bytes, {shape} needs {expected}",
                payload.len()
            )));
        }
        let mut table = BitTable::zeros(shape.len());
        for k in 0..shape.len() {
            table.set(k, (payload[k / 8] >> (k % 8)) & 1 == 1);
        }
        if shape.len() % 8 != 0 && payload[expected - 1] >> (shape.len() % 8) != 0 {
            return Err(Error::Format("padding bits beyond n^d are set".into()));
        }
        BoolFunc::from_table(shape, table)
    }

    pub fn save_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.save(std::io::BufWriter::new(file))
    }

    pub fn load_file(path: impl AsRef<Path>) -> Result<BoolFunc> {
        let file = std::fs::File::open(path)?;
        Self::load(std::io::BufReader::new(file))
    }
}

pub(crate) fn check_capacity(shape: &GridShape, capacity: usize) -> Result<()> {
    if shape.len() > capacity {
        Err(Error::Capacity(format!("{shape} has {} points, limit is {capacity}", shape.len())))
    } else {
        Ok(())
    }
}

/// Monotonicity by unit steps only, which suffices by transitivity.
pub fn table_is_monotone(shape: &GridShape, table: &BitTable) -> bool {
    for idx in 0..shape.len() {
        if !table.get(idx) {
            continue;
        }
        let mut stride = 1;
        let mut rest = idx;
        for _ in 0..shape.d() {
            if rest % shape.n() + 1 < shape.n() && !table.get(idx + stride) {
                return false;
            }
            rest /= shape.n();
            stride *= shape.n();
        }
    }
    true
}

/// The 1-dimensional function `t ↦ f(fixed with coordinate dim = t)`.
///
/// `fixed` lists the other `d - 1` coordinates in order. Evaluations are
/// forwarded to `f` and counted there.
pub fn restrict_line(f: &Arc<BoolFunc>, dim: usize, fixed: &[usize]) -> Result<BoolFunc> {
    let shape = *f.shape();
    if dim >= shape.d() || fixed.len() != shape.d() - 1 || fixed.iter().any(|&c| c >= shape.n()) {
        return Err(Error::Domain(format!("invalid line restriction of {shape} along {dim} at {fixed:?}")));
    }
    let mut base = fixed.to_vec();
    base.insert(dim, 0);
    let base_idx = shape.index_unchecked(&base);
    let stride = shape.stride(dim);
    let inner = Arc::clone(f);
    Ok(BoolFunc::predicate(GridShape::new(shape.n(), 1)?, move |c| inner.eval_index(base_idx + c[0] * stride)))
}

/// `0^j 1^{n-j}` where `j` is the number of zeros of `g`.
pub fn sort_line(g: &BoolFunc) -> Result<BoolFunc> {
    let shape = *g.shape();
    if shape.d() != 1 {
        return Err(Error::Domain("sort_line needs a 1-dimensional function".into()));
    }
    let zeros = (0..shape.n()).filter(|&i| !g.eval_index(i)).count();
    BoolFunc::tabulate(shape, |c| c[0] >= zeros)
}

/// Test families used throughout the experiments.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Constant(bool),
    /// Independent fair bits.
    UniformRandom,
    /// `f(x) = 1` iff `Σ w_i x_i ≥ θ`; `None` means all weights 1 and
    /// `θ = d(n-1)/2`.
    MonotoneThreshold { weights: Option<Vec<f64>>, theta: Option<f64> },
    /// Upward closure of a random seed set with the given point density.
    RandomMonotone { density: f64 },
    /// `f(x) = 1` iff `x_dim < n/2`.
    AntiSlab { dim: usize },
    /// `f(x) = 1` iff `Σ_i ⌊2 x_i / n⌋` is even.
    BlockParity,
    /// Each entry of `base` flipped independently with probability `rho`.
    NoisyMonotone { base: Box<Family>, rho: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Constant(_) => "constant",
            Family::UniformRandom => "uniform_random",
            Family::MonotoneThreshold { .. } => "monotone_threshold",
            Family::RandomMonotone { .. } => "random_monotone",
            Family::AntiSlab { .. } => "anti_slab",
            Family::BlockParity => "block_parity",
            Family::NoisyMonotone { .. } => "noisy_monotone",
        }
    }

    /// Families that are monotone by construction.
    pub fn is_monotone_family(&self) -> bool {
        matches!(
            self,
            Family::Constant(_) | Family::MonotoneThreshold { .. } | Family::RandomMonotone { .. }
        )
    }

    /// Parses a family by name with its default parameters; `param`
    /// supplies the single numeric parameter where a family has one
    /// (anti_slab dimension, random_monotone density, noise rate).
    pub fn parse(kind: &str, param: Option<f64>) -> Result<Family> {
        Ok(match kind {
            "constant0" => Family::Constant(false),
            "constant1" | "constant" => Family::Constant(true),
            "uniform_random" => Family::UniformRandom,
            "monotone_threshold" => Family::MonotoneThreshold { weights: None, theta: param },
            "random_monotone" => Family::RandomMonotone { density: param.unwrap_or(0.1) },
            "anti_slab" => Family::AntiSlab { dim: param.unwrap_or(0.0) as usize },
            "block_parity" => Family::BlockParity,
            "noisy_monotone" => Family::NoisyMonotone {
                base: Box::new(Family::MonotoneThreshold { weights: None, theta: None }),
                rho: param.unwrap_or(0.05),
            },
            other => return Err(Error::Usage(format!("unknown function family `{other}`"))),
        })
    }
}

/// Builds a table-backed member of `family` on `shape`, deterministic in `seed`.
pub fn generate(family: &Family, shape: GridShape, seed: u64) -> Result<BoolFunc> {
    check_capacity(&shape, DEFAULT_TABLE_CAPACITY)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = shape.n();
    match family {
        Family::Constant(v) => BoolFunc::constant(shape, *v),
        Family::UniformRandom => {
            let bits: Vec<bool> = (0..shape.len()).map(|_| rng.gen::<bool>()).collect();
            BoolFunc::from_bools(shape, &bits)
        }
        Family::MonotoneThreshold { weights, theta } => {
            let weights = weights.clone().unwrap_or_else(|| vec![1.0; shape.d()]);
            if weights.len() != shape.d() || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                return Err(Error::Usage("threshold weights must be d finite nonnegative numbers".into()));
            }
            let theta = theta.unwrap_or(shape.d() as f64 * (n as f64 - 1.0) / 2.0);
            BoolFunc::tabulate(shape, |c| {
                c.iter().zip(&weights).map(|(&x, w)| x as f64 * w).sum::<f64>() >= theta
            })
        }
        Family::RandomMonotone { density } => {
            if !(0.0..=1.0).contains(density) {
                return Err(Error::Usage(format!("density {density} outside [0,1]")));
            }
            let mut table = BitTable::zeros(shape.len());
            // Index order visits every unit-step predecessor first.
            for idx in 0..shape.len() {
                let mut value = rng.gen_bool(*density);
                let mut stride = 1;
                let mut rest = idx;
                for _ in 0..shape.d() {
                    if rest % n > 0 && table.get(idx - stride) {
                        value = true;
                    }
                    rest /= n;
                    stride *= n;
                }
                table.set(idx, value);
            }
            BoolFunc::from_table(shape, table)
        }
        Family::AntiSlab { dim } => {
            if *dim >= shape.d() {
                return Err(Error::Usage(format!("anti_slab dimension {dim} >= d = {}", shape.d())));
            }
            let dim = *dim;
            BoolFunc::tabulate(shape, |c| 2 * c[dim] < n)
        }
        Family::BlockParity => BoolFunc::tabulate(shape, |c| c.iter().map(|&x| 2 * x / n).sum::<usize>() % 2 == 0),
        Family::NoisyMonotone { base, rho } => {
            if !base.is_monotone_family() {
                return Err(Error::Usage("noisy_monotone needs a monotone base family".into()));
            }
            if !(0.0..=1.0).contains(rho) {
                return Err(Error::Usage(format!("noise rate {rho} outside [0,1]")));
            }
            let base = generate(base, shape, seed ^ 0x9e37_79b9_7f4a_7c15)?;
            let mut table = base.to_table()?;
            for idx in 0..shape.len() {
                if rng.gen_bool(*rho) {
                    table.set(idx, !table.get(idx));
                }
            }
            BoolFunc::from_table(shape, table)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(n: usize, d: usize) -> GridShape {
        GridShape::new(n, d).unwrap()
    }

    #[test]
    fn eval_examples() {
        let one = BoolFunc::constant(shape(4, 3), true).unwrap();
        assert!(one.eval(&Point::from([1, 2, 3])).unwrap());
        let thr = BoolFunc::tabulate(shape(8, 1), |c| c[0] >= 4).unwrap();
        assert!(!thr.eval(&Point::from([3])).unwrap());
        let f = BoolFunc::from_values(shape(4, 1), &[1, 1, 0, 0]).unwrap();
        assert!(!f.eval(&Point::from([2])).unwrap());
        assert!(f.eval(&Point::from([4])).is_err());
    }

    #[test]
    fn query_counter_counts_every_call() {
        let f = generate(&Family::UniformRandom, shape(4, 2), 1).unwrap();
        for k in 0..10 {
            f.eval_index(k);
        }
        f.eval_index(3);
        assert_eq!(f.queries(), 11);
        f.peek(5);
        assert_eq!(f.queries(), 11);
        f.reset_queries();
        assert_eq!(f.queries(), 0);
    }

    #[test]
    fn counter_is_exact_under_concurrency() {
        let f = generate(&Family::UniformRandom, shape(8, 2), 3).unwrap();
        std::thread::scope(|s| {
            for _ in 0..8 {
                s.spawn(|| {
                    for k in 0..1000 {
                        f.eval_index(k % 64);
                    }
                });
            }
        });
        assert_eq!(f.queries(), 8000);
    }

    #[test]
    fn generator_examples() {
        let f = generate(&Family::AntiSlab { dim: 0 }, shape(4, 1), 0).unwrap();
        assert_eq!(f.table().unwrap().to_bools(), vec![true, true, false, false]);
        assert!(generate(&Family::AntiSlab { dim: 2 }, shape(4, 2), 0).is_err());
        assert!(Family::parse("no_such_family", None).is_err());
        let bp = generate(&Family::BlockParity, shape(4, 2), 0).unwrap();
        assert!(!bp.is_monotone().unwrap());
    }

    #[test]
    fn monotone_generators_are_monotone() {
        for (n, d) in [(2, 1), (2, 5), (4, 3), (8, 2), (3, 3)] {
            for seed in 0..20 {
                for fam in [
                    Family::MonotoneThreshold { weights: None, theta: None },
                    Family::MonotoneThreshold { weights: Some((0..d).map(|k| k as f64 + 0.5).collect()), theta: Some(seed as f64) },
                    Family::RandomMonotone { density: 0.05 },
                    Family::RandomMonotone { density: 0.3 },
                    Family::Constant(true),
                ] {
                    let f = generate(&fam, shape(n, d), seed).unwrap();
                    assert!(f.is_monotone().unwrap(), "{fam:?} on [{n}]^{d} seed {seed}");
                }
            }
        }
    }

    #[test]
    fn generation_is_seed_deterministic() {
        let fam = Family::NoisyMonotone { base: Box::new(Family::RandomMonotone { density: 0.1 }), rho: 0.2 };
        let a = generate(&fam, shape(8, 3), 42).unwrap();
        let b = generate(&fam, shape(8, 3), 42).unwrap();
        let c = generate(&fam, shape(8, 3), 43).unwrap();
        assert_eq!(a.table(), b.table());
        assert_ne!(a.table(), c.table());
    }

    #[test]
    fn is_monotone_examples() {
        assert!(BoolFunc::constant(shape(4, 2), false).unwrap().is_monotone().unwrap());
        assert!(BoolFunc::constant(shape(4, 2), true).unwrap().is_monotone().unwrap());
        assert!(!BoolFunc::from_values(shape(4, 1), &[1, 1, 0, 0]).unwrap().is_monotone().unwrap());
        let big = BoolFunc::predicate(GridShape::new(1 << 13, 2).unwrap(), |_| true);
        assert!(matches!(big.is_monotone(), Err(Error::Capacity(_))));
    }

    #[test]
    fn restrict_line_examples() {
        let f = Arc::new(generate(&Family::BlockParity, shape(4, 2), 0).unwrap());
        let line = restrict_line(&f, 0, &[0]).unwrap();
        let vals: Vec<bool> = (0..4).map(|t| line.eval_index(t)).collect();
        assert_eq!(vals, vec![true, true, false, false]);
        assert_eq!(f.queries(), 4);

        let slab = Arc::new(generate(&Family::AntiSlab { dim: 1 }, shape(4, 2), 0).unwrap());
        for other in 0..4 {
            let line = restrict_line(&slab, 0, &[other]).unwrap();
            let vals: Vec<bool> = (0..4).map(|t| line.eval_index(t)).collect();
            assert!(vals.iter().all(|&v| v == vals[0]));
        }
        assert!(restrict_line(&slab, 2, &[0]).is_err());
        assert!(restrict_line(&slab, 0, &[4]).is_err());
    }

    #[test]
    fn sort_line_examples() {
        let s = shape(4, 1);
        let sorted = |v: &[u8]| sort_line(&BoolFunc::from_values(s, v).unwrap()).unwrap().table().unwrap().to_bools();
        assert_eq!(sorted(&[1, 0, 1, 0]), vec![false, false, true, true]);
        assert_eq!(sorted(&[0, 1, 1, 1]), vec![false, true, true, true]);
        assert_eq!(sorted(&[1, 1, 0, 0]), vec![false, false, true, true]);
        assert!(sort_line(&BoolFunc::constant(shape(2, 2), true).unwrap()).is_err());
    }

    #[test]
    fn save_load_format() {
        let f = generate(&Family::UniformRandom, shape(8, 2), 9).unwrap();
        let mut bytes = Vec::new();
        f.save(&mut bytes).unwrap();
        assert_eq!(&bytes[..4], b"AGF1");
        assert_eq!(u64::from_le_bytes(bytes[4..12].try_into().unwrap()), 8);
        assert_eq!(u64::from_le_bytes(bytes[12..20].try_into().unwrap()), 2);
        assert_eq!(bytes.len(), 20 + 8);
        let g = BoolFunc::load(bytes.as_slice()).unwrap();
        assert_eq!(g.shape(), f.shape());
        assert_eq!(g.table(), f.table());

        // bit k of the payload is the value at index k, LSB first
        let h = BoolFunc::from_values(shape(3, 1), &[1, 0, 1]).unwrap();
        let mut bytes = Vec::new();
        h.save(&mut bytes).unwrap();
        assert_eq!(bytes[20..], [0b101]);
    }

    #[test]
    fn load_rejects_malformed_files() {
        let f = generate(&Family::UniformRandom, shape(8, 2), 9).unwrap();
        let mut bytes = Vec::new();
        f.save(&mut bytes).unwrap();
        assert!(matches!(BoolFunc::load(&bytes[..10]), Err(Error::Format(_))));
        assert!(matches!(BoolFunc::load(&bytes[..bytes.len() - 1]), Err(Error::Format(_))));
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(matches!(BoolFunc::load(extra.as_slice()), Err(Error::Format(_))));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(BoolFunc::load(bad.as_slice()), Err(Error::Format(_))));
    }

    proptest::proptest! {
        #[test]
        fn save_load_is_identity(n in 1usize..7, d in 1usize..4, seed in 0u64..1000) {
            let f = generate(&Family::UniformRandom, GridShape::new(n, d).unwrap(), seed).unwrap();
            let mut bytes = Vec::new();
            f.save(&mut bytes).unwrap();
            let g = BoolFunc::load(bytes.as_slice()).unwrap();
            proptest::prop_assert_eq!(g.shape(), f.shape());
            proptest::prop_assert_eq!(g.table(), f.table());
        }

        #[test]
        fn sort_line_preserves_ones_and_is_monotone(mask in 0u64..(1 << 16)) {
            let s = GridShape::new(16, 1).unwrap();
            let g = BoolFunc::from_table(s, BitTable::from_mask(16, mask)).unwrap();
            let sorted = sort_line(&g).unwrap();
            proptest::prop_assert_eq!(sorted.table().unwrap().count_ones(), mask.count_ones() as usize);
            proptest::prop_assert!(sorted.is_monotone().unwrap());
        }
    }
}
