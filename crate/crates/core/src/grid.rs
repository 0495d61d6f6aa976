//! The hypergrid `[n]^d`, its augmented edge set, and the matching family
//! `H^c_{i,a}` that partitions it.
//!
//! Coordinates are 0-indexed. Linear indices are row-major with dimension 0
//! varying fastest, so for `n = 2^b` bit `k*b + j` of a linear index is bit
//! `j` of coordinate `k`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// The domain `[n]^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridShape {
    n: usize,
    d: usize,
    len: usize,
}

impl GridShape {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::Domain(format!("grid needs n >= 1 and d >= 1, got n={n}, d={d}")));
        }
        let mut len: usize = 1;
        for _ in 0..d {
            len = len
                .checked_mul(n)
                .ok_or_else(|| Error::Capacity(format!("{n}^{d} points overflow the index range")))?;
        }
        Ok(Self { n, d, len })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of points, `n^d`.
    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_pow2(&self) -> bool {
        self.n.is_power_of_two()
    }

    /// `log2 n`, failing when `n` is not a power of two.
    pub fn log2_n(&self) -> Result<u32> {
        if self.is_pow2() {
            Ok(self.n.trailing_zeros())
        } else {
            Err(Error::Domain(format!("n = {} is not a power of 2", self.n)))
        }
    }

    /// Index stride of dimension `dim`, i.e. `n^dim`.
    #[inline]
    pub fn stride(&self, dim: usize) -> usize {
        self.n.pow(dim as u32)
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.coords.len() == self.d && p.coords.iter().all(|&c| c < self.n)
    }

    fn check(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::Domain(format!("point {p} is not in [{}]^{}", self.n, self.d)))
        }
    }

    pub fn linear_index(&self, p: &Point) -> Result<usize> {
        self.check(p)?;
        Ok(self.index_unchecked(&p.coords))
    }

    #[inline]
    pub(crate) fn index_unchecked(&self, coords: &[usize]) -> usize {
        coords.iter().rev().fold(0, |acc, &c| acc * self.n + c)
    }

    pub fn point_of(&self, idx: usize) -> Result<Point> {
        if idx >= self.len {
            return Err(Error::Domain(format!("index {idx} out of range [0, {})", self.len)));
        }
        Ok(Point::new(self.coords_of(idx)))
    }

    pub(crate) fn coords_of(&self, mut idx: usize) -> Vec<usize> {
        let mut coords = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            coords.push(idx % self.n);
            idx /= self.n;
        }
        coords
    }

    /// Coordinate `dim` of the point with linear index `idx`.
    #[inline]
    pub fn coord_of(&self, idx: usize, dim: usize) -> usize {
        (idx / self.stride(dim)) % self.n
    }

    /// All points in linear-index order.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len).map(move |i| Point::new(self.coords_of(i)))
    }

    /// Every matching id `(i, a, c)` with `i < d`, `a < log2 n`, `c ∈ {0,1}`.
    pub fn matching_ids(&self) -> Result<Vec<MatchingId>> {
        let log_n = self.log2_n()?;
        let mut ids = Vec::with_capacity(self.d * log_n as usize * 2);
        for dim in 0..self.d {
            for exp in 0..log_n {
                for parity in 0..2u8 {
                    ids.push(MatchingId { dim, exp, parity });
                }
            }
        }
        Ok(ids)
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]^{}", self.n, self.d)
    }
}

/// A point of the grid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<usize>,
}

impl Point {
    pub fn new(coords: Vec<usize>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn with_coord(&self, dim: usize, value: usize) -> Point {
        let mut coords = self.coords.clone();
        coords[dim] = value;
        Point { coords }
    }
}

impl From<Vec<usize>> for Point {
    fn from(coords: Vec<usize>) -> Self {
        Self { coords }
    }
}

impl<const D: usize> From<[usize; D]> for Point {
    fn from(coords: [usize; D]) -> Self {
        Self { coords: coords.to_vec() }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Identifier of the matching `H^parity_{dim,exp}`: edges of step `2^exp`
/// along `dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchingId {
    pub dim: usize,
    pub exp: u32,
    pub parity: u8,
}

impl MatchingId {
    pub fn new(dim: usize, exp: u32, parity: u8) -> Self {
        Self { dim, exp, parity }
    }

    #[inline]
    pub fn step(&self) -> usize {
        1 << self.exp
    }

    pub fn validate(&self, shape: &GridShape) -> Result<()> {
        let log_n = shape.log2_n()?;
        if self.dim >= shape.d() || self.exp >= log_n || self.parity > 1 {
            return Err(Error::Domain(format!("matching {self} is not valid for {shape}")));
        }
        Ok(())
    }
}

impl fmt::Display for MatchingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H^{}_{{{},{}}}", self.parity, self.dim, self.exp)
    }
}

/// Role of a single coordinate value in a one-dimensional matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
    Unmatched,
}

/// Side of coordinate value `v` in the line matching of step `2^exp` and the
/// given parity on `[n]`.
#[inline]
pub fn coord_side(n: usize, v: usize, exp: u32, parity: u8) -> Side {
    let s = 1usize << exp;
    let low_half = v % (2 * s) < s;
    match parity {
        0 => {
            if low_half {
                Side::Lower
            } else {
                Side::Upper
            }
        }
        _ => {
            if !low_half && v + s < n {
                Side::Lower
            } else if low_half && v >= s {
                Side::Upper
            } else {
                Side::Unmatched
            }
        }
    }
}

/// Membership of a point in a matching, with its partner when matched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    LowerEndpoint(Point),
    UpperEndpoint(Point),
    Unmatched,
}

pub fn classify_in_matching(shape: &GridShape, x: &Point, m: MatchingId) -> Result<Endpoint> {
    shape.check(x)?;
    m.validate(shape)?;
    let v = x.coords[m.dim];
    Ok(match coord_side(shape.n(), v, m.exp, m.parity) {
        Side::Lower => Endpoint::LowerEndpoint(x.with_coord(m.dim, v + m.step())),
        Side::Upper => Endpoint::UpperEndpoint(x.with_coord(m.dim, v - m.step())),
        Side::Unmatched => Endpoint::Unmatched,
    })
}

/// Side of the point with linear index `idx` in matching `m` (no validation).
#[inline]
pub fn index_side(shape: &GridShape, idx: usize, m: MatchingId) -> Side {
    coord_side(shape.n(), shape.coord_of(idx, m.dim), m.exp, m.parity)
}

/// Partner of `idx` in `m`, if matched.
#[inline]
pub fn index_partner(shape: &GridShape, idx: usize, m: MatchingId) -> Option<usize> {
    let shift = m.step() * shape.stride(m.dim);
    match index_side(shape, idx, m) {
        Side::Lower => Some(idx + shift),
        Side::Upper => Some(idx - shift),
        Side::Unmatched => None,
    }
}

/// An edge of the augmented hypergrid, oriented lower → upper.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AugEdge {
    pub lower: Point,
    pub upper: Point,
    pub id: MatchingId,
}

/// Number of edges in `H^c_{i,a}`: `n^{d-1}` lines, each contributing `n/2`
/// edges for parity 0 and `n/2 - 2^a` for parity 1.
pub fn matching_size(shape: &GridShape, m: MatchingId) -> Result<usize> {
    m.validate(shape)?;
    let per_line = match m.parity {
        0 => shape.n() / 2,
        _ => shape.n() / 2 - m.step(),
    };
    Ok(per_line * shape.len() / shape.n())
}

/// Lower endpoints of `m` as `(lower_index, upper_index)` pairs, in index order.
pub fn matching_index_pairs(shape: &GridShape, m: MatchingId) -> Result<Vec<(usize, usize)>> {
    m.validate(shape)?;
    let shift = m.step() * shape.stride(m.dim);
    Ok((0..shape.len())
        .filter(|&idx| index_side(shape, idx, m) == Side::Lower)
        .map(|idx| (idx, idx + shift))
        .collect())
}

pub fn enumerate_matching(shape: &GridShape, m: MatchingId) -> Result<Vec<AugEdge>> {
    Ok(matching_index_pairs(shape, m)?
        .into_iter()
        .map(|(lo, hi)| AugEdge {
            lower: Point::new(shape.coords_of(lo)),
            upper: Point::new(shape.coords_of(hi)),
            id: m,
        })
        .collect())
}

pub fn enumerate_augmented_edges(shape: &GridShape) -> Result<Vec<AugEdge>> {
    let mut edges = Vec::new();
    for m in shape.matching_ids()? {
        edges.extend(enumerate_matching(shape, m)?);
    }
    Ok(edges)
}

/// All augmented edges as `(lower_index, upper_index, id)`, grouped by
/// matching when `n` is a power of 2.
///
/// Any `n` is accepted: an edge joins two points that differ by a power of 2
/// in one coordinate, and its id carries the parity its lower endpoint would
/// have in the matching of that step.
pub fn augmented_index_edges(shape: &GridShape) -> Result<Vec<(usize, usize, MatchingId)>> {
    let mut edges = Vec::new();
    if shape.is_pow2() {
        for m in shape.matching_ids()? {
            edges.extend(matching_index_pairs(shape, m)?.into_iter().map(|(a, b)| (a, b, m)));
        }
    } else {
        for idx in 0..shape.len() {
            edges.extend(upper_neighbors(shape, idx)?.into_iter().map(|(v, m)| (idx, v, m)));
        }
    }
    Ok(edges)
}

/// Closed-form edge count `d · n^{d-1} · Σ_a (n - 2^a)`.
pub fn augmented_edge_count(shape: &GridShape) -> Result<usize> {
    let log_n = shape.log2_n()?;
    let per_line: usize = (0..log_n).map(|a| shape.n() - (1 << a)).sum();
    Ok(shape.d() * (shape.len() / shape.n()) * per_line)
}

/// Outcome of comparing two points in the coordinate-wise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointOrder {
    Less,
    Equal,
    Greater,
    Incomparable,
}

pub fn compare(x: &Point, y: &Point) -> Result<PointOrder> {
    if x.dim() != y.dim() {
        return Err(Error::Domain(format!("cannot compare {x} with {y}: dimension mismatch")));
    }
    Ok(compare_coords(&x.coords, &y.coords))
}

pub(crate) fn compare_coords(x: &[usize], y: &[usize]) -> PointOrder {
    let mut le = true;
    let mut ge = true;
    for (a, b) in x.iter().zip(y) {
        match a.cmp(b) {
            Ordering::Less => ge = false,
            Ordering::Greater => le = false,
            Ordering::Equal => {}
        }
    }
    match (le, ge) {
        (true, true) => PointOrder::Equal,
        (true, false) => PointOrder::Less,
        (false, true) => PointOrder::Greater,
        (false, false) => PointOrder::Incomparable,
    }
}

/// Monotone distance in the augmented hypergrid: `Σ_i popcount(y_i - x_i)`
/// when `x ≼ y`, `None` otherwise.
pub fn directed_distance(shape: &GridShape, x: &Point, y: &Point) -> Result<Option<u32>> {
    shape.check(x)?;
    shape.check(y)?;
    Ok(coords_distance(&x.coords, &y.coords))
}

pub(crate) fn coords_distance(x: &[usize], y: &[usize]) -> Option<u32> {
    let mut total = 0;
    for (a, b) in x.iter().zip(y) {
        if a > b {
            return None;
        }
        total += (b - a).count_ones();
    }
    Some(total)
}

/// Directed distance between two linear indices.
pub fn index_distance(shape: &GridShape, x: usize, y: usize) -> Option<u32> {
    let (mut x, mut y) = (x, y);
    let mut total = 0;
    for _ in 0..shape.d() {
        let (a, b) = (x % shape.n(), y % shape.n());
        if a > b {
            return None;
        }
        total += (b - a).count_ones();
        x /= shape.n();
        y /= shape.n();
    }
    Some(total)
}

/// Upper augmented neighbours of `idx` (every power-of-two step that stays
/// in range), with the matching each edge belongs to.
pub fn upper_neighbors(shape: &GridShape, idx: usize) -> Result<Vec<(usize, MatchingId)>> {
    if idx >= shape.len() {
        return Err(Error::Domain(format!("index {idx} outside {shape}")));
    }
    let log_n = usize::BITS - shape.n().saturating_sub(1).leading_zeros();
    let mut out = Vec::new();
    for dim in 0..shape.d() {
        let v = shape.coord_of(idx, dim);
        let stride = shape.stride(dim);
        for exp in 0..log_n {
            let s = 1usize << exp;
            if v + s < shape.n() {
                let parity = if v % (2 * s) < s { 0 } else { 1 };
                out.push((idx + s * stride, MatchingId { dim, exp, parity }));
            }
        }
    }
    Ok(out)
}
