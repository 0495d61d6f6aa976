//! Exact desk-scale oracles: the violation graph, distance to monotonicity,
//! violated augmented edges, influences, `Γ⁻`, the optimal matching `M*` and
//! the isoperimetry ratios.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::func::{check_capacity, BitTable, BoolFunc};
use crate::grid::{augmented_index_edges, index_distance, GridShape, MatchingId};

/// Largest grid the exact oracles accept.
pub const EXACT_ORACLE_CAPACITY: usize = 4096;

/// Largest grid the monotone catalog will enumerate (one `u64` mask per function).
pub const CATALOG_POINT_LIMIT: usize = 64;
pub const CATALOG_SIZE_LIMIT: usize = 1 << 22;

/// Bipartite graph from 1-points to the 0-points strictly above them.
#[derive(Clone, Debug)]
pub struct ViolationGraph {
    pub ones: Vec<usize>,
    pub zeros: Vec<usize>,
    /// `adj[k]` lists positions in `zeros` above `ones[k]`.
    pub adj: Vec<Vec<usize>>,
}

impl ViolationGraph {
    pub fn build(f: &BoolFunc) -> Result<Self> {
        let shape = *f.shape();
        check_capacity(&shape, EXACT_ORACLE_CAPACITY)?;
        let table = f.to_table()?;
        Ok(Self::from_table(&shape, &table))
    }

    pub(crate) fn from_table(shape: &GridShape, table: &BitTable) -> Self {
        let (ones, zeros): (Vec<usize>, Vec<usize>) = (0..shape.len()).partition(|&i| table.get(i));
        let adj = ones
            .iter()
            .map(|&x| {
                zeros
                    .iter()
                    .enumerate()
                    .filter(|&(_, &y)| index_distance(shape, x, y).is_some())
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        Self { ones, zeros, adj }
    }

    pub fn arc_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

/// Vertex-disjoint pairs `(x, y)` with `x ≺ y`, stored as linear indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairMatching {
    shape: GridShape,
    pairs: Vec<(usize, usize)>,
}

impl PairMatching {
    /// Checks comparability and vertex-disjointness; pairs are kept sorted.
    pub fn new(shape: GridShape, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(x, y) in &pairs {
            if x >= shape.len() || y >= shape.len() {
                return Err(Error::Domain(format!("pair ({x}, {y}) outside {shape}")));
            }
            if x == y || index_distance(&shape, x, y).is_none() {
                return Err(Error::Domain(format!("pair ({x}, {y}) is not strictly increasing")));
            }
            if !seen.insert(x) || !seen.insert(y) {
                return Err(Error::Domain(format!("pair ({x}, {y}) reuses an endpoint")));
            }
        }
        pairs.sort_unstable();
        Ok(Self { shape, pairs })
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn distance(&self, k: usize) -> u32 {
        let (x, y) = self.pairs[k];
        index_distance(&self.shape, x, y).unwrap()
    }

    pub fn total_distance(&self) -> u64 {
        (0..self.len()).map(|k| self.distance(k) as u64).sum()
    }

    /// `Ψ = Σ d²`.
    pub fn psi(&self) -> u64 {
        (0..self.len()).map(|k| (self.distance(k) as u64).pow(2)).sum()
    }

    /// Pairs at distance exactly `ell`.
    pub fn at_distance(&self, ell: u32) -> PairMatching {
        let pairs = (0..self.len()).filter(|&k| self.distance(k) == ell).map(|k| self.pairs[k]).collect();
        PairMatching { shape: self.shape, pairs }
    }

    pub fn distance_classes(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = (0..self.len()).map(|k| self.distance(k)).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Partner of `v` together with whether `v` is the lower end.
    pub fn partner(&self, v: usize) -> Option<(usize, bool)> {
        self.pairs.iter().find_map(|&(x, y)| {
            if x == v {
                Some((y, true))
            } else if y == v {
                Some((x, false))
            } else {
                None
            }
        })
    }

    /// Every pair goes from a 1-point to a 0-point of `f`.
    pub fn is_violation_matching(&self, f: &BoolFunc) -> bool {
        f.shape() == &self.shape && self.pairs.iter().all(|&(x, y)| f.peek(x) && !f.peek(y))
    }
}

/// Maximum bipartite matching. `adj[u]` lists right vertices in `0..n_right`.
/// Returns the partner of every left vertex.
pub fn hopcroft_karp(n_right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    const INF: u32 = u32::MAX;
    let n_left = adj.len();
    let mut match_l: Vec<Option<usize>> = vec![None; n_left];
    let mut match_r: Vec<Option<usize>> = vec![None; n_right];
    let mut dist = vec![INF; n_left];

    fn dfs(
        u: usize,
        adj: &[Vec<usize>],
        dist: &mut [u32],
        match_l: &mut [Option<usize>],
        match_r: &mut [Option<usize>],
        it: &mut [usize],
    ) -> bool {
        while it[u] < adj[u].len() {
            let v = adj[u][it[u]];
            it[u] += 1;
            let ok = match match_r[v] {
                None => true,
                Some(w) => dist[w] == dist[u] + 1 && dfs(w, adj, dist, match_l, match_r, it),
            };
            if ok {
                match_l[u] = Some(v);
                match_r[v] = Some(u);
                return true;
            }
        }
        dist[u] = u32::MAX;
        false
    }

    loop {
        let mut queue = std::collections::VecDeque::new();
        for u in 0..n_left {
            if match_l[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match match_r[v] {
                    None => found = true,
                    Some(w) if dist[w] == INF => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut it = vec![0; n_left];
        let mut grew = false;
        for u in 0..n_left {
            if match_l[u].is_none() && dfs(u, adj, &mut dist, &mut match_l, &mut match_r, &mut it) {
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    match_l
}

/// Minimum-cost assignment of every row to a distinct column
/// (`rows ≤ cols`). Returns the column of each row.
pub fn hungarian(cost: &[Vec<i64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let m = cost[0].len();
    assert!(n <= m, "hungarian needs rows <= cols");
    // potentials and assignment are 1-based with a virtual column 0
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![i64::MAX; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=m {
        if p[j] != 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Maximum violation matching as a witness.
pub fn max_violation_matching(f: &BoolFunc) -> Result<PairMatching> {
    let g = ViolationGraph::build(f)?;
    let partner = hopcroft_karp(g.zeros.len(), &g.adj);
    let pairs = partner
        .iter()
        .enumerate()
        .filter_map(|(k, p)| p.map(|z| (g.ones[k], g.zeros[z])))
        .collect();
    PairMatching::new(*f.shape(), pairs)
}

/// `ε` with a maximum violation matching as witness.
#[derive(Clone, Debug)]
pub struct Distance {
    pub eps: Ratio<u64>,
    pub witness: PairMatching,
}

impl Distance {
    pub fn eps_f64(&self) -> f64 {
        *self.eps.numer() as f64 / *self.eps.denom() as f64
    }
}

pub fn distance_to_monotonicity(f: &BoolFunc) -> Result<Distance> {
    let witness = max_violation_matching(f)?;
    Ok(Distance { eps: Ratio::new(witness.len() as u64, f.shape().len() as u64), witness })
}

/// All monotone functions on a small grid as bit masks.
#[derive(Debug)]
pub struct MonotoneCatalog {
    shape: GridShape,
    masks: Vec<u64>,
}

impl MonotoneCatalog {
    /// Cached per shape.
    pub fn get(shape: GridShape) -> Result<Arc<MonotoneCatalog>> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<MonotoneCatalog>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.lock().unwrap().get(&(shape.n(), shape.d())) {
            return Ok(Arc::clone(c));
        }
        let catalog = Arc::new(Self::enumerate(shape)?);
        cache.lock().unwrap().insert((shape.n(), shape.d()), Arc::clone(&catalog));
        Ok(catalog)
    }

    fn enumerate(shape: GridShape) -> Result<Self> {
        if shape.len() > CATALOG_POINT_LIMIT {
            return Err(Error::Capacity(format!("monotone catalog of {shape} needs at most {CATALOG_POINT_LIMIT} points")));
        }
        let mut masks = Vec::new();
        // fix values in index order; a 1 forces nothing below, a 0 is only
        // allowed when every unit-step predecessor is 0
        fn rec(shape: &GridShape, idx: usize, mask: u64, out: &mut Vec<u64>) -> Result<()> {
            if idx == shape.len() {
                if out.len() >= CATALOG_SIZE_LIMIT {
                    return Err(Error::Capacity(format!("{shape} has too many monotone functions")));
                }
                out.push(mask);
                return Ok(());
            }
            rec(shape, idx + 1, mask | (1 << idx), out)?;
            let pred_one = (0..shape.d()).any(|dim| shape.coord_of(idx, dim) > 0 && mask >> (idx - shape.stride(dim)) & 1 == 1);
            if !pred_one {
                rec(shape, idx + 1, mask, out)?;
            }
            Ok(())
        }
        rec(&shape, 0, 0, &mut masks)?;
        masks.sort_unstable();
        Ok(Self { shape, masks })
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Fewest bit changes from `mask` to a monotone function.
    pub fn min_changes(&self, mask: u64) -> u32 {
        self.masks.iter().map(|g| (g ^ mask).count_ones()).min().unwrap()
    }
}

/// Minimum fraction of points to change, by comparing against every
/// monotone function.
pub fn brute_force_distance(f: &BoolFunc) -> Result<Ratio<u64>> {
    let shape = *f.shape();
    let catalog = MonotoneCatalog::get(shape)?;
    let mask = f.to_table()?.low_word();
    Ok(Ratio::new(catalog.min_changes(mask) as u64, shape.len() as u64))
}

/// Violated and upward-sensitive augmented edges as `(lower, upper, id)`.
#[derive(Clone, Debug, Default)]
pub struct SensitiveEdges {
    pub s_minus: Vec<(usize, usize, MatchingId)>,
    pub s_plus: Vec<(usize, usize, MatchingId)>,
}

pub fn violated_aug_edges(f: &BoolFunc) -> Result<SensitiveEdges> {
    let shape = *f.shape();
    check_capacity(&shape, EXACT_ORACLE_CAPACITY)?;
    let table = f.to_table()?;
    let mut out = SensitiveEdges::default();
    for e in augmented_index_edges(&shape)? {
        match (table.get(e.0), table.get(e.1)) {
            (true, false) => out.s_minus.push(e),
            (false, true) => out.s_plus.push(e),
            _ => {}
        }
    }
    Ok(out)
}

/// `(|S⁺|, |S⁻|)` without storing the edges, for any table-backed grid.
pub fn sensitive_edge_counts(f: &BoolFunc) -> Result<(u64, u64)> {
    let shape = *f.shape();
    let table = f.to_table()?;
    let (mut plus, mut minus) = (0, 0);
    for u in 0..shape.len() {
        let fu = table.get(u);
        for (v, _) in crate::grid::upper_neighbors(&shape, u)? {
            match (fu, table.get(v)) {
                (true, false) => minus += 1,
                (false, true) => plus += 1,
                _ => {}
            }
        }
    }
    Ok((plus, minus))
}

/// Maximum set of vertex-disjoint violated augmented edges.
#[derive(Clone, Debug)]
pub struct GammaMinus {
    pub gamma: Ratio<u64>,
    pub witness: Vec<(usize, usize)>,
}

pub fn gamma_minus(f: &BoolFunc) -> Result<GammaMinus> {
    let edges = violated_aug_edges(f)?;
    let witness = disjoint_edges(&edges.s_minus);
    Ok(GammaMinus { gamma: Ratio::new(witness.len() as u64, f.shape().len() as u64), witness })
}

fn disjoint_edges(s_minus: &[(usize, usize, MatchingId)]) -> Vec<(usize, usize)> {
    let mut left: HashMap<usize, usize> = HashMap::new();
    let mut right: HashMap<usize, usize> = HashMap::new();
    let mut left_ids = Vec::new();
    let mut right_ids = Vec::new();
    let mut adj: Vec<Vec<usize>> = Vec::new();
    for &(x, y, _) in s_minus {
        let u = *left.entry(x).or_insert_with(|| {
            left_ids.push(x);
            adj.push(Vec::new());
            left_ids.len() - 1
        });
        let v = *right.entry(y).or_insert_with(|| {
            right_ids.push(y);
            right_ids.len() - 1
        });
        adj[u].push(v);
    }
    let mut out: Vec<(usize, usize)> = hopcroft_karp(right_ids.len(), &adj)
        .into_iter()
        .enumerate()
        .filter_map(|(u, v)| v.map(|v| (left_ids[u], right_ids[v])))
        .collect();
    out.sort_unstable();
    out
}

/// Objective used to break ties among minimum-distance maximum matchings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// Maximize `Ψ = Σ d²`.
    Psi,
    /// Maximize the potential `Φ` of the per-matching alignment weights.
    Phi,
}

/// A maximum violation matching with minimum total distance.
#[derive(Clone, Debug)]
pub struct OptimalMatching {
    pub mstar: PairMatching,
    pub total_distance: u64,
    pub psi: u64,
    /// `Σ d / |M*|`, or `None` for the empty matching.
    pub r: Option<Ratio<u64>>,
}

/// `M*` minimizing `Σ d` then maximizing `Ψ`.
pub fn optimal_matching(f: &BoolFunc) -> Result<OptimalMatching> {
    optimal_matching_by(f, TieBreak::Psi)
}

pub fn optimal_matching_by(f: &BoolFunc, tie: TieBreak) -> Result<OptimalMatching> {
    let shape = *f.shape();
    let g = ViolationGraph::build(f)?;
    let pairs = lexicographic_assignment(&shape, &g, tie)?;
    let mstar = PairMatching::new(shape, pairs)?;
    let total_distance = mstar.total_distance();
    let r = (!mstar.is_empty()).then(|| Ratio::new(total_distance, mstar.len() as u64));
    Ok(OptimalMatching { psi: mstar.psi(), total_distance, r, mstar })
}

fn lexicographic_assignment(shape: &GridShape, g: &ViolationGraph, tie: TieBreak) -> Result<Vec<(usize, usize)>> {
    if g.arc_count() == 0 {
        return Ok(Vec::new());
    }
    let vertices = shape.len() as i64;
    let dist = |x: usize, y: usize| index_distance(shape, x, y).unwrap() as i64;
    let max_d = g
        .adj
        .iter()
        .enumerate()
        .flat_map(|(k, ys)| ys.iter().map(move |&z| (k, z)))
        .map(|(k, z)| dist(g.ones[k], g.zeros[z]))
        .max()
        .unwrap();
    // arc cost K·d − secondary with 0 ≤ secondary·|V| < K, so the total
    // orders by Σd first and by the secondary sum second
    let (k_scale, secondary): (i64, Box<dyn Fn(usize, usize) -> i64>) = match tie {
        TieBreak::Psi => (1 + vertices * max_d * max_d, Box::new(move |x, y| dist(x, y).pow(2))),
        TieBreak::Phi => {
            let bound = 2 * shape.d() as i64 * shape.n() as i64;
            let s = *shape;
            (1 + vertices * bound, Box::new(move |x, y| crate::structure::pair_phi_scaled(&s, x, y) as i64))
        }
    };
    let rows = g.ones.len();
    let cols = g.zeros.len() + rows;
    let mut cost = vec![vec![0i64; cols]; rows];
    let mut max_arc = 0;
    for (k, ys) in g.adj.iter().enumerate() {
        for &z in ys {
            let c = k_scale * dist(g.ones[k], g.zeros[z]) - secondary(g.ones[k], g.zeros[z]);
            max_arc = max_arc.max(c);
            cost[k][z] = c;
        }
    }
    let big = max_arc
        .checked_mul(rows as i64 + 1)
        .and_then(|b| b.checked_add(1))
        .filter(|b| b.checked_mul(rows as i64).is_some())
        .ok_or_else(|| Error::Capacity("assignment costs overflow i64".into()))?;
    for (k, row) in cost.iter_mut().enumerate() {
        for (z, c) in row.iter_mut().enumerate() {
            if z >= g.zeros.len() || !g.adj[k].contains(&z) {
                *c = big;
            }
        }
    }
    let assignment = hungarian(&cost);
    Ok(assignment
        .into_iter()
        .enumerate()
        .filter(|&(k, z)| z < g.zeros.len() && g.adj[k].contains(&z))
        .map(|(k, z)| (g.ones[k], g.zeros[z]))
        .collect())
}

/// Exact isoperimetry quantities of one function.
#[derive(Clone, Debug, PartialEq)]
pub struct InfluenceReport {
    pub points: u64,
    pub s_plus: u64,
    pub s_minus: u64,
    pub gamma_count: u64,
    pub matching_size: u64,
    pub total_distance: u64,
    pub psi: u64,
    pub eps: Ratio<u64>,
    pub i_total: Ratio<u64>,
    pub i_plus: Ratio<u64>,
    pub i_minus: Ratio<u64>,
    pub gamma_minus: Ratio<u64>,
    pub r: Option<Ratio<u64>>,
    /// `(I⁻·Γ⁻/ε², I⁻/(r·ε), Γ⁻·r/ε)`; absent for monotone functions.
    pub ratios: Option<IsoperimetryRatios>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoperimetryRatios {
    pub margulis: Ratio<u64>,
    pub edge: Ratio<u64>,
    pub vertex: Ratio<u64>,
}

pub fn isoperimetry_report(f: &BoolFunc) -> Result<InfluenceReport> {
    let shape = *f.shape();
    let edges = violated_aug_edges(f)?;
    let gamma_count = disjoint_edges(&edges.s_minus).len() as u64;
    let opt = optimal_matching(f)?;
    let points = shape.len() as u64;
    let (s_plus, s_minus) = (edges.s_plus.len() as u64, edges.s_minus.len() as u64);
    let m = opt.mstar.len() as u64;
    let ratios = (m > 0).then(|| IsoperimetryRatios {
        margulis: Ratio::new(s_minus * gamma_count, m * m),
        edge: Ratio::new(s_minus, opt.total_distance),
        vertex: Ratio::new(gamma_count * opt.total_distance, m * m),
    });
    if m > 0 && (s_minus == 0 || gamma_count == 0) {
        return Err(Error::Integrity(format!("violations exist but no violated augmented edge on {shape}")));
    }
    Ok(InfluenceReport {
        points,
        s_plus,
        s_minus,
        gamma_count,
        matching_size: m,
        total_distance: opt.total_distance,
        psi: opt.psi,
        eps: Ratio::new(m, points),
        i_total: Ratio::new(s_plus + s_minus, points),
        i_plus: Ratio::new(s_plus, points),
        i_minus: Ratio::new(s_minus, points),
        gamma_minus: Ratio::new(gamma_count, points),
        r: opt.r,
        ratios,
    })
}

pub fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Outcome of the influence bound check `I⁻ < √d ⇒ I < 7·√d·log2 n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InfluenceBound {
    pub applicable: bool,
    pub holds: bool,
    pub i_total: f64,
    pub i_minus: f64,
}

/// Decided in exact integer arithmetic by squaring both inequalities.
pub fn influence_bound_check(f: &BoolFunc) -> Result<InfluenceBound> {
    let shape = *f.shape();
    let log_n = shape.log2_n()? as u128;
    if log_n < 2 {
        return Err(Error::Domain("the influence bound needs n >= 4".into()));
    }
    let edges = violated_aug_edges(f)?;
    let (minus, total) = (edges.s_minus.len() as u128, (edges.s_minus.len() + edges.s_plus.len()) as u128);
    let (d, pts) = (shape.d() as u128, shape.len() as u128);
    Ok(InfluenceBound {
        applicable: minus * minus < d * pts * pts,
        holds: total * total < 49 * d * log_n * log_n * pts * pts,
        i_total: total as f64 / pts as f64,
        i_minus: minus as f64 / pts as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{generate, Family};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(values: &[u8]) -> BoolFunc {
        BoolFunc::from_values(GridShape::new(values.len(), 1).unwrap(), values).unwrap()
    }

    fn from_mask(shape: GridShape, mask: u64) -> BoolFunc {
        BoolFunc::from_table(shape, BitTable::from_mask(shape.len(), mask)).unwrap()
    }

    #[test]
    fn edge_counts_agree_with_edge_lists() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (n, d) in [(4, 1), (3, 2), (4, 3), (8, 2)] {
            let shape = GridShape::new(n, d).unwrap();
            for _ in 0..20 {
                let f = from_mask(shape, rng.gen::<u64>());
                let e = violated_aug_edges(&f).unwrap();
                assert_eq!(sensitive_edge_counts(&f).unwrap(), (e.s_plus.len() as u64, e.s_minus.len() as u64));
            }
        }
    }

    #[test]
    fn violated_edges_examples() {
        let e = violated_aug_edges(&line(&[1, 1, 0, 0])).unwrap();
        let mut pairs: Vec<(usize, usize)> = e.s_minus.iter().map(|&(a, b, _)| (a, b)).collect();
        pairs.sort();
        assert_eq!(pairs, vec![(0, 2), (1, 2), (1, 3)]);
        assert!(e.s_plus.is_empty());
        let c = BoolFunc::constant(GridShape::new(4, 2).unwrap(), true).unwrap();
        let e = violated_aug_edges(&c).unwrap();
        assert!(e.s_minus.is_empty() && e.s_plus.is_empty());
    }

    #[test]
    fn distance_examples() {
        let d = distance_to_monotonicity(&line(&[1, 1, 0, 0])).unwrap();
        assert_eq!(d.eps, Ratio::new(1, 2));
        assert_eq!(distance_to_monotonicity(&line(&[1, 0, 0, 0])).unwrap().eps, Ratio::new(1, 4));
        assert_eq!(distance_to_monotonicity(&line(&[0, 0, 1, 1])).unwrap().eps, Ratio::new(0, 1));
        assert!(d.witness.is_violation_matching(&line(&[1, 1, 0, 0])));
        let non_pow2 = line(&[1, 0, 0]);
        assert_eq!(distance_to_monotonicity(&non_pow2).unwrap().eps, Ratio::new(1, 3));
        let big = BoolFunc::constant(GridShape::new(2, 13).unwrap(), true).unwrap();
        assert!(matches!(distance_to_monotonicity(&big), Err(Error::Capacity(_))));
    }

    /// Independent oracle: fewest flips by trying every change set of
    /// increasing size.
    fn change_set_search(shape: GridShape, mask: u64) -> u32 {
        let n = shape.len();
        for k in 0..=n as u32 {
            let mut found = false;
            for flips in 0u64..(1 << n) {
                if flips.count_ones() == k {
                    let t = BitTable::from_mask(n, mask ^ flips);
                    if crate::func::table_is_monotone(&shape, &t) {
                        found = true;
                        break;
                    }
                }
            }
            if found {
                return k;
            }
        }
        unreachable!()
    }

    #[test]
    fn catalog_counts() {
        let count = |n, d| MonotoneCatalog::get(GridShape::new(n, d).unwrap()).unwrap().len();
        assert_eq!(count(4, 2), 70);
        assert_eq!(count(2, 3), 20);
        assert_eq!(count(3, 2), 20);
        assert_eq!(count(2, 2), 6);
        assert_eq!(count(4, 1), 5);
        assert!(MonotoneCatalog::get(GridShape::new(3, 4).unwrap()).is_err());
    }

    #[test]
    fn brute_force_matches_change_set_search() {
        for (n, d) in [(2, 2), (4, 1), (3, 2), (2, 3)] {
            let shape = GridShape::new(n, d).unwrap();
            for mask in 0u64..(1 << shape.len()) {
                let f = from_mask(shape, mask);
                let brute = brute_force_distance(&f).unwrap();
                assert_eq!(*brute.numer() * shape.len() as u64 / *brute.denom(), change_set_search(shape, mask) as u64);
                assert_eq!(distance_to_monotonicity(&f).unwrap().eps, brute, "{shape} mask {mask:b}");
            }
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_minus(&line(&[1, 1, 0, 0])).unwrap().gamma, Ratio::new(2, 4));
        assert_eq!(gamma_minus(&line(&[1, 1, 0, 0])).unwrap().witness, vec![(0, 2), (1, 3)]);
        assert_eq!(gamma_minus(&line(&[1, 0, 0, 0])).unwrap().gamma, Ratio::new(1, 4));
        assert_eq!(gamma_minus(&line(&[0, 1, 1, 1])).unwrap().gamma, Ratio::new(0, 1));
    }

    /// Every maximum matching of the violation graph, by recursion.
    fn all_maximum_matchings(g: &ViolationGraph) -> Vec<Vec<(usize, usize)>> {
        fn rec(g: &ViolationGraph, k: usize, used: &mut Vec<bool>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
            if k == g.ones.len() {
                out.push(cur.clone());
                return;
            }
            rec(g, k + 1, used, cur, out);
            for &z in &g.adj[k] {
                if !used[z] {
                    used[z] = true;
                    cur.push((g.ones[k], g.zeros[z]));
                    rec(g, k + 1, used, cur, out);
                    cur.pop();
                    used[z] = false;
                }
            }
        }
        let mut all = Vec::new();
        rec(g, 0, &mut vec![false; g.zeros.len()], &mut Vec::new(), &mut all);
        let best = all.iter().map(Vec::len).max().unwrap();
        all.retain(|m| m.len() == best);
        all
    }

    fn lex_key(shape: &GridShape, m: &[(usize, usize)], tie: TieBreak) -> (u64, i64) {
        let total: u64 = m.iter().map(|&(x, y)| index_distance(shape, x, y).unwrap() as u64).sum();
        let sec: i64 = m
            .iter()
            .map(|&(x, y)| match tie {
                TieBreak::Psi => (index_distance(shape, x, y).unwrap() as i64).pow(2),
                TieBreak::Phi => crate::structure::pair_phi_scaled(shape, x, y) as i64,
            })
            .sum();
        (total, -sec)
    }

    #[test]
    fn optimal_matching_examples() {
        let f = line(&[1, 1, 0, 0]);
        let o = optimal_matching(&f).unwrap();
        assert_eq!(o.mstar.pairs(), &[(0, 2), (1, 3)]);
        assert_eq!(o.r, Some(Ratio::new(1, 1)));
        assert_eq!(o.psi, 2);
        let m = optimal_matching(&line(&[0, 0, 1, 1])).unwrap();
        assert!(m.mstar.is_empty() && m.r.is_none());
    }

    #[test]
    fn optimal_matching_is_lexicographically_best() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut tie_breaks = 0;
        for (n, d) in [(4, 1), (2, 2), (2, 3), (3, 2), (8, 1), (4, 2)] {
            let shape = GridShape::new(n, d).unwrap();
            let masks: Vec<u64> = if shape.len() <= 12 {
                (0..1u64 << shape.len()).collect()
            } else {
                (0..300).map(|_| rng.gen::<u64>() & ((1 << shape.len()) - 1)).collect()
            };
            for mask in masks {
                let f = from_mask(shape, mask);
                let g = ViolationGraph::build(&f).unwrap();
                if g.arc_count() == 0 || g.arc_count() > 24 {
                    continue;
                }
                let all = all_maximum_matchings(&g);
                for tie in [TieBreak::Psi, TieBreak::Phi] {
                    let best = all.iter().map(|m| lex_key(&shape, m, tie)).min().unwrap();
                    let got = optimal_matching_by(&f, tie).unwrap();
                    assert_eq!(got.mstar.len(), all[0].len());
                    assert!(got.mstar.is_violation_matching(&f));
                    assert_eq!(lex_key(&shape, got.mstar.pairs(), tie), best, "{shape} {mask:b} {tie:?}");
                    let min_total = best.0;
                    let keys: std::collections::HashSet<i64> =
                        all.iter().map(|m| lex_key(&shape, m, tie)).filter(|k| k.0 == min_total).map(|k| k.1).collect();
                    if keys.len() > 1 {
                        tie_breaks += 1;
                    }
                }
            }
        }
        assert!(tie_breaks > 0, "no instance exercised the secondary objective");
    }

    #[test]
    fn hungarian_small_instances() {
        let cost = vec![vec![4, 1, 3], vec![2, 0, 5], vec![3, 2, 2]];
        let a = hungarian(&cost);
        let total: i64 = a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        assert_eq!(total, 5);
        let rect = vec![vec![7, 1, 9], vec![1, 8, 9]];
        assert_eq!(hungarian(&rect), vec![1, 0]);
        assert!(hungarian(&[]).is_empty());
    }

    #[test]
    fn hopcroft_karp_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let (l, r) = (rng.gen_range(1..7), rng.gen_range(1..7));
            let adj: Vec<Vec<usize>> = (0..l).map(|_| (0..r).filter(|_| rng.gen_bool(0.35)).collect()).collect();
            let m = hopcroft_karp(r, &adj);
            let size = m.iter().flatten().count();
            let mut seen = std::collections::HashSet::new();
            for (u, v) in m.iter().enumerate() {
                if let Some(v) = v {
                    assert!(adj[u].contains(v) && seen.insert(*v));
                }
            }
            fn best(adj: &[Vec<usize>], u: usize, used: &mut Vec<bool>) -> usize {
                if u == adj.len() {
                    return 0;
                }
                let mut b = best(adj, u + 1, used);
                for &v in &adj[u] {
                    if !used[v] {
                        used[v] = true;
                        b = b.max(1 + best(adj, u + 1, used));
                        used[v] = false;
                    }
                }
                b
            }
            assert_eq!(size, best(&adj, 0, &mut vec![false; r]));
        }
    }

    #[test]
    fn isoperimetry_examples() {
        let rep = isoperimetry_report(&line(&[1, 1, 0, 0])).unwrap();
        let r = rep.ratios.unwrap();
        assert_eq!(r.margulis, Ratio::new(3, 2));
        assert_eq!(rep.i_minus, Ratio::new(3, 4));
        assert_eq!(rep.gamma_minus, Ratio::new(1, 2));
        assert_eq!(r.edge, Ratio::new(3, 2));
        assert_eq!(r.vertex, Ratio::new(1, 1));
        let rep = isoperimetry_report(&line(&[1, 0, 0, 0])).unwrap();
        assert_eq!(rep.ratios.unwrap().margulis, Ratio::new(2, 1));
        let mono = isoperimetry_report(&line(&[0, 1, 1, 1])).unwrap();
        assert_eq!(mono.eps, Ratio::new(0, 1));
        assert!(mono.ratios.is_none());
    }

    #[test]
    fn report_invariants_on_random_functions() {
        let shape = GridShape::new(4, 3).unwrap();
        for seed in 0..20 {
            let f = generate(&Family::UniformRandom, shape, seed).unwrap();
            let rep = isoperimetry_report(&f).unwrap();
            assert_eq!(rep.i_total, rep.i_plus + rep.i_minus);
            assert!(rep.gamma_minus <= rep.i_minus);
            assert!(rep.gamma_minus <= Ratio::new(1, 2));
            assert!(rep.i_total <= Ratio::from_integer(6));
            assert_eq!(rep.matching_size as usize, distance_to_monotonicity(&f).unwrap().witness.len());
            assert!(rep.ratios.unwrap().margulis > Ratio::from_integer(0));
        }
    }

    #[test]
    fn influence_bound_examples() {
        let c = BoolFunc::constant(GridShape::new(4, 2).unwrap(), false).unwrap();
        let b = influence_bound_check(&c).unwrap();
        assert!(b.applicable && b.holds && b.i_total == 0.0);
        assert!(influence_bound_check(&line(&[1, 0])).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let shape = GridShape::new(8, 3).unwrap();
        for _ in 0..200 {
            let f = generate(&Family::UniformRandom, shape, rng.gen()).unwrap();
            let b = influence_bound_check(&f).unwrap();
            assert!(!b.applicable || b.holds);
        }
    }
}
