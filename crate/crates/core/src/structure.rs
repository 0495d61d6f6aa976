//! Consistent pairs, cover graphs, the conflict-free decomposition,
//! vertex-disjoint routing and alternating sequences.
//!
//! Everything except the crossing analysis is written against [`Poset`], so
//! hand-built DAGs exercise the same code as the augmented hypergrid.

use std::collections::{HashMap, HashSet, VecDeque};
use std::io::BufRead;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::func::BoolFunc;
use crate::grid::{coord_side, index_distance, upper_neighbors, GridShape, MatchingId, Side};
use crate::oracle::{optimal_matching, violated_aug_edges, PairMatching, EXACT_ORACLE_CAPACITY};

/// A finite poset with integer vertex ids `0..size()`.
pub trait Poset {
    fn size(&self) -> usize;
    /// Length of a shortest upward path, `None` when `v` is not above `u`.
    fn dist(&self, u: usize, v: usize) -> Option<u32>;
    /// Heads of the arcs leaving `u`; each is at distance 1.
    fn up_neighbors(&self, u: usize) -> Vec<usize>;
}

/// The augmented hypergrid as a poset over linear indices.
#[derive(Clone, Copy, Debug)]
pub struct GridPoset {
    pub shape: GridShape,
}

impl GridPoset {
    pub fn new(shape: GridShape) -> Result<Self> {
        shape.log2_n()?;
        Ok(Self { shape })
    }
}

impl Poset for GridPoset {
    fn size(&self) -> usize {
        self.shape.len()
    }

    fn dist(&self, u: usize, v: usize) -> Option<u32> {
        index_distance(&self.shape, u, v)
    }

    fn up_neighbors(&self, u: usize) -> Vec<usize> {
        upper_neighbors(&self.shape, u).unwrap().into_iter().map(|(v, _)| v).collect()
    }
}

/// An explicit DAG with all-pairs BFS distances.
#[derive(Clone, Debug)]
pub struct DagPoset {
    adj: Vec<Vec<usize>>,
    dist: Vec<Vec<Option<u32>>>,
}

impl DagPoset {
    pub fn new(size: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        if size > EXACT_ORACLE_CAPACITY {
            return Err(Error::Capacity(format!("poset with {size} vertices")));
        }
        let mut adj = vec![Vec::new(); size];
        for &(u, v) in arcs {
            if u >= size || v >= size {
                return Err(Error::Format(format!("arc {u} {v} names a vertex outside 0..{size}")));
            }
            if u == v {
                return Err(Error::Format(format!("self-loop at {u}")));
            }
            if !adj[u].contains(&v) {
                adj[u].push(v);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let dist: Vec<Vec<Option<u32>>> = (0..size)
            .map(|src| {
                let mut d = vec![None; size];
                d[src] = Some(0);
                let mut queue = VecDeque::from([src]);
                while let Some(u) = queue.pop_front() {
                    for &v in &adj[u] {
                        if d[v].is_none() {
                            d[v] = Some(d[u].unwrap() + 1);
                            queue.push_back(v);
                        }
                    }
                }
                d
            })
            .collect();
        for u in 0..size {
            for &v in &adj[u] {
                if dist[v][u].is_some() {
                    return Err(Error::Format(format!("arc {u} {v} closes a cycle")));
                }
            }
        }
        Ok(Self { adj, dist })
    }

    /// Reads `poset <num_vertices>` followed by one `u v` arc per line.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse<R: BufRead>(source: R) -> Result<Self> {
        let mut size = None;
        let mut arcs = Vec::new();
        for (no, line) in source.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Format(format!("line {}: cannot parse {line:?}", no + 1));
            match (size, fields.as_slice()) {
                (None, ["poset", n]) => size = Some(n.parse::<usize>().map_err(|_| bad())?),
                (None, _) => return Err(Error::Format("first line must be `poset <num_vertices>`".into())),
                (Some(_), [u, v]) => arcs.push((u.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?)),
                (Some(_), _) => return Err(bad()),
            }
        }
        let size = size.ok_or_else(|| Error::Format("empty poset file".into()))?;
        Self::new(size, &arcs)
    }

    pub fn load_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::parse(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

impl Poset for DagPoset {
    fn size(&self) -> usize {
        self.adj.len()
    }

    fn dist(&self, u: usize, v: usize) -> Option<u32> {
        self.dist[u][v]
    }

    fn up_neighbors(&self, u: usize) -> Vec<usize> {
        self.adj[u].clone()
    }
}

/// Equal-size sets `S`, `T` with `T[k] = φ(S[k])` and `dist(S[k], T[k]) = ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistentPair {
    s: Vec<usize>,
    t: Vec<usize>,
    ell: u32,
}

impl ConsistentPair {
    pub fn new<P: Poset + ?Sized>(poset: &P, pairs: &[(usize, usize)], ell: u32) -> Result<Self> {
        let mut seen_s = HashSet::new();
        let mut seen_t = HashSet::new();
        for &(s, t) in pairs {
            if s >= poset.size() || t >= poset.size() {
                return Err(Error::Domain(format!("pair ({s}, {t}) outside the poset")));
            }
            if poset.dist(s, t) != Some(ell) {
                return Err(Error::Domain(format!("pair ({s}, {t}) is not at distance {ell}")));
            }
            if !seen_s.insert(s) || !seen_t.insert(t) {
                return Err(Error::Domain(format!("pair ({s}, {t}) repeats an endpoint")));
            }
        }
        let mut sorted = pairs.to_vec();
        sorted.sort_unstable();
        Ok(Self { s: sorted.iter().map(|p| p.0).collect(), t: sorted.iter().map(|p| p.1).collect(), ell })
    }

    pub fn sources(&self) -> &[usize] {
        &self.s
    }

    pub fn targets(&self) -> &[usize] {
        &self.t
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.s.iter().copied().zip(self.t.iter().copied()).collect()
    }
}

/// Per-vertex bit masks: bit `j` of `masks[z]` is set iff `z` lies at step
/// `j` of a shortest path of length `ℓ` from some `s ∈ S` to some `t ∈ T`.
fn level_masks<P: Poset + ?Sized>(poset: &P, s: &[usize], t: &[usize], ell: u32) -> Result<Vec<u64>> {
    if ell >= 64 {
        return Err(Error::Capacity(format!("level sets are limited to ell < 64, got {ell}")));
    }
    if poset.size() > EXACT_ORACLE_CAPACITY {
        return Err(Error::Capacity(format!("poset with {} vertices", poset.size())));
    }
    let ends: Vec<(usize, Vec<usize>)> = s
        .iter()
        .map(|&a| (a, t.iter().copied().filter(|&b| poset.dist(a, b) == Some(ell)).collect()))
        .collect();
    Ok((0..poset.size())
        .map(|z| {
            let mut mask = 0u64;
            for (a, targets) in &ends {
                if let Some(j) = poset.dist(*a, z).filter(|&j| j <= ell) {
                    if targets.iter().any(|&b| poset.dist(z, b) == Some(ell - j)) {
                        mask |= 1 << j;
                    }
                }
            }
            mask
        })
        .collect())
}

/// Level sets `L_0..L_ℓ` of the cover graph, each sorted.
pub fn level_sets<P: Poset + ?Sized>(poset: &P, pair: &ConsistentPair) -> Result<Vec<Vec<usize>>> {
    let masks = level_masks(poset, &pair.s, &pair.t, pair.ell)?;
    Ok((0..=pair.ell).map(|j| (0..masks.len()).filter(|&z| masks[z] >> j & 1 == 1).collect()).collect())
}

/// Union of all shortest `S → T` paths of length `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverGraph {
    pub ell: u32,
    pub levels: Vec<Vec<usize>>,
    pub vertices: Vec<usize>,
    pub arcs: Vec<(usize, usize)>,
}

impl CoverGraph {
    pub fn out_degree(&self, u: usize) -> usize {
        self.arcs.iter().filter(|a| a.0 == u).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.1 == v).count()
    }

    fn successors(&self) -> HashMap<usize, Vec<usize>> {
        let mut out: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(u, v) in &self.arcs {
            out.entry(u).or_default().push(v);
        }
        out
    }

    /// Every vertex sits in exactly one level.
    pub fn is_layered(&self) -> bool {
        let total: usize = self.levels.iter().map(Vec::len).sum();
        total == self.vertices.len()
    }
}

pub fn build_cover_graph<P: Poset + ?Sized>(poset: &P, pair: &ConsistentPair) -> Result<CoverGraph> {
    let ell = pair.ell;
    if ell == 0 && !pair.is_empty() {
        return Err(Error::Domain("a cover graph needs ell > 0".into()));
    }
    let masks = level_masks(poset, &pair.s, &pair.t, ell)?;
    let vertices: Vec<usize> = (0..masks.len()).filter(|&z| masks[z] != 0).collect();
    let mut arcs = Vec::new();
    for &u in &vertices {
        for v in poset.up_neighbors(u) {
            if masks[v] == 0 {
                continue;
            }
            // (u, v) is consecutive on a shortest path iff some s reaches u
            // in j steps and v reaches a compatible t in ℓ - j - 1 steps
            let on_path = pair.s.iter().any(|&a| {
                poset.dist(a, u).filter(|&j| j < ell).is_some_and(|j| {
                    pair.t.iter().any(|&b| poset.dist(a, b) == Some(ell) && poset.dist(v, b) == Some(ell - j - 1))
                })
            });
            if on_path {
                arcs.push((u, v));
            }
        }
    }
    arcs.sort_unstable();
    let levels = (0..=ell).map(|j| vertices.iter().copied().filter(|&z| masks[z] >> j & 1 == 1).collect()).collect();
    Ok(CoverGraph { ell, levels, vertices, arcs })
}

/// The cover graph is an `ℓ`-layered DAG.
pub fn is_good<P: Poset + ?Sized>(poset: &P, pair: &ConsistentPair) -> Result<bool> {
    let masks = level_masks(poset, &pair.s, &pair.t, pair.ell)?;
    Ok(masks.iter().all(|m| m.count_ones() <= 1))
}

/// Two disjoint pair sets conflict when shortest paths of length `ℓ` of each
/// meet at a vertex at the same step.
pub fn conflicts<P: Poset + ?Sized>(poset: &P, c1: &[(usize, usize)], c2: &[(usize, usize)], ell: u32) -> Result<bool> {
    let ends = |c: &[(usize, usize)]| -> HashSet<usize> { c.iter().flat_map(|&(a, b)| [a, b]).collect() };
    if !ends(c1).is_disjoint(&ends(c2)) {
        return Err(Error::Domain("conflict test needs vertex-disjoint pair sets".into()));
    }
    let m1 = level_masks_of(poset, c1, ell)?;
    let m2 = level_masks_of(poset, c2, ell)?;
    masks_conflict(&m1, &m2, ell)
}

fn level_masks_of<P: Poset + ?Sized>(poset: &P, c: &[(usize, usize)], ell: u32) -> Result<Vec<u64>> {
    let s: Vec<usize> = c.iter().map(|p| p.0).collect();
    let t: Vec<usize> = c.iter().map(|p| p.1).collect();
    level_masks(poset, &s, &t, ell)
}

fn masks_conflict(m1: &[u64], m2: &[u64], ell: u32) -> Result<bool> {
    let ends = 1u64 | (1u64 << ell);
    let mut hit = false;
    for (a, b) in m1.iter().zip(m2) {
        let common = a & b;
        if common & ends != 0 {
            return Err(Error::Integrity("disjoint pair sets met at level 0 or ell".into()));
        }
        hit |= common != 0;
    }
    Ok(hit)
}

/// Repeatedly merges connected components of the conflict graph, starting
/// from singletons, until no two sets conflict.
pub fn conflict_free_decompose<P: Poset + ?Sized>(
    poset: &P,
    pairs: &[(usize, usize)],
    ell: u32,
) -> Result<Vec<ConsistentPair>> {
    let mut groups: Vec<Vec<(usize, usize)>> = pairs.iter().map(|&p| vec![p]).collect();
    loop {
        let masks = groups.iter().map(|g| level_masks_of(poset, g, ell)).collect::<Result<Vec<_>>>()?;
        let mut parent: Vec<usize> = (0..groups.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut any_edge = false;
        for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                if masks_conflict(&masks[i], &masks[j], ell)? {
                    any_edge = true;
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        if !any_edge {
            break;
        }
        let mut merged: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for (i, g) in groups.into_iter().enumerate() {
            let root = find(&mut parent, i);
            let k = *slot.entry(root).or_insert_with(|| {
                merged.push(Vec::new());
                merged.len() - 1
            });
            merged[k].extend(g);
        }
        groups = merged;
    }
    groups.iter().map(|g| ConsistentPair::new(poset, g, ell)).collect()
}

/// The two cover graphs share no vertex.
pub fn are_independent<P: Poset + ?Sized>(poset: &P, p1: &ConsistentPair, p2: &ConsistentPair) -> Result<bool> {
    let m1 = level_masks(poset, &p1.s, &p1.t, p1.ell)?;
    let m2 = level_masks(poset, &p2.s, &p2.t, p2.ell)?;
    Ok(m1.iter().zip(&m2).all(|(a, b)| *a == 0 || *b == 0))
}

/// Checks that decomposition output is good, pairwise independent and
/// partitions the input pairs.
pub fn verify_decomposition<P: Poset + ?Sized>(poset: &P, input: &[(usize, usize)], parts: &[ConsistentPair]) -> Result<()> {
    let mut got: Vec<(usize, usize)> = parts.iter().flat_map(|p| p.pairs()).collect();
    let mut want = input.to_vec();
    got.sort_unstable();
    want.sort_unstable();
    if got != want {
        return Err(Error::Integrity("decomposition does not partition its input".into()));
    }
    for (k, p) in parts.iter().enumerate() {
        if !is_good(poset, p)? {
            return Err(Error::Integrity(format!("decomposition part {k} is not {}-good", p.ell)));
        }
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if !are_independent(poset, &parts[i], &parts[j])? {
                return Err(Error::Integrity(format!("decomposition parts {i} and {j} are not independent")));
            }
        }
    }
    Ok(())
}

struct FlowNet {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        Self { head: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new() }
    }

    fn add(&mut self, u: usize, v: usize) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(1);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    /// Unit-capacity augmenting paths by BFS.
    fn max_flow(&mut self, src: usize, sink: usize) -> usize {
        let mut flow = 0;
        loop {
            let mut via = vec![usize::MAX; self.head.len()];
            let mut queue = VecDeque::from([src]);
            via[src] = usize::MAX - 1;
            while let Some(u) = queue.pop_front() {
                for &e in &self.head[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && via[v] == usize::MAX {
                        via[v] = e;
                        queue.push_back(v);
                    }
                }
            }
            if via[sink] == usize::MAX {
                return flow;
            }
            let mut v = sink;
            while v != src {
                let e = via[v];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                v = self.to[e ^ 1];
            }
            flow += 1;
        }
    }
}

/// `|S|` vertex-disjoint paths from `S` to `T` inside the cover graph of a
/// good pair, by unit vertex-capacity max flow.
pub fn route_disjoint_paths<P: Poset + ?Sized>(poset: &P, pair: &ConsistentPair) -> Result<Vec<Vec<usize>>> {
    if !is_good(poset, pair)? {
        return Err(Error::NotGood(pair.ell as usize));
    }
    if pair.is_empty() {
        return Ok(Vec::new());
    }
    let cover = build_cover_graph(poset, pair)?;
    let id: HashMap<usize, usize> = cover.vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let nv = cover.vertices.len();
    // node 2k is the entry of vertex k, 2k+1 its exit
    let (src, sink) = (2 * nv, 2 * nv + 1);
    let mut net = FlowNet::new(2 * nv + 2);
    for k in 0..nv {
        net.add(2 * k, 2 * k + 1);
    }
    for &(u, v) in &cover.arcs {
        net.add(2 * id[&u] + 1, 2 * id[&v]);
    }
    for &s in &pair.s {
        net.add(src, 2 * id[&s]);
    }
    for &t in &pair.t {
        net.add(2 * id[&t] + 1, sink);
    }
    let flow = net.max_flow(src, sink);
    if flow < pair.len() {
        return Err(Error::Integrity(format!("routing found {flow} disjoint paths for {} pairs", pair.len())));
    }
    let mut paths = Vec::with_capacity(flow);
    for &e in &net.head[src] {
        if e % 2 == 1 || net.cap[e] != 0 {
            continue;
        }
        let mut node = net.to[e];
        let mut path = Vec::new();
        while node != sink {
            if node.is_multiple_of(2) {
                path.push(cover.vertices[node / 2]);
            }
            let next = net.head[node]
                .iter()
                .copied()
                .find(|&f| f % 2 == 0 && net.cap[f] == 0 && net.to[f] != src)
                .ok_or_else(|| Error::Integrity("broken flow decomposition".into()))?;
            net.cap[next] = 1;
            node = net.to[next];
        }
        paths.push(path);
    }
    let arcs: HashSet<(usize, usize)> = cover.arcs.iter().copied().collect();
    let mut used = HashSet::new();
    for p in &paths {
        let sound = p.len() == pair.ell as usize + 1
            && pair.s.contains(&p[0])
            && pair.t.contains(p.last().unwrap())
            && p.windows(2).all(|w| arcs.contains(&(w[0], w[1])))
            && p.iter().all(|v| used.insert(*v));
        if !sound {
            return Err(Error::Integrity(format!("routed path {p:?} is not a disjoint cover path")));
        }
    }
    paths.sort();
    Ok(paths)
}

/// For every `u` and every `v ≠ u` reachable from it in the cover graph:
/// `δ⁺(u) ≥ δ⁺(v)` and `δ⁻(u) ≤ δ⁻(v)`.
pub fn degree_monotonicity_check(cover: &CoverGraph) -> bool {
    let succ = cover.successors();
    let out: HashMap<usize, usize> = cover.vertices.iter().map(|&v| (v, cover.out_degree(v))).collect();
    let inn: HashMap<usize, usize> = cover.vertices.iter().map(|&v| (v, cover.in_degree(v))).collect();
    for &u in &cover.vertices {
        let mut seen = HashSet::from([u]);
        let mut stack = vec![u];
        while let Some(w) = stack.pop() {
            for &v in succ.get(&w).map(Vec::as_slice).unwrap_or(&[]) {
                if seen.insert(v) {
                    if out[&u] < out[&v] || inn[&u] > inn[&v] {
                        return false;
                    }
                    stack.push(v);
                }
            }
        }
    }
    true
}

/// `|L_1| ≥ m` or `|L_{ℓ-1}| ≥ m` where `m = |S|`.
pub fn layer_size_dichotomy(cover: &CoverGraph, m: usize) -> bool {
    let ell = cover.ell as usize;
    ell >= 1 && (cover.levels[1].len() >= m || cover.levels[ell - 1].len() >= m)
}

/// How a pair sits relative to one matching of the augmented hypergrid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    Cross,
    Straight,
    Skew,
}

/// `x ≺ y` crosses `H^c_{i,a}` iff bit `a` of `y_i - x_i` is set and `x` is a
/// lower endpoint of the matching. Non-crossing pairs are straight when both
/// ends lie on the same side and skew otherwise, including when an end is
/// unmatched.
pub fn classify_pair(shape: &GridShape, x: usize, y: usize, m: MatchingId) -> PairClass {
    let (xi, yi) = (shape.coord_of(x, m.dim), shape.coord_of(y, m.dim));
    let side = |v| coord_side(shape.n(), v, m.exp, m.parity);
    if (yi - xi) >> m.exp & 1 == 1 && side(xi) == Side::Lower {
        return PairClass::Cross;
    }
    match (side(xi), side(yi)) {
        (Side::Lower, Side::Lower) | (Side::Upper, Side::Upper) => PairClass::Straight,
        _ => PairClass::Skew,
    }
}

/// Partition of a matching into crossing, straight and skew pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairClasses {
    pub cross: Vec<(usize, usize)>,
    pub straight: Vec<(usize, usize)>,
    pub skew: Vec<(usize, usize)>,
}

pub fn classify_pairs(matching: &PairMatching, m: MatchingId) -> Result<PairClasses> {
    let shape = matching.shape();
    m.validate(shape)?;
    let mut out = PairClasses::default();
    for &(x, y) in matching.pairs() {
        match classify_pair(shape, x, y, m) {
            PairClass::Cross => out.cross.push((x, y)),
            PairClass::Straight => out.straight.push((x, y)),
            PairClass::Skew => out.skew.push((x, y)),
        }
    }
    Ok(out)
}

/// `Σ_H μ_H(x, y)` scaled by `n/2`, where `μ_H = 1/2^a` on straight pairs.
pub fn pair_phi_scaled(shape: &GridShape, x: usize, y: usize) -> u64 {
    let log_n = shape.n().trailing_zeros();
    let mut total = 0;
    for dim in 0..shape.d() {
        for exp in 0..log_n {
            for parity in 0..2 {
                if classify_pair(shape, x, y, MatchingId { dim, exp, parity }) == PairClass::Straight {
                    total += 1u64 << (log_n - 1 - exp);
                }
            }
        }
    }
    total
}

/// The potential `Φ(M)` as an exact dyadic rational.
pub fn potential_phi(matching: &PairMatching) -> Result<Ratio<u64>> {
    let shape = matching.shape();
    let log_n = shape.log2_n()?;
    if log_n == 0 {
        return Ok(Ratio::from_integer(0));
    }
    let scaled: u64 = matching.pairs().iter().map(|&(x, y)| pair_phi_scaled(shape, x, y)).sum();
    Ok(Ratio::new(scaled, 1 << (log_n - 1)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminal {
    /// The last step along `H` joined a violated pair; holds `(lower, upper)`.
    HViolation(usize, usize),
    /// The walk reached a point outside every straight pair.
    StraightUnmatched,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingWalk {
    pub points: Vec<usize>,
    pub terminal: Terminal,
    /// Whether the period-4 value/side pattern and the distance relations of
    /// every third step held along the walk.
    pub structure_holds: bool,
}

/// Walks `s_0 = x`, `s_{j+1} = H(s_j)` for even `j` (stopping at a
/// violation) and `s_{j+1} = M(s_j)` for odd `j` (stopping when `s_j` is in
/// no straight pair).
pub fn alternating_sequence(f: &BoolFunc, matching: &PairMatching, m: MatchingId, x: usize) -> Result<AlternatingWalk> {
    let shape = *matching.shape();
    m.validate(&shape)?;
    let y = match matching.partner(x) {
        Some((y, true)) if classify_pair(&shape, x, y, m) == PairClass::Cross => y,
        _ => return Err(Error::Domain(format!("{x} does not start a pair crossing {m}"))),
    };
    let straight: HashMap<usize, usize> = classify_pairs(matching, m)?
        .straight
        .iter()
        .flat_map(|&(a, b)| [(a, b), (b, a)])
        .collect();
    let side = |v: usize| coord_side(shape.n(), shape.coord_of(v, m.dim), m.exp, m.parity);
    let mut points = vec![x];
    let mut seen = HashSet::from([x]);
    let shift = m.step() * shape.stride(m.dim);
    let terminal = loop {
        let j = points.len() - 1;
        let cur = points[j];
        let next = if j % 2 == 0 {
            match side(cur) {
                Side::Lower => cur + shift,
                Side::Upper => cur - shift,
                Side::Unmatched => return Err(Error::Integrity(format!("walk left {m} at {cur}"))),
            }
        } else {
            match straight.get(&cur) {
                Some(&p) => p,
                None => break Terminal::StraightUnmatched,
            }
        };
        if !seen.insert(next) {
            return Err(Error::Integrity(format!("alternating walk from {x} revisits {next}")));
        }
        points.push(next);
        if j % 2 == 0 {
            let (lo, hi) = if next > cur { (cur, next) } else { (next, cur) };
            if f.peek(lo) && !f.peek(hi) {
                break Terminal::HViolation(lo, hi);
            }
        }
    };
    let at = |k: isize| if k < 0 { y } else { points[k as usize] };
    // the point reached by the final violated H step keeps only its side
    let last_violates = matches!(terminal, Terminal::HViolation(..));
    let mut structure_holds = points.iter().enumerate().all(|(j, &s)| {
        let (value, want_side) = match j % 4 {
            0 => (true, Side::Lower),
            1 => (true, Side::Upper),
            2 => (false, Side::Upper),
            _ => (false, Side::Lower),
        };
        side(s) == want_side && (f.peek(s) == value || (last_violates && j == points.len() - 1))
    });
    for j in (3..points.len()).step_by(2) {
        let (sj, sj3, sj1, sj2) = (at(j as isize), at(j as isize - 3), at(j as isize - 1), at(j as isize - 2));
        let ok = if j % 4 == 1 {
            index_distance(&shape, sj, sj3).is_some_and(|d| sj != sj3 && Some(d) == index_distance(&shape, sj1, sj2))
        } else {
            index_distance(&shape, sj3, sj).is_some_and(|d| sj != sj3 && Some(d) == index_distance(&shape, sj2, sj1))
        };
        structure_holds &= ok;
    }
    Ok(AlternatingWalk { points, terminal, structure_holds })
}

/// Per-matching crossing statistics of a violation matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingCount {
    pub matching: MatchingId,
    pub cross: usize,
    /// Walks that ended at a violated `H`-edge.
    pub violation_walks: usize,
    /// Distinct violated `H`-edges reached by those walks.
    pub distinct_violations: usize,
    /// Violated edges of `H` overall.
    pub h_violations: usize,
    pub structure_holds: bool,
}

/// Runs every alternating walk for every matching id.
pub fn crossing_counts(f: &BoolFunc, matching: &PairMatching) -> Result<Vec<CrossingCount>> {
    let shape = *matching.shape();
    let sensitive = violated_aug_edges(f)?;
    let mut out = Vec::new();
    for m in shape.matching_ids()? {
        let classes = classify_pairs(matching, m)?;
        let mut violation_walks = 0;
        let mut reached = HashSet::new();
        let mut structure_holds = true;
        for &(x, _) in &classes.cross {
            let walk = alternating_sequence(f, matching, m, x)?;
            structure_holds &= walk.structure_holds;
            if let Terminal::HViolation(lo, hi) = walk.terminal {
                violation_walks += 1;
                reached.insert((lo, hi));
            }
        }
        out.push(CrossingCount {
            matching: m,
            cross: classes.cross.len(),
            violation_walks,
            distinct_violations: reached.len(),
            h_violations: sensitive.s_minus.iter().filter(|e| e.2 == m).count(),
            structure_holds,
        });
    }
    Ok(out)
}

/// Outcome of decomposing and routing `M*` of one function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutingReport {
    pub matching_size: usize,
    pub gamma_count: usize,
    /// `(ℓ, |M*_ℓ|, parts, routed paths)` per distance class.
    pub classes: Vec<(u32, usize, usize, usize)>,
    pub largest_part: usize,
    pub degree_monotone: bool,
    pub layer_dichotomy: bool,
}

/// Decomposes every distance class of `M*`, verifies the parts, routes
/// disjoint paths through each part and checks each path against the
/// violated augmented edges.
pub fn routing_pipeline(f: &BoolFunc) -> Result<RoutingReport> {
    let shape = *f.shape();
    let poset = GridPoset::new(shape)?;
    let mstar = optimal_matching(f)?.mstar;
    let s_minus: HashSet<(usize, usize)> = violated_aug_edges(f)?.s_minus.iter().map(|e| (e.0, e.1)).collect();
    let gamma_count = crate::oracle::gamma_minus(f)?.witness.len();
    let mut classes = Vec::new();
    let mut degree_monotone = true;
    let mut layer_dichotomy = true;
    let mut largest_part = 0;
    for ell in mstar.distance_classes() {
        let pairs = mstar.at_distance(ell).pairs().to_vec();
        let parts = conflict_free_decompose(&poset, &pairs, ell)?;
        verify_decomposition(&poset, &pairs, &parts)?;
        let mut used = HashSet::new();
        let mut routed = 0;
        for part in &parts {
            largest_part = largest_part.max(part.len());
            let cover = build_cover_graph(&poset, part)?;
            degree_monotone &= degree_monotonicity_check(&cover);
            layer_dichotomy &= layer_size_dichotomy(&cover, part.len());
            let paths = route_disjoint_paths(&poset, part)?;
            if paths.len() != part.len() {
                return Err(Error::Integrity(format!("routed {} paths for a part of size {}", paths.len(), part.len())));
            }
            for p in &paths {
                if !p.iter().all(|v| used.insert(*v)) {
                    return Err(Error::Integrity("paths of independent parts intersect".into()));
                }
                if !p.windows(2).any(|w| s_minus.contains(&(w[0], w[1]))) {
                    return Err(Error::Integrity(format!("routed path {p:?} contains no violated edge")));
                }
            }
            routed += paths.len();
        }
        if routed > gamma_count {
            return Err(Error::Integrity(format!("{routed} disjoint paths exceed the {gamma_count} disjoint violated edges")));
        }
        classes.push((ell, pairs.len(), parts.len(), routed));
    }
    Ok(RoutingReport { matching_size: mstar.len(), gamma_count, classes, largest_part, degree_monotone, layer_dichotomy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{generate, BitTable, Family};

    /// Two length-3 paths through a shared vertex `z` at different steps.
    pub(crate) const CROSSING_PATHS: &str = "poset 9\n0 2\n2 4\n4 7\n1 3\n3 2\n2 8\n0 5\n5 6\n6 7\n";
    const S1: usize = 0;
    const S2: usize = 1;
    const Z: usize = 2;
    const T1: usize = 7;
    const T2: usize = 8;

    fn crossing() -> DagPoset {
        DagPoset::parse(CROSSING_PATHS.as_bytes()).unwrap()
    }

    #[test]
    fn dag_distances() {
        let p = crossing();
        assert_eq!(p.dist(S1, T1), Some(3));
        assert_eq!(p.dist(S2, T2), Some(3));
        assert_eq!(p.dist(S1, T2), Some(2));
        assert_eq!(p.dist(S2, T1), Some(4));
        assert_eq!(p.dist(T1, S1), None);
        assert_eq!(p.dist(Z, Z), Some(0));
    }

    #[test]
    fn dag_parse_errors() {
        assert!(matches!(DagPoset::parse("".as_bytes()), Err(Error::Format(_))));
        assert!(matches!(DagPoset::parse("poset 2\n0 5\n".as_bytes()), Err(Error::Format(_))));
        assert!(matches!(DagPoset::parse("poset 2\n0 1\n1 0\n".as_bytes()), Err(Error::Format(_))));
        assert!(matches!(DagPoset::parse("0 1\n".as_bytes()), Err(Error::Format(_))));
        assert!(matches!(DagPoset::parse("poset 2\n0 x\n".as_bytes()), Err(Error::Format(_))));
        assert!(DagPoset::parse("# comment\nposet 2\n\n0 1\n".as_bytes()).is_ok());
    }

    #[test]
    fn crossing_paths_pair_is_not_good() {
        let p = crossing();
        let pair = ConsistentPair::new(&p, &[(S1, T1), (S2, T2)], 3).unwrap();
        let levels = level_sets(&p, &pair).unwrap();
        assert!(levels[1].contains(&Z) && levels[2].contains(&Z));
        assert!(!is_good(&p, &pair).unwrap());
        let cover = build_cover_graph(&p, &pair).unwrap();
        // the s1 → z → t2 path is part of the cover graph
        assert!(cover.arcs.contains(&(S1, Z)) && cover.arcs.contains(&(Z, T2)));
        assert!(!cover.is_layered());
        assert!(matches!(route_disjoint_paths(&p, &pair), Err(Error::NotGood(3))));
        assert!(!conflicts(&p, &[(S1, T1)], &[(S2, T2)], 3).unwrap());
        let single = ConsistentPair::new(&p, &[(S1, T1)], 3).unwrap();
        assert!(is_good(&p, &single).unwrap());
        let parts = conflict_free_decompose(&p, &[(S1, T1), (S2, T2)], 3).unwrap();
        assert_eq!(parts.len(), 2);
        // not independent: both covers contain z
        assert!(!are_independent(&p, &parts[0], &parts[1]).unwrap());
        assert!(verify_decomposition(&p, &[(S1, T1), (S2, T2)], &parts).is_err());
        assert!(ConsistentPair::new(&p, &[(S1, T2)], 3).is_err());
    }

    #[test]
    fn line_level_sets() {
        let p = GridPoset::new(GridShape::new(4, 1).unwrap()).unwrap();
        let pair = ConsistentPair::new(&p, &[(0, 3)], 2).unwrap();
        assert_eq!(level_sets(&p, &pair).unwrap(), vec![vec![0], vec![1, 2], vec![3]]);
        let pair = ConsistentPair::new(&p, &[(0, 1), (2, 3)], 1).unwrap();
        assert_eq!(level_sets(&p, &pair).unwrap(), vec![vec![0, 2], vec![1, 3]]);
        let cover = build_cover_graph(&p, &pair).unwrap();
        assert_eq!(cover.arcs, vec![(0, 1), (2, 3)]);
        assert!(ConsistentPair::new(&p, &[(1, 1)], 1).is_err());
    }

    #[test]
    fn shared_midpoint_conflict_merges() {
        // 0 → 2 → 4 and 1 → 2 → 3 share vertex 2 at step 1
        let p = DagPoset::new(5, &[(0, 2), (2, 4), (1, 2), (2, 3)]).unwrap();
        assert!(conflicts(&p, &[(0, 4)], &[(1, 3)], 2).unwrap());
        let parts = conflict_free_decompose(&p, &[(0, 4), (1, 3)], 2).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].len(), 2);
        assert!(matches!(conflicts(&p, &[(0, 4)], &[(0, 4)], 2), Err(Error::Domain(_))));
    }

    #[test]
    fn hypercube_routing() {
        let shape = GridShape::new(2, 3).unwrap();
        let p = GridPoset::new(shape).unwrap();
        // weight-1 vertices 1, 2, 4 matched to weight-2 vertices above them
        let pair = ConsistentPair::new(&p, &[(1, 3), (2, 6), (4, 5)], 1).unwrap();
        assert!(is_good(&p, &pair).unwrap());
        let paths = route_disjoint_paths(&p, &pair).unwrap();
        assert_eq!(paths.len(), 3);
        let pair = ConsistentPair::new(&p, &[(1, 7)], 2).unwrap();
        let paths = route_disjoint_paths(&p, &pair).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].len(), 3);
        let cover = build_cover_graph(&p, &pair).unwrap();
        assert!(degree_monotonicity_check(&cover));
        assert!(layer_size_dichotomy(&cover, 1));
    }

    #[test]
    fn single_path_cover_is_degree_monotone() {
        let p = DagPoset::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let pair = ConsistentPair::new(&p, &[(0, 3)], 3).unwrap();
        let cover = build_cover_graph(&p, &pair).unwrap();
        assert!(degree_monotonicity_check(&cover));
        assert_eq!(route_disjoint_paths(&p, &pair).unwrap(), vec![vec![0, 1, 2, 3]]);
    }

    /// Independent oracle for crossing: enumerate every shortest path.
    fn crosses_by_paths(shape: &GridShape, x: usize, y: usize, m: MatchingId) -> bool {
        fn any_path(shape: &GridShape, u: usize, y: usize, m: MatchingId) -> bool {
            if u == y {
                return false;
            }
            let left = index_distance(shape, u, y).unwrap();
            upper_neighbors(shape, u).unwrap().into_iter().any(|(v, id)| {
                index_distance(shape, v, y) == Some(left - 1) && (id == m || any_path(shape, v, y, m))
            })
        }
        let lower = coord_side(shape.n(), shape.coord_of(x, m.dim), m.exp, m.parity) == Side::Lower;
        lower && any_path(shape, x, y, m)
    }

    #[test]
    fn classification_matches_path_enumeration() {
        for (n, d) in [(4, 1), (8, 1), (4, 2), (8, 2)] {
            let shape = GridShape::new(n, d).unwrap();
            for x in 0..shape.len() {
                for y in 0..shape.len() {
                    let Some(dist) = index_distance(&shape, x, y) else { continue };
                    let mut crossed = 0;
                    for m in shape.matching_ids().unwrap() {
                        let class = classify_pair(&shape, x, y, m);
                        assert_eq!(class == PairClass::Cross, crosses_by_paths(&shape, x, y, m), "{x}->{y} {m}");
                        crossed += (class == PairClass::Cross) as u32;
                    }
                    assert_eq!(crossed, dist);
                }
            }
        }
    }

    #[test]
    fn classification_examples() {
        let shape = GridShape::new(4, 1).unwrap();
        assert_eq!(classify_pair(&shape, 0, 2, MatchingId::new(0, 1, 0)), PairClass::Cross);
        assert_eq!(classify_pair(&shape, 0, 2, MatchingId::new(0, 0, 0)), PairClass::Straight);
        assert_eq!(classify_pair(&shape, 0, 2, MatchingId::new(0, 0, 1)), PairClass::Skew);
        let m = PairMatching::new(shape, vec![(0, 2)]).unwrap();
        assert_eq!(potential_phi(&m).unwrap(), Ratio::from_integer(1));
        let empty = PairMatching::new(shape, vec![]).unwrap();
        assert_eq!(potential_phi(&empty).unwrap(), Ratio::from_integer(0));
        let both = PairMatching::new(shape, vec![(1, 3), (0, 2)]).unwrap();
        let rev = PairMatching::new(shape, vec![(0, 2), (1, 3)]).unwrap();
        assert_eq!(potential_phi(&both).unwrap(), potential_phi(&rev).unwrap());
    }

    #[test]
    fn alternating_walk_examples() {
        let shape = GridShape::new(4, 1).unwrap();
        let f = BoolFunc::from_values(shape, &[1, 1, 0, 0]).unwrap();
        let mstar = optimal_matching(&f).unwrap().mstar;
        let h = MatchingId::new(0, 1, 0);
        let classes = classify_pairs(&mstar, h).unwrap();
        assert_eq!(classes.cross, vec![(0, 2), (1, 3)]);
        for x in [0, 1] {
            let w = alternating_sequence(&f, &mstar, h, x).unwrap();
            assert_eq!(w.terminal, Terminal::HViolation(x, x + 2));
            assert_eq!(w.points, vec![x, x + 2]);
            assert!(w.structure_holds);
        }
        assert!(alternating_sequence(&f, &mstar, h, 2).is_err());
        let counts = crossing_counts(&f, &mstar).unwrap();
        let c = counts.iter().find(|c| c.matching == h).unwrap();
        assert!(c.distinct_violations * 2 >= c.cross);
        let total: usize = counts.iter().map(|c| c.cross).sum();
        assert_eq!(total as u64, mstar.total_distance());
    }

    #[test]
    fn routing_pipeline_on_small_functions() {
        let shape = GridShape::new(4, 1).unwrap();
        let rep = routing_pipeline(&BoolFunc::from_values(shape, &[1, 1, 0, 0]).unwrap()).unwrap();
        assert_eq!(rep.classes, vec![(1, 2, 2, 2)]);
        for seed in 0..30 {
            let f = generate(&Family::UniformRandom, GridShape::new(4, 2).unwrap(), seed).unwrap();
            let rep = routing_pipeline(&f).unwrap();
            let routed: usize = rep.classes.iter().map(|c| c.3).sum();
            assert!(rep.classes.iter().all(|c| c.1 == c.3));
            assert_eq!(routed, rep.matching_size);
        }
        let mono = BoolFunc::from_table(GridShape::new(2, 2).unwrap(), BitTable::from_mask(4, 0b1000)).unwrap();
        assert!(routing_pipeline(&mono).unwrap().classes.is_empty());
    }
}
