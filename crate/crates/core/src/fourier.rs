//! Walsh analysis over `[n]^d` for `n = 2^L`.
//!
//! A Walsh index is a set of bit positions per dimension. Stored as a mask
//! over linear-index bits (bit `k·L + j` is bit `j` of coordinate `k`), the
//! character is `w_S(x) = (-1)^{popcount(S & index(x))}` and the transform is
//! the fast Walsh–Hadamard butterfly over all `d·L` bits.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::func::{check_capacity, sort_line, BoolFunc, DEFAULT_TABLE_CAPACITY};
use crate::grid::{matching_index_pairs, GridShape, MatchingId, Point};
use crate::oracle::violated_aug_edges;

/// Per-dimension bit sets, as one mask over linear-index bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WalshIndex {
    shape: GridShape,
    mask: usize,
}

impl WalshIndex {
    /// `sets[k]` lists bit positions of coordinate `k`.
    pub fn new(shape: GridShape, sets: &[Vec<u32>]) -> Result<Self> {
        let log_n = shape.log2_n()?;
        if sets.len() != shape.d() {
            return Err(Error::Domain(format!("Walsh index needs {} sets, got {}", shape.d(), sets.len())));
        }
        let mut mask = 0;
        for (k, set) in sets.iter().enumerate() {
            for &j in set {
                if j >= log_n {
                    return Err(Error::Domain(format!("bit {j} out of range for n = {}", shape.n())));
                }
                mask |= 1 << (k as u32 * log_n + j);
            }
        }
        Ok(Self { shape, mask })
    }

    pub fn from_mask(shape: GridShape, mask: usize) -> Result<Self> {
        shape.log2_n()?;
        if mask >= shape.len() {
            return Err(Error::Domain(format!("Walsh mask {mask:#b} out of range for {shape}")));
        }
        Ok(Self { shape, mask })
    }

    /// `e_{ij}`: the single bit `j` of dimension `i`.
    pub fn edge(shape: GridShape, i: usize, j: u32) -> Result<Self> {
        let mut sets = vec![Vec::new(); shape.d()];
        if i >= shape.d() {
            return Err(Error::Domain(format!("dimension {i} out of range")));
        }
        sets[i].push(j);
        Self::new(shape, &sets)
    }

    pub fn mask(&self) -> usize {
        self.mask
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn sets(&self) -> Vec<Vec<u32>> {
        let log_n = self.shape.n().trailing_zeros();
        (0..self.shape.d())
            .map(|k| (0..log_n).filter(|&j| self.mask >> (k as u32 * log_n + j) & 1 == 1).collect())
            .collect()
    }

    /// Symmetric difference, whose character is the pointwise product.
    pub fn symmetric_difference(&self, other: &WalshIndex) -> WalshIndex {
        WalshIndex { shape: self.shape, mask: self.mask ^ other.mask }
    }
}

#[inline]
fn char_at(mask: usize, idx: usize) -> i64 {
    if (mask & idx).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn walsh_value(index: &WalshIndex, x: &Point) -> Result<i8> {
    Ok(char_at(index.mask, index.shape.linear_index(x)?) as i8)
}

fn check_table(shape: &GridShape, len: usize) -> Result<()> {
    shape.log2_n()?;
    check_capacity(shape, DEFAULT_TABLE_CAPACITY)?;
    if len != shape.len() {
        return Err(Error::Domain(format!("table of length {len} does not match {shape}")));
    }
    Ok(())
}

fn butterfly<T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T>>(a: &mut [T]) {
    let mut h = 1;
    while h < a.len() {
        for block in a.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi) {
                let (u, v) = (*x, *y);
                *x = u + v;
                *y = u - v;
            }
        }
        h *= 2;
    }
}

/// Coefficients `f̂(S) = E[f·w_S]`, indexed by Walsh mask.
pub fn transform(shape: &GridShape, values: &[f64]) -> Result<Vec<f64>> {
    check_table(shape, values.len())?;
    let mut a = values.to_vec();
    butterfly(&mut a);
    let scale = 1.0 / shape.len() as f64;
    a.iter_mut().for_each(|c| *c *= scale);
    Ok(a)
}

/// `f(x) = Σ_S f̂(S)·w_S(x)`.
pub fn inverse_transform(shape: &GridShape, spectrum: &[f64]) -> Result<Vec<f64>> {
    check_table(shape, spectrum.len())?;
    let mut a = spectrum.to_vec();
    butterfly(&mut a);
    Ok(a)
}

/// Unnormalized integer transform `Σ_x f(x)·w_S(x)`; applying it twice
/// multiplies by `n^d`.
pub fn transform_exact(shape: &GridShape, values: &[i64]) -> Result<Vec<i64>> {
    check_table(shape, values.len())?;
    let mut a = values.to_vec();
    butterfly(&mut a);
    Ok(a)
}

/// The `±1` encoding `2f − 1` of a Boolean function.
pub fn plus_minus_table(f: &BoolFunc) -> Result<Vec<f64>> {
    let t = f.to_table()?;
    Ok((0..t.len()).map(|i| if t.get(i) { 1.0 } else { -1.0 }).collect())
}

fn zero_one_table(f: &BoolFunc) -> Result<Vec<i64>> {
    let t = f.to_table()?;
    Ok((0..t.len()).map(|i| t.get(i) as i64).collect())
}

pub fn parseval_sum(spectrum: &[f64]) -> f64 {
    spectrum.iter().map(|c| c * c).sum()
}

/// `f̂(e_{ij})` for `f` in `{0,1}`, as `(E[f·w], ½·E_{H^0_{i,j}}[f(x) − f(y)])`.
pub fn edge_coefficient(f: &BoolFunc, i: usize, j: u32) -> Result<(Ratio<i64>, Ratio<i64>)> {
    let shape = *f.shape();
    let index = WalshIndex::edge(shape, i, j)?;
    let t = f.to_table()?;
    let points = shape.len() as i64;
    let expectation: i64 = (0..shape.len()).map(|x| t.get(x) as i64 * char_at(index.mask, x)).sum();
    let pairs = matching_index_pairs(&shape, MatchingId::new(i, j, 0))?;
    let diff: i64 = pairs.iter().map(|&(x, y)| t.get(x) as i64 - t.get(y) as i64).sum();
    Ok((Ratio::new(expectation, points), Ratio::new(diff, 2 * pairs.len() as i64)))
}

/// Exact line quantities of the influence argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineDeltaReport {
    pub s_plus: i64,
    pub s_minus: i64,
    /// `Σ_x g(x)·w_{e_1}(x)` with `e_1` the top bit.
    pub e1_sum: i64,
    pub delta_i: Ratio<i64>,
    pub i_minus: Ratio<i64>,
    pub e1_coeff: Ratio<i64>,
    /// `ΔI ≤ log n·(4I⁻ − ĝ(e_1))`.
    pub inequality_holds: bool,
    /// For monotone `g`: `ΔI ≤ log n·(−ĝ(e_1))`.
    pub monotone_bound_holds: Option<bool>,
}

fn check_line(g: &BoolFunc) -> Result<u32> {
    let shape = g.shape();
    if shape.d() != 1 {
        return Err(Error::Domain("line analysis needs d = 1".into()));
    }
    let log_n = shape.log2_n()?;
    if log_n < 2 {
        return Err(Error::Domain("line analysis needs n >= 4".into()));
    }
    Ok(log_n)
}

fn top_bit_sum(g: &BoolFunc) -> Result<i64> {
    let shape = *g.shape();
    let top = WalshIndex::edge(shape, 0, shape.log2_n()? - 1)?;
    let t = zero_one_table(g)?;
    Ok(t.iter().enumerate().map(|(x, v)| v * char_at(top.mask, x)).sum())
}

pub fn line_delta_report(g: &BoolFunc) -> Result<LineDeltaReport> {
    let log_n = check_line(g)? as i64;
    let n = g.shape().n() as i64;
    let edges = violated_aug_edges(g)?;
    let (s_plus, s_minus) = (edges.s_plus.len() as i64, edges.s_minus.len() as i64);
    let f = top_bit_sum(g)?;
    Ok(LineDeltaReport {
        s_plus,
        s_minus,
        e1_sum: f,
        delta_i: Ratio::new(s_plus - s_minus, n),
        i_minus: Ratio::new(s_minus, n),
        e1_coeff: Ratio::new(f, n),
        inequality_holds: s_plus - s_minus <= log_n * (4 * s_minus - f),
        monotone_bound_holds: (s_minus == 0 && g.is_monotone()?).then_some(s_plus <= -log_n * f),
    })
}

/// Comparison of a line function with its sorted version.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SortComparison {
    /// `ΔI_{sort(g)} ≥ ΔI_g`.
    pub delta_sorted_ge: bool,
    /// `−ŝort(g)(e_1) ≤ −ĝ(e_1) + 4I⁻_g`.
    pub final_bound_holds: bool,
}

pub fn sort_comparisons(g: &BoolFunc) -> Result<SortComparison> {
    check_line(g)?;
    let sorted = sort_line(g)?;
    let before = line_delta_report(g)?;
    let after = line_delta_report(&sorted)?;
    Ok(SortComparison {
        delta_sorted_ge: after.delta_i >= before.delta_i,
        final_bound_holds: -after.e1_sum <= -before.e1_sum + 4 * before.s_minus,
    })
}

/// `Σ_i |f̂(e_i)| ≥ I_f / log2 n − 6·I⁻_f` with `e_i` the top bit of each
/// dimension, decided in integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InfluenceChain {
    /// `log2 n · Σ_i |Σ_x f(x) w_{e_i}(x)|`.
    pub lhs: i64,
    /// `|S_f| − 6·log2 n·|S⁻_f|`.
    pub rhs: i64,
    pub holds: bool,
}

pub fn influence_chain_check(f: &BoolFunc) -> Result<InfluenceChain> {
    let shape = *f.shape();
    let log_n = shape.log2_n()?;
    if log_n < 1 {
        return Err(Error::Domain("needs n >= 2".into()));
    }
    let t = zero_one_table(f)?;
    let coeff_sum: i64 = (0..shape.d())
        .map(|i| {
            let m = WalshIndex::edge(shape, i, log_n - 1).unwrap().mask;
            t.iter().enumerate().map(|(x, v)| v * char_at(m, x)).sum::<i64>().abs()
        })
        .sum();
    let edges = violated_aug_edges(f)?;
    let total = (edges.s_plus.len() + edges.s_minus.len()) as i64;
    let lhs = log_n as i64 * coeff_sum;
    let rhs = total - 6 * log_n as i64 * edges.s_minus.len() as i64;
    Ok(InfluenceChain { lhs, rhs, holds: lhs >= rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{generate, BitTable, Family};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(shape: &GridShape, values: &[f64]) -> Vec<f64> {
        (0..shape.len())
            .map(|mask| {
                let idx = WalshIndex::from_mask(*shape, mask).unwrap();
                let sets = idx.sets();
                // evaluate the character coordinate by coordinate
                let total: f64 = (0..shape.len())
                    .map(|x| {
                        let p = shape.point_of(x).unwrap();
                        let bits: u32 = sets
                            .iter()
                            .zip(p.coords())
                            .map(|(set, &c)| set.iter().filter(|&&j| c >> j & 1 == 1).count() as u32)
                            .sum();
                        values[x] * if bits.is_multiple_of(2) { 1.0 } else { -1.0 }
                    })
                    .sum();
                total / shape.len() as f64
            })
            .collect()
    }

    #[test]
    fn walsh_value_examples() {
        let shape = GridShape::new(2, 1).unwrap();
        let e = WalshIndex::new(shape, &[vec![0]]).unwrap();
        assert_eq!(walsh_value(&e, &Point::from([0])).unwrap(), 1);
        assert_eq!(walsh_value(&e, &Point::from([1])).unwrap(), -1);
        let empty = WalshIndex::new(GridShape::new(8, 2).unwrap(), &[vec![], vec![]]).unwrap();
        assert!(empty.is_empty());
        assert_eq!(walsh_value(&empty, &Point::from([5, 3])).unwrap(), 1);
        assert!(WalshIndex::new(shape, &[vec![1]]).is_err());
        assert!(WalshIndex::new(GridShape::new(3, 1).unwrap(), &[vec![]]).is_err());
    }

    #[test]
    fn characters_multiply() {
        let shape = GridShape::new(8, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a = WalshIndex::from_mask(shape, rng.gen_range(0..shape.len())).unwrap();
            let b = WalshIndex::from_mask(shape, rng.gen_range(0..shape.len())).unwrap();
            let ab = a.symmetric_difference(&b);
            let x = shape.point_of(rng.gen_range(0..shape.len())).unwrap();
            assert_eq!(walsh_value(&ab, &x).unwrap(), walsh_value(&a, &x).unwrap() * walsh_value(&b, &x).unwrap());
            assert_eq!(WalshIndex::new(shape, &a.sets()).unwrap(), a);
        }
    }

    #[test]
    fn transform_examples() {
        let shape = GridShape::new(2, 1).unwrap();
        assert_eq!(transform(&shape, &[1.0, -1.0]).unwrap(), vec![0.0, 1.0]);
        let cube = GridShape::new(4, 2).unwrap();
        let c = transform(&cube, &[1.0; 16]).unwrap();
        assert_eq!(c[0], 1.0);
        assert!(c[1..].iter().all(|&v| v == 0.0));
        assert!(transform(&cube, &[1.0; 15]).is_err());
    }

    #[test]
    fn fast_transform_matches_naive_and_parseval() {
        let shape = GridShape::new(8, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let v: Vec<f64> = (0..shape.len()).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
            let fast = transform(&shape, &v).unwrap();
            for (a, b) in fast.iter().zip(naive(&shape, &v)) {
                assert!((a - b).abs() < 1e-12);
            }
            assert!((parseval_sum(&fast) - 1.0).abs() < 1e-12);
            let back = inverse_transform(&shape, &fast).unwrap();
            assert!(back.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-12));
        }
    }

    #[test]
    fn exact_transform_is_self_inverse_up_to_scale() {
        let shape = GridShape::new(4, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v: Vec<i64> = (0..shape.len()).map(|_| rng.gen_range(-5..6)).collect();
        let twice = transform_exact(&shape, &transform_exact(&shape, &v).unwrap()).unwrap();
        assert!(twice.iter().zip(&v).all(|(a, b)| *a == b * shape.len() as i64));
    }

    #[test]
    fn characters_average_to_zero() {
        let shape = GridShape::new(4, 2).unwrap();
        for mask in 0..shape.len() {
            let sum: i64 = (0..shape.len()).map(|x| char_at(mask, x)).sum();
            assert_eq!(sum, if mask == 0 { 16 } else { 0 });
        }
    }

    #[test]
    fn edge_coefficient_examples() {
        let shape = GridShape::new(4, 1).unwrap();
        let f = BoolFunc::from_values(shape, &[1, 1, 0, 0]).unwrap();
        assert_eq!(edge_coefficient(&f, 0, 1).unwrap(), (Ratio::new(1, 2), Ratio::new(1, 2)));
        let neg = BoolFunc::from_values(shape, &[0, 0, 1, 1]).unwrap();
        assert_eq!(edge_coefficient(&neg, 0, 1).unwrap().0, Ratio::new(-1, 2));
        let c = BoolFunc::constant(GridShape::new(8, 2).unwrap(), true).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(edge_coefficient(&c, i, j).unwrap(), (Ratio::from_integer(0), Ratio::from_integer(0)));
            }
        }
        let shape = GridShape::new(4, 2).unwrap();
        for mask in 0u64..(1 << 16) {
            let f = BoolFunc::from_table(shape, BitTable::from_mask(16, mask)).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let (a, b) = edge_coefficient(&f, i, j).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn line_report_examples() {
        let g = BoolFunc::from_values(GridShape::new(4, 1).unwrap(), &[0, 0, 1, 1]).unwrap();
        let r = line_delta_report(&g).unwrap();
        assert_eq!((r.s_plus, r.s_minus, r.e1_sum), (3, 0, -2));
        assert!(r.inequality_holds);
        assert_eq!(r.monotone_bound_holds, Some(true));
        let c = BoolFunc::constant(GridShape::new(8, 1).unwrap(), false).unwrap();
        let r = line_delta_report(&c).unwrap();
        assert_eq!(r.delta_i, Ratio::from_integer(0));
        assert!(r.inequality_holds);
        assert!(line_delta_report(&BoolFunc::constant(GridShape::new(2, 1).unwrap(), true).unwrap()).is_err());
        let s = sort_comparisons(&g).unwrap();
        assert!(s.delta_sorted_ge && s.final_bound_holds);
    }

    #[test]
    fn line_checks_hold_exhaustively_at_n8() {
        let shape = GridShape::new(8, 1).unwrap();
        for mask in 0u64..256 {
            let g = BoolFunc::from_table(shape, BitTable::from_mask(8, mask)).unwrap();
            assert!(line_delta_report(&g).unwrap().inequality_holds, "{mask:08b}");
            let s = sort_comparisons(&g).unwrap();
            assert!(s.delta_sorted_ge && s.final_bound_holds, "{mask:08b}");
        }
    }

    #[test]
    fn influence_chain_on_random_functions() {
        let shape = GridShape::new(4, 2).unwrap();
        for seed in 0..50 {
            let f = generate(&Family::UniformRandom, shape, seed).unwrap();
            assert!(influence_chain_check(&f).unwrap().holds);
        }
    }
}
