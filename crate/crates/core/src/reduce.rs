//! Reduction from `[n]^d` to `[N]^d` with `N` a power of 2.
//!
//! `[N]` is cut into `n` consecutive blocks, `m` of length `d + i` followed
//! by `n − m` of length `d + i + 1`, and `g(y) = f(φ(y_1), …, φ(y_d))` where
//! `φ` names the block containing a coordinate.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::func::BoolFunc;
use crate::grid::GridShape;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionPlan {
    pub n: usize,
    pub d: usize,
    pub i: usize,
    pub big_n: usize,
    pub m: usize,
    pub block_sizes: Vec<usize>,
}

/// Smallest `i` for which `[n(d+i), n(d+i+1)]` contains a power of 2, and
/// the smallest such power.
pub fn plan(n: usize, d: usize) -> Result<ReductionPlan> {
    if n == 0 || d == 0 {
        return Err(Error::Domain(format!("reduction needs n, d >= 1, got n = {n}, d = {d}")));
    }
    for i in 0..d {
        let lo = n.checked_mul(d + i).ok_or_else(|| Error::Capacity("reduction overflows".into()))?;
        let hi = lo + n;
        let big_n = lo.checked_next_power_of_two().ok_or_else(|| Error::Capacity("reduction overflows".into()))?;
        if big_n <= hi {
            let m = hi - big_n;
            let block_sizes = (0..n).map(|b| if b < m { d + i } else { d + i + 1 }).collect();
            return Ok(ReductionPlan { n, d, i, big_n, m, block_sizes });
        }
    }
    Err(Error::Integrity(format!("no power of 2 found for n = {n}, d = {d}")))
}

impl ReductionPlan {
    /// Block index of `y ∈ [0, N)`.
    pub fn phi(&self, y: usize) -> Result<usize> {
        if y >= self.big_n {
            return Err(Error::Domain(format!("coordinate {y} outside [0, {})", self.big_n)));
        }
        Ok(self.phi_unchecked(y))
    }

    fn phi_unchecked(&self, y: usize) -> usize {
        let short = self.d + self.i;
        let head = self.m * short;
        if y < head {
            y / short
        } else {
            self.m + (y - head) / (short + 1)
        }
    }

    pub fn lifted_shape(&self) -> Result<GridShape> {
        GridShape::new(self.big_n, self.d)
    }
}

/// `g = f ∘ φ` coordinate-wise, forwarding one query to `f` per evaluation.
pub fn lift(plan: &ReductionPlan, f: Arc<BoolFunc>) -> Result<BoolFunc> {
    let shape = *f.shape();
    if shape.n() != plan.n || shape.d() != plan.d {
        return Err(Error::Domain(format!("plan for [{}]^{} does not match {shape}", plan.n, plan.d)));
    }
    let target = plan.lifted_shape()?;
    let plan = plan.clone();
    Ok(BoolFunc::predicate(target, move |y| {
        let x: Vec<usize> = y.iter().map(|&c| plan.phi_unchecked(c)).collect();
        f.eval_index(shape.linear_index(&x.into()).unwrap())
    }))
}
