//! Exact distance, optimal matching and isoperimetry on a small grid.
//!
//! cargo run --release --example oracle

use augrid::oracle::{
    brute_force_distance, distance_to_monotonicity, gamma_minus, isoperimetry_report, optimal_matching,
    violated_aug_edges,
};
use augrid::{BoolFunc, GridShape};

fn main() -> augrid::Result<()> {
    let f = BoolFunc::from_values(GridShape::new(4, 1)?, &[1, 1, 0, 0])?;
    let dist = distance_to_monotonicity(&f)?;
    println!("eps = {} (brute force {}), witness {:?}", dist.eps, brute_force_distance(&f)?, dist.witness.pairs());

    let edges = violated_aug_edges(&f)?;
    let pairs: Vec<_> = edges.s_minus.iter().map(|e| (e.0, e.1)).collect();
    println!("violated edges {pairs:?}, disjoint {:?}", gamma_minus(&f)?.witness);

    let opt = optimal_matching(&f)?;
    println!("M* = {:?}, total distance {}, psi {}", opt.mstar.pairs(), opt.total_distance, opt.psi);

    let r = isoperimetry_report(&f)?;
    let q = r.ratios.expect("f is not monotone");
    println!("I- = {}, Gamma- = {}, ratios margulis {} edge {} vertex {}", r.i_minus, r.gamma_minus, q.margulis, q.edge, q.vertex);
    Ok(())
}
