//! Lifting a function on [3]^2 to [8]^2.
//!
//! cargo run --release --example reduce

use std::sync::Arc;

use augrid::oracle::distance_to_monotonicity;
use augrid::reduce::{lift, plan};
use augrid::{BoolFunc, GridShape};

fn main() -> augrid::Result<()> {
    let p = plan(3, 2)?;
    println!("N = {}, blocks {:?}", p.big_n, p.block_sizes);
    let phi: Vec<usize> = (0..p.big_n).map(|y| p.phi(y)).collect::<augrid::Result<_>>()?;
    println!("phi = {phi:?}");

    let f = Arc::new(BoolFunc::tabulate(GridShape::new(3, 2)?, |x| x[0] < x[1])?);
    let g = lift(&p, Arc::clone(&f))?;
    f.reset_queries();
    let table = g.materialize(1 << 10)?;
    println!("{} lifted points cost {} queries to f", table.shape().len(), f.queries());
    println!(
        "distance {} on {}, {} on {}",
        distance_to_monotonicity(&f)?.eps,
        f.shape(),
        distance_to_monotonicity(&table)?.eps,
        table.shape()
    );
    Ok(())
}
