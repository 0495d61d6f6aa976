//! Walsh transform, the two routes to an edge coefficient, and the exact
//! line checks.
//!
//! cargo run --release --example fourier

use augrid::experiments::line_sweep;
use augrid::fourier::{edge_coefficient, influence_chain_check, parseval_sum, plus_minus_table, transform, WalshIndex};
use augrid::{generate, Family, GridShape};

fn main() -> augrid::Result<()> {
    let shape = GridShape::new(8, 2)?;
    let f = generate(&Family::UniformRandom, shape, 9)?;
    let spectrum = transform(&shape, &plus_minus_table(&f)?)?;
    println!("sum of squared coefficients {}", parseval_sum(&spectrum));

    let top = WalshIndex::edge(shape, 0, 2)?;
    println!("coefficient at {:?}: {}", top.sets(), spectrum[top.mask()]);
    let (direct, via_matching) = edge_coefficient(&f, 0, 2)?;
    println!("edge coefficient of the 0/1 table: {direct} = {via_matching}");

    let chain = influence_chain_check(&f)?;
    println!("influence chain {} >= {}: {}", chain.lhs, chain.rhs, chain.holds);

    let sweep = line_sweep(8)?;
    println!("all {} functions on [8] pass the line checks: {}", sweep.functions, sweep.all_hold());
    Ok(())
}
