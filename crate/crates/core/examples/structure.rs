//! Conflict-free decomposition and disjoint-path routing, first on a tiny
//! DAG read from a file, then on the optimal matching of a grid function.
//!
//! cargo run --release --example structure

use augrid::structure::{
    build_cover_graph, conflict_free_decompose, is_good, route_disjoint_paths, ConsistentPair, DagPoset,
};
use augrid::experiments::structure_summary;
use augrid::{generate, Family, GridShape};

fn main() -> augrid::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/crossing_paths.poset");
    let poset = DagPoset::load_file(path)?;
    let pairs = [(0, 7), (1, 8)];
    let both = ConsistentPair::new(&poset, &pairs, 3)?;
    println!("both pairs together good: {}", is_good(&poset, &both)?);
    match route_disjoint_paths(&poset, &both) {
        Ok(paths) => println!("routed {paths:?}"),
        Err(e) => println!("routing refused: {e}"),
    }
    for part in conflict_free_decompose(&poset, &pairs, 3)? {
        let cover = build_cover_graph(&poset, &part)?;
        println!("part {:?}: levels {:?}, paths {:?}", part.pairs(), cover.levels, route_disjoint_paths(&poset, &part)?);
    }

    let f = generate(&Family::UniformRandom, GridShape::new(4, 2)?, 5)?;
    print!("{}", structure_summary(&f)?);
    Ok(())
}
