//! Single invocations, detection rates and the amplified tester.
//!
//! cargo run --release --example tester

use augrid::tester::{amplified_test, detection_rate, repetitions, single_test};
use augrid::verify::CALIBRATION;
use augrid::{generate, BoolFunc, Family, GridShape};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> augrid::Result<()> {
    let shape = GridShape::new(8, 4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    let far = generate(&Family::AntiSlab { dim: 2 }, shape, 0)?;
    let t = single_test(&far, &mut rng)?;
    println!("one invocation: tau {} x {} y {} -> {:?}", t.tau, t.x, t.y, t.verdict);

    let rate = detection_rate(&far, 20_000, &mut rng)?;
    println!(
        "anti_slab on {shape}: rejects {:.4} of invocations (95% interval {:.4}..{:.4})",
        rate.estimate, rate.wilson_interval.0, rate.wilson_interval.1
    );

    let reps = repetitions(&shape, 0.5, CALIBRATION)?;
    let v = amplified_test(&far, 0.5, CALIBRATION, &mut rng)?;
    println!("amplified: budget {reps}, accepted {} after {} invocations", v.accepted, v.invocations);

    // one-sided: a monotone function is never rejected
    let mono: BoolFunc = generate(&Family::RandomMonotone { density: 0.05 }, shape, 3)?;
    let v = amplified_test(&mono, 0.1, CALIBRATION, &mut rng)?;
    println!("random_monotone: accepted {} with {} queries", v.accepted, v.total_queries);
    Ok(())
}
