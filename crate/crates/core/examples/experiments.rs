//! Small reproducible sweeps; the CSV is identical for any worker count.
//!
//! cargo run --release --example experiments

use augrid::experiments::{
    isoperimetry_csv, isoperimetry_minima, isoperimetry_sweep, persistence_csv, persistence_sweep, rate_csv,
    rate_sweep, ExperimentConfig,
};

const CONFIG: &str = r#"
seed = 11

[rate]
ns = [4, 8]
ds = [2, 4]
trials = 5000

[isoperimetry]
shapes = [[4, 1], [2, 2]]

[persistence]
n = 8
d = 4
taus = [1, 2, 4]
outer = 400
inner = 20
"#;

fn main() -> augrid::Result<()> {
    let cfg = ExperimentConfig::parse(CONFIG)?;
    let rows = rate_sweep(&cfg.rate, cfg.seed(), 1)?;
    assert_eq!(rate_csv(&rows), rate_csv(&rate_sweep(&cfg.rate, cfg.seed(), 4)?));
    print!("{}", rate_csv(&rows));

    let sweeps = isoperimetry_sweep(&cfg.isoperimetry, cfg.seed(), 2)?;
    print!("{}", isoperimetry_minima(&sweeps));
    println!("{} isoperimetry rows", isoperimetry_csv(&sweeps).lines().count() - 1);

    print!("{}", persistence_csv(&persistence_sweep(&cfg.persistence, cfg.seed(), 2)?));
    Ok(())
}
