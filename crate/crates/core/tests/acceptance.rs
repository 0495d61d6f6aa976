//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use augrid::experiments::DEFAULT_SEED;
use augrid::verify::{criterion, Scale, VerifyOptions};

fn main() -> ExitCode {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let opts = VerifyOptions { seed: DEFAULT_SEED, workers, scale: Scale::Full };
    let mut failed = 0;
    for id in 1..=9 {
        let start = Instant::now();
        match criterion(id, &opts) {
            Ok(o) => {
                failed += !o.passed as u32;
                println!("{o} [{:.1}s]", start.elapsed().as_secs_f64());
            }
            Err(e) => {
                failed += 1;
                println!("criterion {id} FAIL: {e}");
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
