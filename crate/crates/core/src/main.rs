use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use augrid::experiments::{
    family_eps, family_function, fourier_summary, isoperimetry_csv, isoperimetry_minima, isoperimetry_sweep, line_sweep,
    parse_family, persistence_csv, persistence_sweep, rate_csv, rate_sweep, reduce_summary, structure_summary,
    with_workers, ExperimentConfig,
};
use augrid::rng::trial_rng;
use augrid::tester::amplified_test;
use augrid::verify::{self, Scale, VerifyOptions, CALIBRATION};
use augrid::{BoolFunc, Error, GridShape, Result};

/// Monotonicity testing on the augmented hypergrid.
#[derive(Parser)]
#[command(name = "augrid", version)]
struct Cli {
    /// TOML config; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the amplified tester once; exit 0 on accept, 1 on reject.
    Test {
        #[command(flatten)]
        func: FuncArgs,
        /// Distance parameter; defaults to the exact distance when known.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        calibration: Option<f64>,
    },
    /// Detection-rate sweep as CSV.
    Rate {
        #[arg(long = "n", value_delimiter = ',')]
        ns: Vec<usize>,
        #[arg(long = "d", value_delimiter = ',')]
        ds: Vec<usize>,
        #[arg(long = "family", value_delimiter = ',')]
        families: Vec<String>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Isoperimetry sweep as CSV; minima go to stderr.
    Isoperimetry {
        /// Shapes as `n:d`, comma separated.
        #[arg(long = "shape", value_delimiter = ',')]
        shapes: Vec<String>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        exhaustive_points: Option<usize>,
    },
    /// Non-persistence sweep over τ as CSV.
    Persistence {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long = "tau", value_delimiter = ',')]
        taus: Vec<usize>,
        #[arg(long = "family", value_delimiter = ',')]
        families: Vec<String>,
        #[arg(long)]
        outer: Option<u64>,
        #[arg(long)]
        inner: Option<u64>,
    },
    /// Decompose and route the optimal matching of one function.
    Structure {
        #[command(flatten)]
        func: FuncArgs,
    },
    /// Fourier checks of one function, or the exhaustive line sweep.
    Fourier {
        #[command(flatten)]
        func: FuncArgs,
        /// Sweep every function on the line `[N]` instead.
        #[arg(long)]
        line: Option<usize>,
    },
    /// Lift one function to a power-of-two grid and compare distances.
    Reduce {
        #[command(flatten)]
        func: FuncArgs,
    },
    /// Run the property suite; exit 4 if any criterion fails.
    Verify {
        /// Only these criteria (1 to 9).
        #[arg(long = "criterion", value_delimiter = ',')]
        criteria: Vec<u8>,
        #[arg(long)]
        quick: bool,
    },
}

/// A function read from a file or generated from a family.
#[derive(Args)]
struct FuncArgs {
    /// Function file in the binary table format.
    #[arg(long, conflicts_with = "family")]
    input: Option<PathBuf>,
    /// Family as `name` or `name:param`.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
}

impl FuncArgs {
    fn load(&self, seed: u64) -> Result<BoolFunc> {
        match (&self.input, &self.family, self.n, self.d) {
            (Some(path), _, _, _) => BoolFunc::load_file(path),
            (None, Some(spec), Some(n), Some(d)) => family_function(spec, GridShape::new(n, d)?, seed),
            _ => Err(Error::Usage("give --input FILE or --family NAME --n N --d D".into())),
        }
    }

    fn is_given(&self) -> bool {
        self.input.is_some() || self.family.is_some()
    }
}

fn emit(cli: &Cli, cfg: &ExperimentConfig, text: &str) -> Result<()> {
    match cli.output.as_ref().or(cfg.output.as_ref()) {
        Some(path) => Ok(std::fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_shape(s: &str) -> Result<[usize; 2]> {
    let bad = || Error::Usage(format!("shape `{s}` is not of the form n:d"));
    let (n, d) = s.split_once(':').ok_or_else(bad)?;
    Ok([n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?])
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load_file(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.seed = cli.seed.or(cfg.seed);
    cfg.workers = cli.workers.or(cfg.workers);
    let (seed, workers) = (cfg.seed(), cfg.workers());
    match &cli.command {
        Command::Test { func, eps, calibration } => {
            let f = func.load(seed)?;
            let eps = match (eps, &func.family) {
                (Some(e), _) => *e,
                (None, Some(spec)) => augrid::oracle::ratio_f64(family_eps(&parse_family(spec)?, &f)?),
                (None, None) => augrid::oracle::distance_to_monotonicity(&f)?.eps_f64(),
            };
            if eps <= 0.0 {
                return Err(Error::Usage("the function is monotone; pass --eps to test it anyway".into()));
            }
            let calibration = calibration.or(cfg.calibration).unwrap_or(CALIBRATION);
            let v = amplified_test(&f, eps, calibration, &mut trial_rng(seed, "test", 0))?;
            let verdict = if v.accepted { "accept" } else { "reject" };
            emit(cli, &cfg, &format!("{verdict} after {} invocations, {} queries\n", v.invocations, v.total_queries))?;
            Ok(if v.accepted { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Rate { ns, ds, families, trials } => {
            let mut rc = cfg.rate.clone();
            if !ns.is_empty() {
                rc.ns = ns.clone();
            }
            if !ds.is_empty() {
                rc.ds = ds.clone();
            }
            if !families.is_empty() {
                rc.families = families.clone();
            }
            rc.trials = trials.unwrap_or(rc.trials);
            emit(cli, &cfg, &rate_csv(&rate_sweep(&rc, seed, workers)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Isoperimetry { shapes, samples, exhaustive_points } => {
            let mut ic = cfg.isoperimetry.clone();
            if !shapes.is_empty() {
                ic.shapes = shapes.iter().map(|s| parse_shape(s)).collect::<Result<_>>()?;
            }
            ic.samples = samples.unwrap_or(ic.samples);
            ic.exhaustive_points = exhaustive_points.unwrap_or(ic.exhaustive_points);
            let sweeps = isoperimetry_sweep(&ic, seed, workers)?;
            emit(cli, &cfg, &isoperimetry_csv(&sweeps))?;
            eprint!("{}", isoperimetry_minima(&sweeps));
            Ok(ExitCode::SUCCESS)
        }
        Command::Persistence { n, d, taus, families, outer, inner } => {
            let mut pc = cfg.persistence.clone();
            pc.n = n.unwrap_or(pc.n);
            pc.d = d.unwrap_or(pc.d);
            if !taus.is_empty() {
                pc.taus = taus.clone();
            }
            if !families.is_empty() {
                pc.families = families.clone();
            }
            pc.outer = outer.unwrap_or(pc.outer);
            pc.inner = inner.unwrap_or(pc.inner);
            emit(cli, &cfg, &persistence_csv(&persistence_sweep(&pc, seed, workers)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Structure { func } => {
            let f = func.load(seed)?;
            emit(cli, &cfg, &with_workers(workers, || structure_summary(&f))??)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fourier { func, line } => {
            let mut text = String::new();
            if let Some(n) = line {
                let s = with_workers(workers, || line_sweep(*n))??;
                text += &format!("{s:?}\nall hold {}\n", s.all_hold());
            }
            if func.is_given() {
                text += &fourier_summary(&func.load(seed)?)?;
            } else if line.is_none() {
                return Err(Error::Usage("give --line N or a function".into()));
            }
            emit(cli, &cfg, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { func } => {
            emit(cli, &cfg, &reduce_summary(func.load(seed)?)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { criteria, quick } => {
            let opts = VerifyOptions { seed, workers, scale: if *quick { Scale::Quick } else { Scale::Full } };
            let outcomes = if criteria.is_empty() {
                verify::verify_all(&opts)?
            } else {
                criteria.iter().map(|&id| verify::criterion(id, &opts)).collect::<Result<_>>()?
            };
            emit(cli, &cfg, &verify::report(&outcomes))?;
            Ok(if outcomes.iter().all(|o| o.passed) { ExitCode::SUCCESS } else { ExitCode::from(4) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("augrid: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
