use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use fog_replica::harness::{
    evaluate_placement, evaluate_scenario, improvement_table, run_sweep, summarize, time_placement,
    write_csv, SweepPlan,
};
use fog_replica::placement::{check_constraints, parse_placement, place, write_placement};
use fog_replica::workload::{generate_scenario, parse_scenario, write_scenario};
use fog_replica::{ExperimentConfig, Policy};

#[derive(Parser)]
#[command(name = "fogrep", version, about = "Replica placement experiments for fog storage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random scenario from a config
    Generate {
        #[command(flatten)]
        common: Common,
    },
    /// Place the files of a scenario with one policy
    Place {
        /// Scenario file written by `generate`
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = "replica-aware")]
        policy: Policy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the decision trace
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a placement (or every policy, without --placement)
    Eval {
        #[arg(long)]
        scenario: PathBuf,
        /// Placement file written by `place`
        #[arg(long)]
        placement: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        failures: f64,
        #[arg(long, default_value_t = 10)]
        masks: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep over every policy
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.1)]
        failures: f64,
        #[arg(long, default_value_t = 10)]
        masks: usize,
        /// Override the config's repeat count
        #[arg(long)]
        repeats: Option<usize>,
        /// Comma-separated `<files>x<devices>` sizes (default: the 22 reference sizes)
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<String>>,
    },
    /// Time single-file replica-aware placement by network size
    Time {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
    },
}

#[derive(Args)]
struct Common {
    /// key=value experiment config (defaults apply to unset keys)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config's seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                ExperimentConfig::parse(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.rng_seed = s;
        }
        Ok(cfg)
    }
}

/// Writes `bytes` to `<dir>/<name>`, or to stdout without a directory.
fn emit(dir: Option<&Path>, name: &str, bytes: &[u8]) -> Result<()> {
    match dir {
        Some(d) => {
            fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
            let path = d.join(name);
            fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn csv_bytes<T: serde::Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    Ok(buf)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_size(s: &str) -> Result<(usize, usize)> {
    let (f, d) = s
        .split_once('x')
        .with_context(|| format!("size `{s}` is not <files>x<devices>"))?;
    Ok((f.trim().parse()?, d.trim().parse()?))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate { common } => {
            let cfg = common.load()?;
            let scenario = generate_scenario(&cfg, cfg.rng_seed)?;
            for w in scenario.warnings() {
                eprintln!("warning: {w}");
            }
            emit(common.out.as_deref(), "scenario.txt", write_scenario(&scenario).as_bytes())?;
        }
        Command::Place {
            scenario,
            policy,
            seed,
            trace,
            out,
        } => {
            let scenario = parse_scenario(&read(&scenario)?)?;
            let (matrix, log) = place(policy, &scenario, seed)?;
            let overflow = matrix.overflow_count(scenario.cloud());
            if overflow > 0 {
                eprintln!("warning: {overflow} replicas overflowed to the cloud");
            }
            emit(out.as_deref(), "placement.txt", write_placement(&matrix).as_bytes())?;
            if trace {
                emit(out.as_deref(), "trace.txt", log.to_text().as_bytes())?;
            }
        }
        Command::Eval {
            scenario,
            placement,
            seed,
            failures,
            masks,
            out,
        } => {
            let scenario = parse_scenario(&read(&scenario)?)?;
            let rows = match placement {
                None => evaluate_scenario(&scenario, seed, failures, masks, &Policy::ALL)?,
                Some(p) => {
                    let matrix = parse_placement(&read(&p)?)?;
                    for v in check_constraints(&matrix, &scenario) {
                        eprintln!("violation: {v}");
                    }
                    vec![evaluate_placement(&scenario, &matrix, seed, failures, masks)?]
                }
            };
            emit(out.as_deref(), "results.csv", &csv_bytes(&rows)?)?;
        }
        Command::Sweep {
            common,
            failures,
            masks,
            repeats,
            sizes,
        } => {
            let cfg = common.load()?;
            let mut plan = SweepPlan::from_config(cfg);
            plan.failure_fraction = failures;
            plan.failure_mask_count = masks;
            if let Some(r) = repeats {
                plan.repeats = r;
            }
            if let Some(list) = sizes {
                plan.sizes = list.iter().map(|s| parse_size(s)).collect::<Result<_>>()?;
            }
            let result = run_sweep(&plan)?;
            for e in &result.errors {
                eprintln!(
                    "cell {}x{} repeat {} failed: {}",
                    e.n_files, e.n_devices, e.repeat, e.message
                );
            }
            let dir = common.out.as_deref();
            emit(dir, "results.csv", &csv_bytes(&result.rows)?)?;
            if dir.is_some() {
                emit(dir, "summary.csv", &csv_bytes(&summarize(&result))?)?;
                emit(dir, "improvement.csv", &csv_bytes(&improvement_table(&result))?)?;
                emit(dir, "errors.csv", &csv_bytes(&result.errors)?)?;
            }
        }
        Command::Time {
            common,
            sizes,
            repeats,
        } => {
            let cfg = common.load()?;
            let rows = time_placement(&sizes, repeats, &cfg, cfg.rng_seed)?;
            emit(common.out.as_deref(), "timing.csv", &csv_bytes(&rows)?)?;
        }
    }
    Ok(())
}
