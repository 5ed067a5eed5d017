use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hyperalloc::harness::{
    self, format_param_value, parse_algorithms, run_sweep, run_trials, Algorithm, SweepParam, SweepSpec,
};
use hyperalloc::{Result, SimConfig};

#[derive(Parser)]
#[command(name = "hyperalloc", version, about = "D2D underlay channel allocation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON config; missing keys take defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl Common {
    fn load(&self) -> Result<SimConfig> {
        let mut config = match &self.config {
            Some(path) => SimConfig::from_json_file(path)?,
            None => SimConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.master_seed = seed;
        }
        config.validate()?;
        fs::create_dir_all(&self.out)?;
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Runs one configuration and writes capacity.csv.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "graph,hypergraph")]
        algos: String,
    },
    /// Sweeps one parameter and writes capacity.csv.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// One of N, M, K, Q, eta_db.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, default_value = "graph,hypergraph")]
        algos: String,
    },
    /// Writes per-UE throughput samples to cdf.csv.
    Cdf {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "graph,hypergraph")]
        algos: String,
    },
    /// Compares both allocators with the exhaustive oracle on a small
    /// instance; writes capacity.csv.
    OracleCompare {
        #[command(flatten)]
        common: Common,
    },
    /// Counts operations for N+M in the given list (N = M = half) and
    /// writes op_counts.csv.
    OpCounts {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "20,40,80,160")]
        sizes: Vec<usize>,
    },
}

fn print_summary(result: &harness::AggregateResult) {
    for s in &result.summaries {
        println!(
            "{:<11} capacity {:>9.3} ± {:.3} bit/s/Hz   outage cellular {:.2} d2d {:.2}",
            s.algorithm.name(),
            s.mean_capacity,
            s.std_err,
            s.mean_cellular_outage,
            s.mean_d2d_outage
        );
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    eprintln!("writing {}", path.display());
    Ok(BufWriter::new(File::create(path)?))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { common, algos } => {
            let config = common.load()?;
            let result = run_trials(&config, &parse_algorithms(&algos)?)?;
            print_summary(&result);
            harness::write_capacity_csv(create(&common.out, "capacity.csv")?, &[(String::new(), &result)])
        }
        Command::Sweep {
            common,
            param,
            values,
            algos,
        } => {
            let spec = SweepSpec {
                swept_parameter: param.parse::<SweepParam>()?,
                values,
                base_config: common.load()?,
                algorithms: parse_algorithms(&algos)?,
            };
            let points = run_sweep(&spec)?;
            let rows: Vec<(String, &harness::AggregateResult)> =
                points.iter().map(|p| (format_param_value(p.value), &p.result)).collect();
            for (value, result) in &rows {
                println!("{} = {value}", spec.swept_parameter.name());
                print_summary(result);
            }
            harness::write_capacity_csv(create(&common.out, "capacity.csv")?, &rows)
        }
        Command::Cdf { common, algos } => {
            let config = common.load()?;
            let result = run_trials(&config, &parse_algorithms(&algos)?)?;
            print_summary(&result);
            harness::write_cdf_csv(create(&common.out, "cdf.csv")?, &result)
        }
        Command::OracleCompare { common } => {
            let config = common.load()?;
            let result = run_trials(&config, &[Algorithm::Optimal, Algorithm::Hypergraph, Algorithm::Graph])?;
            print_summary(&result);
            harness::write_capacity_csv(create(&common.out, "capacity.csv")?, &[(String::new(), &result)])
        }
        Command::OpCounts { common, sizes } => {
            let base = common.load()?;
            let configs: Vec<SimConfig> = sizes
                .iter()
                .map(|&s| SimConfig {
                    n_cellular: s / 2,
                    n_d2d_pairs: s - s / 2,
                    ..base.clone()
                })
                .collect();
            let rows = harness::op_count_scaling(&configs)?;
            for algorithm in [Algorithm::Graph, Algorithm::Hypergraph] {
                let pts: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| r.algorithm == algorithm && r.phase == "total")
                    .map(|r| (r.n_plus_m as f64, r.op_count))
                    .collect();
                if pts.len() >= 2 {
                    println!("{algorithm}: log-log slope {:.3}", harness::fit_log_log_slope(&pts));
                }
            }
            harness::write_op_count_csv(create(&common.out, "op_counts.csv")?, &rows)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
