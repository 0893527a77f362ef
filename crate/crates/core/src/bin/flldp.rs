use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use flldp::generators::{generate, ClientModel, CostRange, GeneratorConfig, Process};
use flldp::harness::{
    noise_rng, run_sweep, write_csv, Grid, InstanceSource, RealWorldTable, SweepConfig, SweepKind,
};
use flldp::model::{load_instance, save_instance, Instance};
use flldp::solvers::{brute_force_oracle, solve_ldp_margin, solve_ldp_reconnection, solve_optimal};
use flldp::{density_check, total_cost, Algorithm, Error, Exec, PrivacyParams, SolveParams};

const EXIT_INVALID: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_GENERATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "flldp",
    version,
    about = "Facility location under local differential privacy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an instance and write it as JSON.
    Generate {
        #[command(flatten)]
        generator: GeneratorArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one instance and export the solution.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "reconnection")]
        algo: Algorithm,
        #[command(flatten)]
        solve: SolveArgs,
        /// Seed of the Laplace noise stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep and write one CSV row per trial and algorithm.
    Sweep {
        #[arg(long, default_value = "single")]
        kind: SweepKind,
        /// START,STOP,STEP (inclusive).
        #[arg(long, default_value = "0,0,1")]
        grid: Grid,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        generator: GeneratorArgs,
        #[command(flatten)]
        solve: SolveArgs,
        /// Comma-separated subset of optimal,margin,reconnection.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "optimal,margin,reconnection"
        )]
        algos: Vec<Algorithm>,
        /// Use locations and clients from an id,x,y,clients table instead of
        /// generating instances.
        #[arg(long)]
        realworld: Option<PathBuf>,
        /// Record per-solve wall-clock time (makes the output nondeterministic).
        #[arg(long)]
        timing: bool,
        /// Run trials on one thread.
        #[arg(long)]
        sequential: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact optimum by exhaustive search (at most 8 locations).
    Oracle {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Report how many locations have a dense enough neighbourhood.
    CheckDensity {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 2.0)]
        gamma: f64,
    },
}

#[derive(Args)]
struct GeneratorArgs {
    #[arg(long, default_value = "matern")]
    process: Process,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
    #[arg(long = "delta-gen", default_value_t = 0.2)]
    delta_gen: f64,
    /// gauss, gauss:MEAN,SD,LO,HI, const:K or bern:P
    #[arg(long, default_value = "gauss")]
    clients: ClientModel,
    #[arg(long = "cost-range", default_value = "0.1,0.3")]
    cost_range: CostRange,
    /// Raise every client count to at least one.
    #[arg(long)]
    min_one: bool,
}

impl GeneratorArgs {
    fn config(&self, seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            n: self.n,
            gamma: self.gamma,
            delta_gen: self.delta_gen,
            clients: self.clients.clone(),
            cost_range: self.cost_range,
            min_one: self.min_one,
            seed,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 0.2)]
    delta: f64,
}

impl SolveArgs {
    fn params(&self) -> flldp::Result<SolveParams> {
        SolveParams::new(PrivacyParams::new(self.epsilon, self.alpha)?, self.delta)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter(_) => EXIT_INVALID,
        Error::Schema { .. } | Error::Parse(_) | Error::Io(_) => EXIT_IO,
        Error::Generation(_) => EXIT_GENERATION,
    }
}

fn read_instance(path: &Path) -> flldp::Result<Instance> {
    load_instance(&fs::read(path)?)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> flldp::Result<()> {
    match out {
        Some(p) => fs::write(p, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn json_line<T: serde::Serialize>(value: &T) -> flldp::Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn run(cmd: Command) -> flldp::Result<()> {
    match cmd {
        Command::Generate {
            generator,
            seed,
            out,
        } => {
            let inst = generate(generator.process, &generator.config(seed))?;
            emit(out.as_deref(), &save_instance(&inst))
        }
        Command::Solve {
            instance,
            algo,
            solve,
            seed,
            out,
        } => {
            let params = solve.params()?;
            let inst = read_instance(&instance)?;
            let sol = match algo {
                Algorithm::Optimal => solve_optimal(&inst),
                Algorithm::Margin => solve_ldp_margin(&inst, &params.privacy, &mut noise_rng(seed)),
                Algorithm::Reconnection => {
                    solve_ldp_reconnection(&inst, &params, &mut noise_rng(seed))?
                }
            };
            let cost = total_cost(&inst, &sol)?;
            eprintln!(
                "{algo}: total {:.6} (facility {:.6}, connection {:.6}), {} open",
                cost.total,
                cost.facility_cost,
                cost.connection_cost,
                sol.n_open()
            );
            emit(out.as_deref(), &json_line(&sol)?)
        }
        Command::Sweep {
            kind,
            grid,
            trials,
            generator,
            solve,
            algos,
            realworld,
            timing,
            sequential,
            seed,
            out,
        } => {
            let mut cfg = SweepConfig::new(kind, grid, trials);
            cfg.solve = solve.params()?;
            cfg.algorithms = algos;
            cfg.master_seed = seed;
            cfg.record_timing = timing;
            if sequential {
                cfg.exec = Exec::Sequential;
            }
            cfg.source = match realworld {
                Some(path) => InstanceSource::Table {
                    table: RealWorldTable::parse(&fs::read(path)?)?,
                    costs: generator.cost_range,
                },
                None => {
                    let config = generator.config(seed);
                    config.validate()?;
                    InstanceSource::Generated {
                        process: generator.process,
                        config,
                    }
                }
            };
            let rows = run_sweep(&cfg)?;
            write_csv(&rows, &out)?;
            eprintln!("wrote {} rows to {}", rows.len(), out.display());
            Ok(())
        }
        Command::Oracle { instance } => {
            let cost = brute_force_oracle(&read_instance(&instance)?)?;
            emit(None, &json_line(&cost)?)
        }
        Command::CheckDensity {
            instance,
            delta,
            gamma,
        } => {
            let report = density_check(&read_instance(&instance)?, delta, gamma)?;
            let below = report.satisfied.iter().filter(|&&s| !s).count();
            println!(
                "threshold {:.4}: {} of {} locations satisfied ({:.1}%), {} below",
                report.threshold,
                report.ball_sizes.len() - below,
                report.ball_sizes.len(),
                100.0 * report.fraction,
                below
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
