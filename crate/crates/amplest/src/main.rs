use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use amplest::core::likelihood::{grid_maximize, run_mlqae};
use amplest::core::planner::{exceptional_values, make_plan_with_grid, Plan};
use amplest::core::sampler::{draw_record, MeasurementRecord};
use amplest::harness::{self, Amplitudes, ExperimentConfig, Mode};
use amplest::output::write_csv;

#[derive(Parser)]
#[command(
    name = "amplest",
    version,
    about = "Maximum-likelihood amplitude estimation from closed-form measurement statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PlanArgs {
    #[arg(long)]
    max_depth: u64,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    delta: f64,
    /// Use the jittered schedule.
    #[arg(long)]
    jitter: bool,
    #[arg(long, default_value_t = 2.0)]
    spread_coeff: f64,
    /// Angle grid size is ceil(multiplier / epsilon).
    #[arg(long, default_value_t = 3.0)]
    grid_multiplier: f64,
}

impl PlanArgs {
    fn plan(&self) -> Result<Plan> {
        Ok(make_plan_with_grid(
            self.epsilon,
            self.delta,
            self.max_depth,
            self.jitter,
            self.spread_coeff,
            self.grid_multiplier,
        )?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Schedule, shot count and call count for a target precision (JSON).
    Plan(PlanArgs),
    /// Simulate one run and print its maximum-likelihood estimate (JSON).
    Estimate {
        #[arg(long, required_unless_present = "record")]
        amplitude: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Estimate from a recorded measurement file instead of simulating.
        #[arg(long, conflicts_with = "amplitude")]
        record: Option<PathBuf>,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Simulate one measurement record (JSON).
    Draw {
        #[arg(long)]
        amplitude: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// One estimate per evenly spaced amplitude in [0, 1] (CSV).
    Sweep {
        #[arg(long)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Achieved precision against shot count (CSV).
    PrecisionCurve {
        #[arg(long, value_delimiter = ',', required = true)]
        amplitudes: Vec<f64>,
        /// Shot counts; `planned` stands for the planned shot count.
        #[arg(long, value_delimiter = ',', required = true)]
        shots: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Exceptional amplitudes of a maximum depth, ascending (JSON).
    Exceptional {
        #[arg(long)]
        max_depth: u64,
    },
    /// Achieved precision around one exceptional amplitude (CSV).
    ExceptionalRegion {
        #[arg(long)]
        max_depth: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 500)]
        runs: usize,
        #[arg(long)]
        jitter: bool,
        #[arg(long, default_value_t = 2.0)]
        spread_coeff: f64,
        #[arg(long, default_value_t = harness::REGION_GRID_MULTIPLIER)]
        grid_multiplier: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Jittered against unjittered call counts (CSV).
    CallRatio {
        #[arg(long, value_delimiter = ',', required = true)]
        depths: Vec<u64>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 2.0)]
        spread_coeff: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dense Grover simulation against the closed form (JSON report).
    ValidateOracle {
        #[arg(long)]
        qubits: u32,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        max_power: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_out<R: amplest::output::CsvRow>(path: &Path, rows: &[R]) -> Result<()> {
    if path == Path::new("-") {
        write_csv(rows, io::stdout().lock())?;
        return Ok(());
    }
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    write_csv(rows, &mut w)?;
    w.flush()?;
    Ok(())
}

fn config(plan: &PlanArgs, mode: Mode, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        mode,
        epsilon: plan.epsilon,
        delta: plan.delta,
        max_depth: plan.max_depth,
        jittered: plan.jitter,
        spread_coeff: plan.spread_coeff,
        grid_multiplier: Some(plan.grid_multiplier),
        base_seed: seed,
        ..Default::default()
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Plan(p) => print_json(&p.plan()?),
        Command::Estimate {
            amplitude,
            seed,
            record,
            plan,
        } => {
            let plan = plan.plan()?;
            let estimate = match (record, amplitude) {
                (Some(path), _) => {
                    let file =
                        File::open(&path).with_context(|| format!("opening {}", path.display()))?;
                    let record: MeasurementRecord =
                        serde_json::from_reader(io::BufReader::new(file))
                            .with_context(|| format!("reading {}", path.display()))?;
                    grid_maximize(&record, plan.grid_size)?
                }
                (None, Some(a)) => run_mlqae(a, &plan, seed)?,
                (None, None) => bail!("either --amplitude or --record is required"),
            };
            print_json(&estimate)
        }
        Command::Draw {
            amplitude,
            seed,
            plan,
        } => {
            let plan = plan.plan()?;
            print_json(&draw_record(amplitude, &plan.schedule, plan.n_shot, seed)?)
        }
        Command::Sweep {
            points,
            seed,
            out,
            plan,
        } => {
            let cfg = ExperimentConfig {
                amplitudes: Amplitudes::Even(points),
                ..config(&plan, Mode::Sweep, seed)
            };
            if points == 0 {
                bail!("--points must be >= 1");
            }
            let rows = amplest::thread_pool()?.install(|| harness::sweep_amplitudes(&cfg))?;
            write_out(&out, &rows)
        }
        Command::PrecisionCurve {
            amplitudes,
            shots,
            runs,
            seed,
            out,
            plan,
        } => {
            let planned = plan.plan()?.n_shot;
            let n_shot_list = shots
                .iter()
                .map(|s| match s.trim() {
                    "planned" => Ok(planned),
                    t => t
                        .parse::<u64>()
                        .with_context(|| format!("invalid shot count {t:?}")),
                })
                .collect::<Result<Vec<_>>>()?;
            let cfg = ExperimentConfig {
                amplitudes: Amplitudes::List(amplitudes),
                runs_per_point: runs,
                n_shot_list,
                ..config(&plan, Mode::PrecisionCurve, seed)
            };
            let rows = amplest::thread_pool()?.install(|| harness::precision_curve(&cfg))?;
            write_out(&out, &rows)
        }
        Command::Exceptional { max_depth } => print_json(&exceptional_values(max_depth)),
        Command::ExceptionalRegion {
            max_depth,
            k,
            epsilon,
            delta,
            points,
            runs,
            jitter,
            spread_coeff,
            grid_multiplier,
            seed,
            out,
        } => {
            if points == 0 {
                bail!("--points must be >= 1");
            }
            let cfg = ExperimentConfig {
                mode: Mode::ExceptionalRegion,
                epsilon,
                delta,
                max_depth,
                jittered: jitter,
                spread_coeff,
                grid_multiplier: Some(grid_multiplier),
                amplitudes: Amplitudes::Even(points),
                runs_per_point: runs,
                center_k: k,
                base_seed: seed,
                ..Default::default()
            };
            let rows =
                amplest::thread_pool()?.install(|| harness::exceptional_region_scan(&cfg))?;
            write_out(&out, &rows)
        }
        Command::CallRatio {
            depths,
            epsilon,
            delta,
            spread_coeff,
            out,
        } => {
            let rows = harness::call_ratio_table(&depths, epsilon, delta, spread_coeff)?;
            write_out(&out, &rows)
        }
        Command::ValidateOracle {
            qubits,
            trials,
            max_power,
            seed,
        } => print_json(&harness::validate_oracle(qubits, trials, max_power, seed)?),
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
