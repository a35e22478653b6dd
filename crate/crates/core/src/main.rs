use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use teletomo::expcli::{self, CliError, ExperimentConfig, Mode, StateSource};
use teletomo::qstate::BellOutcome;
use teletomo::tomo::MethodChoice;

#[derive(Parser)]
#[command(
    name = "teletomo",
    version,
    about = "Teleportation-based quantum state tomography"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Closed,
    Linear,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random density matrix.
    Gen {
        #[arg(long)]
        qubits: usize,
        /// Defaults to full rank.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the protocol and write a record file.
    Simulate {
        /// Shared-state file; without it a random state is drawn from --state-seed.
        #[arg(long, conflicts_with = "state_seed")]
        state: Option<PathBuf>,
        #[arg(long, requires = "qubits")]
        state_seed: Option<u64>,
        /// Rank of the generated state (with --state-seed).
        #[arg(long, requires = "state_seed")]
        rank: Option<usize>,
        /// Defaults to the qubit count of --state.
        #[arg(long)]
        qubits: Option<usize>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Shots per Bob probe per arrangement (sampled mode).
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Designated outcome per wire, e.g. PsiMinus,PhiPlus. Defaults to all PsiMinus.
        #[arg(long, value_delimiter = ',')]
        outcome: Option<Vec<BellOutcome>>,
        #[arg(long)]
        all_outcomes: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct the shared state from a record file.
    Reconstruct {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two states; prints JSON metrics.
    Verify {
        #[arg(long)]
        truth: PathBuf,
        /// State or reconstruction file.
        #[arg(long)]
        estimate: PathBuf,
    },
    /// Sampled reconstruction error against shot count, as CSV.
    Convergence {
        #[arg(long)]
        state: PathBuf,
        /// Shots per probe, e.g. 1000,10000,100000.
        #[arg(long, value_delimiter = ',', required = true)]
        shots: Vec<u64>,
        /// Number of seeds, counted up from --seed.
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen {
            qubits,
            rank,
            seed,
            out,
        } => {
            let rho = expcli::cmd_gen(qubits, rank, seed, &out)?;
            let eig = rho.eigenvalues();
            let shown: Vec<String> = eig.iter().rev().map(|l| format!("{l:.6}")).collect();
            println!(
                "wrote {} ({} qubits, purity {:.6})",
                out.display(),
                qubits,
                rho.purity()
            );
            println!("eigenvalues: [{}]", shown.join(", "));
        }
        Command::Simulate {
            state,
            state_seed,
            rank,
            qubits,
            mode,
            shots,
            seed,
            outcome,
            all_outcomes,
            out,
        } => {
            let (source, n) = match (&state, state_seed) {
                (Some(path), _) => {
                    let n = match qubits {
                        Some(n) => n,
                        None => expcli::read_state(path)?.qubits(),
                    };
                    (StateSource::File(path), n)
                }
                (None, Some(s)) => (
                    StateSource::Generated { seed: s, rank },
                    qubits.expect("clap enforces --qubits"),
                ),
                (None, None) => {
                    return Err(CliError::Usage(
                        "one of --state or --state-seed is required".into(),
                    ))
                }
            };
            let mut config = ExperimentConfig::exact(n);
            config.mode = match mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Sampled => Mode::Sampled,
            };
            config.shots_per_probe = shots;
            config.seed = seed;
            config.all_outcomes = all_outcomes;
            if let Some(o) = outcome {
                config.designated_outcomes = o;
            }
            let file = expcli::cmd_simulate(source, &config, &out)?;
            println!("wrote {} records to {}", file.records.len(), out.display());
        }
        Command::Reconstruct {
            records,
            method,
            out,
        } => {
            let choice = match method {
                MethodArg::Auto => MethodChoice::Auto,
                MethodArg::Closed => MethodChoice::Closed,
                MethodArg::Linear => MethodChoice::Linear,
            };
            let r = expcli::cmd_reconstruct(&records, choice, &out)?;
            println!(
                "{:?}: residual {:e}, condition {:.4}, projected {}; wrote {}",
                r.method,
                r.residual,
                r.condition,
                r.projected,
                out.display()
            );
        }
        Command::Verify { truth, estimate } => {
            let m = expcli::cmd_verify(&truth, &estimate)?;
            println!("{}", serde_json::to_string(&m).expect("metrics serialize"));
        }
        Command::Convergence {
            state,
            shots,
            seeds,
            seed,
            out,
        } => {
            let seed_list: Vec<u64> = (0..seeds).map(|k| seed.wrapping_add(k)).collect();
            let rows = expcli::cmd_convergence(&state, &shots, &seed_list, &out)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                expcli::exit::USAGE as u8
            } else {
                0
            });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
