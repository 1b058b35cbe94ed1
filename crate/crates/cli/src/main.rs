use std::io::Write;
use std::process::ExitCode;

use chanfid_cli::commands::{self, Outcome};
use chanfid_cli::CliResult;
use clap::{Parser, Subcommand};

/// Fidelity and distinguishability of quantum channels.
#[derive(Debug, Parser)]
#[command(name = "chanfid", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Channel fidelity of two channel documents.
    Fidelity {
        a: String,
        b: String,
        /// Tighter bound on the cross-route residual.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Emit the Choi operator and Choi state as a `choi` document.
    Choi {
        a: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Round-trip a channel through its Choi operator to a minimal Kraus set.
    Kraus {
        a: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Property checks CF1-CF7 with seeded auxiliary channels.
    Props {
        a: String,
        b: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fidelity versus cb-distance bound chain.
    Bounds {
        a: String,
        b: String,
        /// Random restarts for the estimators.
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Best probe time for a Hamiltonian ensemble.
    HamDiscriminate {
        ensemble: String,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Entangled preprocessing for perfect discrimination of two qubit unitaries.
    Acin {
        u1: String,
        u2: String,
        #[arg(long, default_value_t = 16)]
        nmax: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Logical fidelity of a code under noise and recovery.
    QeccCheck {
        code: String,
        noise: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Seeded Haar-random channel as a Kraus document.
    RandomChannel {
        #[arg(long)]
        din: usize,
        #[arg(long)]
        dout: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        seed: u64,
    },
}

fn run(cmd: Command) -> CliResult<Outcome> {
    match cmd {
        Command::Fidelity { a, b, tol } => commands::fidelity(&a, &b, tol),
        Command::Choi { a, tol } => commands::choi(&a, tol),
        Command::Kraus { a, tol } => commands::kraus(&a, tol),
        Command::Props { a, b, seed } => commands::props(&a, &b, seed),
        Command::Bounds { a, b, budget, seed, tol } => commands::bounds(&a, &b, budget, seed, tol),
        Command::HamDiscriminate { ensemble, grid } => commands::ham_discriminate(&ensemble, grid),
        Command::Acin { u1, u2, nmax, tol } => commands::acin(&u1, &u2, nmax, tol),
        Command::QeccCheck { code, noise, tol } => commands::qecc(&code, &noise, tol),
        Command::RandomChannel { din, dout, rank, seed } => commands::random_channel(din, dout, rank, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(outcome.report.render().as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("chanfid: {}", outcome.message.unwrap_or_default());
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("chanfid: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
