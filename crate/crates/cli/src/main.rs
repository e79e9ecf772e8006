//! `hf`: Heegaard Floer homology of `Σ_g × S¹` from the command line.

mod cache;
mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(
    name = "hf",
    version,
    about = "Exact Heegaard Floer homology of Σ_g × S¹"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args, Debug, Clone)]
pub struct Shared {
    /// Genus of the surface.
    #[arg(long, short = 'g', global = true)]
    pub genus: Option<usize>,
    /// Spin^c structure k, with c_1 dual to 2k[S¹].
    #[arg(
        long,
        short = 'k',
        global = true,
        default_value_t = 0,
        allow_hyphen_values = true
    )]
    pub spinc: i64,
    /// Coefficient ring: Z, Q, F2 or Fp:<p>.
    #[arg(long, global = true, default_value = "Z")]
    pub ring: String,
    /// Degree window MIN..MAX (integer d; HF⁺ entries sit at d+1/2).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub degrees: Option<String>,
    /// table, json, tsv, or a file path (format taken from the extension).
    #[arg(long, global = true, default_value = "table")]
    pub out: String,
    /// Allow genus above the desk-scale cap and run extended checks.
    #[arg(long, global = true)]
    pub extended: bool,
    /// Wall-clock budget in seconds for --extended runs.
    #[arg(long, global = true, default_value_t = 1800)]
    pub budget: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// ĤF in the torsion spin^c structure.
    Hat,
    /// HF⁺; --spinc 0 adds the towers, --reduced gives HF⁺_red.
    Plus {
        #[arg(long)]
        reduced: bool,
    },
    /// HF^∞, two-periodic.
    Infinity,
    /// HF⁺ for k ≠ 0 with the kernel comparison.
    Nontorsion,
    /// H_1 action corrections; a full basis sweep unless --xi is given.
    Action {
        /// Basis class 1..=2g (default: all).
        #[arg(long)]
        gamma: Option<usize>,
        /// Multivector JSON, e.g. '[{"blade":[],"coeff":"1"}]'.
        #[arg(long)]
        xi: Option<String>,
        /// U power q of ξ ⊗ U^{-q}.
        #[arg(long, default_value_t = 0)]
        u_power: i64,
    },
    /// Cohomology of the circle bundle E_g and the cokernel comparison.
    Eg,
    /// The triple-cup complex on Λ* H¹(Σ_g × S¹).
    Beta,
    /// Export one slice matrix.
    Slice {
        /// F, v, h, F_hat or 1+J; the shift is --spinc.
        #[arg(long, default_value = "F")]
        op: String,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
    /// Smith normal form of a matrix JSON file.
    Snf {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 5)]
        max_genus: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.shared.jobs {
        if n == 0 {
            return report(CliError::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is built once");
    }
    let budget = cli
        .shared
        .extended
        .then(|| Duration::from_secs(cli.shared.budget));
    let outcome = match budget {
        None => commands::run(&cli.command, &cli.shared),
        Some(limit) => {
            let (tx, rx) = mpsc::channel();
            let (command, shared) = (cli.command.clone(), cli.shared.clone());
            std::thread::spawn(move || {
                let _ = tx.send(commands::run(&command, &shared));
            });
            rx.recv_timeout(limit).unwrap_or_else(|_| {
                Err(CliError::Extended(format!(
                    "budget of {} s exceeded",
                    limit.as_secs()
                )))
            })
        }
    };
    match outcome.and_then(|o| emit(&o, &cli.shared.out).map(|()| o)) {
        Ok(Outcome { failed: true, .. }) => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    eprintln!("hf: {e}");
    ExitCode::from(2)
}

fn emit(o: &Outcome, out: &str) -> Result<(), CliError> {
    let json = || serde_json::to_string_pretty(&o.json).expect("JSON serializes") + "\n";
    match out {
        "table" => print!("{}", o.text),
        "json" => print!("{}", json()),
        "tsv" => print!("{}", o.tsv),
        path => {
            let body = match std::path::Path::new(path)
                .extension()
                .and_then(|e| e.to_str())
            {
                Some("json") => json(),
                Some("tsv") => o.tsv.clone(),
                _ => o.text.clone(),
            };
            cache::write_atomic(path.as_ref(), body.as_bytes())
                .map_err(|e| CliError::Usage(format!("cannot write {path}: {e}")))?;
            eprintln!("wrote {path}");
        }
    }
    Ok(())
}
