//! `junta-probe`: generate Boolean functions, dump spectra, compute exact
//! ground truth and run the junta-distance estimators with JSON reports.

mod instance;
mod run;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use junta_core::Budget;
use serde_json::json;

use crate::instance::InstanceArgs;

#[derive(Parser, Debug)]
#[command(name = "junta-probe", version, about = "Tolerant junta testing and distance estimation")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "JUNTA_PROBE_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a truth table.
    Gen {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the Fourier spectrum as CSV (mask,coefficient), Parseval sum in the footer.
    Fourier {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact distance to k-juntas and maximum k-subset Fourier mass.
    Truth {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Also report the exact distance to k′-juntas.
        #[arg(long)]
        k_prime: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance to O(k/ε²)-juntas with poly(k/ε) queries.
    RelaxedEstimate(EstimateArgs),
    /// Distance to k-juntas (branching + phase-two estimator).
    EstimateDist(EstimateArgs),
    /// Largest Fourier mass on at most k variables.
    Mass(EstimateArgs),
    /// λ estimates per coordinate and the oracle reduction outcome.
    Prune(EstimateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long)]
    pub eps: f64,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Sample-size controls. Without `--verbatim` the desk profile is used.
#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Use the analysed sample sizes (very large) instead of the desk profile.
    #[arg(long)]
    pub verbatim: bool,
    /// Multiply every accuracy target before sizing samples.
    #[arg(long)]
    pub loose: Option<f64>,
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long)]
    pub restrictions: Option<usize>,
    #[arg(long)]
    pub coef_samples: Option<usize>,
    #[arg(long)]
    pub branch_samples: Option<usize>,
    #[arg(long)]
    pub corr_points: Option<usize>,
    #[arg(long)]
    pub corr_reps: Option<usize>,
    #[arg(long)]
    pub phase_two_restrictions: Option<usize>,
    #[arg(long)]
    pub phase_two_samples: Option<usize>,
    /// Corruption rate of the simulated coordinate oracles.
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub correction_reps: Option<usize>,
    /// Constant c in the consistent-sampler step budget c·k′²·ln(k′/δ).
    #[arg(long)]
    pub sampler_constant: Option<f64>,
    #[arg(long)]
    pub kappa_override: Option<usize>,
    #[arg(long)]
    pub branch_depth_override: Option<usize>,
}

impl BudgetArgs {
    pub fn budget(&self) -> Budget {
        let mut b = if self.verbatim { Budget::verbatim() } else { Budget::desk() };
        macro_rules! pin {
            ($($field:ident <- $arg:ident),*) => {$(if let Some(v) = self.$arg { b.$field = Some(v); })*};
        }
        pin!(rounds <- rounds, restrictions <- restrictions, coef_samples <- coef_samples,
             branch_samples <- branch_samples, corr_points <- corr_points, corr_reps <- corr_reps,
             phase_two_restrictions <- phase_two_restrictions, phase_two_samples <- phase_two_samples,
             correction_reps <- correction_reps, kappa <- kappa_override, depth <- branch_depth_override);
        if let Some(l) = self.loose {
            b.loose = l;
        }
        if let Some(nu) = self.nu {
            b.nu = nu;
        }
        if let Some(c) = self.sampler_constant {
            b.sampler_constant = c;
        }
        b
    }
}

/// Failure surfaced to the user: exit code plus a JSON object on stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self { code: 2, kind: "invalid_config", message: message.into() }
    }
}

impl From<junta_core::Error> for Failure {
    fn from(e: junta_core::Error) -> Self {
        use junta_core::Error as E;
        let (code, kind) = match e.root() {
            E::Input(_) | E::Parse { .. } => (2, "invalid_config"),
            E::Unsupported(_) => (3, "unsupported"),
            E::Io(_) => (1, "io"),
            _ => (1, "internal"),
        };
        Self { code, kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { code: 1, kind: "io", message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => return fail(Failure::invalid(e.to_string().trim_end())),
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            return fail(Failure::invalid("--threads must be positive"));
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            return fail(Failure { code: 1, kind: "internal", message: e.to_string() });
        }
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => fail(f),
    }
}

fn fail(f: Failure) -> ExitCode {
    let body = json!({ "error": { "kind": f.kind, "message": f.message, "exit_code": f.code } });
    let _ = writeln!(std::io::stderr(), "{body}");
    ExitCode::from(f.code)
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Gen { instance, out } => run::gen(&instance, out.as_deref()),
        Command::Fourier { instance, out } => run::fourier(&instance, out.as_deref()),
        Command::Truth { instance, k_prime, out } => run::truth(&instance, k_prime, out.as_deref()),
        Command::RelaxedEstimate(a) => run::estimate("relaxed-estimate", "relaxed", &a),
        Command::EstimateDist(a) => run::estimate("estimate-dist", "subexp", &a),
        Command::Mass(a) => run::estimate("mass", "mass", &a),
        Command::Prune(a) => run::prune(&a),
    }
}
