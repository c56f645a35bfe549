//! The `qregion` command line.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 when an input fails
//! validation or a computation fails.

pub mod csv;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qregion_core::capacity::{
    broadcast_region_point, classical_region_point, coherent_capacity, ea_capacity, holevo_chi, quantum_region_point,
    superposition_sweep_channel, time_division_region, uniform_grid, PointParams, StateEstimate,
};
use qregion_core::objects::{depolarizing, KrausChannel};
use qregion_core::optim::OptimizerConfig;
use qregion_core::protocol::{run_protocol, SimConfig};

use crate::csv::{Report, Table};
pub use crate::spec::{parse_ansatz_spec, parse_channel_spec, parse_ensemble_spec, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invalid(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Invalid(_) => EXIT_INVALID,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) => f.write_str(m),
        }
    }
}

impl From<qregion_core::Error> for CliError {
    fn from(e: qregion_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Invalid(e.0)
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "qregion", version, about = "Capacity regions for quantum channels with unreliable entanglement assistance")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Channel: `depolarizing`, `identity`, inline JSON, or a JSON file path
    #[arg(long, global = true)]
    channel: Option<String>,
    /// Depolarizing parameter in [0, 1]
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random starts per optimization
    #[arg(long, global = true, default_value_t = 32)]
    restarts: usize,
    /// Optimizer convergence tolerance
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    Chi,
    Ea,
    Coherent,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single-letter capacity quantity of a channel
    Capacity {
        #[arg(long, value_enum, default_value = "chi")]
        which: Which,
        /// Channel uses per block (chi only)
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        block: u8,
    },
    /// Classical rate pair of one ensemble
    Region {
        /// Ensemble JSON (inline or file path)
        #[arg(long)]
        ensemble: String,
    },
    /// Superposition family over a uniform beta grid, with time-division endpoints
    Sweep {
        /// Number of grid points in [0, 1]
        #[arg(long, default_value_t = 101)]
        betas: usize,
    },
    /// Time-sharing line between two codes
    Timediv {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        cea: f64,
        /// Number of grid points in [0, 1]
        #[arg(long, default_value_t = 11)]
        lambdas: usize,
    },
    /// Quantum rate pair of one ansatz on A1 x A2 x A
    QuantumPoint {
        /// Ansatz JSON (inline or file path)
        #[arg(long)]
        ansatz: String,
    },
    /// Two-receiver bounds; --channel reaches the entanglement holder
    Broadcast {
        /// Channel to the second receiver
        #[arg(long)]
        channel2: Option<String>,
        #[arg(long)]
        eps2: Option<f64>,
        #[arg(long)]
        ensemble: String,
    },
    /// Monte-Carlo run of the time-division code
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        assisted: bool,
    },
}

/// JSON text from an inline document or a file.
fn load_doc(arg: &str) -> CliResult<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| CliError::Invalid(format!("cannot read {arg}: {e}")))
}

fn channel_arg(name: Option<&str>, eps: Option<f64>, flag: &str) -> CliResult<KrausChannel> {
    let name = name.ok_or_else(|| CliError::Usage(format!("--{flag} is required")))?;
    let eps_flag = if flag == "channel" { "eps" } else { "eps2" };
    match name {
        "depolarizing" => {
            let eps = eps.ok_or_else(|| CliError::Usage(format!("--{flag} depolarizing needs --{eps_flag}")))?;
            Ok(depolarizing(eps)?)
        }
        "identity" => Ok(KrausChannel::identity(2)?),
        doc => Ok(parse_channel_spec(&load_doc(doc)?)?),
    }
}

fn optimizer(common: &Common) -> CliResult<OptimizerConfig> {
    let cfg = OptimizerConfig { restarts: common.restarts, tol: common.tol, seed: common.seed, ..Default::default() };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn state_report(which: &str, est: &StateEstimate) -> Report {
    let mut r = Report::new();
    r.text("quantity", which)
        .num("value", est.value)
        .num("witness_entanglement_entropy", est.entanglement_entropy)
        .flag("converged", est.status.converged)
        .int("starts", est.status.starts)
        .int("starts_converged", est.status.starts_converged)
        .int("evaluations", est.status.evaluations);
    r
}

fn capacity(common: &Common, which: Which, block: usize) -> CliResult<String> {
    let n = channel_arg(common.channel.as_deref(), common.eps, "channel")?;
    let cfg = optimizer(common)?;
    if block != 1 && !matches!(which, Which::Chi) {
        return Err(CliError::Usage("--block applies to --which chi only".into()));
    }
    let report = match which {
        Which::Chi => {
            let est = holevo_chi(&n, &cfg, block)?;
            let used = est.witness.probs().iter().filter(|p| **p > 1e-6).count();
            let mut r = Report::new();
            r.text("quantity", "chi")
                .int("block", est.block)
                .num("value", est.value)
                .int("witness_letters", est.witness.letters())
                .int("witness_letters_used", used)
                .flag("converged", est.status.converged)
                .int("starts", est.status.starts)
                .int("starts_converged", est.status.starts_converged)
                .int("evaluations", est.status.evaluations);
            r
        }
        Which::Ea => state_report("ea", &ea_capacity(&n, &cfg)?),
        Which::Coherent => state_report("coherent", &coherent_capacity(&n, &cfg)?),
    };
    Ok(report.finish())
}

fn sweep(common: &Common, betas: usize) -> CliResult<String> {
    let n = channel_arg(common.channel.as_deref(), common.eps, "channel")?;
    let cfg = optimizer(common)?;
    let grid = uniform_grid(betas).map_err(|e| CliError::Usage(e.to_string()))?;
    let region = superposition_sweep_channel(&n, &grid)?;
    let mut t = Table::new(&["beta", "R", "Rprime"]);
    for p in &region.points {
        let PointParams::Beta(beta) = p.params else { unreachable!("sweep points carry beta") };
        t.rate_row(beta, p);
    }
    let c = holevo_chi(&n, &cfg, 1)?.value;
    let c_ea = ea_capacity(&n, &cfg)?.value;
    let mut ends = Table::new(&["lambda", "R", "Rprime"]);
    for p in &time_division_region(c, c_ea, &[0.0, 1.0])?.points {
        let PointParams::Lambda(l) = p.params else { unreachable!("time-division points carry lambda") };
        ends.rate_row(l, p);
    }
    Ok(format!("{}\n{}", t.finish(), ends.finish()))
}

fn execute(cli: Cli) -> CliResult<String> {
    let common = &cli.common;
    match cli.command {
        Command::Capacity { which, block } => capacity(common, which, block as usize),
        Command::Region { ensemble } => {
            let n = channel_arg(common.channel.as_deref(), common.eps, "channel")?;
            let e = parse_ensemble_spec(&load_doc(&ensemble)?)?;
            let p = classical_region_point(&n, &e)?;
            let mut r = Report::new();
            r.num("R", p.r).num("Rprime", p.r_prime);
            Ok(r.finish())
        }
        Command::Sweep { betas } => sweep(common, betas),
        Command::Timediv { c, cea, lambdas } => {
            let grid = uniform_grid(lambdas).map_err(|e| CliError::Usage(e.to_string()))?;
            let region = time_division_region(c, cea, &grid)?;
            let mut t = Table::new(&["lambda", "R", "Rprime"]);
            for (l, p) in grid.iter().zip(&region.points) {
                t.rate_row(*l, p);
            }
            Ok(t.finish())
        }
        Command::QuantumPoint { ansatz } => {
            let n = channel_arg(common.channel.as_deref(), common.eps, "channel")?;
            let a = parse_ansatz_spec(&load_doc(&ansatz)?)?;
            let p = quantum_region_point(&n, &a)?;
            let mut r = Report::new();
            r.num("Q", p.r).num("Qprime", p.r_prime);
            Ok(r.finish())
        }
        Command::Broadcast { channel2, eps2, ensemble } => {
            let n1 = channel_arg(common.channel.as_deref(), common.eps, "channel")?;
            let n2 = channel_arg(channel2.as_deref(), eps2, "channel2")?;
            let e = parse_ensemble_spec(&load_doc(&ensemble)?)?;
            let b = broadcast_region_point(&n1, &n2, &e)?;
            let mut r = Report::new();
            r.num("r0", b.r0).num("r1", b.r1).num("r_sum", b.r_sum);
            Ok(r.finish())
        }
        Command::Simulate { n, lambda, trials, assisted } => {
            let cfg = SimConfig { n, lambda, trials, seed: common.seed, assisted, channel_eps: common.eps.unwrap_or(0.0) };
            let rep = run_protocol(&cfg)?;
            let mut r = Report::new();
            r.int("n", n)
                .num("lambda", lambda)
                .flag("assisted", assisted)
                .num("eps", cfg.channel_eps)
                .int("seed", common.seed as usize)
                .int("trials", rep.trials)
                .num("guaranteed_rate", rep.guaranteed_rate)
                .num("excess_rate", rep.excess_rate)
                .num("err_guaranteed", rep.err_guaranteed)
                .num("err_excess", rep.err_excess)
                .num("excess_symbol_error", rep.excess_symbol_error);
            Ok(r.finish())
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let out = cli.common.out.clone();
    let result = execute(cli).and_then(|text| match out {
        Some(path) => std::fs::write(&path, text).map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Invalid(format!("cannot write output: {e}"))),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code()
        }
    }
}
