use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qbm_ring_cli::output::render;
use qbm_ring_cli::{
    cmd_amplitude, cmd_gfun, cmd_oracle, cmd_params, cmd_wexp, CliError, Format, OracleOptions, Overrides, Resolved,
    RunConfig, WMode,
};

#[derive(Parser)]
#[command(name = "qbm-ring", version, about = "Charge-density-wave ring coupled to a power-law bath")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Bath exponent(s), comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    s: Option<Vec<f64>>,
    /// Coupling g_s in Hz^(2-s)
    #[arg(long, global = true)]
    g: Option<f64>,
    /// μ = I/ħ in seconds (replaces a configured ring)
    #[arg(long, global = true)]
    mu: Option<f64>,
    /// Bath cutoff Ω in rad/s, default 1/μ
    #[arg(long, global = true)]
    omega_cutoff: Option<f64>,
    /// Bath temperature in K
    #[arg(long, global = true)]
    temperature: Option<f64>,
    /// ground | momentum:L | gaussian:THETA0,SIGMA
    #[arg(long, global = true)]
    state: Option<String>,
    /// End of the time grid in periods P = 4πμ
    #[arg(long, global = true)]
    t_max_periods: Option<f64>,
    /// Number of time points
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Output file (default stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Fundamental solution G(t), Ġ(t)
    Gfun,
    /// Charge-density oscillation amplitude and noise action
    Amplitude,
    /// Expectation value of the winding operator
    Wexp {
        /// Use the early-time approximation
        #[arg(long, conflicts_with = "isolated")]
        early: bool,
        /// Ignore the bath (isolated ring)
        #[arg(long)]
        isolated: bool,
    },
    /// Derived scales and timescales as JSON
    Params,
    /// Brute-force oracle suite
    Oracle {
        /// Halve mode counts and loosen tolerances tenfold
        #[arg(long)]
        quick: bool,
        /// Scale the reference coupling by this factor (fault injection)
        #[arg(long, default_value_t = 1.0)]
        inject_mismatch: f64,
    },
}

fn resolve(common: &Common) -> Result<Resolved, CliError> {
    let base = match &common.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    let overrides = Overrides {
        s: common.s.clone(),
        g: common.g,
        mu: common.mu,
        omega_cutoff: common.omega_cutoff,
        temperature: common.temperature,
        state: common.state.clone(),
        t_max_periods: common.t_max_periods,
        points: common.points,
        out: common.out.clone(),
        format: common.format,
    };
    base.apply(&overrides).resolve()
}

fn emit(cfg: &Resolved, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = resolve(&cli.common)?;
    let header = cfg.describe();
    match cli.command {
        Command::Gfun => emit(&cfg, &render(cfg.format, "gfun", &header, &cmd_gfun(&cfg)?)),
        Command::Amplitude => emit(&cfg, &render(cfg.format, "amplitude", &header, &cmd_amplitude(&cfg)?)),
        Command::Wexp { early, isolated } => {
            let mode = if isolated {
                WMode::Isolated
            } else if early {
                WMode::Early
            } else {
                WMode::General
            };
            emit(&cfg, &render(cfg.format, "wexp", &header, &cmd_wexp(&cfg, mode)?))
        }
        Command::Params => {
            let doc = cmd_params(&cfg)?;
            emit(&cfg, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap_or_default()))
        }
        Command::Oracle { quick, inject_mismatch } => {
            if !inject_mismatch.is_finite() || inject_mismatch <= 0.0 {
                return Err(CliError::Usage("--inject-mismatch must be positive".into()));
            }
            let report = cmd_oracle(&OracleOptions { quick, mismatch: inject_mismatch })?;
            emit(&cfg, &report.render())?;
            if report.passed() {
                Ok(())
            } else {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
                Err(CliError::OracleFailure(failed.join(", ")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qbm-ring: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
