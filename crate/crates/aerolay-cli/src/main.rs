//! Command-line front end: loads scenario configs, runs analytical and
//! Monte Carlo evaluations, and writes the figure/sweep CSVs.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use aerolay::experiments::{
    self, parse_values, run_fig2, run_fig3, run_fig45, run_sweep, EngineChoice, ExperimentSpec,
    SweepVariable,
};

#[derive(Parser)]
#[command(
    name = "aerolay",
    about = "Coverage analysis for UAV-to-UAV links sharing cellular uplink spectrum",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Scenario/experiment config file (key = value lines); defaults
    /// model an urban macro deployment at 2 GHz.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path prefix for CSV files.
    #[arg(long, default_value = "out/aerolay")]
    out: String,
    /// Monte Carlo drops per point (default 200000, or the config's
    /// mc_drops).
    #[arg(long)]
    drops: Option<u64>,
    /// Monte Carlo base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Engines to run: analytical | mc | both.
    #[arg(long)]
    engine: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Validation run: coverage vs threshold for both links in the
    /// full-reuse underlay, analytical and Monte Carlo side by side.
    /// Exits non-zero if the curves disagree by more than 0.03 anywhere.
    Fig2(CommonOpts),
    /// Coverage at -5 dB vs the UAV spectrum access factor, four
    /// (epsilon_u, lambda_u) combinations, both links, underlay.
    Fig3(CommonOpts),
    /// Rate CCDFs for the GUE uplink and the U2U link at eta_u = 0.1,
    /// underlay and overlay, four (epsilon_u, lambda_u) combinations.
    Fig45(CommonOpts),
    /// One-variable sweep declared in the config or via --var/--values.
    Sweep {
        #[command(flatten)]
        common: CommonOpts,
        /// Swept variable: T | eta_u | lambda_u | epsilon_u | rate_T.
        #[arg(long)]
        var: Option<String>,
        /// Grid: comma list (a,b,c) or range (start:stop:step).
        #[arg(long)]
        values: Option<String>,
    },
    /// Parse and validate a config, printing the derived scenario.
    ValidateConfig {
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn build_spec(common: &CommonOpts) -> anyhow::Result<ExperimentSpec> {
    let mut spec = match &common.config {
        Some(path) => experiments::load_config(path)
            .with_context(|| format!("loading {}", path.display()))?,
        None => ExperimentSpec::default(),
    };
    if let Some(d) = common.drops {
        if d == 0 {
            bail!("--drops must be >= 1");
        }
        spec.mc.n_drops = d;
    }
    if let Some(s) = common.seed {
        spec.mc.seed = s;
    }
    if let Some(e) = &common.engine {
        spec.engines = match e.as_str() {
            "analytical" => EngineChoice::Analytical,
            "mc" => EngineChoice::MonteCarlo,
            "both" => EngineChoice::Both,
            other => bail!("--engine must be analytical|mc|both, got `{other}`"),
        };
    }
    Ok(spec)
}

fn ensure_parent(prefix: &str) -> anyhow::Result<()> {
    if let Some(parent) = PathBuf::from(format!("{prefix}_x")).parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(())
}

fn main() -> anyhow::Result<ExitCode> {
    if let Ok(threads) = std::env::var("AEROLAY_THREADS") {
        let n: usize = threads
            .parse()
            .context("AEROLAY_THREADS must be a positive integer")?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("rayon pool")?;
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Fig2(common) => {
            let spec = build_spec(&common)?;
            ensure_parent(&common.out)?;
            let report = run_fig2(&spec, &common.out)?;
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            println!("max |analytical - montecarlo| = {:.4}", report.max_gap);
            if report.max_gap > 0.03 {
                eprintln!("validation FAILED: gap exceeds 0.03");
                return Ok(ExitCode::from(2));
            }
            println!("validation passed (threshold 0.03)");
        }
        Command::Fig3(common) => {
            let spec = build_spec(&common)?;
            ensure_parent(&common.out)?;
            let path = run_fig3(&spec, &common.out)?;
            println!("wrote {}", path.display());
        }
        Command::Fig45(common) => {
            let spec = build_spec(&common)?;
            ensure_parent(&common.out)?;
            for f in run_fig45(&spec, &common.out)? {
                println!("wrote {}", f.display());
            }
        }
        Command::Sweep {
            common,
            var,
            values,
        } => {
            let mut spec = build_spec(&common)?;
            if let Some(v) = var {
                let parsed = SweepVariable::parse(&v)?;
                spec.sweep = Some(match spec.sweep.take() {
                    Some((_, vals)) => (parsed, vals),
                    None => (parsed, Vec::new()),
                });
            }
            if let Some(text) = values {
                let vals = parse_values(&text).map_err(|e| anyhow::anyhow!(e))?;
                spec.sweep = Some(match spec.sweep.take() {
                    Some((var, _)) => (var, vals),
                    None => bail!("--values given without a sweep variable"),
                });
            }
            match &spec.sweep {
                Some((_, vals)) if !vals.is_empty() => {}
                _ => bail!("sweep needs a variable and values (config keys or --var/--values)"),
            }
            ensure_parent(&common.out)?;
            let path = run_sweep(&spec, &common.out)?;
            println!("wrote {}", path.display());
        }
        Command::ValidateConfig { common } => {
            let spec = build_spec(&common)?;
            print!(
                "{}",
                experiments::figures::scenario_summary(&spec.scenario)?
            );
            println!("config OK");
        }
    }
    Ok(ExitCode::SUCCESS)
}
