use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hsp_erasure::cli::{
    cmd_entangle, cmd_landauer, cmd_run, cmd_simplify, parse_k_generators, write_output,
    InstanceSource, LandauerConfig, LandauerMode, Outcome, OutputFormat, RunConfig,
};
use hsp_erasure::erasure::Strategy;
use hsp_erasure::{Error, Result};

#[derive(Parser)]
#[command(
    name = "hsp-erasure",
    version,
    about = "On-the-go erasure in the Abelian hidden subgroup algorithm"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the algorithm with an erasure strategy.
    Run(RunArgs),
    /// Report H(S|G), ell_max and the Bell-pair count for every intermediate subgroup.
    Entangle(InstanceArgs),
    /// Run the reduced algorithm over K and compare it with the erasure strategies.
    Simplify(RunArgs),
    /// Simulate the explicit Landauer erasure protocol.
    Landauer(LandauerArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Built-in instance: pfa8, pfa16, dlog8-a3 or z2z4.
    #[arg(
        long,
        conflicts_with = "oracle_file",
        required_unless_present = "oracle_file"
    )]
    instance: Option<String>,
    /// Oracle table in JSON.
    #[arg(long)]
    oracle_file: Option<PathBuf>,
    #[arg(long, default_value = "json", value_parser = parse_format)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value = "brute", value_parser = parse_strategy)]
    strategy: Strategy,
    /// Generators of K, e.g. "2" or "3,1;2,0".
    #[arg(long)]
    k_generators: Option<String>,
    /// Shot budget (default 8 log2 |G|).
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct LandauerArgs {
    /// Bath sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// beta*Delta values, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "n_beta_delta")]
    beta_delta: Vec<f64>,
    /// Keep N*beta*Delta fixed at this value.
    #[arg(long)]
    n_beta_delta: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    p_init: f64,
    #[arg(long, default_value = "classical", value_parser = parse_mode)]
    mode: LandauerMode,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_strategy(s: &str) -> std::result::Result<Strategy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<LandauerMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn source(args: &InstanceArgs) -> InstanceSource {
    match (&args.instance, &args.oracle_file) {
        (Some(name), _) => InstanceSource::Builtin(name.clone()),
        (None, Some(path)) => InstanceSource::File(path.clone()),
        (None, None) => unreachable!("clap requires one of --instance and --oracle-file"),
    }
}

fn run_config(args: &RunArgs) -> Result<RunConfig> {
    Ok(RunConfig {
        source: source(&args.instance),
        strategy: args.strategy,
        k_generators: args
            .k_generators
            .as_deref()
            .map(parse_k_generators)
            .transpose()?,
        shots: args.shots,
        seed: args.seed,
        format: args.instance.format,
        out: args.instance.out.clone(),
    })
}

fn dispatch(cli: Cli) -> Result<(Outcome, Option<PathBuf>)> {
    match cli.command {
        Command::Run(a) => {
            let cfg = run_config(&a)?;
            Ok((cmd_run(&cfg)?, cfg.out))
        }
        Command::Simplify(a) => {
            let cfg = run_config(&a)?;
            Ok((cmd_simplify(&cfg)?, cfg.out))
        }
        Command::Entangle(a) => Ok((cmd_entangle(&source(&a), a.format)?, a.out)),
        Command::Landauer(a) => {
            let cfg = LandauerConfig {
                n: a.n,
                beta_delta: a.beta_delta,
                n_beta_delta: a.n_beta_delta,
                p_init: a.p_init,
                mode: a.mode,
                format: a.format,
            };
            Ok((cmd_landauer(&cfg)?, a.out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = dispatch(cli).and_then(|(outcome, out)| {
        write_output(out.as_deref(), &outcome.report)?;
        Ok(outcome.exit_code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
