use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use metriforms_cli::{
    emit_report, evaluate, parse_report, parse_scenario, run_suite, Format, Quantity, RunOptions,
    Scenario, Suite,
};

/// Numerical verification of universal Pontryagin forms on spaces of metrics.
#[derive(Parser)]
#[command(name = "metriforms", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Input {
    /// Scenario JSON file, or `-` for stdin. Defaults to the built-in scenario.
    #[arg(long)]
    scenario: Option<String>,
    /// Grid points per axis (overrides the scenario).
    #[arg(long)]
    grid: Option<usize>,
    /// Seed for fields the scenario leaves out (overrides the scenario).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity checks of a scenario.
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave `wall_ms` at zero so repeated runs give identical bytes.
        #[arg(long)]
        no_timing: bool,
    },
    /// Compute one σ or μ value.
    Eval {
        #[command(flatten)]
        input: Input,
        /// sigma, sigma_general, sigma_simple, mu or mu_simple.
        #[arg(long, default_value = "sigma", value_parser = parse_quantity)]
        quantity: Quantity,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-render a saved JSON report.
    Report {
        /// Saved report, or `-` for stdin.
        input: String,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| format!("unknown suite `{s}` (expected all, algebra, jet, sigma, wp or dim6)"))
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
        .map_err(|e: metriforms_cli::report::UnknownFormat| e.to_string())
}

fn parse_quantity(s: &str) -> Result<Quantity, String> {
    Quantity::parse(s).ok_or_else(|| format!("unknown quantity `{s}`"))
}

fn read_source(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn load(input: &Input) -> anyhow::Result<Scenario> {
    let mut scenario = match &input.scenario {
        Some(path) => parse_scenario(&read_source(path)?)?,
        None => Scenario::default(),
    };
    if let Some(n) = input.grid {
        scenario.grid = n;
    }
    if let Some(seed) = input.seed {
        scenario.seed = seed;
    }
    scenario.validate()?;
    Ok(scenario)
}

fn write_out(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("METRIFORMS_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .with_context(|| format!("METRIFORMS_THREADS={value}"))?;
    if threads == 0 {
        bail!("METRIFORMS_THREADS must be positive");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

/// Exit status of a successful invocation, or an input error.
fn run(cli: Cli) -> anyhow::Result<u8> {
    configure_threads()?;
    match cli.command {
        Command::Check {
            input,
            suite,
            format,
            out,
            no_timing,
        } => {
            let scenario = load(&input)?;
            let report = run_suite(
                &scenario,
                RunOptions {
                    suite,
                    timing: !no_timing,
                },
            );
            write_out(out.as_deref(), &emit_report(&report, format))?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Eval {
            input,
            quantity,
            out,
        } => {
            let scenario = load(&input)?;
            let value = evaluate(&scenario, quantity)?;
            write_out(
                out.as_deref(),
                &(serde_json::to_string_pretty(&value)? + "\n"),
            )?;
            Ok(0)
        }
        Command::Report { input, format, out } => {
            let report = parse_report(&read_source(&input)?).context("parsing report")?;
            let bad = report.inconsistent_records();
            if !bad.is_empty() {
                bail!("report records disagree with their residuals: {bad:?}");
            }
            write_out(out.as_deref(), &emit_report(&report, format))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
