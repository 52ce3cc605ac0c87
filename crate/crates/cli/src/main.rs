use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use tqc_cli::{execute, parse_config, CliError, Kind, RunConfig};

/// Thermal quantum classifier simulations.
///
/// Writes a CSV result table to `--out`, or to stdout when no path is given
/// (the summary then goes to stderr).
#[derive(Debug, Parser)]
#[command(name = "tqc", version)]
struct Cli {
    #[arg(value_enum)]
    command: Kind,

    /// TOML config; defaults are used for anything it omits.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// CSV output path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Overrides the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Also write an SVG plot next to `--out`.
    #[arg(long, global = true)]
    svg: bool,
}

fn load(cli: &Cli) -> Result<(RunConfig, Option<String>), CliError> {
    let (config, source) = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            (parse_config(&text)?, Some(text))
        }
        None => (RunConfig::defaults(cli.command), None),
    };
    Ok((config.resolve(cli.command, cli.seed)?, source))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let (config, source) = load(cli)?;
    if cli.svg && cli.out.is_none() {
        return Err(CliError::Config("--svg needs --out".into()));
    }
    let pool = match cli.jobs {
        Some(0) => return Err(CliError::Config("--jobs must be >= 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    }
    .map_err(|e| CliError::Io(e.to_string()))?;
    let output = pool.install(|| execute(&config, source.as_deref()))?;

    let csv = output.table.to_csv_string();
    match &cli.out {
        Some(path) => {
            fs::write(path, csv)?;
            if cli.svg {
                fs::write(path.with_extension("svg"), output.plot.render())?;
            }
            let mut stdout = io::stdout().lock();
            for line in &output.summary {
                writeln!(stdout, "{line}")?;
            }
        }
        None => {
            io::stdout().lock().write_all(csv.as_bytes())?;
            let mut stderr = io::stderr().lock();
            for line in &output.summary {
                writeln!(stderr, "{line}")?;
            }
        }
    }
    match output.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
