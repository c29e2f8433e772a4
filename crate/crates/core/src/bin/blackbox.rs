use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blackbox::harness::{
    emit_report, list_scenarios, load_config, render_report, run_scenario, Format, HarnessError,
    OUTPUT_DIR_ENV,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "blackbox", version, about = "Run observer/black-box scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config and write its report.
    Run {
        config: PathBuf,
        /// Override the config's root seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Report file; defaults to the config's `output`, then the output directory, then stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Report directory used when no output file is given.
        #[arg(long, env = OUTPUT_DIR_ENV)]
        output_dir: Option<PathBuf>,
        #[arg(long, default_value = "json-lines")]
        format: Format,
    },
    /// Check a scenario config without running it.
    Validate { config: PathBuf },
    /// List scenario identifiers.
    ListScenarios,
}

fn fail(err: &HarnessError) -> ExitCode {
    eprintln!("error [{}]: {err}", err.code());
    ExitCode::from(err.exit_code() as u8)
}

fn run(
    config: &Path,
    seed: Option<u64>,
    output: Option<PathBuf>,
    output_dir: Option<PathBuf>,
    format: Format,
) -> Result<bool, HarnessError> {
    let mut cfg = load_config(config)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let report = run_scenario(&cfg)?;
    let target = output.or_else(|| cfg.output.clone()).or_else(|| {
        output_dir.map(|dir| dir.join(format!("{}-{}.{}", cfg.id(), cfg.seed, format.extension())))
    });
    match target {
        Some(path) => {
            emit_report(&report, format, &path)?;
            eprintln!(
                "{}: {} ({})",
                cfg.id(),
                if report.passed() { "PASS" } else { "FAIL" },
                path.display()
            );
        }
        None => {
            let bytes = render_report(&report, format);
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|source| HarnessError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
        }
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            seed,
            output,
            output_dir,
            format,
        } => match run(&config, seed, output, output_dir, format) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => fail(&e),
        },
        Command::Validate { config } => match load_config(&config) {
            Ok(cfg) => {
                println!("ok {}", cfg.id());
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
        Command::ListScenarios => {
            for (id, about) in list_scenarios() {
                println!("{id:<24}{about}");
            }
            ExitCode::SUCCESS
        }
    }
}
