use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use uhfbench::cli::{self, Command, Overrides, RunOptions, EXIT_USAGE};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Certify embeddings, towers, witnesses, Bratteli diagrams and K-groups
/// described by a JSON spec.
#[derive(Debug, Parser)]
#[command(name = "uhfbench", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Spec file, or `builtin:NAME` for a shipped example.
    #[arg(long)]
    spec: String,
    #[arg(long)]
    horizon: Option<usize>,
    /// Exact rational, e.g. `1/100`.
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    stage_cap: Option<usize>,
    #[arg(long)]
    word_len: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Record per-task wall-clock times (reports are then not reproducible).
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    let options = RunOptions {
        overrides: Overrides {
            horizon: args.horizon,
            epsilon: args.epsilon.clone(),
            stage_cap: args.stage_cap,
            word_len: args.word_len,
        },
        timing: args.timing,
    };
    let report = cli::load_spec(&args.spec).and_then(|spec| cli::run(args.command, &spec, &options));
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("uhfbench: {e}");
            return ExitCode::from(cli::error_exit_code(&e) as u8);
        }
    };
    let text = match args.format {
        Format::Json => report.to_json(),
        Format::Text => cli::render_text(&report),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("uhfbench: {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code as u8)
}
