//! `gsnkit`: check, format, instantiate, compose and trace GSN arguments.

mod case;
mod check;
mod export;
mod input;
mod instantiate;
mod output;
mod trace;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use output::{Failure, Outcome};

#[derive(Debug, Parser)]
#[command(name = "gsnkit", version, about = "Goal Structuring Notation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComposeFormat {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dot,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate `.gsn`, `.case`, `.trc` and `.bindings` files.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print a `.gsn` file in canonical form.
    Fmt {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// List files that are not canonical instead of printing them.
        #[arg(long)]
        check: bool,
        #[arg(long, conflicts_with = "check")]
        out: Option<PathBuf>,
    },
    /// Instantiate a pattern with a bindings file.
    Instantiate {
        pattern: PathBuf,
        #[arg(long)]
        bindings: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Pattern module to use when the file holds several.
        #[arg(long)]
        module: Option<String>,
        /// Leave unbound placeholders in place instead of failing.
        #[arg(long)]
        partial: bool,
    },
    /// Compose the modules of a `.case` manifest into one argument.
    Compose {
        case: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: ComposeFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the module-level shape of a `.case` manifest.
    #[command(name = "arch-check")]
    ArchCheck {
        case: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Coverage of a trace model, or the impact of invalidating evidence.
    Trace {
        /// A `.trc` file or a `.case` manifest naming one.
        manifest: PathBuf,
        #[arg(long, value_name = "EVIDENCE_ID")]
        impact: Option<String>,
        /// Compare measured values against stated targets.
        #[arg(long, conflicts_with = "impact")]
        strict: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Render a `.gsn` file or a composed `.case` as Graphviz or JSON.
    Export {
        path: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the shipped patterns and sample cases.
    Catalog {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Check { paths, format } => check::check(&paths, format),
        Command::Fmt { paths, check, out } => check::fmt(&paths, check, out.as_deref()),
        Command::Instantiate {
            pattern,
            bindings,
            out,
            module,
            partial,
        } => instantiate::run(
            &pattern,
            &bindings,
            out.as_deref(),
            module.as_deref(),
            partial,
        ),
        Command::Compose { case, format, out } => case::compose(&case, format, out.as_deref()),
        Command::ArchCheck { case, format } => case::arch_check(&case, format),
        Command::Trace {
            manifest,
            impact,
            strict,
            format,
        } => trace::run(&manifest, impact.as_deref(), strict, format),
        Command::Export { path, format, out } => export::run(&path, format, out.as_deref()),
        Command::Catalog { format } => case::catalog(format),
    }
}

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    output::finish(outcome)
}
