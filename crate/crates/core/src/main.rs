use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use tambarize::cli::{run, Command, Format, JobError, JobSpec, EXIT_MALFORMED};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    Table,
    Verify,
    Adjunction,
    Crossed,
    Witt,
    Marks,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

/// Tambara functors of labeled G-sets: ring tables, axiom checks, adjunctions, crossed
/// Burnside and Witt-Burnside comparisons, tables of marks.
#[derive(Debug, Parser)]
#[command(name = "tambarize", version)]
struct Cli {
    command: CommandArg,
    /// `cyclic:n`, `dihedral:n`, `symmetric:n` or a JSON group spec.
    #[arg(long)]
    group: String,
    /// Builtin monoid (`trivial`, `bool`, `nil`, `cyclic:n`, `truncated:n`, optional `/sign`) or JSON.
    #[arg(long, default_value = "trivial")]
    monoid: String,
    /// `trivial`, `fixed_point`, `ell`, JSON; `table` also takes `crossed` and `strings`.
    #[arg(long, default_value = "trivial")]
    functor: String,
    /// `G`, `e`, `class:i` or a comma-separated list of generators.
    #[arg(long, default_value = "G")]
    level: String,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        CommandArg::Table => Command::Table,
        CommandArg::Verify => Command::Verify,
        CommandArg::Adjunction => Command::Adjunction,
        CommandArg::Crossed => Command::Crossed,
        CommandArg::Witt => Command::Witt,
        CommandArg::Marks => Command::Marks,
    };
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    let spec = JobSpec {
        command,
        group: cli.group,
        monoid: cli.monoid,
        functor: cli.functor,
        level: cli.level,
        seed: cli.seed,
        samples: cli.samples,
        format,
    };
    let output = match run(&spec) {
        Ok(o) => o,
        Err(e @ JobError::Malformed(_)) => {
            eprintln!("tambarize: {e}");
            return ExitCode::from(EXIT_MALFORMED as u8);
        }
        Err(e) => {
            eprintln!("tambarize: {e}");
            return ExitCode::from(1);
        }
    };
    let rendered = output.render(format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("tambarize: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{rendered}"),
    }
    if output.violations > 0 {
        eprintln!("tambarize: {} violations", output.violations);
    }
    ExitCode::from(output.exit_code() as u8)
}
