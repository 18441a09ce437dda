mod commands;
mod config;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{Config, Output};

#[derive(Parser, Debug)]
#[command(name = "sftkit", version, about = "Dimension groups, homology and functoriality checks for shifts of finite type")]
struct Cli {
    /// JSON file overriding the default caps and output format.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format; overrides the config file.
    #[arg(long, global = true, value_enum)]
    output: Option<Output>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    S,
    U,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    S,
    U,
    #[value(name = "s_star")]
    SStar,
    #[value(name = "u_star")]
    UStar,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LevelArg {
    Dimension,
    Homology,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structural predicates of a graph and its edge shift.
    Analyze { graph: PathBuf },
    /// The dimension group of an edge shift as a direct limit.
    Dimgroup {
        sft: PathBuf,
        #[arg(long, value_enum, default_value = "s")]
        side: SideArg,
    },
    /// The map a code induces on dimension groups.
    Induced {
        code: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// The fibre product of two codes with a common target, with its projections.
    Fibre { left: PathBuf, right: PathBuf },
    /// Homology of an s/u-bijective pair.
    Homology {
        pair: PathBuf,
        #[arg(long, value_enum, default_value = "s")]
        side: SideArg,
    },
    /// Checks the pullback identity on a commuting square.
    VerifySquare {
        square: PathBuf,
        #[arg(long, value_enum, default_value = "dimension")]
        level: LevelArg,
    },
    /// Bijectivity, covering properties and degree of a code.
    Degree { code: PathBuf },
    /// Builds the pullback cube over a square and checks each grid cell.
    Cube { square: PathBuf },
    /// Compares the homology isomorphisms of two triples over the same map.
    Naturality {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value = "s")]
        kind: KindArg,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut config = match &cli.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("sftkit: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
        },
        None => Config::default(),
    };
    if let Some(o) = cli.output {
        config.output = o;
    }
    let (doc, code) = match commands::run(&cli.command, &config) {
        Ok(outcome) => (outcome.document, if outcome.passed { 0 } else { 1 }),
        Err(e) => {
            eprintln!("sftkit: {e}");
            (commands::error_document(&e), e.exit_code())
        }
    };
    let text = match config.output {
        Output::Json => serde_json::to_string_pretty(&doc).expect("documents serialize"),
        Output::Text => render::text(&doc),
    };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
    ExitCode::from(code as u8)
}
