//! `spelab`: solve, verify and inspect finite perfect-information games.

mod commands;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use output::Format;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "spelab",
    version,
    about = "Exact subgame-perfect equilibrium analysis"
)]
pub struct Cli {
    /// Output layout: human-readable text or `key = value` lines.
    #[arg(long, value_enum, global = true, default_value = "text")]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Pure,
    Universal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieBreakArg {
    First,
    Last,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    ZeroSum,
    FixedSum,
    NoIndifference,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Backward induction: one pure SPE, or the universal argmax-mixing profile.
    Solve {
        /// Game file, or `-` for stdin.
        game: PathBuf,
        #[arg(long, value_enum, default_value = "pure")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "first")]
        tie_break: TieBreakArg,
        /// List the plays instead of the profile.
        #[arg(long)]
        paths: bool,
    },
    /// Check whether a profile is a subgame-perfect equilibrium.
    Verify {
        game: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        /// Also run the brute-force unilateral-deviation oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// List the pure SPE of a game.
    EnumerateSpe {
        game: PathBuf,
        /// List distinct equilibrium plays instead of profiles.
        #[arg(long)]
        paths_only: bool,
        /// Show only the first N profiles in profile order.
        #[arg(long, value_name = "N")]
        limit: Option<u64>,
    },
    /// Check a structural property of the payoffs.
    Check {
        game: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
    },
    /// Check whether every selection of an SPE profile is an SPE.
    NoMixing {
        game: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        /// Require only that some selection is an SPE.
        #[arg(long)]
        weak: bool,
    },
    /// Check whether all pure SPE give the same payoffs.
    Invariance { game: PathBuf },
    /// Built-in games.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Write the game as a Graphviz digraph.
    ExportDot { game: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    /// List the available names.
    List,
    /// Write a corpus game in the game file format.
    Emit {
        name: String,
        /// Bargaining grid size or random tree depth.
        #[arg(long)]
        param: Option<u64>,
        /// Seed for random games.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok((out, holds)) => {
            print!("{out}");
            ExitCode::from(if holds { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
