//! Command-line front end: `stats`, `mine`, `design`, `evaluate`,
//! `compare-only` and `synth`.

pub mod commands;
pub mod config;
pub mod manifest;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use keymine_core::TiePolicy;

pub use commands::{Outcome, SynthKind, SynthSpec};
pub use config::{ConfigFile, Format, MinSupport, Overrides, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "keymine", version, about = "Corpus-driven two-hand keyboard layout design")]
pub struct Cli {
    /// TOML run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    /// Alphabet JSON file.
    #[arg(long)]
    pub alphabet: Option<PathBuf>,
    /// Corpus manifest: one text file path per line.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monograph, digraph and trigraph tables.
    Stats {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Frequent itemsets and strong rules.
    Mine {
        #[command(flatten)]
        input: InputArgs,
        /// Mine this transaction TSV instead of corpus digraphs.
        #[arg(long)]
        transactions: Option<PathBuf>,
        /// Absolute count (e.g. `2`) or fraction (e.g. `0.22`).
        #[arg(long)]
        min_support: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        min_confidence: Option<f64>,
    },
    /// Assign letters to hands and keys.
    Design {
        #[command(flatten)]
        input: InputArgs,
        /// Key geometry JSON; defaults to the built-in 60-position geometry.
        #[arg(long)]
        geometry: Option<PathBuf>,
        #[arg(long, value_parser = parse_tie_policy)]
        tie_policy: Option<TiePolicy>,
        /// Shorthand for `--tie-policy balanced-ties`.
        #[arg(long, conflicts_with = "tie_policy")]
        balanced_ties: bool,
        /// Name recorded in the layout file.
        #[arg(long)]
        name: Option<String>,
        /// Put alphabet letters absent from the corpus on free shift keys.
        #[arg(long)]
        place_unseen: bool,
    },
    /// Score layouts against the corpus and compare them.
    Evaluate {
        #[command(flatten)]
        input: InputArgs,
        /// Geometry for layout files without a `geometry_ref`.
        #[arg(long)]
        geometry: Option<PathBuf>,
        #[arg(required = true)]
        layouts: Vec<PathBuf>,
    },
    /// Rank previously written reports.
    CompareOnly {
        #[arg(required = true)]
        reports: Vec<PathBuf>,
    },
    /// Write a seeded synthetic corpus.
    Synth {
        #[arg(long)]
        alphabet: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "markov")]
        kind: SynthKind,
        /// Number of non-space characters to emit.
        #[arg(long, default_value_t = 50_000)]
        letters: usize,
        #[arg(long, default_value_t = 0.02)]
        noise: f64,
        #[arg(long, default_value_t = 0.15)]
        space: f64,
        /// Probability of switching group after each letter (split-groups).
        #[arg(long, default_value_t = 0.95)]
        cross: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_tie_policy(s: &str) -> Result<TiePolicy, String> {
    match s {
        "paper-literal" => Ok(TiePolicy::PaperLiteral),
        "balanced-ties" => Ok(TiePolicy::BalancedTies),
        other => Err(format!("unknown tie policy {other:?} (paper-literal | balanced-ties)")),
    }
}

/// Resolves configuration and runs the selected command.
pub fn run(cli: Cli) -> Result<Outcome> {
    let file = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    let mut o = Overrides {
        output_dir: cli.output_dir,
        format: cli.format,
        ..Default::default()
    };
    let set_input = |o: &mut Overrides, input: &InputArgs| {
        o.alphabet = input.alphabet.clone();
        o.corpus = input.corpus.clone();
    };
    match cli.command {
        Command::Stats { input } => {
            set_input(&mut o, &input);
            commands::cmd_stats(&RunConfig::resolve(file, o)?)
        }
        Command::Mine {
            input,
            transactions,
            min_support,
            min_confidence,
        } => {
            set_input(&mut o, &input);
            o.min_support = min_support;
            o.min_confidence = min_confidence;
            commands::cmd_mine(&RunConfig::resolve(file, o)?, transactions.as_deref())
        }
        Command::Design {
            input,
            geometry,
            tie_policy,
            balanced_ties,
            name,
            place_unseen,
        } => {
            set_input(&mut o, &input);
            o.geometry = geometry;
            o.tie_policy = if balanced_ties { Some(TiePolicy::BalancedTies) } else { tie_policy };
            o.name = name;
            commands::cmd_design(&RunConfig::resolve(file, o)?, place_unseen)
        }
        Command::Evaluate {
            input,
            geometry,
            layouts,
        } => {
            set_input(&mut o, &input);
            o.geometry = geometry;
            commands::cmd_evaluate(&RunConfig::resolve(file, o)?, &layouts)
        }
        Command::CompareOnly { reports } => {
            commands::cmd_compare_only(&RunConfig::resolve(file, o)?, &reports)
        }
        Command::Synth {
            alphabet,
            seed,
            kind,
            letters,
            noise,
            space,
            cross,
            out,
        } => {
            o.alphabet = alphabet;
            o.seed = seed;
            let spec = SynthSpec {
                kind,
                letters,
                noise,
                space,
                cross,
                out,
            };
            commands::cmd_synth(&RunConfig::resolve(file, o)?, &spec)
        }
    }
}
