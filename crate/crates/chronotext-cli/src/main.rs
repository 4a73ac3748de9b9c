//! `chronotext` — chronological text mining pipeline.
//!
//! Reads a dated corpus, builds a filtered lexical table, runs the
//! factorial and hypergeometric analyses, and writes CSV tables, SVG
//! maps, and per-stage manifests into an output directory.

mod config;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::pipeline::Stage;

const CONFIG_HELP: &str = "\
CONFIG FILE KEYS (one `key = value` per line; `#` starts a comment):
  corpus           corpus file path (required; no default)
  format           jsonl | csv | tsv                 [default: jsonl]
  stopwords        stopword file, one word per line  [default: built-in English list]
  min_doc_count    least documents per kept word     [default: 5]
  min_total_count  least occurrences per kept word   [default: 10]
  threshold_mode   both | either                     [default: both]
  axes             factorial axes to retain          [default: 2]
  periods          periods for segmentation          [default: 3]
  replications     permutation replications (>= 99)  [default: 999]
  seed             permutation random seed           [default: 42]
  alpha            significance level in (0, 1)      [default: 0.05]
  out              output directory                  [default: out]

Command-line flags override config-file values.

EXIT CODES:
  0  success
  2  configuration error
  3  data error (unreadable or malformed input, missing upstream artifact)
  4  analysis error (degenerate or invalid analysis input)";

/// Chronological text mining: how a dated corpus's vocabulary evolves.
#[derive(Parser)]
#[command(name = "chronotext", version, after_help = CONFIG_HELP)]
struct Cli {
    /// Config file with `key = value` lines
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Corpus file to analyse (required; no default)
    #[arg(long, global = true, value_name = "FILE")]
    corpus: Option<PathBuf>,

    /// Stopword file, one word per line [default: built-in English list]
    #[arg(long, global = true, value_name = "FILE")]
    stopwords: Option<PathBuf>,

    /// Factorial axes to retain [default: 2]
    #[arg(long, global = true, value_name = "N")]
    axes: Option<usize>,

    /// Periods for segmentation [default: 3]
    #[arg(long, global = true, value_name = "K")]
    periods: Option<usize>,

    /// Permutation replications, at least 99 [default: 999]
    #[arg(long, global = true, value_name = "B")]
    replications: Option<usize>,

    /// Permutation random seed [default: 42]
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,

    /// Significance level in (0, 1) [default: 0.05]
    #[arg(long, global = true, value_name = "ALPHA")]
    alpha: Option<f64>,

    /// Output directory [default: out]
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: CommandKind,
}

#[derive(Subcommand, Clone, Copy)]
enum CommandKind {
    /// Load and tokenize the corpus; write vocabulary, table, exclusions
    Ingest,
    /// Correspondence analysis of the lexical table
    Ca,
    /// Joint factor analysis of word frequencies and publication year
    Mfact,
    /// Permutation test of the leading joint eigenvalue
    Permtest,
    /// Segment the year trajectory into periods
    Periods,
    /// Characteristic words, increments, and chronological words per period
    Characterize,
    /// Rank documents whose vocabulary runs ahead of their year
    Pioneers,
    /// Corpus summary tables and SVG maps
    Report,
    /// Run every stage in dependency order
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = config::Overrides {
        corpus: cli.corpus,
        stopwords: cli.stopwords,
        axes: cli.axes,
        periods: cli.periods,
        replications: cli.replications,
        seed: cli.seed,
        alpha: cli.alpha,
        out: cli.out,
    };
    let project = match config::load(cli.config.as_deref(), &overrides) {
        Ok(project) => project,
        Err(error) => {
            eprintln!("configuration error: {error}");
            return ExitCode::from(2);
        }
    };
    let outcome = match cli.command {
        CommandKind::All => pipeline::run_all(&project),
        CommandKind::Ingest => pipeline::run(Stage::Ingest, &project),
        CommandKind::Ca => pipeline::run(Stage::Ca, &project),
        CommandKind::Mfact => pipeline::run(Stage::Mfact, &project),
        CommandKind::Permtest => pipeline::run(Stage::Permtest, &project),
        CommandKind::Periods => pipeline::run(Stage::Periods, &project),
        CommandKind::Characterize => pipeline::run(Stage::Characterize, &project),
        CommandKind::Pioneers => pipeline::run(Stage::Pioneers, &project),
        CommandKind::Report => pipeline::run(Stage::Report, &project),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
