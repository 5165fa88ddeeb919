use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lyricmood_core::MoodLabel;

use crate::output::Format;
use crate::service::DEFAULT_MAX_BODY_BYTES;

/// Classify song lyrics as happy or sad with naive Bayes.
#[derive(Debug, Parser)]
#[command(name = "lyricmood", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for splitting, fold assignment and synthesis; overrides any
    /// config file seed. Defaults to 42.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Suppress progress and status messages on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Label distribution, decade distribution and top terms per class.
    Stats {
        corpus: PathBuf,
        #[arg(long, default_value_t = 10)]
        top_terms: usize,
        /// Only list top terms for this class.
        #[arg(long)]
        label: Option<MoodLabel>,
        /// Porter-stem terms before counting.
        #[arg(long)]
        stem: bool,
        /// Drop songs whose English token share is at or below this value.
        #[arg(long)]
        english_threshold: Option<f64>,
    },
    /// Train a model on a corpus and write it to a model file.
    Train {
        corpus: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overwrite an existing model file.
        #[arg(long)]
        force: bool,
    },
    /// Evaluate a model on a labeled corpus.
    Eval {
        corpus: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Write the ROC curve as CSV.
        #[arg(long)]
        roc_out: Option<PathBuf>,
    },
    /// Stratified k-fold cross-validation of one configuration.
    Cv {
        corpus: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's `folds`.
        #[arg(long)]
        folds: Option<usize>,
        /// Write per-fold results as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-validate every combination of a grid file.
    Gridsearch {
        corpus: PathBuf,
        #[arg(long)]
        grid: PathBuf,
        /// Results CSV.
        #[arg(long)]
        out: PathBuf,
        /// Best configuration, readable by `train`. Defaults to the results
        /// path with extension `best.conf`.
        #[arg(long)]
        best_out: Option<PathBuf>,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Predict moods for documents read from a file or stdin, separated by
    /// lines containing only `---`.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: Option<PathBuf>,
        /// One JSON object per line.
        #[arg(long)]
        json: bool,
    },
    /// Generate a synthetic labeled corpus.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// 0 gives identical class distributions, 1 disjoint vocabularies.
        #[arg(long, default_value_t = 0.7)]
        separation: f64,
    },
    /// Split a corpus into training and validation files.
    Split {
        corpus: PathBuf,
        #[arg(long)]
        train_count: usize,
        #[arg(long)]
        validation_count: usize,
        /// Equal numbers of happy and sad validation songs.
        #[arg(long)]
        balanced: bool,
        #[arg(long)]
        train_out: PathBuf,
        #[arg(long)]
        validation_out: PathBuf,
    },
    /// Serve predictions over HTTP.
    Serve {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = DEFAULT_MAX_BODY_BYTES)]
        max_body_bytes: usize,
    },
}
