//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pdt::impurity::ImpurityKind;

#[derive(Debug, Parser)]
#[command(
    name = "pdt",
    version,
    about = "Permutation decision trees and forests with a compression-based impurity"
)]
pub struct Cli {
    /// Output format for command results.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Effort-to-compress complexity of a symbol sequence.
    Etc {
        /// Comma-separated non-negative integer symbols, e.g. "0,0,0,1,1".
        sequence: String,
        /// Print every substitution step.
        #[arg(long)]
        trace: bool,
    },

    /// Impurity measures of a class-label sequence.
    Impurity {
        /// Comma-separated non-negative integer labels, e.g. "1,2,1,2".
        labels: String,
        /// Which measure to print.
        #[arg(long, value_enum, default_value_t = MeasureArg::All)]
        measure: MeasureArg,
    },

    /// Train a decision tree and write its model document.
    Train(TrainArgs),

    /// Train a forest and write its model document.
    ForestTrain(ForestTrainArgs),

    /// Evaluate a model document against a labelled CSV dataset.
    Evaluate {
        /// Model document (tree or forest).
        #[arg(long)]
        model: PathBuf,
        /// CSV dataset with a header row.
        #[arg(long)]
        data: PathBuf,
        /// Label column name (or index if no header matches).
        #[arg(long, default_value = "label")]
        label_col: String,
    },

    /// Predict the class of a single instance.
    Predict {
        /// Model document (tree or forest).
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated feature values, e.g. "1,3".
        #[arg(long)]
        features: String,
    },

    /// Re-run the built-in reference checks and the benchmark table.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Etc,
    Entropy,
    Gini,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ImpurityArg {
    /// Structural impurity (effort-to-compress); order-sensitive.
    Etc,
    /// Shannon entropy in bits.
    Entropy,
    /// Gini impurity.
    Gini,
}

impl From<ImpurityArg> for ImpurityKind {
    fn from(arg: ImpurityArg) -> Self {
        match arg {
            ImpurityArg::Etc => ImpurityKind::StructuralEtc,
            ImpurityArg::Entropy => ImpurityKind::ShannonEntropy,
            ImpurityArg::Gini => ImpurityKind::Gini,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Every tree trains on a seeded permutation of all instances.
    Permutation,
    /// Classical bagging: per-tree bootstrap sample and feature subset.
    Bootstrap,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// CSV dataset with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Label column name (or index if no header matches).
    #[arg(long, default_value = "label")]
    pub label_col: String,
    #[arg(long, value_enum, default_value_t = ImpurityArg::Etc)]
    pub impurity: ImpurityArg,
    #[arg(long, default_value_t = 10)]
    pub max_depth: usize,
    /// A node splits only if the best gain strictly exceeds this.
    #[arg(long, default_value_t = 0.0)]
    pub min_gain: f64,
    /// Reorder instances by a permutation file of comma-separated 1-based
    /// ids before training.
    #[arg(long, conflicts_with = "seed")]
    pub order: Option<PathBuf>,
    /// Reorder instances by a seeded random permutation before training.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Where to write the model document.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a DOT rendering of the tree.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ForestTrainArgs {
    /// CSV dataset with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Label column name (or index if no header matches).
    #[arg(long, default_value = "label")]
    pub label_col: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Permutation)]
    pub mode: ModeArg,
    #[arg(long)]
    pub n_estimators: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ImpurityArg::Etc)]
    pub impurity: ImpurityArg,
    #[arg(long, default_value_t = 10)]
    pub max_depth: usize,
    /// A node splits only if the best gain strictly exceeds this.
    #[arg(long, default_value_t = 0.0)]
    pub min_gain: f64,
    /// Where to write the model document.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhatArg {
    /// Impurity catalog of five reference binary sequences.
    #[value(name = "table1")]
    Table1,
    /// Impurity of the five reference orderings of the toy dataset.
    #[value(name = "table3")]
    Table3,
    /// The five reference trees, checked structurally and against the
    /// committed DOT goldens.
    Figures,
    /// Forest benchmark over the six public datasets.
    #[value(name = "table4")]
    Table4,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Which reference artifact to recompute.
    #[arg(long, value_enum)]
    pub what: WhatArg,
    /// Dataset directory for the benchmark table; falls back to the
    /// ETC_FOREST_DATA_DIR environment variable, then "datasets".
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    /// Seeded split repetitions per dataset.
    #[arg(long, default_value_t = 5)]
    pub reps: u64,
    /// Base seed for splits and forests.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Stratify the train/test splits by class.
    #[arg(long)]
    pub stratify: bool,
}
