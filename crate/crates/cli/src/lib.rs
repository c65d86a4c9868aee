//! Library side of the `pdt` binary: argument types, subcommand
//! implementations and the built-in reference checks.

pub mod args;
pub mod commands;
pub mod error;
pub mod repro;

use args::{Cli, Command};
use error::CliError;

/// Dispatch a parsed command line.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Etc { sequence, trace } => commands::cmd_etc(sequence, *trace, format),
        Command::Impurity { labels, measure } => commands::cmd_impurity(labels, *measure, format),
        Command::Train(train_args) => commands::cmd_train(train_args, format),
        Command::ForestTrain(forest_args) => commands::cmd_forest_train(forest_args, format),
        Command::Evaluate {
            model,
            data,
            label_col,
        } => commands::cmd_evaluate(model, data, label_col, format),
        Command::Predict { model, features } => commands::cmd_predict(model, features, format),
        Command::Reproduce(repro_args) => commands::cmd_reproduce(repro_args, format),
    }
}
