//! Permutation decision trees and forests built on the effort-to-compress
//! structural impurity, with Shannon-entropy and Gini baselines.
//!
//! The crate is organised around the data flow of a training run:
//!
//! - [`etc`]: the effort-to-compress complexity of a symbol sequence,
//!   computed by non-sequential recursive pair substitution.
//! - [`impurity`]: node impurity measures (entropy, Gini, structural) and
//!   split gain over ordered label sequences.
//! - [`data`]: datasets with significant row order, CSV ingestion, seeded
//!   splits and reorderings, evaluation metrics.
//! - [`tree`]: binary threshold tree induction, prediction, model documents
//!   and DOT rendering.
//! - [`forest`]: permutation-bagged ensembles plus a bootstrap baseline.
//!
//! All numeric code is generic over the feature scalar via [`Scalar`]
//! (satisfied by `f32` and `f64`); the [`Dataset64`]-style aliases fix the
//! default double-precision instantiation used by the CLI.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub mod data;
pub mod error;
pub mod etc;
pub mod forest;
pub mod impurity;
pub mod tree;

pub use error::{Error, Result};

/// The scalar type features, thresholds and impurity values are computed
/// in: a serialisable IEEE float.
pub trait Scalar:
    Float + FromPrimitive + Debug + Display + Serialize + DeserializeOwned + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + Debug + Display + Serialize + DeserializeOwned + Send + Sync + 'static
{
}

/// Double-precision instantiations used by the CLI and most callers.
pub type Dataset64 = data::Dataset<f64>;
pub type TrainConfig64 = tree::TrainConfig<f64>;
pub type DecisionTree64 = tree::DecisionTree<f64>;
pub type ForestConfig64 = forest::ForestConfig<f64>;
pub type ForestModel64 = forest::ForestModel<f64>;

/// Either kind of persisted model.
#[derive(Debug, Clone, PartialEq)]
pub enum Model<F> {
    Tree(tree::DecisionTree<F>),
    Forest(forest::ForestModel<F>),
}

impl<F: Scalar> Model<F> {
    /// Load a model document of either kind, dispatching on its `model` tag.
    pub fn deserialize(document: &str) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct Probe {
            model: String,
        }
        let probe: Probe = serde_json::from_str(document)?;
        match probe.model.as_str() {
            "tree" => Ok(Model::Tree(tree::DecisionTree::deserialize(document)?)),
            "forest" => Ok(Model::Forest(forest::ForestModel::deserialize(document)?)),
            other => Err(Error::WrongModelKind {
                expected: "tree or forest",
                found: other.to_string(),
            }),
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            Model::Tree(t) => t.n_features,
            Model::Forest(f) => f.trees[0].n_features,
        }
    }

    pub fn class_names(&self) -> &[String] {
        match self {
            Model::Tree(t) => &t.class_names,
            Model::Forest(f) => f.class_names(),
        }
    }

    pub fn predict(&self, instance: &[F]) -> Result<u32> {
        match self {
            Model::Tree(t) => t.predict(instance),
            Model::Forest(f) => f.predict_majority(instance),
        }
    }
}
