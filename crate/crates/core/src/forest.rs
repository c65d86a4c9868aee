//! Ensembles of decision trees combined by majority vote.
//!
//! The permutation mode trains every tree on the *full* dataset, each under
//! a different seeded ordering of the instances. No rows or features are
//! dropped; tree diversity comes entirely from the order sensitivity of the
//! structural impurity. With an order-free impurity the same construction
//! collapses to identical trees, which is what the bootstrap mode is for:
//! the classical bagging baseline with per-tree resampling and a random
//! feature subset.
//!
//! Every random draw derives from a stream keyed by `(seed, tree_index)`, so
//! results do not depend on training order or parallelism.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::tree::{self, DecisionTree, TrainConfig};
use crate::Scalar;

/// Document schema version written by [`ForestModel::serialize`].
pub const FOREST_FORMAT_VERSION: u32 = 1;

/// How each tree's training set is derived from the dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaggingMode {
    /// Tree `i` trains on a seeded permutation of all instances.
    Permutation,
    /// Tree `i` trains on `n` instances drawn with replacement and a random
    /// subset of `ceil(sqrt(d))` features.
    Bootstrap,
}

/// Ensemble training parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig<F> {
    pub n_estimators: usize,
    pub seed: u64,
    pub tree_config: TrainConfig<F>,
    pub bagging_mode: BaggingMode,
}

/// A trained forest plus everything needed to replay its construction:
/// the config, and per tree the row order (or bootstrap index multiset) and,
/// in bootstrap mode, the feature subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel<F> {
    pub config: ForestConfig<F>,
    pub trees: Vec<DecisionTree<F>>,
    pub per_tree_orders: Vec<Vec<usize>>,
    pub per_tree_features: Option<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
struct ForestDocument<F> {
    model: String,
    version: u32,
    #[serde(flatten)]
    forest: ForestModel<F>,
}

/// The per-tree random stream. Keyed by `(seed, tree_index)` only, never by
/// anything ambient, so tree `i` draws the same values no matter when or
/// where it is trained.
fn tree_rng(seed: u64, tree_index: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(tree_index as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// The uniform-random instance order tree `tree_index` would train on.
pub fn permutation_order(n: usize, tree_index: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut tree_rng(seed, tree_index));
    order
}

/// Reorder the dataset the way tree `tree_index` of a permutation forest
/// sees it. Features and labels move together; the instance multiset is
/// unchanged.
pub fn permute<F: Scalar>(dataset: &Dataset<F>, tree_index: usize, seed: u64) -> Dataset<F> {
    dataset.select(&permutation_order(dataset.n_instances(), tree_index, seed))
}

fn bootstrap_draw<F: Scalar>(
    dataset: &Dataset<F>,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, Vec<usize>) {
    let n = dataset.n_instances();
    let d = dataset.n_features();
    let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let k = (d as f64).sqrt().ceil() as usize;
    let mut features = rand::seq::index::sample(rng, d, k.min(d)).into_vec();
    features.sort_unstable();
    (rows, features)
}

/// Train `n_estimators` trees. Tree `i` depends only on `(seed, i)` and the
/// dataset, so the model is reproducible regardless of parallelism; trees
/// land in index order.
pub fn fit_forest<F: Scalar>(
    dataset: &Dataset<F>,
    config: &ForestConfig<F>,
) -> Result<ForestModel<F>> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if config.n_estimators == 0 {
        return Err(Error::InvalidConfig(
            "n_estimators must be at least 1".into(),
        ));
    }

    type Fitted<F> = (DecisionTree<F>, Vec<usize>, Option<Vec<usize>>);
    let fitted: Vec<Fitted<F>> = (0..config.n_estimators)
        .into_par_iter()
        .map(|i| -> Result<_> {
            match config.bagging_mode {
                BaggingMode::Permutation => {
                    let order = permutation_order(dataset.n_instances(), i, config.seed);
                    let tree = tree::fit(&dataset.select(&order), &config.tree_config)?;
                    Ok((tree, order, None))
                }
                BaggingMode::Bootstrap => {
                    let mut rng = tree_rng(config.seed, i);
                    let (rows, features) = bootstrap_draw(dataset, &mut rng);
                    let tree = tree::fit_with_features(
                        &dataset.select(&rows),
                        &config.tree_config,
                        &features,
                    )?;
                    Ok((tree, rows, Some(features)))
                }
            }
        })
        .collect::<Result<_>>()?;

    let mut trees = Vec::with_capacity(fitted.len());
    let mut per_tree_orders = Vec::with_capacity(fitted.len());
    let mut feature_subsets = Vec::with_capacity(fitted.len());
    for (tree, order, features) in fitted {
        trees.push(tree);
        per_tree_orders.push(order);
        if let Some(f) = features {
            feature_subsets.push(f);
        }
    }
    let per_tree_features = match config.bagging_mode {
        BaggingMode::Permutation => None,
        BaggingMode::Bootstrap => Some(feature_subsets),
    };
    Ok(ForestModel {
        config: *config,
        trees,
        per_tree_orders,
        per_tree_features,
    })
}

impl<F: Scalar> ForestModel<F> {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn class_names(&self) -> &[String] {
        self.trees[0].class_names.as_slice()
    }

    /// Every tree votes; the class with the most votes wins and vote ties
    /// go to the smallest class id.
    pub fn predict_majority(&self, instance: &[F]) -> Result<u32> {
        let mut votes = vec![0usize; self.trees[0].class_names.len()];
        for tree in &self.trees {
            votes[tree.predict(instance)? as usize] += 1;
        }
        Ok(votes
            .iter()
            .enumerate()
            .max_by_key(|&(i, &v)| (v, std::cmp::Reverse(i)))
            .map(|(i, _)| i as u32)
            .expect("at least one class"))
    }

    pub fn predict_majority_name(&self, instance: &[F]) -> Result<&str> {
        let class = self.predict_majority(instance)?;
        Ok(&self.trees[0].class_names[class as usize])
    }

    /// Versioned, self-describing JSON document containing the config, the
    /// per-tree orders and every tree.
    pub fn serialize(&self) -> String {
        let doc = ForestDocument {
            model: "forest".to_string(),
            version: FOREST_FORMAT_VERSION,
            forest: self.clone(),
        };
        let mut json = serde_json::to_string_pretty(&doc).expect("forest serializes");
        json.push('\n');
        json
    }

    pub fn deserialize(document: &str) -> Result<Self> {
        let doc: ForestDocument<F> = serde_json::from_str(document)?;
        if doc.model != "forest" {
            return Err(Error::WrongModelKind {
                expected: "forest",
                found: doc.model,
            });
        }
        if doc.version != FOREST_FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(doc.version));
        }
        Ok(doc.forest)
    }
}
