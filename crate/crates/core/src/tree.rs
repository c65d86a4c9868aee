//! Binary threshold decision trees trained on an ordered dataset.
//!
//! Training follows the usual greedy recursion: score every candidate
//! `(feature, threshold)` split of the node, keep the one with the highest
//! gain, recurse into both children. What makes the tree order-sensitive is
//! the impurity choice: with [`ImpurityKind::StructuralEtc`] the children
//! inherit the parent's instance order, their label sequences are scored by
//! effort-to-compress, and permuting the training rows can change which
//! split wins. With entropy or Gini the same procedure reduces to ordinary
//! order-free tree induction.
//!
//! With the structural measure, candidate weights (`sum of |child| * etc`)
//! are integers, so equal-gain ties are detected exactly and broken by the
//! lower feature index, then the lower threshold.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::etc::EtcWorkspace;
use crate::impurity::{entropy_from_counts, gini_from_counts, ImpurityKind};
use crate::Scalar;

/// Document schema version written by [`DecisionTree::serialize`].
pub const TREE_FORMAT_VERSION: u32 = 1;

/// Tie-breaking policy for equal-gain splits. A single policy exists; it is
/// recorded in model documents so that a future change stays detectable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Prefer the lower feature index, then the lower threshold.
    #[default]
    FeatureThenThreshold,
}

/// Training-time parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig<F> {
    pub impurity_kind: ImpurityKind,
    /// Maximum number of split levels above a leaf; must be at least 1.
    pub max_depth: usize,
    /// A node splits only if the best gain strictly exceeds this.
    pub min_gain: F,
    #[serde(default)]
    pub tie_break: TieBreak,
}

impl<F: Scalar> TrainConfig<F> {
    pub fn new(impurity_kind: ImpurityKind, max_depth: usize) -> Self {
        Self {
            impurity_kind,
            max_depth,
            min_gain: F::zero(),
            tie_break: TieBreak::default(),
        }
    }
}

/// A scored candidate split; the test is `value <= threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCandidate<F> {
    pub feature_index: usize,
    pub threshold: F,
    pub gain: F,
}

/// One tree node: an internal threshold test or a class leaf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node<F> {
    Split {
        feature_index: usize,
        threshold: F,
        /// Instances with `value <= threshold`.
        left: Box<Node<F>>,
        /// Instances with `value > threshold`.
        right: Box<Node<F>>,
    },
    Leaf {
        /// Majority class of the training instances that reached the leaf;
        /// count ties go to the smallest class id.
        class: u32,
        /// Training instances per class at this leaf.
        counts: Vec<usize>,
    },
}

impl<F> Node<F> {
    fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    fn count_nodes(&self) -> (usize, usize) {
        match self {
            Node::Leaf { .. } => (1, 1),
            Node::Split { left, right, .. } => {
                let (ln, ll) = left.count_nodes();
                let (rn, rl) = right.count_nodes();
                (1 + ln + rn, ll + rl)
            }
        }
    }
}

/// A fitted decision tree together with the metadata needed to use and
/// persist it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree<F> {
    pub config: TrainConfig<F>,
    pub n_features: usize,
    pub feature_names: Vec<String>,
    pub class_names: Vec<String>,
    root: Node<F>,
}

#[derive(Serialize, Deserialize)]
struct TreeDocument<F> {
    model: String,
    version: u32,
    #[serde(flatten)]
    tree: DecisionTree<F>,
}

impl<F: Scalar> DecisionTree<F> {
    pub fn root(&self) -> &Node<F> {
        &self.root
    }

    /// Longest root-to-leaf path; a lone leaf has depth 0.
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn node_count(&self) -> usize {
        self.root.count_nodes().0
    }

    pub fn leaf_count(&self) -> usize {
        self.root.count_nodes().1
    }

    /// Route an instance to a leaf and return its class id. The instance
    /// must carry exactly the trained number of features.
    pub fn predict(&self, instance: &[F]) -> Result<u32> {
        if instance.len() != self.n_features {
            return Err(Error::FeatureCountMismatch {
                expected: self.n_features,
                actual: instance.len(),
            });
        }
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { class, .. } => return Ok(*class),
                Node::Split {
                    feature_index,
                    threshold,
                    left,
                    right,
                } => {
                    node = if instance[*feature_index] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    /// The predicted class name.
    pub fn predict_name(&self, instance: &[F]) -> Result<&str> {
        let class = self.predict(instance)?;
        Ok(&self.class_names[class as usize])
    }

    /// Versioned, self-describing JSON document.
    pub fn serialize(&self) -> String {
        let doc = TreeDocument {
            model: "tree".to_string(),
            version: TREE_FORMAT_VERSION,
            tree: self.clone(),
        };
        let mut json = serde_json::to_string_pretty(&doc).expect("tree serializes");
        json.push('\n');
        json
    }

    /// Parse a document written by [`DecisionTree::serialize`].
    pub fn deserialize(document: &str) -> Result<Self> {
        let doc: TreeDocument<F> = serde_json::from_str(document)?;
        if doc.model != "tree" {
            return Err(Error::WrongModelKind {
                expected: "tree",
                found: doc.model,
            });
        }
        if doc.version != TREE_FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(doc.version));
        }
        Ok(doc.tree)
    }

    /// Render the tree as a DOT digraph: one box per split labelled
    /// `f<i> <= <t>`, one ellipse per leaf labelled `Class-<name>`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph decision_tree {\n    node [shape=box];\n");
        let mut next_id = 0usize;
        fn visit<F: Scalar>(
            node: &Node<F>,
            class_names: &[String],
            next_id: &mut usize,
            out: &mut String,
        ) -> usize {
            let id = *next_id;
            *next_id += 1;
            match node {
                Node::Leaf { class, .. } => {
                    out.push_str(&format!(
                        "    n{id} [label=\"Class-{}\", shape=ellipse];\n",
                        class_names[*class as usize]
                    ));
                }
                Node::Split {
                    feature_index,
                    threshold,
                    left,
                    right,
                } => {
                    out.push_str(&format!(
                        "    n{id} [label=\"f{feature_index} <= {threshold}\"];\n"
                    ));
                    let left_id = visit(left, class_names, next_id, out);
                    let right_id = visit(right, class_names, next_id, out);
                    out.push_str(&format!("    n{id} -> n{left_id} [label=\"<=\"];\n"));
                    out.push_str(&format!("    n{id} -> n{right_id} [label=\">\"];\n"));
                }
            }
            id
        }
        visit(&self.root, &self.class_names, &mut next_id, &mut out);
        out.push_str("}\n");
        out
    }
}

/// Candidate thresholds for one feature at a node: the sorted distinct
/// observed values, except the maximum (a `<= max` split keeps every
/// instance on one side). A constant feature yields no candidates.
pub fn candidate_splits<F: Scalar>(
    dataset: &Dataset<F>,
    rows: &[usize],
    feature_index: usize,
) -> Vec<F> {
    let mut values: Vec<F> = rows
        .iter()
        .map(|&r| dataset.value(r, feature_index))
        .collect();
    distinct_thresholds(&mut values);
    values
}

/// Sort, dedup and drop the maximum in place.
fn distinct_thresholds<F: Scalar>(values: &mut Vec<F>) {
    values.sort_by(|a, b| a.partial_cmp(b).expect("feature values are finite"));
    values.dedup();
    values.pop();
}

/// Candidate weight, lower is better: the size-weighted child impurity sum
/// before division by the node size. Structural weights are exact integers,
/// so true ties are recognised exactly.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
enum SplitWeight<F> {
    Exact(u64),
    Approx(F),
}

/// Per-node impurity of the parent, in the representation the weights use.
enum ParentImpurity<F> {
    Exact(usize),
    Approx(F),
}

struct SplitSearch<'a, F> {
    dataset: &'a Dataset<F>,
    kind: ImpurityKind,
    ws: EtcWorkspace,
    values: Vec<F>,
    left_labels: Vec<u32>,
    right_labels: Vec<u32>,
    left_counts: Vec<usize>,
    right_counts: Vec<usize>,
}

impl<'a, F: Scalar> SplitSearch<'a, F> {
    fn new(dataset: &'a Dataset<F>, kind: ImpurityKind) -> Self {
        let k = dataset.class_count();
        Self {
            dataset,
            kind,
            ws: EtcWorkspace::new(),
            values: Vec::new(),
            left_labels: Vec::new(),
            right_labels: Vec::new(),
            left_counts: vec![0; k],
            right_counts: vec![0; k],
        }
    }

    fn parent_impurity(&mut self, rows: &[usize]) -> ParentImpurity<F> {
        match self.kind {
            ImpurityKind::StructuralEtc => {
                self.left_labels.clear();
                let data = self.dataset;
                self.left_labels.extend(rows.iter().map(|&r| data.label(r)));
                ParentImpurity::Exact(self.ws.etc_of(&self.left_labels))
            }
            ImpurityKind::ShannonEntropy => {
                let counts = class_counts(self.dataset, rows);
                ParentImpurity::Approx(entropy_from_counts(&counts, rows.len()))
            }
            ImpurityKind::Gini => {
                let counts = class_counts(self.dataset, rows);
                ParentImpurity::Approx(gini_from_counts(&counts, rows.len()))
            }
        }
    }

    /// The candidate minimising the weighted child impurity; ties go to the
    /// lower feature index, then the lower threshold (the enumeration order,
    /// combined with strict improvement).
    fn best(&mut self, rows: &[usize], allowed: &[usize]) -> Option<(usize, F, SplitWeight<F>)> {
        let data = self.dataset;
        let mut best: Option<(usize, F, SplitWeight<F>)> = None;
        for &feature in allowed {
            self.values.clear();
            self.values
                .extend(rows.iter().map(|&r| data.value(r, feature)));
            distinct_thresholds(&mut self.values);
            // Scratch is reused across candidates; take it to appease both
            // the borrow checker and the allocator.
            let thresholds = std::mem::take(&mut self.values);
            for &threshold in &thresholds {
                let weight = self.weigh(rows, feature, threshold);
                let better = match &best {
                    None => true,
                    Some((_, _, w)) => weight < *w,
                };
                if better {
                    best = Some((feature, threshold, weight));
                }
            }
            self.values = thresholds;
        }
        best
    }

    fn weigh(&mut self, rows: &[usize], feature: usize, threshold: F) -> SplitWeight<F> {
        let data = self.dataset;
        self.left_labels.clear();
        self.right_labels.clear();
        self.left_counts.fill(0);
        self.right_counts.fill(0);
        for &r in rows {
            let label = data.label(r);
            if data.value(r, feature) <= threshold {
                self.left_labels.push(label);
                self.left_counts[label as usize] += 1;
            } else {
                self.right_labels.push(label);
                self.right_counts[label as usize] += 1;
            }
        }
        match self.kind {
            ImpurityKind::StructuralEtc => {
                let left = self.left_labels.len() as u64 * self.ws.etc_of(&self.left_labels) as u64;
                let right =
                    self.right_labels.len() as u64 * self.ws.etc_of(&self.right_labels) as u64;
                SplitWeight::Exact(left + right)
            }
            ImpurityKind::ShannonEntropy => SplitWeight::Approx(
                weighted::<F>(&self.left_counts, self.left_labels.len(), entropy_from_counts)
                    + weighted::<F>(
                        &self.right_counts,
                        self.right_labels.len(),
                        entropy_from_counts,
                    ),
            ),
            ImpurityKind::Gini => SplitWeight::Approx(
                weighted::<F>(&self.left_counts, self.left_labels.len(), gini_from_counts)
                    + weighted::<F>(&self.right_counts, self.right_labels.len(), gini_from_counts),
            ),
        }
    }
}

fn weighted<F: Scalar>(counts: &[usize], total: usize, f: fn(&[usize], usize) -> F) -> F {
    if total == 0 {
        return F::zero();
    }
    F::from_usize(total).expect("node size fits") * f(counts, total)
}

fn class_counts<F: Scalar>(dataset: &Dataset<F>, rows: &[usize]) -> Vec<usize> {
    let mut counts = vec![0usize; dataset.class_count()];
    for &r in rows {
        counts[dataset.label(r) as usize] += 1;
    }
    counts
}

/// Gain of a weighted candidate relative to the parent impurity. The
/// division by the node size happens last, so a structural gain computes
/// from an exact integer numerator and its sign is exact.
fn gain_from_weight<F: Scalar>(
    parent: &ParentImpurity<F>,
    weight: SplitWeight<F>,
    n: usize,
) -> F {
    let n_f = F::from_usize(n).expect("node size fits");
    match (parent, weight) {
        (ParentImpurity::Exact(p), SplitWeight::Exact(w)) => {
            let numerator = (*p as i64) * (n as i64) - (w as i64);
            F::from_i64(numerator).expect("gain numerator fits") / n_f
        }
        (ParentImpurity::Approx(p), SplitWeight::Approx(w)) => *p - w / n_f,
        _ => unreachable!("parent and weight always share a representation"),
    }
}

/// The highest-gain candidate split of a node, if any exceeds `min_gain`.
pub fn best_split<F: Scalar>(
    dataset: &Dataset<F>,
    rows: &[usize],
    config: &TrainConfig<F>,
) -> Option<SplitCandidate<F>> {
    let allowed: Vec<usize> = (0..dataset.n_features()).collect();
    let mut search = SplitSearch::new(dataset, config.impurity_kind);
    best_split_in(&mut search, rows, &allowed, config)
}

fn best_split_in<F: Scalar>(
    search: &mut SplitSearch<'_, F>,
    rows: &[usize],
    allowed: &[usize],
    config: &TrainConfig<F>,
) -> Option<SplitCandidate<F>> {
    let (feature_index, threshold, weight) = search.best(rows, allowed)?;
    let parent = search.parent_impurity(rows);
    let gain = gain_from_weight(&parent, weight, rows.len());
    (gain > config.min_gain).then_some(SplitCandidate {
        feature_index,
        threshold,
        gain,
    })
}

/// Train a tree on the dataset in its current row order.
pub fn fit<F: Scalar>(dataset: &Dataset<F>, config: &TrainConfig<F>) -> Result<DecisionTree<F>> {
    let allowed: Vec<usize> = (0..dataset.n_features()).collect();
    fit_with_features(dataset, config, &allowed)
}

/// Train a tree considering only `allowed_features` as split candidates.
/// Predictions still take full-width feature vectors; bootstrap forests use
/// this to restrict each tree to a feature subset.
pub fn fit_with_features<F: Scalar>(
    dataset: &Dataset<F>,
    config: &TrainConfig<F>,
    allowed_features: &[usize],
) -> Result<DecisionTree<F>> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if config.max_depth == 0 {
        return Err(Error::InvalidConfig("max_depth must be at least 1".into()));
    }
    if allowed_features.is_empty() {
        return Err(Error::InvalidConfig("no features to split on".into()));
    }
    if let Some(&f) = allowed_features
        .iter()
        .find(|&&f| f >= dataset.n_features())
    {
        return Err(Error::InvalidConfig(format!(
            "feature index {f} out of range"
        )));
    }

    let rows: Vec<usize> = (0..dataset.n_instances()).collect();
    let mut search = SplitSearch::new(dataset, config.impurity_kind);
    let root = build_node(&mut search, &rows, allowed_features, config, 0);
    Ok(DecisionTree {
        config: *config,
        n_features: dataset.n_features(),
        feature_names: dataset.feature_names().to_vec(),
        class_names: dataset.class_names().to_vec(),
        root,
    })
}

fn build_node<F: Scalar>(
    search: &mut SplitSearch<'_, F>,
    rows: &[usize],
    allowed: &[usize],
    config: &TrainConfig<F>,
    depth: usize,
) -> Node<F> {
    let counts = class_counts(search.dataset, rows);
    let homogeneous = counts.iter().filter(|&&c| c > 0).count() <= 1;
    if homogeneous || depth >= config.max_depth {
        return leaf(counts);
    }
    match best_split_in(search, rows, allowed, config) {
        None => leaf(counts),
        Some(candidate) => {
            let data = search.dataset;
            let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
                .iter()
                .partition(|&&r| data.value(r, candidate.feature_index) <= candidate.threshold);
            // Both sides are non-empty: thresholds are observed values with
            // the maximum removed.
            let left = build_node(search, &left_rows, allowed, config, depth + 1);
            let right = build_node(search, &right_rows, allowed, config, depth + 1);
            Node::Split {
                feature_index: candidate.feature_index,
                threshold: candidate.threshold,
                left: Box::new(left),
                right: Box::new(right),
            }
        }
    }
}

/// Majority leaf; ties go to the smallest class id.
fn leaf<F>(counts: Vec<usize>) -> Node<F> {
    let class = counts
        .iter()
        .enumerate()
        .max_by_key(|&(i, &c)| (c, std::cmp::Reverse(i)))
        .map(|(i, _)| i as u32)
        .unwrap_or(0);
    Node::Leaf { class, counts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{one_based_order, toy_example, TOY_ORDERS};

    fn toy() -> Dataset<f64> {
        toy_example::<f64>()
    }

    fn toy_in_order(name: &str) -> Dataset<f64> {
        let order = TOY_ORDERS.iter().find(|(n, _)| *n == name).unwrap().1;
        toy().apply_order(&one_based_order(&order).unwrap()).unwrap()
    }

    fn etc_config() -> TrainConfig<f64> {
        TrainConfig::new(ImpurityKind::StructuralEtc, 10)
    }

    fn split(f: usize, t: f64, left: Node<f64>, right: Node<f64>) -> Node<f64> {
        Node::Split {
            feature_index: f,
            threshold: t,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    fn leaf_node(class: u32, counts: &[usize]) -> Node<f64> {
        Node::Leaf {
            class,
            counts: counts.to_vec(),
        }
    }

    #[test]
    fn candidate_splits_drop_the_maximum() {
        let d = toy();
        let rows: Vec<usize> = (0..14).collect();
        assert_eq!(candidate_splits(&d, &rows, 0), vec![1.0, 2.0, 4.0]);
        assert_eq!(candidate_splits(&d, &rows, 1), vec![1.0, 2.0, 3.0]);
        // Rows 6..=9 hold f0 = 4 only: constant feature, no candidates.
        assert!(candidate_splits(&d, &[6, 7, 8, 9], 0).is_empty());
    }

    #[test]
    fn best_split_on_reference_orders() {
        let rows: Vec<usize> = (0..14).collect();
        let a = best_split(&toy_in_order("A"), &rows, &etc_config()).unwrap();
        assert_eq!((a.feature_index, a.threshold), (0, 2.0));
        assert!((a.gain - (7.0 - 40.0 / 14.0)).abs() < 1e-12);

        let b = best_split(&toy_in_order("B"), &rows, &etc_config()).unwrap();
        assert_eq!((b.feature_index, b.threshold), (1, 2.0));
    }

    #[test]
    fn best_split_two_instances() {
        let d = Dataset::<f64>::new(
            vec![0.0, 1.0],
            1,
            vec![0, 1],
            vec!["f0".into()],
            vec!["1".into(), "2".into()],
        )
        .unwrap();
        let c = best_split(&d, &[0, 1], &etc_config()).unwrap();
        assert_eq!((c.feature_index, c.threshold), (0, 0.0));
        assert!(c.gain > 0.0);
    }

    /// The expected tree for ordering A: the root isolates f0 <= 2, the
    /// right side peels off f0 > 4, and a final f1 <= 2 separates the rest.
    fn expected_tree_a() -> Node<f64> {
        split(
            0,
            2.0,
            leaf_node(0, &[6, 0]),
            split(
                0,
                4.0,
                split(1, 2.0, leaf_node(0, &[2, 0]), leaf_node(1, &[0, 2])),
                leaf_node(1, &[0, 4]),
            ),
        )
    }

    /// The expected tree for ordering C: the root tests f0 <= 4 and the
    /// left side splits on f1 <= 2 before finishing with f0 <= 2.
    fn expected_tree_c() -> Node<f64> {
        split(
            0,
            4.0,
            split(
                1,
                2.0,
                leaf_node(0, &[6, 0]),
                split(0, 2.0, leaf_node(0, &[2, 0]), leaf_node(1, &[0, 2])),
            ),
            leaf_node(1, &[0, 4]),
        )
    }

    #[test]
    fn fit_reproduces_reference_tree_a() {
        let tree = fit(&toy_in_order("A"), &etc_config()).unwrap();
        assert_eq!(tree.root(), &expected_tree_a());
    }

    #[test]
    fn fit_reproduces_reference_tree_c() {
        let tree = fit(&toy_in_order("C"), &etc_config()).unwrap();
        assert_eq!(tree.root(), &expected_tree_c());
    }

    #[test]
    fn different_orders_can_yield_different_structural_trees() {
        let a = fit(&toy_in_order("A"), &etc_config()).unwrap();
        let b = fit(&toy_in_order("B"), &etc_config()).unwrap();
        assert_ne!(a.root(), b.root());
    }

    #[test]
    fn entropy_and_gini_trees_ignore_order() {
        for kind in [ImpurityKind::ShannonEntropy, ImpurityKind::Gini] {
            let config = TrainConfig::new(kind, 10);
            let reference = fit(&toy_in_order("A"), &config).unwrap();
            for (name, _) in &TOY_ORDERS {
                let tree = fit(&toy_in_order(name), &config).unwrap();
                assert_eq!(tree, reference, "kind {kind}, order {name}");
            }
        }
    }

    #[test]
    fn single_instance_fits_to_a_leaf() {
        let d = toy().select(&[3]);
        let tree = fit(&d, &etc_config()).unwrap();
        assert_eq!(tree.root(), &leaf_node(0, &[1, 0]));
        assert_eq!(tree.depth(), 0);
    }

    #[test]
    fn fit_rejects_bad_inputs() {
        let empty = toy().select(&[]);
        assert!(matches!(fit(&empty, &etc_config()), Err(Error::EmptyDataset)));

        let mut config = etc_config();
        config.max_depth = 0;
        assert!(matches!(fit(&toy(), &config), Err(Error::InvalidConfig(_))));

        assert!(matches!(
            fit_with_features(&toy(), &etc_config(), &[]),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            fit_with_features(&toy(), &etc_config(), &[2]),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn max_depth_one_is_a_stump() {
        let mut config = etc_config();
        config.max_depth = 1;
        let tree = fit(&toy_in_order("A"), &config).unwrap();
        assert_eq!(tree.depth(), 1);
        assert_eq!(tree.node_count(), 3);
    }

    #[test]
    fn no_positive_gain_makes_a_leaf() {
        // An exclusive-or layout: every single split leaves both children
        // with the parent's class proportions, so no candidate has positive
        // entropy or Gini gain and the root stays a leaf under the strict
        // min_gain rule. The structural measure reads the label *order*
        // ((a,b,b,a) compresses worse than (a,b) twice), finds positive
        // gain, and fits the data.
        let d = Dataset::<f64>::new(
            vec![0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0],
            2,
            vec![0, 1, 1, 0],
            vec!["f0".into(), "f1".into()],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        for kind in [ImpurityKind::Gini, ImpurityKind::ShannonEntropy] {
            let tree = fit(&d, &TrainConfig::new(kind, 5)).unwrap();
            assert_eq!(tree.node_count(), 1, "kind {kind}");
        }
        let tree = fit(&d, &TrainConfig::new(ImpurityKind::StructuralEtc, 5)).unwrap();
        assert!(tree.node_count() > 1);
        for i in 0..d.n_instances() {
            assert_eq!(tree.predict(d.row(i)).unwrap(), d.label(i));
        }
    }

    #[test]
    fn predict_routes_by_thresholds() {
        let tree = fit(&toy_in_order("A"), &etc_config()).unwrap();
        assert_eq!(tree.predict_name(&[1.0, 3.0]).unwrap(), "2");
        assert_eq!(tree.predict_name(&[5.0, 1.0]).unwrap(), "1");
        assert_eq!(tree.predict_name(&[4.0, 1.0]).unwrap(), "2");
        assert!(matches!(
            tree.predict(&[1.0, 2.0, 3.0]),
            Err(Error::FeatureCountMismatch {
                expected: 2,
                actual: 3
            })
        ));
        assert!(matches!(
            tree.predict(&[1.0]),
            Err(Error::FeatureCountMismatch { .. })
        ));
    }

    #[test]
    fn tree_classifies_all_training_instances() {
        let d = toy_in_order("A");
        let tree = fit(&d, &etc_config()).unwrap();
        for i in 0..d.n_instances() {
            assert_eq!(tree.predict(d.row(i)).unwrap(), d.label(i));
        }
    }

    #[test]
    fn fit_is_deterministic() {
        let d = toy_in_order("D");
        let t1 = fit(&d, &etc_config()).unwrap();
        let t2 = fit(&d, &etc_config()).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(t1.serialize(), t2.serialize());
    }

    #[test]
    fn document_round_trip() {
        let tree = fit(&toy_in_order("B"), &etc_config()).unwrap();
        let doc = tree.serialize();
        let back = DecisionTree::<f64>::deserialize(&doc).unwrap();
        assert_eq!(back, tree);

        let stump = fit(&toy().select(&[0]), &etc_config()).unwrap();
        let doc = stump.serialize();
        assert!(doc.contains("\"leaf\""));
        assert_eq!(DecisionTree::<f64>::deserialize(&doc).unwrap(), stump);
    }

    #[test]
    fn deserialize_rejects_malformed_and_foreign_documents() {
        let err = DecisionTree::<f64>::deserialize("{ not json").unwrap_err();
        assert!(matches!(err, Error::MalformedDocument(_)));
        // serde_json reports the position of the failure.
        assert!(err.to_string().contains("line"));

        let tree = fit(&toy(), &etc_config()).unwrap();
        let doc = tree.serialize().replace("\"tree\"", "\"forest\"");
        assert!(matches!(
            DecisionTree::<f64>::deserialize(&doc),
            Err(Error::WrongModelKind { .. })
        ));

        let doc = tree.serialize().replace("\"version\": 1", "\"version\": 99");
        assert!(matches!(
            DecisionTree::<f64>::deserialize(&doc),
            Err(Error::UnsupportedVersion(99))
        ));
    }

    #[test]
    fn dot_output_matches_structure() {
        let tree = fit(&toy_in_order("A"), &etc_config()).unwrap();
        let dot = tree.to_dot();
        assert!(dot.starts_with("digraph decision_tree {"));
        assert!(dot.contains("[label=\"f0 <= 2\"]"));
        assert!(dot.contains("[label=\"f0 <= 4\"]"));
        assert!(dot.contains("[label=\"f1 <= 2\"]"));
        assert!(dot.contains("[label=\"Class-2\", shape=ellipse]"));
        assert!(dot.contains("[label=\"Class-1\", shape=ellipse]"));
        // 3 splits + 4 leaves, each with one node statement.
        assert_eq!(dot.matches("label=").count(), 7 + 6); // 6 edge labels
    }
}
