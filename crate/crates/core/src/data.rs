//! Dataset ingestion, ordered reordering and splitting, and evaluation
//! metrics.
//!
//! Instance order is part of a dataset's identity here, not an accident of
//! storage: the structural impurity reads labels in row order, so every
//! transformation in this module states what it does to the order.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::impurity::LabelSequence;
use crate::Scalar;

/// An ordered collection of numeric feature vectors with dense-encoded class
/// labels. Row order is significant and preserved by accessors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset<F> {
    features: Vec<F>,
    n_features: usize,
    labels: Vec<u32>,
    feature_names: Vec<String>,
    class_names: Vec<String>,
}

impl<F: Scalar> Dataset<F> {
    /// Build a dataset from row-major features. All rows must have exactly
    /// `n_features` finite values and every label must index into
    /// `class_names`.
    pub fn new(
        features: Vec<F>,
        n_features: usize,
        labels: Vec<u32>,
        feature_names: Vec<String>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        if n_features == 0 {
            return Err(Error::InvalidDataset("zero features".into()));
        }
        if !features.len().is_multiple_of(n_features) {
            return Err(Error::InvalidDataset(format!(
                "{} values do not form rows of {} features",
                features.len(),
                n_features
            )));
        }
        let n = features.len() / n_features;
        if labels.len() != n {
            return Err(Error::InvalidDataset(format!(
                "{} labels for {} rows",
                labels.len(),
                n
            )));
        }
        if feature_names.len() != n_features {
            return Err(Error::InvalidDataset(format!(
                "{} feature names for {} features",
                feature_names.len(),
                n_features
            )));
        }
        if let Some(&label) = labels.iter().find(|&&l| l as usize >= class_names.len()) {
            return Err(Error::LabelOutOfRange {
                label,
                class_count: class_names.len(),
            });
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset("non-finite feature value".into()));
        }
        Ok(Self {
            features,
            n_features,
            labels,
            feature_names,
            class_names,
        })
    }

    pub fn n_instances(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn value(&self, row: usize, feature: usize) -> F {
        self.features[row * self.n_features + feature]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// The labels in row order, as an impurity input.
    pub fn label_sequence(&self) -> LabelSequence {
        LabelSequence::new(self.labels.clone(), self.class_count())
            .expect("dataset labels are in range")
    }

    /// Reorder rows by a permutation of `0..n`. Labels move with their rows;
    /// anything that is not a permutation is rejected.
    pub fn apply_order(&self, order: &[usize]) -> Result<Self> {
        let n = self.n_instances();
        if order.len() != n {
            return Err(Error::InvalidOrder(format!(
                "order has {} entries for {} rows",
                order.len(),
                n
            )));
        }
        let mut seen = vec![false; n];
        for &idx in order {
            if idx >= n {
                return Err(Error::InvalidOrder(format!("index {idx} out of range")));
            }
            if seen[idx] {
                return Err(Error::InvalidOrder(format!("index {idx} repeated")));
            }
            seen[idx] = true;
        }
        Ok(self.select(order))
    }

    /// Gather rows by index, repeats allowed (bootstrap sampling relies on
    /// this). No permutation check.
    pub fn select(&self, rows: &[usize]) -> Self {
        let mut features = Vec::with_capacity(rows.len() * self.n_features);
        let mut labels = Vec::with_capacity(rows.len());
        for &r in rows {
            features.extend_from_slice(self.row(r));
            labels.push(self.labels[r]);
        }
        Self {
            features,
            n_features: self.n_features,
            labels,
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
        }
    }
}

/// How to identify the label column of a CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
}

impl LabelColumn {
    /// A header name takes precedence; a value that matches no header but
    /// parses as an integer is treated as a column index.
    pub fn parse(raw: &str) -> Self {
        Self::Name(raw.to_string())
    }

    fn resolve(&self, headers: &[String]) -> Option<usize> {
        match self {
            LabelColumn::Index(i) => (*i < headers.len()).then_some(*i),
            LabelColumn::Name(name) => headers
                .iter()
                .position(|h| h == name)
                .or_else(|| match name.parse::<usize>() {
                    Ok(i) if i < headers.len() => Some(i),
                    _ => None,
                }),
        }
    }
}

/// Load a headed CSV file. Row order becomes instance order; labels are
/// encoded densely in order of first appearance of the raw label strings.
pub fn load_csv<F: Scalar>(path: &Path, label_column: &LabelColumn) -> Result<Dataset<F>> {
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("cannot open {display}: {e}"),
            )),
            _ => Error::Csv(e),
        })?;
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let label_idx = label_column
        .resolve(&headers)
        .ok_or_else(|| Error::UnknownLabelColumn {
            column: match label_column {
                LabelColumn::Name(n) => n.clone(),
                LabelColumn::Index(i) => i.to_string(),
            },
            path: display.clone(),
        })?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != label_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    let mut class_ids: HashMap<String, u32> = HashMap::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        for (col_idx, cell) in record.iter().enumerate() {
            if col_idx == label_idx {
                let raw = cell.to_string();
                let next_id = class_names.len() as u32;
                let id = *class_ids.entry(raw.clone()).or_insert_with(|| {
                    class_names.push(raw);
                    next_id
                });
                labels.push(id);
            } else {
                let value: f64 = cell.parse().map_err(|_| Error::CsvCell {
                    path: display.clone(),
                    row: row_idx + 1,
                    column: headers[col_idx].clone(),
                    value: cell.to_string(),
                })?;
                if !value.is_finite() {
                    return Err(Error::CsvCell {
                        path: display.clone(),
                        row: row_idx + 1,
                        column: headers[col_idx].clone(),
                        value: cell.to_string(),
                    });
                }
                features.push(F::from_f64(value).expect("finite f64 converts"));
            }
        }
    }
    if labels.is_empty() {
        return Err(Error::NoInstances { path: display });
    }
    Dataset::new(
        features,
        headers.len() - 1,
        labels,
        feature_names,
        class_names,
    )
}

/// Write a dataset back to CSV. Feature values use the shortest
/// representation that parses back to the same number, so a load of the
/// written file reproduces the dataset exactly. The label column is written
/// last under the name `label`.
pub fn write_csv<F: Scalar>(dataset: &Dataset<F>, path: &Path) -> Result<()> {
    let mut out = String::new();
    for name in dataset.feature_names() {
        out.push_str(name);
        out.push(',');
    }
    out.push_str("label\n");
    for i in 0..dataset.n_instances() {
        for v in dataset.row(i) {
            let _ = write!(out, "{v},");
        }
        out.push_str(&dataset.class_names()[dataset.label(i) as usize]);
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Seeded shuffle followed by a head/tail cut: the first
/// `ceil(n * (1 - test_fraction))` shuffled instances train, the rest test.
/// With `stratify` the same shuffled order is scanned while filling a
/// per-class training quota, keeping class proportions close on both sides.
pub fn train_test_split<F: Scalar>(
    dataset: &Dataset<F>,
    test_fraction: f64,
    seed: u64,
    stratify: bool,
) -> Result<(Dataset<F>, Dataset<F>)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidSplit(format!(
            "test fraction {test_fraction} not in (0, 1)"
        )));
    }
    let n = dataset.n_instances();
    if n < 2 {
        return Err(Error::InvalidSplit(format!("{n} instances cannot split")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let (train_rows, test_rows) = if stratify {
        let counts = dataset.label_sequence().counts();
        let mut quota: Vec<usize> = counts
            .iter()
            .map(|&c| ((c as f64) * (1.0 - test_fraction)).ceil() as usize)
            .collect();
        let mut train = Vec::new();
        let mut test = Vec::new();
        for &row in &order {
            let class = dataset.label(row) as usize;
            if quota[class] > 0 {
                quota[class] -= 1;
                train.push(row);
            } else {
                test.push(row);
            }
        }
        (train, test)
    } else {
        let train_size = ((n as f64) * (1.0 - test_fraction)).ceil() as usize;
        let test = order.split_off(train_size.min(n));
        (order, test)
    };

    if train_rows.is_empty() || test_rows.is_empty() {
        return Err(Error::InvalidSplit(format!(
            "degenerate split: {} train, {} test",
            train_rows.len(),
            test_rows.len()
        )));
    }
    Ok((dataset.select(&train_rows), dataset.select(&test_rows)))
}

/// k x k confusion matrix; `matrix[true][pred]`.
pub fn confusion_matrix(
    y_true: &[u32],
    y_pred: &[u32],
    class_count: usize,
) -> Result<Vec<Vec<usize>>> {
    if y_true.len() != y_pred.len() {
        return Err(Error::EvalMismatch(format!(
            "{} true labels, {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.is_empty() {
        return Err(Error::EvalMismatch("no instances to evaluate".into()));
    }
    let mut matrix = vec![vec![0usize; class_count]; class_count];
    for (&t, &p) in y_true.iter().zip(y_pred) {
        for &(label, side) in [(t, "true"), (p, "predicted")].iter() {
            if label as usize >= class_count {
                return Err(Error::EvalMismatch(format!(
                    "{side} label {label} out of range for {class_count} classes"
                )));
            }
        }
        matrix[t as usize][p as usize] += 1;
    }
    Ok(matrix)
}

/// Unweighted mean of per-class F1 over the classes present in either input.
/// Per-class F1 uses the 0/0 -> 0 convention.
pub fn macro_f1(y_true: &[u32], y_pred: &[u32], class_count: usize) -> Result<f64> {
    let matrix = confusion_matrix(y_true, y_pred, class_count)?;
    Ok(macro_f1_from_matrix(&matrix))
}

fn per_class_prf(matrix: &[Vec<usize>], class: usize) -> (f64, f64, f64) {
    let k = matrix.len();
    let tp = matrix[class][class] as f64;
    let fp: f64 = (0..k)
        .filter(|&t| t != class)
        .map(|t| matrix[t][class] as f64)
        .sum();
    let fn_: f64 = (0..k)
        .filter(|&p| p != class)
        .map(|p| matrix[class][p] as f64)
        .sum();
    let precision = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
    let recall = if tp + fn_ > 0.0 { tp / (tp + fn_) } else { 0.0 };
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    (precision, recall, f1)
}

fn macro_f1_from_matrix(matrix: &[Vec<usize>]) -> f64 {
    let k = matrix.len();
    let present: Vec<usize> = (0..k)
        .filter(|&c| {
            let in_true: usize = matrix[c].iter().sum();
            let in_pred: usize = (0..k).map(|t| matrix[t][c]).sum();
            in_true + in_pred > 0
        })
        .collect();
    if present.is_empty() {
        return 0.0;
    }
    let sum: f64 = present.iter().map(|&c| per_class_prf(matrix, c).2).sum();
    sum / present.len() as f64
}

/// Confusion matrix with per-class precision/recall/F1 and the macro F1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub class_names: Vec<String>,
    /// `confusion[true_class][predicted_class]`.
    pub confusion: Vec<Vec<usize>>,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub f1: Vec<f64>,
    pub macro_f1: f64,
}

/// Evaluate predictions against ground truth over the given class universe.
pub fn eval_report(y_true: &[u32], y_pred: &[u32], class_names: &[String]) -> Result<EvalReport> {
    let confusion = confusion_matrix(y_true, y_pred, class_names.len())?;
    let k = class_names.len();
    let mut precision = Vec::with_capacity(k);
    let mut recall = Vec::with_capacity(k);
    let mut f1 = Vec::with_capacity(k);
    for c in 0..k {
        let (p, r, f) = per_class_prf(&confusion, c);
        precision.push(p);
        recall.push(r);
        f1.push(f);
    }
    Ok(EvalReport {
        class_names: class_names.to_vec(),
        macro_f1: macro_f1_from_matrix(&confusion),
        confusion,
        precision,
        recall,
        f1,
    })
}

/// The 14-instance, two-feature binary dataset used by the worked examples,
/// the reference checks and many tests. Classes appear as raw labels "2" and
/// "1"; "2" is encoded as class id 0 because it appears first.
pub fn toy_example<F: Scalar>() -> Dataset<F> {
    let rows: [(f64, f64, &str); 14] = [
        (1.0, 1.0, "2"),
        (1.0, 2.0, "2"),
        (1.0, 3.0, "2"),
        (2.0, 1.0, "2"),
        (2.0, 2.0, "2"),
        (2.0, 3.0, "2"),
        (4.0, 1.0, "2"),
        (4.0, 2.0, "2"),
        (4.0, 3.0, "1"),
        (4.0, 4.0, "1"),
        (5.0, 1.0, "1"),
        (5.0, 2.0, "1"),
        (5.0, 3.0, "1"),
        (5.0, 4.0, "1"),
    ];
    let mut features = Vec::with_capacity(28);
    let mut labels = Vec::with_capacity(14);
    for (f0, f1, label) in rows {
        features.push(F::from_f64(f0).unwrap());
        features.push(F::from_f64(f1).unwrap());
        labels.push(if label == "2" { 0 } else { 1 });
    }
    Dataset::new(
        features,
        2,
        labels,
        vec!["f0".into(), "f1".into()],
        vec!["2".into(), "1".into()],
    )
    .expect("toy example is well-formed")
}

/// Five named reference orderings of [`toy_example`], as 1-based instance
/// ids (the same convention permutation files use).
pub const TOY_ORDERS: [(&str, [usize; 14]); 5] = [
    ("A", [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14]),
    ("B", [14, 3, 10, 12, 2, 4, 5, 11, 9, 8, 7, 1, 6, 13]),
    ("C", [13, 11, 8, 12, 7, 6, 4, 14, 10, 5, 2, 3, 1, 9]),
    ("D", [3, 2, 13, 10, 11, 1, 4, 7, 6, 9, 8, 14, 5, 12]),
    ("E", [10, 12, 1, 2, 13, 14, 8, 11, 4, 7, 9, 6, 5, 3]),
];

/// Convert a 1-based order (as used in permutation files) to 0-based row
/// indices.
pub fn one_based_order(order: &[usize]) -> Result<Vec<usize>> {
    order
        .iter()
        .map(|&i| {
            i.checked_sub(1)
                .ok_or_else(|| Error::InvalidOrder("index 0 in a 1-based order".into()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn toy() -> Dataset<f64> {
        toy_example::<f64>()
    }

    #[test]
    fn toy_example_shape() {
        let d = toy();
        assert_eq!(d.n_instances(), 14);
        assert_eq!(d.n_features(), 2);
        assert_eq!(d.class_names(), &["2".to_string(), "1".to_string()]);
        assert_eq!(d.row(0), &[1.0, 1.0]);
        assert_eq!(d.row(13), &[5.0, 4.0]);
        assert_eq!(d.label_sequence().counts(), vec![8, 6]);
    }

    #[test]
    fn load_csv_matches_toy_example() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("toy.csv");
        write_csv(&toy(), &path).unwrap();
        let loaded: Dataset<f64> = load_csv(&path, &LabelColumn::Name("label".into())).unwrap();
        assert_eq!(loaded, toy());
    }

    #[test]
    fn csv_round_trip_preserves_awkward_reals() {
        let d = Dataset::<f64>::new(
            vec![0.1, 1.0 / 3.0, -2.5e-17, 123456789.12345679],
            2,
            vec![0, 1],
            vec!["a".into(), "b".into()],
            vec!["x".into(), "y".into()],
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("real.csv");
        write_csv(&d, &path).unwrap();
        let loaded: Dataset<f64> = load_csv(&path, &LabelColumn::Name("label".into())).unwrap();
        assert_eq!(loaded, d);
    }

    #[test]
    fn load_csv_reports_bad_cell_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "f0,f1,label").unwrap();
        writeln!(f, "1,2,x").unwrap();
        writeln!(f, "1,abc,y").unwrap();
        drop(f);
        let err = load_csv::<f64>(&path, &LabelColumn::Name("label".into())).unwrap_err();
        match err {
            Error::CsvCell { row, column, value, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "f1");
                assert_eq!(value, "abc");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn load_csv_rejects_header_only_files_and_bad_columns() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        std::fs::write(&path, "f0,f1,label\n").unwrap();
        assert!(matches!(
            load_csv::<f64>(&path, &LabelColumn::Name("label".into())),
            Err(Error::NoInstances { .. })
        ));
        assert!(matches!(
            load_csv::<f64>(&path, &LabelColumn::Name("nope".into())),
            Err(Error::UnknownLabelColumn { .. })
        ));
        assert!(matches!(
            load_csv::<f64>(dir.path().join("missing.csv").as_path(), &LabelColumn::Name("label".into())),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn label_column_by_index() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("idx.csv");
        std::fs::write(&path, "a,b,c\n1,yes,2\n3,no,4\n").unwrap();
        let d: Dataset<f64> = load_csv(&path, &LabelColumn::Index(1)).unwrap();
        assert_eq!(d.n_features(), 2);
        assert_eq!(d.class_names(), &["yes".to_string(), "no".to_string()]);
        assert_eq!(d.feature_names(), &["a".to_string(), "c".to_string()]);
    }

    #[test]
    fn first_appearance_encoding() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("enc.csv");
        std::fs::write(&path, "f0,label\n1,beta\n2,alpha\n3,beta\n").unwrap();
        let d: Dataset<f64> = load_csv(&path, &LabelColumn::Name("label".into())).unwrap();
        assert_eq!(d.class_names(), &["beta".to_string(), "alpha".to_string()]);
        assert_eq!(d.labels(), &[0, 1, 0]);
    }

    #[test]
    fn apply_order_reorders_jointly_and_validates() {
        let d = toy();
        let order = one_based_order(&TOY_ORDERS[1].1).unwrap();
        let b = d.apply_order(&order).unwrap();
        // First row of ordering B is instance 14: features (5, 4), class "1".
        assert_eq!(b.row(0), &[5.0, 4.0]);
        assert_eq!(b.class_names()[b.label(0) as usize], "1");

        let identity: Vec<usize> = (0..14).collect();
        assert_eq!(d.apply_order(&identity).unwrap(), d);

        let inverse = {
            let mut inv = vec![0usize; 14];
            for (pos, &src) in order.iter().enumerate() {
                inv[src] = pos;
            }
            inv
        };
        assert_eq!(b.apply_order(&inverse).unwrap(), d);

        let mut repeated = order.clone();
        repeated[0] = repeated[1];
        assert!(matches!(
            d.apply_order(&repeated),
            Err(Error::InvalidOrder(_))
        ));
        assert!(matches!(
            d.apply_order(&order[..5]),
            Err(Error::InvalidOrder(_))
        ));
    }

    #[test]
    fn split_sizes_and_determinism() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ten.csv");
        let mut body = String::from("f0,label\n");
        for i in 0..10 {
            body.push_str(&format!("{i},{}\n", i % 2));
        }
        std::fs::write(&path, body).unwrap();
        let d: Dataset<f64> = load_csv(&path, &LabelColumn::Name("label".into())).unwrap();

        let (train, test) = train_test_split(&d, 0.2, 7, false).unwrap();
        assert_eq!(train.n_instances(), 8);
        assert_eq!(test.n_instances(), 2);

        let (train2, test2) = train_test_split(&d, 0.2, 7, false).unwrap();
        assert_eq!(train, train2);
        assert_eq!(test, test2);

        // Union of both sides is the original multiset of rows.
        let mut rows: Vec<Vec<u8>> = (0..train.n_instances())
            .map(|i| format!("{:?}{}", train.row(i), train.label(i)).into_bytes())
            .chain((0..test.n_instances()).map(|i| {
                format!("{:?}{}", test.row(i), test.label(i)).into_bytes()
            }))
            .collect();
        rows.sort();
        let mut expected: Vec<Vec<u8>> = (0..d.n_instances())
            .map(|i| format!("{:?}{}", d.row(i), d.label(i)).into_bytes())
            .collect();
        expected.sort();
        assert_eq!(rows, expected);
    }

    #[test]
    fn stratified_split_keeps_class_quotas() {
        let d = toy();
        let (train, test) = train_test_split(&d, 0.25, 3, true).unwrap();
        let train_counts = train.label_sequence().counts();
        // ceil(8 * 0.75) = 6 of class "2", ceil(6 * 0.75) = 5 of class "1".
        assert_eq!(train_counts, vec![6, 5]);
        assert_eq!(test.n_instances(), 3);
    }

    #[test]
    fn split_rejects_degenerate_requests() {
        let d = toy();
        assert!(matches!(
            train_test_split(&d, 0.0, 1, false),
            Err(Error::InvalidSplit(_))
        ));
        assert!(matches!(
            train_test_split(&d, 1.0, 1, false),
            Err(Error::InvalidSplit(_))
        ));
        // 2 rows with tiny test fraction: everything lands in train.
        let two = d.select(&[0, 8]);
        assert!(matches!(
            train_test_split(&two, 0.2, 1, false),
            Err(Error::InvalidSplit(_))
        ));
    }

    #[test]
    fn macro_f1_reference_cases() {
        // Perfect predictions.
        assert_eq!(macro_f1(&[0, 1, 2, 1], &[0, 1, 2, 1], 3).unwrap(), 1.0);

        // Half right in both classes: per-class F1 0.5 and 0.5.
        let m = macro_f1(&[0, 0, 1, 1], &[0, 1, 0, 1], 2).unwrap();
        assert!((m - 0.5).abs() < 1e-12);

        // Predictions collapse onto one class: F1 = (2/3 + 0) / 2.
        let m = macro_f1(&[0, 1], &[0, 0], 2).unwrap();
        assert!((m - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn macro_f1_averages_only_present_classes() {
        // Class 2 exists in the universe but occurs nowhere; the mean runs
        // over classes 0 and 1 only.
        let m = macro_f1(&[0, 1], &[0, 1], 3).unwrap();
        assert_eq!(m, 1.0);
    }

    #[test]
    fn macro_f1_relabeling_symmetry() {
        let y_true = [0u32, 1, 1, 0, 1, 0, 0];
        let y_pred = [0u32, 1, 0, 0, 1, 1, 0];
        let swap = |l: u32| 1 - l;
        let swapped_true: Vec<u32> = y_true.iter().map(|&l| swap(l)).collect();
        let swapped_pred: Vec<u32> = y_pred.iter().map(|&l| swap(l)).collect();
        assert_eq!(
            macro_f1(&y_true, &y_pred, 2).unwrap(),
            macro_f1(&swapped_true, &swapped_pred, 2).unwrap()
        );
    }

    #[test]
    fn eval_report_reconciles() {
        let names = vec!["a".to_string(), "b".to_string()];
        let report = eval_report(&[0, 0, 1, 1], &[0, 1, 1, 1], &names).unwrap();
        assert_eq!(report.confusion, vec![vec![1, 1], vec![0, 2]]);
        let total: usize = report.confusion.iter().flatten().sum();
        assert_eq!(total, 4);
        assert!((report.precision[0] - 1.0).abs() < 1e-12);
        assert!((report.recall[0] - 0.5).abs() < 1e-12);
        assert!(report.macro_f1 > 0.0 && report.macro_f1 <= 1.0);
    }

    #[test]
    fn eval_mismatch_errors() {
        assert!(matches!(
            macro_f1(&[0, 1], &[0], 2),
            Err(Error::EvalMismatch(_))
        ));
        assert!(matches!(macro_f1(&[], &[], 2), Err(Error::EvalMismatch(_))));
        assert!(matches!(
            macro_f1(&[0, 5], &[0, 1], 2),
            Err(Error::EvalMismatch(_))
        ));
    }
}
