//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use pdt::data::{eval_report, load_csv, one_based_order, LabelColumn};
use pdt::etc::{etc_value, is_homogeneous, nsrps_step, SymbolSequence};
use pdt::forest::{fit_forest, permutation_order, BaggingMode, ForestConfig};
use pdt::impurity::{gini, shannon_entropy, structural_impurity, LabelSequence};
use pdt::tree::{fit, TrainConfig};
use pdt::{Dataset64, Model};

use crate::args::{
    ForestTrainArgs, MeasureArg, ModeArg, OutputFormat, ReproduceArgs, TrainArgs, WhatArg,
};
use crate::error::CliError;
use crate::repro;

fn emit<T: Serialize>(format: OutputFormat, text: &str, value: &T) {
    match format {
        OutputFormat::Text => println!("{text}"),
        OutputFormat::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(value).expect("report serializes")
            );
        }
    }
}

/// Comma-separated non-negative integers; a bare empty string is an empty
/// sequence.
fn parse_symbols(raw: &str) -> Result<Vec<u32>, CliError> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|token| {
            token
                .trim()
                .parse::<u32>()
                .map_err(|_| CliError::Usage(format!("not a non-negative integer: {token:?}")))
        })
        .collect()
}

pub fn cmd_etc(sequence: &str, trace: bool, format: OutputFormat) -> Result<(), CliError> {
    let symbols = parse_symbols(sequence)?;
    let seq = SymbolSequence::new(symbols);
    let value = etc_value(&seq);

    let mut text = String::new();
    let mut steps_json = Vec::new();
    if trace {
        let render =
            |s: &SymbolSequence| s.symbols().iter().map(u32::to_string).collect::<Vec<_>>();
        let mut current = seq.clone();
        let _ = writeln!(text, "{}", render(&current).join(","));
        while !is_homogeneous(&current) {
            let (next, pair) = nsrps_step(&current)?;
            let fresh = next
                .symbols()
                .iter()
                .copied()
                .max()
                .expect("substitution output is non-empty");
            let _ = writeln!(
                text,
                " -> replace ({},{}) with {}: {}",
                pair.0,
                pair.1,
                fresh,
                render(&next).join(",")
            );
            steps_json.push(json!({
                "pair": [pair.0, pair.1],
                "replacement": fresh,
                "length_after": next.len(),
                "sequence": next.symbols(),
            }));
            current = next;
        }
    }
    let _ = write!(text, "etc: {value}");
    let report = json!({ "value": value, "trace": if trace { Some(&steps_json) } else { None } });
    emit(format, &text, &report);
    Ok(())
}

pub fn cmd_impurity(labels: &str, measure: MeasureArg, format: OutputFormat) -> Result<(), CliError> {
    let symbols = parse_symbols(labels)?;
    if symbols.is_empty() {
        return Err(CliError::Usage("at least one label is required".into()));
    }
    let sequence = LabelSequence::from_labels(symbols);

    let mut lines = Vec::new();
    let mut report = serde_json::Map::new();
    if matches!(measure, MeasureArg::Etc | MeasureArg::All) {
        let v = structural_impurity(&sequence);
        lines.push(format!("structural_etc: {v}"));
        report.insert("structural_etc".into(), json!(v));
    }
    if matches!(measure, MeasureArg::Entropy | MeasureArg::All) {
        let v: f64 = shannon_entropy(&sequence)?;
        lines.push(format!("shannon_entropy_bits: {v:.6}"));
        report.insert("shannon_entropy_bits".into(), json!(v));
    }
    if matches!(measure, MeasureArg::Gini | MeasureArg::All) {
        let v: f64 = gini(&sequence)?;
        lines.push(format!("gini: {v:.6}"));
        report.insert("gini".into(), json!(v));
    }
    emit(format, &lines.join("\n"), &serde_json::Value::Object(report));
    Ok(())
}

/// Read a permutation file: comma-separated 1-based instance ids, whitespace
/// tolerated.
fn read_order_file(path: &Path) -> Result<Vec<usize>, CliError> {
    let raw = std::fs::read_to_string(path).map_err(pdt::Error::from)?;
    let one_based: Vec<usize> = raw
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("not an instance id: {t:?}")))
        })
        .collect::<Result<_, _>>()?;
    one_based_order(&one_based).map_err(CliError::Domain)
}

fn load_dataset(path: &Path, label_col: &str) -> Result<Dataset64, CliError> {
    Ok(load_csv(path, &LabelColumn::parse(label_col))?)
}

pub fn cmd_train(args: &TrainArgs, format: OutputFormat) -> Result<(), CliError> {
    let mut dataset = load_dataset(&args.data, &args.label_col)?;
    if let Some(order_path) = &args.order {
        dataset = dataset.apply_order(&read_order_file(order_path)?)?;
    } else if let Some(seed) = args.seed {
        let order = permutation_order(dataset.n_instances(), 0, seed);
        dataset = dataset.apply_order(&order)?;
    }
    let config = TrainConfig {
        impurity_kind: args.impurity.into(),
        max_depth: args.max_depth,
        min_gain: args.min_gain,
        tie_break: Default::default(),
    };
    let tree = fit(&dataset, &config)?;
    std::fs::write(&args.out, tree.serialize()).map_err(pdt::Error::from)?;
    if let Some(dot_path) = &args.dot {
        std::fs::write(dot_path, tree.to_dot()).map_err(pdt::Error::from)?;
    }

    let mut text = format!(
        "trained decision tree ({}, max_depth {}) on {} instances\n\
         depth {}, {} nodes, {} leaves\nmodel written to {}",
        config.impurity_kind,
        config.max_depth,
        dataset.n_instances(),
        tree.depth(),
        tree.node_count(),
        tree.leaf_count(),
        args.out.display(),
    );
    if let Some(dot_path) = &args.dot {
        let _ = write!(text, "\ndot written to {}", dot_path.display());
    }
    let report = json!({
        "impurity": config.impurity_kind,
        "max_depth": config.max_depth,
        "instances": dataset.n_instances(),
        "depth": tree.depth(),
        "nodes": tree.node_count(),
        "leaves": tree.leaf_count(),
        "model": args.out.display().to_string(),
        "dot": args.dot.as_ref().map(|p| p.display().to_string()),
    });
    emit(format, &text, &report);
    Ok(())
}

pub fn cmd_forest_train(args: &ForestTrainArgs, format: OutputFormat) -> Result<(), CliError> {
    let dataset = load_dataset(&args.data, &args.label_col)?;
    let config = ForestConfig {
        n_estimators: args.n_estimators,
        seed: args.seed,
        tree_config: TrainConfig {
            impurity_kind: args.impurity.into(),
            max_depth: args.max_depth,
            min_gain: args.min_gain,
            tie_break: Default::default(),
        },
        bagging_mode: match args.mode {
            ModeArg::Permutation => BaggingMode::Permutation,
            ModeArg::Bootstrap => BaggingMode::Bootstrap,
        },
    };
    let model = fit_forest(&dataset, &config)?;
    std::fs::write(&args.out, model.serialize()).map_err(pdt::Error::from)?;

    let mut text = format!(
        "trained {} forest: {} trees ({}, max_depth {}), seed {}\n",
        match args.mode {
            ModeArg::Permutation => "permutation",
            ModeArg::Bootstrap => "bootstrap",
        },
        model.n_trees(),
        config.tree_config.impurity_kind,
        config.tree_config.max_depth,
        config.seed,
    );
    let mut tree_reports = Vec::new();
    for (i, tree) in model.trees.iter().enumerate() {
        let _ = writeln!(
            text,
            "tree {i:>3}: depth {}, {} nodes, {} leaves",
            tree.depth(),
            tree.node_count(),
            tree.leaf_count()
        );
        tree_reports.push(json!({
            "index": i,
            "depth": tree.depth(),
            "nodes": tree.node_count(),
            "leaves": tree.leaf_count(),
        }));
    }
    let _ = write!(text, "model written to {}", args.out.display());
    let report = json!({
        "mode": config.bagging_mode,
        "n_estimators": config.n_estimators,
        "seed": config.seed,
        "trees": tree_reports,
        "model": args.out.display().to_string(),
    });
    emit(format, &text, &report);
    Ok(())
}

fn load_model(path: &Path) -> Result<Model<f64>, CliError> {
    let raw = std::fs::read_to_string(path).map_err(pdt::Error::from)?;
    Ok(Model::deserialize(&raw)?)
}

pub fn cmd_evaluate(
    model_path: &Path,
    data_path: &Path,
    label_col: &str,
    format: OutputFormat,
) -> Result<(), CliError> {
    let model = load_model(model_path)?;
    let dataset = load_dataset(data_path, label_col)?;
    if dataset.n_features() != model.n_features() {
        return Err(pdt::Error::FeatureCountMismatch {
            expected: model.n_features(),
            actual: dataset.n_features(),
        }
        .into());
    }
    // Ground truth mapped into the model's class-id space by name.
    let to_model_id = |name: &str| -> Result<u32, CliError> {
        model
            .class_names()
            .iter()
            .position(|n| n == name)
            .map(|i| i as u32)
            .ok_or_else(|| {
                CliError::Domain(pdt::Error::EvalMismatch(format!(
                    "class {name:?} unknown to the model"
                )))
            })
    };
    let mut y_true = Vec::with_capacity(dataset.n_instances());
    let mut y_pred = Vec::with_capacity(dataset.n_instances());
    for i in 0..dataset.n_instances() {
        y_true.push(to_model_id(
            &dataset.class_names()[dataset.label(i) as usize],
        )?);
        y_pred.push(model.predict(dataset.row(i))?);
    }
    let report = eval_report(&y_true, &y_pred, model.class_names())?;

    let mut text = String::from("confusion matrix (rows: true, columns: predicted)\n");
    let width = report
        .class_names
        .iter()
        .map(|n| n.len())
        .max()
        .unwrap_or(1)
        .max(6);
    let _ = write!(text, "{:width$}", "");
    for name in &report.class_names {
        let _ = write!(text, " {name:>width$}");
    }
    text.push('\n');
    for (i, name) in report.class_names.iter().enumerate() {
        let _ = write!(text, "{name:>width$}");
        for count in &report.confusion[i] {
            let _ = write!(text, " {count:>width$}");
        }
        text.push('\n');
    }
    for (i, name) in report.class_names.iter().enumerate() {
        let _ = writeln!(
            text,
            "class {name}: precision {:.3}, recall {:.3}, f1 {:.3}",
            report.precision[i], report.recall[i], report.f1[i]
        );
    }
    let _ = write!(
        text,
        "macro f1: {:.4}\nnote: per-class f1 uses the 0/0 -> 0 convention",
        report.macro_f1
    );
    emit(format, &text, &report);
    Ok(())
}

pub fn cmd_predict(model_path: &Path, features: &str, format: OutputFormat) -> Result<(), CliError> {
    let model = load_model(model_path)?;
    let instance: Vec<f64> = features
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("not a feature value: {t:?}")))
        })
        .collect::<Result<_, _>>()?;
    let class = model.predict(&instance)?;
    let name = &model.class_names()[class as usize];
    emit(
        format,
        name,
        &json!({ "class": class, "class_name": name }),
    );
    Ok(())
}

fn render_rows(title: &str, rows: &[repro::CheckRow]) -> (String, bool) {
    let mut text = String::new();
    let name_width = rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let expected_width = rows
        .iter()
        .map(|r| r.expected.len())
        .max()
        .unwrap_or(8)
        .max(8);
    let _ = writeln!(
        text,
        "{:name_width$}  {:>expected_width$}  {:>10}  result",
        "name", "expected", "computed"
    );
    let mut all_pass = true;
    for row in rows {
        all_pass &= row.pass;
        let _ = writeln!(
            text,
            "{:name_width$}  {:>expected_width$}  {:>10}  {}",
            row.name,
            row.expected,
            row.computed,
            if row.pass { "PASS" } else { "FAIL" }
        );
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    let _ = write!(text, "{title}: {passed}/{} PASS", rows.len());
    (text, all_pass)
}

pub fn cmd_reproduce(args: &ReproduceArgs, format: OutputFormat) -> Result<(), CliError> {
    match args.what {
        WhatArg::Table1 => {
            let rows = repro::table1_rows();
            let (text, all_pass) = render_rows("table1", &rows);
            emit(format, &text, &rows);
            if !all_pass {
                return Err(CliError::Check("table1 has failing rows".into()));
            }
        }
        WhatArg::Table3 => {
            let rows = repro::table3_rows();
            let (text, all_pass) = render_rows("table3", &rows);
            emit(format, &text, &rows);
            if !all_pass {
                return Err(CliError::Check("table3 has failing rows".into()));
            }
        }
        WhatArg::Figures => {
            let checks = repro::figure_checks();
            let mut text = String::new();
            let mut all_pass = true;
            for check in &checks {
                all_pass &= check.pass();
                let _ = writeln!(
                    text,
                    "ordering {}: structure {}, dot golden {}",
                    check.name,
                    if check.structure_pass { "PASS" } else { "FAIL" },
                    if check.golden_pass { "PASS" } else { "FAIL" }
                );
            }
            let passed = checks.iter().filter(|c| c.pass()).count();
            let _ = write!(text, "figures: {passed}/{} PASS", checks.len());
            emit(format, &text, &checks);
            if !all_pass {
                return Err(CliError::Check("figure reproduction failed".into()));
            }
        }
        WhatArg::Table4 => {
            let dir = repro::data_dir(args.data_dir.clone());
            let outcomes = repro::table4_outcomes(&dir, args.reps, args.seed, args.stratify)?;
            let mut text = String::new();
            let mut all_pass = true;
            let mut missing = Vec::new();
            for outcome in &outcomes {
                match outcome {
                    repro::BenchOutcome::Ran(r) => {
                        all_pass &= r.pass;
                        let reps: Vec<String> =
                            r.per_rep_f1.iter().map(|v| format!("{v:.3}")).collect();
                        let _ = writeln!(
                            text,
                            "{:<24} mean macro f1 {:.3} (published {:.3}, tolerance {:.2})  {}  [reps: {}; {:.1}s]",
                            r.key,
                            r.mean_f1,
                            r.published_f1,
                            repro::BENCH_TOLERANCE,
                            if r.pass { "PASS" } else { "FAIL" },
                            reps.join(", "),
                            r.seconds,
                        );
                    }
                    repro::BenchOutcome::Missing { key, path } => {
                        missing.push(key.clone());
                        let _ = writeln!(
                            text,
                            "{key:<24} MISSING ({} not found; run {} to fetch)",
                            path.display(),
                            repro::FETCH_SCRIPT
                        );
                    }
                }
            }
            let ran = outcomes.len() - missing.len();
            let _ = write!(text, "table4: {ran}/{} datasets ran", outcomes.len());
            emit(format, &text, &outcomes);
            if !missing.is_empty() {
                return Err(CliError::Check(format!(
                    "missing datasets: {}; run {} to fetch them",
                    missing.join(", "),
                    repro::FETCH_SCRIPT
                )));
            }
            if !all_pass {
                return Err(CliError::Check("table4 has failing datasets".into()));
            }
        }
    }
    Ok(())
}
