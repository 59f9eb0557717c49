//! Stratified k-fold cross-validation, guessing baselines, and error
//! tables for head-to-head classifier comparison.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::induction::{build_tree_on, InductionConfig};

/// Assignment of every instance to one of `k` folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    /// Per instance index, a fold id in `[0, k)`.
    pub assignments: Vec<u32>,
}

impl FoldPlan {
    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &f in &self.assignments {
            sizes[f as usize] += 1;
        }
        sizes
    }

    /// Instance indices of one fold.
    pub fn test_indices(&self, fold: usize) -> Vec<u32> {
        self.assignments
            .iter()
            .enumerate()
            .filter(|(_, &f)| f as usize == fold)
            .map(|(i, _)| i as u32)
            .collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<u32> {
        self.assignments
            .iter()
            .enumerate()
            .filter(|(_, &f)| f as usize != fold)
            .map(|(i, _)| i as u32)
            .collect()
    }
}

/// Partitions a dataset into `k` folds, deterministically under `seed`.
/// Fold sizes differ by at most one; with stratification each class also
/// spreads across folds with per-fold counts differing by at most one.
pub fn make_folds(d: &Dataset, k: usize, seed: u64, stratified: bool) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::Invalid(format!("k must be at least 2, got {k}")));
    }
    if k > d.len() {
        return Err(Error::Invalid(format!(
            "k = {k} exceeds the {} available instances",
            d.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = vec![0u32; d.len()];
    if stratified {
        // deal each class round-robin, carrying the fold offset across
        // classes so global sizes stay balanced too
        let mut offset = 0usize;
        for class in d.class_domain() {
            let mut indices: Vec<u32> = (0..d.len() as u32)
                .filter(|&i| d.instances()[i as usize].class() == class)
                .collect();
            indices.shuffle(&mut rng);
            for (pos, &i) in indices.iter().enumerate() {
                assignments[i as usize] = ((offset + pos) % k) as u32;
            }
            offset = (offset + indices.len()) % k;
        }
    } else {
        let mut indices: Vec<u32> = (0..d.len() as u32).collect();
        indices.shuffle(&mut rng);
        for (pos, &i) in indices.iter().enumerate() {
            assignments[i as usize] = (pos % k) as u32;
        }
    }
    Ok(FoldPlan { k, seed, assignments })
}

/// Cross-validation outcome: per-fold and mean accuracy, per-class error
/// counts aggregated over all test folds, and the confusion matrix
/// (true class x predicted class).
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub per_fold_accuracy: Vec<f64>,
    pub mean_accuracy: f64,
    /// Per class: error count and percent of that class's instances.
    pub per_class_errors: BTreeMap<String, (usize, f64)>,
    /// Per true class, instance count in the full dataset.
    pub class_totals: BTreeMap<String, usize>,
    pub confusion: BTreeMap<String, BTreeMap<String, usize>>,
    pub n: usize,
}

impl EvalReport {
    pub fn total_errors(&self) -> usize {
        self.per_class_errors.values().map(|(c, _)| *c).sum()
    }

    pub fn error_table(&self, label: impl Into<String>) -> ErrorTable {
        ErrorTable::new(
            label,
            self.class_totals
                .iter()
                .map(|(class, &total)| {
                    (class.clone(), total, self.per_class_errors[class].0)
                })
                .collect(),
            self.n,
        )
    }

    /// Fixed-layout ASCII report.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Folds: {}", self.per_fold_accuracy.len());
        for (i, acc) in self.per_fold_accuracy.iter().enumerate() {
            let _ = writeln!(out, "  fold {:>2}: {:.4}", i, acc);
        }
        let _ = writeln!(out, "Mean accuracy: {:.4}", self.mean_accuracy);
        let _ = writeln!(
            out,
            "Total errors: {} of {} ({:.1}%)",
            self.total_errors(),
            self.n,
            100.0 * self.total_errors() as f64 / self.n as f64
        );
        out.push_str(&self.error_table("errors").render_class_rows());
        out.push_str("Confusion (rows = true class):\n");
        let classes: Vec<&String> = self.class_totals.keys().collect();
        let width = classes.iter().map(|c| c.len()).max().unwrap_or(1).max(5);
        let _ = write!(out, "  {:>width$}", "");
        for c in &classes {
            let _ = write!(out, " {c:>width$}");
        }
        out.push('\n');
        for t in &classes {
            let _ = write!(out, "  {t:>width$}");
            for p in &classes {
                let count = self
                    .confusion
                    .get(*t)
                    .and_then(|row| row.get(*p))
                    .copied()
                    .unwrap_or(0);
                let _ = write!(out, " {count:>width$}");
            }
            out.push('\n');
        }
        out
    }

    /// Machine-readable dump: `key=value` lines, then per-class and
    /// confusion CSV blocks.
    pub fn render_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "k={}", self.per_fold_accuracy.len());
        let _ = writeln!(out, "n={}", self.n);
        let _ = writeln!(out, "mean_accuracy={:.6}", self.mean_accuracy);
        let _ = writeln!(out, "total_errors={}", self.total_errors());
        for (i, acc) in self.per_fold_accuracy.iter().enumerate() {
            let _ = writeln!(out, "fold_accuracy_{i}={acc:.6}");
        }
        out.push_str("class,total,errors,error_percent\n");
        for (class, &total) in &self.class_totals {
            let (errors, pct) = self.per_class_errors[class];
            let _ = writeln!(out, "{class},{total},{errors},{pct:.3}");
        }
        out.push_str("true,predicted,count\n");
        for (t, row) in &self.confusion {
            for (p, count) in row {
                let _ = writeln!(out, "{t},{p},{count}");
            }
        }
        out
    }
}

/// Trains on each fold's complement and tests on the fold, aggregating
/// per-class errors over all test sets.
pub fn cross_validate(
    d: &Dataset,
    k: usize,
    seed: u64,
    stratified: bool,
    cfg: &InductionConfig,
) -> Result<EvalReport> {
    let plan = make_folds(d, k, seed, stratified)?;
    let mut per_fold_accuracy = Vec::with_capacity(k);
    let mut per_class_errors: BTreeMap<String, usize> = BTreeMap::new();
    let mut confusion: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for class in d.class_domain() {
        per_class_errors.insert(class.clone(), 0);
        confusion.insert(class.clone(), BTreeMap::new());
    }

    for fold in 0..k {
        let train = plan.train_indices(fold);
        let test = plan.test_indices(fold);
        let tree = build_tree_on(d, &train, cfg).map_err(|e| Error::InFold {
            fold,
            source: Box::new(e),
        })?;
        let mut correct = 0usize;
        for &i in &test {
            let inst = &d.instances()[i as usize];
            let predicted = tree
                .classify(d.schema(), inst)
                .map_err(|e| Error::InFold { fold, source: Box::new(e) })?
                .to_string();
            if predicted == inst.class() {
                correct += 1;
            } else {
                *per_class_errors.get_mut(inst.class()).expect("class known") += 1;
            }
            *confusion
                .get_mut(inst.class())
                .expect("class known")
                .entry(predicted)
                .or_insert(0) += 1;
        }
        per_fold_accuracy.push(correct as f64 / test.len() as f64);
    }

    let mean_accuracy = per_fold_accuracy.iter().sum::<f64>() / k as f64;
    let mut class_totals = BTreeMap::new();
    for (class, (count, _)) in d.class_distribution() {
        class_totals.insert(class, count);
    }
    let per_class_errors = per_class_errors
        .into_iter()
        .map(|(class, errors)| {
            let pct = 100.0 * errors as f64 / class_totals[&class] as f64;
            (class, (errors, pct))
        })
        .collect();

    Ok(EvalReport {
        per_fold_accuracy,
        mean_accuracy,
        per_class_errors,
        class_totals,
        confusion,
        n: d.len(),
    })
}

/// Guessing baselines over the class distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    /// Always answer the most frequent class.
    Majority,
    /// Guess classes in proportion to their frequency; expected accuracy
    /// is the sum of squared class fractions.
    ProbMatching,
}

impl BaselineKind {
    pub fn parse(s: &str) -> Option<BaselineKind> {
        match s {
            "majority" => Some(BaselineKind::Majority),
            "prob_matching" | "prob-matching" => Some(BaselineKind::ProbMatching),
            _ => None,
        }
    }
}

pub fn baseline_accuracy(d: &Dataset, kind: BaselineKind) -> f64 {
    let dist = d.class_distribution();
    match kind {
        BaselineKind::Majority => dist
            .values()
            .map(|(_, frac)| *frac)
            .fold(0.0, f64::max),
        BaselineKind::ProbMatching => dist.values().map(|(_, frac)| frac * frac).sum(),
    }
}

/// Per-class error counts of one classifier on one dataset, ready for
/// side-by-side comparison. Rows are sorted by descending class frequency,
/// ties by class token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorTable {
    pub label: String,
    /// (class, instances of that class, errors on them)
    pub rows: Vec<(String, usize, usize)>,
    pub total_errors: usize,
    pub n: usize,
}

impl ErrorTable {
    pub fn new(label: impl Into<String>, mut rows: Vec<(String, usize, usize)>, n: usize) -> ErrorTable {
        rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let total_errors = rows.iter().map(|r| r.2).sum();
        ErrorTable { label: label.into(), rows, total_errors, n }
    }

    fn render_class_rows(&self) -> String {
        let mut out = String::new();
        let width = self.rows.iter().map(|r| r.0.len()).max().unwrap_or(5).max(5);
        let _ = writeln!(out, "  {:<width$} {:>7} {:>7} {:>7}", "class", "total", "errors", "pct");
        for (class, total, errors) in &self.rows {
            let pct = 100.0 * *errors as f64 / *total as f64;
            let _ = writeln!(out, "  {class:<width$} {total:>7} {errors:>7} {pct:>6.1}%");
        }
        out
    }

    pub fn render(&self) -> String {
        let mut out = format!("Errors ({}):\n", self.label);
        out.push_str(&self.render_class_rows());
        let _ = writeln!(
            out,
            "  {:<width$} {:>7} {:>7} {:>6.1}%",
            "Total",
            self.n,
            self.total_errors,
            100.0 * self.total_errors as f64 / self.n as f64,
            width = self.rows.iter().map(|r| r.0.len()).max().unwrap_or(5).max(5)
        );
        out
    }
}

/// Renders two error tables side by side with per-class deltas. The tables
/// must describe the same dataset (same classes with the same counts).
pub fn compare(a: &ErrorTable, b: &ErrorTable) -> Result<String> {
    let rows_a: Vec<&(String, usize, usize)> = a.rows.iter().collect();
    let rows_b: Vec<&(String, usize, usize)> = b.rows.iter().collect();
    if a.n != b.n
        || rows_a.len() != rows_b.len()
        || rows_a
            .iter()
            .zip(&rows_b)
            .any(|(x, y)| x.0 != y.0 || x.1 != y.1)
    {
        return Err(Error::Invalid(
            "cannot compare error tables from different datasets or class domains".into(),
        ));
    }
    let class_width = a
        .rows
        .iter()
        .map(|r| r.0.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let col_a = a.label.len().max(6);
    let col_b = b.label.len().max(6);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<class_width$} {:>col_a$} {:>col_b$} {:>6}",
        "Class", a.label, b.label, "delta"
    );
    for (x, y) in rows_a.iter().zip(&rows_b) {
        let delta = y.2 as i64 - x.2 as i64;
        let _ = writeln!(
            out,
            "{:<class_width$} {:>col_a$} {:>col_b$} {:>+6}",
            x.0, x.2, y.2, delta
        );
    }
    let _ = writeln!(
        out,
        "{:<class_width$} {:>col_a$} {:>col_b$} {:>+6}",
        "Total",
        a.total_errors,
        b.total_errors,
        b.total_errors as i64 - a.total_errors as i64
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Feature, FeatureRole, Instance, Schema};

    fn schema(names: &[&str]) -> Schema {
        Schema::new(
            names
                .iter()
                .map(|n| Feature { name: (*n).to_string(), role: FeatureRole::Other })
                .collect(),
            "class",
        )
        .unwrap()
    }

    fn inst(vals: &[&str], class: &str) -> Instance {
        Instance::new(vals.iter().map(|v| v.to_string()).collect(), class)
    }

    fn tiny_dataset(rows: &[(&str, &str)]) -> Dataset {
        Dataset::from_instances(
            schema(&["v"]),
            rows.iter().map(|(v, c)| inst(&[v], c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn folds_cover_everything_exactly_once() {
        let d = tiny_dataset(&[("a", "A"), ("b", "A"), ("c", "B"), ("d", "B")]);
        let plan = make_folds(&d, 2, 7, false).unwrap();
        assert_eq!(plan.fold_sizes(), vec![2, 2]);
        let mut seen: Vec<u32> = (0..2).flat_map(|f| plan.test_indices(f)).collect();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3]);
    }

    #[test]
    fn folds_are_reproducible_under_seed() {
        let d = tiny_dataset(&[
            ("a", "A"), ("b", "A"), ("c", "B"), ("d", "B"), ("e", "A"), ("f", "B"), ("g", "A"),
        ]);
        let p1 = make_folds(&d, 3, 99, true).unwrap();
        let p2 = make_folds(&d, 3, 99, true).unwrap();
        assert_eq!(p1, p2);
        let p3 = make_folds(&d, 3, 100, true).unwrap();
        assert!(p1 == p3 || p1.assignments != p3.assignments); // may or may not differ, but must be valid
    }

    #[test]
    fn stratification_balances_classes() {
        // 10 A's and 5 B's over 5 folds: every fold gets 2 A's and 1 B
        let rows: Vec<(String, String)> = (0..10)
            .map(|i| (format!("a{i}"), "A".to_string()))
            .chain((0..5).map(|i| (format!("b{i}"), "B".to_string())))
            .collect();
        let d = Dataset::from_instances(
            schema(&["v"]),
            rows.iter().map(|(v, c)| inst(&[v], c)).collect(),
        )
        .unwrap();
        let plan = make_folds(&d, 5, 3, true).unwrap();
        for fold in 0..5 {
            let test = plan.test_indices(fold);
            let a = test
                .iter()
                .filter(|&&i| d.instances()[i as usize].class() == "A")
                .count();
            let b = test.len() - a;
            assert_eq!((a, b), (2, 1), "fold {fold}");
        }
    }

    #[test]
    fn k_larger_than_dataset_is_an_error() {
        let d = tiny_dataset(&[("a", "A"), ("b", "B")]);
        assert!(make_folds(&d, 3, 0, false).is_err());
    }

    #[test]
    fn constant_class_dataset_cross_validates_perfectly() {
        let d = tiny_dataset(&[("a", "A"), ("b", "A"), ("c", "A"), ("d", "A")]);
        let report = cross_validate(&d, 2, 1, true, &InductionConfig::default()).unwrap();
        assert_eq!(report.mean_accuracy, 1.0);
        assert_eq!(report.total_errors(), 0);
    }

    #[test]
    fn confusion_rows_sum_to_class_totals() {
        let d = tiny_dataset(&[
            ("a", "A"), ("a", "A"), ("b", "B"), ("b", "B"), ("c", "A"), ("c", "B"),
        ]);
        let report = cross_validate(&d, 3, 5, true, &InductionConfig::default()).unwrap();
        for (class, &total) in &report.class_totals {
            let row_sum: usize = report.confusion[class].values().sum();
            assert_eq!(row_sum, total, "class {class}");
        }
        let off_diag: usize = report
            .confusion
            .iter()
            .flat_map(|(t, row)| row.iter().filter(move |(p, _)| *p != t))
            .map(|(_, c)| *c)
            .sum();
        assert_eq!(off_diag, report.total_errors());
    }

    #[test]
    fn baselines_on_uniform_two_class_data() {
        let d = tiny_dataset(&[("a", "A"), ("b", "B")]);
        assert!((baseline_accuracy(&d, BaselineKind::Majority) - 0.5).abs() < 1e-12);
        assert!((baseline_accuracy(&d, BaselineKind::ProbMatching) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn prob_matching_never_beats_majority() {
        let d = tiny_dataset(&[("a", "A"), ("b", "A"), ("c", "A"), ("d", "B"), ("e", "C")]);
        assert!(
            baseline_accuracy(&d, BaselineKind::ProbMatching)
                <= baseline_accuracy(&d, BaselineKind::Majority) + 1e-12
        );
    }

    #[test]
    fn compare_rejects_mismatched_domains() {
        let t1 = ErrorTable::new("x", vec![("A".into(), 3, 1)], 3);
        let t2 = ErrorTable::new("y", vec![("B".into(), 3, 1)], 3);
        assert!(compare(&t1, &t2).is_err());
    }

    #[test]
    fn compare_of_identical_tables_has_zero_deltas() {
        let t1 = ErrorTable::new("left", vec![("A".into(), 3, 1), ("B".into(), 2, 0)], 5);
        let t2 = ErrorTable::new("right", vec![("A".into(), 3, 1), ("B".into(), 2, 0)], 5);
        let text = compare(&t1, &t2).unwrap();
        for line in text.lines().skip(1) {
            assert!(line.trim_end().ends_with("+0"), "line: {line}");
        }
    }
}
