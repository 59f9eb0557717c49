//! Python bindings: the main types and operations of the rule-induction
//! toolkit as an extension module.
//!
//! ```python
//! import morphind_py as mp
//! data = mp.generate(n=1000, seed=7)
//! tree = mp.DecisionTree.train(data)
//! rules = tree.to_rules(data)
//! report = mp.cross_validate(data, k=10, seed=7)
//! ```

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use morphind as core;
use morphind::{
    BaselineKind, Instance, InductionConfig, Linkage, OverlapPolicy, SplitCriterion, ValueMetric,
};

fn to_py_err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn induction_config(
    criterion: &str,
    grouping: bool,
    min_split: usize,
    prune: bool,
    prune_cf: f64,
) -> PyResult<InductionConfig> {
    let criterion = SplitCriterion::parse(criterion)
        .ok_or_else(|| PyValueError::new_err(format!("unknown criterion '{criterion}'")))?;
    Ok(InductionConfig {
        criterion,
        grouping,
        min_split,
        prune,
        prune_cf,
        ..InductionConfig::default()
    })
}

/// Ordered feature columns plus the class column name.
#[pyclass(name = "Schema", frozen)]
#[derive(Clone)]
struct PySchema {
    inner: core::Schema,
}

#[pymethods]
impl PySchema {
    /// The built-in 12-feature syllable schema.
    #[staticmethod]
    fn diminutive12() -> PySchema {
        PySchema { inner: core::Schema::diminutive12() }
    }

    /// Parse a schema file's text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PySchema> {
        Ok(PySchema { inner: core::Schema::parse(text).map_err(to_py_err)? })
    }

    fn feature_names(&self) -> Vec<String> {
        self.inner.feature_names()
    }

    fn class_name(&self) -> String {
        self.inner.class_name().to_string()
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Schema({} features, class '{}')",
            self.inner.len(),
            self.inner.class_name()
        )
    }
}

/// An immutable corpus of categorical instances.
#[pyclass(name = "Dataset", frozen)]
struct PyDataset {
    inner: core::Dataset,
}

#[pymethods]
impl PyDataset {
    /// Parse corpus text (whitespace-separated tokens, last token the
    /// class, `#` comments).
    #[staticmethod]
    #[pyo3(signature = (text, schema=None))]
    fn parse(text: &str, schema: Option<&PySchema>) -> PyResult<PyDataset> {
        let schema = schema.map(|s| s.inner.clone()).unwrap_or_else(core::Schema::diminutive12);
        Ok(PyDataset { inner: core::Dataset::parse_corpus(text, &schema).map_err(to_py_err)? })
    }

    /// Read and parse a corpus file.
    #[staticmethod]
    #[pyo3(signature = (path, schema=None))]
    fn load(path: &str, schema: Option<&PySchema>) -> PyResult<PyDataset> {
        let schema = schema.map(|s| s.inner.clone()).unwrap_or_else(core::Schema::diminutive12);
        Ok(PyDataset { inner: core::Dataset::load(path, &schema).map_err(to_py_err)? })
    }

    fn schema(&self) -> PySchema {
        PySchema { inner: self.inner.schema().clone() }
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    /// Keep only the named features (original order).
    fn project(&self, keep: Vec<String>) -> PyResult<PyDataset> {
        Ok(PyDataset { inner: self.inner.project(&keep).map_err(to_py_err)? })
    }

    /// Per class: (count, fraction).
    fn class_distribution(&self) -> BTreeMap<String, (usize, f64)> {
        self.inner.class_distribution()
    }

    fn classes(&self) -> Vec<String> {
        self.inner.class_domain().to_vec()
    }

    /// Sorted observed values of one feature.
    fn value_domain(&self, feature: &str) -> PyResult<Vec<String>> {
        Ok(self.inner.value_domain(feature).map_err(to_py_err)?.to_vec())
    }

    /// All instances as (values, class) pairs.
    fn instances(&self) -> Vec<(Vec<String>, String)> {
        self.inner
            .instances()
            .iter()
            .map(|i| (i.values().to_vec(), i.class().to_string()))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset({} instances, {} features, {} classes)",
            self.inner.len(),
            self.inner.schema().len(),
            self.inner.class_domain().len()
        )
    }
}

/// A trained decision tree bound to the schema it was trained on.
#[pyclass(name = "DecisionTree", frozen)]
struct PyDecisionTree {
    inner: core::DecisionTree,
    schema: core::Schema,
}

#[pymethods]
impl PyDecisionTree {
    /// Induce a tree from a dataset.
    #[staticmethod]
    #[pyo3(signature = (dataset, criterion="gain_ratio", grouping=true, min_split=2,
                        prune=false, prune_cf=0.25))]
    fn train(
        dataset: &PyDataset,
        criterion: &str,
        grouping: bool,
        min_split: usize,
        prune: bool,
        prune_cf: f64,
    ) -> PyResult<PyDecisionTree> {
        let cfg = induction_config(criterion, grouping, min_split, prune, prune_cf)?;
        Ok(PyDecisionTree {
            inner: core::build_tree(&dataset.inner, &cfg).map_err(to_py_err)?,
            schema: dataset.inner.schema().clone(),
        })
    }

    /// Classify one instance given as a list of value tokens.
    fn classify(&self, values: Vec<String>) -> PyResult<String> {
        let inst = Instance::new(values, "?");
        Ok(self.inner.classify(&self.schema, &inst).map_err(to_py_err)?.to_string())
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    /// Convert to an ordered rule set using the dataset for the
    /// statistical evaluation.
    fn to_rules(&self, dataset: &PyDataset) -> PyResult<PyRuleSet> {
        Ok(PyRuleSet {
            inner: core::tree_to_rules(&self.inner, &dataset.inner).map_err(to_py_err)?,
        })
    }

    /// Value groups per node: (feature, path, groups) triples.
    fn categories(&self) -> Vec<(String, String, Vec<Vec<String>>)> {
        core::categories_from_tree(&self.inner)
            .into_iter()
            .map(|cat| {
                let path = match &cat.source {
                    core::CategorySource::TreeGrouping { path } => path.clone(),
                    _ => String::new(),
                };
                (
                    cat.feature,
                    path,
                    cat.groups
                        .into_iter()
                        .map(|(_, g)| g.into_iter().collect())
                        .collect(),
                )
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("DecisionTree({} nodes)", self.inner.node_count())
    }
}

/// An ordered if-then rule set with macros and a default class.
#[pyclass(name = "RuleSet", frozen)]
struct PyRuleSet {
    inner: core::RuleSet,
}

#[pymethods]
impl PyRuleSet {
    /// Parse rule-file text against a schema.
    #[staticmethod]
    #[pyo3(signature = (text, schema=None))]
    fn parse(text: &str, schema: Option<&PySchema>) -> PyResult<PyRuleSet> {
        let schema = schema.map(|s| s.inner.clone()).unwrap_or_else(core::Schema::diminutive12);
        Ok(PyRuleSet { inner: core::parse_rules(text, &schema).map_err(to_py_err)? })
    }

    /// Read and parse a rule file.
    #[staticmethod]
    #[pyo3(signature = (path, schema=None))]
    fn load(path: &str, schema: Option<&PySchema>) -> PyResult<PyRuleSet> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Self::parse(&text, schema)
    }

    /// The bundled five-rule diminutive description (default class T).
    #[staticmethod]
    fn bundled_s6() -> PyRuleSet {
        PyRuleSet { inner: core::bundled::paper_s6_ruleset() }
    }

    /// The bundled last-syllable-rhyme tree, flattened to rules.
    #[staticmethod]
    fn bundled_nc_tree() -> PyRuleSet {
        PyRuleSet { inner: core::bundled::nc_tree_ruleset() }
    }

    /// The bundled handcrafted baseline reconstruction (random overlap).
    #[staticmethod]
    fn bundled_trommelen() -> PyRuleSet {
        PyRuleSet { inner: core::bundled::trommelen_ruleset() }
    }

    /// Classify one instance given as a list of value tokens.
    fn apply(&self, values: Vec<String>) -> PyResult<String> {
        let inst = Instance::new(values, "?");
        Ok(self.inner.apply(&inst).map_err(to_py_err)?.to_string())
    }

    /// Per-class (total, errors) counts plus overall totals.
    fn evaluate(&self, dataset: &PyDataset) -> PyResult<PyRuleEval> {
        Ok(PyRuleEval { inner: self.inner.evaluate(&dataset.inner).map_err(to_py_err)? })
    }

    /// Reseed a random overlap policy (no effect under first_match).
    fn with_seed(&self, seed: u64) -> PyRuleSet {
        let inner = match self.inner.overlap() {
            OverlapPolicy::RandomChoice { .. } => self
                .inner
                .clone()
                .with_overlap(OverlapPolicy::RandomChoice { seed }),
            _ => self.inner.clone(),
        };
        PyRuleSet { inner }
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn default_class(&self) -> String {
        self.inner.default_class().to_string()
    }

    fn rule_count(&self) -> usize {
        self.inner.rules().len()
    }

    fn __repr__(&self) -> String {
        format!(
            "RuleSet({} rules, default '{}')",
            self.inner.rules().len(),
            self.inner.default_class()
        )
    }
}

/// Per-class error counts of a rule set on a dataset.
#[pyclass(name = "RuleEval", frozen)]
struct PyRuleEval {
    inner: core::RuleEval,
}

#[pymethods]
impl PyRuleEval {
    /// Per class: (total instances, errors).
    fn per_class(&self) -> BTreeMap<String, (usize, usize)> {
        self.inner
            .per_class
            .iter()
            .map(|r| (r.class.clone(), (r.total, r.errors)))
            .collect()
    }

    #[getter]
    fn total_errors(&self) -> usize {
        self.inner.total_errors
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    fn render(&self) -> String {
        self.inner.error_table("errors").render()
    }

    fn __repr__(&self) -> String {
        format!("RuleEval({} errors of {})", self.inner.total_errors, self.inner.n)
    }
}

/// A cross-validation report.
#[pyclass(name = "EvalReport", frozen)]
struct PyEvalReport {
    inner: core::EvalReport,
}

#[pymethods]
impl PyEvalReport {
    #[getter]
    fn mean_accuracy(&self) -> f64 {
        self.inner.mean_accuracy
    }

    #[getter]
    fn per_fold_accuracy(&self) -> Vec<f64> {
        self.inner.per_fold_accuracy.clone()
    }

    /// Per class: (error count, percent of that class).
    fn per_class_errors(&self) -> BTreeMap<String, (usize, f64)> {
        self.inner.per_class_errors.clone()
    }

    /// Nested dict: confusion[true_class][predicted_class] = count.
    fn confusion(&self) -> BTreeMap<String, BTreeMap<String, usize>> {
        self.inner.confusion.clone()
    }

    fn total_errors(&self) -> usize {
        self.inner.total_errors()
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn render_csv(&self) -> String {
        self.inner.render_csv()
    }

    fn __repr__(&self) -> String {
        format!("EvalReport(mean_accuracy={:.4})", self.inner.mean_accuracy)
    }
}

/// Hierarchical clustering of one feature's values.
#[pyclass(name = "Dendrogram", frozen)]
struct PyDendrogram {
    inner: core::Dendrogram,
}

#[pymethods]
impl PyDendrogram {
    fn leaves(&self) -> Vec<String> {
        self.inner.leaves().to_vec()
    }

    /// Merge steps as (left_node, right_node, height); leaves are nodes
    /// 0..len(leaves), merge i creates node len(leaves)+i.
    fn merges(&self) -> Vec<(usize, usize, f64)> {
        self.inner
            .merges()
            .iter()
            .map(|m| (m.left, m.right, m.height))
            .collect()
    }

    /// The partition with exactly k clusters, as lists of value tokens.
    fn cut_k(&self, k: usize) -> PyResult<Vec<Vec<String>>> {
        Ok(self
            .inner
            .cut_k(k)
            .map_err(to_py_err)?
            .groups
            .into_iter()
            .map(|(_, g)| g.into_iter().collect())
            .collect())
    }

    /// The partition obtained by undoing merges above the height.
    fn cut_height(&self, height: f64) -> PyResult<Vec<Vec<String>>> {
        Ok(self
            .inner
            .cut_height(height)
            .map_err(to_py_err)?
            .groups
            .into_iter()
            .map(|(_, g)| g.into_iter().collect())
            .collect())
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn render_csv(&self) -> String {
        self.inner.render_csv()
    }

    fn __repr__(&self) -> String {
        format!("Dendrogram({} leaves)", self.inner.leaves().len())
    }
}

/// Stratified k-fold cross-validation of tree induction.
#[pyfunction]
#[pyo3(signature = (dataset, k=10, seed=0, stratified=true, criterion="gain_ratio",
                    grouping=true, min_split=2, prune=false, prune_cf=0.25))]
#[allow(clippy::too_many_arguments)]
fn cross_validate(
    dataset: &PyDataset,
    k: usize,
    seed: u64,
    stratified: bool,
    criterion: &str,
    grouping: bool,
    min_split: usize,
    prune: bool,
    prune_cf: f64,
) -> PyResult<PyEvalReport> {
    let cfg = induction_config(criterion, grouping, min_split, prune, prune_cf)?;
    Ok(PyEvalReport {
        inner: core::cross_validate(&dataset.inner, k, seed, stratified, &cfg)
            .map_err(to_py_err)?,
    })
}

/// Fold id per instance, deterministic under the seed.
#[pyfunction]
#[pyo3(signature = (dataset, k, seed=0, stratified=true))]
fn make_folds(dataset: &PyDataset, k: usize, seed: u64, stratified: bool) -> PyResult<Vec<u32>> {
    Ok(core::make_folds(&dataset.inner, k, seed, stratified)
        .map_err(to_py_err)?
        .assignments)
}

/// Guessing baseline: "majority" or "prob_matching".
#[pyfunction]
fn baseline_accuracy(dataset: &PyDataset, kind: &str) -> PyResult<f64> {
    let kind = BaselineKind::parse(kind)
        .ok_or_else(|| PyValueError::new_err(format!("unknown baseline '{kind}'")))?;
    Ok(core::baseline_accuracy(&dataset.inner, kind))
}

/// Entropy in bits of a class-count mapping.
#[pyfunction]
fn entropy(counts: BTreeMap<String, usize>) -> PyResult<f64> {
    core::entropy(&counts).map_err(to_py_err)
}

/// Cluster one feature's values by their class-conditional distributions.
#[pyfunction]
#[pyo3(signature = (dataset, feature, metric="l1", linkage="average"))]
fn cluster(
    dataset: &PyDataset,
    feature: &str,
    metric: &str,
    linkage: &str,
) -> PyResult<PyDendrogram> {
    let metric = ValueMetric::parse(metric)
        .ok_or_else(|| PyValueError::new_err(format!("unknown metric '{metric}'")))?;
    let linkage = Linkage::parse(linkage)
        .ok_or_else(|| PyValueError::new_err(format!("unknown linkage '{linkage}'")))?;
    let table = core::contingency(&dataset.inner, feature).map_err(to_py_err)?;
    Ok(PyDendrogram {
        inner: core::cluster_values(&table, metric, linkage).map_err(to_py_err)?,
    })
}

/// Class-conditional distance between two values of a feature.
#[pyfunction]
#[pyo3(signature = (dataset, feature, v1, v2, metric="l1"))]
fn value_distance(
    dataset: &PyDataset,
    feature: &str,
    v1: &str,
    v2: &str,
    metric: &str,
) -> PyResult<f64> {
    let metric = ValueMetric::parse(metric)
        .ok_or_else(|| PyValueError::new_err(format!("unknown metric '{metric}'")))?;
    let table = core::contingency(&dataset.inner, feature).map_err(to_py_err)?;
    core::value_distance(&table, v1, v2, metric).map_err(to_py_err)
}

/// Generate a synthetic oracle-labeled corpus over the 12-feature schema.
#[pyfunction]
#[pyo3(signature = (n=4000, seed=7, noise=0.0, mono=0.15, stress=0.5, oracle=None))]
fn generate(
    n: usize,
    seed: u64,
    noise: f64,
    mono: f64,
    stress: f64,
    oracle: Option<&PyRuleSet>,
) -> PyResult<PyDataset> {
    let cfg = core::GeneratorConfig {
        n,
        seed,
        noise_rate: noise,
        mono_prob: mono,
        stress_prob: stress,
        ..core::GeneratorConfig::default()
    };
    let oracle = oracle
        .map(|rs| rs.inner.clone())
        .unwrap_or_else(core::bundled::paper_s6_ruleset);
    Ok(PyDataset { inner: core::generate(&cfg, &oracle).map_err(to_py_err)? })
}

#[pymodule]
fn morphind_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySchema>()?;
    m.add_class::<PyDataset>()?;
    m.add_class::<PyDecisionTree>()?;
    m.add_class::<PyRuleSet>()?;
    m.add_class::<PyRuleEval>()?;
    m.add_class::<PyEvalReport>()?;
    m.add_class::<PyDendrogram>()?;
    m.add_function(wrap_pyfunction!(cross_validate, m)?)?;
    m.add_function(wrap_pyfunction!(make_folds, m)?)?;
    m.add_function(wrap_pyfunction!(baseline_accuracy, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(cluster, m)?)?;
    m.add_function(wrap_pyfunction!(value_distance, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add("PAPER_S6_RULES", core::bundled::PAPER_S6_RULES)?;
    m.add("NC_TREE_RULES", core::bundled::NC_TREE_RULES)?;
    m.add("TROMMELEN_RULES", core::bundled::TROMMELEN_RULES)?;
    m.add("EXAMPLE_CORPUS", core::bundled::EXAMPLE_CORPUS)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
