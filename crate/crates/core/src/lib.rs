//! Symbolic rule induction over categorical linguistic instances.
//!
//! The crate learns decision trees and ordered if-then rule sets from
//! corpora of categorical feature vectors (the bundled schema encodes the
//! last three syllables of Dutch nouns and their diminutive suffix), and
//! provides the surrounding experimental machinery: corpus parsing and
//! projection, stratified cross-validation, rule-file parsing and
//! evaluation, value clustering for category discovery, and a seeded
//! synthetic corpus generator.
//!
//! The main entry points:
//!
//! * [`dataset`] — [`Schema`], [`Instance`], [`Dataset`]: the corpus model.
//! * [`induction`] — [`build_tree`] and the information measures behind it.
//! * [`rules`] — the rule DSL, [`tree_to_rules`], and rule evaluation.
//! * [`evaluation`] — k-fold cross-validation and error tables.
//! * [`discovery`] — contingency tables, value distances, clustering.
//! * [`syngen`] — oracle-labeled synthetic corpora.
//! * [`bundled`] — the rule files and schema shipped with the crate.

pub mod bundled;
pub mod dataset;
pub mod discovery;
pub mod error;
pub mod evaluation;
pub mod induction;
pub mod rules;
mod stats;
pub mod syngen;

pub use dataset::{Dataset, Feature, FeatureRole, Instance, Schema};
pub use discovery::{
    categories_from_tree, cluster_values, contingency, value_distance, CategoryPartition,
    CategorySource, ContingencyTable, Dendrogram, Linkage, ValueMetric,
};
pub use error::{Error, Result};
pub use evaluation::{
    baseline_accuracy, compare, cross_validate, make_folds, BaselineKind, ErrorTable, EvalReport,
    FoldPlan,
};
pub use induction::{
    build_tree, entropy, group_values, split_gain, split_score, DecisionTree, InductionConfig,
    SplitCriterion, SplitScore, TieBreak,
};
pub use rules::{
    parse_rules, tree_to_rules, Condition, OverlapPolicy, Rule, RuleEval, RuleSet, ValueSetRef,
};
pub use syngen::{generate, GeneratorConfig};
