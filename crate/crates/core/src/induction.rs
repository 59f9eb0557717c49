//! Decision-tree induction: top-down recursive partitioning with
//! entropy-based test selection, greedy value grouping, and optional
//! pessimistic pruning.
//!
//! Branches carry *sets* of feature values rather than single values, so a
//! node can direct {rk,nt,lt,...} down one branch and {n,l,r,...} down
//! another. Grouping is what turns value inventories into the discovered
//! categories surfaced by [`crate::discovery::categories_from_tree`].

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::dataset::{Dataset, Instance, Schema};
use crate::error::{Error, Result};
use crate::stats::{entropy_of, pessimistic_errors};

/// Split-quality measure: raw information gain or gain normalized by the
/// split's own entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitCriterion {
    Gain,
    #[default]
    GainRatio,
}

impl SplitCriterion {
    pub fn parse(s: &str) -> Option<SplitCriterion> {
        match s {
            "gain" => Some(SplitCriterion::Gain),
            "gain_ratio" | "gain-ratio" => Some(SplitCriterion::GainRatio),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SplitCriterion::Gain => "gain",
            SplitCriterion::GainRatio => "gain_ratio",
        }
    }
}

/// Deterministic resolution of equal-scoring alternatives: features tie-break
/// to the lowest schema index, candidate merges to the lexicographically
/// smallest merged value set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    SchemaIndex,
}

/// Knobs for [`build_tree`].
#[derive(Debug, Clone, PartialEq)]
pub struct InductionConfig {
    pub criterion: SplitCriterion,
    pub grouping: bool,
    /// Minimum subset size that may still be split.
    pub min_split: usize,
    pub prune: bool,
    /// Confidence for the pessimistic error bound, in (0,1).
    pub prune_cf: f64,
    pub tie_break: TieBreak,
}

impl Default for InductionConfig {
    fn default() -> Self {
        InductionConfig {
            criterion: SplitCriterion::GainRatio,
            grouping: true,
            min_split: 2,
            prune: false,
            prune_cf: 0.25,
            tie_break: TieBreak::SchemaIndex,
        }
    }
}

/// Gain, split-info, and their ratio for one candidate partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitScore {
    pub gain: f64,
    pub split_info: f64,
    pub gain_ratio: f64,
}

impl SplitScore {
    pub fn value(&self, criterion: SplitCriterion) -> f64 {
        match criterion {
            SplitCriterion::Gain => self.gain,
            SplitCriterion::GainRatio => self.gain_ratio,
        }
    }
}

/// A learned tree: leaves carry the assigned class and the training counts
/// routed to them; internal nodes test one feature, with one branch per
/// value set. `fallback_class` (the majority class of the initial training
/// set, threaded from the root) catches values unseen at the node.
#[derive(Debug, Clone, PartialEq)]
pub enum DecisionTree {
    Leaf {
        class: String,
        counts: BTreeMap<String, usize>,
    },
    Node {
        feature: String,
        branches: Vec<(BTreeSet<String>, DecisionTree)>,
        fallback_class: String,
    },
}

impl DecisionTree {
    /// Routes an instance to a class. A feature value no branch contains
    /// falls back to the node's fallback class.
    pub fn classify(&self, schema: &Schema, instance: &Instance) -> Result<&str> {
        if instance.values().len() != schema.len() {
            return Err(Error::Invalid(format!(
                "instance has {} values, schema has {} features",
                instance.values().len(),
                schema.len()
            )));
        }
        let mut node = self;
        loop {
            match node {
                DecisionTree::Leaf { class, .. } => return Ok(class),
                DecisionTree::Node { feature, branches, fallback_class } => {
                    let idx = schema.index_of(feature)?;
                    let value = instance.value(idx);
                    match branches.iter().find(|(set, _)| set.contains(value)) {
                        Some((_, child)) => node = child,
                        None => return Ok(fallback_class),
                    }
                }
            }
        }
    }

    /// Total number of nodes, leaves included.
    pub fn node_count(&self) -> usize {
        match self {
            DecisionTree::Leaf { .. } => 1,
            DecisionTree::Node { branches, .. } => {
                1 + branches.iter().map(|(_, t)| t.node_count()).sum::<usize>()
            }
        }
    }

    /// Indented ASCII rendering, one line per branch:
    /// `feature in {v1,v2,...}: CLASS` (or `feature = v: CLASS` for a
    /// singleton branch), nested levels prefixed with `|   `.
    pub fn render(&self) -> String {
        let mut out = String::new();
        match self {
            DecisionTree::Leaf { class, .. } => {
                out.push_str(class);
                out.push('\n');
            }
            DecisionTree::Node { .. } => self.render_into(0, &mut out),
        }
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        if let DecisionTree::Node { feature, branches, .. } = self {
            for (set, child) in branches {
                for _ in 0..depth {
                    out.push_str("|   ");
                }
                out.push_str(feature);
                if set.len() == 1 {
                    out.push_str(" = ");
                    out.push_str(set.iter().next().unwrap());
                } else {
                    out.push_str(" in ");
                    out.push_str(&render_token_set(set));
                }
                out.push(':');
                match child {
                    DecisionTree::Leaf { class, .. } => {
                        out.push(' ');
                        out.push_str(class);
                        out.push('\n');
                    }
                    node => {
                        out.push('\n');
                        node.render_into(depth + 1, out);
                    }
                }
            }
        }
    }
}

/// Renders a value set as `{v1,v2,...}`. Members are sorted, except that a
/// literal `}` token is emitted first and always followed by a comma, so
/// the closing brace stays unambiguous for the rule-file reader (a lone
/// `}` member renders as `{},}`).
pub(crate) fn render_token_set(set: &BTreeSet<String>) -> String {
    let mut inner = String::new();
    if set.contains("}") {
        inner.push_str("},");
    }
    let others: Vec<&str> =
        set.iter().map(String::as_str).filter(|v| *v != "}").collect();
    inner.push_str(&others.join(","));
    format!("{{{inner}}}")
}

/// Entropy in bits of a class-count map.
pub fn entropy(counts: &BTreeMap<String, usize>) -> Result<f64> {
    let values: Vec<usize> = counts.values().copied().collect();
    if values.iter().sum::<usize>() == 0 {
        return Err(Error::Invalid("entropy of an empty distribution".into()));
    }
    Ok(entropy_of(&values))
}

/// Scores a partition of a feature's values over a subset of the dataset.
/// The partition must cover every value observed in the subset, with no
/// value in two cells; cells may list extra (unobserved) values, and cells
/// that match nothing contribute zero weight.
pub fn split_score(
    d: &Dataset,
    subset: &[u32],
    feature: &str,
    partition: &[BTreeSet<String>],
) -> Result<SplitScore> {
    if subset.is_empty() {
        return Err(Error::Invalid("split score of an empty subset".into()));
    }
    let feat_idx = d.schema().index_of(feature)?;
    let mut cell_of: BTreeMap<&str, usize> = BTreeMap::new();
    for (ci, cell) in partition.iter().enumerate() {
        for v in cell {
            if cell_of.insert(v.as_str(), ci).is_some() {
                return Err(Error::Invalid(format!(
                    "value '{v}' appears in more than one partition cell"
                )));
            }
        }
    }
    let n_classes = d.n_classes();
    let mut cell_counts = vec![vec![0usize; n_classes]; partition.len()];
    let mut total_counts = vec![0usize; n_classes];
    for &i in subset {
        let value = d.instances()[i as usize].value(feat_idx);
        let ci = *cell_of.get(value).ok_or_else(|| {
            Error::Invalid(format!("partition does not cover observed value '{value}'"))
        })?;
        cell_counts[ci][d.class_id(i) as usize] += 1;
        total_counts[d.class_id(i) as usize] += 1;
    }
    Ok(score_cells(&total_counts, cell_counts.iter().map(|c| c.as_slice())))
}

/// [`split_score`] narrowed to the chosen criterion's value.
pub fn split_gain(
    d: &Dataset,
    subset: &[u32],
    feature: &str,
    partition: &[BTreeSet<String>],
    criterion: SplitCriterion,
) -> Result<f64> {
    Ok(split_score(d, subset, feature, partition)?.value(criterion))
}

fn score_cells<'a>(total: &[usize], cells: impl Iterator<Item = &'a [usize]>) -> SplitScore {
    let n: usize = total.iter().sum();
    let nf = n as f64;
    let h = entropy_of(total);
    let mut weighted = 0.0;
    let mut split_info = 0.0;
    for cell in cells {
        let size: usize = cell.iter().sum();
        if size == 0 {
            continue;
        }
        let w = size as f64 / nf;
        weighted += w * entropy_of(cell);
        split_info -= w * w.log2();
    }
    let gain = h - weighted;
    let gain_ratio = if split_info > 0.0 { gain / split_info } else { 0.0 };
    SplitScore { gain, split_info, gain_ratio }
}

// ---------------------------------------------------------------------------
// value grouping
// ---------------------------------------------------------------------------

/// One cell of a grouped partition during construction. Value ids stay
/// sorted; since domain ids are lexicographic ranks, comparing id vectors
/// compares the merged token lists.
#[derive(Debug, Clone)]
struct Cell {
    value_ids: Vec<u32>,
    counts: Vec<usize>,
    size: usize,
}

struct GroupOutcome {
    cells: Vec<Cell>,
    score: SplitScore,
}

/// Greedy agglomeration over the observed values of one feature: start from
/// singletons and repeatedly apply the merge that maximizes the criterion,
/// while the score does not decrease, stopping at two cells.
fn group_cells(mut cells: Vec<Cell>, total: &[usize], criterion: SplitCriterion) -> GroupOutcome {
    let mut score = score_cells(total, cells.iter().map(|c| c.counts.as_slice()));
    let n: usize = total.iter().sum();
    let nf = n as f64;

    while cells.len() > 2 {
        let mut best: Option<(SplitScore, usize, usize)> = None;
        for i in 0..cells.len() {
            for j in (i + 1)..cells.len() {
                let merged = merged_score(&score, &cells[i], &cells[j], nf);
                let better = match &best {
                    None => true,
                    Some((b, bi, bj)) => {
                        let v = merged.value(criterion);
                        let bv = b.value(criterion);
                        v > bv
                            || (v == bv
                                && merged_ids(&cells[i], &cells[j])
                                    < merged_ids(&cells[*bi], &cells[*bj]))
                    }
                };
                if better {
                    best = Some((merged, i, j));
                }
            }
        }
        let (merged, i, j) = best.expect("at least one candidate pair");
        if merged.value(criterion) < score.value(criterion) - 1e-12 {
            break;
        }
        let removed = cells.remove(j);
        let target = &mut cells[i];
        target.value_ids.extend(removed.value_ids);
        target.value_ids.sort_unstable();
        for (a, b) in target.counts.iter_mut().zip(&removed.counts) {
            *a += b;
        }
        target.size += removed.size;
        score = merged;
    }

    GroupOutcome { cells, score }
}

/// Score after merging cells `a` and `b`, updated incrementally from the
/// current score.
fn merged_score(current: &SplitScore, a: &Cell, b: &Cell, nf: f64) -> SplitScore {
    let wa = a.size as f64 / nf;
    let wb = b.size as f64 / nf;
    let wm = wa + wb;
    let merged_counts: Vec<usize> = a.counts.iter().zip(&b.counts).map(|(x, y)| x + y).collect();
    let gain = current.gain + wa * entropy_of(&a.counts) + wb * entropy_of(&b.counts)
        - wm * entropy_of(&merged_counts);
    let split_info =
        current.split_info - (-wa * wa.log2()) - (-wb * wb.log2()) + (-wm * wm.log2());
    let gain_ratio = if split_info > 0.0 { gain / split_info } else { 0.0 };
    SplitScore { gain, split_info, gain_ratio }
}

fn merged_ids(a: &Cell, b: &Cell) -> Vec<u32> {
    let mut ids = Vec::with_capacity(a.value_ids.len() + b.value_ids.len());
    ids.extend_from_slice(&a.value_ids);
    ids.extend_from_slice(&b.value_ids);
    ids.sort_unstable();
    ids
}

/// Count matrix for one feature over a subset: one cell per observed value,
/// in token order.
fn singleton_cells(d: &Dataset, subset: &[u32], feat_idx: usize) -> Vec<Cell> {
    let domain_size = d.domain_of(feat_idx).len();
    let n_classes = d.n_classes();
    let mut row_of: Vec<Option<usize>> = vec![None; domain_size];
    let mut cells: Vec<Cell> = Vec::new();
    for &i in subset {
        let vid = d.value_id(i, feat_idx) as usize;
        let row = match row_of[vid] {
            Some(r) => r,
            None => {
                cells.push(Cell {
                    value_ids: vec![vid as u32],
                    counts: vec![0; n_classes],
                    size: 0,
                });
                row_of[vid] = Some(cells.len() - 1);
                cells.len() - 1
            }
        };
        cells[row].counts[d.class_id(i) as usize] += 1;
        cells[row].size += 1;
    }
    cells.sort_by_key(|c| c.value_ids[0]);
    cells
}

/// Groups the observed values of `feature` within `subset` by greedy
/// agglomeration under `criterion`. Needs at least two observed values.
pub fn group_values(
    d: &Dataset,
    subset: &[u32],
    feature: &str,
    criterion: SplitCriterion,
) -> Result<Vec<BTreeSet<String>>> {
    let feat_idx = d.schema().index_of(feature)?;
    let cells = singleton_cells(d, subset, feat_idx);
    if cells.len() < 2 {
        return Err(Error::Invalid(format!(
            "grouping needs at least 2 observed values for '{feature}'"
        )));
    }
    let total = d.class_counts(subset);
    let mut outcome = group_cells(cells, &total, criterion);
    outcome.cells.sort_by_key(|c| c.value_ids[0]);
    Ok(outcome
        .cells
        .iter()
        .map(|c| {
            c.value_ids
                .iter()
                .map(|&vid| d.domain_of(feat_idx)[vid as usize].clone())
                .collect()
        })
        .collect())
}

// ---------------------------------------------------------------------------
// tree construction
// ---------------------------------------------------------------------------

/// Builds a decision tree over the full dataset. See
/// [`build_tree_on`] for training on an index subset.
pub fn build_tree(d: &Dataset, cfg: &InductionConfig) -> Result<DecisionTree> {
    build_tree_on(d, &d.all_indices(), cfg)
}

/// Builds a decision tree from the given instance indices (the
/// cross-validator trains on fold complements this way).
pub fn build_tree_on(d: &Dataset, subset: &[u32], cfg: &InductionConfig) -> Result<DecisionTree> {
    if subset.is_empty() {
        return Err(Error::Invalid("cannot build a tree from zero instances".into()));
    }
    if !(cfg.prune_cf > 0.0 && cfg.prune_cf < 1.0) {
        return Err(Error::Invalid(format!(
            "prune_cf must lie in (0,1), got {}",
            cfg.prune_cf
        )));
    }
    if cfg.min_split < 1 {
        return Err(Error::Invalid("min_split must be at least 1".into()));
    }
    let counts = d.class_counts(subset);
    let fallback_id = majority_id(&counts);
    let (tree, _est) = build_node(d, subset, cfg, fallback_id);
    Ok(tree)
}

/// Majority class id; ties resolve to the lexicographically smallest class
/// (ids are lexicographic ranks).
fn majority_id(counts: &[usize]) -> u32 {
    let mut best = 0usize;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best as u32
}

fn make_leaf(d: &Dataset, counts: &[usize], class_id: u32) -> DecisionTree {
    let mut map = BTreeMap::new();
    for (i, &c) in counts.iter().enumerate() {
        if c > 0 {
            map.insert(d.class_token(i as u32).to_string(), c);
        }
    }
    DecisionTree::Leaf { class: d.class_token(class_id).to_string(), counts: map }
}

/// Returns the subtree for `subset` along with its pessimistic error count
/// (only meaningful when pruning is enabled).
fn build_node(d: &Dataset, subset: &[u32], cfg: &InductionConfig, fallback_id: u32) -> (DecisionTree, f64) {
    let counts = d.class_counts(subset);
    let n = subset.len();
    let local_majority = majority_id(&counts);
    let leaf_est = if cfg.prune {
        pessimistic_errors(n - counts[local_majority as usize], n, cfg.prune_cf)
    } else {
        0.0
    };

    let pure = counts.iter().filter(|&&c| c > 0).count() == 1;
    if pure || n < cfg.min_split {
        return (make_leaf(d, &counts, local_majority), leaf_est);
    }

    // pick the best feature, lowest schema index winning ties
    let mut best: Option<(f64, usize, Vec<Cell>)> = None;
    for feat_idx in 0..d.schema().len() {
        let cells = singleton_cells(d, subset, feat_idx);
        if cells.len() < 2 {
            continue;
        }
        let (cells, score) = if cfg.grouping {
            let out = group_cells(cells, &counts, cfg.criterion);
            (out.cells, out.score)
        } else {
            let score = score_cells(&counts, cells.iter().map(|c| c.counts.as_slice()));
            (cells, score)
        };
        let value = score.value(cfg.criterion);
        if best.as_ref().is_none_or(|(bv, _, _)| value > *bv) {
            best = Some((value, feat_idx, cells));
        }
    }

    let (best_value, feat_idx, mut cells) = match best {
        Some(b) => b,
        None => return (make_leaf(d, &counts, local_majority), leaf_est),
    };
    if best_value <= 1e-12 {
        return (make_leaf(d, &counts, local_majority), leaf_est);
    }

    cells.sort_by_key(|c| c.value_ids[0]);
    let domain_size = d.domain_of(feat_idx).len();
    let mut cell_of_vid: Vec<usize> = vec![usize::MAX; domain_size];
    for (ci, cell) in cells.iter().enumerate() {
        for &vid in &cell.value_ids {
            cell_of_vid[vid as usize] = ci;
        }
    }
    let mut parts: Vec<Vec<u32>> = vec![Vec::new(); cells.len()];
    for &i in subset {
        parts[cell_of_vid[d.value_id(i, feat_idx) as usize]].push(i);
    }

    let mut branches = Vec::with_capacity(cells.len());
    let mut subtree_est = 0.0;
    for (cell, part) in cells.iter().zip(&parts) {
        let (child, est) = build_node(d, part, cfg, fallback_id);
        subtree_est += est;
        let set: BTreeSet<String> = cell
            .value_ids
            .iter()
            .map(|&vid| d.domain_of(feat_idx)[vid as usize].clone())
            .collect();
        branches.push((set, child));
    }

    if cfg.prune && leaf_est <= subtree_est + 1e-9 {
        return (make_leaf(d, &counts, local_majority), leaf_est);
    }

    let node = DecisionTree::Node {
        feature: d.schema().features()[feat_idx].name.clone(),
        branches,
        fallback_class: d.class_token(fallback_id).to_string(),
    };
    (node, subtree_est)
}
