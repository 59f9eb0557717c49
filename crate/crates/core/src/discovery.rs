//! Category discovery relative to a supervised task: per-value class
//! distributions, distances between values, agglomerative clustering with
//! dendrogram output, and extraction of the value groups a trained tree
//! actually used.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::induction::{render_token_set, DecisionTree};

/// Per feature value, how often instances carrying it were assigned to
/// each class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    feature: String,
    rows: BTreeMap<String, BTreeMap<String, usize>>,
    row_totals: BTreeMap<String, usize>,
    classes: Vec<String>,
}

impl ContingencyTable {
    pub fn feature(&self) -> &str {
        &self.feature
    }

    pub fn rows(&self) -> &BTreeMap<String, BTreeMap<String, usize>> {
        &self.rows
    }

    pub fn row_totals(&self) -> &BTreeMap<String, usize> {
        &self.row_totals
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    /// Class-conditional distribution of one value, over `classes()`.
    pub fn distribution(&self, value: &str) -> Result<Vec<f64>> {
        let total = *self.row_totals.get(value).ok_or_else(|| {
            Error::Invalid(format!("value '{value}' not present in the table"))
        })?;
        if total == 0 {
            return Err(Error::Invalid(format!("value '{value}' has a zero-total row")));
        }
        let row = &self.rows[value];
        Ok(self
            .classes
            .iter()
            .map(|c| row.get(c).copied().unwrap_or(0) as f64 / total as f64)
            .collect())
    }
}

/// Exact value-by-class counts for one feature, the missing-slot token
/// counted like any other value.
pub fn contingency(d: &Dataset, feature: &str) -> Result<ContingencyTable> {
    let feat_idx = d.schema().index_of(feature)?;
    let mut rows: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    let mut row_totals: BTreeMap<String, usize> = BTreeMap::new();
    for inst in d.instances() {
        let value = inst.value(feat_idx);
        *rows
            .entry(value.to_string())
            .or_default()
            .entry(inst.class().to_string())
            .or_insert(0) += 1;
        *row_totals.entry(value.to_string()).or_insert(0) += 1;
    }
    Ok(ContingencyTable {
        feature: feature.to_string(),
        rows,
        row_totals,
        classes: d.class_domain().to_vec(),
    })
}

/// Distance between class-conditional distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValueMetric {
    /// Sum of absolute differences (the classic value-difference form).
    #[default]
    L1,
    /// Euclidean distance.
    L2,
}

impl ValueMetric {
    pub fn parse(s: &str) -> Option<ValueMetric> {
        match s {
            "l1" | "L1" => Some(ValueMetric::L1),
            "l2" | "L2" => Some(ValueMetric::L2),
            _ => None,
        }
    }

    fn between(&self, p: &[f64], q: &[f64]) -> f64 {
        match self {
            ValueMetric::L1 => p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum(),
            ValueMetric::L2 => p
                .iter()
                .zip(q)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
        }
    }
}

/// Distance between two values' class-conditional distributions. Both rows
/// must have nonzero totals.
pub fn value_distance(
    t: &ContingencyTable,
    v1: &str,
    v2: &str,
    metric: ValueMetric,
) -> Result<f64> {
    let p = t.distribution(v1)?;
    let q = t.distribution(v2)?;
    Ok(metric.between(&p, &q))
}

/// Cluster-to-cluster dissimilarity rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Linkage {
    Single,
    #[default]
    Average,
    Complete,
}

impl Linkage {
    pub fn parse(s: &str) -> Option<Linkage> {
        match s {
            "single" => Some(Linkage::Single),
            "average" => Some(Linkage::Average),
            "complete" => Some(Linkage::Complete),
            _ => None,
        }
    }
}

/// One agglomeration step; `left` and `right` are node ids (leaves occupy
/// `0..n`, the i-th merge creates node `n + i`).
#[derive(Debug, Clone, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
}

/// A full agglomeration history over a feature's values.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    leaves: Vec<String>,
    merges: Vec<Merge>,
}

/// Hierarchical clustering of a table's values by their class-conditional
/// distributions. Values with zero-total rows are skipped. Ties between
/// merge candidates resolve to the lexicographically smallest combined
/// value list, so the result does not depend on input order.
pub fn cluster_values(
    t: &ContingencyTable,
    metric: ValueMetric,
    linkage: Linkage,
) -> Result<Dendrogram> {
    let leaves: Vec<String> = t
        .row_totals
        .iter()
        .filter(|(_, &total)| total > 0)
        .map(|(v, _)| v.clone())
        .collect();
    let n = leaves.len();
    if n < 2 {
        return Err(Error::Invalid(format!(
            "clustering needs at least 2 usable values, found {n}"
        )));
    }

    let dists: Vec<Vec<f64>> = {
        let rows: Vec<Vec<f64>> = leaves
            .iter()
            .map(|v| t.distribution(v))
            .collect::<Result<_>>()?;
        (0..n)
            .map(|i| (0..n).map(|j| metric.between(&rows[i], &rows[j])).collect())
            .collect()
    };

    struct Cluster {
        node_id: usize,
        members: Vec<usize>, // leaf indices, sorted (== lexicographic token order)
    }

    fn merged_members(a: &Cluster, b: &Cluster) -> Vec<usize> {
        let mut m: Vec<usize> = a.members.iter().chain(&b.members).copied().collect();
        m.sort_unstable();
        m
    }

    let mut clusters: Vec<Cluster> = (0..n)
        .map(|i| Cluster { node_id: i, members: vec![i] })
        .collect();
    let mut dist: Vec<Vec<f64>> = dists;
    let mut merges = Vec::with_capacity(n - 1);

    for step in 0..n - 1 {
        let mut best: Option<(f64, usize, usize, Vec<usize>)> = None;
        for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                let d_ij = dist[i][j];
                let candidate_better = match &best {
                    None => true,
                    Some((bd, _, _, bm)) => {
                        d_ij < *bd
                            || (d_ij == *bd
                                && merged_members(&clusters[i], &clusters[j]) < *bm)
                    }
                };
                if candidate_better {
                    best = Some((d_ij, i, j, merged_members(&clusters[i], &clusters[j])));
                }
            }
        }
        let (height, i, j, members) = best.expect("at least one pair");

        if let Some(last) = merges.last() {
            let last: &Merge = last;
            debug_assert!(
                height + 1e-9 >= last.height,
                "merge heights must be non-decreasing"
            );
        }

        // left = side whose smallest member token sorts first
        let (left_id, right_id) =
            if clusters[i].members[0] < clusters[j].members[0] {
                (clusters[i].node_id, clusters[j].node_id)
            } else {
                (clusters[j].node_id, clusters[i].node_id)
            };
        merges.push(Merge { left: left_id, right: right_id, height });

        // Lance-Williams update of the distances to every other cluster
        let si = clusters[i].members.len() as f64;
        let sj = clusters[j].members.len() as f64;
        let mut new_row = Vec::with_capacity(clusters.len());
        for k in 0..clusters.len() {
            if k == i || k == j {
                new_row.push(0.0);
                continue;
            }
            let dik = dist[i][k];
            let djk = dist[j][k];
            let v = match linkage {
                Linkage::Single => dik.min(djk),
                Linkage::Complete => dik.max(djk),
                Linkage::Average => (si * dik + sj * djk) / (si + sj),
            };
            new_row.push(v);
        }

        clusters[i] = Cluster { node_id: n + step, members };
        for k in 0..clusters.len() {
            dist[i][k] = new_row[k];
            dist[k][i] = new_row[k];
        }
        dist[i][i] = 0.0;
        clusters.remove(j);
        dist.remove(j);
        for row in &mut dist {
            row.remove(j);
        }
    }

    Ok(Dendrogram { leaves, merges })
}

impl Dendrogram {
    pub fn leaves(&self) -> &[String] {
        &self.leaves
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Leaf index groups after applying the first `m` merges.
    fn groups_after(&self, m: usize) -> Vec<Vec<usize>> {
        let n = self.leaves.len();
        let mut slots: Vec<Option<Vec<usize>>> =
            (0..n).map(|i| Some(vec![i])).collect();
        slots.resize_with(n + m, || None);
        for (step, merge) in self.merges.iter().take(m).enumerate() {
            let left = slots[merge.left].take().expect("left cluster is live");
            let right = slots[merge.right].take().expect("right cluster is live");
            let mut combined = left;
            combined.extend(right);
            combined.sort_unstable();
            slots[n + step] = Some(combined);
        }
        let mut groups: Vec<Vec<usize>> = slots.into_iter().flatten().collect();
        groups.sort_by_key(|g| g[0]);
        groups
    }

    /// The partition with exactly `k` clusters.
    pub fn cut_k(&self, k: usize) -> Result<CategoryPartition> {
        let n = self.leaves.len();
        if k < 1 || k > n {
            return Err(Error::Invalid(format!("k = {k} outside 1..={n}")));
        }
        Ok(self.partition(self.groups_after(n - k), CategorySource::DendrogramCutK { k }))
    }

    /// The partition obtained by undoing every merge above `height`.
    pub fn cut_height(&self, height: f64) -> Result<CategoryPartition> {
        if height < 0.0 {
            return Err(Error::Invalid(format!("cut height must be >= 0, got {height}")));
        }
        let m = self.merges.iter().take_while(|mg| mg.height <= height).count();
        Ok(self.partition(
            self.groups_after(m),
            CategorySource::DendrogramCutHeight { height },
        ))
    }

    fn partition(&self, groups: Vec<Vec<usize>>, source: CategorySource) -> CategoryPartition {
        CategoryPartition {
            feature: String::new(), // filled by the caller when known
            groups: groups
                .into_iter()
                .enumerate()
                .map(|(i, g)| {
                    (
                        format!("g{}", i + 1),
                        g.into_iter().map(|leaf| self.leaves[leaf].clone()).collect(),
                    )
                })
                .collect(),
            source,
        }
    }

    /// Sideways bracket rendering: the root at the left, one leaf per line
    /// at the right, merge columns proportional to merge height.
    pub fn render(&self) -> String {
        const WIDTH: usize = 40;
        let n = self.leaves.len();
        let h_max = self.merges.last().map(|m| m.height).unwrap_or(0.0);

        // node geometry: leaf order from the final tree, entry rows, columns
        let mut order: Vec<usize> = Vec::with_capacity(n); // leaves, display order
        let root = n + self.merges.len() - 1;
        self.visit_leaves(root, &mut order);
        let mut row_of_leaf = vec![0usize; n];
        for (row, &leaf) in order.iter().enumerate() {
            row_of_leaf[leaf] = row;
        }

        let mut entry = vec![0usize; n + self.merges.len()];
        let mut col = vec![WIDTH; n + self.merges.len()];
        for (leaf, &row) in row_of_leaf.iter().enumerate() {
            entry[leaf] = row;
        }
        for (step, m) in self.merges.iter().enumerate() {
            let id = n + step;
            entry[id] = (entry[m.left] + entry[m.right]) / 2;
            col[id] = if h_max > 0.0 {
                ((1.0 - m.height / h_max) * WIDTH as f64).round() as usize
            } else {
                0
            };
        }
        // chains of equal-height merges would share a column; keep every
        // internal child strictly right of its parent
        for (step, m) in self.merges.iter().enumerate().rev() {
            let id = n + step;
            for &child in [m.left, m.right].iter() {
                if child >= n {
                    col[child] = col[child].max(col[id] + 2).min(WIDTH - 1);
                }
            }
        }

        // corners beat verticals beat dashes when merges share cells
        fn put(cell: &mut u8, ch: u8) {
            let rank = |c: u8| match c {
                b'+' => 3,
                b'|' => 2,
                b'-' => 1,
                _ => 0,
            };
            if rank(ch) > rank(*cell) {
                *cell = ch;
            }
        }

        let mut canvas = vec![vec![b' '; WIDTH + 1]; n];
        for (step, m) in self.merges.iter().enumerate() {
            let id = n + step;
            let x = col[id];
            let (top, bottom) = (
                entry[m.left].min(entry[m.right]),
                entry[m.left].max(entry[m.right]),
            );
            for row in top..=bottom {
                put(&mut canvas[row][x], b'|');
            }
            for &child in [m.left, m.right].iter() {
                let row = entry[child];
                put(&mut canvas[row][x], b'+');
                let to = if child < n { WIDTH + 1 } else { col[child] };
                for cell in canvas[row].iter_mut().take(to).skip(x + 1) {
                    put(cell, b'-');
                }
            }
        }

        let mut out = String::new();
        for (row, line) in canvas.iter().enumerate() {
            let mut text: String = String::from_utf8_lossy(line).trim_end().to_string();
            while text.len() < WIDTH + 1 {
                text.push(if text.ends_with('-') { '-' } else { ' ' });
            }
            let _ = writeln!(out, "{}> {}", text, self.leaves[order[row]]);
        }
        out
    }

    fn visit_leaves(&self, node: usize, out: &mut Vec<usize>) {
        let n = self.leaves.len();
        if node < n {
            out.push(node);
        } else {
            let merge = &self.merges[node - n];
            self.visit_leaves(merge.left, out);
            self.visit_leaves(merge.right, out);
        }
    }

    /// Machine-readable dump: a leaf table followed by the merge list.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("leaf_id,token\n");
        for (i, leaf) in self.leaves.iter().enumerate() {
            let _ = writeln!(out, "{i},{leaf}");
        }
        out.push_str("merge_id,left,right,height\n");
        let n = self.leaves.len();
        for (step, m) in self.merges.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{:.6}", n + step, m.left, m.right, m.height);
        }
        out
    }
}

/// Where a partition came from.
#[derive(Debug, Clone, PartialEq)]
pub enum CategorySource {
    /// Branch value sets of one tree node, tagged with the node's path.
    TreeGrouping { path: String },
    DendrogramCutK { k: usize },
    DendrogramCutHeight { height: f64 },
}

/// Named groups of value tokens for one feature.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryPartition {
    pub feature: String,
    pub groups: Vec<(String, BTreeSet<String>)>,
    pub source: CategorySource,
}

impl CategoryPartition {
    pub fn with_feature(mut self, feature: impl Into<String>) -> CategoryPartition {
        self.feature = feature.into();
        self
    }

    /// The group containing `value`, if any.
    pub fn group_of(&self, value: &str) -> Option<&BTreeSet<String>> {
        self.groups.iter().find(|(_, g)| g.contains(value)).map(|(_, g)| g)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, group) in &self.groups {
            let _ = writeln!(out, "{name}: {}", render_token_set(group));
        }
        out
    }
}

/// One partition per internal node of a tree: the node's branch value sets,
/// tagged with the path that reaches the node. Most useful on trees built
/// with grouping enabled.
pub fn categories_from_tree(tree: &DecisionTree) -> Vec<CategoryPartition> {
    let mut out = Vec::new();
    walk_categories(tree, "root", &mut out);
    out
}

fn walk_categories(tree: &DecisionTree, path: &str, out: &mut Vec<CategoryPartition>) {
    if let DecisionTree::Node { feature, branches, .. } = tree {
        let groups = branches
            .iter()
            .enumerate()
            .map(|(i, (set, _))| (format!("g{}", i + 1), set.clone()))
            .collect();
        out.push(CategoryPartition {
            feature: feature.clone(),
            groups,
            source: CategorySource::TreeGrouping { path: path.to_string() },
        });
        for (set, child) in branches {
            let step = format!("{path} > {feature} in {}", render_token_set(set));
            walk_categories(child, &step, out);
        }
    }
}
