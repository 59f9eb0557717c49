//! Corpus model: schemas, instances, datasets, parsing, and projection.
//!
//! A corpus file is UTF-8 text with one instance per line: whitespace
//! separated value tokens, last token the class. Lines starting with `#`
//! are comments; blank lines are skipped. Value tokens are opaque strings;
//! the missing-slot filler `=` is an ordinary token.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Linguistic role of a feature column. Informational only; the induction
/// engine treats every feature as an opaque categorical column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureRole {
    Stress,
    Onset,
    Nucleus,
    Coda,
    Other,
}

impl FeatureRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            FeatureRole::Stress => "stress",
            FeatureRole::Onset => "onset",
            FeatureRole::Nucleus => "nucleus",
            FeatureRole::Coda => "coda",
            FeatureRole::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<FeatureRole> {
        match s {
            "stress" => Some(FeatureRole::Stress),
            "onset" => Some(FeatureRole::Onset),
            "nucleus" => Some(FeatureRole::Nucleus),
            "coda" => Some(FeatureRole::Coda),
            "other" => Some(FeatureRole::Other),
            _ => None,
        }
    }
}

/// One named feature column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    pub name: String,
    pub role: FeatureRole,
}

/// Ordered feature columns plus the name of the class column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    features: Vec<Feature>,
    class_name: String,
}

impl Schema {
    /// Builds a schema, checking that feature names are unique and nonempty
    /// and that there is at least one feature.
    pub fn new(features: Vec<Feature>, class_name: impl Into<String>) -> Result<Schema> {
        let class_name = class_name.into();
        if features.is_empty() {
            return Err(Error::Schema("schema needs at least one feature".into()));
        }
        if class_name.is_empty() {
            return Err(Error::Schema("class column name must be nonempty".into()));
        }
        let mut seen = BTreeSet::new();
        for f in &features {
            if f.name.is_empty() {
                return Err(Error::Schema("feature names must be nonempty".into()));
            }
            if !seen.insert(f.name.as_str()) {
                return Err(Error::Schema(format!("duplicate feature name '{}'", f.name)));
            }
        }
        Ok(Schema { features, class_name })
    }

    /// The built-in 12-feature syllable schema: stress, onset, nucleus, and
    /// coda for each of the last three syllables (`s1,o1,n1,c1,...,s3,o3,n3,c3`,
    /// syllable 3 being the last), class column `suffix`.
    pub fn diminutive12() -> Schema {
        let roles = [
            FeatureRole::Stress,
            FeatureRole::Onset,
            FeatureRole::Nucleus,
            FeatureRole::Coda,
        ];
        let mut features = Vec::with_capacity(12);
        for syll in 1..=3 {
            for role in roles {
                let prefix = match role {
                    FeatureRole::Stress => 's',
                    FeatureRole::Onset => 'o',
                    FeatureRole::Nucleus => 'n',
                    FeatureRole::Coda => 'c',
                    FeatureRole::Other => unreachable!(),
                };
                features.push(Feature { name: format!("{prefix}{syll}"), role });
            }
        }
        Schema::new(features, "suffix").expect("builtin schema is valid")
    }

    /// Parses a schema file: one `feature <name> <role>` line per column and
    /// exactly one `class <name>` line. `#` comments and blank lines allowed.
    pub fn parse(text: &str) -> Result<Schema> {
        let mut features = Vec::new();
        let mut class_name: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["feature", name, role] => {
                    let role = FeatureRole::parse(role).ok_or_else(|| Error::Schema(format!(
                        "line {lineno}: unknown role '{role}' (expected stress, onset, nucleus, coda, or other)"
                    )))?;
                    features.push(Feature { name: (*name).to_string(), role });
                }
                ["class", name] => {
                    if class_name.is_some() {
                        return Err(Error::Schema(format!(
                            "line {lineno}: more than one class declaration"
                        )));
                    }
                    class_name = Some((*name).to_string());
                }
                _ => {
                    return Err(Error::Schema(format!(
                        "line {lineno}: expected 'feature <name> <role>' or 'class <name>'"
                    )))
                }
            }
        }
        let class_name =
            class_name.ok_or_else(|| Error::Schema("missing 'class <name>' line".into()))?;
        Schema::new(features, class_name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for f in &self.features {
            let _ = writeln!(out, "feature {} {}", f.name, f.role.as_str());
        }
        let _ = writeln!(out, "class {}", self.class_name);
        out
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.features.iter().map(|f| f.name.clone()).collect()
    }

    pub fn class_name(&self) -> &str {
        &self.class_name
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Index of a feature by name.
    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.features
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(|| Error::UnknownFeature {
                name: name.to_string(),
                valid: self.feature_names(),
            })
    }
}

/// One training or test example: a value token per schema feature plus a
/// class token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    values: Vec<String>,
    class: String,
}

impl Instance {
    pub fn new(values: Vec<String>, class: impl Into<String>) -> Instance {
        Instance { values, class: class.into() }
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn value(&self, feature_idx: usize) -> &str {
        &self.values[feature_idx]
    }

    pub fn class(&self) -> &str {
        &self.class
    }
}

/// An immutable corpus: a schema, its instances, and the observed value and
/// class domains. Construction validates the instances against the schema;
/// afterwards the dataset is safe to share read-only across threads.
#[derive(Debug, Clone)]
pub struct Dataset {
    schema: Schema,
    instances: Vec<Instance>,
    /// Per feature, the sorted set of observed value tokens.
    domains: Vec<Vec<String>>,
    /// Sorted observed class tokens.
    classes: Vec<String>,
    /// Row-major (instance x feature) indices into `domains`.
    encoded: Vec<u32>,
    /// Per instance, index into `classes`.
    class_ids: Vec<u32>,
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        self.schema == other.schema && self.instances == other.instances
    }
}

impl Dataset {
    /// Assembles a dataset from parsed instances, computing value and class
    /// domains. Errors on an empty instance list, an empty value token, or a
    /// value-count mismatch with the schema.
    pub fn from_instances(schema: Schema, instances: Vec<Instance>) -> Result<Dataset> {
        if instances.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let width = schema.len();
        for (i, inst) in instances.iter().enumerate() {
            if inst.values.len() != width {
                return Err(Error::Invalid(format!(
                    "instance {i} has {} values, schema has {width} features",
                    inst.values.len()
                )));
            }
            if inst.values.iter().any(|v| v.is_empty()) || inst.class.is_empty() {
                return Err(Error::Invalid(format!("instance {i} contains an empty token")));
            }
        }

        let mut domain_sets: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); width];
        let mut class_set: BTreeSet<&str> = BTreeSet::new();
        for inst in &instances {
            for (f, v) in inst.values.iter().enumerate() {
                domain_sets[f].insert(v.as_str());
            }
            class_set.insert(inst.class.as_str());
        }
        let domains: Vec<Vec<String>> = domain_sets
            .into_iter()
            .map(|s| s.into_iter().map(str::to_string).collect())
            .collect();
        let classes: Vec<String> = class_set.into_iter().map(str::to_string).collect();

        let mut encoded = Vec::with_capacity(instances.len() * width);
        let mut class_ids = Vec::with_capacity(instances.len());
        for inst in &instances {
            for (f, v) in inst.values.iter().enumerate() {
                let id = domains[f].binary_search_by(|d| d.as_str().cmp(v)).unwrap();
                encoded.push(id as u32);
            }
            let cid = classes.binary_search_by(|c| c.as_str().cmp(&inst.class)).unwrap();
            class_ids.push(cid as u32);
        }

        Ok(Dataset { schema, instances, domains, classes, encoded, class_ids })
    }

    /// Parses a corpus from text. Each nonblank, non-comment line must
    /// tokenize into exactly `schema.len() + 1` whitespace-separated tokens,
    /// the last being the class.
    pub fn parse_corpus(text: &str, schema: &Schema) -> Result<Dataset> {
        let width = schema.len();
        let mut instances = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tokens: Vec<String> = line.split_whitespace().map(str::to_string).collect();
            if tokens.len() != width + 1 {
                return Err(Error::CorpusParse {
                    line: idx + 1,
                    msg: format!("expected {} tokens, found {}", width + 1, tokens.len()),
                });
            }
            let class = tokens.pop().unwrap();
            instances.push(Instance::new(tokens, class));
        }
        Dataset::from_instances(schema.clone(), instances)
    }

    /// Reads and parses a corpus file.
    pub fn load(path: impl AsRef<Path>, schema: &Schema) -> Result<Dataset> {
        let text = std::fs::read_to_string(path)?;
        Dataset::parse_corpus(&text, schema)
    }

    /// Renders the corpus back to its line format, one instance per line,
    /// tokens separated by single spaces.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for inst in &self.instances {
            for v in &inst.values {
                out.push_str(v);
                out.push(' ');
            }
            out.push_str(&inst.class);
            out.push('\n');
        }
        out
    }

    /// Projects onto the named features, keeping the schema's original
    /// feature order. Instance count and classes are unchanged.
    pub fn project(&self, keep: &[impl AsRef<str>]) -> Result<Dataset> {
        if keep.is_empty() {
            return Err(Error::Invalid("projection needs at least one feature".into()));
        }
        let mut wanted = BTreeSet::new();
        for name in keep {
            self.schema.index_of(name.as_ref())?;
            wanted.insert(name.as_ref());
        }
        let kept_idx: Vec<usize> = self
            .schema
            .features
            .iter()
            .enumerate()
            .filter(|(_, f)| wanted.contains(f.name.as_str()))
            .map(|(i, _)| i)
            .collect();
        let features = kept_idx.iter().map(|&i| self.schema.features[i].clone()).collect();
        let schema = Schema::new(features, self.schema.class_name.clone())?;
        let instances = self
            .instances
            .iter()
            .map(|inst| {
                Instance::new(
                    kept_idx.iter().map(|&i| inst.values[i].clone()).collect(),
                    inst.class.clone(),
                )
            })
            .collect();
        Dataset::from_instances(schema, instances)
    }

    /// Count and fraction of each observed class.
    pub fn class_distribution(&self) -> BTreeMap<String, (usize, f64)> {
        let n = self.instances.len() as f64;
        let mut counts: BTreeMap<String, (usize, f64)> = BTreeMap::new();
        for inst in &self.instances {
            counts.entry(inst.class.clone()).or_insert((0, 0.0)).0 += 1;
        }
        for v in counts.values_mut() {
            v.1 = v.0 as f64 / n;
        }
        counts
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Sorted observed values of one feature.
    pub fn value_domain(&self, feature: &str) -> Result<&[String]> {
        Ok(&self.domains[self.schema.index_of(feature)?])
    }

    /// Sorted observed class tokens.
    pub fn class_domain(&self) -> &[String] {
        &self.classes
    }

    /// All instance indices, for subset-based operations over the full set.
    pub fn all_indices(&self) -> Vec<u32> {
        (0..self.instances.len() as u32).collect()
    }

    // ---- interned fast path used by induction and evaluation ----

    pub(crate) fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub(crate) fn domain_of(&self, feature_idx: usize) -> &[String] {
        &self.domains[feature_idx]
    }

    #[inline]
    pub(crate) fn value_id(&self, instance_idx: u32, feature_idx: usize) -> u32 {
        self.encoded[instance_idx as usize * self.schema.len() + feature_idx]
    }

    #[inline]
    pub(crate) fn class_id(&self, instance_idx: u32) -> u32 {
        self.class_ids[instance_idx as usize]
    }

    pub(crate) fn class_token(&self, class_id: u32) -> &str {
        &self.classes[class_id as usize]
    }

    /// Class counts over a subset, indexed by interned class id.
    pub(crate) fn class_counts(&self, subset: &[u32]) -> Vec<usize> {
        let mut counts = vec![0usize; self.classes.len()];
        for &i in subset {
            counts[self.class_ids[i as usize] as usize] += 1;
        }
        counts
    }
}
