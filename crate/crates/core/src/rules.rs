//! Ordered if-then rule sets: a line-based rule DSL, conversion of decision
//! trees to rules, and rule-set evaluation.
//!
//! The DSL:
//!
//! ```text
//! SET <name> = { v1, v2, ... }
//! RULE <id>: IF <feature> IN { v1, ... } [AND <feature> IN @<macro>] THEN <class>
//! DEFAULT <class>
//! OVERLAP first_match | random <seed>
//! # comment
//! ```
//!
//! Macros (`SET` lines) must be defined before they are referenced. A
//! literal `}` value token is accepted inside braces as long as it is
//! followed by a comma, e.g. `{I,A,},O,E}`; the renderer always emits it
//! in that shape.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Dataset, Instance, Schema};
use crate::error::{Error, Result};
use crate::evaluation::ErrorTable;
use crate::induction::{render_token_set, DecisionTree};
use crate::stats::pessimistic_error_rate;

/// Confidence for the pessimistic estimates used when simplifying rules,
/// matching the tree-pruning default.
const RULE_CF: f64 = 0.25;

/// A condition's value set: written out, or a reference to a named macro.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueSetRef {
    Literal(BTreeSet<String>),
    Macro(String),
}

/// One conjunct: the named feature's value must lie in the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub feature: String,
    pub values: ValueSetRef,
}

/// An if-then rule: all conditions (at most one per feature) must hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub conditions: Vec<Condition>,
    pub class: String,
}

/// What happens when several rules match one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapPolicy {
    /// Rule order is significant; the first match decides.
    FirstMatch,
    /// Pick uniformly among all matching rules, seeded per instance so a
    /// full-corpus evaluation is reproducible.
    RandomChoice { seed: u64 },
}

/// An ordered rule list with named value-set macros and a default class.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSet {
    schema: Schema,
    macros: BTreeMap<String, BTreeSet<String>>,
    rules: Vec<Rule>,
    default_class: String,
    overlap: OverlapPolicy,
}

impl RuleSet {
    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn macros(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.macros
    }

    pub fn default_class(&self) -> &str {
        &self.default_class
    }

    pub fn overlap(&self) -> OverlapPolicy {
        self.overlap
    }

    /// Replaces the overlap policy (the CLI uses this to re-seed a file's
    /// `OVERLAP random` from the command line).
    pub fn with_overlap(mut self, overlap: OverlapPolicy) -> RuleSet {
        self.overlap = overlap;
        self
    }

    /// Every class a decision can produce: rule classes plus the default.
    pub fn classes(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> =
            self.rules.iter().map(|r| r.class.clone()).collect();
        out.insert(self.default_class.clone());
        out
    }

    /// Feature names referenced by any rule.
    pub fn features(&self) -> BTreeSet<String> {
        self.rules
            .iter()
            .flat_map(|r| r.conditions.iter().map(|c| c.feature.clone()))
            .collect()
    }

    fn members<'a>(&'a self, values: &'a ValueSetRef) -> &'a BTreeSet<String> {
        match values {
            ValueSetRef::Literal(set) => set,
            ValueSetRef::Macro(name) => {
                self.macros.get(name).expect("macro checked at parse time")
            }
        }
    }

    fn rule_matches(&self, rule: &Rule, instance: &Instance) -> bool {
        rule.conditions.iter().all(|cond| {
            let idx = self
                .schema
                .index_of(&cond.feature)
                .expect("conditions validated against schema");
            self.members(&cond.values).contains(instance.value(idx))
        })
    }

    /// Classifies one instance. Under `FirstMatch` the first rule whose
    /// conditions all hold decides; under `RandomChoice` a seeded pick is
    /// made among all matching rules. No match yields the default class.
    pub fn apply(&self, instance: &Instance) -> Result<&str> {
        if instance.values().len() != self.schema.len() {
            return Err(Error::Invalid(format!(
                "instance has {} values, rule schema has {} features",
                instance.values().len(),
                self.schema.len()
            )));
        }
        match self.overlap {
            OverlapPolicy::FirstMatch => {
                for rule in &self.rules {
                    if self.rule_matches(rule, instance) {
                        return Ok(&rule.class);
                    }
                }
                Ok(&self.default_class)
            }
            OverlapPolicy::RandomChoice { seed } => {
                let matching: Vec<&Rule> = self
                    .rules
                    .iter()
                    .filter(|r| self.rule_matches(r, instance))
                    .collect();
                match matching.len() {
                    0 => Ok(&self.default_class),
                    1 => Ok(&matching[0].class),
                    m => {
                        // per-instance seeding keeps the whole evaluation
                        // reproducible and order-independent
                        let mut rng =
                            ChaCha8Rng::seed_from_u64(seed ^ fnv1a(instance.values()));
                        Ok(&matching[rng.random_range(0..m)].class)
                    }
                }
            }
        }
    }

    /// Per-class misclassification counts over a dataset.
    pub fn evaluate(&self, d: &Dataset) -> Result<RuleEval> {
        let mut per_class: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for class in d.class_domain() {
            per_class.insert(class.clone(), (0, 0));
        }
        let mut total_errors = 0;
        for inst in d.instances() {
            let entry = per_class.get_mut(inst.class()).expect("class in domain");
            entry.0 += 1;
            if self.apply(inst)? != inst.class() {
                entry.1 += 1;
                total_errors += 1;
            }
        }
        Ok(RuleEval {
            per_class: per_class
                .into_iter()
                .map(|(class, (total, errors))| ClassErrors { class, total, errors })
                .collect(),
            total_errors,
            n: d.len(),
        })
    }

    /// Renders the rule set in the DSL, parseable by [`parse_rules`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, members) in &self.macros {
            out.push_str("SET ");
            out.push_str(name);
            out.push_str(" = ");
            out.push_str(&render_token_set(members));
            out.push('\n');
        }
        for rule in &self.rules {
            out.push_str("RULE ");
            out.push_str(&rule.id);
            out.push_str(": IF ");
            for (i, cond) in rule.conditions.iter().enumerate() {
                if i > 0 {
                    out.push_str(" AND ");
                }
                out.push_str(&cond.feature);
                out.push_str(" IN ");
                match &cond.values {
                    ValueSetRef::Literal(set) => out.push_str(&render_token_set(set)),
                    ValueSetRef::Macro(name) => {
                        out.push('@');
                        out.push_str(name);
                    }
                }
            }
            out.push_str(" THEN ");
            out.push_str(&rule.class);
            out.push('\n');
        }
        out.push_str("DEFAULT ");
        out.push_str(&self.default_class);
        out.push('\n');
        match self.overlap {
            OverlapPolicy::FirstMatch => out.push_str("OVERLAP first_match\n"),
            OverlapPolicy::RandomChoice { seed } => {
                out.push_str(&format!("OVERLAP random {seed}\n"))
            }
        }
        out
    }
}

/// Per-class errors of a rule set on a dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleEval {
    /// One row per class in the dataset, sorted by class token.
    pub per_class: Vec<ClassErrors>,
    pub total_errors: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassErrors {
    pub class: String,
    /// Instances of this true class.
    pub total: usize,
    /// Of those, how many the rule set got wrong.
    pub errors: usize,
}

impl RuleEval {
    pub fn error_table(&self, label: impl Into<String>) -> ErrorTable {
        ErrorTable::new(
            label,
            self.per_class
                .iter()
                .map(|r| (r.class.clone(), r.total, r.errors))
                .collect(),
            self.n,
        )
    }
}

fn fnv1a(values: &[String]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for v in values {
        for b in v.as_bytes() {
            hash ^= u64::from(*b);
            hash = hash.wrapping_mul(0x100000001b3);
        }
        hash ^= 0xff;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

// ---------------------------------------------------------------------------
// DSL parsing
// ---------------------------------------------------------------------------

struct Cursor<'a> {
    line: &'a str,
    lineno: usize,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: &'a str, lineno: usize) -> Cursor<'a> {
        Cursor { line, lineno, pos: 0 }
    }

    fn col(&self) -> usize {
        self.line[..self.pos].chars().count() + 1
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::RuleParse { line: self.lineno, col: self.col(), msg: msg.into() }
    }

    fn rest(&self) -> &'a str {
        &self.line[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    /// Reads a bare token: characters up to whitespace or any delimiter.
    fn token(&mut self, what: &str) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || matches!(c, ',' | '{' | '}' | ':') {
                break;
            }
            self.bump();
        }
        if self.pos == start {
            return Err(self.err(format!("expected {what}")));
        }
        Ok(&self.line[start..self.pos])
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(kw)
            && self.rest()[kw.len()..]
                .chars()
                .next()
                .is_none_or(|c| c.is_whitespace() || matches!(c, '{' | '@' | ':'))
        {
            self.pos += kw.len();
            Ok(())
        } else {
            Err(self.err(format!("expected '{kw}'")))
        }
    }

    fn expect_char(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    /// Next non-whitespace char strictly after the current one.
    fn next_after(&self) -> Option<char> {
        let mut chars = self.rest().chars();
        chars.next();
        chars.find(|c| !c.is_whitespace())
    }

    /// Parses `{ v1, v2, ... }`. A `}` member must be followed by a comma.
    fn value_set(&mut self) -> Result<BTreeSet<String>> {
        self.expect_char('{')?;
        let mut members = BTreeSet::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Err(self.err("unterminated value set")),
                Some('}') => {
                    if self.next_after() == Some(',') {
                        members.insert("}".to_string());
                        self.bump();
                        self.expect_char(',')?;
                        continue;
                    }
                    self.bump();
                    break;
                }
                Some(',') => return Err(self.err("expected value token before ','")),
                Some(_) => {
                    let start = self.pos;
                    while let Some(c) = self.peek() {
                        if c.is_whitespace() || matches!(c, ',' | '}') {
                            break;
                        }
                        self.bump();
                    }
                    members.insert(self.line[start..self.pos].to_string());
                    self.skip_ws();
                    match self.peek() {
                        Some(',') => {
                            self.bump();
                        }
                        Some('}') => {
                            self.bump();
                            break;
                        }
                        _ => return Err(self.err("expected ',' or '}' in value set")),
                    }
                }
            }
        }
        if members.is_empty() {
            return Err(self.err("empty value set"));
        }
        Ok(members)
    }
}

/// Parses a rule file against a schema. Macros must be defined before use;
/// errors carry the line and column they were detected at.
pub fn parse_rules(text: &str, schema: &Schema) -> Result<RuleSet> {
    let mut macros: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut rules: Vec<Rule> = Vec::new();
    let mut default_class: Option<String> = None;
    let mut overlap: Option<OverlapPolicy> = None;

    for (idx, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut cur = Cursor::new(raw, idx + 1);
        cur.skip_ws();
        let directive = cur.token("a directive (SET, RULE, DEFAULT, OVERLAP)")?;
        match directive {
            "SET" => {
                let name = cur.token("a macro name")?.to_string();
                cur.expect_char('=')?;
                let members = cur.value_set()?;
                if macros.contains_key(&name) {
                    return Err(cur.err(format!("macro '{name}' already defined")));
                }
                if !cur.at_end() {
                    return Err(cur.err("unexpected trailing text after SET"));
                }
                macros.insert(name, members);
            }
            "RULE" => {
                let id = cur.token("a rule id")?.to_string();
                cur.expect_char(':')?;
                cur.expect_keyword("IF")?;
                let mut conditions: Vec<Condition> = Vec::new();
                loop {
                    cur.skip_ws();
                    let feat_col = cur.col();
                    let feature = cur.token("a feature name")?.to_string();
                    if schema.index_of(&feature).is_err() {
                        return Err(Error::RuleParse {
                            line: idx + 1,
                            col: feat_col,
                            msg: format!(
                                "unknown feature '{feature}'; valid features: {}",
                                schema.feature_names().join(", ")
                            ),
                        });
                    }
                    if conditions.iter().any(|c| c.feature == feature) {
                        return Err(Error::RuleParse {
                            line: idx + 1,
                            col: feat_col,
                            msg: format!("feature '{feature}' already constrained in this rule"),
                        });
                    }
                    cur.expect_keyword("IN")?;
                    cur.skip_ws();
                    let values = if cur.peek() == Some('@') {
                        cur.bump();
                        let name_col = cur.col();
                        let name = cur.token("a macro name")?.to_string();
                        if !macros.contains_key(&name) {
                            return Err(Error::RuleParse {
                                line: idx + 1,
                                col: name_col,
                                msg: format!("undefined macro '@{name}'"),
                            });
                        }
                        ValueSetRef::Macro(name)
                    } else {
                        ValueSetRef::Literal(cur.value_set()?)
                    };
                    conditions.push(Condition { feature, values });
                    cur.skip_ws();
                    if cur.rest().starts_with("AND") {
                        cur.expect_keyword("AND")?;
                        continue;
                    }
                    cur.expect_keyword("THEN")?;
                    break;
                }
                let class = cur.token("a class token")?.to_string();
                if !cur.at_end() {
                    return Err(cur.err("unexpected trailing text after rule"));
                }
                rules.push(Rule { id, conditions, class });
            }
            "DEFAULT" => {
                if default_class.is_some() {
                    return Err(cur.err("more than one DEFAULT line"));
                }
                default_class = Some(cur.token("a class token")?.to_string());
                if !cur.at_end() {
                    return Err(cur.err("unexpected trailing text after DEFAULT"));
                }
            }
            "OVERLAP" => {
                if overlap.is_some() {
                    return Err(cur.err("more than one OVERLAP line"));
                }
                let kind = cur.token("'first_match' or 'random'")?;
                overlap = Some(match kind {
                    "first_match" => OverlapPolicy::FirstMatch,
                    "random" => {
                        let seed_tok = cur.token("a seed")?;
                        let seed = seed_tok
                            .parse::<u64>()
                            .map_err(|_| cur.err(format!("invalid seed '{seed_tok}'")))?;
                        OverlapPolicy::RandomChoice { seed }
                    }
                    other => return Err(cur.err(format!("unknown overlap policy '{other}'"))),
                });
                if !cur.at_end() {
                    return Err(cur.err("unexpected trailing text after OVERLAP"));
                }
            }
            other => {
                return Err(Error::RuleParse {
                    line: idx + 1,
                    col: 1,
                    msg: format!("unknown directive '{other}'"),
                })
            }
        }
    }

    let default_class = default_class.ok_or(Error::RuleParse {
        line: text.lines().count() + 1,
        col: 1,
        msg: "missing DEFAULT line".into(),
    })?;

    Ok(RuleSet {
        schema: schema.clone(),
        macros,
        rules,
        default_class,
        overlap: overlap.unwrap_or(OverlapPolicy::FirstMatch),
    })
}

// ---------------------------------------------------------------------------
// tree -> rules
// ---------------------------------------------------------------------------

/// A root-to-leaf path flattened to feature constraints. Conditions on the
/// same feature at different depths intersect.
#[derive(Debug, Clone)]
struct Candidate {
    conditions: Vec<(usize, BTreeSet<String>)>,
    class: String,
}

/// Converts a tree into an ordered rule set: one candidate per leaf path,
/// greedy removal of conditions that do not worsen the rule's pessimistic
/// error estimate on `d`, duplicates collapsed, rules ordered by class and
/// descending training accuracy, default class from the uncovered
/// instances.
pub fn tree_to_rules(tree: &DecisionTree, d: &Dataset) -> Result<RuleSet> {
    let schema = d.schema();
    let mut candidates = Vec::new();
    collect_paths(tree, schema, &mut Vec::new(), &mut candidates)?;

    let mut simplified: Vec<(Candidate, usize, usize)> = Vec::new();
    for mut cand in candidates {
        let (mut covered, mut errors) = coverage(d, &cand);
        debug_assert!(covered > 0, "leaf paths cover their training instances");
        let mut estimate = pessimistic_error_rate(errors, covered, RULE_CF);
        while cand.conditions.len() > 1 {
            // a drop must keep the error count unchanged (coverage only
            // grows, so new instances must all be of the rule's class) and
            // must not worsen the pessimistic estimate
            let mut best: Option<(f64, usize, usize, usize)> = None;
            for k in 0..cand.conditions.len() {
                let mut dropped = cand.clone();
                dropped.conditions.remove(k);
                let (cov_k, err_k) = coverage(d, &dropped);
                if err_k > errors {
                    continue;
                }
                let est_k = pessimistic_error_rate(err_k, cov_k, RULE_CF);
                if best.as_ref().is_none_or(|(b, ..)| est_k < *b) {
                    best = Some((est_k, k, cov_k, err_k));
                }
            }
            match best {
                Some((est_k, k, cov_k, err_k)) if est_k <= estimate + 1e-9 => {
                    cand.conditions.remove(k);
                    debug_assert!(est_k <= estimate + 1e-9);
                    estimate = est_k;
                    covered = cov_k;
                    errors = err_k;
                }
                _ => break,
            }
        }
        simplified.push((cand, covered, errors));
    }

    // collapse duplicates, keeping one copy of each (conditions, class)
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut unique: Vec<(Candidate, usize, usize)> = Vec::new();
    for entry in simplified {
        let key = candidate_key(&entry.0, schema);
        if seen.insert(key) {
            unique.push(entry);
        }
    }

    // order: class, then descending accuracy, then fewer conditions, then text
    unique.sort_by(|(a, cov_a, err_a), (b, cov_b, err_b)| {
        let acc_a = (cov_a - err_a) as f64 / *cov_a as f64;
        let acc_b = (cov_b - err_b) as f64 / *cov_b as f64;
        a.class
            .cmp(&b.class)
            .then(acc_b.partial_cmp(&acc_a).expect("accuracies are finite"))
            .then(a.conditions.len().cmp(&b.conditions.len()))
            .then(candidate_key(a, schema).cmp(&candidate_key(b, schema)))
    });

    // default class: majority among instances no rule covers
    let mut uncovered_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for inst in d.instances() {
        let covered = unique.iter().any(|(cand, _, _)| matches_candidate(inst, cand));
        if !covered {
            *uncovered_counts.entry(inst.class()).or_insert(0) += 1;
        }
    }
    let default_class = if uncovered_counts.is_empty() {
        majority_class(d)
    } else {
        uncovered_counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(class, _)| class.to_string())
            .expect("nonempty")
    };

    // A rule of the default class is redundant when no later rule of a
    // different class can intercept an instance it matches; dropping it
    // changes no decision, on or off the training data.
    let mut keep = vec![true; unique.len()];
    for i in (0..unique.len()).rev() {
        if unique[i].0.class != default_class {
            continue;
        }
        let blocked = (i + 1..unique.len()).any(|j| {
            keep[j]
                && unique[j].0.class != default_class
                && candidates_can_overlap(&unique[i].0, &unique[j].0)
        });
        if !blocked {
            keep[i] = false;
        }
    }
    let kept: Vec<&Candidate> = unique
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|((cand, _, _), _)| cand)
        .collect();

    let rules: Vec<Rule> = kept
        .iter()
        .enumerate()
        .map(|(i, cand)| Rule {
            id: format!("r{}", i + 1),
            conditions: cand
                .conditions
                .iter()
                .map(|(feat_idx, set)| Condition {
                    feature: schema.features()[*feat_idx].name.clone(),
                    values: ValueSetRef::Literal(set.clone()),
                })
                .collect(),
            class: cand.class.clone(),
        })
        .collect();

    Ok(RuleSet {
        schema: schema.clone(),
        macros: BTreeMap::new(),
        rules,
        default_class,
        overlap: OverlapPolicy::FirstMatch,
    })
}

fn majority_class(d: &Dataset) -> String {
    d.class_distribution()
        .iter()
        .max_by(|a, b| a.1 .0.cmp(&b.1 .0).then(b.0.cmp(a.0)))
        .map(|(class, _)| class.clone())
        .expect("dataset is nonempty")
}

fn collect_paths(
    tree: &DecisionTree,
    schema: &Schema,
    path: &mut Vec<(usize, BTreeSet<String>)>,
    out: &mut Vec<Candidate>,
) -> Result<()> {
    match tree {
        DecisionTree::Leaf { class, .. } => {
            if !path.is_empty() {
                out.push(Candidate { conditions: path.clone(), class: class.clone() });
            }
            Ok(())
        }
        DecisionTree::Node { feature, branches, .. } => {
            let feat_idx = schema.index_of(feature)?;
            for (set, child) in branches {
                let existing = path.iter().position(|(f, _)| *f == feat_idx);
                match existing {
                    Some(i) => {
                        let narrowed: BTreeSet<String> =
                            path[i].1.intersection(set).cloned().collect();
                        let saved = std::mem::replace(&mut path[i].1, narrowed);
                        collect_paths(child, schema, path, out)?;
                        path[i].1 = saved;
                    }
                    None => {
                        path.push((feat_idx, set.clone()));
                        path.sort_by_key(|(f, _)| *f);
                        collect_paths(child, schema, path, out)?;
                        let pos = path.iter().position(|(f, _)| *f == feat_idx).unwrap();
                        path.remove(pos);
                    }
                }
            }
            Ok(())
        }
    }
}

fn matches_candidate(inst: &Instance, cand: &Candidate) -> bool {
    cand.conditions.iter().all(|(feat_idx, set)| set.contains(inst.value(*feat_idx)))
}

/// Whether some instance could satisfy both condition lists: every feature
/// constrained by both must have intersecting value sets.
fn candidates_can_overlap(a: &Candidate, b: &Candidate) -> bool {
    a.conditions.iter().all(|(f, set_a)| {
        match b.conditions.iter().find(|(g, _)| g == f) {
            Some((_, set_b)) => set_a.intersection(set_b).next().is_some(),
            None => true,
        }
    })
}

fn coverage(d: &Dataset, cand: &Candidate) -> (usize, usize) {
    let mut covered = 0;
    let mut errors = 0;
    for inst in d.instances() {
        if matches_candidate(inst, cand) {
            covered += 1;
            if inst.class() != cand.class {
                errors += 1;
            }
        }
    }
    (covered, errors)
}

fn candidate_key(cand: &Candidate, schema: &Schema) -> String {
    let conds: Vec<String> = cand
        .conditions
        .iter()
        .map(|(f, set)| format!("{} {}", schema.features()[*f].name, render_token_set(set)))
        .collect();
    format!("{} -> {}", conds.join(" & "), cand.class)
}
