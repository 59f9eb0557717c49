//! Rule files, schema, and sample corpus shipped with the crate (the same
//! files live under `data/` in the repository).

use crate::dataset::Schema;
use crate::rules::{parse_rules, RuleSet};

/// The five-rule diminutive suffix description with default class `T`.
/// Used as the oracle labeler for synthetic corpora.
pub const PAPER_S6_RULES: &str = include_str!("../../../data/rules_paper_s6.rules");

/// The last-syllable rhyme decision tree, flattened to ordered rules.
pub const NC_TREE_RULES: &str = include_str!("../../../data/tree_paper_s6_nc.rules");

/// A reconstructed rhyme-based handcrafted baseline with random overlap
/// resolution.
pub const TROMMELEN_RULES: &str = include_str!("../../../data/baseline_trommelen.rules");

/// The 12-feature schema as a schema file.
pub const DIMINUTIVE12_SCHEMA: &str = include_str!("../../../data/diminutive12.schema");

/// Four sample corpus lines.
pub const EXAMPLE_CORPUS: &str = include_str!("../../../data/example.corpus");

/// Parses [`PAPER_S6_RULES`] against the 12-feature schema.
pub fn paper_s6_ruleset() -> RuleSet {
    parse_rules(PAPER_S6_RULES, &Schema::diminutive12()).expect("bundled rule file parses")
}

/// Parses [`NC_TREE_RULES`] against the 12-feature schema.
pub fn nc_tree_ruleset() -> RuleSet {
    parse_rules(NC_TREE_RULES, &Schema::diminutive12()).expect("bundled rule file parses")
}

/// Parses [`TROMMELEN_RULES`] against the 12-feature schema.
pub fn trommelen_ruleset() -> RuleSet {
    parse_rules(TROMMELEN_RULES, &Schema::diminutive12()).expect("bundled rule file parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Dataset, Instance};

    /// Encodings of the five example nouns: huis, man, raam, woning, baan.
    pub(crate) fn example_nouns() -> Vec<(&'static str, Instance, &'static str)> {
        let mono = |o: &str, n: &str, c: &str| {
            let mut v = vec!["=".to_string(); 8];
            v.extend(["+", o, n, c].iter().map(|s| s.to_string()));
            v
        };
        vec![
            ("huis", Instance::new(mono("h", "L", "s"), "J"), "J"),
            ("man", Instance::new(mono("m", "A", "n"), "E"), "E"),
            ("raam", Instance::new(mono("r", "a", "m"), "P"), "P"),
            (
                "woning",
                Instance::new(
                    ["=", "=", "=", "=", "+", "w", "o", "=", "-", "n", "I", "N"]
                        .iter()
                        .map(|s| s.to_string())
                        .collect(),
                    "K",
                ),
                "K",
            ),
            ("baan", Instance::new(mono("b", "a", "n"), "T"), "T"),
        ]
    }

    #[test]
    fn bundled_rule_files_parse() {
        assert_eq!(paper_s6_ruleset().rules().len(), 5);
        assert_eq!(paper_s6_ruleset().default_class(), "T");
        assert_eq!(nc_tree_ruleset().rules().len(), 8);
        assert_eq!(trommelen_ruleset().rules().len(), 6);
    }

    #[test]
    fn bimoraic_macro_has_thirteen_tokens() {
        let rs = paper_s6_ruleset();
        let bimoraic = &rs.macros()["bimoraic"];
        assert_eq!(bimoraic.len(), 13);
        for token in ["K", "a", "e", "u", "M", "@", "y", "o", "i", "L", ")", "|", "<"] {
            assert!(bimoraic.contains(token), "missing {token}");
        }
        assert_eq!(rs.macros()["short"].len(), 5);
        assert!(rs.macros()["short"].contains("}"));
    }

    #[test]
    fn example_nouns_get_their_suffixes() {
        let rs = paper_s6_ruleset();
        for (word, inst, expected) in example_nouns() {
            assert_eq!(rs.apply(&inst).unwrap(), expected, "noun {word}");
        }
    }

    #[test]
    fn velar_nasal_split_on_penultimate_nucleus() {
        let rs = paper_s6_ruleset();
        // koning-like: full-vowel penult nucleus -> K
        let koning = Instance::new(
            ["=", "=", "=", "=", "+", "k", "o", "=", "-", "n", "I", "N"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            "?",
        );
        assert_eq!(rs.apply(&koning).unwrap(), "K");
        // wandeling-like: schwa penult nucleus -> E
        let wandeling = Instance::new(
            ["+", "w", "A", "n", "-", "d", "@", "=", "-", "l", "I", "N"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            "?",
        );
        assert_eq!(rs.apply(&wandeling).unwrap(), "E");
        // monosyllabic -ing word -> E
        let mut ring = vec!["=".to_string(); 8];
        ring.extend(["+", "r", "I", "N"].iter().map(|s| s.to_string()));
        assert_eq!(rs.apply(&Instance::new(ring, "?")).unwrap(), "E");
    }

    #[test]
    fn example_corpus_parses_bit_exactly() {
        let d = Dataset::parse_corpus(EXAMPLE_CORPUS, &Schema::diminutive12()).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d.instances()[0].class(), "J");
        assert_eq!(d.instances()[3].values()[10], "@");
    }

    #[test]
    fn schema_file_matches_builtin_preset() {
        assert_eq!(Schema::parse(DIMINUTIVE12_SCHEMA).unwrap(), Schema::diminutive12());
    }
}
