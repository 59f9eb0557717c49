use morphind::*;
fn main() {
    // try to reproduce render->parse failure by brute randomized search
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let tokens = ["=", "}", "@", "+", "a", "b", "zz"];
    for case in 0..20000 {
        let n_features = rng.random_range(1..=3);
        let schema_text: String = (0..n_features)
            .map(|i| format!("feature f{i} other\n"))
            .chain(std::iter::once("class class\n".to_string()))
            .collect();
        let schema = Schema::parse(&schema_text).unwrap();
        let n_rows = rng.random_range(1..=30);
        let text: String = (0..n_rows)
            .map(|_| {
                let mut line = String::new();
                for _ in 0..n_features {
                    line.push_str(tokens[rng.random_range(0..tokens.len())]);
                    line.push(' ');
                }
                line.push_str(["A", "B", "C"][rng.random_range(0..3)]);
                line.push('\n');
                line
            })
            .collect();
        let d = Dataset::parse_corpus(&text, &schema).unwrap();
        let tree = build_tree(&d, &InductionConfig::default()).unwrap();
        let rules = tree_to_rules(&tree, &d).unwrap();
        let rendered = rules.render();
        match parse_rules(&rendered, d.schema()) {
            Ok(_) => {}
            Err(e) => {
                println!("case {case} FAILED: {e}\ncorpus:\n{text}\nrendered:\n{rendered}");
                return;
            }
        }
    }
    println!("no failure found");
}
