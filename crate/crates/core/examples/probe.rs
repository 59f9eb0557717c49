// scratch probe: acceptance-scale behavior on synthetic corpora
use morphind::*;

fn main() {
    let oracle = bundled::paper_s6_ruleset();

    // rule rediscovery at larger n
    for (n, seed) in [(30000usize, 7u64), (30000, 11), (30000, 42)] {
        let cfg = GeneratorConfig { n, seed, ..GeneratorConfig::default() };
        let d = generate(&cfg, &oracle).unwrap();
        let tree = build_tree(&d, &InductionConfig::default()).unwrap();
        let derived = tree_to_rules(&tree, &d).unwrap();
        let fresh = generate(
            &GeneratorConfig { n: 2000, seed: seed + 1000, ..GeneratorConfig::default() },
            &oracle,
        )
        .unwrap();
        let disagreements = fresh
            .instances()
            .iter()
            .filter(|i| derived.apply(i).unwrap() != oracle.apply(i).unwrap())
            .count();
        println!(
            "n={n} seed={seed}: tree nodes={}, rules={}, disagreements={disagreements}/2000",
            tree.node_count(),
            derived.rules().len()
        );
    }

    // cross-validation at n=4000
    let d = generate(&GeneratorConfig { n: 4000, seed: 7, ..GeneratorConfig::default() }, &oracle)
        .unwrap();
    let t0 = std::time::Instant::now();
    let report = cross_validate(&d, 10, 7, true, &InductionConfig::default()).unwrap();
    println!(
        "CV(4000, k=10): mean={:.4} errors={} time={:?}",
        report.mean_accuracy,
        report.total_errors(),
        t0.elapsed()
    );

    // NC-projection root + bimoraic group
    let nc = d.project(&["n3", "c3"]).unwrap();
    let nc_tree = build_tree(&nc, &InductionConfig::default()).unwrap();
    if let DecisionTree::Node { feature, .. } = &nc_tree {
        println!("NC root feature: {feature}");
    }
    let bimoraic: std::collections::BTreeSet<String> =
        syngen::BIMORAIC_NUCLEI.iter().map(|s| s.to_string()).collect();
    let found = categories_from_tree(&nc_tree)
        .iter()
        .any(|cat| cat.feature == "n3" && cat.groups.iter().any(|(_, g)| *g == bimoraic));
    println!("bimoraic group found in NC tree: {found}");

    // clustering of last-syllable codas
    let table = contingency(&d, "c3").unwrap();
    let dg = cluster_values(&table, ValueMetric::L1, Linkage::Average).unwrap();
    let cut = dg.cut_k(2).unwrap();
    let son = cut.group_of("n").unwrap();
    let obs = cut.group_of("t").unwrap();
    println!(
        "k=2 cut: n,l,r,m together: {}; t,k,s,p,f together: {}; separated: {}",
        ["l", "r", "m"].iter().all(|v| son.contains(*v)),
        ["k", "s", "p", "f"].iter().all(|v| obs.contains(*v)),
        ["t", "k", "s", "p", "f"].iter().all(|v| !son.contains(*v))
    );
    println!("\ncoda dendrogram:\n{}", dg.render());

    // handcrafted baseline comparison shape
    let trommelen = bundled::trommelen_ruleset();
    let nc_rules = bundled::nc_tree_ruleset();
    let e1 = trommelen.evaluate(&d).unwrap();
    let e2 = nc_rules.evaluate(&d).unwrap();
    println!(
        "{}",
        compare(&e1.error_table("handcrafted"), &e2.error_table("induced")).unwrap()
    );
}
