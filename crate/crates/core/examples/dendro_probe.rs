use morphind::*;
fn main() {
    // small case with distinct heights, like the golden test will use
    let schema = Schema::parse("feature v other\nclass class\n").unwrap();
    let text = "\
l E\nl E\nr E\nr E\nt J\nt J\nk J\nk J\nn E\nn T\nm E\nm P\n";
    let d = Dataset::parse_corpus(text, &schema).unwrap();
    let t = contingency(&d, "v").unwrap();
    let dg = cluster_values(&t, ValueMetric::L1, Linkage::Average).unwrap();
    println!("{}", dg.render());
    for m in dg.merges() {
        println!("merge {} {} at {:.4}", m.left, m.right, m.height);
    }
    println!("\ncsv:\n{}", dg.render_csv());
}
