//! `morphind` — train trees, derive and run rule files, cross-validate,
//! project corpora, cluster feature values, and generate synthetic data.
//!
//! Exit status: 0 on success, 1 on a usage error, 2 on a data or parse
//! error. All randomness flows through explicit `--seed` flags; identical
//! invocations produce identical output bytes.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use morphind::{
    baseline_accuracy, build_tree, categories_from_tree, cluster_values, compare, contingency,
    cross_validate, generate, parse_rules, tree_to_rules, BaselineKind, Dataset, GeneratorConfig,
    InductionConfig, Linkage, OverlapPolicy, RuleSet, Schema, SplitCriterion, ValueMetric,
};

#[derive(Parser)]
#[command(
    name = "morphind",
    version,
    about = "Decision-tree and rule induction over categorical linguistic corpora",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Induce a decision tree from a corpus and print it
    Train(TrainArgs),
    /// Classify a corpus with a trained tree or a rule file
    Classify(ClassifyArgs),
    /// Derive, check, or apply rule files
    Rules {
        #[command(subcommand)]
        action: RulesAction,
    },
    /// Stratified k-fold cross-validation of tree induction
    Crossval(CrossvalArgs),
    /// Keep only the named features of a corpus
    Project(ProjectArgs),
    /// Cluster one feature's values by their class distributions
    Cluster(ClusterArgs),
    /// Evaluate two rule files on one corpus, side by side
    Compare(CompareArgs),
    /// Generate a synthetic oracle-labeled corpus
    Gen(GenArgs),
}

#[derive(Subcommand)]
enum RulesAction {
    /// Induce a tree, convert it to rules, and print the rule file
    Derive(DeriveArgs),
    /// Parse a rule file and print its canonical form
    Parse(RulesParseArgs),
    /// Apply a rule file to a corpus
    Apply(ApplyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionOpt {
    Gain,
    GainRatio,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatOpt {
    Text,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricOpt {
    L1,
    L2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LinkageOpt {
    Single,
    Average,
    Complete,
}

#[derive(Args)]
struct SchemaArg {
    /// Schema file path, or the built-in "diminutive12" preset
    #[arg(long, default_value = "diminutive12")]
    schema: String,
}

#[derive(Args)]
struct InductionArgs {
    /// Split-selection criterion
    #[arg(long, value_enum, default_value_t = CriterionOpt::GainRatio)]
    criterion: CriterionOpt,
    /// Collapse feature values into branch sets while splitting
    #[arg(long, value_enum, default_value_t = Toggle::On)]
    grouping: Toggle,
    /// Smallest subset that may still be split
    #[arg(long, default_value_t = 2)]
    min_split: usize,
    /// Apply pessimistic pruning
    #[arg(long)]
    prune: bool,
    /// Confidence for the pruning error bound, in (0,1)
    #[arg(long, default_value_t = 0.25)]
    prune_cf: f64,
}

impl InductionArgs {
    fn config(&self) -> InductionConfig {
        InductionConfig {
            criterion: match self.criterion {
                CriterionOpt::Gain => SplitCriterion::Gain,
                CriterionOpt::GainRatio => SplitCriterion::GainRatio,
            },
            grouping: self.grouping == Toggle::On,
            min_split: self.min_split,
            prune: self.prune,
            prune_cf: self.prune_cf,
            ..InductionConfig::default()
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    /// Training corpus
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    schema: SchemaArg,
    #[command(flatten)]
    induction: InductionArgs,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also list the value groups of every tree node
    #[arg(long)]
    categories: bool,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("model").required(true).args(["train", "rules"]))]
struct ClassifyArgs {
    /// Corpus to classify
    #[arg(long = "in")]
    input: PathBuf,
    /// Train a tree on this corpus and use it as the model
    #[arg(long)]
    train: Option<PathBuf>,
    /// Use a rule file as the model
    #[arg(long)]
    rules: Option<PathBuf>,
    #[command(flatten)]
    schema: SchemaArg,
    #[command(flatten)]
    induction: InductionArgs,
    #[arg(long, value_enum, default_value_t = FormatOpt::Text)]
    format: FormatOpt,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DeriveArgs {
    /// Training corpus
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    schema: SchemaArg,
    #[command(flatten)]
    induction: InductionArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RulesParseArgs {
    /// Rule file to check
    #[arg(long)]
    rules: PathBuf,
    #[command(flatten)]
    schema: SchemaArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ApplyArgs {
    /// Rule file
    #[arg(long)]
    rules: PathBuf,
    /// Corpus to classify
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    schema: SchemaArg,
    /// Reseed a rule file's random overlap policy
    #[arg(long)]
    seed: Option<u64>,
    /// Print a per-class error table instead of per-line decisions
    #[arg(long)]
    report: bool,
    #[arg(long, value_enum, default_value_t = FormatOpt::Text)]
    format: FormatOpt,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CrossvalArgs {
    /// Corpus to evaluate on
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    schema: SchemaArg,
    /// Number of folds
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Fold-assignment seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Disable per-class stratification
    #[arg(long)]
    no_stratified: bool,
    /// Also print majority and probability-matching baselines
    #[arg(long)]
    baselines: bool,
    #[command(flatten)]
    induction: InductionArgs,
    #[arg(long, value_enum, default_value_t = FormatOpt::Text)]
    format: FormatOpt,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProjectArgs {
    /// Input corpus
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated feature names to keep
    #[arg(long, value_delimiter = ',')]
    keep: Vec<String>,
    #[command(flatten)]
    schema: SchemaArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClusterArgs {
    /// Input corpus
    #[arg(long = "in")]
    input: PathBuf,
    /// Feature whose values to cluster
    #[arg(long)]
    feature: String,
    #[command(flatten)]
    schema: SchemaArg,
    #[arg(long, value_enum, default_value_t = MetricOpt::L1)]
    metric: MetricOpt,
    #[arg(long, value_enum, default_value_t = LinkageOpt::Average)]
    linkage: LinkageOpt,
    /// Also print the partition with this many clusters
    #[arg(long)]
    cut: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatOpt::Text)]
    format: FormatOpt,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Corpus both rule files are evaluated on
    #[arg(long = "in")]
    input: PathBuf,
    /// First rule file
    #[arg(long)]
    rules_a: PathBuf,
    /// Second rule file
    #[arg(long)]
    rules_b: PathBuf,
    #[command(flatten)]
    schema: SchemaArg,
    /// Reseed random overlap policies in both files
    #[arg(long)]
    seed: Option<u64>,
    /// Column label for the first rule file
    #[arg(long, default_value = "A")]
    label_a: String,
    /// Column label for the second rule file
    #[arg(long, default_value = "B")]
    label_b: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Where to write the corpus
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value config file (flags below override it)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Instance count
    #[arg(long)]
    n: Option<usize>,
    /// Sampling seed
    #[arg(long)]
    seed: Option<u64>,
    /// Label corruption rate in [0,1)
    #[arg(long)]
    noise: Option<f64>,
    /// Probability of a monosyllabic word
    #[arg(long)]
    mono: Option<f64>,
    /// Probability of "+" stress per syllable
    #[arg(long)]
    stress: Option<f64>,
    /// Oracle rule file (default: the bundled five-rule file)
    #[arg(long)]
    oracle: Option<PathBuf>,
}

enum CliError {
    Data(String),
}

impl From<morphind::Error> for CliError {
    fn from(e: morphind::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Data(msg)) => {
            eprintln!("morphind: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_schema(spec: &str) -> Result<Schema, CliError> {
    if spec == "diminutive12" {
        return Ok(Schema::diminutive12());
    }
    let text = std::fs::read_to_string(spec)?;
    Ok(Schema::parse(&text)?)
}

fn load_corpus(path: &PathBuf, schema: &Schema) -> Result<Dataset, CliError> {
    Ok(Dataset::load(path, schema)?)
}

fn load_rules(path: &PathBuf, schema: &Schema) -> Result<RuleSet, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_rules(&text, schema)?)
}

fn reseed(rs: RuleSet, seed: Option<u64>) -> RuleSet {
    match (seed, rs.overlap()) {
        (Some(seed), OverlapPolicy::RandomChoice { .. }) => {
            rs.with_overlap(OverlapPolicy::RandomChoice { seed })
        }
        _ => rs,
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Train(args) => {
            let schema = load_schema(&args.schema.schema)?;
            let d = load_corpus(&args.input, &schema)?;
            let tree = build_tree(&d, &args.induction.config())?;
            let mut text = tree.render();
            if args.categories {
                for cat in categories_from_tree(&tree) {
                    let _ = writeln!(text, "\n[{}] at {}", cat.feature, match &cat.source {
                        morphind::CategorySource::TreeGrouping { path } => path.clone(),
                        _ => unreachable!(),
                    });
                    text.push_str(&cat.render());
                }
            }
            emit(&args.out, &text)
        }
        Command::Classify(args) => {
            let schema = load_schema(&args.schema.schema)?;
            let d = load_corpus(&args.input, &schema)?;
            let predict: Box<dyn Fn(&morphind::Instance) -> Result<String, CliError>> =
                if let Some(train_path) = &args.train {
                    let train = load_corpus(train_path, &schema)?;
                    let tree = build_tree(&train, &args.induction.config())?;
                    Box::new(move |inst| Ok(tree.classify(&schema, inst)?.to_string()))
                } else {
                    let rules = load_rules(args.rules.as_ref().expect("clap group"), &schema)?;
                    Box::new(move |inst| Ok(rules.apply(inst)?.to_string()))
                };
            let mut text = String::new();
            match args.format {
                FormatOpt::Text => {
                    for inst in d.instances() {
                        let _ = writeln!(text, "{}", predict(inst)?);
                    }
                }
                FormatOpt::Csv => {
                    text.push_str("index,class,predicted\n");
                    for (i, inst) in d.instances().iter().enumerate() {
                        let _ = writeln!(text, "{i},{},{}", inst.class(), predict(inst)?);
                    }
                }
            }
            emit(&args.out, &text)
        }
        Command::Rules { action } => match action {
            RulesAction::Derive(args) => {
                let schema = load_schema(&args.schema.schema)?;
                let d = load_corpus(&args.input, &schema)?;
                let tree = build_tree(&d, &args.induction.config())?;
                let rules = tree_to_rules(&tree, &d)?;
                emit(&args.out, &rules.render())
            }
            RulesAction::Parse(args) => {
                let schema = load_schema(&args.schema.schema)?;
                let rules = load_rules(&args.rules, &schema)?;
                emit(&args.out, &rules.render())
            }
            RulesAction::Apply(args) => {
                let schema = load_schema(&args.schema.schema)?;
                let d = load_corpus(&args.input, &schema)?;
                let rules = reseed(load_rules(&args.rules, &schema)?, args.seed);
                let text = if args.report {
                    let eval = rules.evaluate(&d)?;
                    match args.format {
                        FormatOpt::Text => eval.error_table("errors").render(),
                        FormatOpt::Csv => {
                            let mut t = String::from("class,total,errors\n");
                            for row in &eval.per_class {
                                let _ =
                                    writeln!(t, "{},{},{}", row.class, row.total, row.errors);
                            }
                            let _ = writeln!(t, "Total,{},{}", eval.n, eval.total_errors);
                            t
                        }
                    }
                } else {
                    let mut t = String::new();
                    if args.format == FormatOpt::Csv {
                        t.push_str("index,class,predicted\n");
                        for (i, inst) in d.instances().iter().enumerate() {
                            let _ = writeln!(t, "{i},{},{}", inst.class(), rules.apply(inst)?);
                        }
                    } else {
                        for inst in d.instances() {
                            let _ = writeln!(t, "{}", rules.apply(inst)?);
                        }
                    }
                    t
                };
                emit(&args.out, &text)
            }
        },
        Command::Crossval(args) => {
            let schema = load_schema(&args.schema.schema)?;
            let d = load_corpus(&args.input, &schema)?;
            let report = cross_validate(
                &d,
                args.k,
                args.seed,
                !args.no_stratified,
                &args.induction.config(),
            )?;
            let mut text = match args.format {
                FormatOpt::Text => report.render(),
                FormatOpt::Csv => report.render_csv(),
            };
            if args.baselines {
                let majority = baseline_accuracy(&d, BaselineKind::Majority);
                let prob = baseline_accuracy(&d, BaselineKind::ProbMatching);
                match args.format {
                    FormatOpt::Text => {
                        let _ = writeln!(text, "Majority baseline: {majority:.4}");
                        let _ = writeln!(text, "Probability-matching baseline: {prob:.4}");
                    }
                    FormatOpt::Csv => {
                        let _ = writeln!(text, "baseline_majority={majority:.6}");
                        let _ = writeln!(text, "baseline_prob_matching={prob:.6}");
                    }
                }
            }
            emit(&args.out, &text)
        }
        Command::Project(args) => {
            let schema = load_schema(&args.schema.schema)?;
            let d = load_corpus(&args.input, &schema)?;
            let kept = d.project(&args.keep)?;
            emit(&args.out, &kept.render())
        }
        Command::Cluster(args) => {
            let schema = load_schema(&args.schema.schema)?;
            let d = load_corpus(&args.input, &schema)?;
            let table = contingency(&d, &args.feature)?;
            let metric = match args.metric {
                MetricOpt::L1 => ValueMetric::L1,
                MetricOpt::L2 => ValueMetric::L2,
            };
            let linkage = match args.linkage {
                LinkageOpt::Single => Linkage::Single,
                LinkageOpt::Average => Linkage::Average,
                LinkageOpt::Complete => Linkage::Complete,
            };
            let dg = cluster_values(&table, metric, linkage)?;
            let mut text = match args.format {
                FormatOpt::Text => dg.render(),
                FormatOpt::Csv => dg.render_csv(),
            };
            if let Some(k) = args.cut {
                let cut = dg.cut_k(k)?.with_feature(args.feature.clone());
                match args.format {
                    FormatOpt::Text => {
                        let _ = writeln!(text, "\nPartition at k={k}:");
                        text.push_str(&cut.render());
                    }
                    FormatOpt::Csv => {
                        text.push_str("group,token\n");
                        for (name, group) in &cut.groups {
                            for token in group {
                                let _ = writeln!(text, "{name},{token}");
                            }
                        }
                    }
                }
            }
            emit(&args.out, &text)
        }
        Command::Compare(args) => {
            let schema = load_schema(&args.schema.schema)?;
            let d = load_corpus(&args.input, &schema)?;
            let rules_a = reseed(load_rules(&args.rules_a, &schema)?, args.seed);
            let rules_b = reseed(load_rules(&args.rules_b, &schema)?, args.seed);
            let table_a = rules_a.evaluate(&d)?.error_table(args.label_a.clone());
            let table_b = rules_b.evaluate(&d)?.error_table(args.label_b.clone());
            emit(&args.out, &compare(&table_a, &table_b)?)
        }
        Command::Gen(args) => {
            let mut cfg = GeneratorConfig::default();
            if let Some(path) = &args.config {
                let text = std::fs::read_to_string(path)?;
                cfg.parse_overrides(&text)?;
            }
            if let Some(n) = args.n {
                cfg.n = n;
            }
            if let Some(seed) = args.seed {
                cfg.seed = seed;
            }
            if let Some(noise) = args.noise {
                cfg.noise_rate = noise;
            }
            if let Some(mono) = args.mono {
                cfg.mono_prob = mono;
            }
            if let Some(stress) = args.stress {
                cfg.stress_prob = stress;
            }
            let oracle = match &args.oracle {
                Some(path) => load_rules(path, &Schema::diminutive12())?,
                None => morphind::bundled::paper_s6_ruleset(),
            };
            let d = generate(&cfg, &oracle)?;
            emit(&args.out, &d.render())
        }
    }
}
