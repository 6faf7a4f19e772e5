use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gssl_core::eval::{evaluate, unlabeled_nodes};
use gssl_core::experiment::{
    alpha_sweep, random_label_trials, write_csv, EvalSet, SweepSpec, DEFAULT_ALPHAS,
    DEFAULT_SIGMAS,
};
use gssl_core::io::{
    read_edge_list, read_labels, read_partition, write_edge_list, write_partition,
    write_scores_csv,
};
use gssl_core::ssl::{build_label_matrix, solve, MethodParams, Normalization, SolveMode};
use gssl_core::synth::{planted_partition, PlantedPartitionSpec};
use gssl_core::walk::{limit_class_weights, stationary_distribution};
use gssl_core::LabelSet;

#[derive(Parser)]
#[command(name = "gssl", version, about = "Graph-based semi-supervised classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every node from a handful of labeled ones.
    Classify(ClassifyArgs),
    /// Sweep (sigma, alpha) and score modularity and precision.
    Sweep(SweepArgs),
    /// Sample a planted-partition graph.
    Generate(GenerateArgs),
    /// Score a predicted partition against a reference.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Iterative,
    Dense,
}

#[derive(Clone, Copy, ValueEnum)]
enum Labeling {
    Raw,
    PerClass,
}

#[derive(Clone, Copy, ValueEnum)]
enum Evaluated {
    Unlabeled,
    All,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("regularization").required(true).args(["alpha", "mu"]))]
struct ClassifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// `node_id class_name` lines.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    sigma: f64,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "iterative")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "raw")]
    labeling: Labeling,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Reference partition, `node_id class_index` lines.
    #[arg(long)]
    partition: PathBuf,
    /// Fixed labeled nodes (`node_id class_index`); disables random trials.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SIGMAS.to_vec())]
    sigmas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ALPHAS.to_vec())]
    alphas: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    labels_per_class: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "unlabeled")]
    evaluate: Evaluated,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long = "p-in", value_delimiter = ',', required = true)]
    p_in: Vec<f64>,
    #[arg(long = "p-out")]
    p_out: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Writes `<prefix>_edges.txt` and `<prefix>_partition.txt`.
    #[arg(long)]
    out_prefix: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// Labeled nodes to exclude from precision (`node_id class_name`).
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Writes `<prefix>_nodes.csv` (degree, stationary probability) and, with
    /// --labels, `<prefix>_limit.csv` (alpha -> 1 class weights).
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    /// Sigma used for the limit class weights.
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn classify(args: ClassifyArgs) -> Result<()> {
    let g = read_edge_list(&args.graph, false)?;
    let named = read_labels(&args.labels, &g)?;
    let mut params = match (args.alpha, args.mu) {
        (Some(alpha), None) => MethodParams::new(args.sigma, alpha)?,
        (None, Some(mu)) => MethodParams::from_mu(args.sigma, mu)?,
        _ => bail!("pass exactly one of --alpha and --mu"),
    };
    if let Some(tol) = args.tolerance {
        params = params.with_tolerance(tol);
    }
    if let Some(max) = args.max_iterations {
        params = params.with_max_iterations(max);
    }
    let labels = named.labels.with_normalization(match args.labeling {
        Labeling::Raw => Normalization::Raw,
        Labeling::PerClass => Normalization::PerClass,
    });
    let y = build_label_matrix(&labels, g.node_count())?;
    let mode = match args.mode {
        Mode::Iterative => SolveMode::Iterative,
        Mode::Dense => SolveMode::DenseDirect,
    };
    let result = solve(&g, &y, &params, mode)?;
    let mut out = create(&args.out)?;
    write_scores_csv(&g, &result.scores, &result.labels, &named.class_names, &mut out)?;
    out.flush()?;
    eprintln!(
        "classified {} nodes into {} classes (iterations {}, residual {:e}, {} unreached)",
        g.node_count(),
        labels.class_count(),
        result.iterations,
        result.residual,
        result.zero_rows.len()
    );
    Ok(())
}

/// Labels whose class column names a partition class index.
fn indexed_labels(path: &Path, g: &gssl_core::Graph, k: usize) -> Result<LabelSet> {
    let named = read_labels(path, g)?;
    let mut labels = LabelSet::new(k)?;
    for (node, class) in named.labels.iter() {
        let name = &named.class_names[class];
        let index: usize = name
            .parse()
            .with_context(|| format!("class {name:?} in {} is not an index", path.display()))?;
        labels.insert(node, index)?;
    }
    Ok(labels)
}

fn sweep(args: SweepArgs) -> Result<()> {
    let g = read_edge_list(&args.graph, false)?;
    let truth = read_partition(&args.partition, &g)?;
    let spec = SweepSpec {
        alphas: args.alphas,
        sigmas: args.sigmas,
        trials: args.trials,
        labels_per_class: args.labels_per_class,
        seed: args.seed,
        evaluation: match args.evaluate {
            Evaluated::Unlabeled => EvalSet::Unlabeled,
            Evaluated::All => EvalSet::All,
        },
    };
    let result = match &args.labels {
        Some(path) => {
            let labels = indexed_labels(path, &g, truth.class_count())?;
            alpha_sweep(&g, &labels, Some(&truth), &spec)?
        }
        None => random_label_trials(&g, &truth, &spec)?,
    };
    write_csv(&result, &args.out)?;
    Ok(())
}

fn generate(args: GenerateArgs) -> Result<()> {
    let spec = PlantedPartitionSpec {
        sizes: args.sizes,
        p_in: args.p_in,
        p_out: args.p_out,
        seed: args.seed,
    };
    let (g, truth) = planted_partition(&spec)?;
    let isolated = g.degrees().iter().filter(|&&d| d == 0.0).count();
    if isolated > 0 {
        eprintln!("warning: {isolated} isolated nodes cannot be represented in the edge list");
    }
    let edges_path = with_suffix(&args.out_prefix, "_edges.txt");
    let mut out = create(&edges_path)?;
    write_edge_list(&g, &mut out)?;
    out.flush()?;
    let partition_path = with_suffix(&args.out_prefix, "_partition.txt");
    let mut out = create(&partition_path)?;
    write_partition(&g, &truth, &mut out)?;
    out.flush()?;
    Ok(())
}

fn eval(args: EvalArgs) -> Result<()> {
    let g = read_edge_list(&args.graph, false)?;
    let pred = read_partition(&args.pred, &g)?;
    let truth = read_partition(&args.truth, &g)?;
    // Align class counts when the prediction never uses the last classes.
    let k = pred.class_count().max(truth.class_count());
    let pred = gssl_core::Partition::new(pred.assignment().to_vec(), k)?;
    let truth = gssl_core::Partition::new(truth.assignment().to_vec(), k)?;

    let labels = match &args.labels {
        Some(path) => Some(read_labels(path, &g)?),
        None => None,
    };
    let evaluated = match &labels {
        Some(named) => unlabeled_nodes(g.node_count(), &named.labels),
        None => (0..g.node_count()).collect(),
    };
    let report = evaluate(&g, &pred, &truth, &evaluated)?;
    report.write_csv(io::stdout().lock())?;

    if let Some(prefix) = &args.diagnostics {
        let stationary = stationary_distribution(&g)?;
        let path = with_suffix(prefix, "_nodes.csv");
        let mut out = create(&path)?;
        writeln!(out, "node,degree,stationary")?;
        for (i, p) in stationary.iter().enumerate() {
            writeln!(out, "{},{},{}", g.id(i), g.degree(i), p)?;
        }
        out.flush()?;

        if let Some(named) = &labels {
            let limit = limit_class_weights(&g, &named.labels, args.sigma)?;
            let path = with_suffix(prefix, "_limit.csv");
            let mut out = create(&path)?;
            writeln!(out, "class,weight,dominating")?;
            for (k, w) in limit.weights.iter().enumerate() {
                writeln!(out, "{},{},{}", named.class_names[k], w, limit.dominating == Some(k))?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Classify(args) => classify(args),
        Command::Sweep(args) => sweep(args),
        Command::Generate(args) => generate(args),
        Command::Eval(args) => eval(args),
    }
}
