//! The `crits` command line.
//!
//! Subcommands: `synth` (ground-truth dataset), `train`, `search` (random
//! hyperparameter search), `explain` (CSV + SVG saliency maps), `eval` (the
//! perturbation / sensitivity / sparsity protocol) and `report` (CSV to SVG).
//! All randomness flows from `--seed`; outputs embed no timestamps, so a rerun
//! with identical arguments and inputs reproduces every artifact byte for
//! byte. Each artifact-producing command writes a `manifest.txt` with its
//! resolved configuration and the SHA-256 of every file it read or wrote.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample as index_sample;
use sha2::{Digest, Sha256};

use crate::data::{
    apply_norm, fit_norm, parse_csv_with_header, parse_ts, stratified_split, synth_bump,
    TimeSeriesDataset,
};
use crate::eval::{run_protocol, ProtocolConfig};
use crate::explain::{
    explain_intrinsic, Explainer, GradExplainer, GradientShapExplainer, IntrinsicExplainer,
    SmoothGradExplainer, UniformExplainer,
};
use crate::model::{load_model, save_model, CritsModel, ModelConfig};
use crate::report::{
    boxplot_svg, eval_csv_rows, eval_report_to_csv, heatmap_svg, matrix_from_csv, matrix_to_csv,
    BoxSeries, EVAL_CSV_HEADER,
};
use crate::seed;
use crate::train::{evaluate, random_search, train_model, SearchSpace, TrainConfig};

#[derive(Parser)]
#[command(
    name = "crits",
    version,
    about = "Interpretable time-series classification with exact per-instance linear explanations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate a synthetic bump dataset with ground-truth masks
    Synth(SynthArgs),
    /// Train a classifier and save it with its training history
    Train(TrainArgs),
    /// Random hyperparameter search over the standard grids
    Search(SearchArgs),
    /// Extract saliency maps for chosen instances as CSV + SVG
    Explain(ExplainArgs),
    /// Run the explanation-quality protocol and write the report CSV
    Eval(EvalArgs),
    /// Render a report or saliency CSV into SVG figures
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataFormat {
    Ts,
    Csv,
}

#[derive(Args)]
pub struct SynthArgs {
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
    /// Number of instances (even; classes are balanced)
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub channels: usize,
    /// Series length T
    #[arg(long, default_value_t = 64)]
    pub length: usize,
    #[arg(long, default_value_t = 8)]
    pub bump_len: usize,
    /// Bump amplitude relative to unit noise
    #[arg(long, default_value_t = 3.0)]
    pub snr: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Args)]
pub struct TrainArgs {
    /// Dataset file (.ts or .csv)
    #[arg(long)]
    pub data: PathBuf,
    /// Input format; inferred from the extension when omitted
    #[arg(long, value_enum)]
    pub format: Option<DataFormat>,
    /// Held-out test file; when omitted the data is split stratified
    #[arg(long)]
    pub test_data: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub kernel_len: usize,
    #[arg(long, default_value_t = 16)]
    pub kernels: usize,
    /// Hidden layer widths, comma separated
    #[arg(long, default_value = "32")]
    pub hidden: String,
    #[arg(long, default_value_t = 200)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    #[arg(long, default_value_t = 32)]
    pub batch: usize,
    /// Early-stop patience in epochs (0 disables)
    #[arg(long, default_value_t = 30)]
    pub patience: usize,
    #[arg(long, default_value_t = 0.2)]
    pub test_fraction: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<DataFormat>,
    #[arg(long)]
    pub test_data: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Configurations to sample
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    /// Re-seeded trainings per configuration
    #[arg(long, default_value_t = 2)]
    pub trials: usize,
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    #[arg(long, default_value_t = 32)]
    pub batch: usize,
    #[arg(long, default_value_t = 10)]
    pub patience: usize,
    #[arg(long, default_value_t = 0.2)]
    pub test_fraction: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Args)]
pub struct ExplainArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<DataFormat>,
    #[arg(long)]
    pub out: PathBuf,
    /// Instance indices, comma separated
    #[arg(long, default_value = "0")]
    pub instances: String,
    /// Explainers: intrinsic, grad, smoothgrad, gshap, uniform
    #[arg(long, default_value = "intrinsic")]
    pub explainer: String,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<DataFormat>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "intrinsic,grad,smoothgrad,gshap")]
    pub explainer: String,
    /// Fraction of cells perturbed, ranked by |relevance|
    #[arg(long, default_value_t = 0.1)]
    pub q: f64,
    /// Swap/Mean window; defaults to the model's kernel length
    #[arg(long)]
    pub window: Option<usize>,
    /// Noise stds for input-sensitivity, comma separated
    #[arg(long)]
    pub noise_grid: Option<String>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    /// Test instances drawn per repetition
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Args)]
pub struct ReportArgs {
    /// A report CSV (long format) or saliency-map CSV
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth(args) => cmd_synth(&args),
        Command::Train(args) => cmd_train(&args),
        Command::Search(args) => cmd_search(&args),
        Command::Explain(args) => cmd_explain(&args),
        Command::Eval(args) => cmd_eval(&args),
        Command::Report(args) => cmd_report(&args),
    }
}

// -- shared plumbing ----------------------------------------------------

struct Manifest {
    entries: BTreeMap<String, String>,
}

impl Manifest {
    fn new(command: &str) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert("command".to_string(), command.to_string());
        Self { entries }
    }

    fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    fn record_input(&mut self, key: &str, path: &Path, content: &str) {
        self.set(&format!("input.{key}"), path.display());
        self.set(
            &format!("input.{key}.sha256"),
            hex::encode(Sha256::digest(content.as_bytes())),
        );
    }

    fn write_artifact(&mut self, dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
        let path = dir.join(name);
        fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
        self.set(
            &format!("artifact.{name}.sha256"),
            hex::encode(Sha256::digest(content.as_bytes())),
        );
        println!("wrote {}", path.display());
        Ok(path)
    }

    fn finish(&self, dir: &Path) -> Result<()> {
        let mut text = String::new();
        for (key, value) in &self.entries {
            text.push_str(&format!("{key}={value}\n"));
        }
        let path = dir.join("manifest.txt");
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

fn ensure_out_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))
}

fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_dataset(
    path: &Path,
    format: Option<DataFormat>,
    manifest: &mut Manifest,
    key: &str,
) -> Result<TimeSeriesDataset> {
    let text = read_input(path)?;
    manifest.record_input(key, path, &text);
    let format = match format {
        Some(f) => f,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some("ts") => DataFormat::Ts,
            Some("csv") => DataFormat::Csv,
            other => bail!(
                "cannot infer format of {} (extension {:?}); pass --format ts|csv",
                path.display(),
                other
            ),
        },
    };
    let dataset = match format {
        DataFormat::Ts => parse_ts(&text),
        DataFormat::Csv => parse_csv_with_header(&text),
    }
    .with_context(|| format!("parsing {}", path.display()))?;
    Ok(dataset)
}

fn parse_usize_list(text: &str, what: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .with_context(|| format!("{what}: cannot parse {t:?}"))
        })
        .collect()
}

fn parse_f64_list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("{what}: cannot parse {t:?}"))
        })
        .collect()
}

/// SmoothGrad defaults: noise over normalized inputs, 64 samples.
const SMOOTHGRAD_NOISE: f64 = 0.1;
const SMOOTHGRAD_SAMPLES: usize = 64;
/// Expected-gradients defaults: 16 baselines sampled from the dataset.
const GSHAP_BASELINES: usize = 16;
const GSHAP_SAMPLES: usize = 64;

fn build_explainers(
    names: &str,
    dataset: &TimeSeriesDataset,
    master_seed: u64,
) -> Result<Vec<Box<dyn Explainer>>> {
    let mut out: Vec<Box<dyn Explainer>> = Vec::new();
    for name in names.split(',') {
        match name.trim() {
            "intrinsic" => out.push(Box::new(IntrinsicExplainer)),
            "grad" => out.push(Box::new(GradExplainer)),
            "smoothgrad" => out.push(Box::new(SmoothGradExplainer {
                noise_std: SMOOTHGRAD_NOISE,
                samples: SMOOTHGRAD_SAMPLES,
                seed: seed::derive(master_seed, &[10]),
            })),
            "gshap" => {
                let count = GSHAP_BASELINES.min(dataset.len());
                let mut rng = seed::rng(master_seed, &[11]);
                let baselines = index_sample(&mut rng, dataset.len(), count)
                    .into_iter()
                    .map(|i| dataset.instance(i).clone())
                    .collect();
                out.push(Box::new(GradientShapExplainer {
                    baselines,
                    samples: GSHAP_SAMPLES,
                    seed: seed::derive(master_seed, &[12]),
                }));
            }
            "uniform" => out.push(Box::new(UniformExplainer)),
            other => bail!(
                "unknown explainer {other:?} (expected intrinsic, grad, smoothgrad, gshap, uniform)"
            ),
        }
    }
    Ok(out)
}

// Splits into train/test (external test file or stratified split) and
// normalizes both with statistics fitted on the training split.
fn prepare_splits(
    data: &Path,
    format: Option<DataFormat>,
    test_data: Option<&PathBuf>,
    test_fraction: f64,
    master_seed: u64,
    manifest: &mut Manifest,
) -> Result<(TimeSeriesDataset, TimeSeriesDataset, crate::data::NormStats)> {
    let dataset = load_dataset(data, format, manifest, "data")?;
    let (train, test) = match test_data {
        Some(path) => {
            let test = load_dataset(path, format, manifest, "test_data")?;
            (dataset, test)
        }
        None => stratified_split(&dataset, test_fraction, seed::derive(master_seed, &[0]))?,
    };
    let stats = fit_norm(&train);
    let train = apply_norm(&stats, &train)?;
    let test = apply_norm(&stats, &test)?;
    Ok((train, test, stats))
}

// -- subcommands --------------------------------------------------------

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    ensure_out_dir(&args.out)?;
    let mut manifest = Manifest::new("synth");
    for (key, value) in [
        ("n", args.n.to_string()),
        ("channels", args.channels.to_string()),
        ("length", args.length.to_string()),
        ("bump_len", args.bump_len.to_string()),
        ("snr", args.snr.to_string()),
        ("seed", args.seed.to_string()),
    ] {
        manifest.set(key, value);
    }
    let (dataset, mask) = synth_bump(
        args.n,
        args.channels,
        args.length,
        args.bump_len,
        args.snr,
        args.seed,
    )?;
    manifest.write_artifact(&args.out, "synth.csv", &dataset.to_csv())?;
    manifest.write_artifact(&args.out, "synth_mask.csv", &mask.to_csv())?;
    manifest.finish(&args.out)?;
    println!(
        "synth: {} instances of {} x {}, classes {:?}",
        dataset.len(),
        dataset.channels(),
        dataset.timesteps(),
        dataset.class_counts()
    );
    Ok(())
}

fn cmd_train(args: &TrainArgs) -> Result<()> {
    ensure_out_dir(&args.out)?;
    let mut manifest = Manifest::new("train");
    let hidden = parse_usize_list(&args.hidden, "--hidden")?;
    let (train, test, stats) = prepare_splits(
        &args.data,
        args.format,
        args.test_data.as_ref(),
        args.test_fraction,
        args.seed,
        &mut manifest,
    )?;
    let config = ModelConfig {
        kernel_len: args.kernel_len,
        kernel_count: args.kernels,
        hidden_sizes: hidden.clone(),
        channels: train.channels(),
        timesteps: train.timesteps(),
        seed: seed::derive(args.seed, &[1]),
    };
    let tconfig = TrainConfig {
        learning_rate: args.lr,
        batch_size: args.batch,
        epochs: args.epochs,
        patience: args.patience,
        seed: seed::derive(args.seed, &[2]),
        ..TrainConfig::default()
    };
    for (key, value) in [
        ("seed", args.seed.to_string()),
        ("kernel_len", args.kernel_len.to_string()),
        ("kernels", args.kernels.to_string()),
        ("hidden", args.hidden.clone()),
        ("epochs", args.epochs.to_string()),
        ("lr", args.lr.to_string()),
        ("batch", args.batch.to_string()),
        ("patience", args.patience.to_string()),
        ("test_fraction", args.test_fraction.to_string()),
        ("train_instances", train.len().to_string()),
        ("test_instances", test.len().to_string()),
    ] {
        manifest.set(key, value);
    }

    let (mut model, history) = train_model(&config, &tconfig, &train, &test)?;
    model.norm = Some(stats);
    let model_path = args.out.join("model.json");
    save_model(&model, &model_path)?;
    let model_text = fs::read_to_string(&model_path)?;
    manifest.set(
        "artifact.model.json.sha256",
        hex::encode(Sha256::digest(model_text.as_bytes())),
    );
    println!("wrote {}", model_path.display());
    manifest.write_artifact(&args.out, "history.csv", &history.to_csv())?;
    manifest.finish(&args.out)?;

    let (test_loss, test_f1) = evaluate(&model, &test)?;
    println!(
        "train: best epoch {} of {}, test loss {:.4}, test F1 {:.4}",
        history.best_epoch,
        history.rows.len(),
        test_loss,
        test_f1
    );
    Ok(())
}

fn cmd_search(args: &SearchArgs) -> Result<()> {
    ensure_out_dir(&args.out)?;
    let mut manifest = Manifest::new("search");
    let (train, test, _) = prepare_splits(
        &args.data,
        args.format,
        args.test_data.as_ref(),
        args.test_fraction,
        args.seed,
        &mut manifest,
    )?;
    let space = SearchSpace {
        samples: args.samples,
        trials: args.trials,
        ..SearchSpace::default()
    };
    let tconfig = TrainConfig {
        learning_rate: args.lr,
        batch_size: args.batch,
        epochs: args.epochs,
        patience: args.patience,
        ..TrainConfig::default()
    };
    for (key, value) in [
        ("seed", args.seed.to_string()),
        ("samples", args.samples.to_string()),
        ("trials", args.trials.to_string()),
        ("epochs", args.epochs.to_string()),
        ("lr", args.lr.to_string()),
        ("test_fraction", args.test_fraction.to_string()),
    ] {
        manifest.set(key, value);
    }

    let result = random_search(&space, &tconfig, &train, &test, seed::derive(args.seed, &[3]))?;
    manifest.write_artifact(&args.out, "search_log.csv", &result.log_to_csv())?;
    let best = serde_json::to_string_pretty(&result.best)? + "\n";
    manifest.write_artifact(&args.out, "best_config.json", &best)?;
    manifest.finish(&args.out)?;
    println!(
        "search: best mean F1 {:.4} with h={} K={} hidden={:?}",
        result.best_f1, result.best.kernel_len, result.best.kernel_count, result.best.hidden_sizes
    );
    Ok(())
}

fn load_model_with_manifest(
    path: &Path,
    manifest: &mut Manifest,
) -> Result<CritsModel> {
    let text = read_input(path)?;
    manifest.record_input("model", path, &text);
    let model = load_model(path).with_context(|| format!("loading {}", path.display()))?;
    Ok(model)
}

fn normalized_for_model(
    model: &CritsModel,
    dataset: &TimeSeriesDataset,
) -> Result<TimeSeriesDataset> {
    match &model.norm {
        Some(stats) => Ok(apply_norm(stats, dataset)?),
        None => Ok(dataset.clone()),
    }
}

fn cmd_explain(args: &ExplainArgs) -> Result<()> {
    ensure_out_dir(&args.out)?;
    let mut manifest = Manifest::new("explain");
    let model = load_model_with_manifest(&args.model, &mut manifest)?;
    let raw = load_dataset(&args.data, args.format, &mut manifest, "data")?;
    let data = normalized_for_model(&model, &raw)?;
    let indices = parse_usize_list(&args.instances, "--instances")?;
    for &i in &indices {
        if i >= data.len() {
            bail!("instance {i} is out of range (dataset has {})", data.len());
        }
    }
    let explainers = build_explainers(&args.explainer, &data, args.seed)?;
    manifest.set("seed", args.seed);
    manifest.set("instances", &args.instances);
    manifest.set("explainer", &args.explainer);

    for &i in &indices {
        let x = data.instance(i);
        for explainer in &explainers {
            let name = explainer.name();
            let stem = format!("explain_i{i}_{name}");
            let mut meta = vec![
                ("explainer".to_string(), name.to_string()),
                ("instance".to_string(), i.to_string()),
                ("label".to_string(), data.label(i).to_string()),
            ];
            let (matrix, svg_map) = if name == "intrinsic" {
                let surrogate = explain_intrinsic(&model, x)?;
                meta.push(("bias".to_string(), surrogate.bias.to_string()));
                meta.push(("logit".to_string(), surrogate.trace.logit.to_string()));
                (surrogate.weights.clone(), surrogate.relevance)
            } else {
                let map = explainer.explain(&model, x)?;
                (map.clone(), map)
            };
            manifest.write_artifact(
                &args.out,
                &format!("{stem}.csv"),
                &matrix_to_csv(&matrix, &meta),
            )?;
            let title = format!("{name} explanation, instance {i}");
            manifest.write_artifact(
                &args.out,
                &format!("{stem}.svg"),
                &heatmap_svg(&svg_map, &title, Some(x)),
            )?;
        }
    }
    manifest.finish(&args.out)?;
    Ok(())
}

fn cmd_eval(args: &EvalArgs) -> Result<()> {
    ensure_out_dir(&args.out)?;
    let mut manifest = Manifest::new("eval");
    let model = load_model_with_manifest(&args.model, &mut manifest)?;
    let raw = load_dataset(&args.data, args.format, &mut manifest, "data")?;
    let data = normalized_for_model(&model, &raw)?;
    let explainers = build_explainers(&args.explainer, &data, args.seed)?;
    let refs: Vec<&dyn Explainer> = explainers.iter().map(|b| b.as_ref()).collect();

    let mut protocol = ProtocolConfig {
        samples_per_repetition: args.samples,
        repetitions: args.reps,
        q: args.q,
        window: args.window,
        ..ProtocolConfig::default()
    };
    if let Some(grid) = &args.noise_grid {
        protocol.noise_grid = parse_f64_list(grid, "--noise-grid")?;
    }
    manifest.set("seed", args.seed);
    manifest.set("explainer", &args.explainer);
    manifest.set("q", args.q);
    manifest.set("reps", args.reps);
    manifest.set("samples", args.samples);

    let report = run_protocol(&model, &refs, &data, args.seed, &protocol)?;
    manifest.write_artifact(&args.out, "report.csv", &eval_report_to_csv(&report))?;
    manifest.finish(&args.out)?;
    println!(
        "eval: {} explainers, {} samples x {} repetitions on {}",
        refs.len(),
        report.samples_per_repetition,
        report.repetitions,
        report.dataset
    );
    Ok(())
}

fn cmd_report(args: &ReportArgs) -> Result<()> {
    ensure_out_dir(&args.out)?;
    let mut manifest = Manifest::new("report");
    let text = read_input(&args.input)?;
    manifest.record_input("input", &args.input, &text);

    if text.lines().any(|l| l.trim() == EVAL_CSV_HEADER) {
        render_eval_report(&text, &args.out, &mut manifest)?;
    } else {
        let (matrix, meta) = matrix_from_csv(&text)?;
        let title = meta
            .iter()
            .find(|(k, _)| k == "explainer")
            .map(|(_, v)| format!("{v} saliency map"))
            .unwrap_or_else(|| "saliency map".to_string());
        manifest.write_artifact(&args.out, "heatmap.svg", &heatmap_svg(&matrix, &title, None))?;
    }
    manifest.finish(&args.out)?;
    Ok(())
}

fn render_eval_report(text: &str, out: &Path, manifest: &mut Manifest) -> Result<()> {
    let rows = eval_csv_rows(text)?;
    let mut explainers: Vec<String> = rows.iter().map(|r| r.explainer.clone()).collect();
    explainers.sort();
    explainers.dedup();
    let dataset = rows
        .first()
        .map(|r| r.dataset.clone())
        .unwrap_or_else(|| "dataset".to_string());

    // alignment: categories = perturbation methods in canonical order
    let methods: Vec<String> = ["zero", "inverse", "swap", "mean"]
        .iter()
        .map(|s| s.to_string())
        .filter(|m| rows.iter().any(|r| r.metric == "alignment" && &r.method == m))
        .collect();
    if !methods.is_empty() {
        let series: Vec<BoxSeries> = explainers
            .iter()
            .map(|name| BoxSeries {
                name: name.clone(),
                values: methods
                    .iter()
                    .map(|m| {
                        rows.iter()
                            .filter(|r| {
                                r.metric == "alignment"
                                    && &r.explainer == name
                                    && &r.method == m
                            })
                            .map(|r| r.value)
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        let svg = boxplot_svg(
            &format!("Alignment per perturbation ({dataset})"),
            "A (RMSE of probability change)",
            &methods,
            &series,
        );
        manifest.write_artifact(out, "alignment.svg", &svg)?;
    }

    // input-sensitivity: categories = noise stds, ascending
    let mut noises: Vec<f64> = rows
        .iter()
        .filter(|r| r.metric == "input_sensitivity")
        .filter_map(|r| r.method.parse::<f64>().ok())
        .collect();
    noises.sort_by(f64::total_cmp);
    noises.dedup();
    if !noises.is_empty() {
        let categories: Vec<String> = noises.iter().map(|v| v.to_string()).collect();
        let series: Vec<BoxSeries> = explainers
            .iter()
            .map(|name| BoxSeries {
                name: name.clone(),
                values: categories
                    .iter()
                    .map(|noise| {
                        rows.iter()
                            .filter(|r| {
                                r.metric == "input_sensitivity"
                                    && &r.explainer == name
                                    && &r.method == noise
                            })
                            .map(|r| r.value)
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        let svg = boxplot_svg(
            &format!("Input-sensitivity vs noise ({dataset})"),
            "IS (RMSE between explanations)",
            &categories,
            &series,
        );
        manifest.write_artifact(out, "sensitivity.svg", &svg)?;
    }

    // sparsity: one category, one box per explainer
    if rows.iter().any(|r| r.metric == "sparsity") {
        let categories = vec![dataset.clone()];
        let series: Vec<BoxSeries> = explainers
            .iter()
            .map(|name| BoxSeries {
                name: name.clone(),
                values: vec![rows
                    .iter()
                    .filter(|r| r.metric == "sparsity" && &r.explainer == name)
                    .map(|r| r.value)
                    .collect()],
            })
            .collect();
        let svg = boxplot_svg(
            &format!("Sparsity ({dataset})"),
            "fraction of |w| > 0.01",
            &categories,
            &series,
        );
        manifest.write_artifact(out, "sparsity.svg", &svg)?;
    }
    Ok(())
}
