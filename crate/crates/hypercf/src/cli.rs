//! Command-line entry point: `prepare`, `train`, `evaluate`, `sweep`,
//! `bench`.
//!
//! Flags override values from an optional TOML config file (`--config`);
//! anything still unset falls back to built-in defaults. The effective
//! configuration is echoed into every textual artifact (run log line 1,
//! `#` comment in CSVs, stdout) for provenance. All commands are
//! deterministic given identical inputs and seed; `bench` is the one
//! exception, since its whole output is wall-clock measurement.
//!
//! On failure the binary exits nonzero after printing a single
//! machine-parsable line: `error: <category>: <message>`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::data::{
    build_dataset, leave_one_out, load_interactions, read_split, sample_eval_negatives,
    write_split, Column, DataError, FormatOptions,
};
use crate::eval::{evaluate, EvalError, EvalReport, CSV_HEADER};
use crate::model::{Model, ModelError, ModelKind};
use crate::training::{train, OptimizerKind, TrainConfig, TrainError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Stable error category for the single-line failure output.
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Data(_) => "data",
            CliError::Model(_) => "model",
            CliError::Train(_) => "train",
            CliError::Eval(_) => "eval",
            CliError::Io(_) => "io",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hypercf", version, about = "Hypercomplex collaborative filtering")]
pub struct Cli {
    /// TOML file supplying defaults for any flag; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ingest a raw interaction log and cache the leave-one-out split.
    Prepare(PrepareArgs),
    /// Train a model on a prepared split and write a checkpoint.
    Train(TrainArgs),
    /// Rank the held-out items of a prepared split with a checkpoint.
    Evaluate(EvaluateArgs),
    /// Train + evaluate across a list of embedding dimensions.
    Sweep(SweepArgs),
    /// Measure per-epoch training and test wall-clock across models.
    Bench(BenchArgs),
}

/// Optional config-file counterpart of the flags.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub data: Option<PathBuf>,
    pub format: Option<String>,
    pub header: Option<bool>,
    pub no_timestamp: Option<bool>,
    pub columns: Option<String>,
    pub min_interactions: Option<usize>,
    pub model: Option<String>,
    pub dim: Option<usize>,
    pub lr: Option<f64>,
    pub l2: Option<f64>,
    pub neg_ratio: Option<usize>,
    pub epochs: Option<usize>,
    pub batch_size: Option<usize>,
    pub optimizer: Option<String>,
    pub seed: Option<u64>,
    pub split_file: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub log: Option<PathBuf>,
    pub k_list: Option<String>,
    pub dims: Option<String>,
    pub models: Option<String>,
    pub dataset_name: Option<String>,
    pub validate: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", p.display())))?;
                toml::from_str(&text)
                    .map_err(|e| CliError::Config(format!("bad config {}: {e}", p.display())))
            }
        }
    }
}

fn require<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(file).ok_or_else(|| CliError::Config(format!("missing required --{name}")))
}

fn parse_usize_list(s: &str, name: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("bad {name} entry {tok:?}")))
        })
        .collect()
}

fn dataset_name(explicit: Option<String>, split_file: &Path) -> String {
    explicit.unwrap_or_else(|| {
        split_file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "data".into())
    })
}

// ---------------------------------------------------------------------------
// prepare
// ---------------------------------------------------------------------------

#[derive(Debug, Default, Args)]
pub struct PrepareArgs {
    /// Raw interaction log.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Input shape preset: "tsv" (default) or "csv".
    #[arg(long)]
    pub format: Option<String>,
    /// First line is a header row.
    #[arg(long, action = ArgAction::SetTrue)]
    pub header: bool,
    /// Rows carry no timestamp column.
    #[arg(long, action = ArgAction::SetTrue)]
    pub no_timestamp: bool,
    /// Column order, e.g. "user,item,rating,timestamp" (use "skip" to drop
    /// a column).
    #[arg(long)]
    pub columns: Option<String>,
    /// Keep only users with at least this many distinct items.
    #[arg(long)]
    pub min_interactions: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output split cache.
    #[arg(long)]
    pub split_file: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct PrepareSettings {
    pub data: PathBuf,
    pub format: String,
    pub header: bool,
    pub no_timestamp: bool,
    pub columns: String,
    pub min_interactions: usize,
    pub seed: u64,
    pub split_file: PathBuf,
}

#[derive(Debug)]
pub struct PrepareSummary {
    pub users: usize,
    pub items: usize,
    pub actions: usize,
    pub density: f64,
    pub malformed: usize,
}

fn resolve_format(settings: &PrepareSettings) -> Result<FormatOptions, CliError> {
    let delimiter = match settings.format.as_str() {
        "tsv" => b'\t',
        "csv" => b',',
        other => return Err(CliError::Config(format!("unknown --format {other:?} (tsv|csv)"))),
    };
    let columns: Vec<Column> = settings
        .columns
        .split(',')
        .map(|tok| tok.parse::<Column>().map_err(CliError::Config))
        .collect::<Result<_, _>>()?;
    if !columns.contains(&Column::User) || !columns.contains(&Column::Item) {
        return Err(CliError::Config("--columns must include user and item".into()));
    }
    if !settings.no_timestamp && !columns.contains(&Column::Timestamp) {
        return Err(CliError::Config(
            "--columns has no timestamp; pass --no-timestamp for timestamp-free data".into(),
        ));
    }
    Ok(FormatOptions {
        delimiter,
        has_header: settings.header,
        with_timestamp: !settings.no_timestamp,
        columns,
    })
}

pub fn cmd_prepare(args: PrepareArgs, file: &FileConfig) -> Result<PrepareSummary, CliError> {
    let no_timestamp = args.no_timestamp || file.no_timestamp.unwrap_or(false);
    let default_columns = if no_timestamp { "user,item,rating" } else { "user,item,rating,timestamp" };
    let settings = PrepareSettings {
        data: require(args.data, file.data.clone(), "data")?,
        format: args.format.or(file.format.clone()).unwrap_or_else(|| "tsv".into()),
        header: args.header || file.header.unwrap_or(false),
        no_timestamp,
        columns: args.columns.or(file.columns.clone()).unwrap_or_else(|| default_columns.into()),
        min_interactions: args.min_interactions.or(file.min_interactions).unwrap_or(5),
        seed: args.seed.or(file.seed).unwrap_or(42),
        split_file: require(args.split_file, file.split_file.clone(), "split-file")?,
    };
    println!("config: {}", serde_json::to_string(&settings).expect("serializable settings"));

    let format = resolve_format(&settings)?;
    let loaded = load_interactions(&settings.data, &format)?;
    if loaded.malformed > 0 {
        println!(
            "warning: {} of {} rows malformed and skipped",
            loaded.malformed, loaded.total_rows
        );
    }
    let dataset = build_dataset(&loaded.interactions, settings.min_interactions)?;
    let mut split = leave_one_out(&dataset, settings.seed)?;
    sample_eval_negatives(&dataset, &mut split, settings.seed)?;
    write_split(&settings.split_file, &split, settings.seed)?;

    let summary = PrepareSummary {
        users: dataset.num_users(),
        items: dataset.num_items(),
        actions: dataset.num_actions(),
        density: dataset.density(),
        malformed: loaded.malformed,
    };
    println!(
        "prepared users={} items={} actions={} density={:.6} -> {}",
        summary.users,
        summary.items,
        summary.actions,
        summary.density,
        settings.split_file.display()
    );
    Ok(summary)
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

#[derive(Debug, Default, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub split_file: Option<PathBuf>,
    /// gmf | mmf | ccf | qcf | qcf-plus
    #[arg(long)]
    pub model: Option<String>,
    /// Latent vector dimension d.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub l2: Option<f64>,
    #[arg(long)]
    pub neg_ratio: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// sgd | adam
    #[arg(long)]
    pub optimizer: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output checkpoint.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Line-delimited run log (JSON records).
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Compute validation HR@10 each epoch.
    #[arg(long, action = ArgAction::SetTrue)]
    pub validate: bool,
}

#[derive(Debug, Serialize)]
pub struct TrainSettings {
    pub split_file: PathBuf,
    pub model: ModelKind,
    pub dim: usize,
    pub lr: f64,
    pub l2: f64,
    pub neg_ratio: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub optimizer: OptimizerKind,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<PathBuf>,
    pub validate: bool,
}

fn resolve_train_settings(
    args: TrainArgs,
    file: &FileConfig,
) -> Result<(TrainSettings, Option<PathBuf>), CliError> {
    let model: ModelKind = require(args.model, file.model.clone(), "model")?.parse()?;
    let optimizer: OptimizerKind =
        args.optimizer.or(file.optimizer.clone()).unwrap_or_else(|| "adam".into()).parse()?;
    let settings = TrainSettings {
        split_file: require(args.split_file, file.split_file.clone(), "split-file")?,
        model,
        dim: args.dim.or(file.dim).unwrap_or(30),
        lr: args.lr.or(file.lr).unwrap_or(0.001),
        l2: args.l2.or(file.l2).unwrap_or(0.001),
        neg_ratio: args.neg_ratio.or(file.neg_ratio).unwrap_or(4),
        epochs: args.epochs.or(file.epochs).unwrap_or(30),
        batch_size: args.batch_size.or(file.batch_size).unwrap_or(256),
        optimizer,
        seed: args.seed.or(file.seed).unwrap_or(42),
        checkpoint: args.checkpoint.or(file.checkpoint.clone()),
        validate: args.validate || file.validate.unwrap_or(false),
    };
    if settings.dim < 1 {
        return Err(CliError::Config("--dim must be >= 1".into()));
    }
    Ok((settings, args.log.or(file.log.clone())))
}

fn train_config(s: &TrainSettings) -> TrainConfig {
    TrainConfig {
        learning_rate: s.lr,
        l2_lambda: s.l2,
        batch_size: s.batch_size,
        epochs: s.epochs,
        neg_ratio: s.neg_ratio,
        optimizer: s.optimizer,
        seed: s.seed,
    }
}

pub fn cmd_train(args: TrainArgs, file: &FileConfig) -> Result<Model, CliError> {
    let (settings, log_path) = resolve_train_settings(args, file)?;
    let checkpoint = settings
        .checkpoint
        .clone()
        .ok_or_else(|| CliError::Config("missing required --checkpoint".into()))?;
    let config_json = serde_json::to_string(&settings).expect("serializable settings");
    println!("config: {config_json}");

    let (split, _) = read_split(&settings.split_file)?;
    let cfg = train_config(&settings);
    cfg.validate()?;
    let outcome = train(
        settings.model,
        settings.dim,
        &split.train,
        &cfg,
        settings.validate.then_some(&split),
    )?;
    outcome.model.save(&checkpoint)?;

    if let Some(path) = &log_path {
        let mut log = String::new();
        writeln!(log, "{{\"config\":{config_json}}}").expect("string write");
        for record in &outcome.trace {
            writeln!(log, "{}", serde_json::to_string(record).expect("serializable record"))
                .expect("string write");
        }
        fs::write(path, log)?;
    }
    for record in &outcome.trace {
        let val = record
            .val_hr10
            .map(|v| format!(" val_hr10={v:.4}"))
            .unwrap_or_default();
        println!(
            "epoch={} mean_loss={:.6} elapsed_s={:.3}{}{}",
            record.epoch,
            record.mean_loss,
            record.elapsed_seconds,
            val,
            if record.users_skipped > 0 {
                format!(" users_skipped={}", record.users_skipped)
            } else {
                String::new()
            }
        );
    }
    println!("checkpoint -> {}", checkpoint.display());
    Ok(outcome.model)
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

#[derive(Debug, Default, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub split_file: Option<PathBuf>,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Cross-check: error when the checkpoint kind differs.
    #[arg(long)]
    pub model: Option<String>,
    /// Cross-check: error when the checkpoint dimension differs.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Cutoffs, e.g. "5,10,20".
    #[arg(long)]
    pub k_list: Option<String>,
    /// Output CSV.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Dataset label for the report (defaults to the split file stem).
    #[arg(long)]
    pub dataset_name: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct EvaluateSettings {
    pub split_file: PathBuf,
    pub checkpoint: PathBuf,
    pub k_list: Vec<usize>,
    pub report: PathBuf,
    pub dataset: String,
}

/// Write a report CSV: provenance comment, fixed header, one row per k.
/// Timing columns are zeroed so identical runs yield identical bytes; real
/// timings live in the stdout table, the run log and `bench`.
fn write_report_csv(
    path: &Path,
    config_json: &str,
    rows: &[(String, String, Option<usize>, EvalReport)],
) -> Result<(), CliError> {
    let mut out = String::new();
    writeln!(out, "# config: {config_json}").expect("string write");
    let with_dim = rows.iter().any(|(_, _, dim, _)| dim.is_some());
    if with_dim {
        writeln!(out, "model,dataset,dim,k,hr,ndcg,users,train_epoch_seconds,test_seconds")
            .expect("string write");
    } else {
        writeln!(out, "{CSV_HEADER}").expect("string write");
    }
    for (model, dataset, dim, report) in rows {
        let mut deterministic = report.clone();
        deterministic.train_epoch_seconds = 0.0;
        deterministic.test_seconds = 0.0;
        match dim {
            Some(d) => {
                for (idx, &k) in deterministic.ks.iter().enumerate() {
                    writeln!(
                        out,
                        "{model},{dataset},{d},{k},{:.6},{:.6},{},0.000000,0.000000",
                        deterministic.hr[idx], deterministic.ndcg[idx], deterministic.users
                    )
                    .expect("string write");
                }
            }
            None => out.push_str(&deterministic.csv_rows(model, dataset)),
        }
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn cmd_evaluate(args: EvaluateArgs, file: &FileConfig) -> Result<EvalReport, CliError> {
    let split_file = require(args.split_file, file.split_file.clone(), "split-file")?;
    let checkpoint = require(args.checkpoint, file.checkpoint.clone(), "checkpoint")?;
    let k_list = parse_usize_list(
        &args.k_list.or(file.k_list.clone()).unwrap_or_else(|| "5,10,20".into()),
        "k-list",
    )?;
    let report_path = require(args.report, file.report.clone(), "report")?;
    let settings = EvaluateSettings {
        dataset: dataset_name(args.dataset_name.or(file.dataset_name.clone()), &split_file),
        split_file,
        checkpoint,
        k_list,
        report: report_path,
    };
    let config_json = serde_json::to_string(&settings).expect("serializable settings");
    println!("config: {config_json}");

    let model = Model::load(&settings.checkpoint)?;
    if let Some(expect) = args.model.or(file.model.clone()) {
        let expect: ModelKind = expect.parse()?;
        if expect != model.kind() {
            return Err(CliError::Config(format!(
                "checkpoint holds a {} model but --model asked for {expect}",
                model.kind()
            )));
        }
    }
    if let Some(expect) = args.dim.or(file.dim) {
        if expect != model.dim() {
            return Err(CliError::Config(format!(
                "checkpoint has d={} but --dim asked for {expect}",
                model.dim()
            )));
        }
    }
    let (split, _) = read_split(&settings.split_file)?;
    let report = evaluate(&model, &split, &settings.k_list)?;
    print!("{}", report.render_table(&model.kind().to_string(), &settings.dataset));
    write_report_csv(
        &settings.report,
        &config_json,
        &[(model.kind().to_string(), settings.dataset.clone(), None, report.clone())],
    )?;
    println!("report -> {}", settings.report.display());
    Ok(report)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Default, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub train: TrainArgs,
    /// Dimensions to sweep, e.g. "5,15,30".
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long)]
    pub k_list: Option<String>,
    /// Output consolidated CSV.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub dataset_name: Option<String>,
}

pub fn cmd_sweep(args: SweepArgs, file: &FileConfig) -> Result<Vec<(usize, EvalReport)>, CliError> {
    let dims = parse_usize_list(
        &require(args.dims, file.dims.clone(), "dims")?,
        "dims",
    )?;
    let k_list = parse_usize_list(
        &args.k_list.or(file.k_list.clone()).unwrap_or_else(|| "5,10,20".into()),
        "k-list",
    )?;
    let report_path = require(args.report, file.report.clone(), "report")?;
    let (settings, _) = resolve_train_settings(args.train, file)?;
    let dataset = dataset_name(args.dataset_name.or(file.dataset_name.clone()), &settings.split_file);

    #[derive(Serialize)]
    struct SweepSettings<'a> {
        base: &'a TrainSettings,
        dims: &'a [usize],
        k_list: &'a [usize],
        dataset: &'a str,
        report: &'a Path,
    }
    let config_json = serde_json::to_string(&SweepSettings {
        base: &settings,
        dims: &dims,
        k_list: &k_list,
        dataset: &dataset,
        report: &report_path,
    })
    .expect("serializable settings");
    println!("config: {config_json}");

    let (split, _) = read_split(&settings.split_file)?;
    let cfg_base = train_config(&settings);
    cfg_base.validate()?;
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for &d in &dims {
        let outcome = train(settings.model, d, &split.train, &cfg_base, None)?;
        let mut report = evaluate(&outcome.model, &split, &k_list)?;
        report.train_epoch_seconds = outcome
            .trace
            .iter()
            .map(|r| r.elapsed_seconds)
            .sum::<f64>()
            / outcome.trace.len().max(1) as f64;
        print!("{}", report.render_table(&format!("{} d={d}", settings.model), &dataset));
        rows.push((settings.model.to_string(), dataset.clone(), Some(d), report.clone()));
        results.push((d, report));
    }
    write_report_csv(&report_path, &config_json, &rows)?;
    println!("report -> {}", report_path.display());
    Ok(results)
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

#[derive(Debug, Default, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub train: TrainArgs,
    /// Models to time, e.g. "gmf,mmf,ccf,qcf".
    #[arg(long)]
    pub models: Option<String>,
    /// Output timing CSV.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub dataset_name: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub model: ModelKind,
    pub dim: usize,
    pub epochs: usize,
    pub train_epoch_seconds: f64,
    pub test_seconds: f64,
    pub hr10: f64,
}

pub fn cmd_bench(args: BenchArgs, file: &FileConfig) -> Result<Vec<BenchRow>, CliError> {
    let model_list: Vec<ModelKind> = args
        .models
        .or(file.models.clone())
        .unwrap_or_else(|| "gmf,mmf,ccf,qcf".into())
        .split(',')
        .map(|tok| tok.trim().parse::<ModelKind>().map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    let report_path = require(args.report, file.report.clone(), "report")?;
    let mut train_args = args.train;
    train_args.model = train_args.model.or(Some("qcf".into()));
    let (settings, _) = resolve_train_settings(train_args, file)?;
    let dataset = dataset_name(args.dataset_name.or(file.dataset_name.clone()), &settings.split_file);

    #[derive(Serialize)]
    struct BenchSettings<'a> {
        base: &'a TrainSettings,
        models: &'a [ModelKind],
        dataset: &'a str,
        report: &'a Path,
    }
    let config_json = serde_json::to_string(&BenchSettings {
        base: &settings,
        models: &model_list,
        dataset: &dataset,
        report: &report_path,
    })
    .expect("serializable settings");
    println!("config: {config_json}");

    let (split, _) = read_split(&settings.split_file)?;
    let cfg = train_config(&settings);
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut out = String::new();
    writeln!(out, "# config: {config_json}").expect("string write");
    writeln!(out, "model,dataset,dim,epochs,train_epoch_seconds,test_seconds").expect("string write");
    for &kind in &model_list {
        let outcome = train(kind, settings.dim, &split.train, &cfg, None)?;
        let train_epoch_seconds = outcome.trace.iter().map(|r| r.elapsed_seconds).sum::<f64>()
            / outcome.trace.len().max(1) as f64;
        let report = evaluate(&outcome.model, &split, &[10])?;
        let row = BenchRow {
            model: kind,
            dim: settings.dim,
            epochs: settings.epochs,
            train_epoch_seconds,
            test_seconds: report.test_seconds,
            hr10: report.hr[0],
        };
        println!(
            "bench model={kind} dim={} train_epoch_s={:.3} test_s={:.3} hr10={:.4}",
            row.dim, row.train_epoch_seconds, row.test_seconds, row.hr10
        );
        writeln!(
            out,
            "{kind},{dataset},{},{},{:.6},{:.6}",
            row.dim, row.epochs, row.train_epoch_seconds, row.test_seconds
        )
        .expect("string write");
        rows.push(row);
    }
    fs::write(&report_path, out)?;
    println!("report -> {}", report_path.display());
    Ok(rows)
}

/// Dispatch a parsed command line.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Prepare(args) => cmd_prepare(args, &file).map(|_| ()),
        Command::Train(args) => cmd_train(args, &file).map(|_| ()),
        Command::Evaluate(args) => cmd_evaluate(args, &file).map(|_| ()),
        Command::Sweep(args) => cmd_sweep(args, &file).map(|_| ()),
        Command::Bench(args) => cmd_bench(args, &file).map(|_| ()),
    }
}
