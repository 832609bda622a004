use std::path::PathBuf;

use acthull::data::emit_report_json;
use acthull::nn::{
    extract_activations_at, load_checkpoint, save_activations, save_checkpoint, train_mlp,
    MlpConfig, Split, Stage, TrainReport,
};
use anyhow::{Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use super::{ensure_exists, read_vectors};
use crate::manifest::Run;

pub const TRAIN_REPORT_SCHEMA: &str = "mlp-train-report";

#[derive(Debug, Subcommand)]
pub enum MlpCommand {
    /// Train a rectifier network and write a checkpoint plus accuracy report.
    Train(TrainArgs),
    /// Write one hidden layer's activations as an AVEC file.
    Extract(ExtractArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct TrainArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "64,64,64,64")]
    pub widths: Vec<usize>,
    #[arg(long, default_value_t = 30)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    #[arg(long, default_value_t = 32)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Checkpoint output.
    #[arg(long)]
    pub out: PathBuf,
    /// Report JSON (default: `<out>.report.json`).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Train/test accuracy of the network itself.
#[derive(Debug, Serialize, Deserialize)]
pub struct MlpRunReport {
    pub config: MlpConfig,
    pub train_size: usize,
    pub test_size: usize,
    pub report: TrainReport,
}

fn train(a: &TrainArgs) -> Result<Run> {
    let train = read_vectors(&a.train)?;
    let test = read_vectors(&a.test)?;
    let cfg = MlpConfig {
        layer_widths: a.widths.clone(),
        epochs: a.epochs,
        lr: a.lr,
        batch_size: a.batch_size,
        seed: a.seed,
        ..MlpConfig::default()
    };
    let (model, report) = train_mlp(&train, &test, &cfg).context("training")?;
    save_checkpoint(&model, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    let report_path = a.report.clone().unwrap_or_else(|| {
        let mut name = a.out.file_name().unwrap_or_default().to_os_string();
        name.push(".report.json");
        a.out.with_file_name(name)
    });
    println!(
        "train accuracy {:.4}, test accuracy {:.4}, gap {:.4}",
        report.train_accuracy,
        report.test_accuracy,
        report.gap()
    );
    let doc = MlpRunReport {
        config: cfg,
        train_size: train.len(),
        test_size: test.len(),
        report,
    };
    emit_report_json(TRAIN_REPORT_SCHEMA, &doc, &report_path)?;
    Ok(Run {
        seed: Some(a.seed),
        inputs: vec![a.train.clone(), a.test.clone()],
        outputs: vec![a.out.clone(), report_path],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitArg {
    Train,
    Test,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StageArg {
    Post,
    Pre,
}

#[derive(Debug, Args, Serialize)]
pub struct ExtractArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    /// 1-based hidden layer.
    #[arg(long)]
    pub layer: usize,
    #[arg(long, value_enum, default_value_t = SplitArg::Train)]
    pub split: SplitArg,
    /// Read the layer after (post) or before (pre) the rectifier.
    #[arg(long, value_enum, default_value_t = StageArg::Post)]
    pub stage: StageArg,
    /// AVEC output; metadata goes to `<out>.meta.json`.
    #[arg(long)]
    pub out: PathBuf,
}

fn extract(a: &ExtractArgs) -> Result<Run> {
    ensure_exists(&a.model)?;
    let model =
        load_checkpoint(&a.model).with_context(|| format!("loading {}", a.model.display()))?;
    let data = read_vectors(&a.data)?;
    let split = match a.split {
        SplitArg::Train => Split::Train,
        SplitArg::Test => Split::Test,
    };
    let stage = match a.stage {
        StageArg::Post => Stage::Post,
        StageArg::Pre => Stage::Pre,
    };
    let acts = extract_activations_at(&model, &data, a.layer, split, stage)?;
    save_activations(&acts, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    println!(
        "layer {}: {} x {} -> {}",
        a.layer,
        acts.len(),
        acts.dim(),
        a.out.display()
    );
    let mut meta = a.out.file_name().unwrap_or_default().to_os_string();
    meta.push(".meta.json");
    Ok(Run {
        seed: None,
        inputs: vec![a.model.clone(), a.data.clone()],
        outputs: vec![a.out.clone(), a.out.with_file_name(meta)],
    })
}

pub fn run(c: &MlpCommand) -> Result<(&'static str, serde_json::Value, Run)> {
    Ok(match c {
        MlpCommand::Train(a) => ("mlp train", serde_json::to_value(a)?, train(a)?),
        MlpCommand::Extract(a) => ("mlp extract", serde_json::to_value(a)?, extract(a)?),
    })
}
