use std::path::PathBuf;

use acthull::classify::{
    fit, gap_report, load_model, loo_train_accuracy, render_accuracy_table_csv, save_model,
    GapReport, LayerAccuracy, LooMode, LooReport,
};
use acthull::data::{emit_report_json, read_report_json};
use anyhow::{Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

use super::mlp::{MlpRunReport, TRAIN_REPORT_SCHEMA};
use super::{ensure_exists, read_activations, write_text, BuildFlags};
use crate::manifest::Run;

#[derive(Debug, Subcommand)]
pub enum ClassifyCommand {
    /// Build one hull per class and save the model directory.
    Fit(FitArgs),
    /// Per-layer leave-one-out train and test accuracy, plus the gap report.
    Eval(EvalArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    #[arg(long)]
    pub acts_train: PathBuf,
    #[command(flatten)]
    pub build: BuildFlags,
    /// Model directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LooArg {
    /// Drop the held-out vector from the stored vertex set.
    VertexSet,
    /// Rebuild the held-out vector's class hull (slow).
    Rebuild,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    /// Training activations, one file per layer.
    #[arg(long, num_args = 1.., required = true)]
    pub acts_train: Vec<PathBuf>,
    /// Test activations, in the same layer order.
    #[arg(long, num_args = 1.., required = true)]
    pub acts_test: Vec<PathBuf>,
    /// Reuse a fitted model (single layer only).
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Report from `mlp train`, for the gap comparison.
    #[arg(long)]
    pub mlp_report: Option<PathBuf>,
    #[arg(long, default_value = "data")]
    pub dataset: String,
    #[arg(long, value_enum, default_value_t = LooArg::VertexSet)]
    pub loo: LooArg,
    #[command(flatten)]
    pub build: BuildFlags,
    /// Output directory for `accuracy.csv` and `report.json`.
    #[arg(long)]
    pub out: PathBuf,
}

fn fit_cmd(a: &FitArgs) -> Result<Run> {
    let acts = read_activations(&a.acts_train)?;
    let model = fit(&acts, &a.build.builder()).context("fitting class hulls")?;
    save_model(&model, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    for c in &model.classes {
        println!("class {}: {} vertices", c.class, c.vertices.n());
    }
    Ok(Run {
        seed: Some(a.build.seed),
        inputs: vec![a.acts_train.clone()],
        outputs: vec![a.out.clone()],
    })
}

#[derive(Serialize)]
struct LayerResult {
    layer_index: usize,
    loo: LooReport,
    test_accuracy: f64,
    vertices_per_class: Vec<usize>,
}

#[derive(Serialize)]
struct EvalReport {
    dataset: String,
    layers: Vec<LayerResult>,
    gap: Option<GapReport>,
}

fn eval(a: &EvalArgs) -> Result<Run> {
    anyhow::ensure!(
        a.acts_train.len() == a.acts_test.len(),
        "{} training files but {} test files",
        a.acts_train.len(),
        a.acts_test.len()
    );
    anyhow::ensure!(
        a.model.is_none() || a.acts_train.len() == 1,
        "--model applies to a single layer"
    );
    let mode = match a.loo {
        LooArg::VertexSet => LooMode::VertexSet,
        LooArg::Rebuild => LooMode::Rebuild,
    };
    let mut inputs: Vec<PathBuf> = a.acts_train.iter().chain(&a.acts_test).cloned().collect();
    let mut layers = Vec::new();
    for (train_path, test_path) in a.acts_train.iter().zip(&a.acts_test) {
        let train = read_activations(train_path)?;
        let test = read_activations(test_path)?;
        let model = match &a.model {
            Some(dir) => {
                ensure_exists(dir)?;
                inputs.push(dir.clone());
                load_model(dir).with_context(|| format!("loading {}", dir.display()))?
            }
            None => fit(&train, &a.build.builder())
                .with_context(|| format!("fitting {}", train_path.display()))?,
        };
        let loo = loo_train_accuracy(&model, &train, mode)?;
        if !loo.skipped.is_empty() {
            eprintln!(
                "warning: {} single-vector class members skipped",
                loo.skipped.len()
            );
        }
        let test_accuracy = model.accuracy(&test)?;
        println!(
            "layer {}: loo train {:.4}, test {:.4}",
            train.layer_index, loo.accuracy, test_accuracy
        );
        layers.push(LayerResult {
            layer_index: train.layer_index,
            vertices_per_class: model.classes.iter().map(|c| c.vertices.n()).collect(),
            loo,
            test_accuracy,
        });
    }
    let accs: Vec<LayerAccuracy> = layers
        .iter()
        .map(|l| LayerAccuracy {
            layer_index: l.layer_index,
            train: l.loo.accuracy,
            test: l.test_accuracy,
        })
        .collect();
    let gap = match &a.mlp_report {
        Some(p) => {
            ensure_exists(p)?;
            inputs.push(p.clone());
            let r: MlpRunReport = read_report_json(TRAIN_REPORT_SCHEMA, p)?;
            let g = gap_report(&accs, &r.report)?;
            println!("mlp gap {:.4}", g.mlp_gap);
            Some(g)
        }
        None => None,
    };
    let csv = a.out.join("accuracy.csv");
    let json = a.out.join("report.json");
    write_text(&csv, &render_accuracy_table_csv(&a.dataset, &accs))?;
    emit_report_json(
        "nearest-hull-eval",
        &EvalReport {
            dataset: a.dataset.clone(),
            layers,
            gap,
        },
        &json,
    )?;
    Ok(Run {
        seed: Some(a.build.seed),
        inputs,
        outputs: vec![a.out.clone(), csv, json],
    })
}

pub fn run(c: &ClassifyCommand) -> Result<(&'static str, serde_json::Value, Run)> {
    Ok(match c {
        ClassifyCommand::Fit(a) => ("classify fit", serde_json::to_value(a)?, fit_cmd(a)?),
        ClassifyCommand::Eval(a) => ("classify eval", serde_json::to_value(a)?, eval(a)?),
    })
}
