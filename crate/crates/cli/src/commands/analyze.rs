use std::path::PathBuf;

use acthull::analysis::{
    audit_all_extreme, audit_mis_inclusion, class_radius_stats, inner_class_histogram,
    inner_inter_correlation, inter_class_matrix, layer_mean_inner_distance, HistogramConfig,
    DEFAULT_BINS, DEFAULT_PAIR_CAP,
};
use acthull::classify::{fit, load_model};
use acthull::data::{emit_histogram_csv, emit_matrix_csv, emit_report_json};
use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use serde::Serialize;

use super::{ensure_exists, read_activations, BuildFlags};
use crate::manifest::Run;

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Leave-one-out extremity audit of every vector within its class.
    Extreme(ExtremeArgs),
    /// Test every vector against the hulls of the other classes.
    Inclusion(InclusionArgs),
    /// Same-class pairwise distance histograms.
    InnerHist(HistArgs),
    /// Mean distances between classes and the inner/inter correlation.
    InterMatrix(MatrixArgs),
    /// Distance of each class from the global centroid.
    Radius(RadiusArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ExtremeArgs {
    #[arg(long)]
    pub acts: PathBuf,
    #[arg(long, default_value_t = 1e-7)]
    pub zero_tol: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct InclusionArgs {
    #[arg(long)]
    pub acts: PathBuf,
    /// Nearest-hull model directory from `classify fit`; hulls are built
    /// from `--acts` when omitted.
    #[arg(long)]
    pub hulls: Option<PathBuf>,
    #[command(flatten)]
    pub build: BuildFlags,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct HistArgs {
    #[arg(long)]
    pub acts: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    /// Sample this many pairs per class when there are more.
    #[arg(long, default_value_t = DEFAULT_PAIR_CAP)]
    pub pair_cap: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep raw distances instead of dividing by the layer's mean
    /// same-class distance.
    #[arg(long)]
    pub raw: bool,
    /// Also write one `inner_class_<c>.csv` per class here.
    #[arg(long)]
    pub csv_dir: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct MatrixArgs {
    #[arg(long)]
    pub acts: PathBuf,
    #[arg(long, default_value_t = DEFAULT_PAIR_CAP)]
    pub pair_cap: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the matrix as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct RadiusArgs {
    #[arg(long)]
    pub acts: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

fn extreme(a: &ExtremeArgs) -> Result<Run> {
    let acts = read_activations(&a.acts)?;
    let cfg = acthull::geometry::SolverConfig {
        zero_tol: a.zero_tol,
        ..Default::default()
    };
    let audits = audit_all_extreme(&acts, &cfg)?;
    let non_extreme: usize = audits.iter().map(|x| x.non_extreme).sum();
    println!(
        "layer {}: {non_extreme} of {} vectors are not extreme",
        acts.layer_index,
        acts.len()
    );
    emit_report_json("extreme-audit", &audits, &a.out)?;
    Ok(Run {
        seed: None,
        inputs: vec![a.acts.clone()],
        outputs: vec![a.out.clone()],
    })
}

fn inclusion(a: &InclusionArgs) -> Result<Run> {
    let acts = read_activations(&a.acts)?;
    let mut inputs = vec![a.acts.clone()];
    let model = match &a.hulls {
        Some(dir) => {
            ensure_exists(dir)?;
            inputs.push(dir.clone());
            load_model(dir).with_context(|| format!("loading hulls from {}", dir.display()))?
        }
        None => fit(&acts, &a.build.builder()).context("building class hulls")?,
    };
    let audit = audit_mis_inclusion(&acts, &model.hulls(), &a.build.solver())?;
    println!(
        "layer {}: {} of {} (vector, foreign hull) pairs inside",
        acts.layer_index,
        audit.violations.len(),
        audit.pairs_tested
    );
    emit_report_json("inclusion-audit", &audit, &a.out)?;
    Ok(Run {
        seed: Some(a.build.seed),
        inputs,
        outputs: vec![a.out.clone()],
    })
}

fn inner_hist(a: &HistArgs) -> Result<Run> {
    let acts = read_activations(&a.acts)?;
    let scale = if a.raw {
        1.0
    } else {
        layer_mean_inner_distance(&acts, a.pair_cap, a.seed)?
    };
    let cfg = HistogramConfig {
        bins: a.bins,
        pair_cap: a.pair_cap,
        seed: a.seed,
        scale,
    };
    let mut outputs = vec![a.out.clone()];
    let mut hists = Vec::new();
    for class in acts.classes() {
        if acts.class_indices(class).len() < 2 {
            eprintln!("skipping class {class}: fewer than two vectors");
            continue;
        }
        let h = inner_class_histogram(&acts, class, &cfg)?;
        if let Some(dir) = &a.csv_dir {
            let path = dir.join(format!("inner_class_{class}.csv"));
            emit_histogram_csv(&h.bin_edges, &h.counts, &path)?;
            outputs.push(path);
        }
        println!(
            "class {class}: peak at {:.4}, mean {:.4}",
            h.peak_bin_center, h.mean
        );
        hists.push(h);
    }
    emit_report_json("inner-class-histograms", &hists, &a.out)?;
    Ok(Run {
        seed: Some(a.seed),
        inputs: vec![a.acts.clone()],
        outputs,
    })
}

#[derive(Serialize)]
struct MatrixReport {
    matrix: acthull::analysis::InterClassMatrix,
    correlation: Option<acthull::analysis::CorrelationReport>,
}

fn inter_matrix(a: &MatrixArgs) -> Result<Run> {
    let acts = read_activations(&a.acts)?;
    let matrix = inter_class_matrix(&acts, a.pair_cap, a.seed)?;
    let correlation = match inner_inter_correlation(&matrix) {
        Ok(c) => {
            println!("inner/inter pearson {:.4}", c.pearson);
            Some(c)
        }
        Err(e) => {
            eprintln!("no correlation: {e}");
            None
        }
    };
    let mut outputs = vec![a.out.clone()];
    if let Some(csv) = &a.csv {
        emit_matrix_csv(&matrix.to_array(), &matrix.classes, csv)?;
        outputs.push(csv.clone());
    }
    emit_report_json(
        "inter-class-matrix",
        &MatrixReport {
            matrix,
            correlation,
        },
        &a.out,
    )?;
    Ok(Run {
        seed: Some(a.seed),
        inputs: vec![a.acts.clone()],
        outputs,
    })
}

fn radius(a: &RadiusArgs) -> Result<Run> {
    let acts = read_activations(&a.acts)?;
    let stats = class_radius_stats(&acts)?;
    for s in &stats {
        println!("class {}: mean {:.4} std {:.4}", s.class, s.mean, s.std);
    }
    emit_report_json("class-radius", &stats, &a.out)?;
    Ok(Run {
        seed: None,
        inputs: vec![a.acts.clone()],
        outputs: vec![a.out.clone()],
    })
}

pub fn run(c: &AnalyzeCommand) -> Result<(&'static str, serde_json::Value, Run)> {
    Ok(match c {
        AnalyzeCommand::Extreme(a) => ("analyze extreme", serde_json::to_value(a)?, extreme(a)?),
        AnalyzeCommand::Inclusion(a) => {
            ("analyze inclusion", serde_json::to_value(a)?, inclusion(a)?)
        }
        AnalyzeCommand::InnerHist(a) => (
            "analyze inner-hist",
            serde_json::to_value(a)?,
            inner_hist(a)?,
        ),
        AnalyzeCommand::InterMatrix(a) => (
            "analyze inter-matrix",
            serde_json::to_value(a)?,
            inter_matrix(a)?,
        ),
        AnalyzeCommand::Radius(a) => ("analyze radius", serde_json::to_value(a)?, radius(a)?),
    })
}
