use std::path::PathBuf;

use acthull::data::{load_idx_subset, save_vectors, ToyKind, ToySpec};
use anyhow::{Context, Result};
use clap::Args;
use serde::Serialize;

use super::{ensure_exists, read_vectors};
use crate::manifest::Run;

#[derive(Debug, Args, Serialize)]
pub struct GenToyArgs {
    /// center, circles, moons or centers.
    #[arg(long, value_parser = |s: &str| s.parse::<ToyKind>())]
    pub kind: ToyKind,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (.csv or .avec).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn gen_toy(a: &GenToyArgs) -> Result<Run> {
    let data = acthull::data::gen_toy(&ToySpec {
        kind: a.kind,
        n: a.n,
        noise: a.noise,
        seed: a.seed,
    })?;
    save_vectors(&data, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    println!(
        "{} points, {} classes -> {}",
        data.len(),
        data.classes().len(),
        a.out.display()
    );
    Ok(Run {
        seed: Some(a.seed),
        inputs: vec![],
        outputs: vec![a.out.clone()],
    })
}

#[derive(Debug, Args, Serialize)]
pub struct ConvertArgs {
    /// A .csv or .avec file to convert.
    #[arg(long, conflicts_with_all = ["images", "labels"], required_unless_present = "images")]
    pub input: Option<PathBuf>,
    /// IDX image file (optionally gzip-compressed).
    #[arg(long, requires = "labels")]
    pub images: Option<PathBuf>,
    /// IDX label file.
    #[arg(long, requires = "images")]
    pub labels: Option<PathBuf>,
    /// Keep only the first N rows.
    #[arg(long)]
    pub limit: Option<usize>,
    /// Output file (.csv or .avec).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn convert(a: &ConvertArgs) -> Result<Run> {
    let (data, inputs) = match (&a.input, &a.images, &a.labels) {
        (Some(input), _, _) => {
            let d = read_vectors(input)?;
            let d = match a.limit {
                Some(k) => d.head(k)?,
                None => d,
            };
            (d, vec![input.clone()])
        }
        (None, Some(images), Some(labels)) => {
            ensure_exists(images)?;
            ensure_exists(labels)?;
            let d = load_idx_subset(images, labels, a.limit).with_context(|| {
                format!(
                    "reading IDX files {} and {}",
                    images.display(),
                    labels.display()
                )
            })?;
            (d, vec![images.clone(), labels.clone()])
        }
        _ => anyhow::bail!("give --input, or both --images and --labels"),
    };
    save_vectors(&data, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    println!("{} x {} -> {}", data.len(), data.dim(), a.out.display());
    Ok(Run {
        seed: None,
        inputs,
        outputs: vec![a.out.clone()],
    })
}
