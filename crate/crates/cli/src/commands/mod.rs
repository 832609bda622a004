pub mod analyze;
pub mod baseline;
pub mod classify;
pub mod data;
pub mod hull;
pub mod mlp;

use std::path::Path;

use acthull::data::{load_vectors, LabeledVectors};
use acthull::geometry::SolverConfig;
use acthull::hull::{BuilderConfig, InitMethod};
use acthull::nn::{load_activations, ActivationSet};
use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;

pub fn read_vectors(path: &Path) -> Result<LabeledVectors> {
    ensure_exists(path)?;
    load_vectors(path).with_context(|| format!("loading vectors from {}", path.display()))
}

pub fn read_activations(path: &Path) -> Result<ActivationSet> {
    ensure_exists(path)?;
    load_activations(path).with_context(|| format!("loading activations from {}", path.display()))
}

pub fn ensure_exists(path: &Path) -> Result<()> {
    anyhow::ensure!(path.exists(), "input not found: {}", path.display());
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitArg {
    Directions,
    Seminmf,
}

impl From<InitArg> for InitMethod {
    fn from(a: InitArg) -> Self {
        match a {
            InitArg::Directions => InitMethod::DirectionExtremes,
            InitArg::Seminmf => InitMethod::SemiNmf,
        }
    }
}

/// Hull construction flags shared by every command that builds hulls.
#[derive(Debug, Clone, Args, Serialize)]
pub struct BuildFlags {
    /// ε as a fraction of the dataset diameter.
    #[arg(long, default_value_t = 0.01)]
    pub epsilon_rel: f64,
    #[arg(long, value_enum, default_value_t = InitArg::Seminmf)]
    pub init: InitArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// "Distance is zero" threshold as a fraction of the diameter.
    #[arg(long, default_value_t = 1e-7)]
    pub zero_tol: f64,
}

impl BuildFlags {
    pub fn builder(&self) -> BuilderConfig {
        BuilderConfig {
            epsilon_rel: self.epsilon_rel,
            init: self.init.into(),
            seed: self.seed,
            solver: self.solver(),
            ..BuilderConfig::default()
        }
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            zero_tol: self.zero_tol,
            ..SolverConfig::default()
        }
    }
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
