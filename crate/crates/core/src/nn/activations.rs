use std::path::{Path, PathBuf};

use ndarray::{concatenate, Array2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Mlp;
use crate::data::{emit_report_json, load_vectors, read_report_json, save_avec, LabeledVectors};
use crate::error::{Error, Result};
use crate::geometry::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    #[default]
    Train,
    Test,
}

/// Whether a hidden layer is read after or before its rectifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    #[default]
    Post,
    Pre,
}

/// Activation vectors of one hidden layer, one row per input.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationSet {
    /// 1-based hidden layer index.
    pub layer_index: usize,
    pub vectors: PointSet,
    pub labels: Vec<usize>,
    pub split: Split,
    pub stage: Stage,
}

impl ActivationSet {
    pub fn new(
        layer_index: usize,
        data: LabeledVectors,
        split: Split,
        stage: Stage,
    ) -> Result<Self> {
        if layer_index == 0 {
            return Err(Error::input("layer indices start at 1"));
        }
        Ok(Self {
            layer_index,
            vectors: data.vectors,
            labels: data.labels,
            split,
            stage,
        })
    }

    pub fn to_labeled(&self) -> LabeledVectors {
        LabeledVectors::new(self.vectors.clone(), self.labels.clone()).expect("lengths match")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.dim()
    }

    pub fn classes(&self) -> Vec<usize> {
        let mut c = self.labels.clone();
        c.sort_unstable();
        c.dedup();
        c
    }

    pub fn class_indices(&self, class: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.labels[i] == class)
            .collect()
    }

    pub fn class_points(&self, class: usize) -> Result<PointSet> {
        let idx = self.class_indices(class);
        if idx.is_empty() {
            return Err(Error::input(format!("class {class} has no vectors")));
        }
        self.vectors.select(&idx)
    }
}

const CHUNK: usize = 256;

/// Post-rectifier outputs of hidden layer `layer_index` (1-based).
pub fn extract_activations(
    model: &Mlp,
    data: &LabeledVectors,
    layer_index: usize,
    split: Split,
) -> Result<ActivationSet> {
    extract_activations_at(model, data, layer_index, split, Stage::Post)
}

pub fn extract_activations_at(
    model: &Mlp,
    data: &LabeledVectors,
    layer_index: usize,
    split: Split,
    stage: Stage,
) -> Result<ActivationSet> {
    let x = data.vectors.view();
    let starts: Vec<usize> = (0..data.len()).step_by(CHUNK).collect();
    let parts: Vec<Array2<f64>> = starts
        .par_iter()
        .map(|&s| {
            let end = (s + CHUNK).min(data.len());
            model.layer_output(x.slice(ndarray::s![s..end, ..]), layer_index, stage)
        })
        .collect::<Result<_>>()?;
    let views: Vec<_> = parts.iter().map(|p| p.view()).collect();
    let all = concatenate(Axis(0), &views).map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(ActivationSet {
        layer_index,
        vectors: PointSet::new(all)?,
        labels: data.labels.clone(),
        split,
        stage,
    })
}

#[derive(Serialize, Deserialize)]
struct Meta {
    layer_index: usize,
    split: Split,
    stage: Stage,
}

const META_SCHEMA: &str = "activation-meta";

fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Writes the vectors as AVEC plus a `<path>.meta.json` sidecar holding the
/// layer index, split and stage.
pub fn save_activations(acts: &ActivationSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    save_avec(&acts.to_labeled(), path)?;
    let meta = Meta {
        layer_index: acts.layer_index,
        split: acts.split,
        stage: acts.stage,
    };
    emit_report_json(META_SCHEMA, &meta, meta_path(path))
}

/// Loads any vector file as activations. Without a sidecar the set is
/// treated as layer 1 of the training split.
pub fn load_activations(path: impl AsRef<Path>) -> Result<ActivationSet> {
    let path = path.as_ref();
    let data = load_vectors(path)?;
    let meta_file = meta_path(path);
    let meta = if meta_file.exists() {
        read_report_json(META_SCHEMA, &meta_file)?
    } else {
        Meta {
            layer_index: 1,
            split: Split::Train,
            stage: Stage::Post,
        }
    };
    ActivationSet::new(meta.layer_index, data, meta.split, meta.stage)
}
