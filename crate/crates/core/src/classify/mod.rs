//! Nearest-convex-hull classification, leave-one-out training accuracy,
//! KNN and logistic-regression baselines, and the train/test gap report.

mod knn;
mod logreg;
mod report;

pub use knn::{knn_baseline, knn_predict, KnnReport, DEFAULT_K};
pub use logreg::{logreg_baseline, LogReg, LogRegConfig, LogRegReport};
pub use report::{gap_report, render_accuracy_table_csv, GapReport, GapRow, LayerAccuracy};

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::ClassHull;
use crate::data::{emit_report_json, load_avec, read_report_json, save_avec, LabeledVectors};
use crate::error::{Error, Result};
use crate::geometry::{diameter, project_rows, PointSet, SolverConfig};
use crate::hull::{build_revised_ge, BuildTelemetry, BuilderConfig};
use crate::nn::ActivationSet;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassModel {
    pub class: usize,
    pub vertices: PointSet,
    /// Row of each vertex in the training set the model was fitted on.
    pub source_indices: Vec<usize>,
    pub telemetry: Option<BuildTelemetry>,
}

/// One hull per class; a vector takes the class of the nearest hull.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestHullModel {
    /// Ascending by class label.
    pub classes: Vec<ClassModel>,
    pub solver: SolverConfig,
    pub builder: BuilderConfig,
    /// Distances within this of the minimum count as tied.
    pub tie_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: usize,
    /// Distance to each class hull, in the model's class order.
    pub distances: Vec<f64>,
    pub tie: bool,
}

/// Builds one RevisedGE hull per class.
pub fn fit(train: &ActivationSet, builder: &BuilderConfig) -> Result<NearestHullModel> {
    builder.validate()?;
    let labels = train.classes();
    if labels.len() < 2 {
        return Err(Error::input(
            "nearest-hull classification needs at least two classes",
        ));
    }
    let classes: Vec<ClassModel> = labels
        .par_iter()
        .map(|&class| {
            let idx = train.class_indices(class);
            let points = train.vectors.select(&idx)?;
            let hull = build_revised_ge(&points, builder)?;
            let source_indices: Vec<usize> = hull.vertex_indices.iter().map(|&k| idx[k]).collect();
            Ok(ClassModel {
                class,
                vertices: points.select(&hull.vertex_indices)?,
                source_indices,
                telemetry: Some(hull.telemetry),
            })
        })
        .collect::<Result<_>>()?;
    Ok(NearestHullModel {
        classes,
        solver: builder.solver,
        builder: *builder,
        tie_tolerance: builder.solver.zero_threshold(diameter(&train.vectors)),
    })
}

fn distance_to(v: &[f64], rows: &[&[f64]], cfg: &SolverConfig) -> Result<f64> {
    Ok(project_rows(v, rows, cfg, None)?.distance)
}

/// Lowest class position whose distance is within `tol` of the minimum.
fn decide(distances: Vec<f64>, labels: &[usize], tol: f64) -> Prediction {
    let min = distances.iter().copied().fold(f64::INFINITY, f64::min);
    let tied: Vec<usize> = (0..distances.len())
        .filter(|&k| distances[k] <= min + tol)
        .collect();
    Prediction {
        label: labels[tied[0]],
        tie: tied.len() > 1,
        distances,
    }
}

impl NearestHullModel {
    pub fn labels(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.class).collect()
    }

    pub fn dim(&self) -> usize {
        self.classes[0].vertices.dim()
    }

    pub fn hulls(&self) -> Vec<ClassHull> {
        self.classes
            .iter()
            .map(|c| ClassHull {
                class: c.class,
                vertices: c.vertices.clone(),
            })
            .collect()
    }

    pub fn predict(&self, v: &[f64]) -> Result<Prediction> {
        if v.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: v.len(),
            });
        }
        let distances = self
            .classes
            .iter()
            .map(|c| distance_to(v, &c.vertices.rows().collect::<Vec<_>>(), &self.solver))
            .collect::<Result<Vec<_>>>()?;
        Ok(decide(distances, &self.labels(), self.tie_tolerance))
    }

    pub fn predict_all(&self, points: &PointSet) -> Result<Vec<Prediction>> {
        (0..points.n())
            .into_par_iter()
            .map(|i| self.predict(points.row(i)))
            .collect()
    }

    /// Fraction of rows whose prediction matches the label.
    pub fn accuracy(&self, acts: &ActivationSet) -> Result<f64> {
        let preds = self.predict_all(&acts.vectors)?;
        let correct = preds
            .iter()
            .zip(&acts.labels)
            .filter(|(p, &l)| p.label == l)
            .count();
        Ok(correct as f64 / acts.len().max(1) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LooMode {
    /// Remove the held-out vector from its class's stored vertex set.
    #[default]
    VertexSet,
    /// Rebuild the held-out vector's class hull without it.
    Rebuild,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LooReport {
    pub mode: LooMode,
    pub accuracy: f64,
    pub evaluated: usize,
    pub correct: usize,
    /// Vectors of single-vector classes, which cannot be held out.
    pub skipped: Vec<usize>,
}

/// Leave-one-out training accuracy: each training vector is classified with
/// its own class hull formed without it; other classes keep their full
/// vertex sets. In `VertexSet` mode a class whose only vertex is the
/// held-out vector falls back to its remaining raw points.
pub fn loo_train_accuracy(
    model: &NearestHullModel,
    train: &ActivationSet,
    mode: LooMode,
) -> Result<LooReport> {
    let ctx = LooContext::new(model, train)?;
    let outcomes: Vec<Option<bool>> = (0..train.len())
        .into_par_iter()
        .map(|i| Ok(ctx.predict(i, mode)?.map(|p| p.label == train.labels[i])))
        .collect::<Result<_>>()?;
    let skipped: Vec<usize> = (0..train.len())
        .filter(|&i| outcomes[i].is_none())
        .collect();
    let evaluated = train.len() - skipped.len();
    let correct = outcomes.iter().filter(|o| **o == Some(true)).count();
    Ok(LooReport {
        mode,
        accuracy: if evaluated > 0 {
            correct as f64 / evaluated as f64
        } else {
            0.0
        },
        evaluated,
        correct,
        skipped,
    })
}

/// The leave-one-out prediction for training row `i`, or `None` when its
/// class has a single vector.
pub fn loo_predict(
    model: &NearestHullModel,
    train: &ActivationSet,
    i: usize,
    mode: LooMode,
) -> Result<Option<Prediction>> {
    if i >= train.len() {
        return Err(Error::input(format!(
            "row {i} out of range for {} vectors",
            train.len()
        )));
    }
    LooContext::new(model, train)?.predict(i, mode)
}

struct LooContext<'a> {
    model: &'a NearestHullModel,
    train: &'a ActivationSet,
    labels: Vec<usize>,
    full_rows: Vec<Vec<&'a [f64]>>,
    members: Vec<Vec<usize>>,
}

impl<'a> LooContext<'a> {
    fn new(model: &'a NearestHullModel, train: &'a ActivationSet) -> Result<Self> {
        if train.dim() != model.dim() {
            return Err(Error::Dimension {
                expected: model.dim(),
                got: train.dim(),
            });
        }
        let labels = model.labels();
        Ok(Self {
            full_rows: model
                .classes
                .iter()
                .map(|c| c.vertices.rows().collect())
                .collect(),
            members: labels.iter().map(|&c| train.class_indices(c)).collect(),
            labels,
            model,
            train,
        })
    }

    fn predict(&self, i: usize, mode: LooMode) -> Result<Option<Prediction>> {
        let (model, train, solver) = (self.model, self.train, &self.model.solver);
        let v = train.vectors.row(i);
        let own = match self.labels.binary_search(&train.labels[i]) {
            Ok(k) => k,
            // a class the model never saw: nothing to hold out
            Err(_) => return model.predict(v).map(Some),
        };
        if self.members[own].len() < 2 {
            return Ok(None);
        }
        let mut distances = Vec::with_capacity(self.labels.len());
        for (k, c) in model.classes.iter().enumerate() {
            let d = if k != own {
                distance_to(v, &self.full_rows[k], solver)?
            } else {
                match mode {
                    LooMode::VertexSet => {
                        let rows: Vec<&[f64]> = c
                            .source_indices
                            .iter()
                            .zip(&self.full_rows[k])
                            .filter(|(&s, _)| s != i)
                            .map(|(_, &r)| r)
                            .collect();
                        if rows.is_empty() {
                            let raw: Vec<&[f64]> = self.members[k]
                                .iter()
                                .filter(|&&j| j != i)
                                .map(|&j| train.vectors.row(j))
                                .collect();
                            distance_to(v, &raw, solver)?
                        } else {
                            distance_to(v, &rows, solver)?
                        }
                    }
                    LooMode::Rebuild => {
                        let rest: Vec<usize> = self.members[k]
                            .iter()
                            .copied()
                            .filter(|&j| j != i)
                            .collect();
                        let points = train.vectors.select(&rest)?;
                        let hull = build_revised_ge(&points, &model.builder)?;
                        let rows: Vec<&[f64]> =
                            hull.vertex_indices.iter().map(|&j| points.row(j)).collect();
                        distance_to(v, &rows, solver)?
                    }
                }
            };
            distances.push(d);
        }
        Ok(Some(decide(distances, &self.labels, model.tie_tolerance)))
    }
}

const MODEL_SCHEMA: &str = "nearest-hull-model";

#[derive(Serialize, Deserialize)]
struct ModelManifest {
    solver: SolverConfig,
    builder: BuilderConfig,
    tie_tolerance: f64,
    classes: Vec<ClassEntry>,
}

#[derive(Serialize, Deserialize)]
struct ClassEntry {
    class: usize,
    file: String,
    source_indices: Vec<usize>,
    telemetry: Option<BuildTelemetry>,
}

/// Writes `model.json` plus one AVEC vertex file per class into `dir`.
/// Vertices are stored at f32 precision.
pub fn save_model(model: &NearestHullModel, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    let mut entries = Vec::new();
    for c in &model.classes {
        let file = format!("class_{}.avec", c.class);
        let data = LabeledVectors::new(c.vertices.clone(), vec![c.class; c.vertices.n()])?;
        save_avec(&data, dir.join(&file))?;
        entries.push(ClassEntry {
            class: c.class,
            file,
            source_indices: c.source_indices.clone(),
            telemetry: c.telemetry.clone(),
        });
    }
    let manifest = ModelManifest {
        solver: model.solver,
        builder: model.builder,
        tie_tolerance: model.tie_tolerance,
        classes: entries,
    };
    emit_report_json(MODEL_SCHEMA, &manifest, dir.join("model.json"))
}

pub fn load_model(dir: impl AsRef<Path>) -> Result<NearestHullModel> {
    let dir = dir.as_ref();
    let manifest: ModelManifest = read_report_json(MODEL_SCHEMA, dir.join("model.json"))?;
    let mut classes = Vec::new();
    for e in manifest.classes {
        let path = dir.join(&e.file);
        let data = load_avec(&path)?;
        if data.len() != e.source_indices.len() {
            return Err(Error::parse(
                &path,
                format!(
                    "{} vertices but {} source indices in the manifest",
                    data.len(),
                    e.source_indices.len()
                ),
            ));
        }
        classes.push(ClassModel {
            class: e.class,
            vertices: data.vectors,
            source_indices: e.source_indices,
            telemetry: e.telemetry,
        });
    }
    if classes.len() < 2 || classes.windows(2).any(|w| w[0].class >= w[1].class) {
        return Err(Error::parse(
            dir.join("model.json"),
            "need at least two classes in ascending order",
        ));
    }
    if classes
        .windows(2)
        .any(|w| w[0].vertices.dim() != w[1].vertices.dim())
    {
        return Err(Error::parse(
            dir.join("model.json"),
            "class vertex sets differ in dimension",
        ));
    }
    Ok(NearestHullModel {
        classes,
        solver: manifest.solver,
        builder: manifest.builder,
        tie_tolerance: manifest.tie_tolerance,
    })
}
