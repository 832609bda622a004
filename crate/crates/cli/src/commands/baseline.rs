use std::path::{Path, PathBuf};

use acthull::classify::{knn_baseline, logreg_baseline, LogRegConfig, DEFAULT_K};
use acthull::data::emit_report_json;
use anyhow::Result;
use clap::{Args, Subcommand};
use serde::Serialize;

use super::{read_vectors, write_text};
use crate::manifest::Run;

#[derive(Debug, Subcommand)]
pub enum BaselineCommand {
    /// k-nearest neighbours (leave-one-out on the training set).
    Knn(KnnArgs),
    /// Multinomial logistic regression.
    Logreg(LogRegArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct KnnArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: usize,
    #[arg(long, default_value = "data")]
    pub dataset: String,
    /// `.csv` for a table row, anything else for a JSON report.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct LogRegArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long, default_value_t = LogRegConfig::default().lr)]
    pub lr: f64,
    #[arg(long, default_value_t = LogRegConfig::default().max_iters)]
    pub max_iters: usize,
    #[arg(long, default_value_t = LogRegConfig::default().tol)]
    pub tol: f64,
    #[arg(long, default_value_t = LogRegConfig::default().l2)]
    pub l2: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "data")]
    pub dataset: String,
    /// `.csv` for a table row, anything else for a JSON report.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct BaselineRow<T> {
    dataset: String,
    method: String,
    train_accuracy: f64,
    test_accuracy: f64,
    details: T,
}

fn emit<T: Serialize>(row: &BaselineRow<T>, out: &Path) -> Result<()> {
    println!(
        "{} on {}: train {:.4}, test {:.4}",
        row.method, row.dataset, row.train_accuracy, row.test_accuracy
    );
    if out
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        let text = format!(
            "dataset,method,train_accuracy,test_accuracy\n{},{},{:.4},{:.4}\n",
            row.dataset, row.method, row.train_accuracy, row.test_accuracy
        );
        write_text(out, &text)
    } else {
        Ok(emit_report_json("baseline", row, out)?)
    }
}

fn knn(a: &KnnArgs) -> Result<Run> {
    let train = read_vectors(&a.train)?;
    let test = read_vectors(&a.test)?;
    let r = knn_baseline(&train, &test, a.k)?;
    emit(
        &BaselineRow {
            dataset: a.dataset.clone(),
            method: format!("knn-{}", a.k),
            train_accuracy: r.train_accuracy,
            test_accuracy: r.test_accuracy,
            details: &r,
        },
        &a.out,
    )?;
    Ok(Run {
        seed: None,
        inputs: vec![a.train.clone(), a.test.clone()],
        outputs: vec![a.out.clone()],
    })
}

fn logreg(a: &LogRegArgs) -> Result<Run> {
    let train = read_vectors(&a.train)?;
    let test = read_vectors(&a.test)?;
    let cfg = LogRegConfig {
        lr: a.lr,
        max_iters: a.max_iters,
        tol: a.tol,
        l2: a.l2,
        seed: a.seed,
    };
    let (_, r) = logreg_baseline(&train, &test, &cfg)?;
    if !r.converged {
        eprintln!(
            "warning: stopped after {} iterations without reaching --tol",
            r.iterations
        );
    }
    emit(
        &BaselineRow {
            dataset: a.dataset.clone(),
            method: "logreg".into(),
            train_accuracy: r.train_accuracy,
            test_accuracy: r.test_accuracy,
            details: &r,
        },
        &a.out,
    )?;
    Ok(Run {
        seed: Some(a.seed),
        inputs: vec![a.train.clone(), a.test.clone()],
        outputs: vec![a.out.clone()],
    })
}

pub fn run(c: &BaselineCommand) -> Result<(&'static str, serde_json::Value, Run)> {
    Ok(match c {
        BaselineCommand::Knn(a) => ("baseline knn", serde_json::to_value(a)?, knn(a)?),
        BaselineCommand::Logreg(a) => ("baseline logreg", serde_json::to_value(a)?, logreg(a)?),
    })
}
