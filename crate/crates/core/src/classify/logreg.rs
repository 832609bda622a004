use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::LabeledVectors;
use crate::error::{Error, Result};
use crate::rng::{self, streams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegConfig {
    pub lr: f64,
    pub max_iters: usize,
    /// Stop once the largest gradient component falls below this.
    pub tol: f64,
    /// L2 penalty on the weights (not the biases).
    pub l2: f64,
    pub seed: u64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        Self {
            lr: 0.5,
            max_iters: 500,
            tol: 1e-5,
            l2: 1e-4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegReport {
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub iterations: usize,
    pub final_loss: f64,
    pub converged: bool,
}

/// Multinomial logistic regression on standardised features.
#[derive(Debug, Clone, PartialEq)]
pub struct LogReg {
    pub mean: Array1<f64>,
    pub scale: Array1<f64>,
    /// `classes × features`.
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
    pub l2: f64,
}

impl LogReg {
    fn standardize(&self, x: ArrayView2<f64>) -> Array2<f64> {
        (&x - &self.mean) / &self.scale
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<usize> {
        let z = self.standardize(x).dot(&self.weights.t()) + &self.bias;
        z.rows()
            .into_iter()
            .map(|r| crate::nn::argmax(r.iter().copied()))
            .collect()
    }

    /// Penalised mean cross-entropy on standardised inputs `xs`, with its
    /// gradient with respect to the weights and biases.
    pub fn loss_and_grad(
        &self,
        xs: ArrayView2<f64>,
        labels: &[usize],
    ) -> (f64, Array2<f64>, Array1<f64>) {
        let m = labels.len() as f64;
        let mut p = xs.dot(&self.weights.t()) + &self.bias;
        let mut loss = 0.0;
        for (mut row, &l) in p.rows_mut().into_iter().zip(labels) {
            let top = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
            row.mapv_inplace(|v| (v - top).exp());
            let s = row.sum();
            loss += s.ln() - (row[l].ln());
            row /= s;
            row[l] -= 1.0;
        }
        p /= m;
        let gw = p.t().dot(&xs) + &(&self.weights * self.l2);
        let gb = p.sum_axis(Axis(0));
        let penalty = 0.5 * self.l2 * self.weights.iter().map(|w| w * w).sum::<f64>();
        (loss / m + penalty, gw, gb)
    }

    pub fn accuracy(&self, data: &LabeledVectors) -> f64 {
        crate::nn::fraction_equal(&self.predict(data.vectors.view()), &data.labels)
    }
}

/// Full-batch gradient descent until the gradient is below `tol` or
/// `max_iters` is reached.
pub fn logreg_baseline(
    train: &LabeledVectors,
    test: &LabeledVectors,
    cfg: &LogRegConfig,
) -> Result<(LogReg, LogRegReport)> {
    if train.dim() != test.dim() {
        return Err(Error::Dimension {
            expected: train.dim(),
            got: test.dim(),
        });
    }
    if train.classes().len() < 2 {
        return Err(Error::input(
            "logistic regression needs at least two classes",
        ));
    }
    if !(cfg.lr > 0.0 && cfg.tol > 0.0 && cfg.l2 >= 0.0) {
        return Err(Error::input("lr and tol must be > 0, l2 >= 0"));
    }
    let x = train.vectors.view();
    let mean = x.mean_axis(Axis(0)).expect("non-empty");
    let scale = x
        .std_axis(Axis(0), 0.0)
        .mapv(|s| if s > 0.0 { s } else { 1.0 });
    let k = train.n_classes().max(test.n_classes());
    let mut rng = rng::stream(cfg.seed, streams::LOGREG);
    let init = Normal::new(0.0, 0.01).expect("valid");
    let mut model = LogReg {
        weights: Array2::from_shape_fn((k, train.dim()), |_| init.sample(&mut rng)),
        bias: Array1::zeros(k),
        mean,
        scale,
        l2: cfg.l2,
    };
    let xs = model.standardize(x);

    let mut loss = f64::NAN;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iters {
        let (l, gw, gb) = model.loss_and_grad(xs.view(), &train.labels);
        loss = l;
        if !loss.is_finite() {
            return Err(Error::TrainingDivergence {
                epoch: iterations,
                loss,
            });
        }
        let g = gw
            .iter()
            .chain(gb.iter())
            .fold(0.0f64, |a, v| a.max(v.abs()));
        if g < cfg.tol {
            converged = true;
            break;
        }
        model.weights.scaled_add(-cfg.lr, &gw);
        model.bias.scaled_add(-cfg.lr, &gb);
        iterations += 1;
    }
    let report = LogRegReport {
        train_accuracy: model.accuracy(train),
        test_accuracy: model.accuracy(test),
        iterations,
        final_loss: loss,
        converged,
    };
    Ok((model, report))
}
