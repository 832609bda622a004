//! A small fully connected rectifier network, trained with minibatch Adam
//! on softmax cross-entropy, and per-layer activation extraction.

mod activations;
mod checkpoint;

pub use activations::{
    extract_activations, extract_activations_at, load_activations, save_activations, ActivationSet,
    Split, Stage,
};
pub use checkpoint::{
    decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint, CHECKPOINT_VERSION,
};

use ndarray::{Array1, Array2, ArrayView2, Axis, Zip};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::LabeledVectors;
use crate::error::{Error, Result};
use crate::rng::{self, streams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[default]
    Relu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Optimizer {
    Adam { beta1: f64, beta2: f64, eps: f64 },
    Sgd,
}

impl Default for Optimizer {
    fn default() -> Self {
        Optimizer::Adam {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpConfig {
    pub layer_widths: Vec<usize>,
    /// `None` infers one past the largest label seen in training or test data.
    pub n_classes: Option<usize>,
    pub activation: Activation,
    pub lr: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub optimizer: Optimizer,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            layer_widths: vec![64; 4],
            n_classes: None,
            activation: Activation::Relu,
            lr: 1e-3,
            epochs: 30,
            batch_size: 32,
            seed: 0,
            optimizer: Optimizer::default(),
        }
    }
}

impl MlpConfig {
    pub fn validate(&self) -> Result<()> {
        if self.layer_widths.is_empty() || self.layer_widths.contains(&0) {
            return Err(Error::input(
                "need at least one hidden layer, all widths >= 1",
            ));
        }
        if !(self.lr.is_finite() && self.lr > 0.0) {
            return Err(Error::input(format!(
                "learning rate must be > 0, got {}",
                self.lr
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::input("batch_size must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    /// Mean training loss of each epoch.
    pub loss_curve: Vec<f64>,
    pub seed: u64,
}

impl TrainReport {
    pub fn gap(&self) -> f64 {
        self.train_accuracy - self.test_accuracy
    }
}

/// One affine map `z = W a + b`, with `W` stored `[out][in]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
}

impl Dense {
    pub fn inputs(&self) -> usize {
        self.weights.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.weights.nrows()
    }

    fn forward(&self, a: &ArrayView2<f64>) -> Array2<f64> {
        a.dot(&self.weights.t()) + &self.bias
    }
}

/// Rectifier hidden layers followed by a softmax output layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    layers: Vec<Dense>,
}

/// Gradients laid out like [`Mlp::layers`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<Dense>,
}

/// Per-layer values from one forward pass.
struct Trace {
    /// Input followed by every hidden activation.
    acts: Vec<Array2<f64>>,
    pre: Vec<Array2<f64>>,
    logits: Array2<f64>,
    probs: Array2<f64>,
}

impl Mlp {
    /// He-initialised weights, zero biases.
    pub fn new(input_dim: usize, widths: &[usize], n_classes: usize, seed: u64) -> Result<Self> {
        if input_dim == 0 || n_classes == 0 || widths.is_empty() || widths.contains(&0) {
            return Err(Error::input(
                "network dimensions must be >= 1 with at least one hidden layer",
            ));
        }
        let mut rng = rng::stream(seed, streams::MLP_INIT);
        let mut dims = vec![input_dim];
        dims.extend_from_slice(widths);
        dims.push(n_classes);
        let layers = dims
            .windows(2)
            .map(|w| {
                let std = (2.0 / w[0] as f64).sqrt();
                let weights = Array2::from_shape_fn((w[1], w[0]), |_| {
                    std * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng)
                });
                Dense {
                    weights,
                    bias: Array1::zeros(w[1]),
                }
            })
            .collect();
        Ok(Self { layers })
    }

    pub fn from_layers(layers: Vec<Dense>) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::input(
                "need at least one hidden layer and an output layer",
            ));
        }
        for (i, l) in layers.iter().enumerate() {
            if l.bias.len() != l.outputs() || l.outputs() == 0 || l.inputs() == 0 {
                return Err(Error::input(format!("layer {i}: inconsistent shapes")));
            }
            if i > 0 && layers[i - 1].outputs() != l.inputs() {
                return Err(Error::Dimension {
                    expected: layers[i - 1].outputs(),
                    got: l.inputs(),
                });
            }
            if l.weights.iter().chain(&l.bias).any(|v| !v.is_finite()) {
                return Err(Error::input(format!("layer {i}: non-finite parameter")));
            }
        }
        Ok(Self { layers })
    }

    /// Hidden layers followed by the output layer.
    pub fn layers(&self) -> &[Dense] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Dense] {
        &mut self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].inputs()
    }

    pub fn n_classes(&self) -> usize {
        self.layers.last().expect("non-empty").outputs()
    }

    /// Number of hidden layers ℓ.
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    /// `[input, hidden..., classes]`.
    pub fn dims(&self) -> Vec<usize> {
        let mut d = vec![self.input_dim()];
        d.extend(self.layers.iter().map(Dense::outputs));
        d
    }

    fn check_input(&self, x: &ArrayView2<f64>) -> Result<()> {
        if x.ncols() != self.input_dim() {
            return Err(Error::Dimension {
                expected: self.input_dim(),
                got: x.ncols(),
            });
        }
        Ok(())
    }

    fn trace(&self, x: &ArrayView2<f64>) -> Trace {
        let mut acts = vec![x.to_owned()];
        let mut pre = Vec::with_capacity(self.layers.len());
        for layer in &self.layers[..self.depth()] {
            let z = layer.forward(&acts.last().expect("non-empty").view());
            acts.push(z.mapv(|v| v.max(0.0)));
            pre.push(z);
        }
        let logits = self.layers[self.depth()].forward(&acts.last().expect("non-empty").view());
        let probs = softmax(logits.clone());
        Trace {
            acts,
            pre,
            logits,
            probs,
        }
    }

    /// Class probabilities, one row per input.
    pub fn predict_proba(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        self.check_input(&x)?;
        Ok(self.trace(&x).probs)
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Result<Vec<usize>> {
        Ok(self
            .predict_proba(x)?
            .rows()
            .into_iter()
            .map(|r| argmax(r.iter().copied()))
            .collect())
    }

    pub fn accuracy(&self, data: &LabeledVectors) -> Result<f64> {
        let pred = self.predict(data.vectors.view())?;
        Ok(fraction_equal(&pred, &data.labels))
    }

    /// Output of hidden layer `layer` (1-based), after or before the rectifier.
    pub fn layer_output(
        &self,
        x: ArrayView2<f64>,
        layer: usize,
        stage: Stage,
    ) -> Result<Array2<f64>> {
        self.check_input(&x)?;
        if layer == 0 || layer > self.depth() {
            return Err(Error::input(format!(
                "layer {layer} out of range 1..={}",
                self.depth()
            )));
        }
        let mut a = x.to_owned();
        for (i, l) in self.layers[..layer].iter().enumerate() {
            let z = l.forward(&a.view());
            if i + 1 == layer && stage == Stage::Pre {
                return Ok(z);
            }
            a = z.mapv(|v| v.max(0.0));
        }
        Ok(a)
    }

    /// Mean cross-entropy of the batch.
    pub fn loss(&self, x: ArrayView2<f64>, labels: &[usize]) -> Result<f64> {
        self.check_batch(&x, labels)?;
        Ok(cross_entropy(&self.trace(&x).logits, labels))
    }

    fn check_batch(&self, x: &ArrayView2<f64>, labels: &[usize]) -> Result<()> {
        self.check_input(x)?;
        if labels.len() != x.nrows() || labels.is_empty() {
            return Err(Error::input(format!(
                "{} labels for a batch of {}",
                labels.len(),
                x.nrows()
            )));
        }
        if let Some(&l) = labels.iter().find(|&&l| l >= self.n_classes()) {
            return Err(Error::input(format!(
                "label {l} >= {} classes",
                self.n_classes()
            )));
        }
        Ok(())
    }

    /// Mean cross-entropy and its gradient by backpropagation.
    pub fn loss_and_gradients(
        &self,
        x: ArrayView2<f64>,
        labels: &[usize],
    ) -> Result<(f64, Gradients)> {
        self.check_batch(&x, labels)?;
        let t = self.trace(&x);
        let loss = cross_entropy(&t.logits, labels);
        let m = labels.len() as f64;
        let mut delta = t.probs.clone();
        for (mut row, &l) in delta.rows_mut().into_iter().zip(labels) {
            row[l] -= 1.0;
        }
        delta /= m;

        let mut grads: Vec<Dense> = Vec::with_capacity(self.layers.len());
        for i in (0..self.layers.len()).rev() {
            let input = &t.acts[i];
            grads.push(Dense {
                weights: delta.t().dot(input),
                bias: delta.sum_axis(Axis(0)),
            });
            if i > 0 {
                let mut back = delta.dot(&self.layers[i].weights);
                Zip::from(&mut back).and(&t.pre[i - 1]).for_each(|d, &z| {
                    if z <= 0.0 {
                        *d = 0.0;
                    }
                });
                delta = back;
            }
        }
        grads.reverse();
        Ok((loss, Gradients { layers: grads }))
    }

    fn relu_pattern(&self, x: &ArrayView2<f64>) -> Vec<bool> {
        self.trace(x)
            .pre
            .iter()
            .flat_map(|z| z.iter().map(|&v| v > 0.0).collect::<Vec<_>>())
            .collect()
    }

    fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.bias.len())
            .sum()
    }

    fn param_mut(&mut self, mut k: usize) -> &mut f64 {
        for l in &mut self.layers {
            let nw = l.weights.len();
            if k < nw {
                let cols = l.weights.ncols();
                return &mut l.weights[[k / cols, k % cols]];
            }
            k -= nw;
            if k < l.bias.len() {
                return &mut l.bias[k];
            }
            k -= l.bias.len();
        }
        panic!("parameter index out of range")
    }
}

impl Gradients {
    fn get(&self, mut k: usize) -> f64 {
        for l in &self.layers {
            let nw = l.weights.len();
            if k < nw {
                let cols = l.weights.ncols();
                return l.weights[[k / cols, k % cols]];
            }
            k -= nw;
            if k < l.bias.len() {
                return l.bias[k];
            }
            k -= l.bias.len();
        }
        panic!("parameter index out of range")
    }

    pub fn max_abs(&self) -> f64 {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(l.bias.iter()))
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn softmax(mut logits: Array2<f64>) -> Array2<f64> {
    for mut row in logits.rows_mut() {
        let top = row.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        row.mapv_inplace(|v| (v - top).exp());
        let s = row.sum();
        row /= s;
    }
    logits
}

/// Mean of `logsumexp(z) − z_label`, written as `(top − z_label) +
/// ln(1 + Σ_{j≠top} e^{z_j − top})` so confident rows keep full precision.
fn cross_entropy(logits: &Array2<f64>, labels: &[usize]) -> f64 {
    let total: f64 = logits
        .rows()
        .into_iter()
        .zip(labels)
        .map(|(r, &l)| {
            let top = argmax(r.iter().copied());
            let rest: f64 = r
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != top)
                .map(|(_, &z)| (z - r[top]).exp())
                .sum();
            (r[top] - r[l]) + rest.ln_1p()
        })
        .sum();
    total / labels.len() as f64
}

pub(crate) fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

pub(crate) fn fraction_equal(a: &[usize], b: &[usize]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.iter().zip(b).filter(|(x, y)| x == y).count() as f64 / a.len() as f64
}

/// Minibatch training on softmax cross-entropy.
///
/// Single-threaded and fully determined by `cfg.seed`. With zero epochs the
/// report describes the freshly initialised network.
pub fn train_mlp(
    train: &LabeledVectors,
    test: &LabeledVectors,
    cfg: &MlpConfig,
) -> Result<(Mlp, TrainReport)> {
    cfg.validate()?;
    if train.dim() != test.dim() {
        return Err(Error::Dimension {
            expected: train.dim(),
            got: test.dim(),
        });
    }
    if train.classes().len() < 2 {
        return Err(Error::input("training data needs at least two classes"));
    }
    let seen = train.n_classes().max(test.n_classes());
    let n_classes = cfg.n_classes.unwrap_or(seen);
    if n_classes < seen {
        return Err(Error::input(format!(
            "n_classes {n_classes} but label {} present",
            seen - 1
        )));
    }

    let mut model = Mlp::new(train.dim(), &cfg.layer_widths, n_classes, cfg.seed)?;
    let mut opt = OptimizerState::new(&model, cfg.optimizer);
    let mut rng = rng::stream(cfg.seed, streams::MLP_SHUFFLE);
    let x = train.vectors.view();
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut loss_curve = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            let batch = x.select(Axis(0), chunk);
            let labels: Vec<usize> = chunk.iter().map(|&i| train.labels[i]).collect();
            let (loss, grads) = model.loss_and_gradients(batch.view(), &labels)?;
            if !loss.is_finite() {
                return Err(Error::TrainingDivergence { epoch, loss });
            }
            total += loss * chunk.len() as f64;
            opt.step(&mut model, &grads, cfg.lr);
        }
        let mean = total / train.len() as f64;
        if !mean.is_finite()
            || model
                .layers
                .iter()
                .any(|l| l.weights.iter().any(|v| !v.is_finite()))
        {
            return Err(Error::TrainingDivergence { epoch, loss: mean });
        }
        loss_curve.push(mean);
    }

    let report = TrainReport {
        train_accuracy: model.accuracy(train)?,
        test_accuracy: model.accuracy(test)?,
        loss_curve,
        seed: cfg.seed,
    };
    Ok((model, report))
}

struct OptimizerState {
    kind: Optimizer,
    m: Vec<Dense>,
    v: Vec<Dense>,
    t: i32,
}

impl OptimizerState {
    fn new(model: &Mlp, kind: Optimizer) -> Self {
        let zeros: Vec<Dense> = model
            .layers
            .iter()
            .map(|l| Dense {
                weights: Array2::zeros(l.weights.raw_dim()),
                bias: Array1::zeros(l.bias.len()),
            })
            .collect();
        Self {
            kind,
            m: zeros.clone(),
            v: zeros,
            t: 0,
        }
    }

    fn step(&mut self, model: &mut Mlp, grads: &Gradients, lr: f64) {
        self.t += 1;
        match self.kind {
            Optimizer::Sgd => {
                for (p, g) in model.layers.iter_mut().zip(&grads.layers) {
                    p.weights.scaled_add(-lr, &g.weights);
                    p.bias.scaled_add(-lr, &g.bias);
                }
            }
            Optimizer::Adam { beta1, beta2, eps } => {
                let c1 = 1.0 - beta1.powi(self.t);
                let c2 = 1.0 - beta2.powi(self.t);
                let update = |p: &mut f64, m: &mut f64, v: &mut f64, g: f64| {
                    *m = beta1 * *m + (1.0 - beta1) * g;
                    *v = beta2 * *v + (1.0 - beta2) * g * g;
                    *p -= lr * (*m / c1) / ((*v / c2).sqrt() + eps);
                };
                for (((p, g), m), v) in model
                    .layers
                    .iter_mut()
                    .zip(&grads.layers)
                    .zip(&mut self.m)
                    .zip(&mut self.v)
                {
                    Zip::from(&mut p.weights)
                        .and(&mut m.weights)
                        .and(&mut v.weights)
                        .and(&g.weights)
                        .for_each(|p, m, v, &g| update(p, m, v, g));
                    Zip::from(&mut p.bias)
                        .and(&mut m.bias)
                        .and(&mut v.bias)
                        .and(&g.bias)
                        .for_each(|p, m, v, &g| update(p, m, v, g));
                }
            }
        }
    }
}

/// Largest relative error between backpropagated gradients and central
/// differences (step `1e-5`) over up to `samples` randomly drawn parameters.
///
/// Relative error is `|a − n| / max(|a|, |n|, 1e-8)`. A parameter is
/// redrawn when either perturbation flips a rectifier on the batch, since
/// the loss is not differentiable across that kink.
pub fn gradient_check(
    model: &Mlp,
    x: ArrayView2<f64>,
    labels: &[usize],
    samples: usize,
    seed: u64,
) -> Result<f64> {
    const STEP: f64 = 1e-5;
    let (_, grads) = model.loss_and_gradients(x, labels)?;
    let base_pattern = model.relu_pattern(&x);
    let total = model.param_count();
    let mut rng = rng::stream(seed, streams::GRADCHECK);
    let mut probe = model.clone();
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut attempts = 0;
    while checked < samples.min(total) && attempts < 20 * samples.max(1) {
        attempts += 1;
        let k = rng.random_range(0..total);
        let orig = *probe.param_mut(k);
        *probe.param_mut(k) = orig + STEP;
        let plus_ok = probe.relu_pattern(&x) == base_pattern;
        let lp = probe.loss(x, labels)?;
        *probe.param_mut(k) = orig - STEP;
        let minus_ok = probe.relu_pattern(&x) == base_pattern;
        let lm = probe.loss(x, labels)?;
        *probe.param_mut(k) = orig;
        if !(plus_ok && minus_ok) {
            continue;
        }
        let numeric = (lp - lm) / (2.0 * STEP);
        let analytic = grads.get(k);
        let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8);
        worst = worst.max(rel);
        checked += 1;
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{gen_toy, ToyKind, ToySpec};
    use crate::geometry::PointSet;
    use ndarray::array;

    fn blobs(n: usize, seed: u64) -> LabeledVectors {
        let mut rng = rng::stream(seed, 99);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let c = if i % 2 == 0 { -3.0 } else { 3.0 };
                vec![
                    c + <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng),
                    <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng),
                ]
            })
            .collect();
        LabeledVectors::new(
            PointSet::from_rows(&rows).unwrap(),
            (0..n).map(|i| i % 2).collect(),
        )
        .unwrap()
    }

    #[test]
    fn separable_blobs_train_to_high_accuracy() {
        let data = blobs(200, 1);
        let cfg = MlpConfig {
            layer_widths: vec![16, 16],
            epochs: 20,
            seed: 3,
            ..MlpConfig::default()
        };
        let (_, report) = train_mlp(&data, &blobs(100, 2), &cfg).unwrap();
        assert!(report.train_accuracy >= 0.99, "{report:?}");
        assert_eq!(report.loss_curve.len(), 20);
    }

    #[test]
    fn zero_epochs_is_near_chance() {
        let data = gen_toy(&ToySpec {
            kind: ToyKind::Centers,
            n: 300,
            noise: 0.0,
            seed: 4,
        })
        .unwrap();
        let cfg = MlpConfig {
            layer_widths: vec![8],
            epochs: 0,
            ..MlpConfig::default()
        };
        let (_, report) = train_mlp(&data, &data, &cfg).unwrap();
        assert!(report.loss_curve.is_empty());
        assert!(report.train_accuracy <= 0.75, "{report:?}");
    }

    #[test]
    fn training_is_seed_deterministic() {
        let data = blobs(60, 5);
        let cfg = MlpConfig {
            layer_widths: vec![8, 8],
            epochs: 3,
            seed: 11,
            ..MlpConfig::default()
        };
        let (a, ra) = train_mlp(&data, &data, &cfg).unwrap();
        let (b, rb) = train_mlp(&data, &data, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(ra, rb);
    }

    #[test]
    fn softmax_rows_sum_to_one() {
        let model = Mlp::new(3, &[5, 4], 4, 0).unwrap();
        let x = array![[1.0, -2.0, 0.5], [100.0, 3.0, -50.0], [0.0, 0.0, 0.0]];
        for r in model.predict_proba(x.view()).unwrap().rows() {
            assert!((r.sum() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fresh_network_gradients_match_finite_differences() {
        let model = Mlp::new(4, &[6, 5], 3, 2).unwrap();
        let x = array![
            [0.3, -1.2, 0.8, 0.1],
            [1.5, 0.2, -0.4, 0.9],
            [-0.7, 0.6, 0.0, -1.1]
        ];
        let err = gradient_check(&model, x.view(), &[0, 2, 1], 200, 0).unwrap();
        assert!(err <= 1e-4, "{err}");
    }

    #[test]
    fn zero_network_with_balanced_labels_has_zero_gradient() {
        let mut model = Mlp::new(2, &[3], 2, 0).unwrap();
        for l in model.layers_mut() {
            l.weights.fill(0.0);
            l.bias.fill(0.0);
        }
        let x = array![[1.0, 2.0], [-1.0, -2.0]];
        let (_, g) = model.loss_and_gradients(x.view(), &[0, 1]).unwrap();
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let data = blobs(10, 0);
        let one_class = data.subset(&[0, 2, 4]).unwrap();
        assert!(train_mlp(&one_class, &data, &MlpConfig::default()).is_err());
        let cfg = MlpConfig {
            layer_widths: vec![],
            ..MlpConfig::default()
        };
        assert!(train_mlp(&data, &data, &cfg).is_err());
        let model = Mlp::new(2, &[3], 2, 0).unwrap();
        assert!(model.loss(array![[1.0, 2.0]].view(), &[5]).is_err());
        assert!(model.predict(array![[1.0, 2.0, 3.0]].view()).is_err());
    }

    #[test]
    fn divergence_is_reported_with_epoch() {
        let data = blobs(40, 0);
        let cfg = MlpConfig {
            layer_widths: vec![4],
            lr: 1e300,
            epochs: 5,
            optimizer: Optimizer::Sgd,
            ..MlpConfig::default()
        };
        match train_mlp(&data, &data, &cfg) {
            Err(Error::TrainingDivergence { epoch, .. }) => assert!(epoch < 5),
            other => panic!("expected divergence, got {other:?}"),
        }
    }
}
