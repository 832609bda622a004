use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{sq_dist, PointSet};
use crate::nn::ActivationSet;
use crate::rng::{self, streams};

pub const DEFAULT_BINS: usize = 50;
pub const DEFAULT_PAIR_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramConfig {
    pub bins: usize,
    pub pair_cap: usize,
    pub seed: u64,
    /// Divide every distance by this before binning (1 for raw distances).
    pub scale: f64,
}

impl Default for HistogramConfig {
    fn default() -> Self {
        Self {
            bins: DEFAULT_BINS,
            pair_cap: DEFAULT_PAIR_CAP,
            seed: 0,
            scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceHistogram {
    pub layer_index: usize,
    pub class_label: usize,
    /// `bins + 1` ascending edges over `[0, largest distance]`.
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Centre of the fullest bin, leftmost on ties.
    pub peak_bin_center: f64,
    pub pairs: u64,
    pub sampled: bool,
    pub mean: f64,
    pub scale: f64,
}

/// Distinct-pair index list for a class of size `n`: every pair when there
/// are at most `cap`, else `cap` uniform draws (with replacement). Drawn
/// before any distance is computed so the result does not depend on
/// scheduling.
fn inner_pairs(n: usize, cap: usize, seed: u64, salt: u64) -> (Vec<(usize, usize)>, bool) {
    let total = n * (n - 1) / 2;
    if total <= cap {
        let all = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        return (all, false);
    }
    let mut rng = rng::stream(
        seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15),
        streams::PAIRS,
    );
    let pairs = (0..cap)
        .map(|_| {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            (i.min(j), i.max(j))
        })
        .collect();
    (pairs, true)
}

fn distances(points: &PointSet, pairs: &[(usize, usize)]) -> Vec<f64> {
    pairs
        .par_iter()
        .map(|&(i, j)| sq_dist(points.row(i), points.row(j)).sqrt())
        .collect()
}

/// Histogram of same-class pairwise distances.
pub fn inner_class_histogram(
    acts: &ActivationSet,
    class: usize,
    cfg: &HistogramConfig,
) -> Result<DistanceHistogram> {
    if cfg.bins == 0 || cfg.pair_cap == 0 {
        return Err(Error::input("bins and pair_cap must be >= 1"));
    }
    if !(cfg.scale.is_finite() && cfg.scale > 0.0) {
        return Err(Error::input(format!(
            "scale must be > 0, got {}",
            cfg.scale
        )));
    }
    let idx = acts.class_indices(class);
    if idx.is_empty() {
        return Err(Error::input(format!("class {class} is absent")));
    }
    if idx.len() < 2 {
        return Err(Error::input(format!(
            "class {class} has a single vector; no pairs"
        )));
    }
    let points = acts.vectors.select(&idx)?;
    let (pairs, sampled) = inner_pairs(idx.len(), cfg.pair_cap, cfg.seed, class as u64);
    let mut d = distances(&points, &pairs);
    d.iter_mut().for_each(|x| *x /= cfg.scale);

    let top = d.iter().copied().fold(0.0, f64::max);
    let width = top / cfg.bins as f64;
    let mut counts = vec![0u64; cfg.bins];
    for &x in &d {
        let b = if width > 0.0 {
            ((x / width) as usize).min(cfg.bins - 1)
        } else {
            0
        };
        counts[b] += 1;
    }
    let bin_edges: Vec<f64> = (0..=cfg.bins).map(|k| k as f64 * width).collect();
    let peak = counts
        .iter()
        .enumerate()
        .fold(
            (0, 0u64),
            |best, (k, &c)| if c > best.1 { (k, c) } else { best },
        )
        .0;
    Ok(DistanceHistogram {
        layer_index: acts.layer_index,
        class_label: class,
        peak_bin_center: (peak as f64 + 0.5) * width,
        bin_edges,
        counts,
        pairs: d.len() as u64,
        sampled,
        mean: d.iter().sum::<f64>() / d.len() as f64,
        scale: cfg.scale,
    })
}

/// Mean same-class pairwise distance pooled over every class with at least
/// two vectors; the per-layer normaliser for comparing histogram peaks.
pub fn layer_mean_inner_distance(acts: &ActivationSet, pair_cap: usize, seed: u64) -> Result<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for class in acts.classes() {
        let idx = acts.class_indices(class);
        if idx.len() < 2 {
            continue;
        }
        let points = acts.vectors.select(&idx)?;
        let (pairs, _) = inner_pairs(idx.len(), pair_cap.max(1), seed, class as u64);
        let d = distances(&points, &pairs);
        sum += d.iter().sum::<f64>();
        count += d.len();
    }
    if count == 0 {
        return Err(Error::input("no class has two or more vectors"));
    }
    Ok(sum / count as f64)
}

/// Mean distances between classes. Entry `(a, b)` is
/// `Σ_{y∈A} Σ_{z∈B} ‖y − z‖ / (|A|·|B|)`; on the diagonal the sum runs over
/// all ordered pairs including `y = z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterClassMatrix {
    pub layer_index: usize,
    pub classes: Vec<usize>,
    pub matrix: Vec<Vec<f64>>,
    /// Standard error of sampled entries, 0 for exact ones.
    pub std_errors: Vec<Vec<f64>>,
}

impl InterClassMatrix {
    pub fn to_array(&self) -> ndarray::Array2<f64> {
        let k = self.classes.len();
        ndarray::Array2::from_shape_fn((k, k), |(a, b)| self.matrix[a][b])
    }
}

pub fn inter_class_matrix(
    acts: &ActivationSet,
    pair_cap: usize,
    seed: u64,
) -> Result<InterClassMatrix> {
    if pair_cap == 0 {
        return Err(Error::input("pair_cap must be >= 1"));
    }
    let classes = acts.classes();
    let k = classes.len();
    let members: Vec<Vec<usize>> = classes.iter().map(|&c| acts.class_indices(c)).collect();
    let mut matrix = vec![vec![0.0; k]; k];
    let mut std_errors = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in a..k {
            let (ma, mb) = (&members[a], &members[b]);
            let (mean, se) = if ma.len() * mb.len() <= pair_cap {
                let rows: Vec<f64> = ma
                    .par_iter()
                    .map(|&i| {
                        mb.iter()
                            .map(|&j| sq_dist(acts.vectors.row(i), acts.vectors.row(j)).sqrt())
                            .sum::<f64>()
                    })
                    .collect();
                // summed in order so the result does not depend on the thread count
                let total: f64 = rows.iter().sum();
                (total / (ma.len() * mb.len()) as f64, 0.0)
            } else {
                let salt = (a * k + b) as u64;
                let mut rng = rng::stream(
                    seed ^ salt.wrapping_mul(0xD1B5_4A32_D192_ED03),
                    streams::PAIRS,
                );
                let pairs: Vec<(usize, usize)> = (0..pair_cap)
                    .map(|_| {
                        (
                            ma[rng.random_range(0..ma.len())],
                            mb[rng.random_range(0..mb.len())],
                        )
                    })
                    .collect();
                let d = distances(&acts.vectors, &pairs);
                let m = d.len() as f64;
                let mean = d.iter().sum::<f64>() / m;
                let var =
                    d.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0).max(1.0);
                (mean, (var / m).sqrt())
            };
            matrix[a][b] = mean;
            matrix[b][a] = mean;
            std_errors[a][b] = se;
            std_errors[b][a] = se;
        }
    }
    Ok(InterClassMatrix {
        layer_index: acts.layer_index,
        classes,
        matrix,
        std_errors,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub layer_index: usize,
    pub classes: Vec<usize>,
    /// Diagonal entries.
    pub inner: Vec<f64>,
    /// Mean off-diagonal entry of each row.
    pub inter: Vec<f64>,
    pub pearson: f64,
}

/// Pearson correlation between each class's inner distance and its mean
/// distance to the other classes.
pub fn inner_inter_correlation(m: &InterClassMatrix) -> Result<CorrelationReport> {
    let k = m.classes.len();
    if k < 3 {
        return Err(Error::input(format!(
            "correlation needs at least 3 classes, got {k}"
        )));
    }
    let inner: Vec<f64> = (0..k).map(|a| m.matrix[a][a]).collect();
    let inter: Vec<f64> = (0..k)
        .map(|a| {
            (0..k)
                .filter(|&b| b != a)
                .map(|b| m.matrix[a][b])
                .sum::<f64>()
                / (k - 1) as f64
        })
        .collect();
    let pearson = pearson(&inner, &inter).ok_or_else(|| {
        Error::Numerical("correlation undefined: constant inner or inter distances".into())
    })?;
    Ok(CorrelationReport {
        layer_index: m.layer_index,
        classes: m.classes.clone(),
        inner,
        inter,
        pearson,
    })
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    let den = (sxx * syy).sqrt();
    (den > 0.0).then(|| sxy / den)
}

/// Spread of one class about the centroid of the whole set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusStats {
    pub class: usize,
    pub count: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

pub fn class_radius_stats(acts: &ActivationSet) -> Result<Vec<RadiusStats>> {
    if acts.is_empty() {
        return Err(Error::input("empty activation set"));
    }
    let centroid = acts.vectors.centroid();
    Ok(acts
        .classes()
        .into_iter()
        .map(|class| {
            let r: Vec<f64> = acts
                .class_indices(class)
                .iter()
                .map(|&i| sq_dist(acts.vectors.row(i), &centroid).sqrt())
                .collect();
            let n = r.len() as f64;
            let mean = r.iter().sum::<f64>() / n;
            let var = r.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
            RadiusStats {
                class,
                count: r.len(),
                mean,
                std: var.sqrt(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::tests::acts;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn two_points_fill_one_bin() {
        let a = acts(&[vec![0.0, 0.0], vec![3.0, 4.0]], vec![0, 0]);
        let h = inner_class_histogram(
            &a,
            0,
            &HistogramConfig {
                bins: 5,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(h.pairs, 1);
        assert_eq!(h.counts.iter().sum::<u64>(), 1);
        let k = h.counts.iter().position(|&c| c == 1).unwrap();
        assert!(h.bin_edges[k] <= 5.0 && 5.0 <= h.bin_edges[k + 1]);
    }

    #[test]
    fn identical_points_peak_at_zero() {
        let a = acts(&vec![vec![1.0, 1.0]; 4], vec![0; 4]);
        let h = inner_class_histogram(&a, 0, &HistogramConfig::default()).unwrap();
        assert_eq!(h.counts[0], 6);
        assert_eq!(h.peak_bin_center, 0.0);
        assert!(inner_class_histogram(&a, 3, &HistogramConfig::default()).is_err());
    }

    #[test]
    fn sampled_histogram_conserves_mass() {
        let rows: Vec<Vec<f64>> = (0..100)
            .map(|i| vec![(i as f64).sin(), (i as f64 * 0.3).cos()])
            .collect();
        let a = acts(&rows, vec![0; 100]);
        let cfg = HistogramConfig {
            pair_cap: 1000,
            bins: 7,
            ..Default::default()
        };
        let h = inner_class_histogram(&a, 0, &cfg).unwrap();
        assert!(h.sampled);
        assert_eq!(h.counts.iter().sum::<u64>(), 1000);
        assert_eq!(h, inner_class_histogram(&a, 0, &cfg).unwrap());
    }

    #[test]
    fn matrix_single_points() {
        let a = acts(&[vec![0.0, 0.0], vec![3.0, 4.0]], vec![0, 1]);
        let m = inter_class_matrix(&a, 100, 0).unwrap();
        assert_eq!(m.matrix, vec![vec![0.0, 5.0], vec![5.0, 0.0]]);
    }

    #[test]
    fn gaussian_blobs_mean_distance() {
        let mut rng = rng::stream(5, 0);
        let mut g = || <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng);
        let mut rows = Vec::new();
        for c in [0.0, 10.0] {
            for _ in 0..500 {
                rows.push(vec![c + g(), g()]);
            }
        }
        let labels: Vec<usize> = (0..1000).map(|i| i / 500).collect();
        let a = acts(&rows, labels);
        let m = inter_class_matrix(&a, DEFAULT_PAIR_CAP, 0).unwrap();
        // Monte-Carlo oracle for E‖x − y‖, x ~ N((0,0), I), y ~ N((10,0), I)
        let mut rng = rng::stream(6, 0);
        let mut g = || <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng);
        let oracle = (0..1_000_000)
            .map(|_| {
                let dx = 10.0 + g() - g();
                let dy = g() - g();
                (dx * dx + dy * dy).sqrt()
            })
            .sum::<f64>()
            / 1e6;
        assert!((oracle - 10.1).abs() < 0.05, "{oracle}");
        assert!(
            (m.matrix[0][1] - oracle).abs() < 0.2,
            "{} vs {oracle}",
            m.matrix[0][1]
        );
    }

    fn scaled_classes(factors: &[f64], centers: &[f64]) -> ActivationSet {
        let base = [
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ];
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (c, (&f, &x)) in factors.iter().zip(centers).enumerate() {
            for b in &base {
                rows.push(vec![x + f * b[0], f * b[1]]);
                labels.push(c);
            }
        }
        acts(&rows, labels)
    }

    #[test]
    fn correlation_examples() {
        // centre gaps 100, 200, 300 make each class's mean gap 150 + 50·factor
        let m = inter_class_matrix(
            &scaled_classes(&[1.0, 2.0, 3.0], &[0.0, -100.0, 200.0]),
            1_000_000,
            0,
        )
        .unwrap();
        let r = inner_inter_correlation(&m).unwrap();
        assert!(r.pearson > 0.9999, "{r:?}");
        let m = inter_class_matrix(
            &scaled_classes(&[1.0, 2.0, 8.0], &[0.0, 300.0, 150.0]),
            1_000_000,
            0,
        )
        .unwrap();
        assert!(inner_inter_correlation(&m).unwrap().pearson < 0.0);
        let two = inter_class_matrix(&scaled_classes(&[1.0, 2.0], &[0.0, 5.0]), 100, 0).unwrap();
        assert!(inner_inter_correlation(&two).is_err());
    }

    #[test]
    fn radius_examples() {
        let circle: Vec<Vec<f64>> = (0..12)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 12.0;
                vec![2.0 * t.cos(), 2.0 * t.sin()]
            })
            .collect();
        let s = class_radius_stats(&acts(&circle, vec![0; 12])).unwrap();
        assert!((s[0].mean - 2.0).abs() < 1e-12 && s[0].std < 1e-12);
        let one = class_radius_stats(&acts(&[vec![3.0, -1.0]], vec![0])).unwrap();
        assert_eq!(one[0].mean, 0.0);

        let mut rings = circle.clone();
        rings.extend(circle.iter().map(|r| vec![0.5 * r[0], 0.5 * r[1]]));
        let labels: Vec<usize> = (0..24).map(|i| i / 12).collect();
        let s = class_radius_stats(&acts(&rings, labels)).unwrap();
        assert!((s[0].mean - 2.0).abs() < 1e-9 && (s[1].mean - 1.0).abs() < 1e-9);
    }
}
