use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nn::TrainReport;

/// Nearest-hull accuracies on one layer's activation space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerAccuracy {
    pub layer_index: usize,
    /// Leave-one-out training accuracy.
    pub train: f64,
    pub test: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub layer_index: usize,
    pub train: f64,
    pub test: f64,
    pub gap: f64,
    /// This layer's gap over the network's own gap (`None` if that is 0).
    pub gap_ratio: Option<f64>,
    /// Train over test accuracy.
    pub train_test_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub layers: Vec<GapRow>,
    pub mlp_train: f64,
    pub mlp_test: f64,
    pub mlp_gap: f64,
    /// Every layer's nearest-hull gap is below the network's.
    pub hull_gap_below_mlp: bool,
    /// Test accuracy never increases with depth.
    pub test_monotone_decreasing: bool,
    /// Train/test ratio never decreases with depth.
    pub ratio_monotone_increasing: bool,
}

pub fn gap_report(layers: &[LayerAccuracy], mlp: &TrainReport) -> Result<GapReport> {
    if layers.is_empty() {
        return Err(Error::input("gap report needs at least one layer"));
    }
    let mlp_gap = mlp.gap();
    let rows: Vec<GapRow> = layers
        .iter()
        .map(|l| {
            let gap = l.train - l.test;
            GapRow {
                layer_index: l.layer_index,
                train: l.train,
                test: l.test,
                gap,
                gap_ratio: (mlp_gap != 0.0).then(|| gap / mlp_gap),
                train_test_ratio: (l.test > 0.0).then(|| l.train / l.test),
            }
        })
        .collect();
    let ratio = |r: &GapRow| r.train_test_ratio.unwrap_or(f64::INFINITY);
    Ok(GapReport {
        hull_gap_below_mlp: rows.iter().all(|r| r.gap < mlp_gap),
        test_monotone_decreasing: rows.windows(2).all(|w| w[1].test <= w[0].test),
        ratio_monotone_increasing: rows.windows(2).all(|w| ratio(&w[1]) >= ratio(&w[0])),
        layers: rows,
        mlp_train: mlp.train_accuracy,
        mlp_test: mlp.test_accuracy,
        mlp_gap,
    })
}

/// Two rows (`train`, `test`) by one column per layer, as in a
/// per-layer accuracy table.
pub fn render_accuracy_table_csv(dataset: &str, layers: &[LayerAccuracy]) -> String {
    let mut out = String::from("dataset,split");
    for l in layers {
        out.push_str(&format!(",layer_{}", l.layer_index));
    }
    out.push('\n');
    for (split, pick) in [("train", 0), ("test", 1)] {
        out.push_str(&format!("{dataset},{split}"));
        for l in layers {
            let v = if pick == 0 { l.train } else { l.test };
            out.push_str(&format!(",{v:.4}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mlp(train: f64, test: f64) -> TrainReport {
        TrainReport {
            train_accuracy: train,
            test_accuracy: test,
            loss_curve: vec![],
            seed: 0,
        }
    }

    #[test]
    fn equal_accuracies_have_zero_gap() {
        let r = gap_report(
            &[LayerAccuracy {
                layer_index: 1,
                train: 0.9,
                test: 0.9,
            }],
            &mlp(1.0, 0.9),
        )
        .unwrap();
        assert_eq!(r.layers[0].gap, 0.0);
        assert!(r.hull_gap_below_mlp);
        assert!(gap_report(&[], &mlp(1.0, 0.9)).is_err());
    }

    #[test]
    fn four_layer_table_shape_and_flags() {
        let layers: Vec<LayerAccuracy> = (1..=4)
            .map(|i| LayerAccuracy {
                layer_index: i,
                train: 0.99 - 0.001 * i as f64,
                test: 0.98 - 0.003 * i as f64,
            })
            .collect();
        let csv = render_accuracy_table_csv("mnist", &layers);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "dataset,split,layer_1,layer_2,layer_3,layer_4");
        assert!(lines[1].starts_with("mnist,train,") && lines[2].starts_with("mnist,test,"));
        assert_eq!(lines[1].split(',').count(), 6);
        let r = gap_report(&layers, &mlp(1.0, 0.93)).unwrap();
        assert!(r.test_monotone_decreasing && r.ratio_monotone_increasing && r.hull_gap_below_mlp);
    }
}
