use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::LabeledVectors;
use crate::error::{Error, Result};
use crate::geometry::sq_dist;

pub const DEFAULT_K: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnReport {
    pub k: usize,
    /// Leave-one-out on the training set.
    pub train_accuracy: f64,
    pub test_accuracy: f64,
}

/// Majority label among the `k` nearest training rows (Euclidean, lower
/// row index first on equal distance), skipping row `exclude`. Vote ties go
/// to the lowest class.
pub fn knn_predict(
    train: &LabeledVectors,
    query: &[f64],
    k: usize,
    exclude: Option<usize>,
) -> Result<usize> {
    if query.len() != train.dim() {
        return Err(Error::Dimension {
            expected: train.dim(),
            got: query.len(),
        });
    }
    let available = train.len() - usize::from(exclude.is_some_and(|e| e < train.len()));
    if k == 0 || k > available {
        return Err(Error::input(format!(
            "k = {k} but only {available} neighbours available"
        )));
    }
    let mut near: Vec<(f64, usize)> = (0..train.len())
        .filter(|&i| Some(i) != exclude)
        .map(|i| (sq_dist(query, train.vectors.row(i)), i))
        .collect();
    let by_distance = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < near.len() {
        near.select_nth_unstable_by(k - 1, by_distance);
        near.truncate(k);
    }
    let mut votes = vec![0usize; train.n_classes()];
    for &(_, i) in &near {
        votes[train.labels[i]] += 1;
    }
    let top = *votes.iter().max().expect("k >= 1");
    Ok(votes.iter().position(|&v| v == top).expect("max exists"))
}

pub fn knn_baseline(train: &LabeledVectors, test: &LabeledVectors, k: usize) -> Result<KnnReport> {
    if train.dim() != test.dim() {
        return Err(Error::Dimension {
            expected: train.dim(),
            got: test.dim(),
        });
    }
    let loo: Vec<usize> = (0..train.len())
        .into_par_iter()
        .map(|i| knn_predict(train, train.vectors.row(i), k, Some(i)))
        .collect::<Result<_>>()?;
    let pred: Vec<usize> = (0..test.len())
        .into_par_iter()
        .map(|i| knn_predict(train, test.vectors.row(i), k, None))
        .collect::<Result<_>>()?;
    Ok(KnnReport {
        k,
        train_accuracy: crate::nn::fraction_equal(&loo, &train.labels),
        test_accuracy: crate::nn::fraction_equal(&pred, &test.labels),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::tests::blobs;
    use crate::geometry::PointSet;

    fn data(rows: &[Vec<f64>], labels: Vec<usize>) -> LabeledVectors {
        LabeledVectors::new(PointSet::from_rows(rows).unwrap(), labels).unwrap()
    }

    #[test]
    fn one_neighbour_returns_exact_match_label() {
        let d = data(&[vec![0.0], vec![1.0], vec![2.0]], vec![2, 0, 1]);
        assert_eq!(knn_predict(&d, &[1.0], 1, None).unwrap(), 0);
    }

    #[test]
    fn vote_ties_go_to_lowest_class() {
        let d = data(&[vec![-1.0], vec![1.0]], vec![1, 0]);
        assert_eq!(knn_predict(&d, &[0.0], 2, None).unwrap(), 0);
    }

    #[test]
    fn k_larger_than_pool_is_an_error() {
        let d = data(&[vec![0.0], vec![1.0]], vec![0, 1]);
        assert!(knn_predict(&d, &[0.0], 2, Some(0)).is_err());
        assert!(knn_baseline(&d, &d, 2).is_err());
        assert!(knn_predict(&d, &[0.0], 0, None).is_err());
    }

    #[test]
    fn separated_blobs() {
        let train = blobs(100, 10.0, 5).to_labeled();
        let test = blobs(50, 10.0, 6).to_labeled();
        let r = knn_baseline(&train, &test, DEFAULT_K).unwrap();
        assert_eq!((r.train_accuracy, r.test_accuracy), (1.0, 1.0));
    }
}
