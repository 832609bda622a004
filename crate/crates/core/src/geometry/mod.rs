//! Exact geometric primitives: point sets, the simplex-constrained distance
//! problem, pairwise distances and a planar hull oracle.

mod planar;
mod qp;

pub use planar::exact_extremes_2d;
pub use qp::{hull_distance, hull_distance_warm, is_inside, project_rows, HullTester};

use ndarray::{Array2, ArrayView2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Above this many points `diameter` switches from the exact O(n²) scan to
/// a two-sweep farthest-point lower bound.
pub const EXACT_DIAMETER_LIMIT: usize = 2000;

/// An immutable `n × d` matrix of finite reals, one point per row.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    data: Array2<f64>,
}

impl PointSet {
    pub fn new(data: Array2<f64>) -> Result<Self> {
        let (n, d) = data.dim();
        if n == 0 || d == 0 {
            return Err(Error::input(format!(
                "point set must be non-empty, got {n}x{d}"
            )));
        }
        if let Some((pos, _)) = data.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::input(format!(
                "non-finite entry at row {}, column {}",
                pos / d,
                pos % d
            )));
        }
        // rows must be contiguous so `row` can hand out slices
        let data = if data.is_standard_layout() {
            data
        } else {
            data.as_standard_layout().into_owned()
        };
        Ok(Self { data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let mut flat = Vec::with_capacity(n * d);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != d {
                return Err(Error::input(format!(
                    "row {i} has length {}, expected {d}",
                    r.len()
                )));
            }
            flat.extend_from_slice(r);
        }
        let data = Array2::from_shape_vec((n, d), flat).map_err(|e| Error::input(e.to_string()))?;
        Self::new(data)
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn dim(&self) -> usize {
        self.data.ncols()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.data.as_slice().expect("standard layout")[i * d..(i + 1) * d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data
            .as_slice()
            .expect("standard layout")
            .chunks_exact(self.dim())
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.data.view()
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.data
    }

    /// New point set made of the given rows, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::input("cannot select an empty subset"));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n()) {
            return Err(Error::input(format!(
                "row {bad} out of range for {} points",
                self.n()
            )));
        }
        Ok(Self {
            data: self.data.select(Axis(0), indices),
        })
    }

    pub fn centroid(&self) -> Vec<f64> {
        self.data
            .mean_axis(Axis(0))
            .expect("non-empty point set")
            .to_vec()
    }
}

/// Convex-combination weights: nonnegative and summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    pub const SUM_TOL: f64 = 1e-9;

    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::input("simplex weights must be non-empty"));
        }
        if let Some(a) = alpha.iter().find(|a| !a.is_finite() || **a < 0.0) {
            return Err(Error::input(format!("invalid simplex weight {a}")));
        }
        let sum: f64 = alpha.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::input(format!("simplex weights sum to {sum}")));
        }
        Ok(Self(alpha))
    }

    /// Clamps negatives to zero and rescales onto the simplex.
    pub(crate) fn normalized(mut alpha: Vec<f64>) -> Self {
        for a in alpha.iter_mut() {
            if a.is_nan() || *a <= 0.0 {
                *a = 0.0;
            }
        }
        let sum: f64 = alpha.iter().sum();
        if sum > 0.0 {
            alpha.iter_mut().for_each(|a| *a /= sum);
        } else {
            alpha[0] = 1.0;
        }
        Self(alpha)
    }

    pub fn indicator(len: usize, at: usize) -> Self {
        let mut alpha = vec![0.0; len];
        alpha[at] = 1.0;
        Self(alpha)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices with strictly positive weight.
    pub fn support(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.0.iter().copied().enumerate().filter(|(_, a)| *a > 0.0)
    }
}

/// Solution of `min ‖v − Σαᵢxᵢ‖₂` over the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub weights: SimplexWeights,
    /// Nearest point of the hull, `x̂ = Σαᵢxᵢ`.
    pub nearest_point: Vec<f64>,
    pub distance: f64,
    /// Certified bound on `distance − d*` (upper minus dual lower bound).
    pub solver_gap: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum QpMethod {
    /// Wolfe's minimum-norm-point active-set method, with an away-step
    /// Frank-Wolfe polish if it stalls on a degenerate corral.
    #[default]
    MinNormPoint,
    /// Away-step Frank-Wolfe only.
    AwayStepFrankWolfe,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Relative tolerance on the certified distance gap, as a fraction of
    /// the largest query-to-candidate distance.
    pub gap_tol: f64,
    /// "Distance is zero" threshold, as a fraction of the relevant diameter.
    pub zero_tol: f64,
    /// Iteration cap; `None` means `10·m + 1000` for `m` candidates.
    pub max_iters: Option<usize>,
    #[serde(default)]
    pub method: QpMethod,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            gap_tol: 1e-8,
            zero_tol: 1e-7,
            max_iters: None,
            method: QpMethod::MinNormPoint,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap_tol > 0.0 && self.gap_tol < 1.0) {
            return Err(Error::input(format!(
                "gap_tol must lie in (0, 1), got {}",
                self.gap_tol
            )));
        }
        if self.zero_tol.is_nan() || self.zero_tol <= 0.0 {
            return Err(Error::input(format!(
                "zero_tol must be positive, got {}",
                self.zero_tol
            )));
        }
        if self.max_iters == Some(0) {
            return Err(Error::input("max_iters must be positive"));
        }
        Ok(())
    }

    pub fn iteration_cap(&self, m: usize) -> usize {
        self.max_iters.unwrap_or(10 * m + 1000)
    }

    /// Absolute zero threshold for a set of the given diameter.
    pub fn zero_threshold(&self, diameter: f64) -> f64 {
        self.zero_tol * diameter
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn pairwise_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(sq_dist(a, b).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiameterEstimate {
    pub value: f64,
    /// False when the two-sweep lower bound was used.
    pub exact: bool,
}

/// Largest pairwise distance. Exact up to [`EXACT_DIAMETER_LIMIT`] points,
/// otherwise a two-sweep farthest-point lower bound (see [`diameter_estimate`]).
pub fn diameter(points: &PointSet) -> f64 {
    diameter_estimate(points).value
}

pub fn diameter_estimate(points: &PointSet) -> DiameterEstimate {
    let n = points.n();
    if n <= EXACT_DIAMETER_LIMIT {
        let best = (0..n)
            .into_par_iter()
            .map(|i| {
                let a = points.row(i);
                (i + 1..n)
                    .map(|j| sq_dist(a, points.row(j)))
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        DiameterEstimate {
            value: best.sqrt(),
            exact: true,
        }
    } else {
        let (a, _) = farthest_from(points, 0);
        let (_, d) = farthest_from(points, a);
        DiameterEstimate {
            value: d,
            exact: false,
        }
    }
}

/// Index of the point farthest from row `from` (lowest index on ties) and
/// its distance.
pub(crate) fn farthest_from(points: &PointSet, from: usize) -> (usize, f64) {
    let origin = points.row(from);
    let mut best = (from, 0.0);
    for (i, r) in points.rows().enumerate() {
        let d = sq_dist(origin, r);
        if d > best.1 {
            best = (i, d);
        }
    }
    (best.0, best.1.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn pairwise_examples() {
        assert_eq!(pairwise_distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(pairwise_distance(&[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
        let d = pairwise_distance(&[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0]).unwrap();
        assert!((d - 3f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            pairwise_distance(&[1.0], &[1.0, 2.0]),
            Err(Error::Dimension {
                expected: 1,
                got: 2
            })
        ));
    }

    #[test]
    fn diameter_examples() {
        let single = PointSet::new(array![[4.0, 2.0]]).unwrap();
        assert_eq!(diameter(&single), 0.0);
        let pair = PointSet::new(array![[0.0, 0.0], [3.0, 4.0]]).unwrap();
        assert_eq!(diameter(&pair), 5.0);
        let square = PointSet::new(array![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!((diameter(&square) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn large_diameter_is_a_lower_bound() {
        let n = EXACT_DIAMETER_LIMIT + 10;
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let t = i as f64 * 0.7;
                vec![t.cos(), t.sin() * 0.5]
            })
            .collect();
        let pts = PointSet::from_rows(&rows).unwrap();
        let est = diameter_estimate(&pts);
        assert!(!est.exact);
        assert!(est.value <= 2.0 + 1e-12 && est.value > 1.9);
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(PointSet::new(array![[0.0, f64::NAN]]).is_err());
        assert!(PointSet::new(Array2::zeros((0, 3))).is_err());
        assert!(PointSet::from_rows(&[vec![1.0, 2.0], vec![1.0]]).is_err());
    }

    #[test]
    fn simplex_weights_validate() {
        assert!(SimplexWeights::new(vec![0.5, 0.5]).is_ok());
        assert!(SimplexWeights::new(vec![0.5, 0.6]).is_err());
        assert!(SimplexWeights::new(vec![-0.1, 1.1]).is_err());
        let w = SimplexWeights::normalized(vec![2.0, -1e-18, 2.0]);
        assert_eq!(w.as_slice(), &[0.5, 0.0, 0.5]);
    }
}
