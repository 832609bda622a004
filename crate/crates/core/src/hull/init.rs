//! Startup vertex sets for the greedy builders.

use ndarray::{Array2, Axis, Zip};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{dot, PointSet};
use crate::rng::{self, streams};

/// Maximizers of `k` seeded random linear functionals.
///
/// Each returned index maximizes `⟨u, x⟩` for some direction `u` (lowest
/// index on ties), so it is a vertex of the exact hull.
pub fn init_direction_extremes(points: &PointSet, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = rng::stream(seed, streams::DIRECTIONS);
    let d = points.dim();
    let mut picked: Vec<usize> = (0..k.max(1))
        .map(|_| {
            let u: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
            let mut best = (0, f64::NEG_INFINITY);
            for (i, r) in points.rows().enumerate() {
                let s = dot(&u, r);
                if s > best.1 {
                    best = (i, s);
                }
            }
            best.0
        })
        .collect();
    picked.sort_unstable();
    picked.dedup();
    picked
}

/// Simplified kernelized hull approximation via convex Semi-NMF.
///
/// Factorizes the data as `X ≈ W Gᵀ X` with nonnegative `W, G` (`n × k`)
/// using the linear kernel and the classic multiplicative updates. The
/// data is first translated so every coordinate is nonnegative, which makes
/// the kernel entrywise nonnegative and lets it act through `X` without
/// forming the `n × n` Gram matrix when `d < n`. Column `j` of `W` weights
/// the points forming archetype `j`; the heaviest point of each column is
/// returned. The selection is not guaranteed to consist of hull vertices.
pub fn init_seminmf(points: &PointSet, k: usize, iters: usize, seed: u64) -> Result<Vec<usize>> {
    if k == 0 || iters == 0 {
        return Err(Error::input("semi-NMF needs k >= 1 and iters >= 1"));
    }
    let n = points.n();
    if n == 1 {
        return Ok(vec![0]);
    }
    let k = k.min(n);
    let x = points.view();
    let lo = x.fold_axis(Axis(0), f64::INFINITY, |&m, &v| m.min(v));
    let mut shifted = &x - &lo.insert_axis(Axis(0));
    let top = shifted.iter().fold(0.0f64, |m, &v| m.max(v));
    if top == 0.0 {
        return Ok(vec![0]);
    }
    shifted.mapv_inplace(|v| v / top);
    let kernel = Kernel::new(shifted);

    let mut rng = rng::stream(seed, streams::SEMINMF);
    let mut w = Array2::from_shape_fn((n, k), |_| 0.1 + rng.random::<f64>());
    let mut g = Array2::from_shape_fn((n, k), |_| 0.1 + rng.random::<f64>());
    for mut col in w.columns_mut() {
        let s = col.sum();
        col.mapv_inplace(|v| v / s);
    }

    const TINY: f64 = 1e-300;
    for it in 0..iters {
        let kw = kernel.apply(&w);
        let wt_kw = w.t().dot(&kw);
        let den = g.dot(&wt_kw);
        Zip::from(&mut g)
            .and(&kw)
            .and(&den)
            .for_each(|gv, &a, &b| *gv *= (a / (b + TINY)).sqrt());

        let kg = kernel.apply(&g);
        let den = kw.dot(&g.t().dot(&g));
        Zip::from(&mut w)
            .and(&kg)
            .and(&den)
            .for_each(|wv, &a, &b| *wv *= (a / (b + TINY)).sqrt());

        if w.iter().chain(g.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!(
                "semi-NMF diverged at iteration {it}"
            )));
        }
    }

    let mut picked: Vec<usize> = w
        .columns()
        .into_iter()
        .map(|col| {
            let mut best = (0, f64::NEG_INFINITY);
            for (i, &v) in col.iter().enumerate() {
                if v > best.1 {
                    best = (i, v);
                }
            }
            best.0
        })
        .collect();
    picked.sort_unstable();
    picked.dedup();
    Ok(picked)
}

/// The linear kernel `X Xᵀ`, stored whichever way is cheaper to apply.
enum Kernel {
    Factored(Array2<f64>),
    Dense(Array2<f64>),
}

impl Kernel {
    fn new(x: Array2<f64>) -> Self {
        if x.ncols() < x.nrows() {
            Kernel::Factored(x)
        } else {
            Kernel::Dense(x.dot(&x.t()))
        }
    }

    fn apply(&self, m: &Array2<f64>) -> Array2<f64> {
        match self {
            Kernel::Factored(x) => x.dot(&x.t().dot(m)),
            Kernel::Dense(k) => k.dot(m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::exact_extremes_2d;
    use ndarray::array;

    fn square_center() -> PointSet {
        PointSet::new(array![
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 1.0],
            [0.0, 1.0],
            [0.5, 0.5]
        ])
        .unwrap()
    }

    #[test]
    fn directions_pick_only_corners() {
        let picked = init_direction_extremes(&square_center(), 64, 3);
        assert!(!picked.is_empty());
        assert!(picked.iter().all(|&i| i < 4), "{picked:?}");
    }

    #[test]
    fn directions_on_single_point() {
        let one = PointSet::new(array![[2.0, -1.0]]).unwrap();
        assert_eq!(init_direction_extremes(&one, 10, 0), vec![0]);
    }

    #[test]
    fn directions_on_circle_are_extreme() {
        let rows: Vec<Vec<f64>> = (0..200)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 200.0;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let pts = PointSet::from_rows(&rows).unwrap();
        let picked = init_direction_extremes(&pts, 64, 11);
        assert!(picked.len() >= 16, "only {} distinct", picked.len());
        let exact = exact_extremes_2d(&pts).unwrap();
        assert!(picked.iter().all(|i| exact.binary_search(i).is_ok()));
    }

    #[test]
    fn seminmf_cardinality_and_determinism() {
        let pts = square_center();
        assert_eq!(init_seminmf(&pts, 1, 50, 9).unwrap().len(), 1);
        let a = init_seminmf(&pts, 3, 50, 9).unwrap();
        let b = init_seminmf(&pts, 3, 50, 9).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_empty() && a.len() <= 3);
    }

    #[test]
    fn seminmf_rejects_zero_budget() {
        assert!(init_seminmf(&square_center(), 0, 10, 0).is_err());
        assert!(init_seminmf(&square_center(), 2, 0, 0).is_err());
    }
}
