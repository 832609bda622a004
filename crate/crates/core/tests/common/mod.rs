#![allow(dead_code)]

use acthull::data::LabeledVectors;
use acthull::geometry::PointSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_rows(rng: &mut ChaCha8Rng, n: usize, d: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(lo..hi)).collect())
        .collect()
}

pub fn gaussian_rows(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    use rand_distr::{Distribution, StandardNormal};
    (0..n)
        .map(|_| (0..d).map(|_| StandardNormal.sample(rng)).collect())
        .collect()
}

pub fn points(rows: &[Vec<f64>]) -> PointSet {
    PointSet::from_rows(rows).unwrap()
}

pub fn labeled(rows: &[Vec<f64>], labels: Vec<usize>) -> LabeledVectors {
    LabeledVectors::new(points(rows), labels).unwrap()
}

pub fn norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Smallest `‖v − Σαᵢxᵢ‖` over the simplex grid with `steps` subdivisions.
pub fn grid_min(v: &[f64], xs: &[Vec<f64>], steps: usize) -> f64 {
    fn walk(
        v: &[f64],
        xs: &[Vec<f64>],
        counts: &mut Vec<usize>,
        left: usize,
        steps: usize,
        best: &mut f64,
    ) {
        if counts.len() + 1 == xs.len() {
            counts.push(left);
            let d: f64 = (0..v.len())
                .map(|c| {
                    let p: f64 = counts
                        .iter()
                        .zip(xs)
                        .map(|(&k, x)| k as f64 / steps as f64 * x[c])
                        .sum();
                    (v[c] - p).powi(2)
                })
                .sum();
            *best = best.min(d);
            counts.pop();
            return;
        }
        for k in 0..=left {
            counts.push(k);
            walk(v, xs, counts, left - k, steps, best);
            counts.pop();
        }
    }
    let mut best = f64::INFINITY;
    walk(
        v,
        xs,
        &mut Vec::with_capacity(xs.len()),
        steps,
        steps,
        &mut best,
    );
    best.sqrt()
}

/// Exact hull distance by enumerating faces: for each subset, the affine
/// projection from the KKT system, kept when its weights are nonnegative.
pub fn face_min(v: &[f64], xs: &[Vec<f64>]) -> f64 {
    let m = xs.len();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << m) {
        let idx: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        let k = idx.len();
        // [G 1; 1ᵀ 0] [α; λ] = [0; 1] with G over xᵢ − v
        let mut a = vec![vec![0.0; k + 2]; k + 1];
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                a[r][c] = xs[i]
                    .iter()
                    .zip(&xs[j])
                    .zip(v)
                    .map(|((p, q), v)| (p - v) * (q - v))
                    .sum();
            }
            a[r][k] = 1.0;
            a[k][r] = 1.0;
        }
        a[k][k + 1] = 1.0;
        let Some(sol) = solve(a) else { continue };
        if sol[..k].iter().any(|&w| w < -1e-12) {
            continue;
        }
        let mut p = vec![0.0; v.len()];
        for (r, &i) in idx.iter().enumerate() {
            for (pc, x) in p.iter_mut().zip(&xs[i]) {
                *pc += sol[r] * x;
            }
        }
        best = best.min(norm(&p, v));
    }
    best
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r[..n].iter())
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-11 * scale {
            return None;
        }
        a.swap(col, piv);
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col {
                let f = row[col] / pivot[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// Strictly extreme points of a planar set by brute force: a point is not
/// extreme iff it equals another point, lies on a segment between two
/// others, or in a triangle of three others.
pub fn brute_extremes_2d(rows: &[Vec<f64>]) -> Vec<usize> {
    let n = rows.len();
    let cross = |o: &[f64], a: &[f64], b: &[f64]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let on_segment = |p: &[f64], a: &[f64], b: &[f64]| {
        cross(a, b, p) == 0.0
            && p[0] >= a[0].min(b[0])
            && p[0] <= a[0].max(b[0])
            && p[1] >= a[1].min(b[1])
            && p[1] <= a[1].max(b[1])
    };
    let in_triangle = |p: &[f64], a: &[f64], b: &[f64], c: &[f64]| {
        let (d1, d2, d3) = (cross(a, b, p), cross(b, c, p), cross(c, a, p));
        let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
        let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
        !(neg && pos)
    };
    (0..n)
        .filter(|&i| {
            let p = &rows[i];
            let others: Vec<usize> = (0..n).filter(|&j| rows[j] != *p).collect();
            // duplicates: keep the lowest index only
            if (0..i).any(|j| rows[j] == *p) {
                return false;
            }
            for (a, &j) in others.iter().enumerate() {
                for (b, &k) in others.iter().enumerate().skip(a + 1) {
                    if on_segment(p, &rows[j], &rows[k]) {
                        return false;
                    }
                    for &l in &others[b + 1..] {
                        if cross(&rows[j], &rows[k], &rows[l]) != 0.0
                            && in_triangle(p, &rows[j], &rows[k], &rows[l])
                        {
                            return false;
                        }
                    }
                }
            }
            true
        })
        .collect()
}

/// k nearest neighbours by a full stable sort on (distance, index).
pub fn brute_knn(train: &LabeledVectors, q: &[f64], k: usize, exclude: Option<usize>) -> usize {
    let mut all: Vec<(f64, usize)> = (0..train.len())
        .filter(|&i| Some(i) != exclude)
        .map(|i| {
            let r = train.vectors.row(i);
            (
                r.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(),
                i,
            )
        })
        .collect();
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let mut votes = vec![0; train.n_classes()];
    for &(_, i) in &all[..k] {
        votes[train.labels[i]] += 1;
    }
    let top = *votes.iter().max().unwrap();
    votes.iter().position(|&v| v == top).unwrap()
}

/// Random orthogonal matrix from Gram-Schmidt on Gaussian columns.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    while q.len() < d {
        let mut v = gaussian_rows(rng, 1, d).remove(0);
        for u in &q {
            let p: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            for (a, b) in v.iter_mut().zip(u) {
                *a -= p * b;
            }
        }
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-6 {
            q.push(v.into_iter().map(|a| a / n).collect());
        }
    }
    q
}

pub fn transform(q: &[Vec<f64>], shift: &[f64], x: &[f64]) -> Vec<f64> {
    q.iter()
        .zip(shift)
        .map(|(row, s)| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + s)
        .collect()
}
