//! Distance from a point to the convex hull of a finite set.
//!
//! Solves `min ‖v − Σαᵢxᵢ‖₂` subject to `α ≥ 0, Σαᵢ = 1` in the translated,
//! rescaled frame `pᵢ = (xᵢ − v) / s` with `s = maxᵢ‖xᵢ − v‖`, where the
//! problem becomes the minimum-norm point of `conv{pᵢ}`. Per-iteration cost
//! is one pass over the candidates plus a solve on the active corral, which
//! never exceeds `d + 1` points.
//!
//! Every result carries a certificate. With `x` the current iterate,
//! `‖x‖` bounds the optimum from above, and since every `pᵢ` lies in the
//! halfspace `⟨x, p⟩ ≥ minᵢ⟨x, pᵢ⟩`, the value `max(0, minᵢ⟨x, pᵢ⟩ / ‖x‖)`
//! bounds it from below. `solver_gap` is the difference, in original units.

use super::{dot, sq_dist, PointSet, ProjectionResult, QpMethod, SimplexWeights, SolverConfig};
use crate::error::{Error, Result};

/// Barycentric weights at or below this count as zero inside a corral.
const POS_TOL: f64 = 1e-12;
/// Relative pivot floor for the corral Cholesky factorization.
const PIVOT_TOL: f64 = 1e-13;

pub fn hull_distance(
    v: &[f64],
    candidates: &PointSet,
    cfg: &SolverConfig,
) -> Result<ProjectionResult> {
    let rows: Vec<&[f64]> = candidates.rows().collect();
    project_rows(v, &rows, cfg, None)
}

/// As [`hull_distance`], starting from a previous solution. The result
/// contract does not depend on the hint.
pub fn hull_distance_warm(
    v: &[f64],
    candidates: &PointSet,
    cfg: &SolverConfig,
    hint: &SimplexWeights,
) -> Result<ProjectionResult> {
    if hint.len() != candidates.n() {
        return Err(Error::input(format!(
            "warm start has {} weights for {} candidates",
            hint.len(),
            candidates.n()
        )));
    }
    let rows: Vec<&[f64]> = candidates.rows().collect();
    let sparse: Vec<(usize, f64)> = hint.support().collect();
    project_rows(v, &rows, cfg, Some(&sparse))
}

/// `true` iff the hull distance is at most `zero_tol · diameter(candidates ∪ {v})`.
pub fn is_inside(v: &[f64], candidates: &PointSet, cfg: &SolverConfig) -> Result<bool> {
    HullTester::new(candidates, *cfg).is_inside(v)
}

/// Repeated membership queries against one candidate set, with the
/// candidate diameter computed once.
#[derive(Debug, Clone)]
pub struct HullTester<'a> {
    rows: Vec<&'a [f64]>,
    diameter: f64,
    cfg: SolverConfig,
}

impl<'a> HullTester<'a> {
    pub fn new(candidates: &'a PointSet, cfg: SolverConfig) -> Self {
        Self {
            rows: candidates.rows().collect(),
            diameter: super::diameter(candidates),
            cfg,
        }
    }

    pub fn candidate_diameter(&self) -> f64 {
        self.diameter
    }

    pub fn distance(&self, v: &[f64]) -> Result<ProjectionResult> {
        project_rows(v, &self.rows, &self.cfg, None)
    }

    /// Zero threshold for query `v`: `zero_tol` times the diameter of the
    /// candidates together with `v`.
    pub fn threshold(&self, v: &[f64]) -> f64 {
        let reach = self
            .rows
            .iter()
            .map(|r| sq_dist(v, r))
            .fold(0.0, f64::max)
            .sqrt();
        self.cfg.zero_threshold(self.diameter.max(reach))
    }

    pub fn is_inside(&self, v: &[f64]) -> Result<bool> {
        let res = self.distance(v)?;
        Ok(res.distance <= self.threshold(v))
    }
}

/// Core entry point over borrowed rows. `hint` is a sparse warm start of
/// `(row position, weight)` pairs.
pub fn project_rows(
    v: &[f64],
    rows: &[&[f64]],
    cfg: &SolverConfig,
    hint: Option<&[(usize, f64)]>,
) -> Result<ProjectionResult> {
    cfg.validate()?;
    if rows.is_empty() {
        return Err(Error::input("candidate set is empty"));
    }
    let d = v.len();
    for r in rows {
        if r.len() != d {
            return Err(Error::Dimension {
                expected: r.len(),
                got: d,
            });
        }
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::input("query point has non-finite entries"));
    }

    let m = rows.len();
    let scale = rows
        .iter()
        .map(|r| sq_dist(r, v))
        .fold(0.0, f64::max)
        .sqrt();
    if !scale.is_finite() {
        return Err(Error::input("candidate set has non-finite entries"));
    }
    if m == 1 || scale == 0.0 {
        // every candidate coincides with v, or there is only one
        let alpha = SimplexWeights::indicator(m, 0);
        return Ok(finish(v, rows, alpha, 0.0, 0));
    }

    let mut p = Vec::with_capacity(m * d);
    for r in rows {
        p.extend(r.iter().zip(v).map(|(x, c)| (x - c) / scale));
    }
    let problem = Problem { p, m, d };
    let cap = cfg.iteration_cap(m);

    let outcome = match cfg.method {
        QpMethod::MinNormPoint => {
            let mut mnp = MinNorm::start(&problem, hint);
            let mut iters = 0;
            let state = mnp.run(&problem, cfg.gap_tol, cap, &mut iters);
            match state {
                MnpState::Converged(lb) => Outcome {
                    alpha: mnp.dense_weights(m),
                    lower_bound: lb,
                    converged: true,
                    iterations: iters,
                },
                MnpState::Stalled | MnpState::Exhausted => {
                    let alpha = mnp.dense_weights(m);
                    away_step_fw(
                        &problem,
                        alpha,
                        cfg.gap_tol,
                        cap.saturating_sub(iters),
                        iters,
                    )
                }
            }
        }
        QpMethod::AwayStepFrankWolfe => {
            let start = cold_start_index(&problem);
            let alpha = SimplexWeights::indicator(m, start).0;
            let alpha = match hint {
                Some(h) => warm_dense(h, m).unwrap_or(alpha),
                None => alpha,
            };
            away_step_fw(&problem, alpha, cfg.gap_tol, cap, 0)
        }
    };

    let alpha = SimplexWeights::normalized(outcome.alpha);
    let res = finish(
        v,
        rows,
        alpha,
        outcome.lower_bound * scale,
        outcome.iterations,
    );
    if outcome.converged || res.solver_gap <= cfg.gap_tol * scale {
        Ok(res)
    } else {
        Err(Error::Convergence {
            iterations: res.iterations,
            gap: res.solver_gap,
            best: Box::new(res),
        })
    }
}

struct Problem {
    /// Translated, rescaled candidates, row-major `m × d`.
    p: Vec<f64>,
    m: usize,
    d: usize,
}

impl Problem {
    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        &self.p[i * self.d..(i + 1) * self.d]
    }

    /// `argminᵢ ⟨x, pᵢ⟩` (lowest index on ties) and the minimum.
    fn min_inner(&self, x: &[f64]) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for i in 0..self.m {
            let g = dot(x, self.row(i));
            if g < best.1 {
                best = (i, g);
            }
        }
        best
    }

    fn combine(&self, support: impl Iterator<Item = (usize, f64)>) -> Vec<f64> {
        let mut x = vec![0.0; self.d];
        for (i, w) in support {
            for (xk, pk) in x.iter_mut().zip(self.row(i)) {
                *xk += w * pk;
            }
        }
        x
    }
}

/// Upper-minus-lower bound on the distance for iterate `x`, plus the lower bound.
fn certificate(x: &[f64], min_g: f64) -> (f64, f64) {
    let ub = dot(x, x).sqrt();
    let lb = if ub > 0.0 { (min_g / ub).max(0.0) } else { 0.0 };
    ((ub - lb).max(0.0), lb)
}

fn cold_start_index(problem: &Problem) -> usize {
    let mut best = (0, f64::INFINITY);
    for i in 0..problem.m {
        let r = problem.row(i);
        let n = dot(r, r);
        if n < best.1 {
            best = (i, n);
        }
    }
    best.0
}

fn warm_dense(hint: &[(usize, f64)], m: usize) -> Option<Vec<f64>> {
    let mut alpha = vec![0.0; m];
    let mut total = 0.0;
    for &(i, w) in hint {
        if i < m && w > 0.0 && w.is_finite() {
            alpha[i] += w;
            total += w;
        }
    }
    if total <= 0.0 {
        return None;
    }
    alpha.iter_mut().for_each(|a| *a /= total);
    Some(alpha)
}

fn finish(
    v: &[f64],
    rows: &[&[f64]],
    alpha: SimplexWeights,
    lower_bound: f64,
    iterations: usize,
) -> ProjectionResult {
    let mut nearest = vec![0.0; v.len()];
    for (i, w) in alpha.support() {
        for (x, r) in nearest.iter_mut().zip(rows[i]) {
            *x += w * r;
        }
    }
    let distance = sq_dist(v, &nearest).sqrt();
    ProjectionResult {
        weights: alpha,
        nearest_point: nearest,
        distance,
        solver_gap: (distance - lower_bound).max(0.0),
        iterations,
    }
}

struct Outcome {
    alpha: Vec<f64>,
    lower_bound: f64,
    converged: bool,
    iterations: usize,
}

enum MnpState {
    /// Certified; carries the normalized lower bound.
    Converged(f64),
    /// Degenerate corral or cycling; hand over to Frank-Wolfe.
    Stalled,
    Exhausted,
}

/// Wolfe's minimum-norm-point method. The corral is kept affinely
/// independent; `gram` holds `⟨pₐ, p_b⟩ + 1` over the corral so that the
/// affine minimizer is `y / Σy` with `gram · y = 1`.
struct MinNorm {
    corral: Vec<usize>,
    lambda: Vec<f64>,
    gram: Vec<Vec<f64>>,
    x: Vec<f64>,
}

impl MinNorm {
    fn start(problem: &Problem, hint: Option<&[(usize, f64)]>) -> Self {
        if let Some(h) = hint {
            if let Some(warm) = Self::warm(problem, h) {
                return warm;
            }
        }
        let i = cold_start_index(problem);
        let mut s = Self {
            corral: Vec::new(),
            lambda: Vec::new(),
            gram: Vec::new(),
            x: problem.row(i).to_vec(),
        };
        s.push(problem, i, 1.0);
        s
    }

    fn warm(problem: &Problem, hint: &[(usize, f64)]) -> Option<Self> {
        let mut support: Vec<(usize, f64)> = hint
            .iter()
            .copied()
            .filter(|&(i, w)| i < problem.m && w > POS_TOL && w.is_finite())
            .collect();
        if support.is_empty() {
            return None;
        }
        // a Carathéodory support has at most d + 1 points
        support.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        support.truncate(problem.d + 1);
        support.sort_by_key(|&(i, _)| i);
        support.dedup_by_key(|(i, _)| *i);
        let total: f64 = support.iter().map(|(_, w)| w).sum();

        let mut s = Self {
            corral: Vec::new(),
            lambda: Vec::new(),
            gram: Vec::new(),
            x: Vec::new(),
        };
        for &(i, w) in &support {
            s.push(problem, i, w / total);
        }
        s.x = problem.combine(s.corral.iter().copied().zip(s.lambda.iter().copied()));
        let mut iters = 0;
        match s.minor_cycle(problem, None, &mut iters) {
            Ok(()) => Some(s),
            Err(()) => None,
        }
    }

    fn push(&mut self, problem: &Problem, i: usize, weight: f64) {
        let pi = problem.row(i);
        let mut row: Vec<f64> = self
            .corral
            .iter()
            .map(|&j| dot(pi, problem.row(j)) + 1.0)
            .collect();
        for (g, &val) in self.gram.iter_mut().zip(&row) {
            g.push(val);
        }
        row.push(dot(pi, pi) + 1.0);
        self.gram.push(row);
        self.corral.push(i);
        self.lambda.push(weight);
    }

    fn remove(&mut self, pos: usize) {
        self.corral.remove(pos);
        self.lambda.remove(pos);
        self.gram.remove(pos);
        for g in self.gram.iter_mut() {
            g.remove(pos);
        }
    }

    /// Affine minimizer of the corral as barycentric weights, or `Err` if
    /// the corral is numerically affinely dependent.
    fn affine_minimizer(&self) -> std::result::Result<Vec<f64>, ()> {
        let k = self.corral.len();
        let ones = vec![1.0; k];
        let y = cholesky_solve(&self.gram, &ones).ok_or(())?;
        let total: f64 = y.iter().sum();
        if !(total.is_finite() && total != 0.0) {
            return Err(());
        }
        Ok(y.into_iter().map(|v| v / total).collect())
    }

    /// Moves `x` to the minimum-norm point of the corral's convex hull,
    /// dropping points that leave the relative interior. `added` is the
    /// candidate just brought in, if any.
    fn minor_cycle(
        &mut self,
        problem: &Problem,
        added: Option<usize>,
        iters: &mut usize,
    ) -> std::result::Result<(), ()> {
        loop {
            *iters += 1;
            if self.corral.len() == 1 {
                self.lambda[0] = 1.0;
                break;
            }
            let mu = self.affine_minimizer()?;
            if mu.iter().all(|&u| u > POS_TOL) {
                self.lambda = mu;
                break;
            }
            let mut theta = f64::INFINITY;
            let mut leave = 0;
            for (pos, (&l, &u)) in self.lambda.iter().zip(&mu).enumerate() {
                if u <= POS_TOL {
                    let t = if l - u > 0.0 { l / (l - u) } else { 0.0 };
                    if t < theta {
                        theta = t;
                        leave = pos;
                    }
                }
            }
            let theta = theta.clamp(0.0, 1.0);
            for (l, u) in self.lambda.iter_mut().zip(&mu) {
                *l = (1.0 - theta) * *l + theta * u;
            }
            self.lambda[leave] = 0.0;
            if Some(self.corral[leave]) == added {
                // the entering point left immediately: no descent possible
                return Err(());
            }
            let mut pos = 0;
            while pos < self.corral.len() {
                if self.lambda[pos] <= POS_TOL {
                    self.remove(pos);
                } else {
                    pos += 1;
                }
            }
            let total: f64 = self.lambda.iter().sum();
            self.lambda.iter_mut().for_each(|l| *l /= total);
        }
        self.x = problem.combine(self.corral.iter().copied().zip(self.lambda.iter().copied()));
        Ok(())
    }

    fn run(&mut self, problem: &Problem, tol: f64, cap: usize, iters: &mut usize) -> MnpState {
        loop {
            let (j, min_g) = problem.min_inner(&self.x);
            let (gap, lb) = certificate(&self.x, min_g);
            if gap <= tol {
                return MnpState::Converged(lb);
            }
            if *iters >= cap {
                return MnpState::Exhausted;
            }
            if self.corral.contains(&j) || self.corral.len() > problem.d {
                return MnpState::Stalled;
            }
            self.push(problem, j, 0.0);
            if self.minor_cycle(problem, Some(j), iters).is_err() {
                // restore a consistent iterate before handing over
                if let Some(pos) = self.corral.iter().position(|&c| c == j) {
                    if self.lambda[pos] <= POS_TOL {
                        self.remove(pos);
                    }
                }
                let total: f64 = self.lambda.iter().sum();
                if total > 0.0 {
                    self.lambda.iter_mut().for_each(|l| *l /= total);
                }
                self.x =
                    problem.combine(self.corral.iter().copied().zip(self.lambda.iter().copied()));
                return MnpState::Stalled;
            }
        }
    }

    fn dense_weights(&self, m: usize) -> Vec<f64> {
        let mut alpha = vec![0.0; m];
        for (&i, &l) in self.corral.iter().zip(&self.lambda) {
            alpha[i] += l.max(0.0);
        }
        if alpha.iter().all(|&a| a == 0.0) {
            alpha[self.corral.first().copied().unwrap_or(0)] = 1.0;
        }
        alpha
    }
}

/// Solves `a · x = b` for symmetric positive definite `a`.
fn cholesky_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let k = b.len();
    let max_diag = (0..k).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    let mut l = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let mut s = a[i][j];
            for t in 0..j {
                s -= l[i * k + t] * l[j * k + t];
            }
            if i == j {
                if s.is_nan() || s <= PIVOT_TOL * max_diag {
                    return None;
                }
                l[i * k + i] = s.sqrt();
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    }
    let mut y = vec![0.0; k];
    for i in 0..k {
        let mut s = b[i];
        for t in 0..i {
            s -= l[i * k + t] * y[t];
        }
        y[i] = s / l[i * k + i];
    }
    for i in (0..k).rev() {
        let mut s = y[i];
        for t in i + 1..k {
            s -= l[t * k + i] * y[t];
        }
        y[i] = s / l[i * k + i];
    }
    Some(y)
}

/// Away-step Frank-Wolfe with exact line search from a dense start.
fn away_step_fw(
    problem: &Problem,
    mut alpha: Vec<f64>,
    tol: f64,
    budget: usize,
    done: usize,
) -> Outcome {
    let mut x = problem.combine(alpha.iter().copied().enumerate().filter(|(_, a)| *a > 0.0));
    let mut g = vec![0.0; problem.m];
    let mut lower_bound = 0.0;
    let mut iterations = done;
    let mut converged = false;

    for it in 0..=budget {
        if it > 0 && it % 64 == 0 {
            // limit drift of the incrementally updated iterate
            x = problem.combine(alpha.iter().copied().enumerate().filter(|(_, a)| *a > 0.0));
        }
        let mut fw = (0, f64::INFINITY);
        let mut away = (usize::MAX, f64::NEG_INFINITY);
        for (i, gi) in g.iter_mut().enumerate() {
            *gi = dot(&x, problem.row(i));
            if *gi < fw.1 {
                fw = (i, *gi);
            }
            if alpha[i] > 0.0 && *gi > away.1 {
                away = (i, *gi);
            }
        }
        let (gap, lb) = certificate(&x, fw.1);
        lower_bound = lb;
        if gap <= tol {
            converged = true;
            break;
        }
        if it == budget {
            break;
        }
        iterations += 1;

        let xx = dot(&x, &x);
        let fw_gap = xx - fw.1;
        let away_gap = away.1 - xx;
        let (dir, gamma_max, is_fw) = if fw_gap >= away_gap || away.0 == usize::MAX {
            let dir: Vec<f64> = problem
                .row(fw.0)
                .iter()
                .zip(&x)
                .map(|(p, xi)| p - xi)
                .collect();
            (dir, 1.0, true)
        } else {
            let a = alpha[away.0];
            let dir: Vec<f64> = x
                .iter()
                .zip(problem.row(away.0))
                .map(|(xi, p)| xi - p)
                .collect();
            let gmax = if a < 1.0 {
                a / (1.0 - a)
            } else {
                f64::INFINITY
            };
            (dir, gmax, false)
        };
        let dd = dot(&dir, &dir);
        if dd <= 0.0 {
            break;
        }
        let gamma = (-dot(&x, &dir) / dd).clamp(0.0, gamma_max);
        if gamma == 0.0 {
            break;
        }
        if is_fw {
            alpha.iter_mut().for_each(|a| *a *= 1.0 - gamma);
            alpha[fw.0] += gamma;
        } else {
            alpha.iter_mut().for_each(|a| *a *= 1.0 + gamma);
            alpha[away.0] -= gamma;
            if gamma >= gamma_max {
                alpha[away.0] = 0.0;
            }
        }
        for (xi, di) in x.iter_mut().zip(&dir) {
            *xi += gamma * di;
        }
    }
    Outcome {
        alpha,
        lower_bound,
        converged,
        iterations,
    }
}
