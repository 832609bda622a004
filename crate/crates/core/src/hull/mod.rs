//! ε-approximate convex hulls by greedy expansion.
//!
//! A hull is represented by a subset `E` of the input points. The builders
//! grow `E` until every input point lies within `ε` of `conv(E)`:
//!
//! 1. start from an initial selection (two far-apart points for GE, a
//!    direction-extreme or semi-NMF selection for RevisedGE) and drop
//!    members that are not extreme within it;
//! 2. keep the outside set `R = {x : d(x, E) > 0}`;
//! 3. while `max d(x, E) > ε`, add the point of `R` whose addition
//!    minimizes the largest remaining residual over `R`, then remove
//!    members of `E` that fell inside the hull of the others (ascending
//!    index order) and members of `R` that are now covered.
//!
//! "Zero" is `zero_tol · diameter` throughout, and the loop stops once the
//! residual drops to `max(ε, zero threshold)`.

mod init;

pub use init::{init_direction_extremes, init_seminmf};

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    diameter_estimate, farthest_from, project_rows, PointSet, ProjectionResult, SolverConfig,
};

pub const HULL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitMethod {
    DirectionExtremes,
    SemiNmf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    RevisedGe,
    Ge,
}

/// Which points compete in each expansion step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionDomain {
    /// Candidates and residuals range over the outside set `R`.
    #[default]
    Outside,
    /// Candidates and residuals range over every non-selected point.
    Complement,
}

/// How candidates are scored in each expansion step. Both modes select the
/// same point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scoring {
    /// Skip residuals and candidates that provably cannot change the winner.
    #[default]
    Bounded,
    /// Evaluate `d(v, E ∪ x)` for every candidate `x` and residual `v`.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuilderConfig {
    /// ε as a fraction of the dataset diameter.
    pub epsilon_rel: f64,
    pub init: InitMethod,
    /// Startup budget `k`; `None` picks `max(min(32, ⌈n/4⌉), d + 1)`, capped at `n`.
    pub init_count: Option<usize>,
    pub seminmf_iters: usize,
    /// Score only this many outside points (the farthest) per step.
    pub candidate_cap: Option<usize>,
    #[serde(default)]
    pub selection: SelectionDomain,
    #[serde(default)]
    pub scoring: Scoring,
    pub seed: u64,
    pub solver: SolverConfig,
}

impl Default for BuilderConfig {
    fn default() -> Self {
        Self {
            epsilon_rel: 0.01,
            init: InitMethod::SemiNmf,
            init_count: None,
            seminmf_iters: 100,
            candidate_cap: None,
            selection: SelectionDomain::Outside,
            scoring: Scoring::Bounded,
            seed: 0,
            solver: SolverConfig::default(),
        }
    }
}

impl BuilderConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_rel.is_finite() && self.epsilon_rel >= 0.0) {
            return Err(Error::input(format!(
                "epsilon_rel must be >= 0, got {}",
                self.epsilon_rel
            )));
        }
        if self.init_count == Some(0) {
            return Err(Error::input("init_count must be >= 1"));
        }
        if self.candidate_cap == Some(0) {
            return Err(Error::input("candidate_cap must be >= 1"));
        }
        if self.seminmf_iters == 0 {
            return Err(Error::input("seminmf_iters must be >= 1"));
        }
        self.solver.validate()
    }

    pub fn startup_size(&self, n: usize, d: usize) -> usize {
        self.init_count
            .unwrap_or_else(|| n.div_ceil(4).min(32).max(d + 1))
            .min(n)
            .max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildTelemetry {
    pub algorithm: Algorithm,
    pub init: Option<InitMethod>,
    /// Distinct points returned by the startup selection.
    pub init_size: usize,
    pub iterations: usize,
    pub qp_solve_count: usize,
    pub wall_time_secs: f64,
    pub diameter: f64,
    /// False when the diameter is the two-sweep lower bound (large inputs).
    pub diameter_exact: bool,
    pub zero_threshold: f64,
    pub epsilon_requested: f64,
    /// Largest residual over the outside set, before the loop and after each step.
    pub residual_trace: Vec<f64>,
    /// Winning min-max score of each expansion step.
    pub selection_scores: Vec<f64>,
    pub seed: u64,
}

/// A vertex subset whose hull covers every input point within `epsilon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullApprox {
    /// Ascending indices into the source point set.
    pub vertex_indices: Vec<usize>,
    /// Absolute ε the loop ran against: `max(epsilon_rel · diameter, zero threshold)`.
    pub epsilon: f64,
    /// `max_{x∈S} d(x, E)`, recomputed over every point after the loop.
    pub max_residual: f64,
    pub telemetry: BuildTelemetry,
}

#[derive(Serialize, Deserialize)]
struct HullDocument {
    version: u32,
    epsilon: f64,
    vertex_indices: Vec<usize>,
    max_residual: f64,
    telemetry: BuildTelemetry,
}

impl HullApprox {
    pub fn to_json(&self) -> Result<String> {
        let doc = HullDocument {
            version: HULL_SCHEMA_VERSION,
            epsilon: self.epsilon,
            vertex_indices: self.vertex_indices.clone(),
            max_residual: self.max_residual,
            telemetry: self.telemetry.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: HullDocument = serde_json::from_str(text)?;
        if doc.version != HULL_SCHEMA_VERSION {
            return Err(Error::input(format!(
                "unsupported hull document version {} (expected {HULL_SCHEMA_VERSION})",
                doc.version
            )));
        }
        Ok(Self {
            vertex_indices: doc.vertex_indices,
            epsilon: doc.epsilon,
            max_residual: doc.max_residual,
            telemetry: doc.telemetry,
        })
    }

    pub fn vertices(&self, points: &PointSet) -> Result<PointSet> {
        points.select(&self.vertex_indices)
    }
}

/// Outcome of one expansion step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub index: usize,
    /// Largest residual over the scored domain after adding `index`.
    pub score: f64,
    pub qp_solves: usize,
}

/// RevisedGE: semi-NMF (or direction-extreme) startup, then greedy expansion
/// with vertex and outside-set pruning.
pub fn build_revised_ge(points: &PointSet, cfg: &BuilderConfig) -> Result<HullApprox> {
    cfg.validate()?;
    let start = Instant::now();
    let k = cfg.startup_size(points.n(), points.dim());
    let initial = match cfg.init {
        InitMethod::DirectionExtremes => init_direction_extremes(points, k, cfg.seed),
        InitMethod::SemiNmf => init_seminmf(points, k, cfg.seminmf_iters, cfg.seed)?,
    };
    Builder::new(points, cfg, Algorithm::RevisedGe, Some(cfg.init)).run(initial, start)
}

/// Plain greedy expansion from the approximate-diameter pair.
///
/// Candidates and residuals always range over every non-selected point
/// (`cfg.selection` is ignored); the outside set only drives termination.
pub fn build_ge(points: &PointSet, cfg: &BuilderConfig) -> Result<HullApprox> {
    cfg.validate()?;
    if points.n() < 2 {
        return Err(Error::input("GE needs at least two points"));
    }
    let start = Instant::now();
    let cfg = BuilderConfig {
        selection: SelectionDomain::Complement,
        ..*cfg
    };
    let (a, _) = farthest_from(points, 0);
    let (b, _) = farthest_from(points, a);
    Builder::new(points, &cfg, Algorithm::Ge, None).run(vec![a, b], start)
}

/// One greedy step: the member of `outside` (or of its `candidate_cap`
/// farthest members) whose addition to `current` minimizes the largest
/// residual over `outside`. Ties go to the lowest index.
pub fn expansion_select(
    points: &PointSet,
    current: &[usize],
    outside: &[usize],
    cfg: &BuilderConfig,
) -> Result<Selection> {
    cfg.validate()?;
    if outside.is_empty() {
        return Err(Error::input("no outside points to select from"));
    }
    let b = Builder::new(points, cfg, Algorithm::RevisedGe, None);
    let mut current = current.to_vec();
    current.sort_unstable();
    current.dedup();
    let mut cache = vec![Residual::default(); points.n()];
    let mut qps = 0;
    let mut domain: Vec<usize> = outside.to_vec();
    domain.sort_unstable();
    domain.dedup();
    b.refresh(&current, &domain, &mut cache, &mut qps)?;
    let mut sel = b.select(&current, &domain, &domain, &cache)?;
    sel.qp_solves += qps;
    Ok(sel)
}

/// Drops members that lie inside the hull of the remaining ones, testing
/// in ascending index order against the already-pruned set.
pub fn prune_vertices(
    points: &PointSet,
    current: &[usize],
    cfg: &SolverConfig,
) -> Result<Vec<usize>> {
    if current.is_empty() {
        return Err(Error::input("cannot prune an empty vertex set"));
    }
    let bcfg = BuilderConfig {
        solver: *cfg,
        ..BuilderConfig::default()
    };
    let b = Builder::new(points, &bcfg, Algorithm::RevisedGe, None);
    let mut set = current.to_vec();
    set.sort_unstable();
    set.dedup();
    let mut hints = vec![Vec::new(); points.n()];
    let mut qps = 0;
    b.prune(set, &mut hints, &mut qps)
}

#[derive(Debug, Clone, Default)]
struct Residual {
    dist: f64,
    /// Support of the last projection, as `(point index, weight)`.
    hint: Vec<(usize, f64)>,
}

struct Builder<'a> {
    points: &'a PointSet,
    cfg: &'a BuilderConfig,
    algorithm: Algorithm,
    init: Option<InitMethod>,
    diameter: f64,
    diameter_exact: bool,
    zero: f64,
}

impl<'a> Builder<'a> {
    fn new(
        points: &'a PointSet,
        cfg: &'a BuilderConfig,
        algorithm: Algorithm,
        init: Option<InitMethod>,
    ) -> Self {
        let est = diameter_estimate(points);
        Self {
            points,
            cfg,
            algorithm,
            init,
            diameter: est.value,
            diameter_exact: est.exact,
            zero: cfg.solver.zero_threshold(est.value),
        }
    }

    /// `d(point, conv(set))` for a sorted `set`, warm-started from a hint
    /// expressed in point indices.
    fn distance(
        &self,
        point: usize,
        set: &[usize],
        hint: &[(usize, f64)],
    ) -> Result<ProjectionResult> {
        let rows: Vec<&[f64]> = set.iter().map(|&i| self.points.row(i)).collect();
        let local: Vec<(usize, f64)> = hint
            .iter()
            .filter_map(|&(i, w)| set.binary_search(&i).ok().map(|pos| (pos, w)))
            .collect();
        let hint = (!local.is_empty()).then_some(local.as_slice());
        project_rows(self.points.row(point), &rows, &self.cfg.solver, hint)
    }

    fn to_hint(set: &[usize], res: &ProjectionResult) -> Vec<(usize, f64)> {
        res.weights
            .support()
            .map(|(pos, w)| (set[pos], w))
            .collect()
    }

    /// Recomputes `d(v, E)` for every `v` in `domain`.
    fn refresh(
        &self,
        set: &[usize],
        domain: &[usize],
        cache: &mut [Residual],
        qps: &mut usize,
    ) -> Result<()> {
        let updates: Vec<Result<(usize, Residual)>> = domain
            .par_iter()
            .map(|&v| {
                let res = self.distance(v, set, &cache[v].hint)?;
                Ok((
                    v,
                    Residual {
                        dist: res.distance,
                        hint: Self::to_hint(set, &res),
                    },
                ))
            })
            .collect();
        *qps += domain.len();
        for u in updates {
            let (v, r) = u?;
            cache[v] = r;
        }
        Ok(())
    }

    fn prune(
        &self,
        set: Vec<usize>,
        hints: &mut [Vec<(usize, f64)>],
        qps: &mut usize,
    ) -> Result<Vec<usize>> {
        let mut kept = set.clone();
        for x in set {
            if kept.len() <= 1 {
                break;
            }
            let others: Vec<usize> = kept.iter().copied().filter(|&i| i != x).collect();
            let res = self.distance(x, &others, &hints[x])?;
            *qps += 1;
            if res.distance <= self.zero {
                kept.retain(|&i| i != x);
            } else {
                hints[x] = Self::to_hint(&others, &res);
            }
        }
        Ok(kept)
    }

    /// Min-max score of adding `x`, or `None` once it provably exceeds `bound`.
    ///
    /// Residuals are visited in decreasing cached distance; since adding a
    /// point never increases a distance, the scan stops as soon as the
    /// cached value of the next residual cannot beat the running maximum.
    fn score(
        &self,
        x: usize,
        set: &[usize],
        order: &[usize],
        cache: &[Residual],
        bound: f64,
    ) -> Result<(Option<f64>, usize)> {
        let mut with_x = set.to_vec();
        let pos = with_x.binary_search(&x).unwrap_or_else(|p| p);
        with_x.insert(pos, x);
        let bounded = self.cfg.scoring == Scoring::Bounded;
        let mut worst: f64 = 0.0;
        let mut qps = 0;
        for &v in order {
            if bounded && cache[v].dist <= worst {
                break;
            }
            if v == x {
                continue;
            }
            let res = self.distance(v, &with_x, &cache[v].hint)?;
            qps += 1;
            worst = worst.max(res.distance);
            if bounded && worst > bound {
                return Ok((None, qps));
            }
        }
        Ok((Some(worst), qps))
    }

    fn select(
        &self,
        set: &[usize],
        pool: &[usize],
        domain: &[usize],
        cache: &[Residual],
    ) -> Result<Selection> {
        let by_residual =
            |a: &usize, b: &usize| cache[*b].dist.total_cmp(&cache[*a].dist).then(a.cmp(b));
        let mut order = domain.to_vec();
        order.sort_by(by_residual);
        let mut pool = pool.to_vec();
        pool.sort_by(by_residual);
        if let Some(cap) = self.cfg.candidate_cap {
            pool.truncate(cap);
        }

        // the farthest candidate sets a fixed bound, so the pruned parallel
        // scan below is order-independent
        let first = pool[0];
        let (first_score, mut qps) = self.score(first, set, &order, cache, f64::INFINITY)?;
        let bound = first_score.expect("unbounded scores always complete");
        let scored: Vec<Result<(usize, Option<f64>, usize)>> = pool[1..]
            .par_iter()
            .map(|&x| {
                let (s, q) = self.score(x, set, &order, cache, bound)?;
                Ok((x, s, q))
            })
            .collect();

        let mut all = vec![(first, Some(bound))];
        for s in scored {
            let (x, score, q) = s?;
            qps += q;
            all.push((x, score));
        }
        let best_of = |items: &mut dyn Iterator<Item = &(usize, Option<f64>)>| {
            items
                .filter_map(|&(x, s)| s.map(|s| (x, s)))
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        };
        let mut best = best_of(&mut all.iter()).expect("first candidate always scores");
        if cache[best.0].dist <= self.zero {
            // a covered point cannot make progress; fall back to the outside set
            if let Some(alt) = best_of(&mut all.iter().filter(|(x, _)| cache[*x].dist > self.zero))
            {
                best = alt;
            }
        }
        Ok(Selection {
            index: best.0,
            score: best.1,
            qp_solves: qps,
        })
    }

    fn run(&self, initial: Vec<usize>, start: Instant) -> Result<HullApprox> {
        let n = self.points.n();
        let epsilon = (self.cfg.epsilon_rel * self.diameter).max(self.zero);
        let mut telemetry = BuildTelemetry {
            algorithm: self.algorithm,
            init: self.init,
            init_size: 0,
            iterations: 0,
            qp_solve_count: 0,
            wall_time_secs: 0.0,
            diameter: self.diameter,
            diameter_exact: self.diameter_exact,
            zero_threshold: self.zero,
            epsilon_requested: self.cfg.epsilon_rel * self.diameter,
            residual_trace: Vec::new(),
            selection_scores: Vec::new(),
            seed: self.cfg.seed,
        };
        let mut set = initial;
        set.sort_unstable();
        set.dedup();
        telemetry.init_size = set.len();

        let mut cache = vec![Residual::default(); n];
        let mut hints = vec![Vec::new(); n];
        let mut qps = 0;
        let mut state = Partial {
            set: set.clone(),
            max_residual: f64::INFINITY,
        };

        let outcome = (|| -> Result<()> {
            state.set = self.prune(std::mem::take(&mut state.set), &mut hints, &mut qps)?;
            let mut outside: Vec<usize> = (0..n)
                .filter(|i| state.set.binary_search(i).is_err())
                .collect();
            self.refresh(&state.set, &outside, &mut cache, &mut qps)?;
            outside.retain(|&v| cache[v].dist > self.zero);
            state.max_residual = max_over(&outside, &cache);
            telemetry.residual_trace.push(state.max_residual);

            while state.max_residual > epsilon && !outside.is_empty() && telemetry.iterations < n {
                let sel = match self.cfg.selection {
                    SelectionDomain::Outside => {
                        self.select(&state.set, &outside, &outside, &cache)?
                    }
                    SelectionDomain::Complement => {
                        let rest: Vec<usize> = (0..n)
                            .filter(|i| state.set.binary_search(i).is_err())
                            .collect();
                        self.select(&state.set, &rest, &rest, &cache)?
                    }
                };
                qps += sel.qp_solves;
                telemetry.selection_scores.push(sel.score);

                let pos = state.set.binary_search(&sel.index).unwrap_or_else(|p| p);
                state.set.insert(pos, sel.index);
                state.set = self.prune(std::mem::take(&mut state.set), &mut hints, &mut qps)?;

                cache[sel.index] = Residual::default();
                outside.retain(|v| state.set.binary_search(v).is_err());
                self.refresh(&state.set, &outside, &mut cache, &mut qps)?;
                outside.retain(|&v| cache[v].dist > self.zero);
                state.max_residual = max_over(&outside, &cache);
                telemetry.residual_trace.push(state.max_residual);
                telemetry.iterations += 1;
            }

            // post-hoc residual over every point, including ones dropped
            // from the outside set earlier
            let rest: Vec<usize> = (0..n)
                .filter(|i| state.set.binary_search(i).is_err())
                .collect();
            self.refresh(&state.set, &rest, &mut cache, &mut qps)?;
            state.max_residual = max_over(&rest, &cache);
            Ok(())
        })();

        telemetry.qp_solve_count = qps;
        telemetry.wall_time_secs = start.elapsed().as_secs_f64();
        let hull = HullApprox {
            vertex_indices: state.set,
            epsilon,
            max_residual: state.max_residual,
            telemetry,
        };
        match outcome {
            Ok(()) => Ok(hull),
            Err(e) => Err(Error::BuildAborted {
                partial: Box::new(hull),
                source: Box::new(e),
            }),
        }
    }
}

struct Partial {
    set: Vec<usize>,
    max_residual: f64,
}

fn max_over(domain: &[usize], cache: &[Residual]) -> f64 {
    domain.iter().map(|&v| cache[v].dist).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::exact_extremes_2d;
    use ndarray::array;

    fn exact_cfg() -> BuilderConfig {
        BuilderConfig {
            epsilon_rel: 1e-9,
            ..BuilderConfig::default()
        }
    }

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
    fn square_with_center_gives_corners() {
        let pts = square_center();
        for init in [InitMethod::SemiNmf, InitMethod::DirectionExtremes] {
            let cfg = BuilderConfig {
                init,
                ..exact_cfg()
            };
            let hull = build_revised_ge(&pts, &cfg).unwrap();
            assert_eq!(hull.vertex_indices, vec![0, 1, 2, 3]);
            assert!(hull.max_residual <= hull.epsilon);
        }
        let hull = build_ge(&pts, &exact_cfg()).unwrap();
        assert_eq!(hull.vertex_indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn collinear_points_reduce_to_endpoints() {
        let pts = PointSet::new(array![[1.0, 1.0], [0.0, 0.0], [2.0, 2.0]]).unwrap();
        assert_eq!(
            build_revised_ge(&pts, &exact_cfg()).unwrap().vertex_indices,
            vec![1, 2]
        );
        assert_eq!(
            build_ge(&pts, &exact_cfg()).unwrap().vertex_indices,
            vec![1, 2]
        );
    }

    #[test]
    fn ge_edge_cases() {
        let two = PointSet::new(array![[0.0, 1.0], [3.0, 1.0]]).unwrap();
        assert_eq!(
            build_ge(&two, &exact_cfg()).unwrap().vertex_indices,
            vec![0, 1]
        );
        let one = PointSet::new(array![[0.0, 1.0]]).unwrap();
        assert!(build_ge(&one, &exact_cfg()).is_err());
        assert_eq!(
            build_revised_ge(&one, &exact_cfg()).unwrap().vertex_indices,
            vec![0]
        );
    }

    #[test]
    fn selection_single_candidate() {
        let pts = square_center();
        let sel = expansion_select(&pts, &[0, 1], &[3], &exact_cfg()).unwrap();
        assert_eq!(sel.index, 3);
    }

    #[test]
    fn selection_on_segment_prefers_far_end() {
        let pts = PointSet::new(array![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).unwrap();
        let sel = expansion_select(&pts, &[0], &[1, 2], &exact_cfg()).unwrap();
        assert_eq!(sel.index, 2);
        assert!(sel.score.abs() < 1e-12);
    }

    #[test]
    fn selection_matches_exhaustive_minmax() {
        let pts = square_center();
        let current = [0, 1];
        let outside = [2, 3];
        let solver = SolverConfig::default();
        // brute force: every candidate, every residual
        let mut best = (usize::MAX, f64::INFINITY);
        for &x in &outside {
            let mut with_x = current.to_vec();
            with_x.push(x);
            let hull = pts.select(&with_x).unwrap();
            let worst = outside
                .iter()
                .map(|&v| {
                    crate::geometry::hull_distance(pts.row(v), &hull, &solver)
                        .unwrap()
                        .distance
                })
                .fold(0.0, f64::max);
            if worst < best.1 - 1e-12 {
                best = (x, worst);
            }
        }
        let sel = expansion_select(&pts, &current, &outside, &exact_cfg()).unwrap();
        assert_eq!(sel.index, best.0);
        assert!((sel.score - best.1).abs() < 1e-9);
    }

    #[test]
    fn prune_examples() {
        let pts = square_center();
        let cfg = SolverConfig::default();
        assert_eq!(
            prune_vertices(&pts, &[0, 1, 2, 3, 4], &cfg).unwrap(),
            vec![0, 1, 2, 3]
        );
        assert_eq!(
            prune_vertices(&pts, &[0, 1, 2, 3], &cfg).unwrap(),
            vec![0, 1, 2, 3]
        );
        let line = PointSet::new(array![
            [0.0, 0.0],
            [1.0, 0.5],
            [2.0, 1.0],
            [3.0, 1.5],
            [4.0, 2.0]
        ])
        .unwrap();
        assert_eq!(
            prune_vertices(&line, &[0, 1, 2, 3, 4], &cfg).unwrap(),
            vec![0, 4]
        );
    }

    #[test]
    fn json_document_round_trips() {
        let hull = build_revised_ge(&square_center(), &exact_cfg()).unwrap();
        let text = hull.to_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["version"], 1);
        assert!(value["telemetry"]["qp_solve_count"].as_u64().unwrap() > 0);
        assert_eq!(HullApprox::from_json(&text).unwrap(), hull);
        let bad = text.replacen("\"version\": 1", "\"version\": 7", 1);
        assert!(HullApprox::from_json(&bad).is_err());
    }

    #[test]
    fn complement_domain_also_recovers_exact_hull() {
        let rows: Vec<Vec<f64>> = (0..60)
            .map(|i| {
                let a = ((i as f64) * 12.9898).sin() * 43758.5453;
                let b = ((i as f64) * 78.233).sin() * 12345.6789;
                vec![a.fract(), b.fract()]
            })
            .collect();
        let pts = PointSet::from_rows(&rows).unwrap();
        let cfg = BuilderConfig {
            selection: SelectionDomain::Complement,
            ..exact_cfg()
        };
        let hull = build_revised_ge(&pts, &cfg).unwrap();
        assert_eq!(hull.vertex_indices, exact_extremes_2d(&pts).unwrap());
    }

    #[test]
    fn residual_trace_is_monotone() {
        let rows: Vec<Vec<f64>> = (0..80)
            .map(|i| {
                let t = i as f64;
                vec![
                    (t * 0.37).sin() * (1.0 + (t * 0.11).cos()),
                    (t * 0.53).cos(),
                    (t * 0.29).sin(),
                ]
            })
            .collect();
        let pts = PointSet::from_rows(&rows).unwrap();
        let hull = build_ge(&pts, &BuilderConfig::default()).unwrap();
        let tol = 1e-9 * hull.telemetry.diameter;
        for w in hull.telemetry.residual_trace.windows(2) {
            assert!(w[1] <= w[0] + tol, "{:?}", hull.telemetry.residual_trace);
        }
        assert!(hull.max_residual <= hull.epsilon + hull.telemetry.zero_threshold);
    }
}
