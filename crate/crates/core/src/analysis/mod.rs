//! Geometric audits of activation spaces: extremity, cross-class inclusion,
//! inner-class distance histograms, the inter-class mean-distance matrix
//! and per-class radius statistics.

mod distances;

pub use distances::{
    class_radius_stats, inner_class_histogram, inner_inter_correlation, inter_class_matrix,
    layer_mean_inner_distance, CorrelationReport, DistanceHistogram, HistogramConfig,
    InterClassMatrix, RadiusStats, DEFAULT_BINS, DEFAULT_PAIR_CAP,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{diameter, project_rows, HullTester, PointSet, SolverConfig};
use crate::nn::ActivationSet;

/// The vertex set of one class hull.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassHull {
    pub class: usize,
    pub vertices: PointSet,
}

/// A query that could not be answered; the audit carries on without it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditFailure {
    pub index: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremeAudit {
    pub layer_index: usize,
    pub class_label: usize,
    pub total: usize,
    pub non_extreme: usize,
    /// Indices into the activation set.
    pub non_extreme_indices: Vec<usize>,
    pub failures: Vec<AuditFailure>,
}

/// For every class, tests each vector against the hull of the other
/// vectors of its class. A vector is non-extreme when its distance is at
/// most `zero_tol` times the class diameter.
pub fn audit_all_extreme(acts: &ActivationSet, cfg: &SolverConfig) -> Result<Vec<ExtremeAudit>> {
    cfg.validate()?;
    let mut audits = Vec::new();
    for class in acts.classes() {
        let idx = acts.class_indices(class);
        if idx.len() < 2 {
            return Err(Error::input(format!(
                "class {class} has {} vector(s); the extremity audit needs at least 2",
                idx.len()
            )));
        }
        let points = acts.vectors.select(&idx)?;
        // the class is exactly the candidates plus the query
        let threshold = cfg.zero_threshold(diameter(&points));
        let outcomes: Vec<(usize, Result<bool>)> = (0..idx.len())
            .into_par_iter()
            .map(|k| {
                let others: Vec<&[f64]> = (0..idx.len())
                    .filter(|&j| j != k)
                    .map(|j| points.row(j))
                    .collect();
                let res = project_rows(points.row(k), &others, cfg, None)
                    .map(|r| r.distance <= threshold);
                (idx[k], res)
            })
            .collect();
        let mut audit = ExtremeAudit {
            layer_index: acts.layer_index,
            class_label: class,
            total: idx.len(),
            non_extreme: 0,
            non_extreme_indices: Vec::new(),
            failures: Vec::new(),
        };
        for (i, r) in outcomes {
            match r {
                Ok(true) => audit.non_extreme_indices.push(i),
                Ok(false) => {}
                Err(e) => audit.failures.push(AuditFailure {
                    index: i,
                    message: e.to_string(),
                }),
            }
        }
        audit.non_extreme = audit.non_extreme_indices.len();
        audits.push(audit);
    }
    Ok(audits)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionViolation {
    /// Index into the activation set.
    pub index: usize,
    pub own_class: usize,
    pub containing_class: usize,
    pub distance: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionAudit {
    pub layer_index: usize,
    pub pairs_tested: usize,
    pub violations: Vec<InclusionViolation>,
    pub failures: Vec<AuditFailure>,
}

/// Tests every vector against the hull of every other class.
pub fn audit_mis_inclusion(
    acts: &ActivationSet,
    hulls: &[ClassHull],
    cfg: &SolverConfig,
) -> Result<InclusionAudit> {
    cfg.validate()?;
    if hulls.is_empty() {
        return Err(Error::input("no class hulls given"));
    }
    for h in hulls {
        if h.vertices.dim() != acts.dim() {
            return Err(Error::Dimension {
                expected: acts.dim(),
                got: h.vertices.dim(),
            });
        }
    }
    let testers: Vec<(usize, HullTester)> = hulls
        .iter()
        .map(|h| (h.class, HullTester::new(&h.vertices, *cfg)))
        .collect();
    type PairResult = (usize, usize, Result<(f64, f64)>);
    let results: Vec<Vec<PairResult>> = (0..acts.len())
        .into_par_iter()
        .map(|i| {
            let v = acts.vectors.row(i);
            testers
                .iter()
                .filter(|(c, _)| *c != acts.labels[i])
                .map(|(c, t)| (i, *c, t.distance(v).map(|r| (r.distance, t.threshold(v)))))
                .collect()
        })
        .collect();
    let mut audit = InclusionAudit {
        layer_index: acts.layer_index,
        pairs_tested: 0,
        violations: Vec::new(),
        failures: Vec::new(),
    };
    for (i, c, r) in results.into_iter().flatten() {
        audit.pairs_tested += 1;
        match r {
            Ok((distance, threshold)) if distance <= threshold => {
                audit.violations.push(InclusionViolation {
                    index: i,
                    own_class: acts.labels[i],
                    containing_class: c,
                    distance,
                    threshold,
                })
            }
            Ok(_) => {}
            Err(e) => audit.failures.push(AuditFailure {
                index: i,
                message: format!("vs class {c}: {e}"),
            }),
        }
    }
    Ok(audit)
}
