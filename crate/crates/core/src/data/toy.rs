use std::f64::consts::{PI, TAU};
use std::str::FromStr;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::LabeledVectors;
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::rng::{self, streams};

/// The four planar toy families.
///
/// - `center`: one standard Gaussian blob at the origin (1 class)
/// - `circles`: rings of radius 1 and 0.5, evenly spaced angles (2 classes)
/// - `moons`: unit half-circle and a copy flipped and shifted by `(1, -0.5)` (2 classes)
/// - `centers`: three standard Gaussian blobs on a triangle of side 4 (3 classes)
///
/// `noise` adds isotropic Gaussian jitter with that standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToyKind {
    Center,
    Circles,
    Moons,
    Centers,
}

impl ToyKind {
    pub const ALL: [ToyKind; 4] = [
        ToyKind::Center,
        ToyKind::Circles,
        ToyKind::Moons,
        ToyKind::Centers,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ToyKind::Center => "center",
            ToyKind::Circles => "circles",
            ToyKind::Moons => "moons",
            ToyKind::Centers => "centers",
        }
    }
}

impl FromStr for ToyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ToyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::input(format!(
                    "unknown toy kind {s:?} (center, circles, moons, centers)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToySpec {
    pub kind: ToyKind,
    pub n: usize,
    pub noise: f64,
    pub seed: u64,
}

const RING_RATIO: f64 = 0.5;
const MOON_OFFSET: f64 = 0.5;
const BLOB_SPACING: f64 = 4.0;

pub fn gen_toy(spec: &ToySpec) -> Result<LabeledVectors> {
    if spec.n == 0 {
        return Err(Error::input("toy dataset needs n >= 1"));
    }
    if !(spec.noise.is_finite() && spec.noise >= 0.0) {
        return Err(Error::input(format!(
            "noise must be >= 0, got {}",
            spec.noise
        )));
    }
    let mut rng = rng::stream(spec.seed, streams::TOY);
    let mut gauss = move || -> f64 { StandardNormal.sample(&mut rng) };
    let n = spec.n;
    let mut rows: Vec<[f64; 2]> = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);

    match spec.kind {
        ToyKind::Center => {
            for _ in 0..n {
                rows.push([gauss(), gauss()]);
                labels.push(0);
            }
        }
        ToyKind::Circles => {
            let outer = n / 2;
            let inner = n - outer;
            for i in 0..outer {
                let t = TAU * i as f64 / outer as f64;
                rows.push([t.cos(), t.sin()]);
                labels.push(0);
            }
            for i in 0..inner {
                let t = TAU * i as f64 / inner as f64;
                rows.push([RING_RATIO * t.cos(), RING_RATIO * t.sin()]);
                labels.push(1);
            }
        }
        ToyKind::Moons => {
            let outer = n / 2;
            let inner = n - outer;
            let angle = |i: usize, count: usize| {
                if count > 1 {
                    PI * i as f64 / (count - 1) as f64
                } else {
                    0.0
                }
            };
            for i in 0..outer {
                let t = angle(i, outer);
                rows.push([t.cos(), t.sin()]);
                labels.push(0);
            }
            for i in 0..inner {
                let t = angle(i, inner);
                rows.push([1.0 - t.cos(), 1.0 - t.sin() - MOON_OFFSET]);
                labels.push(1);
            }
        }
        ToyKind::Centers => {
            let r = BLOB_SPACING / 3f64.sqrt();
            let centers: Vec<[f64; 2]> = (0..3)
                .map(|k| {
                    let t = PI / 2.0 + TAU * k as f64 / 3.0;
                    [r * t.cos(), r * t.sin()]
                })
                .collect();
            for i in 0..n {
                let c = centers[i % 3];
                rows.push([c[0] + gauss(), c[1] + gauss()]);
                labels.push(i % 3);
            }
        }
    }
    if spec.noise > 0.0 {
        for r in rows.iter_mut() {
            r[0] += spec.noise * gauss();
            r[1] += spec.noise * gauss();
        }
    }
    LabeledVectors::new(PointSet::from_rows(&rows)?, labels)
}
