use super::PointSet;
use crate::error::{Error, Result};

/// Strict vertices of the exact planar hull (Andrew's monotone chain).
///
/// Collinear boundary points are excluded. Among coincident points the
/// lowest index represents the location. Returned ascending.
pub fn exact_extremes_2d(points: &PointSet) -> Result<Vec<usize>> {
    if points.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: points.dim(),
        });
    }
    let mut order: Vec<usize> = (0..points.n()).collect();
    let at = |i: usize| (points.row(i)[0], points.row(i)[1]);
    order.sort_by(|&a, &b| {
        let (pa, pb) = (at(a), at(b));
        pa.0.total_cmp(&pb.0)
            .then(pa.1.total_cmp(&pb.1))
            .then(a.cmp(&b))
    });
    order.dedup_by(|b, a| at(*a) == at(*b));
    if order.len() <= 2 {
        let mut out = order;
        out.sort_unstable();
        return Ok(out);
    }

    let cross = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (at(o), at(a), at(b));
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for &i in &order {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= 0.0 {
            hull.pop();
        }
        hull.push(i);
    }
    let lower_len = hull.len() + 1;
    for &i in order.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= 0.0
        {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    hull.sort_unstable();
    hull.dedup();
    Ok(hull)
}
