//! Convex rate regions in the nonnegative `(R1, R2)` quadrant, held both as
//! half-planes and as a counterclockwise vertex list.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Membership / feasibility tolerance, as a Euclidean distance in nats.
pub const GEOMETRY_TOLERANCE: f64 = 1e-9;

/// A rate pair `[R1, R2]` in nats per channel use.
pub type RatePoint = [f64; 2];

/// `a R1 + b R2 <= rhs` with `(a, b)` of unit length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    pub rhs: f64,
}

impl HalfPlane {
    /// Normalizes `(a, b)`; a zero normal is not a half-plane.
    pub fn new(a: f64, b: f64, rhs: f64) -> Self {
        let norm = a.hypot(b);
        debug_assert!(norm > 0.0);
        Self {
            a: a / norm,
            b: b / norm,
            rhs: rhs / norm,
        }
    }

    /// Signed distance of `p` beyond the boundary (positive = violated).
    #[inline]
    pub fn excess(&self, p: RatePoint) -> f64 {
        self.a * p[0] + self.b * p[1] - self.rhs
    }

    fn intersect(&self, other: &HalfPlane) -> Option<RatePoint> {
        let det = self.a * other.b - self.b * other.a;
        if det.abs() < 1e-12 {
            return None;
        }
        Some([
            (self.rhs * other.b - self.b * other.rhs) / det,
            (self.a * other.rhs - self.rhs * other.a) / det,
        ])
    }
}

#[inline]
fn cross(o: RatePoint, a: RatePoint, b: RatePoint) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain: the strict hull in counterclockwise order,
/// starting at the lexicographically smallest point.
pub fn convex_hull(mut points: Vec<RatePoint>) -> Vec<RatePoint> {
    points.retain(|p| p[0].is_finite() && p[1].is_finite());
    points.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
    points.dedup_by(|p, q| (p[0] - q[0]).abs() <= 1e-15 && (p[1] - q[1]).abs() <= 1e-15);
    if points.len() < 3 {
        return points;
    }
    let mut hull: Vec<RatePoint> = Vec::with_capacity(points.len() + 1);
    for &p in &points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 1e-15 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in points.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 1e-15
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn point_segment_distance(p: RatePoint, a: RatePoint, b: RatePoint) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * d[0]).hypot(p[1] - a[1] - t * d[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePolygon {
    halfplanes: Vec<HalfPlane>,
    vertices: Vec<RatePoint>,
}

impl RatePolygon {
    /// Intersects the given half-planes with the nonnegative quadrant by
    /// pairwise line intersection and a feasibility filter. An infeasible
    /// system yields an empty polygon.
    pub fn from_halfplanes(halfplanes: impl IntoIterator<Item = HalfPlane>) -> Self {
        let mut hps: Vec<HalfPlane> = halfplanes.into_iter().collect();
        hps.push(HalfPlane::new(-1.0, 0.0, 0.0));
        hps.push(HalfPlane::new(0.0, -1.0, 0.0));
        let mut candidates = Vec::new();
        for i in 0..hps.len() {
            for j in i + 1..hps.len() {
                if let Some(p) = hps[i].intersect(&hps[j]) {
                    if hps.iter().all(|h| h.excess(p) <= GEOMETRY_TOLERANCE) {
                        candidates.push(snap(p));
                    }
                }
            }
        }
        Self {
            vertices: convex_hull(candidates),
            halfplanes: hps,
        }
    }

    /// Convex hull of a point set, with half-planes read off the hull edges.
    pub fn from_points(points: Vec<RatePoint>) -> Self {
        let vertices = convex_hull(points.into_iter().map(snap).collect());
        let halfplanes = hull_halfplanes(&vertices);
        Self {
            halfplanes,
            vertices,
        }
    }

    /// `[0, width] x [0, height]`, each side clamped at 0.
    pub fn rectangle(width: f64, height: f64) -> Self {
        Self::from_halfplanes([
            HalfPlane::new(1.0, 0.0, width.max(0.0)),
            HalfPlane::new(0.0, 1.0, height.max(0.0)),
        ])
    }

    pub fn origin() -> Self {
        Self::rectangle(0.0, 0.0)
    }

    pub fn halfplanes(&self) -> &[HalfPlane] {
        &self.halfplanes
    }

    /// Counterclockwise vertex list.
    pub fn vertices(&self) -> &[RatePoint] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, p: RatePoint) -> bool {
        !self.is_empty()
            && self
                .halfplanes
                .iter()
                .all(|h| h.excess(p) <= GEOMETRY_TOLERANCE)
    }

    /// Euclidean distance from `p` to the region (0 inside).
    pub fn distance_to(&self, p: RatePoint) -> Result<f64> {
        match self.vertices.len() {
            0 => Err(Error::EmptyPolygon),
            1 => Ok((p[0] - self.vertices[0][0]).hypot(p[1] - self.vertices[0][1])),
            2 => Ok(point_segment_distance(p, self.vertices[0], self.vertices[1])),
            n => {
                let inside = (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) >= 0.0);
                if inside {
                    return Ok(0.0);
                }
                Ok((0..n)
                    .map(|i| point_segment_distance(p, self.vertices[i], self.vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min))
            }
        }
    }

    /// Largest distance of one of our vertices to `other`.
    pub fn max_excursion_from(&self, other: &RatePolygon) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyPolygon);
        }
        self.vertices
            .iter()
            .try_fold(0.0f64, |m, &v| Ok(m.max(other.distance_to(v)?)))
    }

    /// Every vertex of `self` lies within `tol` of `other`.
    pub fn is_subset_of(&self, other: &RatePolygon, tol: f64) -> bool {
        self.max_excursion_from(other).is_ok_and(|d| d <= tol)
    }

    pub fn max_r1(&self) -> f64 {
        self.vertices.iter().map(|v| v[0]).fold(0.0, f64::max)
    }

    pub fn max_r2(&self) -> f64 {
        self.vertices.iter().map(|v| v[1]).fold(0.0, f64::max)
    }

    pub fn max_sum_rate(&self) -> f64 {
        self.vertices.iter().map(|v| v[0] + v[1]).fold(0.0, f64::max)
    }

    /// Largest `R2` with `(r1, R2)` in the region, if the vertical line meets it.
    pub fn max_r2_at(&self, r1: f64) -> Option<f64> {
        let n = self.vertices.len();
        let mut best: Option<f64> = None;
        let mut consider = |y: f64| best = Some(best.map_or(y, |b: f64| b.max(y)));
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let (lo, hi) = if a[0] <= b[0] { (a, b) } else { (b, a) };
            if r1 < lo[0] - GEOMETRY_TOLERANCE || r1 > hi[0] + GEOMETRY_TOLERANCE {
                continue;
            }
            if hi[0] - lo[0] <= 1e-15 {
                consider(lo[1].max(hi[1]));
            } else {
                let t = ((r1 - lo[0]) / (hi[0] - lo[0])).clamp(0.0, 1.0);
                consider(lo[1] + t * (hi[1] - lo[1]));
            }
        }
        best
    }

    /// Checks the representation invariants: vertices inside every
    /// half-plane, inside the nonnegative quadrant, and counterclockwise.
    pub fn check_invariants(&self) -> bool {
        let n = self.vertices.len();
        let feasible = self.vertices.iter().all(|&v| {
            v[0] >= -GEOMETRY_TOLERANCE
                && v[1] >= -GEOMETRY_TOLERANCE
                && self.halfplanes.iter().all(|h| h.excess(v) <= GEOMETRY_TOLERANCE)
        });
        let ccw = n < 3
            || (0..n).all(|i| {
                cross(self.vertices[i], self.vertices[(i + 1) % n], self.vertices[(i + 2) % n])
                    > 0.0
            });
        feasible && ccw
    }
}

/// Symmetric Hausdorff distance between two convex regions. For convex
/// sets the supremum is attained at a vertex.
pub fn hausdorff_distance(p: &RatePolygon, q: &RatePolygon) -> Result<f64> {
    Ok(p.max_excursion_from(q)?.max(q.max_excursion_from(p)?))
}

fn snap(p: RatePoint) -> RatePoint {
    let s = |x: f64| if x.abs() <= GEOMETRY_TOLERANCE { 0.0 } else { x };
    [s(p[0]), s(p[1])]
}

fn hull_halfplanes(vertices: &[RatePoint]) -> Vec<HalfPlane> {
    match vertices.len() {
        0 => Vec::new(),
        1 => {
            let [x, y] = vertices[0];
            vec![
                HalfPlane::new(1.0, 0.0, x),
                HalfPlane::new(-1.0, 0.0, -x),
                HalfPlane::new(0.0, 1.0, y),
                HalfPlane::new(0.0, -1.0, -y),
            ]
        }
        2 => {
            let (p, q) = (vertices[0], vertices[1]);
            let d = [q[0] - p[0], q[1] - p[1]];
            let n = [d[1], -d[0]];
            let along = d[0] * p[0] + d[1] * p[1];
            let normal = n[0] * p[0] + n[1] * p[1];
            vec![
                HalfPlane::new(n[0], n[1], normal),
                HalfPlane::new(-n[0], -n[1], -normal),
                HalfPlane::new(-d[0], -d[1], -along),
                HalfPlane::new(d[0], d[1], d[0] * q[0] + d[1] * q[1]),
            ]
        }
        n => (0..n)
            .map(|i| {
                let (p, q) = (vertices[i], vertices[(i + 1) % n]);
                let a = q[1] - p[1];
                let b = p[0] - q[0];
                HalfPlane::new(a, b, a * p[0] + b * p[1])
            })
            .collect(),
    }
}

/// Accumulates candidate points and keeps only their convex hull, compacting
/// once the buffer grows past a threshold.
#[derive(Debug, Clone, Default)]
pub struct HullAccumulator {
    points: Vec<RatePoint>,
    compacted: usize,
}

impl HullAccumulator {
    const COMPACT_AFTER: usize = 4096;

    pub fn new() -> Self {
        Self::default()
    }

    pub fn extend(&mut self, points: &[RatePoint]) {
        self.points.extend_from_slice(points);
        if self.points.len() > self.compacted + Self::COMPACT_AFTER {
            self.compact();
        }
    }

    pub fn merge(mut self, other: HullAccumulator) -> Self {
        self.extend(&other.points);
        self
    }

    fn compact(&mut self) {
        self.points = convex_hull(std::mem::take(&mut self.points));
        self.compacted = self.points.len();
    }

    pub fn finish(self) -> RatePolygon {
        RatePolygon::from_points(self.points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit_square() -> RatePolygon {
        RatePolygon::rectangle(1.0, 1.0)
    }

    #[test]
    fn rectangle_vertices_ccw() {
        let sq = unit_square();
        assert_eq!(sq.vertices(), &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        assert!(sq.check_invariants());
        assert!(sq.contains([0.5, 1.0]));
        assert!(!sq.contains([0.5, 1.0 + 1e-6]));
    }

    #[test]
    fn hausdorff_examples() {
        let sq = unit_square();
        assert_eq!(hausdorff_distance(&sq, &sq).unwrap(), 0.0);
        let shifted = RatePolygon::from_points(vec![[0.1, 0.0], [1.1, 0.0], [1.1, 1.0], [0.1, 1.0]]);
        assert_abs_diff_eq!(hausdorff_distance(&sq, &shifted).unwrap(), 0.1, epsilon = 1e-12);
        let empty = RatePolygon::from_halfplanes([HalfPlane::new(1.0, 1.0, -1.0)]);
        assert!(empty.is_empty());
        assert_eq!(hausdorff_distance(&sq, &empty), Err(Error::EmptyPolygon));
    }

    #[test]
    fn degenerate_polygons() {
        let o = RatePolygon::origin();
        assert_eq!(o.vertices(), &[[0.0, 0.0]]);
        assert!(o.contains([0.0, 0.0]));
        assert!(!o.contains([1e-6, 0.0]));
        let seg = RatePolygon::rectangle(0.0, 2.0);
        assert_eq!(seg.vertices().len(), 2);
        assert!(seg.contains([0.0, 1.0]));
        assert_abs_diff_eq!(seg.distance_to([1.0, 3.0]).unwrap(), 2f64.sqrt(), epsilon = 1e-12);
        let from_pts = RatePolygon::from_points(vec![[0.0, 0.0], [0.0, 2.0]]);
        assert!(from_pts.contains([0.0, 1.5]));
        assert!(!from_pts.contains([0.1, 1.5]));
        assert!(!from_pts.contains([0.0, 2.1]));
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let pts = vec![[0.0, 0.0], [1.0, 0.0], [0.5, 0.0], [0.5, 0.5], [1.0, 1.0], [0.0, 1.0]];
        assert_eq!(convex_hull(pts).len(), 4);
    }

    #[test]
    fn from_points_halfplanes_agree_with_vertices() {
        let pts = vec![[0.0, 0.0], [2.0, 0.0], [2.0, 0.5], [1.0, 1.5], [0.0, 1.7]];
        let poly = RatePolygon::from_points(pts);
        assert!(poly.check_invariants());
        for &v in poly.vertices() {
            assert!(poly.contains(v));
        }
        assert!(!poly.contains([2.0, 1.0]));
        assert_abs_diff_eq!(poly.max_r2_at(1.0).unwrap(), 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(poly.max_r2_at(2.0).unwrap(), 0.5, epsilon = 1e-12);
        assert!(poly.max_r2_at(2.5).is_none());
    }

    #[test]
    fn accumulator_matches_direct_hull() {
        let mut acc = HullAccumulator::new();
        let mut all = Vec::new();
        for i in 0..10_000 {
            let t = i as f64 * 0.001;
            let p = [t.cos().abs() * 2.0, (t * 1.7).sin().abs()];
            all.push(p);
            acc.extend(&[p]);
        }
        let direct = RatePolygon::from_points(all);
        let accumulated = acc.finish();
        assert_abs_diff_eq!(
            hausdorff_distance(&direct, &accumulated).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }
}
