//! Boundary normal fields of convex polygons and their oscillation moduli.
//!
//! The outward unit normal of a convex polygon is multivalued: constant
//! along each open edge and sweeping a cone at each vertex. Lifting the
//! normal direction to a nondecreasing real function of arc length turns
//! every question about normal turning into interval arithmetic on the
//! lift, which is how all quantities here are computed, exactly up to
//! floating point, with no sampling of the boundary.
//!
//! Two separation metrics are supported for a pair of boundary points:
//! chord (Euclidean distance) and arc (geodesic distance along the
//! boundary). For each metric the field has
//!
//! * a maximal oscillation: the largest angle between normals at any two
//!   points separated by at most `tau`, and
//! * a minimal oscillation: the smallest angle between normals at any two
//!   points separated by at least `tau` (absent when no pair is that far
//!   apart).
//!
//! Chord oscillations measure angles geodesically on the circle of
//! directions, so they live in [0, pi]. Arc oscillations measure lift
//! differences and can exceed pi.

use serde::{Deserialize, Serialize};

use crate::geom2d::{fold_angle, ConvexPolyline2, Point2};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Chord,
    Arc,
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Metric::Chord => write!(f, "chord"),
            Metric::Arc => write!(f, "arc"),
        }
    }
}

/// Oscillation values of a normal field at one separation threshold.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OscillationPoint {
    pub tau: f64,
    /// Largest normal oscillation over separations <= tau.
    pub max: f64,
    /// Smallest normal oscillation over separations >= tau; `None` when no
    /// pair of boundary points is separated by tau (chord metric only).
    pub min: Option<f64>,
}

/// Where an arc-length position falls on the boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Location {
    Vertex(usize),
    /// Edge index and offset from its start, in (0, edge length).
    Edge(usize, f64),
}

/// A convex polygon with its normal field lifted to a monotone function of
/// arc length.
#[derive(Clone, Debug)]
pub struct LiftedNormalField {
    poly: ConvexPolyline2,
    /// Lifted outward normal angle of edge i; strictly increasing, with
    /// theta[0] in (-pi, pi] and total increase 2 pi over one loop.
    theta: Vec<f64>,
    /// cum[i] = arc length from vertex 0 to vertex i; cum[n] = perimeter.
    cum: Vec<f64>,
}

impl LiftedNormalField {
    pub fn new(poly: &ConvexPolyline2) -> Self {
        let n = poly.len();
        let mut theta = Vec::with_capacity(n);
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        let mut prev_raw = 0.0;
        let mut lift = 0.0;
        for i in 0..n {
            let normal = poly.edge_normal(i);
            let raw = normal.angle();
            if i == 0 {
                lift = raw;
            } else {
                let mut turn = raw - prev_raw;
                while turn <= 0.0 {
                    turn += std::f64::consts::TAU;
                }
                while turn > std::f64::consts::TAU {
                    turn -= std::f64::consts::TAU;
                }
                debug_assert!(
                    turn < std::f64::consts::PI,
                    "vertex turn {turn} >= pi on a validated convex polygon"
                );
                lift += turn;
            }
            prev_raw = raw;
            theta.push(lift);
            cum.push(cum[i] + poly.edge_vec(i).norm());
        }
        debug_assert!({
            let wrap = {
                let mut t = theta[0] + std::f64::consts::TAU - theta[n - 1];
                while t <= 0.0 {
                    t += std::f64::consts::TAU;
                }
                t
            };
            wrap < std::f64::consts::PI
        });
        LiftedNormalField {
            poly: poly.clone(),
            theta,
            cum,
        }
    }

    pub fn polygon(&self) -> &ConvexPolyline2 {
        &self.poly
    }

    pub fn len(&self) -> usize {
        self.poly.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn perimeter(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub fn arc_of_vertex(&self, i: usize) -> f64 {
        self.cum[i % self.len()] + (i / self.len()) as f64 * self.perimeter()
    }

    /// Lifted normal angle of edge i (wraps with +2 pi per loop).
    pub fn edge_angle(&self, i: usize) -> f64 {
        let n = self.len();
        self.theta[i % n] + (i / n) as f64 * std::f64::consts::TAU
    }

    /// Lifted normal cone [lo, hi] at vertex i: the normals between the
    /// incoming and outgoing edge.
    pub fn cone(&self, i: usize) -> (f64, f64) {
        let n = self.len();
        let hi = self.edge_angle(i);
        let lo = if i % n == 0 {
            self.edge_angle(i + n - 1) - std::f64::consts::TAU
        } else {
            self.edge_angle(i - 1)
        };
        (lo, hi)
    }

    pub fn cone_width(&self, i: usize) -> f64 {
        let (lo, hi) = self.cone(i);
        hi - lo
    }

    pub fn cone_mid(&self, i: usize) -> f64 {
        let (lo, hi) = self.cone(i);
        0.5 * (lo + hi)
    }

    pub fn max_cone_width(&self) -> f64 {
        (0..self.len()).map(|i| self.cone_width(i)).fold(0.0, f64::max)
    }

    /// Classify an arc position (taken mod perimeter). Positions within
    /// 1e-12 * perimeter of a vertex count as that vertex.
    pub fn locate(&self, s: f64) -> Location {
        let ll = self.perimeter();
        let mut p = s % ll;
        if p < 0.0 {
            p += ll;
        }
        let eps = 1e-12 * ll;
        // Last cum entry <= p.
        let mut e = match self.cum.binary_search_by(|c| c.partial_cmp(&p).unwrap()) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        if e == self.len() {
            e = 0;
            p = 0.0;
        }
        if (p - self.cum[e]).abs() <= eps {
            Location::Vertex(e)
        } else if (self.cum[e + 1] - p).abs() <= eps {
            Location::Vertex((e + 1) % self.len())
        } else {
            Location::Edge(e, p - self.cum[e])
        }
    }

    pub fn point_at_arc(&self, s: f64) -> Point2 {
        match self.locate(s) {
            Location::Vertex(i) => self.poly.vertex(i),
            Location::Edge(e, t) => {
                let (a, _) = self.poly.edge(e);
                a + self.poly.edge_vec(e).normalized() * t
            }
        }
    }

    /// Vertex nearest to arc position `s` (geodesic on the boundary).
    pub fn nearest_vertex(&self, s: f64) -> usize {
        match self.locate(s) {
            Location::Vertex(i) => i,
            Location::Edge(e, t) => {
                let elen = self.cum[e + 1] - self.cum[e];
                if t <= 0.5 * elen {
                    e
                } else {
                    (e + 1) % self.len()
                }
            }
        }
    }

    fn validate_tau(&self, tau: f64, metric: Metric) -> Result<()> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::domain(format!("separation must be positive and finite, got {tau}")));
        }
        if metric == Metric::Arc && tau >= 0.5 * self.perimeter() {
            return Err(Error::domain(format!(
                "arc separation {tau} is not below half the perimeter {}; geodesic arc distance cannot reach it",
                0.5 * self.perimeter()
            )));
        }
        Ok(())
    }

    /// Largest oscillation over separations <= tau.
    pub fn maximal_oscillation(&self, tau: f64, metric: Metric) -> Result<f64> {
        Ok(self.oscillation_profile(&[tau], metric)?[0].max)
    }

    /// Smallest oscillation over separations >= tau; `None` if vacuous.
    pub fn minimal_oscillation(&self, tau: f64, metric: Metric) -> Result<Option<f64>> {
        Ok(self.oscillation_profile(&[tau], metric)?[0].min)
    }

    /// Both oscillations at each threshold. For the chord metric all
    /// thresholds share one sweep over feature pairs, so a grid costs the
    /// same as a single query.
    pub fn oscillation_profile(&self, taus: &[f64], metric: Metric) -> Result<Vec<OscillationPoint>> {
        for &t in taus {
            self.validate_tau(t, metric)?;
        }
        match metric {
            Metric::Chord => Ok(self.chord_profile(taus)),
            Metric::Arc => Ok(taus.iter().map(|&t| self.arc_point(t)).collect()),
        }
    }

    /// Chord metric: exact sweep over all pairs of boundary features.
    ///
    /// A feature is an edge (a segment with a single normal direction) or a
    /// vertex (a degenerate segment carrying a normal cone). For a feature
    /// pair, the attainable Euclidean separations form the interval
    /// [min segment distance, max endpoint distance] and the attainable
    /// lift differences form an interval too, so the extreme folded angles
    /// come from interval endpoints and the multiples of pi inside.
    fn chord_profile(&self, taus: &[f64]) -> Vec<OscillationPoint> {
        let n = self.len();
        struct Feat {
            a: Point2,
            b: Point2,
            lo: f64,
            hi: f64,
        }
        let mut feats = Vec::with_capacity(2 * n);
        for i in 0..n {
            let (lo, hi) = self.cone(i);
            let v = self.poly.vertex(i);
            feats.push(Feat { a: v, b: v, lo, hi });
        }
        for i in 0..n {
            let (a, b) = self.poly.edge(i);
            let t = self.theta[i];
            feats.push(Feat { a, b, lo: t, hi: t });
        }
        let m = feats.len();
        let k = taus.len();
        let mut max_acc = vec![0.0f64; k];
        let mut min_acc = vec![f64::INFINITY; k];
        for i in 0..m {
            for j in i..m {
                let (fi, fj) = (&feats[i], &feats[j]);
                let dmin = if i == j {
                    0.0
                } else {
                    seg_seg_dist(fi.a, fi.b, fj.a, fj.b)
                };
                let dmax = fi
                    .a
                    .dist(fj.a)
                    .max(fi.a.dist(fj.b))
                    .max(fi.b.dist(fj.a))
                    .max(fi.b.dist(fj.b));
                let (fmin, fmax) = fold_range(fi.lo - fj.hi, fi.hi - fj.lo);
                for t in 0..k {
                    if dmin <= taus[t] && fmax > max_acc[t] {
                        max_acc[t] = fmax;
                    }
                    if dmax >= taus[t] && fmin < min_acc[t] {
                        min_acc[t] = fmin;
                    }
                }
            }
        }
        (0..k)
            .map(|t| OscillationPoint {
                tau: taus[t],
                max: max_acc[t],
                min: min_acc[t].is_finite().then_some(min_acc[t]),
            })
            .collect()
    }

    /// Arc metric at a single threshold, O(n) after the lift.
    fn arc_point(&self, tau: f64) -> OscillationPoint {
        let n = self.len();
        let ll = self.perimeter();
        let two_pi = std::f64::consts::TAU;

        // Maximal: for each start vertex i, the furthest vertex within
        // forward arc tau; the extreme lift difference is hi(j) - lo(i).
        let mut max_osc = 0.0f64;
        let mut j = 0usize;
        for i in 0..n {
            if j < i {
                j = i;
            }
            while self.arc_of_vertex(j + 1) - self.arc_of_vertex(i) <= tau {
                j += 1;
            }
            let (_, hij) = self.cone(j);
            let (loi, _) = self.cone(i);
            let v = hij - loi;
            if v > max_osc {
                max_osc = v;
            }
        }

        // Minimal: the infimum over windows of arc length exactly tau of
        // the smallest lift difference across the window. As the window
        // slides, the value only drops when an endpoint sits on a vertex,
        // so two candidate families cover the infimum: windows starting at
        // a vertex and windows ending at one.
        let mut min_osc = f64::INFINITY;
        // Work on the doubled boundary to avoid modular arithmetic: arc
        // positions in [0, 2L), lift shifted by +2 pi on the second copy.
        let theta_at = |s: f64| -> (f64, f64) {
            // (lift just before s, lift just after s) for s in [0, 2L).
            let (wrap, s0) = if s >= ll { (two_pi, s - ll) } else { (0.0, s) };
            match self.locate(s0) {
                Location::Vertex(i) => {
                    let (lo, hi) = self.cone(i);
                    // locate() snaps positions within eps of L down to
                    // vertex 0, whose cone is expressed at the loop start;
                    // such a hit belongs to the copy one turn up.
                    let extra = if i == 0 && s0 > 0.5 * ll { two_pi } else { 0.0 };
                    (lo + wrap + extra, hi + wrap + extra)
                }
                Location::Edge(e, _) => {
                    let t = self.theta[e] + wrap;
                    (t, t)
                }
            }
        };
        for i in 0..n {
            // Window [cum i, cum i + tau].
            let start_hi = self.cone(i).1;
            let (end_lo, _) = theta_at(self.cum[i] + tau);
            min_osc = min_osc.min(end_lo - start_hi);
            // Window [arc(j) - tau, arc(j)] with j on the second copy when
            // needed so the left end stays nonnegative.
            let aj = self.arc_of_vertex(i) + ll;
            let end_lo2 = self.cone(i).0 + two_pi;
            let (_, start_hi2) = theta_at(aj - tau);
            min_osc = min_osc.min(end_lo2 - start_hi2);
        }
        debug_assert!(min_osc > -1e-9);
        OscillationPoint {
            tau,
            max: max_osc,
            min: Some(min_osc.max(0.0)),
        }
    }

    /// Two-sided curvature estimate at a vertex from probes at arc distance
    /// `h`: the angle between the vertex's central normal and the normal of
    /// the edge containing the probe, divided by the straight-line distance
    /// to that edge's midpoint.
    ///
    /// Probes snap to edge midpoints because for a polygon inscribed in a
    /// smooth curve the edge normal agrees with the smooth normal near the
    /// edge midpoint; sampling there cancels the first-order quantization
    /// error, and averaging the forward and backward quotients cancels the
    /// next order.
    pub fn curvature_estimate(&self, vertex: usize, h: f64) -> Result<f64> {
        let n = self.len();
        if vertex >= n {
            return Err(Error::domain(format!("vertex index {vertex} out of range (n = {n})")));
        }
        let ll = self.perimeter();
        if !(h > 0.0) || h >= 0.25 * ll {
            return Err(Error::domain(format!(
                "probe arc distance must be in (0, perimeter/4), got {h}"
            )));
        }
        let mid = self.cone_mid(vertex);
        let x = self.poly.vertex(vertex);
        let quotient = |s: f64| -> f64 {
            let e = match self.locate(s) {
                Location::Edge(e, _) => e,
                Location::Vertex(i) => i % n,
            };
            let (a, b) = self.poly.edge(e);
            let y = Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
            let angle = fold_angle(self.theta[e] - mid);
            angle / x.dist(y)
        };
        let fwd = quotient(self.cum[vertex] + h);
        let bwd = quotient(self.cum[vertex] - h + ll);
        Ok(0.5 * (fwd + bwd))
    }
}

/// Outcome of checking one curvature-oscillation inequality.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureBoundCheck {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// Discretization allowance added to the favorable side: twice the
    /// largest vertex cone width.
    pub slack: f64,
    pub note: Option<String>,
}

/// For a boundary whose curvature is at most `kappa_sup`, the maximal chord
/// oscillation obeys  osc <= kappa_sup * tau / cos(osc)  as long as it stays
/// below pi/2. Checks the polygonal field against that, with slack for the
/// vertex quantization.
pub fn check_curvature_upper(
    field: &LiftedNormalField,
    kappa_sup: f64,
    tau: f64,
) -> Result<CurvatureBoundCheck> {
    if !(kappa_sup > 0.0) {
        return Err(Error::domain("curvature bound must be positive"));
    }
    let osc = field.maximal_oscillation(tau, Metric::Chord)?;
    let slack = 2.0 * field.max_cone_width();
    if osc >= std::f64::consts::FRAC_PI_2 {
        return Ok(CurvatureBoundCheck {
            holds: false,
            lhs: osc,
            rhs: f64::INFINITY,
            slack,
            note: Some("oscillation reached pi/2; the bound's regime excludes this".into()),
        });
    }
    let rhs = kappa_sup * tau / osc.cos() + slack;
    Ok(CurvatureBoundCheck {
        holds: osc <= rhs,
        lhs: osc,
        rhs,
        slack,
        note: None,
    })
}

/// For a boundary whose curvature is at least `kappa_inf`, the minimal
/// chord oscillation obeys  osc >= kappa_inf * tau. Vacuous separations
/// (tau beyond the diameter) pass trivially.
pub fn check_curvature_lower(
    field: &LiftedNormalField,
    kappa_inf: f64,
    tau: f64,
) -> Result<CurvatureBoundCheck> {
    if !(kappa_inf > 0.0) {
        return Err(Error::domain("curvature bound must be positive"));
    }
    let slack = 2.0 * field.max_cone_width();
    let rhs = kappa_inf * tau - slack;
    match field.minimal_oscillation(tau, Metric::Chord)? {
        None => Ok(CurvatureBoundCheck {
            holds: true,
            lhs: f64::INFINITY,
            rhs,
            slack,
            note: Some("no boundary pair is separated by tau; the bound holds vacuously".into()),
        }),
        Some(osc) => Ok(CurvatureBoundCheck {
            holds: osc >= rhs,
            lhs: osc,
            rhs,
            slack,
            note: None,
        }),
    }
}

/// Extreme folded angles over a lift-difference interval [lo, hi]:
/// the fold map has peaks (value pi) at odd multiples of pi and zeros at
/// even multiples, and is piecewise linear, so extremes are at interval
/// endpoints or at the multiples of pi inside.
fn fold_range(lo: f64, hi: f64) -> (f64, f64) {
    debug_assert!(lo <= hi + 1e-12);
    let pi = std::f64::consts::PI;
    let k_lo = (lo / pi).ceil() as i64;
    let k_hi = (hi / pi).floor() as i64;
    let fl = fold_angle(lo);
    let fh = fold_angle(hi);
    let has_odd = k_lo <= k_hi && !(k_lo == k_hi && k_lo % 2 == 0);
    let has_even = k_lo <= k_hi && !(k_lo == k_hi && k_lo % 2 != 0);
    let max = if has_odd { pi } else { fl.max(fh) };
    let min = if has_even { 0.0 } else { fl.min(fh) };
    (min, max)
}

/// Minimum distance between two segments (either may be degenerate).
fn seg_seg_dist(p1: Point2, q1: Point2, p2: Point2, q2: Point2) -> f64 {
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p1 - p2;
    let a = d1.dot(d1);
    let e = d2.dot(d2);
    let f = d2.dot(r);
    let (s, t);
    if a <= 1e-30 && e <= 1e-30 {
        return p1.dist(p2);
    }
    if a <= 1e-30 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(r);
        if e <= 1e-30 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let mut s0 = if denom.abs() > 1e-30 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    let cp1 = p1 + d1 * s;
    let cp2 = p2 + d2 * t;
    cp1.dist(cp2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::Point2;

    fn unit_square() -> ConvexPolyline2 {
        ConvexPolyline2::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    fn regular_ngon_in_circle(n: usize, radius: f64) -> ConvexPolyline2 {
        let verts = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                Point2::new(radius * t.cos(), radius * t.sin())
            })
            .collect();
        ConvexPolyline2::new(verts).unwrap()
    }

    #[test]
    fn lift_of_square() {
        let f = LiftedNormalField::new(&unit_square());
        let pi = std::f64::consts::PI;
        assert!((f.edge_angle(0) + pi / 2.0).abs() < 1e-15);
        assert!((f.edge_angle(1) - 0.0).abs() < 1e-15);
        assert!((f.edge_angle(2) - pi / 2.0).abs() < 1e-15);
        assert!((f.edge_angle(3) - pi).abs() < 1e-15);
        for i in 0..4 {
            assert!((f.cone_width(i) - pi / 2.0).abs() < 1e-15);
        }
        assert!((f.perimeter() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn square_chord_oscillations() {
        let f = LiftedNormalField::new(&unit_square());
        let pi = std::f64::consts::PI;
        // Separation below the side length: one cone plus nothing else.
        let w = f.maximal_oscillation(0.5, Metric::Chord).unwrap();
        assert!((w - pi / 2.0).abs() < 1e-12, "{w}");
        // Adjacent vertices reachable: their cones' far ends are opposite.
        let w = f.maximal_oscillation(1.0, Metric::Chord).unwrap();
        assert!((w - pi).abs() < 1e-12, "{w}");
        // An edge is longer than tau: some separated pair shares a normal.
        let o = f.minimal_oscillation(0.5, Metric::Chord).unwrap();
        assert_eq!(o, Some(0.0));
        // Beyond the side but within the diagonal.
        let o = f.minimal_oscillation(1.2, Metric::Chord).unwrap().unwrap();
        assert!((o - pi / 2.0).abs() < 1e-12, "{o}");
        // Beyond the diameter: vacuous.
        let o = f.minimal_oscillation(1.5, Metric::Chord).unwrap();
        assert_eq!(o, None);
    }

    #[test]
    fn square_arc_oscillations() {
        let f = LiftedNormalField::new(&unit_square());
        let pi = std::f64::consts::PI;
        // Window shorter than a side.
        let w = f.maximal_oscillation(0.5, Metric::Arc).unwrap();
        assert!((w - pi / 2.0).abs() < 1e-12);
        let o = f.minimal_oscillation(0.5, Metric::Arc).unwrap().unwrap();
        assert!(o.abs() < 1e-12);
        // Window covering one full side and both its corners.
        let w = f.maximal_oscillation(1.0, Metric::Arc).unwrap();
        assert!((w - pi).abs() < 1e-12, "{w}");
        // Window of 1.5 always contains at least one corner.
        let o = f.minimal_oscillation(1.5, Metric::Arc).unwrap().unwrap();
        assert!((o - pi / 2.0).abs() < 1e-12, "{o}");
        // Arc separation beyond half the perimeter is rejected.
        assert!(f.maximal_oscillation(2.5, Metric::Arc).is_err());
    }

    #[test]
    fn arc_oscillation_exceeds_pi_on_long_windows() {
        // Equilateral triangle, side 1: a window of arc 1.4 spans two
        // corners, lift difference 2 * (2 pi / 3) > pi.
        let h = 0.5 * 3f64.sqrt();
        let tri = ConvexPolyline2::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, h),
        ])
        .unwrap();
        let f = LiftedNormalField::new(&tri);
        let w = f.maximal_oscillation(1.4, Metric::Arc).unwrap();
        assert!((w - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-12, "{w}");
        // And the square never exceeds pi below half its perimeter.
        let f = LiftedNormalField::new(&unit_square());
        let w = f.maximal_oscillation(1.99, Metric::Arc).unwrap();
        assert!((w - std::f64::consts::PI).abs() < 1e-12, "{w}");
    }

    #[test]
    fn inscribed_ngon_chord_oscillations_match_closed_form() {
        // Regular n-gon inscribed in the unit circle, beta = 2 pi / n:
        // max oscillation = (m + 1) beta with m the largest vertex gap whose
        // chord fits in tau; min oscillation = (m* - 1) beta with m* the
        // smallest gap whose chord reaches tau.
        let n = 96;
        let beta = std::f64::consts::TAU / n as f64;
        let f = LiftedNormalField::new(&regular_ngon_in_circle(n, 1.0));
        for &tau in &[0.05, 0.11, 0.38, 0.9] {
            let m = (1..n).take_while(|&m| 2.0 * (m as f64 * beta / 2.0).sin() <= tau).count();
            let want_max = (m as f64 + 1.0) * beta;
            let got = f.maximal_oscillation(tau, Metric::Chord).unwrap();
            assert!((got - want_max).abs() < 1e-12, "tau {tau}: {got} vs {want_max}");

            let mstar = (1..n).find(|&m| 2.0 * (m as f64 * beta / 2.0).sin() >= tau).unwrap();
            let want_min = (mstar as f64 - 1.0) * beta;
            let got = f.minimal_oscillation(tau, Metric::Chord).unwrap().unwrap();
            assert!((got - want_min).abs() < 1e-12, "tau {tau}: {got} vs {want_min}");
        }
    }

    #[test]
    fn fine_ngon_tracks_smooth_circle_within_two_steps() {
        let n = 4096;
        let beta = std::f64::consts::TAU / n as f64;
        let f = LiftedNormalField::new(&regular_ngon_in_circle(n, 1.0));
        for &tau in &[0.01, 0.05, 0.1] {
            let smooth = 2.0 * (tau / 2.0f64).asin();
            let w = f.maximal_oscillation(tau, Metric::Chord).unwrap();
            let o = f.minimal_oscillation(tau, Metric::Chord).unwrap().unwrap();
            assert!((w - smooth).abs() <= 2.0 * beta, "max: {w} vs {smooth}");
            assert!((o - smooth).abs() <= 2.0 * beta, "min: {o} vs {smooth}");
            assert!(o <= smooth + 1e-15 && smooth <= w + 1e-15);
        }
    }

    #[test]
    fn arc_oscillations_track_arc_rate_on_fine_ngon() {
        let n = 4096;
        let beta = std::f64::consts::TAU / n as f64;
        let f = LiftedNormalField::new(&regular_ngon_in_circle(n, 1.0));
        let ll = f.perimeter();
        for &tau in &[0.01, 0.05, 0.1] {
            let rate = tau * std::f64::consts::TAU / ll;
            let w = f.maximal_oscillation(tau, Metric::Arc).unwrap();
            let o = f.minimal_oscillation(tau, Metric::Arc).unwrap().unwrap();
            assert!(w >= rate - 1e-12 && w <= rate + 2.0 * beta, "{w} vs {rate}");
            assert!(o <= rate + 1e-12 && o >= rate - 2.0 * beta, "{o} vs {rate}");
        }
    }

    #[test]
    fn curvature_estimate_on_circle() {
        // Radius 2: curvature 1/2. Probes at modest arc distance reproduce
        // it to much better than a percent.
        let f = LiftedNormalField::new(&regular_ngon_in_circle(4096, 2.0));
        for &v in &[0usize, 17, 1000, 4095] {
            let k = f.curvature_estimate(v, 0.01).unwrap();
            assert!((k - 0.5).abs() < 0.005, "vertex {v}: {k}");
        }
    }

    #[test]
    fn curvature_estimate_rejects_bad_probe() {
        let f = LiftedNormalField::new(&unit_square());
        assert!(f.curvature_estimate(0, 0.0).is_err());
        assert!(f.curvature_estimate(0, 2.0).is_err());
        assert!(f.curvature_estimate(9, 0.1).is_err());
    }

    #[test]
    fn curvature_bounds_hold_on_fine_circle() {
        let f = LiftedNormalField::new(&regular_ngon_in_circle(1024, 1.0));
        let up = check_curvature_upper(&f, 1.0, 0.1).unwrap();
        assert!(up.holds, "lhs {} rhs {}", up.lhs, up.rhs);
        let lo = check_curvature_lower(&f, 1.0, 0.1).unwrap();
        assert!(lo.holds, "lhs {} rhs {}", lo.lhs, lo.rhs);
        // A curvature claim that is badly wrong must fail the check.
        let wrong = check_curvature_upper(&f, 0.2, 0.5).unwrap();
        assert!(!wrong.holds, "lhs {} rhs {}", wrong.lhs, wrong.rhs);
        let wrong = check_curvature_lower(&f, 3.0, 0.5).unwrap();
        assert!(!wrong.holds, "lhs {} rhs {}", wrong.lhs, wrong.rhs);
    }

    #[test]
    fn locate_and_points() {
        let f = LiftedNormalField::new(&unit_square());
        assert_eq!(f.locate(0.0), Location::Vertex(0));
        assert_eq!(f.locate(1.0), Location::Vertex(1));
        assert_eq!(f.locate(4.0), Location::Vertex(0));
        assert_eq!(f.locate(-1.0), Location::Vertex(3));
        match f.locate(2.5) {
            Location::Edge(2, t) => assert!((t - 0.5).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let p = f.point_at_arc(2.5);
        assert!((p.x - 0.5).abs() < 1e-12 && (p.y - 1.0).abs() < 1e-12);
        assert_eq!(f.nearest_vertex(0.4), 0);
        assert_eq!(f.nearest_vertex(0.6), 1);
    }

    #[test]
    fn fold_range_cases() {
        let pi = std::f64::consts::PI;
        // Interval through an odd multiple of pi; min at the endpoint
        // nearer to an even multiple.
        let (mn, mx) = fold_range(2.9, 3.3);
        assert_eq!(mx, pi);
        assert!((mn - fold_angle(2.9)).abs() < 1e-15);
        // Interval through zero.
        let (mn, mx) = fold_range(-0.2, 0.5);
        assert_eq!(mn, 0.0);
        assert!((mx - 0.5).abs() < 1e-15);
        // Interval through 2 pi.
        let (mn, mx) = fold_range(6.0, 6.6);
        assert_eq!(mn, 0.0);
        assert!((mx - fold_angle(6.6)).abs() < 1e-15);
        // Interval inside one monotone branch.
        let (mn, mx) = fold_range(0.3, 0.7);
        assert!((mn - 0.3).abs() < 1e-15 && (mx - 0.7).abs() < 1e-15);
    }

    #[test]
    fn seg_seg_distance_cases() {
        let d = seg_seg_dist(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 1.0),
        );
        assert!((d - 1.0).abs() < 1e-15);
        // Crossing segments.
        let d = seg_seg_dist(
            Point2::new(-1.0, -1.0),
            Point2::new(1.0, 1.0),
            Point2::new(-1.0, 1.0),
            Point2::new(1.0, -1.0),
        );
        assert!(d < 1e-12);
        // Point to segment.
        let d = seg_seg_dist(
            Point2::new(2.0, 1.0),
            Point2::new(2.0, 1.0),
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
        );
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
    }
}
