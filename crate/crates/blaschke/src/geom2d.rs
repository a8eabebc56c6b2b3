//! Planar primitives and convex polygonal boundaries.
//!
//! Conventions used across the crate:
//!
//! * Convex bodies in the plane are represented by their boundary polygon,
//!   a strictly convex counterclockwise vertex loop ([`ConvexPolyline2`]).
//!   The constructor normalizes orientation, removes duplicate and collinear
//!   vertices, and rejects anything non-convex, so downstream code may
//!   assume strict convexity.
//! * Containment tests take an explicit tolerance `tol >= 0`: a point is
//!   accepted if it is inside or at most `tol` outside the boundary.
//!   `tol = 0` is exact for vertices of the polygon itself: the edge cross
//!   product vanishes identically in IEEE arithmetic when the query point is
//!   an edge endpoint.

use serde::{Deserialize, Serialize};

use crate::{smalllp, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    /// Rotation by +90 degrees. For a counterclockwise edge vector this
    /// points into the polygon.
    pub fn rot90(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl std::ops::Add<Vec2> for Point2 {
    type Output = Point2;
    fn add(self, v: Vec2) -> Point2 {
        Point2::new(self.x + v.x, self.y + v.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Vec2;
    fn sub(self, other: Point2) -> Vec2 {
        Vec2::new(self.x - other.x, self.y - other.y)
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x + other.x, self.y + other.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x - other.x, self.y - other.y)
    }
}

impl std::ops::Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Plane angle in radians. Wrapped in a struct so that angular quantities
/// are not silently mixed with lengths in function signatures.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle {
    pub radians: f64,
}

impl Angle {
    pub const fn new(radians: f64) -> Self {
        Angle { radians }
    }

    pub fn unit_vector(self) -> Vec2 {
        Vec2::new(self.radians.cos(), self.radians.sin())
    }
}

/// Fold an arbitrary lifted angle difference into [0, pi], the geodesic
/// distance between two directions on the circle.
pub fn fold_angle(delta: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut d = delta.abs() % two_pi;
    if d > std::f64::consts::PI {
        d = two_pi - d;
    }
    d
}

/// Angle between two vectors, in [0, pi]. Uses the cross/dot form rather
/// than acos of the normalized dot product: near 0 and pi the latter loses
/// half the significant digits.
pub fn angle_between(u: Vec2, v: Vec2) -> f64 {
    u.cross(v).abs().atan2(u.dot(v))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point2,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point2, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn contains_point(&self, p: Point2, tol: f64) -> bool {
        self.center.dist(p) <= self.radius + tol
    }

    /// All vertices of `poly` within the disk (sufficient for convex bodies).
    pub fn contains_polygon(&self, poly: &ConvexPolyline2, tol: f64) -> bool {
        poly.vertices().iter().all(|&v| self.contains_point(v, tol))
    }

    /// Largest distance by which a vertex of `poly` escapes the disk;
    /// nonpositive when the polygon is contained.
    pub fn max_escape(&self, poly: &ConvexPolyline2) -> f64 {
        poly.vertices()
            .iter()
            .map(|&v| self.center.dist(v) - self.radius)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Strictly convex counterclockwise vertex loop.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolyline2 {
    verts: Vec<Point2>,
}

impl ConvexPolyline2 {
    /// Build from a vertex loop in either orientation.
    ///
    /// Consecutive duplicates and collinear runs are merged with a tolerance
    /// relative to the bounding-box diagonal; a reflex vertex beyond that
    /// tolerance is an error. At least three vertices must survive.
    pub fn new(verts: Vec<Point2>) -> Result<Self> {
        if verts.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::domain("polygon has a non-finite coordinate"));
        }
        if verts.len() < 3 {
            return Err(Error::domain(format!(
                "polygon needs at least 3 vertices, got {}",
                verts.len()
            )));
        }
        let scale = bbox_diag(&verts);
        if scale == 0.0 {
            return Err(Error::domain("polygon is a single point"));
        }
        let dist_tol = 1e-12 * scale;
        let area_tol = 1e-12 * scale * scale;

        // Drop consecutive duplicates (wrap included).
        let mut v: Vec<Point2> = Vec::with_capacity(verts.len());
        for p in verts {
            if v.last().map_or(true, |&q| p.dist(q) > dist_tol) {
                v.push(p);
            }
        }
        while v.len() >= 2 && v[0].dist(*v.last().unwrap()) <= dist_tol {
            v.pop();
        }
        if v.len() < 3 {
            return Err(Error::domain("polygon degenerates to fewer than 3 vertices"));
        }

        if signed_area(&v) < 0.0 {
            v.reverse();
        }

        // Merge collinear vertices until stable; reject reflex turns.
        loop {
            let n = v.len();
            if n < 3 {
                return Err(Error::domain("polygon degenerates to fewer than 3 vertices"));
            }
            let mut drop_idx = None;
            for i in 0..n {
                let a = v[(i + n - 1) % n];
                let b = v[i];
                let c = v[(i + 1) % n];
                let cr = (b - a).cross(c - b);
                if cr <= area_tol {
                    if cr < -area_tol {
                        return Err(Error::domain(format!(
                            "polygon is not convex: reflex turn at vertex {i} ({}, {})",
                            b.x, b.y
                        )));
                    }
                    if (b - a).dot(c - b) <= 0.0 {
                        return Err(Error::domain(format!(
                            "polygon is not convex: boundary reverses at vertex {i}"
                        )));
                    }
                    drop_idx = Some(i);
                    break;
                }
            }
            match drop_idx {
                Some(i) => {
                    v.remove(i);
                }
                None => break,
            }
        }
        Ok(ConvexPolyline2 { verts: v })
    }

    /// Caller guarantees: counterclockwise, strictly convex, finite.
    pub(crate) fn from_ccw_unchecked(verts: Vec<Point2>) -> Self {
        debug_assert!(verts.len() >= 3);
        ConvexPolyline2 { verts }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.verts[i % self.verts.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1` (mod n).
    pub fn edge(&self, i: usize) -> (Point2, Point2) {
        let n = self.verts.len();
        (self.verts[i % n], self.verts[(i + 1) % n])
    }

    pub fn edge_vec(&self, i: usize) -> Vec2 {
        let (a, b) = self.edge(i);
        b - a
    }

    /// Outward unit normal of edge `i`.
    pub fn edge_normal(&self, i: usize) -> Vec2 {
        (-self.edge_vec(i).rot90()).normalized()
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.len()).map(|i| self.edge_vec(i).norm()).sum()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.verts)
    }

    pub fn centroid(&self) -> Point2 {
        // Area-weighted centroid of the enclosed region.
        let n = self.len();
        let (mut ax, mut cx, mut cy) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let (a, b) = self.edge(i);
            let w = a.x * b.y - b.x * a.y;
            ax += w;
            cx += (a.x + b.x) * w;
            cy += (a.y + b.y) * w;
        }
        Point2::new(cx / (3.0 * ax), cy / (3.0 * ax))
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.verts {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }

    /// Bounding-box diagonal, the length scale for relative tolerances.
    pub fn scale_len(&self) -> f64 {
        bbox_diag(&self.verts)
    }

    /// Largest vertex-to-vertex distance. Exact pairwise scan; quadratic,
    /// meant for diagnostics and modest vertex counts.
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(self.verts[i].dist(self.verts[j]));
            }
        }
        best
    }

    /// Signed clearance of `p`: the smallest over all edges of the distance
    /// from `p` to the edge line, positive on the interior side.
    ///
    /// Inside the polygon this is the exact distance to the boundary.
    /// Outside it is a lower bound for the distance (exact when the nearest
    /// boundary feature is an edge interior), and always negative.
    pub fn signed_clearance(&self, p: Point2) -> f64 {
        let n = self.len();
        let mut worst = f64::INFINITY;
        for i in 0..n {
            let (a, b) = self.edge(i);
            let e = b - a;
            let cr = e.cross(p - a);
            let d = cr / e.norm();
            if d < worst {
                worst = d;
            }
        }
        worst
    }

    /// `p` inside or at most `tol` outside.
    pub fn contains_point(&self, p: Point2, tol: f64) -> bool {
        let n = self.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            let e = b - a;
            let cr = e.cross(p - a);
            if cr < 0.0 && cr < -tol * e.norm() {
                return false;
            }
        }
        true
    }

    /// Every vertex of `other` inside (up to `tol`); for convex `other`
    /// this is containment of the whole body.
    pub fn contains_polygon(&self, other: &ConvexPolyline2, tol: f64) -> bool {
        other.verts.iter().all(|&v| self.contains_point(v, tol))
    }

    /// Largest violation of containment over `other`'s vertices: positive
    /// means some vertex lies outside by at least that much, nonpositive
    /// means contained with that margin.
    pub fn max_violation(&self, other: &ConvexPolyline2) -> f64 {
        other
            .verts
            .iter()
            .map(|&v| -self.signed_clearance(v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Disk inside the polygon (up to `tol`).
    pub fn contains_disk(&self, d: &Disk, tol: f64) -> bool {
        self.signed_clearance(d.center) >= d.radius - tol
    }

    /// Image under `p -> scale * R(rot) p + shift`, with `scale > 0`.
    pub fn transformed(&self, rot: Angle, scale: f64, shift: Vec2) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() || !rot.radians.is_finite() {
            return Err(Error::domain("transform needs a finite rotation and scale > 0"));
        }
        let (s, c) = rot.radians.sin_cos();
        let verts = self
            .verts
            .iter()
            .map(|p| {
                Point2::new(
                    scale * (c * p.x - s * p.y) + shift.x,
                    scale * (s * p.x + c * p.y) + shift.y,
                )
            })
            .collect();
        // Orientation-preserving similarity: convexity and order survive.
        Ok(ConvexPolyline2::from_ccw_unchecked(verts))
    }

    pub fn translated(&self, shift: Vec2) -> Self {
        ConvexPolyline2::from_ccw_unchecked(self.verts.iter().map(|&p| p + shift).collect())
    }

    /// Center and radius of the largest inscribed disk.
    pub fn largest_inscribed_disk(&self) -> Disk {
        let scale = self.scale_len();
        // Maximize r subject to u_i . c + r <= u_i . a_i for every edge,
        // u_i the outward unit normal. Box bound keeps the LP bounded.
        let mut cons: Vec<smalllp::Constraint> = Vec::with_capacity(self.len() + 1);
        for i in 0..self.len() {
            let (a, _) = self.edge(i);
            let u = self.edge_normal(i);
            cons.push(smalllp::Constraint {
                a: [u.x, u.y, 1.0, 0.0],
                b: u.x * a.x + u.y * a.y,
            });
        }
        cons.push(smalllp::Constraint {
            a: [0.0, 0.0, -1.0, 0.0],
            b: 0.0,
        });
        let (lo, hi) = self.bbox();
        let big = 2.0 * scale + hi.x.abs().max(hi.y.abs()).max(lo.x.abs()).max(lo.y.abs());
        let sol = smalllp::maximize(3, &[0.0, 0.0, 1.0, 0.0], &cons, big)
            .expect("inscribed-disk LP is feasible for a valid convex polygon");
        Disk::new(Point2::new(sol[0], sol[1]), sol[2])
    }

    /// Smallest disk containing the polygon (Welzl, deterministic shuffle).
    pub fn min_enclosing_disk(&self) -> Disk {
        min_disk_of_points(&self.verts)
    }
}

/// Repeated-query containment tests against one convex polygon.
///
/// Precomputes vertex angles about an interior anchor; each query locates
/// the angular wedge containing the point by binary search. The point is
/// inside exactly when it lies on the inner side of the wedge's edge, and
/// for an outside point the violated edges form one contiguous run around
/// that edge, so the deepest line violation is found by walking outward
/// while edges stay violated. O(log n) per inside query, O(log n + run)
/// for outside ones.
pub struct ContainmentOracle<'a> {
    poly: &'a ConvexPolyline2,
    anchor: Point2,
    /// Vertex angles about the anchor, unwrapped to be strictly
    /// increasing starting from vertex 0: angles[i] covers vertex i,
    /// angles[n] = angles[0] + 2 pi.
    angles: Vec<f64>,
}

impl<'a> ContainmentOracle<'a> {
    pub fn new(poly: &'a ConvexPolyline2) -> Self {
        let anchor = poly.centroid();
        let n = poly.len();
        let mut angles = Vec::with_capacity(n + 1);
        let mut prev = (poly.vertex(0) - anchor).angle();
        angles.push(prev);
        for i in 1..n {
            let mut a = (poly.vertex(i) - anchor).angle();
            while a <= prev {
                a += std::f64::consts::TAU;
            }
            angles.push(a);
            prev = a;
        }
        angles.push(angles[0] + std::f64::consts::TAU);
        ContainmentOracle { poly, anchor, angles }
    }

    /// Index of the edge crossed by the ray from the anchor through `p`.
    fn wedge_edge(&self, p: Point2) -> usize {
        let n = self.poly.len();
        let mut t = (p - self.anchor).angle();
        while t < self.angles[0] {
            t += std::f64::consts::TAU;
        }
        // Largest i with angles[i] <= t; angles[n] bounds the search.
        let mut lo = 0usize;
        let mut hi = n;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if self.angles[mid] <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Depth of containment violation: 0 when `p` is inside, otherwise the
    /// deepest signed distance beyond any edge line (the true boundary
    /// distance or a close lower bound).
    pub fn violation(&self, p: Point2) -> f64 {
        let n = self.poly.len();
        let e0 = self.wedge_edge(p);
        let depth = |i: usize| -> f64 {
            let (a, b) = self.poly.edge(i);
            let e = b - a;
            -e.cross(p - a) / e.norm()
        };
        let d0 = depth(e0);
        if d0 <= 0.0 {
            return 0.0;
        }
        let mut worst = d0;
        // Walk both directions while edges remain violated.
        let mut steps = 1usize;
        let mut i = (e0 + 1) % n;
        while steps < n {
            let d = depth(i);
            if d <= 0.0 {
                break;
            }
            worst = worst.max(d);
            i = (i + 1) % n;
            steps += 1;
        }
        let mut i = (e0 + n - 1) % n;
        while steps < n {
            let d = depth(i);
            if d <= 0.0 {
                break;
            }
            worst = worst.max(d);
            i = (i + n - 1) % n;
            steps += 1;
        }
        worst
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.violation(p) <= tol
    }
}

pub(crate) fn signed_area(verts: &[Point2]) -> f64 {
    let n = verts.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    0.5 * s
}

fn bbox_diag(verts: &[Point2]) -> f64 {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in verts {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (hi - lo).norm()
}

/// Minkowski sum of two convex bodies: merge the edge fans by direction.
pub fn minkowski_sum(a: &ConvexPolyline2, b: &ConvexPolyline2) -> Result<ConvexPolyline2> {
    let start = |p: &ConvexPolyline2| {
        (0..p.len())
            .min_by(|&i, &j| {
                let (pi, pj) = (p.vertex(i), p.vertex(j));
                (pi.y, pi.x).partial_cmp(&(pj.y, pj.x)).unwrap()
            })
            .unwrap()
    };
    // From the bottom-most vertex of a counterclockwise polygon, outgoing
    // edge directions sweep [0, 2pi) monotonically.
    let pseudo = |v: Vec2| -> f64 {
        let t = v.angle();
        if t < 0.0 {
            t + std::f64::consts::TAU
        } else {
            t
        }
    };
    let (ia, ib) = (start(a), start(b));
    let (na, nb) = (a.len(), b.len());
    let mut out: Vec<Point2> = Vec::with_capacity(na + nb);
    let mut cur = a.vertex(ia) + (b.vertex(ib) - Point2::new(0.0, 0.0));
    let (mut i, mut j) = (0usize, 0usize);
    while i < na || j < nb {
        out.push(cur);
        let ea = (i < na).then(|| a.edge_vec(ia + i));
        let eb = (j < nb).then(|| b.edge_vec(ib + j));
        let step = match (ea, eb) {
            (Some(ea), Some(eb)) => {
                let (ta, tb) = (pseudo(ea), pseudo(eb));
                if (ta - tb).abs() < 1e-12 {
                    i += 1;
                    j += 1;
                    ea + eb
                } else if ta < tb {
                    i += 1;
                    ea
                } else {
                    j += 1;
                    eb
                }
            }
            (Some(ea), None) => {
                i += 1;
                ea
            }
            (None, Some(eb)) => {
                j += 1;
                eb
            }
            (None, None) => unreachable!(),
        };
        cur = cur + step;
    }
    ConvexPolyline2::new(out)
}

/// Smallest enclosing disk of a point set. Expected linear time after a
/// deterministic shuffle; exact support of at most three points.
pub fn min_disk_of_points(pts: &[Point2]) -> Disk {
    assert!(!pts.is_empty());
    let mut p: Vec<Point2> = pts.to_vec();
    crate::rng::Xoshiro256StarStar::seed_from_u64(0x77656c7a6c).shuffle(&mut p);
    let scale = bbox_diag(&p).max(1e-300);
    let tol = 1e-12 * scale;
    let inside = |d: &Disk, q: Point2| d.center.dist(q) <= d.radius + tol;

    let mut d = Disk::new(p[0], 0.0);
    for i in 1..p.len() {
        if inside(&d, p[i]) {
            continue;
        }
        d = Disk::new(p[i], 0.0);
        for j in 0..i {
            if inside(&d, p[j]) {
                continue;
            }
            d = disk_from_2(p[i], p[j]);
            for k in 0..j {
                if inside(&d, p[k]) {
                    continue;
                }
                d = disk_from_3(p[i], p[j], p[k]);
            }
        }
    }
    d
}

fn disk_from_2(a: Point2, b: Point2) -> Disk {
    let c = Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
    Disk::new(c, c.dist(a))
}

fn disk_from_3(a: Point2, b: Point2, c: Point2) -> Disk {
    let (abx, aby) = (b.x - a.x, b.y - a.y);
    let (acx, acy) = (c.x - a.x, c.y - a.y);
    let det = 2.0 * (abx * acy - aby * acx);
    if det.abs() < 1e-14 * (abx.hypot(aby) * acx.hypot(acy)).max(f64::MIN_POSITIVE) {
        // Nearly collinear: diameter of the farthest pair.
        let cands = [disk_from_2(a, b), disk_from_2(a, c), disk_from_2(b, c)];
        return cands
            .into_iter()
            .max_by(|x, y| x.radius.partial_cmp(&y.radius).unwrap())
            .unwrap();
    }
    let ab2 = abx * abx + aby * aby;
    let ac2 = acx * acx + acy * acy;
    let cx = a.x + (acy * ab2 - aby * ac2) / det;
    let cy = a.y + (abx * ac2 - acx * ab2) / det;
    let center = Point2::new(cx, cy);
    let r = center.dist(a).max(center.dist(b)).max(center.dist(c));
    Disk::new(center, r)
}
