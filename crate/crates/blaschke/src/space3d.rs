//! Plane sections of convex polytopes and the comparison bounds that carry
//! the planar rolling certificates into space.
//!
//! The pipeline: a `ConvexPolytope3` knows its Chebyshev ball B(c, r) and
//! the enclosing ball B(c, R) about the same center. Cutting the polytope
//! with a plane through c yields a `PlaneSection`, a convex polygon whose
//! edges remember which facet they came from. The boundary normal field of
//! the polytope (facet normals, edge arcs, vertex fans) has a modulus of
//! continuity just like a planar curve's, and the section's own 2-D
//! modulus is controlled by it through the ratio 2R/r. Once the section
//! modulus is small enough, the planar mangled-polygon certificate applies
//! inside every section through a boundary point, which is the space form
//! of the inscribed rolling theorem.

use std::collections::HashMap;

use serde::Serialize;

use crate::geom2d::{ConvexPolyline2, ContainmentOracle, Point2, Vec2};
use crate::harness::Status;
use crate::ngons;
use crate::normal_field::{LiftedNormalField, Metric};
use crate::rng::Xoshiro256StarStar;
use crate::smalllp;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub type Point3 = Vec3;

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        Vec3::new(self.x / n, self.y / n, self.z / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl std::ops::Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Unsigned angle between two nonzero vectors, in [0, pi]. Uses atan2 of
/// the cross magnitude for accuracy near 0 and pi.
pub fn angle_between3(u: Vec3, w: Vec3) -> f64 {
    u.cross(w).norm().atan2(u.dot(w))
}

// ---------------------------------------------------------------------------
// Distance primitives. All exact up to rounding; features of a polytope
// boundary are compared by the distance between their closed point sets.

fn dist_point_seg3(p: Point3, a: Point3, b: Point3) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 <= 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn dist_seg_seg3(p1: Point3, q1: Point3, p2: Point3, q2: Point3) -> f64 {
    // Closest points of two segments; clamped-parameter form.
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p1 - p2;
    let a = d1.dot(d1);
    let e = d2.dot(d2);
    let f = d2.dot(r);
    let (s, t);
    if a <= 1e-300 && e <= 1e-300 {
        return r.norm();
    }
    if a <= 1e-300 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(r);
        if e <= 1e-300 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let mut sv = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut tv = (b * sv + f) / e;
            if tv < 0.0 {
                tv = 0.0;
                sv = (-c / a).clamp(0.0, 1.0);
            } else if tv > 1.0 {
                tv = 1.0;
                sv = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = sv;
            t = tv;
        }
    }
    ((p1 + d1 * s) - (p2 + d2 * t)).norm()
}

/// Distance from a point to a planar convex polygon given by its vertex
/// ring, plane normal, and offset.
fn dist_point_facet(p: Point3, ring: &[Point3], normal: Vec3, offset: f64) -> f64 {
    let h = normal.dot(p) - offset;
    let foot = p - normal * h;
    let m = ring.len();
    let mut inside = true;
    for i in 0..m {
        let a = ring[i];
        let b = ring[(i + 1) % m];
        // Inward side of edge (a,b) for a ring wound CCW about `normal`.
        if normal.cross(b - a).dot(foot - a) < 0.0 {
            inside = false;
            break;
        }
    }
    if inside {
        return h.abs();
    }
    let mut best = f64::INFINITY;
    for i in 0..m {
        best = best.min(dist_point_seg3(p, ring[i], ring[(i + 1) % m]));
    }
    best
}

fn dist_seg_facet(a: Point3, b: Point3, ring: &[Point3], normal: Vec3, offset: f64) -> f64 {
    let sa = normal.dot(a) - offset;
    let sb = normal.dot(b) - offset;
    if sa * sb < 0.0 {
        // The segment pierces the facet plane; zero if it pierces the facet.
        let t = sa / (sa - sb);
        let hit = a + (b - a) * t;
        let m = ring.len();
        let mut inside = true;
        for i in 0..m {
            if normal.cross(ring[(i + 1) % m] - ring[i]).dot(hit - ring[i]) < 0.0 {
                inside = false;
                break;
            }
        }
        if inside {
            return 0.0;
        }
    }
    let mut best = dist_point_facet(a, ring, normal, offset)
        .min(dist_point_facet(b, ring, normal, offset));
    let m = ring.len();
    for i in 0..m {
        best = best.min(dist_seg_seg3(a, b, ring[i], ring[(i + 1) % m]));
    }
    best
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct Facet3 {
    /// Outward unit normal.
    pub normal: Vec3,
    /// Plane offset: normal . x = offset on the facet plane.
    pub offset: f64,
    /// Vertex ring, counterclockwise seen from outside.
    pub verts: Vec<u32>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Edge3 {
    pub v: [u32; 2],
    pub f: [u32; 2],
}

/// A bounded convex polytope given by vertices and oriented facet rings.
///
/// Construction validates that the facet complex is a closed convex
/// surface: every edge is shared by exactly two facets with opposite
/// orientations, the Euler count V - E + F is 2, and each facet's
/// neighbors lie weakly behind its plane. Local convexity of a closed
/// connected surface implies global convexity, so the per-edge test
/// replaces the quadratic all-vertices-behind-all-facets scan.
#[derive(Clone, Debug)]
pub struct ConvexPolytope3 {
    verts: Vec<Point3>,
    facets: Vec<Facet3>,
    edges: Vec<Edge3>,
    /// Facets incident to each vertex, ascending.
    vert_facets: Vec<Vec<u32>>,
    center: Point3,
    inradius: f64,
    outradius: f64,
    scale: f64,
}

impl ConvexPolytope3 {
    pub fn new(verts: Vec<Point3>, facet_rings: Vec<Vec<u32>>) -> Result<Self> {
        let nv = verts.len();
        if nv < 4 {
            return Err(Error::domain(format!("a solid needs at least 4 vertices, got {nv}")));
        }
        for (i, v) in verts.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::domain(format!("vertex {i} is not finite")));
            }
        }
        if facet_rings.len() < 4 {
            return Err(Error::domain(format!(
                "a solid needs at least 4 facets, got {}",
                facet_rings.len()
            )));
        }
        let (mut lo, mut hi) = (verts[0], verts[0]);
        for v in &verts {
            lo = Vec3::new(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
            hi = Vec3::new(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
        }
        let scale = (hi - lo).norm();
        if scale <= 0.0 {
            return Err(Error::domain("all vertices coincide"));
        }
        let plane_tol = 1e-9 * scale;

        let mut facets = Vec::with_capacity(facet_rings.len());
        for (fi, ring) in facet_rings.iter().enumerate() {
            if ring.len() < 3 {
                return Err(Error::domain(format!("facet {fi} has fewer than 3 vertices")));
            }
            let mut seen = ring.to_vec();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != ring.len() {
                return Err(Error::domain(format!("facet {fi} repeats a vertex")));
            }
            for &v in ring {
                if v as usize >= nv {
                    return Err(Error::domain(format!(
                        "facet {fi} references vertex {v} out of range"
                    )));
                }
            }
            // Newell normal; for a CCW-from-outside ring it points outward.
            let mut n = Vec3::new(0.0, 0.0, 0.0);
            for i in 0..ring.len() {
                let a = verts[ring[i] as usize];
                let b = verts[ring[(i + 1) % ring.len()] as usize];
                n = n + a.cross(b);
            }
            if n.norm() <= 1e-12 * scale * scale {
                return Err(Error::domain(format!("facet {fi} is degenerate (zero area)")));
            }
            let n = n.normalized();
            let offset =
                ring.iter().map(|&v| n.dot(verts[v as usize])).sum::<f64>() / ring.len() as f64;
            for &v in ring {
                if (n.dot(verts[v as usize]) - offset).abs() > plane_tol {
                    return Err(Error::domain(format!(
                        "facet {fi} is not planar: vertex {v} is {:.3e} off the plane",
                        (n.dot(verts[v as usize]) - offset).abs()
                    )));
                }
            }
            facets.push(Facet3 { normal: n, offset, verts: ring.clone() });
        }

        // Edge pairing: every directed edge must be matched by its reverse
        // in exactly one other facet.
        let mut edge_map: HashMap<(u32, u32), Vec<(u32, bool)>> = HashMap::new();
        for (fi, f) in facets.iter().enumerate() {
            let m = f.verts.len();
            for i in 0..m {
                let a = f.verts[i];
                let b = f.verts[(i + 1) % m];
                let key = (a.min(b), a.max(b));
                edge_map.entry(key).or_default().push((fi as u32, a < b));
            }
        }
        let mut edges = Vec::with_capacity(edge_map.len());
        for (&(a, b), users) in &edge_map {
            if users.len() != 2 || users[0].1 == users[1].1 {
                return Err(Error::domain(format!(
                    "edge ({a},{b}) is used by {} facet sides; a closed surface needs exactly one pair of opposite orientations",
                    users.len()
                )));
            }
            edges.push(Edge3 { v: [a, b], f: [users[0].0, users[1].0] });
        }
        edges.sort_by_key(|e| e.v);

        let mut vert_facets: Vec<Vec<u32>> = vec![Vec::new(); nv];
        for (fi, f) in facets.iter().enumerate() {
            for &v in &f.verts {
                vert_facets[v as usize].push(fi as u32);
            }
        }
        for (v, fl) in vert_facets.iter_mut().enumerate() {
            fl.sort_unstable();
            if fl.is_empty() {
                return Err(Error::domain(format!("vertex {v} is not used by any facet")));
            }
        }

        let euler = nv as i64 - edges.len() as i64 + facets.len() as i64;
        if euler != 2 {
            return Err(Error::domain(format!(
                "facet complex is not a closed ball surface: V - E + F = {euler}, expected 2"
            )));
        }

        // Local convexity at every edge: each facet's partner stays weakly
        // behind its plane.
        for e in &edges {
            for (fa, fb) in [(e.f[0], e.f[1]), (e.f[1], e.f[0])] {
                let pa = &facets[fa as usize];
                let mut worst = 0.0f64;
                for &v in &facets[fb as usize].verts {
                    worst = worst.max(pa.normal.dot(verts[v as usize]) - pa.offset);
                }
                if worst > plane_tol {
                    return Err(Error::domain(format!(
                        "surface is not convex (or a facet is inverted) at edge ({},{}): neighbor protrudes {worst:.3e}",
                        e.v[0], e.v[1]
                    )));
                }
            }
        }

        // Chebyshev ball: maximize m subject to n_f . c + m <= offset_f.
        let mut max_coord = 0.0f64;
        for v in &verts {
            max_coord = max_coord.max(v.x.abs()).max(v.y.abs()).max(v.z.abs());
        }
        let box_bound = 2.0 * (max_coord + scale) + 1.0;
        let cons: Vec<smalllp::Constraint> = facets
            .iter()
            .map(|f| smalllp::Constraint {
                a: [f.normal.x, f.normal.y, f.normal.z, 1.0],
                b: f.offset,
            })
            .collect();
        let sol = smalllp::maximize(4, &[0.0, 0.0, 0.0, 1.0], &cons, box_bound)
            .ok_or_else(|| Error::domain("no inscribed ball exists (inconsistent facet planes)"))?;
        let center = Point3::new(sol[0], sol[1], sol[2]);
        let inradius = sol[3];
        if !(inradius > 0.0) {
            return Err(Error::domain(format!(
                "largest inscribed ball has radius {inradius:.3e}; the polytope is flat or inverted"
            )));
        }
        if inradius > scale {
            return Err(Error::domain(
                "inscribed ball exceeds the vertex extent; facet orientations are inverted",
            ));
        }
        let outradius = verts.iter().map(|&v| (v - center).norm()).fold(0.0, f64::max);

        Ok(ConvexPolytope3 { verts, facets, edges, vert_facets, center, inradius, outradius, scale })
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.verts
    }

    pub fn facets(&self) -> &[Facet3] {
        &self.facets
    }

    pub fn edges(&self) -> &[Edge3] {
        &self.edges
    }

    /// Facets incident to vertex `v`, ascending by index.
    pub fn vertex_facets(&self, v: usize) -> &[u32] {
        &self.vert_facets[v]
    }

    /// Chebyshev center: the largest inscribed ball sits here. All radius
    /// comparisons (the 2R/r factor) are taken about this point.
    pub fn center(&self) -> Point3 {
        self.center
    }

    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    /// Distance from the Chebyshev center to the farthest vertex.
    pub fn outradius(&self) -> f64 {
        self.outradius
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// The quadratic support check: every vertex weakly behind every
    /// facet. The constructor's per-edge test implies this; kept as an
    /// independent audit for tests and small inputs.
    pub fn verify_all_vertices_supported(&self) -> Result<()> {
        let tol = 1e-9 * self.scale;
        for (fi, f) in self.facets.iter().enumerate() {
            for (vi, v) in self.verts.iter().enumerate() {
                let d = f.normal.dot(*v) - f.offset;
                if d > tol {
                    return Err(Error::domain(format!(
                        "vertex {vi} is {d:.3e} outside facet {fi}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn facet_ring(&self, fi: u32) -> Vec<Point3> {
        self.facets[fi as usize]
            .verts
            .iter()
            .map(|&v| self.verts[v as usize])
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Generators.

/// Axis-aligned cube of side 2*half centered at the origin.
pub fn cube(half: f64) -> Result<ConvexPolytope3> {
    if !(half > 0.0) || !half.is_finite() {
        return Err(Error::domain(format!("cube half-side must be positive, got {half}")));
    }
    let h = half;
    let verts = vec![
        Point3::new(-h, -h, -h),
        Point3::new(h, -h, -h),
        Point3::new(h, h, -h),
        Point3::new(-h, h, -h),
        Point3::new(-h, -h, h),
        Point3::new(h, -h, h),
        Point3::new(h, h, h),
        Point3::new(-h, h, h),
    ];
    let rings = vec![
        vec![0, 3, 2, 1],
        vec![4, 5, 6, 7],
        vec![0, 1, 5, 4],
        vec![2, 3, 7, 6],
        vec![0, 4, 7, 3],
        vec![1, 2, 6, 5],
    ];
    ConvexPolytope3::new(verts, rings)
}

fn icosahedron_unit() -> (Vec<Point3>, Vec<[u32; 3]>) {
    let p = (1.0 + 5.0f64.sqrt()) / 2.0;
    let raw = [
        (-1.0, p, 0.0),
        (1.0, p, 0.0),
        (-1.0, -p, 0.0),
        (1.0, -p, 0.0),
        (0.0, -1.0, p),
        (0.0, 1.0, p),
        (0.0, -1.0, -p),
        (0.0, 1.0, -p),
        (p, 0.0, -1.0),
        (p, 0.0, 1.0),
        (-p, 0.0, -1.0),
        (-p, 0.0, 1.0),
    ];
    let verts = raw
        .iter()
        .map(|&(x, y, z)| Vec3::new(x, y, z).normalized())
        .collect();
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (verts, faces)
}

fn subdivide_unit_sphere(subdivisions: u32) -> (Vec<Point3>, Vec<[u32; 3]>) {
    let (mut verts, mut faces) = icosahedron_unit();
    for _ in 0..subdivisions {
        let mut midpoint: HashMap<(u32, u32), u32> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let mut mid = |u: u32, w: u32, verts: &mut Vec<Point3>| -> u32 {
                let key = (u.min(w), u.max(w));
                *midpoint.entry(key).or_insert_with(|| {
                    let m = (verts[u as usize] + verts[w as usize]).normalized();
                    verts.push(m);
                    (verts.len() - 1) as u32
                })
            };
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    (verts, faces)
}

/// Triangulated sphere: an icosahedron subdivided `subdivisions` times
/// with vertices pushed to radius `radius`. 20 * 4^s facets.
pub fn icosphere(radius: f64, subdivisions: u32) -> Result<ConvexPolytope3> {
    ellipsoid3(radius, radius, radius, subdivisions)
}

/// Triangulated ellipsoid with semi-axes (a, b, c): icosphere vertices
/// scaled per axis. The scaling keeps facet windings outward.
pub fn ellipsoid3(a: f64, b: f64, c: f64, subdivisions: u32) -> Result<ConvexPolytope3> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(format!("semi-axis {name} must be positive, got {v}")));
        }
    }
    if subdivisions > 7 {
        return Err(Error::domain(format!(
            "subdivision level {subdivisions} exceeds 7 (81920 facets at 6 is already fine-grained)"
        )));
    }
    let (unit, faces) = subdivide_unit_sphere(subdivisions);
    let verts = unit
        .into_iter()
        .map(|v| Point3::new(a * v.x, b * v.y, c * v.z))
        .collect();
    ConvexPolytope3::new(verts, faces.into_iter().map(|f| f.to_vec()).collect())
}

// ---------------------------------------------------------------------------
// Plane sections.

/// In-plane coordinate frame: origin plus an orthonormal pair spanning the
/// plane. 2-D coordinates are (e1, e2) components about the origin.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PlaneFrame {
    pub origin: Point3,
    pub e1: Vec3,
    pub e2: Vec3,
    pub normal: Vec3,
}

impl PlaneFrame {
    /// Frame through `origin` spanned by an orthonormal pair.
    pub fn new(origin: Point3, e1: Vec3, e2: Vec3) -> Result<Self> {
        let tol = 1e-12;
        if (e1.norm() - 1.0).abs() > tol || (e2.norm() - 1.0).abs() > tol {
            return Err(Error::domain("plane basis vectors must be unit length"));
        }
        if e1.dot(e2).abs() > tol {
            return Err(Error::domain(format!(
                "plane basis is not orthogonal: e1.e2 = {:.3e}",
                e1.dot(e2)
            )));
        }
        Ok(PlaneFrame { origin, e1, e2, normal: e1.cross(e2) })
    }

    pub fn project(&self, p: Point3) -> Point2 {
        let d = p - self.origin;
        Point2::new(d.dot(self.e1), d.dot(self.e2))
    }

    pub fn unproject(&self, q: Point2) -> Point3 {
        self.origin + self.e1 * q.x + self.e2 * q.y
    }
}

/// Normalized in-plane component of a 3-D direction.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProjectedNormal {
    /// Unit 2-D direction in frame coordinates.
    pub dir: Vec2,
    /// Length of the in-plane component before normalization, equal to
    /// the cosine of the angle between the direction and the plane.
    pub magnitude: f64,
}

/// Project a unit 3-D direction into the frame. Returns None when the
/// direction is perpendicular to the plane within 1e-12; for outward
/// normals at section boundary points this must not happen (the in-plane
/// component is at least r/R when the plane passes through the center).
pub fn project_normal(frame: &PlaneFrame, u: Vec3) -> Option<ProjectedNormal> {
    let w = Vec2::new(u.dot(frame.e1), u.dot(frame.e2));
    let m = w.norm();
    if m < 1e-12 {
        return None;
    }
    Some(ProjectedNormal { dir: Vec2::new(w.x / m, w.y / m), magnitude: m })
}

/// Where a section polygon vertex came from on the polytope boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionSource {
    /// The cutting plane crosses the interior of this polytope edge.
    EdgeCross { edge: u32 },
    /// The cutting plane passes through this polytope vertex.
    AtVertex { vertex: u32 },
}

#[derive(Clone, Debug)]
pub struct PlaneSection {
    pub frame: PlaneFrame,
    pub polygon: ConvexPolyline2,
    /// Facet containing polygon edge i.
    pub edge_facets: Vec<u32>,
    /// Provenance of polygon vertex i.
    pub vertex_sources: Vec<SectionSource>,
}

impl PlaneSection {
    /// Extreme outward 3-D normals at polygon vertex i: both facet
    /// normals of a crossed edge, or the full facet fan of a polytope
    /// vertex the plane passes through.
    pub fn vertex_normals(&self, body: &ConvexPolytope3, i: usize) -> Vec<Vec3> {
        match self.vertex_sources[i] {
            SectionSource::EdgeCross { edge } => {
                let e = body.edges()[edge as usize];
                vec![
                    body.facets()[e.f[0] as usize].normal,
                    body.facets()[e.f[1] as usize].normal,
                ]
            }
            SectionSource::AtVertex { vertex } => body
                .vertex_facets(vertex as usize)
                .iter()
                .map(|&f| body.facets()[f as usize].normal)
                .collect(),
        }
    }
}

/// Cut the polytope with the plane through its center spanned by the
/// orthonormal pair (e1, e2).
///
/// The cut walks the edge list once: vertices on the plane and crossed
/// edges become polygon vertices, sorted by angle about the center (which
/// is interior, so the angular order is the boundary order). Each polygon
/// edge lies in the unique facet shared by its endpoints' sources.
pub fn section(body: &ConvexPolytope3, e1: Vec3, e2: Vec3) -> Result<PlaneSection> {
    let frame = PlaneFrame::new(body.center(), e1, e2)?;
    let eps = 1e-9 * body.scale();

    let side: Vec<f64> = body
        .vertices()
        .iter()
        .map(|&v| (v - frame.origin).dot(frame.normal))
        .collect();

    let mut pts: Vec<(Point2, SectionSource)> = Vec::new();
    for (vi, &s) in side.iter().enumerate() {
        if s.abs() <= eps {
            pts.push((
                frame.project(body.vertices()[vi]),
                SectionSource::AtVertex { vertex: vi as u32 },
            ));
        }
    }
    for (ei, e) in body.edges().iter().enumerate() {
        let (sa, sb) = (side[e.v[0] as usize], side[e.v[1] as usize]);
        if (sa > eps && sb < -eps) || (sa < -eps && sb > eps) {
            let t = sa / (sa - sb);
            let a = body.vertices()[e.v[0] as usize];
            let b = body.vertices()[e.v[1] as usize];
            pts.push((
                frame.project(a + (b - a) * t),
                SectionSource::EdgeCross { edge: ei as u32 },
            ));
        }
    }
    if pts.len() < 3 {
        return Err(Error::domain(
            "plane section degenerated to fewer than 3 boundary points",
        ));
    }

    // The plane origin is the polytope center, strictly interior, so
    // angular order about (0,0) is the boundary order.
    pts.sort_by(|p, q| {
        p.0.y
            .atan2(p.0.x)
            .partial_cmp(&q.0.y.atan2(q.0.x))
            .unwrap()
    });

    // Merge coincident points; a vertex the plane passes through wins over
    // edge crossings that collapse onto it.
    let mut merged: Vec<(Point2, SectionSource)> = Vec::with_capacity(pts.len());
    for (p, src) in pts {
        if let Some(last) = merged.last_mut() {
            if (p - last.0).norm() <= eps {
                if matches!(src, SectionSource::AtVertex { .. })
                    && !matches!(last.1, SectionSource::AtVertex { .. })
                {
                    *last = (p, src);
                }
                continue;
            }
        }
        merged.push((p, src));
    }
    while merged.len() > 1 && (merged[0].0 - merged.last().unwrap().0).norm() <= eps {
        let (p, src) = merged.pop().unwrap();
        if matches!(src, SectionSource::AtVertex { .. })
            && !matches!(merged[0].1, SectionSource::AtVertex { .. })
        {
            merged[0] = (p, src);
        }
    }

    // Drop points on straight runs so every remaining turn is positive;
    // a vertex point survives over a crossing when both sit on one line.
    loop {
        let m = merged.len();
        if m < 3 {
            return Err(Error::domain("plane section degenerated while merging collinear points"));
        }
        let mut drop_idx = None;
        for i in 0..m {
            let a = merged[(i + m - 1) % m].0;
            let b = merged[i].0;
            let c = merged[(i + 1) % m].0;
            let u = b - a;
            let w = c - b;
            if u.cross(w) <= 1e-9 * u.norm() * w.norm() {
                // Prefer dropping a crossing over a vertex point.
                if matches!(merged[i].1, SectionSource::AtVertex { .. }) {
                    let side = if u.norm() < w.norm() { (i + m - 1) % m } else { (i + 1) % m };
                    if !matches!(merged[side].1, SectionSource::AtVertex { .. }) {
                        drop_idx = Some(side);
                        break;
                    }
                }
                drop_idx = Some(i);
                break;
            }
        }
        match drop_idx {
            Some(i) => {
                merged.remove(i);
            }
            None => break,
        }
    }

    let verts: Vec<Point2> = merged.iter().map(|&(p, _)| p).collect();
    let sources: Vec<SectionSource> = merged.iter().map(|&(_, s)| s).collect();
    let polygon = ConvexPolyline2::from_ccw_unchecked(verts);

    // Polygon edge i runs from vertex i to i+1; the facet containing it is
    // shared by both endpoint sources.
    let facet_sets: Vec<Vec<u32>> = sources
        .iter()
        .map(|src| match *src {
            SectionSource::EdgeCross { edge } => body.edges()[edge as usize].f.to_vec(),
            SectionSource::AtVertex { vertex } => body.vertex_facets(vertex as usize).to_vec(),
        })
        .collect();
    let n = sources.len();
    let mut edge_facets = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let shared: Vec<u32> = facet_sets[i]
            .iter()
            .copied()
            .filter(|f| facet_sets[j].contains(f))
            .collect();
        let facet = match shared.len() {
            0 => {
                // A collinear merge can bridge two facets; fall back to the
                // best plane fit at the edge midpoint.
                let mid2 = Point2::new(
                    0.5 * (polygon.vertex(i).x + polygon.vertex(j).x),
                    0.5 * (polygon.vertex(i).y + polygon.vertex(j).y),
                );
                let mid3 = frame.unproject(mid2);
                let mut best = (f64::INFINITY, 0u32);
                for &f in facet_sets[i].iter().chain(facet_sets[j].iter()) {
                    let fc = &body.facets()[f as usize];
                    let d = (fc.normal.dot(mid3) - fc.offset).abs();
                    if d < best.0 {
                        best = (d, f);
                    }
                }
                best.1
            }
            1 => shared[0],
            _ => {
                // Several shared facets (the section edge lies along a
                // polytope edge): pick the plane the midpoint fits best.
                let mid2 = Point2::new(
                    0.5 * (polygon.vertex(i).x + polygon.vertex(j).x),
                    0.5 * (polygon.vertex(i).y + polygon.vertex(j).y),
                );
                let mid3 = frame.unproject(mid2);
                let mut best = (f64::INFINITY, shared[0]);
                for &f in &shared {
                    let fc = &body.facets()[f as usize];
                    let d = (fc.normal.dot(mid3) - fc.offset).abs();
                    if d < best.0 {
                        best = (d, f);
                    }
                }
                best.1
            }
        };
        edge_facets.push(facet);
    }

    Ok(PlaneSection { frame, polygon, edge_facets, vertex_sources: sources })
}

// ---------------------------------------------------------------------------
// Boundary normal modulus of the polytope.

#[derive(Clone, Copy, Debug)]
enum FeatKind {
    Vertex(u32),
    Edge(u32),
    Facet(u32),
}

struct Feature {
    kind: FeatKind,
    center: Point3,
    radius: f64,
    /// Extreme normals: indices into the facet list.
    normals_at: u32,
    normals_len: u32,
}

struct FeatureSet {
    feats: Vec<Feature>,
    normal_pool: Vec<u32>,
}

fn build_features(body: &ConvexPolytope3) -> FeatureSet {
    let mut feats = Vec::new();
    let mut pool: Vec<u32> = Vec::new();
    for (vi, fl) in (0..body.vertices().len()).map(|v| (v, body.vertex_facets(v))) {
        let at = pool.len() as u32;
        pool.extend_from_slice(fl);
        feats.push(Feature {
            kind: FeatKind::Vertex(vi as u32),
            center: body.vertices()[vi],
            radius: 0.0,
            normals_at: at,
            normals_len: fl.len() as u32,
        });
    }
    for (ei, e) in body.edges().iter().enumerate() {
        let a = body.vertices()[e.v[0] as usize];
        let b = body.vertices()[e.v[1] as usize];
        let at = pool.len() as u32;
        pool.extend_from_slice(&e.f);
        feats.push(Feature {
            kind: FeatKind::Edge(ei as u32),
            center: (a + b) * 0.5,
            radius: (b - a).norm() * 0.5,
            normals_at: at,
            normals_len: 2,
        });
    }
    for (fi, f) in body.facets().iter().enumerate() {
        let mut c = Vec3::new(0.0, 0.0, 0.0);
        for &v in &f.verts {
            c = c + body.vertices()[v as usize];
        }
        let c = c * (1.0 / f.verts.len() as f64);
        let r = f
            .verts
            .iter()
            .map(|&v| (body.vertices()[v as usize] - c).norm())
            .fold(0.0, f64::max);
        let at = pool.len() as u32;
        pool.push(fi as u32);
        feats.push(Feature {
            kind: FeatKind::Facet(fi as u32),
            center: c,
            radius: r,
            normals_at: at,
            normals_len: 1,
        });
    }
    FeatureSet { feats, normal_pool: pool }
}

fn feature_min_dist(body: &ConvexPolytope3, a: &Feature, b: &Feature) -> f64 {
    let vs = body.vertices();
    let seg = |e: u32| {
        let ed = body.edges()[e as usize];
        (vs[ed.v[0] as usize], vs[ed.v[1] as usize])
    };
    match (a.kind, b.kind) {
        (FeatKind::Vertex(p), FeatKind::Vertex(q)) => (vs[p as usize] - vs[q as usize]).norm(),
        (FeatKind::Vertex(p), FeatKind::Edge(e)) | (FeatKind::Edge(e), FeatKind::Vertex(p)) => {
            let (s0, s1) = seg(e);
            dist_point_seg3(vs[p as usize], s0, s1)
        }
        (FeatKind::Vertex(p), FeatKind::Facet(f)) | (FeatKind::Facet(f), FeatKind::Vertex(p)) => {
            let ring = body.facet_ring(f);
            let fc = &body.facets()[f as usize];
            dist_point_facet(vs[p as usize], &ring, fc.normal, fc.offset)
        }
        (FeatKind::Edge(e1), FeatKind::Edge(e2)) => {
            let (a0, a1) = seg(e1);
            let (b0, b1) = seg(e2);
            dist_seg_seg3(a0, a1, b0, b1)
        }
        (FeatKind::Edge(e), FeatKind::Facet(f)) | (FeatKind::Facet(f), FeatKind::Edge(e)) => {
            let (s0, s1) = seg(e);
            let ring = body.facet_ring(f);
            let fc = &body.facets()[f as usize];
            dist_seg_facet(s0, s1, &ring, fc.normal, fc.offset)
        }
        (FeatKind::Facet(f1), FeatKind::Facet(f2)) => {
            let r1 = body.facet_ring(f1);
            let r2 = body.facet_ring(f2);
            let c1 = &body.facets()[f1 as usize];
            let c2 = &body.facets()[f2 as usize];
            let mut best = f64::INFINITY;
            let m1 = r1.len();
            for i in 0..m1 {
                best = best.min(dist_seg_facet(r1[i], r1[(i + 1) % m1], &r2, c2.normal, c2.offset));
            }
            let m2 = r2.len();
            for i in 0..m2 {
                best = best.min(dist_seg_facet(r2[i], r2[(i + 1) % m2], &r1, c1.normal, c1.offset));
            }
            best
        }
    }
}

/// Largest angle between extreme normal selections of the two features.
fn feature_pair_angle(body: &ConvexPolytope3, fs: &FeatureSet, a: &Feature, b: &Feature) -> f64 {
    let mut min_dot = f64::INFINITY;
    for i in 0..a.normals_len {
        let na = body.facets()[fs.normal_pool[(a.normals_at + i) as usize] as usize].normal;
        for j in 0..b.normals_len {
            let nb = body.facets()[fs.normal_pool[(b.normals_at + j) as usize] as usize].normal;
            min_dot = min_dot.min(na.dot(nb));
        }
    }
    min_dot.clamp(-1.0, 1.0).acos()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BodyModulusPoint {
    pub tau: f64,
    /// Largest angle between outward normals at boundary points within tau.
    pub angle: f64,
    /// The same extreme measured as Euclidean distance of unit normals.
    pub chord: f64,
}

/// Modulus of continuity of the polytope's boundary normal field over a
/// grid of separations, batched in one feature-pair sweep.
///
/// Boundary features are vertices, edges, and facets with their normal
/// fans; a feature pair contributes to every tau at least its minimal
/// Euclidean distance. Grid hashing on feature centers keeps the sweep
/// near-linear while max(tau) is small against the body; it errors out if
/// the candidate pair count explodes.
pub fn body_normal_modulus_profile(
    body: &ConvexPolytope3,
    taus: &[f64],
) -> Result<Vec<BodyModulusPoint>> {
    if taus.is_empty() {
        return Err(Error::domain("need at least one separation value"));
    }
    for &t in taus {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("separation must be positive and finite, got {t}")));
        }
    }
    let mut sorted: Vec<f64> = taus.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    sorted.dedup();
    let tau_max = *sorted.last().unwrap();

    let fs = build_features(body);
    let nf = fs.feats.len();
    let mut best = vec![0.0f64; sorted.len()];

    // Self pairs: a feature sees its own normal fan at distance zero.
    for f in &fs.feats {
        if f.normals_len > 1 {
            let theta = feature_pair_angle(body, &fs, f, f);
            if theta > best[0] {
                best[0] = theta;
            }
        }
    }

    let consider = |i: usize, j: usize, best: &mut [f64]| {
        let (fa, fb) = (&fs.feats[i], &fs.feats[j]);
        let gap = (fa.center - fb.center).norm() - fa.radius - fb.radius;
        if gap > tau_max {
            return;
        }
        let d = feature_min_dist(body, fa, fb);
        if d > tau_max {
            return;
        }
        let idx = sorted.partition_point(|&t| t < d);
        if idx >= best.len() {
            return;
        }
        let theta = feature_pair_angle(body, &fs, fa, fb);
        if theta > best[idx] {
            best[idx] = theta;
        }
    };

    if nf * nf <= 4_000_000 {
        for i in 0..nf {
            for j in (i + 1)..nf {
                consider(i, j, &mut best);
            }
        }
    } else {
        let max_rad = fs.feats.iter().map(|f| f.radius).fold(0.0, f64::max);
        let cell = tau_max + 2.0 * max_rad;
        let key = |p: Point3| {
            (
                (p.x / cell).floor() as i64,
                (p.y / cell).floor() as i64,
                (p.z / cell).floor() as i64,
            )
        };
        let mut grid: HashMap<(i64, i64, i64), Vec<u32>> = HashMap::new();
        for (i, f) in fs.feats.iter().enumerate() {
            grid.entry(key(f.center)).or_default().push(i as u32);
        }
        let mut candidates: u64 = 0;
        const BUDGET: u64 = 200_000_000;
        for (&(cx, cy, cz), members) in &grid {
            for dx in -1..=1i64 {
                for dy in -1..=1i64 {
                    for dz in -1..=1i64 {
                        let nk = (cx + dx, cy + dy, cz + dz);
                        if nk < (cx, cy, cz) {
                            continue;
                        }
                        let Some(other) = grid.get(&nk) else { continue };
                        if nk == (cx, cy, cz) {
                            candidates += (members.len() * members.len() / 2) as u64;
                        } else {
                            candidates += (members.len() * other.len()) as u64;
                        }
                        if candidates > BUDGET {
                            return Err(Error::domain(format!(
                                "separation {tau_max} is too coarse for this discretization: the feature-pair scan would exceed {BUDGET} candidates"
                            )));
                        }
                        if nk == (cx, cy, cz) {
                            for (ai, &i) in members.iter().enumerate() {
                                for &j in &members[ai + 1..] {
                                    consider(i as usize, j as usize, &mut best);
                                }
                            }
                        } else {
                            for &i in members {
                                for &j in other {
                                    consider(i as usize, j as usize, &mut best);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // A pair admitted at separation d counts for every tau >= d.
    for i in 1..best.len() {
        if best[i - 1] > best[i] {
            best[i] = best[i - 1];
        }
    }
    // Every requested tau is present in the deduplicated grid.
    let lookup = |t: f64| best[sorted.partition_point(|&s| s < t)];
    Ok(taus
        .iter()
        .map(|&t| {
            let angle = lookup(t);
            BodyModulusPoint { tau: t, angle, chord: 2.0 * (angle / 2.0).sin() }
        })
        .collect())
}

/// Single-separation form of the profile.
pub fn body_normal_modulus(body: &ConvexPolytope3, tau: f64) -> Result<BodyModulusPoint> {
    Ok(body_normal_modulus_profile(body, &[tau])?[0])
}

/// Modulus of the section polygon's own 2-D normal field (chord metric).
pub fn section_normal_modulus(sec: &PlaneSection, tau: f64) -> Result<f64> {
    LiftedNormalField::new(&sec.polygon).maximal_oscillation(tau, Metric::Chord)
}

// ---------------------------------------------------------------------------
// Minimal oscillation of the polytope's normal field (used by the
// exploratory search; nothing is asserted about it).

fn facet_normals_of(body: &ConvexPolytope3, f: &Feature, fs: &FeatureSet) -> Vec<Vec3> {
    (0..f.normals_len)
        .map(|i| body.facets()[fs.normal_pool[(f.normals_at + i) as usize] as usize].normal)
        .collect()
}

/// Boundary arcs of a feature's normal cone: each incident edge
/// contributes the great-circle arc between its two facet normals.
fn cone_arcs(body: &ConvexPolytope3, f: &Feature) -> Vec<(Vec3, Vec3)> {
    match f.kind {
        FeatKind::Facet(_) => Vec::new(),
        FeatKind::Edge(e) => {
            let ed = body.edges()[e as usize];
            vec![(
                body.facets()[ed.f[0] as usize].normal,
                body.facets()[ed.f[1] as usize].normal,
            )]
        }
        FeatKind::Vertex(v) => body
            .edges()
            .iter()
            .filter(|e| e.v[0] == v || e.v[1] == v)
            .map(|e| {
                (
                    body.facets()[e.f[0] as usize].normal,
                    body.facets()[e.f[1] as usize].normal,
                )
            })
            .collect(),
    }
}

/// Does the unit direction u lie in the normal cone of the feature? True
/// iff u supports the polytope at the feature: the face of maximal
/// u-height contains the feature's points.
fn dir_in_cone(body: &ConvexPolytope3, f: &Feature, u: Vec3) -> bool {
    let hmax = body
        .vertices()
        .iter()
        .map(|&v| u.dot(v))
        .fold(f64::NEG_INFINITY, f64::max);
    let eps = 1e-9 * body.scale() * u.norm();
    let at = |p: Point3| u.dot(p) >= hmax - eps;
    match f.kind {
        FeatKind::Vertex(v) => at(body.vertices()[v as usize]),
        FeatKind::Edge(e) => {
            let ed = body.edges()[e as usize];
            at(body.vertices()[ed.v[0] as usize]) && at(body.vertices()[ed.v[1] as usize])
        }
        FeatKind::Facet(fi) => body.facets()[fi as usize]
            .verts
            .iter()
            .all(|&v| at(body.vertices()[v as usize])),
    }
}

fn point_arc_angle(u: Vec3, a: Vec3, b: Vec3) -> f64 {
    let n = a.cross(b);
    let nn = n.norm();
    if nn < 1e-14 {
        return angle_between3(u, a).min(angle_between3(u, b));
    }
    let n = n * (1.0 / nn);
    let g = u - n * u.dot(n);
    let gn = g.norm();
    if gn > 1e-14 {
        let g = g * (1.0 / gn);
        if a.cross(g).dot(n) >= -1e-12 && g.cross(b).dot(n) >= -1e-12 {
            return angle_between3(u, g);
        }
    }
    angle_between3(u, a).min(angle_between3(u, b))
}

fn arcs_cross(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> bool {
    let n1 = a.cross(b);
    let n2 = c.cross(d);
    let g = n1.cross(n2);
    let gn = g.norm();
    if gn < 1e-14 {
        return false;
    }
    let g = g * (1.0 / gn);
    for cand in [g, g * -1.0] {
        let in1 = a.cross(cand).dot(n1) >= -1e-12 && cand.cross(b).dot(n1) >= -1e-12;
        let in2 = c.cross(cand).dot(n2) >= -1e-12 && cand.cross(d).dot(n2) >= -1e-12;
        if in1 && in2 {
            return true;
        }
    }
    false
}

/// Smallest angle between selections from two normal cones.
fn cone_pair_min_angle(
    body: &ConvexPolytope3,
    fs: &FeatureSet,
    a: &Feature,
    b: &Feature,
) -> f64 {
    let na = facet_normals_of(body, a, fs);
    let nb = facet_normals_of(body, b, fs);
    // Overlap: an extreme of one cone supported by the other feature.
    for &u in &na {
        if dir_in_cone(body, b, u) {
            return 0.0;
        }
    }
    for &u in &nb {
        if dir_in_cone(body, a, u) {
            return 0.0;
        }
    }
    let arcs_a = cone_arcs(body, a);
    let arcs_b = cone_arcs(body, b);
    for &(p, q) in &arcs_a {
        for &(s, t) in &arcs_b {
            if arcs_cross(p, q, s, t) {
                return 0.0;
            }
        }
    }
    let mut best = f64::INFINITY;
    for &u in &na {
        for &w in &nb {
            best = best.min(angle_between3(u, w));
        }
        for &(s, t) in &arcs_b {
            best = best.min(point_arc_angle(u, s, t));
        }
    }
    for &w in &nb {
        for &(p, q) in &arcs_a {
            best = best.min(point_arc_angle(w, p, q));
        }
    }
    best
}

fn feature_max_dist(body: &ConvexPolytope3, a: &Feature, b: &Feature) -> f64 {
    let pts = |f: &Feature| -> Vec<Point3> {
        match f.kind {
            FeatKind::Vertex(v) => vec![body.vertices()[v as usize]],
            FeatKind::Edge(e) => {
                let ed = body.edges()[e as usize];
                vec![
                    body.vertices()[ed.v[0] as usize],
                    body.vertices()[ed.v[1] as usize],
                ]
            }
            FeatKind::Facet(f) => body.facet_ring(f),
        }
    };
    let pa = pts(a);
    let pb = pts(b);
    let mut best = 0.0f64;
    for &p in &pa {
        for &q in &pb {
            best = best.max((p - q).norm());
        }
    }
    best
}

/// Smallest angle between normals of boundary points at least tau apart;
/// None when no such pair exists. Quadratic in the feature count, meant
/// for the modest polytopes of the exploratory search.
pub fn body_minimal_oscillation(body: &ConvexPolytope3, tau: f64) -> Result<Option<f64>> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain(format!("separation must be positive and finite, got {tau}")));
    }
    let fs = build_features(body);
    let nf = fs.feats.len();
    if nf * nf > 16_000_000 {
        return Err(Error::domain(
            "polytope too fine for the quadratic minimal-oscillation scan",
        ));
    }
    let mut best: Option<f64> = None;
    for i in 0..nf {
        for j in i..nf {
            let (fa, fb) = (&fs.feats[i], &fs.feats[j]);
            if feature_max_dist(body, fa, fb) < tau {
                continue;
            }
            let ang = if i == j { 0.0 } else { cone_pair_min_angle(body, &fs, fa, fb) };
            best = Some(match best {
                None => ang,
                Some(b) => b.min(ang),
            });
            if best == Some(0.0) {
                return Ok(best);
            }
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Section comparison bounds.

#[derive(Clone, Debug, Serialize)]
pub struct SectionBoundCheck {
    pub status: Status,
    pub reason: Option<String>,
    pub tau: f64,
    pub inradius: f64,
    pub outradius: f64,
    /// 2R/r, the projection comparison factor.
    pub factor: f64,
    pub body_angle: f64,
    pub body_chord: f64,
    pub section_angle: f64,
    pub section_chord: f64,
    /// 2 arcsin(min(1, (2R/r) sin(body_angle / 2))).
    pub angle_bound: f64,
    /// (2R/r) * body_chord.
    pub chord_bound: f64,
    pub angle_holds: bool,
    pub chord_holds: bool,
    pub slack: f64,
}

/// Check that the section's normal modulus is controlled by the body's:
/// the chord comparison section_chord <= (2R/r) body_chord and the angle
/// comparison through 2 arcsin. Requires tau below the ball diameter 2r
/// and a body modulus small enough that normals stay transversal to
/// section planes (<= 2 arcsin(r/(2R))); otherwise the hypothesis is
/// unsatisfied and nothing is claimed.
pub fn check_section_bound_with(
    body: &ConvexPolytope3,
    sec: &PlaneSection,
    tau: f64,
    body_angle: f64,
    slack: f64,
) -> Result<SectionBoundCheck> {
    let r = body.inradius();
    let rr = body.outradius();
    let factor = 2.0 * rr / r;
    let mut out = SectionBoundCheck {
        status: Status::HypothesisUnsatisfied,
        reason: None,
        tau,
        inradius: r,
        outradius: rr,
        factor,
        body_angle,
        body_chord: 2.0 * (body_angle / 2.0).sin(),
        section_angle: f64::NAN,
        section_chord: f64::NAN,
        angle_bound: f64::NAN,
        chord_bound: f64::NAN,
        angle_holds: false,
        chord_holds: false,
        slack,
    };
    if !(tau < 2.0 * r) {
        out.reason = Some(format!(
            "separation {tau} is not below the inscribed ball diameter {}",
            2.0 * r
        ));
        return Ok(out);
    }
    let gate = 2.0 * (r / (2.0 * rr)).asin();
    if !(body_angle <= gate) {
        out.reason = Some(format!(
            "body normal modulus {body_angle:.6} exceeds 2 arcsin(r/2R) = {gate:.6}; projections may degenerate"
        ));
        return Ok(out);
    }
    let section_angle = section_normal_modulus(sec, tau)?;
    out.section_angle = section_angle;
    out.section_chord = 2.0 * (section_angle / 2.0).sin();
    out.angle_bound = 2.0 * (factor * (body_angle / 2.0).sin()).min(1.0).asin();
    out.chord_bound = factor * out.body_chord;
    out.angle_holds = out.section_angle <= out.angle_bound + slack;
    out.chord_holds = out.section_chord <= out.chord_bound + slack;
    out.status = if out.angle_holds && out.chord_holds {
        Status::Passed
    } else {
        Status::Failed
    };
    Ok(out)
}

/// As `check_section_bound_with`, measuring the body modulus itself.
pub fn check_section_bound(
    body: &ConvexPolytope3,
    sec: &PlaneSection,
    tau: f64,
    slack: f64,
) -> Result<SectionBoundCheck> {
    let bm = body_normal_modulus(body, tau)?;
    check_section_bound_with(body, sec, tau, bm.angle, slack)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairwiseNormalCheck {
    /// Vertex pairs examined (after any stride subsampling).
    pub pairs_tested: usize,
    /// Normal selections that passed the transversality gate and were
    /// held to the projection inequality.
    pub selections_tested: usize,
    /// Largest value of |w - z| - (2R/r)|u - v| over tested selections.
    pub worst_margin: f64,
    /// Smallest in-plane magnitude of a projected normal seen.
    pub min_projection: f64,
    pub degenerate_projections: usize,
    pub holds: bool,
}

/// Pairwise projection inequality on a section: for boundary points x, y
/// of the section with 3-D normal selections u, v whose angle is below
/// 2 arcsin(r/(2R)), the normalized projections w, z satisfy
/// |w - z| <= (2R/r)|u - v| + slack. Also audits that no projection at a
/// section boundary point degenerates.
pub fn check_projected_pair_bound(
    body: &ConvexPolytope3,
    sec: &PlaneSection,
    slack: f64,
) -> PairwiseNormalCheck {
    let r = body.inradius();
    let rr = body.outradius();
    let factor = 2.0 * rr / r;
    let gate = 2.0 * (r / (2.0 * rr)).asin();
    let n = sec.polygon.len();
    let stride = (n / 400).max(1);
    let picks: Vec<usize> = (0..n).step_by(stride).collect();
    let normals: Vec<Vec<Vec3>> = picks
        .iter()
        .map(|&i| sec.vertex_normals(body, i))
        .collect();

    let mut out = PairwiseNormalCheck {
        pairs_tested: 0,
        selections_tested: 0,
        worst_margin: f64::NEG_INFINITY,
        min_projection: f64::INFINITY,
        degenerate_projections: 0,
        holds: true,
    };
    let projected: Vec<Vec<Option<ProjectedNormal>>> = normals
        .iter()
        .map(|ns| ns.iter().map(|&u| project_normal(&sec.frame, u)).collect())
        .collect();
    for ns in &projected {
        for p in ns {
            match p {
                Some(pn) => out.min_projection = out.min_projection.min(pn.magnitude),
                None => out.degenerate_projections += 1,
            }
        }
    }
    if out.degenerate_projections > 0 {
        out.holds = false;
    }

    for i in 0..picks.len() {
        for j in (i + 1)..picks.len() {
            out.pairs_tested += 1;
            for (a, pa) in normals[i].iter().zip(&projected[i]) {
                for (b, pb) in normals[j].iter().zip(&projected[j]) {
                    let ang = angle_between3(*a, *b);
                    if !(ang < gate) {
                        continue;
                    }
                    let (Some(w), Some(z)) = (pa, pb) else { continue };
                    out.selections_tested += 1;
                    let lhs = (w.dir - z.dir).norm();
                    let rhs = factor * (*a - *b).norm();
                    let margin = lhs - rhs;
                    if margin > out.worst_margin {
                        out.worst_margin = margin;
                    }
                    if margin > slack {
                        out.holds = false;
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeMembershipCheck {
    pub checked: usize,
    pub violations: usize,
    /// Largest angular excess of a projected normal outside its section
    /// vertex cone.
    pub worst_excess: f64,
}

/// At every section polygon vertex, each projected 3-D normal must land
/// inside the polygon's own 2-D normal cone there (within tol_angle).
pub fn check_projected_normal_cones(
    body: &ConvexPolytope3,
    sec: &PlaneSection,
    tol_angle: f64,
) -> ConeMembershipCheck {
    let field = LiftedNormalField::new(&sec.polygon);
    let mut out = ConeMembershipCheck { checked: 0, violations: 0, worst_excess: 0.0 };
    for i in 0..sec.polygon.len() {
        let (lo, hi) = field.cone(i);
        for u in sec.vertex_normals(body, i) {
            let Some(p) = project_normal(&sec.frame, u) else {
                out.checked += 1;
                out.violations += 1;
                out.worst_excess = f64::INFINITY;
                continue;
            };
            let a = p.dir.y.atan2(p.dir.x);
            // Shift a by whole turns into [lo, hi] if possible.
            let two_pi = std::f64::consts::TAU;
            let k = ((lo + hi) / 2.0 - a) / two_pi;
            let a = a + k.round() * two_pi;
            let excess = (lo - a).max(a - hi).max(0.0);
            out.checked += 1;
            if excess > tol_angle {
                out.violations += 1;
            }
            if excess > out.worst_excess {
                out.worst_excess = excess;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Placement of the planar inscribed certificate inside sections.

/// Deterministic unit directions: the Fibonacci sphere spiral.
pub fn fibonacci_directions(count: usize) -> Vec<Vec3> {
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = std::f64::consts::TAU * (i as f64 / golden).fract();
            Vec3::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceFailure {
    pub vertex: u32,
    pub plane: usize,
    pub normal_index: usize,
    pub violation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceVerificationReport {
    pub status: Status,
    pub reason: Option<String>,
    pub tau: f64,
    /// Angle hypothesis on the body's normal field.
    pub phi: f64,
    /// Measured body modulus at tau (must be <= phi).
    pub measured_body_angle: f64,
    /// Hypothesis gate: phi must stay below 2 arcsin(r / (4 sqrt2 R)).
    pub phi_gate: f64,
    /// Angle used for the planar polygon inside sections:
    /// 2 arcsin((2R/r) sin(phi/2)).
    pub section_phi: Option<f64>,
    pub k: Option<u32>,
    pub inradius: f64,
    pub outradius: f64,
    pub samples: usize,
    pub planes_per_sample: usize,
    pub placements: usize,
    pub worst_violation: f64,
    /// Smallest in-plane magnitude of any projected normal (must stay
    /// near or above r/R).
    pub min_projection: f64,
    /// Largest angular excess of a projected normal outside the section's
    /// 2-D cone at its anchor vertex.
    pub worst_cone_excess: f64,
    pub tol: f64,
    pub failures: Vec<SpaceFailure>,
}

const MAX_SPACE_FAILURES: usize = 64;

/// Space form of the inscribed certificate: if the body's normal modulus
/// at tau is at most phi (with phi below the transversality gate), then in
/// every central plane section through a boundary point x, the mangled
/// polygon for the inflated angle 2 arcsin((2R/r) sin(phi/2)), scaled by
/// tau and rotated to the projected normal, fits inside the section.
///
/// Samples polytope vertices, probes each adjacent facet normal plus the
/// mean direction, and sweeps planes spanned by (x - c) and Fibonacci
/// directions.
pub fn verify_space_inscribed(
    body: &ConvexPolytope3,
    tau: f64,
    phi: f64,
    samples: usize,
    planes: usize,
    tol: f64,
) -> Result<SpaceVerificationReport> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain(format!("separation must be positive and finite, got {tau}")));
    }
    if samples == 0 || planes == 0 {
        return Err(Error::domain("need at least one sample and one plane"));
    }
    if !(tol >= 0.0) || !tol.is_finite() {
        return Err(Error::domain(format!("tolerance must be finite and >= 0, got {tol}")));
    }
    let r = body.inradius();
    let rr = body.outradius();
    let phi_gate = 2.0 * (r / (4.0 * 2.0f64.sqrt() * rr)).asin();
    let measured = body_normal_modulus(body, tau)?.angle;
    let mut report = SpaceVerificationReport {
        status: Status::HypothesisUnsatisfied,
        reason: None,
        tau,
        phi,
        measured_body_angle: measured,
        phi_gate,
        section_phi: None,
        k: None,
        inradius: r,
        outradius: rr,
        samples: 0,
        planes_per_sample: planes,
        placements: 0,
        worst_violation: 0.0,
        min_projection: f64::INFINITY,
        worst_cone_excess: 0.0,
        tol,
        failures: Vec::new(),
    };
    if !(tau < 2.0 * r) {
        report.reason = Some(format!(
            "separation {tau} is not below the inscribed ball diameter {}",
            2.0 * r
        ));
        return Ok(report);
    }
    if !(phi > 0.0 && phi < phi_gate) {
        report.reason = Some(format!(
            "angle hypothesis {phi:.6} is outside (0, 2 arcsin(r/(4 sqrt2 R))) = (0, {phi_gate:.6})"
        ));
        return Ok(report);
    }
    if measured > phi {
        report.reason = Some(format!(
            "measured body normal modulus {measured:.6} exceeds the hypothesis {phi:.6}"
        ));
        return Ok(report);
    }
    let section_phi = 2.0 * ((2.0 * rr / r) * (phi / 2.0).sin()).min(1.0).asin();
    report.section_phi = Some(section_phi);
    let ngon = ngons::mangled_for(section_phi)?;
    report.k = Some(ngon.k);

    let nv = body.vertices().len();
    let stride = (nv / samples).max(1);
    let picked: Vec<usize> = (0..nv).step_by(stride).take(samples).collect();
    report.samples = picked.len();
    let dirs = fibonacci_directions(planes);
    let c = body.center();

    for &vi in &picked {
        let x = body.vertices()[vi];
        let e1 = (x - c).normalized();
        let mut normals: Vec<Vec3> = body
            .vertex_facets(vi)
            .iter()
            .map(|&f| body.facets()[f as usize].normal)
            .collect();
        let mean = normals
            .iter()
            .fold(Vec3::new(0.0, 0.0, 0.0), |s, &n| s + n);
        if mean.norm() > 1e-12 {
            normals.push(mean.normalized());
        }
        let mut plane_count = 0usize;
        for (pi, &d) in dirs.iter().enumerate() {
            let e2 = d - e1 * d.dot(e1);
            if e2.norm() < 1e-3 {
                continue;
            }
            // Second projection pass keeps e1.e2 at rounding level even
            // when d is nearly parallel to e1.
            let e2 = e2.normalized();
            let e2 = (e2 - e1 * e2.dot(e1)).normalized();
            let sec = section(body, e1, e2)?;
            plane_count += 1;
            let oracle = ContainmentOracle::new(&sec.polygon);
            let field = LiftedNormalField::new(&sec.polygon);
            let x2 = sec.frame.project(x);
            // The anchor should be a section vertex; find its cone for the
            // membership audit (it may have merged into an edge).
            let anchor_vertex = (0..sec.polygon.len())
                .find(|&i| (sec.polygon.vertex(i) - x2).norm() <= 1e-7 * body.scale());
            for (ni, &u) in normals.iter().enumerate() {
                let Some(p) = project_normal(&sec.frame, u) else {
                    report.min_projection = 0.0;
                    report.worst_violation = f64::INFINITY;
                    report.failures.push(SpaceFailure {
                        vertex: vi as u32,
                        plane: pi,
                        normal_index: ni,
                        violation: f64::INFINITY,
                    });
                    continue;
                };
                report.min_projection = report.min_projection.min(p.magnitude);
                if let Some(av) = anchor_vertex {
                    let (lo, hi) = field.cone(av);
                    let a = p.dir.y.atan2(p.dir.x);
                    let two_pi = std::f64::consts::TAU;
                    let k = ((lo + hi) / 2.0 - a) / two_pi;
                    let a = a + k.round() * two_pi;
                    let excess = (lo - a).max(a - hi).max(0.0);
                    report.worst_cone_excess = report.worst_cone_excess.max(excess);
                }
                let alpha = crate::geom2d::Angle::new(p.dir.y.atan2(p.dir.x) + std::f64::consts::FRAC_PI_2);
                let placed = ngons::place(&ngon.polygon, x2, alpha, tau)?;
                let mut worst = 0.0f64;
                for &q in placed.vertices() {
                    worst = worst.max(oracle.violation(q));
                }
                report.placements += 1;
                report.worst_violation = report.worst_violation.max(worst);
                if worst > tol && report.failures.len() < MAX_SPACE_FAILURES {
                    report.failures.push(SpaceFailure {
                        vertex: vi as u32,
                        plane: pi,
                        normal_index: ni,
                        violation: worst,
                    });
                }
            }
        }
        report.planes_per_sample = report.planes_per_sample.min(plane_count.max(1));
    }
    report.status = if report.worst_violation <= tol {
        Status::Passed
    } else {
        Status::Failed
    };
    Ok(report)
}

// ---------------------------------------------------------------------------
// Exploratory search: how small can a section's minimal oscillation get
// against the body's? Reports ratios; asserts nothing.

#[derive(Clone, Debug, Serialize)]
pub struct ExploreCase {
    pub body: usize,
    pub plane: usize,
    pub body_min_osc: Option<f64>,
    pub section_min_osc: Option<f64>,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExploreReport {
    pub seed: u64,
    pub tau: f64,
    pub bodies: usize,
    pub planes: usize,
    pub points_per_body: usize,
    pub min_ratio: Option<f64>,
    pub cases: Vec<ExploreCase>,
}

pub fn exploratory_oscillation_search(
    seed: u64,
    bodies: usize,
    planes: usize,
    tau: f64,
    points_per_body: usize,
) -> Result<ExploreReport> {
    if bodies == 0 || planes == 0 {
        return Err(Error::domain("need at least one body and one plane"));
    }
    if points_per_body < 6 || points_per_body > 2000 {
        return Err(Error::domain("points per body must be in 6..=2000"));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain(format!("separation must be positive and finite, got {tau}")));
    }
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let mut report = ExploreReport {
        seed,
        tau,
        bodies,
        planes,
        points_per_body,
        min_ratio: None,
        cases: Vec::new(),
    };
    for bi in 0..bodies {
        let pts: Vec<Point3> = (0..points_per_body)
            .map(|_| {
                let u = rng.unit_vector3();
                let scale = rng.range_f64(0.7, 1.4);
                Point3::new(u[0] * scale, u[1] * scale, u[2] * scale)
            })
            .collect();
        let body = crate::hull3::convex_hull(&pts)?;
        let body_min = body_minimal_oscillation(&body, tau)?;
        for pi in 0..planes {
            let d1 = rng.unit_vector3();
            let d1 = Vec3::new(d1[0], d1[1], d1[2]);
            let mut d2 = loop {
                let d = rng.unit_vector3();
                let d = Vec3::new(d[0], d[1], d[2]);
                let w = d - d1 * d.dot(d1);
                if w.norm() > 1e-3 {
                    let w = w.normalized();
                    break (w - d1 * w.dot(d1)).normalized();
                }
            };
            // Keep the basis right-handed for reproducibility.
            if d1.cross(d2).z < 0.0 {
                d2 = d2 * -1.0;
            }
            let sec = section(&body, d1, d2)?;
            let sfield = LiftedNormalField::new(&sec.polygon);
            let section_min = sfield.minimal_oscillation(tau, Metric::Chord)?;
            let ratio = match (body_min, section_min) {
                (Some(b), Some(s)) if b > 0.0 => Some(s / b),
                _ => None,
            };
            if let Some(rk) = ratio {
                report.min_ratio = Some(match report.min_ratio {
                    None => rk,
                    Some(m) => m.min(rk),
                });
            }
            report.cases.push(ExploreCase {
                body: bi,
                plane: pi,
                body_min_osc: body_min,
                section_min_osc: section_min,
                ratio,
            });
        }
    }
    Ok(report)
}
