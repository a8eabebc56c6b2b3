//! Convex hull of a 3-D point cloud, for bodies given as raw vertices.
//!
//! Incremental insertion: seed a tetrahedron from extreme points, then for
//! each remaining point delete the faces it sees and stitch new triangles
//! along the horizon. Points on or inside the current hull (within a
//! relative epsilon) are dropped, so exactly-coplanar inputs come out as
//! coplanar triangle fans rather than sliver facets. The result is handed
//! to the polytope constructor, which independently validates closure,
//! convexity, and orientation.

use std::collections::HashMap;

use crate::space3d::{ConvexPolytope3, Point3, Vec3};
use crate::{Error, Result};

struct Face {
    v: [u32; 3],
    normal: Vec3,
    offset: f64,
    alive: bool,
}

fn face_of(pts: &[Point3], a: u32, b: u32, c: u32) -> Face {
    let pa = pts[a as usize];
    let n = (pts[b as usize] - pa).cross(pts[c as usize] - pa);
    Face { v: [a, b, c], normal: n, offset: n.dot(pa), alive: true }
}

/// Hull of the cloud as a triangulated convex polytope. Needs at least 4
/// affinely independent points.
pub fn convex_hull(points: &[Point3]) -> Result<ConvexPolytope3> {
    if points.len() < 4 {
        return Err(Error::domain(format!(
            "hull needs at least 4 points, got {}",
            points.len()
        )));
    }
    for (i, p) in points.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::domain(format!("point {i} is not finite")));
        }
    }
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
        hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
    }
    let scale = (hi - lo).norm();
    if scale <= 0.0 {
        return Err(Error::domain("all points coincide"));
    }
    let eps = 1e-9 * scale;

    // Seed simplex: the two points farthest apart along the widest axis,
    // the point farthest from their line, the point farthest from that
    // plane.
    let spread = hi - lo;
    let axis_key = |p: &Point3| {
        if spread.x >= spread.y && spread.x >= spread.z {
            p.x
        } else if spread.y >= spread.z {
            p.y
        } else {
            p.z
        }
    };
    let i0 = (0..points.len())
        .min_by(|&a, &b| axis_key(&points[a]).partial_cmp(&axis_key(&points[b])).unwrap())
        .unwrap();
    let i1 = (0..points.len())
        .max_by(|&a, &b| {
            (points[a] - points[i0])
                .norm()
                .partial_cmp(&(points[b] - points[i0]).norm())
                .unwrap()
        })
        .unwrap();
    if (points[i1] - points[i0]).norm() <= eps {
        return Err(Error::domain("all points coincide"));
    }
    let dir = (points[i1] - points[i0]).normalized();
    let line_dist = |p: Point3| {
        let d = p - points[i0];
        (d - dir * d.dot(dir)).norm()
    };
    let i2 = (0..points.len())
        .max_by(|&a, &b| line_dist(points[a]).partial_cmp(&line_dist(points[b])).unwrap())
        .unwrap();
    if line_dist(points[i2]) <= eps {
        return Err(Error::domain("points are collinear"));
    }
    let n = (points[i1] - points[i0]).cross(points[i2] - points[i0]);
    let plane_dist = |p: Point3| (n.dot(p - points[i0]) / n.norm()).abs();
    let i3 = (0..points.len())
        .max_by(|&a, &b| plane_dist(points[a]).partial_cmp(&plane_dist(points[b])).unwrap())
        .unwrap();
    if plane_dist(points[i3]) <= eps {
        return Err(Error::domain("points are coplanar"));
    }

    let (a, b, c, d) = (i0 as u32, i1 as u32, i2 as u32, i3 as u32);
    // Orient so d sits below the (a,b,c) plane, then take the four
    // outward faces of the tetrahedron.
    let below = n.dot(points[i3] - points[i0]) < 0.0;
    let (b, c) = if below { (b, c) } else { (c, b) };
    let mut faces = vec![
        face_of(points, a, b, c),
        face_of(points, a, c, d),
        face_of(points, a, d, b),
        face_of(points, b, d, c),
    ];

    for (pi, &p) in points.iter().enumerate() {
        let pi = pi as u32;
        if pi == a || pi == b || pi == c || pi == d {
            continue;
        }
        // Visible faces. The test is scaled by the face normal so the
        // threshold stays a geometric distance.
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && f.normal.dot(p) - f.offset > eps * f.normal.norm())
            .map(|(i, _)| i)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut edge_owner: HashMap<(u32, u32), ()> = HashMap::new();
        for &fi in &visible {
            let [x, y, z] = faces[fi].v;
            for (s, t) in [(x, y), (y, z), (z, x)] {
                edge_owner.insert((s, t), ());
            }
        }
        // Horizon: directed edges of visible faces whose reverse belongs
        // to a hidden face. New triangles keep the shared edge opposite to
        // the hidden neighbor's traversal.
        let mut horizon: Vec<(u32, u32)> = Vec::new();
        for &fi in &visible {
            let [x, y, z] = faces[fi].v;
            for (s, t) in [(x, y), (y, z), (z, x)] {
                if !edge_owner.contains_key(&(t, s)) {
                    horizon.push((s, t));
                }
            }
        }
        if horizon.is_empty() {
            // Point sees every face: impossible for a point outside a
            // closed convex surface; indicates collapse by rounding.
            return Err(Error::domain(
                "hull construction degenerated (a point saw the whole surface)",
            ));
        }
        for &fi in &visible {
            faces[fi].alive = false;
        }
        for (s, t) in horizon {
            faces.push(face_of(points, s, t, pi));
        }
    }

    // Compact the vertex set to the ones the surface uses.
    let mut remap: HashMap<u32, u32> = HashMap::new();
    let mut used: Vec<Point3> = Vec::new();
    let mut rings: Vec<Vec<u32>> = Vec::new();
    for f in faces.iter().filter(|f| f.alive) {
        let ring: Vec<u32> = f
            .v
            .iter()
            .map(|&v| {
                *remap.entry(v).or_insert_with(|| {
                    used.push(points[v as usize]);
                    (used.len() - 1) as u32
                })
            })
            .collect();
        rings.push(ring);
    }
    ConvexPolytope3::new(used, rings)
}
