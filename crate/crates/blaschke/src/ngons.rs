//! The two families of deformed regular polygons behind the rolling
//! certificates, with closed-form inscribed and circumscribed radii.
//!
//! Both families are indexed by `k` and built on the angle step
//! `phi_star = pi / (2k)`, and both are symmetric about the y axis with
//! their shared disk center on it:
//!
//! * The mangled polygon (k >= 2) has 4k - 4 vertices and all edges of
//!   unit length. It is a regular 4k-gon with four vertices removed, so
//!   four of the remaining vertices absorb a doubled turn of 2 phi_star.
//!   It is the smallest body a verified certificate can force inside a
//!   convex set, so its inscribed radius is what a certificate earns.
//! * The fattened polygon (k >= 1) has 4k vertices, 4k - 4 edges of unit
//!   length and four doubled edges of length 2. It is the largest body a
//!   certificate can force to contain a convex set.
//!
//! Scaling the family by tau and letting the angle parameter shrink makes
//! both radii converge to tau times the rolling-disk radius; the closed
//! forms here are exact at every k, which the tests cross-check against
//! the generic disk oracles.

use serde::Serialize;

use crate::geom2d::{Angle, ConvexPolyline2, Disk, Point2, Vec2};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Mangled,
    Fattened,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Mangled => write!(f, "mangled"),
            Family::Fattened => write!(f, "fattened"),
        }
    }
}

/// A deformed polygon in its standard pose: unit edge scale, symmetric
/// about the y axis, base near the origin. The two named disks share
/// `center` and are exact: the inscribed one touches edges, the
/// circumscribed one passes through extreme vertices.
#[derive(Clone, Debug)]
pub struct DeformedNgon {
    pub polygon: ConvexPolyline2,
    pub family: Family,
    pub k: u32,
    pub phi_star: f64,
    pub inscribed_radius: f64,
    pub circumscribed_radius: f64,
    pub center: Point2,
}

impl DeformedNgon {
    pub fn inscribed_disk(&self) -> Disk {
        Disk::new(self.center, self.inscribed_radius)
    }

    pub fn circumscribed_disk(&self) -> Disk {
        Disk::new(self.center, self.circumscribed_radius)
    }
}

const MAX_K: u32 = 1 << 20;

fn check_k(k: u32, min_k: u32, family: Family) -> Result<()> {
    if k < min_k {
        return Err(Error::domain(format!(
            "{family} polygon needs k >= {min_k}, got {k}"
        )));
    }
    if k > MAX_K {
        return Err(Error::domain(format!(
            "k = {k} exceeds the supported maximum {MAX_K}"
        )));
    }
    Ok(())
}

/// Mangled polygon for index `k >= 2`: 4k - 4 unit edges, four doubled
/// corners, inscribed radius
/// `(cot(pi/4k) - sqrt(2) cos((1 - (-1)^k) pi / 8k)) / 2`
/// and circumscribed radius `(cot(pi/4k) - 1) / 2` about `(0, R)`.
pub fn standard_mangled(k: u32) -> Result<DeformedNgon> {
    check_k(k, 2, Family::Mangled)?;
    let kk = k as usize;
    let phi_star = std::f64::consts::PI / (2.0 * k as f64);
    // Vertex m (1-based) is the running sum of unit steps at angles
    // j * phi_star, minus the steps at the four skipped indices; skipping
    // every multiple of k drops four vertices of the regular 4k-gon.
    let mut verts = Vec::with_capacity(4 * kk - 4);
    let (mut sx, mut sy) = (0.0f64, 0.0f64);
    let (mut dx, mut dy) = (0.0f64, 0.0f64);
    for m in 1..=4 * kk {
        let a = m as f64 * phi_star;
        sx += a.cos();
        sy += a.sin();
        if m % kk == 0 {
            dx += a.cos();
            dy += a.sin();
            continue;
        }
        verts.push(Point2::new(sx - dx, sy - dy));
    }
    let quarter = std::f64::consts::PI / (4.0 * k as f64);
    let cot = quarter.cos() / quarter.sin();
    let parity = if k % 2 == 0 { 0.0 } else { 2.0 };
    let r = 0.5 * (cot - 2f64.sqrt() * (parity * std::f64::consts::PI / (8.0 * k as f64)).cos());
    let big_r = 0.5 * (cot - 1.0);
    Ok(DeformedNgon {
        polygon: ConvexPolyline2::new(verts)?,
        family: Family::Mangled,
        k,
        phi_star,
        inscribed_radius: r,
        circumscribed_radius: big_r,
        center: Point2::new(0.0, big_r),
    })
}

/// Fattened polygon for index `k >= 1`: the regular 4k-gon with four
/// doubled edges, 4k vertices, inscribed radius `cot(pi/4k)/2 + 1/2`
/// about `(0, r)`; the circumscribed radius depends on the parity of k.
pub fn standard_fattened(k: u32) -> Result<DeformedNgon> {
    check_k(k, 1, Family::Fattened)?;
    let kk = k as usize;
    let phi_star = std::f64::consts::PI / (2.0 * k as f64);
    // Same running sum, but the steps at multiples of k are repeated
    // (added once more, starting with the zero-angle step), which doubles
    // four edges instead of dropping vertices.
    let mut verts = Vec::with_capacity(4 * kk);
    let (mut sx, mut sy) = (0.0f64, 0.0f64);
    let (mut dx, mut dy) = (1.0f64, 0.0f64);
    for m in 1..=4 * kk {
        let a = m as f64 * phi_star;
        sx += a.cos();
        sy += a.sin();
        if m % kk == 0 {
            dx += a.cos();
            dy += a.sin();
        }
        verts.push(Point2::new(sx + dx, sy + dy));
    }
    let quarter = std::f64::consts::PI / (4.0 * k as f64);
    let cot = quarter.cos() / quarter.sin();
    let r = 0.5 * cot + 0.5;
    let big_r = if k % 2 == 1 {
        1.0 / (2.0 * quarter.sin()) + std::f64::consts::FRAC_1_SQRT_2
    } else {
        (0.5 + 1.0 / (4.0 * quarter.sin() * quarter.sin())
            + cot * std::f64::consts::FRAC_1_SQRT_2)
            .sqrt()
    };
    Ok(DeformedNgon {
        polygon: ConvexPolyline2::new(verts)?,
        family: Family::Fattened,
        k,
        phi_star,
        inscribed_radius: r,
        circumscribed_radius: big_r,
        center: Point2::new(0.0, r),
    })
}

/// Largest k whose angle step `pi / 2k` still dominates `phi`; the
/// coarsest mangled polygon usable when the normal oscillation is at most
/// `phi`. Requires `0 < phi <= pi/4`.
pub fn k_for_mangled(phi: f64) -> Result<u32> {
    if !(phi > 0.0) || !phi.is_finite() {
        return Err(Error::domain(format!("phi must be positive and finite, got {phi}")));
    }
    if phi > std::f64::consts::FRAC_PI_4 + 1e-15 {
        return Err(Error::domain(format!(
            "mangled polygons need phi <= pi/4, got {phi}"
        )));
    }
    // Nudge before flooring: exact divisions like pi/100 must not round
    // down a step.
    let k = (std::f64::consts::PI / (2.0 * phi) + 1e-9).floor();
    if k > MAX_K as f64 {
        return Err(Error::domain(format!(
            "phi = {phi} needs k > {MAX_K}; too fine to build"
        )));
    }
    Ok((k as u32).max(2))
}

/// Smallest k whose angle step `pi / 2k` fits under `phi`; the coarsest
/// fattened polygon usable when the minimal normal oscillation is at
/// least `phi`. Requires `0 < phi <= pi`.
pub fn k_for_fattened(phi: f64) -> Result<u32> {
    if !(phi > 0.0) || !phi.is_finite() || phi > std::f64::consts::PI {
        return Err(Error::domain(format!(
            "phi must be in (0, pi], got {phi}"
        )));
    }
    let k = (std::f64::consts::PI / (2.0 * phi) - 1e-9).ceil();
    if k > MAX_K as f64 {
        return Err(Error::domain(format!(
            "phi = {phi} needs k > {MAX_K}; too fine to build"
        )));
    }
    Ok((k as u32).max(1))
}

pub fn mangled_for(phi: f64) -> Result<DeformedNgon> {
    standard_mangled(k_for_mangled(phi)?)
}

pub fn fattened_for(phi: f64) -> Result<DeformedNgon> {
    standard_fattened(k_for_fattened(phi)?)
}

/// Place a standard polygon at boundary point `x`: rotate by `alpha`,
/// scale by `tau`, translate so the standard origin lands on `x`.
pub fn place(poly: &ConvexPolyline2, x: Point2, alpha: Angle, tau: f64) -> Result<ConvexPolyline2> {
    poly.transformed(alpha, tau, Vec2::new(x.x, x.y))
}

/// The two certified disks of a placed deformed polygon.
pub fn placed_disks(ngon: &DeformedNgon, x: Point2, alpha: Angle, tau: f64) -> (Disk, Disk) {
    let (s, c) = (alpha.radians.sin(), alpha.radians.cos());
    let ctr = Point2::new(
        tau * (c * ngon.center.x - s * ngon.center.y) + x.x,
        tau * (s * ngon.center.x + c * ngon.center.y) + x.y,
    );
    (
        Disk::new(ctr, tau * ngon.inscribed_radius),
        Disk::new(ctr, tau * ngon.circumscribed_radius),
    )
}

/// Regular n-gon with unit sides, first vertex at (-1/2, 0), counter-
/// clockwise, center on the positive y axis. For n = 4 this is the unit
/// square sitting on the x axis, the seed of both deformed families.
pub fn regular_unit_ngon(n: u32) -> Result<ConvexPolyline2> {
    if n < 3 || n > 4 * MAX_K {
        return Err(Error::domain(format!("regular polygon needs 3 <= n <= {}, got {n}", 4 * MAX_K)));
    }
    let nf = n as f64;
    let circum = 1.0 / (2.0 * (std::f64::consts::PI / nf).sin());
    let cy = 1.0 / (2.0 * (std::f64::consts::PI / nf).tan());
    let verts = (0..n)
        .map(|j| {
            let t = -std::f64::consts::FRAC_PI_2 - std::f64::consts::PI / nf
                + std::f64::consts::TAU * j as f64 / nf;
            Point2::new(circum * t.cos(), cy + circum * t.sin())
        })
        .collect();
    ConvexPolyline2::new(verts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::minkowski_sum;

    fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
        assert!((a - b).abs() <= tol, "{what}: {a} vs {b}");
    }

    #[test]
    fn mangled_k2_is_the_diagonal_unit_square() {
        let m = standard_mangled(2).unwrap();
        assert_eq!(m.polygon.len(), 4);
        let want = [
            (0.7071067811865476, 0.7071067811865475),
            (0.0, 1.414213562373095),
            (-0.7071067811865476, 0.7071067811865472),
            (0.0, 0.0),
        ];
        for (v, w) in m.polygon.vertices().iter().zip(want) {
            assert_close(v.x, w.0, 1e-12, "x");
            assert_close(v.y, w.1, 1e-12, "y");
        }
        assert_close(m.inscribed_radius, 0.5, 1e-15, "r");
        assert_close(m.circumscribed_radius, 0.7071067811865475, 1e-15, "R");
    }

    #[test]
    fn fattened_k1_is_the_side2_square() {
        let f = standard_fattened(1).unwrap();
        assert_eq!(f.polygon.len(), 4);
        let want = [(1.0, 2.0), (-1.0, 2.0), (-1.0, 0.0), (1.0, 0.0)];
        for (v, w) in f.polygon.vertices().iter().zip(want) {
            assert_close(v.x, w.0, 1e-12, "x");
            assert_close(v.y, w.1, 1e-12, "y");
        }
        assert_close(f.inscribed_radius, 1.0, 1e-15, "r");
        assert_close(f.circumscribed_radius, 1.414213562373095, 1e-12, "R");
    }

    #[test]
    fn closed_form_radii_spot_table() {
        let mangled = [
            (2, 0.5, 0.7071067811865475),
            (3, 1.1830127018922194, 1.3660254037844388),
            (4, 1.806562964876376, 2.0136697460629066),
            (5, 2.4584746340044337, 2.6568757573381624),
            (8, 4.369478412617859, 4.576585193804371),
        ];
        for (k, r, big_r) in mangled {
            let m = standard_mangled(k).unwrap();
            assert_close(m.inscribed_radius, r, 1e-11, "mangled r");
            assert_close(m.circumscribed_radius, big_r, 1e-11, "mangled R");
            assert_eq!(m.polygon.len(), (4 * k - 4) as usize);
        }
        let fattened = [
            (1, 1.0, 1.414213562373095),
            (2, 1.7071067811865475, 1.9784371514842454),
            (3, 2.3660254037844384, 2.638958433764683),
            (4, 3.0136697460629066, 3.2593559852337676),
        ];
        for (k, r, big_r) in fattened {
            let f = standard_fattened(k).unwrap();
            assert_close(f.inscribed_radius, r, 1e-11, "fattened r");
            assert_close(f.circumscribed_radius, big_r, 1e-11, "fattened R");
            assert_eq!(f.polygon.len(), (4 * k) as usize);
        }
    }

    #[test]
    fn closed_forms_match_disk_oracles() {
        // The formulas claim exact largest-inscribed and smallest-enclosing
        // disks; the generic LP and Welzl oracles must agree.
        for k in [2u32, 3, 4, 7, 12] {
            let m = standard_mangled(k).unwrap();
            let ins = m.polygon.largest_inscribed_disk();
            assert_close(ins.radius, m.inscribed_radius, 1e-9, "mangled LP r");
            let enc = m.polygon.min_enclosing_disk();
            assert_close(enc.radius, m.circumscribed_radius, 1e-9, "mangled Welzl R");
            assert_close(enc.center.x, m.center.x, 1e-8, "mangled center x");
            assert_close(enc.center.y, m.center.y, 1e-8, "mangled center y");
        }
        for k in [1u32, 2, 3, 4, 9] {
            let f = standard_fattened(k).unwrap();
            let ins = f.polygon.largest_inscribed_disk();
            assert_close(ins.radius, f.inscribed_radius, 1e-9, "fattened LP r");
            let enc = f.polygon.min_enclosing_disk();
            assert_close(enc.radius, f.circumscribed_radius, 1e-9, "fattened Welzl R");
        }
    }

    #[test]
    fn center_touches_edges_and_vertices_exactly() {
        for k in [2u32, 3, 5, 8] {
            let m = standard_mangled(k).unwrap();
            let clearance = m.polygon.signed_clearance(m.center);
            assert_close(clearance, m.inscribed_radius, 1e-11, "edge clearance");
            let maxd = m
                .polygon
                .vertices()
                .iter()
                .map(|&v| v.dist(m.center))
                .fold(0.0, f64::max);
            assert_close(maxd, m.circumscribed_radius, 1e-11, "vertex reach");
        }
        for k in [1u32, 2, 4, 7] {
            let f = standard_fattened(k).unwrap();
            let clearance = f.polygon.signed_clearance(f.center);
            assert_close(clearance, f.inscribed_radius, 1e-11, "edge clearance");
            let maxd = f
                .polygon
                .vertices()
                .iter()
                .map(|&v| v.dist(f.center))
                .fold(0.0, f64::max);
            assert_close(maxd, f.circumscribed_radius, 1e-11, "vertex reach");
        }
    }

    #[test]
    fn mangled_edges_all_unit() {
        for k in [2u32, 3, 6, 11] {
            let m = standard_mangled(k).unwrap();
            for i in 0..m.polygon.len() {
                assert_close(m.polygon.edge_vec(i).norm(), 1.0, 1e-12, "edge");
            }
        }
    }

    #[test]
    fn fattened_edges_four_doubled_rest_unit() {
        for k in [1u32, 2, 3, 5, 8] {
            let f = standard_fattened(k).unwrap();
            let n = f.polygon.len();
            let mut doubled = 0;
            for i in 0..n {
                let l = f.polygon.edge_vec(i).norm();
                if (l - 2.0).abs() < 1e-12 {
                    doubled += 1;
                } else {
                    assert_close(l, 1.0, 1e-12, "edge");
                }
            }
            assert_eq!(doubled, 4, "k = {k}");
            // Base edge spans (-1, 0) -> (1, 0).
            let a = f.polygon.vertex(n - 2);
            let b = f.polygon.vertex(n - 1);
            assert_close(a.x, -1.0, 1e-12, "base");
            assert_close(a.y, 0.0, 1e-12, "base");
            assert_close(b.x, 1.0, 1e-12, "base");
            assert_close(b.y, 0.0, 1e-12, "base");
        }
    }

    #[test]
    fn mangled_k2_cone_widths_are_all_right_angles() {
        let m = standard_mangled(2).unwrap();
        let f = crate::normal_field::LiftedNormalField::new(&m.polygon);
        for i in 0..4 {
            assert_close(f.cone_width(i), std::f64::consts::FRAC_PI_2, 1e-12, "cone");
        }
    }

    #[test]
    fn mangled_vertex_turns_are_phi_star_with_four_doubled() {
        for k in [3u32, 4, 5] {
            let m = standard_mangled(k).unwrap();
            let f = crate::normal_field::LiftedNormalField::new(&m.polygon);
            let phi = m.phi_star;
            let mut singles = 0;
            let mut doubles = 0;
            for i in 0..m.polygon.len() {
                let w = f.cone_width(i);
                if (w - phi).abs() < 1e-9 {
                    singles += 1;
                } else if (w - 2.0 * phi).abs() < 1e-9 {
                    doubles += 1;
                } else {
                    panic!("unexpected cone width {w} at vertex {i}, k = {k}");
                }
            }
            assert_eq!(doubles, 4);
            assert_eq!(singles, m.polygon.len() - 4);
        }
    }

    #[test]
    fn k_selection_boundaries() {
        let pi = std::f64::consts::PI;
        assert_eq!(k_for_mangled(pi / 100.0).unwrap(), 50);
        assert_eq!(k_for_mangled(pi / 5.0).unwrap(), 2);
        assert_eq!(k_for_mangled(pi / 4.0).unwrap(), 2);
        assert_eq!(k_for_mangled(0.2).unwrap(), 7);
        assert!(k_for_mangled(1.0).is_err());
        assert!(k_for_mangled(0.0).is_err());

        assert_eq!(k_for_fattened(pi / 100.0).unwrap(), 50);
        assert_eq!(k_for_fattened(pi / 5.0).unwrap(), 3);
        assert_eq!(k_for_fattened(pi / 4.0).unwrap(), 2);
        assert_eq!(k_for_fattened(2.0).unwrap(), 1);
        assert_eq!(k_for_fattened(pi).unwrap(), 1);
        assert!(k_for_fattened(4.0).is_err());
    }

    #[test]
    fn minkowski_identities_with_the_unit_square() {
        // mangled_2 + square = regular octagon; octagon + square = fattened_2.
        let s = regular_unit_ngon(4).unwrap();
        let m2 = standard_mangled(2).unwrap();
        let q8 = regular_unit_ngon(8).unwrap();
        let sum = minkowski_sum(&m2.polygon, &s).unwrap();
        assert_eq!(sum.len(), 8);
        let match_up = |a: &ConvexPolyline2, b: &ConvexPolyline2| {
            for &v in a.vertices() {
                let best = b
                    .vertices()
                    .iter()
                    .map(|&w| v.dist(w))
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-12, "vertex ({}, {}) unmatched", v.x, v.y);
            }
        };
        match_up(&sum, &q8);
        match_up(&q8, &sum);

        let f2 = standard_fattened(2).unwrap();
        let sum2 = minkowski_sum(&q8, &s).unwrap();
        assert_eq!(sum2.len(), 8);
        match_up(&sum2, &f2.polygon);
        match_up(&f2.polygon, &sum2);
    }

    #[test]
    fn scaled_radii_approach_the_rolling_disk() {
        // tau = phi_star scaling: all four radii converge to 1 from the
        // proper side as k grows.
        let mut prev_m: Option<(f64, f64)> = None;
        let mut prev_f: Option<(f64, f64)> = None;
        for k in [16u32, 64, 256, 512] {
            let m = standard_mangled(k).unwrap();
            let f = standard_fattened(k).unwrap();
            let mr = (m.phi_star * m.inscribed_radius, m.phi_star * m.circumscribed_radius);
            let fr = (f.phi_star * f.inscribed_radius, f.phi_star * f.circumscribed_radius);
            if let Some((pr, pr2)) = prev_m {
                assert!(mr.0 > pr && mr.1 > pr2, "mangled radii increase");
            }
            if let Some((pr, pr2)) = prev_f {
                assert!(fr.0 < pr && fr.1 < pr2, "fattened radii decrease");
            }
            prev_m = Some(mr);
            prev_f = Some(fr);
        }
        let m = standard_mangled(512).unwrap();
        let f = standard_fattened(512).unwrap();
        assert_close(m.phi_star * m.inscribed_radius, 0.9978298391995435, 1e-10, "m r");
        assert_close(m.phi_star * m.circumscribed_radius, 0.9984652348463056, 1e-10, "m R");
        assert_close(f.phi_star * f.inscribed_radius, 1.0015331964220768, 1e-10, "f r");
        assert_close(f.phi_star * f.circumscribed_radius, 1.0021697660707471, 1e-10, "f R");
        for v in [
            m.phi_star * m.inscribed_radius,
            m.phi_star * m.circumscribed_radius,
            f.phi_star * f.inscribed_radius,
            f.phi_star * f.circumscribed_radius,
        ] {
            assert!((v - 1.0).abs() < 0.02);
        }
    }

    #[test]
    fn placement_maps_origin_to_x() {
        let m = standard_mangled(3).unwrap();
        let x = Point2::new(2.0, -1.0);
        let placed = place(&m.polygon, x, Angle::new(0.3), 0.25).unwrap();
        // The standard base vertex (0, 0) is a vertex of the mangled
        // polygon; its image must be exactly x.
        let hit = placed
            .vertices()
            .iter()
            .map(|&v| v.dist(x))
            .fold(f64::INFINITY, f64::min);
        assert!(hit < 1e-12, "{hit}");
        let (ins, _out) = placed_disks(&m, x, Angle::new(0.3), 0.25);
        assert!(placed.contains_disk(&ins, 1e-12));
    }

    #[test]
    fn regular_ngon_pose() {
        let q = regular_unit_ngon(4).unwrap();
        let want = [(-0.5, 0.0), (0.5, 0.0), (0.5, 1.0), (-0.5, 1.0)];
        for (v, w) in q.vertices().iter().zip(want) {
            assert_close(v.x, w.0, 1e-12, "x");
            assert_close(v.y, w.1, 1e-12, "y");
        }
        let q8 = regular_unit_ngon(8).unwrap();
        assert_eq!(q8.len(), 8);
        for i in 0..8 {
            assert_close(q8.edge_vec(i).norm(), 1.0, 1e-12, "side");
        }
    }
}
