//! Deterministic SVG rendering of bodies, overlay polygons, disks, and
//! failure markers.
//!
//! Output bytes depend only on the scene content: coordinates are written
//! in raw model units (y grows upward in the model and downward on
//! screen, which only mirrors the figure), the viewBox is the joint
//! bounding box padded by 5% of its larger dimension, and there are no
//! timestamps or generator tags.

use std::fmt::Write as _;

use crate::geom2d::{ConvexPolyline2, Point2};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layer {
    Body,
    Overlay,
}

#[derive(Default)]
pub struct Scene {
    paths: Vec<(Vec<Point2>, Layer)>,
    circles: Vec<(Point2, f64, Layer)>,
    markers: Vec<Point2>,
}

impl Scene {
    pub fn new() -> Self {
        Scene::default()
    }

    pub fn add_body(&mut self, poly: &ConvexPolyline2) -> &mut Self {
        self.paths.push((poly.vertices().to_vec(), Layer::Body));
        self
    }

    pub fn add_overlay(&mut self, verts: &[Point2]) -> &mut Self {
        self.paths.push((verts.to_vec(), Layer::Overlay));
        self
    }

    pub fn add_overlay_circle(&mut self, center: Point2, radius: f64) -> &mut Self {
        self.circles.push((center, radius, Layer::Overlay));
        self
    }

    /// Failure marker: drawn last as a diagonal cross.
    pub fn add_marker(&mut self, p: Point2) -> &mut Self {
        self.markers.push(p);
        self
    }

    fn bounds(&self) -> Option<(Point2, Point2)> {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut any = false;
        let mut take = |x: f64, y: f64| {
            lo = Point2::new(lo.x.min(x), lo.y.min(y));
            hi = Point2::new(hi.x.max(x), hi.y.max(y));
            any = true;
        };
        for (verts, _) in &self.paths {
            for v in verts {
                take(v.x, v.y);
            }
        }
        for &(c, r, _) in &self.circles {
            take(c.x - r, c.y - r);
            take(c.x + r, c.y + r);
        }
        for m in &self.markers {
            take(m.x, m.y);
        }
        if any {
            Some((lo, hi))
        } else {
            None
        }
    }

    pub fn to_svg(&self) -> Result<String> {
        let (lo, hi) = self
            .bounds()
            .ok_or_else(|| Error::domain("nothing to draw"))?;
        let w = hi.x - lo.x;
        let h = hi.y - lo.y;
        let dim = w.max(h).max(1e-12);
        let m = 0.05 * dim;
        let stroke = 0.005 * dim;
        let marker_r = 0.015 * dim;

        let mut s = String::new();
        let _ = write!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
            lo.x - m,
            lo.y - m,
            w + 2.0 * m,
            h + 2.0 * m
        );
        let style = |layer: Layer| match layer {
            Layer::Body => ("body", "#345995"),
            Layer::Overlay => ("overlay", "#b5442d"),
        };
        for layer in [Layer::Body, Layer::Overlay] {
            let (class, color) = style(layer);
            for (verts, l) in &self.paths {
                if *l != layer || verts.is_empty() {
                    continue;
                }
                let mut d = String::new();
                for (i, v) in verts.iter().enumerate() {
                    let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, v.x, v.y);
                }
                d.push_str(" Z");
                let _ = write!(
                    s,
                    "<path class=\"{class}\" d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{stroke}\"/>\n",
                );
            }
            for (c, r, l) in &self.circles {
                if *l != layer {
                    continue;
                }
                let _ = write!(
                    s,
                    "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{stroke}\"/>\n",
                    c.x, c.y, r
                );
            }
        }
        for p in &self.markers {
            let _ = write!(
                s,
                "<path class=\"failure\" d=\"M{} {} L{} {} M{} {} L{} {}\" stroke=\"#c02f1d\" stroke-width=\"{stroke}\"/>\n",
                p.x - marker_r,
                p.y - marker_r,
                p.x + marker_r,
                p.y + marker_r,
                p.x - marker_r,
                p.y + marker_r,
                p.x + marker_r,
                p.y - marker_r
            );
        }
        s.push_str("</svg>\n");
        Ok(s)
    }
}
