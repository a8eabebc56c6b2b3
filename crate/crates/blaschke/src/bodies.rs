//! Body descriptions: compact JSON specs that expand deterministically
//! into boundary polygons or polytopes.

use serde::{Deserialize, Serialize};

use crate::geom2d::{ConvexPolyline2, Point2};
use crate::hull3;
use crate::space3d::{self, ConvexPolytope3, Point3};
use crate::{Error, Result};

/// Smooth kinds need enough samples that the discretization tolerance
/// formulas stay meaningful.
const MIN_SAMPLES: usize = 16;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    /// Explicit planar polygon; reoriented counterclockwise if needed.
    Polygon { vertices: Vec<[f64; 2]> },
    /// Regular polygon inscribed in a circle.
    Circle {
        radius: f64,
        samples: usize,
        #[serde(default)]
        center: [f64; 2],
    },
    /// Polygon inscribed in an axis-aligned ellipse, a >= b, sampled at
    /// uniform eccentric anomaly.
    Ellipse { a: f64, b: f64, samples: usize },
    /// Convex hull of a raw 3-D point cloud.
    Polytope { vertices: Vec<[f64; 3]> },
    /// Subdivided icosahedron pushed onto a sphere.
    Icosphere { radius: f64, subdivisions: u32 },
    /// Icosphere scaled per axis.
    Ellipsoid3 { a: f64, b: f64, c: f64, subdivisions: u32 },
    Cube { half: f64 },
}

impl BodySpec {
    /// Planar kinds expand to polygons, solid kinds to polytopes.
    pub fn is_planar(&self) -> bool {
        matches!(
            self,
            BodySpec::Polygon { .. } | BodySpec::Circle { .. } | BodySpec::Ellipse { .. }
        )
    }

    /// Short human-readable identity for reports.
    pub fn label(&self) -> String {
        match self {
            BodySpec::Polygon { vertices } => format!("polygon({} vertices)", vertices.len()),
            BodySpec::Circle { radius, samples, .. } => {
                format!("circle(radius={radius}, samples={samples})")
            }
            BodySpec::Ellipse { a, b, samples } => {
                format!("ellipse(a={a}, b={b}, samples={samples})")
            }
            BodySpec::Polytope { vertices } => format!("polytope({} points)", vertices.len()),
            BodySpec::Icosphere { radius, subdivisions } => {
                format!("icosphere(radius={radius}, subdivisions={subdivisions})")
            }
            BodySpec::Ellipsoid3 { a, b, c, subdivisions } => {
                format!("ellipsoid3(a={a}, b={b}, c={c}, subdivisions={subdivisions})")
            }
            BodySpec::Cube { half } => format!("cube(half={half})"),
        }
    }

    fn check_samples(samples: usize) -> Result<()> {
        if samples < MIN_SAMPLES {
            return Err(Error::domain(format!(
                "smooth bodies need at least {MIN_SAMPLES} samples, got {samples}"
            )));
        }
        Ok(())
    }

    pub fn to_polygon(&self) -> Result<ConvexPolyline2> {
        match self {
            BodySpec::Polygon { vertices } => {
                ConvexPolyline2::new(vertices.iter().map(|&[x, y]| Point2::new(x, y)).collect())
            }
            BodySpec::Circle { radius, samples, center } => {
                Self::check_samples(*samples)?;
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(Error::domain(format!("radius must be positive, got {radius}")));
                }
                let n = *samples;
                let verts = (0..n)
                    .map(|i| {
                        let t = std::f64::consts::TAU * i as f64 / n as f64;
                        Point2::new(center[0] + radius * t.cos(), center[1] + radius * t.sin())
                    })
                    .collect();
                ConvexPolyline2::new(verts)
            }
            BodySpec::Ellipse { a, b, samples } => {
                Self::check_samples(*samples)?;
                if !(*b > 0.0) || !(a >= b) || !a.is_finite() {
                    return Err(Error::domain(format!(
                        "ellipse semi-axes must satisfy a >= b > 0, got a={a}, b={b}"
                    )));
                }
                let n = *samples;
                let verts = (0..n)
                    .map(|i| {
                        let t = std::f64::consts::TAU * i as f64 / n as f64;
                        Point2::new(a * t.cos(), b * t.sin())
                    })
                    .collect();
                ConvexPolyline2::new(verts)
            }
            _ => Err(Error::domain(format!(
                "{} is a solid body; this operation needs a planar one",
                self.label()
            ))),
        }
    }

    pub fn to_polytope(&self) -> Result<ConvexPolytope3> {
        match self {
            BodySpec::Polytope { vertices } => {
                let pts: Vec<Point3> = vertices
                    .iter()
                    .map(|&[x, y, z]| Point3::new(x, y, z))
                    .collect();
                hull3::convex_hull(&pts)
            }
            BodySpec::Icosphere { radius, subdivisions } => {
                space3d::icosphere(*radius, *subdivisions)
            }
            BodySpec::Ellipsoid3 { a, b, c, subdivisions } => {
                space3d::ellipsoid3(*a, *b, *c, *subdivisions)
            }
            BodySpec::Cube { half } => space3d::cube(*half),
            _ => Err(Error::domain(format!(
                "{} is a planar body; this operation needs a solid one",
                self.label()
            ))),
        }
    }

    /// Containment tolerance that absorbs the gap between the generated
    /// polygon or polytope and the smooth body it discretizes.
    ///
    /// Smooth kinds use the worst chord sagitta, kappa_max * step^2 / 8;
    /// exact kinds (explicit vertices, cube) only allow for rounding,
    /// 1e-9 of the extent.
    pub fn default_tolerance(&self) -> Result<f64> {
        let rounding = |extent: f64| 1e-9 * extent;
        Ok(match self {
            BodySpec::Polygon { vertices } => {
                let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
                for &[x, y] in vertices {
                    lo = [lo[0].min(x), lo[1].min(y)];
                    hi = [hi[0].max(x), hi[1].max(y)];
                }
                rounding(((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt())
            }
            BodySpec::Circle { radius, samples, .. } => {
                let step = std::f64::consts::TAU / *samples as f64;
                (radius * step * step / 8.0).max(rounding(2.0 * radius))
            }
            BodySpec::Ellipse { a, samples, .. } => {
                // Worst sagitta over the boundary under uniform eccentric
                // anomaly is a * dt^2 / 8 (extremes at the axis ends).
                let step = std::f64::consts::TAU / *samples as f64;
                (a * step * step / 8.0).max(rounding(2.0 * a))
            }
            BodySpec::Polytope { vertices } => {
                let (mut lo, mut hi) = ([f64::INFINITY; 3], [f64::NEG_INFINITY; 3]);
                for &[x, y, z] in vertices {
                    lo = [lo[0].min(x), lo[1].min(y), lo[2].min(z)];
                    hi = [hi[0].max(x), hi[1].max(y), hi[2].max(z)];
                }
                rounding(
                    ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2) + (hi[2] - lo[2]).powi(2))
                        .sqrt(),
                )
            }
            BodySpec::Icosphere { radius, subdivisions } => {
                let edge = icosa_edge_chord(*radius, *subdivisions);
                (edge * edge / (8.0 * radius)).max(rounding(2.0 * radius))
            }
            BodySpec::Ellipsoid3 { a, b, c, subdivisions } => {
                let hi = a.max(*b).max(*c);
                let lo = a.min(*b).min(*c);
                let edge = icosa_edge_chord(hi, *subdivisions);
                let kappa_max = hi / (lo * lo);
                (kappa_max * edge * edge / 8.0).max(rounding(2.0 * hi))
            }
            BodySpec::Cube { half } => rounding(2.0 * 3.0f64.sqrt() * half),
        })
    }
}

/// Longest mesh edge of a subdivided icosahedron scaled to `radius`.
fn icosa_edge_chord(radius: f64, subdivisions: u32) -> f64 {
    // Icosahedron edge subtends arccos(1/sqrt5); each subdivision halves
    // the arc.
    let arc = (1.0 / 5.0f64.sqrt()).acos() / (1u64 << subdivisions) as f64;
    2.0 * radius * (arc / 2.0).sin()
}

// Tagged-enum deserialization buffers its content, which strips field
// paths from error reports. Parsing dispatches on `kind` by hand into
// per-kind mirror structs so a bad number is reported by name.

macro_rules! payload {
    ($name:ident { $($field:ident : $ty:ty $(= $default:tt)?),* $(,)? } => $variant:ident) => {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct $name {
            #[allow(dead_code)]
            kind: String,
            $( $(#[serde(default = $default)])? $field: $ty, )*
        }
        impl From<$name> for BodySpec {
            fn from(p: $name) -> BodySpec {
                BodySpec::$variant { $($field: p.$field),* }
            }
        }
    };
}

fn zero2() -> [f64; 2] {
    [0.0, 0.0]
}

payload!(PolygonPayload { vertices: Vec<[f64; 2]> } => Polygon);
payload!(CirclePayload { radius: f64, samples: usize, center: [f64; 2] = "zero2" } => Circle);
payload!(EllipsePayload { a: f64, b: f64, samples: usize } => Ellipse);
payload!(PolytopePayload { vertices: Vec<[f64; 3]> } => Polytope);
payload!(IcospherePayload { radius: f64, subdivisions: u32 } => Icosphere);
payload!(Ellipsoid3Payload { a: f64, b: f64, c: f64, subdivisions: u32 } => Ellipsoid3);
payload!(CubePayload { half: f64 } => Cube);

/// Parse a body spec with field-level error paths.
pub fn body_from_str(text: &str, what: &str) -> Result<BodySpec> {
    let value: serde_json::Value = crate::io::from_str(text, what)?;
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| Error::Parse(format!("{what}: missing or non-string field `kind`")))?
        .to_owned();
    fn via<T: serde::de::DeserializeOwned + Into<BodySpec>>(
        value: serde_json::Value,
        what: &str,
    ) -> Result<BodySpec> {
        serde_path_to_error::deserialize::<_, T>(value)
            .map(Into::into)
            .map_err(|e| {
                let path = e.path().to_string();
                if path == "." {
                    Error::Parse(format!("{what}: {}", e.inner()))
                } else {
                    Error::Parse(format!("{what}: at field `{path}`: {}", e.inner()))
                }
            })
    }
    match kind.as_str() {
        "polygon" => via::<PolygonPayload>(value, what),
        "circle" => via::<CirclePayload>(value, what),
        "ellipse" => via::<EllipsePayload>(value, what),
        "polytope" => via::<PolytopePayload>(value, what),
        "icosphere" => via::<IcospherePayload>(value, what),
        "ellipsoid3" => via::<Ellipsoid3Payload>(value, what),
        "cube" => via::<CubePayload>(value, what),
        other => Err(Error::Parse(format!(
            "{what}: unknown body kind `{other}` (expected polygon, circle, ellipse, polytope, icosphere, ellipsoid3, or cube)"
        ))),
    }
}
