//! Convex-geometry toolkit for rolling-body certificates in the plane and
//! for plane sections of convex polytopes in space.
//!
//! The crate is organized around one pipeline:
//!
//! 1. [`geom2d`] gives planar primitives: convex boundaries, containment
//!    tests, Minkowski sums, largest inscribed and smallest enclosing disks.
//! 2. [`normal_field`] measures how fast the outward unit normal of a convex
//!    boundary turns: maximal and minimal oscillation of the normal over
//!    chord or arc separations, plus pointwise curvature estimates.
//! 3. [`ngons`] builds the two families of deformed regular polygons
//!    (mangled and fattened) whose inscribed and circumscribed radii are
//!    known in closed form. They are the extremal bodies for the
//!    verification harness.
//! 4. [`harness`] places scaled copies of those polygons at sampled boundary
//!    points and checks the inscribed / outscribed containment certificates,
//!    including the rolling-disk limits the certificates converge to.
//! 5. [`space3d`] lifts the machinery one dimension up: plane sections of
//!    convex polytopes, projected normal fields, and the bound that controls
//!    a section's normal oscillation by the body's.
//! 6. [`bodies`], [`io`], [`svg`] handle test-body generation, deterministic
//!    JSON serialization, and SVG rendering.
//!
//! All numeric code is pure `f64`, deterministic, and single threaded.

pub mod bodies;
pub mod geom2d;
pub mod harness;
pub mod hull3;
pub mod io;
pub mod ngons;
pub mod normal_field;
pub mod rng;
mod smalllp;
pub mod space3d;
pub mod svg;

pub use geom2d::{Angle, ConvexPolyline2, Disk, Point2, Vec2};

/// Crate-wide error type.
///
/// `Domain` covers geometric preconditions (non-convex input, parameter out
/// of range); `Parse` covers malformed input files, with the offending field
/// path embedded in the message; `Io` wraps filesystem failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

// The guide's code blocks compile and run as doctests so the chapters
// cannot drift from the library.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/overview.md")]
mod book_overview {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/plane-toolkit.md")]
mod book_plane_toolkit {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/normal-moduli.md")]
mod book_normal_moduli {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/deformed-ngons.md")]
mod book_deformed_ngons {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/certificates.md")]
mod book_certificates {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/space-sections.md")]
mod book_space_sections {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/command-line.md")]
mod book_command_line {}
