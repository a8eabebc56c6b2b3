//! Verification harness for the rolling certificates.
//!
//! A certificate is a containment claim tied to a measured normal-field
//! oscillation. Given a convex body K, a separation `tau` and a metric:
//!
//! * Inscribed: if the maximal oscillation `phi` over separations <= tau
//!   stays below pi/4, then at every boundary point x, for every outward
//!   normal direction there, a copy of the mangled polygon for `phi`,
//!   rotated to that normal, scaled by tau and anchored at x, fits inside
//!   K. Scaled by its closed-form inscribed radius, each placement also
//!   certifies a disk inside K through the neighborhood of x.
//! * Outscribed: if the minimal oscillation over separations >= tau is at
//!   least `phi > 0`, the fattened polygon for `phi` placed the same way
//!   contains K.
//!
//! The harness samples anchors on the boundary, exercises the extreme and
//! central normals of each anchor's cone, and reports the worst violation
//! over all placements. It never trusts the closed forms alone: every
//! placement is checked vertex by vertex against the body.
//!
//! The rolling-disk limits repeat the placement over a shrinking grid of
//! tau values and check the certified disk radii against the smooth limit
//! `1/kappa`, plus the limit disks themselves.

use serde::Serialize;

use crate::geom2d::{Angle, ConvexPolyline2, ContainmentOracle, Disk, Point2};
use crate::ngons::{self, Family};
use crate::normal_field::{LiftedNormalField, Metric};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Inscribed,
    Outscribed,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::Inscribed => write!(f, "inscribed"),
            Direction::Outscribed => write!(f, "outscribed"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Passed,
    Failed,
    HypothesisUnsatisfied,
}

/// One placement that violated its containment claim.
#[derive(Clone, Debug, Serialize)]
pub struct FailureSample {
    /// Boundary vertex index of the anchor point.
    pub vertex: usize,
    pub point: [f64; 2],
    /// Lifted angle of the outward normal used for the placement.
    pub normal_angle: f64,
    /// Worst signed penetration across the placement's test points.
    pub penetration: f64,
}

const MAX_REPORTED_FAILURES: usize = 64;

/// The measured premise the verification ran under.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Hypothesis {
    pub tau: f64,
    pub metric: Metric,
    /// Oscillation measured on the body at tau. None when no boundary
    /// pair is separated by tau, so the minimal oscillation is vacuous.
    pub measured_modulus: Option<f64>,
    /// Angle actually fed to the polygon construction (the measured
    /// value, clamped to the certificate's admissible range). None when
    /// no polygon applies.
    pub phi: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub direction: Direction,
    pub status: Status,
    /// True exactly when every placement stayed within tolerance. A
    /// hypothesis-unsatisfied run is not passed.
    pub passed: bool,
    /// Set when the hypothesis is unsatisfied.
    pub reason: Option<String>,
    /// Caller-supplied label of the body under test.
    pub body_id: Option<String>,
    pub hypothesis: Hypothesis,
    pub family: Option<Family>,
    pub k: Option<u32>,
    /// Scale at which polygons were placed; equals tau except in
    /// deliberately mis-scaled control runs.
    pub placement_tau: f64,
    /// Distinct boundary points anchoring placements.
    pub points_checked: usize,
    pub placements: usize,
    pub tol: f64,
    /// NaN (null in JSON) when nothing was placed.
    pub worst_penetration: f64,
    pub failures: Vec<FailureSample>,
}

fn validate_common(samples: usize, tol: f64) -> Result<()> {
    if samples == 0 {
        return Err(Error::domain("need at least one boundary sample"));
    }
    if !(tol >= 0.0) || !tol.is_finite() {
        return Err(Error::domain(format!("tolerance must be finite and >= 0, got {tol}")));
    }
    Ok(())
}

/// Stratified boundary anchors snapped to the nearest vertex, deduplicated.
fn sample_anchor_vertices(field: &LiftedNormalField, samples: usize) -> Vec<usize> {
    let ll = field.perimeter();
    let mut idx: Vec<usize> = (0..samples)
        .map(|j| field.nearest_vertex((j as f64 + 0.5) * ll / samples as f64))
        .collect();
    idx.sort_unstable();
    idx.dedup();
    idx
}

/// The three normal directions probed at a vertex: both cone extremes and
/// the bisector.
fn probe_normals(field: &LiftedNormalField, v: usize) -> [f64; 3] {
    let (lo, hi) = field.cone(v);
    [lo, 0.5 * (lo + hi), hi]
}

/// Anchor-to-pose transform: a standard polygon is built with its base
/// point at the origin and its body in the upper half plane, so the
/// outward normal at the base points along angle -pi/2. A boundary normal
/// at lifted angle theta therefore needs rotation theta + pi/2.
fn pose_angle(theta: f64) -> Angle {
    Angle::new(theta + std::f64::consts::FRAC_PI_2)
}

pub fn verify_inscribed(
    body: &ConvexPolyline2,
    tau: f64,
    metric: Metric,
    samples: usize,
    tol: f64,
) -> Result<VerificationReport> {
    verify_inscribed_with(body, tau, metric, samples, tol, tau)
}

/// Inscribed verification with an explicit placement scale, used by
/// negative controls that place deliberately oversized polygons.
pub fn verify_inscribed_with(
    body: &ConvexPolyline2,
    tau: f64,
    metric: Metric,
    samples: usize,
    tol: f64,
    placement_tau: f64,
) -> Result<VerificationReport> {
    validate_common(samples, tol)?;
    if !(placement_tau > 0.0) || !placement_tau.is_finite() {
        return Err(Error::domain("placement scale must be positive and finite"));
    }
    let field = LiftedNormalField::new(body);
    let phi = field.maximal_oscillation(tau, metric)?;
    let mut report = VerificationReport {
        direction: Direction::Inscribed,
        status: Status::HypothesisUnsatisfied,
        passed: false,
        reason: None,
        body_id: None,
        hypothesis: Hypothesis { tau, metric, measured_modulus: Some(phi), phi: None },
        family: None,
        k: None,
        placement_tau,
        points_checked: 0,
        placements: 0,
        tol,
        worst_penetration: f64::NAN,
        failures: Vec::new(),
    };
    if phi >= std::f64::consts::FRAC_PI_4 {
        report.reason = Some(format!(
            "maximal oscillation {phi:.6} is not below pi/4; no mangled polygon applies"
        ));
        return Ok(report);
    }
    report.hypothesis.phi = Some(phi);
    let ngon = ngons::mangled_for(phi)?;
    report.family = Some(Family::Mangled);
    report.k = Some(ngon.k);
    report.worst_penetration = 0.0;

    let oracle = ContainmentOracle::new(body);
    let anchors = sample_anchor_vertices(&field, samples);
    report.points_checked = anchors.len();
    for &v in &anchors {
        let x = body.vertex(v);
        for theta in probe_normals(&field, v) {
            let placed = ngons::place(&ngon.polygon, x, pose_angle(theta), placement_tau)?;
            let mut worst = 0.0f64;
            for &q in placed.vertices() {
                worst = worst.max(oracle.violation(q));
            }
            report.placements += 1;
            report.worst_penetration = report.worst_penetration.max(worst);
            if worst > tol && report.failures.len() < MAX_REPORTED_FAILURES {
                report.failures.push(FailureSample {
                    vertex: v,
                    point: [x.x, x.y],
                    normal_angle: theta,
                    penetration: worst,
                });
            }
        }
    }
    report.passed = report.worst_penetration <= tol;
    report.status = if report.passed { Status::Passed } else { Status::Failed };
    Ok(report)
}

pub fn verify_outscribed(
    body: &ConvexPolyline2,
    tau: f64,
    metric: Metric,
    samples: usize,
    tol: f64,
) -> Result<VerificationReport> {
    verify_outscribed_with(body, tau, metric, samples, tol, tau)
}

/// Outscribed verification with an explicit placement scale; controls use
/// an undersized scale, which shrinks the fattened polygon until the body
/// escapes it.
pub fn verify_outscribed_with(
    body: &ConvexPolyline2,
    tau: f64,
    metric: Metric,
    samples: usize,
    tol: f64,
    placement_tau: f64,
) -> Result<VerificationReport> {
    validate_common(samples, tol)?;
    if !(placement_tau > 0.0) || !placement_tau.is_finite() {
        return Err(Error::domain("placement scale must be positive and finite"));
    }
    let field = LiftedNormalField::new(body);
    let min_osc = field.minimal_oscillation(tau, metric)?;
    let mut report = VerificationReport {
        direction: Direction::Outscribed,
        status: Status::HypothesisUnsatisfied,
        passed: false,
        reason: None,
        body_id: None,
        hypothesis: Hypothesis { tau, metric, measured_modulus: min_osc, phi: None },
        family: None,
        k: None,
        placement_tau,
        points_checked: 0,
        placements: 0,
        tol,
        worst_penetration: f64::NAN,
        failures: Vec::new(),
    };
    let phi = match min_osc {
        None => {
            report.reason = Some(format!(
                "no pair of boundary points is separated by {tau}; the minimal oscillation is vacuous"
            ));
            return Ok(report);
        }
        Some(p) => p,
    };
    if phi <= 0.0 {
        report.reason = Some(format!(
            "minimal oscillation is zero at separation {tau} (a flat stretch of boundary is at least that long); no fattened polygon applies"
        ));
        return Ok(report);
    }
    // The certificate needs an angle in (0, pi/2]; a larger measured
    // oscillation still satisfies the pi/2 hypothesis.
    let phi_used = phi.min(std::f64::consts::FRAC_PI_2);
    report.hypothesis.phi = Some(phi_used);
    let ngon = ngons::fattened_for(phi_used)?;
    report.family = Some(Family::Fattened);
    report.k = Some(ngon.k);
    report.worst_penetration = 0.0;

    let anchors = sample_anchor_vertices(&field, samples);
    report.points_checked = anchors.len();
    for &v in &anchors {
        let x = body.vertex(v);
        for theta in probe_normals(&field, v) {
            let placed = ngons::place(&ngon.polygon, x, pose_angle(theta), placement_tau)?;
            let oracle = ContainmentOracle::new(&placed);
            let mut worst = 0.0f64;
            for &q in body.vertices() {
                worst = worst.max(oracle.violation(q));
            }
            report.placements += 1;
            report.worst_penetration = report.worst_penetration.max(worst);
            if worst > tol && report.failures.len() < MAX_REPORTED_FAILURES {
                report.failures.push(FailureSample {
                    vertex: v,
                    point: [x.x, x.y],
                    normal_angle: theta,
                    penetration: worst,
                });
            }
        }
    }
    report.passed = report.worst_penetration <= tol;
    report.status = if report.passed { Status::Passed } else { Status::Failed };
    Ok(report)
}

/// One scale of a rolling-disk limit run.
#[derive(Clone, Debug, Serialize)]
pub struct LimitRow {
    pub tau: f64,
    /// Angle hypothesis at this scale: the measured maximal oscillation
    /// (inscribed) or the promised `kappa * tau` (outscribed).
    pub phi: f64,
    pub k: Option<u32>,
    /// Radius of the disk this scale certifies.
    pub certified_radius: f64,
    pub status: Status,
    pub worst_penetration: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectDiskCheck {
    pub radius: f64,
    pub passed: bool,
    pub worst_penetration: f64,
    pub failures: Vec<FailureSample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub direction: Direction,
    pub kappa: f64,
    /// 1 / kappa: the rolling-disk radius the certified radii approach.
    pub limit_radius: f64,
    pub rows: Vec<LimitRow>,
    pub direct: DirectDiskCheck,
}

/// Inscribed rolling-disk limit. For each tau, measure the chord
/// oscillation, build the mangled polygon it allows, and verify the disk
/// it certifies (radius tau * inscribed radius) inside the body at every
/// anchor and probe normal. Then check the limit disk of radius
/// `1/kappa_sup` placed tangentially at each anchor's central normal.
pub fn blaschke_limit_inscribed(
    body: &ConvexPolyline2,
    kappa_sup: f64,
    taus: &[f64],
    samples: usize,
    tol: f64,
) -> Result<LimitReport> {
    validate_common(samples, tol)?;
    if !(kappa_sup > 0.0) || !kappa_sup.is_finite() {
        return Err(Error::domain("curvature bound must be positive and finite"));
    }
    if taus.is_empty() {
        return Err(Error::domain("need at least one scale in the tau grid"));
    }
    let field = LiftedNormalField::new(body);
    let anchors = sample_anchor_vertices(&field, samples);
    let profile = field.oscillation_profile(taus, Metric::Chord)?;

    let mut rows = Vec::with_capacity(taus.len());
    for pt in &profile {
        let tau = pt.tau;
        let phi = pt.max;
        if phi >= std::f64::consts::FRAC_PI_4 {
            rows.push(LimitRow {
                tau,
                phi,
                k: None,
                certified_radius: f64::NAN,
                status: Status::HypothesisUnsatisfied,
                worst_penetration: f64::NAN,
            });
            continue;
        }
        let ngon = ngons::mangled_for(phi)?;
        let certified = tau * ngon.inscribed_radius;
        let mut worst = 0.0f64;
        for &v in &anchors {
            let x = body.vertex(v);
            for theta in probe_normals(&field, v) {
                let (ins, _) = ngons::placed_disks(&ngon, x, pose_angle(theta), tau);
                let escape = ins.radius - body.signed_clearance(ins.center);
                worst = worst.max(escape.max(0.0));
            }
        }
        rows.push(LimitRow {
            tau,
            phi,
            k: Some(ngon.k),
            certified_radius: certified,
            status: if worst <= tol { Status::Passed } else { Status::Failed },
            worst_penetration: worst,
        });
    }

    // Direct limit disk: radius 1/kappa tangent from inside at the
    // anchor's central normal.
    let rho = 1.0 / kappa_sup;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for &v in &anchors {
        let x = body.vertex(v);
        let theta = field.cone_mid(v);
        let n = Angle::new(theta).unit_vector();
        let center = Point2::new(x.x - rho * n.x, x.y - rho * n.y);
        let escape = (rho - body.signed_clearance(center)).max(0.0);
        worst = worst.max(escape);
        if escape > tol && failures.len() < MAX_REPORTED_FAILURES {
            failures.push(FailureSample {
                vertex: v,
                point: [x.x, x.y],
                normal_angle: theta,
                penetration: escape,
            });
        }
    }
    Ok(LimitReport {
        direction: Direction::Inscribed,
        kappa: kappa_sup,
        limit_radius: rho,
        rows,
        direct: DirectDiskCheck {
            radius: rho,
            passed: worst <= tol,
            worst_penetration: worst,
            failures,
        },
    })
}

/// Outscribed rolling-disk limit. Here the angle hypothesis is a promise
/// derived from the claimed curvature floor: at scale tau the minimal
/// oscillation of any boundary with curvature >= kappa_inf is at least
/// `kappa_inf * tau`, so the fattened polygon for that angle must contain
/// the body, and so must its circumscribed disk (radius tau * R). The
/// direct check places the limit disk of radius `1/kappa_inf`.
pub fn strantzen_limit_outscribed(
    body: &ConvexPolyline2,
    kappa_inf: f64,
    taus: &[f64],
    samples: usize,
    tol: f64,
) -> Result<LimitReport> {
    validate_common(samples, tol)?;
    if !(kappa_inf > 0.0) || !kappa_inf.is_finite() {
        return Err(Error::domain("curvature bound must be positive and finite"));
    }
    if taus.is_empty() {
        return Err(Error::domain("need at least one scale in the tau grid"));
    }
    let field = LiftedNormalField::new(body);
    let anchors = sample_anchor_vertices(&field, samples);

    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        let phi = kappa_inf * tau;
        if !(phi > 0.0) || phi > std::f64::consts::PI {
            rows.push(LimitRow {
                tau,
                phi,
                k: None,
                certified_radius: f64::NAN,
                status: Status::HypothesisUnsatisfied,
                worst_penetration: f64::NAN,
            });
            continue;
        }
        let phi_used = phi.min(std::f64::consts::FRAC_PI_2);
        let ngon = ngons::fattened_for(phi_used)?;
        let certified = tau * ngon.circumscribed_radius;
        let mut worst = 0.0f64;
        for &v in &anchors {
            let x = body.vertex(v);
            for theta in probe_normals(&field, v) {
                let (_, out) = ngons::placed_disks(&ngon, x, pose_angle(theta), tau);
                worst = worst.max(out.max_escape(body).max(0.0));
            }
        }
        rows.push(LimitRow {
            tau,
            phi,
            k: Some(ngon.k),
            certified_radius: certified,
            status: if worst <= tol { Status::Passed } else { Status::Failed },
            worst_penetration: worst,
        });
    }

    let rho = 1.0 / kappa_inf;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for &v in &anchors {
        let x = body.vertex(v);
        let theta = field.cone_mid(v);
        let n = Angle::new(theta).unit_vector();
        let center = Point2::new(x.x - rho * n.x, x.y - rho * n.y);
        let escape = Disk::new(center, rho).max_escape(body).max(0.0);
        worst = worst.max(escape);
        if escape > tol && failures.len() < MAX_REPORTED_FAILURES {
            failures.push(FailureSample {
                vertex: v,
                point: [x.x, x.y],
                normal_angle: theta,
                penetration: escape,
            });
        }
    }
    Ok(LimitReport {
        direction: Direction::Outscribed,
        kappa: kappa_inf,
        limit_radius: rho,
        rows,
        direct: DirectDiskCheck {
            radius: rho,
            passed: worst <= tol,
            worst_penetration: worst,
            failures,
        },
    })
}
