//! Command-line front end for the blaschke library: builds the deformed
//! polygons, measures normal-field oscillation, runs the containment
//! verifications and their rolling-disk limits, cuts polytopes with planes,
//! and renders figures.
//!
//! Exit codes: 0 when the requested check passed (or the command only
//! computes), 1 on malformed input or usage errors, 2 when a verification
//! ran and failed, 3 when its hypothesis was not satisfied so nothing was
//! claimed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use blaschke::bodies::BodySpec;
use blaschke::geom2d::Point2;
use blaschke::harness::{self, Status, VerificationReport};
use blaschke::io;
use blaschke::ngons::{self, DeformedNgon};
use blaschke::normal_field::{LiftedNormalField, Metric};
use blaschke::rng::Xoshiro256StarStar;
use blaschke::space3d::{self, ConvexPolytope3, Vec3};
use blaschke::svg::Scene;
use blaschke::{Angle, Error, Result};

const EXIT_PASSED: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_UNSATISFIED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "blaschke",
    version,
    about = "Deformed polygons, normal-field moduli, and disk containment checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a mangled or fattened polygon with its exact disk radii
    Ngon(NgonArgs),
    /// Measure oscillation moduli and curvature estimates of a planar body
    Analyze(AnalyzeArgs),
    /// Verify the inscribed or outscribed polygon certificate on a body
    Verify(VerifyArgs),
    /// Rolling-disk limit study over a grid of separation scales
    Limit(LimitArgs),
    /// Plane sections of convex polytopes and their comparison bounds
    Space(SpaceArgs),
    /// Render bodies, overlays, and failure markers to SVG
    Render(RenderArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Mangled,
    Fattened,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Inscribed,
    Outscribed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Chord,
    Arc,
}

impl MetricArg {
    fn to_metric(self) -> Metric {
        match self {
            MetricArg::Chord => Metric::Chord,
            MetricArg::Arc => Metric::Arc,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LawArg {
    Blaschke,
    Strantzen,
}

#[derive(Args)]
struct NgonArgs {
    /// Which deformation of the regular polygon to build
    #[arg(value_enum)]
    family: FamilyArg,
    /// Sharpness index; mangled needs k >= 2, fattened k >= 1
    #[arg(long, conflicts_with = "phi")]
    k: Option<u32>,
    /// Angle budget in radians; picks the smallest index whose guarantee
    /// covers it
    #[arg(long)]
    phi: Option<f64>,
    /// Edge scale of a placement; radii and vertices are emitted placed
    #[arg(long)]
    tau: Option<f64>,
    /// Placement rotation in radians (requires --tau)
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Placement anchor x coordinate (requires --tau)
    #[arg(long, default_value_t = 0.0)]
    x: f64,
    /// Placement anchor y coordinate (requires --tau)
    #[arg(long, default_value_t = 0.0)]
    y: f64,
    /// Output JSON path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also draw the polygon and its two disks
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Body description JSON
    #[arg(long)]
    body: PathBuf,
    /// Separation scale for the moduli
    #[arg(long)]
    tau: f64,
    /// Metric recorded as primary; the report always carries both
    #[arg(long, value_enum, default_value_t = MetricArg::Chord)]
    metric: MetricArg,
    /// Output JSON path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which containment certificate to check
    #[arg(value_enum)]
    direction: DirectionArg,
    /// Body description JSON
    #[arg(long)]
    body: PathBuf,
    /// Separation scale of the hypothesis
    #[arg(long)]
    tau: f64,
    /// Distance metric for the oscillation window
    #[arg(long, value_enum, default_value_t = MetricArg::Chord)]
    metric: MetricArg,
    /// Boundary anchor count
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Containment tolerance; defaults to the body's discretization slack
    #[arg(long)]
    tol: Option<f64>,
    /// Output JSON path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Draw the body with failure markers
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct LimitArgs {
    /// blaschke drives the inscribed limit, strantzen the outscribed one
    #[arg(value_enum)]
    law: LawArg,
    /// Body description JSON
    #[arg(long)]
    body: PathBuf,
    /// Curvature bound: a supremum for blaschke, an infimum for strantzen
    #[arg(long)]
    kappa0: f64,
    /// Comma-separated separation scales
    #[arg(long, value_delimiter = ',', required = true)]
    tau_grid: Vec<f64>,
    /// Boundary anchor count
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Containment tolerance; defaults to the body's discretization slack
    #[arg(long)]
    tol: Option<f64>,
    /// Output JSON path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpaceArgs {
    #[command(subcommand)]
    action: SpaceCmd,
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Cut the polytope with seeded random planes through its center
    Section(SpaceSectionArgs),
    /// Check the section-vs-body modulus comparison on every plane
    Bound(SpaceBoundArgs),
    /// Verify the space inscribed certificate inside plane sections
    Verify(SpaceVerifyArgs),
    /// Random search for section/body oscillation ratios; asserts nothing
    Explore(SpaceExploreArgs),
}

#[derive(Args)]
struct SpaceSectionArgs {
    /// Solid body description JSON
    #[arg(long)]
    polytope: PathBuf,
    /// Number of cutting planes
    #[arg(long, default_value_t = 8)]
    planes: usize,
    /// Seed for the plane orientations
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output JSON path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Draw the first section polygon
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SpaceBoundArgs {
    /// Solid body description JSON
    #[arg(long)]
    polytope: PathBuf,
    /// Separation scale
    #[arg(long)]
    tau: f64,
    /// Number of cutting planes
    #[arg(long, default_value_t = 8)]
    planes: usize,
    /// Seed for the plane orientations
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output JSON path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpaceVerifyArgs {
    /// Solid body description JSON
    #[arg(long)]
    polytope: PathBuf,
    /// Separation scale of the hypothesis
    #[arg(long)]
    tau: f64,
    /// Angle hypothesis; defaults to the measured body modulus at tau
    #[arg(long)]
    phi: Option<f64>,
    /// Planes swept per boundary sample
    #[arg(long, default_value_t = 16)]
    planes: usize,
    /// Boundary vertex sample count
    #[arg(long, default_value_t = 32)]
    samples: usize,
    /// Seed is accepted for interface symmetry; the sweep is deterministic
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Containment tolerance; defaults to the body's discretization slack
    #[arg(long)]
    tol: Option<f64>,
    /// Output JSON path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpaceExploreArgs {
    /// Seed for the random polytopes and planes
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of random polytopes
    #[arg(long, default_value_t = 4)]
    bodies: usize,
    /// Planes cut per polytope
    #[arg(long, default_value_t = 8)]
    planes: usize,
    /// Separation scale
    #[arg(long)]
    tau: f64,
    /// Hull points per random polytope
    #[arg(long, default_value_t = 48)]
    points: usize,
    /// Output JSON path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Planar body description JSON
    #[arg(long)]
    body: PathBuf,
    /// Polygon JSON files drawn on top of the body; repeatable
    #[arg(long)]
    overlay: Vec<PathBuf>,
    /// Verification report whose failure points become markers
    #[arg(long)]
    report: Option<PathBuf>,
    /// Output SVG path
    #[arg(long)]
    svg: PathBuf,
}

/// Print to stdout, treating a closed pipe as an early but clean exit
/// instead of a panic.
fn write_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(i32::from(EXIT_USAGE));
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write_stdout(&e.to_string());
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Ngon(a) => run_ngon(a),
        Cmd::Analyze(a) => run_analyze(a),
        Cmd::Verify(a) => run_verify(a),
        Cmd::Limit(a) => run_limit(a),
        Cmd::Space(a) => match a.action {
            SpaceCmd::Section(a) => run_space_section(a),
            SpaceCmd::Bound(a) => run_space_bound(a),
            SpaceCmd::Verify(a) => run_space_verify(a),
            SpaceCmd::Explore(a) => run_space_explore(a),
        },
        Cmd::Render(a) => run_render(a),
    }
}

// -------------------------------------------------------------------------
// Output plumbing. Relative output paths resolve under BLASCHKE_OUT when
// that variable is set; stdout is used when no path is given.

fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("BLASCHKE_OUT") {
        Some(dir) if !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => {
            let p = resolve_out(p);
            ensure_parent(&p)?;
            io::write_json(&p, value)
        }
        None => {
            let mut s = io::to_string_17(value)?;
            s.push('\n');
            write_stdout(&s);
            Ok(())
        }
    }
}

fn emit_svg(scene: &Scene, path: &Path) -> Result<()> {
    let p = resolve_out(path);
    ensure_parent(&p)?;
    std::fs::write(&p, scene.to_svg()?)?;
    Ok(())
}

fn read_planar(path: &Path) -> Result<(BodySpec, blaschke::ConvexPolyline2)> {
    let spec = io::read_body(path)?;
    let poly = spec.to_polygon()?;
    Ok((spec, poly))
}

fn read_solid(path: &Path) -> Result<(BodySpec, ConvexPolytope3)> {
    let spec = io::read_body(path)?;
    let body = spec.to_polytope()?;
    Ok((spec, body))
}

fn status_exit(status: Status) -> u8 {
    match status {
        Status::Passed => EXIT_PASSED,
        Status::Failed => EXIT_FAILED,
        Status::HypothesisUnsatisfied => EXIT_UNSATISFIED,
    }
}

// -------------------------------------------------------------------------
// ngon

#[derive(Serialize)]
struct DiskOut {
    center: [f64; 2],
    radius: f64,
}

impl DiskOut {
    fn new(d: blaschke::Disk) -> Self {
        DiskOut { center: [d.center.x, d.center.y], radius: d.radius }
    }
}

#[derive(Serialize)]
struct RadiiOut {
    /// Inscribed disk radius at unit edge scale.
    r: f64,
    /// Circumscribed disk radius at unit edge scale.
    #[serde(rename = "R")]
    big_r: f64,
}

#[derive(Serialize)]
struct PlacementOut {
    tau: f64,
    alpha: f64,
    x: [f64; 2],
}

#[derive(Serialize)]
struct NgonOut {
    family: ngons::Family,
    k: u32,
    n: usize,
    /// Largest angle hypothesis this polygon serves.
    phi_star: f64,
    radii: RadiiOut,
    placement: Option<PlacementOut>,
    /// Disks in the emitted coordinates (scaled by tau when placed).
    inscribed_disk: DiskOut,
    circumscribed_disk: DiskOut,
    /// Vertices in the emitted coordinates.
    vertices: Vec<[f64; 2]>,
}

fn run_ngon(a: NgonArgs) -> Result<u8> {
    let ngon: DeformedNgon = match (a.k, a.phi, a.family) {
        (Some(k), None, FamilyArg::Mangled) => ngons::standard_mangled(k)?,
        (Some(k), None, FamilyArg::Fattened) => ngons::standard_fattened(k)?,
        (None, Some(phi), FamilyArg::Mangled) => ngons::mangled_for(phi)?,
        (None, Some(phi), FamilyArg::Fattened) => ngons::fattened_for(phi)?,
        _ => return Err(Error::domain("give exactly one of --k or --phi")),
    };
    let (polygon, disks, placement) = match a.tau {
        Some(tau) => {
            let x = Point2::new(a.x, a.y);
            let alpha = Angle::new(a.alpha);
            let placed = ngons::place(&ngon.polygon, x, alpha, tau)?;
            let (din, dout) = ngons::placed_disks(&ngon, x, alpha, tau);
            (placed, (din, dout), Some(PlacementOut { tau, alpha: a.alpha, x: [a.x, a.y] }))
        }
        None => (
            ngon.polygon.clone(),
            (ngon.inscribed_disk(), ngon.circumscribed_disk()),
            None,
        ),
    };
    let out = NgonOut {
        family: ngon.family,
        k: ngon.k,
        n: polygon.len(),
        phi_star: ngon.phi_star,
        radii: RadiiOut { r: ngon.inscribed_radius, big_r: ngon.circumscribed_radius },
        placement,
        inscribed_disk: DiskOut::new(disks.0),
        circumscribed_disk: DiskOut::new(disks.1),
        vertices: polygon.vertices().iter().map(|p| [p.x, p.y]).collect(),
    };
    emit_json(&out, a.out.as_deref())?;
    if let Some(svg) = &a.svg {
        let mut scene = Scene::new();
        scene
            .add_body(&polygon)
            .add_overlay_circle(disks.0.center, disks.0.radius)
            .add_overlay_circle(disks.1.center, disks.1.radius);
        emit_svg(&scene, svg)?;
    }
    Ok(EXIT_PASSED)
}

// -------------------------------------------------------------------------
// analyze

#[derive(Serialize)]
struct MinimalOut {
    value: Option<f64>,
    reason: Option<String>,
}

fn minimal_out(field: &LiftedNormalField, tau: f64, metric: Metric) -> Result<MinimalOut> {
    Ok(match field.minimal_oscillation(tau, metric)? {
        None => MinimalOut {
            value: None,
            reason: Some("no boundary pair at distance >= tau".into()),
        },
        // Same-edge pairs reach separation tau with equal normals, so the
        // infimum collapses; report why instead of a bare zero.
        Some(v) if v == 0.0 => {
            MinimalOut { value: None, reason: Some("edge longer than tau".into()) }
        }
        Some(v) => MinimalOut { value: Some(v), reason: None },
    })
}

#[derive(Serialize)]
struct CurvatureOut {
    /// Arc distance of the two-sided probes.
    probe_arc: f64,
    min: f64,
    max: f64,
}

#[derive(Serialize)]
struct AnalyzeOut {
    body_id: String,
    tau: f64,
    metric: Metric,
    vertices: usize,
    perimeter: f64,
    diameter: f64,
    max_cone_width: f64,
    maximal_chord: f64,
    minimal_chord: MinimalOut,
    maximal_arc: f64,
    minimal_arc: MinimalOut,
    curvature: CurvatureOut,
}

fn run_analyze(a: AnalyzeArgs) -> Result<u8> {
    let (spec, poly) = read_planar(&a.body)?;
    let field = LiftedNormalField::new(&poly);
    let n = field.len();
    let perimeter = field.perimeter();
    let probe = (2.0 * perimeter / n as f64).min(perimeter / 5.0);
    let mut kmin = f64::INFINITY;
    let mut kmax = f64::NEG_INFINITY;
    for v in 0..n {
        let est = field.curvature_estimate(v, probe)?;
        kmin = kmin.min(est);
        kmax = kmax.max(est);
    }
    let out = AnalyzeOut {
        body_id: spec.label(),
        tau: a.tau,
        metric: a.metric.to_metric(),
        vertices: n,
        perimeter,
        diameter: poly.diameter(),
        max_cone_width: field.max_cone_width(),
        maximal_chord: field.maximal_oscillation(a.tau, Metric::Chord)?,
        minimal_chord: minimal_out(&field, a.tau, Metric::Chord)?,
        maximal_arc: field.maximal_oscillation(a.tau, Metric::Arc)?,
        minimal_arc: minimal_out(&field, a.tau, Metric::Arc)?,
        curvature: CurvatureOut { probe_arc: probe, min: kmin, max: kmax },
    };
    emit_json(&out, a.out.as_deref())?;
    Ok(EXIT_PASSED)
}

// -------------------------------------------------------------------------
// verify

fn run_verify(a: VerifyArgs) -> Result<u8> {
    let (spec, poly) = read_planar(&a.body)?;
    let tol = match a.tol {
        Some(t) => t,
        None => spec.default_tolerance()?,
    };
    let metric = a.metric.to_metric();
    let mut report: VerificationReport = match a.direction {
        DirectionArg::Inscribed => {
            harness::verify_inscribed(&poly, a.tau, metric, a.samples, tol)?
        }
        DirectionArg::Outscribed => {
            harness::verify_outscribed(&poly, a.tau, metric, a.samples, tol)?
        }
    };
    report.body_id = Some(spec.label());
    emit_json(&report, a.out.as_deref())?;
    if let Some(svg) = &a.svg {
        let mut scene = Scene::new();
        scene.add_body(&poly);
        for f in &report.failures {
            scene.add_marker(Point2::new(f.point[0], f.point[1]));
        }
        emit_svg(&scene, svg)?;
    }
    Ok(status_exit(report.status))
}

// -------------------------------------------------------------------------
// limit

fn run_limit(a: LimitArgs) -> Result<u8> {
    let (spec, poly) = read_planar(&a.body)?;
    let tol = match a.tol {
        Some(t) => t,
        None => spec.default_tolerance()?,
    };
    let report = match a.law {
        LawArg::Blaschke => {
            harness::blaschke_limit_inscribed(&poly, a.kappa0, &a.tau_grid, a.samples, tol)?
        }
        LawArg::Strantzen => {
            harness::strantzen_limit_outscribed(&poly, a.kappa0, &a.tau_grid, a.samples, tol)?
        }
    };
    emit_json(&report, a.out.as_deref())?;
    let any_failed =
        report.rows.iter().any(|r| r.status == Status::Failed) || !report.direct.passed;
    let all_unsatisfied =
        report.rows.iter().all(|r| r.status == Status::HypothesisUnsatisfied);
    Ok(if any_failed {
        EXIT_FAILED
    } else if all_unsatisfied {
        EXIT_UNSATISFIED
    } else {
        EXIT_PASSED
    })
}

// -------------------------------------------------------------------------
// space

/// Seeded random orthonormal plane bases. The normal is uniform on the
/// sphere; the in-plane pair comes from the least-aligned coordinate axis.
fn seeded_frames(seed: u64, count: usize) -> Vec<(Vec3, Vec3)> {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.unit_vector3();
            let n = Vec3::new(n[0], n[1], n[2]);
            let pick = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
                Vec3::new(1.0, 0.0, 0.0)
            } else if n.y.abs() <= n.z.abs() {
                Vec3::new(0.0, 1.0, 0.0)
            } else {
                Vec3::new(0.0, 0.0, 1.0)
            };
            let e1 = (pick - n * pick.dot(n)).normalized();
            let e2 = n.cross(e1).normalized();
            (e1, e2)
        })
        .collect()
}

#[derive(Serialize)]
struct FrameOut {
    origin: [f64; 3],
    e1: [f64; 3],
    e2: [f64; 3],
    normal: [f64; 3],
}

#[derive(Serialize)]
struct SectionOut {
    plane: usize,
    frame: FrameOut,
    vertex_count: usize,
    area: f64,
    perimeter: f64,
    vertices: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct SectionsOut {
    body_id: String,
    seed: u64,
    planes: usize,
    inradius: f64,
    outradius: f64,
    sections: Vec<SectionOut>,
}

fn run_space_section(a: SpaceSectionArgs) -> Result<u8> {
    let (spec, body) = read_solid(&a.polytope)?;
    if a.planes == 0 {
        return Err(Error::domain("need at least one plane"));
    }
    let mut sections = Vec::with_capacity(a.planes);
    let mut first = None;
    for (i, (e1, e2)) in seeded_frames(a.seed, a.planes).into_iter().enumerate() {
        let sec = space3d::section(&body, e1, e2)?;
        let f = &sec.frame;
        sections.push(SectionOut {
            plane: i,
            frame: FrameOut {
                origin: [f.origin.x, f.origin.y, f.origin.z],
                e1: [f.e1.x, f.e1.y, f.e1.z],
                e2: [f.e2.x, f.e2.y, f.e2.z],
                normal: [f.normal.x, f.normal.y, f.normal.z],
            },
            vertex_count: sec.polygon.len(),
            area: sec.polygon.area(),
            perimeter: sec.polygon.perimeter(),
            vertices: sec.polygon.vertices().iter().map(|p| [p.x, p.y]).collect(),
        });
        if first.is_none() {
            first = Some(sec.polygon);
        }
    }
    let out = SectionsOut {
        body_id: spec.label(),
        seed: a.seed,
        planes: a.planes,
        inradius: body.inradius(),
        outradius: body.outradius(),
        sections,
    };
    emit_json(&out, a.out.as_deref())?;
    if let Some(svg) = &a.svg {
        let mut scene = Scene::new();
        scene.add_body(first.as_ref().expect("planes > 0"));
        emit_svg(&scene, svg)?;
    }
    Ok(EXIT_PASSED)
}

#[derive(Serialize)]
struct PlaneBoundOut {
    plane: usize,
    bound: space3d::SectionBoundCheck,
    pairs: space3d::PairwiseNormalCheck,
    cones: space3d::ConeMembershipCheck,
}

#[derive(Serialize)]
struct BoundOut {
    body_id: String,
    tau: f64,
    seed: u64,
    planes: usize,
    /// Planes where the transversality gate kept the comparison from
    /// asserting anything.
    gated_out: usize,
    all_hold: bool,
    results: Vec<PlaneBoundOut>,
}

fn run_space_bound(a: SpaceBoundArgs) -> Result<u8> {
    let (spec, body) = read_solid(&a.polytope)?;
    if a.planes == 0 {
        return Err(Error::domain("need at least one plane"));
    }
    let bm = space3d::body_normal_modulus(&body, a.tau)?;
    let mut results = Vec::with_capacity(a.planes);
    let mut gated_out = 0usize;
    let mut any_failed = false;
    for (i, (e1, e2)) in seeded_frames(a.seed, a.planes).into_iter().enumerate() {
        let sec = space3d::section(&body, e1, e2)?;
        let bound = space3d::check_section_bound_with(&body, &sec, a.tau, bm.angle, 1e-9)?;
        let pairs = space3d::check_projected_pair_bound(&body, &sec, 1e-9);
        let cones = space3d::check_projected_normal_cones(&body, &sec, 1e-6);
        if bound.status == Status::HypothesisUnsatisfied {
            gated_out += 1;
        }
        if bound.status == Status::Failed || !pairs.holds || cones.violations > 0 {
            any_failed = true;
        }
        results.push(PlaneBoundOut { plane: i, bound, pairs, cones });
    }
    let all_gated = gated_out == a.planes;
    let out = BoundOut {
        body_id: spec.label(),
        tau: a.tau,
        seed: a.seed,
        planes: a.planes,
        gated_out,
        all_hold: !any_failed,
        results,
    };
    emit_json(&out, a.out.as_deref())?;
    Ok(if any_failed {
        EXIT_FAILED
    } else if all_gated {
        EXIT_UNSATISFIED
    } else {
        EXIT_PASSED
    })
}

fn run_space_verify(a: SpaceVerifyArgs) -> Result<u8> {
    let (spec, body) = read_solid(&a.polytope)?;
    let _ = a.seed;
    let tol = match a.tol {
        Some(t) => t,
        None => spec.default_tolerance()?,
    };
    let phi = match a.phi {
        Some(p) => p,
        None => space3d::body_normal_modulus(&body, a.tau)?.angle,
    };
    let report = space3d::verify_space_inscribed(&body, a.tau, phi, a.samples, a.planes, tol)?;
    emit_json(&report, a.out.as_deref())?;
    Ok(status_exit(report.status))
}

fn run_space_explore(a: SpaceExploreArgs) -> Result<u8> {
    let report =
        space3d::exploratory_oscillation_search(a.seed, a.bodies, a.planes, a.tau, a.points)?;
    emit_json(&report, a.out.as_deref())?;
    Ok(EXIT_PASSED)
}

// -------------------------------------------------------------------------
// render

fn run_render(a: RenderArgs) -> Result<u8> {
    let (_, poly) = read_planar(&a.body)?;
    let mut scene = Scene::new();
    scene.add_body(&poly);
    for path in &a.overlay {
        let overlay: io::PolygonFile = io::read_json(path)?;
        let pts: Vec<Point2> =
            overlay.vertices.iter().map(|&[x, y]| Point2::new(x, y)).collect();
        scene.add_overlay(&pts);
    }
    if let Some(path) = &a.report {
        let report: io::ReportFile = io::read_json(path)?;
        for f in &report.failures {
            scene.add_marker(Point2::new(f.point[0], f.point[1]));
        }
    }
    emit_svg(&scene, &a.svg)?;
    Ok(EXIT_PASSED)
}
