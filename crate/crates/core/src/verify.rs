//! Oracle-equivalence property suite.
//!
//! Every property runs catalog entries on seeded random control polygons
//! and compares them with the closed-form oracles, or with each other. The
//! same seed always produces the same polygons.

use std::fmt;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curves::{
    bezier_oracle, bspline_oracle, rational_bezier_oracle, run_catalog, CatalogId, CatalogParams, CurveError,
    KnotLayout,
};
use crate::dsl::{format_definition, parse_with_warnings, LSystemDefinition};
use crate::geometry::{Point, WeightedPoint};
use crate::rewriting::{ModuleString, ParamValue};

/// Seed of every random polygon in the suite.
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Property names, in the order [`run`] executes them.
pub const PROPERTIES: [&str; 11] = [
    "decasteljau_oracle",
    "decasteljau_variants",
    "decasteljau_subdivision_segment",
    "bezier_cubic_pseudo_proper",
    "bezier_fixed_degree",
    "chaikin_lane_riesenfeld",
    "bspline_convergence",
    "rational_weights",
    "chaikin_hull",
    "catalog_parse",
    "catalog_twins",
];

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub name: &'static str,
    pub passed: bool,
    /// Largest observed deviation; 0 for properties checked exactly.
    pub max_error: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<32} max error {:.3e} (tolerance {:.0e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.max_error,
            self.tolerance
        )?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

impl PropertyReport {
    fn measured(name: &'static str, max_error: f64, tolerance: f64, detail: String) -> Self {
        PropertyReport {
            name,
            passed: max_error <= tolerance,
            max_error,
            tolerance,
            detail,
        }
    }

    fn exact(name: &'static str, mismatch: Option<String>, detail: String) -> Self {
        PropertyReport {
            name,
            passed: mismatch.is_none(),
            max_error: 0.0,
            tolerance: 0.0,
            detail: mismatch.unwrap_or(detail),
        }
    }

    fn error(name: &'static str, e: impl fmt::Display) -> Self {
        PropertyReport {
            name,
            passed: false,
            max_error: f64::INFINITY,
            tolerance: 0.0,
            detail: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Runs only properties whose name contains this string.
    pub only: Option<String>,
    /// Reads catalog sources from `<dir>/<id>.lsys` instead of the copies
    /// compiled into the library.
    pub catalog_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

/// Runs the selected properties.
pub fn run(opts: &VerifyOptions) -> Vec<PropertyReport> {
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    PROPERTIES
        .iter()
        .filter(|name| opts.only.as_deref().is_none_or(|f| name.contains(f)))
        .map(|&name| match name {
            "decasteljau_oracle" => decasteljau_oracle(seed, 8, 20, 101),
            "decasteljau_variants" => decasteljau_variants(seed, 8, 20, 101),
            "decasteljau_subdivision_segment" => subdivision_segment(seed, 5, 21),
            "bezier_cubic_pseudo_proper" => cubic_pseudo_proper(seed, 10, 4),
            "bezier_fixed_degree" => fixed_degree_shortcut(seed, 10),
            "chaikin_lane_riesenfeld" => chaikin_lane_riesenfeld(seed, 10, 4),
            "bspline_convergence" => bspline_convergence(5),
            "rational_weights" => rational_weights(),
            "chaikin_hull" => chaikin_hull(seed, 10, 4),
            "catalog_parse" => catalog_parse(opts.catalog_dir.as_deref()),
            "catalog_twins" => catalog_twins(opts.catalog_dir.as_deref()),
            _ => unreachable!("listed in PROPERTIES"),
        })
        .collect()
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// `count` points with coordinates uniform in `[-10, 10]`.
pub fn random_polygon(rng: &mut impl Rng, count: usize) -> Vec<Point> {
    (0..count)
        .map(|_| Point::new2(rng.gen_range(-10.0..=10.0), rng.gen_range(-10.0..=10.0)).expect("finite"))
        .collect()
}

/// A reproducible random polygon for demonstrations.
pub fn seeded_polygon(seed: u64, count: usize) -> Vec<Point> {
    random_polygon(&mut rng(seed, 0), count)
}

/// `count` points with integer coordinates in `[-100, 100]`. Repeated
/// halving of such points stays exact in binary floating point.
pub fn random_integer_polygon(rng: &mut impl Rng, count: usize) -> Vec<Point> {
    (0..count)
        .map(|_| Point::new2(rng.gen_range(-100..=100) as f64, rng.gen_range(-100..=100) as f64).expect("finite"))
        .collect()
}

fn grid(count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |i| i as f64 / (count - 1).max(1) as f64)
}

fn params(points: Vec<Point>) -> CatalogParams {
    CatalogParams {
        points,
        ..CatalogParams::default()
    }
}

/// The single point left by a point-evaluating run.
fn final_point(def: &LSystemDefinition) -> Result<Point, CurveError> {
    let out = def.derive(false)?.result;
    match out.points_of(&["P"]).as_slice() {
        [p] if out.len() == 1 => Ok(*p),
        _ => Err(CurveError::Extraction(out.to_string())),
    }
}

fn evaluate_at(def: &mut LSystemDefinition, t: f64) -> Result<Point, CurveError> {
    def.set_constant("t", t)?;
    final_point(def)
}

/// Largest coordinate difference of two strings with the same symbols and
/// arities, or `None` if their structure differs.
pub fn string_distance(a: &ModuleString, b: &ModuleString) -> Option<f64> {
    if a.len() != b.len() || a.topology != b.topology {
        return None;
    }
    let mut max: f64 = 0.0;
    for (ma, mb) in a.iter().zip(b.iter()) {
        if ma.symbol != mb.symbol || ma.params.len() != mb.params.len() {
            return None;
        }
        for (pa, pb) in ma.params.iter().zip(&mb.params) {
            let d = match (pa, pb) {
                (ParamValue::Scalar(x), ParamValue::Scalar(y)) => (x - y).abs(),
                (ParamValue::Point(p), ParamValue::Point(q)) if p.dim() == q.dim() => p.max_abs_diff(q),
                _ => return None,
            };
            max = max.max(d);
        }
    }
    Some(max)
}

/// Single-point de Casteljau evaluation against the Bernstein form, for
/// degrees `1..=max_degree`.
pub fn decasteljau_oracle(seed: u64, max_degree: usize, polygons: usize, samples: usize) -> PropertyReport {
    const NAME: &str = "decasteljau_oracle";
    let mut r = rng(seed, 1);
    let mut max: f64 = 0.0;
    for degree in 1..=max_degree {
        for _ in 0..polygons {
            let ctrl = random_polygon(&mut r, degree + 1);
            let mut def = match CatalogId::DecasteljauPoint.definition(&params(ctrl.clone())) {
                Ok(d) => d,
                Err(e) => return PropertyReport::error(NAME, e),
            };
            for t in grid(samples) {
                let got = match evaluate_at(&mut def, t) {
                    Ok(p) => p,
                    Err(e) => return PropertyReport::error(NAME, e),
                };
                let want = bezier_oracle(&ctrl, t).expect("valid polygon");
                max = max.max(got.max_abs_diff(&want));
            }
        }
    }
    let detail = format!("degrees 1..={max_degree}, {polygons} polygons each, {samples} samples");
    PropertyReport::measured(NAME, max, 1e-10, detail)
}

/// Right-context, left-context and edge-module de Casteljau evaluation
/// agree.
pub fn decasteljau_variants(seed: u64, max_degree: usize, polygons: usize, samples: usize) -> PropertyReport {
    const NAME: &str = "decasteljau_variants";
    let mut r = rng(seed, 2);
    let mut max: f64 = 0.0;
    let ids = [
        CatalogId::DecasteljauPoint,
        CatalogId::DecasteljauPointLeft,
        CatalogId::DecasteljauEdges,
    ];
    for degree in 1..=max_degree {
        for _ in 0..polygons {
            let p = params(random_polygon(&mut r, degree + 1));
            let defs: Result<Vec<_>, _> = ids.iter().map(|id| id.definition(&p)).collect();
            let mut defs = match defs {
                Ok(d) => d,
                Err(e) => return PropertyReport::error(NAME, e),
            };
            for t in grid(samples) {
                let pts: Result<Vec<_>, _> = defs.iter_mut().map(|d| evaluate_at(d, t)).collect();
                let pts = match pts {
                    Ok(p) => p,
                    Err(e) => return PropertyReport::error(NAME, e),
                };
                max = max.max(pts[0].max_abs_diff(&pts[1])).max(pts[0].max_abs_diff(&pts[2]));
            }
        }
    }
    PropertyReport::measured(NAME, max, 1e-12, format!("{} variants", ids.len()))
}

/// After one subdivision cycle at `t`, the left half-polygon traces the
/// original curve over `[0, t]` and the right half over `[t, 1]`.
pub fn subdivision_segment(seed: u64, polygons: usize, samples: usize) -> PropertyReport {
    const NAME: &str = "decasteljau_subdivision_segment";
    let mut r = rng(seed, 3);
    let mut max: f64 = 0.0;
    for _ in 0..polygons {
        let ctrl = random_polygon(&mut r, 5);
        let t = r.gen_range(0.05..0.95);
        let p = CatalogParams {
            t,
            cycles: 1,
            ..params(ctrl.clone())
        };
        let out = match run_catalog(CatalogId::DecasteljauSubdivision, &p, false) {
            Ok(run) => run.derivation.result.points_of(&["P"]),
            Err(e) => return PropertyReport::error(NAME, e),
        };
        if out.len() != 9 {
            return PropertyReport::error(NAME, format!("expected 9 vertices, got {}", out.len()));
        }
        for u in grid(samples) {
            let left = bezier_oracle(&out[..5], u).expect("5 points");
            let right = bezier_oracle(&out[4..], u).expect("5 points");
            let on_left = bezier_oracle(&ctrl, t * u).expect("5 points");
            let on_right = bezier_oracle(&ctrl, t + (1.0 - t) * u).expect("5 points");
            max = max.max(left.max_abs_diff(&on_left)).max(right.max_abs_diff(&on_right));
        }
    }
    PropertyReport::measured(
        NAME,
        max,
        1e-10,
        format!("{polygons} quartic polygons, {samples} samples"),
    )
}

/// The multi-module and single-module cubic systems derive the same
/// strings, cycle by cycle.
pub fn cubic_pseudo_proper(seed: u64, polygons: usize, cycles: usize) -> PropertyReport {
    const NAME: &str = "bezier_cubic_pseudo_proper";
    let mut r = rng(seed, 4);
    let mut max: f64 = 0.0;
    let mut inputs = vec![CatalogId::BezierCubicPseudo.default_params().points];
    inputs.extend((0..polygons).map(|_| random_polygon(&mut r, 4)));
    for ctrl in inputs {
        for c in 0..=cycles {
            let p = CatalogParams {
                cycles: c,
                ..params(ctrl.clone())
            };
            let pseudo = run_catalog(CatalogId::BezierCubicPseudo, &p, false);
            let proper = run_catalog(CatalogId::BezierCubicProper, &p, false);
            let (a, b) = match (pseudo, proper) {
                (Ok(a), Ok(b)) => (a.derivation.result, b.derivation.result),
                (Err(e), _) | (_, Err(e)) => return PropertyReport::error(NAME, e),
            };
            match string_distance(&a, &b) {
                Some(d) => max = max.max(d),
                None => return PropertyReport::error(NAME, format!("strings differ after {c} cycles: {a} vs {b}")),
            }
        }
    }
    PropertyReport::measured(
        NAME,
        max,
        1e-12,
        format!("{} polygons, 0..={cycles} cycles", polygons + 1),
    )
}

/// One step of the fixed quadratic system equals one generic subdivision
/// cycle at t = 1/2.
pub fn fixed_degree_shortcut(seed: u64, polygons: usize) -> PropertyReport {
    const NAME: &str = "bezier_fixed_degree";
    let mut r = rng(seed, 5);
    let mut max: f64 = 0.0;
    let mut inputs = vec![CatalogId::BezierQuadratic.default_params().points];
    inputs.extend((0..polygons).map(|_| random_polygon(&mut r, 3)));
    for ctrl in inputs {
        let p = CatalogParams {
            cycles: 1,
            t: 0.5,
            ..params(ctrl)
        };
        let fixed = run_catalog(CatalogId::BezierQuadratic, &p, false);
        let generic = run_catalog(CatalogId::DecasteljauSubdivision, &p, false);
        let (a, b) = match (fixed, generic) {
            (Ok(a), Ok(b)) => (
                a.derivation.result.points_of(&["P", "Q"]),
                b.derivation.result.points_of(&["P"]),
            ),
            (Err(e), _) | (_, Err(e)) => return PropertyReport::error(NAME, e),
        };
        if a.len() != b.len() {
            return PropertyReport::error(NAME, format!("{} vs {} vertices", a.len(), b.len()));
        }
        for (x, y) in a.iter().zip(&b) {
            max = max.max(x.max_abs_diff(y));
        }
    }
    PropertyReport::measured(NAME, max, 1e-12, format!("{} quadratic polygons", polygons + 1))
}

/// Rotations of `b` that equal `a` exactly.
fn cyclically_equal(a: &[Point], b: &[Point]) -> bool {
    a.len() == b.len() && (0..b.len()).any(|r| a.iter().enumerate().all(|(i, p)| *p == b[(i + r) % b.len()]))
}

/// Lane-Riesenfeld with n = 1 reproduces Chaikin cutting exactly, in
/// both the edge-module and the point-only form.
pub fn chaikin_lane_riesenfeld(seed: u64, polygons: usize, cycles: usize) -> PropertyReport {
    const NAME: &str = "chaikin_lane_riesenfeld";
    let mut r = rng(seed, 6);
    for k in 0..polygons {
        let size = r.gen_range(3..=8);
        let ctrl = random_integer_polygon(&mut r, size);
        for c in 1..=cycles {
            let p = CatalogParams {
                cycles: c,
                n: 1,
                ..params(ctrl.clone())
            };
            let runs: Result<Vec<_>, _> = [CatalogId::LaneRiesenfeld, CatalogId::ChaikinEdges, CatalogId::Chaikin]
                .into_iter()
                .map(|id| run_catalog(id, &p, false).map(|r| r.derivation.result))
                .collect();
            let runs = match runs {
                Ok(r) => r,
                Err(e) => return PropertyReport::error(NAME, e),
            };
            if runs[0] != runs[1] {
                return PropertyReport::exact(
                    NAME,
                    Some(format!("polygon {k}, cycle {c}: edge forms differ")),
                    String::new(),
                );
            }
            if !cyclically_equal(&runs[0].points_of(&["P"]), &runs[2].points_of(&["P"])) {
                return PropertyReport::exact(
                    NAME,
                    Some(format!("polygon {k}, cycle {c}: point form differs")),
                    String::new(),
                );
            }
        }
    }
    PropertyReport::exact(NAME, None, format!("{polygons} polygons, 1..={cycles} cycles, exact"))
}

/// Distance from `q` to a closed periodic B-spline: dense sampling followed
/// by golden-section refinement around the best sample.
pub fn distance_to_bspline(ctrl: &[Point], degree: usize, q: &Point) -> f64 {
    let m = ctrl.len() as f64;
    let wrap = |u: f64| u.rem_euclid(m);
    let dist = |u: f64| {
        bspline_oracle(ctrl, degree, wrap(u), KnotLayout::Periodic)
            .expect("u wrapped into range")
            .distance(q)
    };
    let per_unit = 64;
    let samples = ctrl.len() * per_unit;
    let h = 1.0 / per_unit as f64;
    let best = (0..samples)
        .map(|i| i as f64 * h)
        .min_by(|a, b| dist(*a).total_cmp(&dist(*b)))
        .expect("non-empty");
    let (mut lo, mut hi) = (best - h, best + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if dist(a) < dist(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    dist((lo + hi) / 2.0).min(dist(best))
}

/// Per-cycle maximum vertex distance from the Lane-Riesenfeld polygon of
/// the square to its limit B-spline, for cycles `0..=cycles`.
pub fn lane_riesenfeld_errors(degree: usize, cycles: usize) -> Result<Vec<f64>, CurveError> {
    let base = CatalogId::LaneRiesenfeld.default_params();
    let ctrl = base.points.clone();
    (0..=cycles)
        .map(|c| {
            let p = CatalogParams {
                n: degree - 1,
                cycles: c,
                ..base.clone()
            };
            let verts = run_catalog(CatalogId::LaneRiesenfeld, &p, false)?
                .derivation
                .result
                .points_of(&["P"]);
            Ok(verts
                .iter()
                .map(|v| distance_to_bspline(&ctrl, degree, v))
                .fold(0.0, f64::max))
        })
        .collect()
}

fn bbox_diagonal(pts: &[Point]) -> f64 {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in pts {
        for (k, c) in [p.x(), p.y()].into_iter().enumerate() {
            lo[k] = lo[k].min(c);
            hi[k] = hi[k].max(c);
        }
    }
    (hi[0] - lo[0]).hypot(hi[1] - lo[1])
}

/// Lane-Riesenfeld polygons of degree 2 and 3 approach the B-spline:
/// strictly closer every cycle, and within 1e-3 of the bounding-box
/// diagonal at the last one.
pub fn bspline_convergence(cycles: usize) -> PropertyReport {
    const NAME: &str = "bspline_convergence";
    let square = CatalogId::LaneRiesenfeld.default_params().points;
    let limit = 1e-3 * bbox_diagonal(&square);
    let mut ratio: f64 = 0.0;
    let mut detail = Vec::new();
    for degree in [2, 3] {
        let errors = match lane_riesenfeld_errors(degree, cycles) {
            Ok(e) => e,
            Err(e) => return PropertyReport::error(NAME, e),
        };
        if errors.windows(2).any(|w| w[1] >= w[0]) {
            return PropertyReport::error(NAME, format!("degree {degree} not monotone: {errors:?}"));
        }
        let last = *errors.last().expect("at least one cycle");
        ratio = ratio.max(last / limit);
        detail.push(format!("degree {degree}: {last:.2e}"));
    }
    // reported as a fraction of the allowed distance
    PropertyReport::measured(NAME, ratio, 1.0, detail.join(", "))
}

/// Control triangle and weights of the rational arc example: the middle
/// weight varies, the endpoints keep weight 1.
pub const ARC_CONTROL: [(f64, f64); 3] = [(-1.0, 0.0), (0.0, 1.0), (1.0, 0.0)];
pub const ARC_WEIGHTS: [f64; 3] = [0.5, 1.0, 2.5];

/// Midpoint of the rational arc with middle weight `w`, through the
/// homogeneous L-system pipeline.
pub fn rational_arc_midpoint(id: CatalogId, w: f64) -> Result<Point, CurveError> {
    let points = ARC_CONTROL
        .iter()
        .map(|&(x, y)| Point::new2(x, y))
        .collect::<Result<Vec<_>, _>>()?;
    let p = CatalogParams {
        weights: Some(vec![1.0, w, 1.0]),
        t: 0.5,
        ..params(points)
    };
    let def = id.definition(&p)?;
    let out = def.interpret(&def.derive(false)?.result)?;
    match out.points_of(&["P"]).as_slice() {
        [p] => Ok(*p),
        _ => Err(CurveError::Extraction(out.to_string())),
    }
}

/// Raising the middle weight pulls the curve toward the middle control
/// point, and unit weights reproduce the polynomial curve.
pub fn rational_weights() -> PropertyReport {
    const NAME: &str = "rational_weights";
    let ctrl: Vec<Point> = ARC_CONTROL
        .iter()
        .map(|&(x, y)| Point::new2(x, y).expect("finite"))
        .collect();
    let mut max: f64 = 0.0;
    let mut distances = Vec::new();
    for w in ARC_WEIGHTS {
        let got = match rational_arc_midpoint(CatalogId::DecasteljauPoint, w) {
            Ok(p) => p,
            Err(e) => return PropertyReport::error(NAME, e),
        };
        let wp: Vec<_> = ctrl
            .iter()
            .zip([1.0, w, 1.0])
            .map(|(p, w)| WeightedPoint::new(*p, w).expect("positive"))
            .collect();
        max = max.max(got.max_abs_diff(&rational_bezier_oracle(&wp, 0.5).expect("valid")));
        distances.push(got.distance(&ctrl[1]));
    }
    if distances.windows(2).any(|d| d[1] >= d[0]) {
        return PropertyReport::error(NAME, format!("distances not decreasing: {distances:?}"));
    }
    let plain = run_catalog(CatalogId::DecasteljauPoint, &params(ctrl.clone()), false)
        .map(|r| r.derivation.result.points_of(&["P"]));
    match (plain, rational_arc_midpoint(CatalogId::DecasteljauPoint, 1.0)) {
        (Ok(plain), Ok(unit)) if plain.len() == 1 => max = max.max(plain[0].max_abs_diff(&unit)),
        (Err(e), _) | (_, Err(e)) => return PropertyReport::error(NAME, e),
        _ => return PropertyReport::error(NAME, "polynomial run did not end in one point"),
    }
    let detail = format!(
        "distance to middle point {}",
        distances
            .iter()
            .map(|d| format!("{d:.4}"))
            .collect::<Vec<_>>()
            .join(" > ")
    );
    PropertyReport::measured(NAME, max, 1e-12, detail)
}

fn cross(o: &Point, a: &Point, b: &Point) -> f64 {
    (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x())
}

/// Convex hull in counter-clockwise order (monotone chain), without
/// collinear points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x().total_cmp(&b.x()).then(a.y().total_cmp(&b.y())));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    hull
}

/// How far `q` lies outside the convex polygon `hull` (counter-clockwise);
/// zero or negative means inside. Uses distances to the edge lines.
pub fn hull_excess(hull: &[Point], q: &Point) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => hull[0].distance(q),
        2 => {
            let (a, b) = (hull[0], hull[1]);
            let len = a.distance(&b);
            let along = ((q.x() - a.x()) * (b.x() - a.x()) + (q.y() - a.y()) * (b.y() - a.y())) / (len * len);
            let off = cross(&a, &b, q).abs() / len;
            off.max((-along).max(along - 1.0) * len)
        }
        n => (0..n)
            .map(|i| {
                let (a, b) = (hull[i], hull[(i + 1) % n]);
                -cross(&a, &b, q) / a.distance(&b)
            })
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Every Chaikin polygon lies in the convex hull of its predecessor.
pub fn chaikin_hull(seed: u64, polygons: usize, cycles: usize) -> PropertyReport {
    const NAME: &str = "chaikin_hull";
    let mut r = rng(seed, 7);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..polygons {
        let size = r.gen_range(3..=8);
        let p = CatalogParams {
            cycles,
            ..params(random_polygon(&mut r, size))
        };
        let trace = match run_catalog(CatalogId::Chaikin, &p, true) {
            Ok(run) => run.derivation.trace.expect("trace requested"),
            Err(e) => return PropertyReport::error(NAME, e),
        };
        for pair in trace.windows(2) {
            let hull = convex_hull(&pair[0].word.points_of(&["P"]));
            for q in pair[1].word.points_of(&["P"]) {
                worst = worst.max(hull_excess(&hull, &q));
            }
        }
    }
    // inside points have negative excess; report only the violation
    PropertyReport::measured(
        NAME,
        worst.max(0.0),
        1e-12,
        format!("{polygons} polygons, {cycles} cycles"),
    )
}

fn catalog_source(dir: Option<&Path>, id: CatalogId) -> Result<String, String> {
    match dir {
        None => Ok(id.source().to_string()),
        Some(d) => {
            let path = d.join(format!("{id}.lsys"));
            std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))
        }
    }
}

/// Every catalog source parses without warnings and formats back to an
/// equal definition.
pub fn catalog_parse(dir: Option<&Path>) -> PropertyReport {
    const NAME: &str = "catalog_parse";
    for id in CatalogId::ALL {
        let def = catalog_source(dir, id).and_then(|text| match parse_with_warnings(&text) {
            Ok((def, w)) if w.is_empty() => Ok(def),
            Ok((_, w)) => Err(format!("{id}: {}", w[0])),
            Err(e) => Err(format!("{id}: {e}")),
        });
        let def = match def {
            Ok(d) => d,
            Err(e) => return PropertyReport::exact(NAME, Some(e), String::new()),
        };
        match parse_with_warnings(&format_definition(&def)) {
            Ok((again, _)) if again == def => {}
            _ => {
                return PropertyReport::exact(
                    NAME,
                    Some(format!("{id}: formatting does not round-trip")),
                    String::new(),
                )
            }
        }
    }
    PropertyReport::exact(NAME, None, format!("{} sources", CatalogId::ALL.len()))
}

/// Each source file derives exactly what its built-in twin derives, step
/// by step.
pub fn catalog_twins(dir: Option<&Path>) -> PropertyReport {
    const NAME: &str = "catalog_twins";
    for id in CatalogId::ALL {
        let parsed = match catalog_source(dir, id).and_then(|t| parse_with_warnings(&t).map_err(|e| e.to_string())) {
            Ok((d, _)) => d,
            Err(e) => return PropertyReport::exact(NAME, Some(format!("{id}: {e}")), String::new()),
        };
        let result = id
            .definition(&id.default_params())
            .map_err(|e| e.to_string())
            .and_then(|built| {
                let a = parsed.derive(true).map_err(|e| e.to_string())?;
                let b = built.derive(true).map_err(|e| e.to_string())?;
                let ia = parsed.interpret(&a.result).map_err(|e| e.to_string())?;
                let ib = built.interpret(&b.result).map_err(|e| e.to_string())?;
                Ok(a == b && ia == ib)
            });
        match result {
            Ok(true) => {}
            Ok(false) => return PropertyReport::exact(NAME, Some(format!("{id}: derivations differ")), String::new()),
            Err(e) => return PropertyReport::exact(NAME, Some(format!("{id}: {e}")), String::new()),
        }
    }
    PropertyReport::exact(NAME, None, format!("{} entries", CatalogId::ALL.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(x: f64, y: f64) -> Point {
        Point::new2(x, y).unwrap()
    }

    #[test]
    fn hull_of_square_with_inner_point() {
        let pts = [
            p2(0.0, 0.0),
            p2(4.0, 0.0),
            p2(2.0, 1.0),
            p2(4.0, 4.0),
            p2(0.0, 4.0),
            p2(2.0, 0.0),
        ];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(hull_excess(&hull, &p2(2.0, 2.0)) < 0.0);
        assert_eq!(hull_excess(&hull, &p2(2.0, 0.0)), 0.0);
        assert!((hull_excess(&hull, &p2(5.0, 2.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_hulls() {
        let seg = convex_hull(&[p2(0.0, 0.0), p2(2.0, 0.0), p2(1.0, 0.0)]);
        assert_eq!(seg.len(), 2);
        assert!(hull_excess(&seg, &p2(1.0, 0.0)) <= 0.0);
        assert!((hull_excess(&seg, &p2(3.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!((hull_excess(&seg, &p2(1.0, 0.5)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bspline_distance_is_zero_on_the_curve() {
        let sq = CatalogId::LaneRiesenfeld.default_params().points;
        let on = bspline_oracle(&sq, 3, 1.37, KnotLayout::Periodic).unwrap();
        assert!(distance_to_bspline(&sq, 3, &on) < 1e-12);
        // degree 2 passes through edge midpoints, so (2, 0) is on it and
        // (2, -1) is one unit away
        assert!((distance_to_bspline(&sq, 2, &p2(2.0, -1.0)) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn string_distance_requires_same_structure() {
        let a = crate::dsl::parse_word("P((0,0)) E").unwrap();
        let b = crate::dsl::parse_word("P((0,1e-3)) E").unwrap();
        let c = crate::dsl::parse_word("P((0,0)) I").unwrap();
        assert_eq!(string_distance(&a, &b), Some(1e-3));
        assert_eq!(string_distance(&a, &c), None);
    }

    #[test]
    fn filter_selects_by_substring() {
        let opts = VerifyOptions {
            only: Some("pseudo".into()),
            ..Default::default()
        };
        let reports = run(&opts);
        assert_eq!(reports.len(), 1);
        assert!(reports[0].passed, "{}", reports[0]);
    }
}
