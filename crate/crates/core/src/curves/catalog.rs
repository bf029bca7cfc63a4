use std::fmt;
use std::str::FromStr;

use super::{extract_polyline, CurveError, Polyline};
use crate::dsl::{CmpOp, Expr, Function, LSystemDefinition, ScheduleSpec, Scope};
use crate::geometry::{lift_with_weight, Point, WeightedPoint};
use crate::rewriting::{
    Derivation, Module, ModuleString, ParamValue, PatternModule, Production, Table, TemplateModule, Topology,
};

/// The built-in curve algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogId {
    Chaikin,
    ChaikinEdges,
    LaneRiesenfeld,
    DecasteljauPoint,
    DecasteljauPointLeft,
    DecasteljauEdges,
    DecasteljauSubdivision,
    BezierQuadratic,
    BezierCubicPseudo,
    BezierCubicProper,
}

impl CatalogId {
    pub const ALL: [CatalogId; 10] = [
        CatalogId::Chaikin,
        CatalogId::ChaikinEdges,
        CatalogId::LaneRiesenfeld,
        CatalogId::DecasteljauPoint,
        CatalogId::DecasteljauPointLeft,
        CatalogId::DecasteljauEdges,
        CatalogId::DecasteljauSubdivision,
        CatalogId::BezierQuadratic,
        CatalogId::BezierCubicPseudo,
        CatalogId::BezierCubicProper,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CatalogId::Chaikin => "chaikin",
            CatalogId::ChaikinEdges => "chaikin_edges",
            CatalogId::LaneRiesenfeld => "lane_riesenfeld",
            CatalogId::DecasteljauPoint => "decasteljau_point",
            CatalogId::DecasteljauPointLeft => "decasteljau_point_left",
            CatalogId::DecasteljauEdges => "decasteljau_edges",
            CatalogId::DecasteljauSubdivision => "decasteljau_subdivision",
            CatalogId::BezierQuadratic => "bezier_quadratic",
            CatalogId::BezierCubicPseudo => "bezier_cubic_pseudo",
            CatalogId::BezierCubicProper => "bezier_cubic_proper",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CatalogId::Chaikin => "Chaikin corner cutting on a closed polygon",
            CatalogId::ChaikinEdges => "Chaikin corner cutting with explicit edge modules",
            CatalogId::LaneRiesenfeld => "Lane-Riesenfeld refinement, uniform B-spline of degree n + 1",
            CatalogId::DecasteljauPoint => "de Casteljau evaluation of one Bezier point, right context",
            CatalogId::DecasteljauPointLeft => "de Casteljau evaluation of one Bezier point, left context",
            CatalogId::DecasteljauEdges => "de Casteljau evaluation on a polygon with edge modules",
            CatalogId::DecasteljauSubdivision => "Bezier curve by repeated de Casteljau subdivision",
            CatalogId::BezierQuadratic => "quadratic Bezier subdivision at t = 1/2",
            CatalogId::BezierCubicPseudo => "cubic Bezier subdivision at t = 1/2, multi-module predecessor",
            CatalogId::BezierCubicProper => "cubic Bezier subdivision at t = 1/2, single-module predecessors",
        }
    }

    /// Parameters the entry reads, besides the control points.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            CatalogId::Chaikin | CatalogId::ChaikinEdges => &["cycles"],
            CatalogId::LaneRiesenfeld => &["n", "cycles"],
            CatalogId::DecasteljauPoint | CatalogId::DecasteljauPointLeft | CatalogId::DecasteljauEdges => &["t"],
            CatalogId::DecasteljauSubdivision => &["t", "cycles"],
            CatalogId::BezierQuadratic | CatalogId::BezierCubicPseudo | CatalogId::BezierCubicProper => &["cycles"],
        }
    }

    /// Accepted control polygon sizes, as `(min, max)`.
    pub fn polygon_size(self) -> (usize, Option<usize>) {
        match self {
            CatalogId::Chaikin | CatalogId::ChaikinEdges | CatalogId::LaneRiesenfeld => (3, None),
            CatalogId::DecasteljauPoint
            | CatalogId::DecasteljauPointLeft
            | CatalogId::DecasteljauEdges
            | CatalogId::DecasteljauSubdivision => (2, None),
            CatalogId::BezierQuadratic => (3, Some(3)),
            CatalogId::BezierCubicPseudo | CatalogId::BezierCubicProper => (4, Some(4)),
        }
    }

    pub fn is_closed(self) -> bool {
        matches!(
            self,
            CatalogId::Chaikin | CatalogId::ChaikinEdges | CatalogId::LaneRiesenfeld
        )
    }

    /// Entries whose derivation ends in a single curve point.
    pub fn is_point_entry(self) -> bool {
        matches!(
            self,
            CatalogId::DecasteljauPoint | CatalogId::DecasteljauPointLeft | CatalogId::DecasteljauEdges
        )
    }

    /// The entry written in the definition language.
    pub fn source(self) -> &'static str {
        match self {
            CatalogId::Chaikin => include_str!("../../definitions/chaikin.lsys"),
            CatalogId::ChaikinEdges => include_str!("../../definitions/chaikin_edges.lsys"),
            CatalogId::LaneRiesenfeld => include_str!("../../definitions/lane_riesenfeld.lsys"),
            CatalogId::DecasteljauPoint => include_str!("../../definitions/decasteljau_point.lsys"),
            CatalogId::DecasteljauPointLeft => include_str!("../../definitions/decasteljau_point_left.lsys"),
            CatalogId::DecasteljauEdges => include_str!("../../definitions/decasteljau_edges.lsys"),
            CatalogId::DecasteljauSubdivision => include_str!("../../definitions/decasteljau_subdivision.lsys"),
            CatalogId::BezierQuadratic => include_str!("../../definitions/bezier_quadratic.lsys"),
            CatalogId::BezierCubicPseudo => include_str!("../../definitions/bezier_cubic_pseudo.lsys"),
            CatalogId::BezierCubicProper => include_str!("../../definitions/bezier_cubic_proper.lsys"),
        }
    }

    pub fn default_params(self) -> CatalogParams {
        let pts: &[(f64, f64)] = match self {
            CatalogId::Chaikin | CatalogId::ChaikinEdges | CatalogId::LaneRiesenfeld => {
                &[(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)]
            }
            CatalogId::DecasteljauPoint
            | CatalogId::DecasteljauPointLeft
            | CatalogId::DecasteljauEdges
            | CatalogId::DecasteljauSubdivision => &[(0.0, 0.0), (1.0, 3.0), (3.0, 4.0), (5.0, 3.0), (6.0, 0.0)],
            CatalogId::BezierQuadratic => &[(0.0, 0.0), (2.0, 4.0), (4.0, 0.0)],
            CatalogId::BezierCubicPseudo | CatalogId::BezierCubicProper => {
                &[(0.0, 0.0), (1.0, 3.0), (4.0, 3.0), (5.0, 0.0)]
            }
        };
        CatalogParams {
            points: pts.iter().map(|&(x, y)| Point::new2(x, y).expect("finite")).collect(),
            ..CatalogParams::default()
        }
    }

    /// Builds the entry's L-system for the given parameters. With weights
    /// the control points are lifted to homogeneous coordinates and a
    /// projection pass runs before the drawing rules.
    pub fn definition(self, params: &CatalogParams) -> Result<LSystemDefinition, CurveError> {
        let (min, max) = self.polygon_size();
        let m = params.points.len();
        if m < min || max.is_some_and(|max| m > max) {
            let expected = match max {
                Some(max) if max == min => format!("exactly {min}"),
                _ => format!("at least {min}"),
            };
            return Err(CurveError::PolygonSize {
                entry: self.as_str(),
                expected,
                found: m,
            });
        }
        let points = lifted_points(params)?;
        let mut def = match self {
            CatalogId::Chaikin => chaikin(&points),
            CatalogId::ChaikinEdges => chaikin_edges(&points),
            CatalogId::LaneRiesenfeld => lane_riesenfeld(&points),
            CatalogId::DecasteljauPoint => decasteljau_point(&points, false),
            CatalogId::DecasteljauPointLeft => decasteljau_point(&points, true),
            CatalogId::DecasteljauEdges => decasteljau_edges(&points),
            CatalogId::DecasteljauSubdivision => decasteljau_subdivision(&points),
            CatalogId::BezierQuadratic => bezier_quadratic(&points),
            CatalogId::BezierCubicPseudo => bezier_cubic(&points, false),
            CatalogId::BezierCubicProper => bezier_cubic(&points, true),
        };
        def.name = self.as_str().to_string();
        for (name, value) in [
            ("t", params.t),
            ("n", params.n as f64),
            ("cycles", params.cycles as f64),
        ] {
            if let Some(c) = def.scope.constants.get_mut(name) {
                *c = value;
            }
        }
        if params.weights.is_some() {
            let arity = if self == CatalogId::DecasteljauSubdivision {
                2
            } else {
                1
            };
            def.tables.push(projection_table(&["P", "Q"], arity));
            def.interpretation.insert(0, "hP".into());
        }
        Ok(def)
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogId {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CatalogId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| CurveError::UnknownEntry(s.to_string()))
    }
}

/// Inputs of a catalog run. Entries ignore parameters they do not use.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogParams {
    pub points: Vec<Point>,
    /// One positive weight per control point turns the entry rational.
    pub weights: Option<Vec<f64>>,
    pub t: f64,
    pub n: usize,
    pub cycles: usize,
}

impl Default for CatalogParams {
    fn default() -> Self {
        CatalogParams {
            points: Vec::new(),
            weights: None,
            t: 0.5,
            n: 1,
            cycles: 4,
        }
    }
}

fn lifted_points(params: &CatalogParams) -> Result<Vec<Point>, CurveError> {
    let Some(weights) = &params.weights else {
        return Ok(params.points.clone());
    };
    if weights.len() != params.points.len() {
        return Err(CurveError::WeightCount(weights.len(), params.points.len()));
    }
    params
        .points
        .iter()
        .zip(weights)
        .map(|(p, w)| Ok(lift_with_weight(&WeightedPoint::new(*p, *w)?)))
        .collect()
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct CatalogRun {
    pub definition: LSystemDefinition,
    pub derivation: Derivation,
    pub interpreted: ModuleString,
    pub polyline: Polyline,
    pub warnings: Vec<String>,
}

/// Derives, interprets and extracts the polyline of a catalog entry.
pub fn run_catalog(id: CatalogId, params: &CatalogParams, keep_trace: bool) -> Result<CatalogRun, CurveError> {
    let mut warnings = Vec::new();
    if !(0.0..=1.0).contains(&params.t) && id.parameters().contains(&"t") {
        let w = format!("t = {} lies outside [0, 1]; the curve is extrapolated", params.t);
        log::warn!("{w}");
        warnings.push(w);
    }
    let mut run = run_definition(id.definition(params)?, keep_trace)?;
    run.warnings = warnings;
    Ok(run)
}

/// Runs any definition through the same derive, interpret and extract
/// pipeline as the catalog.
pub fn run_definition(definition: LSystemDefinition, keep_trace: bool) -> Result<CatalogRun, CurveError> {
    let derivation = definition.derive(keep_trace)?;
    let interpreted = definition.interpret(&derivation.result)?;
    let polyline = extract_polyline(&interpreted)?;
    Ok(CatalogRun {
        definition,
        derivation,
        interpreted,
        polyline,
        warnings: Vec::new(),
    })
}

/// Evenly spaced parameters covering `[0, 1]` with spacing close to `step`,
/// both ends included.
pub fn sweep_parameters(step: f64) -> Result<Vec<f64>, CurveError> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(CurveError::Domain(format!("grid step must lie in (0, 1], got {step}")));
    }
    let count = (1.0 / step).round() as usize + 1;
    Ok((0..count).map(|i| i as f64 / (count - 1) as f64).collect())
}

/// Curve points of a point-evaluating entry, one full run per parameter.
pub fn sweep_locus(id: CatalogId, params: &CatalogParams, step: f64) -> Result<Vec<Point>, CurveError> {
    if !id.is_point_entry() {
        return Err(CurveError::NotAPointEntry(id.as_str()));
    }
    let mut params = params.clone();
    sweep_parameters(step)?
        .into_iter()
        .map(|t| {
            params.t = t;
            let def = id.definition(&params)?;
            let derived = def.derive(false)?.result;
            let out = def.interpret(&derived)?;
            match out.modules.as_slice() {
                [Module { params, .. }] => match params.first() {
                    Some(ParamValue::Point(p)) => Ok(*p),
                    _ => Err(CurveError::Extraction(out.to_string())),
                },
                _ => Err(CurveError::Extraction(out.to_string())),
            }
        })
        .collect()
}

fn pat(symbol: &str, vars: &[&str]) -> PatternModule {
    PatternModule::new(symbol, vars)
}

fn pats(spec: &[(&str, &[&str])]) -> Vec<PatternModule> {
    spec.iter().map(|(s, v)| pat(s, v)).collect()
}

fn bare(symbol: &str) -> TemplateModule {
    TemplateModule::new(symbol, Vec::new())
}

fn tpl(symbol: &str, args: Vec<Expr>) -> TemplateModule {
    TemplateModule::new(symbol, args)
}

fn var(name: &str) -> Expr {
    Expr::name(name)
}

/// `a/b * v + c/d * w + ...`
fn weighted(terms: &[(f64, f64, &str)]) -> Expr {
    terms
        .iter()
        .map(|&(num, den, v)| Expr::num(num) / den * var(v))
        .reduce(|acc, term| acc + term)
        .expect("at least one term")
}

/// `(1 - t) * a + t * b`
fn lerp(a: &str, b: &str) -> Expr {
    (Expr::num(1.0) - var("t")) * var(a) + var("t") * var(b)
}

fn segment(l: &str, r: &str) -> TemplateModule {
    tpl("L", vec![var(l), var(r)])
}

fn table(name: &str, productions: Vec<Production>) -> Table {
    Table::new(name, productions).expect("catalog tables are well formed")
}

fn point_word(points: &[Point], with_edges: bool, closed: bool) -> Vec<Module> {
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        out.push(Module::point("P", *p));
        if with_edges && (closed || i + 1 < points.len()) {
            out.push(Module::bare("E"));
        }
    }
    out
}

/// Draws `L(v, vr)` between consecutive bare points.
fn point_drawing() -> Table {
    table(
        "h",
        vec![Production::new(
            "h",
            pats(&[("P", &["v"])]),
            vec![tpl("P", vec![var("v")]), segment("v", "vr")],
        )
        .with_right(pats(&[("P", &["vr"])]))],
    )
}

/// Draws `L(vl, vr)` for every `E` between two points.
fn edge_drawing() -> Table {
    table(
        "hE",
        vec![Production::new("hE", pats(&[("E", &[])]), vec![segment("vl", "vr")])
            .with_left(pats(&[("P", &["vl"])]))
            .with_right(pats(&[("P", &["vr"])]))],
    )
}

/// Edge drawing for words with endpoint `P` and interior `Q` vertices.
fn mixed_edge_drawing() -> Table {
    let prods = [
        ("hPP", "P", "P"),
        ("hPQ", "P", "Q"),
        ("hQP", "Q", "P"),
        ("hQQ", "Q", "Q"),
    ]
    .into_iter()
    .map(|(label, l, r)| {
        Production::new(label, pats(&[("E", &[])]), vec![segment("vl", "vr")])
            .with_left(pats(&[(l, &["vl"])]))
            .with_right(pats(&[(r, &["vr"])]))
    })
    .collect();
    table("h", prods)
}

/// `X(v, ...) -> X(project(v), ...)` for every listed symbol.
fn projection_table(symbols: &[&str], arity: usize) -> Table {
    let extra: Vec<String> = (1..arity).map(|i| format!("a{i}")).collect();
    let prods = symbols
        .iter()
        .map(|s| {
            let mut vars = vec!["v"];
            vars.extend(extra.iter().map(String::as_str));
            let mut args = vec![Expr::call("project", vec![var("v")])];
            args.extend(extra.iter().map(|e| var(e)));
            Production::new(&format!("h{s}"), vec![pat(s, &vars)], vec![tpl(s, args)])
        })
        .collect();
    table("hP", prods)
}

fn scope(constants: &[(&str, f64)]) -> Scope {
    constants
        .iter()
        .fold(Scope::default(), |s, (n, v)| s.with_constant(n, *v))
}

fn schedule(cycles: Expr, steps: &[(&str, Expr)]) -> ScheduleSpec {
    ScheduleSpec {
        steps: steps.iter().map(|(t, e)| (t.to_string(), e.clone())).collect(),
        cycles,
    }
}

fn assemble(
    topology: Topology,
    scope: Scope,
    axiom: Vec<Module>,
    tables: Vec<Table>,
    interpretation: &str,
    schedule: ScheduleSpec,
) -> LSystemDefinition {
    LSystemDefinition {
        name: String::new(),
        topology,
        scope,
        axiom: ModuleString::new(axiom, topology),
        tables,
        interpretation: vec![interpretation.to_string()],
        schedule,
    }
}

fn cycles_schedule(steps: &[(&str, Expr)]) -> ScheduleSpec {
    schedule(var("cycles"), steps)
}

fn chaikin(points: &[Point]) -> LSystemDefinition {
    let p = Production::new(
        "p",
        pats(&[("P", &["v"])]),
        vec![
            tpl("P", vec![weighted(&[(1.0, 4.0, "vl"), (3.0, 4.0, "v")])]),
            tpl("P", vec![weighted(&[(3.0, 4.0, "v"), (1.0, 4.0, "vr")])]),
        ],
    )
    .with_left(pats(&[("P", &["vl"])]))
    .with_right(pats(&[("P", &["vr"])]));
    assemble(
        Topology::Circular,
        scope(&[("cycles", 4.0)]),
        point_word(points, false, true),
        vec![table("p", vec![p]), point_drawing()],
        "h",
        cycles_schedule(&[("p", Expr::num(1.0))]),
    )
}

fn chaikin_edges(points: &[Point]) -> LSystemDefinition {
    let p1 = Production::new(
        "p1",
        pats(&[("E", &[])]),
        vec![
            tpl("P", vec![weighted(&[(3.0, 4.0, "vl"), (1.0, 4.0, "vr")])]),
            bare("E"),
            tpl("P", vec![weighted(&[(1.0, 4.0, "vl"), (3.0, 4.0, "vr")])]),
        ],
    )
    .with_left(pats(&[("P", &["vl"])]))
    .with_right(pats(&[("P", &["vr"])]));
    let p2 = Production::new("p2", pats(&[("P", &["v"])]), vec![bare("E")]);
    assemble(
        Topology::Circular,
        scope(&[("cycles", 4.0)]),
        point_word(points, true, true),
        vec![table("p", vec![p1, p2]), edge_drawing()],
        "hE",
        cycles_schedule(&[("p", Expr::num(1.0))]),
    )
}

fn lane_riesenfeld(points: &[Point]) -> LSystemDefinition {
    let mid = || weighted(&[(1.0, 2.0, "vl"), (1.0, 2.0, "vr")]);
    let p = Production::new(
        "p",
        pats(&[("E", &[])]),
        vec![bare("E"), tpl("P", vec![mid()]), bare("E")],
    )
    .with_left(pats(&[("P", &["vl"])]))
    .with_right(pats(&[("P", &["vr"])]));
    let q1 = Production::new("q1", pats(&[("E", &[])]), vec![tpl("P", vec![mid()])])
        .with_left(pats(&[("P", &["vl"])]))
        .with_right(pats(&[("P", &["vr"])]));
    let q2 = Production::new("q2", pats(&[("P", &["v"])]), vec![bare("E")]);
    assemble(
        Topology::Circular,
        scope(&[("n", 1.0), ("cycles", 4.0)]),
        point_word(points, true, true),
        vec![table("p", vec![p]), table("q", vec![q1, q2]), edge_drawing()],
        "hE",
        cycles_schedule(&[("p", Expr::num(1.0)), ("q", var("n"))]),
    )
}

fn degree_scope(points: &[Point], extra: &[(&str, f64)]) -> Scope {
    let mut s = scope(&[("degree", (points.len() - 1) as f64), ("t", 0.5)]);
    for (n, v) in extra {
        s = s.with_constant(n, *v);
    }
    s
}

fn decasteljau_point(points: &[Point], left: bool) -> LSystemDefinition {
    let p1 = if left {
        Production::new("p1", pats(&[("P", &["v"])]), vec![tpl("P", vec![lerp("vl", "v")])])
            .with_left(pats(&[("P", &["vl"])]))
    } else {
        Production::new("p1", pats(&[("P", &["v"])]), vec![tpl("P", vec![lerp("v", "vr")])])
            .with_right(pats(&[("P", &["vr"])]))
    };
    let p2 = Production::new("p2", pats(&[("P", &["v"])]), Vec::new());
    assemble(
        Topology::Linear,
        degree_scope(points, &[]),
        point_word(points, false, false),
        vec![table("p", vec![p1, p2]), point_drawing()],
        "h",
        schedule(Expr::num(1.0), &[("p", var("degree"))]),
    )
}

fn decasteljau_edges(points: &[Point]) -> LSystemDefinition {
    let p1 = Production::new("p1", pats(&[("E", &[])]), vec![tpl("P", vec![lerp("vl", "vr")])])
        .with_left(pats(&[("P", &["vl"])]))
        .with_right(pats(&[("P", &["vr"])]));
    let p2 = Production::new("p2", pats(&[("P", &["v"])]), vec![bare("E")])
        .with_left(pats(&[("E", &[])]))
        .with_right(pats(&[("E", &[])]));
    let p3 = Production::new("p3", pats(&[("P", &["v"])]), Vec::new());
    assemble(
        Topology::Linear,
        degree_scope(points, &[]),
        point_word(points, true, false),
        vec![table("p", vec![p1, p2, p3]), edge_drawing()],
        "hE",
        schedule(Expr::num(1.0), &[("p", var("degree"))]),
    )
}

fn decasteljau_subdivision(points: &[Point]) -> LSystemDefinition {
    let last = points.len() - 1;
    let mut axiom = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let s = if i == 0 || i == last { 2.0 } else { 0.0 };
        axiom.push(Module::new("P", vec![ParamValue::Point(*p), ParamValue::Scalar(s)]));
        if i < last {
            axiom.push(Module::bare("E"));
        }
    }
    let s_is = |op| Expr::compare(op, var("s"), Expr::num(0.0));
    let vs = || vec![var("v"), var("s")];
    let p_vs: &[(&str, &[&str])] = &[("P", &["v", "s"])];
    let e: &[(&str, &[&str])] = &[("E", &[])];
    let p = vec![
        Production::new(
            "p1",
            pats(e),
            vec![tpl(
                "P",
                vec![lerp("vl", "vr"), Expr::call("f", vec![var("sl"), var("sr")])],
            )],
        )
        .with_left(pats(&[("P", &["vl", "sl"])]))
        .with_right(pats(&[("P", &["vr", "sr"])])),
        Production::new("p2", pats(p_vs), vec![bare("E")])
            .with_left(pats(e))
            .with_right(pats(e))
            .with_condition(s_is(CmpOp::Eq)),
        Production::new("p3", pats(p_vs), vec![bare("I"), tpl("P", vs()), bare("I")])
            .with_left(pats(e))
            .with_right(pats(e))
            .with_condition(s_is(CmpOp::Ne)),
        Production::new("p4", pats(p_vs), vec![tpl("P", vs()), bare("I")])
            .with_right(pats(e))
            .with_condition(s_is(CmpOp::Ne)),
        Production::new("p5", pats(p_vs), vec![bare("I"), tpl("P", vs())])
            .with_left(pats(e))
            .with_condition(s_is(CmpOp::Ne)),
    ];
    let q = vec![
        Production::new("q1", pats(p_vs), vec![tpl("P", vec![var("v"), Expr::num(0.0)])])
            .with_condition(Expr::compare(CmpOp::Eq, var("s"), Expr::num(1.0))),
        Production::new("q2", pats(&[("I", &[])]), vec![bare("E")]),
    ];
    let h = ["E", "I"]
        .into_iter()
        .map(|edge| {
            Production::new(&format!("h{edge}"), pats(&[(edge, &[])]), vec![segment("vl", "vr")])
                .with_left(pats(&[("P", &["vl", "sl"])]))
                .with_right(pats(&[("P", &["vr", "sr"])]))
        })
        .collect();
    let mut scope = degree_scope(points, &[("cycles", 4.0)]);
    let min1 = |a: &str| Expr::call("min", vec![var(a), Expr::num(1.0)]);
    scope.functions.insert(
        "f".into(),
        Function {
            params: vec!["sl".into(), "sr".into()],
            body: min1("sl") + min1("sr"),
        },
    );
    assemble(
        Topology::Linear,
        scope,
        axiom,
        vec![table("p", p), table("q", q), table("h", h)],
        "h",
        cycles_schedule(&[("p", var("degree")), ("q", Expr::num(1.0))]),
    )
}

fn bezier_quadratic(points: &[Point]) -> LSystemDefinition {
    let p = Production::new(
        "p",
        pats(&[("Q", &["v"])]),
        vec![
            tpl("Q", vec![weighted(&[(1.0, 2.0, "vl"), (1.0, 2.0, "v")])]),
            bare("E"),
            tpl(
                "P",
                vec![weighted(&[(1.0, 4.0, "vl"), (1.0, 2.0, "v"), (1.0, 4.0, "vr")])],
            ),
            bare("E"),
            tpl("Q", vec![weighted(&[(1.0, 2.0, "v"), (1.0, 2.0, "vr")])]),
        ],
    )
    .with_left(pats(&[("P", &["vl"]), ("E", &[])]))
    .with_right(pats(&[("E", &[]), ("P", &["vr"])]));
    assemble(
        Topology::Linear,
        scope(&[("cycles", 4.0)]),
        control_word(points),
        vec![table("p", vec![p]), mixed_edge_drawing()],
        "h",
        cycles_schedule(&[("p", Expr::num(1.0))]),
    )
}

/// `P E Q E ... E Q E P`: fixed endpoints, interior control points.
fn control_word(points: &[Point]) -> Vec<Module> {
    let last = points.len() - 1;
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let sym = if i == 0 || i == last { "P" } else { "Q" };
        out.push(Module::point(sym, *p));
        if i < last {
            out.push(Module::bare("E"));
        }
    }
    out
}

fn bezier_cubic(points: &[Point], proper: bool) -> LSystemDefinition {
    let q_left = || tpl("Q", vec![weighted(&[(1.0, 2.0, "vll"), (1.0, 2.0, "vl")])]);
    let q_mid_left = || {
        tpl(
            "Q",
            vec![weighted(&[(1.0, 4.0, "vll"), (1.0, 2.0, "vl"), (1.0, 4.0, "vr")])],
        )
    };
    let middle = || {
        tpl(
            "P",
            vec![weighted(&[
                (1.0, 8.0, "vll"),
                (3.0, 8.0, "vl"),
                (3.0, 8.0, "vr"),
                (1.0, 8.0, "vrr"),
            ])],
        )
    };
    let q_mid_right = || {
        tpl(
            "Q",
            vec![weighted(&[(1.0, 4.0, "vl"), (1.0, 2.0, "vr"), (1.0, 4.0, "vrr")])],
        )
    };
    let q_right = || tpl("Q", vec![weighted(&[(1.0, 2.0, "vr"), (1.0, 2.0, "vrr")])]);
    let e: (&str, &[&str]) = ("E", &[]);
    let prods = if proper {
        vec![
            Production::new("p1", pats(&[("Q", &["vl"])]), vec![q_left(), bare("E"), q_mid_left()])
                .with_left(pats(&[("P", &["vll"]), e]))
                .with_right(pats(&[e, ("Q", &["vr"]), e, ("P", &["vrr"])])),
            Production::new("p2", pats(&[e]), vec![bare("E"), middle(), bare("E")])
                .with_left(pats(&[("P", &["vll"]), e, ("Q", &["vl"])]))
                .with_right(pats(&[("Q", &["vr"]), e, ("P", &["vrr"])])),
            Production::new("p3", pats(&[("Q", &["vr"])]), vec![q_mid_right(), bare("E"), q_right()])
                .with_left(pats(&[("P", &["vll"]), e, ("Q", &["vl"]), e]))
                .with_right(pats(&[e, ("P", &["vrr"])])),
        ]
    } else {
        vec![Production::new(
            "p",
            pats(&[("Q", &["vl"]), e, ("Q", &["vr"])]),
            vec![
                q_left(),
                bare("E"),
                q_mid_left(),
                bare("E"),
                middle(),
                bare("E"),
                q_mid_right(),
                bare("E"),
                q_right(),
            ],
        )
        .with_left(pats(&[("P", &["vll"]), e]))
        .with_right(pats(&[e, ("P", &["vrr"])]))]
    };
    assemble(
        Topology::Linear,
        scope(&[("cycles", 4.0)]),
        control_word(points),
        vec![table("p", prods), mixed_edge_drawing()],
        "h",
        cycles_schedule(&[("p", Expr::num(1.0))]),
    )
}
