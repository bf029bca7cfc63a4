use lsys::curves::{
    bezier_oracle, extract_polyline, rational_bezier_oracle, run_catalog, CatalogId, CatalogParams, CurveError,
};
use lsys::dsl::parse;
use lsys::{ModuleString, Point, WeightedPoint};

fn p2(x: f64, y: f64) -> Point {
    Point::new2(x, y).unwrap()
}

#[test]
fn decasteljau_point_ends_in_one_module() {
    let id = CatalogId::DecasteljauPoint;
    let mut params = id.default_params();
    for t in [0.0, 0.25, 0.5, 1.0] {
        params.t = t;
        let out = run_catalog(id, &params, false).unwrap().derivation.result;
        assert_eq!(out.len(), 1);
        let got = out.points_of(&["P"])[0];
        let want = bezier_oracle(&params.points, t).unwrap();
        assert!(got.max_abs_diff(&want) < 1e-12);
    }
    params.t = 0.0;
    let out = run_catalog(id, &params, false).unwrap().derivation.result;
    assert_eq!(out.points_of(&["P"])[0], params.points[0]);
}

#[test]
fn lane_riesenfeld_cycle_matches_chaikin_edges_step() {
    let mut params = CatalogId::LaneRiesenfeld.default_params();
    params.cycles = 1;
    let lr = run_catalog(CatalogId::LaneRiesenfeld, &params, false).unwrap();
    let ce = run_catalog(CatalogId::ChaikinEdges, &params, false).unwrap();
    let want = [
        (1.0, 0.0),
        (3.0, 0.0),
        (4.0, 1.0),
        (4.0, 3.0),
        (3.0, 4.0),
        (1.0, 4.0),
        (0.0, 3.0),
        (0.0, 1.0),
    ];
    for run in [&lr, &ce] {
        let pts: Vec<(f64, f64)> = run
            .derivation
            .result
            .points_of(&["P"])
            .iter()
            .map(|p| (p.x(), p.y()))
            .collect();
        assert_eq!(pts, want);
    }
}

#[test]
fn chaikin_point_step_starts_with_the_first_vertex_cuts() {
    let mut params = CatalogId::Chaikin.default_params();
    params.cycles = 1;
    let run = run_catalog(CatalogId::Chaikin, &params, false).unwrap();
    let pts: Vec<(f64, f64)> = run
        .derivation
        .result
        .points_of(&["P"])
        .iter()
        .map(|p| (p.x(), p.y()))
        .collect();
    // each vertex emits its left cut then its right cut, so the edge form's
    // sequence appears rotated by one
    let mut want = vec![(0.0, 1.0), (1.0, 0.0), (3.0, 0.0), (4.0, 1.0)];
    want.extend([(4.0, 3.0), (3.0, 4.0), (1.0, 4.0), (0.0, 3.0)]);
    assert_eq!(pts, want);
}

#[test]
fn subdivision_cycle_midpoint_is_the_curve_point() {
    let mut params = CatalogId::DecasteljauSubdivision.default_params();
    params.cycles = 1;
    for t in [0.2, 0.5, 0.7] {
        params.t = t;
        let pts = run_catalog(CatalogId::DecasteljauSubdivision, &params, false)
            .unwrap()
            .derivation
            .result
            .points_of(&["P"]);
        assert_eq!(pts.len(), 9);
        let want = bezier_oracle(&params.points, t).unwrap();
        assert!(pts[4].max_abs_diff(&want) < 1e-12);
    }
}

#[test]
fn polylines() {
    assert!(extract_polyline(&ModuleString::default()).unwrap().is_empty());
    let mut params = CatalogId::ChaikinEdges.default_params();
    params.cycles = 0;
    let line = run_catalog(CatalogId::ChaikinEdges, &params, false).unwrap().polyline;
    assert_eq!(line.len(), 4);
    assert!(line.closed);
    for (i, seg) in line.segments.iter().enumerate() {
        assert_eq!(seg.1, line.segments[(i + 1) % 4].0);
    }
    let bad = lsys::dsl::parse_word("L(1, 2)").unwrap();
    assert!(matches!(extract_polyline(&bad), Err(CurveError::Extraction(_))));
}

#[test]
fn rational_polyline_endpoints_are_projected_curve_points() {
    let ctrl = [p2(-1.0, 0.0), p2(0.0, 1.0), p2(1.0, 0.0)];
    let weights = [1.0, 2.5, 1.0];
    let params = CatalogParams {
        points: ctrl.to_vec(),
        weights: Some(weights.to_vec()),
        cycles: 2,
        ..Default::default()
    };
    let run = run_catalog(CatalogId::BezierQuadratic, &params, false).unwrap();
    assert_eq!(run.polyline.len(), 8);
    let wp: Vec<WeightedPoint> = ctrl
        .iter()
        .zip(weights)
        .map(|(p, w)| WeightedPoint::new(*p, w).unwrap())
        .collect();
    // after two halvings the P modules sit on the curve at multiples of 1/4
    let on_curve: Vec<Point> = run.interpreted.points_of(&["P"]);
    assert_eq!(on_curve.len(), 5);
    for (i, p) in on_curve.iter().enumerate() {
        let want = rational_bezier_oracle(&wp, i as f64 / 4.0).unwrap();
        assert!(p.max_abs_diff(&want) < 1e-12, "{p} vs {want}");
    }
    assert_eq!(run.polyline.segments[0].0, on_curve[0]);
    assert_eq!(run.polyline.segments[7].1, on_curve[4]);
}

#[test]
fn rational_file_matches_catalog_pipeline() {
    let def = parse(include_str!("../../../definitions/rational_quadratic.lsys")).unwrap();
    let out = def.interpret(&def.derive(false).unwrap().result).unwrap();
    let got = out.points_of(&["P'"]);
    let want = lsys::verify::rational_arc_midpoint(CatalogId::DecasteljauEdges, 2.5).unwrap();
    assert_eq!(got.len(), 1);
    assert!(got[0].max_abs_diff(&want) < 1e-12);
}
