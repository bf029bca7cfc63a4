use lsys::geometry::{affine_combine, lift_with_weight, project_to_plane, AffineCoefficients};
use lsys::{Point, WeightedPoint};
use proptest::prelude::*;

fn point2() -> impl Strategy<Value = Point> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| Point::new2(x, y).unwrap())
}

/// Free coefficients plus a last one that closes the sum to 1.
fn affine(n: usize) -> impl Strategy<Value = AffineCoefficients> {
    prop::collection::vec(-2.0..2.0f64, n - 1).prop_map(|mut a| {
        let rest: f64 = a.iter().sum();
        a.push(1.0 - rest);
        AffineCoefficients::new(a).unwrap()
    })
}

fn combination() -> impl Strategy<Value = (AffineCoefficients, Vec<Point>)> {
    (1usize..7).prop_flat_map(|n| (affine(n), prop::collection::vec(point2(), n)))
}

proptest! {
    #[test]
    fn translation_invariance((c, pts) in combination(), tx in -10.0..10.0f64, ty in -10.0..10.0f64) {
        let moved: Vec<Point> = pts.iter().map(|p| p.translate(&[tx, ty]).unwrap()).collect();
        let a = affine_combine(&c, &moved).unwrap();
        let b = affine_combine(&c, &pts).unwrap().translate(&[tx, ty]).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn lift_then_project_is_identity(p in point2(), w in prop::sample::select(vec![0.5, 1.0, 2.5])) {
        let back = project_to_plane(&lift_with_weight(&WeightedPoint::new(p, w).unwrap())).unwrap();
        prop_assert!(back.max_abs_diff(&p) <= 1e-12);
    }

    #[test]
    fn coefficients_off_by_more_than_tolerance_are_rejected(extra in 1e-8..1.0f64, sign in prop::bool::ANY) {
        let e = if sign { extra } else { -extra };
        prop_assert!(AffineCoefficients::new(vec![0.5, 0.5 + e]).is_err());
    }
}

#[test]
fn two_point_division_proportion() {
    let a = Point::new2(-3.0, 1.0).unwrap();
    let b = Point::new2(5.0, 7.0).unwrap();
    let len = a.distance(&b);
    for i in 0..=100 {
        let t = i as f64 / 100.0;
        let c = AffineCoefficients::new(vec![1.0 - t, t]).unwrap();
        let p = affine_combine(&c, &[a, b]).unwrap();
        assert!((p.distance(&a) - t * len).abs() <= 1e-12, "t = {t}");
        assert!((p.distance(&b) - (1.0 - t) * len).abs() <= 1e-12, "t = {t}");
    }
}

#[test]
fn three_dimensional_points_combine_too() {
    let pts = [Point::new3(0.0, 0.0, 1.0).unwrap(), Point::new3(2.0, 4.0, 3.0).unwrap()];
    let c = AffineCoefficients::new(vec![0.5, 0.5]).unwrap();
    assert_eq!(affine_combine(&c, &pts).unwrap(), Point::new3(1.0, 2.0, 2.0).unwrap());
}
