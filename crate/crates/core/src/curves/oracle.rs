//! Closed-form curve evaluation, independent of the rewriting engine.
//!
//! These are the references the L-system results are checked against:
//! Bernstein polynomials for Bézier curves and the Cox–de Boor recursion
//! for uniform B-splines. They sum coordinates directly and share no code
//! with the affine-combination path.

use super::CurveError;
use crate::geometry::{GeometryError, Point, WeightedPoint};

fn check_polygon(ctrl: &[Point], min: usize) -> Result<usize, CurveError> {
    if ctrl.len() < min {
        return Err(CurveError::Domain(format!(
            "need at least {min} control points, got {}",
            ctrl.len()
        )));
    }
    let dim = ctrl[0].dim();
    if let Some(p) = ctrl.iter().find(|p| p.dim() != dim) {
        return Err(GeometryError::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        }
        .into());
    }
    Ok(dim)
}

/// Row `n` of Pascal's triangle.
fn binomials(n: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for _ in 0..n {
        let mut next = vec![1.0; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row
}

fn bernstein(n: usize, t: f64) -> Vec<f64> {
    binomials(n)
        .into_iter()
        .enumerate()
        .map(|(i, c)| c * t.powi(i as i32) * (1.0 - t).powi((n - i) as i32))
        .collect()
}

/// Point at `t` on the Bézier curve of degree `ctrl.len() - 1`.
pub fn bezier_oracle(ctrl: &[Point], t: f64) -> Result<Point, CurveError> {
    let dim = check_polygon(ctrl, 2)?;
    let weights = bernstein(ctrl.len() - 1, t);
    let mut acc = [0.0; 3];
    for (b, p) in weights.iter().zip(ctrl) {
        for (k, c) in p.coords().iter().enumerate() {
            acc[k] += b * c;
        }
    }
    Ok(Point::from_slice(&acc[..dim])?)
}

/// Point at `t` on the rational Bézier curve: the Bernstein-weighted mean
/// of the control points, with each basis value scaled by the point weight.
pub fn rational_bezier_oracle(ctrl: &[WeightedPoint], t: f64) -> Result<Point, CurveError> {
    if ctrl.len() < 2 {
        return Err(CurveError::Domain(format!(
            "need at least 2 control points, got {}",
            ctrl.len()
        )));
    }
    let basis = bernstein(ctrl.len() - 1, t);
    let (mut x, mut y, mut denom) = (0.0, 0.0, 0.0);
    for (b, wp) in basis.iter().zip(ctrl) {
        let w = b * wp.weight();
        x += w * wp.base().x();
        y += w * wp.base().y();
        denom += w;
    }
    Ok(Point::new2(x / denom, y / denom)?)
}

/// Knot vector layout for [`bspline_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnotLayout {
    /// Closed curve over the polygon taken cyclically, knots at the
    /// integers; `u` ranges over `[0, m)` for `m` control points.
    Periodic,
    /// Open curve interpolating the end points; `u` ranges over
    /// `[0, m - degree]`.
    Clamped,
}

/// Cox–de Boor recursion, with `0/0` taken as 0.
fn basis(j: i64, p: usize, u: f64, knot: &dyn Fn(i64) -> f64) -> f64 {
    if p == 0 {
        return if knot(j) <= u && u < knot(j + 1) { 1.0 } else { 0.0 };
    }
    let p_i = p as i64;
    let mut value = 0.0;
    let d1 = knot(j + p_i) - knot(j);
    if d1 != 0.0 {
        value += (u - knot(j)) / d1 * basis(j, p - 1, u, knot);
    }
    let d2 = knot(j + p_i + 1) - knot(j + 1);
    if d2 != 0.0 {
        value += (knot(j + p_i + 1) - u) / d2 * basis(j + 1, p - 1, u, knot);
    }
    value
}

/// Point at parameter `u` on the uniform B-spline of the given degree.
pub fn bspline_oracle(ctrl: &[Point], degree: usize, u: f64, layout: KnotLayout) -> Result<Point, CurveError> {
    if degree == 0 {
        return Err(CurveError::Domain("degree must be at least 1".into()));
    }
    let m = ctrl.len();
    let dim = match layout {
        KnotLayout::Periodic => check_polygon(ctrl, 2)?,
        KnotLayout::Clamped => check_polygon(ctrl, degree + 1)?,
    };
    let mut acc = [0.0; 3];
    let mut add = |w: f64, p: &Point| {
        for (k, c) in p.coords().iter().enumerate() {
            acc[k] += w * c;
        }
    };
    match layout {
        KnotLayout::Periodic => {
            if !(0.0..m as f64).contains(&u) {
                return Err(CurveError::Domain(format!("u = {u} outside [0, {m})")));
            }
            let span = u.floor() as i64;
            let knot = |j: i64| j as f64;
            for j in (span - degree as i64)..=span {
                let w = basis(j, degree, u, &knot);
                add(w, &ctrl[j.rem_euclid(m as i64) as usize]);
            }
        }
        KnotLayout::Clamped => {
            let end = (m - degree) as f64;
            if !(0.0..=end).contains(&u) {
                return Err(CurveError::Domain(format!("u = {u} outside [0, {end}]")));
            }
            if u == end {
                return Ok(ctrl[m - 1]);
            }
            let p = degree as i64;
            let knot = |j: i64| (j - p).clamp(0, m as i64 - p) as f64;
            for (j, point) in ctrl.iter().enumerate() {
                add(basis(j as i64, degree, u, &knot), point);
            }
        }
    }
    Ok(Point::from_slice(&acc[..dim])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p2(x: f64, y: f64) -> Point {
        Point::new2(x, y).unwrap()
    }

    fn square() -> Vec<Point> {
        vec![p2(0.0, 0.0), p2(4.0, 0.0), p2(4.0, 4.0), p2(0.0, 4.0)]
    }

    fn close(a: Point, b: Point) {
        assert_abs_diff_eq!(a.x(), b.x(), epsilon = 1e-14);
        assert_abs_diff_eq!(a.y(), b.y(), epsilon = 1e-14);
    }

    #[test]
    fn pascal() {
        assert_eq!(binomials(4), vec![1.0, 4.0, 6.0, 4.0, 1.0]);
    }

    #[test]
    fn bezier_values() {
        assert_eq!(bezier_oracle(&[p2(0.0, 0.0), p2(1.0, 0.0)], 0.5).unwrap(), p2(0.5, 0.0));
        // weights (1/4, 1/2, 1/4)
        let tri = [p2(0.0, 0.0), p2(1.0, 2.0), p2(2.0, 0.0)];
        assert_eq!(bezier_oracle(&tri, 0.5).unwrap(), p2(1.0, 1.0));
        assert_eq!(bezier_oracle(&tri, 1.0).unwrap(), p2(2.0, 0.0));
        assert_eq!(bezier_oracle(&tri, 0.0).unwrap(), p2(0.0, 0.0));
        assert!(bezier_oracle(&tri[..1], 0.5).is_err());
    }

    #[test]
    fn rational_weights() {
        let tri = [p2(-1.0, 0.0), p2(0.0, 1.0), p2(1.0, 0.0)];
        let with = |w: f64| {
            let wp: Vec<_> = tri
                .iter()
                .zip([1.0, w, 1.0])
                .map(|(p, w)| WeightedPoint::new(*p, w).unwrap())
                .collect();
            rational_bezier_oracle(&wp, 0.5).unwrap()
        };
        close(with(1.0), bezier_oracle(&tri, 0.5).unwrap());
        // (P0 + 2w P1 + P2) / (2 + 2w) has y = w / (1 + w)
        close(with(2.5), p2(0.0, 2.5 / 3.5));
        close(with(0.5), p2(0.0, 0.5 / 1.5));
        let d = |w| with(w).distance(&tri[1]);
        assert!(d(2.5) < d(1.0) && d(1.0) < d(0.5));
    }

    #[test]
    fn bspline_at_knots() {
        let sq = square();
        // degree 1 interpolates: C(k) = P[k - 1]
        for k in 0..4 {
            close(
                bspline_oracle(&sq, 1, k as f64, KnotLayout::Periodic).unwrap(),
                sq[(k + 3) % 4],
            );
        }
        // degree 2: edge midpoints
        for k in 0..4usize {
            let (a, b) = (sq[(k + 2) % 4], sq[(k + 3) % 4]);
            let mid = p2((a.x() + b.x()) / 2.0, (a.y() + b.y()) / 2.0);
            close(bspline_oracle(&sq, 2, k as f64, KnotLayout::Periodic).unwrap(), mid);
        }
        // degree 3: (1/6, 4/6, 1/6)
        for k in 0..4usize {
            let (a, b, c) = (sq[(k + 1) % 4], sq[(k + 2) % 4], sq[(k + 3) % 4]);
            let want = p2((a.x() + 4.0 * b.x() + c.x()) / 6.0, (a.y() + 4.0 * b.y() + c.y()) / 6.0);
            close(bspline_oracle(&sq, 3, k as f64, KnotLayout::Periodic).unwrap(), want);
        }
        assert!(bspline_oracle(&sq, 2, 4.0, KnotLayout::Periodic).is_err());
        assert!(bspline_oracle(&sq, 2, -0.1, KnotLayout::Periodic).is_err());
    }

    #[test]
    fn clamped_bspline() {
        let pts = [p2(0.0, 0.0), p2(1.0, 2.0), p2(3.0, 2.0), p2(4.0, 0.0)];
        // degree 3 with 4 points is the cubic Bezier curve
        for i in 0..=10 {
            let u = i as f64 / 10.0;
            close(
                bspline_oracle(&pts, 3, u, KnotLayout::Clamped).unwrap(),
                bezier_oracle(&pts, u).unwrap(),
            );
        }
        close(bspline_oracle(&pts, 2, 2.0, KnotLayout::Clamped).unwrap(), pts[3]);
        close(bspline_oracle(&pts, 2, 0.0, KnotLayout::Clamped).unwrap(), pts[0]);
        assert!(bspline_oracle(&pts, 2, 2.5, KnotLayout::Clamped).is_err());
    }
}
