//! Affine geometry on 2-D and 3-D positions.
//!
//! Positions are combined only through affine combinations (coefficients
//! summing to one), which keeps every result independent of where the
//! coordinate origin sits. Rational curves are handled by lifting weighted
//! planar points into 3-D and projecting back onto the plane `z = 1`.

use std::fmt;

use thiserror::Error;

/// Tolerance on the sum of affine coefficients.
pub const AFFINE_SUM_TOLERANCE: f64 = 1e-9;

/// Points with `|z|` at or below this value cannot be projected.
pub const PROJECTION_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("points must have 2 or 3 coordinates, got {0}")]
    BadDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{coefficients} coefficients for {points} points")]
    LengthMismatch { coefficients: usize, points: usize },
    #[error("affine combination needs at least one point")]
    Empty,
    #[error("affine coefficients sum to {0}, not 1")]
    NotAffine(f64),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("cannot project a point with z = {0} onto the plane z = 1")]
    ProjectionSingularity(f64),
    #[error("weight must be positive, got {0}")]
    NonPositiveWeight(f64),
}

/// A position in the plane or in space.
///
/// Unused trailing coordinates of 2-D points are kept at zero so the derived
/// equality compares exactly the meaningful components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    coords: [f64; 3],
    dim: u8,
}

impl Point {
    pub fn new2(x: f64, y: f64) -> Result<Self, GeometryError> {
        Self::from_slice(&[x, y])
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Result<Self, GeometryError> {
        Self::from_slice(&[x, y, z])
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self, GeometryError> {
        if !(2..=3).contains(&coords.len()) {
            return Err(GeometryError::BadDimension(coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let mut buf = [0.0; 3];
        buf[..coords.len()].copy_from_slice(coords);
        Ok(Point {
            coords: buf,
            dim: coords.len() as u8,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim()]
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    /// Third coordinate, `None` for planar points.
    pub fn z(&self) -> Option<f64> {
        (self.dim == 3).then_some(self.coords[2])
    }

    /// Euclidean distance. Both points must share a dimension.
    pub fn distance(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest per-coordinate difference.
    pub fn max_abs_diff(&self, other: &Point) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Moves the point by a displacement vector of the same dimension.
    pub fn translate(&self, by: &[f64]) -> Result<Point, GeometryError> {
        if by.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                found: by.len(),
            });
        }
        let moved: Vec<f64> = self.coords().iter().zip(by).map(|(c, d)| c + d).collect();
        Point::from_slice(&moved)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Coefficients of an affine combination. Construction checks that they
/// sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineCoefficients(Vec<f64>);

impl AffineCoefficients {
    pub fn new(alphas: Vec<f64>) -> Result<Self, GeometryError> {
        if alphas.is_empty() {
            return Err(GeometryError::Empty);
        }
        if alphas.iter().any(|a| !a.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let sum: f64 = alphas.iter().sum();
        if (sum - 1.0).abs() > AFFINE_SUM_TOLERANCE {
            return Err(GeometryError::NotAffine(sum));
        }
        Ok(AffineCoefficients(alphas))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Computes `sum(alpha_i * p_i)` in vector form anchored at the first point:
/// `p_0 + sum_{i>0} alpha_i (p_i - p_0)`.
///
/// The first coefficient only enters through the sum-to-one constraint, so
/// translating every input translates the result by the same amount.
pub fn affine_combine(coeffs: &AffineCoefficients, points: &[Point]) -> Result<Point, GeometryError> {
    if coeffs.len() != points.len() {
        return Err(GeometryError::LengthMismatch {
            coefficients: coeffs.len(),
            points: points.len(),
        });
    }
    let anchor = points.first().ok_or(GeometryError::Empty)?;
    let dim = anchor.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(GeometryError::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    let mut out = anchor.coords;
    for (alpha, p) in coeffs.as_slice().iter().zip(points).skip(1) {
        for ((o, c), a) in out.iter_mut().zip(&p.coords).zip(&anchor.coords).take(dim) {
            *o += alpha * (c - a);
        }
    }
    Point::from_slice(&out[..dim])
}

/// Central projection from the origin onto the plane `z = 1`.
pub fn project_to_plane(p: &Point) -> Result<Point, GeometryError> {
    let z = p.z().ok_or(GeometryError::DimensionMismatch {
        expected: 3,
        found: p.dim(),
    })?;
    if z.abs() <= PROJECTION_EPSILON {
        return Err(GeometryError::ProjectionSingularity(z));
    }
    Point::new2(p.x() / z, p.y() / z)
}

/// A planar point with a positive weight, the control-point type of
/// rational curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedPoint {
    base: Point,
    weight: f64,
}

impl WeightedPoint {
    pub fn new(base: Point, weight: f64) -> Result<Self, GeometryError> {
        if base.dim() != 2 {
            return Err(GeometryError::DimensionMismatch {
                expected: 2,
                found: base.dim(),
            });
        }
        if !weight.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if weight <= 0.0 {
            return Err(GeometryError::NonPositiveWeight(weight));
        }
        Ok(WeightedPoint { base, weight })
    }

    pub fn base(&self) -> Point {
        self.base
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

/// Homogeneous lift `(w x, w y, w)`; projecting it gives back the base point.
pub fn lift_with_weight(wp: &WeightedPoint) -> Point {
    let w = wp.weight;
    Point::new3(w * wp.base.x(), w * wp.base.y(), w).expect("finite by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(x: f64, y: f64) -> Point {
        Point::new2(x, y).unwrap()
    }

    fn combine(alphas: &[f64], pts: &[Point]) -> Result<Point, GeometryError> {
        affine_combine(&AffineCoefficients::new(alphas.to_vec())?, pts)
    }

    #[test]
    fn identity_combination() {
        assert_eq!(combine(&[1.0], &[p2(3.0, 4.0)]).unwrap(), p2(3.0, 4.0));
    }

    #[test]
    fn midpoint() {
        let m = combine(&[0.5, 0.5], &[p2(0.0, 0.0), p2(2.0, 6.0)]).unwrap();
        assert_eq!(m, p2(1.0, 3.0));
    }

    #[test]
    fn quarter_split_matches_vector_form() {
        let (a, b) = (p2(0.0, 0.0), p2(4.0, 0.0));
        let v = combine(&[0.25, 0.75], &[a, b]).unwrap();
        // a + 0.75 (b - a) by hand: (0 + 0.75 * 4, 0)
        assert_eq!(v, p2(3.0, 0.0));
        // proportion 0.75 : 0.25 along the segment
        assert_eq!(a.distance(&v) / v.distance(&b), 3.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            AffineCoefficients::new(vec![0.5, 0.6]),
            Err(GeometryError::NotAffine(1.1))
        );
        assert!(matches!(
            combine(&[0.5, 0.5], &[p2(0.0, 0.0)]),
            Err(GeometryError::LengthMismatch { .. })
        ));
        let p3 = Point::new3(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            combine(&[0.5, 0.5], &[p2(0.0, 0.0), p3]),
            Err(GeometryError::DimensionMismatch { .. })
        ));
        assert_eq!(Point::from_slice(&[1.0]), Err(GeometryError::BadDimension(1)));
        assert_eq!(Point::new2(f64::NAN, 0.0), Err(GeometryError::NonFinite));
    }

    #[test]
    fn sum_tolerance_boundary() {
        assert!(AffineCoefficients::new(vec![0.5, 0.5 + 5e-10]).is_ok());
        assert!(AffineCoefficients::new(vec![0.5, 0.5 + 5e-9]).is_err());
    }

    #[test]
    fn projection() {
        let pr = |x, y, z| project_to_plane(&Point::new3(x, y, z).unwrap()).unwrap();
        assert_eq!(pr(3.0, 4.0, 1.0), p2(3.0, 4.0));
        assert_eq!(pr(2.0, 4.0, 2.0), p2(1.0, 2.0));
        assert_eq!(pr(1.25, 0.5, 2.5), p2(0.5, 0.2));
        assert!(matches!(
            project_to_plane(&Point::new3(1.0, 1.0, 1e-13).unwrap()),
            Err(GeometryError::ProjectionSingularity(_))
        ));
        assert!(project_to_plane(&p2(1.0, 1.0)).is_err());
    }

    #[test]
    fn lifting() {
        let lift = |x, y, w| lift_with_weight(&WeightedPoint::new(p2(x, y), w).unwrap());
        assert_eq!(lift(3.0, 4.0, 1.0), Point::new3(3.0, 4.0, 1.0).unwrap());
        assert_eq!(lift(1.0, 2.0, 2.5), Point::new3(2.5, 5.0, 2.5).unwrap());
        assert_eq!(lift(0.0, 0.0, 0.5), Point::new3(0.0, 0.0, 0.5).unwrap());
        assert_eq!(
            WeightedPoint::new(p2(0.0, 0.0), 0.0),
            Err(GeometryError::NonPositiveWeight(0.0))
        );
    }

    #[test]
    fn display() {
        assert_eq!(p2(1.0, 0.0).to_string(), "(1,0)");
        assert_eq!(Point::new3(0.5, -2.0, 1.0).unwrap().to_string(), "(0.5,-2,1)");
    }
}
