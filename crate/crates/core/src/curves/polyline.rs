use super::CurveError;
use crate::geometry::Point;
use crate::rewriting::{ModuleString, ParamValue};

/// Line segments gathered from `L(a, b)` modules.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polyline {
    pub segments: Vec<(Point, Point)>,
    pub closed: bool,
}

impl Polyline {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Segment start points followed by the last end point (omitted for
    /// closed polylines, where it repeats the first).
    pub fn vertices(&self) -> Vec<Point> {
        let mut out: Vec<Point> = self.segments.iter().map(|s| s.0).collect();
        if !self.closed {
            out.extend(self.segments.last().map(|s| s.1));
        }
        out
    }
}

/// Collects every `L` module of an interpreted string, in order.
pub fn extract_polyline(interpreted: &ModuleString) -> Result<Polyline, CurveError> {
    let segments = interpreted
        .iter()
        .filter(|m| m.symbol == "L")
        .map(|m| match m.params.as_slice() {
            [ParamValue::Point(a), ParamValue::Point(b)] => Ok((*a, *b)),
            _ => Err(CurveError::Extraction(m.to_string())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Polyline {
        segments,
        closed: interpreted.is_circular(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewriting::Module;

    #[test]
    fn extraction() {
        let empty = ModuleString::linear(vec![Module::bare("E")]);
        assert!(extract_polyline(&empty).unwrap().is_empty());
        let a = Point::new2(0.0, 0.0).unwrap();
        let b = Point::new2(1.0, 2.0).unwrap();
        let s = ModuleString::linear(vec![
            Module::point("P", a),
            Module::new("L", vec![a.into(), b.into()]),
            Module::point("P", b),
        ]);
        let pl = extract_polyline(&s).unwrap();
        assert_eq!(pl.segments, vec![(a, b)]);
        assert_eq!(pl.vertices(), vec![a, b]);
        let bad = ModuleString::linear(vec![Module::new("L", vec![1.0.into()])]);
        assert!(matches!(extract_polyline(&bad), Err(CurveError::Extraction(_))));
    }
}
