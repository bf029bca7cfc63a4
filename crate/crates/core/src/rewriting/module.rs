use std::fmt;

use crate::geometry::Point;

/// A module parameter: a number or a position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Scalar(f64),
    Point(Point),
}

impl ParamValue {
    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            ParamValue::Scalar(s) => Some(*s),
            ParamValue::Point(_) => None,
        }
    }

    pub fn as_point(&self) -> Option<Point> {
        match self {
            ParamValue::Point(p) => Some(*p),
            ParamValue::Scalar(_) => None,
        }
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Scalar(v)
    }
}

impl From<Point> for ParamValue {
    fn from(p: Point) -> Self {
        ParamValue::Point(p)
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Scalar(s) => write!(f, "{s}"),
            ParamValue::Point(p) => write!(f, "{p}"),
        }
    }
}

/// A symbol with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Module {
    pub symbol: String,
    pub params: Vec<ParamValue>,
}

impl Module {
    pub fn new(symbol: impl Into<String>, params: Vec<ParamValue>) -> Self {
        Module {
            symbol: symbol.into(),
            params,
        }
    }

    /// A module without parameters, such as an edge `E`.
    pub fn bare(symbol: impl Into<String>) -> Self {
        Module::new(symbol, Vec::new())
    }

    pub fn point(symbol: impl Into<String>, p: Point) -> Self {
        Module::new(symbol, vec![ParamValue::Point(p)])
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol)?;
        if self.params.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, p) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Topology {
    #[default]
    Linear,
    /// First and last modules are neighbors.
    Circular,
}

/// A word of modules, either open or closed into a ring.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModuleString {
    pub modules: Vec<Module>,
    pub topology: Topology,
}

impl ModuleString {
    pub fn new(modules: Vec<Module>, topology: Topology) -> Self {
        ModuleString { modules, topology }
    }

    pub fn linear(modules: Vec<Module>) -> Self {
        Self::new(modules, Topology::Linear)
    }

    pub fn circular(modules: Vec<Module>) -> Self {
        Self::new(modules, Topology::Circular)
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn is_circular(&self) -> bool {
        self.topology == Topology::Circular
    }

    /// Index `i + offset`, wrapping for circular strings and `None` past the
    /// ends of linear ones.
    pub fn neighbor(&self, i: usize, offset: isize) -> Option<usize> {
        let len = self.len() as isize;
        if len == 0 {
            return None;
        }
        let j = i as isize + offset;
        match self.topology {
            Topology::Circular => Some(j.rem_euclid(len) as usize),
            Topology::Linear => (0..len).contains(&j).then_some(j as usize),
        }
    }

    /// The string rotated left by `r` positions (circular strings only
    /// change their stored origin).
    pub fn rotated(&self, r: usize) -> Self {
        let mut modules = self.modules.clone();
        if !modules.is_empty() {
            let r = r % modules.len();
            modules.rotate_left(r);
        }
        ModuleString::new(modules, self.topology)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Module> {
        self.modules.iter()
    }

    /// First point parameter of every module whose symbol is in `symbols`,
    /// in string order.
    pub fn points_of(&self, symbols: &[&str]) -> Vec<Point> {
        self.modules
            .iter()
            .filter(|m| symbols.contains(&m.symbol.as_str()))
            .filter_map(|m| m.params.first().and_then(ParamValue::as_point))
            .collect()
    }
}

/// Space-separated modules, e.g. `A(4) A(3.5) P((1,0)) E`.
impl fmt::Display for ModuleString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.modules.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbors() {
        let s = ModuleString::linear(vec![Module::bare("A"), Module::bare("B")]);
        assert_eq!(s.neighbor(1, 1), None);
        assert_eq!(s.neighbor(0, -1), None);
        assert_eq!(s.neighbor(0, 1), Some(1));
        let c = ModuleString::circular(s.modules.clone());
        assert_eq!(c.neighbor(0, -1), Some(1));
        assert_eq!(c.neighbor(1, 1), Some(0));
        assert_eq!(c.neighbor(1, -5), Some(0));
    }

    #[test]
    fn formatting() {
        let s = ModuleString::linear(vec![
            Module::new("A", vec![4.0.into()]),
            Module::new("A", vec![3.5.into()]),
        ]);
        assert_eq!(s.to_string(), "A(4) A(3.5)");
        let s = ModuleString::linear(vec![
            Module::point("P", Point::new2(1.0, 0.0).unwrap()),
            Module::bare("E"),
        ]);
        assert_eq!(s.to_string(), "P((1,0)) E");
    }
}
