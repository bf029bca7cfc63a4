//! Parameter expressions and their evaluation.
//!
//! Point-valued expressions are never summed coordinate-wise. Evaluation
//! keeps a list of `(coefficient, point)` terms and hands it to
//! [`affine_combine`] once a concrete point is needed, so a combination
//! whose coefficients do not sum to one is reported instead of silently
//! producing an origin-dependent position.

use std::collections::BTreeMap;
use std::fmt;
use std::ops;

use thiserror::Error;

use crate::geometry::{self, AffineCoefficients, GeometryError, Point};
use crate::rewriting::ParamValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicOp {
    And,
    Or,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Expression tree used in conditions, successor arguments, axioms and
/// schedule counts.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// A pattern variable or a declared constant; variables shadow constants.
    Name(String),
    /// Point literal `(x, y)` or `(x, y, z)`.
    Tuple(Vec<Expr>),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Compare(CmpOp, Box<Expr>, Box<Expr>),
    Logic(LogicOp, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
    /// Coordinate access `v.x`.
    Component(Box<Expr>, Axis),
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn name(n: &str) -> Expr {
        Expr::Name(n.to_string())
    }

    pub fn call(f: &str, args: Vec<Expr>) -> Expr {
        Expr::Call(f.to_string(), args)
    }

    pub fn compare(op: CmpOp, a: Expr, b: Expr) -> Expr {
        Expr::Compare(op, Box::new(a), Box::new(b))
    }

    pub fn tuple(items: Vec<Expr>) -> Expr {
        Expr::Tuple(items)
    }

    pub fn component(self, axis: Axis) -> Expr {
        Expr::Component(Box::new(self), axis)
    }

    /// Literal expression for a parameter value, as written in an axiom.
    pub fn literal(v: &ParamValue) -> Expr {
        match v {
            ParamValue::Scalar(s) => literal_num(*s),
            ParamValue::Point(p) => Expr::Tuple(p.coords().iter().map(|c| literal_num(*c)).collect()),
        }
    }

    /// Calls `f` on every name referenced by the expression.
    pub fn visit_names<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Expr::Num(_) => {}
            Expr::Name(n) => f(n),
            Expr::Tuple(items) | Expr::Call(_, items) => items.iter().for_each(|e| e.visit_names(f)),
            Expr::Neg(e) | Expr::Not(e) | Expr::Component(e, _) => e.visit_names(f),
            Expr::Binary(_, a, b) | Expr::Compare(_, a, b) | Expr::Logic(_, a, b) => {
                a.visit_names(f);
                b.visit_names(f);
            }
        }
    }
}

// Negative literals print as `-x`, which parses back as a negation.
fn literal_num(v: f64) -> Expr {
    if v.is_sign_negative() {
        Expr::Neg(Box::new(Expr::Num(-v)))
    } else {
        Expr::Num(v)
    }
}

impl From<f64> for Expr {
    fn from(v: f64) -> Self {
        Expr::Num(v)
    }
}

macro_rules! expr_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl<R: Into<Expr>> ops::$trait<R> for Expr {
            type Output = Expr;
            fn $method(self, rhs: R) -> Expr {
                Expr::Binary($op, Box::new(self), Box::new(rhs.into()))
            }
        }

        impl ops::$trait<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::Binary($op, Box::new(Expr::Num(self)), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, BinOp::Add);
expr_binop!(Sub, sub, BinOp::Sub);
expr_binop!(Mul, mul, BinOp::Mul);
expr_binop!(Div, div, BinOp::Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// A user function of scalar arguments, defined inline by an expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Function {
    pub params: Vec<String>,
    pub body: Expr,
}

/// Names visible to every production of a definition.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scope {
    pub constants: BTreeMap<String, f64>,
    pub functions: BTreeMap<String, Function>,
}

impl Scope {
    pub fn with_constant(mut self, name: &str, value: f64) -> Self {
        self.constants.insert(name.to_string(), value);
        self
    }
}

/// Functions every definition can call without declaring them.
pub const BUILTIN_FUNCTIONS: &[(&str, usize)] = &[("min", 2), ("max", 2), ("abs", 1), ("sqrt", 1), ("project", 1)];

pub fn builtin_arity(name: &str) -> Option<usize> {
    BUILTIN_FUNCTIONS.iter().find(|(n, _)| *n == name).map(|&(_, a)| a)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound name `{0}`")]
    Unbound(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("function `{name}` takes {expected} arguments, got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("type error: {0}")]
    Type(String),
    #[error("affine combination coefficients sum to {0}, not 1")]
    Affine(f64),
    #[error("non-finite scalar result")]
    NonFinite,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Variable lookup used during evaluation.
pub trait Bindings {
    fn lookup(&self, name: &str) -> Option<&ParamValue>;
}

impl Bindings for [(String, ParamValue)] {
    fn lookup(&self, name: &str) -> Option<&ParamValue> {
        self.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

/// Empty binding set, for expressions that may only use constants.
pub struct NoVars;

impl Bindings for NoVars {
    fn lookup(&self, _: &str) -> Option<&ParamValue> {
        None
    }
}

impl Bindings for Vec<(String, ParamValue)> {
    fn lookup(&self, name: &str) -> Option<&ParamValue> {
        self.as_slice().lookup(name)
    }
}

#[derive(Debug, Clone)]
enum Value {
    Scalar(f64),
    Bool(bool),
    Combo(Vec<(f64, Point)>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Bool(_) => "boolean",
            Value::Combo(_) => "point",
        }
    }
}

/// Evaluates an expression to a module parameter.
pub fn eval_expr(e: &Expr, b: &dyn Bindings, scope: &Scope) -> Result<ParamValue, EvalError> {
    match eval(e, b, scope)? {
        Value::Scalar(s) if s.is_finite() => Ok(ParamValue::Scalar(s)),
        Value::Scalar(_) => Err(EvalError::NonFinite),
        Value::Combo(terms) => Ok(ParamValue::Point(resolve(terms)?)),
        Value::Bool(_) => Err(EvalError::Type("a boolean cannot be a module parameter".into())),
    }
}

/// Evaluates a production condition.
pub fn eval_condition(e: &Expr, b: &dyn Bindings, scope: &Scope) -> Result<bool, EvalError> {
    match eval(e, b, scope)? {
        Value::Bool(v) => Ok(v),
        other => Err(EvalError::Type(format!(
            "condition is a {}, not a boolean",
            other.kind()
        ))),
    }
}

/// Evaluates a scalar-valued expression, e.g. a schedule count.
pub fn eval_scalar(e: &Expr, b: &dyn Bindings, scope: &Scope) -> Result<f64, EvalError> {
    match eval_expr(e, b, scope)? {
        ParamValue::Scalar(s) => Ok(s),
        ParamValue::Point(_) => Err(EvalError::Type("expected a scalar, found a point".into())),
    }
}

fn resolve(terms: Vec<(f64, Point)>) -> Result<Point, EvalError> {
    if let [(c, p)] = terms.as_slice() {
        if *c == 1.0 {
            return Ok(*p);
        }
    }
    let (alphas, points): (Vec<f64>, Vec<Point>) = terms.into_iter().unzip();
    let coeffs = AffineCoefficients::new(alphas).map_err(|e| match e {
        GeometryError::NotAffine(sum) => EvalError::Affine(sum),
        other => EvalError::Geometry(other),
    })?;
    Ok(geometry::affine_combine(&coeffs, &points)?)
}

fn scalar(v: Value, what: &str) -> Result<f64, EvalError> {
    match v {
        Value::Scalar(s) => Ok(s),
        other => Err(EvalError::Type(format!(
            "{what} needs a scalar, found a {}",
            other.kind()
        ))),
    }
}

fn boolean(v: Value, what: &str) -> Result<bool, EvalError> {
    match v {
        Value::Bool(b) => Ok(b),
        other => Err(EvalError::Type(format!(
            "{what} needs a boolean, found a {}",
            other.kind()
        ))),
    }
}

fn scale(terms: Vec<(f64, Point)>, k: f64) -> Value {
    Value::Combo(terms.into_iter().map(|(c, p)| (c * k, p)).collect())
}

fn eval(e: &Expr, b: &dyn Bindings, scope: &Scope) -> Result<Value, EvalError> {
    Ok(match e {
        Expr::Num(v) => Value::Scalar(*v),
        Expr::Name(n) => match b.lookup(n) {
            Some(ParamValue::Scalar(s)) => Value::Scalar(*s),
            Some(ParamValue::Point(p)) => Value::Combo(vec![(1.0, *p)]),
            None => match scope.constants.get(n) {
                Some(c) => Value::Scalar(*c),
                None => return Err(EvalError::Unbound(n.clone())),
            },
        },
        Expr::Tuple(items) => {
            let coords = items
                .iter()
                .map(|i| scalar(eval(i, b, scope)?, "a point coordinate"))
                .collect::<Result<Vec<_>, _>>()?;
            Value::Combo(vec![(1.0, Point::from_slice(&coords)?)])
        }
        Expr::Neg(inner) => match eval(inner, b, scope)? {
            Value::Scalar(s) => Value::Scalar(-s),
            Value::Combo(t) => scale(t, -1.0),
            Value::Bool(_) => return Err(EvalError::Type("cannot negate a boolean".into())),
        },
        Expr::Not(inner) => Value::Bool(!boolean(eval(inner, b, scope)?, "`!`")?),
        Expr::Binary(op, l, r) => binary(*op, eval(l, b, scope)?, eval(r, b, scope)?)?,
        Expr::Compare(op, l, r) => {
            let l = scalar(eval(l, b, scope)?, "a comparison")?;
            let r = scalar(eval(r, b, scope)?, "a comparison")?;
            Value::Bool(match op {
                CmpOp::Lt => l < r,
                CmpOp::Le => l <= r,
                CmpOp::Gt => l > r,
                CmpOp::Ge => l >= r,
                CmpOp::Eq => l == r,
                CmpOp::Ne => l != r,
            })
        }
        Expr::Logic(op, l, r) => {
            let l = boolean(eval(l, b, scope)?, "a logical operator")?;
            // short-circuit
            match (op, l) {
                (LogicOp::And, false) => Value::Bool(false),
                (LogicOp::Or, true) => Value::Bool(true),
                _ => Value::Bool(boolean(eval(r, b, scope)?, "a logical operator")?),
            }
        }
        Expr::Call(name, args) => call(name, args, b, scope)?,
        Expr::Component(inner, axis) => match eval(inner, b, scope)? {
            Value::Combo(t) => {
                let p = resolve(t)?;
                match p.coords().get(axis.index()) {
                    Some(c) => Value::Scalar(*c),
                    None => {
                        return Err(EvalError::Type(format!(
                            "a {}-D point has no `{}` coordinate",
                            p.dim(),
                            axis.name()
                        )))
                    }
                }
            }
            other => {
                return Err(EvalError::Type(format!(
                    "coordinate access needs a point, found a {}",
                    other.kind()
                )))
            }
        },
    })
}

fn binary(op: BinOp, l: Value, r: Value) -> Result<Value, EvalError> {
    use Value::{Combo, Scalar};
    Ok(match (op, l, r) {
        (BinOp::Add, Scalar(a), Scalar(b)) => Scalar(a + b),
        (BinOp::Sub, Scalar(a), Scalar(b)) => Scalar(a - b),
        (BinOp::Mul, Scalar(a), Scalar(b)) => Scalar(a * b),
        (BinOp::Div, Scalar(a), Scalar(b)) => Scalar(a / b),
        (BinOp::Add, Combo(mut a), Combo(b)) => {
            a.extend(b);
            Combo(a)
        }
        (BinOp::Sub, Combo(mut a), Combo(b)) => {
            a.extend(b.into_iter().map(|(c, p)| (-c, p)));
            Combo(a)
        }
        (BinOp::Mul, Scalar(k), Combo(t)) | (BinOp::Mul, Combo(t), Scalar(k)) => scale(t, k),
        (BinOp::Div, Combo(t), Scalar(k)) => scale(t, 1.0 / k),
        (op, l, r) => {
            return Err(EvalError::Type(format!(
                "cannot apply `{}` to a {} and a {}",
                binop_symbol(op),
                l.kind(),
                r.kind()
            )))
        }
    })
}

pub(crate) fn binop_symbol(op: BinOp) -> &'static str {
    match op {
        BinOp::Add => "+",
        BinOp::Sub => "-",
        BinOp::Mul => "*",
        BinOp::Div => "/",
    }
}

fn call(name: &str, args: &[Expr], b: &dyn Bindings, scope: &Scope) -> Result<Value, EvalError> {
    let expected = match scope.functions.get(name) {
        Some(f) => f.params.len(),
        None => builtin_arity(name).ok_or_else(|| EvalError::UnknownFunction(name.to_string()))?,
    };
    if args.len() != expected {
        return Err(EvalError::Arity {
            name: name.to_string(),
            expected,
            found: args.len(),
        });
    }
    if let Some(f) = scope.functions.get(name) {
        let locals = f
            .params
            .iter()
            .zip(args)
            .map(|(p, a)| Ok((p.clone(), ParamValue::Scalar(scalar(eval(a, b, scope)?, name)?))))
            .collect::<Result<Vec<_>, EvalError>>()?;
        return eval(&f.body, &locals, scope);
    }
    if name == "project" {
        return match eval(&args[0], b, scope)? {
            Value::Combo(t) => Ok(Value::Combo(vec![(1.0, geometry::project_to_plane(&resolve(t)?)?)])),
            other => Err(EvalError::Type(format!(
                "`project` needs a point, found a {}",
                other.kind()
            ))),
        };
    }
    let xs = args
        .iter()
        .map(|a| scalar(eval(a, b, scope)?, name))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Value::Scalar(match name {
        "min" => xs[0].min(xs[1]),
        "max" => xs[0].max(xs[1]),
        "abs" => xs[0].abs(),
        "sqrt" => xs[0].sqrt(),
        _ => unreachable!("builtin table and dispatch disagree"),
    }))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::dsl::format::write_expr(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> ParamValue {
        ParamValue::Point(Point::new2(x, y).unwrap())
    }

    fn bind(pairs: &[(&str, ParamValue)]) -> Vec<(String, ParamValue)> {
        pairs.iter().map(|(n, v)| (n.to_string(), *v)).collect()
    }

    #[test]
    fn scalar_arithmetic() {
        let e = 2.0 * Expr::name("x") + 1.0;
        let b = bind(&[("x", ParamValue::Scalar(1.5))]);
        assert_eq!(eval_expr(&e, &b, &Scope::default()), Ok(ParamValue::Scalar(4.0)));
    }

    #[test]
    fn interpolation_endpoint() {
        let t = Expr::name("t");
        let e = (1.0 - t.clone()) * Expr::name("vl") + t * Expr::name("vr");
        let b = bind(&[("vl", pt(0.0, 0.0)), ("vr", pt(9.0, 9.0))]);
        let scope = Scope::default().with_constant("t", 0.0);
        assert_eq!(eval_expr(&e, &b, &scope), Ok(pt(0.0, 0.0)));
    }

    #[test]
    fn state_function() {
        let mut scope = Scope::default();
        scope.functions.insert(
            "f".into(),
            Function {
                params: vec!["sl".into(), "sr".into()],
                body: Expr::call("min", vec![Expr::name("sl"), 1.0.into()])
                    + Expr::call("min", vec![Expr::name("sr"), 1.0.into()]),
            },
        );
        let e = Expr::call("f", vec![Expr::name("a"), Expr::name("b")]);
        let b = bind(&[("a", ParamValue::Scalar(2.0)), ("b", ParamValue::Scalar(0.0))]);
        assert_eq!(eval_expr(&e, &b, &scope), Ok(ParamValue::Scalar(1.0)));
    }

    #[test]
    fn affine_violation_is_reported() {
        let e = 0.5 * Expr::name("a") + 0.6 * Expr::name("b");
        let b = bind(&[("a", pt(0.0, 0.0)), ("b", pt(1.0, 0.0))]);
        match eval_expr(&e, &b, &Scope::default()) {
            Err(EvalError::Affine(s)) => assert!((s - 1.1).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn differences_inside_a_combination() {
        // a + 0.5 (b - a) is affine even though (b - a) alone is not
        let a = Expr::name("a");
        let e = a.clone() + 0.5 * (Expr::name("b") - a);
        let b = bind(&[("a", pt(0.0, 0.0)), ("b", pt(2.0, 4.0))]);
        assert_eq!(eval_expr(&e, &b, &Scope::default()), Ok(pt(1.0, 2.0)));
    }

    #[test]
    fn type_errors() {
        let b = bind(&[("v", pt(1.0, 1.0)), ("s", ParamValue::Scalar(1.0))]);
        let scope = Scope::default();
        let cmp = Expr::compare(CmpOp::Lt, Expr::name("v"), 1.0.into());
        assert!(matches!(eval_condition(&cmp, &b, &scope), Err(EvalError::Type(_))));
        let sum = Expr::name("v") + Expr::name("s");
        assert!(matches!(eval_expr(&sum, &b, &scope), Err(EvalError::Type(_))));
        assert!(matches!(
            eval_condition(&Expr::name("s"), &b, &scope),
            Err(EvalError::Type(_))
        ));
        assert_eq!(
            eval_expr(&Expr::name("q"), &b, &scope),
            Err(EvalError::Unbound("q".into()))
        );
    }

    #[test]
    fn projection_and_components() {
        let b = bind(&[("v", ParamValue::Point(Point::new3(2.0, 4.0, 2.0).unwrap()))]);
        let scope = Scope::default();
        let e = Expr::call("project", vec![Expr::name("v")]);
        assert_eq!(eval_expr(&e, &b, &scope), Ok(pt(1.0, 2.0)));
        let v = Expr::name("v");
        let by_hand = Expr::tuple(vec![
            v.clone().component(Axis::X) / v.clone().component(Axis::Z),
            v.clone().component(Axis::Y) / v.component(Axis::Z),
        ]);
        assert_eq!(eval_expr(&by_hand, &b, &scope), Ok(pt(1.0, 2.0)));
    }

    #[test]
    fn variables_shadow_constants() {
        let b = bind(&[("t", ParamValue::Scalar(3.0))]);
        let scope = Scope::default().with_constant("t", 0.5);
        assert_eq!(eval_scalar(&Expr::name("t"), &b, &scope), Ok(3.0));
    }
}
