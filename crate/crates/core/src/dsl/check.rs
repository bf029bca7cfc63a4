//! Static checks run after parsing: parameter kinds and affine sums.
//!
//! Parameter kinds (scalar or point) are inferred per `(symbol, arity)`
//! from the axiom and then propagated through successor templates until
//! nothing changes. With kinds known, every point-valued successor argument
//! has its coefficient sum reduced to an affine form in the scalar names;
//! `(1 - t) * a + t * b` reduces to exactly 1 for every `t`. Sums that
//! reduce to another constant are errors; sums that cannot be reduced are
//! reported as warnings and checked at run time.

use std::collections::{BTreeMap, HashMap};

use super::definition::LSystemDefinition;
use super::expr::{binop_symbol, BinOp, Expr, Scope};
use super::lexer::Pos;
use super::{ParseError, Warning};
use crate::geometry::AFFINE_SUM_TOLERANCE;
use crate::rewriting::{ParamValue, Production};

#[derive(Debug, Default)]
pub(crate) struct SourceMap {
    pub axiom: Pos,
    /// Start of every production, per table.
    pub productions: Vec<Vec<Pos>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Scalar,
    Point,
    Bool,
    Unknown,
}

type Signatures = HashMap<(String, usize), Vec<Kind>>;

pub(crate) fn check(def: &LSystemDefinition, map: &SourceMap) -> Result<Vec<Warning>, ParseError> {
    let mut sigs: Signatures = HashMap::new();
    for m in def.axiom.iter() {
        let kinds: Vec<Kind> = m
            .params
            .iter()
            .map(|p| match p {
                ParamValue::Scalar(_) => Kind::Scalar,
                ParamValue::Point(_) => Kind::Point,
            })
            .collect();
        merge(&mut sigs, &m.symbol, &kinds).map_err(|msg| ParseError::new(map.axiom, msg, &m.symbol))?;
    }

    let located: Vec<(&Production, Pos)> = def
        .tables
        .iter()
        .zip(&map.productions)
        .flat_map(|(t, pos)| t.productions().iter().zip(pos.iter().copied()))
        .collect();

    // propagate kinds to a fixpoint
    loop {
        let mut changed = false;
        for (prod, pos) in &located {
            let vars = var_kinds(prod, &sigs);
            for t in &prod.successor {
                let kinds = t
                    .args
                    .iter()
                    .map(|a| infer(a, &vars, &def.scope))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|msg| ParseError::new(*pos, msg, &prod.label))?;
                changed |=
                    merge(&mut sigs, &t.symbol, &kinds).map_err(|msg| ParseError::new(*pos, msg, &prod.label))?;
            }
        }
        if !changed {
            break;
        }
    }

    let mut warnings = Vec::new();
    for (prod, pos) in &located {
        let vars = var_kinds(prod, &sigs);
        let err = |msg: String| ParseError::new(*pos, msg, &prod.label);
        if let Some(c) = &prod.condition {
            match infer(c, &vars, &def.scope).map_err(err)? {
                Kind::Bool | Kind::Unknown => {}
                k => return Err(err(format!("condition must be a comparison, found a {k:?} expression"))),
            }
        }
        for t in &prod.successor {
            for a in &t.args {
                match infer(a, &vars, &def.scope).map_err(err)? {
                    Kind::Point => {}
                    Kind::Bool => return Err(err(format!("`{}` cannot take a boolean parameter", t.symbol))),
                    Kind::Unknown if !matches!(a, Expr::Name(_)) => warnings.push(Warning {
                        line: pos.line,
                        column: pos.column,
                        message: format!(
                            "production `{}`: parameter kinds of `{a}` are unknown; affine sums are checked at run time",
                            prod.label
                        ),
                    }),
                    _ => continue,
                }
                for e in resolution_points(a) {
                    if infer(e, &vars, &def.scope).map_err(err)? != Kind::Point {
                        continue;
                    }
                    match point_sum(e, &vars) {
                        Some(sum) if sum.is_one() => {}
                        Some(sum) if sum.terms.is_empty() => {
                            return Err(err(format!(
                                "coefficients of `{e}` sum to {}, not 1",
                                sum.constant
                            )))
                        }
                        _ => warnings.push(Warning {
                            line: pos.line,
                            column: pos.column,
                            message: format!(
                                "production `{}`: cannot prove that the coefficients of `{e}` sum to 1; checked at run time",
                                prod.label
                            ),
                        }),
                    }
                }
            }
        }
    }
    Ok(warnings)
}

/// Records kinds for `symbol` with this arity; returns whether anything
/// new was learned.
fn merge(sigs: &mut Signatures, symbol: &str, kinds: &[Kind]) -> Result<bool, String> {
    let entry = sigs
        .entry((symbol.to_string(), kinds.len()))
        .or_insert_with(|| vec![Kind::Unknown; kinds.len()]);
    let mut changed = false;
    for (i, (slot, k)) in entry.iter_mut().zip(kinds).enumerate() {
        match (*slot, *k) {
            (_, Kind::Unknown) => {}
            (Kind::Unknown, k) => {
                *slot = k;
                changed = true;
            }
            (a, b) if a == b => {}
            (a, b) => {
                return Err(format!(
                    "parameter {} of `{symbol}` is used both as {a:?} and as {b:?}",
                    i + 1
                ))
            }
        }
    }
    Ok(changed)
}

fn var_kinds<'a>(prod: &'a Production, sigs: &Signatures) -> HashMap<&'a str, Kind> {
    let mut out = HashMap::new();
    for m in prod.left.iter().chain(&prod.strict).chain(&prod.right) {
        let kinds = sigs.get(&(m.symbol.clone(), m.vars.len()));
        for (i, v) in m.vars.iter().enumerate() {
            let k = kinds.and_then(|ks| ks.get(i)).copied().unwrap_or(Kind::Unknown);
            out.insert(v.as_str(), k);
        }
    }
    out
}

fn infer(e: &Expr, vars: &HashMap<&str, Kind>, scope: &Scope) -> Result<Kind, String> {
    use Kind::*;
    Ok(match e {
        Expr::Num(_) => Scalar,
        // constants are scalars
        Expr::Name(n) => vars.get(n.as_str()).copied().unwrap_or(Scalar),
        Expr::Tuple(items) => {
            for i in items {
                if matches!(infer(i, vars, scope)?, Point | Bool) {
                    return Err(format!("point coordinates must be scalars in `{e}`"));
                }
            }
            Point
        }
        Expr::Neg(inner) => match infer(inner, vars, scope)? {
            Bool => return Err(format!("cannot negate the boolean `{inner}`")),
            k => k,
        },
        Expr::Not(_) | Expr::Logic(..) => Bool,
        Expr::Binary(op, l, r) => {
            let (a, b) = (infer(l, vars, scope)?, infer(r, vars, scope)?);
            match (op, a, b) {
                (_, Bool, _) | (_, _, Bool) => return Err(format!("booleans cannot appear in `{e}`")),
                (_, Unknown, _) | (_, _, Unknown) => Unknown,
                (_, Scalar, Scalar) => Scalar,
                (BinOp::Add | BinOp::Sub, Point, Point) => Point,
                (BinOp::Mul, Scalar, Point) | (BinOp::Mul, Point, Scalar) | (BinOp::Div, Point, Scalar) => Point,
                (op, a, b) => {
                    return Err(format!(
                        "cannot apply `{}` to {a:?} and {b:?} in `{e}`",
                        binop_symbol(*op)
                    ))
                }
            }
        }
        Expr::Compare(_, l, r) => {
            for side in [l, r] {
                if matches!(infer(side, vars, scope)?, Point | Bool) {
                    return Err(format!("comparisons need scalars in `{e}`"));
                }
            }
            Bool
        }
        Expr::Call(name, args) => {
            let kinds = args
                .iter()
                .map(|a| infer(a, vars, scope))
                .collect::<Result<Vec<_>, _>>()?;
            if name == "project" && !scope.functions.contains_key(name) {
                if matches!(kinds[0], Scalar | Bool) {
                    return Err(format!("`project` needs a point in `{e}`"));
                }
                Point
            } else {
                if kinds.iter().any(|k| matches!(k, Point | Bool)) {
                    return Err(format!("`{name}` takes scalar arguments in `{e}`"));
                }
                Scalar
            }
        }
        Expr::Component(inner, _) => {
            if matches!(infer(inner, vars, scope)?, Scalar | Bool) {
                return Err(format!("coordinate access needs a point in `{e}`"));
            }
            Scalar
        }
    })
}

/// Sub-expressions that are turned into concrete points during evaluation:
/// the argument itself, plus arguments of `project` and coordinate access.
fn resolution_points(e: &Expr) -> Vec<&Expr> {
    fn walk<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
        match e {
            Expr::Call(name, args) if name == "project" => {
                out.push(&args[0]);
                walk(&args[0], out);
            }
            Expr::Component(inner, _) => {
                out.push(inner);
                walk(inner, out);
            }
            Expr::Num(_) | Expr::Name(_) => {}
            Expr::Tuple(items) | Expr::Call(_, items) => items.iter().for_each(|i| walk(i, out)),
            Expr::Neg(i) | Expr::Not(i) => walk(i, out),
            Expr::Binary(_, a, b) | Expr::Compare(_, a, b) | Expr::Logic(_, a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    let mut out = vec![e];
    walk(e, &mut out);
    out
}

/// `constant + sum(coef * name)`.
#[derive(Debug, Clone, PartialEq)]
struct Affine {
    constant: f64,
    terms: BTreeMap<String, f64>,
}

impl Affine {
    fn constant(c: f64) -> Self {
        Affine {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    fn name(n: &str) -> Self {
        Affine {
            constant: 0.0,
            terms: BTreeMap::from([(n.to_string(), 1.0)]),
        }
    }

    fn scaled(mut self, k: f64) -> Self {
        self.constant *= k;
        self.terms.values_mut().for_each(|v| *v *= k);
        self
    }

    fn plus(mut self, other: Affine, sign: f64) -> Self {
        self.constant += sign * other.constant;
        for (n, c) in other.terms {
            *self.terms.entry(n).or_insert(0.0) += sign * c;
        }
        self.terms.retain(|_, c| c.abs() > AFFINE_SUM_TOLERANCE);
        self
    }

    fn times(self, other: Affine) -> Option<Self> {
        if other.terms.is_empty() {
            Some(self.scaled(other.constant))
        } else if self.terms.is_empty() {
            Some(other.scaled(self.constant))
        } else {
            None
        }
    }

    fn is_one(&self) -> bool {
        (self.constant - 1.0).abs() <= AFFINE_SUM_TOLERANCE && self.terms.is_empty()
    }
}

fn scalar_form(e: &Expr, vars: &HashMap<&str, Kind>) -> Option<Affine> {
    match e {
        Expr::Num(v) => Some(Affine::constant(*v)),
        Expr::Name(n) if vars.get(n.as_str()).is_none_or(|k| *k == Kind::Scalar) => Some(Affine::name(n)),
        Expr::Neg(i) => Some(scalar_form(i, vars)?.scaled(-1.0)),
        Expr::Binary(BinOp::Add, a, b) => Some(scalar_form(a, vars)?.plus(scalar_form(b, vars)?, 1.0)),
        Expr::Binary(BinOp::Sub, a, b) => Some(scalar_form(a, vars)?.plus(scalar_form(b, vars)?, -1.0)),
        Expr::Binary(BinOp::Mul, a, b) => scalar_form(a, vars)?.times(scalar_form(b, vars)?),
        Expr::Binary(BinOp::Div, a, b) => {
            let d = scalar_form(b, vars)?;
            (d.terms.is_empty() && d.constant != 0.0).then_some(())?;
            Some(scalar_form(a, vars)?.scaled(1.0 / d.constant))
        }
        _ => None,
    }
}

/// Sum of the coefficients of a point-valued expression.
fn point_sum(e: &Expr, vars: &HashMap<&str, Kind>) -> Option<Affine> {
    let is_point = |x: &Expr| match x {
        Expr::Name(n) => vars.get(n.as_str()) == Some(&Kind::Point),
        Expr::Tuple(_) | Expr::Call(..) => true,
        _ => point_sum(x, vars).is_some(),
    };
    match e {
        Expr::Name(n) if vars.get(n.as_str()) == Some(&Kind::Point) => Some(Affine::constant(1.0)),
        Expr::Tuple(_) => Some(Affine::constant(1.0)),
        Expr::Call(name, _) if name == "project" => Some(Affine::constant(1.0)),
        Expr::Neg(i) => Some(point_sum(i, vars)?.scaled(-1.0)),
        Expr::Binary(BinOp::Add, a, b) => Some(point_sum(a, vars)?.plus(point_sum(b, vars)?, 1.0)),
        Expr::Binary(BinOp::Sub, a, b) => Some(point_sum(a, vars)?.plus(point_sum(b, vars)?, -1.0)),
        Expr::Binary(BinOp::Mul, a, b) => {
            if is_point(b) {
                scalar_form(a, vars)?.times(point_sum(b, vars)?)
            } else {
                point_sum(a, vars)?.times(scalar_form(b, vars)?)
            }
        }
        Expr::Binary(BinOp::Div, a, b) => {
            let d = scalar_form(b, vars)?;
            (d.terms.is_empty() && d.constant != 0.0).then_some(())?;
            Some(point_sum(a, vars)?.scaled(1.0 / d.constant))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_with_warnings;

    fn wrap(prods: &str) -> String {
        format!(
            "lsystem t {{ linear const t = 0.5; axiom: P((0, 0)) E P((1, 0)) A(1); table p {{ {prods} }} schedule 1 {{ p: 1; }} }}"
        )
    }

    #[test]
    fn symbolic_cancellation_proves_affinity() {
        let (_, w) = parse_with_warnings(&wrap("p: P(vl) < E > P(vr) -> P((1 - t) * vl + t * vr);")).unwrap();
        assert!(w.is_empty(), "{w:?}");
        let (_, w) = parse_with_warnings(&wrap("p: P(v) -> P(v + 1/2 * (v - v));")).unwrap();
        assert!(w.is_empty(), "{w:?}");
    }

    #[test]
    fn constant_non_affine_sum_is_an_error() {
        let err = parse_with_warnings(&wrap("p: P(vl) < E > P(vr) -> P(1/2 * vl + 3/4 * vr);")).unwrap_err();
        assert!(err.message.contains("sum to 1.25"), "{err}");
    }

    #[test]
    fn unprovable_sum_is_a_warning() {
        let (_, w) = parse_with_warnings(&wrap("p: A(a) > E -> A(a); q: P(v) > E P(vr) -> P(t * v);")).unwrap();
        assert_eq!(w.len(), 1);
        let (_, w) = parse_with_warnings(&wrap("p: A(a) P(v) -> P(a * v + a * v);")).unwrap();
        assert_eq!(w.len(), 1, "{w:?}");
    }

    #[test]
    fn kind_errors() {
        assert!(parse_with_warnings(&wrap("p: P(v) -> P(v + 1);")).is_err());
        assert!(parse_with_warnings(&wrap("p: P(v) : v < 1 -> P(v);")).is_err());
        assert!(parse_with_warnings(&wrap("p: A(a) -> P(a);")).is_err());
        assert!(parse_with_warnings(&wrap("p: A(a) : a + 1 -> A(a);")).is_err());
    }

    #[test]
    fn kinds_propagate_through_successors() {
        // Q never appears in the axiom; its parameter kind comes from p's successor
        let err = parse_with_warnings(&wrap("p: P(v) -> Q(v); q: Q(a) -> Q(2 * a);")).unwrap_err();
        assert!(err.message.contains("sum to 2"), "{err}");
    }
}
