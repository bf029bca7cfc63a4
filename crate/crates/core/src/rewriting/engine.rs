use thiserror::Error;

use super::module::{Module, ModuleString, ParamValue};
use super::production::{PatternModule, Production, Table};
use crate::dsl::expr::{eval_condition, eval_expr, Bindings, EvalError, Scope};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RewriteError {
    #[error("production `{label}`: {source}")]
    Eval {
        label: String,
        #[source]
        source: EvalError,
    },
    #[error("schedule references unknown table `{0}`")]
    UnknownTable(String),
}

/// Variables bound by a successful match, and the span of the strict
/// predecessor in the host string.
#[derive(Debug, Clone, PartialEq)]
pub struct Binding<'p> {
    pub vars: Vec<(&'p str, ParamValue)>,
    pub start: usize,
    pub len: usize,
}

impl Binding<'_> {
    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        Bindings::lookup(self, name)
    }
}

impl Bindings for Binding<'_> {
    fn lookup(&self, name: &str) -> Option<&ParamValue> {
        self.vars.iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }
}

/// Tries `prod` with its strict predecessor starting at `i`.
///
/// Contexts are read from `s` itself, wrapping around circular strings. A
/// context cut off by the end of a linear string fails the match, and so
/// does any arity mismatch. Only condition evaluation can fail with an
/// error.
pub fn match_at<'p>(
    s: &ModuleString,
    i: usize,
    prod: &'p Production,
    scope: &Scope,
) -> Result<Option<Binding<'p>>, RewriteError> {
    match_inner(s, i, prod, scope, true)
}

fn match_inner<'p>(
    s: &ModuleString,
    i: usize,
    prod: &'p Production,
    scope: &Scope,
    allow_wrap: bool,
) -> Result<Option<Binding<'p>>, RewriteError> {
    let k = prod.strict.len();
    if i >= s.len() || (!allow_wrap && i + k > s.len()) || k > s.len() {
        return Ok(None);
    }
    let mut vars = Vec::new();
    let left = -(prod.left.len() as isize);
    let matched = bind_word(s, i, left, &prod.left, &mut vars)
        && bind_word(s, i, 0, &prod.strict, &mut vars)
        && bind_word(s, i, k as isize, &prod.right, &mut vars);
    if !matched {
        return Ok(None);
    }
    let binding = Binding { vars, start: i, len: k };
    if let Some(cond) = &prod.condition {
        let holds = eval_condition(cond, &binding, scope).map_err(|source| RewriteError::Eval {
            label: prod.label.clone(),
            source,
        })?;
        if !holds {
            return Ok(None);
        }
    }
    Ok(Some(binding))
}

fn bind_word<'p>(
    s: &ModuleString,
    i: usize,
    offset: isize,
    word: &'p [PatternModule],
    vars: &mut Vec<(&'p str, ParamValue)>,
) -> bool {
    for (j, pat) in word.iter().enumerate() {
        let Some(idx) = s.neighbor(i, offset + j as isize) else {
            return false;
        };
        let m = &s.modules[idx];
        if m.symbol != pat.symbol || m.params.len() != pat.vars.len() {
            return false;
        }
        vars.extend(pat.vars.iter().map(String::as_str).zip(m.params.iter().copied()));
    }
    true
}

fn instantiate(prod: &Production, binding: &Binding, scope: &Scope, out: &mut Vec<Module>) -> Result<(), RewriteError> {
    for t in &prod.successor {
        let params = t
            .args
            .iter()
            .map(|a| eval_expr(a, binding, scope))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|source| RewriteError::Eval {
                label: prod.label.clone(),
                source,
            })?;
        out.push(Module::new(t.symbol.clone(), params));
    }
    Ok(())
}

/// One parallel derivation step.
///
/// Positions are scanned from index 0 of the stored order. At each position
/// the first matching production is applied and the scan resumes after its
/// strict predecessor; unmatched modules are copied. All contexts are read
/// from `s`, never from the output being built. A strict predecessor may
/// not wrap past the end of a circular string here, so no module is
/// consumed twice.
pub fn derive_step(s: &ModuleString, table: &Table, scope: &Scope) -> Result<ModuleString, RewriteError> {
    let mut out = Vec::with_capacity(s.len());
    let mut i = 0;
    'scan: while i < s.len() {
        for prod in table.productions() {
            if let Some(binding) = match_inner(s, i, prod, scope, false)? {
                instantiate(prod, &binding, scope, &mut out)?;
                i += binding.len;
                continue 'scan;
            }
        }
        out.push(s.modules[i].clone());
        i += 1;
    }
    Ok(ModuleString::new(out, s.topology))
}

/// Which tables run, how often, and how many times the whole sequence
/// repeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub steps: Vec<(String, usize)>,
    pub cycles: usize,
}

impl Schedule {
    pub fn new(steps: Vec<(String, usize)>, cycles: usize) -> Self {
        Schedule { steps, cycles }
    }

    /// A single table applied once.
    pub fn single(table: &str) -> Self {
        Schedule::new(vec![(table.to_string(), 1)], 1)
    }

    pub fn steps_per_cycle(&self) -> usize {
        self.steps.iter().map(|(_, n)| n).sum()
    }

    pub fn total_steps(&self) -> usize {
        self.steps_per_cycle() * self.cycles
    }

    /// Table names in application order, cycling forever.
    pub fn sequence(&self) -> impl Iterator<Item = &str> {
        self.steps
            .iter()
            .flat_map(|(t, n)| std::iter::repeat_n(t.as_str(), *n))
            .cycle()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub step: usize,
    /// `None` for the axiom.
    pub table: Option<String>,
    pub word: ModuleString,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub result: ModuleString,
    /// Axiom followed by every intermediate word, when requested.
    pub trace: Option<Vec<TraceStep>>,
}

fn lookup_table<'a>(tables: &'a [Table], name: &str) -> Result<&'a Table, RewriteError> {
    tables
        .iter()
        .find(|t| t.name == name)
        .ok_or_else(|| RewriteError::UnknownTable(name.to_string()))
}

/// Runs `total` steps following the schedule's table sequence, wrapping
/// into further cycles as needed.
pub fn derive_steps(
    axiom: &ModuleString,
    sched: &Schedule,
    total: usize,
    tables: &[Table],
    scope: &Scope,
    keep_trace: bool,
) -> Result<Derivation, RewriteError> {
    for (name, _) in &sched.steps {
        lookup_table(tables, name)?;
    }
    let mut trace = keep_trace.then(|| {
        vec![TraceStep {
            step: 0,
            table: None,
            word: axiom.clone(),
        }]
    });
    let mut current = axiom.clone();
    if sched.steps_per_cycle() == 0 {
        return Ok(Derivation { result: current, trace });
    }
    for (step, name) in sched.sequence().take(total).enumerate() {
        current = derive_step(&current, lookup_table(tables, name)?, scope)?;
        if let Some(trace) = trace.as_mut() {
            trace.push(TraceStep {
                step: step + 1,
                table: Some(name.to_string()),
                word: current.clone(),
            });
        }
    }
    Ok(Derivation { result: current, trace })
}

/// Applies the schedule: each `(table, count)` in order, the whole list
/// repeated `cycles` times.
pub fn derive(
    s: &ModuleString,
    sched: &Schedule,
    tables: &[Table],
    scope: &Scope,
    keep_trace: bool,
) -> Result<Derivation, RewriteError> {
    derive_steps(s, sched, sched.total_steps(), tables, scope, keep_trace)
}

/// Applies each interpretation pass once, in order.
pub fn interpret<'a>(
    s: &ModuleString,
    passes: impl IntoIterator<Item = &'a Table>,
    scope: &Scope,
) -> Result<ModuleString, RewriteError> {
    passes
        .into_iter()
        .try_fold(s.clone(), |acc, pass| derive_step(&acc, pass, scope))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::Expr;
    use crate::geometry::Point;
    use crate::rewriting::TemplateModule;

    fn pat(sym: &str, vars: &[&str]) -> PatternModule {
        PatternModule::new(sym, vars)
    }

    fn pt(x: f64, y: f64) -> Point {
        Point::new2(x, y).unwrap()
    }

    fn scalar_mod(sym: &str, vals: &[f64]) -> Module {
        Module::new(sym, vals.iter().map(|v| ParamValue::Scalar(*v)).collect())
    }

    fn two_sided_production() -> Production {
        Production::new(
            "p3",
            vec![pat("B", &["x", "y"])],
            vec![
                TemplateModule::new("A", vec![Expr::name("w") + Expr::name("x")]),
                TemplateModule::new("A", vec![Expr::name("y") + Expr::name("z")]),
            ],
        )
        .with_left(vec![pat("A", &["w"])])
        .with_right(vec![pat("A", &["z"])])
    }

    #[test]
    fn two_sided_context_binding() {
        let s = ModuleString::linear(vec![
            scalar_mod("A", &[1.5]),
            scalar_mod("B", &[2.0, 3.0]),
            scalar_mod("A", &[4.5]),
            scalar_mod("C", &[1.0]),
        ]);
        let p3 = two_sided_production();
        let b = match_at(&s, 1, &p3, &Scope::default()).unwrap().unwrap();
        assert_eq!(b.get("w"), Some(&ParamValue::Scalar(1.5)));
        assert_eq!(b.get("x"), Some(&ParamValue::Scalar(2.0)));
        assert_eq!(b.get("y"), Some(&ParamValue::Scalar(3.0)));
        assert_eq!(b.get("z"), Some(&ParamValue::Scalar(4.5)));
        assert_eq!((b.start, b.len), (1, 1));
        // wrong position, wrong arity
        assert_eq!(
            match_at(&s, 0, &two_sided_production(), &Scope::default()).unwrap(),
            None
        );
        let s2 = ModuleString::linear(vec![
            scalar_mod("A", &[1.5]),
            scalar_mod("B", &[2.0]),
            scalar_mod("A", &[4.5]),
        ]);
        assert_eq!(
            match_at(&s2, 1, &two_sided_production(), &Scope::default()).unwrap(),
            None
        );
    }

    #[test]
    fn linear_boundary_truncates_context() {
        let s = ModuleString::linear(vec![Module::point("P", pt(0.0, 0.0)), Module::point("P", pt(1.0, 0.0))]);
        let prod = Production::new("p", vec![pat("P", &["v"])], vec![]).with_right(vec![pat("P", &["vr"])]);
        assert!(match_at(&s, 0, &prod, &Scope::default()).unwrap().is_some());
        assert_eq!(match_at(&s, 1, &prod, &Scope::default()).unwrap(), None);
    }

    #[test]
    fn circular_wrap() {
        let (a, b) = (pt(0.0, 0.0), pt(5.0, 1.0));
        let s = ModuleString::circular(vec![
            Module::point("P", a),
            Module::bare("E"),
            Module::point("P", b),
            Module::bare("E"),
        ]);
        let prod = Production::new("h", vec![pat("E", &[])], vec![])
            .with_left(vec![pat("P", &["vl"])])
            .with_right(vec![pat("P", &["vr"])]);
        let m = match_at(&s, 3, &prod, &Scope::default()).unwrap().unwrap();
        assert_eq!(m.get("vl"), Some(&ParamValue::Point(b)));
        assert_eq!(m.get("vr"), Some(&ParamValue::Point(a)));
    }

    #[test]
    fn condition_type_error_surfaces() {
        let s = ModuleString::linear(vec![Module::point("P", pt(0.0, 0.0))]);
        let prod = Production::new("bad", vec![pat("P", &["v"])], vec![]).with_condition(Expr::compare(
            crate::dsl::CmpOp::Lt,
            Expr::name("v"),
            1.0.into(),
        ));
        assert!(matches!(
            match_at(&s, 0, &prod, &Scope::default()),
            Err(RewriteError::Eval { .. })
        ));
    }

    #[test]
    fn empty_table_is_identity() {
        let s = ModuleString::circular(vec![scalar_mod("A", &[1.0]), Module::bare("E")]);
        let t = Table::new("none", vec![]).unwrap();
        assert_eq!(derive_step(&s, &t, &Scope::default()).unwrap(), s);
    }

    #[test]
    fn contexts_read_the_predecessor() {
        // P -> Q everywhere, while X looks at its P neighbors in the same step.
        let t = Table::new(
            "t",
            vec![
                Production::new(
                    "x",
                    vec![pat("X", &[])],
                    vec![TemplateModule::new("Y", vec![Expr::name("a") + Expr::name("b")])],
                )
                .with_left(vec![pat("P", &["a"])])
                .with_right(vec![pat("P", &["b"])]),
                Production::new(
                    "p",
                    vec![pat("P", &["v"])],
                    vec![TemplateModule::new("Q", vec![Expr::name("v")])],
                ),
            ],
        )
        .unwrap();
        let s = ModuleString::linear(vec![
            scalar_mod("P", &[1.0]),
            Module::bare("X"),
            scalar_mod("P", &[2.0]),
        ]);
        let out = derive_step(&s, &t, &Scope::default()).unwrap();
        assert_eq!(out.to_string(), "Q(1) Y(3) Q(2)");
    }

    #[test]
    fn erasure_does_not_disturb_neighbors() {
        let t = Table::new(
            "t",
            vec![
                Production::new(
                    "keep",
                    vec![pat("A", &["x"])],
                    vec![TemplateModule::new("A", vec![Expr::name("x") + Expr::name("y")])],
                )
                .with_right(vec![pat("A", &["y"])]),
                Production::new("drop", vec![pat("A", &["x"])], vec![]),
            ],
        )
        .unwrap();
        let s = ModuleString::linear(vec![
            scalar_mod("A", &[1.0]),
            scalar_mod("A", &[2.0]),
            scalar_mod("A", &[4.0]),
        ]);
        let out = derive_step(&s, &t, &Scope::default()).unwrap();
        assert_eq!(out.to_string(), "A(3) A(6)");
    }

    #[test]
    fn pseudo_production_consumes_its_span() {
        let t = Table::new(
            "t",
            vec![Production::new(
                "ab",
                vec![pat("A", &[]), pat("B", &[])],
                vec![TemplateModule::new("C", vec![])],
            )],
        )
        .unwrap();
        let s = ModuleString::linear(
            ["A", "B", "B", "A", "B", "A"]
                .iter()
                .map(|s| Module::bare(*s))
                .collect(),
        );
        assert_eq!(derive_step(&s, &t, &Scope::default()).unwrap().to_string(), "C B C A");
        // no wrap past the stored end on circular strings
        let c = ModuleString::circular(vec![Module::bare("B"), Module::bare("A")]);
        assert_eq!(derive_step(&c, &t, &Scope::default()).unwrap(), c);
        assert!(match_at(&c, 1, &t.productions()[0], &Scope::default())
            .unwrap()
            .is_some());
    }

    #[test]
    fn schedule_and_trace() {
        let grow = Table::new(
            "g",
            vec![Production::new(
                "g",
                vec![pat("A", &[])],
                vec![TemplateModule::new("A", vec![]), TemplateModule::new("B", vec![])],
            )],
        )
        .unwrap();
        let shrink = Table::new(
            "s",
            vec![Production::new(
                "s",
                vec![pat("B", &[])],
                vec![TemplateModule::new("C", vec![])],
            )],
        )
        .unwrap();
        let tables = [grow, shrink];
        let sched = Schedule::new(vec![("g".into(), 2), ("s".into(), 1)], 2);
        let d = derive(
            &ModuleString::linear(vec![Module::bare("A")]),
            &sched,
            &tables,
            &Scope::default(),
            true,
        )
        .unwrap();
        assert_eq!(d.result.to_string(), "A C C C C");
        let trace = d.trace.unwrap();
        assert_eq!(trace.len(), 1 + sched.total_steps());
        let names: Vec<_> = trace.iter().map(|s| s.table.as_deref().unwrap_or("axiom")).collect();
        assert_eq!(names, ["axiom", "g", "g", "s", "g", "g", "s"]);

        let bad = Schedule::single("missing");
        assert_eq!(
            derive(&d.result, &bad, &tables, &Scope::default(), false),
            Err(RewriteError::UnknownTable("missing".into()))
        );
    }
}
