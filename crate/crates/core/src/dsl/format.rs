//! Rendering of words, expressions and whole definitions back to text.

use std::fmt::{self, Write};

use super::definition::LSystemDefinition;
use super::expr::{binop_symbol, BinOp, CmpOp, Expr, LogicOp};
use crate::rewriting::{ModuleString, PatternModule, Production, Topology};

/// `SYMBOL(p1,p2,...)` separated by spaces; numbers use the shortest
/// representation that parses back to the same value.
pub fn format_word(s: &ModuleString) -> String {
    s.to_string()
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Logic(LogicOp::Or, ..) => 1,
        Expr::Logic(LogicOp::And, ..) => 2,
        Expr::Compare(..) => 3,
        Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 4,
        Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 5,
        Expr::Neg(_) | Expr::Not(_) => 6,
        Expr::Component(..) => 7,
        Expr::Num(_) | Expr::Name(_) | Expr::Tuple(_) | Expr::Call(..) => 8,
    }
}

fn cmp_symbol(op: CmpOp) -> &'static str {
    match op {
        CmpOp::Lt => "<",
        CmpOp::Le => "<=",
        CmpOp::Gt => ">",
        CmpOp::Ge => ">=",
        CmpOp::Eq => "==",
        CmpOp::Ne => "!=",
    }
}

pub(crate) fn write_expr(f: &mut impl Write, e: &Expr) -> fmt::Result {
    write_prec(f, e, 0)
}

// Right operands get one level more than their parent so the printed text
// parses back to the same tree, not just an equal value.
fn write_prec(f: &mut impl Write, e: &Expr, min: u8) -> fmt::Result {
    let prec = precedence(e);
    if prec < min {
        f.write_char('(')?;
    }
    match e {
        Expr::Num(v) => write!(f, "{v}")?,
        Expr::Name(n) => f.write_str(n)?,
        Expr::Tuple(items) => {
            f.write_char('(')?;
            write_list(f, items)?;
            f.write_char(')')?;
        }
        Expr::Call(name, args) => {
            write!(f, "{name}(")?;
            write_list(f, args)?;
            f.write_char(')')?;
        }
        Expr::Neg(inner) => {
            f.write_char('-')?;
            write_prec(f, inner, 6)?;
        }
        Expr::Not(inner) => {
            f.write_char('!')?;
            write_prec(f, inner, 6)?;
        }
        Expr::Component(inner, axis) => {
            write_prec(f, inner, 8)?;
            write!(f, ".{}", axis.name())?;
        }
        Expr::Binary(op, l, r) => {
            write_prec(f, l, prec)?;
            write!(f, " {} ", binop_symbol(*op))?;
            write_prec(f, r, prec + 1)?;
        }
        Expr::Compare(op, l, r) => {
            write_prec(f, l, 4)?;
            write!(f, " {} ", cmp_symbol(*op))?;
            write_prec(f, r, 4)?;
        }
        Expr::Logic(op, l, r) => {
            write_prec(f, l, prec)?;
            f.write_str(if *op == LogicOp::And { " && " } else { " || " })?;
            write_prec(f, r, prec + 1)?;
        }
    }
    if prec < min {
        f.write_char(')')?;
    }
    Ok(())
}

fn write_list(f: &mut impl Write, items: &[Expr]) -> fmt::Result {
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write_expr(f, e)?;
    }
    Ok(())
}

fn write_pattern(f: &mut impl Write, word: &[PatternModule]) -> fmt::Result {
    for (i, m) in word.iter().enumerate() {
        if i > 0 {
            f.write_char(' ')?;
        }
        f.write_str(&m.symbol)?;
        if !m.vars.is_empty() {
            write!(f, "({})", m.vars.join(", "))?;
        }
    }
    Ok(())
}

fn write_production(f: &mut impl Write, p: &Production) -> fmt::Result {
    write!(f, "{}: ", p.label)?;
    if !p.left.is_empty() {
        write_pattern(f, &p.left)?;
        f.write_str(" < ")?;
    }
    write_pattern(f, &p.strict)?;
    if !p.right.is_empty() {
        f.write_str(" > ")?;
        write_pattern(f, &p.right)?;
    }
    if let Some(c) = &p.condition {
        f.write_str(" : ")?;
        write_expr(f, c)?;
    }
    f.write_str(" ->")?;
    if p.successor.is_empty() {
        f.write_str(" eps")?;
    }
    for t in &p.successor {
        write!(f, " {}", t.symbol)?;
        if !t.args.is_empty() {
            f.write_char('(')?;
            write_list(f, &t.args)?;
            f.write_char(')')?;
        }
    }
    f.write_char(';')
}

/// Renders a definition in the source language.
pub fn format_definition(def: &LSystemDefinition) -> String {
    let mut out = String::new();
    write_definition(&mut out, def).expect("writing to a String cannot fail");
    out
}

fn write_definition(f: &mut String, def: &LSystemDefinition) -> fmt::Result {
    writeln!(f, "lsystem {} {{", def.name)?;
    let topology = match def.topology {
        Topology::Linear => "linear",
        Topology::Circular => "circular",
    };
    writeln!(f, "    {topology}")?;
    for (name, value) in &def.scope.constants {
        f.write_str("    const ")?;
        f.write_str(name)?;
        f.write_str(" = ")?;
        write_expr(f, &Expr::literal(&(*value).into()))?;
        f.write_str(";\n")?;
    }
    for (name, func) in &def.scope.functions {
        write!(f, "    fn {name}({}) = ", func.params.join(", "))?;
        write_expr(f, &func.body)?;
        f.write_str(";\n")?;
    }
    f.write_str("\n    axiom:")?;
    for m in def.axiom.iter() {
        write!(f, " {}", m.symbol)?;
        if !m.params.is_empty() {
            let args: Vec<Expr> = m.params.iter().map(Expr::literal).collect();
            f.write_char('(')?;
            write_list(f, &args)?;
            f.write_char(')')?;
        }
    }
    f.write_str(";\n")?;
    for t in &def.tables {
        writeln!(f, "\n    table {} {{", t.name)?;
        for p in t.productions() {
            f.write_str("        ")?;
            write_production(f, p)?;
            f.write_char('\n')?;
        }
        f.write_str("    }\n")?;
    }
    f.write_char('\n')?;
    if !def.interpretation.is_empty() {
        writeln!(f, "    interpret {};", def.interpretation.join(", "))?;
    }
    f.write_str("    schedule ")?;
    write_expr(f, &def.schedule.cycles)?;
    f.write_str(" {\n")?;
    for (t, n) in &def.schedule.steps {
        write!(f, "        {t}: ")?;
        write_expr(f, n)?;
        f.write_str(";\n")?;
    }
    f.write_str("    }\n}\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(e: &Expr) -> String {
        let mut s = String::new();
        write_expr(&mut s, e).unwrap();
        s
    }

    #[test]
    fn minimal_parentheses() {
        let (a, b, c) = (Expr::name("a"), Expr::name("b"), Expr::name("c"));
        assert_eq!(show(&(a.clone() + b.clone() * c.clone())), "a + b * c");
        assert_eq!(show(&((a.clone() + b.clone()) * c.clone())), "(a + b) * c");
        assert_eq!(show(&(a.clone() - (b.clone() - c.clone()))), "a - (b - c)");
        assert_eq!(show(&(Expr::num(1.0) / 4.0 * a.clone())), "1 / 4 * a");
        assert_eq!(show(&(-(a.clone() + b))), "-(a + b)");
        assert_eq!(
            show(&Expr::tuple(vec![a.clone(), 0.5.into()]).component(super::super::Axis::X)),
            "(a, 0.5).x"
        );
        assert_eq!(show(&Expr::compare(CmpOp::Le, a, 2.0.into())), "a <= 2");
    }
}
