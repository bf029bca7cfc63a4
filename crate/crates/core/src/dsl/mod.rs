//! Textual definition language for L-systems.
//!
//! ```text
//! lsystem worked_example {
//!     linear
//!     axiom: A(1.5) B(2, 3) A(4.5) C(1);
//!     table main {
//!         p1: A(x) : x <= 2 -> A(2 * x + 1);
//!         p2: A(x) : x > 2 -> B(2 * x + 1);
//!         p3: A(w) < B(x, y) > A(z) -> A(w + x) A(y + z);
//!     }
//!     schedule 1 {
//!         main: 1;
//!     }
//! }
//! ```
//!
//! Grammar:
//!
//! ```text
//! definition := "lsystem" IDENT "{" header axiom table+ interpret? schedule "}"
//! header     := ("circular" | "linear")? (const | fn)*
//! const      := "const" IDENT "=" expr ";"
//! fn         := "fn" IDENT "(" IDENT ("," IDENT)* ")" "=" expr ";"
//! axiom      := "axiom" ":" word ";"
//! table      := "table" IDENT "{" production* "}"
//! production := LABEL ":" (pattern "<")? pattern (">" pattern)? (":" expr)? "->" template ";"
//! pattern    := (IDENT ("(" IDENT ("," IDENT)* ")")?)+
//! template   := "eps" | (IDENT ("(" expr ("," expr)* ")")?)*
//! interpret  := "interpret" IDENT ("," IDENT)* ";"
//! schedule   := "schedule" expr "{" (IDENT ":" expr ";")* "}"
//! ```
//!
//! Expressions support `+ - * /`, comparisons (`< <= > >= == != =`),
//! `&& || !`, point literals `(x, y[, z])`, coordinate access `v.x`, the
//! builtins `min max abs sqrt project`, and user functions declared with
//! `fn`. The schedule's leading expression is the number of cycles. Line
//! comments start with `//`.

mod check;
mod definition;
pub mod expr;
pub mod format;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

pub use definition::{DefinitionError, LSystemDefinition, ScheduleSpec};
pub use expr::{eval_expr, Axis, BinOp, CmpOp, EvalError, Expr, Function, LogicOp, Scope};
pub use format::{format_definition, format_word};
pub use lexer::Pos;
pub use parser::{parse, parse_with_warnings, parse_word};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{line}:{column}: {message}{}", token_suffix(.token))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

fn token_suffix(token: &str) -> String {
    if token.is_empty() {
        String::new()
    } else {
        format!(" (at `{token}`)")
    }
}

impl ParseError {
    pub(crate) fn new(pos: Pos, message: impl Into<String>, token: &str) -> Self {
        ParseError {
            line: pos.line,
            column: pos.column,
            message: message.into(),
            token: token.to_string(),
        }
    }
}

/// A problem that does not stop the definition from loading, e.g. an
/// affine combination whose coefficient sum can only be checked at run time.
#[derive(Debug, Clone, PartialEq)]
pub struct Warning {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: warning: {}", self.line, self.column, self.message)
    }
}
