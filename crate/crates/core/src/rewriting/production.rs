use std::collections::HashSet;

use thiserror::Error;

use crate::dsl::Expr;

/// One position of a pattern word: a symbol and the variables its
/// parameters bind to. A module matches only if its arity equals the
/// number of variables.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternModule {
    pub symbol: String,
    pub vars: Vec<String>,
}

impl PatternModule {
    pub fn new(symbol: &str, vars: &[&str]) -> Self {
        PatternModule {
            symbol: symbol.to_string(),
            vars: vars.iter().map(|v| v.to_string()).collect(),
        }
    }
}

/// One module of a successor, with an expression per parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateModule {
    pub symbol: String,
    pub args: Vec<Expr>,
}

impl TemplateModule {
    pub fn new(symbol: &str, args: Vec<Expr>) -> Self {
        TemplateModule {
            symbol: symbol.to_string(),
            args,
        }
    }
}

/// `label : left < strict > right : condition -> successor`.
///
/// A strict predecessor longer than one module makes this a
/// pseudo-production. An empty successor erases the predecessor.
#[derive(Debug, Clone, PartialEq)]
pub struct Production {
    pub label: String,
    pub left: Vec<PatternModule>,
    pub strict: Vec<PatternModule>,
    pub right: Vec<PatternModule>,
    pub condition: Option<Expr>,
    pub successor: Vec<TemplateModule>,
}

impl Production {
    pub fn new(label: &str, strict: Vec<PatternModule>, successor: Vec<TemplateModule>) -> Self {
        Production {
            label: label.to_string(),
            left: Vec::new(),
            strict,
            right: Vec::new(),
            condition: None,
            successor,
        }
    }

    pub fn with_left(mut self, left: Vec<PatternModule>) -> Self {
        self.left = left;
        self
    }

    pub fn with_right(mut self, right: Vec<PatternModule>) -> Self {
        self.right = right;
        self
    }

    pub fn with_condition(mut self, condition: Expr) -> Self {
        self.condition = Some(condition);
        self
    }

    /// Pattern variables in binding order: left context, strict
    /// predecessor, right context.
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.left
            .iter()
            .chain(&self.strict)
            .chain(&self.right)
            .flat_map(|m| m.vars.iter().map(String::as_str))
    }

    pub fn is_pseudo(&self) -> bool {
        self.strict.len() > 1
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TableError {
    #[error("duplicate production label `{label}` in table `{table}`")]
    DuplicateLabel { table: String, label: String },
    #[error("production `{0}` has an empty strict predecessor")]
    EmptyPredecessor(String),
    #[error("variable `{var}` is bound twice in production `{label}`")]
    DuplicateVariable { label: String, var: String },
}

/// An ordered group of productions. Order matters: the first matching
/// production wins.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    productions: Vec<Production>,
}

impl Table {
    pub fn new(name: &str, productions: Vec<Production>) -> Result<Self, TableError> {
        let mut labels = HashSet::new();
        for p in &productions {
            if !labels.insert(p.label.as_str()) {
                return Err(TableError::DuplicateLabel {
                    table: name.to_string(),
                    label: p.label.clone(),
                });
            }
            if p.strict.is_empty() {
                return Err(TableError::EmptyPredecessor(p.label.clone()));
            }
            let mut seen = HashSet::new();
            if let Some(v) = p.variables().find(|v| !seen.insert(*v)) {
                return Err(TableError::DuplicateVariable {
                    label: p.label.clone(),
                    var: v.to_string(),
                });
            }
        }
        Ok(Table {
            name: name.to_string(),
            productions,
        })
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }
}
