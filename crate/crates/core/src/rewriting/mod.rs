//! Parallel, parametric, context-sensitive rewriting of module strings.

mod engine;
mod module;
mod production;

pub use engine::{
    derive, derive_step, derive_steps, interpret, match_at, Binding, Derivation, RewriteError, Schedule, TraceStep,
};
pub use module::{Module, ModuleString, ParamValue, Topology};
pub use production::{PatternModule, Production, Table, TableError, TemplateModule};
