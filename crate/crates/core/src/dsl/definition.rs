use thiserror::Error;

use super::expr::{eval_scalar, EvalError, Expr, NoVars, Scope};
use crate::rewriting::{self, Derivation, ModuleString, RewriteError, Schedule, Table, Topology};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DefinitionError {
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("unknown table `{0}`")]
    UnknownTable(String),
    #[error("schedule count for `{what}` must be a non-negative integer, got {value}")]
    BadCount { what: String, value: f64 },
    #[error("schedule count for `{what}`: {source}")]
    Count {
        what: String,
        #[source]
        source: EvalError,
    },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// Schedule as written: counts are expressions over the constants, so
/// overriding a constant such as `n` changes the schedule too.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleSpec {
    pub steps: Vec<(String, Expr)>,
    pub cycles: Expr,
}

/// A complete L-system: axiom, tables, interpretation passes and schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct LSystemDefinition {
    pub name: String,
    pub topology: Topology,
    pub scope: Scope,
    pub axiom: ModuleString,
    pub tables: Vec<Table>,
    /// Names of the tables applied once each, in order, after derivation.
    pub interpretation: Vec<String>,
    pub schedule: ScheduleSpec,
}

fn count(e: &Expr, what: &str, scope: &Scope) -> Result<usize, DefinitionError> {
    let v = eval_scalar(e, &NoVars, scope).map_err(|source| DefinitionError::Count {
        what: what.to_string(),
        source,
    })?;
    if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(DefinitionError::BadCount {
            what: what.to_string(),
            value: v,
        });
    }
    Ok(v as usize)
}

impl LSystemDefinition {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.scope.constants.get(name).copied()
    }

    /// Overrides a declared constant.
    pub fn set_constant(&mut self, name: &str, value: f64) -> Result<(), DefinitionError> {
        match self.scope.constants.get_mut(name) {
            Some(c) => {
                *c = value;
                Ok(())
            }
            None => Err(DefinitionError::UnknownConstant(name.to_string())),
        }
    }

    /// Replaces the axiom; its topology becomes the definition's topology.
    pub fn set_axiom(&mut self, axiom: ModuleString) {
        self.topology = axiom.topology;
        self.axiom = axiom;
    }

    pub fn set_cycles(&mut self, cycles: usize) {
        self.schedule.cycles = Expr::Num(cycles as f64);
    }

    /// Evaluates the schedule counts against the current constants.
    pub fn schedule(&self) -> Result<Schedule, DefinitionError> {
        let steps = self
            .schedule
            .steps
            .iter()
            .map(|(t, e)| {
                if self.table(t).is_none() {
                    return Err(DefinitionError::UnknownTable(t.clone()));
                }
                Ok((t.clone(), count(e, t, &self.scope)?))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let cycles = count(&self.schedule.cycles, "cycles", &self.scope)?;
        Ok(Schedule::new(steps, cycles))
    }

    /// Runs the full schedule from the axiom.
    pub fn derive(&self, keep_trace: bool) -> Result<Derivation, DefinitionError> {
        let sched = self.schedule()?;
        Ok(rewriting::derive(
            &self.axiom,
            &sched,
            &self.tables,
            &self.scope,
            keep_trace,
        )?)
    }

    /// Runs exactly `steps` derivation steps, following the schedule's table
    /// sequence and wrapping around into further cycles as needed.
    pub fn derive_steps(&self, steps: usize, keep_trace: bool) -> Result<Derivation, DefinitionError> {
        let sched = self.schedule()?;
        Ok(rewriting::derive_steps(
            &self.axiom,
            &sched,
            steps,
            &self.tables,
            &self.scope,
            keep_trace,
        )?)
    }

    pub fn interpretation_passes(&self) -> Result<Vec<&Table>, DefinitionError> {
        self.interpretation
            .iter()
            .map(|n| self.table(n).ok_or_else(|| DefinitionError::UnknownTable(n.clone())))
            .collect()
    }

    /// Applies the interpretation passes to a derived word.
    pub fn interpret(&self, s: &ModuleString) -> Result<ModuleString, DefinitionError> {
        let passes = self.interpretation_passes()?;
        Ok(rewriting::interpret(s, passes, &self.scope)?)
    }
}
