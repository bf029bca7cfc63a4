//! The curve catalog: every curve algorithm as a built-in L-system, with
//! independent closed-form oracles to check them against.

mod catalog;
mod oracle;
mod polyline;
mod state;

use thiserror::Error;

use crate::dsl::{DefinitionError, ParseError};
use crate::geometry::GeometryError;

pub use catalog::{run_catalog, run_definition, sweep_locus, sweep_parameters, CatalogId, CatalogParams, CatalogRun};
pub use oracle::{bezier_oracle, bspline_oracle, rational_bezier_oracle, KnotLayout};
pub use polyline::{extract_polyline, Polyline};
pub use state::{state_transition, VertexState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("`{entry}` needs {expected} control points, got {found}")]
    PolygonSize {
        entry: &'static str,
        expected: String,
        found: usize,
    },
    #[error("{0} weights for {1} control points")]
    WeightCount(usize, usize),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("`{0}` does not evaluate single curve points")]
    NotAPointEntry(&'static str),
    #[error("vertex state must be 0, 1 or 2, got {0}")]
    State(u8),
    #[error("{0}")]
    Domain(String),
    #[error("cannot extract a segment from `{0}`")]
    Extraction(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Definition(#[from] DefinitionError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
