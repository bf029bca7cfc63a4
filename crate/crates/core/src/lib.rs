//! Parametric, context-sensitive L-systems with affine geometry, and a
//! catalog of classic curve algorithms written as L-systems: Chaikin corner
//! cutting, Lane-Riesenfeld B-spline refinement, de Casteljau evaluation
//! and subdivision of Bézier curves, and their rational variants.
//!
//! The crate is split into
//! - [`geometry`]: points, affine combinations, rational lifting/projection;
//! - [`rewriting`]: module strings and the parallel rewriting engine;
//! - [`dsl`]: the `.lsys` definition language and expression evaluation;
//! - [`curves`]: the built-in catalog, analytic oracles and polylines;
//! - [`verify`]: the oracle-equivalence property suite.

pub mod curves;
pub mod dsl;
pub mod geometry;
pub mod rewriting;
pub mod verify;

pub use dsl::{parse, LSystemDefinition, ParseError};
pub use geometry::{GeometryError, Point, WeightedPoint};
pub use rewriting::{Module, ModuleString, ParamValue, Topology};
