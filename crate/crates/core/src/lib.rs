//! fdplan solves functional decomposition problems from engineering design by
//! casting them as STRIPS-style planning problems over a catalog of thirty
//! general engineering functions and searching plan space with a
//! partial-order causal-link planner.
//!
//! The pieces:
//!
//! - [`model`]: objects, allocated-entity atoms, states, action schemas,
//!   grounding, and the monotone/consume transition semantics.
//! - [`catalog`]: the built-in thirty-function catalog, user catalogs as
//!   JSON, achiever lookup, and emission as a planning-domain file.
//! - [`pddl`]: parser and printer for the typed-STRIPS subset used for
//!   domain and problem files.
//! - [`pop`]: the partial-order planner with agenda, ordering constraints,
//!   causal links and threat protection, plus the JSON plan document.
//! - [`validate`]: independent oracles: a sequential executor, an
//!   exhaustive linear-extension checker and a breadth-first planner.

pub mod catalog;
pub mod model;
pub mod pddl;
pub mod pop;
pub mod validate;

pub use catalog::{built_in_catalog, FunctionCatalog};
pub use model::{Problem, Semantics};
pub use pop::{solve, PartialPlan, SolveError, SolverConfig};
