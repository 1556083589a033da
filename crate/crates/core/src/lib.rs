//! Node-weighted Steiner optimization.
//!
//! * [`graph`]: node-weighted graphs, cost overrides, shortest paths.
//! * [`pcsf`]: primal-dual prize-collecting Steiner forest with dual certificates.
//! * [`budgeted`]: tree trimming and budgeted Steiner tree algorithms.
//! * [`reductions`]: k-MST, k-Steiner tree and quota transformations.
//! * [`generate`]: integrality-gap, hardness and random instance generators.
//! * [`oracle`]: exhaustive solvers and independent verifiers.
//! * [`suite`]: seeded property suites behind `bench` and the acceptance tests.
//!
//! All arithmetic is exact ([`rational::Rational`]).

pub mod budgeted;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pcsf;
pub mod rational;
pub mod reductions;
pub mod suite;

pub use error::{Error, Result};
pub use graph::{Demand, NodeWeightedInstance, Vertex, VertexId};
pub use rational::Rational;
