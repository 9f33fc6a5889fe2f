//! Quantum-graph scattering toolkit: vertex conditions and scattering
//! matrices, walk expansions of S(k), interior reconstruction from length
//! spectra, and walk-based KBP / HPP / TSP solvers.

pub mod boundary;
pub mod combinatorial;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod reconstruct;
pub mod scattering;
pub mod walks;

pub use boundary::{BcSpec, BoundaryConditions, GaugePhases, VertexConditions};
pub use error::{Error, Result};
pub use graph::{AssumptionReport, EdgeLength, LengthMode, MetricGraph};
pub use scattering::ScatteringResult;
pub use walks::{Score, Walk};
