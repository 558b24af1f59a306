//! Reeb graphs, their extended persistence diagrams, the bottleneck distance,
//! simplification operators and functional-distortion bounds, all in exact
//! rational arithmetic.

pub mod bottleneck;
pub mod distortion;
pub mod error;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod io;
pub mod iso;
pub mod operators;
pub mod paths;
pub mod persistence;
pub mod travel;
pub mod value;

pub use error::{Error, Result};
pub use graph::{CriticalValues, GraphPoint, ReebGraph, ValidationReport, Violation};
pub use persistence::{Diagram, DiagramPoint, Kind};
pub use value::Value;
