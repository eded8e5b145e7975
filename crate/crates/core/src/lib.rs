//! Geometric quantum discords (trace, Hellinger, Bures) of the two-qubit
//! XX chain with Dzyaloshinskii-Moriya interaction in a uniform field.

pub mod density;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod optimize;
pub mod oracles;
pub mod spin;
pub mod sweep;
pub mod tolerance;
pub mod verify;

pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use measures::{Branch, Measure, MeasureResult, Method};
pub use spin::ModelParams;
