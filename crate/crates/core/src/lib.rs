//! Capacity regions for quantum channels whose entanglement assistance may
//! fail to reach the receiver.
//!
//! The crate evaluates the single-letter information quantities that bound
//! the guaranteed rate `R` (decodable without the entangled resource) and the
//! excess rate `R'` (decodable only with it), optimizes them over
//! parameterized inputs, and simulates the super-dense coding / basis
//! signaling time-division protocol at finite blocklength.
//!
//! Modules, bottom-up:
//! - [`linalg`]: dense complex matrices over tensor-product spaces
//! - [`objects`]: density operators, pure states, Kraus channels
//! - [`entropy`]: von Neumann and Shannon entropies and derived measures
//! - [`optim`]: seeded multi-start simplex search
//! - [`capacity`]: channel capacities and rate regions
//! - [`protocol`]: Monte-Carlo simulation of the time-division code
//! - [`random`]: Haar-random states, unitaries and channels

pub mod capacity;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod objects;
pub mod optim;
pub mod protocol;
pub mod random;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DimList};
pub use num_complex::Complex64;
pub use objects::{DensityOperator, KrausChannel, PureState};
