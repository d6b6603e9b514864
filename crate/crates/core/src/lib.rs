//! Weyl algebras over spaces of test-function pairs for the massless scalar
//! field in one space dimension, their non-regular states, charge sectors,
//! chiral decomposition and local nets.

pub mod error;
pub mod exact;
pub mod funcspace;

pub use error::{Error, Result};
pub mod registry_file;
pub mod symplectic;
pub mod weyl;
pub mod gns;
pub mod chiral;
pub mod nets;
pub mod sample;
pub mod states;
