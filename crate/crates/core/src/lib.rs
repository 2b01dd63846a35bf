//! Schur stability certification for real matrices and randomized testing of
//! linear maps on matrix space that are claimed to preserve it.

pub mod config;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod matmap;
pub mod preserver;
pub mod report;
pub mod stability;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use linalg::{Matrix, Spectrum};
