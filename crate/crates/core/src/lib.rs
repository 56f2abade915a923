//! Weak-value operators and variance uncertainty bounds.

pub mod bounds;
pub mod continuous;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod models;
pub mod sampling;
pub mod weakvalue;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
