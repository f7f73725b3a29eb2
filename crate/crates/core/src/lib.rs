pub mod analytic;
pub mod baseline;
pub mod engine;
pub mod equation;
pub mod error;
pub mod jet;
pub mod metrics;
pub mod rational;
pub mod stencil;

pub use error::{Error, Result};
