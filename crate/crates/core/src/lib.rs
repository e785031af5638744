pub mod adpar;
pub mod batchstrat;
pub mod error;
pub mod harness;
pub mod model;
pub mod synthgen;
pub mod workforce;

pub use error::{Error, Result};
