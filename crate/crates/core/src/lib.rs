pub mod arith;
pub mod cli;
pub mod counting;
pub mod csl;
pub mod enumerate;
pub mod error;
pub mod isometry;
pub mod lattice;
pub mod linalg;
pub mod ssl;
pub mod theorems;

pub use error::{Error, Result};
