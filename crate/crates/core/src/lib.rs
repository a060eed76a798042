pub mod cli;
pub mod error;
pub mod mesh;
pub mod output;
pub mod scenarios;
pub mod semidiscretization;
pub mod timeint;
pub mod wellbalanced;
pub mod weno;
pub mod weno_gen;

pub use error::{Error, Result};
