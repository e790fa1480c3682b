pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod grid;
pub mod model;
pub mod kernels;
pub mod report;
pub mod solver;
pub mod tumor;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{Grid, GridFunction, Side};
