pub mod algebra;
pub mod cli;
pub mod curve;
pub mod eds;
pub mod height;
pub mod lehmer;
pub mod error;

pub use error::{Error, Result};
