pub mod dmic;
pub mod error;
pub mod exec;
pub mod gaussian;
pub mod hashing;
pub mod prob;
pub mod region;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
