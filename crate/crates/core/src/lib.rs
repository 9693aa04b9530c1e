pub mod cartan;
pub mod cli;
pub mod error;
pub mod generosity;
pub mod padic;
pub mod quadext;
pub mod sl2core;
pub mod verify;

pub use error::{Error, Result};
