pub mod channel;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod kgmodes;
pub mod scenario;
pub mod specfun;

pub use error::{Error, Result};
