pub mod bits;
pub mod codelen;
pub mod coders;
pub mod dfa;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod ranking;
pub mod search;
pub mod structfn;

pub use error::{Error, Result};

/// Library version, embedded in every report and trace.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
