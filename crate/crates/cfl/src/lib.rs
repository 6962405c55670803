//! Generators, brute-force oracle, lower-bound encoders, size accounting and
//! label files on top of `cfl-core`.

pub mod encode;
pub mod error;
pub mod generate;
pub mod labels;
pub mod measure;
pub mod oracle;
pub mod verify;

pub use error::{CflError, CflResult};
