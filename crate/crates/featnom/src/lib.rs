//! File formats, experiment harness and command-line front end for
//! `featnom-core`.

pub mod config;
pub mod error;
pub mod io;
pub mod nominate;
pub mod simulate;
pub mod suite;
pub mod sweep;

pub use error::{Error, Result};
