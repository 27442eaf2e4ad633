//! File formats, table reproduction and the `robmeas` command-line tool,
//! built on [`robmeas_core`].

pub mod cli;
pub mod config;
pub mod formats;
pub mod tables;

mod error;

pub use self::error::{Error, Result};

/// Version tag written into every JSON document.
pub const SCHEMA_VERSION: u32 = 1;
