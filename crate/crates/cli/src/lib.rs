//! File formats, the cross-validation harness and the command-line front end for
//! [`gauge_ideals`].

pub mod cli;
pub mod crossval;
mod error;
pub mod formats;
pub mod generate;

pub use error::{Result, ToolError};
