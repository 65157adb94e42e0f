//! Command-line front end: JSON documents in, mass tables or JSON out.

pub mod commands;
pub mod document;
pub mod expr;

pub use commands::{run, Output};
