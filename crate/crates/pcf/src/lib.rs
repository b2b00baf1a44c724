//! Command-line front end and text formats for `puiseux-cf`.

pub mod cli;
pub mod parse;
pub mod render;
pub mod spec;
