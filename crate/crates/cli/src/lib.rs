//! Support code for the `epsnet` command-line tool.

pub mod bench;
pub mod generate;
pub mod io;
pub mod svg;
