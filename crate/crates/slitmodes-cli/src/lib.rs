//! Library side of the `slitmodes` binary: argument types, the output
//! record writer, and the reader for the tool's own CSV files.

pub mod commands;
pub mod output;
pub mod reader;
