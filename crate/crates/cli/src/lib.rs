//! Front end for the `zhad` binary: command dispatch, output formats, the
//! embedded expected tables and the results cache.

pub mod app;
pub mod cache;
pub mod expected;
pub mod format;
