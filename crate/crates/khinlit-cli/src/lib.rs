//! Std companion of the `khinlit` library: tensor file I/O, report
//! rendering, the command-line front end, and the acceptance suite run
//! by the `report` subcommand.

pub mod acceptance;
pub mod cli;
pub mod io;
pub mod report;
