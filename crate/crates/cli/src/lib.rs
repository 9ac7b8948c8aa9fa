//! Command-line front end: instance ingestion, random instance generation,
//! solver invocation, verification commands, and a benchmark harness.
//!
//! Exit codes: 0 success (the decision travels in the JSON payload), 1
//! failed verification, 2 parse or usage error, 3 resource cap exceeded.

pub mod args;
pub mod commands;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Maps core errors onto the exit-code contract.
pub fn exit_code(err: &fgpp_core::Error) -> i32 {
    match err {
        fgpp_core::Error::Parse { .. } | fgpp_core::Error::Input(_) => EXIT_USAGE,
        fgpp_core::Error::Resource(_) => EXIT_RESOURCE,
    }
}

/// Parses argv and runs the chosen command, returning the exit code.
pub fn main_entry<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version leave through here with exit code 0,
            // usage errors with clap's default of 2
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}
