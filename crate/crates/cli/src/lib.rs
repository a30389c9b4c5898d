//! Command-line front end for `flatbst`: build, verify, search, bench.

pub mod commands;
pub mod error;
pub mod format;
pub mod keys;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::Cli;
pub use error::{exit, CliError};

/// Parses `args` and runs the command. Results go to `out`, diagnostics to
/// standard error. Returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
        }
    };
    match commands::run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("flatbst: {e}");
            e.exit_code()
        }
    }
}
