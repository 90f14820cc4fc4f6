//! Spec-file parsing, command dispatch, and reports for the `core-ideals`
//! command-line tool.

pub mod run;
pub mod spec;

pub use run::{load_spec, run_command, CliError, Command, Flags, Report};
pub use spec::{Options, SpecFile};
