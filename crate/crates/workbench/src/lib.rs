//! Batch front end for `trinomial-core`: spec files in, canonical JSON
//! reports out.

pub mod commands;
pub mod error;
pub mod report;
pub mod spec;

pub use commands::{run_command, Command, Outcome};
pub use error::CliError;
pub use report::{emit_report, Report, TOOL_VERSION};
pub use spec::{parse_spec_bytes, parse_spec_file, Options, SpecFile};
