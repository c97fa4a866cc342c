//! Command-line front end for `bargain-core`: problem files, result
//! documents and CSV traces.

pub mod commands;
pub mod format;
pub mod problem;
pub mod trace;

pub use commands::{run, Cli, EXIT_INVALID, EXIT_NOT_CONVERGED, EXIT_OK};
pub use format::fmt_g17;
pub use problem::{parse_problem, Problem, ProblemError, ProblemFile, ProblemKind};
pub use trace::{read_trace, write_trace, TraceFileError};
