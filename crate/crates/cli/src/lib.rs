//! Front end of the `hhom` tool: job documents, the compute pipeline and
//! report emission.

pub mod job;
pub mod report;
pub mod run;

pub use job::{parse_input, JobSpec};
pub use report::{emit, Report};
pub use run::{run, CliError};
