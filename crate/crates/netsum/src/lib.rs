//! File formats, the verification pipeline and batch drivers on top of
//! `netsum-core`.

pub mod batch;
pub mod pipeline;
pub mod random;
pub mod textio;

pub use pipeline::{summarize, verify, Check, Options, PipelineError, Report, Run};
pub use textio::{parse_system, serialize_system, ParseError, Stats, System};
