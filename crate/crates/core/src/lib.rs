pub mod cli;
pub mod conformance;
pub mod diagnostic;
pub mod mapper;
pub mod parse_error;
pub mod span;
pub mod ssm;
pub mod sysml;
pub mod trace;
