//! The SSM side: model, `.ssm` parser and formatter, validation.

pub mod format;
pub mod lexer;
pub mod model;
pub mod parser;
pub mod validate;

pub use format::format_ssm;
pub use model::*;
pub use parser::{parse_ssm, DEFAULT_INDIVIDUAL_TYPE};
pub use validate::{validate_context, validate_with};
