//! The SysML v2 textual subset: AST, parser, canonical emitter and
//! resolution-based validation.

pub mod ast;
pub mod emit;
pub mod expr;
pub mod index;
pub mod lexer;
pub mod parser;
pub mod query;
pub mod validate;

pub use ast::*;
pub use emit::{emit, emit_with, EmitConfig, EmitError};
pub use expr::{BinaryOp, Expr, Literal, UnaryOp};
pub use index::{ElementId, ModelIndex, Target};
pub use parser::{parse_expr_text, parse_filter_text, parse_sysml, SysmlParseError};
pub use query::{resolve, walk, ResolveError};
pub use validate::validate_package;
