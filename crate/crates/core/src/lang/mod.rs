//! MiniC: a C-like mini-language with two I/O dialects, a canonical
//! pretty-printer and a tree-walking interpreter used as the semantics
//! oracle.

pub mod ast;
pub mod interp;
pub mod parse;
pub mod print;
pub mod token;

pub use ast::{Ast, NodeId, NodeKind, SourceProgram};
pub use interp::{interpret, semantically_equivalent, InterpError, ProgramOutput, DEFAULT_FUEL};
pub use parse::{parse, ParseError};
pub use print::pretty_print;
pub use token::{tokenize, LexError, Token, TokenKind};

/// Parse then re-print in the canonical layout. The result re-parses to
/// a structurally identical tree.
pub fn reprint(source: &str) -> Result<alloc::string::String, ParseError> {
    Ok(pretty_print(&parse(source)?.ast))
}
