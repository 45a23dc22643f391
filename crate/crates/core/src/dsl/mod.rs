//! Textual front end for GSN modules and patterns.
//!
//! ```text
//! pattern justice {
//!   goal JG1 "distribution of benefit ..." uninstantiated
//!   strategy JA1 "..."
//!
//!   JG1 -> JA1 : supported_by
//!   JG1 -> C1 : in_context_of mult 1..*
//!
//!   choice G at JA1 pick 1..2
//!   acp ACP1 on (JG1 -> C1 : in_context_of) confidence conf
//!   public JG1
//! }
//! ```

mod cursor;
mod document;
pub(crate) mod lexer;
mod parser;
mod serialize;

pub use document::{Document, ElementKey, ModuleDecl, ModuleKind, SourceInfo};
pub use lexer::normalize_newlines;
pub use parser::{parse, ParseOutput, RESERVED};
pub use serialize::{format, quote, serialize};

#[allow(unused_imports)]
pub(crate) use cursor::Cursor;
#[allow(unused_imports)]
pub(crate) use lexer::{lex, Tok};

#[cfg(test)]
mod tests;
