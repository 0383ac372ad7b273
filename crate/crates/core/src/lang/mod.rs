//! Concrete syntax for concepts, axioms and queries.

mod ast;
mod parser;

pub use ast::{is_ident, Axiom, Cmp, Concept, Degree, Query};
pub use parser::{parse_axiom, parse_concept, parse_query, parse_query_file, ParseError};
