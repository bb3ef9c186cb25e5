//! Allocation-only core of `mdprof`.
//!
//! Everything here is a pure function over in-memory values: attribute
//! classification, knowledge-graph mapping discovery, profile computation
//! and the RDF metadata graph (construction, Turtle/N-Triples text, shape
//! checks). File access, parallelism and timing live in the `mdprof` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod kg;
pub mod profile;
pub mod rdf;
pub mod table;
pub mod typing;

pub use kg::{KnowledgeGraph, Mapping, MappingTarget};
pub use profile::{DProfile, IProfile, Profile};
pub use rdf::MetaGraph;
pub use table::{Column, Table, TableError};
pub use typing::{AttributeCategory, TypedColumn, TypingConfig};
