//! File-system side of the profiler: source ingestion, the profiling
//! engine, the on-disk catalog, the synthetic benchmark harness and the
//! diagnostic codes used by the `mdprof` binary.
//!
//! The pure model (typing, KG mapping, profiles, RDF) lives in
//! [`mdprof_core`], re-exported here as [`core`].

pub use mdprof_core as core;

pub mod bench;
pub mod catalog;
pub mod diagnostics;
pub mod engine;
pub mod graph_io;
pub mod ingest;
pub mod settings;
