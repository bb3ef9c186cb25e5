//! Reading RDF documents from disk: the reference knowledge graph and
//! metadata graphs.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use mdprof_core::kg::{KgConfig, KgError, KnowledgeGraph};
use mdprof_core::rdf::{self, MetaGraph, RdfParseError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KgLoadError {
    #[error("cannot read knowledge graph {path}: {source}")]
    Unreadable { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Invalid { path: PathBuf, source: KgError },
}

/// Reads a Turtle or N-Triples KG document.
pub fn load_kg(path: &Path, config: &KgConfig) -> Result<KnowledgeGraph, KgLoadError> {
    let text = fs::read_to_string(path).map_err(|source| KgLoadError::Unreadable {
        path: path.to_owned(),
        source,
    })?;
    KnowledgeGraph::from_turtle(&text, config).map_err(|source| KgLoadError::Invalid {
        path: path.to_owned(),
        source,
    })
}

#[derive(Debug, Error)]
pub enum GraphFileError {
    #[error("cannot read {path}: {source}")]
    Unreadable { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: RdfParseError,
    },
}

/// Parses a Turtle or N-Triples file into a graph.
pub fn read_graph(path: &Path) -> Result<MetaGraph, GraphFileError> {
    let text = fs::read_to_string(path).map_err(|source| GraphFileError::Unreadable {
        path: path.to_owned(),
        source,
    })?;
    rdf::parse(&text).map_err(|source| GraphFileError::Parse {
        path: path.to_owned(),
        source,
    })
}
