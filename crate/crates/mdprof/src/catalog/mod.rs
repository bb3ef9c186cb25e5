//! A directory of source metadata graphs with an index for discovery.
//!
//! Layout under the catalog root:
//!
//! ```text
//! index.json            source IRI -> entry (file, mappings, counts)
//! sources/<hash>.ttl    one Turtle document per source
//! .lock                 advisory lock: shared for readers, exclusive for writers
//! ```
//!
//! Documents and the index are replaced by writing a temporary file and
//! renaming it over the old one, so readers never see partial content.

mod query;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use mdprof_core::kg::MappingTarget;
use mdprof_core::rdf::shape::{self, Violation};
use mdprof_core::rdf::{self, mint_iri, read_source, IriKind, MetaGraph, SourceDescription};
use mdprof_core::Profile;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use query::{Op, Predicate, Query, Stat};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("graph violates the metadata shapes ({} problems, first: {})", .0.len(), .0[0])]
    ShapeViolation(Vec<Violation>),
    #[error("corrupt catalog index {path}: {message}")]
    CorruptIndex { path: PathBuf, message: String },
    #[error("corrupt catalog document {path}: {message}")]
    CorruptDocument { path: PathBuf, message: String },
    #[error("source <{0}> is not registered")]
    UnknownSource(String),
    #[error("source <{source_iri}> has no attribute `{attribute}`")]
    UnknownAttribute {
        source_iri: String,
        attribute: String,
    },
    #[error("malformed query `{clause}`: {reason}")]
    MalformedQuery { clause: String, reason: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CatalogError + '_ {
    move |source| CatalogError::Io {
        path: path.to_owned(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    /// Document path relative to the catalog root.
    pub file: String,
    /// RFC 3339 registration time.
    pub registered: String,
    pub levels: Vec<String>,
    pub indicators: Vec<String>,
    pub items: u64,
    pub domains: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
struct Index {
    /// Prefixes declared by registered documents, for query parsing.
    prefixes: BTreeMap<String, String>,
    sources: BTreeMap<String, IndexEntry>,
}

pub struct Catalog {
    root: PathBuf,
}

impl Catalog {
    /// Opens a catalog, creating the directory layout if needed.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, CatalogError> {
        let root = root.into();
        let sources = root.join("sources");
        fs::create_dir_all(&sources).map_err(io_err(&sources))?;
        Ok(Catalog { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn lock(&self, exclusive: bool) -> Result<fs::File, CatalogError> {
        let path = self.root.join(".lock");
        let f = fs::OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&path)
            .map_err(io_err(&path))?;
        if exclusive { f.lock() } else { f.lock_shared() }.map_err(io_err(&path))?;
        Ok(f)
    }

    fn index_path(&self) -> PathBuf {
        self.root.join("index.json")
    }

    fn read_index(&self) -> Result<Index, CatalogError> {
        let path = self.index_path();
        match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text).map_err(|e| CatalogError::CorruptIndex {
                path,
                message: e.to_string(),
            }),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Index::default()),
            Err(e) => Err(io_err(&path)(e)),
        }
    }

    fn document_name(iri: &str) -> String {
        let digest = Sha256::digest(iri.as_bytes());
        let hex: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
        format!("sources/{hex}.ttl")
    }

    /// Stores `graph`, replacing any earlier registration of the same
    /// source. Returns the source IRI.
    pub fn register(&self, graph: &MetaGraph) -> Result<String, CatalogError> {
        self.register_with(graph, |_| Ok(()))
    }

    /// `before_commit` runs after both temporary files are written and
    /// before either rename; an error there abandons the registration.
    fn register_with(
        &self,
        graph: &MetaGraph,
        before_commit: impl FnOnce(&Path) -> io::Result<()>,
    ) -> Result<String, CatalogError> {
        let violations = shape::validate(graph);
        if !violations.is_empty() {
            return Err(CatalogError::ShapeViolation(violations));
        }
        let desc = read_source(graph).map_err(|e| CatalogError::CorruptDocument {
            path: PathBuf::new(),
            message: e.to_string(),
        })?;
        let mut levels = Vec::new();
        let mut indicators = Vec::new();
        for a in &desc.attributes {
            match &a.mapping {
                Some(MappingTarget::Level(l)) => levels.push(l.clone()),
                Some(MappingTarget::Indicator(i)) => indicators.push(i.clone()),
                None => {}
            }
        }
        for v in [&mut levels, &mut indicators] {
            v.sort();
            v.dedup();
        }
        let file = Self::document_name(&desc.iri);
        let entry = IndexEntry {
            file: file.clone(),
            registered: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            levels,
            indicators,
            items: desc.metadata.items,
            domains: desc.domains,
        };

        let _guard = self.lock(true)?;
        let mut index = self.read_index()?;
        for (p, ns) in graph.prefixes() {
            index
                .prefixes
                .entry(p.clone())
                .or_insert_with(|| ns.clone());
        }
        index.sources.insert(desc.iri.clone(), entry);

        let doc_path = self.root.join(&file);
        let doc_tmp = temp_path(&doc_path);
        write_synced(&doc_tmp, rdf::to_turtle(graph).as_bytes())?;
        let index_path = self.index_path();
        let index_tmp = temp_path(&index_path);
        let json = serde_json::to_string_pretty(&index).expect("index serializes");
        write_synced(&index_tmp, json.as_bytes())?;

        if let Err(e) = before_commit(&doc_path) {
            let _ = fs::remove_file(&doc_tmp);
            let _ = fs::remove_file(&index_tmp);
            return Err(io_err(&doc_path)(e));
        }
        fs::rename(&doc_tmp, &doc_path).map_err(io_err(&doc_path))?;
        fs::rename(&index_tmp, &index_path).map_err(io_err(&index_path))?;
        Ok(desc.iri)
    }

    /// Registered sources in IRI order.
    pub fn sources(&self) -> Result<Vec<(String, IndexEntry)>, CatalogError> {
        let _guard = self.lock(false)?;
        Ok(self.read_index()?.sources.into_iter().collect())
    }

    pub fn prefixes(&self) -> Result<Vec<(String, String)>, CatalogError> {
        let _guard = self.lock(false)?;
        Ok(self.read_index()?.prefixes.into_iter().collect())
    }

    /// Accepts a full IRI, a prefixed name, or a bare source name.
    pub fn resolve(&self, name: &str) -> Result<String, CatalogError> {
        let _guard = self.lock(false)?;
        let index = self.read_index()?;
        let candidates = [
            Some(
                name.trim_start_matches('<')
                    .trim_end_matches('>')
                    .to_owned(),
            ),
            query::expand_prefixed(name, &index.prefixes),
            Some(mint_iri(IriKind::Source { name })),
        ];
        candidates
            .into_iter()
            .flatten()
            .find(|c| index.sources.contains_key(c))
            .ok_or_else(|| CatalogError::UnknownSource(name.to_owned()))
    }

    fn load_locked(&self, index: &Index, iri: &str) -> Result<MetaGraph, CatalogError> {
        let entry = index
            .sources
            .get(iri)
            .ok_or_else(|| CatalogError::UnknownSource(iri.to_owned()))?;
        let path = self.root.join(&entry.file);
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        rdf::parse(&text).map_err(|e| CatalogError::CorruptDocument {
            path,
            message: e.to_string(),
        })
    }

    pub fn load(&self, iri: &str) -> Result<MetaGraph, CatalogError> {
        let _guard = self.lock(false)?;
        let index = self.read_index()?;
        self.load_locked(&index, iri)
    }

    pub fn describe(&self, iri: &str) -> Result<SourceDescription, CatalogError> {
        let graph = self.load(iri)?;
        read_source(&graph).map_err(|e| CatalogError::CorruptDocument {
            path: self.root.join(Self::document_name(iri)),
            message: e.to_string(),
        })
    }

    /// Rebuilds the stored profile of one attribute.
    pub fn get_profile(&self, iri: &str, attribute: &str) -> Result<Profile, CatalogError> {
        let desc = self.describe(iri)?;
        desc.attribute(attribute)
            .map(|a| a.profile.clone())
            .ok_or_else(|| CatalogError::UnknownAttribute {
                source_iri: iri.to_owned(),
                attribute: attribute.to_owned(),
            })
    }

    /// Parses `key op value` clauses with the catalog's prefixes.
    pub fn parse_query<S: AsRef<str>>(&self, clauses: &[S]) -> Result<Query, CatalogError> {
        let prefixes: BTreeMap<String, String> = self.prefixes()?.into_iter().collect();
        Query::parse(clauses, &prefixes)
    }

    /// Sources satisfying every predicate of `query`, in IRI order.
    pub fn find_sources(&self, query: &Query) -> Result<Vec<String>, CatalogError> {
        let _guard = self.lock(false)?;
        let index = self.read_index()?;
        let mut out = Vec::new();
        for (iri, entry) in &index.sources {
            let verdict = match query.eval_index(entry) {
                Some(v) => v,
                None => {
                    let graph = self.load_locked(&index, iri)?;
                    let desc = read_source(&graph).map_err(|e| CatalogError::CorruptDocument {
                        path: self.root.join(&entry.file),
                        message: e.to_string(),
                    })?;
                    query.eval(&desc)
                }
            };
            if verdict {
                out.push(iri.clone());
            }
        }
        Ok(out)
    }
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(format!(".tmp{}", std::process::id()));
    path.with_file_name(name)
}

fn write_synced(path: &Path, bytes: &[u8]) -> Result<(), CatalogError> {
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    f.write_all(bytes)
        .and_then(|_| f.sync_all())
        .map_err(io_err(path))
}
