//! RDF metadata graphs: term model, IRI minting, graph construction from
//! profiles, Turtle/N-Triples text and shape conformance checks.

mod build;
mod iri;
mod read;
pub mod shape;
mod turtle;
pub mod vocab;
mod write;

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use build::{build_graph, AttributeInput, BuildError, SourceMetadata};
pub use iri::{encode_segment, local_name, mint_iri, IriKind};
pub use read::{read_source, AttributeDescription, ReadError, SourceDescription};
pub use turtle::{parse, RdfParseError};
pub use write::{serialize, to_ntriples, to_turtle};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub lexical: String,
    /// Datatype IRI; plain literals carry `xsd:string`, language-tagged
    /// ones `rdf:langString`.
    pub datatype: String,
    pub language: Option<String>,
}

impl Literal {
    pub fn string(s: impl Into<String>) -> Self {
        Literal {
            lexical: s.into(),
            datatype: vocab::xsd::STRING.into(),
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: &str) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: datatype.into(),
            language: None,
        }
    }

    pub fn integer(v: impl fmt::Display) -> Self {
        Literal::typed(v.to_string(), vocab::xsd::INTEGER)
    }

    /// `xsd:decimal` from a finite float; Rust's shortest round-trip
    /// formatting never emits an exponent, which `xsd:decimal` forbids.
    pub fn decimal(v: f64) -> Self {
        let v = if v == 0.0 { 0.0 } else { v };
        Literal::typed(v.to_string(), vocab::xsd::DECIMAL)
    }

    pub fn lang(s: impl Into<String>, tag: impl Into<String>) -> Self {
        Literal {
            lexical: s.into(),
            datatype: vocab::rdf::LANG_STRING.into(),
            language: Some(tag.into()),
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.lexical.parse().ok()
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.lexical.parse().ok()
    }

    pub fn as_f64(&self) -> Option<f64> {
        crate::typing::parse_number(&self.lexical)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(String),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn iri(s: impl Into<String>) -> Self {
        Term::Iri(s.into())
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Term,
    pub predicate: String,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: impl Into<String>, object: impl Into<Term>) -> Self {
        Triple {
            subject,
            predicate: predicate.into(),
            object: object.into(),
        }
    }
}

/// A set of triples plus the prefix map used when writing Turtle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetaGraph {
    triples: BTreeSet<Triple>,
    prefixes: Vec<(String, String)>,
}

impl MetaGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// An empty graph carrying the vocabulary prefixes.
    pub fn with_standard_prefixes() -> Self {
        let mut g = MetaGraph::new();
        for (p, ns) in vocab::STANDARD_PREFIXES {
            g.add_prefix(p, ns);
        }
        g
    }

    /// Adds or rebinds a prefix; insertion order is kept for output.
    pub fn add_prefix(&mut self, prefix: &str, namespace: &str) {
        if let Some(slot) = self.prefixes.iter_mut().find(|(p, _)| p == prefix) {
            slot.1 = namespace.into();
        } else {
            self.prefixes.push((prefix.into(), namespace.into()));
        }
    }

    pub fn prefixes(&self) -> &[(String, String)] {
        &self.prefixes
    }

    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn add(&mut self, subject: &str, predicate: &str, object: impl Into<Term>) {
        self.triples
            .insert(Triple::new(Term::iri(subject), predicate, object));
    }

    pub fn add_type(&mut self, subject: &str, class: &str) {
        self.add(subject, vocab::rdf::TYPE, Term::iri(class));
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn triples(&self) -> &BTreeSet<Triple> {
        &self.triples
    }

    /// Objects of `(subject, predicate, ?)`. Uses the subject-ordered set,
    /// so this is a range scan rather than a full pass.
    pub fn objects<'a, 'b>(
        &'a self,
        subject: &'b Term,
        predicate: &'b str,
    ) -> impl Iterator<Item = &'a Term> + 'b
    where
        'a: 'b,
    {
        let lo = Triple {
            subject: subject.clone(),
            predicate: predicate.into(),
            object: Term::Iri(String::new()),
        };
        self.triples
            .range(lo..)
            .take_while(move |t| &t.subject == subject && t.predicate == predicate)
            .map(|t| &t.object)
    }

    pub fn object<'a>(&'a self, subject: &Term, predicate: &str) -> Option<&'a Term> {
        self.objects(subject, predicate).next()
    }

    /// Subjects of `(?, predicate, object)`; full scan.
    pub fn subjects<'a>(
        &'a self,
        predicate: &'a str,
        object: &'a Term,
    ) -> impl Iterator<Item = &'a Term> + 'a {
        self.triples
            .iter()
            .filter(move |t| t.predicate == predicate && &t.object == object)
            .map(|t| &t.subject)
    }

    pub fn instances_of<'a>(&'a self, class: &str) -> Vec<&'a Term> {
        let mut out: Vec<&Term> = self
            .triples
            .iter()
            .filter(|t| t.predicate == vocab::rdf::TYPE && t.object.as_iri() == Some(class))
            .map(|t| &t.subject)
            .collect();
        out.dedup();
        out
    }

    pub fn has_type(&self, subject: &Term, class: &str) -> bool {
        self.objects(subject, vocab::rdf::TYPE)
            .any(|o| o.as_iri() == Some(class))
    }

    /// Triple-set equality, ignoring prefixes.
    pub fn same_triples(&self, other: &MetaGraph) -> bool {
        self.triples == other.triples
    }
}

impl Extend<Triple> for MetaGraph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        self.triples.extend(iter);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum RdfFormat {
    Turtle,
    NTriples,
}

impl RdfFormat {
    pub fn extension(self) -> &'static str {
        match self {
            RdfFormat::Turtle => "ttl",
            RdfFormat::NTriples => "nt",
        }
    }

    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "ttl" | "turtle" => Some(RdfFormat::Turtle),
            "nt" | "ntriples" => Some(RdfFormat::NTriples),
            _ => None,
        }
    }
}

impl FromStr for RdfFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "turtle" | "ttl" => Ok(RdfFormat::Turtle),
            "ntriples" | "n-triples" | "nt" => Ok(RdfFormat::NTriples),
            other => Err(alloc::format!(
                "unknown RDF format `{other}` (expected turtle or ntriples)"
            )),
        }
    }
}
