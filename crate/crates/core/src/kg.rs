//! The reference knowledge graph (levels, members, indicators) and
//! mapping discovery from attributes onto it.
//!
//! Level mappings are found by approximate set containment: the share of an
//! attribute's distinct (normalised) values that name a member of the
//! level. Indicator mappings are name based.

use alloc::borrow::Cow;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};
use thiserror::Error;

use crate::rdf::vocab::{self, kpi, rdfs};
use crate::rdf::{local_name, Literal, MetaGraph, RdfParseError, Term};
use crate::table::Column;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KgError {
    #[error("invalid knowledge graph document: {0}")]
    RdfParse(#[from] RdfParseError),
    #[error("member <{member}> links to undeclared level <{level}>")]
    DanglingMember { member: String, level: String },
    #[error("member <{0}> is not linked to any level")]
    MemberWithoutLevel(String),
    #[error("member <{member}> is linked to several levels: {levels:?}")]
    MemberInSeveralLevels { member: String, levels: Vec<String> },
    #[error("roll-up edge <{from}> -> <{to}> references an undeclared level")]
    DanglingRollup { from: String, to: String },
    #[error("level hierarchy contains a cycle through <{0}>")]
    CyclicHierarchy(String),
    #[error("attribute `{attribute}` matches several indicators: {candidates:?}")]
    AmbiguousIndicator {
        attribute: String,
        candidates: Vec<String>,
    },
    #[error("containment threshold {0} is outside [0, 1]")]
    Threshold(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelRef {
    pub iri: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Member {
    pub iri: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndicatorRef {
    pub iri: String,
    pub name: String,
}

/// A level with its members and a lookup from normalised member names
/// (label or IRI local name) to member positions.
#[derive(Debug, Clone)]
pub struct Level {
    reference: LevelRef,
    dimension: Option<String>,
    members: Vec<Member>,
    index: HashMap<String, usize>,
    /// Bit `n` is set when some key is `n` bytes long (bit 63: 63 or more).
    key_lengths: u64,
}

impl Level {
    fn new(reference: LevelRef) -> Self {
        Level {
            reference,
            dimension: None,
            members: Vec::new(),
            index: HashMap::new(),
            key_lengths: 0,
        }
    }

    pub fn reference(&self) -> &LevelRef {
        &self.reference
    }

    pub fn iri(&self) -> &str {
        &self.reference.iri
    }

    pub fn dimension(&self) -> Option<&str> {
        self.dimension.as_deref()
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    /// Members are sorted by IRI; labels take precedence over local names
    /// when both normalise to the same key.
    fn rebuild_index(&mut self) {
        self.members.sort();
        self.members.dedup_by(|a, b| a.iri == b.iri);
        self.index.clear();
        for (i, m) in self.members.iter().enumerate() {
            self.index
                .entry(normalize_value(&m.label).into_owned())
                .or_insert(i);
        }
        for (i, m) in self.members.iter().enumerate() {
            self.index
                .entry(normalize_value(local_name(&m.iri)).into_owned())
                .or_insert(i);
        }
        self.key_lengths = self.index.keys().fold(0, |acc, k| acc | length_bit(k));
    }

    fn get(&self, key: &str) -> Option<usize> {
        // most unmatched cells are rejected here without hashing
        if self.key_lengths & length_bit(key) == 0 {
            return None;
        }
        self.index.get(key).copied()
    }

    /// Position of the member named by `cell`, if any. `scratch` is reused
    /// for cells that need case folding or trimming.
    pub fn lookup(&self, cell: &str, scratch: &mut String) -> Option<usize> {
        let b = cell.as_bytes();
        let untrimmed = !b.first().is_some_and(u8::is_ascii_whitespace)
            && !b.last().is_some_and(u8::is_ascii_whitespace);
        // ASCII case folding keeps the length, so an untrimmed ASCII cell
        // of a length no key has cannot match
        if untrimmed && self.key_lengths & length_bit(cell) == 0 && cell.is_ascii() {
            return None;
        }
        if is_normalized(cell) {
            return self.get(cell);
        }
        scratch.clear();
        for c in cell.trim().chars() {
            scratch.extend(c.to_lowercase());
        }
        self.get(scratch)
    }

    /// False only when `lookup` would surely miss on an ASCII `cell`:
    /// untrimmed and of a length no key has. Computed without branches so
    /// it can filter cells ahead of the hashed lookups.
    pub fn may_match_ascii(&self, cell: &str) -> bool {
        let b = cell.as_bytes();
        let n = b.len();
        let padded = n > 0 && (b[0].is_ascii_whitespace() | b[n - 1].is_ascii_whitespace());
        (self.key_lengths & length_bit(cell) != 0) | padded
    }

    pub fn contains_key(&self, normalized: &str) -> bool {
        self.get(normalized).is_some()
    }
}

fn length_bit(key: &str) -> u64 {
    1 << key.len().min(63)
}

/// Configuration of the KG fragment reader.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KgConfig {
    /// Property linking a member to its level.
    pub member_level_property: String,
    /// Property linking a level to the coarser level it rolls up to.
    pub rollup_property: String,
    /// Property linking a level to its dimension.
    pub dimension_property: String,
}

impl Default for KgConfig {
    fn default() -> Self {
        KgConfig {
            member_level_property: kpi::IN_LEVEL.into(),
            rollup_property: kpi::ROLLUP.into(),
            dimension_property: kpi::IN_DIMENSION.into(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct KnowledgeGraph {
    levels: Vec<Level>,
    indicators: Vec<IndicatorRef>,
    dimensions: BTreeSet<String>,
    rollups: BTreeSet<(String, String)>,
    prefixes: Vec<(String, String)>,
}

impl KnowledgeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses a Turtle/N-Triples document and extracts the fragment.
    pub fn from_turtle(text: &str, config: &KgConfig) -> Result<Self, KgError> {
        let graph = crate::rdf::parse(text)?;
        Self::from_graph(&graph, config)
    }

    /// Reads typed `kpi:Level`, `kpi:Member` and `kpi:Indicator` instances.
    /// Names come from `rdfs:label` (smallest when several) or the IRI local
    /// name.
    pub fn from_graph(graph: &MetaGraph, config: &KgConfig) -> Result<Self, KgError> {
        let name_of = |t: &Term| -> String {
            graph
                .objects(t, rdfs::LABEL)
                .filter_map(|o| o.as_literal())
                .map(|l| l.lexical.clone())
                .min()
                .unwrap_or_else(|| local_name(t.as_iri().unwrap_or_default()).into())
        };

        let mut levels: BTreeMap<String, Level> = BTreeMap::new();
        for t in graph.instances_of(kpi::LEVEL) {
            let Some(iri) = t.as_iri() else { continue };
            let mut level = Level::new(LevelRef {
                iri: iri.into(),
                name: name_of(t),
            });
            level.dimension = graph
                .object(t, &config.dimension_property)
                .and_then(Term::as_iri)
                .map(String::from);
            levels.insert(iri.into(), level);
        }

        for t in graph.instances_of(kpi::MEMBER) {
            let Some(iri) = t.as_iri() else { continue };
            let targets: Vec<&str> = graph
                .objects(t, &config.member_level_property)
                .filter_map(Term::as_iri)
                .collect();
            let level_iri = match targets.as_slice() {
                [] => return Err(KgError::MemberWithoutLevel(iri.into())),
                [one] => *one,
                many => {
                    return Err(KgError::MemberInSeveralLevels {
                        member: iri.into(),
                        levels: many.iter().map(|s| String::from(*s)).collect(),
                    })
                }
            };
            let level = levels
                .get_mut(level_iri)
                .ok_or_else(|| KgError::DanglingMember {
                    member: iri.into(),
                    level: level_iri.into(),
                })?;
            level.members.push(Member {
                iri: iri.into(),
                label: name_of(t),
            });
        }

        let mut kg = KnowledgeGraph {
            prefixes: graph.prefixes().to_vec(),
            ..KnowledgeGraph::default()
        };
        for t in graph.instances_of(kpi::INDICATOR) {
            if let Some(iri) = t.as_iri() {
                kg.indicators.push(IndicatorRef {
                    iri: iri.into(),
                    name: name_of(t),
                });
            }
        }
        for t in graph.instances_of(kpi::DIMENSION) {
            if let Some(iri) = t.as_iri() {
                kg.dimensions.insert(iri.into());
            }
        }
        for tr in graph
            .iter()
            .filter(|t| t.predicate == config.rollup_property)
        {
            let (Some(from), Some(to)) = (tr.subject.as_iri(), tr.object.as_iri()) else {
                continue;
            };
            if !levels.contains_key(from) || !levels.contains_key(to) {
                return Err(KgError::DanglingRollup {
                    from: from.into(),
                    to: to.into(),
                });
            }
            kg.rollups.insert((from.into(), to.into()));
        }
        kg.levels = levels.into_values().collect();
        for level in &mut kg.levels {
            level.rebuild_index();
        }
        kg.indicators.sort();
        kg.check_acyclic()?;
        Ok(kg)
    }

    fn check_acyclic(&self) -> Result<(), KgError> {
        // Kahn's algorithm over the roll-up edges
        let mut indegree: BTreeMap<&str, usize> =
            self.levels.iter().map(|l| (l.iri(), 0)).collect();
        for (_, to) in &self.rollups {
            *indegree.get_mut(to.as_str()).expect("validated edge") += 1;
        }
        let mut ready: Vec<&str> = indegree
            .iter()
            .filter(|(_, d)| **d == 0)
            .map(|(k, _)| *k)
            .collect();
        let mut seen = 0;
        while let Some(n) = ready.pop() {
            seen += 1;
            for (from, to) in &self.rollups {
                if from == n {
                    let d = indegree.get_mut(to.as_str()).expect("validated edge");
                    *d -= 1;
                    if *d == 0 {
                        ready.push(to);
                    }
                }
            }
        }
        if seen == indegree.len() {
            return Ok(());
        }
        let stuck = indegree
            .iter()
            .find(|(_, d)| **d > 0)
            .map(|(k, _)| *k)
            .unwrap_or_default();
        Err(KgError::CyclicHierarchy(stuck.into()))
    }

    pub fn add_level(&mut self, iri: &str, name: &str) {
        if self.level(iri).is_none() {
            self.levels.push(Level::new(LevelRef {
                iri: iri.into(),
                name: name.into(),
            }));
            self.levels
                .sort_by(|a, b| a.reference.iri.cmp(&b.reference.iri));
        }
    }

    /// Adds members to an existing level.
    pub fn add_members<'m>(
        &mut self,
        level_iri: &str,
        members: impl IntoIterator<Item = (&'m str, &'m str)>,
    ) -> Result<(), KgError> {
        let level = self
            .levels
            .iter_mut()
            .find(|l| l.reference.iri == level_iri)
            .ok_or_else(|| KgError::DanglingMember {
                member: String::new(),
                level: level_iri.into(),
            })?;
        for (iri, label) in members {
            level.members.push(Member {
                iri: iri.into(),
                label: label.into(),
            });
        }
        level.rebuild_index();
        Ok(())
    }

    pub fn add_indicator(&mut self, iri: &str, name: &str) {
        self.indicators.push(IndicatorRef {
            iri: iri.into(),
            name: name.into(),
        });
        self.indicators.sort();
        self.indicators.dedup_by(|a, b| a.iri == b.iri);
    }

    pub fn add_rollup(&mut self, from: &str, to: &str) -> Result<(), KgError> {
        if self.level(from).is_none() || self.level(to).is_none() {
            return Err(KgError::DanglingRollup {
                from: from.into(),
                to: to.into(),
            });
        }
        self.rollups.insert((from.into(), to.into()));
        if let Err(e) = self.check_acyclic() {
            self.rollups.remove(&(from.into(), to.into()));
            return Err(e);
        }
        Ok(())
    }

    pub fn add_prefix(&mut self, prefix: &str, namespace: &str) {
        self.prefixes.retain(|(p, _)| p != prefix);
        self.prefixes.push((prefix.into(), namespace.into()));
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, iri: &str) -> Option<&Level> {
        self.levels
            .binary_search_by(|l| l.reference.iri.as_str().cmp(iri))
            .ok()
            .map(|i| &self.levels[i])
    }

    pub fn indicators(&self) -> &[IndicatorRef] {
        &self.indicators
    }

    pub fn dimensions(&self) -> impl Iterator<Item = &str> {
        self.dimensions.iter().map(String::as_str)
    }

    pub fn rollups(&self) -> impl Iterator<Item = (&str, &str)> {
        self.rollups.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn prefixes(&self) -> &[(String, String)] {
        &self.prefixes
    }

    /// Writes the fragment back as RDF (used for generated fixtures).
    pub fn to_graph(&self, config: &KgConfig) -> MetaGraph {
        let mut g = MetaGraph::new();
        for (p, ns) in vocab::STANDARD_PREFIXES
            .iter()
            .filter(|(p, _)| matches!(*p, "kpi" | "rdfs"))
        {
            g.add_prefix(p, ns);
        }
        for (p, ns) in &self.prefixes {
            g.add_prefix(p, ns);
        }
        for level in &self.levels {
            g.add_type(level.iri(), kpi::LEVEL);
            g.add(
                level.iri(),
                rdfs::LABEL,
                Literal::string(level.reference.name.as_str()),
            );
            if let Some(d) = &level.dimension {
                g.add(
                    level.iri(),
                    &config.dimension_property,
                    Term::iri(d.as_str()),
                );
            }
            for m in &level.members {
                g.add_type(&m.iri, kpi::MEMBER);
                g.add(&m.iri, rdfs::LABEL, Literal::string(m.label.as_str()));
                g.add(
                    &m.iri,
                    &config.member_level_property,
                    Term::iri(level.iri()),
                );
            }
        }
        for (from, to) in &self.rollups {
            g.add(from, &config.rollup_property, Term::iri(to.as_str()));
        }
        for i in &self.indicators {
            g.add_type(&i.iri, kpi::INDICATOR);
            g.add(&i.iri, rdfs::LABEL, Literal::string(i.name.as_str()));
        }
        for d in &self.dimensions {
            g.add_type(d, kpi::DIMENSION);
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "kind", content = "iri", rename_all = "lowercase")
)]
pub enum MappingTarget {
    Level(String),
    Indicator(String),
}

impl MappingTarget {
    pub fn iri(&self) -> &str {
        match self {
            MappingTarget::Level(i) | MappingTarget::Indicator(i) => i,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Mapping {
    pub attribute: String,
    pub target: MappingTarget,
    /// Containment score; 1.0 for name-matched indicators.
    pub score: f64,
}

/// Case-insensitive, whitespace-trimmed form used for member matching.
pub fn normalize_value(s: &str) -> Cow<'_, str> {
    if is_normalized(s) {
        Cow::Borrowed(s)
    } else {
        let mut out = String::with_capacity(s.len());
        for c in s.trim().chars() {
            out.extend(c.to_lowercase());
        }
        Cow::Owned(out)
    }
}

fn is_normalized(s: &str) -> bool {
    let b = s.as_bytes();
    !b.first().is_some_and(u8::is_ascii_whitespace)
        && !b.last().is_some_and(u8::is_ascii_whitespace)
        && s.is_ascii()
        // no early exit, so this loop vectorises
        && !b.iter().fold(false, |acc, c| acc | c.is_ascii_uppercase())
}

/// Lowercase alphanumerics only, for attribute/indicator name matching.
pub fn normalize_name(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

/// Distinct normalised non-null values of a column.
pub fn distinct_values(column: &Column) -> HashSet<Cow<'_, str>> {
    column.non_null().map(normalize_value).collect()
}

/// Containment score of `distinct` in every level, in level-IRI order.
pub fn level_scores<'k>(
    distinct: &HashSet<Cow<'_, str>>,
    kg: &'k KnowledgeGraph,
) -> Vec<(&'k str, f64)> {
    let n = distinct.len();
    kg.levels
        .iter()
        .map(|level| {
            if n == 0 {
                return (level.iri(), 0.0);
            }
            let hits = distinct.iter().filter(|v| level.contains_key(v)).count();
            (level.iri(), hits as f64 / n as f64)
        })
        .collect()
}

/// Best level for `column` by containment, if its score reaches `threshold`
/// (and is positive). Ties go to the lexicographically smallest level IRI.
pub fn discover_level_mapping(
    column: &Column,
    kg: &KnowledgeGraph,
    threshold: f64,
) -> Option<Mapping> {
    let distinct = distinct_values(column);
    if distinct.is_empty() {
        return None;
    }
    let mut best: Option<(&str, f64)> = None;
    for (iri, score) in level_scores(&distinct, kg) {
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((iri, score));
        }
    }
    let (iri, score) = best?;
    (score > 0.0 && score >= threshold).then(|| Mapping {
        attribute: column.name.clone(),
        target: MappingTarget::Level(iri.into()),
        score,
    })
}

/// Exact match of the normalised attribute name against indicator names
/// and IRI local names.
pub fn discover_indicator_mapping(
    attribute: &str,
    kg: &KnowledgeGraph,
) -> Result<Option<Mapping>, KgError> {
    let key = normalize_name(attribute);
    if key.is_empty() {
        return Ok(None);
    }
    let mut hits: Vec<&str> = kg
        .indicators
        .iter()
        .filter(|i| normalize_name(&i.name) == key || normalize_name(local_name(&i.iri)) == key)
        .map(|i| i.iri.as_str())
        .collect();
    hits.dedup();
    match hits.as_slice() {
        [] => Ok(None),
        [one] => Ok(Some(Mapping {
            attribute: attribute.into(),
            target: MappingTarget::Indicator((*one).into()),
            score: 1.0,
        })),
        many => Err(KgError::AmbiguousIndicator {
            attribute: attribute.into(),
            candidates: many.iter().map(|s| String::from(*s)).collect(),
        }),
    }
}
