use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::build::SourceMetadata;
use super::vocab::{dcterms, dl, kpi, rdfs};
use super::{Literal, MetaGraph, Term};
use crate::kg::MappingTarget;
use crate::profile::{
    sort_bins, Bin, CategoricalProfile, CategoryCount, DProfile, DatetimeProfile, Distribution,
    IProfile, MemberFrequency, NumericKind, NumericProfile, Profile, TextualProfile, WordCount,
    YearCount,
};
use crate::typing::{AttributeCategory, Timestamp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReadError {
    #[error("graph has no dl:Source node")]
    NoSource,
    #[error("graph has {0} dl:Source nodes")]
    SeveralSources(usize),
    #[error("<{subject}> lacks <{predicate}>")]
    Missing {
        subject: String,
        predicate: &'static str,
    },
    #[error("<{subject}> <{predicate}> has unusable value `{value}`")]
    BadValue {
        subject: String,
        predicate: &'static str,
        value: String,
    },
    #[error("attribute <{0}> has no profile")]
    NoProfile(String),
}

/// Everything a metadata graph says about one source.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceDescription {
    pub iri: String,
    pub metadata: SourceMetadata,
    /// The declared `dl:domains` value.
    pub domains: u64,
    /// Sorted by attribute name.
    pub attributes: Vec<AttributeDescription>,
}

impl SourceDescription {
    pub fn attribute(&self, name: &str) -> Option<&AttributeDescription> {
        self.attributes
            .binary_search_by(|a| a.name.as_str().cmp(name))
            .ok()
            .map(|i| &self.attributes[i])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributeDescription {
    pub iri: String,
    pub name: String,
    pub category: AttributeCategory,
    pub mapping: Option<MappingTarget>,
    pub profile: Profile,
}

struct Reader<'g> {
    g: &'g MetaGraph,
}

impl<'g> Reader<'g> {
    fn literal(&self, s: &Term, p: &'static str) -> Result<Option<&'g Literal>, ReadError> {
        match self.g.object(s, p) {
            None => Ok(None),
            Some(Term::Literal(l)) => Ok(Some(l)),
            Some(other) => Err(bad(s, p, term_text(other))),
        }
    }

    fn req_literal(&self, s: &Term, p: &'static str) -> Result<&'g Literal, ReadError> {
        self.literal(s, p)?.ok_or_else(|| ReadError::Missing {
            subject: term_text(s),
            predicate: p,
        })
    }

    fn string(&self, s: &Term, p: &'static str) -> Result<Option<String>, ReadError> {
        Ok(self.literal(s, p)?.map(|l| l.lexical.clone()))
    }

    fn count(&self, s: &Term, p: &'static str) -> Result<u64, ReadError> {
        let l = self.req_literal(s, p)?;
        l.as_u64().ok_or_else(|| bad(s, p, l.lexical.clone()))
    }

    fn number(&self, s: &Term, p: &'static str) -> Result<f64, ReadError> {
        let l = self.req_literal(s, p)?;
        l.as_f64().ok_or_else(|| bad(s, p, l.lexical.clone()))
    }

    fn timestamp(&self, s: &Term, p: &'static str) -> Result<Timestamp, ReadError> {
        let l = self.req_literal(s, p)?;
        Timestamp::parse_iso_str(&l.lexical).ok_or_else(|| bad(s, p, l.lexical.clone()))
    }

    fn iri(&self, s: &Term, p: &'static str) -> Result<Option<&'g str>, ReadError> {
        match self.g.object(s, p) {
            None => Ok(None),
            Some(Term::Iri(i)) => Ok(Some(i)),
            Some(other) => Err(bad(s, p, term_text(other))),
        }
    }

    fn req_iri(&self, s: &Term, p: &'static str) -> Result<&'g str, ReadError> {
        self.iri(s, p)?.ok_or_else(|| ReadError::Missing {
            subject: term_text(s),
            predicate: p,
        })
    }

    fn children(&self, s: &Term, p: &'static str) -> impl Iterator<Item = &'g Term> + 'g {
        let v: Vec<&'g Term> = self.g.objects(s, p).collect();
        v.into_iter()
    }

    fn collection(&self, prof: &Term, link: &'static str) -> Result<Term, ReadError> {
        Ok(Term::iri(self.req_iri(prof, link)?))
    }
}

fn bad(s: &Term, p: &'static str, value: String) -> ReadError {
    ReadError::BadValue {
        subject: term_text(s),
        predicate: p,
        value,
    }
}

fn term_text(t: &Term) -> String {
    match t {
        Term::Iri(i) => i.clone(),
        Term::Blank(b) => alloc::format!("_:{b}"),
        Term::Literal(l) => l.lexical.clone(),
    }
}

/// Reconstructs source metadata and profiles from a graph produced by
/// [`build_graph`](super::build_graph). Element lists come back in the
/// canonical profile order whatever their IRIs.
pub fn read_source(graph: &MetaGraph) -> Result<SourceDescription, ReadError> {
    let sources = graph.instances_of(dl::SOURCE);
    let src = match sources.as_slice() {
        [] => return Err(ReadError::NoSource),
        [s] => *s,
        more => return Err(ReadError::SeveralSources(more.len())),
    };
    let r = Reader { g: graph };
    let mut subjects: Vec<String> = r
        .children(src, dcterms::SUBJECT)
        .filter_map(|t| t.as_iri().map(String::from))
        .collect();
    subjects.sort();
    let contributors: Vec<String> = r
        .children(src, dcterms::CONTRIBUTOR)
        .filter_map(|t| t.as_literal().map(|l| l.lexical.clone()))
        .collect();
    let metadata = SourceMetadata {
        name: r.string(src, rdfs::LABEL)?.unwrap_or_default(),
        location: r.string(src, dl::LOCATION)?.unwrap_or_default(),
        items: r.count(src, dl::ITEMS)?,
        title: r.string(src, dcterms::TITLE)?,
        description: r.string(src, dcterms::DESCRIPTION)?,
        format: r.string(src, dcterms::FORMAT)?,
        creator: r.string(src, dcterms::CREATOR)?,
        publisher: r.string(src, dcterms::PUBLISHER)?,
        contributors,
        date: r.string(src, dcterms::DATE)?,
        license: r.string(src, dcterms::LICENSE)?,
        subjects,
    };
    let domains = r.count(src, dl::DOMAINS)?;
    let mut attributes = r
        .children(src, dl::CONTAINS)
        .map(|d| read_attribute(&r, d))
        .collect::<Result<Vec<_>, _>>()?;
    attributes.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(SourceDescription {
        iri: term_text(src),
        metadata,
        domains,
        attributes,
    })
}

fn read_attribute(r: &Reader<'_>, dom: &Term) -> Result<AttributeDescription, ReadError> {
    let name = r
        .string(dom, rdfs::LABEL)?
        .ok_or_else(|| ReadError::Missing {
            subject: term_text(dom),
            predicate: rdfs::LABEL,
        })?;
    let ty = r.req_literal(dom, dl::ATTRIBUTE_TYPE)?;
    let category: AttributeCategory = ty
        .lexical
        .parse()
        .map_err(|_| bad(dom, dl::ATTRIBUTE_TYPE, ty.lexical.clone()))?;
    let mapping = match r.iri(dom, dl::MAP_TO)? {
        None => None,
        Some(t) if r.g.has_type(&Term::iri(t), kpi::LEVEL) => Some(MappingTarget::Level(t.into())),
        Some(t) if r.g.has_type(&Term::iri(t), kpi::INDICATOR) => {
            Some(MappingTarget::Indicator(t.into()))
        }
        Some(t) => return Err(bad(dom, dl::MAP_TO, t.into())),
    };
    let profile = if let Some(dp) = r.iri(dom, dl::HAS_D_PROFILE)? {
        let level = match &mapping {
            Some(MappingTarget::Level(l)) => l.clone(),
            _ => {
                return Err(ReadError::Missing {
                    subject: term_text(dom),
                    predicate: dl::MAP_TO,
                })
            }
        };
        Profile::Dimensional(read_dprofile(r, &Term::iri(dp), level)?)
    } else if let Some(ip) = r.iri(dom, dl::HAS_I_PROFILE)? {
        Profile::Attribute(read_iprofile(r, &Term::iri(ip), category)?)
    } else {
        return Err(ReadError::NoProfile(term_text(dom)));
    };
    Ok(AttributeDescription {
        iri: term_text(dom),
        name,
        category,
        mapping,
        profile,
    })
}

fn read_dprofile(r: &Reader<'_>, prof: &Term, level: String) -> Result<DProfile, ReadError> {
    let mut elements = Vec::new();
    let mut others = 0u64;
    for el in r.children(prof, dl::HAS_D_PROFILE_ELEMENT) {
        if r.literal(el, dl::OTHERS)?.is_some() {
            others += r.count(el, dl::OTHERS)?;
            continue;
        }
        elements.push(MemberFrequency {
            member: r.req_iri(el, dl::TO_MEMBER)?.into(),
            frequency: r.count(el, dl::FREQUENCY)?,
        });
    }
    elements.sort_by(|a, b| {
        b.frequency
            .cmp(&a.frequency)
            .then_with(|| a.member.cmp(&b.member))
    });
    Ok(DProfile {
        level,
        elements,
        others,
    })
}

fn read_iprofile(
    r: &Reader<'_>,
    prof: &Term,
    category: AttributeCategory,
) -> Result<IProfile, ReadError> {
    let null = r.count(prof, dl::NULL)?;
    Ok(match category {
        AttributeCategory::Integer | AttributeCategory::Decimal => {
            let dist = r.collection(prof, dl::HAS_DISTRIBUTION)?;
            let mut elements = r
                .children(&dist, dl::HAS_DISTRIBUTION_ELEMENT)
                .map(|e| {
                    Ok(Bin {
                        start_range: r.number(e, dl::START_RANGE)?,
                        end_range: r.number(e, dl::END_RANGE)?,
                        count: r.count(e, dl::COUNT)?,
                    })
                })
                .collect::<Result<Vec<_>, ReadError>>()?;
            sort_bins(&mut elements);
            IProfile::Numeric(NumericProfile {
                kind: if category == AttributeCategory::Integer {
                    NumericKind::Integer
                } else {
                    NumericKind::Decimal
                },
                max: r.number(prof, dl::MAX)?,
                min: r.number(prof, dl::MIN)?,
                mean: r.number(prof, dl::MEAN)?,
                median: r.number(prof, dl::MEDIAN)?,
                distinct: r.count(prof, dl::DISTINCT)?,
                null,
                distribution: Distribution { elements },
            })
        }
        AttributeCategory::Categorical => {
            let cats = r.collection(prof, dl::HAS_CATEGORIES)?;
            let mut categories = r
                .children(&cats, dl::HAS_CATEGORY_ELEMENT)
                .map(|e| {
                    Ok(CategoryCount {
                        name: r.req_literal(e, dl::CATEGORY)?.lexical.clone(),
                        count: r.count(e, dl::CATEGORY_COUNT)?,
                    })
                })
                .collect::<Result<Vec<_>, ReadError>>()?;
            categories.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.name.cmp(&b.name)));
            IProfile::Categorical(CategoricalProfile { null, categories })
        }
        AttributeCategory::Datetime => {
            let ys = r.collection(prof, dl::HAS_YEARS)?;
            let mut years = r
                .children(&ys, dl::HAS_YEAR_ELEMENT)
                .map(|e| {
                    let y = r.req_literal(e, dl::YEAR)?;
                    Ok(YearCount {
                        year: y
                            .as_i64()
                            .and_then(|v| i32::try_from(v).ok())
                            .ok_or_else(|| bad(e, dl::YEAR, y.lexical.to_string()))?,
                        count: r.count(e, dl::YEAR_COUNT)?,
                    })
                })
                .collect::<Result<Vec<_>, ReadError>>()?;
            years.sort_by_key(|y| y.year);
            IProfile::Datetime(DatetimeProfile {
                distinct: r.count(prof, dl::DISTINCT)?,
                null,
                min_date: r.timestamp(prof, dl::MIN_DATE)?,
                max_date: r.timestamp(prof, dl::MAX_DATE)?,
                years,
            })
        }
        AttributeCategory::Textual => {
            let ws = r.collection(prof, dl::HAS_WORDS)?;
            let mut words = r
                .children(&ws, dl::HAS_WORD_ELEMENT)
                .map(|e| {
                    Ok(WordCount {
                        word: r.req_literal(e, dl::WORD)?.lexical.clone(),
                        count: r.count(e, dl::WORD_COUNT)?,
                    })
                })
                .collect::<Result<Vec<_>, ReadError>>()?;
            words.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.word.cmp(&b.word)));
            IProfile::Textual(TextualProfile {
                null,
                words_total: r.count(prof, dl::WORDS)?,
                words,
            })
        }
        AttributeCategory::Unrecognized => IProfile::Unrecognized { null },
    })
}
