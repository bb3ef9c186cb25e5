use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashSet;
use thiserror::Error;

use super::iri::{mint_iri, IriKind};
use super::vocab::{dcterms, dl, kpi, rdfs, void, xsd};
use super::{Literal, MetaGraph, Term};
use crate::kg::{Mapping, MappingTarget};
use crate::profile::{
    CategoricalProfile, DProfile, DatetimeProfile, IProfile, NumericKind, NumericProfile, Profile,
    TextualProfile,
};
use crate::typing::{AttributeCategory, Timestamp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("attribute `{attribute}`: {reason}")]
    ProfileCategoryMismatch {
        attribute: String,
        reason: &'static str,
    },
    #[error("attribute name `{0}` appears more than once")]
    DuplicateAttributeName(String),
    #[error("source name must not be empty")]
    EmptySourceName,
    #[error("attribute names must not be empty")]
    EmptyAttributeName,
}

/// Source-level facts. DCMI fields are written only when set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SourceMetadata {
    /// Used to mint the source IRI and written as its `rdfs:label`.
    pub name: String,
    pub location: String,
    pub items: u64,
    pub title: Option<String>,
    pub description: Option<String>,
    pub format: Option<String>,
    pub creator: Option<String>,
    pub publisher: Option<String>,
    pub contributors: Vec<String>,
    pub date: Option<String>,
    pub license: Option<String>,
    /// Subject IRIs.
    pub subjects: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributeInput {
    pub name: String,
    pub category: AttributeCategory,
    pub mapping: Option<Mapping>,
    pub profile: Profile,
}

/// Builds the metadata graph of one profiled source. KG prefixes can be
/// added to the result afterwards with [`MetaGraph::add_prefix`].
pub fn build_graph(
    meta: &SourceMetadata,
    attrs: &[AttributeInput],
) -> Result<MetaGraph, BuildError> {
    if meta.name.is_empty() {
        return Err(BuildError::EmptySourceName);
    }
    let mut seen = HashSet::new();
    for a in attrs {
        if a.name.is_empty() {
            return Err(BuildError::EmptyAttributeName);
        }
        if !seen.insert(a.name.as_str()) {
            return Err(BuildError::DuplicateAttributeName(a.name.clone()));
        }
        check_consistency(a)?;
    }

    let mut g = MetaGraph::with_standard_prefixes();
    let src = mint_iri(IriKind::Source { name: &meta.name });
    g.add_type(&src, dl::SOURCE);
    g.add_type(&src, void::DATASET);
    g.add(&src, rdfs::LABEL, Literal::string(meta.name.as_str()));
    g.add(&src, dl::LOCATION, Literal::string(meta.location.as_str()));
    g.add(&src, dl::ITEMS, Literal::integer(meta.items));
    g.add(&src, dl::DOMAINS, Literal::integer(attrs.len()));
    let optional = [
        (dcterms::TITLE, &meta.title),
        (dcterms::DESCRIPTION, &meta.description),
        (dcterms::FORMAT, &meta.format),
        (dcterms::CREATOR, &meta.creator),
        (dcterms::PUBLISHER, &meta.publisher),
        (dcterms::DATE, &meta.date),
        (dcterms::LICENSE, &meta.license),
    ];
    for (p, v) in optional {
        if let Some(v) = v {
            g.add(&src, p, Literal::string(v.as_str()));
        }
    }
    for c in &meta.contributors {
        g.add(&src, dcterms::CONTRIBUTOR, Literal::string(c.as_str()));
    }
    for s in &meta.subjects {
        g.add(&src, dcterms::SUBJECT, Term::iri(s.as_str()));
    }

    for a in attrs {
        let dom = mint_iri(IriKind::Domain {
            source: &src,
            name: &a.name,
        });
        g.add(&src, dl::CONTAINS, Term::iri(dom.as_str()));
        g.add_type(&dom, dl::DOMAIN);
        g.add(&dom, rdfs::LABEL, Literal::string(a.name.as_str()));
        g.add(
            &dom,
            dl::ATTRIBUTE_TYPE,
            Literal::string(a.category.as_str()),
        );
        if let Some(m) = &a.mapping {
            let (iri, class) = match &m.target {
                MappingTarget::Level(l) => (l, kpi::LEVEL),
                MappingTarget::Indicator(i) => (i, kpi::INDICATOR),
            };
            g.add(&dom, dl::MAP_TO, Term::iri(iri.as_str()));
            g.add_type(iri, class);
        }
        match &a.profile {
            Profile::Dimensional(p) => emit_dprofile(&mut g, &dom, p),
            Profile::Attribute(p) => emit_iprofile(&mut g, &dom, p),
        }
    }
    Ok(g)
}

fn check_consistency(a: &AttributeInput) -> Result<(), BuildError> {
    let fail = |reason| {
        Err(BuildError::ProfileCategoryMismatch {
            attribute: a.name.clone(),
            reason,
        })
    };
    match (&a.profile, a.mapping.as_ref().map(|m| &m.target)) {
        (Profile::Dimensional(p), Some(MappingTarget::Level(l))) if *l == p.level => Ok(()),
        (Profile::Dimensional(_), _) => fail("dimensional profile needs a mapping to its level"),
        (Profile::Attribute(_), Some(MappingTarget::Level(_))) => {
            fail("level mapping without a dimensional profile")
        }
        (Profile::Attribute(p), _) if !p.matches(a.category) => {
            fail("profile shape does not match the category")
        }
        (Profile::Attribute(_), Some(MappingTarget::Indicator(_))) if !a.category.is_numeric() => {
            fail("only numeric attributes map to indicators")
        }
        _ => Ok(()),
    }
}

fn emit_dprofile(g: &mut MetaGraph, dom: &str, p: &DProfile) {
    let prof = mint_iri(IriKind::DProfile { domain: dom });
    g.add(dom, dl::HAS_D_PROFILE, Term::iri(prof.as_str()));
    g.add_type(&prof, dl::D_PROFILE);
    for (i, e) in p.elements.iter().enumerate() {
        let el = mint_iri(IriKind::Element {
            parent: &prof,
            index: i,
        });
        g.add(&prof, dl::HAS_D_PROFILE_ELEMENT, Term::iri(el.as_str()));
        g.add_type(&el, dl::D_PROFILE_ELEMENT);
        g.add(&el, dl::TO_MEMBER, Term::iri(e.member.as_str()));
        g.add(&el, dl::FREQUENCY, Literal::integer(e.frequency));
        g.add_type(&e.member, kpi::MEMBER);
    }
    let others = mint_iri(IriKind::Others { dprofile: &prof });
    g.add(&prof, dl::HAS_D_PROFILE_ELEMENT, Term::iri(others.as_str()));
    g.add_type(&others, dl::D_PROFILE_ELEMENT);
    g.add(&others, dl::OTHERS, Literal::integer(p.others));
}

fn emit_iprofile(g: &mut MetaGraph, dom: &str, p: &IProfile) {
    let prof = mint_iri(IriKind::IProfile { domain: dom });
    g.add(dom, dl::HAS_I_PROFILE, Term::iri(prof.as_str()));
    g.add_type(&prof, dl::I_PROFILE);
    g.add(&prof, dl::NULL, Literal::integer(p.null()));
    match p {
        IProfile::Numeric(n) => emit_numeric(g, &prof, n),
        IProfile::Categorical(c) => emit_categorical(g, &prof, c),
        IProfile::Datetime(d) => emit_datetime(g, &prof, d),
        IProfile::Textual(t) => emit_textual(g, &prof, t),
        IProfile::Unrecognized { .. } => {}
    }
}

/// Integer attributes keep `xsd:integer` extremes when the value is exact.
fn extreme_literal(kind: NumericKind, v: f64) -> Literal {
    const LIMIT: f64 = 9_223_372_036_854_775_808.0; // 2^63
    if kind == NumericKind::Integer && (-LIMIT..LIMIT).contains(&v) && (v as i64) as f64 == v {
        Literal::integer(v as i64)
    } else {
        Literal::decimal(v)
    }
}

/// Adds a collection node under `prof` and returns its IRI.
fn collection(g: &mut MetaGraph, prof: &str, name: &str, link: &str, class: &str) -> String {
    let iri = mint_iri(IriKind::Collection {
        profile: prof,
        name,
    });
    g.add(prof, link, Term::iri(iri.as_str()));
    g.add_type(&iri, class);
    iri
}

fn element(g: &mut MetaGraph, parent: &str, index: usize, link: &str, class: &str) -> String {
    let iri = mint_iri(IriKind::Element { parent, index });
    g.add(parent, link, Term::iri(iri.as_str()));
    g.add_type(&iri, class);
    iri
}

fn emit_numeric(g: &mut MetaGraph, prof: &str, n: &NumericProfile) {
    g.add(prof, dl::MAX, extreme_literal(n.kind, n.max));
    g.add(prof, dl::MIN, extreme_literal(n.kind, n.min));
    g.add(prof, dl::MEAN, Literal::decimal(n.mean));
    g.add(prof, dl::MEDIAN, Literal::decimal(n.median));
    g.add(prof, dl::DISTINCT, Literal::integer(n.distinct));
    let dist = collection(
        g,
        prof,
        "distribution",
        dl::HAS_DISTRIBUTION,
        dl::DISTRIBUTION,
    );
    for (i, b) in n.distribution.elements.iter().enumerate() {
        let el = element(
            g,
            &dist,
            i,
            dl::HAS_DISTRIBUTION_ELEMENT,
            dl::DISTRIBUTION_ELEMENT,
        );
        g.add(&el, dl::START_RANGE, Literal::decimal(b.start_range));
        g.add(&el, dl::END_RANGE, Literal::decimal(b.end_range));
        g.add(&el, dl::COUNT, Literal::integer(b.count));
    }
}

fn emit_categorical(g: &mut MetaGraph, prof: &str, c: &CategoricalProfile) {
    let cats = collection(g, prof, "categories", dl::HAS_CATEGORIES, dl::CATEGORIES);
    for (i, c) in c.categories.iter().enumerate() {
        let el = element(g, &cats, i, dl::HAS_CATEGORY_ELEMENT, dl::CATEGORY_ELEMENT);
        g.add(&el, dl::CATEGORY, Literal::string(c.name.as_str()));
        g.add(&el, dl::CATEGORY_COUNT, Literal::integer(c.count));
    }
}

pub(crate) fn timestamp_literal(t: &Timestamp) -> Literal {
    let dt = if t.is_date_only() {
        xsd::DATE
    } else {
        xsd::DATE_TIME
    };
    Literal::typed(alloc::string::ToString::to_string(t), dt)
}

fn emit_datetime(g: &mut MetaGraph, prof: &str, d: &DatetimeProfile) {
    g.add(prof, dl::DISTINCT, Literal::integer(d.distinct));
    g.add(prof, dl::MIN_DATE, timestamp_literal(&d.min_date));
    g.add(prof, dl::MAX_DATE, timestamp_literal(&d.max_date));
    let years = collection(g, prof, "years", dl::HAS_YEARS, dl::YEARS);
    for (i, y) in d.years.iter().enumerate() {
        let el = element(g, &years, i, dl::HAS_YEAR_ELEMENT, dl::YEAR_ELEMENT);
        g.add(&el, dl::YEAR, Literal::integer(y.year));
        g.add(&el, dl::YEAR_COUNT, Literal::integer(y.count));
    }
}

fn emit_textual(g: &mut MetaGraph, prof: &str, t: &TextualProfile) {
    g.add(prof, dl::WORDS, Literal::integer(t.words_total));
    let words = collection(g, prof, "words", dl::HAS_WORDS, dl::WORDS_CLASS);
    for (i, w) in t.words.iter().enumerate() {
        let el = element(g, &words, i, dl::HAS_WORD_ELEMENT, dl::WORD_ELEMENT);
        g.add(&el, dl::WORD, Literal::string(w.word.as_str()));
        g.add(&el, dl::WORD_COUNT, Literal::integer(w.count));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{Bin, Distribution, MemberFrequency};
    use alloc::vec;

    fn meta() -> SourceMetadata {
        SourceMetadata {
            name: "vehicles".into(),
            location: "data/vehicles.csv".into(),
            items: 5,
            ..Default::default()
        }
    }

    fn int_profile() -> IProfile {
        IProfile::Numeric(NumericProfile {
            kind: NumericKind::Integer,
            max: 5.0,
            min: 1.0,
            mean: 3.0,
            median: 3.0,
            distinct: 5,
            null: 0,
            distribution: Distribution {
                elements: vec![
                    Bin {
                        start_range: 1.0,
                        end_range: 3.0,
                        count: 2,
                    },
                    Bin {
                        start_range: 3.0,
                        end_range: 5.0,
                        count: 3,
                    },
                ],
            },
        })
    }

    fn vat() -> AttributeInput {
        AttributeInput {
            name: "VAT".into(),
            category: AttributeCategory::Integer,
            mapping: None,
            profile: Profile::Attribute(int_profile()),
        }
    }

    fn lit(g: &MetaGraph, s: &str, p: &str) -> Literal {
        g.object(&Term::iri(s), p)
            .unwrap()
            .as_literal()
            .unwrap()
            .clone()
    }

    #[test]
    fn integer_profile_triples() {
        let g = build_graph(&meta(), &[vat()]).unwrap();
        let prof = "http://kdmg.dii.univpm.it/dl/source/vehicles/domain/VAT/iprofile";
        assert_eq!(lit(&g, prof, dl::MAX), Literal::integer(5));
        assert_eq!(lit(&g, prof, dl::MIN), Literal::integer(1));
        assert_eq!(lit(&g, prof, dl::MEAN), Literal::typed("3", xsd::DECIMAL));
        let e1 = "http://kdmg.dii.univpm.it/dl/source/vehicles/domain/VAT/iprofile/distribution/e1";
        assert_eq!(
            lit(&g, e1, dl::START_RANGE),
            Literal::typed("3", xsd::DECIMAL)
        );
        assert_eq!(
            lit(&g, e1, dl::END_RANGE),
            Literal::typed("5", xsd::DECIMAL)
        );
        assert_eq!(lit(&g, e1, dl::COUNT), Literal::integer(3));
    }

    #[test]
    fn source_node() {
        let g = build_graph(&meta(), &[vat()]).unwrap();
        let src = "http://kdmg.dii.univpm.it/dl/source/vehicles";
        assert_eq!(g.instances_of(dl::SOURCE).len(), 1);
        assert!(g.has_type(&Term::iri(src), void::DATASET));
        assert_eq!(lit(&g, src, dl::ITEMS), Literal::integer(5));
        assert_eq!(lit(&g, src, dl::DOMAINS), Literal::integer(1));
        assert!(g.object(&Term::iri(src), dcterms::TITLE).is_none());
    }

    #[test]
    fn duplicate_names() {
        assert_eq!(
            build_graph(&meta(), &[vat(), vat()]),
            Err(BuildError::DuplicateAttributeName("VAT".into()))
        );
    }

    #[test]
    fn category_mismatch() {
        let mut a = vat();
        a.category = AttributeCategory::Textual;
        assert!(matches!(
            build_graph(&meta(), &[a]),
            Err(BuildError::ProfileCategoryMismatch { .. })
        ));
    }

    #[test]
    fn dimensional_needs_level_mapping() {
        let p = DProfile {
            level: "http://kg/City".into(),
            elements: vec![MemberFrequency {
                member: "http://kg/Milan".into(),
                frequency: 2,
            }],
            others: 1,
        };
        let mut a = AttributeInput {
            name: "city".into(),
            category: AttributeCategory::Categorical,
            mapping: None,
            profile: Profile::Dimensional(p),
        };
        assert!(build_graph(&meta(), core::slice::from_ref(&a)).is_err());
        a.mapping = Some(Mapping {
            attribute: "city".into(),
            target: MappingTarget::Level("http://kg/City".into()),
            score: 1.0,
        });
        let g = build_graph(&meta(), &[a]).unwrap();
        assert!(g.has_type(&Term::iri("http://kg/Milan"), kpi::MEMBER));
        let others = "http://kdmg.dii.univpm.it/dl/source/vehicles/domain/city/dprofile/others";
        assert_eq!(lit(&g, others, dl::OTHERS), Literal::integer(1));
    }
}
