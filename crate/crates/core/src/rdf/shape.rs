//! Domain/range conformance of metadata graphs.
//!
//! Every predicate the builder emits has a declared subject class and an
//! object class or literal kind. [`validate`] checks each triple against
//! that table, then checks the structural invariants of a source graph:
//! a single source node, every attribute attached to it exactly once,
//! every profile reachable from an attribute, and `dl:domains` matching
//! the attributes present.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

use super::vocab::{dcterms, dl, kpi, rdf, rdfs, void, xsd};
use super::{Literal, MetaGraph, Term};
use crate::typing::{parse_integer, AttributeCategory, Timestamp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub subject: String,
    pub predicate: Option<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.predicate {
            Some(p) => write!(f, "<{}> <{}>: {}", self.subject, p, self.message),
            None => write!(f, "<{}>: {}", self.subject, self.message),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Range {
    Class(&'static [&'static str]),
    AnyIri,
    Str,
    Count,
    Integer,
    Number,
    Temporal,
    Category,
}

struct Rule {
    predicate: &'static str,
    domain: &'static [&'static str],
    range: Range,
    functional: bool,
}

const SOURCE: &[&str] = &[dl::SOURCE];
const DOMAIN: &[&str] = &[dl::DOMAIN];
const IPROF: &[&str] = &[dl::I_PROFILE];
const DPE: &[&str] = &[dl::D_PROFILE_ELEMENT];

const fn rule(
    predicate: &'static str,
    domain: &'static [&'static str],
    range: Range,
    functional: bool,
) -> Rule {
    Rule {
        predicate,
        domain,
        range,
        functional,
    }
}

static RULES: &[Rule] = &[
    rule(dl::LOCATION, SOURCE, Range::Str, true),
    rule(dl::DOMAINS, SOURCE, Range::Count, true),
    rule(dl::ITEMS, SOURCE, Range::Count, true),
    rule(dl::CONTAINS, SOURCE, Range::Class(DOMAIN), false),
    rule(rdfs::LABEL, &[dl::SOURCE, dl::DOMAIN], Range::Str, true),
    rule(dcterms::TITLE, SOURCE, Range::Str, true),
    rule(dcterms::DESCRIPTION, SOURCE, Range::Str, true),
    rule(dcterms::FORMAT, SOURCE, Range::Str, true),
    rule(dcterms::CREATOR, SOURCE, Range::Str, true),
    rule(dcterms::PUBLISHER, SOURCE, Range::Str, true),
    rule(dcterms::CONTRIBUTOR, SOURCE, Range::Str, false),
    rule(dcterms::DATE, SOURCE, Range::Str, true),
    rule(dcterms::LICENSE, SOURCE, Range::Str, true),
    rule(dcterms::SUBJECT, SOURCE, Range::AnyIri, false),
    rule(dl::ATTRIBUTE_TYPE, DOMAIN, Range::Category, true),
    rule(
        dl::MAP_TO,
        DOMAIN,
        Range::Class(&[kpi::LEVEL, kpi::INDICATOR]),
        true,
    ),
    rule(
        dl::HAS_D_PROFILE,
        DOMAIN,
        Range::Class(&[dl::D_PROFILE]),
        true,
    ),
    rule(dl::HAS_I_PROFILE, DOMAIN, Range::Class(IPROF), true),
    rule(
        dl::HAS_D_PROFILE_ELEMENT,
        &[dl::D_PROFILE],
        Range::Class(DPE),
        false,
    ),
    rule(dl::TO_MEMBER, DPE, Range::Class(&[kpi::MEMBER]), true),
    rule(dl::FREQUENCY, DPE, Range::Count, true),
    rule(dl::OTHERS, DPE, Range::Count, true),
    rule(dl::MAX, IPROF, Range::Number, true),
    rule(dl::MIN, IPROF, Range::Number, true),
    rule(dl::MEAN, IPROF, Range::Number, true),
    rule(dl::MEDIAN, IPROF, Range::Number, true),
    rule(dl::DISTINCT, IPROF, Range::Count, true),
    rule(dl::NULL, IPROF, Range::Count, true),
    rule(
        dl::HAS_DISTRIBUTION,
        IPROF,
        Range::Class(&[dl::DISTRIBUTION]),
        true,
    ),
    rule(
        dl::HAS_DISTRIBUTION_ELEMENT,
        &[dl::DISTRIBUTION],
        Range::Class(&[dl::DISTRIBUTION_ELEMENT]),
        false,
    ),
    rule(
        dl::START_RANGE,
        &[dl::DISTRIBUTION_ELEMENT],
        Range::Number,
        true,
    ),
    rule(
        dl::END_RANGE,
        &[dl::DISTRIBUTION_ELEMENT],
        Range::Number,
        true,
    ),
    rule(dl::COUNT, &[dl::DISTRIBUTION_ELEMENT], Range::Count, true),
    rule(
        dl::HAS_CATEGORIES,
        IPROF,
        Range::Class(&[dl::CATEGORIES]),
        true,
    ),
    rule(
        dl::HAS_CATEGORY_ELEMENT,
        &[dl::CATEGORIES],
        Range::Class(&[dl::CATEGORY_ELEMENT]),
        false,
    ),
    rule(dl::CATEGORY, &[dl::CATEGORY_ELEMENT], Range::Str, true),
    rule(
        dl::CATEGORY_COUNT,
        &[dl::CATEGORY_ELEMENT],
        Range::Count,
        true,
    ),
    rule(dl::MIN_DATE, IPROF, Range::Temporal, true),
    rule(dl::MAX_DATE, IPROF, Range::Temporal, true),
    rule(dl::HAS_YEARS, IPROF, Range::Class(&[dl::YEARS]), true),
    rule(
        dl::HAS_YEAR_ELEMENT,
        &[dl::YEARS],
        Range::Class(&[dl::YEAR_ELEMENT]),
        false,
    ),
    rule(dl::YEAR, &[dl::YEAR_ELEMENT], Range::Integer, true),
    rule(dl::YEAR_COUNT, &[dl::YEAR_ELEMENT], Range::Count, true),
    rule(dl::WORDS, IPROF, Range::Count, true),
    rule(dl::HAS_WORDS, IPROF, Range::Class(&[dl::WORDS_CLASS]), true),
    rule(
        dl::HAS_WORD_ELEMENT,
        &[dl::WORDS_CLASS],
        Range::Class(&[dl::WORD_ELEMENT]),
        false,
    ),
    rule(dl::WORD, &[dl::WORD_ELEMENT], Range::Str, true),
    rule(dl::WORD_COUNT, &[dl::WORD_ELEMENT], Range::Count, true),
];

fn rule_for(predicate: &str) -> Option<&'static Rule> {
    RULES.iter().find(|r| r.predicate == predicate)
}

fn is_decimal_lexical(s: &str) -> bool {
    let s = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    (!int.is_empty() || !frac.is_empty())
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.bytes().all(|b| b.is_ascii_digit())
}

fn check_literal(range: Range, l: &Literal) -> Result<(), String> {
    let ok = match range {
        Range::Str => l.datatype == xsd::STRING || l.datatype == rdf::LANG_STRING,
        Range::Count => {
            l.datatype == xsd::INTEGER && parse_integer(&l.lexical).is_some_and(|v| v >= 0)
        }
        Range::Integer => l.datatype == xsd::INTEGER && parse_integer(&l.lexical).is_some(),
        Range::Number => {
            (l.datatype == xsd::INTEGER && parse_integer(&l.lexical).is_some())
                || (l.datatype == xsd::DECIMAL && is_decimal_lexical(&l.lexical))
        }
        Range::Temporal => match Timestamp::parse_iso_str(&l.lexical) {
            Some(t) if l.datatype == xsd::DATE => t.is_date_only(),
            Some(t) if l.datatype == xsd::DATE_TIME => !t.is_date_only(),
            _ => false,
        },
        Range::Category => {
            l.datatype == xsd::STRING && l.lexical.parse::<AttributeCategory>().is_ok()
        }
        Range::Class(_) | Range::AnyIri => false,
    };
    if ok {
        Ok(())
    } else {
        Err(format!(
            "literal \"{}\"^^<{}> does not fit {:?}",
            l.lexical, l.datatype, range
        ))
    }
}

fn term_text(t: &Term) -> String {
    match t {
        Term::Iri(i) => i.clone(),
        Term::Blank(b) => format!("_:{b}"),
        Term::Literal(l) => l.lexical.clone(),
    }
}

/// All violations found in `graph`; empty means it conforms.
pub fn validate(graph: &MetaGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |s: &Term, p: Option<&str>, message: String| {
        out.push(Violation {
            subject: term_text(s),
            predicate: p.map(String::from),
            message,
        })
    };

    let mut uses: HashMap<(&Term, &str), usize> = HashMap::new();
    for t in graph.iter() {
        if t.predicate == rdf::TYPE {
            if t.object.as_iri().is_none() {
                push(&t.subject, Some(rdf::TYPE), "type must be an IRI".into());
            }
            continue;
        }
        let Some(rule) = rule_for(&t.predicate) else {
            push(
                &t.subject,
                Some(&t.predicate),
                "predicate outside the metadata vocabulary".into(),
            );
            continue;
        };
        if !rule.domain.iter().any(|c| graph.has_type(&t.subject, c)) {
            push(
                &t.subject,
                Some(rule.predicate),
                format!("subject is not typed {}", rule.domain.join(" or ")),
            );
        }
        match (rule.range, &t.object) {
            (Range::Class(classes), Term::Iri(_) | Term::Blank(_)) => {
                if !classes.iter().any(|c| graph.has_type(&t.object, c)) {
                    push(
                        &t.subject,
                        Some(rule.predicate),
                        format!(
                            "object {} is not typed {}",
                            term_text(&t.object),
                            classes.join(" or ")
                        ),
                    );
                }
            }
            (Range::AnyIri, Term::Iri(_)) => {}
            (Range::Class(_) | Range::AnyIri, Term::Literal(_)) => push(
                &t.subject,
                Some(rule.predicate),
                "expected a resource, found a literal".into(),
            ),
            (range, Term::Literal(l)) => {
                if let Err(m) = check_literal(range, l) {
                    push(&t.subject, Some(rule.predicate), m);
                }
            }
            (_, _) => push(
                &t.subject,
                Some(rule.predicate),
                "expected a literal".into(),
            ),
        }
        if rule.functional {
            let n = uses.entry((&t.subject, rule.predicate)).or_insert(0);
            *n += 1;
            if *n == 2 {
                push(
                    &t.subject,
                    Some(rule.predicate),
                    "property may appear at most once".into(),
                );
            }
        }
    }

    check_structure(graph, &mut push);
    out
}

pub fn conforms(graph: &MetaGraph) -> bool {
    validate(graph).is_empty()
}

fn check_structure(graph: &MetaGraph, push: &mut impl FnMut(&Term, Option<&str>, String)) {
    let sources = graph.instances_of(dl::SOURCE);
    let src = match sources.as_slice() {
        [s] => *s,
        [] => {
            push(&Term::iri(""), None, "graph has no dl:Source node".into());
            return;
        }
        many => {
            for s in many {
                push(s, None, format!("graph has {} dl:Source nodes", many.len()));
            }
            return;
        }
    };
    if !graph.has_type(src, void::DATASET) {
        push(
            src,
            Some(rdf::TYPE),
            "source is not typed void:Dataset".into(),
        );
    }
    for p in [dl::LOCATION, dl::ITEMS, dl::DOMAINS] {
        if graph.object(src, p).is_none() {
            push(src, Some(p), "required property missing".into());
        }
    }

    let domains = graph.instances_of(dl::DOMAIN);
    if let Some(n) = graph
        .object(src, dl::DOMAINS)
        .and_then(Term::as_literal)
        .and_then(Literal::as_u64)
    {
        if n != domains.len() as u64 {
            push(
                src,
                Some(dl::DOMAINS),
                format!("declares {n} attributes but {} are present", domains.len()),
            );
        }
    }
    let mut contained_by: HashMap<&Term, usize> = HashMap::new();
    for t in graph.iter().filter(|t| t.predicate == dl::CONTAINS) {
        if &t.subject == src {
            *contained_by.entry(&t.object).or_insert(0) += 1;
        }
    }
    for d in &domains {
        match contained_by.get(d).copied().unwrap_or(0) {
            1 => {}
            n => push(
                d,
                Some(dl::CONTAINS),
                format!("attribute is contained {n} times by the source"),
            ),
        }
        if graph.object(d, rdfs::LABEL).is_none() {
            push(d, Some(rdfs::LABEL), "attribute has no name".into());
        }
        let dp = graph.object(d, dl::HAS_D_PROFILE);
        let ip = graph.object(d, dl::HAS_I_PROFILE);
        match (dp, ip) {
            (Some(_), None) => {
                let level = graph
                    .object(d, dl::MAP_TO)
                    .is_some_and(|l| graph.has_type(l, kpi::LEVEL));
                if !level {
                    push(
                        d,
                        Some(dl::MAP_TO),
                        "dimensional profile without a level mapping".into(),
                    );
                }
            }
            (None, Some(_)) => {}
            _ => push(d, None, "attribute needs exactly one profile".into()),
        }
    }

    // profiles must hang off a contained attribute
    for (class, link) in [
        (dl::D_PROFILE, dl::HAS_D_PROFILE),
        (dl::I_PROFILE, dl::HAS_I_PROFILE),
    ] {
        for p in graph.instances_of(class) {
            let reachable = graph
                .subjects(link, p)
                .any(|d| contained_by.contains_key(d));
            if !reachable {
                push(
                    p,
                    None,
                    "profile is not reachable from the source".to_string(),
                );
            }
        }
    }
    for e in graph.instances_of(dl::D_PROFILE_ELEMENT) {
        let member =
            graph.object(e, dl::TO_MEMBER).is_some() && graph.object(e, dl::FREQUENCY).is_some();
        let others = graph.object(e, dl::OTHERS).is_some();
        if member == others {
            push(
                e,
                None,
                "element needs either a member with a frequency or an others count".into(),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{IProfile, Profile};
    use crate::rdf::{build_graph, AttributeInput, SourceMetadata, Triple};
    use alloc::vec;

    fn graph() -> MetaGraph {
        let meta = SourceMetadata {
            name: "s".into(),
            location: "s.csv".into(),
            items: 2,
            ..Default::default()
        };
        let a = AttributeInput {
            name: "x".into(),
            category: AttributeCategory::Unrecognized,
            mapping: None,
            profile: Profile::Attribute(IProfile::Unrecognized { null: 2 }),
        };
        build_graph(&meta, &[a]).unwrap()
    }

    #[test]
    fn built_graph_conforms() {
        assert_eq!(validate(&graph()), vec![]);
    }

    #[test]
    fn two_sources() {
        let mut g = graph();
        g.add_type("http://other", dl::SOURCE);
        assert!(validate(&g)
            .iter()
            .any(|v| v.message.contains("2 dl:Source")));
    }

    #[test]
    fn wrong_domain_and_datatype() {
        let mut g = graph();
        let dom = "http://kdmg.dii.univpm.it/dl/source/s/domain/x";
        g.add(dom, dl::ITEMS, Literal::integer(1));
        let prof = "http://kdmg.dii.univpm.it/dl/source/s/domain/x/iprofile";
        g.add(prof, dl::MAX, Literal::string("big"));
        let v = validate(&g);
        assert!(v
            .iter()
            .any(|v| v.subject == dom && v.message.contains("not typed")));
        assert!(v
            .iter()
            .any(|v| v.subject == prof && v.message.contains("does not fit")));
    }

    #[test]
    fn unknown_predicate_and_negative_count() {
        let g = graph();
        let prof = Term::iri("http://kdmg.dii.univpm.it/dl/source/s/domain/x/iprofile");
        let old = Triple::new(prof.clone(), dl::NULL, Literal::integer(2));
        assert!(g.contains(&old));
        let mut g2 = MetaGraph::new();
        for t in g.iter().filter(|t| **t != old) {
            g2.insert(t.clone());
        }
        g2.insert(Triple::new(prof, dl::NULL, Literal::integer(-1)));
        g2.add(
            "http://kdmg.dii.univpm.it/dl/source/s",
            "http://kdmg.dii.univpm.it/dl/bogus",
            Literal::string("?"),
        );
        let v = validate(&g2);
        assert_eq!(v.len(), 2, "{v:?}");
    }

    #[test]
    fn domains_count_must_match() {
        let mut g = MetaGraph::new();
        let src = "http://s";
        g.add_type(src, dl::SOURCE);
        g.add_type(src, void::DATASET);
        g.add(src, dl::LOCATION, Literal::string("x"));
        g.add(src, dl::ITEMS, Literal::integer(0));
        g.add(src, dl::DOMAINS, Literal::integer(3));
        assert_eq!(validate(&g).len(), 1);
    }

    #[test]
    fn decimal_lexicals() {
        for ok in ["1", "-1.5", ".5", "5.", "+0.0"] {
            assert!(is_decimal_lexical(ok), "{ok}");
        }
        for bad in ["", ".", "1e5", "NaN", "1.2.3", "-"] {
            assert!(!is_decimal_lexical(bad), "{bad}");
        }
    }
}
