//! Conjunctive discovery queries: `key op value` clauses joined by AND.
//!
//! | key | ops | value |
//! |-----|-----|-------|
//! | `mapTo` | `=` | level or indicator IRI |
//! | `level`, `indicator` | `=` | IRI |
//! | `items`, `domains` | `= != < <= > >=` | number |
//! | `category` | `=` | attribute category present in the source |
//! | `max(attr)` … | `= != < <= > >=` | number |
//!
//! Statistic keys are `max`, `min`, `mean`, `median`, `distinct` and
//! `null`. IRIs are written `<...>`, as absolute IRIs or as prefixed
//! names using prefixes known to the catalog.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use mdprof_core::kg::MappingTarget;
use mdprof_core::profile::IProfile;
use mdprof_core::rdf::SourceDescription;
use mdprof_core::{AttributeCategory, Profile};

use super::{CatalogError, IndexEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Op {
    pub fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Op::Eq => lhs == rhs,
            Op::Ne => lhs != rhs,
            Op::Lt => lhs < rhs,
            Op::Le => lhs <= rhs,
            Op::Gt => lhs > rhs,
            Op::Ge => lhs >= rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Op::Eq => "=",
            Op::Ne => "!=",
            Op::Lt => "<",
            Op::Le => "<=",
            Op::Gt => ">",
            Op::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stat {
    Max,
    Min,
    Mean,
    Median,
    Distinct,
    Null,
}

impl Stat {
    pub const ALL: [Stat; 6] = [
        Stat::Max,
        Stat::Min,
        Stat::Mean,
        Stat::Median,
        Stat::Distinct,
        Stat::Null,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stat::Max => "max",
            Stat::Min => "min",
            Stat::Mean => "mean",
            Stat::Median => "median",
            Stat::Distinct => "distinct",
            Stat::Null => "null",
        }
    }

    /// The statistic as stored in an attribute profile, if it has one.
    pub fn of(self, profile: &Profile) -> Option<f64> {
        let Profile::Attribute(p) = profile else {
            return None;
        };
        match (self, p) {
            (Stat::Null, p) => Some(p.null() as f64),
            (Stat::Max, IProfile::Numeric(n)) => Some(n.max),
            (Stat::Min, IProfile::Numeric(n)) => Some(n.min),
            (Stat::Mean, IProfile::Numeric(n)) => Some(n.mean),
            (Stat::Median, IProfile::Numeric(n)) => Some(n.median),
            (Stat::Distinct, IProfile::Numeric(n)) => Some(n.distinct as f64),
            (Stat::Distinct, IProfile::Datetime(d)) => Some(d.distinct as f64),
            _ => None,
        }
    }
}

impl FromStr for Stat {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Stat::ALL.into_iter().find(|k| k.as_str() == s).ok_or(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    MapTo(String),
    Level(String),
    Indicator(String),
    Items(Op, f64),
    Domains(Op, f64),
    Category(AttributeCategory),
    Stat {
        stat: Stat,
        attribute: String,
        op: Op,
        value: f64,
    },
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::MapTo(i) => write!(f, "mapTo=<{i}>"),
            Predicate::Level(i) => write!(f, "level=<{i}>"),
            Predicate::Indicator(i) => write!(f, "indicator=<{i}>"),
            Predicate::Items(op, v) => write!(f, "items{}{v}", op.symbol()),
            Predicate::Domains(op, v) => write!(f, "domains{}{v}", op.symbol()),
            Predicate::Category(c) => write!(f, "category={c}"),
            Predicate::Stat {
                stat,
                attribute,
                op,
                value,
            } => write!(f, "{}({attribute}){}{value}", stat.as_str(), op.symbol()),
        }
    }
}

impl Predicate {
    fn mapped(src: &SourceDescription, want: impl Fn(&MappingTarget) -> bool) -> bool {
        src.attributes
            .iter()
            .any(|a| a.mapping.as_ref().is_some_and(&want))
    }

    pub fn eval(&self, src: &SourceDescription) -> bool {
        match self {
            Predicate::MapTo(i) => Self::mapped(src, |m| m.iri() == i),
            Predicate::Level(i) => {
                Self::mapped(src, |m| matches!(m, MappingTarget::Level(l) if l == i))
            }
            Predicate::Indicator(i) => {
                Self::mapped(src, |m| matches!(m, MappingTarget::Indicator(x) if x == i))
            }
            Predicate::Items(op, v) => op.holds(src.metadata.items as f64, *v),
            Predicate::Domains(op, v) => op.holds(src.domains as f64, *v),
            Predicate::Category(c) => src.attributes.iter().any(|a| a.category == *c),
            Predicate::Stat {
                stat,
                attribute,
                op,
                value,
            } => src
                .attribute(attribute)
                .and_then(|a| stat.of(&a.profile))
                .is_some_and(|s| op.holds(s, *value)),
        }
    }

    /// Answers from the index alone when possible.
    fn eval_index(&self, e: &IndexEntry) -> Option<bool> {
        Some(match self {
            Predicate::MapTo(i) => e.levels.contains(i) || e.indicators.contains(i),
            Predicate::Level(i) => e.levels.contains(i),
            Predicate::Indicator(i) => e.indicators.contains(i),
            Predicate::Items(op, v) => op.holds(e.items as f64, *v),
            Predicate::Domains(op, v) => op.holds(e.domains as f64, *v),
            Predicate::Category(_) | Predicate::Stat { .. } => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Query {
    pub predicates: Vec<Predicate>,
}

impl Query {
    pub fn parse<S: AsRef<str>>(
        clauses: &[S],
        prefixes: &BTreeMap<String, String>,
    ) -> Result<Query, CatalogError> {
        let predicates = clauses
            .iter()
            .map(|c| parse_clause(c.as_ref(), prefixes))
            .collect::<Result<_, _>>()?;
        Ok(Query { predicates })
    }

    pub fn eval(&self, src: &SourceDescription) -> bool {
        self.predicates.iter().all(|p| p.eval(src))
    }

    /// `Some` when the index settles the query: any index-decidable
    /// predicate that fails, or all predicates index-decidable.
    pub(super) fn eval_index(&self, e: &IndexEntry) -> Option<bool> {
        let mut undecided = false;
        for p in &self.predicates {
            match p.eval_index(e) {
                Some(false) => return Some(false),
                Some(true) => {}
                None => undecided = true,
            }
        }
        (!undecided).then_some(true)
    }
}

const OPS: [(&str, Op); 6] = [
    (">=", Op::Ge),
    ("<=", Op::Le),
    ("!=", Op::Ne),
    ("=", Op::Eq),
    (">", Op::Gt),
    ("<", Op::Lt),
];

fn split_clause(clause: &str) -> Option<(&str, Op, &str)> {
    // operators may not appear inside the key's parentheses
    let from = clause.find(')').map_or(0, |i| i + 1);
    let (pos, sym, op) = OPS
        .iter()
        .filter_map(|(sym, op)| clause[from..].find(sym).map(|p| (p + from, *sym, *op)))
        .min_by_key(|(p, sym, _)| (*p, std::cmp::Reverse(sym.len())))?;
    Some((clause[..pos].trim(), op, clause[pos + sym.len()..].trim()))
}

pub(super) fn expand_prefixed(value: &str, prefixes: &BTreeMap<String, String>) -> Option<String> {
    let (p, local) = value.split_once(':')?;
    prefixes.get(p).map(|ns| format!("{ns}{local}"))
}

fn parse_iri(value: &str, prefixes: &BTreeMap<String, String>) -> Result<String, String> {
    if let Some(inner) = value.strip_prefix('<').and_then(|v| v.strip_suffix('>')) {
        return Ok(inner.to_owned());
    }
    if value.contains("://") || value.starts_with("urn:") {
        return Ok(value.to_owned());
    }
    expand_prefixed(value, prefixes)
        .ok_or_else(|| format!("`{value}` is not an IRI or a known prefixed name"))
}

fn parse_clause(
    clause: &str,
    prefixes: &BTreeMap<String, String>,
) -> Result<Predicate, CatalogError> {
    let malformed = |reason: String| CatalogError::MalformedQuery {
        clause: clause.to_owned(),
        reason,
    };
    let (key, op, value) =
        split_clause(clause).ok_or_else(|| malformed("expected `key op value`".into()))?;
    if value.is_empty() {
        return Err(malformed("missing value".into()));
    }
    let number = || {
        value
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| malformed(format!("`{value}` is not a number")))
    };
    let eq_only = |p: Predicate| {
        if op == Op::Eq {
            Ok(p)
        } else {
            Err(malformed(format!("`{key}` only supports `=`")))
        }
    };
    match key {
        "mapTo" => eq_only(Predicate::MapTo(
            parse_iri(value, prefixes).map_err(malformed)?,
        )),
        "level" => eq_only(Predicate::Level(
            parse_iri(value, prefixes).map_err(malformed)?,
        )),
        "indicator" => eq_only(Predicate::Indicator(
            parse_iri(value, prefixes).map_err(malformed)?,
        )),
        "items" => Ok(Predicate::Items(op, number()?)),
        "domains" => Ok(Predicate::Domains(op, number()?)),
        "category" => {
            let c = value
                .parse()
                .map_err(|_| malformed(format!("unknown category `{value}`")))?;
            eq_only(Predicate::Category(c))
        }
        _ => {
            let (stat, rest) = key
                .split_once('(')
                .ok_or_else(|| malformed(format!("unknown key `{key}`")))?;
            let attribute = rest
                .strip_suffix(')')
                .filter(|a| !a.is_empty())
                .ok_or_else(|| malformed("expected `stat(attribute)`".into()))?;
            let stat = stat
                .trim()
                .parse()
                .map_err(|_| malformed(format!("unknown statistic `{stat}`")))?;
            Ok(Predicate::Stat {
                stat,
                attribute: attribute.to_owned(),
                op,
                value: number()?,
            })
        }
    }
}
