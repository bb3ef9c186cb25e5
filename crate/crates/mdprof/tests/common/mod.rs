//! Random column generators and brute-force oracles shared by the
//! integration tests. Every generator returns the values it encoded, so
//! the oracles never read the library's own parse results.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chrono::{NaiveDate, NaiveDateTime};
use mdprof::core::profile::{IProfile, NumericKind, Stopwords};
use mdprof::core::{Column, DProfile, KnowledgeGraph, Profile};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const KG_NS: &str = "http://example.org/geo#";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Integer,
    Decimal,
    Categorical,
    Datetime,
    Textual,
    Dimensional,
}

pub const KINDS: [Kind; 6] = [
    Kind::Integer,
    Kind::Decimal,
    Kind::Categorical,
    Kind::Datetime,
    Kind::Textual,
    Kind::Dimensional,
];

/// What a generator encoded into a column.
#[derive(Debug, Clone)]
pub enum Truth {
    Integer(Vec<Option<i64>>),
    /// Values in thousandths.
    Decimal(Vec<Option<i64>>),
    Categorical(Vec<Option<String>>),
    Datetime {
        values: Vec<Option<NaiveDateTime>>,
        date_only: bool,
    },
    Textual(Vec<Option<String>>),
    Dimensional(Vec<Option<String>>),
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub kind: Kind,
    pub column: Column,
    pub truth: Truth,
}

/// A two-level geography: `Town` (300 members) rolling up to `Region`
/// (12 members). Member IRIs are `t{i}` / `r{i}`.
pub struct Geo {
    pub turtle: String,
    pub kg: KnowledgeGraph,
    pub towns: Vec<(String, String)>,
    pub regions: Vec<(String, String)>,
}

pub fn geo() -> Geo {
    let towns: Vec<(String, String)> = (0..300)
        .map(|i| (format!("{KG_NS}t{i}"), format!("Town {i}")))
        .collect();
    let regions: Vec<(String, String)> = (0..12)
        .map(|i| (format!("{KG_NS}r{i}"), format!("Region {i}")))
        .collect();
    let mut t = String::new();
    t.push_str("@prefix kpi: <http://w3id.org/kpionto/> .\n");
    t.push_str("@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n");
    t.push_str(&format!("@prefix geo: <{KG_NS}> .\n"));
    t.push_str("geo:Geography a kpi:Dimension .\n");
    t.push_str("geo:Town a kpi:Level ; rdfs:label \"Town\" ; kpi:inDimension geo:Geography ; kpi:rollup geo:Region .\n");
    t.push_str(
        "geo:Region a kpi:Level ; rdfs:label \"Region\" ; kpi:inDimension geo:Geography .\n",
    );
    t.push_str("geo:Population a kpi:Indicator ; rdfs:label \"population\" .\n");
    for (i, (_, label)) in towns.iter().enumerate() {
        t.push_str(&format!(
            "geo:t{i} a kpi:Member ; rdfs:label \"{label}\" ; kpi:inLevel geo:Town .\n"
        ));
    }
    for (i, (_, label)) in regions.iter().enumerate() {
        t.push_str(&format!(
            "geo:r{i} a kpi:Member ; rdfs:label \"{label}\" ; kpi:inLevel geo:Region .\n"
        ));
    }
    let kg = KnowledgeGraph::from_turtle(&t, &Default::default()).expect("fixture KG");
    Geo {
        turtle: t,
        kg,
        towns,
        regions,
    }
}

fn null_rate(r: &mut Rand) -> f64 {
    *[0.0, 0.0, 0.05, 0.2, 0.3].choose(r).unwrap()
}

fn with_nulls<T>(r: &mut Rand, n: usize, mut value: impl FnMut(&mut Rand) -> T) -> Vec<Option<T>> {
    let p = null_rate(r);
    let mut v: Vec<Option<T>> = (0..n)
        .map(|_| (!r.random_bool(p)).then(|| value(r)))
        .collect();
    // keep at least one value
    if v.iter().all(Option::is_none) {
        v[0] = Some(value(r));
    }
    v
}

fn column_of(name: &str, cells: &[Option<String>]) -> Column {
    Column::new(name, cells.iter().map(|c| c.as_deref()))
}

fn distinct<T: Ord + Clone>(v: &[Option<T>]) -> usize {
    v.iter().flatten().cloned().collect::<BTreeSet<_>>().len()
}

fn word(r: &mut Rand, len: std::ops::RangeInclusive<usize>) -> String {
    // a leading `q` keeps words clear of number, date and null spellings
    let n = r.random_range(len);
    let mut s = String::from("q");
    for _ in 1..n {
        s.push(r.random_range(b'a'..=b'z') as char);
    }
    s
}

/// One random column of `kind` with `rows` rows (at least 50).
pub fn gen_column(kind: Kind, rows: usize, r: &mut Rand, geo: &Geo, name: &str) -> Generated {
    assert!(rows >= 50);
    loop {
        let g = try_gen(kind, rows, r, geo, name);
        // categorical detection wins over datetime and textual below
        // 21 distinct values, so retry the rare unlucky draw
        let ok = match &g.truth {
            Truth::Datetime { values, .. } => distinct(values) > 20,
            Truth::Textual(v) => distinct(v) > 20,
            Truth::Decimal(v) => v.iter().flatten().any(|k| k % 1000 != 0),
            _ => true,
        };
        if ok {
            return g;
        }
    }
}

fn try_gen(kind: Kind, rows: usize, r: &mut Rand, geo: &Geo, name: &str) -> Generated {
    match kind {
        Kind::Integer => {
            let span: i64 = *[10, 1000, 1_000_000, 1_000_000_000_000].choose(r).unwrap();
            let v = with_nulls(r, rows, |r| r.random_range(-span..=span));
            let cells: Vec<Option<String>> = v.iter().map(|x| x.map(|x| x.to_string())).collect();
            Generated {
                kind,
                column: column_of(name, &cells),
                truth: Truth::Integer(v),
            }
        }
        Kind::Decimal => {
            let span: i64 = *[5_000, 1_000_000, 1_000_000_000].choose(r).unwrap();
            let v = with_nulls(r, rows, |r| r.random_range(-span..=span));
            let cells: Vec<Option<String>> = v
                .iter()
                .map(|x| {
                    x.map(|k| {
                        let sign = if k < 0 { "-" } else { "" };
                        format!("{sign}{}.{:03}", k.abs() / 1000, k.abs() % 1000)
                    })
                })
                .collect();
            Generated {
                kind,
                column: column_of(name, &cells),
                truth: Truth::Decimal(v),
            }
        }
        Kind::Categorical => {
            let k = r.random_range(1..=20);
            let mut pool = BTreeSet::new();
            while pool.len() < k {
                pool.insert(word(r, 3..=8));
            }
            let pool: Vec<String> = pool.into_iter().collect();
            let v = with_nulls(r, rows, |r| pool.choose(r).unwrap().clone());
            Generated {
                kind,
                column: column_of(name, &v),
                truth: Truth::Categorical(v),
            }
        }
        Kind::Datetime => {
            let date_only = r.random_bool(0.6);
            let slashed = date_only && r.random_bool(0.5);
            let origin = NaiveDate::from_ymd_opt(1900, 1, 1)
                .unwrap()
                .and_hms_opt(0, 0, 0)
                .unwrap();
            let v = with_nulls(r, rows, |r| {
                let days = r.random_range(0..73_000);
                let secs = if date_only {
                    0
                } else {
                    r.random_range(0..86_400)
                };
                origin + chrono::Duration::days(days) + chrono::Duration::seconds(secs)
            });
            let cells: Vec<Option<String>> = v
                .iter()
                .map(|d| {
                    d.map(|d| {
                        if slashed {
                            d.format("%d/%m/%Y").to_string()
                        } else if date_only {
                            d.format("%Y-%m-%d").to_string()
                        } else {
                            d.format("%Y-%m-%dT%H:%M:%S").to_string()
                        }
                    })
                })
                .collect();
            Generated {
                kind,
                column: column_of(name, &cells),
                truth: Truth::Datetime {
                    values: v,
                    date_only,
                },
            }
        }
        Kind::Textual => {
            let vocab: Vec<String> = (0..150).map(|_| word(r, 2..=9)).collect();
            const STOP: [&str; 8] = ["the", "The", "and", "of", "IS", "a", "to", "in"];
            const PUNCT: [&str; 6] = [" ", ", ", ". ", "; ", " - ", "! "];
            let v = with_nulls(r, rows, |r| {
                let n = r.random_range(3..=10);
                let mut s = String::new();
                for i in 0..n {
                    if i > 0 {
                        s.push_str(PUNCT.choose(r).unwrap());
                    }
                    match r.random_range(0..10) {
                        0..=2 => s.push_str(STOP.choose(r).unwrap()),
                        3 => s.push_str(&r.random_range(0..100).to_string()),
                        4 => s.push_str(&vocab.choose(r).unwrap().to_uppercase()),
                        5 => s.push_str("café"),
                        _ => s.push_str(vocab.choose(r).unwrap()),
                    }
                }
                s
            });
            Generated {
                kind,
                column: column_of(name, &v),
                truth: Truth::Textual(v),
            }
        }
        Kind::Dimensional => {
            // a subset of towns, spelled in several ways, plus a few
            // unmapped tokens: containment stays well above one half
            let used: Vec<usize> = (0..r.random_range(5..=60))
                .map(|_| r.random_range(0..geo.towns.len()))
                .collect();
            let noise: Vec<String> = (0..r.random_range(0..=3))
                .map(|i| format!("nowhere {i}"))
                .collect();
            let v = with_nulls(r, rows, |r| {
                if !noise.is_empty() && r.random_bool(0.1) {
                    return noise.choose(r).unwrap().clone();
                }
                let t = *used.choose(r).unwrap();
                let label = &geo.towns[t].1;
                match r.random_range(0..6) {
                    0 => label.to_uppercase(),
                    1 => format!("  {}  ", label.to_lowercase()),
                    2 => format!("T{t}"),
                    _ => label.clone(),
                }
            });
            Generated {
                kind,
                column: column_of(name, &v),
                truth: Truth::Dimensional(v),
            }
        }
    }
}

/// Relative closeness at the acceptance tolerance.
pub fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Bin counts by testing every value against every bin.
fn brute_bins(values: &[f64], bins: usize) -> Vec<(f64, f64, u64)> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return vec![(min, max, values.len() as u64)];
    }
    let w = (max - min) / bins as f64;
    let edges: Vec<(f64, f64)> = (0..bins)
        .map(|i| {
            let lo = min + i as f64 * w;
            let hi = if i + 1 == bins {
                max
            } else {
                min + (i + 1) as f64 * w
            };
            (lo, hi)
        })
        .collect();
    let mut out: Vec<(f64, f64, u64)> = edges.iter().map(|&(lo, hi)| (lo, hi, 0)).collect();
    for &v in values {
        let hits: Vec<usize> = (0..bins)
            .filter(|&i| {
                let (lo, hi) = edges[i];
                lo <= v && (v < hi || (i + 1 == bins && v <= hi))
            })
            .collect();
        assert_eq!(hits.len(), 1, "value {v} falls in {} bins", hits.len());
        out[hits[0]].2 += 1;
    }
    out
}

fn check_numeric(
    p: &IProfile,
    values: &[Option<f64>],
    kind: NumericKind,
    exact_mean: f64,
    bins: usize,
) -> Result<(), String> {
    let IProfile::Numeric(n) = p else {
        return Err(format!("expected a numeric profile, got {p:?}"));
    };
    let mut present: Vec<f64> = values.iter().flatten().copied().collect();
    present.sort_by(f64::total_cmp);
    let nulls = values.len() - present.len();
    let distinct = present
        .iter()
        .map(|v| v.to_bits())
        .collect::<BTreeSet<_>>()
        .len();
    let mut errs = Vec::new();
    if n.kind != kind {
        errs.push(format!("kind {:?} != {kind:?}", n.kind));
    }
    if n.null != nulls as u64 {
        errs.push(format!("null {} != {nulls}", n.null));
    }
    if n.distinct != distinct as u64 {
        errs.push(format!("distinct {} != {distinct}", n.distinct));
    }
    if n.min != present[0] {
        errs.push(format!("min {} != {}", n.min, present[0]));
    }
    if n.max != *present.last().unwrap() {
        errs.push(format!("max {} != {}", n.max, present.last().unwrap()));
    }
    if !close(n.mean, exact_mean) {
        errs.push(format!("mean {} != {exact_mean}", n.mean));
    }
    let median = median_sorted(&present);
    if !close(n.median, median) {
        errs.push(format!("median {} != {median}", n.median));
    }
    let expected = brute_bins(&present, bins);
    let got: Vec<(f64, f64, u64)> = n
        .distribution
        .elements
        .iter()
        .map(|b| (b.start_range, b.end_range, b.count))
        .collect();
    let same_bins = expected.len() == got.len()
        && expected
            .iter()
            .zip(&got)
            .all(|(e, g)| close(e.0, g.0) && close(e.1, g.1) && e.2 == g.2);
    if !same_bins {
        errs.push(format!("distribution {got:?} != {expected:?}"));
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs.join("; "))
    }
}

fn sorted_counts<K: Ord + Clone>(items: impl IntoIterator<Item = K>) -> Vec<(K, u64)> {
    let mut m: BTreeMap<K, u64> = BTreeMap::new();
    for k in items {
        *m.entry(k).or_insert(0) += 1;
    }
    let mut v: Vec<(K, u64)> = m.into_iter().collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v
}

/// Member of the town level named by `cell`, by label first and local
/// name second, both case-insensitively after trimming.
pub fn town_of(cell: &str, geo: &Geo) -> Option<String> {
    let key = cell.trim().to_lowercase();
    geo.towns
        .iter()
        .find(|(_, label)| label.to_lowercase() == key)
        .or_else(|| {
            geo.towns
                .iter()
                .find(|(iri, _)| iri[KG_NS.len()..].to_lowercase() == key)
        })
        .map(|(iri, _)| iri.clone())
}

pub fn oracle_dprofile(cells: &[Option<String>], geo: &Geo) -> DProfile {
    let mut others = 0;
    let mut hits = Vec::new();
    for c in cells {
        match c.as_deref().and_then(|c| town_of(c, geo)) {
            Some(m) => hits.push(m),
            None => others += 1,
        }
    }
    DProfile {
        level: format!("{KG_NS}Town"),
        elements: sorted_counts(hits)
            .into_iter()
            .map(|(member, frequency)| mdprof::core::profile::MemberFrequency { member, frequency })
            .collect(),
        others,
    }
}

/// Compares a computed profile with a brute-force recomputation from the
/// generator's values.
pub fn check_profile(
    g: &Generated,
    profile: &Profile,
    bins: usize,
    geo: &Geo,
) -> Result<(), String> {
    match (&g.truth, profile) {
        (Truth::Integer(v), Profile::Attribute(p)) => {
            let present: Vec<i64> = v.iter().flatten().copied().collect();
            let mean =
                present.iter().map(|&x| i128::from(x)).sum::<i128>() as f64 / present.len() as f64;
            let f: Vec<Option<f64>> = v.iter().map(|x| x.map(|x| x as f64)).collect();
            check_numeric(p, &f, NumericKind::Integer, mean, bins)
        }
        (Truth::Decimal(v), Profile::Attribute(p)) => {
            let present: Vec<i64> = v.iter().flatten().copied().collect();
            let mean = present.iter().map(|&x| i128::from(x)).sum::<i128>() as f64
                / present.len() as f64
                / 1000.0;
            let f: Vec<Option<f64>> = v.iter().map(|x| x.map(|k| k as f64 / 1000.0)).collect();
            check_numeric(p, &f, NumericKind::Decimal, mean, bins)
        }
        (Truth::Categorical(v), Profile::Attribute(IProfile::Categorical(c))) => {
            let expected = sorted_counts(v.iter().flatten().cloned());
            let got: Vec<(String, u64)> = c
                .categories
                .iter()
                .map(|x| (x.name.clone(), x.count))
                .collect();
            let nulls = v.iter().filter(|x| x.is_none()).count() as u64;
            if got != expected || c.null != nulls {
                return Err(format!(
                    "categories {got:?}/{} != {expected:?}/{nulls}",
                    c.null
                ));
            }
            Ok(())
        }
        (Truth::Datetime { values, date_only }, Profile::Attribute(IProfile::Datetime(d))) => {
            let present: Vec<NaiveDateTime> = values.iter().flatten().copied().collect();
            let nulls = (values.len() - present.len()) as u64;
            let distinct = present.iter().collect::<BTreeSet<_>>().len() as u64;
            let min = *present.iter().min().unwrap();
            let max = *present.iter().max().unwrap();
            let mut years: Vec<(i32, u64)> =
                sorted_counts(present.iter().map(chrono::Datelike::year));
            years.sort();
            let got_years: Vec<(i32, u64)> = d.years.iter().map(|y| (y.year, y.count)).collect();
            let mut errs = Vec::new();
            if d.null != nulls {
                errs.push(format!("null {} != {nulls}", d.null));
            }
            if d.distinct != distinct {
                errs.push(format!("distinct {} != {distinct}", d.distinct));
            }
            if d.min_date.datetime() != min || d.max_date.datetime() != max {
                errs.push(format!(
                    "range {}..{} != {min}..{max}",
                    d.min_date, d.max_date
                ));
            }
            if d.min_date.is_date_only() != *date_only {
                errs.push("date/datetime kind differs".into());
            }
            if got_years != years {
                errs.push(format!("years {got_years:?} != {years:?}"));
            }
            if errs.is_empty() {
                Ok(())
            } else {
                Err(errs.join("; "))
            }
        }
        (Truth::Textual(v), Profile::Attribute(IProfile::Textual(t))) => {
            let stop = Stopwords::english();
            let tokens: Vec<String> = v
                .iter()
                .flatten()
                .flat_map(|s| {
                    s.split(|c: char| !c.is_alphanumeric())
                        .filter(|w| !w.is_empty())
                        .map(str::to_lowercase)
                        .collect::<Vec<_>>()
                })
                .filter(|w| !stop.contains(w))
                .collect();
            let total = tokens.len() as u64;
            let expected = sorted_counts(tokens);
            let got: Vec<(String, u64)> =
                t.words.iter().map(|w| (w.word.clone(), w.count)).collect();
            let nulls = v.iter().filter(|x| x.is_none()).count() as u64;
            if got != expected || t.words_total != total || t.null != nulls {
                return Err(format!(
                    "words differ: total {} vs {total}, null {} vs {nulls}, {} vs {} entries",
                    t.words_total,
                    t.null,
                    got.len(),
                    expected.len()
                ));
            }
            Ok(())
        }
        (Truth::Dimensional(cells), Profile::Dimensional(d)) => {
            let expected = oracle_dprofile(cells, geo);
            if *d != expected {
                return Err(format!("dprofile {d:?} != {expected:?}"));
            }
            Ok(())
        }
        (t, p) => Err(format!(
            "profile shape {p:?} does not fit {:?}",
            std::mem::discriminant(t)
        )),
    }
}

/// Conservation laws every profile must satisfy.
pub fn conservation(profile: &Profile, rows: u64) -> Vec<String> {
    let mut v = Vec::new();
    match profile {
        Profile::Dimensional(d) => {
            if d.total() != rows {
                v.push(format!("sum(frequencies)+others = {} != {rows}", d.total()));
            }
        }
        Profile::Attribute(IProfile::Numeric(n)) => {
            let s = n.distribution.total();
            if s != rows - n.null {
                v.push(format!("sum(distribution) = {s} != {}", rows - n.null));
            }
        }
        Profile::Attribute(IProfile::Categorical(c)) => {
            let s: u64 = c.categories.iter().map(|x| x.count).sum();
            if s + c.null != rows {
                v.push(format!("sum(categories)+null = {} != {rows}", s + c.null));
            }
        }
        Profile::Attribute(IProfile::Datetime(d)) => {
            let s: u64 = d.years.iter().map(|y| y.count).sum();
            if s != rows - d.null {
                v.push(format!("sum(years) = {s} != {}", rows - d.null));
            }
        }
        Profile::Attribute(IProfile::Textual(t)) => {
            let s: u64 = t.words.iter().map(|w| w.count).sum();
            if s != t.words_total {
                v.push(format!("words_total {} != sum {s}", t.words_total));
            }
        }
        Profile::Attribute(IProfile::Unrecognized { null }) => {
            if *null > rows {
                v.push(format!("null {null} > rows {rows}"));
            }
        }
    }
    v
}
