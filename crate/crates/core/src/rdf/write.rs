//! Turtle and N-Triples writers. Both are deterministic: Turtle groups by
//! subject in term order, N-Triples lines are sorted bytewise.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::vocab::{rdf, xsd};
use super::{Literal, MetaGraph, RdfFormat, Term};

pub fn serialize(graph: &MetaGraph, format: RdfFormat) -> String {
    match format {
        RdfFormat::Turtle => to_turtle(graph),
        RdfFormat::NTriples => to_ntriples(graph),
    }
}

pub fn to_ntriples(graph: &MetaGraph) -> String {
    let mut lines: Vec<String> = graph
        .iter()
        .map(|t| {
            let mut line = String::new();
            write_nt_term(&mut line, &t.subject);
            line.push(' ');
            write_iriref(&mut line, &t.predicate);
            line.push(' ');
            write_nt_term(&mut line, &t.object);
            line.push_str(" .");
            line
        })
        .collect();
    lines.sort_unstable();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

fn write_nt_term(out: &mut String, term: &Term) {
    match term {
        Term::Iri(i) => write_iriref(out, i),
        Term::Blank(b) => {
            out.push_str("_:");
            out.push_str(b);
        }
        Term::Literal(l) => {
            write_quoted(out, &l.lexical);
            write_literal_suffix(out, l, write_iriref);
        }
    }
}

pub fn to_turtle(graph: &MetaGraph) -> String {
    let prefixes = graph.prefixes();
    let mut out = String::new();
    for (p, ns) in prefixes {
        let _ = write!(out, "@prefix {p}: ");
        write_iriref(&mut out, ns);
        out.push_str(" .\n");
    }

    let triples: Vec<_> = graph.iter().collect();
    let mut i = 0;
    while i < triples.len() {
        let subject = &triples[i].subject;
        let mut j = i;
        while j < triples.len() && &triples[j].subject == subject {
            j += 1;
        }
        let mut group: Vec<_> = triples[i..j].to_vec();
        // rdf:type first, otherwise keep predicate order
        group.sort_by(|a, b| {
            (a.predicate != rdf::TYPE, &a.predicate, &a.object).cmp(&(
                b.predicate != rdf::TYPE,
                &b.predicate,
                &b.object,
            ))
        });

        out.push('\n');
        write_ttl_term(&mut out, subject, prefixes);
        let mut k = 0;
        let mut first_pred = true;
        while k < group.len() {
            let pred = &group[k].predicate;
            if first_pred {
                out.push(' ');
            } else {
                out.push_str(" ;\n    ");
            }
            first_pred = false;
            if pred == rdf::TYPE {
                out.push('a');
            } else {
                write_ttl_iri(&mut out, pred, prefixes);
            }
            let mut first_obj = true;
            while k < group.len() && &group[k].predicate == pred {
                out.push_str(if first_obj { " " } else { ", " });
                first_obj = false;
                write_ttl_term(&mut out, &group[k].object, prefixes);
                k += 1;
            }
        }
        out.push_str(" .\n");
        i = j;
    }
    out
}

fn write_ttl_term(out: &mut String, term: &Term, prefixes: &[(String, String)]) {
    match term {
        Term::Iri(i) => write_ttl_iri(out, i, prefixes),
        Term::Blank(b) => {
            out.push_str("_:");
            out.push_str(b);
        }
        Term::Literal(l) => {
            write_quoted(out, &l.lexical);
            write_literal_suffix(out, l, |out, dt| write_ttl_iri(out, dt, prefixes));
        }
    }
}

fn write_literal_suffix(out: &mut String, l: &Literal, write_dt: impl FnOnce(&mut String, &str)) {
    if let Some(lang) = &l.language {
        out.push('@');
        out.push_str(lang);
    } else if l.datatype != xsd::STRING {
        out.push_str("^^");
        write_dt(out, &l.datatype);
    }
}

fn write_ttl_iri(out: &mut String, iri: &str, prefixes: &[(String, String)]) {
    let best = prefixes
        .iter()
        .filter(|(_, ns)| iri.len() > ns.len() && iri.starts_with(ns.as_str()))
        .filter(|(_, ns)| is_simple_local(&iri[ns.len()..]))
        .max_by_key(|(_, ns)| ns.len());
    match best {
        Some((p, ns)) => {
            out.push_str(p);
            out.push(':');
            out.push_str(&iri[ns.len()..]);
        }
        None => write_iriref(out, iri),
    }
}

/// Local parts written unescaped: ASCII alphanumerics and `_`, `-` not first.
fn is_simple_local(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with('-')
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
}

fn write_iriref(out: &mut String, iri: &str) {
    out.push('<');
    for c in iri.chars() {
        if c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') {
            let _ = write!(out, "\\u{:04X}", c as u32);
        } else {
            out.push(c);
        }
    }
    out.push('>');
}

fn write_quoted(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 || c == '\u{7f}' => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}
