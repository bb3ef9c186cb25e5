use mdprof_core::profile::compute_distribution;
use mdprof_core::rdf::{self, encode_segment, Literal, MetaGraph, Term};
use proptest::prelude::*;

proptest! {
    #[test]
    fn histogram_counts_every_value(values in prop::collection::vec(-1e6f64..1e6, 1..500), bins in 1usize..40) {
        let d = compute_distribution(&values, bins).unwrap();
        prop_assert_eq!(d.total(), values.len() as u64);
        prop_assert!(d.elements.len() <= bins);
        for w in d.elements.windows(2) {
            prop_assert!(w[0].end_range <= w[1].start_range + 1e-9 * w[1].start_range.abs().max(1.0));
        }
        // brute-force placement against the reported edges
        for b in &d.elements {
            let inside = values.iter().filter(|&&v| v >= b.start_range && v <= b.end_range).count() as u64;
            prop_assert!(inside >= b.count);
        }
    }

    #[test]
    fn literals_survive_both_syntaxes(texts in prop::collection::vec("\\PC{0,20}|[\"\\\\\n\r\t']{1,6}", 1..10), segment in "\\PC{1,12}") {
        let mut g = MetaGraph::with_standard_prefixes();
        let subject = format!("http://example.org/s/{}", encode_segment(&segment));
        for (i, t) in texts.iter().enumerate() {
            g.add(&subject, &format!("http://example.org/p{i}"), Term::Literal(Literal::string(t.clone())));
        }
        g.add(&subject, "http://example.org/n", Term::Literal(Literal::integer(-7)));
        for text in [rdf::to_turtle(&g), rdf::to_ntriples(&g)] {
            let back = rdf::parse(&text).unwrap();
            prop_assert!(back.same_triples(&g), "{}", text);
        }
    }

    #[test]
    fn encoded_segments_are_iri_safe(s in "\\PC{0,30}") {
        let e = encode_segment(&s);
        prop_assert!(e.chars().all(|c| c.is_ascii_alphanumeric() || "-._~%".contains(c)), "{}", e);
    }
}
