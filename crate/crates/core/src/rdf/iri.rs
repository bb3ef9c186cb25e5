use alloc::format;
use alloc::string::String;
use core::fmt::Write;

use super::vocab::DL;

/// What an IRI is minted for. Parents are full IRIs previously minted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IriKind<'a> {
    Source {
        name: &'a str,
    },
    Domain {
        source: &'a str,
        name: &'a str,
    },
    DProfile {
        domain: &'a str,
    },
    IProfile {
        domain: &'a str,
    },
    /// Grouping node under a profile (`distribution`, `categories`, ...).
    Collection {
        profile: &'a str,
        name: &'a str,
    },
    Element {
        parent: &'a str,
        index: usize,
    },
    Others {
        dprofile: &'a str,
    },
}

/// Deterministic IRIs under the `dl:` namespace. Names are percent-encoded
/// so distinct names never collide and every IRI is valid in Turtle.
pub fn mint_iri(kind: IriKind<'_>) -> String {
    match kind {
        IriKind::Source { name } => format!("{DL}source/{}", encode_segment(name)),
        IriKind::Domain { source, name } => format!("{source}/domain/{}", encode_segment(name)),
        IriKind::DProfile { domain } => format!("{domain}/dprofile"),
        IriKind::IProfile { domain } => format!("{domain}/iprofile"),
        IriKind::Collection { profile, name } => format!("{profile}/{}", encode_segment(name)),
        IriKind::Element { parent, index } => format!("{parent}/e{index}"),
        IriKind::Others { dprofile } => format!("{dprofile}/others"),
    }
}

/// Percent-encodes everything outside the RFC 3986 unreserved set.
pub fn encode_segment(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for b in s.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_' | b'.' | b'~') {
            out.push(b as char);
        } else {
            let _ = write!(out, "%{b:02X}");
        }
    }
    out
}

/// The part of an IRI after its last `#`, `/` or `:`.
pub fn local_name(iri: &str) -> &str {
    match iri.rfind(['#', '/', ':']) {
        Some(i) => &iri[i + 1..],
        None => iri,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme() {
        let src = mint_iri(IriKind::Source { name: "vehicles" });
        assert_eq!(src, "http://kdmg.dii.univpm.it/dl/source/vehicles");
        let dom = mint_iri(IriKind::Domain {
            source: &src,
            name: "city",
        });
        assert_eq!(
            dom,
            "http://kdmg.dii.univpm.it/dl/source/vehicles/domain/city"
        );
        let dp = mint_iri(IriKind::DProfile { domain: &dom });
        assert_eq!(
            mint_iri(IriKind::Element {
                parent: &dp,
                index: 0
            }),
            "http://kdmg.dii.univpm.it/dl/source/vehicles/domain/city/dprofile/e0"
        );
    }

    #[test]
    fn encoding_is_injective_on_tricky_names() {
        assert_eq!(encode_segment("a b/c%"), "a%20b%2Fc%25");
        assert_ne!(encode_segment("a b"), encode_segment("a%20b"));
        assert_eq!(encode_segment("città"), "citt%C3%A0");
    }

    #[test]
    fn local_names() {
        assert_eq!(local_name("http://ex.org/kg#Milan"), "Milan");
        assert_eq!(local_name("http://ex.org/kg/Milan"), "Milan");
        assert_eq!(local_name("urn:x:VAT"), "VAT");
    }
}
