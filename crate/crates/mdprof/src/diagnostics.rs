//! Stable diagnostic codes for every error the binary can report.

use std::error::Error as StdError;

use mdprof_core::kg::KgError;
use mdprof_core::profile::ProfileError;
use mdprof_core::rdf::{BuildError, ReadError};
use mdprof_core::typing::TypingError;
use mdprof_core::TableError;

use crate::bench::BenchError;
use crate::catalog::CatalogError;
use crate::engine::EngineError;
use crate::graph_io::{GraphFileError, KgLoadError};
use crate::ingest::{IngestError, WriteError};
use crate::settings::{OutputError, SettingsError};

/// Every code with a one-line meaning, in code order.
pub const CODES: &[(&str, &str)] = &[
    ("E101", "source file cannot be read"),
    ("E102", "source format cannot be detected"),
    ("E103", "malformed CSV"),
    ("E104", "CSV row with the wrong number of fields"),
    ("E105", "malformed JSON"),
    ("E106", "JSON is not an array of flat objects"),
    ("E107", "duplicate column names or unequal column lengths"),
    ("E108", "table cannot be written back as CSV"),
    ("E201", "knowledge graph file cannot be read"),
    ("E202", "knowledge graph is not valid Turtle/N-Triples"),
    ("E203", "member linked to an undeclared level"),
    ("E204", "member without a level"),
    ("E205", "member linked to several levels"),
    ("E206", "roll-up edge to an undeclared level"),
    ("E207", "cyclic level hierarchy"),
    ("E208", "attribute name matches several indicators"),
    ("E209", "containment threshold outside [0, 1]"),
    ("E301", "categorical threshold must be at least 1"),
    ("E302", "relative categorical threshold outside (0, 1]"),
    ("E303", "datetime threshold outside (0, 1]"),
    ("E304", "forced category does not fit the column"),
    ("E305", "forced category names an unknown column"),
    ("E401", "attribute has no non-null value to profile"),
    ("E402", "bin count must be at least 1"),
    ("E403", "mapped level missing from the knowledge graph"),
    (
        "E404",
        "dimensional profile requested for an indicator mapping",
    ),
    ("E405", "profile requested for the wrong category"),
    ("E406", "worker threads cannot be started"),
    (
        "E501",
        "profile inconsistent with the attribute category or mapping",
    ),
    ("E502", "duplicate attribute name"),
    ("E503", "empty source name"),
    ("E504", "empty attribute name"),
    ("E505", "metadata graph file cannot be read"),
    ("E506", "metadata graph is not valid Turtle/N-Triples"),
    ("E507", "metadata graph violates the vocabulary shapes"),
    ("E508", "metadata graph does not describe a single source"),
    ("E601", "catalog storage error"),
    ("E602", "corrupt catalog index"),
    ("E603", "corrupt catalog document"),
    ("E604", "unknown source"),
    ("E605", "unknown attribute"),
    ("E606", "malformed query"),
    ("E701", "invalid benchmark configuration"),
    ("E702", "benchmark output cannot be written"),
    ("E801", "output file cannot be written"),
    ("E802", "configuration file cannot be read or parsed"),
];

fn typing(e: &TypingError) -> &'static str {
    match e {
        TypingError::CategoricalThreshold => "E301",
        TypingError::RelativeCategoricalThreshold(_) => "E302",
        TypingError::DateThreshold(_) => "E303",
        TypingError::IncompatibleCategory { .. } => "E304",
    }
}

fn kg(e: &KgError) -> &'static str {
    match e {
        KgError::RdfParse(_) => "E202",
        KgError::DanglingMember { .. } => "E203",
        KgError::MemberWithoutLevel(_) => "E204",
        KgError::MemberInSeveralLevels { .. } => "E205",
        KgError::DanglingRollup { .. } => "E206",
        KgError::CyclicHierarchy(_) => "E207",
        KgError::AmbiguousIndicator { .. } => "E208",
        KgError::Threshold(_) => "E209",
    }
}

fn profile(e: &ProfileError) -> &'static str {
    match e {
        ProfileError::EmptyAfterNulls => "E401",
        ProfileError::ZeroBins => "E402",
        ProfileError::MappingLevelMissing(_) => "E403",
        ProfileError::NotALevelMapping => "E404",
        ProfileError::WrongCategory { .. } => "E405",
    }
}

fn build(e: &BuildError) -> &'static str {
    match e {
        BuildError::ProfileCategoryMismatch { .. } => "E501",
        BuildError::DuplicateAttributeName(_) => "E502",
        BuildError::EmptySourceName => "E503",
        BuildError::EmptyAttributeName => "E504",
    }
}

/// The code of one error value, looking through wrapper enums.
pub fn code_of(err: &(dyn StdError + 'static)) -> Option<&'static str> {
    if let Some(e) = err.downcast_ref::<IngestError>() {
        return Some(match e {
            IngestError::UnreadablePath { .. } => "E101",
            IngestError::UnknownFormat(_) => "E102",
            IngestError::Csv { .. } => "E103",
            IngestError::RaggedRows { .. } => "E104",
            IngestError::Json { .. } => "E105",
            IngestError::JsonShape(_) => "E106",
            IngestError::Table(_) => "E107",
        });
    }
    if err.is::<TableError>() {
        return Some("E107");
    }
    if err.is::<WriteError>() {
        return Some("E108");
    }
    if let Some(e) = err.downcast_ref::<KgLoadError>() {
        return Some(match e {
            KgLoadError::Unreadable { .. } => "E201",
            KgLoadError::Invalid { source, .. } => kg(source),
        });
    }
    if let Some(e) = err.downcast_ref::<KgError>() {
        return Some(kg(e));
    }
    if let Some(e) = err.downcast_ref::<TypingError>() {
        return Some(typing(e));
    }
    if let Some(e) = err.downcast_ref::<ProfileError>() {
        return Some(profile(e));
    }
    if let Some(e) = err.downcast_ref::<BuildError>() {
        return Some(build(e));
    }
    if let Some(e) = err.downcast_ref::<EngineError>() {
        return Some(match e {
            EngineError::Typing(t) => typing(t),
            EngineError::Profile { source, .. } => profile(source),
            EngineError::Mapping(k) => kg(k),
            EngineError::Build(b) => build(b),
            EngineError::UnknownForcedColumn(_) => "E305",
            EngineError::Threshold(_) => "E209",
            EngineError::Threads(_) => "E406",
        });
    }
    if let Some(e) = err.downcast_ref::<GraphFileError>() {
        return Some(match e {
            GraphFileError::Unreadable { .. } => "E505",
            GraphFileError::Parse { .. } => "E506",
        });
    }
    if err.is::<ReadError>() {
        return Some("E508");
    }
    if let Some(e) = err.downcast_ref::<CatalogError>() {
        return Some(match e {
            CatalogError::Io { .. } => "E601",
            CatalogError::ShapeViolation(_) => "E507",
            CatalogError::CorruptIndex { .. } => "E602",
            CatalogError::CorruptDocument { .. } => "E603",
            CatalogError::UnknownSource(_) => "E604",
            CatalogError::UnknownAttribute { .. } => "E605",
            CatalogError::MalformedQuery { .. } => "E606",
        });
    }
    if let Some(e) = err.downcast_ref::<BenchError>() {
        return Some(match e {
            BenchError::Config(_) => "E701",
            BenchError::Io { .. } => "E702",
            BenchError::Engine(inner) => return code_of(inner),
            BenchError::Fixture(inner) => return code_of(inner),
        });
    }
    if err.is::<OutputError>() {
        return Some("E801");
    }
    if err.is::<SettingsError>() {
        return Some("E802");
    }
    None
}

/// Help text listing every code.
pub fn help_text() -> String {
    let mut s = String::from("Diagnostic codes (printed as `error[CODE]: ...`):\n");
    for (code, what) in CODES {
        s.push_str(&format!("  {code}  {what}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_unique_and_sorted() {
        for w in CODES.windows(2) {
            assert!(w[0].0 < w[1].0, "{} / {}", w[0].0, w[1].0);
        }
    }

    #[test]
    fn nested_errors_keep_their_code() {
        let e = EngineError::Typing(TypingError::DateThreshold(2.0));
        assert_eq!(code_of(&e), Some("E303"));
        let e = CatalogError::UnknownSource("x".into());
        assert_eq!(code_of(&e), Some("E604"));
        assert!(CODES.iter().any(|(c, _)| *c == "E604"));
    }
}
