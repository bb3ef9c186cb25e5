use alloc::string::String;
use alloc::vec::Vec;

use super::{DProfile, MemberFrequency, ProfileError};
use crate::kg::{KnowledgeGraph, Mapping, MappingTarget};
use crate::table::Column;

const CHUNK: usize = 256;

/// Member frequencies of a column mapped onto a level. Cells naming no
/// member of the level, nulls included, are counted in `others`.
pub fn profile_dimensional(
    column: &Column,
    mapping: &Mapping,
    kg: &KnowledgeGraph,
) -> Result<DProfile, ProfileError> {
    let MappingTarget::Level(level_iri) = &mapping.target else {
        return Err(ProfileError::NotALevelMapping);
    };
    let level = kg
        .level(level_iri)
        .ok_or_else(|| ProfileError::MappingLevelMissing(level_iri.clone()))?;
    let mut counts = alloc::vec![0u64; level.members().len()];
    let mut others = 0u64;
    let mut scratch = String::new();
    if column.is_ascii() {
        // Pre-filter each chunk into a selection of candidate cells so
        // the per-cell hit/miss branch does not mispredict on mixed input.
        let mut selected = [""; CHUNK];
        let mut cells = column.cells();
        loop {
            let mut seen = 0;
            let mut n = 0;
            for cell in cells.by_ref().take(CHUNK) {
                let c = cell.unwrap_or("");
                selected[n] = c;
                n += usize::from(cell.is_some() & level.may_match_ascii(c));
                seen += 1;
            }
            if seen == 0 {
                break;
            }
            let mut hits = 0;
            for c in &selected[..n] {
                if let Some(i) = level.lookup(c, &mut scratch) {
                    counts[i] += 1;
                    hits += 1;
                }
            }
            others += (seen - hits) as u64;
        }
    } else {
        for cell in column.cells() {
            match cell.and_then(|c| level.lookup(c, &mut scratch)) {
                Some(i) => counts[i] += 1,
                None => others += 1,
            }
        }
    }
    let mut elements: Vec<MemberFrequency> = counts
        .into_iter()
        .enumerate()
        .filter(|(_, n)| *n > 0)
        .map(|(i, frequency)| MemberFrequency {
            member: level.members()[i].iri.clone(),
            frequency,
        })
        .collect();
    elements.sort_by(|a, b| {
        b.frequency
            .cmp(&a.frequency)
            .then_with(|| a.member.cmp(&b.member))
    });
    Ok(DProfile {
        level: level_iri.clone(),
        elements,
        others,
    })
}
