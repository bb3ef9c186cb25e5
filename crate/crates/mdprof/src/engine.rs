//! The profiling pipeline for one table: typing, KG mapping, profiling and
//! graph construction.
//!
//! Each column is handled independently, in parallel unless a single
//! thread is requested. Results keep the source column order.

use std::collections::BTreeMap;

use mdprof_core::kg::{discover_indicator_mapping, discover_level_mapping, KgError};
use mdprof_core::profile::{profile_attribute, profile_dimensional, ProfileError, ProfileOptions};
use mdprof_core::rdf::{build_graph, AttributeInput, BuildError, SourceMetadata};
use mdprof_core::typing::{infer_category, parse_typed, TypingError};
use mdprof_core::{
    AttributeCategory, Column, IProfile, KnowledgeGraph, MetaGraph, Profile, Table, TypingConfig,
};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Typing(#[from] TypingError),
    #[error("attribute `{attribute}`: {source}")]
    Profile {
        attribute: String,
        source: ProfileError,
    },
    #[error(transparent)]
    Mapping(#[from] KgError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("forced type for unknown column `{0}`")]
    UnknownForcedColumn(String),
    #[error("containment threshold {0} is outside [0, 1]")]
    Threshold(f64),
    #[error("cannot start worker threads: {0}")]
    Threads(String),
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub typing: TypingConfig,
    pub containment_thr: f64,
    pub profile: ProfileOptions,
    /// User-chosen categories by column name; they bypass inference.
    pub forced: BTreeMap<String, AttributeCategory>,
    /// `Some(1)` runs on the calling thread; `None` uses every core.
    pub threads: Option<usize>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            typing: TypingConfig::default(),
            containment_thr: 0.5,
            profile: ProfileOptions::default(),
            forced: BTreeMap::new(),
            threads: None,
        }
    }
}

/// Outcome for one column.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeResult {
    pub input: AttributeInput,
    /// The column had no non-null cell.
    pub all_null: bool,
    pub forced: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfiledSource {
    pub metadata: SourceMetadata,
    pub attributes: Vec<AttributeResult>,
}

impl ProfiledSource {
    /// The metadata graph, with the KG prefixes bound for readable Turtle.
    pub fn to_graph(&self, kg: Option<&KnowledgeGraph>) -> Result<MetaGraph, BuildError> {
        let inputs: Vec<AttributeInput> = self.attributes.iter().map(|a| a.input.clone()).collect();
        let mut g = build_graph(&self.metadata, &inputs)?;
        if let Some(kg) = kg {
            for (p, ns) in kg.prefixes() {
                if !g.prefixes().iter().any(|(q, _)| q == p) {
                    g.add_prefix(p, ns);
                }
            }
        }
        Ok(g)
    }
}

/// Types, maps and profiles a single column.
pub fn profile_column(
    column: &Column,
    kg: Option<&KnowledgeGraph>,
    config: &EngineConfig,
) -> Result<AttributeResult, EngineError> {
    let inference = infer_category(column, &config.typing);
    let forced = config.forced.get(&column.name).copied();
    // an all-null column has nothing to type, forced or not
    let category = match forced {
        Some(c) if !inference.all_null => c,
        _ => inference.category,
    };
    let profile_err = |source| EngineError::Profile {
        attribute: column.name.clone(),
        source,
    };

    let level = match kg {
        Some(kg) if !inference.all_null => {
            discover_level_mapping(column, kg, config.containment_thr)
        }
        _ => None,
    };
    let (mapping, profile) = if let Some(m) = level {
        let kg = kg.expect("level mapping implies a KG");
        let p = profile_dimensional(column, &m, kg).map_err(profile_err)?;
        (Some(m), Profile::Dimensional(p))
    } else {
        let mapping = match kg {
            Some(kg) if category.is_numeric() => discover_indicator_mapping(&column.name, kg)?,
            _ => None,
        };
        let profile = if inference.all_null {
            IProfile::Unrecognized {
                null: column.len() as u64,
            }
        } else {
            let typed = parse_typed(column, category, &config.typing)?;
            profile_attribute(&typed, &config.profile).map_err(profile_err)?
        };
        (mapping, Profile::Attribute(profile))
    };
    Ok(AttributeResult {
        input: AttributeInput {
            name: column.name.clone(),
            category,
            mapping,
            profile,
        },
        all_null: inference.all_null,
        forced: forced.is_some() && !inference.all_null,
    })
}

/// Profiles every column of `table`.
pub fn profile_table(
    table: &Table,
    location: &str,
    kg: Option<&KnowledgeGraph>,
    config: &EngineConfig,
) -> Result<ProfiledSource, EngineError> {
    if !(0.0..=1.0).contains(&config.containment_thr) {
        return Err(EngineError::Threshold(config.containment_thr));
    }
    config.typing.validate()?;
    if let Some(unknown) = config.forced.keys().find(|k| table.column(k).is_none()) {
        return Err(EngineError::UnknownForcedColumn(unknown.clone()));
    }
    let run = || -> Result<Vec<AttributeResult>, EngineError> {
        table
            .columns()
            .par_iter()
            .map(|c| profile_column(c, kg, config))
            .collect()
    };
    let attributes = match config.threads {
        Some(1) => table
            .columns()
            .iter()
            .map(|c| profile_column(c, kg, config))
            .collect::<Result<Vec<_>, _>>()?,
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| EngineError::Threads(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    Ok(ProfiledSource {
        metadata: SourceMetadata {
            name: table.name().to_owned(),
            location: location.to_owned(),
            items: table.row_count() as u64,
            ..Default::default()
        },
        attributes,
    })
}
