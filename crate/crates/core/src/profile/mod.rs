//! Per-attribute profiles.
//!
//! Dimensional attributes (mapped to a KG level) get a [`DProfile`]:
//! member frequencies plus an `others` count. Every other attribute gets
//! an [`IProfile`] whose shape depends on its category.
//!
//! Element lists are kept in a canonical order so equal inputs always give
//! equal profiles: members, categories and words by descending count then
//! name; distribution bins by range; years ascending.

mod dimensional;
mod numeric;
mod text;

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::typing::{AttributeCategory, Timestamp, TypedColumn};

pub use dimensional::profile_dimensional;
pub use numeric::{compute_distribution, profile_numeric};
pub use text::{profile_categorical, profile_textual, tokenize, Stopwords};

pub(crate) use numeric::sort_bins;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("attribute has no non-null value")]
    EmptyAfterNulls,
    #[error("bin count must be at least 1")]
    ZeroBins,
    #[error("level <{0}> is not part of the knowledge graph")]
    MappingLevelMissing(String),
    #[error("mapping targets an indicator, a level is required")]
    NotALevelMapping,
    #[error("{expected} profile requested for a column typed as {found}")]
    WrongCategory {
        expected: &'static str,
        found: AttributeCategory,
    },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "profile", rename_all = "lowercase"))]
pub enum Profile {
    Dimensional(DProfile),
    Attribute(IProfile),
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MemberFrequency {
    pub member: String,
    pub frequency: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DProfile {
    pub level: String,
    pub elements: Vec<MemberFrequency>,
    /// Cells (nulls included) not associated with any member of the level.
    pub others: u64,
}

impl DProfile {
    pub fn total(&self) -> u64 {
        self.elements.iter().map(|e| e.frequency).sum::<u64>() + self.others
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "lowercase"))]
pub enum IProfile {
    Numeric(NumericProfile),
    Categorical(CategoricalProfile),
    Datetime(DatetimeProfile),
    Textual(TextualProfile),
    /// Attributes whose category could not be identified carry only the
    /// null count.
    Unrecognized {
        null: u64,
    },
}

impl IProfile {
    pub fn null(&self) -> u64 {
        match self {
            IProfile::Numeric(p) => p.null,
            IProfile::Categorical(p) => p.null,
            IProfile::Datetime(p) => p.null,
            IProfile::Textual(p) => p.null,
            IProfile::Unrecognized { null } => *null,
        }
    }

    /// Whether this profile variant is the one produced for `category`.
    pub fn matches(&self, category: AttributeCategory) -> bool {
        match (self, category) {
            (IProfile::Numeric(p), AttributeCategory::Integer) => p.kind == NumericKind::Integer,
            (IProfile::Numeric(p), AttributeCategory::Decimal) => p.kind == NumericKind::Decimal,
            (IProfile::Categorical(_), AttributeCategory::Categorical)
            | (IProfile::Datetime(_), AttributeCategory::Datetime)
            | (IProfile::Textual(_), AttributeCategory::Textual)
            | (IProfile::Unrecognized { .. }, AttributeCategory::Unrecognized) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum NumericKind {
    Integer,
    Decimal,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NumericProfile {
    pub kind: NumericKind,
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    pub median: f64,
    pub distinct: u64,
    pub null: u64,
    pub distribution: Distribution,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bin {
    pub start_range: f64,
    pub end_range: f64,
    pub count: u64,
}

/// Fixed-width histogram; the last bin is closed on the right.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Distribution {
    pub elements: Vec<Bin>,
}

impl Distribution {
    pub fn total(&self) -> u64 {
        self.elements.iter().map(|b| b.count).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CategoryCount {
    pub name: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CategoricalProfile {
    pub null: u64,
    pub categories: Vec<CategoryCount>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct YearCount {
    pub year: i32,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DatetimeProfile {
    pub distinct: u64,
    pub null: u64,
    pub min_date: Timestamp,
    pub max_date: Timestamp,
    pub years: Vec<YearCount>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WordCount {
    pub word: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TextualProfile {
    pub null: u64,
    /// Tokens surviving stopword removal, before any top-K truncation.
    pub words_total: u64,
    pub words: Vec<WordCount>,
}

#[derive(Debug, Clone)]
pub struct ProfileOptions {
    pub bins: usize,
    pub stopwords: Stopwords,
    /// Keep only the K most frequent words; `None` keeps all.
    pub max_words: Option<usize>,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            bins: 10,
            stopwords: Stopwords::english(),
            max_words: None,
        }
    }
}

/// Profiles a typed column according to its category.
pub fn profile_attribute(
    column: &TypedColumn<'_>,
    options: &ProfileOptions,
) -> Result<IProfile, ProfileError> {
    Ok(match column.category {
        AttributeCategory::Integer | AttributeCategory::Decimal => {
            IProfile::Numeric(profile_numeric(column, options.bins)?)
        }
        AttributeCategory::Categorical => IProfile::Categorical(profile_categorical(column)?),
        AttributeCategory::Datetime => IProfile::Datetime(profile_datetime(column)?),
        AttributeCategory::Textual => IProfile::Textual(profile_textual(
            column,
            &options.stopwords,
            options.max_words,
        )?),
        AttributeCategory::Unrecognized => IProfile::Unrecognized {
            null: column.null_count as u64,
        },
    })
}

pub fn profile_datetime(column: &TypedColumn<'_>) -> Result<DatetimeProfile, ProfileError> {
    let crate::typing::TypedValues::Datetime(values) = &column.values else {
        return Err(ProfileError::WrongCategory {
            expected: "datetime",
            found: column.category,
        });
    };
    let mut present: Vec<Timestamp> = values.iter().flatten().copied().collect();
    if present.is_empty() {
        return Err(ProfileError::EmptyAfterNulls);
    }
    present.sort_unstable();
    let mut years: Vec<YearCount> = Vec::new();
    let mut distinct = 0u64;
    let mut prev: Option<Timestamp> = None;
    for t in &present {
        if prev != Some(*t) {
            distinct += 1;
            prev = Some(*t);
        }
        // sorted input, so years arrive in ascending runs
        match years.last_mut() {
            Some(y) if y.year == t.year() => y.count += 1,
            _ => years.push(YearCount {
                year: t.year(),
                count: 1,
            }),
        }
    }
    Ok(DatetimeProfile {
        distinct,
        null: (values.len() - present.len()) as u64,
        min_date: present[0],
        max_date: present[present.len() - 1],
        years,
    })
}
