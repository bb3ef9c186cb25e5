//! Attribute classification and typed parsing.
//!
//! Classification is a cascade over the non-null cells of a column:
//! numeric (integer, then decimal) → categorical → datetime → textual →
//! unrecognized. The first test that passes decides the category.

mod datetime;
mod number;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use hashbrown::HashSet;
use thiserror::Error;

use crate::table::Column;

pub use datetime::Timestamp;
pub use number::{parse_integer, parse_number};

/// The six-way classification of an attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum AttributeCategory {
    Integer,
    Decimal,
    Datetime,
    Textual,
    Categorical,
    Unrecognized,
}

impl AttributeCategory {
    pub const ALL: [AttributeCategory; 6] = [
        AttributeCategory::Integer,
        AttributeCategory::Decimal,
        AttributeCategory::Datetime,
        AttributeCategory::Textual,
        AttributeCategory::Categorical,
        AttributeCategory::Unrecognized,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AttributeCategory::Integer => "integer",
            AttributeCategory::Decimal => "decimal",
            AttributeCategory::Datetime => "datetime",
            AttributeCategory::Textual => "textual",
            AttributeCategory::Categorical => "categorical",
            AttributeCategory::Unrecognized => "unrecognized",
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(
            self,
            AttributeCategory::Integer | AttributeCategory::Decimal
        )
    }
}

impl fmt::Display for AttributeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown attribute category `{0}`")]
pub struct UnknownCategory(pub alloc::string::String);

impl FromStr for AttributeCategory {
    type Err = UnknownCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AttributeCategory::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownCategory(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TypingError {
    #[error("cat_thr must be at least 1")]
    CategoricalThreshold,
    #[error("relative categorical threshold {0} is outside (0, 1]")]
    RelativeCategoricalThreshold(f64),
    #[error("date_thr {0} is outside (0, 1]")]
    DateThreshold(f64),
    #[error("column `{column}` is incompatible with category {category}: {failures} of {non_null} cells fail to parse")]
    IncompatibleCategory {
        column: alloc::string::String,
        category: AttributeCategory,
        failures: usize,
        non_null: usize,
    },
}

/// Knobs of the classification cascade.
#[derive(Debug, Clone, PartialEq)]
pub struct TypingConfig {
    /// Maximum number of distinct values for a categorical attribute.
    pub cat_thr: usize,
    /// When set, replaces `cat_thr` with `fraction × non-null cells`.
    pub cat_thr_relative: Option<f64>,
    /// Maximum tolerated fraction of cells failing datetime parsing.
    pub date_thr: f64,
    /// Enables the textual category.
    pub string_proc: bool,
    /// Resolves `xx/yy/YYYY` as day/month when true.
    pub day_first: bool,
}

impl Default for TypingConfig {
    fn default() -> Self {
        TypingConfig {
            cat_thr: 20,
            cat_thr_relative: None,
            date_thr: 0.05,
            string_proc: true,
            day_first: true,
        }
    }
}

impl TypingConfig {
    pub fn validate(&self) -> Result<(), TypingError> {
        if self.cat_thr == 0 {
            return Err(TypingError::CategoricalThreshold);
        }
        if let Some(f) = self.cat_thr_relative {
            if !(f > 0.0 && f <= 1.0) {
                return Err(TypingError::RelativeCategoricalThreshold(f));
            }
        }
        if !(self.date_thr > 0.0 && self.date_thr <= 1.0) {
            return Err(TypingError::DateThreshold(self.date_thr));
        }
        Ok(())
    }

    fn categorical_limit(&self, non_null: usize) -> usize {
        match self.cat_thr_relative {
            Some(f) => (f * non_null as f64) as usize,
            None => self.cat_thr,
        }
    }
}

/// Outcome of [`infer_category`]. `all_null` flags columns with no
/// non-null cell; those are always `Unrecognized`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inference {
    pub category: AttributeCategory,
    pub all_null: bool,
}

pub fn infer_category(column: &Column, config: &TypingConfig) -> Inference {
    let cells: Vec<&str> = column.non_null().collect();
    if cells.is_empty() {
        return Inference {
            category: AttributeCategory::Unrecognized,
            all_null: true,
        };
    }
    Inference {
        category: classify(&cells, config),
        all_null: false,
    }
}

fn classify(cells: &[&str], config: &TypingConfig) -> AttributeCategory {
    if let Some(category) = numeric_category(cells) {
        return category;
    }

    let limit = config.categorical_limit(cells.len());
    let mut distinct = HashSet::with_capacity(limit.min(cells.len()) + 1);
    let mut within_limit = true;
    for c in cells {
        distinct.insert(*c);
        if distinct.len() > limit {
            within_limit = false;
            break;
        }
    }
    if within_limit {
        return AttributeCategory::Categorical;
    }

    let max_failures = config.date_thr * cells.len() as f64;
    let mut failures = 0usize;
    let mut datetime = true;
    for c in cells {
        if Timestamp::parse(c, config.day_first).is_none() {
            failures += 1;
            if failures as f64 > max_failures {
                datetime = false;
                break;
            }
        }
    }
    if datetime && failures < cells.len() {
        return AttributeCategory::Datetime;
    }

    if config.string_proc && cells.iter().any(|c| c.chars().any(char::is_alphabetic)) {
        return AttributeCategory::Textual;
    }
    AttributeCategory::Unrecognized
}

fn numeric_category(cells: &[&str]) -> Option<AttributeCategory> {
    let mut all_integer = true;
    for c in cells {
        if all_integer && parse_integer(c).is_some() {
            continue;
        }
        parse_number(c)?;
        all_integer = false;
    }
    Some(if all_integer {
        AttributeCategory::Integer
    } else {
        AttributeCategory::Decimal
    })
}

/// Typed cells aligned with the source rows; `None` marks a null (or, for
/// datetimes, a tolerated parse failure).
#[derive(Debug, Clone, PartialEq)]
pub enum TypedValues<'a> {
    Integer(Vec<Option<i64>>),
    Decimal(Vec<Option<f64>>),
    Datetime(Vec<Option<Timestamp>>),
    Text(Vec<Option<&'a str>>),
}

impl TypedValues<'_> {
    pub fn len(&self) -> usize {
        match self {
            TypedValues::Integer(v) => v.len(),
            TypedValues::Decimal(v) => v.len(),
            TypedValues::Datetime(v) => v.len(),
            TypedValues::Text(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Numeric view used by the numeric profile; `None` for other kinds.
    pub fn as_f64(&self) -> Option<Vec<f64>> {
        match self {
            TypedValues::Integer(v) => Some(v.iter().flatten().map(|&x| x as f64).collect()),
            TypedValues::Decimal(v) => Some(v.iter().flatten().copied().collect()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypedColumn<'a> {
    pub category: AttributeCategory,
    pub values: TypedValues<'a>,
    pub null_count: usize,
}

impl TypedColumn<'_> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Parses every cell of `column` under `category`. Numeric categories
/// tolerate no failure; datetime tolerates `config.date_thr` and records
/// the failures as nulls; string categories always succeed.
pub fn parse_typed<'a>(
    column: &'a Column,
    category: AttributeCategory,
    config: &TypingConfig,
) -> Result<TypedColumn<'a>, TypingError> {
    let non_null = column.len() - column.null_count();
    let incompatible = |failures| TypingError::IncompatibleCategory {
        column: column.name.clone(),
        category,
        failures,
        non_null,
    };
    let values = match category {
        AttributeCategory::Integer => {
            let (v, failures) = parse_cells(column, parse_integer);
            if failures > 0 {
                return Err(incompatible(failures));
            }
            TypedValues::Integer(v)
        }
        AttributeCategory::Decimal => {
            let (v, failures) = parse_cells(column, parse_number);
            if failures > 0 {
                return Err(incompatible(failures));
            }
            TypedValues::Decimal(v)
        }
        AttributeCategory::Datetime => {
            let day_first = config.day_first;
            let (v, failures) = parse_cells(column, |c| Timestamp::parse(c, day_first));
            if non_null > 0
                && (failures as f64 / non_null as f64 > config.date_thr || failures == non_null)
            {
                return Err(incompatible(failures));
            }
            TypedValues::Datetime(v)
        }
        AttributeCategory::Categorical
        | AttributeCategory::Textual
        | AttributeCategory::Unrecognized => TypedValues::Text(column.cells().collect()),
    };
    let null_count = match &values {
        TypedValues::Integer(v) => v.iter().filter(|x| x.is_none()).count(),
        TypedValues::Decimal(v) => v.iter().filter(|x| x.is_none()).count(),
        TypedValues::Datetime(v) => v.iter().filter(|x| x.is_none()).count(),
        TypedValues::Text(v) => v.iter().filter(|x| x.is_none()).count(),
    };
    Ok(TypedColumn {
        category,
        values,
        null_count,
    })
}

fn parse_cells<T>(column: &Column, parse: impl Fn(&str) -> Option<T>) -> (Vec<Option<T>>, usize) {
    let mut failures = 0;
    let values = column
        .cells()
        .map(|c| match c {
            None => None,
            Some(s) => {
                let v = parse(s);
                if v.is_none() {
                    failures += 1;
                }
                v
            }
        })
        .collect();
    (values, failures)
}
