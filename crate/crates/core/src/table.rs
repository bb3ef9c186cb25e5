//! Columnar representation of an ingested source.

use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("column `{name}` has {len} cells, table has {rows} rows")]
    LengthMismatch {
        name: String,
        len: usize,
        rows: usize,
    },
    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),
}

/// One attribute of a source. Cell text is stored back to back in one
/// buffer. A null never collides with the empty string, which is an
/// ordinary value here.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    bytes: String,
    /// End offset of every cell in `bytes`.
    ends: Vec<usize>,
    nulls: Vec<bool>,
    null_count: usize,
    non_ascii: bool,
}

impl Column {
    pub fn new<S: AsRef<str>>(
        name: impl Into<String>,
        cells: impl IntoIterator<Item = Option<S>>,
    ) -> Self {
        let mut c = Column::empty(name);
        for cell in cells {
            c.push(cell.as_ref().map(AsRef::as_ref));
        }
        c
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Column {
            name: name.into(),
            ..Column::default()
        }
    }

    /// Convenience constructor for tests and fixtures: every cell non-null.
    pub fn from_strs(name: impl Into<String>, cells: &[&str]) -> Self {
        Column::new(name, cells.iter().map(Some))
    }

    pub fn push(&mut self, cell: Option<&str>) {
        match cell {
            Some(s) => {
                self.non_ascii |= !s.is_ascii();
                self.bytes.push_str(s);
            }
            None => self.null_count += 1,
        }
        self.ends.push(self.bytes.len());
        self.nulls.push(cell.is_none());
    }

    pub fn get(&self, row: usize) -> Option<&str> {
        if self.nulls[row] {
            return None;
        }
        let start = if row == 0 { 0 } else { self.ends[row - 1] };
        Some(&self.bytes[start..self.ends[row]])
    }

    /// Every cell in row order.
    pub fn cells(&self) -> impl ExactSizeIterator<Item = Option<&str>> + '_ {
        let mut start = 0;
        self.ends.iter().zip(&self.nulls).map(move |(&end, &null)| {
            let cell = &self.bytes[start..end];
            start = end;
            (!null).then_some(cell)
        })
    }

    pub fn len(&self) -> usize {
        self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    pub fn null_count(&self) -> usize {
        self.null_count
    }

    /// True when no cell holds a non-ASCII character.
    pub fn is_ascii(&self) -> bool {
        !self.non_ascii
    }

    pub fn non_null(&self) -> impl Iterator<Item = &str> + '_ {
        self.cells().flatten()
    }
}

/// A source as an ordered set of equally long columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    name: String,
    columns: Vec<Column>,
    row_count: usize,
}

impl Table {
    pub fn new(
        name: impl Into<String>,
        columns: Vec<Column>,
        row_count: usize,
    ) -> Result<Self, TableError> {
        {
            let mut seen = HashSet::with_capacity(columns.len());
            for c in &columns {
                if c.len() != row_count {
                    return Err(TableError::LengthMismatch {
                        name: c.name.clone(),
                        len: c.len(),
                        rows: row_count,
                    });
                }
                if !seen.insert(c.name.as_str()) {
                    return Err(TableError::DuplicateColumn(c.name.clone()));
                }
            }
        }
        Ok(Table {
            name: name.into(),
            columns,
            row_count,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    /// Number of data rows (`dl:items`).
    pub fn row_count(&self) -> usize {
        self.row_count
    }

    /// Number of attributes (`dl:domains`).
    pub fn column_count(&self) -> usize {
        self.columns.len()
    }
}
