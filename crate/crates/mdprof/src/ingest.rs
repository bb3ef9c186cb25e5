//! CSV and JSON loading into [`Table`]s.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use mdprof_core::{Column, Table, TableError};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    UnreadablePath { path: PathBuf, source: io::Error },
    #[error("cannot tell the format of {0}; use a .csv or .json extension")]
    UnknownFormat(PathBuf),
    #[error("CSV parse error at line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("line {line} has {found} fields, the header has {expected}")]
    RaggedRows {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("JSON parse error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("JSON input must be an array of flat objects; {0}")]
    JsonShape(String),
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceFormat {
    Csv,
    Json,
}

impl SourceFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceFormat::Csv => "csv",
            SourceFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadOptions {
    pub delimiter: u8,
    /// Cells equal to any of these (exactly, no trimming) become nulls.
    pub null_tokens: Vec<String>,
    pub has_header: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            delimiter: b',',
            null_tokens: ["", "NULL", "null", "NaN", "NA"].map(String::from).to_vec(),
            has_header: true,
        }
    }
}

impl LoadOptions {
    fn cell<'r>(&self, raw: &'r str) -> Option<&'r str> {
        if self.null_tokens.iter().any(|t| t == raw) {
            None
        } else {
            Some(raw)
        }
    }
}

const SNIFF_BYTES: usize = 4096;

/// Guesses the format from the extension, then from the first bytes.
pub fn detect_format(path: &Path) -> Result<SourceFormat, IngestError> {
    let unreadable = |source| IngestError::UnreadablePath {
        path: path.to_owned(),
        source,
    };
    let mut file = fs::File::open(path).map_err(unreadable)?;
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("csv") => return Ok(SourceFormat::Csv),
        Some("json") => return Ok(SourceFormat::Json),
        _ => {}
    }
    let mut head = Vec::with_capacity(SNIFF_BYTES);
    Read::by_ref(&mut file)
        .take(SNIFF_BYTES as u64)
        .read_to_end(&mut head)
        .map_err(unreadable)?;
    sniff(&head).ok_or_else(|| IngestError::UnknownFormat(path.to_owned()))
}

fn sniff(head: &[u8]) -> Option<SourceFormat> {
    if head.contains(&0) {
        return None;
    }
    // a multi-byte character may be cut at the sniff boundary
    let text = match std::str::from_utf8(head) {
        Ok(t) => t,
        Err(e) if e.error_len().is_none() => std::str::from_utf8(&head[..e.valid_up_to()]).ok()?,
        Err(_) => return None,
    };
    let text = text.trim_start_matches('\u{feff}').trim_start();
    if text.starts_with('[') || text.starts_with('{') {
        return Some(SourceFormat::Json);
    }
    let first = text.lines().next()?;
    (first.contains(',') || first.contains(';')).then_some(SourceFormat::Csv)
}

/// Loads a file; the table is named after the file stem.
pub fn load_source(
    path: &Path,
    format: SourceFormat,
    options: &LoadOptions,
) -> Result<Table, IngestError> {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "source".into());
    let file = fs::File::open(path).map_err(|source| IngestError::UnreadablePath {
        path: path.to_owned(),
        source,
    })?;
    match format {
        SourceFormat::Csv => read_csv(io::BufReader::new(file), &name, options),
        SourceFormat::Json => {
            let mut text = String::new();
            io::BufReader::new(file)
                .read_to_string(&mut text)
                .map_err(|source| IngestError::UnreadablePath {
                    path: path.to_owned(),
                    source,
                })?;
            read_json(&text, &name, options)
        }
    }
}

fn default_name(i: usize) -> String {
    format!("col{}", i + 1)
}

/// Reads RFC 4180 CSV. Rows with the wrong number of fields are rejected.
pub fn read_csv<R: Read>(
    reader: R,
    name: &str,
    options: &LoadOptions,
) -> Result<Table, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();
    let mut columns: Vec<Column> = Vec::new();
    let mut expected: Option<usize> = None;
    let mut rows = 0usize;
    let mut first = true;
    loop {
        let record = match records.next() {
            None => break,
            Some(Err(e)) => return Err(csv_error(e)),
            Some(Ok(r)) => r,
        };
        let line = record.position().map_or(0, |p| p.line());
        if first {
            first = false;
            expected = Some(record.len());
            if options.has_header {
                columns = record
                    .iter()
                    .enumerate()
                    .map(|(i, h)| {
                        let h = h.trim();
                        Column::empty(if h.is_empty() {
                            default_name(i)
                        } else {
                            h.to_owned()
                        })
                    })
                    .collect();
                continue;
            }
            columns = (0..record.len())
                .map(|i| Column::empty(default_name(i)))
                .collect();
        }
        let expected = expected.unwrap_or(0);
        if record.len() != expected {
            return Err(IngestError::RaggedRows {
                line,
                expected,
                found: record.len(),
            });
        }
        for (col, raw) in columns.iter_mut().zip(record.iter()) {
            col.push(options.cell(raw));
        }
        rows += 1;
    }
    Ok(Table::new(name, columns, rows)?)
}

fn csv_error(e: csv::Error) -> IngestError {
    let line = e.position().map_or(0, |p| p.line());
    IngestError::Csv {
        line,
        message: e.to_string(),
    }
}

/// Reads a JSON array of flat objects. Columns are the union of keys in
/// first-seen order; absent keys and JSON nulls become nulls.
pub fn read_json(text: &str, name: &str, options: &LoadOptions) -> Result<Table, IngestError> {
    let value: Value = serde_json::from_str(text).map_err(|e| IngestError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Value::Array(rows) = value else {
        return Err(IngestError::JsonShape(
            "top-level value is not an array".into(),
        ));
    };
    let mut columns: Vec<Column> = Vec::new();
    let mut index: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
    for (r, row) in rows.iter().enumerate() {
        let Value::Object(obj) = row else {
            return Err(IngestError::JsonShape(format!(
                "element {r} is not an object"
            )));
        };
        for (key, v) in obj {
            let scalar;
            let cell = match v {
                Value::Null => None,
                Value::String(s) => options.cell(s),
                Value::Bool(b) => Some(if *b { "true" } else { "false" }),
                Value::Number(n) => {
                    scalar = n.to_string();
                    Some(scalar.as_str())
                }
                Value::Array(_) | Value::Object(_) => {
                    return Err(IngestError::JsonShape(format!(
                        "element {r} has a nested value under `{key}`"
                    )));
                }
            };
            let c = *index.entry(key.clone()).or_insert_with(|| {
                columns.push(Column::new(key.clone(), vec![None::<&str>; r]));
                columns.len() - 1
            });
            columns[c].push(cell);
        }
        for c in &mut columns {
            if c.len() == r {
                c.push(None);
            }
        }
    }
    Ok(Table::new(name, columns, rows.len())?)
}

#[derive(Debug, Error)]
pub enum WriteError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("column `{column}` row {row}: value `{value}` would read back as null")]
    AmbiguousCell {
        column: String,
        row: usize,
        value: String,
    },
    #[error("no null tokens configured")]
    NoNullToken,
}

/// Writes `table` as CSV that [`read_csv`] reads back unchanged: nulls use
/// the first null token, and non-null cells equal to a null token are
/// refused.
pub fn write_csv<W: Write>(
    table: &Table,
    writer: W,
    options: &LoadOptions,
) -> Result<(), WriteError> {
    let null = options.null_tokens.first().ok_or(WriteError::NoNullToken)?;
    let mut w = csv::WriterBuilder::new()
        .delimiter(options.delimiter)
        .from_writer(writer);
    let map_err = |e: csv::Error| WriteError::Io(io::Error::other(e));
    if options.has_header {
        w.write_record(table.columns().iter().map(|c| c.name.as_str()))
            .map_err(map_err)?;
    }
    for row in 0..table.row_count() {
        let mut record = Vec::with_capacity(table.column_count());
        for c in table.columns() {
            let cell = match c.get(row) {
                None => null.as_str(),
                Some(v) if options.null_tokens.iter().any(|t| t == v) => {
                    return Err(WriteError::AmbiguousCell {
                        column: c.name.clone(),
                        row,
                        value: v.to_owned(),
                    })
                }
                Some(v) => v,
            };
            record.push(cell);
        }
        w.write_record(&record).map_err(map_err)?;
    }
    w.flush()?;
    Ok(())
}
