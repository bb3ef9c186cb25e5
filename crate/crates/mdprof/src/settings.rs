//! The `mdprof.toml` settings file.
//!
//! Resolution order for every setting is command-line flag, then the
//! `MDPROF_*` environment variable, then this file, then the built-in
//! default. The binary handles the first two through clap.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

pub const DEFAULT_FILE: &str = "mdprof.toml";

#[derive(Debug, Error)]
pub enum SettingsError {
    #[error("{path}: {source}")]
    Unreadable { path: PathBuf, source: io::Error },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
}

#[derive(Debug, Error)]
#[error("cannot write {path}: {source}")]
pub struct OutputError {
    pub path: PathBuf,
    pub source: io::Error,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Settings {
    pub catalog: Option<PathBuf>,
    pub kg: Option<PathBuf>,
    pub threads: Option<usize>,
    pub delimiter: Option<char>,
    pub null_tokens: Option<Vec<String>>,
    pub has_header: Option<bool>,
    pub cat_thr: Option<usize>,
    pub cat_thr_relative: Option<f64>,
    pub date_thr: Option<f64>,
    pub string_proc: Option<bool>,
    pub day_first: Option<bool>,
    pub containment_thr: Option<f64>,
    pub member_level_prop: Option<String>,
    pub bins: Option<usize>,
    pub stopwords: Option<PathBuf>,
    pub max_words: Option<usize>,
    pub format: Option<String>,
    pub seed: Option<u64>,
}

impl Settings {
    pub fn parse(text: &str, path: &Path) -> Result<Self, SettingsError> {
        toml::from_str(text).map_err(|e| SettingsError::Invalid {
            path: path.to_owned(),
            message: e.message().to_owned(),
        })
    }

    /// Reads `explicit` if given, otherwise `mdprof.toml` in the working
    /// directory when present.
    pub fn load(explicit: Option<&Path>) -> Result<Self, SettingsError> {
        let path = match explicit {
            Some(p) => p.to_owned(),
            None => {
                let p = PathBuf::from(DEFAULT_FILE);
                if !p.is_file() {
                    return Ok(Settings::default());
                }
                p
            }
        };
        let text = fs::read_to_string(&path).map_err(|source| SettingsError::Unreadable {
            path: path.clone(),
            source,
        })?;
        Self::parse(&text, &path)
    }
}
