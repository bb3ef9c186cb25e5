use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use super::{CategoricalProfile, CategoryCount, ProfileError, TextualProfile, WordCount};
use crate::typing::{TypedColumn, TypedValues};

const ENGLISH: &str = include_str!("stopwords_en.txt");

/// Words dropped before counting. Matching is on lowercased tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    pub fn empty() -> Self {
        Stopwords::default()
    }

    /// The bundled English list.
    pub fn english() -> Self {
        Stopwords::from_list(ENGLISH)
    }

    /// One word per line; blank lines and `#` comments are skipped.
    pub fn from_list(text: &str) -> Self {
        Stopwords(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for Stopwords {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Stopwords(iter.into_iter().map(|s| s.into().to_lowercase()).collect())
    }
}

/// Lowercased tokens of `text`, split on every character that is neither
/// alphabetic nor numeric. `emit` receives each non-empty token.
pub fn tokenize(text: &str, buf: &mut String, mut emit: impl FnMut(&str)) {
    buf.clear();
    for c in text.chars() {
        if c.is_alphanumeric() {
            if c.is_ascii() {
                buf.push(c.to_ascii_lowercase());
            } else {
                buf.extend(c.to_lowercase());
            }
        } else if !buf.is_empty() {
            emit(buf);
            buf.clear();
        }
    }
    if !buf.is_empty() {
        emit(buf);
        buf.clear();
    }
}

fn text_values<'c, 'a>(
    column: &'c TypedColumn<'a>,
    expected: &'static str,
) -> Result<&'c [Option<&'a str>], ProfileError> {
    match &column.values {
        TypedValues::Text(v) => Ok(v),
        _ => Err(ProfileError::WrongCategory {
            expected,
            found: column.category,
        }),
    }
}

pub fn profile_categorical(column: &TypedColumn<'_>) -> Result<CategoricalProfile, ProfileError> {
    let values = text_values(column, "categorical")?;
    let mut counts: HashMap<&str, u64> = HashMap::new();
    let mut null = 0u64;
    for v in values {
        match v {
            Some(s) => *counts.entry(*s).or_insert(0) += 1,
            None => null += 1,
        }
    }
    let mut categories: Vec<CategoryCount> = counts
        .into_iter()
        .map(|(name, count)| CategoryCount {
            name: name.into(),
            count,
        })
        .collect();
    categories.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.name.cmp(&b.name)));
    Ok(CategoricalProfile { null, categories })
}

/// Tokenises every non-null cell, drops stopwords and counts the rest.
pub fn profile_textual(
    column: &TypedColumn<'_>,
    stopwords: &Stopwords,
    max_words: Option<usize>,
) -> Result<TextualProfile, ProfileError> {
    let values = text_values(column, "textual")?;
    let mut counts: HashMap<String, u64> = HashMap::new();
    let mut null = 0u64;
    let mut total = 0u64;
    let mut buf = String::new();
    for v in values {
        let Some(text) = v else {
            null += 1;
            continue;
        };
        tokenize(text, &mut buf, |tok| {
            if !stopwords.contains(tok) {
                total += 1;
                *counts.entry_ref(tok).or_insert(0) += 1;
            }
        });
    }
    let mut words: Vec<WordCount> = counts
        .into_iter()
        .map(|(word, count)| WordCount { word, count })
        .collect();
    words.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.word.cmp(&b.word)));
    if let Some(k) = max_words {
        words.truncate(k);
    }
    Ok(TextualProfile {
        null,
        words_total: total,
        words,
    })
}
