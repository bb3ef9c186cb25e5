//! Synthetic sources for the benchmark workloads.

use std::collections::HashSet;

use chrono::{Days, NaiveDate};
use mdprof_core::kg::normalize_value;
use mdprof_core::{Column, Table};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Labels of the categorical column.
pub const CATEGORIES: [&str; 4] = ["north", "south", "east", "west"];

/// First day of the datetime range; the range spans seventy years.
pub fn date_origin() -> NaiveDate {
    NaiveDate::from_ymd_opt(1950, 1, 1).expect("valid date")
}

pub fn date_end() -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 1, 1).expect("valid date")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A dimensional column plus the bookkeeping needed to check it.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionalSource {
    pub table: Table,
    /// Cells holding a token that names no member.
    pub noise_cells: usize,
    /// Distinct members among the remaining cells.
    pub distinct_members: usize,
    /// Distinct noise tokens.
    pub distinct_noise: usize,
}

/// `card` cells of which exactly `round(noise * card)` are tokens absent
/// from `members`; the rest are sampled with replacement from `members`.
///
/// The number of distinct noise tokens is chosen so that the share of
/// distinct values naming a member is as close to `1 - noise` as the
/// distinct-value count allows.
pub fn gen_dimensional_source(
    card: usize,
    noise: f64,
    members: &[String],
    seed: u64,
) -> DimensionalSource {
    assert!(!members.is_empty(), "member set must not be empty");
    assert!((0.0..=1.0).contains(&noise), "noise must be a fraction");
    let mut rng = rng(seed);
    let n_noise = ((noise * card as f64).round() as usize).min(card);
    let noisy: HashSet<usize> = index::sample(&mut rng, card, n_noise).into_iter().collect();

    // Choose every cell first and materialise the strings afterwards in
    // row order, so hits and noise share one allocation pattern.
    let mut choice: Vec<Option<usize>> = Vec::with_capacity(card);
    let mut used = HashSet::new();
    for i in 0..card {
        if noisy.contains(&i) {
            choice.push(None);
        } else {
            let m = rng.random_range(0..members.len());
            used.insert(m);
            choice.push(Some(m));
        }
    }
    let distinct_members = used.len();
    let k = if n_noise == 0 {
        0
    } else if noise >= 1.0 || distinct_members == 0 {
        n_noise
    } else {
        let ideal = noise * distinct_members as f64 / (1.0 - noise);
        (ideal.round() as usize).clamp(1, n_noise)
    };
    let tokens = noise_tokens(k, members);
    let mut j = 0;
    let cells = choice.into_iter().map(|c| match c {
        Some(m) => Some(members[m].as_str()),
        None => {
            // every token appears at least once, the rest are uniform
            let t = if j < k { j } else { rng.random_range(0..k) };
            j += 1;
            Some(tokens[t].as_str())
        }
    });
    let table = Table::new("dimensional", vec![Column::new("level", cells)], card)
        .expect("one column of card cells");
    DimensionalSource {
        table,
        noise_cells: n_noise,
        distinct_members,
        distinct_noise: k,
    }
}

fn noise_tokens(k: usize, members: &[String]) -> Vec<String> {
    let taken: HashSet<String> = members
        .iter()
        .map(|m| normalize_value(m).into_owned())
        .collect();
    let mut out = Vec::with_capacity(k);
    let mut i = 0usize;
    while out.len() < k {
        let t = format!("unmapped-{i:07}");
        if !taken.contains(&t) {
            out.push(t);
        }
        i += 1;
    }
    out
}

/// The five typed columns of the attribute workloads: `integer`,
/// `decimal`, `categorical`, `datetime` and `textual`.
pub fn gen_typed_source(card: usize, corpus: &[String], seed: u64) -> Table {
    assert!(!corpus.is_empty(), "corpus must not be empty");
    let mut rng = rng(seed);
    let span = (date_end() - date_origin()).num_days() as u64;
    let mut int = Vec::with_capacity(card);
    let mut dec = Vec::with_capacity(card);
    let mut cat = Vec::with_capacity(card);
    let mut date = Vec::with_capacity(card);
    let mut text = Vec::with_capacity(card);
    for _ in 0..card {
        int.push(Some(rng.random_range(0..=card as u64).to_string()));
        dec.push(Some(format!("{:.5}", rng.random_range(0.0..=card as f64))));
        cat.push(Some(
            CATEGORIES[rng.random_range(0..CATEGORIES.len())].to_owned(),
        ));
        let d = date_origin() + Days::new(rng.random_range(0..span));
        date.push(Some(d.format("%Y-%m-%d").to_string()));
        let mut cell = String::new();
        for w in 0..5 {
            if w > 0 {
                cell.push(' ');
            }
            cell.push_str(&corpus[rng.random_range(0..corpus.len())]);
        }
        text.push(Some(cell));
    }
    Table::new(
        "typed",
        vec![
            Column::new("integer", int),
            Column::new("decimal", dec),
            Column::new("categorical", cat),
            Column::new("datetime", date),
            Column::new("textual", text),
        ],
        card,
    )
    .expect("five columns of card cells")
}
