use alloc::vec::Vec;

use super::{Bin, Distribution, NumericKind, NumericProfile, ProfileError};
use crate::typing::{TypedColumn, TypedValues};

/// Max, min, mean, median, distinct and null counts plus a fixed-width
/// distribution over the non-null values. The median of an even count is
/// the midpoint of the two middle values.
pub fn profile_numeric(
    column: &TypedColumn<'_>,
    bins: usize,
) -> Result<NumericProfile, ProfileError> {
    if bins == 0 {
        return Err(ProfileError::ZeroBins);
    }
    let (kind, values, distinct, mean) = match &column.values {
        TypedValues::Integer(v) => {
            let mut ints: Vec<i64> = v.iter().flatten().copied().collect();
            if ints.is_empty() {
                return Err(ProfileError::EmptyAfterNulls);
            }
            ints.sort_unstable();
            let mut distinct = ints.clone();
            distinct.dedup();
            let sum: i128 = ints.iter().map(|&x| i128::from(x)).sum();
            let mean = sum as f64 / ints.len() as f64;
            let values: Vec<f64> = ints.iter().map(|&x| x as f64).collect();
            (NumericKind::Integer, values, distinct.len(), mean)
        }
        TypedValues::Decimal(v) => {
            // -0.0 and 0.0 are the same value
            let mut values: Vec<f64> = v.iter().flatten().map(|&x| x + 0.0).collect();
            if values.is_empty() {
                return Err(ProfileError::EmptyAfterNulls);
            }
            values.sort_unstable_by(f64::total_cmp);
            let mut distinct = values.clone();
            distinct.dedup();
            let mean = compensated_sum(&values) / values.len() as f64;
            (NumericKind::Decimal, values, distinct.len(), mean)
        }
        _ => {
            return Err(ProfileError::WrongCategory {
                expected: "numeric",
                found: column.category,
            })
        }
    };
    // values are sorted at this point
    let n = values.len();
    let min = values[0];
    let max = values[n - 1];
    let median = if n % 2 == 1 {
        values[n / 2]
    } else {
        values[n / 2 - 1].midpoint(values[n / 2])
    };
    let distribution = compute_distribution(&values, bins)?;
    Ok(NumericProfile {
        kind,
        max,
        min,
        mean: mean.clamp(min, max),
        median,
        distinct: distinct as u64,
        null: column.null_count as u64,
        distribution,
    })
}

fn compensated_sum(values: &[f64]) -> f64 {
    // Neumaier summation
    let mut sum = 0.0;
    let mut c = 0.0;
    for &v in values {
        let t = sum + v;
        if f64::abs(sum) >= f64::abs(v) {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Equal-width bins over `[min, max]`: bin `i` covers
/// `[min + i·w, min + (i+1)·w)` and the last bin is closed at `max`. When
/// all values are equal there is a single bin `[min, max]`.
pub fn compute_distribution(values: &[f64], bins: usize) -> Result<Distribution, ProfileError> {
    if bins == 0 {
        return Err(ProfileError::ZeroBins);
    }
    let (min, max) = values
        .iter()
        .fold(None, |acc: Option<(f64, f64)>, &v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
        .ok_or(ProfileError::EmptyAfterNulls)?;
    if min == max {
        return Ok(Distribution {
            elements: alloc::vec![Bin {
                start_range: min,
                end_range: max,
                count: values.len() as u64,
            }],
        });
    }
    let width = (max - min) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|i| min + i as f64 * width).collect();
    edges.push(max);
    let mut counts = alloc::vec![0u64; bins];
    for &v in values {
        let mut i = (((v - min) / width) as usize).min(bins - 1);
        // settle on the bin whose stated edges contain v
        while i > 0 && v < edges[i] {
            i -= 1;
        }
        while i + 1 < bins && v >= edges[i + 1] {
            i += 1;
        }
        counts[i] += 1;
    }
    Ok(Distribution {
        elements: counts
            .into_iter()
            .enumerate()
            .map(|(i, count)| Bin {
                start_range: edges[i],
                end_range: edges[i + 1],
                count,
            })
            .collect(),
    })
}

pub(crate) fn sort_bins(bins: &mut [Bin]) {
    bins.sort_by(|a, b| {
        a.start_range
            .total_cmp(&b.start_range)
            .then(a.end_range.total_cmp(&b.end_range))
    });
}
