// SPDX-License-Identifier: Apache-2.0

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::MetricVector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ranks nodes by value, highest first, ties by ascending id.
pub fn top_k_nodes<T: Scalar>(v: &MetricVector<T>, k: usize) -> Result<Vec<(String, T)>> {
    if k == 0 {
        return Err(Error::Usage("top-k size must be at least 1".into()));
    }
    let mut ranked: Vec<(&str, T)> = v.iter().collect();
    ranked.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.0.cmp(b.0))
    });
    Ok(ranked.into_iter().take(k).map(|(id, x)| (id.to_owned(), x)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution<T> {
    /// `(bin lower edge, count)` for equal-width bins over `[min, max]`.
    pub histogram: Vec<(T, usize)>,
    /// `(value, fraction of nodes with value >= it)` at every distinct
    /// value, descending.
    pub ccdf: Vec<(T, T)>,
}

pub fn metric_distribution<T: Scalar>(v: &MetricVector<T>, bin_count: usize) -> Result<Distribution<T>> {
    if bin_count == 0 {
        return Err(Error::Usage("bin count must be at least 1".into()));
    }
    if v.is_empty() {
        return Err(Error::UndefinedMetric(format!(
            "{} distribution of an empty vector",
            v.kind
        )));
    }
    let mut sorted = v.values().to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let (min, max) = (sorted[0], sorted[sorted.len() - 1]);
    let width = (max - min) / T::from_count(bin_count);

    let mut counts = vec![0usize; bin_count];
    for &x in &sorted {
        let bin = if width > T::zero() {
            ((x - min) / width).to_usize().unwrap_or(0).min(bin_count - 1)
        } else {
            0
        };
        counts[bin] += 1;
    }
    let histogram = counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (min + width * T::from_count(i), c))
        .collect();

    let total = T::from_count(sorted.len());
    let mut ccdf = Vec::new();
    let mut i = sorted.len();
    while i > 0 {
        let value = sorted[i - 1];
        while i > 0 && sorted[i - 1] == value {
            i -= 1;
        }
        // sorted[i..] are exactly the values >= value
        ccdf.push((value, T::from_count(sorted.len() - i) / total));
    }
    Ok(Distribution { histogram, ccdf })
}
