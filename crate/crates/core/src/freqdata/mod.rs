//! Frequency tables over labeled categories and their rank-frequency form.
//!
//! A [`CategoryTable`] keeps zero-count categories: they count toward the
//! number of categories `K`, which is what makes inventory sizes such as
//! Russian's 33 graphemes come out right.

mod grapheme;
mod io;

pub use grapheme::{count_graphemes, load_alphabet, Alphabet};
pub use io::{load_tables, load_tables_auto, save_tables, Format, Tables};

use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::error::{Error, Result};

/// Non-negative counts over `K` uniquely labeled categories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct CategoryTable {
    labels: Vec<String>,
    counts: Vec<u64>,
    total: u64,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    labels: Vec<String>,
    counts: Vec<u64>,
}

impl TryFrom<RawTable> for CategoryTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        CategoryTable::new(raw.labels, raw.counts)
    }
}

impl From<CategoryTable> for RawTable {
    fn from(t: CategoryTable) -> Self {
        RawTable {
            labels: t.labels,
            counts: t.counts,
        }
    }
}

impl CategoryTable {
    /// Builds a table, checking that labels are unique, lengths agree and the
    /// total is positive.
    pub fn new(labels: Vec<String>, counts: Vec<u64>) -> Result<Self> {
        if labels.len() != counts.len() {
            return Err(Error::Value(format!(
                "{} labels but {} counts",
                labels.len(),
                counts.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::EmptyInput("table has no categories".into()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::Duplicate {
                    language: String::new(),
                    label: label.clone(),
                });
            }
        }
        let total = counts.iter().try_fold(0u64, |acc, &c| acc.checked_add(c));
        let total = total.ok_or_else(|| Error::Value("total count overflows u64".into()))?;
        if total == 0 {
            return Err(Error::EmptyInput("all counts are zero".into()));
        }
        Ok(CategoryTable {
            labels,
            counts,
            total,
        })
    }

    /// Table with labels `"1"`, `"2"`, ... in the given order.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let labels = (1..=counts.len()).map(|i| i.to_string()).collect();
        Self::new(labels, counts.to_vec())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Total number of items `N`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of categories `K`, zero-count ones included.
    pub fn num_categories(&self) -> usize {
        self.counts.len()
    }

    /// Relative frequencies `f_i / N`.
    pub fn proportions(&self) -> Vec<f64> {
        let n = self.total as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    pub fn get(&self, label: &str) -> Option<u64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.counts[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.counts.iter().copied())
    }

    /// Counts sorted ascending; the summation order used by the indices.
    pub(crate) fn sorted_counts(&self) -> Vec<u64> {
        let mut c = self.counts.clone();
        c.sort_unstable();
        c
    }
}

/// Counts in rank order: position 0 holds rank 1, the most frequent category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedTable {
    counts: Vec<u64>,
    /// Source label of each rank.
    labels: Vec<String>,
}

impl RankedTable {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn num_ranks(&self) -> usize {
        self.counts.len()
    }
}

/// Sorts categories by decreasing count; equal counts keep ascending label order.
pub fn rank_frequencies(table: &CategoryTable) -> RankedTable {
    let mut order: Vec<usize> = (0..table.num_categories()).collect();
    order.sort_by(|&a, &b| {
        table.counts[b]
            .cmp(&table.counts[a])
            .then_with(|| table.labels[a].cmp(&table.labels[b]))
    });
    RankedTable {
        counts: order.iter().map(|&i| table.counts[i]).collect(),
        labels: order.iter().map(|&i| table.labels[i].clone()).collect(),
    }
}
