//! Indices of qualitative variation and the modified Ord coordinates built on them.
//!
//! All sums run over the counts sorted ascending, so every value depends only
//! on the count multiset and is bitwise-identical under any reordering of the
//! categories.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freqdata::CategoryTable;

/// VA, SDA, RE and the normalized repeat rate of one table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexSummary {
    pub va: f64,
    pub sda: f64,
    pub re: f64,
    pub rr_norm: f64,
}

/// `(I_m, S_m) = (SDA / VA, RE / SDA)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModifiedPoint {
    pub i_m: f64,
    pub s_m: f64,
    pub indices: IndexSummary,
}

fn check(table: &CategoryTable) -> Result<Vec<u64>> {
    let k = table.num_categories();
    if k < 2 {
        return Err(Error::DegenerateCategories(k));
    }
    if table.total() == 0 {
        return Err(Error::EmptyInput("N = 0".into()));
    }
    Ok(table.sorted_counts())
}

/// `Σ(f_i − N/K)² / (N²(K−1)/K)`, shared by VA and SDA. 0 for a uniform
/// table, 1 when one category holds everything.
fn dispersion_ratio(sorted: &[u64], total: u64) -> f64 {
    let k = sorted.len() as f64;
    let n = total as f64;
    let mean = n / k;
    let ss: f64 = sorted.iter().map(|&f| (f as f64 - mean).powi(2)).sum();
    (ss / (n * n * (k - 1.0) / k)).clamp(0.0, 1.0)
}

/// Variance analogue.
pub fn va(table: &CategoryTable) -> Result<f64> {
    let sorted = check(table)?;
    Ok(1.0 - dispersion_ratio(&sorted, table.total()))
}

/// Standard deviation analogue.
pub fn sda(table: &CategoryTable) -> Result<f64> {
    let sorted = check(table)?;
    Ok(1.0 - dispersion_ratio(&sorted, table.total()).sqrt())
}

/// Relativized (natural-log) entropy; empty categories contribute nothing.
pub fn re(table: &CategoryTable) -> Result<f64> {
    let sorted = check(table)?;
    let n = table.total() as f64;
    let h: f64 = sorted
        .iter()
        .filter(|&&f| f > 0)
        .map(|&f| {
            let p = f as f64 / n;
            -p * p.ln()
        })
        .sum();
    Ok((h / (sorted.len() as f64).ln()).clamp(0.0, 1.0))
}

/// Normalized repeat rate `K/(K−1) · (1 − Σf_i²/N²)`.
pub fn rr_norm(table: &CategoryTable) -> Result<f64> {
    let sorted = check(table)?;
    let k = sorted.len() as f64;
    let n = table.total() as u128;
    // exact integer sum of squares
    let sq: u128 = sorted.iter().map(|&f| (f as u128) * (f as u128)).sum();
    let repeat = sq as f64 / (n * n) as f64;
    Ok((k / (k - 1.0) * (1.0 - repeat)).clamp(0.0, 1.0))
}

pub fn index_summary(table: &CategoryTable) -> Result<IndexSummary> {
    Ok(IndexSummary {
        va: va(table)?,
        sda: sda(table)?,
        re: re(table)?,
        rr_norm: rr_norm(table)?,
    })
}

/// Modified Ord coordinates; undefined when all mass sits in one category.
pub fn modified_coords(table: &CategoryTable) -> Result<ModifiedPoint> {
    let indices = index_summary(table)?;
    if indices.va == 0.0 || indices.sda == 0.0 {
        return Err(Error::DegenerateDistribution(
            "all items fall into one category (VA = 0)".into(),
        ));
    }
    Ok(ModifiedPoint {
        i_m: indices.sda / indices.va,
        s_m: indices.re / indices.sda,
        indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(counts: &[u64]) -> CategoryTable {
        CategoryTable::from_counts(counts).unwrap()
    }

    #[test]
    fn uniform_is_one() {
        let u = t(&[5, 5, 5, 5]);
        assert_eq!(va(&u).unwrap(), 1.0);
        assert_eq!(sda(&u).unwrap(), 1.0);
        assert!((re(&u).unwrap() - 1.0).abs() < 1e-12);
        assert!((rr_norm(&u).unwrap() - 1.0).abs() < 1e-12);
        let m = modified_coords(&u).unwrap();
        assert!((m.i_m - 1.0).abs() < 1e-12);
        assert!((m.s_m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn concentrated_is_zero() {
        let c = t(&[20, 0, 0, 0]);
        assert_eq!(va(&c).unwrap(), 0.0);
        assert_eq!(sda(&c).unwrap(), 0.0);
        assert_eq!(re(&c).unwrap(), 0.0);
        assert!(matches!(
            modified_coords(&c),
            Err(Error::DegenerateDistribution(_))
        ));
    }

    #[test]
    fn three_one() {
        let x = t(&[3, 1]);
        assert!((va(&x).unwrap() - 0.75).abs() < 1e-12);
        assert!((sda(&x).unwrap() - 0.5).abs() < 1e-12);
        assert!((rr_norm(&x).unwrap() - 0.75).abs() < 1e-12);
        let re_oracle = (-0.75f64 * 0.75f64.ln() - 0.25 * 0.25f64.ln()) / 2f64.ln();
        assert!((re(&x).unwrap() - re_oracle).abs() < 1e-12);
        let m = modified_coords(&x).unwrap();
        assert!((m.i_m - 2.0 / 3.0).abs() < 1e-12);
        // extended-precision value
        assert!((m.s_m - 1.622_556_248_918_265_7).abs() < 1e-12);
    }

    #[test]
    fn zero_category_entropy() {
        let x = t(&[2, 2, 0]);
        assert!((re(&x).unwrap() - 0.630_929_753_571_457_4).abs() < 1e-12);
    }

    #[test]
    fn single_category_rejected() {
        let one = t(&[7]);
        assert!(matches!(va(&one), Err(Error::DegenerateCategories(1))));
        assert!(matches!(re(&one), Err(Error::DegenerateCategories(1))));
        assert!(matches!(rr_norm(&one), Err(Error::DegenerateCategories(1))));
    }

    // exhaustive over small 3-category tables
    #[test]
    fn moving_mass_to_the_top_never_raises_va() {
        for a in 0..6u64 {
            for b in 0..6u64 {
                for c in 1..6u64 {
                    let counts = [a, b, c];
                    let top = (0..3).max_by_key(|&i| (counts[i], i)).unwrap();
                    for from in 0..3 {
                        if from == top || counts[from] == 0 {
                            continue;
                        }
                        let mut moved = counts;
                        moved[from] -= 1;
                        moved[top] += 1;
                        let before = va(&t(&counts)).unwrap();
                        let after = va(&t(&moved)).unwrap();
                        assert!(after <= before + 1e-15, "{counts:?} -> {moved:?}");
                    }
                }
            }
        }
    }
}
