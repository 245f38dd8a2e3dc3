//! Empirical moments of a rank-frequency distribution and the original Ord
//! coordinates `I = μ₂/μ`, `S = μ₃/μ₂`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freqdata::RankedTable;

/// Mean, variance and third central moment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub mu2: f64,
    pub mu3: f64,
}

/// A point of Ord's graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrdPoint {
    pub i: f64,
    pub s: f64,
}

impl OrdPoint {
    pub const fn new(i: f64, s: f64) -> Self {
        OrdPoint { i, s }
    }
}

/// Moments of a discrete distribution given as `(value, probability)` pairs.
/// Two passes: mean first, then central sums.
pub(crate) fn moments_of<I>(support: I) -> MomentSummary
where
    I: Iterator<Item = (f64, f64)> + Clone,
{
    let mean: f64 = support.clone().map(|(x, p)| x * p).sum();
    let (mu2, mu3) = support.fold((0.0, 0.0), |(m2, m3), (x, p)| {
        let d = x - mean;
        (m2 + d * d * p, m3 + d * d * d * p)
    });
    MomentSummary { mean, mu2, mu3 }
}

/// Treats rank `r` as a value with probability `f_r / N`.
pub fn empirical_moments(ranked: &RankedTable) -> Result<MomentSummary> {
    profile_moments(ranked.counts())
}

/// Moments of positions `1..=K` weighted by `counts`, in whatever order the
/// counts are given.
pub fn profile_moments(counts: &[u64]) -> Result<MomentSummary> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyInput("N = 0".into()));
    }
    let n = total as f64;
    let support = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(move |(r, &c)| ((r + 1) as f64, c as f64 / n));
    Ok(moments_of(support))
}

pub fn ord_coords(summary: &MomentSummary) -> Result<OrdPoint> {
    if summary.mu2 == 0.0 {
        return Err(Error::DegenerateDistribution("zero variance".into()));
    }
    if summary.mean == 0.0 {
        return Err(Error::DegenerateDistribution("zero mean".into()));
    }
    Ok(OrdPoint {
        i: summary.mu2 / summary.mean,
        s: summary.mu3 / summary.mu2,
    })
}
