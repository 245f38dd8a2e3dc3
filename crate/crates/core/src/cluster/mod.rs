//! k-means (Lloyd, MacQueen, Hartigan-Wong), k-medoids (PAM) and an exhaustive
//! partition search used as ground truth on small instances.
//!
//! Everything is deterministic: initializations come from a seeded SplitMix64
//! stream, and ties go to the lowest cluster (or point) index.

mod kmeans;
mod oracle;
mod pam;

pub use kmeans::{kmeans, DEFAULT_RESTARTS, DEFAULT_SEED};
pub use oracle::{partition_oracle, Objective, ORACLE_MAX_POINTS};
pub use pam::kmedoids_pam;

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Labeled points of a common dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<Vec<f64>>,
    ids: Vec<String>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>, ids: Vec<String>) -> Result<Self> {
        if points.len() != ids.len() {
            return Err(Error::Value(format!(
                "{} points but {} ids",
                points.len(),
                ids.len()
            )));
        }
        if points.is_empty() {
            return Err(Error::EmptyInput("no points".into()));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::Value("points have dimension 0".into()));
        }
        for (p, id) in points.iter().zip(&ids) {
            if p.len() != dim {
                return Err(Error::Value(format!(
                    "point {id} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::Value(format!(
                    "point {id} has a non-finite coordinate"
                )));
            }
        }
        let mut seen = HashSet::new();
        for id in &ids {
            if !seen.insert(id) {
                return Err(Error::Duplicate {
                    language: "<points>".into(),
                    label: id.clone(),
                });
            }
        }
        Ok(PointSet { points, ids })
    }

    /// One-dimensional points, e.g. inventory sizes.
    pub fn from_values(values: &[f64], ids: Vec<String>) -> Result<Self> {
        Self::new(values.iter().map(|&v| vec![v]).collect(), ids)
    }

    /// Ids `"p0"`, `"p1"`, ...
    pub fn unlabeled(points: Vec<Vec<f64>>) -> Result<Self> {
        let ids = (0..points.len()).map(|i| format!("p{i}")).collect();
        Self::new(points, ids)
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub(crate) fn check_k(&self, k: usize) -> Result<()> {
        if k < 2 {
            return Err(Error::Value(format!("k = {k}, need at least 2")));
        }
        if k > self.len() {
            return Err(Error::TooFewPoints { k, n: self.len() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Lloyd,
    #[serde(rename = "macqueen")]
    MacQueen,
    HartiganWong,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Lloyd, Variant::MacQueen, Variant::HartiganWong];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    Manhattan,
}

impl Metric {
    pub const ALL: [Metric; 2] = [Metric::Euclidean, Metric::Manhattan];

    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => squared_distance(a, b).sqrt(),
            Metric::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Kmeans,
    Kmedoids,
    Oracle,
}

macro_rules! str_enum {
    ($ty:ty, $what:literal) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let v = serde_json::to_value(self).expect("unit variant");
                f.pad(v.as_str().unwrap_or_default())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                serde_json::from_value(serde_json::Value::String(s.to_string()))
                    .map_err(|_| Error::Value(format!(concat!("unknown ", $what, " {:?}"), s)))
            }
        }
    };
}

str_enum!(Variant, "k-means variant");
str_enum!(Metric, "metric");
str_enum!(Method, "clustering method");

/// Outcome of one clustering call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterResult {
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Metric>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    pub k: usize,
    pub ids: Vec<String>,
    /// Cluster index of each point, parallel to `ids`.
    pub assignment: Vec<usize>,
    /// Cluster means (k-means) or medoid coordinates (PAM).
    pub centers: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub medoids: Option<Vec<String>>,
    pub objective: f64,
    pub iterations: usize,
}

impl ClusterResult {
    /// Member ids per cluster, each sorted, clusters ordered by smallest member.
    pub fn clusters(&self) -> Vec<Vec<String>> {
        let mut groups = vec![Vec::new(); self.k];
        for (id, &c) in self.ids.iter().zip(&self.assignment) {
            groups[c].push(id.clone());
        }
        groups.retain(|g| !g.is_empty());
        canonical(groups)
    }

    pub fn cluster_of(&self, id: &str) -> Option<usize> {
        self.ids
            .iter()
            .position(|x| x == id)
            .map(|i| self.assignment[i])
    }

    /// Re-derives the objective from the assignment alone.
    pub fn recompute_objective(&self, points: &PointSet) -> f64 {
        match (self.method, self.metric) {
            (Method::Kmedoids, Some(metric)) => points
                .points()
                .iter()
                .zip(&self.assignment)
                .map(|(p, &c)| metric.distance(p, &self.centers[c]))
                .sum(),
            _ => wcss(points.points(), &self.assignment, self.k),
        }
    }
}

/// Sorts members and clusters into the canonical comparison order.
pub fn canonical(mut groups: Vec<Vec<String>>) -> Vec<Vec<String>> {
    for g in &mut groups {
        g.sort();
    }
    groups.sort();
    groups
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Index of the closest center; ties go to the lowest index.
pub(crate) fn nearest(point: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, center) in centers.iter().enumerate() {
        let d = squared_distance(point, center);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

pub(crate) fn means(points: &[Vec<f64>], assignment: &[usize], k: usize) -> Vec<Vec<f64>> {
    let dim = points[0].len();
    let mut sums = vec![vec![0.0; dim]; k];
    let mut sizes = vec![0usize; k];
    for (p, &c) in points.iter().zip(assignment) {
        sizes[c] += 1;
        for (s, x) in sums[c].iter_mut().zip(p) {
            *s += x;
        }
    }
    for (s, &n) in sums.iter_mut().zip(&sizes) {
        if n > 0 {
            s.iter_mut().for_each(|v| *v /= n as f64);
        }
    }
    sums
}

/// Within-cluster sum of squared distances to the cluster means.
pub fn wcss(points: &[Vec<f64>], assignment: &[usize], k: usize) -> f64 {
    let centers = means(points, assignment, k);
    points
        .iter()
        .zip(assignment)
        .map(|(p, &c)| squared_distance(p, &centers[c]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_set_validation() {
        assert!(PointSet::new(
            vec![vec![0.0], vec![1.0, 2.0]],
            vec!["a".into(), "b".into()]
        )
        .is_err());
        assert!(PointSet::new(vec![vec![0.0], vec![1.0]], vec!["a".into(), "a".into()]).is_err());
        assert!(PointSet::new(vec![vec![f64::NAN]], vec!["a".into()]).is_err());
        assert!(PointSet::new(vec![], vec![]).is_err());
        let ps = PointSet::from_values(&[1.0, 2.0], vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(ps.dim(), 1);
        assert!(matches!(
            ps.check_k(3),
            Err(Error::TooFewPoints { k: 3, n: 2 })
        ));
        assert!(ps.check_k(1).is_err());
    }

    #[test]
    fn names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert_eq!(
            "hartigan-wong".parse::<Variant>().unwrap(),
            Variant::HartiganWong
        );
        assert_eq!("macqueen".parse::<Variant>().unwrap(), Variant::MacQueen);
        assert_eq!("manhattan".parse::<Metric>().unwrap(), Metric::Manhattan);
        assert!("ward".parse::<Method>().is_err());
    }

    #[test]
    fn nearest_ties_go_low() {
        let centers = vec![vec![1.0], vec![-1.0]];
        assert_eq!(nearest(&[0.0], &centers).0, 0);
    }
}
