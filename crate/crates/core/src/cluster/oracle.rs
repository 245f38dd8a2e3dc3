use serde::{Deserialize, Serialize};

use super::{means, squared_distance, ClusterResult, Method, Metric, PointSet};
use crate::error::{Error, Result};

/// Largest instance the exhaustive search accepts (Bell(12) ≈ 4.2 million).
pub const ORACLE_MAX_POINTS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Wcss,
    MedoidCost(Metric),
}

/// Cost of one block and, for medoids, the member chosen as medoid.
fn block_cost(points: &[Vec<f64>], block: &[usize], objective: Objective) -> (f64, Vec<f64>) {
    match objective {
        Objective::Wcss => {
            let members: Vec<Vec<f64>> = block.iter().map(|&i| points[i].clone()).collect();
            let center = means(&members, &vec![0; members.len()], 1).remove(0);
            let cost = members.iter().map(|p| squared_distance(p, &center)).sum();
            (cost, center)
        }
        Objective::MedoidCost(metric) => {
            let mut best = (f64::INFINITY, 0);
            for &m in block {
                let c: f64 = block
                    .iter()
                    .map(|&i| metric.distance(&points[i], &points[m]))
                    .sum();
                if c < best.0 {
                    best = (c, m);
                }
            }
            (best.0, points[best.1].clone())
        }
    }
}

struct Search<'a> {
    points: &'a [Vec<f64>],
    k: usize,
    objective: Objective,
    labels: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
    visited: usize,
}

impl Search<'_> {
    fn evaluate(&mut self) {
        self.visited += 1;
        let mut cost = 0.0;
        for b in 0..self.k {
            let block: Vec<usize> = (0..self.labels.len())
                .filter(|&i| self.labels[i] == b)
                .collect();
            cost += block_cost(self.points, &block, self.objective).0;
        }
        if self.best.as_ref().is_none_or(|(c, _)| cost < *c) {
            self.best = Some((cost, self.labels.clone()));
        }
    }

    /// Restricted growth strings: point `pos` joins an existing block or opens
    /// block `used`, never leaving too few points to open the remaining blocks.
    fn descend(&mut self, pos: usize, used: usize) {
        let n = self.points.len();
        if pos == n {
            if used == self.k {
                self.evaluate();
            }
            return;
        }
        if self.k - used > n - pos {
            return;
        }
        for b in 0..used {
            self.labels[pos] = b;
            self.descend(pos + 1, used);
        }
        if used < self.k {
            self.labels[pos] = used;
            self.descend(pos + 1, used + 1);
        }
    }
}

/// Globally optimal partition into exactly `k` non-empty blocks by enumeration.
pub fn partition_oracle(
    points: &PointSet,
    k: usize,
    objective: Objective,
) -> Result<ClusterResult> {
    if points.len() > ORACLE_MAX_POINTS {
        return Err(Error::TooLarge {
            n: points.len(),
            max: ORACLE_MAX_POINTS,
        });
    }
    points.check_k(k)?;
    let mut search = Search {
        points: points.points(),
        k,
        objective,
        labels: vec![0; points.len()],
        best: None,
        visited: 0,
    };
    search.descend(0, 0);
    let (cost, assignment) = search.best.expect("k <= n admits a partition");

    let mut centers = Vec::with_capacity(k);
    let mut medoids = Vec::new();
    for b in 0..k {
        let block: Vec<usize> = (0..assignment.len())
            .filter(|&i| assignment[i] == b)
            .collect();
        let (_, center) = block_cost(points.points(), &block, objective);
        if let Objective::MedoidCost(_) = objective {
            let m = block
                .iter()
                .find(|&&i| points.points()[i] == center)
                .expect("medoid is a member");
            medoids.push(points.ids()[*m].clone());
        }
        centers.push(center);
    }
    let metric = match objective {
        Objective::MedoidCost(m) => Some(m),
        Objective::Wcss => None,
    };
    Ok(ClusterResult {
        method: Method::Oracle,
        variant: None,
        metric,
        seed: None,
        restarts: None,
        k,
        ids: points.ids().to_vec(),
        assignment,
        centers,
        medoids: metric.map(|_| medoids),
        objective: cost,
        iterations: 0,
    })
}
