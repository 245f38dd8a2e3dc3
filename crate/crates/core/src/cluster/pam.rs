use super::{ClusterResult, Method, Metric, PointSet};
use crate::error::Result;

const MAX_SWAPS: usize = 10_000;

fn distance_matrix(points: &[Vec<f64>], metric: Metric) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|a| points.iter().map(|b| metric.distance(a, b)).collect())
        .collect()
}

/// Slot of the closest medoid for point `i`; a medoid always maps to its own slot.
fn closest(dist: &[Vec<f64>], medoids: &[usize], i: usize) -> (usize, f64) {
    if let Some(slot) = medoids.iter().position(|&m| m == i) {
        return (slot, 0.0);
    }
    let mut best = (0, f64::INFINITY);
    for (slot, &m) in medoids.iter().enumerate() {
        if dist[i][m] < best.1 {
            best = (slot, dist[i][m]);
        }
    }
    best
}

fn total_cost(dist: &[Vec<f64>], medoids: &[usize]) -> f64 {
    (0..dist.len()).map(|i| closest(dist, medoids, i).1).sum()
}

/// Partitioning Around Medoids: greedy BUILD, then best-improvement SWAP until
/// no exchange lowers the total distance. Ties go to the lowest point index.
pub fn kmedoids_pam(points: &PointSet, k: usize, metric: Metric) -> Result<ClusterResult> {
    points.check_k(k)?;
    let n = points.len();
    let dist = distance_matrix(points.points(), metric);

    // BUILD
    let mut medoids: Vec<usize> = Vec::with_capacity(k);
    let mut near = vec![f64::INFINITY; n];
    for _ in 0..k {
        let mut best: Option<(usize, f64)> = None;
        for cand in (0..n).filter(|c| !medoids.contains(c)) {
            let cost: f64 = (0..n).map(|i| near[i].min(dist[i][cand])).sum();
            if best.is_none_or(|(_, b)| cost < b) {
                best = Some((cand, cost));
            }
        }
        let (m, _) = best.expect("k <= n");
        medoids.push(m);
        for i in 0..n {
            near[i] = near[i].min(dist[i][m]);
        }
    }

    // SWAP
    let mut cost = total_cost(&dist, &medoids);
    let mut swaps = 0;
    while swaps < MAX_SWAPS {
        let mut best: Option<(usize, usize, f64)> = None;
        for slot in 0..k {
            for cand in (0..n).filter(|c| !medoids.contains(c)) {
                let mut trial = medoids.clone();
                trial[slot] = cand;
                let c = total_cost(&dist, &trial);
                if best.is_none_or(|(_, _, b)| c < b) {
                    best = Some((slot, cand, c));
                }
            }
        }
        match best {
            Some((slot, cand, c)) if c < cost - 1e-12 * cost.max(1.0) => {
                medoids[slot] = cand;
                cost = c;
                swaps += 1;
            }
            _ => break,
        }
    }

    let assignment: Vec<usize> = (0..n).map(|i| closest(&dist, &medoids, i).0).collect();
    let objective = (0..n).map(|i| dist[i][medoids[assignment[i]]]).sum();
    Ok(ClusterResult {
        method: Method::Kmedoids,
        variant: None,
        metric: Some(metric),
        seed: None,
        restarts: None,
        k,
        ids: points.ids().to_vec(),
        assignment,
        centers: medoids
            .iter()
            .map(|&m| points.points()[m].clone())
            .collect(),
        medoids: Some(medoids.iter().map(|&m| points.ids()[m].clone()).collect()),
        objective,
        iterations: swaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_points_on_a_line() {
        let ps = PointSet::from_values(&[0.0, 1.0, 10.0], vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        let r = kmedoids_pam(&ps, 2, Metric::Manhattan).unwrap();
        let mut meds = r.medoids.clone().unwrap();
        meds.sort();
        assert_eq!(meds, vec!["b".to_string(), "c".into()]);
        assert_eq!(r.objective, 1.0);
    }

    #[test]
    fn separated_pairs() {
        let ps = PointSet::unlabeled(vec![
            vec![0.0, 0.0],
            vec![0.0, 0.1],
            vec![10.0, 10.0],
            vec![10.0, 10.1],
        ])
        .unwrap();
        for metric in Metric::ALL {
            let r = kmedoids_pam(&ps, 2, metric).unwrap();
            assert_eq!(
                r.clusters(),
                vec![
                    vec!["p0".to_string(), "p1".into()],
                    vec!["p2".into(), "p3".into()]
                ]
            );
            assert!((r.objective - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn swap_improves_a_poor_build() {
        // BUILD picks the central point first, which SWAP has to undo for k = 2
        let ps = PointSet::unlabeled(vec![
            vec![0.0],
            vec![1.0],
            vec![2.0],
            vec![5.0],
            vec![8.0],
            vec![9.0],
            vec![10.0],
        ])
        .unwrap();
        let r = kmedoids_pam(&ps, 2, Metric::Euclidean).unwrap();
        assert_eq!(r.objective, 8.0);
        let mut meds = r.medoids.clone().unwrap();
        meds.sort();
        assert_eq!(meds, vec!["p1".to_string(), "p4".into()]);
        assert_eq!(r.recompute_objective(&ps), r.objective);
    }
}
