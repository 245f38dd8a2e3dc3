use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use super::{means, nearest, squared_distance, wcss, ClusterResult, Method, PointSet, Variant};
use crate::error::Result;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_RESTARTS: usize = 50;

const MAX_ITER: usize = 1000;

/// Uniform integer in `0..n` by rejection, independent of pointer width.
fn below(rng: &mut SplitMix64, n: u64) -> u64 {
    let zone = u64::MAX - u64::MAX % n;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % n;
        }
    }
}

/// `k` starting centers drawn without replacement, preferring distinct coordinates.
fn initial_centers(points: &[Vec<f64>], k: usize, rng: &mut SplitMix64) -> Vec<Vec<f64>> {
    let mut pool: Vec<usize> = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if !pool.iter().any(|&j| points[j] == *p) {
            pool.push(i);
        }
    }
    if pool.len() < k {
        log::warn!(
            "only {} distinct points for k = {k}; seeding with repeated coordinates",
            pool.len()
        );
        pool = (0..points.len()).collect();
    }
    // partial Fisher-Yates
    for i in 0..k {
        let j = i + below(rng, (pool.len() - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool[..k].iter().map(|&i| points[i].clone()).collect()
}

/// Nearest-center assignment; ties go to the lowest cluster index.
fn assign(points: &[Vec<f64>], centers: &[Vec<f64>]) -> Vec<usize> {
    points.iter().map(|p| nearest(p, centers).0).collect()
}

fn sizes(assignment: &[usize], k: usize) -> Vec<usize> {
    let mut n = vec![0; k];
    for &c in assignment {
        n[c] += 1;
    }
    n
}

/// Gives every empty cluster the point farthest from its own center.
fn repair_empty(points: &[Vec<f64>], assignment: &mut [usize], centers: &mut [Vec<f64>]) {
    let k = centers.len();
    loop {
        let n = sizes(assignment, k);
        let Some(empty) = n.iter().position(|&s| s == 0) else {
            return;
        };
        let far = (0..points.len())
            .filter(|&i| n[assignment[i]] > 1)
            .map(|i| (i, squared_distance(&points[i], &centers[assignment[i]])))
            .fold(None::<(usize, f64)>, |best, cur| match best {
                Some(b) if b.1 >= cur.1 => Some(b),
                _ => Some(cur),
            });
        let (i, _) = far.expect("k <= n leaves a cluster with two points");
        assignment[i] = empty;
        centers[empty] = points[i].clone();
    }
}

struct Run {
    assignment: Vec<usize>,
    iterations: usize,
    /// Objective after each Lloyd update step.
    #[cfg_attr(not(test), allow(dead_code))]
    trace: Vec<f64>,
}

fn lloyd(points: &[Vec<f64>], mut centers: Vec<Vec<f64>>) -> Run {
    let k = centers.len();
    let mut assignment = assign(points, &centers);
    let mut trace: Vec<f64> = Vec::new();
    let mut iterations = 0;
    while iterations < MAX_ITER {
        iterations += 1;
        repair_empty(points, &mut assignment, &mut centers);
        centers = means(points, &assignment, k);
        let obj = wcss(points, &assignment, k);
        if let Some(&prev) = trace.last() {
            debug_assert!(
                obj <= prev + 1e-9 * prev.max(1.0),
                "WCSS rose {prev} -> {obj}"
            );
        }
        trace.push(obj);
        let next = assign(points, &centers);
        if next == assignment {
            break;
        }
        assignment = next;
    }
    repair_empty(points, &mut assignment, &mut centers);
    Run {
        assignment,
        iterations,
        trace,
    }
}

fn add_to(center: &mut [f64], size: usize, x: &[f64]) {
    let n = size as f64;
    for (c, v) in center.iter_mut().zip(x) {
        *c = (*c * n + v) / (n + 1.0);
    }
}

fn remove_from(center: &mut [f64], size: usize, x: &[f64]) {
    let n = size as f64;
    for (c, v) in center.iter_mut().zip(x) {
        *c = (*c * n - v) / (n - 1.0);
    }
}

/// Online updates: a center moves as soon as a single point changes cluster.
fn macqueen(points: &[Vec<f64>], mut centers: Vec<Vec<f64>>) -> Run {
    let k = centers.len();
    let mut assignment = assign(points, &centers);
    repair_empty(points, &mut assignment, &mut centers);
    centers = means(points, &assignment, k);
    let mut n = sizes(&assignment, k);
    let mut iterations = 0;
    while iterations < MAX_ITER {
        iterations += 1;
        let mut moved = false;
        for (i, x) in points.iter().enumerate() {
            let from = assignment[i];
            let (to, d_to) = nearest(x, &centers);
            if to == from || n[from] == 1 || d_to >= squared_distance(x, &centers[from]) {
                continue;
            }
            remove_from(&mut centers[from], n[from], x);
            add_to(&mut centers[to], n[to], x);
            n[from] -= 1;
            n[to] += 1;
            assignment[i] = to;
            moved = true;
        }
        if !moved {
            // clear accumulated drift and confirm the fixed point on exact means
            centers = means(points, &assignment, k);
            let stable = points.iter().zip(&assignment).all(|(x, &c)| {
                n[c] == 1 || nearest(x, &centers).1 >= squared_distance(x, &centers[c])
            });
            if stable {
                break;
            }
        }
    }
    let trace = vec![wcss(points, &assignment, k)];
    Run {
        assignment,
        iterations,
        trace,
    }
}

/// Single-point moves chosen on the exact change in WCSS; the first point with an
/// improving move goes to its best target cluster.
fn hartigan_wong(points: &[Vec<f64>], mut centers: Vec<Vec<f64>>) -> Run {
    let k = centers.len();
    let mut assignment = assign(points, &centers);
    repair_empty(points, &mut assignment, &mut centers);
    centers = means(points, &assignment, k);
    let mut n = sizes(&assignment, k);
    let mut iterations = 0;
    while iterations < MAX_ITER {
        iterations += 1;
        let mut moved = false;
        for (i, x) in points.iter().enumerate() {
            let from = assignment[i];
            if n[from] == 1 {
                continue;
            }
            let nf = n[from] as f64;
            let removal_gain = nf / (nf - 1.0) * squared_distance(x, &centers[from]);
            let mut best: Option<(usize, f64)> = None;
            for (c, center) in centers.iter().enumerate() {
                if c == from {
                    continue;
                }
                let nc = n[c] as f64;
                let cost = nc / (nc + 1.0) * squared_distance(x, center);
                if best.is_none_or(|(_, b)| cost < b) {
                    best = Some((c, cost));
                }
            }
            let Some((to, cost)) = best else { continue };
            if cost < removal_gain * (1.0 - 1e-12) {
                remove_from(&mut centers[from], n[from], x);
                add_to(&mut centers[to], n[to], x);
                n[from] -= 1;
                n[to] += 1;
                assignment[i] = to;
                moved = true;
            }
        }
        if !moved {
            break;
        }
        centers = means(points, &assignment, k);
    }
    let trace = vec![wcss(points, &assignment, k)];
    Run {
        assignment,
        iterations,
        trace,
    }
}

fn run_once(points: &[Vec<f64>], k: usize, variant: Variant, seed: u64) -> Run {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let init = initial_centers(points, k, &mut rng);
    match variant {
        Variant::Lloyd => lloyd(points, init),
        Variant::MacQueen => macqueen(points, init),
        Variant::HartiganWong => hartigan_wong(points, init),
    }
}

/// Best-of-`restarts` k-means. Restarts run in parallel; the winner is the lowest
/// objective, earliest restart on ties, so the result never depends on scheduling.
pub fn kmeans(
    points: &PointSet,
    k: usize,
    variant: Variant,
    seed: u64,
    restarts: usize,
) -> Result<ClusterResult> {
    points.check_k(k)?;
    let restarts = restarts.max(1);
    let mut master = SplitMix64::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..restarts).map(|_| master.next_u64()).collect();
    let data = points.points();

    let runs: Vec<(f64, Run)> = seeds
        .par_iter()
        .map(|&s| {
            let run = run_once(data, k, variant, s);
            (wcss(data, &run.assignment, k), run)
        })
        .collect();
    let (objective, best) = runs
        .into_iter()
        .enumerate()
        .min_by(|(ia, (a, _)), (ib, (b, _))| a.total_cmp(b).then(ia.cmp(ib)))
        .map(|(_, r)| r)
        .expect("at least one restart");

    Ok(ClusterResult {
        method: Method::Kmeans,
        variant: Some(variant),
        metric: None,
        seed: Some(seed),
        restarts: Some(restarts),
        k,
        ids: points.ids().to_vec(),
        centers: means(data, &best.assignment, k),
        assignment: best.assignment,
        medoids: None,
        objective,
        iterations: best.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs() -> PointSet {
        PointSet::unlabeled(vec![
            vec![0.0, 0.0],
            vec![0.0, 0.1],
            vec![10.0, 10.0],
            vec![10.0, 10.1],
        ])
        .unwrap()
    }

    #[test]
    fn separated_pairs_all_variants() {
        for v in Variant::ALL {
            let r = kmeans(&pairs(), 2, v, DEFAULT_SEED, 10).unwrap();
            assert_eq!(
                r.clusters(),
                vec![
                    vec!["p0".to_string(), "p1".into()],
                    vec!["p2".into(), "p3".into()]
                ],
                "{v}"
            );
            assert!((r.objective - 0.01).abs() < 1e-12, "{v}: {}", r.objective);
        }
    }

    #[test]
    fn lloyd_trace_never_rises() {
        let mut rng = SplitMix64::seed_from_u64(7);
        for _ in 0..50 {
            let pts: Vec<Vec<f64>> = (0..30)
                .map(|_| {
                    (0..2)
                        .map(|_| below(&mut rng, 1000) as f64 / 10.0)
                        .collect()
                })
                .collect();
            let init = initial_centers(&pts, 4, &mut rng);
            let run = lloyd(&pts, init);
            for w in run.trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-9, "{:?}", run.trace);
            }
        }
    }

    #[test]
    fn empty_cluster_is_repaired() {
        // both initial centers far to the right: the left point group gets nobody
        let pts = vec![vec![0.0], vec![1.0], vec![2.0], vec![100.0]];
        let run = lloyd(&pts, vec![vec![100.0], vec![200.0]]);
        let n = sizes(&run.assignment, 2);
        assert!(n.iter().all(|&s| s > 0), "{:?}", run.assignment);
    }

    #[test]
    fn duplicate_points_fall_back() {
        let ps = PointSet::unlabeled(vec![vec![1.0], vec![1.0], vec![1.0]]).unwrap();
        let r = kmeans(&ps, 2, Variant::Lloyd, 1, 3).unwrap();
        assert_eq!(r.objective, 0.0);
        assert_eq!(
            sizes(&r.assignment, 2).iter().filter(|&&s| s > 0).count(),
            2
        );
    }

    #[test]
    fn rejection_sampler_in_range() {
        let mut rng = SplitMix64::seed_from_u64(0);
        assert!((0..1000).all(|_| below(&mut rng, 7) < 7));
    }

    #[test]
    fn too_few_points() {
        assert!(kmeans(&pairs(), 5, Variant::Lloyd, 0, 1).is_err());
    }
}
