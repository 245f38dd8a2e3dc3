//! k-means variants, PAM and the exhaustive oracle on a small point set.

use qvord::cluster::{
    kmeans, kmedoids_pam, partition_oracle, Metric, Objective, PointSet, Variant,
};

fn main() -> qvord::Result<()> {
    let points = PointSet::new(
        vec![
            vec![0.0, 0.0],
            vec![0.3, 0.1],
            vec![0.1, 0.4],
            vec![4.0, 4.2],
            vec![4.4, 3.9],
            vec![9.0, 0.5],
            vec![8.7, 0.0],
        ],
        ["a", "b", "c", "d", "e", "f", "g"]
            .map(String::from)
            .to_vec(),
    )?;
    for variant in Variant::ALL {
        let r = kmeans(&points, 3, variant, 42, 20)?;
        println!(
            "kmeans/{variant:<13} {:?} wcss={:.4}",
            r.clusters(),
            r.objective
        );
    }
    for metric in Metric::ALL {
        let r = kmedoids_pam(&points, 3, metric)?;
        println!(
            "pam/{metric:<16} {:?} medoids={:?}",
            r.clusters(),
            r.medoids.unwrap_or_default()
        );
    }
    let best = partition_oracle(&points, 3, Objective::Wcss)?;
    println!(
        "oracle              {:?} wcss={:.4}",
        best.clusters(),
        best.objective
    );
    Ok(())
}
