#![allow(clippy::excessive_precision)]

use proptest::prelude::*;

use qvord::cluster::{kmeans, kmedoids_pam, Metric, PointSet, Variant};
use qvord::freqdata::{rank_frequencies, CategoryTable};
use qvord::indices::modified_coords;
use qvord::moments::{empirical_moments, ord_coords, MomentSummary};
use qvord::pipeline::{
    run_tables, slavic_tables, to_json, ClusterSpec, CoordMode, Report, RunConfig,
};
use qvord::theory::{
    classify_region, dist_moments, dist_point, on_triangle_boundary, summation_moments, DistSpec,
    Region,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

// Values below were computed with 40-digit arithmetic from the bundled table.

#[test]
fn slovene_modified_point() {
    let t = &slavic_tables()["SLO"];
    let m = modified_coords(t).unwrap();
    assert!(rel(m.indices.va, 0.97664365191565143226) < 1e-12);
    assert!(rel(m.indices.sda, 0.84717216194570909346) < 1e-12);
    assert!(rel(m.indices.re, 0.91332536561674784818) < 1e-12);
    assert!(rel(m.i_m, 0.86743221059596438972) < 1e-12);
    assert!(rel(m.s_m, 1.0780870838804523576) < 1e-12);
}

#[test]
fn russian_ord_point() {
    let t = &slavic_tables()["RUS"];
    let m = empirical_moments(&rank_frequencies(t)).unwrap();
    assert!(rel(m.mean, 9.0586645618387175584) < 1e-12);
    assert!(rel(m.mu2, 49.36318567032689217) < 1e-12);
    assert!(rel(m.mu3, 305.75484196410381954) < 1e-12);
    let p = ord_coords(&m).unwrap();
    assert!(rel(p.i, 5.4492784596835991227) < 1e-12);
    assert!(rel(p.s, 6.1939852100732350135) < 1e-12);
}

#[test]
fn bundled_ranks_are_in_table_order() {
    // the table is already listed by descending frequency
    for (lang, t) in &slavic_tables() {
        let ranked = rank_frequencies(t);
        assert_eq!(ranked.counts(), t.counts(), "{lang}");
    }
}

fn hypergeometric_oracle(population: u64, successes: u64, draws: u64) -> MomentSummary {
    let (big_n, k, n) = (population as f64, successes as f64, draws as f64);
    MomentSummary {
        mean: n * k / big_n,
        mu2: n * k * (big_n - k) * (big_n - n) / (big_n * big_n * (big_n - 1.0)),
        mu3: n * k * (big_n - k) * (big_n - 2.0 * k) * (big_n - n) * (big_n - 2.0 * n)
            / (big_n.powi(3) * (big_n - 1.0) * (big_n - 2.0)),
    }
}

fn beta_binomial_oracle(n: u64, a: f64, b: f64) -> MomentSummary {
    let n = n as f64;
    let s = a + b;
    let mu2 = n * a * b * (s + n) / (s * s * (s + 1.0));
    let skew = (s + 2.0 * n) * (b - a) / (s + 2.0) * ((1.0 + s) / (n * a * b * (n + s))).sqrt();
    MomentSummary {
        mean: n * a / s,
        mu2,
        mu3: skew * mu2.powf(1.5),
    }
}

fn assert_moments_close(got: MomentSummary, want: MomentSummary) {
    let scale = want.mu2.max(1.0);
    assert!(
        (got.mean - want.mean).abs() <= 1e-9 * want.mean.abs().max(1.0),
        "{got:?} {want:?}"
    );
    assert!(
        (got.mu2 - want.mu2).abs() <= 1e-9 * scale,
        "{got:?} {want:?}"
    );
    assert!(
        (got.mu3 - want.mu3).abs() <= 1e-9 * scale.powf(1.5),
        "{got:?} {want:?}"
    );
}

proptest! {
    #[test]
    fn binomial_on_segment(n in 1u64..500, p in 0.01f64..0.99) {
        let pt = dist_point(&DistSpec::Binomial { n, p }).unwrap();
        prop_assert!((pt.s - (2.0 * pt.i - 1.0)).abs() < 1e-9);
        prop_assert!(classify_region(pt, 1e-9).contains(Region::BinomialSegment));
    }

    #[test]
    fn negative_binomial_on_halfline(r in 0.1f64..50.0, p in 0.02f64..0.98) {
        let pt = dist_point(&DistSpec::NegBinomial { r, p }).unwrap();
        prop_assert!((pt.i - 1.0 / p).abs() < 1e-9 * pt.i);
        prop_assert!((pt.s - (2.0 * pt.i - 1.0)).abs() < 1e-9 * pt.s.abs().max(1.0));
        prop_assert!(classify_region(pt, 1e-9).contains(Region::NegbinHalfline));
    }

    #[test]
    fn hypergeometric_in_triangle(population in 3u64..200, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let successes = 1 + (a * (population - 2) as f64) as u64;
        let draws = 1 + (b * (population - 2) as f64) as u64;
        let spec = DistSpec::Hypergeometric { population, successes, draws };
        let m = dist_moments(&spec).unwrap();
        assert_moments_close(m, hypergeometric_oracle(population, successes, draws));
        let pt = ord_coords(&m).unwrap();
        prop_assert!(
            classify_region(pt, 1e-9).contains(Region::HypergeomTriangle)
                || on_triangle_boundary(pt, 1e-9),
            "{spec:?} at {pt:?}"
        );
    }

    #[test]
    fn beta_binomial_below_line(n in 2u64..200, alpha in 0.2f64..20.0, beta in 0.2f64..20.0) {
        let spec = DistSpec::BetaBinomial { n, alpha, beta };
        let m = dist_moments(&spec).unwrap();
        assert_moments_close(m, beta_binomial_oracle(n, alpha, beta));
        let pt = ord_coords(&m).unwrap();
        prop_assert!(pt.s < 2.0 * pt.i - 1.0, "{spec:?} at {pt:?}");
    }

    #[test]
    fn closed_forms_match_summation(lambda in 0.05f64..30.0, r in 0.2f64..10.0, p in 0.1f64..0.95) {
        for spec in [DistSpec::Poisson { lambda }, DistSpec::NegBinomial { r, p }, DistSpec::Binomial { n: 40, p }] {
            let exact = dist_moments(&spec).unwrap();
            let summed = summation_moments(&spec, 1e-12).unwrap();
            assert_moments_close(summed, exact);
        }
    }

    #[test]
    fn kmeans_invariants(
        pts in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 4..30),
        k in 2usize..4,
        seed in any::<u64>(),
    ) {
        let ps = PointSet::unlabeled(pts.iter().map(|&(x, y)| vec![x, y]).collect()).unwrap();
        for variant in Variant::ALL {
            let r = kmeans(&ps, k, variant, seed, 5).unwrap();
            prop_assert_eq!(&r, &kmeans(&ps, k, variant, seed, 5).unwrap());
            prop_assert!((r.recompute_objective(&ps) - r.objective).abs() <= 1e-9 * r.objective.max(1.0));
            for (p, &a) in ps.points().iter().zip(&r.assignment) {
                let d = |c: &Vec<f64>| Metric::Euclidean.distance(p, c);
                let own = d(&r.centers[a]);
                prop_assert!(r.centers.iter().all(|c| own <= d(c) + 1e-9));
            }
        }
    }

    #[test]
    fn pam_assigns_to_nearest_medoid(
        pts in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 4..25),
        k in 2usize..4,
    ) {
        let ps = PointSet::unlabeled(pts.iter().map(|&(x, y)| vec![x, y]).collect()).unwrap();
        for metric in Metric::ALL {
            let r = kmedoids_pam(&ps, k, metric).unwrap();
            prop_assert!((r.recompute_objective(&ps) - r.objective).abs() <= 1e-9 * r.objective.max(1.0));
            for (p, &a) in ps.points().iter().zip(&r.assignment) {
                let own = metric.distance(p, &r.centers[a]);
                prop_assert!(r.centers.iter().all(|c| own <= metric.distance(p, c) + 1e-12));
            }
        }
    }
}

#[test]
fn report_round_trips_and_reclusters() {
    for coords in [
        CoordMode::Modified,
        CoordMode::Original,
        CoordMode::Inventory,
    ] {
        let config = RunConfig::new("bundled.tsv", coords, ClusterSpec::default());
        let report = run_tables(&slavic_tables(), &config).unwrap();
        let text = to_json(&report);
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(to_json(&back), text);
        assert_eq!(
            back.recluster().unwrap().assignment,
            report.clustering.assignment
        );
    }
}

#[test]
fn every_language_once() {
    let config = RunConfig::new("bundled.tsv", CoordMode::Modified, ClusterSpec::default());
    let report = run_tables(&slavic_tables(), &config).unwrap();
    let mut names: Vec<&str> = report
        .languages
        .iter()
        .map(|l| l.language.as_str())
        .collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), 11);
    assert_eq!(report.clustering.ids.len(), 11);
}

#[test]
fn degenerate_table_rejected_by_table_type() {
    assert!(CategoryTable::from_counts(&[0, 0]).is_err());
}
