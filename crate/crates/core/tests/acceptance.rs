//! Acceptance suite. Runs as a plain binary so each criterion prints one
//! PASS/FAIL line under `cargo test`.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use qvord::cluster::{
    canonical, kmeans, kmedoids_pam, partition_oracle, ClusterResult, Metric, Objective, PointSet,
    Variant,
};
use qvord::freqdata::{rank_frequencies, CategoryTable};
use qvord::indices::{index_summary, modified_coords};
use qvord::moments::{empirical_moments, ord_coords, profile_moments};
use qvord::pipeline::{point_set, slavic_tables, summarize, CoordMode};
use qvord::theory::{dist_moments, dist_point, summation_moments, DistSpec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn below(rng: &mut SplitMix64, n: u64) -> u64 {
    rng.next_u64() % n
}

fn unit(rng: &mut SplitMix64) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn groups(names: &[&[&str]]) -> Vec<Vec<String>> {
    canonical(
        names
            .iter()
            .map(|g| g.iter().map(|s| s.to_string()).collect())
            .collect(),
    )
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

fn within_second(elapsed: Duration) -> Result<(), String> {
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })
}

fn modified_reproduction() -> Outcome {
    let expected = groups(&[
        &["BUL", "CRO", "MAC", "SRB", "SLO"],
        &["CZE", "SVK"],
        &["RUS", "UKR", "POL", "UPS"],
    ]);
    let start = Instant::now();
    let languages = summarize(&slavic_tables()).map_err(|e| e.to_string())?;
    let points = point_set(&languages, CoordMode::Modified).map_err(|e| e.to_string())?;
    let mut runs: Vec<(String, ClusterResult)> = Vec::new();
    for v in Variant::ALL {
        runs.push((
            format!("kmeans/{v}"),
            kmeans(&points, 3, v, 42, 50).map_err(|e| e.to_string())?,
        ));
    }
    for m in Metric::ALL {
        runs.push((
            format!("kmedoids/{m}"),
            kmedoids_pam(&points, 3, m).map_err(|e| e.to_string())?,
        ));
    }
    let elapsed = start.elapsed();
    for (name, r) in &runs {
        ensure(canonical(r.clusters()) == expected, || {
            format!("{name} gave {:?}", r.clusters())
        })?;
    }
    within_second(elapsed)?;
    Ok(format!("5 methods agree in {elapsed:?}"))
}

fn original_matches_inventory() -> Outcome {
    let start = Instant::now();
    let languages = summarize(&slavic_tables()).map_err(|e| e.to_string())?;
    let original = point_set(&languages, CoordMode::Original).map_err(|e| e.to_string())?;
    let inventory = point_set(&languages, CoordMode::Inventory).map_err(|e| e.to_string())?;
    let by_ord = kmeans(&original, 3, Variant::Lloyd, 42, 50).map_err(|e| e.to_string())?;
    let by_size = kmeans(&inventory, 3, Variant::Lloyd, 42, 50).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    let sizes: BTreeMap<&str, f64> = inventory
        .ids()
        .iter()
        .map(String::as_str)
        .zip(inventory.points().iter().map(|p| p[0]))
        .collect();
    let expected_sizes: BTreeMap<&str, f64> = [
        ("SVK", 43.0),
        ("CZE", 42.0),
        ("UPS", 37.0),
        ("UKR", 34.0),
        ("RUS", 33.0),
        ("POL", 32.0),
        ("MAC", 31.0),
        ("BUL", 30.0),
        ("CRO", 30.0),
        ("SRB", 30.0),
        ("SLO", 25.0),
    ]
    .into_iter()
    .collect();
    ensure(sizes == expected_sizes, || {
        format!("inventory sizes {sizes:?}")
    })?;

    let oracle = partition_oracle(&inventory, 3, Objective::Wcss).map_err(|e| e.to_string())?;
    ensure(
        canonical(by_size.clusters()) == canonical(oracle.clusters()),
        || {
            format!(
                "1-D k-means {:?} vs oracle {:?}",
                by_size.clusters(),
                oracle.clusters()
            )
        },
    )?;
    ensure(
        canonical(by_ord.clusters()) == canonical(by_size.clusters()),
        || {
            format!(
                "(I,S) {:?} vs sizes {:?}",
                by_ord.clusters(),
                by_size.clusters()
            )
        },
    )?;
    ensure(by_ord.clusters().contains(&vec!["SLO".to_string()]), || {
        "SLO is not a singleton".into()
    })?;
    within_second(elapsed)?;
    Ok(format!("{:?} in {elapsed:?}", canonical(by_ord.clusters())))
}

fn index_identities() -> Outcome {
    let mut rng = SplitMix64::seed_from_u64(3);
    let mut checked = 0;
    while checked < 10_000 {
        let k = 2 + below(&mut rng, 49) as usize;
        let mut counts: Vec<u64> = (0..k).map(|_| below(&mut rng, 100_001)).collect();
        if counts.iter().all(|&c| c == 0) {
            continue;
        }
        let table = CategoryTable::from_counts(&counts).map_err(|e| e.to_string())?;
        let s = index_summary(&table).map_err(|e| e.to_string())?;
        for (name, v) in [
            ("VA", s.va),
            ("SDA", s.sda),
            ("RE", s.re),
            ("RR", s.rr_norm),
        ] {
            ensure((0.0..=1.0).contains(&v), || {
                format!("{name} = {v} for {counts:?}")
            })?;
        }
        ensure((s.va - s.rr_norm).abs() <= 1e-12, || {
            format!("VA != RR_norm for {counts:?}")
        })?;
        let root = (1.0 - s.va).sqrt();
        ensure((s.sda - (1.0 - root)).abs() <= 1e-12, || {
            format!("SDA identity for {counts:?}")
        })?;
        if s.va > 0.0 {
            let m = modified_coords(&table).map_err(|e| e.to_string())?;
            ensure((m.i_m * (1.0 + root) - 1.0).abs() <= 1e-12, || {
                format!("I_m identity for {counts:?}")
            })?;
        }
        // Fisher-Yates shuffle, then require bit-identical indices.
        for i in (1..counts.len()).rev() {
            counts.swap(i, below(&mut rng, i as u64 + 1) as usize);
        }
        let shuffled = index_summary(&CategoryTable::from_counts(&counts).unwrap()).unwrap();
        ensure(
            shuffled.va.to_bits() == s.va.to_bits()
                && shuffled.sda.to_bits() == s.sda.to_bits()
                && shuffled.re.to_bits() == s.re.to_bits()
                && shuffled.rr_norm.to_bits() == s.rr_norm.to_bits(),
            || format!("permutation changed indices for {counts:?}"),
        )?;
        checked += 1;
    }
    Ok(format!("{checked} random tables"))
}

fn boundary_values() -> Outcome {
    for k in [2usize, 3, 7, 30, 50] {
        for c in [1u64, 5, 1000] {
            let s = index_summary(&CategoryTable::from_counts(&vec![c; k]).unwrap()).unwrap();
            for v in [s.va, s.sda, s.re] {
                ensure((v - 1.0).abs() <= 1e-12, || {
                    format!("uniform K={k} c={c}: {s:?}")
                })?;
            }
            let mut single = vec![0; k];
            single[k / 2] = c;
            let s = index_summary(&CategoryTable::from_counts(&single).unwrap()).unwrap();
            for v in [s.va, s.sda, s.re] {
                ensure(v.abs() <= 1e-12, || format!("single K={k} c={c}: {s:?}"))?;
            }
        }
    }
    Ok("uniform -> 1, single category -> 0".into())
}

fn theory_landmarks() -> Outcome {
    let near = |spec: DistSpec, i: f64, s: f64| -> Result<(), String> {
        let p = dist_point(&spec).map_err(|e| e.to_string())?;
        ensure(close(p.i, i, 1e-9) && close(p.s, s, 1e-9), || {
            format!("{spec:?} at ({}, {}), expected ({i}, {s})", p.i, p.s)
        })
    };
    for lambda in [0.3, 1.0, 4.5, 20.0] {
        near(DistSpec::Poisson { lambda }, 1.0, 1.0)?;
    }
    for n in [2, 10, 100] {
        near(DistSpec::Binomial { n, p: 0.5 }, 0.5, 0.0)?;
    }
    let mut swept = 0;
    for r in [0.5, 1.0, 2.5, 7.0] {
        for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let spec = DistSpec::NegBinomial { r, p };
            let pt = dist_point(&spec).map_err(|e| e.to_string())?;
            ensure(
                close(pt.i, 1.0 / p, 1e-9) && close(pt.s, 2.0 * pt.i - 1.0, 1e-9),
                || format!("{spec:?} at ({}, {})", pt.i, pt.s),
            )?;
            swept += 1;
        }
    }
    let specs = [
        DistSpec::Binomial { n: 12, p: 0.3 },
        DistSpec::Poisson { lambda: 2.0 },
        DistSpec::NegBinomial { r: 3.0, p: 0.4 },
        DistSpec::Hypergeometric {
            population: 50,
            successes: 20,
            draws: 10,
        },
        DistSpec::BetaBinomial {
            n: 15,
            alpha: 2.0,
            beta: 3.5,
        },
    ];
    for spec in specs {
        let exact = dist_moments(&spec).map_err(|e| e.to_string())?;
        let summed = summation_moments(&spec, 1e-12).map_err(|e| e.to_string())?;
        let a = ord_coords(&exact).unwrap();
        let b = ord_coords(&summed).unwrap();
        ensure(close(a.i, b.i, 1e-9) && close(a.s, b.s, 1e-9), || {
            format!("{spec:?}: closed form {a:?} vs summation {b:?}")
        })?;
    }
    Ok(format!(
        "P, J, {swept}-point negative binomial sweep, summation oracle"
    ))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = SplitMix64::seed_from_u64(6);
    let (mut equal, mut cases) = (0, 0);
    while cases < 100 {
        let k = 2 + below(&mut rng, 2) as usize;
        let n = k + 1 + below(&mut rng, (10 - k) as u64) as usize;
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![unit(&mut rng), unit(&mut rng)])
            .collect();
        let ps = PointSet::unlabeled(pts).unwrap();
        let best = kmeans(&ps, k, Variant::Lloyd, 42, 50).map_err(|e| e.to_string())?;
        let opt = partition_oracle(&ps, k, Objective::Wcss).map_err(|e| e.to_string())?;
        ensure(best.objective >= opt.objective - 1e-9, || {
            format!(
                "k-means {} beat oracle {} (n={n}, k={k})",
                best.objective, opt.objective
            )
        })?;
        if (best.objective - opt.objective).abs() <= 1e-9 {
            equal += 1;
        }
        cases += 1;
    }
    ensure(equal >= 95, || format!("only {equal}/100 optimal"))?;
    Ok(format!("{equal}/100 optimal, none better than the oracle"))
}

/// Population moments of the rank list written out one observation at a time.
fn naive_moments(ranks: &[u64]) -> (f64, f64, f64) {
    let mut expanded = Vec::new();
    for (r, &c) in ranks.iter().enumerate() {
        expanded.extend(std::iter::repeat_n((r + 1) as f64, c as usize));
    }
    let n = expanded.len() as f64;
    let mean = expanded.iter().sum::<f64>() / n;
    let mu2 = expanded.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let mu3 = expanded.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    (mean, mu2, mu3)
}

fn moment_oracle() -> Outcome {
    let mut rng = SplitMix64::seed_from_u64(7);
    let mut checked = 0;
    while checked < 1000 {
        let k = 1 + below(&mut rng, 12) as usize;
        let counts: Vec<u64> = (0..k).map(|_| below(&mut rng, 40)).collect();
        if counts.iter().all(|&c| c == 0) {
            continue;
        }
        let ranked = rank_frequencies(&CategoryTable::from_counts(&counts).unwrap());
        let m = empirical_moments(&ranked).map_err(|e| e.to_string())?;
        let (mean, mu2, mu3) = naive_moments(ranked.counts());
        ensure(
            close(m.mean, mean, 1e-9) && (m.mu2 - mu2).abs() <= 1e-9 && (m.mu3 - mu3).abs() <= 1e-9,
            || format!("{counts:?}: {m:?} vs ({mean}, {mu2}, {mu3})"),
        )?;
        checked += 1;
    }
    let mut symmetric = 0;
    for _ in 0..200 {
        let half: Vec<u64> = (0..1 + below(&mut rng, 10))
            .map(|_| 1 + below(&mut rng, 1000))
            .collect();
        let mut profile = half.clone();
        if below(&mut rng, 2) == 1 {
            profile.push(1 + below(&mut rng, 1000));
        }
        profile.extend(half.iter().rev());
        let m = profile_moments(&profile).map_err(|e| e.to_string())?;
        ensure(m.mu3.abs() <= 1e-9, || {
            format!("{profile:?}: mu3 = {}", m.mu3)
        })?;
        symmetric += 1;
    }
    Ok(format!("{checked} tables, {symmetric} symmetric profiles"))
}

fn reproduce_into(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_qvord"))
        .args(["reproduce", "--seed", "42", "--out-dir"])
        .arg(dir)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || {
        format!(
            "exit {:?}: {}",
            status.status.code(),
            String::from_utf8_lossy(&status.stderr)
        )
    })?;
    let mut files = vec![("stdout".to_string(), status.stdout)];
    for name in ["reproduce.json", "modified.svg", "original.svg"] {
        files.push((
            name.into(),
            std::fs::read(dir.join(name)).map_err(|e| e.to_string())?,
        ));
    }
    Ok(files)
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = reproduce_into(a.path())?;
    let second = reproduce_into(b.path())?;
    for ((name, x), (_, y)) in first.iter().zip(&second) {
        ensure(x == y, || format!("{name} differs between runs"))?;
        ensure(!x.is_empty(), || format!("{name} is empty"))?;
    }
    Ok("stdout, reproduce.json and both SVGs byte-identical".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("modified-graph reproduction", modified_reproduction),
        (
            "original graph matches inventory sizes",
            original_matches_inventory,
        ),
        ("index identities", index_identities),
        ("boundary values", boundary_values),
        ("theory landmarks", theory_landmarks),
        ("k-means vs exhaustive oracle", oracle_equivalence),
        ("moment oracle", moment_oracle),
        ("deterministic reproduce output", determinism),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why}", n + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
