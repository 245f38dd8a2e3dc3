//! Where common discrete distributions land on Ord's graph.

use qvord::theory::{classify_region, dist_point, DistSpec, DEFAULT_TOL};

fn main() -> qvord::Result<()> {
    let specs = [
        DistSpec::Poisson { lambda: 3.0 },
        DistSpec::Binomial { n: 10, p: 0.5 },
        DistSpec::Binomial { n: 20, p: 0.2 },
        DistSpec::NegBinomial { r: 2.0, p: 0.4 },
        DistSpec::Hypergeometric {
            population: 40,
            successes: 10,
            draws: 8,
        },
        DistSpec::BetaBinomial {
            n: 12,
            alpha: 2.0,
            beta: 5.0,
        },
    ];
    for spec in specs {
        let p = dist_point(&spec)?;
        let regions: Vec<String> = classify_region(p, DEFAULT_TOL)
            .regions
            .iter()
            .map(|r| r.to_string())
            .collect();
        println!(
            "{spec:?}\n    I={:.6} S={:.6} {}",
            p.i,
            p.s,
            regions.join(" ")
        );
    }
    Ok(())
}
