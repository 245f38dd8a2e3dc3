//! Theoretical distributions on Ord's graph: exact landmark points and the
//! regions each family occupies.
//!
//! Binomial distributions lie on the segment GP of the line `S = 2I − 1`,
//! negative binomials on its continuation PB beyond the Poisson point, the
//! hypergeometric family fills the triangle AGP and the beta-binomial the
//! half-plane below the line.

use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;
use statrs::function::factorial::{ln_binomial, ln_factorial};
use statrs::function::gamma::ln_gamma;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::moments::{moments_of, ord_coords, MomentSummary, OrdPoint};

pub const POINT_A: OrdPoint = OrdPoint::new(0.0, 1.0);
pub const POINT_G: OrdPoint = OrdPoint::new(0.0, -1.0);
/// Symmetric binomial.
pub const POINT_J: OrdPoint = OrdPoint::new(0.5, 0.0);
/// Poisson.
pub const POINT_P: OrdPoint = OrdPoint::new(1.0, 1.0);

pub const DEFAULT_TOL: f64 = 1e-9;

/// Hard cap on pmf terms for infinite supports.
const MAX_TERMS: usize = 10_000_000;

/// A parametrized discrete distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum DistSpec {
    Binomial {
        n: u64,
        p: f64,
    },
    Poisson {
        lambda: f64,
    },
    /// Failures before the `r`-th success, success probability `p`.
    NegBinomial {
        r: f64,
        p: f64,
    },
    Hypergeometric {
        population: u64,
        successes: u64,
        draws: u64,
    },
    BetaBinomial {
        n: u64,
        alpha: f64,
        beta: f64,
    },
}

fn check_prob(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Value(format!("probability {p} outside [0, 1]")));
    }
    if p == 0.0 || p == 1.0 {
        return Err(Error::DegenerateDistribution(format!("p = {p}")));
    }
    Ok(())
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Value(format!(
            "{name} = {x} must be positive and finite"
        )))
    }
}

impl DistSpec {
    /// Parses a family name and a comma-separated parameter list, in the order
    /// the enum variants declare them.
    pub fn parse(family: &str, params: &str) -> Result<Self> {
        let values: Vec<&str> = params
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        let want = |n: usize| -> Result<()> {
            if values.len() == n {
                Ok(())
            } else {
                Err(Error::Value(format!(
                    "{family} takes {n} parameters, got {}",
                    values.len()
                )))
            }
        };
        let real = |i: usize| -> Result<f64> {
            values[i]
                .parse()
                .map_err(|_| Error::Value(format!("parameter {:?} is not a number", values[i])))
        };
        let int = |i: usize| -> Result<u64> {
            values[i].parse().map_err(|_| {
                Error::Value(format!(
                    "parameter {:?} is not a non-negative integer",
                    values[i]
                ))
            })
        };
        let spec = match family.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "binomial" => {
                want(2)?;
                DistSpec::Binomial {
                    n: int(0)?,
                    p: real(1)?,
                }
            }
            "poisson" => {
                want(1)?;
                DistSpec::Poisson { lambda: real(0)? }
            }
            "negbinomial" | "negativebinomial" => {
                want(2)?;
                DistSpec::NegBinomial {
                    r: real(0)?,
                    p: real(1)?,
                }
            }
            "hypergeometric" => {
                want(3)?;
                DistSpec::Hypergeometric {
                    population: int(0)?,
                    successes: int(1)?,
                    draws: int(2)?,
                }
            }
            "betabinomial" => {
                want(3)?;
                DistSpec::BetaBinomial {
                    n: int(0)?,
                    alpha: real(1)?,
                    beta: real(2)?,
                }
            }
            other => {
                return Err(Error::Value(format!(
                    "unknown distribution family {other:?}"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks parameter ranges; zero-variance members are reported as degenerate.
    pub fn validate(&self) -> Result<()> {
        match *self {
            DistSpec::Binomial { n, p } => {
                check_prob(p)?;
                if n == 0 {
                    return Err(Error::DegenerateDistribution("binomial with n = 0".into()));
                }
            }
            DistSpec::Poisson { lambda } => check_positive("lambda", lambda)?,
            DistSpec::NegBinomial { r, p } => {
                check_positive("r", r)?;
                check_prob(p)?;
            }
            DistSpec::Hypergeometric {
                population,
                successes,
                draws,
            } => {
                if successes > population || draws > population {
                    return Err(Error::Value(format!(
                        "hypergeometric needs successes, draws <= population ({population})"
                    )));
                }
                if draws == 0 || draws == population || successes == 0 || successes == population {
                    return Err(Error::DegenerateDistribution(
                        "hypergeometric with zero variance".into(),
                    ));
                }
            }
            DistSpec::BetaBinomial { n, alpha, beta } => {
                check_positive("alpha", alpha)?;
                check_positive("beta", beta)?;
                if n == 0 {
                    return Err(Error::DegenerateDistribution(
                        "beta-binomial with n = 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn ln_pmf(&self, k: u64) -> f64 {
        match *self {
            DistSpec::Binomial { n, p } => {
                if k > n {
                    return f64::NEG_INFINITY;
                }
                ln_binomial(n, k) + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()
            }
            DistSpec::Poisson { lambda } => k as f64 * lambda.ln() - lambda - ln_factorial(k),
            DistSpec::NegBinomial { r, p } => {
                ln_gamma(k as f64 + r) - ln_gamma(r) - ln_factorial(k)
                    + r * p.ln()
                    + k as f64 * (-p).ln_1p()
            }
            DistSpec::Hypergeometric {
                population,
                successes,
                draws,
            } => {
                let failures = population - successes;
                if k > successes || k > draws || draws - k > failures {
                    return f64::NEG_INFINITY;
                }
                ln_binomial(successes, k) + ln_binomial(failures, draws - k)
                    - ln_binomial(population, draws)
            }
            DistSpec::BetaBinomial { n, alpha, beta } => {
                if k > n {
                    return f64::NEG_INFINITY;
                }
                ln_binomial(n, k) + ln_beta(k as f64 + alpha, (n - k) as f64 + beta)
                    - ln_beta(alpha, beta)
            }
        }
    }

    /// Support bounds when finite.
    fn finite_support(&self) -> Option<(u64, u64)> {
        match *self {
            DistSpec::Binomial { n, .. } | DistSpec::BetaBinomial { n, .. } => Some((0, n)),
            DistSpec::Hypergeometric {
                population,
                successes,
                draws,
            } => Some((
                draws.saturating_sub(population - successes),
                draws.min(successes),
            )),
            DistSpec::Poisson { .. } | DistSpec::NegBinomial { .. } => None,
        }
    }

    /// Mode estimate used to decide when the tail has started.
    fn mode_hint(&self) -> f64 {
        match *self {
            DistSpec::Poisson { lambda } => lambda,
            DistSpec::NegBinomial { r, p } => (r - 1.0).max(0.0) * (1.0 - p) / p,
            _ => 0.0,
        }
    }
}

/// Exact moments: closed forms for the binomial, Poisson and negative binomial,
/// full pmf summation over the finite support otherwise.
pub fn dist_moments(spec: &DistSpec) -> Result<MomentSummary> {
    spec.validate()?;
    Ok(match *spec {
        DistSpec::Binomial { n, p } => {
            let q = 1.0 - p;
            let var = n as f64 * p * q;
            MomentSummary {
                mean: n as f64 * p,
                mu2: var,
                mu3: var * (q - p),
            }
        }
        DistSpec::Poisson { lambda } => MomentSummary {
            mean: lambda,
            mu2: lambda,
            mu3: lambda,
        },
        DistSpec::NegBinomial { r, p } => {
            let q = 1.0 - p;
            MomentSummary {
                mean: r * q / p,
                mu2: r * q / (p * p),
                mu3: r * q * (1.0 + q) / (p * p * p),
            }
        }
        DistSpec::Hypergeometric { .. } | DistSpec::BetaBinomial { .. } => finite_sum(spec),
    })
}

pub fn dist_point(spec: &DistSpec) -> Result<OrdPoint> {
    ord_coords(&dist_moments(spec)?)
}

fn finite_sum(spec: &DistSpec) -> MomentSummary {
    let (lo, hi) = spec.finite_support().expect("finite support");
    let pmf: Vec<(f64, f64)> = (lo..=hi)
        .map(|k| (k as f64, spec.ln_pmf(k).exp()))
        .collect();
    normalized(&pmf)
}

fn normalized(pmf: &[(f64, f64)]) -> MomentSummary {
    let mass: f64 = pmf.iter().map(|&(_, p)| p).sum();
    moments_of(pmf.iter().map(|&(x, p)| (x, p / mass)))
}

/// Moments by direct pmf summation. Infinite supports are cut once the
/// accumulated mass reaches `1 − tail_tol` and the terms have become too small
/// to move the third moment.
pub fn summation_moments(spec: &DistSpec, tail_tol: f64) -> Result<MomentSummary> {
    if !(tail_tol > 0.0 && tail_tol <= 1e-6) {
        return Err(Error::Value(format!(
            "tail tolerance {tail_tol} outside (0, 1e-6]"
        )));
    }
    spec.validate()?;
    if spec.finite_support().is_some() {
        return Ok(finite_sum(spec));
    }
    let mode = spec.mode_hint();
    let mut pmf = Vec::new();
    let mut mass = 0.0;
    for k in 0..MAX_TERMS as u64 {
        let p = spec.ln_pmf(k).exp();
        pmf.push((k as f64, p));
        mass += p;
        let x = (k + 1) as f64;
        if mass >= 1.0 - tail_tol && k as f64 > mode && p * x * x * x < tail_tol {
            return Ok(normalized(&pmf));
        }
    }
    Err(Error::Truncation {
        tail_tol,
        terms: MAX_TERMS,
    })
}

/// Named areas of Ord's graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Region {
    BinomialSegment,
    PoissonPoint,
    NegbinHalfline,
    HypergeomTriangle,
    BetabinHalfplane,
    BetapascalRegion,
    None,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.pad(s.as_str().unwrap_or_default())
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Value(format!("unknown region {s:?}")))
    }
}

/// Every region containing a point, with the tolerance used to decide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub regions: BTreeSet<Region>,
    pub tol: f64,
}

impl Classification {
    pub fn contains(&self, region: Region) -> bool {
        self.regions.contains(&region)
    }
}

pub fn classify_region(point: OrdPoint, tol: f64) -> Classification {
    let OrdPoint { i, s } = point;
    let line = 2.0 * i - 1.0;
    let mut regions = BTreeSet::new();
    if (i - 1.0).abs() <= tol && (s - 1.0).abs() <= tol {
        regions.insert(Region::PoissonPoint);
    }
    if (s - line).abs() <= tol {
        if i > 0.0 && i < 1.0 {
            regions.insert(Region::BinomialSegment);
        }
        if i > 1.0 {
            regions.insert(Region::NegbinHalfline);
        }
    }
    if i > tol && s < 1.0 - tol && s > line + tol {
        regions.insert(Region::HypergeomTriangle);
    }
    if s < line - tol {
        regions.insert(Region::BetabinHalfplane);
    }
    if s > 1.0 + tol && s > line + tol {
        regions.insert(Region::BetapascalRegion);
    }
    if regions.is_empty() {
        regions.insert(Region::None);
    }
    Classification { regions, tol }
}

/// Whether the point sits within `tol` of an edge of triangle AGP.
pub fn on_triangle_boundary(point: OrdPoint, tol: f64) -> bool {
    let OrdPoint { i, s } = point;
    let in_i = (-tol..=1.0 + tol).contains(&i);
    let in_s = (-1.0 - tol..=1.0 + tol).contains(&s);
    if !(in_i && in_s) {
        return false;
    }
    let edge_ag = i.abs() <= tol;
    let edge_ap = (s - 1.0).abs() <= tol;
    // distance to S = 2I - 1 measured perpendicular to the line
    let edge_gp = (s - 2.0 * i + 1.0).abs() / 5f64.sqrt() <= tol;
    edge_ag || edge_ap || edge_gp
}
