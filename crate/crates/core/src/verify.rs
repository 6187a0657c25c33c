//! Property suites run by `scount --command verify`, each producing a
//! machine-readable verdict.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotics::{
    chern_vaaler_real, davenport_diagnostic, l_sum, l_sum_recursion_holds, place_volume, volume_diagnostics,
};
use crate::enumeration::{count_z, count_zstar, partition_check, DistanceSystem, EnumerationOptions};
use crate::mahler::mahler_k;
use crate::numberfield::{enumerate_ideals, FieldElement, Omega, PlaceSet};
use crate::poly::KPolynomial;
use crate::rational::{int, pow, to_decimal, to_f64, Rational};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Moebius,
    Partition,
    Mahler,
    Lsum,
    Volume,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "moebius" => Suite::Moebius,
            "partition" => Suite::Partition,
            "mahler" => Suite::Mahler,
            "lsum" => Suite::Lsum,
            "volume" => Suite::Volume,
            _ => {
                return Err(Error::Config(format!(
                    "unknown suite {s:?}; expected moebius, partition, mahler, lsum or volume"
                )))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Moebius => "moebius",
            Suite::Partition => "partition",
            Suite::Mahler => "mahler",
            Suite::Lsum => "lsum",
            Suite::Volume => "volume",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteParams {
    pub n: u32,
    /// Heights (or `T` values) to test; each suite has its own default.
    pub grid: Option<Vec<Rational>>,
    pub seed: u64,
    pub mahler_pairs: usize,
    pub mahler_tolerance: f64,
    pub lsum_tolerance: f64,
    pub volume_samples: u64,
    pub davenport_ceiling: f64,
    pub opts: EnumerationOptions,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            n: 1,
            grid: None,
            seed: 0,
            mahler_pairs: 500,
            mahler_tolerance: 1e-12,
            lsum_tolerance: 0.35,
            volume_samples: 1_000_000,
            davenport_ceiling: 2.0,
            opts: EnumerationOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

fn check(name: impl Into<String>, pass: bool, detail: Value) -> Check {
    Check { name: name.into(), pass, detail }
}

pub fn run_suite(suite: Suite, ps: &PlaceSet, p: &SuiteParams) -> Result<Verdict> {
    let checks = match suite {
        Suite::Moebius => moebius(ps, p)?,
        Suite::Partition => partition(ps, p)?,
        Suite::Mahler => mahler(ps, p)?,
        Suite::Lsum => lsum(ps, p)?,
        Suite::Volume => volume(ps, p)?,
    };
    Ok(Verdict { suite: suite.to_string(), pass: checks.iter().all(|c| c.pass), checks })
}

fn grid_or(p: &SuiteParams, default: &[i64]) -> Vec<Rational> {
    p.grid.clone().unwrap_or_else(|| default.iter().map(|&v| int(v)).collect())
}

/// `sum_{B | A} |Z*(B, T)| = |Z(A, T)|` for every `A` with at most three prime factors.
fn moebius(ps: &PlaceSet, p: &SuiteParams) -> Result<Vec<Check>> {
    let system = DistanceSystem::max_norm(p.n);
    let grid = grid_or(p, &[1, 2, 3, 5]);
    let mut cap = Rational::from_integer(1.into());
    for &nq in &ps.norms() {
        cap *= pow(&int(nq as i64), 3);
    }
    let ideals: Vec<_> = enumerate_ideals(ps, &cap).into_iter().filter(|a| a.prime_factor_count() <= 3).collect();
    let mut out = Vec::new();
    for t in &grid {
        let tm = pow(t, ps.field.m);
        for a in &ideals {
            let mut lhs = 0u128;
            for b in a.divisors() {
                lhs += count_zstar(ps, &system, &b, &tm, &p.opts)?;
            }
            let rhs = count_z(ps, &system, a, &tm, &p.opts)?;
            out.push(check(
                format!("T={} A={}", to_decimal(t), a.label()),
                lhs == rhs,
                json!({"sum_zstar": lhs.to_string(), "z": rhs.to_string()}),
            ));
        }
    }
    Ok(out)
}

fn partition(ps: &PlaceSet, p: &SuiteParams) -> Result<Vec<Check>> {
    let grid = grid_or(p, &(1..=30).collect::<Vec<_>>());
    let mut out = Vec::new();
    for h in &grid {
        let name = format!("H={}", to_decimal(h));
        match partition_check(ps, p.n, h, &p.opts) {
            Ok(r) => out.push(check(name, true, json!({"enumerated": r.lhs.to_string(), "partition": r.rhs.to_string()}))),
            Err(Error::PartitionMismatch(msg)) => out.push(check(name, false, json!({ "mismatch": msg }))),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn random_element(rng: &mut ChaCha8Rng, omega: Omega) -> FieldElement {
    let den = int(rng.random_range(1..=3));
    let a = int(rng.random_range(-4..=4)) / &den;
    let b = if omega == Omega::Rational { int(0) } else { int(rng.random_range(-4..=4)) / &den };
    FieldElement::new(omega, a, b)
}

/// Random monic polynomial of degree 1 to 3.
pub fn random_monic(rng: &mut ChaCha8Rng, omega: Omega) -> KPolynomial {
    let deg = rng.random_range(1..=3);
    let lower: Vec<FieldElement> = (0..deg).map(|_| random_element(rng, omega)).collect();
    KPolynomial::monic(omega, &lower)
}

/// `M^k(fg) = M^k(f) M^k(g)` on random pairs.
fn mahler(ps: &PlaceSet, p: &SuiteParams) -> Result<Vec<Check>> {
    let field = &ps.field;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for i in 0..p.mahler_pairs {
        let f = random_monic(&mut rng, field.omega);
        let g = random_monic(&mut rng, field.omega);
        let lhs = mahler_k(field, &f.mul(&g))?.value;
        let rhs = mahler_k(field, &f)?.value * mahler_k(field, &g)?.value;
        let rel = (lhs - rhs).abs() / lhs.abs().max(rhs.abs());
        worst = worst.max(rel);
        if rel > p.mahler_tolerance {
            failures.push(json!({"pair": i, "f": f.to_string(), "g": g.to_string(), "rel": rel}));
        }
    }
    Ok(vec![check(
        "multiplicativity",
        failures.is_empty(),
        json!({"pairs": p.mahler_pairs, "tolerance": p.mahler_tolerance, "worst_rel": worst, "failures": failures}),
    )])
}

fn lsum(ps: &PlaceSet, p: &SuiteParams) -> Result<Vec<Check>> {
    let grid = p.grid.clone().unwrap_or_else(|| vec![pow(&int(2), 20)]);
    let mut out = Vec::new();
    for h in &grid {
        let r = l_sum(ps, h, 0, 1, p.n)?;
        out.push(check(
            format!("leading term H={}", to_decimal(h)),
            (r.ratio - 1.0).abs() <= p.lsum_tolerance,
            json!({"direct": r.direct, "leading": r.leading, "ratio": r.ratio, "tolerance": p.lsum_tolerance}),
        ));
        let r2 = l_sum(ps, h, 0, 2, p.n)?;
        out.push(check(
            format!("absolute variant dominates H={}", to_decimal(h)),
            r2.direct.is_finite() && r2.direct >= r.direct,
            json!({"h1": r.direct, "h2": r2.direct}),
        ));
    }
    let mut all = true;
    for e in 0..=10 {
        let h = pow(&int(2), e);
        for k in 0..=2 {
            for variant in 1..=2 {
                all &= l_sum_recursion_holds(ps, &h, k, variant, p.n)?;
            }
        }
    }
    out.push(check("recursion identity H <= 2^10", all, json!({"K": [0, 1, 2], "h": [1, 2]})));
    Ok(out)
}

fn volume(ps: &PlaceSet, p: &SuiteParams) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let t = 100.0;
    let real = place_volume(&DistanceSystem::mahler(2), false, t, p.volume_samples, p.seed)?;
    let want = to_f64(&chern_vaaler_real(2)) * t * t;
    out.push(check(
        "real monic degree 2, M <= 100",
        (real.estimate / want - 1.0).abs() <= 0.10,
        json!({"estimate": real.estimate, "std_err": real.std_err, "expected": want}),
    ));
    let disk = place_volume(&DistanceSystem::mahler(1), true, t, p.volume_samples, p.seed)?;
    let want = std::f64::consts::PI * t * t;
    out.push(check(
        "complex degree 1 disk",
        (disk.estimate / want - 1.0).abs() <= 0.01,
        json!({"estimate": disk.estimate, "std_err": disk.std_err, "expected": want}),
    ));
    let line = volume_diagnostics(&DistanceSystem::max_norm(1), (1, 0), 7.0, 10_000, p.seed)?;
    out.push(check(
        "max norm, one real place",
        line.exact == Some(14.0) && (line.monte_carlo.estimate - 14.0).abs() <= 5.0 * line.monte_carlo.std_err + 1e-9,
        json!({"exact": line.exact, "estimate": line.monte_carlo.estimate}),
    ));
    let empty = volume_diagnostics(&DistanceSystem::mahler(2), (1, 0), 0.5, 10_000, p.seed)?;
    out.push(check("T < 1 is empty", empty.monte_carlo.estimate == 0.0, json!({"estimate": empty.monte_carlo.estimate})));
    let grid = grid_or(p, &[1, 2, 4, 8, 16]);
    let unit = ps.unit_ideal();
    let dav = davenport_diagnostic(ps, p.n, &unit, &grid, p.davenport_ceiling, &p.opts)?;
    out.push(check("davenport ratio", dav.holds, serde_json::to_value(&dav).expect("serialisable")));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        for s in ["moebius", "partition", "mahler", "lsum", "volume"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!(matches!("nope".parse::<Suite>(), Err(Error::Config(_))));
    }

    #[test]
    fn small_suites_pass() {
        let z2 = PlaceSet::rational(&[2]).unwrap();
        let p = SuiteParams { mahler_pairs: 50, grid: Some(vec![int(1), int(4), int(10)]), ..Default::default() };
        for s in [Suite::Moebius, Suite::Partition, Suite::Mahler] {
            let v = run_suite(s, &z2, &p).unwrap();
            assert!(v.pass, "{s}: {}", serde_json::to_string(&v).unwrap());
        }
    }
}
