//! Exact counting of S-integer points and monic S-integral polynomials of
//! bounded height, together with the per-ideal counts `Z(A, T)`, `Z*(A, T)`
//! and the identities relating them.

mod candidates;
mod engine;
mod irreducible;

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::heights::denominator_exponents;
use crate::mahler::{mahler_measure, ComplexPolynomial};
use crate::numberfield::{enumerate_ideals, moebius, FieldDesc, FieldElement, PlaceSet, SIdeal};
use crate::poly::{binomial, KPolynomial};
use crate::rational::{from_u128, pow, to_f64, Rational};
use crate::{Error, Result};

use candidates::{CandidateSet, Mode};
use engine::{Leaf, Problem};

/// Whether the monic `f` has no monic factor over `k` of degree
/// `1..=deg f / 2`.
pub fn is_irreducible_over(field: &FieldDesc, f: &KPolynomial) -> Result<bool> {
    irreducible::is_irreducible_over(field, f)
}

/// As [`is_irreducible_over`], for a polynomial with coefficients in `O_S`.
pub fn is_irreducible(ps: &PlaceSet, f: &KPolynomial) -> Result<bool> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    for c in &f.coeffs {
        check_s_integral(ps, c)?;
    }
    irreducible::is_irreducible_over(&ps.field, f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    MaxNorm,
    Mahler,
}

/// An `(r, s)`-system of dimension `n`: the same distance function at every
/// archimedean place, either the max norm of `(1, z)` or the Mahler measure of
/// `X^n + z_1 X^{n-1} + ... + z_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceSystem {
    pub kind: SystemKind,
    pub n: u32,
}

impl DistanceSystem {
    pub fn max_norm(n: u32) -> Self {
        DistanceSystem { kind: SystemKind::MaxNorm, n }
    }

    pub fn mahler(n: u32) -> Self {
        DistanceSystem { kind: SystemKind::Mahler, n }
    }

    /// Largest `gamma` with `gamma |z|_inf <= N(z)`.
    pub fn gamma(&self) -> Rational {
        match self.kind {
            SystemKind::MaxNorm => Rational::from_integer(1.into()),
            SystemKind::Mahler => {
                Rational::new(1.into(), (binomial(self.n, self.n / 2) as i64).into())
            }
        }
    }

    /// Bound on `|z_j| / N~(z)` for coordinate `j` (1-based).
    pub fn coefficient_scale(&self, j: u32) -> f64 {
        match self.kind {
            SystemKind::MaxNorm => 1.0,
            SystemKind::Mahler => binomial(self.n, j) as f64,
        }
    }

    /// `N~_i(z)` at one place.
    pub fn tilde_n(&self, z: &[Complex64]) -> Result<f64> {
        match self.kind {
            SystemKind::MaxNorm => Ok(z.iter().map(|c| c.norm()).fold(1.0, f64::max)),
            SystemKind::Mahler => {
                let mut coeffs = vec![Complex64::new(1.0, 0.0)];
                coeffs.extend_from_slice(z);
                Ok(mahler_measure(&ComplexPolynomial::new(coeffs))?.value)
            }
        }
    }

    /// Exact volume of `{z : N~(z) <= T}` where it is a known closed form.
    pub fn exact_volume(&self, complex: bool, t: f64) -> Option<f64> {
        if t < 1.0 {
            return Some(0.0);
        }
        let n = self.n as i32;
        match (self.kind, complex) {
            (SystemKind::MaxNorm, false) => Some((2.0 * t).powi(n)),
            (SystemKind::MaxNorm, true) => Some(std::f64::consts::PI.powi(n) * t.powi(2 * n)),
            (SystemKind::Mahler, false) if n == 1 => Some(2.0 * t),
            (SystemKind::Mahler, true) if n == 1 => Some(std::f64::consts::PI * t * t),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    /// Refuse when the projected number of candidate evaluations exceeds this.
    pub ceiling: u128,
    pub workers: usize,
    pub materialize: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { ceiling: 100_000_000, workers: 1, materialize: false }
    }
}

impl EnumerationOptions {
    pub fn materialized(mut self) -> Self {
        self.materialize = true;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct EnumerationResult {
    pub count: u128,
    /// Filled for point enumerations when materialisation was requested.
    pub points: Vec<Vec<FieldElement>>,
    /// Filled for polynomial enumerations when materialisation was requested.
    pub polys: Vec<KPolynomial>,
    /// Counts by denominator ideal.
    pub per_ideal: BTreeMap<SIdeal, u128>,
    /// Lattice points scanned plus search nodes visited.
    pub candidates: u128,
    pub millis: u128,
}

fn check_s_integral(ps: &PlaceSet, a: &FieldElement) -> Result<()> {
    let (_, _, den) = a.integral_repr();
    for p in crate::heights::rational_prime_divisors(&den) {
        for q in ps.field.factor_rational_prime(p)? {
            if ps.primes.contains(&q) {
                continue;
            }
            if crate::heights::valuation(&ps.field, a, &q)? < 0 {
                return Err(Error::NotSInteger(format!("{a} has negative valuation at {q}")));
            }
        }
    }
    Ok(())
}

/// Denominator ideal of a point of `O_S^n`: `g_l = max_u max(0, -ord_l(a_u))`.
pub fn classify_by_ideal(ps: &PlaceSet, point: &[FieldElement]) -> Result<SIdeal> {
    for a in point {
        check_s_integral(ps, a)?;
    }
    Ok(SIdeal::new(denominator_exponents(&ps.field, &ps.primes, point)?))
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

/// Sets up candidates for each position, checking the resource projection.
fn prepare(
    ps: &PlaceSet,
    bound: &Rational,
    scales: &[f64],
    mode: &Mode,
    opts: &EnumerationOptions,
) -> Result<(Vec<CandidateSet>, Vec<usize>, u128)> {
    let mut distinct: Vec<f64> = Vec::new();
    let mut index = Vec::with_capacity(scales.len());
    for &s in scales {
        match distinct.iter().position(|&d| d == s) {
            Some(i) => index.push(i),
            None => {
                distinct.push(s);
                index.push(distinct.len() - 1);
            }
        }
    }
    let scan: u128 = distinct.iter().map(|&s| candidates::project(ps, bound, s, mode)).sum();
    if scan > opts.ceiling {
        return Err(Error::ResourceLimit { projected: scan, ceiling: opts.ceiling });
    }
    let sets: Vec<CandidateSet> = distinct
        .iter()
        .map(|&s| candidates::build(ps, bound, s, mode))
        .collect::<Result<_>>()?;
    let weighted = matches!(mode, Mode::ByDenominator);
    let search = project_search(&sets, &index, bound, weighted);
    let projected = scan.saturating_add(search);
    if projected > opts.ceiling {
        return Err(Error::ResourceLimit { projected, ceiling: opts.ceiling });
    }
    Ok((sets, index, scan))
}

/// Heuristic size of the product search: the number of first/second position
/// pairs passing a separable version of the pruning test, extended to further
/// positions by the average branching factor.
fn project_search(sets: &[CandidateSet], index: &[usize], bound: &Rational, weighted: bool) -> u128 {
    let first = &sets[index[0]];
    let n0 = first.len() as u128;
    if index.len() == 1 {
        return n0;
    }
    let t = to_f64(bound) * (1.0 + candidates::SLACK);
    let second = &sets[index[1]];
    let mut keys: Vec<f64> = second
        .strata
        .iter()
        .flat_map(|s| {
            let n = if weighted { s.norm as f64 } else { 1.0 };
            s.cands.iter().map(move |c| n * c.wlo)
        })
        .collect();
    keys.sort_by(f64::total_cmp);
    let mut pairs: u128 = 0;
    for s in &first.strata {
        for c in &s.cands {
            let lim = t / c.wlo.max(1.0).max(if weighted { s.norm as f64 } else { 1.0 });
            pairs += keys.partition_point(|&k| k <= lim) as u128;
        }
    }
    let branching = if n0 == 0 { 0.0 } else { pairs as f64 / n0 as f64 };
    let rest = branching.max(1.0).powi(index.len() as i32 - 2);
    let est = pairs as f64 * rest;
    n0 + if est.is_finite() && est < 1e36 { est as u128 } else { u128::MAX / 2 }
}

fn finish(
    ps: &PlaceSet,
    outcome: engine::Outcome,
    scanned: u128,
    started: Instant,
    as_polys: bool,
) -> EnumerationResult {
    let omega = ps.field.omega;
    let mut res = EnumerationResult {
        count: outcome.count,
        candidates: scanned + outcome.visited,
        ..Default::default()
    };
    for (k, v) in outcome.per_ideal {
        res.per_ideal.insert(SIdeal::new(k), v);
    }
    for pt in outcome.points {
        let elems: Vec<FieldElement> =
            pt.iter().map(|&(x, y, d)| FieldElement::from_coords(omega, x, y, d)).collect();
        if as_polys {
            res.polys.push(KPolynomial::monic(omega, &elems));
        } else {
            res.points.push(elems);
        }
    }
    res.millis = started.elapsed().as_millis();
    res
}

/// All `a` in `O_S^n` with `H(a) <= hmax`.
pub fn enumerate_vectors(ps: &PlaceSet, n: u32, hmax: &Rational, opts: &EnumerationOptions) -> Result<EnumerationResult> {
    let started = Instant::now();
    if n == 0 {
        return Err(Error::Config("dimension must be at least 1".into()));
    }
    if *hmax < one() {
        return Ok(EnumerationResult::default());
    }
    let bound = pow(hmax, ps.field.m);
    let scales = vec![1.0; n as usize];
    let (sets, index, scanned) = prepare(ps, &bound, &scales, &Mode::ByDenominator, opts)?;
    let problem = Problem {
        ps,
        positions: index.iter().map(|&i| &sets[i]).collect(),
        bound,
        weighted: true,
        leaf: Leaf::MaxNorm,
        materialize: opts.materialize,
        ceiling: opts.ceiling,
        workers: opts.workers,
    };
    let outcome = engine::run(&problem)?;
    Ok(finish(ps, outcome, scanned, started, false))
}

/// Monic `f` in `O_S[X]` of degree `e` with `M^k(f) <= mmax`.
pub fn enumerate_monic_polys(
    ps: &PlaceSet,
    e: u32,
    mmax: &Rational,
    irreducible_only: bool,
    opts: &EnumerationOptions,
) -> Result<EnumerationResult> {
    let started = Instant::now();
    if e == 0 {
        return Err(Error::Config("degree must be at least 1".into()));
    }
    if *mmax < one() {
        return Ok(EnumerationResult::default());
    }
    let bound = pow(mmax, ps.field.m);
    let system = DistanceSystem::mahler(e);
    let scales: Vec<f64> = (1..=e).map(|j| system.coefficient_scale(j)).collect();
    let (sets, index, scanned) = prepare(ps, &bound, &scales, &Mode::ByDenominator, opts)?;
    let problem = Problem {
        ps,
        positions: index.iter().map(|&i| &sets[i]).collect(),
        bound,
        weighted: true,
        leaf: Leaf::Mahler { irreducible_only },
        materialize: opts.materialize,
        ceiling: opts.ceiling,
        workers: opts.workers,
    };
    let outcome = engine::run(&problem)?;
    Ok(finish(ps, outcome, scanned, started, true))
}

/// `e` times the number of monic irreducible `f` of degree `e` with
/// `M^k(f) <= hmax^e`: the number of algebraic `beta` of degree `e` over `k`,
/// integral over `O_S`, with `H(beta) <= hmax`.
pub fn count_algebraic(ps: &PlaceSet, e: u32, hmax: &Rational, opts: &EnumerationOptions) -> Result<EnumerationResult> {
    let mut res = enumerate_monic_polys(ps, e, &pow(hmax, e), true, opts)?;
    res.count *= e as u128;
    for v in res.per_ideal.values_mut() {
        *v *= e as u128;
    }
    Ok(res)
}

/// `|Z(A, T)|`: points of `(A^{-1})^n` with `prod_i N~_i(sigma_i a)^{d_i} <= t_pow_m`.
pub fn count_z(
    ps: &PlaceSet,
    system: &DistanceSystem,
    ideal: &SIdeal,
    t_pow_m: &Rational,
    opts: &EnumerationOptions,
) -> Result<u128> {
    if system.n == 0 {
        return Err(Error::Config("dimension must be at least 1".into()));
    }
    if *t_pow_m < one() {
        return Ok(0);
    }
    let scales: Vec<f64> = (1..=system.n).map(|j| system.coefficient_scale(j)).collect();
    let mode = Mode::Fixed(ideal.clone());
    let (sets, index, _) = prepare(ps, t_pow_m, &scales, &mode, opts)?;
    let leaf = match system.kind {
        SystemKind::MaxNorm => Leaf::MaxNorm,
        SystemKind::Mahler => Leaf::Mahler { irreducible_only: false },
    };
    let problem = Problem {
        ps,
        positions: index.iter().map(|&i| &sets[i]).collect(),
        bound: t_pow_m.clone(),
        weighted: false,
        leaf,
        materialize: false,
        ceiling: opts.ceiling,
        workers: opts.workers,
    };
    Ok(engine::run(&problem)?.count)
}

/// `|Z*(A, T)| = sum_{B | A} mu(B) |Z(A B^{-1}, T)|`.
pub fn count_zstar(
    ps: &PlaceSet,
    system: &DistanceSystem,
    ideal: &SIdeal,
    t_pow_m: &Rational,
    opts: &EnumerationOptions,
) -> Result<u128> {
    let mut acc: i128 = 0;
    for b in ideal.squarefree_divisors() {
        let z = count_z(ps, system, &ideal.quotient(&b), t_pow_m, opts)? as i128;
        acc += moebius(&b) as i128 * z;
    }
    u128::try_from(acc).map_err(|_| Error::Overflow(format!("negative Z* count {acc}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionRow {
    pub ideal: SIdeal,
    pub norm: u128,
    /// Points of the enumeration whose denominator ideal is `ideal`.
    pub enumerated: u128,
    /// `|Z*(A, H^m / N(A))|`.
    pub zstar: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub lhs: u128,
    pub rhs: u128,
    pub rows: Vec<PartitionRow>,
}

/// Checks `|O_S(H)| = sum_A |Z*(A, N(A)^{-1/m} H)|` over `N(A) <= H^m`, where the
/// left side comes from [`enumerate_vectors`] and the right from lattice counts.
pub fn partition_check(ps: &PlaceSet, n: u32, hmax: &Rational, opts: &EnumerationOptions) -> Result<PartitionReport> {
    let lhs = enumerate_vectors(ps, n, hmax, opts)?;
    let bound = pow(hmax, ps.field.m);
    let system = DistanceSystem::max_norm(n);
    let mut rows = Vec::new();
    let mut rhs = 0;
    for a in enumerate_ideals(ps, &bound) {
        let norm = a.norm(ps);
        let t = &bound / from_u128(norm);
        let zstar = count_zstar(ps, &system, &a, &t, opts)?;
        rhs += zstar;
        let enumerated = lhs.per_ideal.get(&a).copied().unwrap_or(0);
        rows.push(PartitionRow { ideal: a, norm, enumerated, zstar });
    }
    let report = PartitionReport { lhs: lhs.count, rhs, rows };
    if report.lhs != report.rhs || report.rows.iter().any(|r| r.enumerated != r.zstar) {
        let bad: Vec<String> = report
            .rows
            .iter()
            .filter(|r| r.enumerated != r.zstar)
            .map(|r| format!("{}: enumerated {} vs Z* {}", r.ideal.label(), r.enumerated, r.zstar))
            .collect();
        return Err(Error::PartitionMismatch(format!(
            "total {} vs {}; {}",
            report.lhs,
            report.rhs,
            bad.join("; ")
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::Omega;
    use crate::rational::{int, rat};

    fn opts() -> EnumerationOptions {
        EnumerationOptions::default()
    }

    #[test]
    fn vector_examples() {
        let z = PlaceSet::rational(&[]).unwrap();
        assert_eq!(enumerate_vectors(&z, 1, &int(10), &opts()).unwrap().count, 21);
        assert_eq!(enumerate_vectors(&z, 2, &int(3), &opts()).unwrap().count, 49);
        let z2 = PlaceSet::rational(&[2]).unwrap();
        let r = enumerate_vectors(&z2, 1, &int(10), &opts()).unwrap();
        assert_eq!(r.count, 51);
        let counts: Vec<u128> = r.per_ideal.values().copied().collect();
        assert_eq!(counts, vec![21, 10, 10, 10]);
        assert_eq!(enumerate_vectors(&z2, 1, &rat(1, 2), &opts()).unwrap().count, 0);
    }

    #[test]
    fn classification_examples() {
        let ps = PlaceSet::rational(&[2, 3]).unwrap();
        let o = Omega::Rational;
        let q = |a, b| FieldElement::from_rational(o, rat(a, b));
        assert!(classify_by_ideal(&ps, &[q(0, 1), q(0, 1)]).unwrap().is_unit());
        assert_eq!(classify_by_ideal(&ps, &[q(3, 4)]).unwrap().exps, vec![2, 0]);
        assert_eq!(classify_by_ideal(&ps, &[q(1, 2), q(1, 3)]).unwrap().exps, vec![1, 1]);
        assert!(matches!(classify_by_ideal(&ps, &[q(1, 5)]), Err(Error::NotSInteger(_))));
    }

    #[test]
    fn lattice_count_examples() {
        let ps = PlaceSet::rational(&[2]).unwrap();
        let sys = DistanceSystem::max_norm(1);
        let unit = ps.unit_ideal();
        let two = SIdeal::new(vec![1]);
        assert_eq!(count_z(&ps, &sys, &unit, &rat(1, 2), &opts()).unwrap(), 0);
        assert_eq!(count_z(&ps, &sys, &unit, &int(5), &opts()).unwrap(), 11);
        assert_eq!(count_z(&ps, &sys, &two, &int(5), &opts()).unwrap(), 21);
        assert_eq!(count_zstar(&ps, &sys, &two, &int(5), &opts()).unwrap(), 10);
        assert_eq!(count_zstar(&ps, &sys, &unit, &int(5), &opts()).unwrap(), 11);
    }

    #[test]
    fn polynomial_examples() {
        let z = PlaceSet::rational(&[]).unwrap();
        assert_eq!(enumerate_monic_polys(&z, 1, &int(10), false, &opts()).unwrap().count, 21);
        let r = enumerate_monic_polys(&z, 2, &int(1), true, &opts().materialized()).unwrap();
        let mut got: Vec<String> = r.polys.iter().map(|p| p.to_string()).collect();
        got.sort();
        let mut want: Vec<String> = [[1, 0, 1], [1, 1, 1], [1, -1, 1]]
            .iter()
            .map(|c| KPolynomial::from_ints(Omega::Rational, c).to_string())
            .collect();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(count_algebraic(&z, 2, &int(1), &opts()).unwrap().count, 6);
        let z2 = PlaceSet::rational(&[2]).unwrap();
        assert_eq!(count_algebraic(&z2, 1, &int(10), &opts()).unwrap().count, 51);
    }

    #[test]
    fn partition_examples() {
        let z2 = PlaceSet::rational(&[2]).unwrap();
        let r = partition_check(&z2, 1, &int(10), &opts()).unwrap();
        assert_eq!((r.lhs, r.rhs), (51, 51));
        let k = FieldDesc::quadratic(3).unwrap();
        let p = k.factor_rational_prime(2).unwrap();
        let ps = PlaceSet::new(k, p).unwrap();
        let r = partition_check(&ps, 1, &int(4), &opts()).unwrap();
        assert_eq!(r.lhs, r.rhs);
    }

    #[test]
    fn resource_guard_refuses() {
        let z = PlaceSet::rational(&[2, 3]).unwrap();
        let o = EnumerationOptions { ceiling: 1000, ..opts() };
        assert!(matches!(
            enumerate_vectors(&z, 3, &int(30), &o),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
