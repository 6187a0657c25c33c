//! Closed-form constants and main terms for the counting functions, the
//! logarithmic ideal sums behind them, and Monte-Carlo volume checks.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::enumeration::{count_z, DistanceSystem, EnumerationOptions, SystemKind};
use crate::heights::omega_embeddings;
use crate::lattice::IdealLattice;
use crate::numberfield::{enumerate_ideals, psi, PlaceSet, SIdeal};
use crate::poly::binomial;
use crate::rational::{floor_log, format_sig, from_u128, int, pow, to_f64, Rational};
use crate::{Error, Result};

/// `rational * pi^pi_power / (prod_l log(l) * sqrt(sqrt_disc)^sqrt_disc_power)`.
#[derive(Clone, Debug)]
pub struct Symbolic {
    pub rational: Rational,
    pub pi_power: u32,
    /// Arguments of the logarithms in the denominator (ideal norms).
    pub log_divisors: Vec<u64>,
    pub sqrt_disc: u64,
    pub sqrt_disc_power: u32,
}

fn factor_small(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl Symbolic {
    pub fn rational(r: Rational) -> Self {
        Symbolic { rational: r, pi_power: 0, log_divisors: Vec::new(), sqrt_disc: 1, sqrt_disc_power: 0 }
    }

    pub fn new(rational: Rational, pi_power: u32, log_divisors: Vec<u64>, sqrt_disc: u64, sqrt_disc_power: u32) -> Self {
        let mut log_divisors = log_divisors;
        log_divisors.sort_unstable();
        Symbolic { rational, pi_power, log_divisors, sqrt_disc, sqrt_disc_power }
    }

    pub fn mul(&self, o: &Symbolic) -> Symbolic {
        let (d, p) = match (self.sqrt_disc_power, o.sqrt_disc_power) {
            (0, _) => (o.sqrt_disc, o.sqrt_disc_power),
            (_, 0) => (self.sqrt_disc, self.sqrt_disc_power),
            _ => {
                assert_eq!(self.sqrt_disc, o.sqrt_disc, "mixing discriminants");
                (self.sqrt_disc, self.sqrt_disc_power + o.sqrt_disc_power)
            }
        };
        let mut logs = self.log_divisors.clone();
        logs.extend(&o.log_divisors);
        Symbolic::new(&self.rational * &o.rational, self.pi_power + o.pi_power, logs, d, p)
    }

    pub fn scale(&self, r: &Rational) -> Symbolic {
        Symbolic { rational: &self.rational * r, ..self.clone() }
    }

    /// Canonical form: logarithms of primes only, and at most one square root
    /// of a squarefree radicand.
    pub fn canonical(&self) -> (Rational, u32, Vec<u64>, u64) {
        let mut r = self.rational.clone();
        let mut logs = Vec::new();
        for &n in &self.log_divisors {
            let f = factor_small(n);
            assert!(f.len() == 1, "log divisor {n} is not a prime power");
            r /= int(f[0].1 as i64);
            logs.push(f[0].0);
        }
        logs.sort_unstable();
        let mut radicand = 1u64;
        if self.sqrt_disc_power > 0 {
            let mut square = 1u64;
            let mut free = 1u64;
            for (p, k) in factor_small(self.sqrt_disc) {
                square *= p.pow(k / 2);
                if k % 2 == 1 {
                    free *= p;
                }
            }
            let pw = self.sqrt_disc_power;
            r /= pow(&from_u128(square as u128), pw);
            r /= pow(&from_u128(free as u128), pw / 2);
            if pw % 2 == 1 && free > 1 {
                radicand = free;
            }
        }
        (r, self.pi_power, logs, radicand)
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = to_f64(&self.rational) * PI.powi(self.pi_power as i32);
        for &l in &self.log_divisors {
            v /= (l as f64).ln();
        }
        v / (self.sqrt_disc as f64).sqrt().powi(self.sqrt_disc_power as i32)
    }

    pub fn decimal(&self) -> String {
        format_sig(self.to_f64(), 15)
    }
}

impl PartialEq for Symbolic {
    fn eq(&self, o: &Symbolic) -> bool {
        self.canonical() == o.canonical()
    }
}

impl fmt::Display for Symbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        if self.pi_power > 0 {
            write!(f, " * pi^{}", self.pi_power)?;
        }
        let mut den: Vec<String> = self.log_divisors.iter().map(|l| format!("log {l}")).collect();
        if self.sqrt_disc_power > 0 {
            den.push(format!("sqrt({})^{}", self.sqrt_disc, self.sqrt_disc_power));
        }
        if !den.is_empty() {
            write!(f, " / ({})", den.join(" * "))?;
        }
        Ok(())
    }
}

impl Serialize for Symbolic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Symbolic", 6)?;
        st.serialize_field("rational", &self.rational.to_string())?;
        st.serialize_field("pi_power", &self.pi_power)?;
        st.serialize_field("log_divisors", &self.log_divisors)?;
        st.serialize_field("sqrt_disc", &self.sqrt_disc)?;
        st.serialize_field("sqrt_disc_power", &self.sqrt_disc_power)?;
        st.serialize_field("decimal", &self.decimal())?;
        st.end()
    }
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

fn ipow(b: i64, e: u32) -> Rational {
    pow(&int(b), e)
}

/// `C_{R,n}`, the leading coefficient of the volume of monic real polynomials
/// of degree `n` with Mahler measure at most `T`.
pub fn chern_vaaler_real(n: u32) -> Rational {
    assert!(n >= 1);
    let m = (n - 1) / 2;
    let mut acc = ipow(2, n - m);
    for j in 1..=m {
        acc *= pow(&Rational::new((2 * j as i64).into(), (2 * j as i64 + 1).into()), n - 2 * j);
    }
    acc * ipow(n as i64, m) / factorial(m)
}

/// `C_{C,n} = pi^n n^n / (n!)^2`.
pub fn chern_vaaler_complex(n: u32) -> Symbolic {
    assert!(n >= 1);
    let f = factorial(n);
    Symbolic::new(ipow(n as i64, n) / (&f * &f), n, Vec::new(), 1, 0)
}

/// Leading coefficient `C_i` of `Vol{z : N~_i(z) <= T}`.
pub fn leading_volume(system: &DistanceSystem, complex: bool) -> Symbolic {
    let n = system.n;
    match (system.kind, complex) {
        (SystemKind::MaxNorm, false) => Symbolic::rational(ipow(2, n)),
        (SystemKind::MaxNorm, true) => Symbolic::new(Rational::one(), n, Vec::new(), 1, 0),
        (SystemKind::Mahler, false) => Symbolic::rational(chern_vaaler_real(n)),
        (SystemKind::Mahler, true) => chern_vaaler_complex(n),
    }
}

fn abs_disc(ps: &PlaceSet) -> u64 {
    ps.field.disc.unsigned_abs()
}

/// `B^{(n)}_{k,S}`.
pub fn constant_b(ps: &PlaceSet, n: u32) -> Symbolic {
    let k = &ps.field;
    let card = ps.cardinality() as u32;
    let mut r = ipow(n as i64, k.r + k.s - 1) * ipow(2, k.s * n) * ipow(k.m as i64, card - 1) / factorial(card - 1);
    let mut logs = Vec::new();
    for q in &ps.primes {
        let nn = from_u128((q.norm as u128).pow(n));
        r *= Rational::one() - Rational::one() / nn;
        logs.push(q.norm);
    }
    Symbolic::new(r, 0, logs, abs_disc(ps), n)
}

/// `V_{k,N} = n^q 2^{sn} / (q! sqrt|D|^n) prod_i C_i`.
pub fn volume_constant(ps: &PlaceSet, system: &DistanceSystem) -> Symbolic {
    let k = &ps.field;
    let n = system.n;
    let q = k.r + k.s - 1;
    let mut acc = Symbolic::new(ipow(n as i64, q) * ipow(2, k.s * n) / factorial(q), 0, Vec::new(), abs_disc(ps), n);
    for i in 0..k.arch_places() {
        acc = acc.mul(&leading_volume(system, k.arch_degree(i) == 2));
    }
    acc
}

/// `C_{N,k,S} = B^{(n)}_{k,S} prod_i C_i`.
pub fn main_coefficient(ps: &PlaceSet, system: &DistanceSystem) -> Symbolic {
    let mut acc = constant_b(ps, system.n);
    for i in 0..ps.field.arch_places() {
        acc = acc.mul(&leading_volume(system, ps.field.arch_degree(i) == 2));
    }
    acc
}

/// Coefficient of `H^{mn} (log H)^{|S|-1}` for points of `O_S^n`.
pub fn main_term_vectors_coefficient(ps: &PlaceSet, n: u32) -> Symbolic {
    let k = &ps.field;
    let lead = Symbolic::new(ipow(2, k.r * n), k.s * n, Vec::new(), 1, 0);
    lead.mul(&constant_b(ps, n))
}

/// Coefficient of `H^{m e^2} (log H)^{|S|-1}` for algebraic numbers of degree `e`.
pub fn main_term_algebraic_coefficient(ps: &PlaceSet, e: u32) -> Symbolic {
    let k = &ps.field;
    let mut acc = Symbolic::rational(ipow(e as i64, ps.cardinality() as u32) * pow(&chern_vaaler_real(e), k.r));
    for _ in 0..k.s {
        acc = acc.mul(&chern_vaaler_complex(e));
    }
    acc.mul(&constant_b(ps, e))
}

fn regime(h: f64) -> Result<()> {
    if h >= 2.0 {
        Ok(())
    } else {
        Err(Error::Regime(format!("main terms need H >= 2, got {h}")))
    }
}

pub fn main_term_vectors(ps: &PlaceSet, n: u32, h: f64) -> Result<f64> {
    regime(h)?;
    let c = main_term_vectors_coefficient(ps, n).to_f64();
    Ok(c * h.powi((ps.field.m * n) as i32) * h.ln().powi(ps.cardinality() as i32 - 1))
}

pub fn main_term_algebraic(ps: &PlaceSet, e: u32, h: f64) -> Result<f64> {
    regime(h)?;
    let c = main_term_algebraic_coefficient(ps, e).to_f64();
    Ok(c * h.powi((ps.field.m * e * e) as i32) * h.ln().powi(ps.cardinality() as i32 - 1))
}

/// Constants reported for a configuration.
#[derive(Clone, Debug)]
pub struct ConstantBundle {
    pub b: Symbolic,
    pub c_r: Vec<Symbolic>,
    pub c_c: Vec<Symbolic>,
    pub v: Symbolic,
    pub c_main: Symbolic,
}

impl Serialize for ConstantBundle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ConstantBundle", 5)?;
        st.serialize_field("B", &self.b)?;
        st.serialize_field("C_R", &self.c_r)?;
        st.serialize_field("C_C", &self.c_c)?;
        st.serialize_field("V", &self.v)?;
        st.serialize_field("C_main", &self.c_main)?;
        st.end()
    }
}

pub fn constant_bundle(ps: &PlaceSet, system: &DistanceSystem) -> ConstantBundle {
    ConstantBundle {
        b: constant_b(ps, system.n),
        c_r: (1..=system.n).map(|j| Symbolic::rational(chern_vaaler_real(j))).collect(),
        c_c: (1..=system.n).map(chern_vaaler_complex).collect(),
        v: volume_constant(ps, system),
        c_main: main_coefficient(ps, system),
    }
}

/// Polynomial with rational coefficients in the formal variables
/// `x_0 = log H` and `x_l = log N(p_l)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogPoly {
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

impl LogPoly {
    pub fn constant(vars: usize, c: Rational) -> Self {
        let mut p = LogPoly::default();
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    pub fn var(vars: usize, i: usize, c: Rational) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        let mut p = LogPoly::default();
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn add(&self, o: &LogPoly) -> LogPoly {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            let e = out.terms.entry(k.clone()).or_insert_with(Rational::zero);
            *e += v;
            if e.is_zero() {
                out.terms.remove(k);
            }
        }
        out
    }

    pub fn mul(&self, o: &LogPoly) -> LogPoly {
        let mut out = LogPoly::default();
        for (ka, va) in &self.terms {
            for (kb, vb) in &o.terms {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out = out.add(&LogPoly { terms: BTreeMap::from([(k, va * vb)]) });
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> LogPoly {
        if c.is_zero() {
            return LogPoly::default();
        }
        LogPoly { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// `self^{(k)}`: the power for `k > 0` and `1` otherwise.
    pub fn guarded_pow(&self, vars: usize, k: u32) -> LogPoly {
        let mut acc = LogPoly::constant(vars, Rational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(k, v)| to_f64(v) * k.iter().zip(x).map(|(&e, &xi)| xi.powi(e as i32)).product::<f64>())
            .sum()
    }
}

fn guarded_powf(x: f64, k: u32) -> f64 {
    if k == 0 {
        1.0
    } else {
        x.powi(k as i32)
    }
}

/// `(m log H - sum_l g_l log N(p_l))` as a [`LogPoly`].
fn log_quotient(ps: &PlaceSet, exps: &[u32]) -> LogPoly {
    let vars = ps.l() + 1;
    let mut p = LogPoly::var(vars, 0, int(ps.field.m as i64));
    for (l, &g) in exps.iter().enumerate() {
        p = p.add(&LogPoly::var(vars, l + 1, -int(g as i64)));
    }
    p
}

fn log_values(ps: &PlaceSet, h: &Rational) -> Vec<f64> {
    let mut x = vec![to_f64(h).ln()];
    x.extend(ps.primes.iter().map(|q| (q.norm as f64).ln()));
    x
}

#[derive(Clone, Debug, Serialize)]
pub struct LSumReport {
    pub ideals: usize,
    /// Value of the direct sum.
    pub direct: f64,
    /// `(prod F_l) (prod_{i=K+1}^{K+L} 1/i) (log H^m)^{(K+L)}`.
    pub leading: f64,
    pub ratio: f64,
    #[serde(skip)]
    pub exact: LogPoly,
}

fn psi_terms(ps: &PlaceSet, h: &Rational, k: u32, variant: u8, n: u32) -> (usize, LogPoly) {
    let vars = ps.l() + 1;
    let ideals = enumerate_ideals(ps, &pow(h, ps.field.m));
    let mut acc = LogPoly::default();
    for a in &ideals {
        let term = log_quotient(ps, &a.exps).guarded_pow(vars, k).scale(&psi(ps, a, n, variant));
        acc = acc.add(&term);
    }
    (ideals.len(), acc)
}

/// `L^{(h)}_S(H, K) = sum_{A in I_S(H^m)} Psi^{(h)}(A) (log(H^m / N(A)))^{(K)}`,
/// with `Psi` taken at exponent `n`.
pub fn l_sum(ps: &PlaceSet, h: &Rational, k: u32, variant: u8, n: u32) -> Result<LSumReport> {
    if *h < Rational::one() {
        return Err(Error::Config("H must be at least 1".into()));
    }
    let (ideals, exact) = psi_terms(ps, h, k, variant, n);
    let x = log_values(ps, h);
    let direct = exact.eval(&x);
    let mut lead = 1.0;
    for q in &ps.primes {
        let one = SIdeal::new(ps.primes.iter().map(|p| (p == q) as u32).collect());
        lead *= to_f64(&psi(ps, &one, n, variant)) / (q.norm as f64).ln();
    }
    let l = ps.l() as u32;
    for i in k + 1..=k + l {
        lead /= i as f64;
    }
    lead *= guarded_powf(ps.field.m as f64 * x[0], k + l);
    Ok(LSumReport { ideals, direct, leading: lead, ratio: direct / lead, exact })
}

/// Checks the decomposition of `L_S` over the last prime exactly: the double
/// sum over `B in I_{S'}(H^m)` and `g <= A(B)`, and its binomial expansion.
pub fn l_sum_recursion_holds(ps: &PlaceSet, h: &Rational, k: u32, variant: u8, n: u32) -> Result<bool> {
    let l = ps.l();
    if l == 0 {
        let x = ps.field.m;
        let (_, direct) = psi_terms(ps, h, k, variant, n);
        let want = LogPoly::var(1, 0, int(x as i64)).guarded_pow(1, k);
        return Ok(direct == want);
    }
    let vars = l + 1;
    let hm = pow(h, ps.field.m);
    let (_, direct) = psi_terms(ps, h, k, variant, n);
    let last = ps.primes[l - 1].clone();
    let sub = PlaceSet::new(ps.field.clone(), ps.primes[..l - 1].to_vec())?;
    let mut double = LogPoly::default();
    let mut expanded = LogPoly::default();
    let mut p_last = vec![0u32; l];
    p_last[l - 1] = 1;
    let psi_last = psi(ps, &SIdeal::new(p_last), n, variant);
    let lnl = LogPoly::var(vars, l, Rational::one());
    for b in enumerate_ideals(&sub, &hm) {
        let nb = from_u128(b.norm(&sub));
        let a = floor_log(last.norm as u128, &(&hm / &nb)).unwrap_or(0);
        let mut full = b.exps.clone();
        full.push(0);
        let base = log_quotient(ps, &full);
        for g in 0..=a {
            full[l - 1] = g;
            let t = log_quotient(ps, &full).guarded_pow(vars, k).scale(&psi(ps, &SIdeal::new(full.clone()), n, variant));
            double = double.add(&t);
        }
        // sum_i (-1)^i C(K,i) (log N_L)^i Psi(B) base^{(K-i)} sum_{g=1}^{A} g^i
        let psi_b = psi(&sub, &b, n, variant);
        for i in 0..=k {
            let faulhaber: BigInt = (1..=a as i64).map(|g| BigInt::from(g).pow(i)).sum();
            let c = int(if i % 2 == 0 { 1 } else { -1 }) * int(binomial(k, i) as i64) * Rational::from_integer(faulhaber);
            let term = lnl.guarded_pow(vars, i).mul(&base.guarded_pow(vars, k - i)).scale(&(&c * &psi_b * &psi_last));
            expanded = expanded.add(&term);
        }
    }
    let (_, sub_sum) = psi_terms(&sub, h, k, variant, n);
    // Lift the sub-sum into the variables of S (the last log is absent).
    let lifted = LogPoly {
        terms: sub_sum
            .terms
            .into_iter()
            .map(|(mut e, v)| {
                e.push(0);
                (e, v)
            })
            .collect(),
    };
    let expanded = expanded.add(&lifted);
    Ok(direct == double && direct == expanded)
}

#[derive(Clone, Debug, Serialize)]
pub struct Q0Report {
    /// Exact value when `m = 1`.
    pub exact: Option<String>,
    pub value: f64,
    /// `H (log H + 1)^{(L-1)}`.
    pub envelope: f64,
    pub ratio: f64,
}

/// `sum_{A in I_S(H^m)} Psi^{(2)}(A) N(A)^{1/m}`.
pub fn sum_q0(ps: &PlaceSet, h: &Rational, n: u32) -> Result<Q0Report> {
    if *h < Rational::one() {
        return Err(Error::Config("H must be at least 1".into()));
    }
    let m = ps.field.m;
    let mut exact = Rational::zero();
    let mut value = 0.0;
    for a in enumerate_ideals(ps, &pow(h, m)) {
        let p = psi(ps, &a, n, 2);
        let norm = a.norm(ps);
        if m == 1 {
            exact += &p * from_u128(norm);
        }
        value += to_f64(&p) * (norm as f64).powf(1.0 / m as f64);
    }
    let hf = to_f64(h);
    let envelope = hf * guarded_powf(hf.ln() + 1.0, ps.l().saturating_sub(1) as u32);
    let exact = (m == 1).then(|| exact.to_string());
    Ok(Q0Report { exact, value, envelope, ratio: value / envelope })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MonteCarlo {
    pub estimate: f64,
    pub std_err: f64,
    pub samples: u64,
}

/// Uniform sampling of a box, one ChaCha stream per sample index so the
/// estimate does not depend on how the samples are distributed over threads.
fn monte_carlo<F>(half_widths: &[f64], samples: u64, seed: u64, inside: F) -> Result<MonteCarlo>
where
    F: Fn(&[f64]) -> Result<bool> + Sync,
{
    let box_volume: f64 = half_widths.iter().map(|w| 2.0 * w).product();
    let hits: u64 = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let x: Vec<f64> = half_widths.iter().map(|w| (2.0 * rng.random::<f64>() - 1.0) * w).collect();
            inside(&x).map(u64::from)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let p = hits as f64 / samples as f64;
    Ok(MonteCarlo {
        estimate: box_volume * p,
        std_err: box_volume * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
    })
}

/// Monte-Carlo estimate of `Vol{z : N~(z) <= T}` at a single real or complex place.
pub fn place_volume(system: &DistanceSystem, complex: bool, t: f64, samples: u64, seed: u64) -> Result<MonteCarlo> {
    volume_estimate(system, if complex { (0, 1) } else { (1, 0) }, if complex { t * t } else { t }, samples, seed)
}

fn volume_estimate(system: &DistanceSystem, (r, s): (u32, u32), t: f64, samples: u64, seed: u64) -> Result<MonteCarlo> {
    if t < 1.0 {
        return Ok(MonteCarlo { estimate: 0.0, std_err: 0.0, samples });
    }
    let n = system.n;
    let places: Vec<u32> = std::iter::repeat_n(1, r as usize).chain(std::iter::repeat_n(2, s as usize)).collect();
    let mut widths = Vec::new();
    for &d in &places {
        for j in 1..=n {
            let w = system.coefficient_scale(j) * t.powf(1.0 / d as f64);
            for _ in 0..d {
                widths.push(w);
            }
        }
    }
    let sys = *system;
    monte_carlo(&widths, samples, seed, move |x| {
        let mut prod = 1.0;
        let mut at = 0;
        for &d in &places {
            let z: Vec<Complex64> = (0..n as usize)
                .map(|j| {
                    if d == 1 {
                        Complex64::new(x[at + j], 0.0)
                    } else {
                        Complex64::new(x[at + 2 * j], x[at + 2 * j + 1])
                    }
                })
                .collect();
            at += n as usize * d as usize;
            prod *= sys.tilde_n(&z)?.powi(d as i32);
            if prod > t {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

/// Exact `Vol Z(X)` for `Z(X) = {prod_i N~_i^{d_i} <= X}` where known.
pub fn exact_z_volume(system: &DistanceSystem, (r, s): (u32, u32), x: f64) -> Option<f64> {
    if x < 1.0 {
        return Some(0.0);
    }
    let n = system.n as i32;
    match (system.kind, r, s) {
        (_, 1, 0) => system.exact_volume(false, x),
        (_, 0, 1) => system.exact_volume(true, x.sqrt()),
        (SystemKind::MaxNorm, 2, 0) => Some(4f64.powi(n) * x.powi(n) * (1.0 + n as f64 * x.ln())),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeReport {
    pub t: f64,
    pub monte_carlo: MonteCarlo,
    /// `(n^q / q!) (prod C_i) T^n (log T)^{(q)}`.
    pub leading: f64,
    pub exact: Option<f64>,
    pub ratio_to_leading: f64,
}

/// Monte-Carlo volume of `Z(T) = {prod_i N~_i(x_i)^{d_i} <= T}` for the given
/// signature, compared with the leading term and, where known, the exact value.
pub fn volume_diagnostics(
    system: &DistanceSystem,
    signature: (u32, u32),
    t: f64,
    samples: u64,
    seed: u64,
) -> Result<VolumeReport> {
    let (r, s) = signature;
    if r + s == 0 {
        return Err(Error::Config("signature has no places".into()));
    }
    let mc = volume_estimate(system, signature, t, samples, seed)?;
    let q = r + s - 1;
    let mut c = 1.0;
    for i in 0..r + s {
        c *= leading_volume(system, i >= r).to_f64();
    }
    let n = system.n;
    let leading = if t < 1.0 {
        0.0
    } else {
        (n as f64).powi(q as i32) / to_f64(&factorial(q)) * c * t.powi(n as i32) * guarded_powf(t.ln(), q)
    };
    Ok(VolumeReport {
        t,
        monte_carlo: mc,
        leading,
        exact: exact_z_volume(system, signature, t),
        ratio_to_leading: mc.estimate / leading,
    })
}

/// Successive minima of the planar lattice spanned by `u, v` (Gauss reduction).
fn planar_minima(mut u: [f64; 2], mut v: [f64; 2]) -> (f64, f64) {
    let norm = |a: [f64; 2]| (a[0] * a[0] + a[1] * a[1]).sqrt();
    loop {
        if norm(u) > norm(v) {
            std::mem::swap(&mut u, &mut v);
        }
        let mu = ((u[0] * v[0] + u[1] * v[1]) / (u[0] * u[0] + u[1] * u[1])).round();
        let w = [v[0] - mu * u[0], v[1] - mu * u[1]];
        if mu == 0.0 || norm(w) >= norm(v) {
            return (norm(u), norm(v));
        }
        v = w;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DavenportRow {
    pub t: String,
    pub count: u128,
    pub volume_over_det: f64,
    pub error: f64,
    pub envelope: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DavenportReport {
    pub rows: Vec<DavenportRow>,
    pub sup: f64,
    pub ceiling: f64,
    pub holds: bool,
}

/// Compares `|Z(A, T)|` with `Vol Z(T^m) / det` for the max-norm system and
/// divides the error by `sum_{j<mn} V_j / (lambda_1 ... lambda_j)`, where
/// `V_j` is taken for the bounding box of the envelope.
pub fn davenport_diagnostic(
    ps: &PlaceSet,
    n: u32,
    ideal: &SIdeal,
    grid: &[Rational],
    ceiling: f64,
    opts: &EnumerationOptions,
) -> Result<DavenportReport> {
    let k = &ps.field;
    let system = DistanceSystem::max_norm(n);
    let norm = ideal.norm(ps) as f64;
    let det = ((2f64).powi(-(k.s as i32)) * (k.disc.unsigned_abs() as f64).sqrt() / norm).powi(n as i32);
    let lat = IdealLattice::inverse_of(ps, ideal);
    let minima: Vec<f64> = if k.is_rational() {
        vec![lat.hnf.a as f64 / lat.den as f64; n as usize]
    } else {
        let w = omega_embeddings(k);
        let embed = |x: f64, y: f64| -> [f64; 2] {
            let (x, y) = (x / lat.den as f64, y / lat.den as f64);
            if k.s > 0 {
                [x + y * w[0].re, y * w[0].im]
            } else {
                [x + y * w[0].re, x + y * w[1].re]
            }
        };
        let h = lat.hnf;
        let (l1, l2) = planar_minima(embed(h.a as f64, 0.0), embed(h.b as f64, h.c as f64));
        let mut v = vec![l1; n as usize];
        v.extend(vec![l2; n as usize]);
        v
    };
    let mut rows = Vec::new();
    for t in grid {
        let x = to_f64(&pow(t, k.m));
        let count = count_z(ps, &system, ideal, &pow(t, k.m), opts)?;
        let vol = exact_z_volume(&system, (k.r, k.s), x)
            .ok_or_else(|| Error::Config("no closed-form volume for this signature".into()))?;
        let main = vol / det;
        // Bounding box of the envelope: every coordinate at place i has
        // |x| <= X^{1/d_i}.
        let mut sides = Vec::new();
        for i in 0..k.arch_places() {
            let d = k.arch_degree(i);
            let w = 2.0 * x.powf(1.0 / d as f64);
            for _ in 0..(n * d) {
                sides.push(w);
            }
        }
        let dim = (k.m * n) as usize;
        let mut e = vec![0.0f64; dim + 1];
        e[0] = 1.0;
        for &sd in &sides {
            for j in (1..=dim).rev() {
                e[j] += e[j - 1] * sd;
            }
        }
        let mut envelope = 0.0;
        let mut lam = 1.0;
        for j in 0..dim {
            if j > 0 {
                lam *= minima[j - 1];
            }
            envelope += e[j] / lam;
        }
        let error = (count as f64 - main).abs();
        rows.push(DavenportRow {
            t: t.to_string(),
            count,
            volume_over_det: main,
            error,
            envelope,
            ratio: error / envelope,
        });
    }
    let sup = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(DavenportReport { rows, sup, ceiling, holds: sup.partial_cmp(&ceiling) != Some(Ordering::Greater) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::FieldDesc;
    use crate::rational::rat;

    #[test]
    fn chern_vaaler_examples() {
        assert_eq!(chern_vaaler_real(1), int(2));
        assert_eq!(chern_vaaler_real(2), int(4));
        assert_eq!(chern_vaaler_real(3), int(8));
        assert_eq!(chern_vaaler_complex(1), Symbolic::new(int(1), 1, vec![], 1, 0));
        assert_eq!(chern_vaaler_complex(2), Symbolic::new(int(1), 2, vec![], 1, 0));
        assert_eq!(chern_vaaler_complex(3), Symbolic::new(rat(3, 4), 3, vec![], 1, 0));
    }

    #[test]
    fn b_for_rational_fields() {
        let z = PlaceSet::rational(&[]).unwrap();
        for n in 1..4 {
            assert_eq!(constant_b(&z, n), Symbolic::rational(int(1)));
        }
        let z5 = PlaceSet::rational(&[5]).unwrap();
        assert_eq!(constant_b(&z5, 2), Symbolic::new(rat(24, 25), 0, vec![5], 1, 0));
    }

    #[test]
    fn symbolic_canonical_form() {
        // 1 / sqrt(12)^2 = 1/12 and 1 / log 4 = 1 / (2 log 2)
        let a = Symbolic::new(int(1), 0, vec![4], 12, 2);
        let b = Symbolic::new(rat(1, 24), 0, vec![2], 1, 0);
        assert_eq!(a, b);
        assert!((a.to_f64() - b.to_f64()).abs() < 1e-15);
        // sqrt(12)^3 = 24 sqrt 3
        let c = Symbolic::new(int(1), 0, vec![], 12, 3);
        assert_eq!(c, Symbolic::new(rat(1, 8), 0, vec![], 3, 3));
    }

    #[test]
    fn main_terms() {
        let z = PlaceSet::rational(&[]).unwrap();
        assert_eq!(main_term_algebraic_coefficient(&z, 1), Symbolic::rational(int(2)));
        assert_eq!(main_term_algebraic_coefficient(&z, 2), Symbolic::rational(int(8)));
        assert!((main_term_vectors(&z, 1, 10.0).unwrap() - 20.0).abs() < 1e-12);
        assert!(matches!(main_term_vectors(&z, 1, 1.5), Err(Error::Regime(_))));
        let k = FieldDesc::quadratic(-1).unwrap();
        let g = PlaceSet::archimedean(k);
        // pi / 2 H^2 for Gaussian integers: B = 2 / 2
        assert_eq!(main_term_vectors_coefficient(&g, 1), Symbolic::new(int(1), 1, vec![], 1, 0));
    }

    #[test]
    fn l_sums() {
        let z = PlaceSet::rational(&[]).unwrap();
        let r = l_sum(&z, &int(100), 2, 1, 1).unwrap();
        assert!((r.direct - 100f64.ln().powi(2)).abs() < 1e-9);
        let z2 = PlaceSet::rational(&[2]).unwrap();
        let h = int(1 << 20);
        let r = l_sum(&z2, &h, 0, 1, 1).unwrap();
        assert_eq!(r.ideals, 21);
        assert!((r.direct - 11.0).abs() < 1e-12);
        assert!((r.ratio - 1.1).abs() < 1e-12);
        let r2 = l_sum(&z2, &h, 0, 2, 1).unwrap();
        assert!(r2.direct >= r.direct);
        for e in 0..=10 {
            for k in 0..3 {
                assert!(l_sum_recursion_holds(&z2, &int(1 << e), k, 1, 1).unwrap());
            }
        }
        let z23 = PlaceSet::rational(&[2, 3]).unwrap();
        assert!(l_sum_recursion_holds(&z23, &int(500), 2, 2, 2).unwrap());
    }

    #[test]
    fn q0_sums() {
        let z = PlaceSet::rational(&[]).unwrap();
        assert_eq!(sum_q0(&z, &int(50), 1).unwrap().exact.as_deref(), Some("1"));
        let z2 = PlaceSet::rational(&[2]).unwrap();
        let r = sum_q0(&z2, &int(1024), 1).unwrap();
        assert_eq!(r.exact.as_deref(), Some("3070"));
        let a = sum_q0(&z2, &int(100), 1).unwrap().value;
        let b = sum_q0(&z2, &int(200), 1).unwrap().value;
        assert!(a <= b);
    }

    #[test]
    fn volumes() {
        let sys = DistanceSystem::max_norm(1);
        assert_eq!(exact_z_volume(&sys, (1, 0), 7.0), Some(14.0));
        let r = volume_diagnostics(&sys, (1, 0), 0.5, 10_000, 0).unwrap();
        assert_eq!(r.monte_carlo.estimate, 0.0);
        let r = volume_diagnostics(&DistanceSystem::max_norm(2), (2, 0), 20.0, 20_000, 3).unwrap();
        let exact = r.exact.unwrap();
        assert!((r.monte_carlo.estimate - exact).abs() < 5.0 * r.monte_carlo.std_err);
    }
}
