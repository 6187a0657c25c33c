//! Exact arithmetic in `Q` and `Q(sqrt d)`, prime splitting, and the monoid of
//! ideals supported on a finite set of primes.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::{Hnf, IdealLattice};
use crate::rational::{from_u128, int, Rational};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Rational,
    Quadratic,
}

/// Generator of the ring of integers as a Z-module together with `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Omega {
    Rational,
    /// `omega = sqrt d`, used when `d` is 2 or 3 mod 4.
    Sqrt(i64),
    /// `omega = (1 + sqrt d) / 2`, used when `d` is 1 mod 4.
    Half(i64),
}

impl Omega {
    /// `(t, n)` with `omega^2 = t omega - n`.
    pub fn min_poly(self) -> (i64, i64) {
        match self {
            Omega::Rational => (0, 0),
            Omega::Sqrt(d) => (0, -d),
            Omega::Half(d) => (1, (1 - d) / 4),
        }
    }

    pub fn d(self) -> Option<i64> {
        match self {
            Omega::Rational => None,
            Omega::Sqrt(d) | Omega::Half(d) => Some(d),
        }
    }

    /// The residue `c'` with `conj(p) = (p, omega - c')` when `p = (p, omega - c)`.
    pub fn conjugate_residue(self, c: i128, p: i128) -> i128 {
        let (t, _) = self.min_poly();
        (t as i128 - c).rem_euclid(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    pub kind: FieldKind,
    pub d: Option<i64>,
    pub m: u32,
    pub r: u32,
    pub s: u32,
    pub disc: i64,
    pub omega: Omega,
}

fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

fn pow_mod(mut b: u128, mut e: u128, p: u128) -> u128 {
    let mut acc = 1u128;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
fn sqrt_mod(a: u128, p: u128) -> u128 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u128;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    r
}

impl FieldDesc {
    pub fn rational() -> FieldDesc {
        FieldDesc {
            kind: FieldKind::Rational,
            d: None,
            m: 1,
            r: 1,
            s: 0,
            disc: 1,
            omega: Omega::Rational,
        }
    }

    pub fn quadratic(d: i64) -> Result<FieldDesc> {
        if d == 0 || d == 1 {
            return Err(Error::InvalidField(format!("d = {d} does not define a quadratic field")));
        }
        if !is_squarefree(d) {
            return Err(Error::InvalidField(format!("d = {d} is not squarefree")));
        }
        let one_mod_four = d.rem_euclid(4) == 1;
        let (r, s) = if d > 0 { (2, 0) } else { (0, 1) };
        Ok(FieldDesc {
            kind: FieldKind::Quadratic,
            d: Some(d),
            m: 2,
            r,
            s,
            disc: if one_mod_four { d } else { 4 * d },
            omega: if one_mod_four { Omega::Half(d) } else { Omega::Sqrt(d) },
        })
    }

    pub fn make(kind: FieldKind, d: Option<i64>) -> Result<FieldDesc> {
        match (kind, d) {
            (FieldKind::Rational, _) => Ok(FieldDesc::rational()),
            (FieldKind::Quadratic, Some(d)) => FieldDesc::quadratic(d),
            (FieldKind::Quadratic, None) => {
                Err(Error::InvalidField("quadratic field needs d".into()))
            }
        }
    }

    pub fn is_rational(&self) -> bool {
        self.kind == FieldKind::Rational
    }

    /// Number of archimedean places, `r + s`.
    pub fn arch_places(&self) -> usize {
        (self.r + self.s) as usize
    }

    /// Local degree `d_i` of the `i`-th archimedean place (real places first).
    pub fn arch_degree(&self, i: usize) -> u32 {
        if i < self.r as usize {
            1
        } else {
            2
        }
    }

    /// All primes of `O_k` above the rational prime `p`.
    pub fn factor_rational_prime(&self, p: u64) -> Result<Vec<FinitePrime>> {
        if !is_prime(p) {
            return Err(Error::InvalidPrime(format!("{p} is not prime")));
        }
        if self.is_rational() {
            return Ok(vec![FinitePrime {
                p,
                splitting: Splitting::Rational,
                residue: None,
                residue_degree: 1,
                ramification: 1,
                norm: p,
                local_degree: 1,
            }]);
        }
        let (t, n) = self.omega.min_poly();
        let pi = p as i128;
        let roots: Vec<i64> = if p == 2 {
            (0..2i128)
                .filter(|x| (x * x - t as i128 * x + n as i128).rem_euclid(2) == 0)
                .map(|x| x as i64)
                .collect()
        } else {
            // Roots of X^2 - tX + n are (t +- sqrt(t^2 - 4n)) / 2.
            let delta = (t as i128 * t as i128 - 4 * n as i128).rem_euclid(pi) as u128;
            let p128 = p as u128;
            let half = p128.div_ceil(2);
            if delta == 0 {
                vec![(t as i128).rem_euclid(pi) as u128 * half % p128]
                    .into_iter()
                    .map(|x| x as i64)
                    .collect()
            } else if pow_mod(delta, (p128 - 1) / 2, p128) == 1 {
                let s = sqrt_mod(delta, p128);
                let tt = (t as i128).rem_euclid(pi) as u128;
                let mut v = vec![
                    (tt + s) % p128 * half % p128,
                    (tt + p128 - s) % p128 * half % p128,
                ];
                v.sort_unstable();
                v.into_iter().map(|x| x as i64).collect()
            } else {
                vec![]
            }
        };
        let ramified = self.disc.rem_euclid(p as i64) == 0;
        Ok(match (ramified, roots.len()) {
            (true, _) => vec![FinitePrime {
                p,
                splitting: Splitting::Ramified,
                residue: Some(roots[0]),
                residue_degree: 1,
                ramification: 2,
                norm: p,
                local_degree: 2,
            }],
            (false, 2) => roots
                .into_iter()
                .map(|c| FinitePrime {
                    p,
                    splitting: Splitting::Split,
                    residue: Some(c),
                    residue_degree: 1,
                    ramification: 1,
                    norm: p,
                    local_degree: 1,
                })
                .collect(),
            _ => vec![FinitePrime {
                p,
                splitting: Splitting::Inert,
                residue: None,
                residue_degree: 2,
                ramification: 1,
                norm: p * p,
                local_degree: 2,
            }],
        })
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            None => write!(f, "Q"),
            Some(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

/// An element `a + b omega` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub a: Rational,
    pub b: Rational,
    pub omega: Omega,
}

impl FieldElement {
    pub fn new(omega: Omega, a: Rational, b: Rational) -> Self {
        debug_assert!(omega != Omega::Rational || b.is_zero());
        FieldElement { a, b, omega }
    }

    pub fn from_rational(omega: Omega, a: Rational) -> Self {
        FieldElement { a, b: Rational::zero(), omega }
    }

    pub fn from_int(omega: Omega, a: i64) -> Self {
        Self::from_rational(omega, int(a))
    }

    /// `(x + y omega) / den` with integer coordinates.
    pub fn from_coords(omega: Omega, x: i128, y: i128, den: i128) -> Self {
        let den = BigInt::from(den);
        FieldElement {
            a: Rational::new(BigInt::from(x), den.clone()),
            b: Rational::new(BigInt::from(y), den),
            omega,
        }
    }

    pub fn zero(omega: Omega) -> Self {
        Self::from_int(omega, 0)
    }

    pub fn one(omega: Omega) -> Self {
        Self::from_int(omega, 1)
    }

    pub fn omega(omega: Omega) -> Self {
        FieldElement { a: Rational::zero(), b: Rational::one(), omega }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        match self.omega {
            Omega::Rational => self.clone(),
            Omega::Sqrt(_) => FieldElement { a: self.a.clone(), b: -&self.b, omega: self.omega },
            Omega::Half(_) => FieldElement {
                a: &self.a + &self.b,
                b: -&self.b,
                omega: self.omega,
            },
        }
    }

    pub fn norm(&self) -> Rational {
        let (t, n) = self.omega.min_poly();
        &self.a * &self.a + &self.a * &self.b * int(t) + &self.b * &self.b * int(n)
    }

    pub fn trace(&self) -> Rational {
        let (t, _) = self.omega.min_poly();
        &self.a * int(2) + &self.b * int(t)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InfiniteValuation);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(FieldElement { a: c.a / &n, b: c.b / n, omega: self.omega })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.omega);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Common denominator form `(x, y, den)` with `den > 0` minimal.
    pub fn integral_repr(&self) -> (BigInt, BigInt, BigInt) {
        let den = self.a.denom().lcm(self.b.denom());
        let x = self.a.numer() * (&den / self.a.denom());
        let y = self.b.numer() * (&den / self.b.denom());
        (x, y, den)
    }

    /// Whether the element lies in `O_k`.
    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// `sqrt d`-coordinates `(p, q)` with the element equal to `p + q sqrt d`.
    pub fn sqrt_coords(&self) -> (Rational, Rational) {
        match self.omega {
            Omega::Rational | Omega::Sqrt(_) => (self.a.clone(), self.b.clone()),
            Omega::Half(_) => {
                let half = Rational::new(BigInt::one(), BigInt::from(2));
                (&self.a + &self.b * &half, &self.b * half)
            }
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let w = match self.omega {
            Omega::Sqrt(d) => format!("sqrt({d})"),
            Omega::Half(d) => format!("(1+sqrt({d}))/2"),
            Omega::Rational => unreachable!(),
        };
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(f, "{} {} {}*{}", self.a, sign, self.b.abs(), w)
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement { a: &self.a + &o.a, b: &self.b + &o.b, omega: self.omega }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement { a: &self.a - &o.a, b: &self.b - &o.b, omega: self.omega }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        let (t, n) = self.omega.min_poly();
        let bb = &self.b * &o.b;
        FieldElement {
            a: &self.a * &o.a - &bb * int(n),
            b: &self.a * &o.b + &o.a * &self.b + bb * int(t),
            omega: self.omega,
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { a: -&self.a, b: -&self.b, omega: self.omega }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $f(self, o: FieldElement) -> FieldElement {
                (&self).$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    /// A prime of `Q` itself.
    Rational,
    Split,
    Inert,
    Ramified,
}

/// A prime ideal of `O_k`. For split and ramified primes it is
/// `(p, omega - residue)`; inert primes are `(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePrime {
    pub p: u64,
    pub splitting: Splitting,
    pub residue: Option<i64>,
    pub residue_degree: u32,
    pub ramification: u32,
    /// `N(p) = p^residue_degree`.
    pub norm: u64,
    /// `d_v = [k_v : Q_p] = ramification * residue_degree`.
    pub local_degree: u32,
}

impl fmt::Display for FinitePrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.residue {
            Some(c) => write!(f, "({}, w-{})", self.p, c),
            None => write!(f, "({})", self.p),
        }
    }
}

/// The set `S`: all archimedean places plus finitely many primes, sorted by
/// `(p, residue)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceSet {
    pub field: FieldDesc,
    pub primes: Vec<FinitePrime>,
}

impl PlaceSet {
    pub fn new(field: FieldDesc, mut primes: Vec<FinitePrime>) -> Result<PlaceSet> {
        primes.sort_by_key(|q| (q.p, q.residue));
        for w in primes.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidPrime(format!("duplicate prime {}", w[0])));
            }
        }
        Ok(PlaceSet { field, primes })
    }

    pub fn archimedean(field: FieldDesc) -> PlaceSet {
        PlaceSet { field, primes: Vec::new() }
    }

    /// Convenience constructor over `Q`.
    pub fn rational(primes: &[u64]) -> Result<PlaceSet> {
        let k = FieldDesc::rational();
        let mut ps = Vec::new();
        for &p in primes {
            ps.extend(k.factor_rational_prime(p)?);
        }
        PlaceSet::new(k, ps)
    }

    /// Number of finite primes `L`.
    pub fn l(&self) -> usize {
        self.primes.len()
    }

    /// `|S| = r + s + L`.
    pub fn cardinality(&self) -> usize {
        self.field.arch_places() + self.l()
    }

    pub fn norms(&self) -> Vec<u64> {
        self.primes.iter().map(|q| q.norm).collect()
    }

    pub fn unit_ideal(&self) -> SIdeal {
        SIdeal { exps: vec![0; self.l()] }
    }

    pub fn from_config(cfg: &FieldConfig) -> Result<PlaceSet> {
        let field = FieldDesc::make(cfg.field.kind, cfg.field.d)?;
        let mut primes = Vec::new();
        for spec in &cfg.s_primes {
            let above = field.factor_rational_prime(spec.p)?;
            let chosen = match (above.len(), spec.residue) {
                (1, None) => above[0].clone(),
                (1, Some(c)) => {
                    let q = &above[0];
                    match q.residue {
                        Some(r) if r == c.rem_euclid(spec.p as i64) => q.clone(),
                        Some(r) => {
                            return Err(Error::InvalidPrime(format!(
                                "residue {c} does not define a prime above {}; expected {r}",
                                spec.p
                            )))
                        }
                        // The residue is meaningless for inert primes and over Q.
                        None => q.clone(),
                    }
                }
                (_, None) => {
                    return Err(Error::InvalidPrime(format!(
                        "{} splits in {}; a residue is required (one of {})",
                        spec.p,
                        field,
                        above
                            .iter()
                            .map(|q| q.residue.unwrap_or(0).to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    )))
                }
                (_, Some(c)) => {
                    let c = c.rem_euclid(spec.p as i64);
                    above.into_iter().find(|q| q.residue == Some(c)).ok_or_else(|| {
                        Error::InvalidPrime(format!(
                            "residue {c} is not a root of the minimal polynomial mod {}",
                            spec.p
                        ))
                    })?
                }
            };
            primes.push(chosen);
        }
        PlaceSet::new(field, primes)
    }
}

/// An ideal `prod p_l^{g_l}` of the monoid generated by the primes of `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SIdeal {
    pub exps: Vec<u32>,
}

impl SIdeal {
    pub fn new(exps: Vec<u32>) -> Self {
        SIdeal { exps }
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&g| g == 0)
    }

    pub fn norm(&self, ps: &PlaceSet) -> u128 {
        self.norm_checked(ps).expect("ideal norm fits in 128 bits")
    }

    pub fn norm_checked(&self, ps: &PlaceSet) -> Option<u128> {
        let mut acc: u128 = 1;
        for (q, &g) in ps.primes.iter().zip(&self.exps) {
            acc = acc.checked_mul((q.norm as u128).checked_pow(g)?)?;
        }
        Some(acc)
    }

    pub fn divides(&self, other: &SIdeal) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &SIdeal) -> SIdeal {
        SIdeal { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }

    /// `self / other`, assuming `other | self`.
    pub fn quotient(&self, other: &SIdeal) -> SIdeal {
        debug_assert!(other.divides(self));
        SIdeal { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect() }
    }

    pub fn prime_factor_count(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// All divisors, in lexicographic order of exponent vectors.
    pub fn divisors(&self) -> Vec<SIdeal> {
        let mut out = vec![SIdeal { exps: Vec::with_capacity(self.exps.len()) }];
        for &g in &self.exps {
            out = out
                .into_iter()
                .flat_map(|d| {
                    (0..=g).map(move |h| {
                        let mut e = d.exps.clone();
                        e.push(h);
                        SIdeal { exps: e }
                    })
                })
                .collect();
        }
        out
    }

    /// Squarefree divisors, the only ones with non-zero Möbius value.
    pub fn squarefree_divisors(&self) -> Vec<SIdeal> {
        let support = SIdeal { exps: self.exps.iter().map(|&g| g.min(1)).collect() };
        support.divisors()
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.exps.iter().map(|g| g.to_string()).collect();
        format!("[{}]", parts.join(";"))
    }
}

pub fn moebius(ideal: &SIdeal) -> i32 {
    if ideal.exps.iter().any(|&g| g >= 2) {
        0
    } else if ideal.prime_factor_count().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `Psi^(1)(A) = sum_{B | A} mu(B) / N(B)^n`, and `Psi^(2)` with `|mu|`.
pub fn psi(ps: &PlaceSet, ideal: &SIdeal, n: u32, h: u8) -> Rational {
    assert!(h == 1 || h == 2, "Psi variant is 1 or 2");
    let mut acc = Rational::one();
    for (q, &g) in ps.primes.iter().zip(&ideal.exps) {
        if g > 0 {
            let term = Rational::one() / from_u128((q.norm as u128).pow(n));
            acc *= if h == 1 { Rational::one() - term } else { Rational::one() + term };
        }
    }
    acc
}

/// All `A` in the monoid with `N(A) <= t`, sorted by norm and then by exponent
/// vector.
pub fn enumerate_ideals(ps: &PlaceSet, t: &Rational) -> Vec<SIdeal> {
    if *t < Rational::one() {
        return Vec::new();
    }
    let bound = t.floor().to_integer();
    let mut out = Vec::new();
    let mut exps = vec![0u32; ps.l()];
    fn rec(
        ps: &PlaceSet,
        bound: &BigInt,
        idx: usize,
        norm: BigInt,
        exps: &mut Vec<u32>,
        out: &mut Vec<(BigInt, SIdeal)>,
    ) {
        if idx == ps.l() {
            out.push((norm, SIdeal { exps: exps.clone() }));
            return;
        }
        let q = BigInt::from(ps.primes[idx].norm);
        let mut cur = norm;
        let mut g = 0;
        while cur <= *bound {
            exps[idx] = g;
            rec(ps, bound, idx + 1, cur.clone(), exps, out);
            cur *= &q;
            g += 1;
        }
        exps[idx] = 0;
    }
    rec(ps, &bound, 0, BigInt::one(), &mut exps, &mut out);
    out.sort();
    out.into_iter().map(|(_, a)| a).collect()
}

/// A Z-basis of `A^{-1}` over the integral basis `(1, omega)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealModuleBasis {
    pub lattice: IdealLattice,
    pub omega: Omega,
}

impl IdealModuleBasis {
    pub fn basis(&self) -> Vec<FieldElement> {
        let IdealLattice { hnf, den } = self.lattice;
        if self.omega == Omega::Rational {
            return vec![FieldElement::from_coords(self.omega, hnf.a, 0, den)];
        }
        vec![
            FieldElement::from_coords(self.omega, hnf.a, 0, den),
            FieldElement::from_coords(self.omega, hnf.b, hnf.c, den),
        ]
    }

    /// Determinant relative to the basis `(1, omega)` of `O_k`.
    pub fn det(&self) -> Rational {
        let Hnf { a, c, .. } = self.lattice.hnf;
        let den = BigInt::from(self.lattice.den);
        if self.omega == Omega::Rational {
            Rational::new(BigInt::from(a), den)
        } else {
            Rational::new(BigInt::from(a * c), &den * &den)
        }
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        let (xn, yn, den) = x.integral_repr();
        let l = BigInt::from(self.lattice.den);
        let (sx, sy) = (xn * &l, yn * &l);
        if !(&sx % &den).is_zero() || !(&sy % &den).is_zero() {
            return false;
        }
        let (sx, sy) = (sx / &den, sy / &den);
        let Hnf { a, b, c } = self.lattice.hnf;
        if self.omega == Omega::Rational {
            return sy.is_zero() && (sx % BigInt::from(a)).is_zero();
        }
        if !(&sy % BigInt::from(c)).is_zero() {
            return false;
        }
        let v = sy / BigInt::from(c);
        ((sx - v * BigInt::from(b)) % BigInt::from(a)).is_zero()
    }
}

pub fn inverse_ideal_basis(ps: &PlaceSet, ideal: &SIdeal) -> IdealModuleBasis {
    IdealModuleBasis { lattice: IdealLattice::inverse_of(ps, ideal), omega: ps.field.omega }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub kind: FieldKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSpec {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<i64>,
}

/// JSON form: `{"field": {"kind": "quadratic", "d": 3}, "s_primes": [{"p": 2, "residue": 1}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub field: FieldSpec,
    #[serde(default)]
    pub s_primes: Vec<PrimeSpec>,
}

impl FieldConfig {
    pub fn from_json(text: &str) -> Result<FieldConfig> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn placeset(&self) -> Result<PlaceSet> {
        PlaceSet::from_config(self)
    }
}
