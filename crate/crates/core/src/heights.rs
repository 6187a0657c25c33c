//! Absolute values and the absolute multiplicative Weil height.
//!
//! A finite place `v` above `p` is normalised by
//! `|alpha|_v = N(p_v)^(-ord(alpha) / d_v)` with `d_v = [k_v : Q_p]`, so at a
//! ramified prime of a quadratic field `d_v = 2` while `N(p_v) = p`.
//! For points over fields of degree at most two, `H^m` is an element of
//! `Q(sqrt |d|)` and is computed exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numberfield::{FieldDesc, FieldElement, FinitePrime, Omega, Splitting};
use crate::quadreal::QuadReal;
use crate::rational::{from_u128, to_f64, to_i128, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// Archimedean place by index; real places come first and the first real
    /// embedding sends `sqrt d` to the positive root.
    Arch(usize),
    Finite(FinitePrime),
}

/// `|alpha|_v` kept exactly as `|alpha|_v^{d_v}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceValue {
    pub place: Place,
    pub local_degree: u32,
    /// Exact `|alpha|_v^{d_v}`; for finite places this is `N(p)^(-ord)`.
    pub pow_dv: QuadReal,
    /// `ord_p(alpha)` for finite places; `None` for archimedean places and for zero.
    pub ord: Option<i64>,
}

impl PlaceValue {
    pub fn value(&self) -> f64 {
        self.pow_dv.to_f64().max(0.0).powf(1.0 / self.local_degree as f64)
    }
}

/// `H(a)` together with the exact quantities it is built from.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightValue {
    /// Exact `H^m` when the height comes from a point of `k^n`.
    pub pow_m: Option<QuadReal>,
    pub m: u32,
    /// `prod_{v finite} max_u(1, |a_u|_v)^{d_v}`, the norm of the denominator ideal.
    pub finite_part: Rational,
    pub value: f64,
    /// Certified relative error of `value`; zero up to rendering when `pow_m` is known.
    pub rel_err: f64,
}

impl HeightValue {
    fn from_pow(pow_m: QuadReal, m: u32, finite_part: Rational) -> Self {
        let value = pow_m.to_f64().powf(1.0 / m as f64);
        HeightValue { pow_m: Some(pow_m), m, finite_part, value, rel_err: 4.0 * f64::EPSILON }
    }

    /// Compares `H` with a rational bound; exact when `pow_m` is known,
    /// otherwise `None` unless the error bound separates the two.
    pub fn cmp_bound(&self, bound: &Rational) -> Option<Ordering> {
        if bound.is_negative() {
            return Some(Ordering::Greater);
        }
        match &self.pow_m {
            Some(p) => Some(p.cmp_rational(&crate::rational::pow(bound, self.m))),
            None => {
                let b = to_f64(bound);
                if self.value * (1.0 + self.rel_err) < b {
                    Some(Ordering::Less)
                } else if self.value * (1.0 - self.rel_err) > b {
                    Some(Ordering::Greater)
                } else {
                    None
                }
            }
        }
    }
}

/// Number of times the integral element `x + y omega` lies in `prime`.
pub(crate) fn ord_integral(omega: Omega, prime: &FinitePrime, x: i128, y: i128) -> u32 {
    debug_assert!(x != 0 || y != 0);
    let p = prime.p as i128;
    match prime.splitting {
        Splitting::Rational => {
            let mut x = x;
            let mut k = 0;
            while x % p == 0 {
                x /= p;
                k += 1;
            }
            k
        }
        Splitting::Inert => {
            let (mut x, mut y, mut k) = (x, y, 0);
            while x % p == 0 && y % p == 0 {
                x /= p;
                y /= p;
                k += 1;
            }
            k
        }
        Splitting::Split | Splitting::Ramified => {
            let c = prime.residue.expect("residue") as i128;
            // tau = omega - c' lies in conj(p) and has ord_p(tau) = 0 when p
            // splits, ord_p(tau) = 1 when p ramifies; either way tau * p is
            // contained in (p), so beta -> beta tau / p lowers ord_p by one.
            let cc = omega.conjugate_residue(c, p);
            let (mut x, mut y, mut k) = (x, y, 0);
            while (x + c * y).rem_euclid(p) == 0 {
                let (nx, ny) = crate::lattice::mul_coords(omega, (x, y), (-cc, 1));
                debug_assert!(nx % p == 0 && ny % p == 0);
                x = nx / p;
                y = ny / p;
                k += 1;
            }
            k
        }
    }
}

fn ord_rational_int(p: u64, n: &BigInt) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    k
}

/// `ord_p(alpha)`.
pub fn valuation(field: &FieldDesc, alpha: &FieldElement, prime: &FinitePrime) -> Result<i64> {
    if alpha.is_zero() {
        return Err(Error::InfiniteValuation);
    }
    let (x, y, den) = alpha.integral_repr();
    if field.is_rational() || y.is_zero() {
        return Ok((ord_rational_int(prime.p, &x) - ord_rational_int(prime.p, &den))
            * prime.ramification as i64);
    }
    // Strip the rational content first so the remaining coordinates stay small.
    let g = num_integer::Integer::gcd(&x, &y);
    let content_ord = ord_rational_int(prime.p, &g) * prime.ramification as i64;
    let pg = BigInt::from(prime.p).pow(ord_rational_int(prime.p, &g) as u32);
    let (xr, yr) = (to_i128(&(&x / &pg))?, to_i128(&(&y / &pg))?);
    let num_ord = ord_integral(field.omega, prime, xr, yr) as i64;
    let den_ord = ord_rational_int(prime.p, &den) * prime.ramification as i64;
    Ok(num_ord + content_ord - den_ord)
}

/// Image of `sqrt d` coordinates under the real embedding `i`.
fn real_embedding(alpha: &FieldElement, i: usize) -> QuadReal {
    let (p, q) = alpha.sqrt_coords();
    match alpha.omega {
        Omega::Rational => QuadReal::rational(p),
        Omega::Sqrt(d) | Omega::Half(d) => {
            let q = if i == 0 { q } else { -q };
            QuadReal::new(p, q, d)
        }
    }
}

/// Floating-point images of `omega` under the archimedean embeddings.
pub fn omega_embeddings(field: &FieldDesc) -> Vec<Complex64> {
    match field.omega {
        Omega::Rational => vec![Complex64::new(0.0, 0.0)],
        Omega::Sqrt(d) if d > 0 => {
            let s = (d as f64).sqrt();
            vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)]
        }
        Omega::Sqrt(d) => vec![Complex64::new(0.0, (-d as f64).sqrt())],
        Omega::Half(d) if d > 0 => {
            let s = (d as f64).sqrt();
            vec![Complex64::new((1.0 + s) / 2.0, 0.0), Complex64::new((1.0 - s) / 2.0, 0.0)]
        }
        Omega::Half(d) => vec![Complex64::new(0.5, (-d as f64).sqrt() / 2.0)],
    }
}

/// `sigma_i(alpha)` in floating point.
pub fn embed_f64(field: &FieldDesc, alpha: &FieldElement, i: usize) -> Complex64 {
    let w = omega_embeddings(field)[i];
    Complex64::new(to_f64(&alpha.a), 0.0) + w * to_f64(&alpha.b)
}

/// Exact `|sigma_i(alpha)|^{d_i}`.
pub fn arch_abs_pow(field: &FieldDesc, alpha: &FieldElement, i: usize) -> QuadReal {
    if field.s > 0 {
        QuadReal::rational(alpha.norm())
    } else {
        real_embedding(alpha, i).abs()
    }
}

pub fn abs_value(field: &FieldDesc, alpha: &FieldElement, place: &Place) -> PlaceValue {
    match place {
        Place::Arch(i) => PlaceValue {
            place: place.clone(),
            local_degree: field.arch_degree(*i),
            pow_dv: arch_abs_pow(field, alpha, *i),
            ord: None,
        },
        Place::Finite(prime) => {
            let (pow_dv, ord) = match valuation(field, alpha, prime) {
                Ok(ord) => {
                    let n = from_u128(prime.norm as u128);
                    let v = if ord >= 0 {
                        Rational::one() / crate::rational::pow(&n, ord as u32)
                    } else {
                        crate::rational::pow(&n, (-ord) as u32)
                    };
                    (QuadReal::rational(v), Some(ord))
                }
                Err(_) => (QuadReal::rational(Rational::zero()), None),
            };
            PlaceValue { place: place.clone(), local_degree: prime.local_degree, pow_dv, ord }
        }
    }
}

/// Rational primes dividing a positive integer, by trial division.
pub(crate) fn rational_prime_divisors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while BigInt::from(p) * BigInt::from(p) <= n {
        let bp = BigInt::from(p);
        if (&n % &bp).is_zero() {
            out.push(p);
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("prime factor fits in 64 bits"));
    }
    out
}

/// `g_l = max_u max(0, -ord_{p_l}(a_u))` for each listed prime.
pub fn denominator_exponents(
    field: &FieldDesc,
    primes: &[FinitePrime],
    point: &[FieldElement],
) -> Result<Vec<u32>> {
    primes
        .iter()
        .map(|q| {
            let mut g = 0i64;
            for a in point.iter().filter(|a| !a.is_zero()) {
                g = g.max(-valuation(field, a, q)?);
            }
            Ok(g as u32)
        })
        .collect()
}

/// `prod_{v finite} max_u(1, |a_u|_v)^{d_v}` over all primes of `k`.
pub fn finite_height_factor(field: &FieldDesc, point: &[FieldElement]) -> Result<Rational> {
    let mut den = BigInt::one();
    for a in point {
        let (_, _, d) = a.integral_repr();
        den = num_integer::Integer::lcm(&den, &d);
    }
    let mut acc = Rational::one();
    for p in rational_prime_divisors(&den) {
        let primes = field.factor_rational_prime(p)?;
        let exps = denominator_exponents(field, &primes, point)?;
        for (q, g) in primes.iter().zip(exps) {
            acc *= crate::rational::pow(&from_u128(q.norm as u128), g);
        }
    }
    Ok(acc)
}

/// `prod_i max(1, max_u |sigma_i a_u|)^{d_i}`, exactly.
pub fn arch_height_factor(field: &FieldDesc, point: &[FieldElement]) -> QuadReal {
    let one = QuadReal::one();
    if field.s > 0 {
        let mut best = one;
        for a in point {
            best = best.max(QuadReal::rational(a.norm()));
        }
        return best;
    }
    let mut acc = one.clone();
    for i in 0..field.arch_places() {
        let mut best = one.clone();
        for a in point {
            best = best.max(real_embedding(a, i).abs());
        }
        acc = acc.mul(&best);
    }
    acc
}

/// Absolute multiplicative Weil height of a point of `k^n`.
pub fn weil_height(field: &FieldDesc, point: &[FieldElement]) -> Result<HeightValue> {
    if point.is_empty() {
        return Err(Error::Config("height of an empty vector".into()));
    }
    let fin = finite_height_factor(field, point)?;
    let arch = arch_height_factor(field, point);
    Ok(HeightValue::from_pow(arch.scale(&fin), field.m, fin))
}

/// Product over the places `v` in the listed set of `|alpha|_v^{d_v}`:
/// all archimedean places and the primes above every `p` dividing `N(alpha)`
/// or its denominator. Equals one for every nonzero `alpha`.
pub fn product_formula(field: &FieldDesc, alpha: &FieldElement) -> Result<QuadReal> {
    if alpha.is_zero() {
        return Err(Error::InfiniteValuation);
    }
    let mut acc = QuadReal::one();
    for i in 0..field.arch_places() {
        acc = acc.mul(&arch_abs_pow(field, alpha, i));
    }
    let n = alpha.norm();
    let (_, _, den) = alpha.integral_repr();
    let mut support = rational_prime_divisors(n.numer());
    support.extend(rational_prime_divisors(n.denom()));
    support.extend(rational_prime_divisors(&den));
    support.sort_unstable();
    support.dedup();
    for p in support {
        for q in field.factor_rational_prime(p)? {
            acc = acc.mul(&abs_value(field, alpha, &Place::Finite(q)).pow_dv);
        }
    }
    Ok(acc)
}
