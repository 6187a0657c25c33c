//! Brute-force counting over `Q` and quadratic fields, written without the
//! library's ideal arithmetic: valuations come from norms, Hensel lifts and
//! coordinate gcds, and boundary cases are settled with exact arithmetic in
//! `Q(sqrt d)`.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use scount::{FieldConfig, PlaceSet};

pub type Q = BigRational;

pub fn q(n: i128) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i128, d: i128) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `Q` when `d == 1`, otherwise `Q(sqrt d)` with the usual ring of integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OField {
    pub d: i64,
}

impl OField {
    pub fn is_q(&self) -> bool {
        self.d == 1
    }

    pub fn half(&self) -> bool {
        !self.is_q() && self.d.rem_euclid(4) == 1
    }

    /// `omega^2 = t omega - nn`.
    pub fn t(&self) -> i128 {
        self.half() as i128
    }

    pub fn nn(&self) -> i128 {
        if self.half() {
            (1 - self.d as i128) / 4
        } else {
            -(self.d as i128)
        }
    }

    pub fn m(&self) -> u32 {
        if self.is_q() {
            1
        } else {
            2
        }
    }

    pub fn real(&self) -> bool {
        self.d > 0
    }

    pub fn abs_disc(&self) -> f64 {
        if self.is_q() {
            1.0
        } else if self.half() {
            self.d.unsigned_abs() as f64
        } else {
            4.0 * self.d.unsigned_abs() as f64
        }
    }

    /// Real embeddings of `omega` (equal entries for `Q`).
    fn omega_real(&self) -> [f64; 2] {
        let r = (self.d as f64).sqrt();
        if self.half() {
            [(1.0 + r) / 2.0, (1.0 - r) / 2.0]
        } else {
            [r, -r]
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Rational,
    Inert,
    Ramified,
    /// The prime `(p, omega - c)`.
    Split(i128),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OPrime {
    pub p: i128,
    pub kind: Kind,
    pub norm: u64,
    pub e: u32,
}

pub fn primes_above(k: OField, p: i128) -> Vec<OPrime> {
    if k.is_q() {
        return vec![OPrime { p, kind: Kind::Rational, norm: p as u64, e: 1 }];
    }
    let roots: Vec<i128> =
        (0..p).filter(|c| (c * c - k.t() * c + k.nn()).rem_euclid(p) == 0).collect();
    match roots.len() {
        0 => vec![OPrime { p, kind: Kind::Inert, norm: (p * p) as u64, e: 1 }],
        1 => vec![OPrime { p, kind: Kind::Ramified, norm: p as u64, e: 2 }],
        _ => roots.into_iter().map(|c| OPrime { p, kind: Kind::Split(c), norm: p as u64, e: 1 }).collect(),
    }
}

fn vp(mut x: i128, p: i128) -> i64 {
    assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn hensel(k: OField, c: i128, p: i128, digits: u32) -> i128 {
    let fprime = (2 * c - k.t()).rem_euclid(p);
    let inv = (1..p).find(|u| (u * fprime) % p == 1).expect("split prime is unramified");
    let mut c = c;
    let mut modulus = p;
    for _ in 1..digits {
        modulus *= p;
        let f = (c * c - k.t() * c + k.nn()).rem_euclid(modulus);
        c = (c - f * inv).rem_euclid(modulus);
    }
    c
}

/// Valuation of the nonzero integral element `x + y omega` at `q`.
pub fn valuation_integral(k: OField, q: &OPrime, x: i128, y: i128) -> i64 {
    let p = q.p;
    match q.kind {
        Kind::Rational => vp(x, p),
        Kind::Inert => match (x, y) {
            (0, y) => vp(y, p),
            (x, 0) => vp(x, p),
            (x, y) => vp(x, p).min(vp(y, p)),
        },
        Kind::Ramified => vp(x * x + k.t() * x * y + k.nn() * y * y, p),
        Kind::Split(c) => {
            let norm = x * x + k.t() * x * y + k.nn() * y * y;
            let digits = vp(norm, p) as u32 + 1;
            let modulus = p.pow(digits);
            let ck = hensel(k, c, p, digits);
            let r = (x + y * ck).rem_euclid(modulus);
            if r == 0 {
                digits as i64
            } else {
                vp(r, p)
            }
        }
    }
}

/// An element `(x + y omega) / den` of the field.
#[derive(Clone, Debug)]
pub struct OElem {
    pub x: i128,
    pub y: i128,
    pub den: i128,
    /// `r + s sqrt d`.
    pub r: Q,
    pub s: Q,
    /// `|sigma_i(a)|^{d_i}` per archimedean place.
    pub place: [f64; 2],
    /// `max(0, -ord_q(a))` for each prime of `S`.
    pub exps: Vec<u32>,
}

/// The configuration `(field, S)` in the oracle's own terms.
#[derive(Clone, Debug)]
pub struct OConfig {
    pub field: OField,
    pub s: Vec<OPrime>,
}

impl OConfig {
    /// `primes` are `(p, residue)` with the residue choosing a split prime.
    pub fn new(d: i64, primes: &[(i128, Option<i128>)]) -> Self {
        let field = OField { d };
        let mut s = Vec::new();
        for &(p, c) in primes {
            let above = primes_above(field, p);
            let chosen = match c {
                Some(c) => *above.iter().find(|q| q.kind == Kind::Split(c.rem_euclid(p))).unwrap_or(&above[0]),
                None => above[0],
            };
            s.push(chosen);
        }
        s.sort_by_key(|q| (q.p, if let Kind::Split(c) = q.kind { c } else { -1 }));
        OConfig { field, s }
    }

    pub fn places(&self) -> usize {
        if self.field.is_q() || !self.field.real() {
            1
        } else {
            2
        }
    }

    pub fn json(&self) -> String {
        let field = if self.field.is_q() {
            r#"{"kind": "rational"}"#.to_string()
        } else {
            format!(r#"{{"kind": "quadratic", "d": {}}}"#, self.field.d)
        };
        let primes: Vec<String> = self
            .s
            .iter()
            .map(|q| match q.kind {
                Kind::Split(c) => format!(r#"{{"p": {}, "residue": {}}}"#, q.p, c),
                _ => format!(r#"{{"p": {}}}"#, q.p),
            })
            .collect();
        format!(r#"{{"field": {field}, "s_primes": [{}]}}"#, primes.join(", "))
    }

    pub fn placeset(&self) -> PlaceSet {
        FieldConfig::from_json(&self.json()).unwrap().placeset().unwrap()
    }

    pub fn describe(&self) -> String {
        let k = if self.field.is_q() { "Q".to_string() } else { format!("Q(sqrt {})", self.field.d) };
        let s: Vec<String> = self
            .s
            .iter()
            .map(|q| match q.kind {
                Kind::Split(c) => format!("({}, w-{})", q.p, c),
                _ => format!("({})", q.p),
            })
            .collect();
        format!("{k} S_fin=[{}]", s.join(" "))
    }

    pub fn norm_of(&self, exps: &[u32]) -> u128 {
        self.s.iter().zip(exps).map(|(q, &g)| (q.norm as u128).pow(g)).product()
    }

    /// A rational integer `D` with `prod q^{-g} subset D^{-1} O_k`.
    fn denominator(&self, exps: &[u32]) -> i128 {
        let mut by_p: Vec<(i128, u32)> = Vec::new();
        for (q, &g) in self.s.iter().zip(exps) {
            let need = g.div_ceil(q.e);
            match by_p.iter_mut().find(|(p, _)| *p == q.p) {
                Some(entry) => entry.1 = entry.1.max(need),
                None => by_p.push((q.p, need)),
            }
        }
        by_p.iter().map(|&(p, k)| p.pow(k)).product()
    }

    /// `|sigma_i((x + y omega)/den)|^{d_i}` in floating point.
    fn places_f64(&self, x: i128, y: i128, den: i128) -> [f64; 2] {
        let k = self.field;
        let (xf, yf, df) = (x as f64, y as f64, den as f64);
        if k.is_q() {
            [(xf / df).abs(), 0.0]
        } else if k.real() {
            let w = k.omega_real();
            [((xf + yf * w[0]) / df).abs(), ((xf + yf * w[1]) / df).abs()]
        } else {
            let (re, im) = if k.half() { (0.5, (-k.d as f64).sqrt() / 2.0) } else { (0.0, (-k.d as f64).sqrt()) };
            let a = (xf + yf * re) / df;
            let b = yf * im / df;
            [a * a + b * b, 0.0]
        }
    }

    /// Builds `(x + y omega)/den`, or `None` when it is not an S-integer or
    /// does not lie in `prod q^{-bound}`.
    fn element(&self, x: i128, y: i128, den: i128, bound: &[u32], place: [f64; 2]) -> Option<OElem> {
        let k = self.field;
        let mut exps = vec![0u32; self.s.len()];
        if x != 0 || y != 0 {
            let mut rest = den;
            let mut rational_primes = Vec::new();
            let mut p = 2;
            while rest > 1 {
                if rest % p == 0 {
                    rational_primes.push(p);
                    while rest % p == 0 {
                        rest /= p;
                    }
                }
                p += 1;
            }
            for p in rational_primes {
                let dv = vp(den, p);
                for q in primes_above(k, p) {
                    let v = valuation_integral(k, &q, x, y) - q.e as i64 * dv;
                    match self.s.iter().position(|s| *s == q) {
                        Some(l) => {
                            if v < -(bound[l] as i64) {
                                return None;
                            }
                            exps[l] = (-v).max(0) as u32;
                        }
                        None if v < 0 => return None,
                        None => {}
                    }
                }
            }
        }
        let (r, s) = if k.half() {
            (qr(2 * x + y, 2 * den), qr(y, 2 * den))
        } else {
            (qr(x, den), qr(y, den))
        };
        Some(OElem { x, y, den, r, s, place, exps })
    }

    /// Every element of `prod q^{-bound}` (S-integral) with each
    /// `|sigma_i(a)|^{d_i} <= limit`.
    pub fn elements(&self, bound: &[u32], limit: f64) -> Vec<OElem> {
        let k = self.field;
        let den = self.denominator(bound) as f64;
        let slack = 1.0 + 1e-9;
        let (xmax, ymax) = if k.is_q() {
            ((den * limit * slack).floor() as i128 + 1, 0)
        } else if k.real() {
            let w = k.omega_real();
            let ym = den * 2.0 * limit / (w[0] - w[1]).abs();
            (((den * limit + ym * w[0].abs()) * slack).floor() as i128 + 1, (ym * slack).floor() as i128 + 1)
        } else {
            let r = limit.sqrt();
            let (re, im) = if k.half() {
                (0.5, (-k.d as f64).sqrt() / 2.0)
            } else {
                (0.0, (-k.d as f64).sqrt())
            };
            let ym = den * r / im;
            (((den * r + ym * re) * slack).floor() as i128 + 1, (ym * slack).floor() as i128 + 1)
        };
        let lim = limit * slack;
        let mut out = Vec::new();
        for y in -ymax..=ymax {
            let ranges = if k.real() && !k.is_q() {
                hyperbola_ranges(k.omega_real(), y, den, lim)
            } else {
                vec![(-xmax, xmax)]
            };
            for (lo, hi) in ranges {
                for x in lo.max(-xmax)..=hi.min(xmax) {
                    let place = self.places_f64(x, y, den as i128);
                    if place.iter().any(|&v| v > lim) || place[0].max(1.0) * place[1].max(1.0) > lim {
                        continue;
                    }
                    if let Some(e) = self.element(x, y, den as i128, bound, place) {
                        out.push(e);
                    }
                }
            }
        }
        out
    }
}

/// Integer `x` ranges (with a margin) where `u = (x + y w0)/den` and
/// `v = (x + y w1)/den` satisfy `|u|, |v| <= lim` and `|u v| <= lim`.
fn hyperbola_ranges(w: [f64; 2], y: i128, den: f64, lim: f64) -> Vec<(i128, i128)> {
    let delta = y as f64 * (w[1] - w[0]) / den;
    let outer = (delta * delta + 4.0 * lim).sqrt();
    let lo = ((-delta - outer) / 2.0).max(-lim).max(-lim - delta);
    let hi = ((-delta + outer) / 2.0).min(lim).min(lim - delta);
    if lo > hi {
        return Vec::new();
    }
    let mut pieces = vec![(lo, hi)];
    if delta * delta > 4.0 * lim {
        let inner = (delta * delta - 4.0 * lim).sqrt();
        let (a, b) = ((-delta - inner) / 2.0, (-delta + inner) / 2.0);
        pieces = vec![(lo, a.min(hi)), (b.max(lo), hi)];
    }
    let shift = y as f64 * w[0];
    let mut out: Vec<(i128, i128)> = Vec::new();
    for (a, b) in pieces.into_iter().filter(|(a, b)| a <= b) {
        let (xa, xb) = ((a * den - shift).floor() as i128 - 1, (b * den - shift).ceil() as i128 + 1);
        match out.last_mut() {
            Some(last) if xa <= last.1 => last.1 = last.1.max(xb),
            _ => out.push((xa, xb)),
        }
    }
    out
}

/// Sign of `p + q sqrt d` for squarefree `d > 1`.
fn sign(p: &Q, q: &Q, d: i64) -> i32 {
    let sp = if p.is_zero() { 0 } else if p.is_positive() { 1 } else { -1 };
    let sq = if q.is_zero() { 0 } else if q.is_positive() { 1 } else { -1 };
    if sq == 0 {
        return sp;
    }
    if sp == 0 || sp == sq {
        return sq;
    }
    if p * p > q * q * q_from(d) {
        sp
    } else {
        sq
    }
}

fn q_from(d: i64) -> Q {
    q(d as i128)
}

/// `|a| <= bound` for `a = r + s sqrt d`.
fn abs_le(r: &Q, s: &Q, d: i64, bound: &Q) -> bool {
    let p = bound * bound - r * r - s * s * q_from(d);
    let qq = -(r * s * q(2));
    sign(&p, &qq, d) >= 0
}

/// Compares `|a|` and `|b|` for `a, b` in `Q(sqrt d)`.
fn cmp_abs(a: (&Q, &Q), b: (&Q, &Q), d: i64) -> i32 {
    let dd = q_from(d);
    let p = a.0 * a.0 + a.1 * a.1 * &dd - b.0 * b.0 - b.1 * b.1 * &dd;
    let qq = (a.0 * a.1 - b.0 * b.1) * q(2);
    sign(&p, &qq, d)
}

/// Exact test `fin * prod_i max(1, max_u |sigma_i(a_u)|)^{d_i} <= t`.
pub fn within(k: OField, point: &[&OElem], fin: &Q, t: &Q, finf: f64, tf: f64) -> bool {
    let mut approx = finf;
    let places = if k.is_q() || !k.real() { 1 } else { 2 };
    for i in 0..places {
        approx *= point.iter().map(|e| e.place[i]).fold(1.0, f64::max);
    }
    if approx < tf * (1.0 - 1e-9) {
        return true;
    }
    if approx > tf * (1.0 + 1e-9) {
        return false;
    }
    let bound = t / fin;
    if k.is_q() || !k.real() {
        let mut best = Q::one();
        for e in point {
            let v = if k.is_q() { e.r.abs() } else { &e.r * &e.r + &e.s * &e.s * q_from(-k.d) };
            if v > best {
                best = v;
            }
        }
        return best <= bound;
    }
    let d = k.d;
    let mut pick: [Option<(Q, Q)>; 2] = [None, None];
    for (i, slot) in pick.iter_mut().enumerate() {
        for e in point {
            let cand = (e.r.clone(), if i == 0 { e.s.clone() } else { -e.s.clone() });
            let bigger = match slot {
                None => true,
                Some(cur) => cmp_abs((&cand.0, &cand.1), (&cur.0, &cur.1), d) > 0,
            };
            if bigger {
                *slot = Some(cand);
            }
        }
        let cur = slot.clone().unwrap();
        if abs_le(&cur.0, &cur.1, d, &Q::one()) {
            *slot = None;
        }
    }
    match (&pick[0], &pick[1]) {
        (None, None) => Q::one() <= bound,
        (Some(a), None) | (None, Some(a)) => abs_le(&a.0, &a.1, d, &bound),
        (Some(a), Some(b)) => {
            let dd = q_from(d);
            let r = &a.0 * &b.0 + &a.1 * &b.1 * &dd;
            let s = &a.0 * &b.1 + &a.1 * &b.0;
            abs_le(&r, &s, d, &bound)
        }
    }
}

/// Exponent vectors `g` with `prod N(q_l)^{g_l} <= bound`.
pub fn exponent_vectors(c: &OConfig, bound: f64) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for q in &c.s {
        let mut next = Vec::new();
        for v in out {
            let base = c.norm_of(&v) as f64;
            let mut g = 0u32;
            while base * (q.norm as f64).powi(g as i32) <= bound * (1.0 + 1e-12) {
                let mut w = v.clone();
                w.push(g);
                next.push(w);
                g += 1;
            }
        }
        out = next;
    }
    out
}

fn tuples<'a>(elems: &'a [OElem], n: u32, f: &mut dyn FnMut(&[&'a OElem])) {
    fn rec<'a>(elems: &'a [OElem], n: u32, cur: &mut Vec<&'a OElem>, f: &mut dyn FnMut(&[&'a OElem])) {
        if cur.len() == n as usize {
            f(cur);
            return;
        }
        for e in elems {
            cur.push(e);
            rec(elems, n, cur, f);
            cur.pop();
        }
    }
    rec(elems, n, &mut Vec::new(), f);
}

fn max_exps(point: &[&OElem], len: usize) -> Vec<u32> {
    (0..len).map(|l| point.iter().map(|e| e.exps[l]).max().unwrap_or(0)).collect()
}

fn hm(c: &OConfig, h: &Q) -> Q {
    if c.field.m() == 1 {
        h.clone()
    } else {
        h * h
    }
}

/// `|{a in O_S^n : H(a) <= h}|` by looping over denominator exponents.
pub fn count_vectors(c: &OConfig, n: u32, h: &Q) -> u128 {
    if *h < Q::one() {
        return 0;
    }
    let t = hm(c, h);
    let tf = t.to_f64().unwrap();
    let mut total = 0u128;
    for g in exponent_vectors(c, tf) {
        let norm = c.norm_of(&g);
        if q(norm as i128) > t {
            continue;
        }
        let fin = q(norm as i128);
        let elems = c.elements(&g, tf / norm as f64);
        tuples(&elems, n, &mut |pt| {
            if max_exps(pt, g.len()) == g && within(c.field, pt, &fin, &t, norm as f64, tf) {
                total += 1;
            }
        });
    }
    total
}

/// `|Z(A, T)|` and `|Z*(A, T)|` for the max norm, `t_pow_m = T^m`.
pub fn count_z_pair(c: &OConfig, n: u32, ideal: &[u32], t_pow_m: &Q) -> (u128, u128) {
    if *t_pow_m < Q::one() {
        return (0, 0);
    }
    let tf = t_pow_m.to_f64().unwrap();
    let elems = c.elements(ideal, tf);
    let (mut z, mut zstar) = (0u128, 0u128);
    let one = Q::one();
    tuples(&elems, n, &mut |pt| {
        if within(c.field, pt, &one, t_pow_m, 1.0, tf) {
            z += 1;
            if max_exps(pt, ideal.len()) == ideal {
                zstar += 1;
            }
        }
    });
    (z, zstar)
}

/// Rough `|Z(A, T)|`, used to keep test sizes bounded.
pub fn estimate_z(c: &OConfig, n: u32, norm: u128, t_pow_m: f64) -> f64 {
    let k = c.field;
    let per = if k.is_q() {
        2.0 * t_pow_m * norm as f64 + 1.0
    } else if k.real() {
        4.0 * t_pow_m * (1.0 + t_pow_m.max(1.0).ln()) * norm as f64 / k.abs_disc().sqrt() + 1.0
    } else {
        2.0 * std::f64::consts::PI * t_pow_m * norm as f64 / k.abs_disc().sqrt() + 1.0
    };
    per.powi(n as i32)
}

pub fn to_core(x: &Q) -> scount::Rational {
    scount::Rational::new(x.numer().clone(), x.denom().clone())
}

/// Roots of the minimal polynomial of `omega` modulo `p`.
pub fn residues(d: i64, p: i128) -> Vec<i128> {
    primes_above(OField { d }, p)
        .into_iter()
        .filter_map(|q| if let Kind::Split(c) = q.kind { Some(c) } else { None })
        .collect()
}

pub fn assert_small_cases() {
    // Z[1/2], H <= 10: 21 + 10 + 10 + 10.
    let c = OConfig::new(1, &[(2, None)]);
    assert_eq!(count_vectors(&c, 1, &q(10)), 51);
    // Gaussian integers with |a|^2 <= 25.
    let g = OConfig::new(-1, &[]);
    assert_eq!(count_vectors(&g, 1, &q(5)), 81);
}
