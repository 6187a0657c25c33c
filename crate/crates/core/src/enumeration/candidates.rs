//! Single-coordinate candidates: lattice points `alpha` of a fractional ideal
//! with `prod_i max(1, |sigma_i alpha| / C)^{d_i}` below a bound, found by
//! scanning lattice rows through the region instead of a full box.

use num_complex::Complex64;

use crate::heights::{omega_embeddings, ord_integral};
use crate::lattice::IdealLattice;
use crate::numberfield::{enumerate_ideals, FieldDesc, PlaceSet, SIdeal};
use crate::rational::{to_f64, Rational};
use crate::Result;

/// Relative slack applied to floating-point bounds before exact filtering.
pub(crate) const SLACK: f64 = 1e-12;

#[derive(Clone, Debug)]
pub(crate) struct Cand {
    pub x: i128,
    pub y: i128,
    pub den: i128,
    /// `sigma_i(alpha)` for each archimedean place.
    pub emb: [Complex64; 2],
    /// Scaled `|sigma_i(alpha)| / C`, lower and upper bounds.
    pub vlo: [f64; 2],
    pub vhi: [f64; 2],
    /// Error radius of `emb`.
    pub err: [f64; 2],
    /// Lower bound of `prod_i max(1, vlo_i)^{d_i}`.
    pub wlo: f64,
}

#[derive(Clone, Debug)]
pub(crate) struct Stratum {
    pub exps: Vec<u32>,
    pub norm: u128,
    /// Sorted by `wlo`.
    pub cands: Vec<Cand>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct CandidateSet {
    pub strata: Vec<Stratum>,
    pub scanned: u128,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.strata.iter().map(|s| s.cands.len()).sum()
    }
}

/// Which lattices are scanned.
#[derive(Clone, Debug)]
pub(crate) enum Mode {
    /// Every `B` in the ideal monoid with `N(B) <= bound`, keeping exactly the
    /// points whose denominator ideal is `B`; weights include `N(B)`.
    ByDenominator,
    /// All points of `A^{-1}` for a fixed `A`; weights have no ideal factor.
    Fixed(SIdeal),
}

pub(crate) fn weight(vals: &[f64; 2], field: &FieldDesc) -> f64 {
    let mut w = 1.0;
    for (i, v) in vals.iter().take(field.arch_places()).enumerate() {
        w *= v.max(1.0).powi(field.arch_degree(i) as i32);
    }
    w
}

struct Geometry {
    omegas: Vec<Complex64>,
    places: usize,
}

impl Geometry {
    fn new(field: &FieldDesc) -> Self {
        Geometry { omegas: omega_embeddings(field), places: field.arch_places() }
    }
}

/// Row `v` of the scan together with inclusive `u` ranges.
type Row = (i128, Vec<(i128, i128)>);

fn merge(mut iv: Vec<(i128, i128)>) -> Vec<(i128, i128)> {
    iv.retain(|(a, b)| a <= b);
    iv.sort_unstable();
    let mut out: Vec<(i128, i128)> = Vec::with_capacity(iv.len());
    for (a, b) in iv {
        match out.last_mut() {
            Some(last) if a <= last.1 + 1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

fn fl(x: f64) -> i128 {
    x.floor().clamp(-1e30, 1e30) as i128
}

fn ce(x: f64) -> i128 {
    x.ceil().clamp(-1e30, 1e30) as i128
}

/// Rows of lattice points possibly satisfying
/// `prod_i max(1, |sigma_i alpha| / scale)^{d_i} <= bmax`.
fn rows(field: &FieldDesc, lat: &IdealLattice, bmax: f64, scale: f64) -> Vec<Row> {
    if bmax < 1.0 * (1.0 - SLACK) {
        return Vec::new();
    }
    let bmax = bmax * (1.0 + SLACK);
    let h = lat.hnf;
    let (a, b, c) = (h.a as f64, h.b as f64, h.c as f64);
    let den = lat.den as f64;
    let g = Geometry::new(field);
    if field.is_rational() {
        let u = fl(scale * bmax * den / a) + 1;
        return vec![(0, vec![(-u, u)])];
    }
    let mut out = Vec::new();
    if field.s > 0 {
        // |sigma alpha|^2 <= scale^2 bmax
        let w = g.omegas[0];
        let r = scale * scale * bmax;
        let vmax = fl(den * r.sqrt() / (w.im * c)) + 1;
        for v in -vmax..=vmax {
            let yy = v as f64 * c;
            let rest = r * den * den - (yy * w.im) * (yy * w.im);
            if rest < 0.0 {
                continue;
            }
            let s = rest.sqrt();
            let center = -yy * w.re;
            let vb = v as f64 * b;
            let ulo = ce((center - s - vb) / a) - 1;
            let uhi = fl((center + s - vb) / a) + 1;
            out.push((v, vec![(ulo, uhi)]));
        }
        return out;
    }
    let (w1, w2) = (g.omegas[0].re, g.omegas[1].re);
    let dw = w1 - w2;
    let bb = bmax;
    let vmax = fl(2.0 * scale * bb * den / (c * dw)) + 1;
    for v in -vmax..=vmax {
        let delta = v as f64 * c * dw / den / scale;
        let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(4);
        pieces.push(((-1.0f64).max(delta - bb), 1.0f64.min(delta + bb)));
        pieces.push(((delta - 1.0).max(-bb), (delta + 1.0).min(bb)));
        let root = (delta * delta + 4.0 * bb).sqrt();
        let (r1, r2) = ((delta - root) / 2.0, (delta + root) / 2.0);
        let disc = delta * delta - 4.0 * bb;
        if disc > 0.0 {
            let q = disc.sqrt();
            pieces.push((r1, (delta - q) / 2.0));
            pieces.push(((delta + q) / 2.0, r2));
        } else {
            pieces.push((r1, r2));
        }
        let vb = v as f64 * b;
        let vcw = v as f64 * c * w1;
        let mut iv = Vec::new();
        for (lo, hi) in pieces {
            if lo > hi {
                continue;
            }
            let slack = 1e-9 * (lo.abs() + hi.abs() + 1.0);
            let s_lo = (lo - slack) * scale * den;
            let s_hi = (hi + slack) * scale * den;
            iv.push((ce((s_lo - vb - vcw) / a) - 1, fl((s_hi - vb - vcw) / a) + 1));
        }
        let iv = merge(iv);
        if !iv.is_empty() {
            out.push((v, iv));
        }
    }
    out
}

fn row_points(rows: &[Row]) -> u128 {
    rows.iter()
        .flat_map(|(_, iv)| iv.iter())
        .map(|(a, b)| (b - a + 1).max(0) as u128)
        .sum()
}

fn strata_plan(ps: &PlaceSet, bound: &Rational, mode: &Mode) -> Vec<(SIdeal, IdealLattice, u128)> {
    match mode {
        Mode::ByDenominator => enumerate_ideals(ps, bound)
            .into_iter()
            .map(|b| {
                let lat = IdealLattice::inverse_of(ps, &b);
                let n = b.norm(ps);
                (b, lat, n)
            })
            .collect(),
        Mode::Fixed(a) => vec![(a.clone(), IdealLattice::inverse_of(ps, a), 1)],
    }
}

/// Number of lattice points a call to [`build`] would scan.
pub(crate) fn project(ps: &PlaceSet, bound: &Rational, scale: f64, mode: &Mode) -> u128 {
    let t = to_f64(bound);
    strata_plan(ps, bound, mode)
        .iter()
        .map(|(_, lat, n)| row_points(&rows(&ps.field, lat, t / *n as f64, scale)))
        .sum()
}

pub(crate) fn make_cand(
    g: &[Complex64],
    places: usize,
    field: &FieldDesc,
    x: i128,
    y: i128,
    den: i128,
    scale: f64,
) -> Cand {
    let (xf, yf, df) = (x as f64, y as f64, den as f64);
    let mut emb = [Complex64::new(0.0, 0.0); 2];
    let mut err = [0.0; 2];
    let mut vlo = [0.0; 2];
    let mut vhi = [0.0; 2];
    for i in 0..places {
        let w = if field.is_rational() { Complex64::new(0.0, 0.0) } else { g[i] };
        emb[i] = (Complex64::new(xf, 0.0) + w * yf) / df;
        err[i] = (xf.abs() + yf.abs() * w.norm()) / df * 6.0 * f64::EPSILON + f64::MIN_POSITIVE;
        let v = emb[i].norm();
        vlo[i] = ((v - err[i]) / scale).max(0.0) * (1.0 - 4.0 * f64::EPSILON);
        vhi[i] = (v + err[i]) / scale * (1.0 + 4.0 * f64::EPSILON);
    }
    let wlo = weight(&vlo, field);
    Cand { x, y, den, emb, vlo, vhi, err, wlo }
}

/// Whether `(x + y omega) / den` has denominator ideal exactly `prod p_l^{exps_l}`,
/// given that it lies in the inverse of that ideal.
fn exact_denominator(ps: &PlaceSet, exps: &[u32], x: i128, y: i128, den: i128) -> bool {
    if exps.iter().all(|&g| g == 0) {
        return true;
    }
    if x == 0 && y == 0 {
        return false;
    }
    for (q, &g) in ps.primes.iter().zip(exps) {
        if g == 0 {
            continue;
        }
        let p = q.p as i128;
        let mut d = den;
        let mut vp = 0i64;
        while d % p == 0 {
            d /= p;
            vp += 1;
        }
        let ord = ord_integral(ps.field.omega, q, x, y) as i64 - vp * q.ramification as i64;
        if ord != -(g as i64) {
            return false;
        }
    }
    true
}

/// Candidates with `N(B) * prod_i max(1, |sigma_i alpha| / scale)^{d_i} <= bound`
/// (up to floating slack; callers decide exactly).
pub(crate) fn build(ps: &PlaceSet, bound: &Rational, scale: f64, mode: &Mode) -> Result<CandidateSet> {
    let field = &ps.field;
    let g = Geometry::new(field);
    let t = to_f64(bound);
    let mut set = CandidateSet::default();
    for (ideal, lat, norm) in strata_plan(ps, bound, mode) {
        let bmax = t / norm as f64;
        let rs = rows(field, &lat, bmax, scale);
        set.scanned += row_points(&rs);
        let h = lat.hnf;
        let mut cands = Vec::new();
        let filter = matches!(mode, Mode::ByDenominator);
        for (v, ranges) in &rs {
            for &(ulo, uhi) in ranges {
                for u in ulo..=uhi {
                    let (x, y) = if field.is_rational() {
                        (u * h.a, 0)
                    } else {
                        (u * h.a + v * h.b, v * h.c)
                    };
                    let cand = make_cand(&g.omegas, g.places, field, x, y, lat.den, scale);
                    if cand.wlo > bmax * (1.0 + SLACK) {
                        continue;
                    }
                    if filter && !exact_denominator(ps, &ideal.exps, x, y, lat.den) {
                        continue;
                    }
                    cands.push(cand);
                }
            }
        }
        cands.sort_by(|a, b| a.wlo.total_cmp(&b.wlo).then((a.x, a.y).cmp(&(b.x, b.y))));
        set.strata.push(Stratum { exps: ideal.exps, norm, cands });
    }
    Ok(set)
}
