//! Irreducibility over `k` by searching for monic factors: every monic factor
//! of degree `t` has coefficients `b_j = (-1)^j e_j(roots)` for some subset of
//! the roots, and `b_j` lies in `d^{-j}` where `d` bounds the denominators of
//! the roots prime by prime. Root enclosures give small boxes for `b_j`, whose
//! lattice points are tried by exact division.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::heights::{omega_embeddings, rational_prime_divisors, valuation};
use crate::lattice::IdealLattice;
use crate::mahler::{embed_poly, roots, RootEnclosure};
use crate::numberfield::{FieldDesc, FieldElement, PlaceSet, SIdeal};
use crate::poly::KPolynomial;
use crate::{Error, Result};

/// Cap on lattice points tried for a single coefficient.
const MAX_POINTS: usize = 10_000;

fn combinations(n: usize, t: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < t - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, t, &mut Vec::new(), &mut out);
    out
}

/// Enclosures whose radius covers the whole overlap component.
fn widened(encl: &[RootEnclosure]) -> Vec<(Complex64, f64)> {
    encl.iter()
        .map(|a| {
            let r = encl
                .iter()
                .filter(|b| b.cluster == a.cluster)
                .map(|b| (a.center - b.center).norm() + b.radius)
                .fold(a.radius, f64::max);
            (a.center, r)
        })
        .collect()
}

/// Elementary symmetric functions `e_1..e_t` of the chosen discs, each with a
/// radius bounding its deviation from the value at the centres.
fn symmetric_enclosures(discs: &[(Complex64, f64)], subset: &[usize]) -> Vec<(Complex64, f64)> {
    let t = subset.len();
    let mut e = vec![Complex64::zero(); t + 1];
    let mut a = vec![0.0f64; t + 1];
    let mut b = vec![0.0f64; t + 1];
    e[0] = Complex64::one();
    a[0] = 1.0;
    b[0] = 1.0;
    for &i in subset {
        let (c, r) = discs[i];
        for j in (1..=t).rev() {
            e[j] = e[j] + e[j - 1] * c;
            a[j] += a[j - 1] * c.norm();
            b[j] += b[j - 1] * (c.norm() + r);
        }
    }
    (1..=t)
        .map(|j| {
            let rad = (b[j] - a[j]) + 1e-9 * b[j] + 1e-12;
            let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
            (e[j] * sign, rad)
        })
        .collect()
}

/// Lattice points `(x, y)` of `lat` (coordinates over `lat.den`) whose images
/// lie in the given discs: one disc per archimedean place.
fn lattice_points_near(field: &FieldDesc, lat: &IdealLattice, discs: &[(Complex64, f64)]) -> Result<Vec<(i128, i128)>> {
    let h = lat.hnf;
    let den = lat.den as f64;
    let mut out = Vec::new();
    let push_x = |out: &mut Vec<(i128, i128)>, v: i128, xlo: f64, xhi: f64| -> Result<()> {
        // x = u a + v b
        let vb = (v * h.b) as f64;
        let ulo = ((xlo - vb) / h.a as f64).ceil() as i128;
        let uhi = ((xhi - vb) / h.a as f64).floor() as i128;
        if uhi - ulo > MAX_POINTS as i128 {
            return Err(Error::Unresolved("factor search box too large".into()));
        }
        for u in ulo..=uhi {
            out.push((u * h.a + v * h.b, v * h.c));
        }
        Ok(())
    };
    if field.is_rational() {
        let (z, r) = discs[0];
        if z.im.abs() > r {
            return Ok(out);
        }
        push_x(&mut out, 0, den * (z.re - r), den * (z.re + r))?;
        return Ok(out);
    }
    let w = omega_embeddings(field);
    if field.s > 0 {
        let (z, r) = discs[0];
        let (ylo, yhi) = (den * (z.im - r) / w[0].im, den * (z.im + r) / w[0].im);
        let vlo = (ylo / h.c as f64).ceil() as i128;
        let vhi = (yhi / h.c as f64).floor() as i128;
        for v in vlo..=vhi {
            let y = (v * h.c) as f64;
            push_x(&mut out, v, den * (z.re - r) - y * w[0].re, den * (z.re + r) - y * w[0].re)?;
        }
        return Ok(out);
    }
    let ((z1, r1), (z2, r2)) = (discs[0], discs[1]);
    if z1.im.abs() > r1 || z2.im.abs() > r2 {
        return Ok(out);
    }
    let dw = w[0].re - w[1].re;
    let ylo = den * (z1.re - z2.re - r1 - r2) / dw;
    let yhi = den * (z1.re - z2.re + r1 + r2) / dw;
    let vlo = (ylo / h.c as f64).ceil() as i128;
    let vhi = (yhi / h.c as f64).floor() as i128;
    for v in vlo..=vhi {
        let y = (v * h.c) as f64;
        push_x(&mut out, v, den * (z1.re - r1) - y * w[0].re, den * (z1.re + r1) - y * w[0].re)?;
    }
    Ok(out)
}

/// Primes of `k` dividing some coefficient denominator, together with the
/// exponents `g` such that every root of `f` has `ord >= -g`.
fn root_denominator(field: &FieldDesc, f: &KPolynomial) -> Result<(PlaceSet, SIdeal)> {
    let mut den = BigInt::one();
    for c in &f.coeffs {
        let (_, _, d) = c.integral_repr();
        den = num_integer::Integer::lcm(&den, &d);
    }
    let mut primes = Vec::new();
    for p in rational_prime_divisors(&den) {
        primes.extend(field.factor_rational_prime(p)?);
    }
    let ps = PlaceSet::new(field.clone(), primes)?;
    let e = f.degree().unwrap();
    let mut exps = Vec::with_capacity(ps.l());
    for q in &ps.primes {
        let mut g = 0i64;
        for j in 1..=e {
            let a = &f.coeffs[j];
            if a.is_zero() {
                continue;
            }
            let ord = valuation(field, a, q)?;
            if ord < 0 {
                // ceil(-ord / j)
                g = g.max((-ord + j as i64 - 1) / j as i64);
            }
        }
        exps.push(g as u32);
    }
    Ok((ps, SIdeal::new(exps)))
}

fn coords_to_element(field: &FieldDesc, (x, y): (i128, i128), den: i128) -> FieldElement {
    FieldElement::from_coords(field.omega, x, y, den)
}

/// Tries all coefficient combinations for one root selection.
fn try_factor(
    field: &FieldDesc,
    f: &KPolynomial,
    lattices: &[IdealLattice],
    per_place: &[Vec<(Complex64, f64)>],
) -> Result<bool> {
    let t = per_place[0].len();
    let mut options: Vec<Vec<FieldElement>> = Vec::with_capacity(t);
    for j in 0..t {
        let discs: Vec<(Complex64, f64)> = per_place.iter().map(|p| p[j]).collect();
        let pts = lattice_points_near(field, &lattices[j], &discs)?;
        if pts.is_empty() {
            return Ok(false);
        }
        options.push(pts.into_iter().map(|c| coords_to_element(field, c, lattices[j].den)).collect());
    }
    let total: usize = options.iter().map(|o| o.len()).product();
    if total > MAX_POINTS {
        return Err(Error::Unresolved("too many factor candidates".into()));
    }
    let mut idx = vec![0usize; t];
    loop {
        let lower: Vec<FieldElement> = idx.iter().enumerate().map(|(j, &i)| options[j][i].clone()).collect();
        let g = KPolynomial::monic(field.omega, &lower);
        let (_, r) = f.divrem(&g)?;
        if r.is_zero() {
            return Ok(true);
        }
        let mut k = 0;
        loop {
            if k == t {
                return Ok(false);
            }
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub(crate) fn is_irreducible_over(field: &FieldDesc, f: &KPolynomial) -> Result<bool> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let e = f.degree().unwrap();
    if e <= 1 {
        return Ok(true);
    }
    if !f.is_squarefree()? {
        return Ok(false);
    }
    let (ps, d) = root_denominator(field, f)?;
    let discs: Vec<Vec<(Complex64, f64)>> = (0..field.arch_places().min(if field.s > 0 { 1 } else { 2 }))
        .map(|i| roots(&embed_poly(field, f, i)).map(|r| widened(&r)))
        .collect::<Result<_>>()?;
    for t in 1..=e / 2 {
        let lattices: Vec<IdealLattice> = (1..=t)
            .map(|j| {
                let dj = SIdeal::new(d.exps.iter().map(|g| g * j as u32).collect());
                IdealLattice::inverse_of(&ps, &dj)
            })
            .collect();
        let subsets = combinations(e, t);
        if field.r == 2 {
            for s1 in &subsets {
                let a = symmetric_enclosures(&discs[0], s1);
                for s2 in &subsets {
                    let b = symmetric_enclosures(&discs[1], s2);
                    if try_factor(field, f, &lattices, &[a.clone(), b])? {
                        return Ok(false);
                    }
                }
            }
        } else {
            for s in &subsets {
                let a = symmetric_enclosures(&discs[0], s);
                if try_factor(field, f, &lattices, &[a])? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
