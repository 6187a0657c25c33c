//! Mahler measures: root enclosures for complex polynomials, the measure
//! `M(f) = |z_0| prod max(1, |alpha|)`, and the global measure
//! `M^k(f)^m = N(c(f))^{-1} prod_i M(sigma_i f)^{d_i}` on `k[X]`, where `c(f)`
//! is the fractional ideal generated by the coefficients.

use std::cmp::Ordering;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::heights::{omega_embeddings, HeightValue};
use crate::numberfield::{FieldDesc, FieldElement};
use crate::poly::{binomial, KPolynomial};
use crate::rational::{to_f64, Rational};
use crate::{Error, Result};

const MAX_ITER: usize = 2000;
/// Largest number of subset products the exact tie-break will form.
const MAX_SUBSETS: u64 = 200;

/// Coefficients `z_0, ..., z_d` (leading first), each known to within `radii`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPolynomial {
    pub coeffs: Vec<Complex64>,
    pub radii: Vec<f64>,
}

impl ComplexPolynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let radii = vec![0.0; coeffs.len()];
        ComplexPolynomial { coeffs, radii }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn with_radii(coeffs: Vec<Complex64>, radii: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), radii.len());
        ComplexPolynomial { coeffs, radii }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    /// `(p(z), p'(z), running error bound on p(z))`.
    fn eval(&self, z: Complex64) -> (Complex64, Complex64, f64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        let mut bound = 0.0;
        let az = z.norm();
        for (c, r) in self.coeffs.iter().zip(&self.radii) {
            dp = dp * z + p;
            p = p * z + c;
            bound = bound * az + c.norm() + r / f64::EPSILON;
        }
        let d = self.coeffs.len() as f64;
        let err = bound * f64::EPSILON * (4.0 * d + 4.0);
        (p, dp, err)
    }
}

impl From<&[f64]> for ComplexPolynomial {
    fn from(c: &[f64]) -> Self {
        ComplexPolynomial::from_real(c)
    }
}

/// A disc certainly containing `multiplicity` roots once merged with the
/// other discs of the same `cluster`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootEnclosure {
    pub center: Complex64,
    pub radius: f64,
    /// Index of the connected component of overlapping discs.
    pub cluster: usize,
    /// Number of discs (and hence roots) in that component.
    pub cluster_size: usize,
}

impl RootEnclosure {
    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

/// An enclosure `[lo, hi]` of a measure with its midpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureValue {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

impl MeasureValue {
    pub fn exact(v: f64) -> Self {
        MeasureValue { value: v, lo: v, hi: v }
    }

    pub fn rel_err(&self) -> f64 {
        if self.value == 0.0 {
            return 0.0;
        }
        ((self.hi - self.value).max(self.value - self.lo)) / self.value
    }

    pub fn mul(&self, o: &MeasureValue) -> MeasureValue {
        MeasureValue { value: self.value * o.value, lo: self.lo * o.lo, hi: self.hi * o.hi }
    }

    pub fn powi(&self, e: i32) -> MeasureValue {
        MeasureValue { value: self.value.powi(e), lo: self.lo.powi(e), hi: self.hi.powi(e) }
    }

    pub fn powf(&self, e: f64) -> MeasureValue {
        MeasureValue { value: self.value.powf(e), lo: self.lo.powf(e), hi: self.hi.powf(e) }
    }

    fn widen(self, rel: f64) -> MeasureValue {
        MeasureValue { value: self.value, lo: self.lo * (1.0 - rel), hi: self.hi * (1.0 + rel) }
    }
}

fn aberth(p: &ComplexPolynomial) -> Vec<Complex64> {
    let d = p.degree();
    let a0 = p.coeffs[0];
    let ad = p.coeffs[d];
    let rho = (ad / a0).norm().powf(1.0 / d as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..MAX_ITER {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (v, dv, _) = p.eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::one() - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

/// Certified root enclosures. Zero roots from vanishing trailing coefficients
/// are reported exactly.
pub fn roots(p: &ComplexPolynomial) -> Result<Vec<RootEnclosure>> {
    if p.is_zero() {
        return Err(Error::RootFinding("zero polynomial".into()));
    }
    let lead = p
        .coeffs
        .iter()
        .position(|c| c.norm() != 0.0)
        .ok_or_else(|| Error::RootFinding("zero polynomial".into()))?;
    let mut q = ComplexPolynomial::with_radii(p.coeffs[lead..].to_vec(), p.radii[lead..].to_vec());
    if q.radii[0] >= q.coeffs[0].norm() {
        return Err(Error::RootFinding("leading coefficient not bounded away from zero".into()));
    }
    let mut zeros = 0;
    while q.coeffs.len() > 1 && q.coeffs.last().unwrap().norm() == 0.0 && *q.radii.last().unwrap() == 0.0 {
        q.coeffs.pop();
        q.radii.pop();
        zeros += 1;
    }
    let d = q.degree();
    let mut centers = if d == 0 { Vec::new() } else { aberth(&q) };
    let mut radii = Vec::with_capacity(d);
    let a0 = q.coeffs[0].norm() - q.radii[0];
    for i in 0..d {
        let (v, _, err) = q.eval(centers[i]);
        let prod: f64 = (0..d).filter(|&j| j != i).map(|j| (centers[i] - centers[j]).norm()).product();
        let r = d as f64 * (v.norm() + err) / (a0 * prod);
        let r = if r.is_finite() { r * (1.0 + 1e-10) + f64::MIN_POSITIVE } else { f64::INFINITY };
        if !centers[i].is_finite() {
            return Err(Error::RootFinding(format!("iteration diverged for degree {d}")));
        }
        radii.push(r);
    }
    // Components of overlapping discs, by union-find.
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..d {
        for j in i + 1..d {
            if (centers[i] - centers[j]).norm() <= radii[i] + radii[j] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let roots_of: Vec<usize> = (0..d).map(|i| find(&mut parent, i)).collect();
    let mut labels: Vec<usize> = roots_of.clone();
    labels.sort_unstable();
    labels.dedup();
    let mut out: Vec<RootEnclosure> = (0..d)
        .map(|i| {
            let cluster = labels.binary_search(&roots_of[i]).unwrap();
            RootEnclosure {
                center: centers[i],
                radius: radii[i],
                cluster,
                cluster_size: roots_of.iter().filter(|&&r| r == roots_of[i]).count(),
            }
        })
        .collect();
    let base = labels.len();
    for z in 0..zeros {
        centers.push(Complex64::zero());
        out.push(RootEnclosure {
            center: Complex64::zero(),
            radius: 0.0,
            cluster: base + z,
            cluster_size: 1,
        });
    }
    Ok(out)
}

/// Per-cluster bounds `[min |alpha|, max |alpha|]` and sizes.
fn cluster_moduli(encl: &[RootEnclosure]) -> Vec<(f64, f64, usize)> {
    let n = encl.iter().map(|e| e.cluster + 1).max().unwrap_or(0);
    let mut out = vec![(f64::INFINITY, 0.0f64, 0usize); n];
    for e in encl {
        let c = &mut out[e.cluster];
        c.0 = c.0.min((e.center.norm() - e.radius).max(0.0));
        c.1 = c.1.max(e.center.norm() + e.radius);
        c.2 += 1;
    }
    out
}

pub fn mahler_measure(p: &ComplexPolynomial) -> Result<MeasureValue> {
    if p.is_zero() {
        return Ok(MeasureValue::exact(0.0));
    }
    let lead = p.coeffs.iter().zip(&p.radii).find(|(c, _)| c.norm() != 0.0).unwrap();
    let encl = roots(p)?;
    let mut lo = lead.0.norm() - lead.1;
    let mut hi = lead.0.norm() + lead.1;
    let mut value = lead.0.norm();
    for e in &encl {
        value *= e.center.norm().max(1.0);
    }
    for (l, h, k) in cluster_moduli(&encl) {
        lo *= l.max(1.0).powi(k as i32);
        hi *= h.max(1.0).powi(k as i32);
    }
    let d = p.degree() as f64;
    Ok(MeasureValue { value, lo, hi }.widen(1e-14 * (d + 1.0)))
}

/// `sigma_i(f)` with coefficient error radii.
pub fn embed_poly(field: &FieldDesc, f: &KPolynomial, i: usize) -> ComplexPolynomial {
    let w = omega_embeddings(field)[i];
    let mut coeffs = Vec::with_capacity(f.coeffs.len());
    let mut radii = Vec::with_capacity(f.coeffs.len());
    for c in &f.coeffs {
        let (a, b) = (to_f64(&c.a), to_f64(&c.b));
        coeffs.push(Complex64::new(a, 0.0) + w * b);
        radii.push((a.abs() + b.abs() * w.norm()) * 4.0 * f64::EPSILON);
    }
    ComplexPolynomial::with_radii(coeffs, radii)
}

/// `M(sigma_i f)` computed factor by factor over a squarefree decomposition.
fn embedded_measure(field: &FieldDesc, f: &KPolynomial, i: usize) -> Result<MeasureValue> {
    let lead = crate::heights::embed_f64(field, f.lead().unwrap(), i).norm();
    let mut acc = MeasureValue::exact(lead).widen(4.0 * f64::EPSILON);
    if f.degree().unwrap() == 0 {
        return Ok(acc);
    }
    for (mult, g) in f.squarefree_decomposition()? {
        let m = mahler_measure(&embed_poly(field, &g, i))?;
        acc = acc.mul(&m.powi(mult as i32));
    }
    Ok(acc)
}

/// Enclosure of `M^k(f)^m`.
pub fn mahler_k_pow_m(field: &FieldDesc, f: &KPolynomial) -> Result<MeasureValue> {
    if f.is_zero() {
        return Ok(MeasureValue::exact(0.0));
    }
    let content = f.content_norm(field)?;
    let fin = to_f64(&(Rational::one() / content));
    let mut acc = MeasureValue::exact(fin).widen(2.0 * f64::EPSILON);
    for i in 0..field.arch_places() {
        let m = embedded_measure(field, f, i)?;
        acc = acc.mul(&m.powi(field.arch_degree(i) as i32));
    }
    Ok(acc)
}

/// `M^k(f)`.
pub fn mahler_k(field: &FieldDesc, f: &KPolynomial) -> Result<MeasureValue> {
    Ok(mahler_k_pow_m(field, f)?.powf(1.0 / field.m as f64))
}

/// Fast path for monic candidates given by floating-point embedded
/// coefficients: enclosure of `prod_i M(sigma_i f)^{d_i}`.
pub(crate) fn arch_measure_product(field: &FieldDesc, embedded: &[ComplexPolynomial]) -> Result<MeasureValue> {
    let mut acc = MeasureValue::exact(1.0);
    for (i, p) in embedded.iter().enumerate() {
        acc = acc.mul(&mahler_measure(p)?.powi(field.arch_degree(i) as i32));
    }
    Ok(acc)
}

/// Monic polynomial whose roots are the products of `j`-element subsets
/// (by index, so with multiplicity) of the roots of the monic `f`.
pub fn subset_product_poly(f: &KPolynomial, j: usize) -> Result<KPolynomial> {
    let omega = f.omega;
    let e = f.degree().ok_or(Error::NotMonic)?;
    if j == 0 {
        return Ok(KPolynomial::linear(&FieldElement::one(omega)));
    }
    let n = binomial(e as u32, j as u32);
    if n > MAX_SUBSETS {
        return Err(Error::Unresolved(format!("{n} subset products exceed the tie-break limit")));
    }
    let n = n as usize;
    let p = f.power_sums(e * n)?;
    // p_k(P_j) = e_j(alpha^k) read off the polynomial with roots alpha^k.
    let mut sums = Vec::with_capacity(n);
    for k in 1..=n {
        let pk: Vec<FieldElement> = (1..=e).map(|l| p[k * l - 1].clone()).collect();
        let g = KPolynomial::from_power_sums(omega, &pk, e);
        let c = g.coeffs[j].clone();
        sums.push(if j % 2 == 1 { -&c } else { c });
    }
    Ok(KPolynomial::from_power_sums(omega, &sums, n))
}

/// Range of how many roots of `sigma_i f` may lie outside the unit circle.
fn outside_count_range(field: &FieldDesc, f: &KPolynomial, i: usize) -> Result<(usize, usize)> {
    let mut sure = 0;
    let mut maybe = 0;
    for (mult, g) in f.squarefree_decomposition()? {
        let encl = roots(&embed_poly(field, &g, i))?;
        for (lo, hi, k) in cluster_moduli(&encl) {
            if lo > 1.0 {
                sure += k * mult as usize;
            } else if hi >= 1.0 {
                maybe += k * mult as usize;
            }
        }
    }
    Ok((sure, sure + maybe))
}

fn has_common_root(a: &KPolynomial, b: &KPolynomial) -> Result<bool> {
    Ok(a.gcd(b)?.degree().unwrap_or(0) > 0)
}

/// Whether `prod_i M(sigma_i f)^{d_i}` can equal `target` exactly for the
/// monic `f`, decided through the subset-product polynomials.
fn measure_tie(field: &FieldDesc, f: &KPolynomial, target: &Rational) -> Result<bool> {
    let omega = f.omega;
    let t = FieldElement::from_rational(omega, target.clone());
    let mt = FieldElement::from_rational(omega, -target);
    if field.s > 0 {
        let (lo, hi) = outside_count_range(field, f, 0)?;
        for j in lo..=hi {
            let pj = subset_product_poly(f, j)?;
            if has_common_root(&pj, &pj.conj().reciprocal_scaled(&t))? {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    if field.r == 1 {
        let (lo, hi) = outside_count_range(field, f, 0)?;
        for j in lo..=hi {
            let pj = subset_product_poly(f, j)?;
            if pj.eval(&t).is_zero() || pj.eval(&mt).is_zero() {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    let (lo1, hi1) = outside_count_range(field, f, 0)?;
    let (lo2, hi2) = outside_count_range(field, f, 1)?;
    for j1 in lo1..=hi1 {
        let p1 = subset_product_poly(f, j1)?;
        for j2 in lo2..=hi2 {
            let p2 = subset_product_poly(f, j2)?.conj();
            for s in [&t, &mt] {
                if has_common_root(&p1, &p2.reciprocal_scaled(s))? {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Compares `M^k(f)^m` with `bound` for a monic `f`. Ties are decided exactly;
/// otherwise the certified enclosure decides.
pub fn compare_mahler_k_pow_m(field: &FieldDesc, f: &KPolynomial, bound: &Rational) -> Result<Ordering> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let fin = Rational::one() / f.content_norm(field)?;
    compare_arch_measure(field, f, &(bound / &fin))
}

/// Compares `prod_i M(sigma_i f)^{d_i}` with `target` for a monic `f`.
pub(crate) fn compare_arch_measure(field: &FieldDesc, f: &KPolynomial, target: &Rational) -> Result<Ordering> {
    let mut arch = MeasureValue::exact(1.0);
    for i in 0..field.arch_places() {
        arch = arch.mul(&embedded_measure(field, f, i)?.powi(field.arch_degree(i) as i32));
    }
    decide(field, f, target, &arch)
}

fn decide(field: &FieldDesc, f: &KPolynomial, target: &Rational, arch: &MeasureValue) -> Result<Ordering> {
    let t = to_f64(target);
    if arch.hi < t {
        return Ok(Ordering::Less);
    }
    if arch.lo > t {
        return Ok(Ordering::Greater);
    }
    if measure_tie(field, f, target)? {
        return Ok(Ordering::Equal);
    }
    // Not equal; the enclosure is already narrower than any meaningful gap.
    if arch.rel_err() > 1e-9 {
        return Err(Error::Unresolved(format!(
            "measure enclosure [{}, {}] too wide around bound {t}",
            arch.lo, arch.hi
        )));
    }
    Ok(if arch.value < t { Ordering::Less } else { Ordering::Greater })
}

/// `H(beta) = M^k(f)^{1/e}` for a root `beta` of the monic irreducible `f`.
pub fn root_height_bridge(field: &FieldDesc, f: &KPolynomial) -> Result<HeightValue> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let e = f.degree().unwrap();
    if !crate::enumeration::is_irreducible_over(field, f)? {
        return Err(Error::Reducible(f.to_string()));
    }
    let mk = mahler_k_pow_m(field, f)?;
    let root = mk.powf(1.0 / (field.m as f64 * e as f64));
    Ok(HeightValue {
        pow_m: None,
        m: field.m,
        finite_part: Rational::one() / f.content_norm(field)?,
        value: root.value,
        rel_err: root.rel_err(),
    })
}
