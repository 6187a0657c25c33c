//! Polynomials over `k` with exact coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::lattice::Hnf;
use crate::numberfield::{FieldDesc, FieldElement, Omega};
use crate::rational::{to_i128, Rational};
use crate::{Error, Result};

/// `a_0 X^e + a_1 X^{e-1} + ... + a_e`, stored leading coefficient first.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KPolynomial {
    pub coeffs: Vec<FieldElement>,
    pub omega: Omega,
}

impl KPolynomial {
    pub fn new(omega: Omega, coeffs: Vec<FieldElement>) -> Self {
        let mut p = KPolynomial { coeffs, omega };
        p.trim();
        p
    }

    /// Monic polynomial `X^e + a_1 X^{e-1} + ... + a_e` from its lower coefficients.
    pub fn monic(omega: Omega, lower: &[FieldElement]) -> Self {
        let mut coeffs = Vec::with_capacity(lower.len() + 1);
        coeffs.push(FieldElement::one(omega));
        coeffs.extend(lower.iter().cloned());
        KPolynomial { coeffs, omega }
    }

    pub fn from_rationals(omega: Omega, coeffs: &[Rational]) -> Self {
        Self::new(
            omega,
            coeffs.iter().map(|c| FieldElement::from_rational(omega, c.clone())).collect(),
        )
    }

    pub fn from_ints(omega: Omega, coeffs: &[i64]) -> Self {
        Self::new(omega, coeffs.iter().map(|&c| FieldElement::from_int(omega, c)).collect())
    }

    pub fn zero(omega: Omega) -> Self {
        KPolynomial { coeffs: Vec::new(), omega }
    }

    pub fn one(omega: Omega) -> Self {
        KPolynomial { coeffs: vec![FieldElement::one(omega)], omega }
    }

    /// `X - a`.
    pub fn linear(a: &FieldElement) -> Self {
        KPolynomial { coeffs: vec![FieldElement::one(a.omega), -a], omega: a.omega }
    }

    fn trim(&mut self) {
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        self.coeffs.drain(..lead_zeros);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&FieldElement> {
        self.coeffs.first()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| *c == FieldElement::one(self.omega))
    }

    /// Coefficient of `X^i`.
    pub fn coeff_of_power(&self, i: usize) -> FieldElement {
        match self.degree() {
            Some(e) if i <= e => self.coeffs[e - i].clone(),
            _ => FieldElement::zero(self.omega),
        }
    }

    fn from_powers(omega: Omega, by_power: Vec<FieldElement>) -> Self {
        let mut coeffs = by_power;
        coeffs.reverse();
        Self::new(omega, coeffs)
    }

    pub fn add(&self, o: &KPolynomial) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| &self.coeff_of_power(i) + &o.coeff_of_power(i)).collect();
        Self::from_powers(self.omega, v)
    }

    pub fn sub(&self, o: &KPolynomial) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| &self.coeff_of_power(i) - &o.coeff_of_power(i)).collect();
        Self::from_powers(self.omega, v)
    }

    pub fn mul(&self, o: &KPolynomial) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.omega);
        }
        let mut out = vec![FieldElement::zero(self.omega); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(self.omega, out)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::new(self.omega, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero(self.omega);
        for c in &self.coeffs {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let Some(e) = self.degree() else {
            return self.clone();
        };
        let v = (1..=e)
            .map(|i| &self.coeff_of_power(i) * &FieldElement::from_int(self.omega, i as i64))
            .collect();
        Self::from_powers(self.omega, v)
    }

    /// Galois conjugate of every coefficient.
    pub fn conj(&self) -> Self {
        Self::new(self.omega, self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Euclidean division over `k`.
    pub fn divrem(&self, d: &KPolynomial) -> Result<(KPolynomial, KPolynomial)> {
        let dl = d.lead().ok_or_else(|| Error::Config("division by zero polynomial".into()))?;
        let dl_inv = dl.inv()?;
        let de = d.degree().unwrap();
        let mut r = self.clone();
        let Some(e) = r.degree() else {
            return Ok((Self::zero(self.omega), r));
        };
        if e < de {
            return Ok((Self::zero(self.omega), r));
        }
        let mut q = vec![FieldElement::zero(self.omega); e - de + 1];
        while let Some(re) = r.degree() {
            if re < de {
                break;
            }
            let c = &r.coeffs[0] * &dl_inv;
            let shift = re - de;
            q[e - de - shift] = c.clone();
            let mut coeffs = r.coeffs.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                coeffs[j] = &coeffs[j] - &(&c * dc);
            }
            // The leading coefficient cancels exactly.
            coeffs[0] = FieldElement::zero(self.omega);
            r = Self::new(self.omega, coeffs);
        }
        Ok((Self::new(self.omega, q), r))
    }

    pub fn make_monic(&self) -> Result<Self> {
        match self.lead() {
            None => Ok(self.clone()),
            Some(l) => Ok(self.scale(&l.inv()?)),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &KPolynomial) -> Result<Self> {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r.make_monic()?;
        }
        a.make_monic()
    }

    /// Yun's squarefree decomposition: `self = c * prod_i g_i^i` with monic,
    /// squarefree, pairwise coprime `g_i`; returns `(i, g_i)` for non-constant `g_i`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(u32, KPolynomial)>> {
        let f = self.make_monic()?;
        if f.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp)?;
        let mut b = f.divrem(&a0)?.0;
        let mut c = fp.divrem(&a0)?.0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1u32;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d)?;
            if a.degree().unwrap_or(0) > 0 {
                out.push((i, a.clone()));
            }
            b = b.divrem(&a)?.0;
            c = d.divrem(&a)?.0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        Ok(out)
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        if self.degree().unwrap_or(0) == 0 {
            return Ok(true);
        }
        Ok(self.gcd(&self.derivative())?.degree() == Some(0))
    }

    /// `f * conj(f)`, a polynomial with rational coefficients (the norm from `k` to `Q`).
    pub fn norm_to_q(&self) -> KPolynomial {
        let n = self.mul(&self.conj());
        let coeffs = n
            .coeffs
            .iter()
            .map(|c| FieldElement::from_rational(Omega::Rational, c.a.clone()))
            .collect();
        KPolynomial::new(Omega::Rational, coeffs)
    }

    /// Norm of the fractional ideal generated by the coefficients.
    pub fn content_norm(&self, field: &FieldDesc) -> Result<Rational> {
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            let (_, _, d) = c.integral_repr();
            den = num_integer::Integer::lcm(&den, &d);
        }
        let mut gens = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (x, y, d) = c.integral_repr();
            let s = &den / d;
            gens.push((to_i128(&(x * &s))?, to_i128(&(y * s))?));
        }
        let ideal = Hnf::ideal_from_elements(&gens, field.omega);
        let idx = if field.is_rational() { ideal.a } else { ideal.index() };
        let denm = num_traits::pow(den, field.m as usize);
        Ok(Rational::new(BigInt::from(idx), denm))
    }

    /// Power sums `p_1, ..., p_count` of the roots of a monic polynomial.
    pub fn power_sums(&self, count: usize) -> Result<Vec<FieldElement>> {
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let e = self.degree().unwrap();
        // Newton: p_k + a_1 p_{k-1} + ... + a_{k-1} p_1 + k a_k = 0 (a_k = 0 beyond e).
        let mut p: Vec<FieldElement> = Vec::with_capacity(count);
        for k in 1..=count {
            let mut acc = if k <= e {
                &self.coeffs[k] * &FieldElement::from_int(self.omega, k as i64)
            } else {
                FieldElement::zero(self.omega)
            };
            for i in 1..=(k - 1).min(e) {
                acc = &acc + &(&self.coeffs[i] * &p[k - i - 1]);
            }
            p.push(-&acc);
        }
        Ok(p)
    }

    /// Monic polynomial of degree `n` whose roots have the given power sums.
    pub fn from_power_sums(omega: Omega, p: &[FieldElement], n: usize) -> Self {
        // k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i
        let mut e = vec![FieldElement::one(omega)];
        for k in 1..=n {
            let mut acc = FieldElement::zero(omega);
            for i in 1..=k {
                let term = &e[k - i] * &p[i - 1];
                acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
            }
            let inv_k = FieldElement::from_rational(omega, Rational::new(BigInt::one(), BigInt::from(k)));
            e.push(&acc * &inv_k);
        }
        let coeffs = e
            .into_iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -&c } else { c })
            .collect();
        KPolynomial::new(omega, coeffs)
    }

    /// `Y^deg * self(b / Y)`.
    pub fn reciprocal_scaled(&self, b: &FieldElement) -> Self {
        let Some(e) = self.degree() else {
            return self.clone();
        };
        // coefficient of Y^i is a_{(power e-i)} b^{e-i}
        let v = (0..=e)
            .map(|i| &self.coeff_of_power(e - i) * &b.pow((e - i) as u32))
            .collect();
        Self::from_powers(self.omega, v)
    }

    pub fn to_f64_parts(&self) -> Vec<(f64, f64)> {
        self.coeffs
            .iter()
            .map(|c| (crate::rational::to_f64(&c.a), crate::rational::to_f64(&c.b)))
            .collect()
    }

    pub fn is_rational_poly(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_rational())
    }
}

impl fmt::Display for KPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let e = self.degree().unwrap();
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match e - i {
                0 => format!("({c})"),
                1 => format!("({c})*X"),
                k => format!("({c})*X^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn binomial(n: u32, k: u32) -> u64 {
    assert!(k <= n);
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    const Q: Omega = Omega::Rational;

    #[test]
    fn division_and_gcd() {
        let f = KPolynomial::from_ints(Q, &[1, 0, -1]); // X^2 - 1
        let g = KPolynomial::from_ints(Q, &[1, -1]);
        let (q, r) = f.divrem(&g).unwrap();
        assert_eq!(q, KPolynomial::from_ints(Q, &[1, 1]));
        assert!(r.is_zero());
        let h = KPolynomial::from_ints(Q, &[1, 0, -3, 2]); // (X-1)^2 (X+2)
        assert_eq!(f.gcd(&h).unwrap(), g);
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities() {
        let a = KPolynomial::from_ints(Q, &[1, -1]);
        let b = KPolynomial::from_ints(Q, &[1, 0, 1]);
        let f = a.mul(&a).mul(&a).mul(&b);
        let dec = f.squarefree_decomposition().unwrap();
        assert_eq!(dec, vec![(1, b), (3, a)]);
        assert!(!f.is_squarefree().unwrap());
    }

    #[test]
    fn power_sums_roundtrip() {
        let k = FieldDesc::quadratic(5).unwrap();
        let f = KPolynomial::monic(
            k.omega,
            &[FieldElement::new(k.omega, int(1), int(2)), FieldElement::new(k.omega, rat(1, 3), int(-1)), FieldElement::from_int(k.omega, 7)],
        );
        let p = f.power_sums(3).unwrap();
        assert_eq!(KPolynomial::from_power_sums(k.omega, &p, 3), f);
        // Roots 2 and 3: p_1 = 5, p_2 = 13, p_3 = 35
        let g = KPolynomial::from_ints(Q, &[1, -5, 6]);
        let p = g.power_sums(3).unwrap();
        assert_eq!(p.iter().map(|x| x.a.clone()).collect::<Vec<_>>(), vec![int(5), int(13), int(35)]);
    }

    #[test]
    fn content_norms() {
        let q = FieldDesc::rational();
        let f = KPolynomial::from_rationals(Q, &[int(1), rat(-1, 2)]);
        assert_eq!(f.content_norm(&q).unwrap(), rat(1, 2));
        let g = KPolynomial::from_ints(Q, &[2, -1]);
        assert_eq!(g.content_norm(&q).unwrap(), int(1));
        let k = FieldDesc::quadratic(3).unwrap();
        let h = KPolynomial::new(k.omega, vec![FieldElement::from_int(k.omega, 2), FieldElement::new(k.omega, int(1), int(1))]);
        // (2, 1 + sqrt 3) has norm 2
        assert_eq!(h.content_norm(&k).unwrap(), int(2));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(5, 5), 1);
        assert_eq!(binomial(10, 3), 120);
    }
}
