//! Exact real numbers of the form `p + q sqrt(d)` with rational `p, q` and a
//! fixed positive squarefree `d`. Every `H^m` of a point over a field of degree
//! at most two lies in such a set, so height comparisons never need rounding.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{int, to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadReal {
    pub p: Rational,
    pub q: Rational,
    /// Radicand; `0` marks a plain rational.
    pub d: i64,
}

impl QuadReal {
    pub fn rational(p: Rational) -> Self {
        QuadReal { p, q: Rational::zero(), d: 0 }
    }

    pub fn new(p: Rational, q: Rational, d: i64) -> Self {
        assert!(d > 0 || q.is_zero(), "radicand must be positive");
        if q.is_zero() {
            return QuadReal::rational(p);
        }
        QuadReal { p, q, d }
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    fn radicand(&self, other: &QuadReal) -> i64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (a, b) => {
                assert_eq!(a, b, "mixing radicands");
                a
            }
        }
    }

    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp(&Rational::zero());
        let sq = self.q.cmp(&Rational::zero());
        if sq == Ordering::Equal {
            return sp;
        }
        if sp == Ordering::Equal || sp == sq {
            return sq;
        }
        // Opposite signs: compare p^2 with q^2 d.
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * int(self.d);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        QuadReal { p: -&self.p, q: -&self.q, d: self.d }
    }

    pub fn add(&self, o: &QuadReal) -> Self {
        let d = self.radicand(o);
        QuadReal::new(&self.p + &o.p, &self.q + &o.q, d)
    }

    pub fn sub(&self, o: &QuadReal) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QuadReal) -> Self {
        let d = self.radicand(o);
        QuadReal::new(
            &self.p * &o.p + &self.q * &o.q * int(d),
            &self.p * &o.q + &self.q * &o.p,
            d,
        )
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadReal::new(&self.p * r, &self.q * r, self.d)
    }

    pub fn max(self, o: QuadReal) -> Self {
        if self.cmp_exact(&o) == Ordering::Less {
            o
        } else {
            self
        }
    }

    /// `max(1, |self|)`.
    pub fn max_one_abs(&self) -> Self {
        self.abs().max(QuadReal::one())
    }

    pub fn cmp_exact(&self, o: &QuadReal) -> Ordering {
        self.sub(o).signum()
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        QuadReal { p: &self.p - r, q: self.q.clone(), d: self.d }.signum()
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.p) + to_f64(&self.q) * (self.d as f64).sqrt()
    }
}

impl fmt::Display for QuadReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{} + {}*sqrt({})", self.p, self.q, self.d)
        }
    }
}
