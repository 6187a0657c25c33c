//! Rank-`m` integer lattices inside `O_k = Z[omega]`, kept in Hermite normal
//! form, and the fractional ideals built from them.

use num_integer::Integer;

use crate::numberfield::{FieldDesc, FinitePrime, Omega, PlaceSet, SIdeal, Splitting};

/// The Z-module `{ u (a, 0) + v (b, c) : u, v in Z }` in coordinates over the
/// integral basis `(1, omega)`, with `a, c > 0` and `0 <= b < a`.
///
/// Over `Q` only `a` is meaningful and the module is `aZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Hnf {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

/// Multiplication in `Z[omega]` where `omega^2 = t omega - n`.
pub fn mul_coords(omega: Omega, (x1, y1): (i128, i128), (x2, y2): (i128, i128)) -> (i128, i128) {
    let (t, n) = omega.min_poly();
    let (t, n) = (t as i128, n as i128);
    (x1 * x2 - n * y1 * y2, x1 * y2 + x2 * y1 + t * y1 * y2)
}

impl Hnf {
    pub const UNIT: Hnf = Hnf { a: 1, b: 0, c: 1 };

    pub fn rational(a: i128) -> Hnf {
        Hnf { a: a.abs(), b: 0, c: 1 }
    }

    /// Hermite normal form of the Z-span of `gens`; the span must have rank 2.
    pub fn from_generators(gens: &[(i128, i128)]) -> Hnf {
        let mut pivot: Option<(i128, i128)> = None;
        let mut a: i128 = 0;
        for &(x, y) in gens {
            match pivot {
                None if y != 0 => pivot = Some((x, y)),
                None => a = a.gcd(&x),
                Some((px, py)) => {
                    if y == 0 {
                        a = a.gcd(&x);
                        continue;
                    }
                    let eg = py.extended_gcd(&y);
                    let g = eg.gcd;
                    let new_pivot = (eg.x * px + eg.y * x, eg.x * py + eg.y * y);
                    let other_x = (y / g) * px - (py / g) * x;
                    a = a.gcd(&other_x);
                    pivot = Some(new_pivot);
                }
            }
        }
        let (px, py) = pivot.expect("generators span a rank-2 lattice");
        assert!(a != 0, "generators span a rank-2 lattice");
        let (px, py) = if py < 0 { (-px, -py) } else { (px, py) };
        let a = a.abs();
        Hnf { a, b: px.rem_euclid(a), c: py }
    }

    pub fn index(&self) -> i128 {
        self.a * self.c
    }

    pub fn contains(&self, x: i128, y: i128) -> bool {
        if y % self.c != 0 {
            return false;
        }
        let v = y / self.c;
        (x - v * self.b) % self.a == 0
    }

    pub fn contains_rational(&self, x: i128) -> bool {
        x % self.a == 0
    }

    pub fn mul(&self, other: &Hnf, omega: Omega) -> Hnf {
        if omega == Omega::Rational {
            return Hnf::rational(self.a * other.a);
        }
        let g1 = [(self.a, 0), (self.b, self.c)];
        let g2 = [(other.a, 0), (other.b, other.c)];
        let mut gens = Vec::with_capacity(4);
        for &u in &g1 {
            for &v in &g2 {
                gens.push(mul_coords(omega, u, v));
            }
        }
        Hnf::from_generators(&gens)
    }

    pub fn pow(&self, e: u32, omega: Omega) -> Hnf {
        let mut acc = Hnf::UNIT;
        for _ in 0..e {
            acc = acc.mul(self, omega);
        }
        acc
    }

    /// Integral ideal generated by the given elements of `O_k`.
    pub fn ideal_from_elements(elems: &[(i128, i128)], omega: Omega) -> Hnf {
        if omega == Omega::Rational {
            let g = elems.iter().fold(0i128, |g, &(x, _)| g.gcd(&x));
            return Hnf::rational(g);
        }
        let mut gens = Vec::with_capacity(2 * elems.len());
        for &e in elems {
            gens.push(e);
            gens.push(mul_coords(omega, e, (0, 1)));
        }
        Hnf::from_generators(&gens)
    }
}

/// HNF of a finite prime, or of its Galois conjugate.
pub fn prime_hnf(field: &FieldDesc, prime: &FinitePrime, conjugate: bool) -> Hnf {
    let p = prime.p as i128;
    match prime.splitting {
        Splitting::Rational => Hnf::rational(p),
        Splitting::Inert => Hnf { a: p, b: 0, c: p },
        Splitting::Split | Splitting::Ramified => {
            let c = prime.residue.expect("split and ramified primes carry a residue") as i128;
            let c = if conjugate {
                field.omega.conjugate_residue(c, p)
            } else {
                c
            };
            Hnf { a: p, b: (-c).rem_euclid(p), c: 1 }
        }
    }
}

/// Integral ideal `A = prod p_l^{g_l}` (or its conjugate).
pub fn sideal_hnf(ps: &PlaceSet, ideal: &SIdeal, conjugate: bool) -> Hnf {
    let omega = ps.field.omega;
    let mut acc = Hnf::UNIT;
    for (prime, &g) in ps.primes.iter().zip(&ideal.exps) {
        if g > 0 {
            acc = acc.mul(&prime_hnf(&ps.field, prime, conjugate).pow(g, omega), omega);
        }
    }
    acc
}

/// A fractional ideal `{ (x + y omega) / den : (x, y) in hnf }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdealLattice {
    pub hnf: Hnf,
    pub den: i128,
}

impl IdealLattice {
    pub fn integers() -> Self {
        IdealLattice { hnf: Hnf::UNIT, den: 1 }
    }

    /// `A^{-1} = conj(A) / N(A)`.
    pub fn inverse_of(ps: &PlaceSet, ideal: &SIdeal) -> Self {
        let norm = ideal.norm(ps) as i128;
        if ps.field.omega == Omega::Rational {
            return IdealLattice { hnf: Hnf::rational(1), den: norm };
        }
        IdealLattice {
            hnf: sideal_hnf(ps, ideal, true),
            den: norm,
        }
    }

    pub fn contains(&self, omega: Omega, x: i128, y: i128, den: i128) -> bool {
        // (x + y w)/den in hnf/self.den  <=>  self.den*(x, y) in den*hnf
        let (sx, sy) = (x * self.den, y * self.den);
        if sx % den != 0 || sy % den != 0 {
            return false;
        }
        if omega == Omega::Rational {
            return sy == 0 && self.hnf.contains_rational(sx / den);
        }
        self.hnf.contains(sx / den, sy / den)
    }

    /// Covolume relative to `O_k` (which has covolume 1).
    pub fn relative_covolume(&self, m: u32) -> f64 {
        let idx = if m == 1 { self.hnf.a } else { self.hnf.index() };
        idx as f64 / (self.den as f64).powi(m as i32)
    }
}
