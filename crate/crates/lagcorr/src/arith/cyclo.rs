//! Exact arithmetic in the cyclotomic field Q(zeta_M), as Q[x]/Phi_M.
//!
//! Used for character values of monomial representations whose phases lie in (1/M)Z/Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::poly::RatPoly;

/// The M-th cyclotomic polynomial.
pub fn cyclotomic_poly(m: u64) -> RatPoly {
    assert!(m >= 1);
    let mut p = &RatPoly::monomial(m as usize) - &RatPoly::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let (q, r) = p.div_rem(&cyclotomic_poly(d));
            debug_assert!(r.is_zero());
            p = q;
        }
    }
    p
}

/// The field Q(zeta_M) with zeta_M = exp(2 pi i / M).
#[derive(Clone, Debug)]
pub struct CycloField {
    m: u64,
    modulus: RatPoly,
}

/// An element of a [`CycloField`], stored reduced modulo Phi_M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclo {
    poly: RatPoly,
}

impl CycloField {
    pub fn new(m: u64) -> Self {
        CycloField { m, modulus: cyclotomic_poly(m) }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    fn reduce(&self, p: RatPoly) -> Cyclo {
        Cyclo { poly: p.rem(&self.modulus) }
    }

    pub fn zero(&self) -> Cyclo {
        Cyclo { poly: RatPoly::zero() }
    }

    pub fn from_rational(&self, r: BigRational) -> Cyclo {
        self.reduce(RatPoly::constant(r))
    }

    /// exp(2 pi i * phase); the phase must have denominator dividing M.
    pub fn root_of_unity(&self, phase: &BigRational) -> Cyclo {
        let m = BigInt::from(self.m);
        let scaled = phase * BigRational::from_integer(m.clone());
        assert!(scaled.is_integer(), "phase {phase} has denominator not dividing {}", self.m);
        let k = scaled.to_integer().mod_floor(&m).to_usize().unwrap();
        self.reduce(RatPoly::monomial(k))
    }

    pub fn add(&self, x: &Cyclo, y: &Cyclo) -> Cyclo {
        Cyclo { poly: &x.poly + &y.poly }
    }

    pub fn mul(&self, x: &Cyclo, y: &Cyclo) -> Cyclo {
        self.reduce(&x.poly * &y.poly)
    }

    pub fn scale(&self, x: &Cyclo, r: &BigRational) -> Cyclo {
        Cyclo { poly: x.poly.scale(r) }
    }

    /// Complex conjugation: x^k -> x^(M-k).
    pub fn conj(&self, x: &Cyclo) -> Cyclo {
        let mut acc = RatPoly::zero();
        for (k, c) in x.poly.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((self.m as usize) - k) % self.m as usize;
            acc = &acc + &RatPoly::monomial(e).scale(c);
        }
        self.reduce(acc)
    }

    /// |x|^2 = x * conj(x). Real, but rational only in special cases; sums of these
    /// over a group often are, which is what callers check with [`Cyclo::as_rational`].
    pub fn abs2(&self, x: &Cyclo) -> Cyclo {
        self.mul(x, &self.conj(x))
    }
}

impl Cyclo {
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Some(r) iff the element is the rational r.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.poly.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.poly.coeff(0)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn cyclotomic_degrees() {
        for (m, phi) in [(1, 1), (2, 1), (3, 2), (4, 2), (6, 2), (8, 4), (12, 4)] {
            assert_eq!(cyclotomic_poly(m).degree(), Some(phi));
        }
        assert_eq!(cyclotomic_poly(4), RatPoly::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        let f = CycloField::new(12);
        let mut acc = f.zero();
        for k in 0..6 {
            acc = f.add(&acc, &f.root_of_unity(&r(k, 6)));
        }
        assert!(acc.is_zero());
        let z = f.root_of_unity(&r(1, 12));
        assert_eq!(f.abs2(&z).as_rational(), Some(r(1, 1)));
        let s = f.add(&f.root_of_unity(&r(0, 1)), &f.root_of_unity(&r(1, 4)));
        assert_eq!(f.abs2(&s).as_rational(), Some(r(2, 1)));
        let w = f.add(&f.root_of_unity(&r(0, 1)), &f.root_of_unity(&r(1, 12)));
        assert_eq!(f.abs2(&w).as_rational(), None);
    }
}
