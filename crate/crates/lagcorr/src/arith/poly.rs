//! Dense univariate polynomials over Q and exact counting of positive real roots.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial with rational coefficients, little-endian. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        RatPoly::new(cs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn constant(c: BigRational) -> Self {
        RatPoly::new(vec![c])
    }

    pub fn one() -> Self {
        RatPoly::constant(BigRational::one())
    }

    /// x^k
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        RatPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            None => RatPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Long division; panics on a zero divisor.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (RatPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[k + i] = &r[k + i] - &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (RatPoly::new(q), RatPoly::new(r))
    }

    pub fn rem(&self, d: &RatPoly) -> RatPoly {
        self.div_rem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Sign of p(x) for x -> +infinity.
    fn sign_at_infinity(&self) -> i8 {
        match self.leading() {
            None => 0,
            Some(l) if l.is_positive() => 1,
            Some(_) => -1,
        }
    }

    fn sign_at(&self, x: &BigRational) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Sturm chain p, p', -rem(p, p'), ...
    pub fn sturm_chain(&self) -> Vec<RatPoly> {
        let mut chain = vec![self.clone()];
        if self.is_zero() {
            return chain;
        }
        let mut a = self.clone();
        let mut b = self.derivative();
        while !b.is_zero() {
            chain.push(b.clone());
            let r = -&a.rem(&b);
            a = b;
            b = r;
        }
        chain
    }

    /// Number of distinct real roots in (0, infinity) of a polynomial with p(0) != 0.
    fn distinct_positive_roots(&self) -> usize {
        let chain = self.sturm_chain();
        let zero = BigRational::zero();
        let at0: Vec<i8> = chain.iter().map(|p| p.sign_at(&zero)).collect();
        let atinf: Vec<i8> = chain.iter().map(|p| p.sign_at_infinity()).collect();
        sign_changes(&at0) - sign_changes(&atinf)
    }
}

fn sign_changes(signs: &[i8]) -> usize {
    let nz: Vec<i8> = signs.iter().copied().filter(|&s| s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of roots in (0, infinity), counted with multiplicity.
///
/// With g_0 = p and g_{k+1} = gcd(g_k, g_k'), a root of multiplicity m
/// is a root of g_0, ..., g_{m-1}, so summing distinct counts over the
/// chain recovers multiplicities.
pub fn sturm_positive_roots(p: &RatPoly) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.coeff(0).is_zero() {
        return Err(Error::RootAtZero);
    }
    let mut total = 0;
    let mut g = p.clone();
    while g.degree().unwrap_or(0) > 0 {
        total += g.distinct_positive_roots();
        g = g.gcd(&g.derivative());
    }
    Ok(total)
}

/// Lagrange interpolation through (x_i, y_i) with distinct x_i.
pub fn interpolate(points: &[(BigRational, BigRational)]) -> RatPoly {
    let mut acc = RatPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = RatPoly::one();
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                basis = &basis * &RatPoly::new(vec![-xj.clone(), BigRational::one()]);
                denom *= xi - xj;
            }
        }
        acc = &acc + &basis.scale(&(yi / denom));
    }
    acc
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return RatPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RatPoly::new(c)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_root_oracles() {
        assert_eq!(sturm_positive_roots(&RatPoly::from_ints(&[3, 1])), Ok(0));
        assert_eq!(sturm_positive_roots(&RatPoly::from_ints(&[-1, 0, 1])), Ok(1));
        assert_eq!(sturm_positive_roots(&RatPoly::from_ints(&[4, -4, 1])), Ok(2));
    }

    #[test]
    fn errors() {
        assert_eq!(sturm_positive_roots(&RatPoly::zero()), Err(Error::ZeroPolynomial));
        assert_eq!(sturm_positive_roots(&RatPoly::from_ints(&[0, 1])), Err(Error::RootAtZero));
    }

    #[test]
    fn high_multiplicity_and_mixed_signs() {
        // (t-1)^3 (t+2)^2 (t-5)
        let mut p = RatPoly::one();
        for r in [1, 1, 1, -2, -2, 5] {
            p = &p * &RatPoly::from_ints(&[-r, 1]);
        }
        assert_eq!(sturm_positive_roots(&p), Ok(4));
        // t^2 + 1 has no real roots
        assert_eq!(sturm_positive_roots(&RatPoly::from_ints(&[1, 0, 1])), Ok(0));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = RatPoly::from_ints(&[7, -3, 0, 2]);
        let pts: Vec<_> = (0..4)
            .map(|i| {
                let x = BigRational::from_integer(BigInt::from(i));
                (x.clone(), p.eval(&x))
            })
            .collect();
        assert_eq!(interpolate(&pts), p);
    }

    #[test]
    fn division_identity() {
        let a = RatPoly::from_ints(&[1, 2, 3, 4, 5]);
        let b = RatPoly::from_ints(&[-1, 0, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }
}
