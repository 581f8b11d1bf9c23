//! The base order O: either the integers or a Euclidean imaginary quadratic order.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Discriminants for which the maximal order of Q(sqrt D) is norm-Euclidean.
pub const EUCLIDEAN_DISCRIMINANTS: [i64; 5] = [-1, -2, -3, -7, -11];

/// A validated Euclidean discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Disc(i64);

impl Disc {
    pub fn new(d: i64) -> Result<Self> {
        if EUCLIDEAN_DISCRIMINANTS.contains(&d) {
            Ok(Disc(d))
        } else {
            Err(Error::UnsupportedDiscriminant(d))
        }
    }

    pub fn value(self) -> i64 {
        self.0
    }
}

/// The order O that plays the role of End(E).
///
/// For a quadratic order the generator is `omega = (1 + sqrt D)/2` when
/// `D = 1 mod 4` and `omega = sqrt D` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseRing {
    Integers,
    Quadratic(Disc),
}

impl BaseRing {
    pub fn quadratic(d: i64) -> Result<Self> {
        Ok(BaseRing::Quadratic(Disc::new(d)?))
    }

    pub fn is_cm(self) -> bool {
        matches!(self, BaseRing::Quadratic(_))
    }

    pub fn discriminant(self) -> Option<i64> {
        match self {
            BaseRing::Integers => None,
            BaseRing::Quadratic(d) => Some(d.0),
        }
    }

    /// Trace and norm of omega, so that `omega^2 = t*omega - n`.
    fn omega_tn(self) -> (i64, i64) {
        match self {
            BaseRing::Integers => (0, 0),
            BaseRing::Quadratic(Disc(d)) => {
                if d.rem_euclid(4) == 1 {
                    (1, (1 - d) / 4)
                } else {
                    (0, -d)
                }
            }
        }
    }

    pub fn zero(self) -> QuadElem {
        QuadElem::from_int(self, 0)
    }

    pub fn one(self) -> QuadElem {
        QuadElem::from_int(self, 1)
    }

    /// The generator omega. Panics on the integers, which have no such element.
    pub fn omega(self) -> QuadElem {
        assert!(self.is_cm(), "the integers have no omega");
        QuadElem::new(self, BigRational::zero(), BigRational::one())
    }

    /// sqrt D written in the omega basis.
    pub fn sqrt_d(self) -> QuadElem {
        let (t, _) = self.omega_tn();
        // omega - conj(omega) = 2 omega - t equals sqrt D when t = 1 and 2 sqrt D when t = 0.
        if t == 1 {
            QuadElem::from_ints(self, -1, 2)
        } else {
            QuadElem::from_ints(self, 0, 1)
        }
    }

    /// Generator of the different: omega - conj(omega).
    pub fn different(self) -> QuadElem {
        let w = self.omega();
        &w - &w.conj()
    }

    /// All units of O.
    pub fn units(self) -> Vec<QuadElem> {
        let mut out = vec![self.one(), -self.one()];
        match self.discriminant() {
            Some(-1) => {
                let i = self.omega();
                out.push(i.clone());
                out.push(-i);
            }
            Some(-3) => {
                let w = self.omega();
                let w2 = &w * &w;
                out.push(w.clone());
                out.push(-w);
                out.push(w2.clone());
                out.push(-w2);
            }
            _ => {}
        }
        out
    }

    pub fn label(self) -> String {
        match self {
            BaseRing::Integers => "Z".to_string(),
            BaseRing::Quadratic(Disc(d)) => format!("D={d}"),
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// An element `a + b*omega` of the fraction field K, with exact rational coordinates.
///
/// Over the integers `b` is always zero and the element is just a rational number.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    ring: BaseRing,
    a: BigRational,
    b: BigRational,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadElem {
    pub fn new(ring: BaseRing, a: BigRational, b: BigRational) -> Self {
        assert!(ring.is_cm() || b.is_zero(), "an element of Q cannot have an omega component");
        QuadElem { ring, a, b }
    }

    pub fn from_int(ring: BaseRing, a: i64) -> Self {
        QuadElem::new(ring, rat(a), BigRational::zero())
    }

    pub fn from_ints(ring: BaseRing, a: i64, b: i64) -> Self {
        QuadElem::new(ring, rat(a), rat(b))
    }

    pub fn from_rational(ring: BaseRing, a: BigRational) -> Self {
        QuadElem::new(ring, a, BigRational::zero())
    }

    pub fn from_bigint(ring: BaseRing, a: BigInt) -> Self {
        QuadElem::from_rational(ring, BigRational::from_integer(a))
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// True iff the element lies in Q (b = 0).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// True iff the element lies in the order O.
    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn conj(&self) -> QuadElem {
        let (t, _) = self.ring.omega_tn();
        QuadElem { ring: self.ring, a: &self.a + &self.b * rat(t), b: -&self.b }
    }

    /// x * conj(x), a nonnegative rational.
    pub fn norm(&self) -> BigRational {
        let (t, n) = self.ring.omega_tn();
        &self.a * &self.a + &self.a * &self.b * rat(t) + &self.b * &self.b * rat(n)
    }

    /// x + conj(x).
    pub fn trace(&self) -> BigRational {
        let (t, _) = self.ring.omega_tn();
        &self.a * rat(2) + &self.b * rat(t)
    }

    pub fn inv(&self) -> Result<QuadElem> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(QuadElem { ring: self.ring, a: &c.a / &n, b: &c.b / &n })
    }

    pub fn scale(&self, r: &BigRational) -> QuadElem {
        QuadElem { ring: self.ring, a: &self.a * r, b: &self.b * r }
    }

    /// Least positive integer N with N*x integral.
    pub fn denominator(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }

    /// Integer coordinates; panics if the element is not integral.
    pub fn int_coords(&self) -> (BigInt, BigInt) {
        assert!(self.is_integral());
        (self.a.to_integer(), self.b.to_integer())
    }

    /// Nearest element of O to x (used as the Euclidean quotient).
    ///
    /// Candidates are the lattice points around the coordinate-wise floor;
    /// the winner minimizes the norm of `x - q`.
    pub fn round_to_order(&self) -> QuadElem {
        let fa = self.a.floor().to_integer();
        let fb = self.b.floor().to_integer();
        let b_range: Vec<i64> = if self.ring.is_cm() { vec![-1, 0, 1, 2] } else { vec![0] };
        let mut best: Option<(BigRational, QuadElem)> = None;
        for da in -1i64..=2 {
            for &db in &b_range {
                let q = QuadElem::new(
                    self.ring,
                    BigRational::from_integer(&fa + BigInt::from(da)),
                    if self.ring.is_cm() {
                        BigRational::from_integer(&fb + BigInt::from(db))
                    } else {
                        BigRational::zero()
                    },
                );
                let n = (self - &q).norm();
                let better = match &best {
                    None => true,
                    Some((bn, _)) => n < *bn,
                };
                if better {
                    best = Some((n, q));
                }
            }
        }
        best.expect("candidate set is nonempty").1
    }

    /// Euclidean division in O: returns (q, r) with `self = q*d + r` and `Nm(r) < Nm(d)`.
    pub fn div_rem(&self, d: &QuadElem) -> Result<(QuadElem, QuadElem)> {
        let exact = self * &d.inv()?;
        let q = exact.round_to_order();
        let r = self - &(&q * d);
        if r.norm() >= d.norm() {
            return Err(Error::Invariant(format!(
                "euclidean step failed: remainder norm {} not below {}",
                r.norm(),
                d.norm()
            )));
        }
        Ok((q, r))
    }

    /// True iff `d` divides `self` in O.
    pub fn divisible_by(&self, d: &QuadElem) -> bool {
        if d.is_zero() {
            return self.is_zero();
        }
        (self * &d.inv().expect("nonzero")).is_integral()
    }

    /// Canonical associate: the one with lexicographically largest (a, b).
    ///
    /// Associates share a norm, so this is the tie-break among minimal-norm
    /// associates; the winner always has a >= 0, and units normalize to 1.
    pub fn normalize_associate(&self) -> (QuadElem, QuadElem) {
        let mut best: Option<(QuadElem, QuadElem)> = None;
        for u in self.ring.units() {
            let cand = &u * self;
            let better = match &best {
                None => true,
                Some((b, _)) => (&cand.a, &cand.b) > (&b.a, &b.b),
            };
            if better {
                best = Some((cand, u));
            }
        }
        best.expect("units are nonempty")
    }

    pub fn is_unit(&self) -> bool {
        self.is_integral() && self.norm().is_one()
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}w", self.b)
        } else if self.b.is_negative() {
            write!(f, "{}-{}w", self.a, -&self.b)
        } else {
            write!(f, "{}+{}w", self.a, self.b)
        }
    }
}

fn check_ring(x: &QuadElem, y: &QuadElem) {
    assert_eq!(x.ring, y.ring, "arithmetic across different base rings");
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, o: &QuadElem) -> QuadElem {
        check_ring(self, o);
        QuadElem { ring: self.ring, a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, o: &QuadElem) -> QuadElem {
        check_ring(self, o);
        QuadElem { ring: self.ring, a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, o: &QuadElem) -> QuadElem {
        check_ring(self, o);
        let (t, n) = self.ring.omega_tn();
        let bd = &self.b * &o.b;
        QuadElem {
            ring: self.ring,
            a: &self.a * &o.a - &bd * rat(n),
            b: &self.a * &o.b + &self.b * &o.a + &bd * rat(t),
        }
    }
}

impl Div for &QuadElem {
    type Output = QuadElem;
    /// Panics on division by zero; use [`QuadElem::inv`] for a checked version.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &QuadElem) -> QuadElem {
        self * &o.inv().expect("division by zero in K")
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { ring: self.ring, a: -&self.a, b: -&self.b }
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadElem {
            type Output = QuadElem;
            fn $m(self, o: QuadElem) -> QuadElem {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// Extended Euclid in O: (g, s, t) with s*a + t*b = g, g a gcd of a and b.
pub fn xgcd(a: &QuadElem, b: &QuadElem) -> Result<(QuadElem, QuadElem, QuadElem)> {
    let ring = a.ring();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (ring.one(), ring.zero());
    let (mut t0, mut t1) = (ring.zero(), ring.one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        let s2 = &s0 - &(&q * &s1);
        let t2 = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    Ok((r0, s0, t0))
}

/// Order of the kernel E[d] of multiplication by d on E.
///
/// For the integers this is d^2 (an elliptic curve has d^2 points of order
/// dividing d); for a CM order it is the norm of d.
pub fn degnorm(d: &QuadElem) -> Result<BigInt> {
    if d.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if !d.is_integral() {
        return Err(Error::NotIntegral(d.to_string()));
    }
    Ok(match d.ring() {
        BaseRing::Integers => {
            let v = d.a().to_integer();
            &v * &v
        }
        BaseRing::Quadratic(_) => d.norm().to_integer(),
    })
}

/// Order of O/dO as an abelian group: |d| over Z, Nm(d) for CM orders.
pub fn residue_order(d: &QuadElem) -> Result<BigInt> {
    if d.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    Ok(match d.ring() {
        BaseRing::Integers => d.a().to_integer().abs(),
        BaseRing::Quadratic(_) => d.norm().to_integer(),
    })
}

/// The norm of x; see [`QuadElem::norm`].
pub fn quad_norm(x: &QuadElem) -> BigRational {
    x.norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: i64) -> BaseRing {
        BaseRing::quadratic(d).unwrap()
    }

    #[test]
    fn norm_examples() {
        let r = q(-1);
        assert_eq!(QuadElem::from_ints(r, 1, 1).norm(), rat(2));
        assert_eq!(r.zero().norm(), rat(0));
        assert_eq!(q(-3).omega().norm(), rat(1));
    }

    #[test]
    fn rejects_non_euclidean() {
        assert_eq!(BaseRing::quadratic(-5), Err(Error::UnsupportedDiscriminant(-5)));
        assert!(BaseRing::quadratic(-4).is_err());
    }

    #[test]
    fn omega_relations() {
        for d in EUCLIDEAN_DISCRIMINANTS {
            let r = q(d);
            let s = r.sqrt_d();
            assert_eq!(&s * &s, QuadElem::from_int(r, d));
            let delta = r.different();
            let dd = &delta * &delta;
            let expect = if d.rem_euclid(4) == 1 { d } else { 4 * d };
            assert_eq!(dd, QuadElem::from_int(r, expect));
        }
    }

    #[test]
    fn units_have_norm_one() {
        for d in EUCLIDEAN_DISCRIMINANTS {
            let us = q(d).units();
            let expected = match d {
                -1 => 4,
                -3 => 6,
                _ => 2,
            };
            assert_eq!(us.len(), expected);
            assert!(us.iter().all(|u| u.is_unit()));
        }
    }

    #[test]
    fn normalization_picks_one_for_units() {
        for d in EUCLIDEAN_DISCRIMINANTS {
            for u in q(d).units() {
                assert!(u.normalize_associate().0.is_one());
            }
        }
        let r = q(-1);
        let x = QuadElem::from_ints(r, 1, -1);
        assert_eq!(x.normalize_associate().0, QuadElem::from_ints(r, 1, 1));
    }

    #[test]
    fn euclidean_division_shrinks_norm() {
        for d in EUCLIDEAN_DISCRIMINANTS {
            let r = q(d);
            for a in -7..=7 {
                for b in -7..=7 {
                    let x = QuadElem::from_ints(r, a, b);
                    for (c, e) in [(2, 1), (3, -1), (1, 2), (5, 0), (0, 3)] {
                        let y = QuadElem::from_ints(r, c, e);
                        let (qq, rem) = x.div_rem(&y).unwrap();
                        assert_eq!(&(&qq * &y) + &rem, x);
                        assert!(rem.norm() < y.norm());
                    }
                }
            }
        }
    }

    #[test]
    fn degnorm_examples() {
        assert_eq!(degnorm(&QuadElem::from_ints(q(-1), 1, 1)).unwrap(), BigInt::from(2));
        assert_eq!(degnorm(&QuadElem::from_int(BaseRing::Integers, 3)).unwrap(), BigInt::from(9));
        for d in EUCLIDEAN_DISCRIMINANTS {
            for u in q(d).units() {
                assert_eq!(degnorm(&u).unwrap(), BigInt::from(1));
            }
        }
        assert_eq!(degnorm(&BaseRing::Integers.zero()), Err(Error::ZeroDivisor));
    }
}
