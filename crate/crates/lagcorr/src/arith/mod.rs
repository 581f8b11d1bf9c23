//! Exact scalar arithmetic: rationals, quadratic orders, polynomials, cyclotomic fields.

pub mod cyclo;
pub mod poly;
pub mod ring;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use cyclo::{Cyclo, CycloField};
pub use poly::{sturm_positive_roots, RatPoly};
pub use ring::{
    degnorm, quad_norm, residue_order, xgcd, BaseRing, Disc, QuadElem, EUCLIDEAN_DISCRIMINANTS,
};

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Squarefree part of a positive integer: the unique squarefree s with n / s a square.
///
/// Trial division; inputs here are products of small degrees.
pub fn squarefree_part(n: &BigInt) -> BigInt {
    assert!(n.is_positive(), "squarefree part of a nonpositive integer");
    let mut m = n.clone();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &p;
        }
        p += 1;
    }
    out * m
}
