//! Seeded random generators for property checks and the verification suites.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{BaseRing, QuadElem};
use crate::correspondence::SymplecticAuto;
use crate::isogeny::HermitianMat;
use crate::linalg::Mat;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Element of O with coordinates in [-r, r].
pub fn quad(rng: &mut impl Rng, ring: BaseRing, r: i64) -> QuadElem {
    let a = rng.gen_range(-r..=r);
    let b = if ring.is_cm() { rng.gen_range(-r..=r) } else { 0 };
    QuadElem::from_ints(ring, a, b)
}

pub fn nonzero_quad(rng: &mut impl Rng, ring: BaseRing, r: i64) -> QuadElem {
    loop {
        let x = quad(rng, ring, r);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Random integral Hermitian matrix with entries bounded by r.
pub fn hermitian(rng: &mut impl Rng, ring: BaseRing, g: usize, r: i64) -> Mat {
    let mut m = Mat::zeros(ring, g, g);
    for i in 0..g {
        m.set(i, i, QuadElem::from_int(ring, rng.gen_range(-r..=r)));
        for j in i + 1..g {
            let x = quad(rng, ring, r);
            m.set(j, i, x.conj());
            m.set(i, j, x);
        }
    }
    m
}

/// Random nondegenerate Hermitian form.
pub fn nondegenerate_hermitian(
    rng: &mut impl Rng,
    ring: BaseRing,
    g: usize,
    r: i64,
) -> HermitianMat {
    loop {
        let m = hermitian(rng, ring, g, r);
        if m.is_invertible() {
            return HermitianMat::new(m).expect("hermitian by construction");
        }
    }
}

/// Random integral matrix invertible over K.
pub fn invertible(rng: &mut impl Rng, ring: BaseRing, g: usize, r: i64) -> Mat {
    loop {
        let m = Mat::from_fn(ring, g, g, |_, _| quad(rng, ring, r));
        if m.is_invertible() {
            return m;
        }
    }
}

/// A* A + I, positive definite.
pub fn positive_definite(rng: &mut impl Rng, ring: BaseRing, g: usize, r: i64) -> HermitianMat {
    let a = Mat::from_fn(ring, g, g, |_, _| quad(rng, ring, r));
    let m = &(&a.conj_transpose() * &a) + &Mat::identity(ring, g);
    HermitianMat::new(m).expect("hermitian by construction")
}

/// Random element of SL_2(Z) as a word in f(k) and S.
pub fn sl2z(rng: &mut impl Rng, max_len: usize) -> SymplecticAuto {
    let ring = BaseRing::Integers;
    let mut g = SymplecticAuto::identity(ring, 1);
    let len = rng.gen_range(1..=max_len);
    for _ in 0..len {
        let k = rng.gen_range(-3..=3);
        g = g.mul(&SymplecticAuto::shear(ring, 1, k));
        if rng.gen_bool(0.6) {
            g = g.mul(&SymplecticAuto::fourier(ring, 1));
        }
    }
    g
}

/// One random generator of U: a Hermitian shear, its transpose, a Levi element, S, or g_a.
pub fn generator(rng: &mut impl Rng, ring: BaseRing, g: usize) -> SymplecticAuto {
    let choices: &[u8] = if ring.is_cm() { &[0, 1, 2, 3, 4] } else { &[0, 1, 2, 3] };
    match *choices.choose(rng).unwrap() {
        0 => SymplecticAuto::shear_by(&hermitian(rng, ring, g, 2)).unwrap(),
        1 => SymplecticAuto::lower_shear_by(&hermitian(rng, ring, g, 2)).unwrap(),
        2 => {
            // unimodular-ish Levi part keeps denominators small
            let mut a = Mat::identity(ring, g);
            if g > 1 {
                let (i, j) = (rng.gen_range(0..g), rng.gen_range(0..g));
                if i != j {
                    a.set(i, j, quad(rng, ring, 2));
                }
            }
            if rng.gen_bool(0.3) {
                a = a.scale_int(-1);
            }
            SymplecticAuto::levi(&a).unwrap()
        }
        3 => SymplecticAuto::fourier(ring, g),
        _ => SymplecticAuto::g_a(&nonzero_quad(rng, ring, 1), g).unwrap(),
    }
}

/// Product of 1..=len random generators.
pub fn symplectic(rng: &mut impl Rng, ring: BaseRing, g: usize, len: usize) -> SymplecticAuto {
    let mut x = generator(rng, ring, g);
    for _ in 1..rng.gen_range(1..=len) {
        x = x.mul(&generator(rng, ring, g));
    }
    x
}

/// Random integral symplectic element (no g_a factors, which introduce denominators).
pub fn integral_symplectic(
    rng: &mut impl Rng,
    ring: BaseRing,
    g: usize,
    len: usize,
) -> SymplecticAuto {
    loop {
        let x = symplectic(rng, ring, g, len);
        if x.matrix().is_integral() {
            return x;
        }
    }
}

/// Random element of U0.
pub fn u0(rng: &mut impl Rng, ring: BaseRing, g: usize, len: usize) -> SymplecticAuto {
    loop {
        let x = symplectic(rng, ring, g, len);
        if x.in_u0() {
            return x;
        }
    }
}

/// Random element of U0 built from shears with denominators up to `den`, alternated with S.
/// These carry nontrivial N and pi0 data, unlike integral samples.
pub fn rational_u0(
    rng: &mut impl Rng,
    ring: BaseRing,
    g: usize,
    len: usize,
    den: i64,
) -> SymplecticAuto {
    let s = SymplecticAuto::fourier(ring, g);
    loop {
        let mut x = SymplecticAuto::identity(ring, g);
        for _ in 0..rng.gen_range(1..=len) {
            let q = QuadElem::from_rational(
                ring,
                BigRational::new(1.into(), rng.gen_range(1..=den).into()),
            );
            let b = hermitian(rng, ring, g, 2).scale(&q);
            x = x.mul(&SymplecticAuto::shear_by(&b).expect("hermitian by construction")).mul(&s);
        }
        if x.in_u0() {
            return x;
        }
    }
}

/// Mix of U0 elements and elements with singular b-block (identity, -I, Levi, lower shears).
pub fn mixed(rng: &mut impl Rng, ring: BaseRing, g: usize) -> SymplecticAuto {
    match rng.gen_range(0..6) {
        0 => SymplecticAuto::identity(ring, g),
        1 => SymplecticAuto::fourier(ring, g).mul(&SymplecticAuto::fourier(ring, g)),
        2 => SymplecticAuto::lower_shear_by(&hermitian(rng, ring, g, 2)).unwrap(),
        _ => symplectic(rng, ring, g, 3),
    }
}
