//! Smith normal form over the Euclidean order O, with kernels and saturation built on it.

use num_bigint::BigInt;
use num_traits::One;

use super::matrix::Mat;
use crate::arith::{residue_order, xgcd, QuadElem};
use crate::error::{Error, Result};

/// `u * m * v` is diagonal with `divisors` then zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: Mat,
    pub v: Mat,
    pub divisors: Vec<QuadElem>,
    pub rank: usize,
}

impl SnfResult {
    /// The divisors that are not units.
    pub fn nonunit_divisors(&self) -> Vec<QuadElem> {
        self.divisors.iter().filter(|d| !d.is_unit()).cloned().collect()
    }
}

fn row_axpy(a: &mut Mat, dst: usize, src: usize, q: &QuadElem) {
    // row dst -= q * row src
    for j in 0..a.cols() {
        let s = a.get(src, j);
        if s.is_zero() {
            continue;
        }
        let v = a.get(dst, j) - &(q * s);
        a.set(dst, j, v);
    }
}

fn col_axpy(a: &mut Mat, dst: usize, src: usize, q: &QuadElem) {
    for i in 0..a.rows() {
        let s = a.get(i, src);
        if s.is_zero() {
            continue;
        }
        let v = a.get(i, dst) - &(s * q);
        a.set(i, dst, v);
    }
}

/// Unimodular [[s, t], [-b/g, a/g]] sending (a, b) to (g, 0).
struct Bezout {
    s: QuadElem,
    t: QuadElem,
    x: QuadElem,
    y: QuadElem,
}

fn bezout(a: &QuadElem, b: &QuadElem) -> Result<Bezout> {
    let (g, s, t) = xgcd(a, b)?;
    let gi = g.inv()?;
    Ok(Bezout { s, t, x: -&(b * &gi), y: a * &gi })
}

fn mix_rows(m: &mut Mat, r1: usize, r2: usize, k: &Bezout) {
    for j in 0..m.cols() {
        let (p, q) = (m.get(r1, j).clone(), m.get(r2, j).clone());
        m.set(r1, j, &(&k.s * &p) + &(&k.t * &q));
        m.set(r2, j, &(&k.x * &p) + &(&k.y * &q));
    }
}

fn mix_cols(m: &mut Mat, c1: usize, c2: usize, k: &Bezout) {
    for i in 0..m.rows() {
        let (p, q) = (m.get(i, c1).clone(), m.get(i, c2).clone());
        m.set(i, c1, &(&p * &k.s) + &(&q * &k.t));
        m.set(i, c2, &(&p * &k.x) + &(&q * &k.y));
    }
}

fn scale_row(a: &mut Mat, r: usize, u: &QuadElem) {
    for j in 0..a.cols() {
        let v = a.get(r, j) * u;
        a.set(r, j, v);
    }
}

/// Smith normal form of an integral matrix.
///
/// Pivots are chosen of minimal norm, and each divisor is replaced by its
/// canonical associate (positive over the integers).
pub fn smith_normal_form(m: &Mat) -> Result<SnfResult> {
    if !m.is_integral() {
        return Err(Error::NotIntegral(format!("{m:?}")));
    }
    let ring = m.ring();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = Mat::identity(ring, rows);
    let mut v = Mat::identity(ring, cols);
    let mut divisors = Vec::new();

    for t in 0..rows.min(cols) {
        // minimal-norm pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.norm() < a.get(bi, bj).norm()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            for i in t + 1..rows {
                let b = a.get(i, t).clone();
                if b.is_zero() {
                    continue;
                }
                let p = a.get(t, t).clone();
                let (q, r) = b.div_rem(&p)?;
                if r.is_zero() {
                    row_axpy(&mut a, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                } else {
                    let k = bezout(&p, &b)?;
                    mix_rows(&mut a, t, i, &k);
                    mix_rows(&mut u, t, i, &k);
                }
            }
            for j in t + 1..cols {
                let b = a.get(t, j).clone();
                if b.is_zero() {
                    continue;
                }
                let p = a.get(t, t).clone();
                let (q, r) = b.div_rem(&p)?;
                if r.is_zero() {
                    col_axpy(&mut a, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                } else {
                    let k = bezout(&p, &b)?;
                    mix_cols(&mut a, t, j, &k);
                    mix_cols(&mut v, t, j, &k);
                }
            }
            // column operations with a remainder refill column t
            if (t + 1..rows).any(|i| !a.get(i, t).is_zero()) {
                continue;
            }
            // row and column are clear; enforce divisibility of the rest
            let p = a.get(t, t).clone();
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a.get(i, j).divisible_by(&p));
            match bad {
                Some((i, _)) => {
                    let minus_one = -ring.one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        let (_, unit) = a.get(t, t).normalize_associate();
        scale_row(&mut a, t, &unit);
        scale_row(&mut u, t, &unit);
        divisors.push(a.get(t, t).clone());
    }
    let rank = divisors.len();
    Ok(SnfResult { u, v, divisors, rank })
}

/// Basis (as columns) of the saturated kernel {x in O^cols : m x = 0}.
pub fn kernel_lattice(m: &Mat) -> Result<Mat> {
    let s = smith_normal_form(m)?;
    let idx: Vec<usize> = (s.rank..m.cols()).collect();
    Ok(s.v.select_cols(&idx))
}

/// Saturation of the column span of `b` inside O^rows, with the index [saturation : span].
///
/// The index is the order of the finite O-module saturation/span, i.e. the
/// product of |O/d_i| over the elementary divisors.
pub fn saturate(b: &Mat) -> Result<(Mat, BigInt)> {
    let s = smith_normal_form(b)?;
    if s.rank < b.cols() {
        return Err(Error::DependentColumns);
    }
    let uinv = s.u.inverse()?;
    let idx: Vec<usize> = (0..b.cols()).collect();
    let mut index = BigInt::one();
    for d in &s.divisors {
        index *= residue_order(d)?;
    }
    Ok((uinv.select_cols(&idx), index))
}

/// Order of the torsion of the cokernel O^rows / (column span of `m`): the product of |O/d_i|.
pub fn cokernel_torsion_order(m: &Mat) -> Result<BigInt> {
    let s = smith_normal_form(m)?;
    let mut n = BigInt::one();
    for d in &s.divisors {
        n *= residue_order(d)?;
    }
    Ok(n)
}
