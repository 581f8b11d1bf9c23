//! Dense matrices over the fraction field K of the base order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::arith::{BaseRing, QuadElem};
use crate::error::{Error, Result};

/// A rows x cols matrix with entries in K. Integral matrices (entries in O) are the same type.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    ring: BaseRing,
    rows: usize,
    cols: usize,
    data: Vec<QuadElem>,
}

impl Mat {
    pub fn from_vec(ring: BaseRing, rows: usize, cols: usize, data: Vec<QuadElem>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        assert!(data.iter().all(|x| x.ring() == ring));
        Mat { ring, rows, cols, data }
    }

    pub fn from_fn(
        ring: BaseRing,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> QuadElem,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat::from_vec(ring, rows, cols, data)
    }

    /// Integer matrix given row by row.
    pub fn from_ints(ring: BaseRing, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat::from_fn(ring, r, c, |i, j| QuadElem::from_int(ring, rows[i][j]))
    }

    pub fn zeros(ring: BaseRing, rows: usize, cols: usize) -> Self {
        Mat::from_fn(ring, rows, cols, |_, _| ring.zero())
    }

    pub fn identity(ring: BaseRing, n: usize) -> Self {
        Mat::from_fn(ring, n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn scalar(ring: BaseRing, n: usize, s: &QuadElem) -> Self {
        Mat::from_fn(ring, n, n, |i, j| if i == j { s.clone() } else { ring.zero() })
    }

    pub fn diag(ring: BaseRing, entries: &[QuadElem]) -> Self {
        let n = entries.len();
        Mat::from_fn(ring, n, n, |i, j| if i == j { entries[i].clone() } else { ring.zero() })
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QuadElem) {
        assert_eq!(v.ring(), self.ring);
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[QuadElem] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<QuadElem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<QuadElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integral())
    }

    /// Least positive integer N with N times the matrix integral.
    pub fn denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator()))
    }

    pub fn map(&self, f: impl Fn(&QuadElem) -> QuadElem) -> Mat {
        Mat {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &QuadElem) -> Mat {
        self.map(|x| x * s)
    }

    pub fn scale_int(&self, n: i64) -> Mat {
        let s = QuadElem::from_int(self.ring, n);
        self.scale(&s)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose; this is the Rosati involution in the model.
    pub fn conj_transpose(&self) -> Mat {
        Mat::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.conj_transpose()
    }

    /// Rows r0..r1, columns c0..c1.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        Mat::from_fn(self.ring, r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.ring, idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.ring, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn hstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows, "hstack row mismatch");
        Mat::from_fn(self.ring, self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.cols, "vstack column mismatch");
        Mat::from_fn(self.ring, self.rows + o.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                o.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn vstack_all(parts: &[&Mat]) -> Mat {
        let mut it = parts.iter();
        let first = (*it.next().expect("at least one block")).clone();
        it.fold(first, |acc, m| acc.vstack(m))
    }

    /// [[a, b], [c, d]]
    pub fn from_blocks(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        a.hstack(b).vstack(&c.hstack(d))
    }

    pub fn block_diag(a: &Mat, b: &Mat) -> Mat {
        let ring = a.ring;
        let top = a.hstack(&Mat::zeros(ring, a.rows, b.cols));
        let bot = Mat::zeros(ring, b.rows, a.cols).hstack(b);
        top.vstack(&bot)
    }

    pub fn try_mul(&self, o: &Mat) -> Result<Mat> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        if self.ring != o.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, o.ring)));
        }
        let ring = self.ring;
        Ok(Mat::from_fn(ring, self.rows, o.cols, |i, j| {
            let mut acc = ring.zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = &acc + &(a * o.get(k, j));
            }
            acc
        }))
    }

    /// Row echelon form over K; returns (echelon matrix, pivot columns, determinant sign/scale factor).
    fn echelon(&self) -> (Mat, Vec<usize>, QuadElem) {
        let ring = self.ring;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut factor = ring.one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                m.swap_rows(p, r);
                factor = -factor;
            }
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for i in r + 1..m.rows {
                let x = m.get(i, c);
                if x.is_zero() {
                    continue;
                }
                let f = x * &inv;
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots, factor)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Rank over K.
    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn det(&self) -> Result<QuadElem> {
        if !self.is_square() {
            return Err(Error::Shape(format!("det of {}x{} matrix", self.rows, self.cols)));
        }
        let (m, pivots, factor) = self.echelon();
        if pivots.len() < self.rows {
            return Ok(self.ring.zero());
        }
        let mut d = factor;
        for i in 0..self.rows {
            d = &d * m.get(i, i);
        }
        Ok(d)
    }

    /// Inverse over K by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Shape(format!("inverse of {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.hstack(&Mat::identity(self.ring, n));
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
                return Err(Error::Singular);
            };
            a.swap_rows(p, c);
            let inv = a.get(c, c).inv()?;
            for j in 0..2 * n {
                let v = a.get(c, j) * &inv;
                a.set(c, j, v);
            }
            for i in 0..n {
                if i == c || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..2 * n {
                    let v = a.get(i, j) - &(&f * a.get(c, j));
                    a.set(i, j, v);
                }
            }
        }
        Ok(a.block(0, n, n, 2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, o: &Mat) -> Mat {
        self.try_mul(o).expect("matrix product shape")
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sum shape");
        Mat::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j) + o.get(i, j))
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix difference shape");
        Mat::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j) - o.get(i, j))
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.map(|x| -x)
    }
}
