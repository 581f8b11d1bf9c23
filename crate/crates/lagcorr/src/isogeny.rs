//! The lattice model of abelian varieties E^m up to isogeny.
//!
//! A homomorphism E^m -> E^n is an n x m matrix over O (over K for
//! elements of Hom tensored with Q). The dual of E^g is identified with E^g
//! through the product principal polarization, so symmetric homomorphisms
//! A -> A^ become Hermitian matrices and the Rosati involution is the
//! conjugate transpose.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{degnorm, poly::interpolate, sturm_positive_roots, BaseRing, QuadElem, RatPoly};
use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, Mat};

/// The abelian variety E^power over the given base ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AbVar {
    pub power: usize,
    pub ring: BaseRing,
}

impl AbVar {
    pub fn new(ring: BaseRing, power: usize) -> Self {
        AbVar { power, ring }
    }
}

/// A homomorphism (or, with non-integral entries, a rational homomorphism) between powers of E.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsogenyHom {
    pub source: AbVar,
    pub target: AbVar,
    pub matrix: Mat,
}

impl IsogenyHom {
    pub fn new(source: AbVar, target: AbVar, matrix: Mat) -> Result<Self> {
        if matrix.rows() != target.power || matrix.cols() != source.power {
            return Err(Error::Shape(format!(
                "{}x{} matrix for E^{} -> E^{}",
                matrix.rows(),
                matrix.cols(),
                source.power,
                target.power
            )));
        }
        if matrix.ring() != source.ring || source.ring != target.ring {
            return Err(Error::RingMismatch("homomorphism entries".into()));
        }
        Ok(IsogenyHom { source, target, matrix })
    }

    /// Wrap a matrix as a map E^cols -> E^rows.
    pub fn from_matrix(matrix: Mat) -> Self {
        let ring = matrix.ring();
        IsogenyHom {
            source: AbVar::new(ring, matrix.cols()),
            target: AbVar::new(ring, matrix.rows()),
            matrix,
        }
    }

    /// True when some entry is not in O, i.e. this is only an element of Hom(A, B) tensored with Q.
    pub fn is_rational(&self) -> bool {
        !self.matrix.is_integral()
    }

    pub fn compose(&self, inner: &IsogenyHom) -> Result<IsogenyHom> {
        if inner.target != self.source {
            return Err(Error::Shape("composition of non-composable maps".into()));
        }
        IsogenyHom::new(inner.source, self.target, self.matrix.try_mul(&inner.matrix)?)
    }
}

/// ker(f) as (identity component E^component_dim) x (finite part prod E[d_i]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelScheme {
    pub component_dim: usize,
    pub divisors: Vec<QuadElem>,
    pub pi0_order: BigInt,
}

/// Kernel of an integral homomorphism, read off its Smith normal form.
pub fn kernel_scheme(f: &IsogenyHom) -> Result<KernelScheme> {
    kernel_of_matrix(&f.matrix)
}

pub(crate) fn kernel_of_matrix(m: &Mat) -> Result<KernelScheme> {
    let s = smith_normal_form(m)?;
    let divisors = s.nonunit_divisors();
    let mut pi0 = BigInt::one();
    for d in &divisors {
        pi0 *= degnorm(d)?;
    }
    Ok(KernelScheme { component_dim: m.cols() - s.rank, divisors, pi0_order: pi0 })
}

/// Order of the finite kernel of an integral matrix of full column rank, or None if the kernel is not finite.
pub fn finite_kernel_order(m: &Mat) -> Result<Option<BigInt>> {
    let k = kernel_of_matrix(m)?;
    Ok((k.component_dim == 0).then_some(k.pi0_order))
}

/// Degree of an integral isogeny E^g -> E^g.
pub fn degree(f: &IsogenyHom) -> Result<BigInt> {
    if !f.matrix.is_square() {
        return Err(Error::NotAnIsogeny("non-square matrix".into()));
    }
    if f.is_rational() {
        return Err(Error::NotIntegral(format!("{:?}", f.matrix)));
    }
    let k = kernel_scheme(f)?;
    if k.component_dim > 0 {
        return Err(Error::NotAnIsogeny("determinant is zero".into()));
    }
    Ok(k.pi0_order)
}

/// Rosati involution: conjugate transpose.
pub fn rosati_transpose(f: &IsogenyHom) -> IsogenyHom {
    IsogenyHom { source: f.target, target: f.source, matrix: f.matrix.conj_transpose() }
}

/// A symmetric element of Hom(E^g, (E^g)^) tensored with Q, as a Hermitian matrix over K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianMat {
    matrix: Mat,
}

impl HermitianMat {
    pub fn new(matrix: Mat) -> Result<Self> {
        if !matrix.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        Ok(HermitianMat { matrix })
    }

    pub fn identity(ring: BaseRing, g: usize) -> Self {
        HermitianMat { matrix: Mat::identity(ring, g) }
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn source(&self) -> AbVar {
        AbVar::new(self.matrix.ring(), self.size())
    }

    pub fn neg(&self) -> HermitianMat {
        HermitianMat { matrix: -&self.matrix }
    }

    pub fn scale(&self, r: &BigRational) -> HermitianMat {
        HermitianMat { matrix: self.matrix.map(|x| x.scale(r)) }
    }

    /// psi^ H psi for psi over K.
    pub fn pullback(&self, psi: &Mat) -> Result<HermitianMat> {
        let m = psi.conj_transpose().try_mul(&self.matrix)?.try_mul(psi)?;
        HermitianMat::new(m)
    }

    /// All leading principal minors are positive.
    pub fn is_positive_definite(&self) -> bool {
        (1..=self.size()).all(|k| {
            let d = self.matrix.block(0, k, 0, k).det().expect("square");
            d.is_rational() && d.a().is_positive()
        })
    }
}

fn rational_det(m: &Mat) -> Result<BigRational> {
    let d = m.det()?;
    if !d.is_rational() {
        return Err(Error::NotHermitian);
    }
    Ok(d.a().clone())
}

/// p(t) = det(H + t H0), recovered from its values at t = 0..=g.
pub fn pencil_polynomial(h: &HermitianMat, h0: &HermitianMat) -> Result<RatPoly> {
    let g = h.size();
    if h0.size() != g {
        return Err(Error::Shape("reference form has a different size".into()));
    }
    let mut pts = Vec::with_capacity(g + 1);
    for t in 0..=g {
        let tq = QuadElem::from_int(h.matrix.ring(), t as i64);
        let m = &h.matrix + &h0.matrix.scale(&tq);
        pts.push((BigRational::from_integer(BigInt::from(t)), rational_det(&m)?));
    }
    Ok(interpolate(&pts))
}

/// Index of the symmetric isogeny H: the number of positive roots of det(H + t H0).
///
/// For the reference H0 positive definite the roots are minus the
/// eigenvalues of H relative to H0, so this counts negative directions of H.
pub fn index(h: &HermitianMat, h0: &HermitianMat) -> Result<usize> {
    if !h0.is_positive_definite() {
        return Err(Error::NonPositiveReference);
    }
    let p = pencil_polynomial(h, h0)?;
    if p.coeff(0).is_zero() {
        return Err(Error::DegenerateH);
    }
    sturm_positive_roots(&p)
}

/// Index against the identity reference.
pub fn index_std(h: &HermitianMat) -> Result<usize> {
    index(h, &HermitianMat::identity(h.matrix.ring(), h.size()))
}

/// Signature (n_plus, n_minus, n_zero) of a possibly degenerate Hermitian form.
pub fn inertia(h: &HermitianMat) -> Result<(usize, usize, usize)> {
    let g = h.size();
    let n0 = g - h.matrix.rank();
    let p = pencil_polynomial(h, &HermitianMat::identity(h.matrix.ring(), g))?;
    // strip the factor t^n0 coming from the kernel
    let stripped = RatPoly::new(p.coeffs()[n0..].to_vec());
    let nminus = sturm_positive_roots(&stripped)?;
    Ok((g - nminus - n0, nminus, n0))
}
