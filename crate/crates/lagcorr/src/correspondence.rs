//! Lagrangian correspondences between X_A = A x A^ and X_B = B x B^, for A = E^gA, B = E^gB.
//!
//! A correspondence is stored as a parametrization j: W = E^m -> X_A x X_B,
//! an integral (2gA + 2gB) x m matrix whose rows are ordered
//! (x_A, xi_A, x_B, xi_B). Disconnected or non-injective data (generalized
//! Lagrangians) are allowed as long as the kernel of j is finite.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{exact_sqrt, BaseRing, QuadElem};
use crate::error::{Error, Result};
use crate::isogeny::{kernel_of_matrix, KernelScheme};
use crate::linalg::{kernel_lattice, smith_normal_form, Mat};

/// X_A for A = E^genus, with the form J = [[0, I], [-I, 0]].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticSpace {
    pub genus: usize,
    pub ring: BaseRing,
}

impl SymplecticSpace {
    pub fn new(ring: BaseRing, genus: usize) -> Self {
        SymplecticSpace { genus, ring }
    }

    pub fn dim(&self) -> usize {
        2 * self.genus
    }

    pub fn gram(&self) -> Mat {
        standard_j(self.ring, self.genus)
    }
}

/// J = [[0, I], [-I, 0]] of size 2g.
pub fn standard_j(ring: BaseRing, g: usize) -> Mat {
    let i = Mat::identity(ring, g);
    let z = Mat::zeros(ring, g, g);
    Mat::from_blocks(&z, &i, &(-&i), &z)
}

/// True iff conj(m)^T J m = J.
pub fn check_symplectic(m: &Mat) -> bool {
    if !m.is_square() || !m.rows().is_multiple_of(2) {
        return false;
    }
    let j = standard_j(m.ring(), m.rows() / 2);
    &(&m.conj_transpose() * &j) * m == j
}

/// An element g = [[a, b], [c, d]] of U(X_A) tensored with Q.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymplecticAuto {
    m: Mat,
}

impl std::fmt::Debug for SymplecticAuto {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.m)
    }
}

impl SymplecticAuto {
    pub fn new(m: Mat) -> Result<Self> {
        if !check_symplectic(&m) {
            return Err(Error::NotSymplectic);
        }
        Ok(SymplecticAuto { m })
    }

    pub fn from_blocks(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Result<Self> {
        SymplecticAuto::new(Mat::from_blocks(a, b, c, d))
    }

    pub fn identity(ring: BaseRing, g: usize) -> Self {
        SymplecticAuto { m: Mat::identity(ring, 2 * g) }
    }

    /// S = [[0, I], [-I, 0]].
    pub fn fourier(ring: BaseRing, g: usize) -> Self {
        SymplecticAuto { m: standard_j(ring, g) }
    }

    /// f(n) = [[I, nI], [0, I]].
    pub fn shear(ring: BaseRing, g: usize, n: i64) -> Self {
        let b = Mat::scalar(ring, g, &QuadElem::from_int(ring, n));
        SymplecticAuto::shear_by(&b).expect("scalar shear is symplectic")
    }

    /// [[I, 0], [nI, I]].
    pub fn shear_t(ring: BaseRing, g: usize, n: i64) -> Self {
        let c = Mat::scalar(ring, g, &QuadElem::from_int(ring, n));
        SymplecticAuto::lower_shear_by(&c).expect("scalar shear is symplectic")
    }

    /// [[I, b], [0, I]] for Hermitian b.
    pub fn shear_by(b: &Mat) -> Result<Self> {
        let ring = b.ring();
        let g = b.rows();
        SymplecticAuto::from_blocks(
            &Mat::identity(ring, g),
            b,
            &Mat::zeros(ring, g, g),
            &Mat::identity(ring, g),
        )
    }

    /// [[I, 0], [c, I]] for Hermitian c.
    pub fn lower_shear_by(c: &Mat) -> Result<Self> {
        let ring = c.ring();
        let g = c.rows();
        SymplecticAuto::from_blocks(
            &Mat::identity(ring, g),
            &Mat::zeros(ring, g, g),
            c,
            &Mat::identity(ring, g),
        )
    }

    /// diag(a, conj(a)^-T) for invertible a.
    pub fn levi(a: &Mat) -> Result<Self> {
        let d = a.conj_transpose().inverse()?;
        let ring = a.ring();
        let g = a.rows();
        SymplecticAuto::from_blocks(a, &Mat::zeros(ring, g, g), &Mat::zeros(ring, g, g), &d)
    }

    /// g_a = diag(a^-1 I, conj(a) I).
    pub fn g_a(a: &QuadElem, g: usize) -> Result<Self> {
        let ring = a.ring();
        let ai = Mat::scalar(ring, g, &a.inv()?);
        let ab = Mat::scalar(ring, g, &a.conj());
        let z = Mat::zeros(ring, g, g);
        SymplecticAuto::from_blocks(&ai, &z, &z, &ab)
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }

    pub fn ring(&self) -> BaseRing {
        self.m.ring()
    }

    pub fn genus(&self) -> usize {
        self.m.rows() / 2
    }

    pub fn a(&self) -> Mat {
        let g = self.genus();
        self.m.block(0, g, 0, g)
    }

    pub fn b(&self) -> Mat {
        let g = self.genus();
        self.m.block(0, g, g, 2 * g)
    }

    pub fn c(&self) -> Mat {
        let g = self.genus();
        self.m.block(g, 2 * g, 0, g)
    }

    pub fn d(&self) -> Mat {
        let g = self.genus();
        self.m.block(g, 2 * g, g, 2 * g)
    }

    /// Membership in U0: the b-block is invertible.
    pub fn in_u0(&self) -> bool {
        self.b().is_invertible()
    }

    pub fn mul(&self, o: &SymplecticAuto) -> SymplecticAuto {
        SymplecticAuto { m: &self.m * &o.m }
    }

    /// g^-1 = -J g* J.
    pub fn inverse(&self) -> SymplecticAuto {
        let j = standard_j(self.ring(), self.genus());
        SymplecticAuto { m: -&(&(&j * &self.m.conj_transpose()) * &j) }
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_identity()
    }

    pub fn det(&self) -> QuadElem {
        self.m.det().expect("square")
    }
}

/// A parametrized (generalized) correspondence j: E^m -> X_A x X_B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamCorrespondence {
    pub source: SymplecticSpace,
    pub target: SymplecticSpace,
    j: Mat,
    kernel: KernelScheme,
}

impl ParamCorrespondence {
    pub fn new(source: SymplecticSpace, target: SymplecticSpace, j: Mat) -> Result<Self> {
        if source.ring != target.ring || j.ring() != source.ring {
            return Err(Error::RingMismatch("correspondence data".into()));
        }
        if j.rows() != source.dim() + target.dim() {
            return Err(Error::Shape(format!(
                "j has {} rows, expected {}",
                j.rows(),
                source.dim() + target.dim()
            )));
        }
        if !j.is_integral() {
            return Err(Error::NotIntegral(format!("{j:?}")));
        }
        let kernel = kernel_of_matrix(&j)?;
        Ok(ParamCorrespondence { source, target, j, kernel })
    }

    /// Correspondence from X_gA to X_gB given by j.
    pub fn from_matrix(ga: usize, gb: usize, j: Mat) -> Result<Self> {
        let ring = j.ring();
        ParamCorrespondence::new(SymplecticSpace::new(ring, ga), SymplecticSpace::new(ring, gb), j)
    }

    pub fn j(&self) -> &Mat {
        &self.j
    }

    pub fn ring(&self) -> BaseRing {
        self.j.ring()
    }

    pub fn kernel(&self) -> &KernelScheme {
        &self.kernel
    }

    /// m, the dimension of the parameter variety W.
    pub fn param_dim(&self) -> usize {
        self.j.cols()
    }

    pub fn ga(&self) -> usize {
        self.source.genus
    }

    pub fn gb(&self) -> usize {
        self.target.genus
    }

    /// Rows landing in X_A.
    pub fn p_a(&self) -> Mat {
        self.j.block(0, self.source.dim(), 0, self.param_dim())
    }

    /// Rows landing in X_B.
    pub fn p_b(&self) -> Mat {
        self.j.block(self.source.dim(), self.j.rows(), 0, self.param_dim())
    }

    /// The (x_A, x_B) rows, i.e. the projection to A x B.
    pub fn p_ab(&self) -> Mat {
        let (ga, gb) = (self.ga(), self.gb());
        let idx: Vec<usize> = (0..ga).chain(2 * ga..2 * ga + gb).collect();
        self.j.select_rows(&idx)
    }

    pub fn has_finite_kernel(&self) -> bool {
        self.kernel.component_dim == 0
    }

    /// conj(j)^T diag(-J_A, J_B) j.
    pub fn isotropy_form(&self) -> Mat {
        let ring = self.ring();
        let omega = Mat::block_diag(&-&standard_j(ring, self.ga()), &standard_j(ring, self.gb()));
        &(&self.j.conj_transpose() * &omega) * &self.j
    }

    /// Projection to A x B is surjective.
    pub fn is_nondegenerate(&self) -> bool {
        let ab = self.p_ab();
        ab.is_square() && ab.is_invertible()
    }
}

/// Finite kernel, half dimension, and isotropy.
pub fn is_lagrangian(l: &ParamCorrespondence) -> bool {
    l.has_finite_kernel() && l.param_dim() == l.ga() + l.gb() && l.isotropy_form().is_zero()
}

/// Graph of g: j = [N I; N g] with N the least positive integer making N g integral.
pub fn graph(g: &SymplecticAuto) -> Result<ParamCorrespondence> {
    if !check_symplectic(g.matrix()) {
        return Err(Error::NotSymplectic);
    }
    let ring = g.ring();
    let n = g.matrix().denominator();
    let nq = QuadElem::from_bigint(ring, n);
    let dim = 2 * g.genus();
    let j = Mat::scalar(ring, dim, &nq).vstack(&g.matrix().scale(&nq));
    ParamCorrespondence::from_matrix(g.genus(), g.genus(), j)
}

/// The model L(g_a) = {(a x, y, x, conj(a) y)} with projection g_a = diag(a^-1, conj(a)).
pub fn ga_model(a: &QuadElem, g: usize) -> Result<ParamCorrespondence> {
    if a.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if !a.is_integral() {
        return Err(Error::NotIntegral(a.to_string()));
    }
    let ring = a.ring();
    let i = Mat::identity(ring, g);
    let z = Mat::zeros(ring, g, g);
    let top = Mat::from_blocks(&Mat::scalar(ring, g, a), &z, &z, &i);
    let bot = Mat::from_blocks(&i, &z, &z, &Mat::scalar(ring, g, &a.conj()));
    ParamCorrespondence::from_matrix(g, g, top.vstack(&bot))
}

/// Which coordinate plane a coordinate Lagrangian is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordinatePlane {
    /// A x 0 x B x 0
    Positions,
    /// 0 x A^ x 0 x B^
    Momenta,
}

/// The coordinate Lagrangian spanned by the x-rows or the xi-rows.
pub fn coordinate_lagrangian(
    ring: BaseRing,
    ga: usize,
    gb: usize,
    plane: CoordinatePlane,
) -> ParamCorrespondence {
    let off = match plane {
        CoordinatePlane::Positions => 0,
        CoordinatePlane::Momenta => 1,
    };
    let rows: Vec<usize> =
        (0..ga).map(|i| off * ga + i).chain((0..gb).map(|i| 2 * ga + off * gb + i)).collect();
    let j = Mat::from_fn(ring, 2 * ga + 2 * gb, ga + gb, |r, c| {
        if rows[c] == r {
            ring.one()
        } else {
            ring.zero()
        }
    });
    ParamCorrespondence::from_matrix(ga, gb, j).expect("well-formed coordinate plane")
}

/// pi(L) = p_B j (p_A j)^-1.
pub fn project_pi(l: &ParamCorrespondence) -> Result<SymplecticAuto> {
    let pa = l.p_a();
    if !pa.is_square() || !pa.is_invertible() {
        return Err(Error::DegenerateProjection);
    }
    let pi = &l.p_b() * &pa.inverse()?;
    SymplecticAuto::new(pi).map_err(|_| {
        Error::Invariant("projection of an isotropic correspondence is not symplectic".into())
    })
}

/// q(L) = deg(L -> X_A), or 0 when the projection is not an isogeny.
pub fn q_degree(l: &ParamCorrespondence) -> Result<BigInt> {
    let pa = l.p_a();
    if !pa.is_square() || !pa.is_invertible() || !l.has_finite_kernel() {
        return Ok(BigInt::zero());
    }
    let deg_pa = kernel_of_matrix(&pa)?.pi0_order;
    let k = &l.kernel.pi0_order;
    let (q, r) = deg_pa.div_rem(k);
    if !r.is_zero() {
        return Err(Error::Invariant(format!(
            "kernel order {k} does not divide projection degree {deg_pa}"
        )));
    }
    Ok(q)
}

/// The image j(W) as an injective, saturated presentation, with d = deg(W -> j(W)).
pub fn connected_image(l: &ParamCorrespondence) -> Result<(ParamCorrespondence, BigInt)> {
    if !l.has_finite_kernel() {
        return Err(Error::Degenerate("parametrization has a positive-dimensional kernel".into()));
    }
    let s = smith_normal_form(&l.j)?;
    let uinv = s.u.inverse()?;
    let idx: Vec<usize> = (0..l.param_dim()).collect();
    let image = ParamCorrespondence::new(l.source, l.target, uinv.select_cols(&idx))?;
    Ok((image, l.kernel.pi0_order.clone()))
}

/// |ker(L -> A x B)|^(1/2), computed on the connected image of L.
pub fn rank_li_kernel(l: &ParamCorrespondence) -> Result<BigInt> {
    let (img, _) = connected_image(l)?;
    if !img.is_nondegenerate() {
        return Err(Error::Degenerate("projection to A x B is not surjective".into()));
    }
    let order = kernel_of_matrix(&img.p_ab())?.pi0_order;
    exact_sqrt(&order).ok_or_else(|| Error::NonSquareKernelOrder(order.to_string()))
}

/// Apply (h_A x h_B) to a correspondence: j -> diag(h_A, h_B) j. Both must be integral.
pub fn translate(
    l: &ParamCorrespondence,
    ha: &SymplecticAuto,
    hb: &SymplecticAuto,
) -> Result<ParamCorrespondence> {
    if ha.genus() != l.ga() || hb.genus() != l.gb() {
        return Err(Error::Shape("translation genus mismatch".into()));
    }
    let h = Mat::block_diag(ha.matrix(), hb.matrix());
    if !h.is_integral() {
        return Err(Error::NotIntegral("translation must be integral".into()));
    }
    ParamCorrespondence::new(l.source, l.target, &h * &l.j)
}

/// Smallest n in 1..=bound with every (f(n) x f(n))-translate nondegenerate.
pub fn find_shear(items: &[ParamCorrespondence], bound: u32) -> Result<i64> {
    if items.is_empty() {
        return Err(Error::EmptyInput("find_shear needs at least one correspondence".into()));
    }
    for n in 1..=bound as i64 {
        let mut ok = true;
        for l in items {
            let fa = SymplecticAuto::shear(l.ring(), l.ga(), n);
            let fb = SymplecticAuto::shear(l.ring(), l.gb(), n);
            if !translate(l, &fa, &fb)?.is_nondegenerate() {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(n);
        }
    }
    Err(Error::ShearSearchExhausted(bound))
}

/// The opposite correspondence: swap the X_A and X_B blocks.
pub fn transpose(l: &ParamCorrespondence) -> ParamCorrespondence {
    let j = l.p_b().vstack(&l.p_a());
    ParamCorrespondence::new(l.target, l.source, j).expect("swapping blocks preserves validity")
}

/// M o L = L x_{X_B} M, summarized by its identity component and component counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposedCorrespondence {
    /// Z_0 -> X_A x X_C, generally with finite kernel of order `d_image_degree`.
    pub identity_component: ParamCorrespondence,
    /// |pi_0(Z)|
    pub pi0_order: BigInt,
    /// deg(Z_0 -> j(Z_0))
    pub d_image_degree: BigInt,
    /// Z -> X_A x X_B x X_C restricted to the parameter lattices; kept for brute-force checks.
    delta: Mat,
    p_a_l: Mat,
}

impl ComposedCorrespondence {
    /// q(M o L) = |pi_0(Z)| * deg(Z_0 -> X_A).
    pub fn q(&self) -> Result<BigInt> {
        let q0 = q_degree(&self.identity_component)?;
        Ok(&self.pi0_order * &self.d_image_degree * q0)
    }

    /// The same q by counting the kernel of Z -> X_A directly.
    pub fn q_brute(&self) -> Result<BigInt> {
        let ring = self.delta.ring();
        let m_cols = self.delta.cols() - self.p_a_l.cols();
        let pa_row = self.p_a_l.hstack(&Mat::zeros(ring, self.p_a_l.rows(), m_cols));
        let stacked = self.delta.vstack(&pa_row);
        let k = kernel_of_matrix(&stacked)?;
        if k.component_dim > 0 {
            return Ok(BigInt::zero());
        }
        Ok(k.pi0_order)
    }

    /// pi(M o L), defined when Z_0 -> X_A is an isogeny.
    pub fn pi(&self) -> Result<SymplecticAuto> {
        project_pi(&self.identity_component)
    }

    /// N_Z = (|pi_0(Z)| / d)^(1/2).
    pub fn n_z(&self) -> Result<BigInt> {
        let (q, r) = self.pi0_order.div_rem(&self.d_image_degree);
        if !r.is_zero() {
            return Err(Error::NotSquare(format!(
                "|pi0| = {} is not divisible by d = {}",
                self.pi0_order, self.d_image_degree
            )));
        }
        exact_sqrt(&q).ok_or_else(|| Error::NotSquare(format!("|pi0|/d = {q}")))
    }

    /// (|pi_0(Z)| * d)^(1/2), the multiplicity of the composite.
    pub fn n_total(&self) -> Result<BigInt> {
        let p = &self.pi0_order * &self.d_image_degree;
        exact_sqrt(&p).ok_or_else(|| Error::NotSquare(format!("|pi0| * d = {p}")))
    }
}

/// Compose L: X_A -> X_B with M: X_B -> X_C.
///
/// Both inputs are first replaced by their connected images. The fiber
/// product is the kernel of Delta(l, m) = p_B(l) - p_B(m) on W_L x W_M.
pub fn compose(l: &ParamCorrespondence, m: &ParamCorrespondence) -> Result<ComposedCorrespondence> {
    if l.target != m.source {
        return Err(Error::Shape("middle spaces differ".into()));
    }
    let (l, _) = connected_image(l)?;
    let (m, _) = connected_image(m)?;
    let (ml, mm) = (l.param_dim(), m.param_dim());
    let gb2 = l.target.dim();

    let pb_l = l.p_b();
    let pb_m = m.p_a();
    let delta = pb_l.hstack(&-&pb_m);
    let s = smith_normal_form(&delta)?;
    if s.rank < gb2 {
        return Err(Error::NotSurjectiveOntoMiddle);
    }
    let mut pi0 = BigInt::one();
    for dv in s.nonunit_divisors() {
        pi0 *= crate::arith::degnorm(&dv)?;
    }
    let kb = kernel_lattice(&delta)?;
    let top = kb.block(0, ml, 0, kb.cols());
    let bot = kb.block(ml, ml + mm, 0, kb.cols());
    let j0 = (&l.p_a() * &top).vstack(&(&m.p_b() * &bot));
    let z0 = ParamCorrespondence::new(l.source, m.target, j0)?;
    if !z0.has_finite_kernel() {
        return Err(Error::Degenerate("identity component maps with infinite kernel".into()));
    }
    let d = z0.kernel.pi0_order.clone();
    Ok(ComposedCorrespondence {
        identity_component: z0,
        pi0_order: pi0,
        d_image_degree: d,
        p_a_l: l.p_a(),
        delta,
    })
}
