//! The Heisenberg group of a transversal pair of Lagrangians in X_A, and Hom between their sheaves.
//!
//! A Lagrangian in X_A is a correspondence from the genus-0 space to X_A:
//! a 2g x g matrix [X; Xi] over O with conj(X)^T Xi Hermitian.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::group::{frac, int_of, FinAb, Phase, SkewPairing};
use crate::arith::{exact_sqrt, BaseRing, QuadElem};
use crate::cocycle::DEFAULT_SHEAR_BOUND;
use crate::correspondence::{
    connected_image, coordinate_lagrangian, is_lagrangian, standard_j, CoordinatePlane,
    ParamCorrespondence, SymplecticAuto, SymplecticSpace,
};
use crate::error::{Error, Result};
use crate::isogeny::{finite_kernel_order, index_std, inertia, HermitianMat};
use crate::linalg::{smith_normal_form, Mat};

/// Lagrangian in X_A given by its 2g x g parametrization.
pub fn lagrangian(ring: BaseRing, g: usize, j: Mat) -> Result<ParamCorrespondence> {
    let l =
        ParamCorrespondence::new(SymplecticSpace::new(ring, 0), SymplecticSpace::new(ring, g), j)?;
    if !is_lagrangian(&l) {
        return Err(Error::Degenerate("not a Lagrangian of X_A".into()));
    }
    Ok(l)
}

/// A x 0.
pub fn positions(ring: BaseRing, g: usize) -> ParamCorrespondence {
    coordinate_lagrangian(ring, 0, g, CoordinatePlane::Positions)
}

/// 0 x A^.
pub fn momenta(ring: BaseRing, g: usize) -> ParamCorrespondence {
    coordinate_lagrangian(ring, 0, g, CoordinatePlane::Momenta)
}

/// Graph {(x, phi x)} of an integral symmetric homomorphism phi: A -> A^.
pub fn polarization_graph(phi: &HermitianMat) -> Result<ParamCorrespondence> {
    let m = phi.matrix();
    let j = Mat::identity(m.ring(), m.rows()).vstack(m);
    lagrangian(m.ring(), m.rows(), j)
}

fn check_pair(y: &ParamCorrespondence, z: &ParamCorrespondence) -> Result<()> {
    if y.ring() != z.ring() {
        return Err(Error::RingMismatch("Lagrangians over different rings".into()));
    }
    if y.ga() != 0 || z.ga() != 0 || y.gb() != z.gb() {
        return Err(Error::Shape("expected two Lagrangians in the same X_A".into()));
    }
    for l in [y, z] {
        if !is_lagrangian(l) {
            return Err(Error::Degenerate("not a Lagrangian of X_A".into()));
        }
    }
    Ok(())
}

/// Multiplication by x on O = Z + Z omega, in the basis (1, omega); a I_2 over Z.
fn real_block(ring: BaseRing, x: &QuadElem) -> [[i64; 2]; 2] {
    let (a, b) = x.int_coords();
    let (a, b) = (a.to_i64().unwrap(), b.to_i64().unwrap());
    if !ring.is_cm() {
        return [[a, 0], [0, a]];
    }
    let w = ring.omega();
    let t = w.trace().to_integer().to_i64().unwrap();
    let n = w.norm().to_integer().to_i64().unwrap();
    // x * 1 = a + b w, x * w = -n b + (a + t b) w
    [[a, -n * b], [b, a + t * b]]
}

/// The integer matrix of m acting on the lattice O^cols = Z^(2 cols).
fn realify(m: &Mat) -> Mat {
    let ring = m.ring();
    let z = BaseRing::Integers;
    let mut out = Mat::zeros(z, 2 * m.rows(), 2 * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let blk = real_block(ring, m.get(i, j));
            for (r, row) in blk.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    out.set(2 * i + r, 2 * j + c, QuadElem::from_int(z, *v));
                }
            }
        }
    }
    out
}

/// The skew form on the lattice of E in the basis (1, omega).
///
/// Over Z this is [[0, 1], [-1, 0]]; with CM it is Tr(delta^-1 conj(u) v) for
/// delta = omega - conj(omega), a generator of the different.
pub fn curve_form(ring: BaseRing) -> [[i64; 2]; 2] {
    if !ring.is_cm() {
        return [[0, 1], [-1, 0]];
    }
    let basis = [ring.one(), ring.omega()];
    let dinv = ring.different().inv().expect("nonzero different");
    let mut e = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let v = (&(&dinv * &basis[i].conj()) * &basis[j]).trace();
            assert!(v.is_integer());
            e[i][j] = v.to_integer().to_i64().unwrap();
        }
    }
    e
}

/// J tensor (the curve form): the Z-valued form on the lattice of X_A.
fn lattice_form(ring: BaseRing, g: usize) -> Mat {
    let j = standard_j(ring, g);
    let eps = curve_form(ring);
    let z = BaseRing::Integers;
    Mat::from_fn(z, 4 * g, 4 * g, |r, c| {
        let jv = int_of(j.get(r / 2, c / 2));
        QuadElem::from_int(z, jv * eps[r % 2][c % 2])
    })
}

/// K = Y x_X Z with its commutator pairing.
#[derive(Clone, Debug)]
pub struct IntersectionHeisenberg {
    pub group: FinAb,
    pub pairing: SkewPairing,
    /// |K| from the Smith form over O of the difference map
    pub order_over_o: BigInt,
}

fn difference_map(y: &ParamCorrespondence, z: &ParamCorrespondence) -> Mat {
    y.j().hstack(&-z.j())
}

/// The kernel of [j_Y | -j_Z], with e(k1, k2) = omega(y~1, z~2) mod 1.
///
/// Both Lagrangians are first replaced by their connected images.
pub fn intersection_heisenberg(
    y: &ParamCorrespondence,
    z: &ParamCorrespondence,
) -> Result<IntersectionHeisenberg> {
    check_pair(y, z)?;
    let (y, _) = connected_image(y)?;
    let (z, _) = connected_image(z)?;
    let ring = y.ring();
    let g = y.gb();
    let delta = difference_map(&y, &z);
    let order_over_o = finite_kernel_order(&delta)?.ok_or(Error::NotTransversal)?;
    let dr = realify(&delta);
    let n = dr.cols();
    let s = smith_normal_form(&dr)?;
    if s.rank < n {
        return Err(Error::NotTransversal);
    }
    // generators w_i = V e_i / D_ii of Delta^-1 Z^n / Z^n
    let mut orders = vec![];
    let mut gens: Vec<Vec<BigRational>> = vec![];
    for (i, d) in s.divisors.iter().enumerate() {
        let d = int_of(d).abs();
        if d == 1 {
            continue;
        }
        orders.push(d);
        gens.push((0..n).map(|r| s.v.get(r, i).a() / BigInt::from(d)).collect());
    }
    let group = FinAb::new(orders)?;
    let yr = realify(y.j());
    let zr = realify(z.j());
    let form = lattice_form(ring, g);
    let half = yr.cols();
    let lift = |m: &Mat, w: &[BigRational]| -> Vec<BigRational> {
        (0..m.rows())
            .map(|r| {
                w.iter()
                    .enumerate()
                    .fold(BigRational::zero(), |acc, (c, x)| acc + m.get(r, c).a() * x)
            })
            .collect()
    };
    let ys: Vec<Vec<BigRational>> = gens.iter().map(|w| lift(&yr, &w[..half])).collect();
    let zs: Vec<Vec<BigRational>> = gens.iter().map(|w| lift(&zr, &w[half..])).collect();
    let k = gens.len();
    let mut e = vec![vec![Phase::zero(); k]; k];
    for a in 0..k {
        for b in 0..k {
            let mut acc = BigRational::zero();
            for (r, y) in ys[a].iter().enumerate().take(form.rows()) {
                for (c, z) in zs[b].iter().enumerate().take(form.cols()) {
                    let f = form.get(r, c).a();
                    if !f.is_zero() {
                        acc += y * f * z;
                    }
                }
            }
            let v = &acc - acc.floor();
            e[a][b] = frac(Phase::new(
                v.numer().to_i64().expect("small phase"),
                v.denom().to_i64().expect("small phase"),
            ));
        }
    }
    if BigInt::from(group.order()) != order_over_o {
        return Err(Error::RoutesDisagree(format!(
            "|K| = {} over Z but {} over O",
            group.order(),
            order_over_o
        )));
    }
    let pairing = SkewPairing::new(group.clone(), e)
        .map_err(|err| Error::PairingNotPerfect(format!("intersection pairing: {err}")))?;
    Ok(IntersectionHeisenberg { group, pairing, order_over_o })
}

/// How the degree of the Hom space was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomRoute {
    /// Both Lagrangians project isogenously to A.
    Direct,
    /// Twisted by [[I, 0], [nI, I]] and moved by the Fourier element S first.
    Twisted { shear: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    pub degree: usize,
    pub dimension: BigInt,
    pub route: HomRoute,
    /// |Y x_X Z|
    pub intersection_order: BigInt,
}

fn blocks(l: &ParamCorrespondence) -> (Mat, Mat) {
    let g = l.gb();
    let j = l.j();
    (j.block(0, g, 0, j.cols()), j.block(g, 2 * g, 0, j.cols()))
}

fn apply(s: &SymplecticAuto, l: &ParamCorrespondence) -> Result<ParamCorrespondence> {
    let j = s.matrix() * l.j();
    ParamCorrespondence::new(l.source, l.target, j)
}

/// Data of the fibre F = Y x_A Z when both projections to A are isogenies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreData {
    /// i(f0^ g0)
    pub degree: usize,
    /// |ker(f: F -> A)|
    pub ker_f: BigInt,
    /// |ker(g: F -> A^)|, which is |Y x_X Z|
    pub ker_g: BigInt,
}

/// The direct route: F_0 has basis Kb, f0 = X_Y Kt, g0 = Xi_Z Kb' - Xi_Y Kt.
pub fn hom_fibre(y: &ParamCorrespondence, z: &ParamCorrespondence) -> Result<FibreData> {
    check_pair(y, z)?;
    let (xy, ky) = blocks(y);
    let (xz, kz) = blocks(z);
    if !xy.is_invertible() || !xz.is_invertible() {
        return Err(Error::DegenerateProjection);
    }
    let g = y.gb();
    let fmap = xy.hstack(&-&xz);
    let f_kernel =
        crate::isogeny::kernel_scheme(&crate::isogeny::IsogenyHom::from_matrix(fmap.clone()))?;
    let basis = crate::linalg::kernel_lattice(&fmap)?;
    let kt = basis.block(0, g, 0, basis.cols());
    let kb = basis.block(g, 2 * g, 0, basis.cols());
    let f0 = &xy * &kt;
    let g0 = &(&kz * &kb) - &(&ky * &kt);
    let h = HermitianMat::new(&f0.conj_transpose() * &g0)?;
    let degree = index_std(&h).map_err(|e| match e {
        Error::DegenerateH => Error::NotTransversal,
        other => other,
    })?;
    let pi0 = f_kernel.pi0_order;
    let ker_f0 =
        finite_kernel_order(&f0)?.ok_or(Error::Invariant("f0 is not an isogeny".into()))?;
    let ker_g0 = finite_kernel_order(&g0)?.ok_or(Error::NotTransversal)?;
    Ok(FibreData { degree, ker_f: &pi0 * ker_f0, ker_g: &pi0 * ker_g0 })
}

/// Smallest |n| (0, 1, -1, 2, ...) with Xi + n X invertible for both Lagrangians.
fn twist_for(items: &[&ParamCorrespondence], bound: u32) -> Result<i64> {
    let cands = std::iter::once(0i64).chain((1..=bound as i64).flat_map(|n| [n, -n]));
    for n in cands {
        if items.iter().all(|l| {
            let (x, k) = blocks(l);
            (&k + &x.scale_int(n)).is_invertible()
        }) {
            return Ok(n);
        }
    }
    Err(Error::ShearSearchExhausted(bound))
}

/// Shift s with Phi_S(S_Y) = S_{SY}[-s], for Xi invertible: the negative index of conj(X)^T Xi.
fn fourier_shift(l: &ParamCorrespondence) -> Result<usize> {
    let (x, k) = blocks(l);
    let h = HermitianMat::new(&x.conj_transpose() * &k)?;
    Ok(inertia(&h)?.1)
}

/// Degree through the twist route, with the shear used.
pub fn hom_degree_twisted(
    y: &ParamCorrespondence,
    z: &ParamCorrespondence,
    bound: u32,
) -> Result<(usize, i64)> {
    check_pair(y, z)?;
    let (y, _) = connected_image(y)?;
    let (z, _) = connected_image(z)?;
    let ring = y.ring();
    let g = y.gb();
    let n = twist_for(&[&y, &z], bound)?;
    let t = SymplecticAuto::shear_t(ring, g, n);
    let (ty, tz) = (apply(&t, &y)?, apply(&t, &z)?);
    let (sy_shift, sz_shift) = (fourier_shift(&ty)?, fourier_shift(&tz)?);
    let s = SymplecticAuto::fourier(ring, g);
    let d = hom_fibre(&apply(&s, &ty)?, &apply(&s, &tz)?)?.degree as i64;
    let deg = d - sy_shift as i64 + sz_shift as i64;
    if deg < 0 || deg > g as i64 {
        return Err(Error::Invariant(format!("degree {deg} outside [0, {g}]")));
    }
    Ok((deg as usize, n))
}

/// Degree and dimension of Hom(S_Y, S_Z) for transversal Lagrangians.
///
/// The dimension is |Y x_X Z|^(1/2) for the connected images. The degree comes from
/// the fibre over A when both project isogenously, through the twist route otherwise.
pub fn hom_space(y: &ParamCorrespondence, z: &ParamCorrespondence) -> Result<HomSpace> {
    check_pair(y, z)?;
    let (y, _) = connected_image(y)?;
    let (z, _) = connected_image(z)?;
    let kernel = finite_kernel_order(&difference_map(&y, &z))?.ok_or(Error::NotTransversal)?;
    let dimension =
        exact_sqrt(&kernel).ok_or_else(|| Error::NonSquareKernelOrder(kernel.to_string()))?;
    let (xy, _) = blocks(&y);
    let (xz, _) = blocks(&z);
    let (degree, route) = if xy.is_invertible() && xz.is_invertible() {
        let fib = hom_fibre(&y, &z)?;
        if fib.ker_g != kernel {
            return Err(Error::RoutesDisagree(format!(
                "|ker g| = {} on the fibre, |Y x_X Z| = {kernel}",
                fib.ker_g
            )));
        }
        let ker_proj = degree_over_a(&xy)? * degree_over_a(&xz)?;
        if fib.ker_f != ker_proj {
            return Err(Error::RoutesDisagree(format!(
                "|ker f| = {} on the fibre, deg(Y -> A) deg(Z -> A) = {ker_proj}",
                fib.ker_f
            )));
        }
        (fib.degree, HomRoute::Direct)
    } else {
        let (d, n) = hom_degree_twisted(&y, &z, DEFAULT_SHEAR_BOUND)?;
        (d, HomRoute::Twisted { shear: n })
    };
    Ok(HomSpace { degree, dimension, route, intersection_order: kernel })
}

fn degree_over_a(x: &Mat) -> Result<BigInt> {
    Ok(finite_kernel_order(x)?.unwrap_or_else(BigInt::one))
}
