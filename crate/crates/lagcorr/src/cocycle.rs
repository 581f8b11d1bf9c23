//! The shift cocycle lambda, the multiplicity cocycle N, the central extension they define,
//! and the mod-squares invariant that makes N nontrivial for CM curves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{squarefree_part, BaseRing, QuadElem};
use crate::correspondence::{
    compose, graph, project_pi, q_degree, ParamCorrespondence, SymplecticAuto,
};
use crate::error::{Error, Result};
use crate::isogeny::{index_std, inertia, HermitianMat};

/// Default bound on |n| for the shears used to reduce lambda to U0 x U0.
pub const DEFAULT_SHEAR_BOUND: u32 = 64;

/// H = b(g1)^-1 b(g1 g2) b(g2)^-1, verified Hermitian. Requires g1, g2 in U0.
fn h_form(g1: &SymplecticAuto, g2: &SymplecticAuto) -> Result<HermitianMat> {
    let b1i = g1.b().inverse().map_err(|_| Error::NotInU0)?;
    let b2i = g2.b().inverse().map_err(|_| Error::NotInU0)?;
    let b12 = g1.mul(g2).b();
    HermitianMat::new(&(&b1i * &b12) * &b2i)
}

/// lambda(g1, g2) = -i(b(g1)^-1 b(g1 g2) b(g2)^-1) when all three b-blocks are invertible.
pub fn lambda_closed(g1: &SymplecticAuto, g2: &SymplecticAuto) -> Result<i64> {
    if !g1.in_u0() || !g2.in_u0() || !g1.mul(g2).in_u0() {
        return Err(Error::NotInU0);
    }
    let h = h_form(g1, g2)?;
    Ok(-(index_std(&h)? as i64))
}

/// lambda on U0 x U0, allowing b(g1 g2) to be singular.
///
/// On the degenerate fibre the index generalizes to n_minus + n_zero, the
/// count of non-positive directions of H; this is the only extension of the
/// closed formula compatible with the cocycle identity.
fn lambda_u0(g1: &SymplecticAuto, g2: &SymplecticAuto) -> Result<i64> {
    let h = h_form(g1, g2)?;
    let (_, nminus, nzero) = inertia(&h)?;
    Ok(-((nminus + nzero) as i64))
}

/// Shears tried as intermediate elements: f(n), f(-n), then f(m)^T f(n).
fn candidates(ring: BaseRing, g: usize, bound: u32) -> impl Iterator<Item = SymplecticAuto> {
    let b = bound as i64;
    let singles =
        (1..=b).flat_map(move |n| [n, -n]).map(move |n| SymplecticAuto::shear(ring, g, n));
    let pairs = (1..=b).flat_map(move |m| {
        (1..=b).flat_map(move |n| {
            [(m, n), (-m, n), (m, -n), (-m, -n)].into_iter().map(move |(m, n)| {
                SymplecticAuto::shear_t(ring, g, m).mul(&SymplecticAuto::shear(ring, g, n))
            })
        })
    });
    singles.chain(pairs)
}

/// How a value of lambda was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaRoute {
    /// One argument is the identity.
    Unit,
    /// Both arguments and the product in U0.
    Closed,
    /// Both arguments in U0, product not.
    DegenerateFibre,
    /// Reduced through the cocycle identity with the given intermediate element.
    Reduced(SymplecticAuto),
}

/// lambda together with the data behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaReport {
    pub value: i64,
    pub route: LambdaRoute,
    /// i(H) without the sign, when H is defined and nondegenerate.
    pub unsigned_index: Option<usize>,
    /// The value recomputed through a different intermediate element, for reduced routes.
    pub second_value: Option<i64>,
}

struct Reducer {
    bound: u32,
}

impl Reducer {
    fn eval(
        &self,
        x: &SymplecticAuto,
        y: &SymplecticAuto,
        skip: usize,
    ) -> Result<(i64, LambdaRoute)> {
        if x.is_identity() || y.is_identity() {
            return Ok((0, LambdaRoute::Unit));
        }
        let (ring, g) = (x.ring(), x.genus());
        match (x.in_u0(), y.in_u0()) {
            (true, true) => {
                let route = if x.mul(y).in_u0() {
                    LambdaRoute::Closed
                } else {
                    LambdaRoute::DegenerateFibre
                };
                Ok((lambda_u0(x, y)?, route))
            }
            (_, false) => {
                // y = w z:  lambda(x, y) = lambda(x, w) + lambda(xw, z) - lambda(w, z)
                let w = candidates(ring, g, self.bound)
                    .filter(|w| {
                        let z = w.inverse().mul(y);
                        z.in_u0() && x.mul(w).in_u0()
                    })
                    .nth(skip)
                    .ok_or(Error::ReductionFailed(self.bound))?;
                let z = w.inverse().mul(y);
                let v = self.eval(x, &w, 0)?.0 + self.eval(&x.mul(&w), &z, 0)?.0
                    - self.eval(&w, &z, 0)?.0;
                Ok((v, LambdaRoute::Reduced(w)))
            }
            (false, true) => {
                // x = w u:  lambda(x, y) = lambda(u, y) + lambda(w, uy) - lambda(w, u)
                let w = candidates(ring, g, self.bound)
                    .filter(|w| {
                        let u = w.inverse().mul(x);
                        u.in_u0() && u.mul(y).in_u0()
                    })
                    .nth(skip)
                    .ok_or(Error::ReductionFailed(self.bound))?;
                let u = w.inverse().mul(x);
                let uy = u.mul(y);
                let v = lambda_u0(&u, y)? + lambda_u0(&w, &uy)? - lambda_u0(&w, &u)?;
                Ok((v, LambdaRoute::Reduced(w)))
            }
        }
    }
}

/// lambda(g1, g2) on all of U, with a full report.
///
/// Values outside U0 x U0 are computed twice, through two different
/// intermediate shears, and the two must agree.
pub fn lambda_report(g1: &SymplecticAuto, g2: &SymplecticAuto, bound: u32) -> Result<LambdaReport> {
    if g1.genus() != g2.genus() || g1.ring() != g2.ring() {
        return Err(Error::Shape("lambda of elements of different groups".into()));
    }
    let r = Reducer { bound };
    let (value, route) = r.eval(g1, g2, 0)?;
    let unsigned_index = match route {
        LambdaRoute::Closed => Some(index_std(&h_form(g1, g2)?)?),
        _ => None,
    };
    let second_value = match route {
        LambdaRoute::Reduced(_) => {
            let (v2, _) = r.eval(g1, g2, 1)?;
            if v2 != value {
                return Err(Error::RoutesDisagree(format!(
                    "lambda reduced two ways gives {value} and {v2}"
                )));
            }
            Some(v2)
        }
        _ => None,
    };
    Ok(LambdaReport { value, route, unsigned_index, second_value })
}

pub fn lambda(g1: &SymplecticAuto, g2: &SymplecticAuto) -> Result<i64> {
    Ok(lambda_report(g1, g2, DEFAULT_SHEAR_BOUND)?.value)
}

/// N(g1, g2) with the data of both routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NReport {
    pub n: BigInt,
    pub pi0_order: BigInt,
    pub d_image_degree: BigInt,
    /// N^2 from q(L1) q(L2) / q(L(g1 g2)), when all b-blocks are invertible.
    pub q_route_square: Option<BigInt>,
}

/// N(g1, g2) = (|pi_0(Z)| d)^(1/2) for Z = L1 o L2, whose projection is g1 g2.
pub fn n_coeff_report(
    g1: &SymplecticAuto,
    g2: &SymplecticAuto,
    l1: &ParamCorrespondence,
    l2: &ParamCorrespondence,
) -> Result<NReport> {
    for (g, l, name) in [(g1, l1, "L1"), (g2, l2, "L2")] {
        if project_pi(l)? != *g {
            return Err(Error::PresentationMismatch(name.into()));
        }
    }
    let z = compose(l2, l1)?;
    if z.pi()? != g1.mul(g2) {
        return Err(Error::Invariant("pi of the composite is not g1 g2".into()));
    }
    let n = z.n_total()?;
    let q_route_square = if g1.in_u0() && g2.in_u0() && g1.mul(g2).in_u0() {
        let num = q_degree(l1)? * q_degree(l2)?;
        let den = q_degree(&graph(&g1.mul(g2))?)?;
        let (sq, r) = num.div_rem(&den);
        if !r.is_zero() || sq != &n * &n {
            return Err(Error::RoutesDisagree(format!(
                "N^2 = {} from components but q(L1) q(L2) / q(L12) = {num}/{den}",
                &n * &n
            )));
        }
        Some(sq)
    } else {
        None
    };
    Ok(NReport { n, pi0_order: z.pi0_order, d_image_degree: z.d_image_degree, q_route_square })
}

pub fn n_coeff(
    g1: &SymplecticAuto,
    g2: &SymplecticAuto,
    l1: &ParamCorrespondence,
    l2: &ParamCorrespondence,
) -> Result<BigInt> {
    Ok(n_coeff_report(g1, g2, l1, l2)?.n)
}

/// N(g1, g2) on graph presentations.
pub fn n_graph(g1: &SymplecticAuto, g2: &SymplecticAuto) -> Result<BigInt> {
    n_coeff(g1, g2, &graph(g1)?, &graph(g2)?)
}

/// An element (g, m, n) of the central extension of U by Q*_+ x Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElement {
    pub g: SymplecticAuto,
    pub m: BigRational,
    pub n: i64,
}

impl ExtElement {
    pub fn new(g: SymplecticAuto, m: BigRational, n: i64) -> Result<Self> {
        if !m.is_positive() {
            return Err(Error::Invariant(format!("multiplicity {m} is not positive")));
        }
        Ok(ExtElement { g, m, n })
    }

    pub fn lift(g: SymplecticAuto) -> Self {
        ExtElement { g, m: BigRational::one(), n: 0 }
    }
}

/// (g1, m1, n1)(g2, m2, n2) = (g1 g2, m1 m2 N(g1, g2), n1 + n2 + lambda(g1, g2)).
pub fn ext_mul(u: &ExtElement, v: &ExtElement) -> Result<ExtElement> {
    let nn = n_graph(&u.g, &v.g)?;
    let l = lambda(&u.g, &v.g)?;
    Ok(ExtElement {
        g: u.g.mul(&v.g),
        m: &u.m * &v.m * BigRational::from_integer(nn),
        n: u.n + v.n + l,
    })
}

/// A class in Q*/(Q*)^2 of a positive rational, by its squarefree integer representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareClass(pub BigInt);

impl SquareClass {
    pub fn of_rational(r: &BigRational) -> Self {
        assert!(r.is_positive());
        SquareClass(squarefree_part(&(r.numer() * r.denom())))
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_one()
    }
}

/// Squarefree part of q(L).
pub fn q_bar(l: &ParamCorrespondence) -> Result<SquareClass> {
    let q = q_degree(l)?;
    if q.is_zero() {
        return Err(Error::DegeneratePresentation);
    }
    Ok(SquareClass(squarefree_part(&q)))
}

/// The embedding iota(a) = conj(a)/a.
pub fn iota(a: &QuadElem) -> Result<QuadElem> {
    Ok(&a.conj() * &a.inv()?)
}

/// Scale a nonzero element of K to a primitive element a + b w of O.
fn primitive(x: &QuadElem) -> QuadElem {
    let den = x.denominator();
    let y = x.scale(&BigRational::from_integer(den));
    let (a, b) = y.int_coords();
    let mut c = a.gcd(&b);
    // fix the sign so the first nonzero coordinate is positive
    if a.is_negative() || (a.is_zero() && b.is_negative()) {
        c = -c;
    }
    y.scale(&BigRational::new(BigInt::one(), c))
}

/// phi(g) in K*/Q* with det(g) = iota(phi(g)), as a primitive element of O.
pub fn phi_det(g: &SymplecticAuto) -> Result<QuadElem> {
    let ring = g.ring();
    if !ring.is_cm() {
        return Err(Error::NotCM);
    }
    let delta = g.det();
    if !delta.norm().is_one() {
        return Err(Error::NoSolution(delta.to_string()));
    }
    let phi = if delta == -ring.one() { ring.different() } else { &ring.one() + &delta.conj() };
    let phi = primitive(&phi);
    if iota(&phi)? != delta {
        return Err(Error::NoSolution(delta.to_string()));
    }
    Ok(phi)
}

/// The data exhibiting that q-bar does not lift to a homomorphism into Q*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionWitness {
    pub discriminant: i64,
    /// sqrt D as an element of O.
    pub sqrt_d: QuadElem,
    pub q: BigInt,
    pub q_bar: SquareClass,
    pub phi: QuadElem,
    pub nm_phi_class: SquareClass,
    pub det: QuadElem,
    /// g_sqrtD^2 = diag(1/D, D) lies in SL_2(Q), so g_sqrtD has order <= 2 modulo commutators.
    pub square_in_sl2_q: bool,
    /// q-bar is neither 1 nor the class of -1, so no homomorphism to Q* can lift it here.
    pub nontrivial: bool,
}

/// Evaluate the mod-squares obstruction at g = g_{sqrt D} on its model correspondence.
pub fn obstruction_witness(d: i64) -> Result<ObstructionWitness> {
    let ring = BaseRing::quadratic(d)?;
    let s = ring.sqrt_d();
    let g = SymplecticAuto::g_a(&s, 1)?;
    let l = crate::correspondence::ga_model(&s, 1)?;
    if project_pi(&l)? != g {
        return Err(Error::Invariant("model does not project to g_a".into()));
    }
    let q = q_degree(&l)?;
    let qb = q_bar(&l)?;
    let phi = phi_det(&g)?;
    let nm_class = SquareClass::of_rational(&phi.norm());
    let g2 = g.mul(&g);
    let square_in_sl2_q =
        g2.matrix().entries().iter().all(|x| x.is_rational()) && g2.det().is_one();
    let nontrivial = !qb.is_trivial();
    Ok(ObstructionWitness {
        discriminant: d,
        sqrt_d: s,
        q,
        q_bar: qb,
        phi,
        nm_phi_class: nm_class,
        det: g.det(),
        square_in_sl2_q,
        nontrivial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::exact_sqrt;
    use crate::correspondence::{ga_model, transpose};
    use crate::linalg::Mat;

    fn z() -> BaseRing {
        BaseRing::Integers
    }

    fn sp(rows: &[&[i64]]) -> SymplecticAuto {
        SymplecticAuto::new(Mat::from_ints(z(), rows)).unwrap()
    }

    #[test]
    fn lambda_closed_oracles() {
        let g = sp(&[&[1, 1], &[1, 2]]);
        assert_eq!(lambda_closed(&g, &g), Ok(0));
        let h = sp(&[&[1, -1], &[-1, 2]]);
        assert_eq!(lambda_closed(&h, &h), Ok(-1));
        let s = SymplecticAuto::fourier(z(), 1);
        assert_eq!(lambda_closed(&s, &s), Err(Error::NotInU0));
    }

    #[test]
    fn lambda_fourier_square() {
        let s = SymplecticAuto::fourier(z(), 1);
        let r = lambda_report(&s, &s, DEFAULT_SHEAR_BOUND).unwrap();
        assert_eq!(r.value, -1);
        assert_eq!(r.route, LambdaRoute::DegenerateFibre);
    }

    #[test]
    fn lambda_unit() {
        let g = sp(&[&[2, 3], &[1, 2]]);
        let e = SymplecticAuto::identity(z(), 1);
        assert_eq!(lambda(&e, &g), Ok(0));
        assert_eq!(lambda(&g, &e), Ok(0));
    }

    #[test]
    fn lambda_reduced_routes_agree() {
        let x = sp(&[&[-1, 0], &[0, -1]]);
        let y = sp(&[&[1, 0], &[3, 1]]);
        let r = lambda_report(&x, &y, DEFAULT_SHEAR_BOUND).unwrap();
        assert!(matches!(r.route, LambdaRoute::Reduced(_)));
        assert_eq!(r.second_value, Some(r.value));
        assert!(r.value <= 0);
    }

    #[test]
    fn n_coeff_oracles() {
        let g = sp(&[&[2, 3], &[1, 2]]);
        let e = SymplecticAuto::identity(z(), 1);
        assert_eq!(n_graph(&e, &g).unwrap(), BigInt::one());
        let s = SymplecticAuto::fourier(z(), 1);
        assert_eq!(n_graph(&s, &s).unwrap(), BigInt::one());

        let ring = BaseRing::quadratic(-1).unwrap();
        let a = QuadElem::from_ints(ring, 1, 1);
        let ga = SymplecticAuto::g_a(&a, 1).unwrap();
        let l = ga_model(&a, 1).unwrap();
        let rep = n_coeff_report(&ga, &ga, &l, &l).unwrap();
        assert_eq!(rep.n, BigInt::one());
        let lt = transpose(&l);
        let rep = n_coeff_report(&ga.inverse(), &ga, &lt, &l).unwrap();
        assert_eq!(rep.n, BigInt::from(2));
        assert!(exact_sqrt(&(&rep.pi0_order * &rep.d_image_degree)).is_some());
    }

    #[test]
    fn ext_mul_oracles() {
        let s = SymplecticAuto::fourier(z(), 1);
        let u = ExtElement::lift(s.clone());
        let uu = ext_mul(&u, &u).unwrap();
        assert_eq!(uu.g, s.mul(&s));
        assert_eq!(uu.m, BigRational::one());
        assert_eq!(uu.n, -1);
        let e = ExtElement::lift(SymplecticAuto::identity(z(), 1));
        assert_eq!(ext_mul(&u, &e).unwrap(), u);
    }

    #[test]
    fn q_bar_and_phi() {
        let ring = BaseRing::quadratic(-1).unwrap();
        let a = QuadElem::from_ints(ring, 1, 1);
        assert_eq!(q_bar(&ga_model(&a, 1).unwrap()).unwrap(), SquareClass(BigInt::from(2)));
        assert_eq!(phi_det(&SymplecticAuto::g_a(&a, 1).unwrap()).unwrap(), a);
        assert!(phi_det(&SymplecticAuto::identity(ring, 1)).unwrap().is_one());
        let g = sp(&[&[2, 3], &[1, 2]]);
        assert_eq!(q_bar(&graph(&g).unwrap()).unwrap(), SquareClass(BigInt::one()));
        assert_eq!(phi_det(&g), Err(Error::NotCM));
    }

    #[test]
    fn obstruction_values() {
        for (d, cls) in [(-2, 2), (-7, 7), (-11, 11)] {
            let w = obstruction_witness(d).unwrap();
            assert_eq!(w.q_bar, SquareClass(BigInt::from(cls)));
            assert_eq!(w.nm_phi_class, w.q_bar);
            assert!(w.nontrivial && w.square_in_sl2_q);
            assert_eq!(w.det, -BaseRing::quadratic(d).unwrap().one());
        }
    }
}
