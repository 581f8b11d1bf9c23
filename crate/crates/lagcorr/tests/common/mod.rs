#![allow(dead_code)]

use lagcorr::arith::BaseRing;
use lagcorr::correspondence::ParamCorrespondence;
use lagcorr::heisenberg::positions;
use lagcorr::sample;
use rand::Rng;

pub fn rings() -> Vec<BaseRing> {
    vec![BaseRing::Integers, BaseRing::quadratic(-1).unwrap()]
}

pub fn all_rings() -> Vec<BaseRing> {
    let mut out = vec![BaseRing::Integers];
    out.extend([-1, -2, -3, -7, -11].map(|d| BaseRing::quadratic(d).unwrap()));
    out
}

/// g . (A x 0) for a random integral symplectic g.
pub fn random_lagrangian(rng: &mut impl Rng, ring: BaseRing, g: usize) -> ParamCorrespondence {
    let m = sample::integral_symplectic(rng, ring, g, 4);
    let base = positions(ring, g);
    ParamCorrespondence::new(base.source, base.target, m.matrix() * base.j()).unwrap()
}
