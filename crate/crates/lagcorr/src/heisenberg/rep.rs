//! Monomial weight-one representations: Schrödinger models, characters, and isotypic pieces.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::group::{
    frac, lift_isotropic, maximal_isotropic, HeisenbergData, IsotropicLift, Phase, Subgroup,
};
use crate::arith::{exact_sqrt, Cyclo, CycloField};
use crate::error::{Error, Result};

/// rho(x) e_t = exp(2 pi i phase[x][t]) e_{perm[x][t]}, one entry per group element x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialRep {
    dim: usize,
    perm: Vec<Vec<usize>>,
    phase: Vec<Vec<Phase>>,
}

fn big(p: Phase) -> BigRational {
    BigRational::new(BigInt::from(*p.numer()), BigInt::from(*p.denom()))
}

impl MonomialRep {
    pub fn new(dim: usize, perm: Vec<Vec<usize>>, phase: Vec<Vec<Phase>>) -> Result<Self> {
        if perm.len() != phase.len() {
            return Err(Error::Shape("one permutation and one phase list per element".into()));
        }
        for (p, ph) in perm.iter().zip(&phase) {
            let mut seen = vec![false; dim];
            if p.len() != dim || ph.len() != dim {
                return Err(Error::Shape(format!(
                    "action of length {} on dimension {dim}",
                    p.len()
                )));
            }
            for &t in p {
                if t >= dim || seen[t] {
                    return Err(Error::Shape("action is not a permutation".into()));
                }
                seen[t] = true;
            }
        }
        let phase = phase.into_iter().map(|r| r.into_iter().map(frac).collect()).collect();
        Ok(MonomialRep { dim, perm, phase })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// (target index, phase) for rho(x) applied to e_t.
    pub fn act(&self, x: usize, t: usize) -> (usize, Phase) {
        (self.perm[x][t], self.phase[x][t])
    }

    pub fn direct_sum(&self, o: &MonomialRep) -> MonomialRep {
        assert_eq!(self.perm.len(), o.perm.len(), "representations of different groups");
        let perm = self
            .perm
            .iter()
            .zip(&o.perm)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|t| t + self.dim)).collect())
            .collect();
        let phase = self
            .phase
            .iter()
            .zip(&o.phase)
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        MonomialRep { dim: self.dim + o.dim, perm, phase }
    }

    /// Checks rho(x) rho(y) = exp(2 pi i c(x, y)) rho(x + y) for all x, y.
    pub fn verify(&self, h: &HeisenbergData) -> Result<()> {
        let k = h.group();
        if self.perm.len() != k.order() {
            return Err(Error::NotARepresentation(format!(
                "{} matrices for a group of order {}",
                self.perm.len(),
                k.order()
            )));
        }
        for x in 0..k.order() {
            for y in 0..k.order() {
                let xy = k.add_idx(x, y);
                let c = h.c_idx(x, y);
                for t in 0..self.dim {
                    let (s, p1) = self.act(y, t);
                    let (u, p2) = self.act(x, s);
                    let (u2, p3) = self.act(xy, t);
                    if u != u2 || frac(p1 + p2) != frac(c + p3) {
                        return Err(Error::NotARepresentation(format!(
                            "relation fails at x = {x}, y = {y}, basis vector {t}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Least M with every phase in (1/M)Z/Z.
    pub fn phase_order(&self) -> u64 {
        self.phase.iter().flatten().fold(1i64, |m, p| m.lcm(p.denom())) as u64
    }

    /// tr rho(x) as an element of Q(zeta_M).
    pub fn trace(&self, field: &CycloField, x: usize) -> Cyclo {
        let mut acc = field.zero();
        for t in 0..self.dim {
            let (s, p) = self.act(x, t);
            if s == t {
                acc = field.add(&acc, &field.root_of_unity(&big(p)));
            }
        }
        acc
    }

    pub fn character(&self, field: &CycloField) -> Vec<Cyclo> {
        (0..self.perm.len()).map(|x| self.trace(field, x)).collect()
    }
}

fn common_field(reps: &[&MonomialRep], extra: &[Phase]) -> CycloField {
    let mut m = reps.iter().fold(1u64, |m, r| m.lcm(&r.phase_order()));
    for p in extra {
        m = m.lcm(&(*p.denom() as u64));
    }
    CycloField::new(m)
}

fn rational_sum_to_usize(x: &Cyclo, what: &str) -> Result<usize> {
    let r = x.as_rational().ok_or_else(|| Error::Invariant(format!("{what} is not rational")))?;
    if !r.is_integer() || r < BigRational::zero() {
        return Err(Error::Invariant(format!("{what} = {r} is not a nonnegative integer")));
    }
    Ok(r.to_integer().to_usize().expect("small count"))
}

/// Induced representation from the lifted maximal isotropic subgroup.
///
/// Basis e_t over coset representatives t of K/I. With x + t = t' + u, u in I:
/// rho(x) e_t = exp(2 pi i (c(x, t) - c(t', u) + f(u))) e_{t'}.
pub fn schrodinger(h: &HeisenbergData, lift: &IsotropicLift) -> Result<MonomialRep> {
    let k = h.group();
    let sub = lift.subgroup();
    if !h.pairing().is_isotropic(sub) {
        return Err(Error::NotIsotropic);
    }
    if sub.order() * sub.order() != k.order() {
        return Err(Error::InvalidGroup(format!(
            "isotropic subgroup of order {} is not maximal in a group of order {}",
            sub.order(),
            k.order()
        )));
    }
    // smallest index in each coset
    let mut rep_of = vec![usize::MAX; k.order()];
    let mut reps = vec![];
    for x in 0..k.order() {
        if rep_of[x] != usize::MAX {
            continue;
        }
        for &u in sub.members() {
            rep_of[k.add_idx(x, u)] = x;
        }
        reps.push(x);
    }
    let pos: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let dim = reps.len();
    let mut perm = vec![vec![0; dim]; k.order()];
    let mut phase = vec![vec![Phase::zero(); dim]; k.order()];
    for x in 0..k.order() {
        for (i, &t) in reps.iter().enumerate() {
            let y = k.add_idx(x, t);
            let t2 = rep_of[y];
            let u = k.sub_idx(y, t2);
            perm[x][i] = pos[&t2];
            phase[x][i] = frac(h.c_idx(x, t) - h.c_idx(t2, u) + lift.f(u));
        }
    }
    MonomialRep::new(dim, perm, phase)
}

/// The Schrödinger representation from the default maximal isotropic subgroup.
pub fn schrodinger_default(h: &HeisenbergData, bound: usize) -> Result<MonomialRep> {
    let i = maximal_isotropic(h.pairing(), bound)?;
    let lift = lift_isotropic(h, &i)?;
    schrodinger(h, &lift)
}

/// Sum over K of |tr rho(k)|^2, exactly.
pub fn character_norm(rep: &MonomialRep, h: &HeisenbergData) -> Result<BigRational> {
    rep.verify(h)?;
    let field = common_field(&[rep], &[]);
    let mut acc = field.zero();
    for x in 0..h.group().order() {
        acc = field.add(&acc, &field.abs2(&rep.trace(&field, x)));
    }
    acc.as_rational().ok_or_else(|| Error::Invariant("character norm is not rational".into()))
}

/// True iff sum |tr rho(k)|^2 = |K|.
pub fn is_irreducible_weight1(rep: &MonomialRep, h: &HeisenbergData) -> Result<bool> {
    let n = character_norm(rep, h)?;
    Ok(n == BigRational::from_integer(BigInt::from(h.group().order())))
}

/// Equivalence of two representations of the same extension, by equality of characters.
pub fn equivalent(a: &MonomialRep, b: &MonomialRep) -> bool {
    if a.dim != b.dim || a.perm.len() != b.perm.len() {
        return false;
    }
    let field = common_field(&[a, b], &[]);
    (0..a.perm.len()).all(|x| a.trace(&field, x) == b.trace(&field, x))
}

/// dim W^I for the lifted copy x -> (-f(x), x) of an isotropic subgroup I.
pub fn invariants_dim(rep: &MonomialRep, lift: &IsotropicLift) -> Result<usize> {
    let sub = lift.subgroup();
    let fs: Vec<Phase> = sub.members().iter().map(|&u| lift.f(u)).collect();
    let field = common_field(&[rep], &fs);
    let mut acc = field.zero();
    for (&u, f) in sub.members().iter().zip(&fs) {
        let tw = field.mul(&field.root_of_unity(&big(-*f)), &rep.trace(&field, u));
        acc = field.add(&acc, &tw);
    }
    let avg = field.scale(&acc, &BigRational::new(1.into(), BigInt::from(sub.order())));
    rational_sum_to_usize(&avg, "dim W^I")
}

/// Data of the restriction of V_G to the preimage of C^perp, split by characters of C.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplicities {
    pub dim_v: usize,
    pub c_order: usize,
    /// dim of the Schrödinger representation of the quotient Heisenberg group C^perp / C
    pub quotient_dim: usize,
    pub counts: Vec<CharacterCount>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterCount {
    /// chi(c) for the members of C, in their index order
    pub chi: Vec<Phase>,
    pub multiplicity: usize,
}

struct Restriction {
    c_sub: Subgroup,
    k0: Subgroup,
    lift: IsotropicLift,
    quotient_dim: usize,
    chars: Vec<Vec<Phase>>,
}

fn restriction(h: &HeisenbergData, c_sub: &Subgroup, bound: usize) -> Result<Restriction> {
    let p = h.pairing();
    let k = h.group();
    if k.order() > bound {
        return Err(Error::SearchExhausted(bound));
    }
    if !p.is_isotropic(c_sub) {
        return Err(Error::NotCentral);
    }
    let k0 = p.perp(c_sub);
    if k0.order() * c_sub.order() != k.order() {
        return Err(Error::QuotientNotHeisenberg);
    }
    // radical of e on C^perp must be exactly C
    for &x in k0.members() {
        if !c_sub.contains(x) && k0.members().iter().all(|&y| p.eval_idx(x, y).is_zero()) {
            return Err(Error::QuotientNotHeisenberg);
        }
    }
    let q = k0.order() / c_sub.order();
    let quotient_dim =
        exact_sqrt(&BigInt::from(q)).ok_or(Error::QuotientNotHeisenberg)?.to_usize().unwrap();
    let lift = lift_isotropic(h, c_sub)?;
    // characters of C as restrictions of e(k, .)
    let mut chars: Vec<Vec<Phase>> = (0..k.order())
        .map(|x| c_sub.members().iter().map(|&c| p.eval_idx(x, c)).collect())
        .collect();
    chars.sort();
    chars.dedup();
    if chars.len() != c_sub.order() {
        return Err(Error::PairingNotPerfect("restriction K -> C* is not onto".into()));
    }
    Ok(Restriction { c_sub: c_sub.clone(), k0, lift, quotient_dim, chars })
}

/// Multiplicities from the formula m = dim V_G / (|C*| dim V_Gbar).
pub fn restrict_multiplicities(
    h: &HeisenbergData,
    c_sub: &Subgroup,
    bound: usize,
) -> Result<Multiplicities> {
    let r = restriction(h, c_sub, bound)?;
    let dim_v = exact_sqrt(&BigInt::from(h.group().order()))
        .ok_or_else(|| Error::PairingNotPerfect("|K| is not a square".into()))?
        .to_usize()
        .unwrap();
    let denom = r.c_sub.order() * r.quotient_dim;
    if dim_v % denom != 0 {
        return Err(Error::Invariant(format!("{dim_v} is not divisible by {denom}")));
    }
    let counts = r
        .chars
        .into_iter()
        .map(|chi| CharacterCount { chi, multiplicity: dim_v / denom })
        .collect();
    Ok(Multiplicities { dim_v, c_order: r.c_sub.order(), quotient_dim: r.quotient_dim, counts })
}

/// Multiplicities by isotypic decomposition of the explicit Schrödinger model.
///
/// With P_chi the projector onto the chi-isotypic part W_chi for the lifted C,
/// m_chi^2 = |K0|^-1 sum_{k in K0} |tr(rho(k) P_chi)|^2 and dim W_chi = m_chi dim V_Gbar.
pub fn brute_force_multiplicities(
    h: &HeisenbergData,
    c_sub: &Subgroup,
    bound: usize,
) -> Result<Multiplicities> {
    let r = restriction(h, c_sub, bound)?;
    let k = h.group();
    let rep = schrodinger_default(h, bound)?;
    let fs: Vec<Phase> = r.c_sub.members().iter().map(|&c| r.lift.f(c)).collect();
    let mut extra: Vec<Phase> = fs.clone();
    extra.extend(r.chars.iter().flatten().copied());
    for &x in r.k0.members() {
        for &c in r.c_sub.members() {
            extra.push(h.c_idx(x, c));
        }
    }
    let field = common_field(&[&rep], &extra);
    let traces = rep.character(&field);
    let inv_c = BigRational::new(1.into(), BigInt::from(r.c_sub.order()));
    let mut counts = vec![];
    for chi in r.chars {
        // dim W_chi = tr P_chi
        let mut dim = field.zero();
        for (i, &c) in r.c_sub.members().iter().enumerate() {
            let ph = big(-chi[i] - fs[i]);
            dim = field.add(&dim, &field.mul(&field.root_of_unity(&ph), &traces[c]));
        }
        let dim = rational_sum_to_usize(&field.scale(&dim, &inv_c), "dim W_chi")?;
        let mut norm = field.zero();
        for &x in r.k0.members() {
            let mut t = field.zero();
            for (i, &c) in r.c_sub.members().iter().enumerate() {
                let ph = big(-chi[i] - fs[i] + h.c_idx(x, c));
                t = field.add(&t, &field.mul(&field.root_of_unity(&ph), &traces[k.add_idx(x, c)]));
            }
            let t = field.scale(&t, &inv_c);
            norm = field.add(&norm, &field.abs2(&t));
        }
        let m2 = rational_sum_to_usize(
            &field.scale(&norm, &BigRational::new(1.into(), BigInt::from(r.k0.order()))),
            "m_chi^2",
        )?;
        let m = exact_sqrt(&BigInt::from(m2))
            .ok_or_else(|| Error::NotSquare(format!("m_chi^2 = {m2}")))?
            .to_usize()
            .unwrap();
        if dim != m * r.quotient_dim {
            return Err(Error::RoutesDisagree(format!(
                "dim W_chi = {dim} but m_chi dim V_Gbar = {}",
                m * r.quotient_dim
            )));
        }
        counts.push(CharacterCount { chi, multiplicity: m });
    }
    Ok(Multiplicities {
        dim_v: rep.dim(),
        c_order: r.c_sub.order(),
        quotient_dim: r.quotient_dim,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::super::group::{isotropic_subgroups, maximal_isotropic_subgroups, SkewPairing};
    use super::*;

    fn std_h(ns: &[i64]) -> HeisenbergData {
        HeisenbergData::standard(SkewPairing::standard(ns).unwrap())
    }

    #[test]
    fn schrodinger_z2_squared() {
        let h = std_h(&[2]);
        let rho = schrodinger_default(&h, 64).unwrap();
        assert_eq!(rho.dim(), 2);
        rho.verify(&h).unwrap();
        let k = h.group();
        // (1, 0) swaps the two basis vectors, (0, 1) is diagonal with phases (0, 1/2)
        let x = k.index_of(&[1, 0]);
        assert_eq!((rho.act(x, 0).0, rho.act(x, 1).0), (1, 0));
        let y = k.index_of(&[0, 1]);
        assert_eq!(rho.act(y, 0), (0, Phase::new(0, 1)));
        assert_eq!(rho.act(y, 1), (1, Phase::new(1, 2)));
        assert!(is_irreducible_weight1(&rho, &h).unwrap());
    }

    #[test]
    fn dimensions() {
        assert_eq!(schrodinger_default(&std_h(&[3]), 64).unwrap().dim(), 3);
        let t = HeisenbergData::standard(
            SkewPairing::new(super::super::FinAb::trivial(), vec![]).unwrap(),
        );
        let rho = schrodinger_default(&t, 64).unwrap();
        assert_eq!(rho.dim(), 1);
        assert!(is_irreducible_weight1(&rho, &t).unwrap());
    }

    #[test]
    fn direct_sum_is_reducible() {
        let h = std_h(&[3]);
        let rho = schrodinger_default(&h, 64).unwrap();
        let w = rho.direct_sum(&rho);
        assert!(!is_irreducible_weight1(&w, &h).unwrap());
        assert_eq!(character_norm(&w, &h).unwrap(), BigRational::from_integer(36.into()));
    }

    #[test]
    fn all_lagrangians_give_equivalent_models() {
        let h = std_h(&[4]);
        let base = schrodinger_default(&h, 64).unwrap();
        for s in maximal_isotropic_subgroups(h.pairing(), 64).unwrap() {
            let lift = lift_isotropic(&h, &s).unwrap();
            let rho = schrodinger(&h, &lift).unwrap();
            rho.verify(&h).unwrap();
            assert!(equivalent(&base, &rho));
            assert_eq!(invariants_dim(&base, &lift).unwrap(), 1);
        }
    }

    #[test]
    fn multiplicities_match_brute_force() {
        let h = std_h(&[2, 2]);
        for c in isotropic_subgroups(h.pairing(), 64).unwrap() {
            let f = restrict_multiplicities(&h, &c, 64).unwrap();
            let b = brute_force_multiplicities(&h, &c, 64).unwrap();
            assert_eq!(f, b);
            assert_eq!(f.counts.len(), c.order());
            assert!(f.counts.iter().all(|x| x.multiplicity == 1));
        }
    }

    #[test]
    fn trivial_c_has_one_character() {
        let h = std_h(&[3]);
        let m = restrict_multiplicities(&h, &Subgroup::trivial(), 64).unwrap();
        assert_eq!(m.counts.len(), 1);
        assert_eq!(m.counts[0].multiplicity, 1);
        assert_eq!(m.quotient_dim, 3);
    }

    #[test]
    fn non_isotropic_c_is_not_central() {
        let h = std_h(&[2]);
        let all = Subgroup::generated(h.group(), &[vec![1, 0], vec![0, 1]]);
        assert_eq!(restrict_multiplicities(&h, &all, 64), Err(Error::NotCentral));
    }
}
