//! Finite abelian groups, skew pairings, and Heisenberg cocycles.

use std::collections::{HashSet, VecDeque};

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{BaseRing, QuadElem};
use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, Mat};

/// An element of Q/Z, kept in [0, 1).
pub type Phase = Rational64;

pub fn frac(x: Phase) -> Phase {
    x - x.floor()
}

pub(crate) fn int_of(q: &QuadElem) -> i64 {
    q.a().to_integer().to_i64().expect("entry fits in i64")
}

fn zmat(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Mat {
    Mat::from_fn(BaseRing::Integers, rows, cols, |i, j| {
        QuadElem::from_int(BaseRing::Integers, f(i, j))
    })
}

/// Z/n_1 x ... x Z/n_k with n_1 | n_2 | ... | n_k.
///
/// Elements are coordinate vectors reduced mod the orders; they are also
/// numbered 0..order() in mixed radix, first coordinate fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAb {
    orders: Vec<i64>,
    size: usize,
}

impl FinAb {
    pub fn new(orders: Vec<i64>) -> Result<Self> {
        if let Some(n) = orders.iter().find(|&&n| n < 1) {
            return Err(Error::InvalidGroup(format!("cyclic order {n}")));
        }
        if orders.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidGroup(format!("{orders:?} is not a divisibility chain")));
        }
        let mut size: usize = 1;
        for &n in &orders {
            size = size
                .checked_mul(n as usize)
                .ok_or_else(|| Error::InvalidGroup("group too large to enumerate".into()))?;
        }
        Ok(FinAb { orders, size })
    }

    pub fn trivial() -> Self {
        FinAb { orders: vec![], size: 1 }
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.size
    }

    pub fn exponent(&self) -> i64 {
        self.orders.last().copied().unwrap_or(1)
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter().zip(&self.orders).map(|(x, n)| x.rem_euclid(*n)).collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.reduce(&s)
    }

    pub fn index_of(&self, x: &[i64]) -> usize {
        let mut idx = 0usize;
        for (v, n) in self.reduce(x).iter().zip(&self.orders).rev() {
            idx = idx * (*n as usize) + *v as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> Vec<i64> {
        self.orders
            .iter()
            .map(|&n| {
                let v = idx % n as usize;
                idx /= n as usize;
                v as i64
            })
            .collect()
    }

    pub fn elements(&self) -> Vec<Vec<i64>> {
        (0..self.size).map(|i| self.element(i)).collect()
    }

    /// Index of x + y, on indices.
    pub fn add_idx(&self, x: usize, y: usize) -> usize {
        self.index_of(&self.add(&self.element(x), &self.element(y)))
    }

    pub fn sub_idx(&self, x: usize, y: usize) -> usize {
        self.index_of(&self.sub(&self.element(x), &self.element(y)))
    }
}

/// A subgroup, as the sorted list of its element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup { members: vec![0] }
    }

    /// The subgroup generated by the given elements.
    pub fn generated(k: &FinAb, gens: &[Vec<i64>]) -> Self {
        let mut seen = vec![false; k.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let gens: Vec<usize> = gens.iter().map(|g| k.index_of(g)).collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = k.add_idx(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Subgroup { members: (0..k.order()).filter(|&i| seen[i]).collect() }
    }

    pub fn from_members(k: &FinAb, members: &[usize]) -> Result<Self> {
        let gens: Vec<Vec<i64>> = members.iter().map(|&m| k.element(m)).collect();
        let s = Subgroup::generated(k, &gens);
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if s.members != sorted {
            return Err(Error::InvalidGroup("element list is not closed under addition".into()));
        }
        Ok(s)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    fn with(&self, k: &FinAb, x: usize) -> Subgroup {
        let mut gens: Vec<Vec<i64>> = self.members.iter().map(|&m| k.element(m)).collect();
        gens.push(k.element(x));
        Subgroup::generated(k, &gens)
    }
}

/// A bi-additive alternating pairing K x K -> Q/Z, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPairing {
    group: FinAb,
    e: Vec<Vec<Phase>>,
    split: bool,
}

impl SkewPairing {
    /// Validates well-definedness, skewness and perfectness.
    pub fn new(group: FinAb, e: Vec<Vec<Phase>>) -> Result<Self> {
        let p = SkewPairing::unchecked(group, e)?;
        if !p.is_perfect() {
            return Err(Error::DegeneratePairing(format!("{:?}", p.e)));
        }
        Ok(p)
    }

    fn unchecked(group: FinAb, e: Vec<Vec<Phase>>) -> Result<Self> {
        let k = group.rank();
        if e.len() != k || e.iter().any(|r| r.len() != k) {
            return Err(Error::Shape(format!("pairing matrix must be {k} x {k}")));
        }
        let n = group.orders();
        let e: Vec<Vec<Phase>> = e.into_iter().map(|r| r.into_iter().map(frac).collect()).collect();
        for i in 0..k {
            if !e[i][i].is_zero() {
                return Err(Error::NotSkew(format!("e(g{i}, g{i}) = {}", e[i][i])));
            }
            for j in 0..k {
                let wi = frac(e[i][j] * n[i]);
                let wj = frac(e[i][j] * n[j]);
                if !wi.is_zero() || !wj.is_zero() {
                    return Err(Error::NotSkew(format!("entry ({i}, {j}) is not well defined")));
                }
                if !frac(e[i][j] + e[j][i]).is_zero() {
                    return Err(Error::NotSkew(format!("entries ({i}, {j}) and ({j}, {i})")));
                }
            }
        }
        Ok(SkewPairing { group, e, split: false })
    }

    /// The split pairing on (Z/n_1)^2 x ... x (Z/n_r)^2, coordinates (x_1, y_1, x_2, y_2, ...),
    /// with e = sum (x_i y'_i - y_i x'_i) / n_i. The n_i must form a divisibility chain.
    pub fn standard(ns: &[i64]) -> Result<Self> {
        let orders: Vec<i64> = ns.iter().flat_map(|&n| [n, n]).collect();
        let group = FinAb::new(orders)?;
        let k = group.rank();
        let mut e = vec![vec![Phase::zero(); k]; k];
        for (i, &n) in ns.iter().enumerate() {
            e[2 * i][2 * i + 1] = Phase::new(1, n);
            e[2 * i + 1][2 * i] = frac(Phase::new(-1, n));
        }
        let mut p = SkewPairing::new(group, e)?;
        p.split = true;
        Ok(p)
    }

    pub fn group(&self) -> &FinAb {
        &self.group
    }

    pub fn matrix(&self) -> &[Vec<Phase>] {
        &self.e
    }

    pub fn is_split(&self) -> bool {
        self.split
    }

    pub fn eval(&self, x: &[i64], y: &[i64]) -> Phase {
        bilinear(&self.e, x, y)
    }

    pub fn eval_idx(&self, x: usize, y: usize) -> Phase {
        self.eval(&self.group.element(x), &self.group.element(y))
    }

    /// K -> K* is injective, decided by a Smith normal form over Z.
    ///
    /// The image of generator i is (n_j e_ij mod n_j)_j in the sum of the Z/n_j;
    /// together with the relations n_j it must span all of Z^k.
    pub fn is_perfect(&self) -> bool {
        let n = self.group.orders();
        let k = n.len();
        if k == 0 {
            return true;
        }
        let m = zmat(k, 2 * k, |j, c| {
            if c < k {
                (self.e[c][j] * n[j]).to_integer()
            } else if c - k == j {
                n[j]
            } else {
                0
            }
        });
        let s = smith_normal_form(&m).expect("integer matrix");
        s.rank == k && s.divisors.iter().all(|d| d.is_unit())
    }

    /// Same question answered by enumeration: no nonzero x pairs trivially with every generator.
    pub fn is_perfect_brute(&self) -> bool {
        let k = self.group.rank();
        let gens: Vec<Vec<i64>> =
            (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
        (1..self.group.order()).all(|x| {
            let xv = self.group.element(x);
            gens.iter().any(|g| !self.eval(&xv, g).is_zero())
        })
    }

    pub fn is_isotropic(&self, s: &Subgroup) -> bool {
        s.members().iter().all(|&x| s.members().iter().all(|&y| self.eval_idx(x, y).is_zero()))
    }

    /// S^perp = {x : e(x, s) = 0 for all s in S}.
    pub fn perp(&self, s: &Subgroup) -> Subgroup {
        let members: Vec<usize> = (0..self.group.order())
            .filter(|&x| s.members().iter().all(|&y| self.eval_idx(x, y).is_zero()))
            .collect();
        Subgroup { members }
    }
}

fn bilinear(m: &[Vec<Phase>], x: &[i64], y: &[i64]) -> Phase {
    let mut acc = Phase::zero();
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0 {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if *yj != 0 {
                acc += m[i][j] * (xi * yj);
            }
        }
    }
    frac(acc)
}

/// A central extension 1 -> Q/Z -> G -> K -> 1 presented by a bilinear cocycle c,
/// with group law (s, x)(t, y) = (s + t + c(x, y), x + y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergData {
    pairing: SkewPairing,
    c: Vec<Vec<Phase>>,
}

impl HeisenbergData {
    /// User cocycle matrix; c(x, y) - c(y, x) must equal e(x, y).
    pub fn new(pairing: SkewPairing, c: Vec<Vec<Phase>>) -> Result<Self> {
        let k = pairing.group.rank();
        if c.len() != k || c.iter().any(|r| r.len() != k) {
            return Err(Error::Shape(format!("cocycle matrix must be {k} x {k}")));
        }
        let n = pairing.group.orders();
        let c: Vec<Vec<Phase>> = c.into_iter().map(|r| r.into_iter().map(frac).collect()).collect();
        for i in 0..k {
            for j in 0..k {
                if !frac(c[i][j] * n[i]).is_zero() || !frac(c[i][j] * n[j]).is_zero() {
                    return Err(Error::NotSkew(format!(
                        "cocycle entry ({i}, {j}) is not well defined"
                    )));
                }
                if frac(c[i][j] - c[j][i]) != pairing.e[i][j] {
                    return Err(Error::NotSkew(format!("commutator differs from e at ({i}, {j})")));
                }
            }
        }
        Ok(HeisenbergData { pairing, c })
    }

    /// The strictly upper triangular part of e; for a split pairing this is c((h, a), (h', a')) = a(h').
    pub fn standard(pairing: SkewPairing) -> Self {
        let k = pairing.group.rank();
        let c = (0..k)
            .map(|i| (0..k).map(|j| if i < j { pairing.e[i][j] } else { Phase::zero() }).collect())
            .collect();
        HeisenbergData { pairing, c }
    }

    pub fn pairing(&self) -> &SkewPairing {
        &self.pairing
    }

    pub fn group(&self) -> &FinAb {
        &self.pairing.group
    }

    pub fn cocycle_matrix(&self) -> &[Vec<Phase>] {
        &self.c
    }

    pub fn c(&self, x: &[i64], y: &[i64]) -> Phase {
        bilinear(&self.c, x, y)
    }

    pub fn c_idx(&self, x: usize, y: usize) -> Phase {
        let k = self.group();
        self.c(&k.element(x), &k.element(y))
    }
}

/// A maximal isotropic subgroup: structural for split pairings, greedy search otherwise.
///
/// The search enumerates K, so it refuses groups of order above `bound`.
pub fn maximal_isotropic(p: &SkewPairing, bound: usize) -> Result<Subgroup> {
    let k = &p.group;
    if p.split {
        // the y-coordinates span H* in H x H*
        let gens: Vec<Vec<i64>> = (0..k.rank() / 2)
            .map(|i| (0..k.rank()).map(|j| i64::from(j == 2 * i + 1)).collect())
            .collect();
        return Ok(Subgroup::generated(k, &gens));
    }
    if k.order() > bound {
        return Err(Error::SearchExhausted(bound));
    }
    let mut s = Subgroup::trivial();
    while s.order() * s.order() < k.order() {
        let perp = p.perp(&s);
        let x = perp.members().iter().copied().find(|&x| !s.contains(x)).ok_or_else(|| {
            Error::PairingNotPerfect("isotropic subgroup equals its orthogonal".into())
        })?;
        s = s.with(k, x);
    }
    Ok(s)
}

/// Every isotropic subgroup of K, by breadth-first extension from {0}.
pub fn isotropic_subgroups(p: &SkewPairing, bound: usize) -> Result<Vec<Subgroup>> {
    let k = &p.group;
    if k.order() > bound {
        return Err(Error::SearchExhausted(bound));
    }
    let mut seen: HashSet<Subgroup> = HashSet::new();
    let mut queue = VecDeque::from([Subgroup::trivial()]);
    seen.insert(Subgroup::trivial());
    while let Some(s) = queue.pop_front() {
        let perp = p.perp(&s);
        for &x in perp.members() {
            if s.contains(x) {
                continue;
            }
            let t = s.with(k, x);
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    let mut out: Vec<Subgroup> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// The isotropic subgroups of order |K|^(1/2).
pub fn maximal_isotropic_subgroups(p: &SkewPairing, bound: usize) -> Result<Vec<Subgroup>> {
    let n = p.group.order();
    Ok(isotropic_subgroups(p, bound)?.into_iter().filter(|s| s.order() * s.order() == n).collect())
}

/// A splitting of the extension over an isotropic subgroup I: f with
/// f(x + y) = f(x) + f(y) - c(x, y), so that x -> (-f(x), x) is a homomorphism I -> G.
#[derive(Clone, Debug)]
pub struct IsotropicLift {
    subgroup: Subgroup,
    f: Vec<Option<Phase>>,
}

impl IsotropicLift {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn f(&self, x: usize) -> Phase {
        self.f[x].expect("element of the lifted subgroup")
    }
}

/// Invariant-factor basis of a subgroup: generators h_i of orders m_i > 1 with S = sum <h_i>.
fn subgroup_basis(k: &FinAb, s: &Subgroup) -> Vec<(Vec<i64>, i64)> {
    let r = k.rank();
    if r == 0 || s.order() == 1 {
        return vec![];
    }
    let n = k.orders();
    // a small generating set
    let mut gens: Vec<Vec<i64>> = vec![];
    let mut span = Subgroup::trivial();
    for &x in s.members() {
        if !span.contains(x) {
            gens.push(k.element(x));
            span = Subgroup::generated(k, &gens);
        }
    }
    // lattice L = span(gens) + sum n_i Z e_i, basis B = U^-1 D
    let a = zmat(r, gens.len() + r, |i, c| {
        if c < gens.len() {
            gens[c][i]
        } else if c - gens.len() == i {
            n[i]
        } else {
            0
        }
    });
    let sa = smith_normal_form(&a).expect("integer matrix");
    let d = Mat::diag(BaseRing::Integers, &sa.divisors[..r]);
    let b = &sa.u.inverse().expect("unimodular") * &d;
    // S = L / N with N = B R Z^r, R = B^-1 diag(n)
    let rel = &b.inverse().expect("full rank lattice")
        * &Mat::diag(
            BaseRing::Integers,
            &n.iter().map(|&x| QuadElem::from_int(BaseRing::Integers, x)).collect::<Vec<_>>(),
        );
    let sr = smith_normal_form(&rel).expect("integral relation matrix");
    let h = &b * &sr.u.inverse().expect("unimodular");
    (0..r)
        .filter_map(|i| {
            let m = int_of(&sr.divisors[i]).abs();
            (m > 1).then(|| {
                (k.reduce(&(0..r).map(|row| int_of(h.get(row, i))).collect::<Vec<_>>()), m)
            })
        })
        .collect()
}

/// Computes the splitting over an isotropic subgroup, then verifies it on all pairs.
pub fn lift_isotropic(h: &HeisenbergData, s: &Subgroup) -> Result<IsotropicLift> {
    let p = &h.pairing;
    let k = &p.group;
    if !p.is_isotropic(s) {
        return Err(Error::NotIsotropic);
    }
    let basis = subgroup_basis(k, s);
    let t = basis.len();
    let m: Vec<Vec<Phase>> =
        (0..t).map(|i| (0..t).map(|j| h.c(&basis[i].0, &basis[j].0)).collect()).collect();
    let mut f: Vec<Option<Phase>> = vec![None; k.order()];
    // enumerate coordinate tuples a with 0 <= a_i < m_i
    let total: usize = basis.iter().map(|(_, o)| *o as usize).product();
    for idx in 0..total {
        let mut rest = idx;
        let a: Vec<i64> = basis
            .iter()
            .map(|(_, o)| {
                let v = (rest % *o as usize) as i64;
                rest /= *o as usize;
                v
            })
            .collect();
        let mut x = vec![0i64; k.rank()];
        let mut sval = Phase::zero();
        for i in 0..t {
            for (xc, hc) in x.iter_mut().zip(&basis[i].0) {
                *xc += a[i] * hc;
            }
            for j in i + 1..t {
                sval += m[i][j] * (a[i] * a[j]);
            }
            let o = basis[i].1;
            sval += m[i][i] * Phase::new(a[i] * (a[i] - 1), 2);
            sval -= m[i][i] * Phase::new(a[i] * (o - 1), 2);
        }
        f[k.index_of(&x)] = Some(frac(-sval));
    }
    if s.members().iter().any(|&x| f[x].is_none()) {
        return Err(Error::Invariant("subgroup basis does not span the subgroup".into()));
    }
    for &x in s.members() {
        for &y in s.members() {
            let lhs = f[k.add_idx(x, y)].unwrap();
            let rhs = frac(f[x].unwrap() + f[y].unwrap() - h.c_idx(x, y));
            if lhs != rhs {
                return Err(Error::LiftObstructed);
            }
        }
    }
    Ok(IsotropicLift { subgroup: s.clone(), f })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ph(p: i64, q: i64) -> Phase {
        Phase::new(p, q)
    }

    #[test]
    fn group_indexing_round_trips() {
        let k = FinAb::new(vec![2, 4]).unwrap();
        assert_eq!(k.order(), 8);
        for i in 0..8 {
            assert_eq!(k.index_of(&k.element(i)), i);
        }
        assert!(FinAb::new(vec![4, 2]).is_err());
    }

    #[test]
    fn standard_pairings_are_perfect() {
        for ns in [vec![2], vec![3], vec![2, 2], vec![2, 4], vec![6]] {
            let p = SkewPairing::standard(&ns).unwrap();
            assert!(p.is_perfect());
            assert!(p.is_perfect_brute());
        }
    }

    #[test]
    fn degenerate_pairing_rejected() {
        let k = FinAb::new(vec![2, 2]).unwrap();
        let e = vec![vec![ph(0, 1); 2]; 2];
        assert!(matches!(SkewPairing::new(k.clone(), e), Err(Error::DegeneratePairing(_))));
        let bad = vec![vec![ph(0, 1), ph(1, 3)], vec![ph(2, 3), ph(0, 1)]];
        assert!(matches!(SkewPairing::new(k, bad), Err(Error::NotSkew(_))));
    }

    #[test]
    fn maximal_isotropic_orders() {
        let p = SkewPairing::standard(&[2]).unwrap();
        let i = maximal_isotropic(&p, 64).unwrap();
        // {0} x Z/2
        assert_eq!(i.members(), &[0, 2]);
        let p3 = SkewPairing::standard(&[3]).unwrap();
        assert_eq!(maximal_isotropic(&p3, 64).unwrap().order(), 3);
        let t = SkewPairing::new(FinAb::trivial(), vec![]).unwrap();
        assert_eq!(maximal_isotropic(&t, 64).unwrap().order(), 1);
    }

    #[test]
    fn greedy_search_on_unsplit_presentation() {
        let k = FinAb::new(vec![4, 4]).unwrap();
        let e = vec![vec![ph(0, 1), ph(3, 4)], vec![ph(1, 4), ph(0, 1)]];
        let p = SkewPairing::new(k, e).unwrap();
        let i = maximal_isotropic(&p, 64).unwrap();
        assert_eq!(i.order(), 4);
        assert!(p.is_isotropic(&i));
        assert_eq!(maximal_isotropic(&p, 8), Err(Error::SearchExhausted(8)));
    }

    #[test]
    fn lagrangian_counts() {
        // (Z/2)^4: 15 lines through 0 and 15 isotropic planes
        let p = SkewPairing::standard(&[2, 2]).unwrap();
        let all = isotropic_subgroups(&p, 64).unwrap();
        assert_eq!(all.len(), 31);
        assert_eq!(maximal_isotropic_subgroups(&p, 64).unwrap().len(), 15);
        // (Z/p)^2: p + 1 lines
        let p3 = SkewPairing::standard(&[3]).unwrap();
        assert_eq!(maximal_isotropic_subgroups(&p3, 64).unwrap().len(), 4);
    }

    #[test]
    fn lifts_exist_on_all_lagrangians() {
        for ns in [vec![2], vec![4], vec![2, 2], vec![6]] {
            let p = SkewPairing::standard(&ns).unwrap();
            let h = HeisenbergData::standard(p.clone());
            for s in maximal_isotropic_subgroups(&p, 64).unwrap() {
                lift_isotropic(&h, &s).unwrap();
            }
        }
    }

    #[test]
    fn non_isotropic_lift_rejected() {
        let p = SkewPairing::standard(&[2]).unwrap();
        let h = HeisenbergData::standard(p);
        let k = h.group().clone();
        let all = Subgroup::generated(&k, &[vec![1, 0], vec![0, 1]]);
        assert!(matches!(lift_isotropic(&h, &all), Err(Error::NotIsotropic)));
    }
}
