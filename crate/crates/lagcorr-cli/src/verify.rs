//! Seeded property suites behind `lagcorr verify`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use lagcorr::arith::{exact_sqrt, BaseRing};
use lagcorr::cocycle::{
    ext_mul, iota, lambda, n_coeff_report, obstruction_witness, phi_det, ExtElement,
};
use lagcorr::correspondence::{compose, graph, project_pi, q_degree};
use lagcorr::heisenberg::{
    brute_force_multiplicities, equivalent, hom_degree_twisted, hom_space, isotropic_subgroups,
    lagrangian, lift_isotropic, maximal_isotropic_subgroups, positions, restrict_multiplicities,
    schrodinger, HeisenbergData, SkewPairing,
};
use lagcorr::isogeny::{index, index_std};
use lagcorr::sample;
use lagcorr::{Error, ErrorClass};

pub const SUITES: [&str; 5] = ["cocycle", "correspondence", "index", "heisenberg", "obstruction"];

pub struct Settings {
    pub seed: u64,
    pub samples: usize,
    /// When set, every sample uses this ring; otherwise samples alternate Z and Z[i].
    pub ring: Option<BaseRing>,
    pub shear_bound: u32,
    pub brute_bound: usize,
}

impl Settings {
    fn ring(&self, i: usize) -> BaseRing {
        self.ring.unwrap_or(if i.is_multiple_of(2) {
            BaseRing::Integers
        } else {
            BaseRing::quadratic(-1).expect("supported discriminant")
        })
    }
}

enum Step {
    Pass,
    Skip,
    Fail(String),
}

fn from_err(e: Error) -> Step {
    match e.class() {
        ErrorClass::Invariant => Step::Fail(e.to_string()),
        ErrorClass::Validation => Step::Skip,
    }
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Step {
    if cond {
        Step::Pass
    } else {
        Step::Fail(msg())
    }
}

macro_rules! tryv {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return from_err(e),
        }
    };
}

struct Check {
    name: &'static str,
    passed: usize,
    skipped: usize,
    failures: Vec<String>,
}

impl Check {
    fn run(name: &'static str, n: usize, mut f: impl FnMut(usize) -> Step) -> Check {
        let mut c = Check { name, passed: 0, skipped: 0, failures: vec![] };
        for i in 0..n {
            match f(i) {
                Step::Pass => c.passed += 1,
                Step::Skip => c.skipped += 1,
                Step::Fail(m) => c.failures.push(format!("sample {i}: {m}")),
            }
        }
        c
    }

    fn json(&self, suite: &str) -> Value {
        json!({
            "suite": suite,
            "check": self.name,
            "passed": self.passed,
            "skipped": self.skipped,
            "failed": self.failures.len(),
            "first_failure": self.failures.first(),
        })
    }
}

fn genus(i: usize) -> usize {
    if i % 4 == 3 {
        2
    } else {
        1
    }
}

fn cocycle(s: &Settings, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let lambda_check = Check::run("lambda cocycle identity, lambda <= 0", s.samples, |i| {
        let (ring, g) = (s.ring(i), genus(i));
        let [x, y, z] = [0, 1, 2].map(|_| sample::mixed(rng, ring, g));
        let v = [
            tryv!(lambda(&x, &y)),
            tryv!(lambda(&x.mul(&y), &z)),
            tryv!(lambda(&y, &z)),
            tryv!(lambda(&x, &y.mul(&z))),
        ];
        if v.iter().any(|&l| l > 0) {
            return Step::Fail(format!("positive value in {v:?}"));
        }
        expect(v[0] + v[1] == v[2] + v[3], || format!("{v:?} violates the identity"))
    });
    let n_check = Check::run("two-route N on U0", s.samples, |i| {
        let (ring, g) = (s.ring(i), genus(i));
        let (a, b) = if i % 2 == 0 {
            (sample::u0(rng, ring, g, 3), sample::u0(rng, ring, g, 3))
        } else {
            (sample::rational_u0(rng, ring, g, 2, 4), sample::rational_u0(rng, ring, g, 2, 4))
        };
        if !a.mul(&b).in_u0() {
            return Step::Skip;
        }
        let r = tryv!(n_coeff_report(&a, &b, &tryv!(graph(&a)), &tryv!(graph(&b))));
        match r.q_route_square {
            Some(sq) => expect(sq == &r.n * &r.n && r.n >= BigInt::one(), || {
                format!("N = {}, N^2 = {sq}", r.n)
            }),
            None => Step::Fail("q-route not evaluated".into()),
        }
    });
    let assoc = Check::run("extension product is associative", s.samples.div_ceil(10), |i| {
        let ring = s.ring(i);
        let [x, y, z] = [0, 1, 2].map(|_| ExtElement::lift(sample::symplectic(rng, ring, 1, 2)));
        let left = tryv!(ext_mul(&tryv!(ext_mul(&x, &y)), &z));
        let right = tryv!(ext_mul(&x, &tryv!(ext_mul(&y, &z))));
        expect(left == right, || format!("({}, {}) vs ({}, {})", left.m, left.n, right.m, right.n))
    });
    vec![lambda_check, n_check, assoc]
}

fn correspondence(s: &Settings, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let hom = Check::run("pi homomorphism, q multiplicativity, N_Z integrality", s.samples, |i| {
        let (ring, g) = (s.ring(i), genus(i));
        let (a, b) = if i % 3 == 2 {
            (sample::rational_u0(rng, ring, g, 2, 3), sample::rational_u0(rng, ring, g, 2, 3))
        } else {
            (sample::symplectic(rng, ring, g, 3), sample::symplectic(rng, ring, g, 3))
        };
        let (l, m) = (tryv!(graph(&a)), tryv!(graph(&b)));
        let z = tryv!(compose(&l, &m));
        let expect_pi = tryv!(project_pi(&m)).mul(&tryv!(project_pi(&l)));
        if tryv!(z.pi()) != expect_pi {
            return Step::Fail("pi(M o L) != pi(M) pi(L)".into());
        }
        let q = tryv!(z.q());
        let (ql, qm) = (tryv!(q_degree(&l)), tryv!(q_degree(&m)));
        if q != &ql * &qm || tryv!(z.q_brute()) != q {
            return Step::Fail(format!("q = {q}, q(L) q(M) = {ql} * {qm}"));
        }
        let nz = tryv!(z.n_z());
        expect(&nz * &nz * &z.d_image_degree == z.pi0_order, || format!("N_Z = {nz}"))
    });
    let square = Check::run("q(graph(g)) is a square on SL2(Z)", s.samples, |_| {
        let g = sample::sl2z(rng, 6);
        let q = tryv!(q_degree(&tryv!(graph(&g))));
        expect(exact_sqrt(&q).is_some(), || format!("q = {q}"))
    });
    vec![hom, square]
}

fn index_suite(s: &Settings, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let inv = Check::run("index invariances", s.samples, |i| {
        let (ring, g) = (s.ring(i), 1 + i % 4);
        let h = sample::nondegenerate_hermitian(rng, ring, g, 4);
        let idx = tryv!(index_std(&h));
        let n = rng.gen_range(2..=9);
        if tryv!(index_std(&h.scale(&BigRational::from_integer(n.into())))) != idx {
            return Step::Fail(format!("index({n}H) differs"));
        }
        let psi = sample::invertible(rng, ring, g, 2);
        if tryv!(index_std(&tryv!(h.pullback(&psi)))) != idx {
            return Step::Fail("index of the pullback differs".into());
        }
        let h0 = sample::positive_definite(rng, ring, g, 2);
        if tryv!(index(&h, &h0)) != idx {
            return Step::Fail("index depends on the reference".into());
        }
        let neg = tryv!(index_std(&h.neg()));
        expect(idx + neg == g, || format!("index(H) + index(-H) = {} != {g}", idx + neg))
    });
    vec![inv]
}

fn heisenberg(s: &Settings, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut cases: Vec<Vec<i64>> = (2..=6).map(|n| vec![n]).collect();
    cases.push(vec![2, 2]);
    let svn = Check::run("Stone-von Neumann on (Z/n)^2 and (Z/2)^4", cases.len(), |i| {
        let h = HeisenbergData::standard(tryv!(SkewPairing::standard(&cases[i])));
        let mut reps = vec![];
        for sub in tryv!(maximal_isotropic_subgroups(h.pairing(), s.brute_bound)) {
            reps.push(tryv!(schrodinger(&h, &tryv!(lift_isotropic(&h, &sub)))));
        }
        let order = h.group().order();
        let ok = reps.iter().all(|r| r.dim() * r.dim() == order && equivalent(r, &reps[0]));
        expect(ok && !reps.is_empty(), || format!("{:?}: models disagree", cases[i]))
    });
    let mult_cases = [vec![2, 2], vec![4]];
    let mult = Check::run("multiplicity formula vs brute force", mult_cases.len(), |i| {
        let h = HeisenbergData::standard(tryv!(SkewPairing::standard(&mult_cases[i])));
        for c in tryv!(isotropic_subgroups(h.pairing(), s.brute_bound)) {
            let f = tryv!(restrict_multiplicities(&h, &c, s.brute_bound));
            let b = tryv!(brute_force_multiplicities(&h, &c, s.brute_bound));
            if f != b {
                return Step::Fail(format!("{:?}: C = {:?}", mult_cases[i], c.members()));
            }
        }
        Step::Pass
    });
    let hom = Check::run("Hom spaces: dim^2 = |K|, Serre duality, twisted route", s.samples, |i| {
        let (ring, g) = (s.ring(i), 1 + (i % 3 == 2) as usize);
        let p = positions(ring, g);
        let mut lag = || {
            let m = sample::integral_symplectic(rng, ring, g, 4);
            lagrangian(ring, g, m.matrix() * p.j())
        };
        let (y, z) = (tryv!(lag()), tryv!(lag()));
        let h = match hom_space(&y, &z) {
            Ok(h) => h,
            Err(Error::NotTransversal) => return Step::Skip,
            Err(e) => return from_err(e),
        };
        if &h.dimension * &h.dimension != h.intersection_order {
            return Step::Fail(format!("dim {} but |K| = {}", h.dimension, h.intersection_order));
        }
        let back = tryv!(hom_space(&z, &y));
        if h.degree + back.degree != g {
            return Step::Fail(format!("degrees {} + {} != {g}", h.degree, back.degree));
        }
        let (tw, _) = tryv!(hom_degree_twisted(&y, &z, s.shear_bound));
        expect(tw == h.degree, || format!("twisted degree {tw} vs {}", h.degree))
    });
    vec![svn, mult, hom]
}

fn obstruction(s: &Settings, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let discs = [-2i64, -7, -11];
    let wit = Check::run("q-bar(g_sqrtD) nontrivial, equal to Nm(phi) class", discs.len(), |i| {
        let w = tryv!(obstruction_witness(discs[i]));
        expect(w.nontrivial && w.q_bar == w.nm_phi_class, || format!("D = {}", discs[i]))
    });
    let all = [-1i64, -2, -3, -7, -11];
    let det = Check::run("det(g) = iota(phi(g))", s.samples, |i| {
        let ring = match s.ring {
            Some(r) if r.is_cm() => r,
            _ => BaseRing::quadratic(all[i % all.len()]).expect("supported discriminant"),
        };
        let g = sample::symplectic(rng, ring, 1 + (i % 3 == 2) as usize, 3);
        let phi = tryv!(phi_det(&g));
        expect(tryv!(iota(&phi)) == g.det(), || format!("det {}", g.det()))
    });
    vec![wit, det]
}

/// Run one suite (or "all"); returns the report and whether every check passed.
pub fn run(suite: &str, s: &Settings) -> std::result::Result<(Value, bool), Error> {
    let names: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        x if SUITES.contains(&x) => vec![x],
        x => {
            return Err(Error::Shape(format!(
                "unknown suite '{x}': expected one of {}, all",
                SUITES.join(", ")
            )))
        }
    };
    let mut rows = vec![];
    let mut ok = true;
    for name in names {
        let mut rng = sample::rng(s.seed);
        let checks = match name {
            "cocycle" => cocycle(s, &mut rng),
            "correspondence" => correspondence(s, &mut rng),
            "index" => index_suite(s, &mut rng),
            "heisenberg" => heisenberg(s, &mut rng),
            _ => obstruction(s, &mut rng),
        };
        ok &= checks.iter().all(|c| c.failures.is_empty());
        rows.extend(checks.iter().map(|c| c.json(name)));
    }
    let report = json!({
        "seed": s.seed,
        "samples": s.samples,
        "passed": ok,
        "rows": rows,
    });
    Ok((report, ok))
}
