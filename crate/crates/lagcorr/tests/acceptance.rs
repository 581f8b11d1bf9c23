//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use lagcorr::arith::{exact_sqrt, squarefree_part, BaseRing, QuadElem};
use lagcorr::cocycle::{
    iota, lambda, lambda_report, n_coeff_report, obstruction_witness, phi_det, LambdaRoute,
    SquareClass, DEFAULT_SHEAR_BOUND,
};
use lagcorr::correspondence::{
    compose, ga_model, graph, project_pi, q_degree, transpose, SymplecticAuto,
};
use lagcorr::heisenberg::{
    brute_force_multiplicities, equivalent, hom_space, is_irreducible_weight1, isotropic_subgroups,
    lift_isotropic, maximal_isotropic_subgroups, polarization_graph, positions,
    restrict_multiplicities, schrodinger, HeisenbergData, SkewPairing, DEFAULT_BRUTE_BOUND,
};
use lagcorr::isogeny::{index, index_std, HermitianMat};
use lagcorr::linalg::Mat;
use lagcorr::sample;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn zz() -> BaseRing {
    BaseRing::Integers
}

fn gauss() -> BaseRing {
    BaseRing::quadratic(-1).unwrap()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_cm_degree() -> Outcome {
    let ring = gauss();
    let a = QuadElem::from_ints(ring, 1, 1);
    let q = q_degree(&ga_model(&a, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let nm = a.norm();
    check(q == BigInt::from(2) && BigRational::from_integer(q.clone()) == nm, || {
        format!("q = {q}, Nm(a) = {nm}")
    })?;
    Ok(format!("q(L(g_a)) = {q} = Nm(1+i)"))
}

fn c2_square_on_sl2() -> Outcome {
    let mut rng = sample::rng(2);
    let mut nontrivial = 0;
    for i in 0..100 {
        let g = sample::sl2z(&mut rng, 6);
        let q = q_degree(&graph(&g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        check(exact_sqrt(&q).is_some(), || format!("sample {i}: q = {q} for {g:?}"))?;
        if q > BigInt::one() {
            nontrivial += 1;
        }
    }
    Ok(format!("100 samples, all squares ({nontrivial} with q > 1)"))
}

fn c3_lambda_cocycle() -> Outcome {
    let mut evaluated = 0;
    let mut outside_u0 = 0;
    for ring in [zz(), gauss()] {
        let mut rng = sample::rng(3);
        for i in 0..200 {
            let g = if i % 4 == 3 { 2 } else { 1 };
            let [x, y, z] = [0, 1, 2].map(|_| sample::mixed(&mut rng, ring, g));
            let pairs = [(&x, &y), (&x.mul(&y), &z), (&y, &z), (&x, &y.mul(&z))];
            let mut v = [0i64; 4];
            for (k, (a, b)) in pairs.iter().enumerate() {
                v[k] = lambda(a, b).map_err(|e| format!("{ring:?} triple {i}: {e}"))?;
                check(v[k] <= 0, || format!("{ring:?} triple {i}: lambda = {} > 0", v[k]))?;
                if !(a.in_u0() && b.in_u0()) {
                    outside_u0 += 1;
                }
            }
            evaluated += 4;
            check(v[0] + v[1] == v[2] + v[3], || {
                format!("{ring:?} triple {i}: {} + {} != {} + {}", v[0], v[1], v[2], v[3])
            })?;
        }
    }
    Ok(format!(
        "400 triples (200 per ring), 0 violations, {evaluated} pairs <= 0 ({outside_u0} outside U0 x U0)"
    ))
}

fn c4_fourier_square() -> Outcome {
    let s = SymplecticAuto::fourier(zz(), 1);
    let r = lambda_report(&s, &s, DEFAULT_SHEAR_BOUND).map_err(|e| e.to_string())?;
    // S = w (w^-1 S) with w = f(1): the cocycle identity evaluates lambda(S, S) through other pairs
    let w = SymplecticAuto::shear(zz(), 1, 1);
    let u = w.inverse().mul(&s);
    let l = |a: &SymplecticAuto, b: &SymplecticAuto| lambda(a, b).map_err(|e| e.to_string());
    let reduced = l(&s, &w)? + l(&s.mul(&w), &u)? - l(&w, &u)?;
    // Fourier-Mukai: S^ o S = (-1)^* [-g], a shift by -g
    let oracle = -1;
    check(r.value == oracle && reduced == oracle, || {
        format!("lambda = {}, reduced = {reduced}, oracle = {oracle}", r.value)
    })?;
    check(r.route == LambdaRoute::DegenerateFibre, || format!("route {:?}", r.route))?;
    Ok(format!(
        "lambda(S, S) = {} (degenerate fibre), via f(1)-reduction {reduced}, oracle -g = -1",
        r.value
    ))
}

fn c5_two_route_n() -> Outcome {
    let mut rng = sample::rng(5);
    let mut done = 0;
    let mut max_n = BigInt::one();
    let mut nontrivial = 0;
    let mut tries = 0;
    while done < 100 {
        tries += 1;
        if tries > 5000 {
            return Err(format!("only {done} pairs with invertible b-blocks"));
        }
        let ring = if done % 2 == 0 { zz() } else { gauss() };
        let g = if done % 5 == 4 { 2 } else { 1 };
        let (a, b) = if tries % 2 == 0 {
            (sample::u0(&mut rng, ring, g, 3), sample::u0(&mut rng, ring, g, 3))
        } else {
            (
                sample::rational_u0(&mut rng, ring, g, 2, 4),
                sample::rational_u0(&mut rng, ring, g, 2, 4),
            )
        };
        if !a.mul(&b).in_u0() {
            continue;
        }
        let la = graph(&a).map_err(|e| e.to_string())?;
        let lb = graph(&b).map_err(|e| e.to_string())?;
        let r = n_coeff_report(&a, &b, &la, &lb).map_err(|e| format!("pair {done}: {e}"))?;
        let sq = r.q_route_square.ok_or_else(|| format!("pair {done}: q-route not evaluated"))?;
        check(sq == &r.n * &r.n && r.n >= BigInt::one(), || {
            format!("pair {done}: N = {}, q-route N^2 = {sq}", r.n)
        })?;
        if r.n > BigInt::one() {
            nontrivial += 1;
        }
        if r.n > max_n {
            max_n = r.n.clone();
        }
        done += 1;
    }
    Ok(format!("100 pairs agree, N positive integer ({nontrivial} with N > 1, max N = {max_n})"))
}

fn c6_pi_hom_and_q() -> Outcome {
    let mut rng = sample::rng(6);
    for i in 0..100 {
        let ring = if i % 2 == 0 { zz() } else { gauss() };
        let g = if i % 4 == 3 { 2 } else { 1 };
        let (a, b) = if i % 3 == 2 {
            (
                sample::rational_u0(&mut rng, ring, g, 2, 3),
                sample::rational_u0(&mut rng, ring, g, 2, 3),
            )
        } else {
            (sample::symplectic(&mut rng, ring, g, 3), sample::symplectic(&mut rng, ring, g, 3))
        };
        let l = graph(&a).map_err(|e| e.to_string())?;
        let m = graph(&b).map_err(|e| e.to_string())?;
        let z = compose(&l, &m).map_err(|e| format!("pair {i}: {e}"))?;
        let pi = z.pi().map_err(|e| e.to_string())?;
        let expect = project_pi(&m).unwrap().mul(&project_pi(&l).unwrap());
        check(pi == expect, || format!("pair {i}: pi(M o L) = {pi:?}, expected {expect:?}"))?;
        let q = z.q().map_err(|e| e.to_string())?;
        let ql = q_degree(&l).unwrap();
        let qm = q_degree(&m).unwrap();
        check(q == &ql * &qm, || format!("pair {i}: q = {q}, q(L) q(M) = {ql} * {qm}"))?;
        let qb = z.q_brute().map_err(|e| e.to_string())?;
        check(qb == q, || format!("pair {i}: brute-force q = {qb}, q = {q}"))?;
    }
    Ok("100 pairs: pi(M o L) = pi(M) pi(L), q(M o L) = q(L) q(M) = brute-force count".into())
}

fn c7_index_suite() -> Outcome {
    let mut rng = sample::rng(7);
    let e = |x: lagcorr::Error| x.to_string();
    for i in 0..100 {
        let ring = if i % 2 == 0 { zz() } else { gauss() };
        let g = 1 + i % 4;
        let h = sample::nondegenerate_hermitian(&mut rng, ring, g, 4);
        let idx = index_std(&h).map_err(e)?;
        for n in [2i64, 3, 7] {
            let hn = h.scale(&BigRational::from_integer(BigInt::from(n)));
            check(index_std(&hn).map_err(e)? == idx, || format!("sample {i}: index(nH) differs"))?;
        }
        let psi = sample::invertible(&mut rng, ring, g, 2);
        let pulled = h.pullback(&psi).map_err(e)?;
        check(index_std(&pulled).map_err(e)? == idx, || {
            format!("sample {i}: index(psi^ H psi) differs")
        })?;
        let neg = index_std(&h.neg()).map_err(e)?;
        check(idx + neg == g, || format!("sample {i}: {idx} + {neg} != {g}"))?;
        if i < 50 {
            let h0 = sample::positive_definite(&mut rng, ring, g, 2);
            check(index(&h, &h0).map_err(e)? == idx, || {
                format!("sample {i}: reference dependence")
            })?;
        }
    }
    Ok("100 forms (sizes 1-4, Z and Z[i]): scaling, pullback, index(H) + index(-H) = size; 50 references".into())
}

fn c8_stone_von_neumann() -> Outcome {
    let mut cases: Vec<Vec<i64>> = (1..=6).map(|n| vec![n]).collect();
    cases.push(vec![2, 2]);
    let mut summary = vec![];
    for ns in cases {
        let p = SkewPairing::standard(&ns).map_err(|e| e.to_string())?;
        let h = HeisenbergData::standard(p);
        let order = h.group().order();
        let lagr = maximal_isotropic_subgroups(h.pairing(), DEFAULT_BRUTE_BOUND)
            .map_err(|e| e.to_string())?;
        let mut reps = vec![];
        for s in &lagr {
            let lift = lift_isotropic(&h, s).map_err(|e| e.to_string())?;
            let rho = schrodinger(&h, &lift).map_err(|e| e.to_string())?;
            check(rho.dim() * rho.dim() == order, || {
                format!("{ns:?}: dimension {} for |K| = {order}", rho.dim())
            })?;
            check(is_irreducible_weight1(&rho, &h).map_err(|e| e.to_string())?, || {
                format!("{ns:?}: reducible induced representation")
            })?;
            reps.push(rho);
        }
        for a in 0..reps.len() {
            for b in a + 1..reps.len() {
                check(equivalent(&reps[a], &reps[b]), || {
                    format!("{ns:?}: models {a} and {b} differ")
                })?;
            }
        }
        summary.push(format!("|K|={order}:{}", lagr.len()));
    }
    Ok(format!("all models pairwise equivalent, dim = |K|^(1/2) [{}]", summary.join(" ")))
}

fn c9_multiplicities() -> Outcome {
    let mut total = 0;
    for ns in [vec![2, 2], vec![4]] {
        let h = HeisenbergData::standard(SkewPairing::standard(&ns).map_err(|e| e.to_string())?);
        let subs =
            isotropic_subgroups(h.pairing(), DEFAULT_BRUTE_BOUND).map_err(|e| e.to_string())?;
        for c in subs {
            let f =
                restrict_multiplicities(&h, &c, DEFAULT_BRUTE_BOUND).map_err(|e| e.to_string())?;
            let b = brute_force_multiplicities(&h, &c, DEFAULT_BRUTE_BOUND)
                .map_err(|e| e.to_string())?;
            check(f == b, || {
                format!("{ns:?}, C = {:?}: formula {f:?} vs brute force {b:?}", c.members())
            })?;
            total += 1;
        }
    }
    Ok(format!("{total} isotropic subgroups of (Z/2)^4 and (Z/4)^2 agree"))
}

fn c10_hom_space() -> Outcome {
    let y = positions(zz(), 1);
    let mut parts = vec![];
    for d in [1i64, 2, 3, 5] {
        for (sign, expect_deg) in [(1i64, 0usize), (-1, 1)] {
            let phi = HermitianMat::new(Mat::scalar(zz(), 1, &QuadElem::from_int(zz(), sign * d)))
                .map_err(|e| e.to_string())?;
            let z = polarization_graph(&phi).map_err(|e| e.to_string())?;
            let h = hom_space(&y, &z).map_err(|e| e.to_string())?;
            check(h.degree == expect_deg && h.dimension == BigInt::from(d), || {
                format!("d = {}: got ({}, {})", sign * d, h.degree, h.dimension)
            })?;
            parts.push(format!("{}:({},{})", sign * d, h.degree, h.dimension));
        }
    }
    Ok(parts.join(" "))
}

fn c11_obstruction() -> Outcome {
    let mut parts = vec![];
    for d in [-2i64, -7, -11] {
        let w = obstruction_witness(d).map_err(|e| e.to_string())?;
        let nm = w.phi.norm();
        let sf = squarefree_part(&(nm.numer() * nm.denom()));
        check(
            w.nontrivial && w.q_bar == w.nm_phi_class && w.q_bar == SquareClass(sf.clone()),
            || {
                format!(
                    "D = {d}: q-bar {:?}, Nm(phi) class {:?}, squarefree {sf}",
                    w.q_bar, w.nm_phi_class
                )
            },
        )?;
        parts.push(format!("D={d}: q-bar={}", w.q_bar.0));
    }
    let mut rng = sample::rng(11);
    let discs = [-1i64, -2, -3, -7, -11];
    for i in 0..50 {
        let ring = BaseRing::quadratic(discs[i % 5]).unwrap();
        let g = sample::symplectic(&mut rng, ring, 1 + (i % 3 == 2) as usize, 3);
        let phi = phi_det(&g).map_err(|e| format!("sample {i}: {e}"))?;
        let det = g.det();
        check(iota(&phi).map_err(|e| e.to_string())? == det, || {
            format!("sample {i}: det {det} != iota(phi)")
        })?;
    }
    Ok(format!("{}; det(g) = iota(phi(g)) on 50 CM samples", parts.join(", ")))
}

fn c12_nz_integrality() -> Outcome {
    let mut rng = sample::rng(12);
    let mut nontrivial = 0;
    for i in 0..100 {
        let ring = if i % 2 == 0 { zz() } else { gauss() };
        let (l, m) = if i % 10 == 9 {
            // a model and its transpose: disconnected fibre product
            let a = sample::nonzero_quad(&mut rng, ring, 2);
            let la = ga_model(&a, 1).map_err(|e| e.to_string())?;
            (la.clone(), transpose(&la))
        } else if i % 2 == 1 {
            let a = sample::rational_u0(&mut rng, ring, 1, 2, 4);
            let b = sample::rational_u0(&mut rng, ring, 1, 2, 4);
            (graph(&a).unwrap(), graph(&b).unwrap())
        } else {
            let a = sample::symplectic(&mut rng, ring, 1, 3);
            let b = sample::symplectic(&mut rng, ring, 1, 3);
            (graph(&a).unwrap(), graph(&b).unwrap())
        };
        let z = compose(&l, &m).map_err(|e| format!("composition {i}: {e}"))?;
        let nz = z.n_z().map_err(|e| format!("composition {i}: {e}"))?;
        check(&nz * &nz * &z.d_image_degree == z.pi0_order && !nz.is_zero(), || {
            format!("composition {i}: N_Z = {nz}")
        })?;
        if z.pi0_order > BigInt::one() {
            nontrivial += 1;
        }
    }
    Ok(format!("100 compositions, N_Z integral ({nontrivial} with |pi0(Z)| > 1)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("CM degree value q(L(g_a)) = Nm(a)", c1_cm_degree),
        ("q(graph(g)) is a square on SL2(Z)", c2_square_on_sl2),
        ("lambda cocycle identity and lambda <= 0", c3_lambda_cocycle),
        ("Fourier square lambda(S, S) = -1", c4_fourier_square),
        ("two-route N agreement", c5_two_route_n),
        ("pi homomorphism and q multiplicativity", c6_pi_hom_and_q),
        ("index suite", c7_index_suite),
        ("Stone-von Neumann at desk scale", c8_stone_von_neumann),
        ("multiplicity formula vs brute force", c9_multiplicities),
        ("Hom-space classical oracle", c10_hom_space),
        ("CM obstruction witness", c11_obstruction),
        ("N_Z integrality", c12_nz_integrality),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({ms} ms): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({ms} ms): {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
