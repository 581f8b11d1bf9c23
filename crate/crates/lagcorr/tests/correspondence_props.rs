use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use lagcorr::arith::exact_sqrt;
use lagcorr::correspondence::{
    compose, connected_image, graph, is_lagrangian, project_pi, q_degree, transpose,
    ParamCorrespondence,
};
use lagcorr::sample;

mod common;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn graphs_are_lagrangian(seed in any::<u64>(), ri in 0usize..2, g in 1usize..=2) {
        let ring = common::rings()[ri];
        let mut rng = sample::rng(seed);
        let x = sample::symplectic(&mut rng, ring, g, 4);
        let l = graph(&x).unwrap();
        prop_assert!(is_lagrangian(&l));
        prop_assert_eq!(project_pi(&l).unwrap(), x.clone());
        prop_assert_eq!(project_pi(&transpose(&l)).unwrap(), x.inverse());
    }

    #[test]
    fn pi_is_a_homomorphism_and_q_multiplies(seed in any::<u64>(), ri in 0usize..2, g in 1usize..=2) {
        let ring = common::rings()[ri];
        let mut rng = sample::rng(seed);
        let a = sample::symplectic(&mut rng, ring, g, 3);
        let b = sample::symplectic(&mut rng, ring, g, 3);
        let (l, m) = (graph(&a).unwrap(), graph(&b).unwrap());
        let z = compose(&l, &m).unwrap();
        prop_assert_eq!(z.pi().unwrap(), b.mul(&a));
        let q = z.q().unwrap();
        prop_assert_eq!(q.clone(), q_degree(&l).unwrap() * q_degree(&m).unwrap());
        prop_assert_eq!(z.q_brute().unwrap(), q);
        prop_assert!(z.n_z().is_ok());
        prop_assert!(z.n_total().unwrap() >= BigInt::one());
    }

    #[test]
    fn q_is_a_square_on_sl2z(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::sl2z(&mut rng, 6);
        let q = q_degree(&graph(&g).unwrap()).unwrap();
        prop_assert!(exact_sqrt(&q).is_some(), "q = {}", q);
    }

    #[test]
    fn connected_image_is_saturated(seed in any::<u64>(), ri in 0usize..2) {
        let ring = common::rings()[ri];
        let mut rng = sample::rng(seed);
        let x = sample::symplectic(&mut rng, ring, 1, 4);
        let l = graph(&x).unwrap();
        let (img, d) = connected_image(&l).unwrap();
        prop_assert!(img.kernel().pi0_order.is_one());
        prop_assert!(!d.is_zero());
        prop_assert_eq!(project_pi(&img).unwrap(), x);
        // q only depends on the image
        prop_assert_eq!(q_degree(&img).unwrap(), q_degree(&l).unwrap());
        let twice = ParamCorrespondence::new(l.source, l.target, l.j().scale_int(2)).unwrap();
        prop_assert_eq!(q_degree(&twice).unwrap(), q_degree(&l).unwrap());
    }
}
