use proptest::prelude::*;

use lagcorr::arith::BaseRing;
use lagcorr::linalg::{kernel_lattice, saturate, smith_normal_form, Mat};
use lagcorr::sample;

mod common;

fn random_mat(seed: u64, ring: BaseRing, rows: usize, cols: usize) -> Mat {
    let mut rng = sample::rng(seed);
    Mat::from_fn(ring, rows, cols, |_, _| sample::quad(&mut rng, ring, 4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn smith_form_contract(seed in any::<u64>(), ri in 0usize..2, rows in 1usize..=4, cols in 1usize..=4) {
        let ring = common::rings()[ri];
        let m = random_mat(seed, ring, rows, cols);
        let s = smith_normal_form(&m).unwrap();
        let d = &(&s.u * &m) * &s.v;
        for i in 0..rows {
            for j in 0..cols {
                let expect = if i == j && i < s.rank { s.divisors[i].clone() } else { ring.zero() };
                prop_assert_eq!(d.get(i, j).clone(), expect);
            }
        }
        prop_assert!(s.u.det().unwrap().is_unit());
        prop_assert!(s.v.det().unwrap().is_unit());
        prop_assert_eq!(s.rank, m.rank());
        for w in s.divisors.windows(2) {
            prop_assert!(w[1].divisible_by(&w[0]));
        }
    }

    #[test]
    fn kernel_lattice_is_kernel(seed in any::<u64>(), ri in 0usize..2, rows in 1usize..=3, cols in 2usize..=5) {
        let ring = common::rings()[ri];
        let m = random_mat(seed, ring, rows, cols);
        let k = kernel_lattice(&m).unwrap();
        prop_assert_eq!(k.cols(), cols - m.rank());
        prop_assert!((&m * &k).is_zero());
        // saturated: the kernel basis extends to a unimodular matrix, so its own saturation has index 1
        if k.cols() > 0 {
            prop_assert!(saturate(&k).unwrap().1 == 1.into());
        }
    }

    #[test]
    fn saturation_index_matches_elementary_divisors(seed in any::<u64>(), ri in 0usize..2) {
        let ring = common::rings()[ri];
        let m = random_mat(seed, ring, 4, 2);
        prop_assume!(m.rank() == 2);
        let (sat, index) = saturate(&m).unwrap();
        // m = sat * T with T integral of norm-determinant equal to the index
        let s = smith_normal_form(&sat.hstack(&m)).unwrap();
        prop_assert_eq!(s.rank, 2);
        prop_assert!(s.divisors.iter().all(|d| d.is_unit()));
        let t = smith_normal_form(&m).unwrap();
        let mut prod = num_bigint::BigInt::from(1);
        for d in &t.divisors {
            prod *= lagcorr::arith::residue_order(d).unwrap();
        }
        prop_assert_eq!(index, prod);
    }
}
