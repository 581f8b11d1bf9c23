use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use lagcorr::isogeny::{
    degree, index, index_std, inertia, rosati_transpose, HermitianMat, IsogenyHom,
};
use lagcorr::sample;

mod common;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn degree_is_multiplicative(seed in any::<u64>(), ri in 0usize..2, g in 1usize..=3) {
        let ring = common::rings()[ri];
        let mut rng = sample::rng(seed);
        let f = IsogenyHom::from_matrix(sample::invertible(&mut rng, ring, g, 3));
        let h = IsogenyHom::from_matrix(sample::invertible(&mut rng, ring, g, 3));
        let fh = f.compose(&h).unwrap();
        prop_assert_eq!(degree(&fh).unwrap(), degree(&f).unwrap() * degree(&h).unwrap());
        prop_assert_eq!(degree(&rosati_transpose(&f)).unwrap(), degree(&f).unwrap());
    }

    #[test]
    fn index_invariances(seed in any::<u64>(), ri in 0usize..2, g in 1usize..=4, n in 1i64..=5) {
        let ring = common::rings()[ri];
        let mut rng = sample::rng(seed);
        let h = sample::nondegenerate_hermitian(&mut rng, ring, g, 4);
        let i = index_std(&h).unwrap();
        prop_assert_eq!(index_std(&h.scale(&BigRational::from_integer(BigInt::from(n)))).unwrap(), i);
        let psi = sample::invertible(&mut rng, ring, g, 2);
        prop_assert_eq!(index_std(&h.pullback(&psi).unwrap()).unwrap(), i);
        let h0 = sample::positive_definite(&mut rng, ring, g, 2);
        prop_assert_eq!(index(&h, &h0).unwrap(), i);
        prop_assert_eq!(i + index_std(&h.neg()).unwrap(), g);
        let (p, m, z) = inertia(&h).unwrap();
        prop_assert_eq!((p, m, z), (g - i, i, 0));
    }

    #[test]
    fn inertia_counts_degenerate_directions(seed in any::<u64>(), ri in 0usize..2, g in 2usize..=4) {
        let ring = common::rings()[ri];
        let mut rng = sample::rng(seed);
        let h = sample::nondegenerate_hermitian(&mut rng, ring, g - 1, 3);
        // h plus a zero direction, then mixed by an invertible change of basis
        let padded = lagcorr::linalg::Mat::block_diag(h.matrix(), &lagcorr::linalg::Mat::zeros(ring, 1, 1));
        let psi = sample::invertible(&mut rng, ring, g, 2);
        let hh = HermitianMat::new(padded).unwrap().pullback(&psi).unwrap();
        let (p, m, z) = inertia(&hh).unwrap();
        prop_assert_eq!(z, 1);
        prop_assert_eq!(m, index_std(&h).unwrap());
        prop_assert_eq!(p + m + z, g);
    }
}
