use concom_core::concomitants::{middle_trace, reconstruct_v4, trace2};
use concom_core::scalar::gaussian;
use concom_core::tensor::dual2;
use concom_core::verify::irreducibility_report;
use concom_core::*;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-12i128..=12, 1i128..=9).prop_map(|(n, d)| Rational::new(n, d))
}

fn gaussian_rational() -> impl Strategy<Value = GaussianRational> {
    (rational(), rational()).prop_map(|(re, im)| gaussian(re, im))
}

fn bivector() -> impl Strategy<Value = Bivector<GaussianRational>> {
    (proptest::array::uniform3(gaussian_rational()), proptest::array::uniform3(gaussian_rational()))
        .prop_map(|(e, b)| Bivector::new(e, b))
}

fn real_bivector() -> impl Strategy<Value = Bivector<GaussianRational>> {
    (proptest::array::uniform3(rational()), proptest::array::uniform3(rational()))
        .prop_map(|(e, b)| Bivector::new(e.map(|x| gaussian(x, 0.into())), b.map(|x| gaussian(x, 0.into()))))
}

/// Unit Gaussian rationals from Pythagorean triples.
fn unit_phase() -> impl Strategy<Value = GaussianRational> {
    (1i128..6, 1i128..6, 0usize..4).prop_filter_map("m > n", |(m, n, quadrant)| {
        (m > n).then(|| {
            let h = m * m + n * n;
            let z = gaussian(Rational::new(m * m - n * n, h), Rational::new(2 * m * n, h));
            (0..quadrant).fold(z, |acc, _| acc * GaussianRational::i())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pipeline_equals_three_vector_oracle(f in bivector()) {
        prop_assert_eq!(compute(&f).first_mismatch(&eb_oracle(&f), 0.0), None);
    }

    #[test]
    fn concomitants_are_phase_invariant(f in bivector(), z in unit_phase()) {
        let rotated = f.phase_rotate(z).unwrap();
        prop_assert_eq!(compute(&f).first_mismatch(&compute(&rotated), 0.0), None);
    }

    #[test]
    fn dual_is_the_three_vector_swap(f in bivector()) {
        prop_assert_eq!(f.dual(), f.duality_transform());
    }

    #[test]
    fn hermitian_exchange_and_pair_antisymmetry(f in bivector()) {
        let set = compute(&f);
        for t in [&set.t_prime, &set.q_prime, &set.d_prime, &set.x_prime, &set.d4, &set.x4] {
            prop_assert_eq!(&t.permuted(&[2, 3, 0, 1]).unwrap().conj(), t);
            prop_assert_eq!(&t.permuted(&[1, 0, 2, 3]).unwrap().neg(), t);
        }
    }

    #[test]
    fn valence2_traces_and_reality(f in bivector()) {
        let set = compute(&f);
        for t in [&set.t2, &set.q2, &set.d2, &set.x2] {
            prop_assert!(trace2(t).unwrap().is_zero());
            prop_assert!(t.is_real(0.0));
        }
        prop_assert_eq!(middle_trace(&set.t_prime).unwrap(), set.t2.clone());
    }

    #[test]
    fn irreducible_tensors_certified(f in bivector()) {
        let set = compute(&f);
        prop_assert!(irreducibility_report(&set.d4, 0.0).unwrap().certified);
        prop_assert!(irreducibility_report(&set.x4, 0.0).unwrap().certified);
    }

    #[test]
    fn mutual_duality(f in bivector()) {
        let set = compute(&f);
        prop_assert_eq!(dual2(&set.d2).unwrap(), set.x2.clone());
        prop_assert_eq!(dual2(&set.x2).unwrap(), set.d2.neg());
        prop_assert_eq!(dual2(&set.d4).unwrap(), set.x4.clone());
        prop_assert!(dual2(&set.t2).unwrap().is_zero(0.0));
    }

    #[test]
    fn reconstruction_is_exact(f in bivector()) {
        let set = compute(&f);
        prop_assert_eq!(reconstruct_v4(Concomitant::T2, &set.t2, &set.q2).unwrap().tensor, set.t_prime.clone());
        prop_assert_eq!(reconstruct_v4(Concomitant::Q2, &set.t2, &set.q2).unwrap().tensor, set.q_prime.clone());
    }

    #[test]
    fn real_fields_degenerate(f in real_bivector()) {
        let set = compute(&f);
        prop_assert!(set.q2.is_zero(0.0) && set.d2.is_zero(0.0) && set.x2.is_zero(0.0));
        let r = real_reference(&f).unwrap();
        prop_assert_eq!(r.stress, set.t2);
        prop_assert_eq!((r.lplus, r.lminus), (set.scalars.lplus, set.scalars.lminus));
    }

    #[test]
    fn energy_density_is_nonnegative(f in bivector()) {
        let t00 = compute(&f).t2[[0, 0]];
        prop_assert!(t00.re >= 0.into());
    }

    #[test]
    fn lorentz_covariance_float(seed in any::<u64>(), speed in 0.0f64..0.9, angle in -3.0f64..3.0) {
        let f = random_bivector::<Complex64>(seed);
        let lambda = LorentzTransform::boost([speed * 0.6, 0.0, speed * 0.8]).unwrap()
            .compose(&LorentzTransform::rotation([1.0, 2.0, 2.0], angle).unwrap());
        let (before, after) = (compute(&f), compute(&lambda.apply_bivector(&f)));
        for tag in [Concomitant::T2, Concomitant::Q2, Concomitant::D2, Concomitant::X4] {
            let moved = lambda.apply_tensor(before.tensor(tag).unwrap());
            prop_assert!(moved.approx_eq(after.tensor(tag).unwrap(), 1e-9));
        }
    }
}
